"""Command-line pipeline and artifact determinism."""
import json
import subprocess
import sys

import pytest

from barriers.cli import main

RUN = [sys.executable, "-m", "barriers.cli"]


def run_cli(args):
    return main(list(args))


def test_generate_solve_verify_render(tmp_path, capsys):
    inst = tmp_path / "inst.json"
    sol = tmp_path / "sol.json"
    svg = tmp_path / "out.svg"
    assert run_cli(["generate", "--kind", "random-points", "--sets", "2",
                    "--objects", "1", "--seed", "3", "-o", str(inst)]) == 0
    assert run_cli(["solve", str(inst), "-o", str(sol)]) == 0
    doc = json.loads(sol.read_text())
    assert doc["status"] == "Optimal"
    assert doc["objective"] == len(doc["barriers"]) == 1
    assert run_cli(["verify", str(inst), str(sol)]) == 0
    assert "separated: yes" in capsys.readouterr().out
    assert run_cli(["render", str(inst), "--solution", str(sol),
                    "-o", str(svg)]) == 0
    text = svg.read_text()
    assert text.count('stroke="#d62728"') == 1


def test_verify_reports_witness(tmp_path, capsys):
    inst = tmp_path / "inst.json"
    empty = tmp_path / "none.json"
    run_cli(["generate", "--kind", "random-points", "--sets", "2",
             "--objects", "1", "--seed", "3", "-o", str(inst)])
    empty.write_text("[]\n")
    assert run_cli(["verify", str(inst), str(empty)]) == 1
    out = capsys.readouterr().out
    assert "separated: no" in out and "witness" in out


def test_parse_error_exit_code(tmp_path):
    bad = tmp_path / "bad.json"
    bad.write_text("{not json")
    assert run_cli(["verify", str(bad), str(bad)]) == 2
    missing = tmp_path / "missing.json"
    assert run_cli(["solve", str(missing)]) == 2


def test_candidates_subcommand(tmp_path):
    inst = tmp_path / "inst.json"
    cands = tmp_path / "cands.json"
    run_cli(["generate", "--kind", "random-points", "--sets", "2",
             "--objects", "1", "--obstacles", "0", "--seed", "1",
             "-o", str(inst)])
    assert run_cli(["candidates", str(inst), "-o", str(cands)]) == 0
    doc = json.loads(cands.read_text())
    assert len(doc) == 4  # one point pair in free space
    assert all({"id", "a", "b", "point_sides"} <= set(rec) for rec in doc)


def test_sampled_mode_flag(tmp_path):
    inst = tmp_path / "inst.json"
    out = tmp_path / "sol.json"
    run_cli(["generate", "--kind", "tsp-polygons", "--sets", "2",
             "--objects", "1", "--obstacles", "0", "--seed", "0",
             "-o", str(inst)])
    assert run_cli(["solve", str(inst), "--mode", "sampled:2",
                    "-o", str(out)]) == 0
    assert json.loads(out.read_text())["status"] == "Optimal"


def test_render_instance_only_has_no_barriers(tmp_path):
    inst = tmp_path / "inst.json"
    svg = tmp_path / "plain.svg"
    run_cli(["generate", "--kind", "grid-squares", "--sets", "2",
             "--objects", "2", "--seed", "1", "-o", str(inst)])
    assert run_cli(["render", str(inst), "-o", str(svg)]) == 0
    assert 'stroke="#d62728"' not in svg.read_text()


def test_bench_table(tmp_path, capsys):
    csv = tmp_path / "bench.csv"
    assert run_cli(["bench", "--kind", "random-points", "--sets", "2",
                    "--objects", "2", "--trials", "2", "-o", str(csv)]) == 0
    out = capsys.readouterr().out
    assert "sets\\objects" in out
    lines = csv.read_text().splitlines()
    assert lines[0] == "sets,objects,trials,mean_seconds"
    assert len(lines) == 3


def test_artifacts_deterministic(tmp_path):
    paths = {}
    for tag in ("one", "two"):
        inst = tmp_path / f"inst-{tag}.json"
        sol = tmp_path / f"sol-{tag}.json"
        svg = tmp_path / f"out-{tag}.svg"
        cands = tmp_path / f"cands-{tag}.json"
        run_cli(["generate", "--kind", "tsp-polygons", "--sets", "2",
                 "--objects", "1", "--seed", "11", "-o", str(inst)])
        run_cli(["solve", str(inst), "-o", str(sol)])
        run_cli(["candidates", str(inst), "-o", str(cands)])
        run_cli(["render", str(inst), "--solution", str(sol),
                 "--candidates", str(cands), "-o", str(svg)])
        paths[tag] = tuple(p.read_bytes() for p in (inst, sol, cands, svg))
    assert paths["one"] == paths["two"]


def test_console_entry_point():
    proc = subprocess.run(RUN + ["--help"], capture_output=True, text=True)
    assert proc.returncode == 0
    for name in ("generate", "candidates", "solve", "verify", "render", "bench"):
        assert name in proc.stdout
