"""0-1 integer program for barrier selection.

One binary per candidate segment and ceil(log2 k) binaries per cell.  Every
adjacency portion between two cells contributes, per bit, the inequality
pair "sum of covering segment binaries >= c_i - c_j" and its mirror, so two
cells can carry different class codes only if every shared portion is
blocked.  Labelled cells fix their bits; a label that is conditional on a
point-side choice is relaxed whenever one of its away-group candidates is
selected.

solve() is an exact combinatorial solver: candidate selections are tested
for feasibility by union-find over the cell graph, every infeasible
selection yields a valid covering cut (the candidates able to block one
witness path), and a deterministic branch-and-bound finds the minimum
hitting set of the cuts collected so far.  The loop terminates at the first
hitting set that is feasible, which is then a proven optimum.
"""
from __future__ import annotations

import time
from collections import deque
from dataclasses import dataclass
from typing import Dict, FrozenSet, List, Optional, Sequence, Set, Tuple

from .arrangement import ArrangementResult


class TimeLimit(RuntimeError):
    def __init__(self, incumbent: Optional["Solution"]):
        super().__init__("time budget exhausted")
        self.incumbent = incumbent


@dataclass(frozen=True)
class IlpModel:
    num_segments: int
    num_cells: int
    bits_per_cell: int
    k: int
    fixed_cells: Dict[int, int]  # cell id -> class index
    # (segment group, cell i, cell j, bit) meaning
    # sum(l[s] for s in group) >= c[i][bit] - c[j][bit] and the mirror
    constraints: Tuple[Tuple[Tuple[int, ...], int, int, int], ...]
    # (cell, class, away group): the cell holds the class's code unless an
    # away-group candidate is selected
    conditional_labels: Tuple[Tuple[int, int, Tuple[int, ...]], ...]


@dataclass(frozen=True)
class Solution:
    selected: FrozenSet[int]
    cell_classes: Dict[int, int]
    objective_value: int
    status: str  # Optimal | Infeasible | TimeLimit


def build_model(arr: ArrangementResult, k: int) -> IlpModel:
    bits = 0 if k <= 1 else (k - 1).bit_length()
    fixed: Dict[int, int] = {}
    conditional: List[Tuple[int, int, Tuple[int, ...]]] = []
    for lab in arr.point_labels:
        if lab.set_idx >= k:
            raise ValueError(f"label class {lab.set_idx} out of range for k={k}")
        if lab.away_group:
            conditional.append((lab.cell, lab.set_idx, lab.away_group))
        else:
            fixed[lab.cell] = lab.set_idx
    constraints = []
    if k > 1:
        for adj in arr.adjacencies:
            i, j = adj.cells
            for tau in range(bits):
                constraints.append((adj.covering_candidates, i, j, tau))
    return IlpModel(
        num_segments=arr.num_candidates,
        num_cells=arr.num_cells,
        bits_per_cell=bits,
        k=k,
        fixed_cells=fixed,
        constraints=tuple(constraints),
        conditional_labels=tuple(conditional),
    )


# ---------------------------------------------------------------------------
# exact solver


def _adjacency_groups(model: IlpModel) -> List[Tuple[Tuple[int, ...], int, int]]:
    seen = set()
    out = []
    for group, i, j, _ in model.constraints:
        key = (group, i, j)
        if key not in seen:
            seen.add(key)
            out.append(key)
    return out


def _labels(model: IlpModel) -> List[Tuple[int, int, Tuple[int, ...]]]:
    out = [(cell, cls, ()) for cell, cls in sorted(model.fixed_cells.items())]
    out.extend(model.conditional_labels)
    return out


class _Components:
    def __init__(self, n: int):
        self.parent = list(range(n))

    def find(self, x: int) -> int:
        root = x
        while self.parent[root] != root:
            root = self.parent[root]
        while self.parent[x] != root:
            self.parent[x], x = root, self.parent[x]
        return root

    def union(self, a: int, b: int) -> None:
        ra, rb = self.find(a), self.find(b)
        if ra != rb:
            self.parent[max(ra, rb)] = min(ra, rb)


def _check_selection(model: IlpModel, selected: Set[int], adjacencies, labels):
    """Return None if the selection separates all classes, else a violated
    covering cut: a set of segment ids of which at least one must be
    selected in any feasible solution."""
    uf = _Components(model.num_cells)
    open_adj: Dict[int, List[Tuple[int, Tuple[int, ...]]]] = {}
    for group, i, j in adjacencies:
        if not selected.intersection(group):
            uf.union(i, j)
            open_adj.setdefault(i, []).append((j, group))
            open_adj.setdefault(j, []).append((i, group))
    active = [(cell, cls, away) for cell, cls, away in labels
              if not selected.intersection(away)]
    by_comp: Dict[int, Tuple[int, int, Tuple[int, ...]]] = {}
    for cell, cls, away in active:
        root = uf.find(cell)
        prev = by_comp.get(root)
        if prev is None:
            by_comp[root] = (cell, cls, away)
        elif prev[1] != cls:
            # witness: path of open adjacencies between the two cells
            src, dst = prev[0], cell
            cut: Set[int] = set(prev[2]) | set(away)
            parent_edge: Dict[int, Tuple[int, Tuple[int, ...]]] = {src: (-1, ())}
            q = deque([src])
            while q:
                u = q.popleft()
                if u == dst:
                    break
                for v, group in open_adj.get(u, ()):
                    if v not in parent_edge:
                        parent_edge[v] = (u, group)
                        q.append(v)
            node = dst
            while parent_edge[node][0] != -1:
                node, group = parent_edge[node]
                cut.update(group)
            return cut
    return None


def _min_hitting_set(cuts: List[FrozenSet[int]], deadline: Optional[float],
                     upper: int) -> Optional[Tuple[int, ...]]:
    """Deterministic exact minimum hitting set, ties broken by
    lexicographically smallest id tuple; None if every hitting set exceeds
    `upper` elements."""
    # Drop duplicate and dominated cuts: a superset of another cut is hit
    # whenever the smaller cut is.
    # Collapse interchangeable elements: ids appearing in exactly the same
    # cuts are equivalent, and a minimum hitting set never needs two of
    # them, so only the smallest id of each class is kept.
    signature: Dict[int, List[int]] = {}
    for idx, cut in enumerate(cuts):
        for sid in cut:
            signature.setdefault(sid, []).append(idx)
    rep: Set[int] = set()
    seen: Dict[Tuple[int, ...], int] = {}
    for sid in sorted(signature):
        sig = tuple(signature[sid])
        if sig not in seen:
            seen[sig] = sid
            rep.add(sid)
    reduced = [frozenset(cut & rep) for cut in cuts]

    key = {c: (len(c), tuple(sorted(c))) for c in set(reduced)}
    minimal: List[FrozenSet[int]] = []
    for cut in sorted(key, key=key.get):
        if not any(m <= cut for m in minimal):
            minimal.append(cut)

    best: Optional[Tuple[int, ...]] = None
    best_size = upper + 1

    def packing_bound(unhit: List[FrozenSet[int]]) -> int:
        used: FrozenSet[int] = frozenset()
        count = 0
        for cut in unhit:
            if used.isdisjoint(cut):
                count += 1
                used |= cut
        return count

    def recurse(chosen: List[int], unhit: List[FrozenSet[int]],
                banned: FrozenSet[int]) -> None:
        nonlocal best, best_size
        if deadline is not None and time.monotonic() > deadline:
            raise TimeLimit(None)
        if not unhit:
            cand = tuple(sorted(chosen))
            if len(cand) < best_size or (len(cand) == best_size and
                                         (best is None or cand < best)):
                best, best_size = cand, len(cand)
            return
        if len(chosen) + packing_bound(unhit) > best_size:
            return
        pivot = min(unhit, key=key.get)
        allowed = sorted(pivot - banned)
        if not allowed:
            return
        # Inclusion-exclusion branching: once an element has been tried at
        # this node, later siblings exclude it, so each candidate set is
        # visited exactly once.
        excluded = set(banned)
        for sid in allowed:
            rest = [c for c in unhit if sid not in c]
            chosen.append(sid)
            recurse(chosen, rest, frozenset(excluded))
            chosen.pop()
            excluded.add(sid)

    recurse([], minimal, frozenset())
    return best


def _assign_classes(model: IlpModel, selected: Set[int], adjacencies,
                    labels) -> Dict[int, int]:
    uf = _Components(model.num_cells)
    for group, i, j in adjacencies:
        if not selected.intersection(group):
            uf.union(i, j)
    comp_class: Dict[int, int] = {}
    for cell, cls, away in labels:
        if not selected.intersection(away):
            comp_class[uf.find(cell)] = cls
    return {cell: comp_class.get(uf.find(cell), 0)
            for cell in range(model.num_cells)}


def solve(model: IlpModel, budget: Optional[float] = None) -> Solution:
    deadline = None if budget is None else time.monotonic() + budget
    adjacencies = _adjacency_groups(model)
    labels = _labels(model)

    if model.k <= 1 or not labels:
        return Solution(frozenset(), _assign_classes(model, set(), adjacencies, labels),
                        0, "Optimal")

    everything = set(range(model.num_segments))
    if _check_selection(model, everything, adjacencies, labels) is not None:
        return Solution(frozenset(), {}, 0, "Infeasible")
    incumbent = Solution(
        frozenset(everything),
        _assign_classes(model, everything, adjacencies, labels),
        model.num_segments, "Optimal")

    cuts: List[FrozenSet[int]] = []
    selection: Set[int] = set()
    while True:
        violated = _check_selection(model, selection, adjacencies, labels)
        if violated is None:
            return Solution(
                frozenset(selection),
                _assign_classes(model, selection, adjacencies, labels),
                len(selection), "Optimal")
        if not violated:
            return Solution(frozenset(), {}, 0, "Infeasible")
        cuts.append(frozenset(violated))
        try:
            chosen = _min_hitting_set(cuts, deadline, incumbent.objective_value)
        except TimeLimit:
            raise TimeLimit(Solution(incumbent.selected, incumbent.cell_classes,
                                     incumbent.objective_value, "TimeLimit"))
        if chosen is None:
            return Solution(incumbent.selected, incumbent.cell_classes,
                            incumbent.objective_value, "Optimal")
        selection = set(chosen)


# ---------------------------------------------------------------------------
# LP-format export (Minimize / Subject To / Binary / End subset)


def export_lp(model: IlpModel) -> str:
    lvars = [f"l{s}" for s in range(model.num_segments)]
    lines = ["Minimize", " obj: " + (" + ".join(lvars) if lvars else "0"),
             "Subject To"]
    cnum = 0

    def emit(text: str) -> None:
        nonlocal cnum
        lines.append(f" r{cnum}: {text}")
        cnum += 1

    for group, i, j, tau in model.constraints:
        lsum = " + ".join(f"l{s}" for s in group)
        emit(f"{lsum} - c{i}_{tau} + c{j}_{tau} >= 0")
        emit(f"{lsum} - c{j}_{tau} + c{i}_{tau} >= 0")
    for cell in sorted(model.fixed_cells):
        cls = model.fixed_cells[cell]
        for tau in range(model.bits_per_cell):
            emit(f"c{cell}_{tau} = {(cls >> tau) & 1}")
    for cell, cls, away in model.conditional_labels:
        lsum = " + ".join(f"l{s}" for s in away)
        for tau in range(model.bits_per_cell):
            if (cls >> tau) & 1:
                emit(f"{lsum} + c{cell}_{tau} >= 1")
            else:
                emit(f"{lsum} - c{cell}_{tau} >= 0")
    lines.append("Binary")
    for v in lvars:
        lines.append(f" {v}")
    for cell in range(model.num_cells):
        for tau in range(model.bits_per_cell):
            lines.append(f" c{cell}_{tau}")
    lines.append("End")
    return "\n".join(lines) + "\n"
