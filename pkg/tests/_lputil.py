"""Solve an exported LP-format model with scipy's exact MILP (HiGHS)."""
import re


def solve_lp_text(text):
    import numpy as np
    from scipy.optimize import Bounds, LinearConstraint, milp

    lines = [ln.strip() for ln in text.splitlines() if ln.strip()]
    section = None
    objective = ""
    constraints = []
    variables = []
    for ln in lines:
        if ln in ("Minimize", "Subject To", "Binary", "End"):
            section = ln
            continue
        if section == "Minimize":
            objective = ln.split(":", 1)[1]
        elif section == "Subject To":
            constraints.append(ln.split(":", 1)[1])
        elif section == "Binary":
            variables.append(ln)
    index = {v: i for i, v in enumerate(variables)}
    n = len(variables)

    def parse_expr(expr):
        row = np.zeros(n)
        for sign, name in re.findall(r"([+-]?)\s*([a-z]\w*)", expr):
            row[index[name]] += -1.0 if sign == "-" else 1.0
        return row

    cost = parse_expr(objective)
    lcs = []
    for con in constraints:
        if ">=" in con:
            lhs, rhs = con.split(">=")
            lcs.append(LinearConstraint(parse_expr(lhs), float(rhs), np.inf))
        elif "=" in con:
            lhs, rhs = con.split("=")
            lcs.append(LinearConstraint(parse_expr(lhs), float(rhs), float(rhs)))
    return milp(c=cost, constraints=lcs, integrality=np.ones(n),
                bounds=Bounds(0, 1))
