"""Shared fixtures and independent reference implementations.

The reference routines here deliberately avoid the package's incremental
code paths: rebuilds go through a single sparse matvec, optima through
plain subset enumeration, and LP values through a from-scratch parse of
the rendered text. Tests compare the fast paths against these.
"""

import itertools

import numpy as np
import pytest

import bmcp

TINY_TEXT = """\
BMCP 1
3 3 10
4 5 6
3 7 2
2 1 2
2 2 3
2 1 3
"""


@pytest.fixture
def tiny():
    return bmcp.parse_instance(TINY_TEXT, name="tiny1")


def make_instance(m, n, density, capacity_fraction, seed):
    """Generated instance whose capacity is a fraction of the total weight.

    The generator draws weights first, so probing with a placeholder
    capacity yields the same weights as the final call.
    """
    probe = bmcp.generate_instance(
        bmcp.GeneratorSpec(m=m, n=n, density=density, capacity=1, seed=seed)
    )
    capacity = max(1, int(round(float(probe.weights.sum()) * capacity_fraction)))
    return bmcp.generate_instance(
        bmcp.GeneratorSpec(m=m, n=n, density=density, capacity=capacity, seed=seed)
    )


def rebuild(inst, selection):
    """Coverage, weight, objective from scratch via the incidence matvec."""
    counts = inst.incidence.T @ selection.astype(np.int64)
    weight = int(inst.weights[selection].sum())
    objective = int(inst.profits[counts > 0].sum())
    return counts, weight, objective


def brute_force_value(inst):
    """Optimal objective by plain subset enumeration; m up to ~15."""
    rows = [frozenset(r.tolist()) for r in inst.rows]
    weights = inst.weights.tolist()
    profits = inst.profits.tolist()
    best = 0
    for size in range(1, inst.m + 1):
        for combo in itertools.combinations(range(inst.m), size):
            if sum(weights[i] for i in combo) > inst.capacity:
                continue
            covered = frozenset().union(*(rows[i] for i in combo))
            value = sum(profits[j] for j in covered)
            if value > best:
                best = value
    return best


def _parse_terms(tokens):
    """Signed (coefficient, variable) pairs from LP expression tokens."""
    terms = []
    sign = 1
    pending = None
    for tok in tokens:
        if tok == "+":
            sign = 1
        elif tok == "-":
            sign = -1
        elif tok.lstrip("-").isdigit():
            pending = int(tok)
        else:
            coeff = sign * (1 if pending is None else pending)
            terms.append((coeff, tok))
            sign = 1
            pending = None
    return terms


def solve_lp_text(text):
    """Brute-force optimum of a rendered LP, parsed from the text alone."""
    lines = text.splitlines()
    i_max = lines.index("Maximize")
    i_sub = lines.index("Subject To")
    i_bin = lines.index("Binary")
    lines.index("End")

    def rows_between(first, last):
        rows = []
        for line in lines[first:last]:
            if ":" in line:
                rows.append(line)
            else:
                rows[-1] += " " + line
        return rows

    (objective_row,) = rows_between(i_max + 1, i_sub)
    obj_terms = _parse_terms(objective_row.split(":", 1)[1].split())
    profits = {var: coeff for coeff, var in obj_terms}

    weights = {}
    capacity = None
    covering = {}
    for row in rows_between(i_sub + 1, i_bin):
        name, rest = row.split(":", 1)
        lhs, rhs = rest.split("<=")
        terms = _parse_terms(lhs.split())
        if name.strip() == "capacity":
            capacity = int(rhs)
            weights = {var: coeff for coeff, var in terms}
        else:
            (x_var,) = [var for coeff, var in terms if coeff > 0]
            items = [var for coeff, var in terms if coeff < 0]
            assert int(rhs) == 0
            covering[x_var] = items

    m = len(weights)
    n = len(profits)
    binary_names = " ".join(lines[i_bin + 1 : lines.index("End")]).split()
    assert len(binary_names) == m + n

    y_names = [f"y{i + 1}" for i in range(m)]
    w = np.array([weights[name] for name in y_names], dtype=np.int64)
    masks = ((np.arange(2**m)[:, None] >> np.arange(m)[None, :]) & 1).astype(bool)
    total = masks @ w
    feasible = total <= capacity
    value = np.zeros(2**m, dtype=np.int64)
    for j in range(n):
        x_var = f"x{j + 1}"
        items = [int(name[1:]) - 1 for name in covering[x_var]]
        if items:
            value += profits[x_var] * masks[:, items].any(axis=1)
    return int(value[feasible].max())
