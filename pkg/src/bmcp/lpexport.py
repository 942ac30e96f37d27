"""Integer-program export in LP text format.

Variables: y_i = 1 iff item i is selected, x_j = 1 iff element j counts as
covered. Maximize sum p_j x_j subject to the knapsack row over the y_i and,
per element, x_j <= sum of the y_i covering it. All variables binary. An
element no item covers gets the row ``x_j <= 0``.

The rendering is canonical: fixed section order, one named row per
constraint, terms wrapped at a fixed count per line. Output parses with
CPLEX-LP readers (and the bundled brute-force checker in the tests).
"""

from __future__ import annotations

from dataclasses import dataclass

from .instance import Instance

_TERMS_PER_LINE = 8
_NAMES_PER_LINE = 12


@dataclass(frozen=True)
class LpModel:
    """Structured form of the program; render() produces the text."""

    profits: tuple[int, ...]
    weights: tuple[int, ...]
    capacity: int
    covering_items: tuple[tuple[int, ...], ...]

    @classmethod
    def from_instance(cls, inst: Instance) -> "LpModel":
        columns: list[list[int]] = [[] for _ in range(inst.n)]
        for i, row in enumerate(inst.rows):
            for j in row:
                columns[int(j)].append(i)
        return cls(
            profits=tuple(int(p) for p in inst.profits),
            weights=tuple(int(w) for w in inst.weights),
            capacity=inst.capacity,
            covering_items=tuple(tuple(c) for c in columns),
        )

    def render(self) -> str:
        lines = ["Maximize"]
        obj_terms = [f"{p} x{j + 1}" for j, p in enumerate(self.profits)]
        lines.extend(_wrap_sum("obj", obj_terms))
        lines.append("Subject To")
        cap_terms = [f"{w} y{i + 1}" for i, w in enumerate(self.weights)]
        lines.extend(_wrap_sum("capacity", cap_terms, bound=f"<= {self.capacity}"))
        for j, items in enumerate(self.covering_items):
            terms = [f"x{j + 1}"] + [f"- y{i + 1}" for i in items]
            lines.extend(_wrap_row(f"cover_{j + 1}", terms, "<= 0"))
        lines.append("Binary")
        names = [f"y{i + 1}" for i in range(len(self.weights))]
        names += [f"x{j + 1}" for j in range(len(self.profits))]
        for k in range(0, len(names), _NAMES_PER_LINE):
            lines.append(" " + " ".join(names[k : k + _NAMES_PER_LINE]))
        lines.append("End")
        return "\n".join(lines) + "\n"


def _wrap_sum(name: str, terms: list[str], bound: str | None = None) -> list[str]:
    """Rows whose terms all add: join with ' + ', continuation lines indented."""
    joined = [" + ".join(terms[k : k + _TERMS_PER_LINE]) for k in range(0, len(terms), _TERMS_PER_LINE)]
    lines = [f" {name}: {joined[0]}"]
    lines.extend(f"   + {chunk}" for chunk in joined[1:])
    if bound is not None:
        lines[-1] += f" {bound}"
    return lines


def _wrap_row(name: str, terms: list[str], bound: str) -> list[str]:
    """Rows with mixed signs; each term already carries its sign."""
    lines = []
    for k in range(0, len(terms), _TERMS_PER_LINE):
        chunk = " ".join(terms[k : k + _TERMS_PER_LINE])
        lines.append(f" {name}: {chunk}" if k == 0 else f"   {chunk}")
    lines[-1] += f" {bound}"
    return lines


def export_lp(inst: Instance) -> str:
    return LpModel.from_instance(inst).render()
