"""Reference table of the first collar coefficient for odd orders l in {1, 3, 5}.

Columns run over n = 1..12 plus a final ">= 12" column, checked here at n = 13.
"T" marks the theta-branch value, "0" the zero branch.
"""
from __future__ import annotations

from dataclasses import dataclass

from .bounds import coeff_A2, coefficient_case, theta_coefficient

COLUMNS = tuple(range(1, 14))
PUBLISHED = {
    1: "T T T T T T T T T T T T T".split(),
    3: "T T T T T T T 0 0 0 0 0 0".split(),
    5: "T T T T T T T T 0 0 0 0 0".split(),
}


@dataclass(frozen=True)
class Cell:
    l: int
    n: int
    expected: str
    got: str
    value: float
    theta: float

    @property
    def ok(self) -> bool:
        if self.expected != self.got:
            return False
        return self.value == (self.theta if self.got == "T" else 0.0)


def check_table() -> list[Cell]:
    cells = []
    for l, row in PUBLISHED.items():
        for n, expected in zip(COLUMNS, row):
            case = coefficient_case(n, l)
            got = "T" if case.branch == "theta-branch" else "0"
            cells.append(Cell(l, n, expected, got, case.value_A1, theta_coefficient(n, l)))
    return cells


def check_plate_coefficient(n_max: int = 16) -> list[tuple[int, float, float]]:
    """(n, A2(n, 2), 4 n^2) for n = 1..n_max."""
    return [(n, coeff_A2(n, 2), 4.0 * n * n) for n in range(1, n_max + 1)]


def format_table(cells: list[Cell]) -> str:
    lines = ["l\\n " + " ".join(f"{n:>6}" for n in COLUMNS[:-1]) + "    >=12"]
    for l in PUBLISHED:
        row = [c for c in cells if c.l == l]
        lines.append(f"{l:>3} " + " ".join(f"{c.value:>6.3g}" if c.got == "T" else f"{'0':>6}"
                                            for c in row)
                     + "  " + ("ok" if all(c.ok for c in row) else "MISMATCH"))
    return "\n".join(lines)
