"""Exact rational linear feasibility via phase-1 simplex with Bland's rule.

Solves: find x >= 0 with A x = b, entirely in Fraction arithmetic, so a
"feasible" answer is a certificate and an "infeasible" answer is exact.
Bland's pivoting rule (lowest eligible index for both entering and leaving
variable) prevents cycling and makes the returned vertex deterministic.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Optional, Sequence

ZERO = Fraction(0)
ONE = Fraction(1)


def solve_feasibility(
    rows: Sequence[Sequence[Fraction]],
    rhs: Sequence[Fraction],
    num_vars: int,
) -> Optional[list[Fraction]]:
    """Return a vertex x >= 0 of {A x = b} or None if the system is infeasible."""
    m = len(rows)
    if m != len(rhs):
        raise ValueError("rows and rhs must have equal length")
    if m == 0:
        return [ZERO] * num_vars

    # tableau: original columns, then one artificial per row; b >= 0
    tab: list[list[Fraction]] = []
    b: list[Fraction] = []
    for row, r in zip(rows, rhs):
        if len(row) != num_vars:
            raise ValueError("row width mismatch")
        if r < 0:
            tab.append([-c for c in row])
            b.append(-r)
        else:
            tab.append(list(row))
            b.append(Fraction(r))
    total = num_vars + m
    for i in range(m):
        ext = [ZERO] * m
        ext[i] = ONE
        tab[i] = tab[i] + ext
    basis = [num_vars + i for i in range(m)]

    # phase-1 objective: minimize the sum of artificials.
    # cost[j] = reduced cost of column j; obj = current artificial mass.
    cost = [ZERO] * total
    obj = ZERO
    for i in range(m):
        for j in range(num_vars):
            cost[j] -= tab[i][j]
        obj += b[i]

    while True:
        enter = next((j for j in range(total) if cost[j] < 0), None)
        if enter is None:
            break
        # Bland ratio test: smallest ratio, ties by lowest basis variable
        leave = None
        best: Optional[Fraction] = None
        for i in range(m):
            a = tab[i][enter]
            if a > 0:
                ratio = b[i] / a
                if best is None or ratio < best or (
                    ratio == best and basis[i] < basis[leave]  # type: ignore[index]
                ):
                    best = ratio
                    leave = i
        if leave is None:
            raise ArithmeticError("phase-1 objective unbounded; invalid tableau")
        _pivot(tab, b, cost, basis, leave, enter)
        obj = sum(
            (b[i] for i in range(m) if basis[i] >= num_vars), ZERO
        )

    if obj != 0:
        return None

    # drive remaining zero-level artificials out of the basis where possible
    for i in range(m):
        if basis[i] >= num_vars:
            enter = next((j for j in range(num_vars) if tab[i][j] != 0), None)
            if enter is not None:
                _pivot(tab, b, cost, basis, i, enter)
            # else: the row is redundant (all-zero in original columns); its
            # artificial stays basic at level 0 and contributes nothing.

    x = [ZERO] * num_vars
    for i in range(m):
        if basis[i] < num_vars:
            x[basis[i]] = b[i]
    return x


def _pivot(
    tab: list[list[Fraction]],
    b: list[Fraction],
    cost: list[Fraction],
    basis: list[int],
    leave: int,
    enter: int,
) -> None:
    piv = tab[leave][enter]
    inv = ONE / piv
    tab[leave] = [c * inv for c in tab[leave]]
    b[leave] *= inv
    for i in range(len(tab)):
        if i == leave:
            continue
        f = tab[i][enter]
        if f != 0:
            row = tab[i]
            prow = tab[leave]
            tab[i] = [c - f * p for c, p in zip(row, prow)]
            b[i] -= f * b[leave]
    f = cost[enter]
    if f != 0:
        for j in range(len(cost)):
            cost[j] -= f * tab[leave][j]
    basis[leave] = enter
