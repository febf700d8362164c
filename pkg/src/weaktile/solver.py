"""Search for periodic weak-tiling measures by exact LP, and related tooling.

The search space is deliberately restricted to T-periodic measures
mu = delta_0 + nu (the unit atom at 0 is the untranslated copy), which
turns the defining identity 1_Omega * mu = 1 into finitely many exact
linear constraints: one per cell of the arrangement that the translated
endpoints cut out of one period.  Everything is Fraction arithmetic, and
every solution is re-verified against the convolution identity before it
is emitted.

Periodicity is a search restriction, not a theorem: a weak tiling measure
need not be periodic, so "no solution for this period" never certifies
that no weak tiling exists.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Optional, Sequence

from .core import (
    AtomicMeasure,
    Interval,
    IntervalUnion,
    RationalLike,
    Window,
    rat,
    weak_tiling_check,
)
from .semigroup import length_semigroup, rational_lcm
from .simplex import solve_feasibility


class PeriodError(ValueError):
    """The requested period is incompatible with the instance."""


class GridError(ValueError):
    """The supplied atom grid violates its contract."""


@dataclass(frozen=True)
class PeriodicMeasure:
    """T-periodic positive atomic measure given by its atoms in one period cell.

    Describes sum over k in Z, (p, w) in atoms of w * delta_{p + kT}.  When
    used as mu = delta_0 + nu for a weak tiling, the cell contains the atom
    (0, 1) and the weak tiling measure nu is the periodization minus that
    single origin atom.
    """

    period: Fraction
    atoms: tuple[tuple[Fraction, Fraction], ...]

    def __post_init__(self) -> None:
        period = rat(self.period)
        if period <= 0:
            raise ValueError("period must be positive")
        seen = set()
        atoms = []
        for p, w in self.atoms:
            p, w = rat(p), rat(w)
            if not 0 <= p < period:
                raise ValueError(f"cell atom {p} outside [0, {period})")
            if w <= 0:
                raise ValueError(f"cell atom {p} has nonpositive weight {w}")
            if p in seen:
                raise ValueError(f"duplicate cell atom at {p}")
            seen.add(p)
            atoms.append((p, w))
        object.__setattr__(self, "period", period)
        object.__setattr__(self, "atoms", tuple(sorted(atoms)))

    def weight_at(self, residue: Fraction) -> Fraction:
        for p, w in self.atoms:
            if p == residue:
                return w
        return Fraction(0)

    @property
    def has_unit_origin(self) -> bool:
        return self.weight_at(Fraction(0)) == 1

    def materialize_nu(self, lo: Fraction, hi: Fraction) -> Optional[AtomicMeasure]:
        """Atoms of (periodization minus delta_0) in the open range (lo, hi)."""
        pairs = []
        T = self.period
        for p, w in self.atoms:
            k = math.floor((lo - p) / T) + 1  # smallest k with p + kT > lo
            while p + k * T < hi:
                point = p + k * T
                if point != 0:
                    pairs.append((point, w))
                k += 1
        return AtomicMeasure.from_pairs(pairs) if pairs else None


@dataclass(frozen=True)
class TilingSolution:
    """A verified periodic weak tiling: measure in mu-form plus its certificate.

    `kind` is "proper" when every atom has weight exactly 1 and "weak"
    otherwise.  `period_cells` records the verified coverage value (always
    1) on each cell of one period.
    """

    omega: IntervalUnion
    measure: PeriodicMeasure
    kind: str
    certificate_window: Window
    period_cells: tuple[tuple[Interval, Fraction], ...]

    @property
    def nu_atoms_per_period(self) -> tuple[tuple[Fraction, Fraction], ...]:
        return tuple((p, w) for p, w in self.measure.atoms)


def _int_count_open(alpha: Fraction, beta: Fraction) -> int:
    """Number of integers k with alpha < k < beta (exact, open interval)."""
    lo = math.floor(alpha) + 1
    hi = math.ceil(beta) - 1
    return max(0, hi - lo + 1)


def _coverage_count(
    omega0: IntervalUnion, g: Fraction, period: Fraction, point: Fraction
) -> int:
    """Multiplicity with which the T-periodized translate Omega + g + TZ covers `point`."""
    total = 0
    for c in omega0.components:
        total += _int_count_open(
            (point - c.right - g) / period, (point - c.left - g) / period
        )
    return total


def default_grid(omega: IntervalUnion, period: RationalLike) -> list[Fraction]:
    """Residues mod T of the candidate support (plus or minus Theta), plus 0.

    Theta is the semigroup of component lengths; its elements eventually
    sweep a full residue cycle, so enumerating up to conductor + lcm(step, T)
    captures every residue of the infinite set exactly.
    """
    T = rat(period)
    if T <= 0:
        raise PeriodError("period must be positive")
    sg = length_semigroup(omega)
    step = Fraction(sg.gcd) / sg.scale
    bound = sg.conductor() + rational_lcm(step, T)
    residues: set[Fraction] = {Fraction(0)}
    for x in sg.enumerate_up_to(bound):
        r = x % T
        residues.add(r)
        residues.add((T - r) % T)
    return sorted(residues)


def dense_grid(period: RationalLike, q: int) -> list[Fraction]:
    """All multiples of 1/q in [0, period); adversarial grid for support tests."""
    T = rat(period)
    if q <= 0:
        raise GridError("dense grid denominator must be positive")
    out = []
    k = 0
    while Fraction(k, q) < T:
        out.append(Fraction(k, q))
        k += 1
    return out


def _period_cells(
    omega0: IntervalUnion, grid: Sequence[Fraction], period: Fraction
) -> list[Interval]:
    cuts = {Fraction(0), period}
    for g in grid:
        for c in omega0.components:
            cuts.add((c.left + g) % period)
            cuts.add((c.right + g) % period)
    pts = sorted(cuts)
    return [Interval(a, b) for a, b in zip(pts, pts[1:])]


def weak_tiling_lp(
    omega: IntervalUnion,
    period: RationalLike,
    grid: Optional[Iterable[RationalLike]] = None,
) -> Optional[TilingSolution]:
    """Exact LP feasibility search for a T-periodic weak tiling measure.

    Unknowns are weights w_g >= 0 on the grid with w_0 = 1 fixed; each open
    cell of one period must be covered with total multiplicity exactly 1.
    Returns a verified solution (the deterministic Bland vertex) or None.
    """
    T = rat(period)
    if T < omega.span:
        raise PeriodError(
            f"period {T} is smaller than the diameter {omega.span} of the union"
        )
    omega0 = omega.shift(-omega.left)
    if grid is None:
        grid_pts = default_grid(omega, T)
    else:
        grid_pts = sorted({rat(g) for g in grid})
        if any(g < 0 or g >= T for g in grid_pts):
            raise GridError("grid points must lie in [0, period)")
        if Fraction(0) not in grid_pts:
            raise GridError("grid must contain 0 (the untranslated copy)")

    cells = _period_cells(omega0, grid_pts, T)
    variables = [g for g in grid_pts if g != 0]
    var_index = {g: i for i, g in enumerate(variables)}

    rows: list[list[Fraction]] = []
    rhs: list[Fraction] = []
    seen_rows: set[tuple] = set()
    forced_zero: set[Fraction] = set()
    for cell in cells:
        mid = cell.midpoint()
        c0 = _coverage_count(omega0, Fraction(0), T, mid)
        target = 1 - c0
        if target < 0:
            return None  # the mandatory copies at TZ already overlap
        coeffs = [Fraction(0)] * len(variables)
        for g in variables:
            cnt = _coverage_count(omega0, g, T, mid)
            if cnt:
                coeffs[var_index[g]] = Fraction(cnt)
        if target == 0:
            for g in variables:
                if coeffs[var_index[g]] > 0:
                    forced_zero.add(g)
            continue
        key = (tuple(coeffs), target)
        if key in seen_rows:
            continue
        seen_rows.add(key)
        rows.append(coeffs)
        rhs.append(Fraction(target))

    free_vars = [g for g in variables if g not in forced_zero]
    free_index = {g: i for i, g in enumerate(free_vars)}
    reduced_rows: list[list[Fraction]] = []
    reduced_rhs: list[Fraction] = []
    seen_rows.clear()
    for row, r in zip(rows, rhs):
        red = [row[var_index[g]] for g in free_vars]
        if all(c == 0 for c in red):
            if r != 0:
                return None  # a cell nothing admissible can cover
            continue
        key = (tuple(red), r)
        if key in seen_rows:
            continue
        seen_rows.add(key)
        reduced_rows.append(red)
        reduced_rhs.append(r)

    x = solve_feasibility(reduced_rows, reduced_rhs, len(free_vars))
    if x is None:
        return None

    atoms = [(Fraction(0), Fraction(1))]
    for g in free_vars:
        if x[free_index[g]] > 0:
            atoms.append((g, x[free_index[g]]))
    measure = PeriodicMeasure(T, tuple(atoms))
    return verify_solution(omega, measure)


def verify_solution(omega: IntervalUnion, measure: PeriodicMeasure) -> TilingSolution:
    """Re-verify a mu-form periodic measure against the exact convolution identity.

    Raises PeriodError / ValueError when the measure is not a weak tiling
    of the complement of omega; returns the wrapped, certified solution.
    """
    if not measure.has_unit_origin:
        raise ValueError("mu-form measure must carry the unit atom at 0")
    T = measure.period
    span = omega.span
    window = Window(-T - span, T + span)
    lo = window.left - omega.right
    hi = window.right - omega.left
    nu = measure.materialize_nu(lo, hi)
    if nu is None:
        raise ValueError("measure has no atoms near the window; cannot tile")
    verdict = weak_tiling_check(omega, nu, window)
    if not verdict.holds:
        raise ValueError(f"measure fails the weak tiling identity: {verdict}")

    omega0 = omega.shift(-omega.left)
    grid_pts = [p for p, _ in measure.atoms]
    cells = _period_cells(omega0, grid_pts, T)
    period_cells = []
    for cell in cells:
        mid = cell.midpoint()
        value = sum(
            (w * _coverage_count(omega0, p, T, mid) for p, w in measure.atoms),
            Fraction(0),
        )
        period_cells.append((cell, value))
    kind = "proper" if all(w == 1 for _, w in measure.atoms) else "weak"
    return TilingSolution(omega, measure, kind, window, tuple(period_cells))


def proper_period_valid(omega: IntervalUnion, period: RationalLike) -> tuple[bool, str]:
    """A T-periodic proper tiling needs T = m * |Omega| translates-per-period bookkeeping."""
    T = rat(period)
    if T <= 0:
        return False, "period must be positive"
    ratio = T / omega.measure
    if ratio.denominator != 1:
        return (
            False,
            f"period {T} is not an integer multiple of the total measure "
            f"{omega.measure}; a T-periodic proper tiling needs T = m*|Omega|",
        )
    return True, f"{int(ratio)} translates per period"


def _arcs(
    omega0: IntervalUnion, g: Fraction, period: Fraction
) -> list[tuple[Fraction, Fraction]]:
    """Open arcs of (Omega + g) mod T inside [0, T); components may wrap once."""
    out = []
    for c in omega0.components:
        s = (c.left + g) % period
        e = s + c.length
        if e <= period:
            out.append((s, e))
        else:
            out.append((s, period))
            out.append((Fraction(0), e - period))
    return out


def proper_tiling_search(
    omega: IntervalUnion, period: RationalLike
) -> list[TilingSolution]:
    """All T-periodic proper tilings (unit weights), deduplicated up to cyclic shift.

    Backtracking over translate sets inside the semigroup grid: the
    leftmost uncovered point of the period torus must be the start of some
    translated component, which keeps the branching factor at most the
    number of components.  Returns canonical representatives anchored at 0.
    """
    T = rat(period)
    ok, _ = proper_period_valid(omega, T)
    if not ok:
        return []
    omega0 = omega.shift(-omega.left)
    grid_set = set(default_grid(omega, T))
    m = int(T / omega.measure)

    component_lefts = [c.left for c in omega0.components]
    solutions: set[tuple[Fraction, ...]] = set()

    def covered_insert(
        covered: list[tuple[Fraction, Fraction]], arcs: list[tuple[Fraction, Fraction]]
    ) -> Optional[list[tuple[Fraction, Fraction]]]:
        # exact overlap test against the sorted disjoint covered list
        merged = list(covered)
        for s, e in arcs:
            for cs, ce in merged:
                if s < ce and cs < e:
                    return None
            merged.append((s, e))
        merged.sort()
        out = [merged[0]]
        for s, e in merged[1:]:
            ls, le = out[-1]
            if s == le:
                out[-1] = (ls, e)
            else:
                out.append((s, e))
        return out

    def leftmost_uncovered(covered: list[tuple[Fraction, Fraction]]) -> Optional[Fraction]:
        x = Fraction(0)
        for s, e in covered:
            if s > x:
                return x
            x = max(x, e)
        return x if x < T else None

    def search(
        placed: list[Fraction], covered: list[tuple[Fraction, Fraction]]
    ) -> None:
        x = leftmost_uncovered(covered)
        if x is None:
            solutions.add(tuple(sorted(placed)))
            return
        if len(placed) >= m:
            return
        candidates = sorted(
            {(x - a) % T for a in component_lefts} & grid_set - set(placed)
        )
        for g in candidates:
            nxt = covered_insert(covered, _arcs(omega0, g, T))
            if nxt is None:
                continue
            placed.append(g)
            search(placed, nxt)
            placed.pop()

    first = covered_insert([], _arcs(omega0, Fraction(0), T))
    if first is not None:
        search([Fraction(0)], first)

    canonical: set[tuple[Fraction, ...]] = set()
    for sol in solutions:
        canonical.add(
            min(tuple(sorted((h - g) % T for h in sol)) for g in sol)
        )
    out = []
    for sol in sorted(canonical):
        measure = PeriodicMeasure(T, tuple((g, Fraction(1)) for g in sol))
        out.append(verify_solution(omega, measure))
    return out


def anchored_proper_tilings(
    omega: IntervalUnion, period: RationalLike
) -> list[tuple[Fraction, ...]]:
    """All 0-anchored translate sets of proper tilings (cyclic classes expanded)."""
    T = rat(period)
    anchored: set[tuple[Fraction, ...]] = set()
    for sol in proper_tiling_search(omega, T):
        pts = tuple(p for p, _ in sol.measure.atoms)
        for g in pts:
            anchored.add(tuple(sorted((h - g) % T for h in pts)))
    return sorted(anchored)


@dataclass(frozen=True)
class DecompositionReport:
    """Outcome of expressing a weak tiling as a convex combination of proper tilings.

    `not_decomposable` is relative to the proper tilings discoverable with
    the same period and grid; it is never a global negative certificate.
    """

    kind: str  # "already_proper" | "decomposed" | "not_decomposable"
    components: tuple[tuple[Fraction, PeriodicMeasure], ...]
    note: str


def vertex_decompose(sol: TilingSolution, omega: IntervalUnion) -> DecompositionReport:
    """Try to write the solution's measure as a convex combination of proper tilings."""
    if sol.kind == "proper":
        return DecompositionReport(
            "already_proper", (), "all weights are 1; nothing to decompose"
        )
    T = sol.measure.period
    basis = anchored_proper_tilings(omega, T)
    if not basis:
        return DecompositionReport(
            "not_decomposable",
            (),
            f"no proper tilings with period {T} on the semigroup grid; "
            "inconclusive beyond this period and grid",
        )
    points = sorted(
        {p for p, _ in sol.measure.atoms} | {p for lam in basis for p in lam}
    )
    rows = []
    rhs = []
    for u in points:
        rows.append([Fraction(1 if u in lam else 0) for lam in basis])
        rhs.append(sol.measure.weight_at(u))
    alphas = solve_feasibility(rows, rhs, len(basis))
    if alphas is None:
        return DecompositionReport(
            "not_decomposable",
            (),
            f"no convex combination of the {len(basis)} proper tilings found for "
            f"period {T} matches the measure; inconclusive beyond this period and grid",
        )
    components = tuple(
        (a, PeriodicMeasure(T, tuple((g, Fraction(1)) for g in lam)))
        for a, lam in zip(alphas, basis)
        if a > 0
    )
    return DecompositionReport(
        "decomposed", components, f"convex combination of {len(components)} proper tilings"
    )


@dataclass(frozen=True)
class DensityReport:
    max_atoms_per_unit_window: int
    max_mass_per_unit_window: Fraction


def density_report(sol: TilingSolution) -> DensityReport:
    """Exact sup over open unit windows of atom count and mass of the tiling measure.

    The measure nu misses only the origin atom of the periodization, and
    any extremal window can be translated by a multiple of the period to
    avoid the origin, so the sup equals the one computed for the fully
    periodic set; periodicity reduces it to finitely many window positions.
    """
    T = sol.measure.period
    atoms = sol.measure.atoms
    crit = sorted({p % T for p, _ in atoms} | {(p - 1) % T for p, _ in atoms})
    probes = []
    for a, b in zip(crit, crit[1:]):
        probes.append((a + b) / 2)
    probes.append((crit[-1] + crit[0] + T) / 2)  # wrap-around cell

    best_count = 0
    best_mass = Fraction(0)
    for x in probes:
        count = 0
        mass = Fraction(0)
        for p, w in atoms:
            k = _int_count_open((x - p) / T, (x + 1 - p) / T)
            count += k
            mass += k * w
        best_count = max(best_count, count)
        best_mass = max(best_mass, mass)
    return DensityReport(best_count, best_mass)
