"""Exact interval, step-function and atomic-measure arithmetic over the rationals.

Every set identity in this package is an almost-everywhere identity:
intervals are open, step functions carry values on open cells only, and
the value at a breakpoint is deliberately undefined.  All scalars are
`fractions.Fraction`; nothing in this module touches floating point.

The central operation is `convolve_indicator`, which realises
1_Omega * mu for a finite positive atomic measure mu as a canonical step
function, and `weak_tiling_check`, which decides the defining identity
    1_Omega * nu == 1 on the complement of Omega, 0 on Omega   (a.e.)
exactly on a caller-supplied window.
"""

from __future__ import annotations

import bisect
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Iterator, Optional, Sequence, Union

Rational = Fraction

RationalLike = Union[Fraction, int, str]


def rat(x: RationalLike) -> Fraction:
    """Coerce to an exact Fraction.  Floats are refused, not rounded."""
    if isinstance(x, float):
        raise TypeError(
            "binary float %r is not exact; pass an int, a Fraction, or a "
            "string such as '3/4' or '0.75'" % (x,)
        )
    return Fraction(x)


@dataclass(frozen=True)
class Interval:
    """Open, bounded, nonempty interval (left, right) with rational endpoints."""

    left: Fraction
    right: Fraction

    def __post_init__(self) -> None:
        object.__setattr__(self, "left", rat(self.left))
        object.__setattr__(self, "right", rat(self.right))
        if not self.left < self.right:
            raise ValueError(f"empty interval ({self.left}, {self.right})")

    @property
    def length(self) -> Fraction:
        return self.right - self.left

    def shift(self, s: RationalLike) -> "Interval":
        s = rat(s)
        return Interval(self.left + s, self.right + s)

    def contains_point(self, x: Fraction) -> bool:
        return self.left < x < self.right

    def overlaps(self, other: "Interval") -> bool:
        """True iff the intersection has positive measure."""
        return self.left < other.right and other.left < self.right

    def midpoint(self) -> Fraction:
        return (self.left + self.right) / 2

    def __str__(self) -> str:
        return f"({self.left}, {self.right})"


@dataclass(frozen=True)
class Window:
    """Finite observation window [left, right], left < right.

    A.e. comparisons look at the open cells inside the window; point-set
    operations (atom candidates) include the endpoints.
    """

    left: Fraction
    right: Fraction

    def __post_init__(self) -> None:
        object.__setattr__(self, "left", rat(self.left))
        object.__setattr__(self, "right", rat(self.right))
        if not self.left < self.right:
            raise ValueError(f"empty window ({self.left}, {self.right})")

    def __str__(self) -> str:
        return f"({self.left}, {self.right})"


@dataclass(frozen=True)
class IntervalUnion:
    """Finite union of open intervals with strictly separated components.

    Consecutive components satisfy right_k < left_{k+1}; touching or
    overlapping input intervals must be merged first (see `normalize_union`),
    since a.e. they describe the same set.
    """

    components: tuple[Interval, ...]

    def __post_init__(self) -> None:
        comps = tuple(self.components)
        if not comps:
            raise ValueError("interval union must have at least one component")
        for a, b in zip(comps, comps[1:]):
            if not a.right < b.left:
                raise ValueError(
                    f"components {a} and {b} are not strictly separated; "
                    "use normalize_union to merge touching intervals"
                )
        object.__setattr__(self, "components", comps)

    @property
    def left(self) -> Fraction:
        return self.components[0].left

    @property
    def right(self) -> Fraction:
        return self.components[-1].right

    @property
    def measure(self) -> Fraction:
        return sum((c.length for c in self.components), Fraction(0))

    @property
    def span(self) -> Fraction:
        """Diameter: right end of the last component minus left end of the first."""
        return self.right - self.left

    @property
    def lengths(self) -> tuple[Fraction, ...]:
        return tuple(c.length for c in self.components)

    @property
    def gaps(self) -> tuple[Fraction, ...]:
        """Lengths of the gaps between consecutive components."""
        return tuple(
            b.left - a.right for a, b in zip(self.components, self.components[1:])
        )

    def shift(self, s: RationalLike) -> "IntervalUnion":
        s = rat(s)
        return IntervalUnion(tuple(c.shift(s) for c in self.components))

    def contains_point(self, x: Fraction) -> bool:
        return any(c.contains_point(x) for c in self.components)

    def __str__(self) -> str:
        return " u ".join(str(c) for c in self.components)


def normalize_union(intervals: Iterable[Interval]) -> IntervalUnion:
    """Sort intervals and merge overlapping or endpoint-touching ones.

    Touching intervals differ from their union by a null set, so they are
    merged; the result always has strictly separated components.
    """
    items = sorted(intervals, key=lambda iv: (iv.left, iv.right))
    if not items:
        raise ValueError("cannot normalize an empty list of intervals")
    merged: list[Interval] = [items[0]]
    for iv in items[1:]:
        last = merged[-1]
        if iv.left <= last.right:
            if iv.right > last.right:
                merged[-1] = Interval(last.left, iv.right)
        else:
            merged.append(iv)
    return IntervalUnion(tuple(merged))


@dataclass(frozen=True)
class StepFunction:
    """Piecewise-constant function on R in canonical form.

    `breakpoints` is strictly increasing; `values` has one more entry and
    gives the constant on each open cell, including the two unbounded end
    cells.  Adjacent cells never share a value (they would have been
    merged), and the value at a breakpoint itself is undefined.
    """

    breakpoints: tuple[Fraction, ...]
    values: tuple[Fraction, ...]

    def __post_init__(self) -> None:
        bps = tuple(rat(b) for b in self.breakpoints)
        vals = tuple(rat(v) for v in self.values)
        if len(vals) != len(bps) + 1:
            raise ValueError("need exactly one value per cell (len(values) == len(breakpoints)+1)")
        for a, b in zip(bps, bps[1:]):
            if not a < b:
                raise ValueError("breakpoints must be strictly increasing")
        # canonical form: drop breakpoints separating equal-valued cells
        cbps: list[Fraction] = []
        cvals: list[Fraction] = [vals[0]]
        for b, v in zip(bps, vals[1:]):
            if v == cvals[-1]:
                continue
            cbps.append(b)
            cvals.append(v)
        object.__setattr__(self, "breakpoints", tuple(cbps))
        object.__setattr__(self, "values", tuple(cvals))

    @classmethod
    def constant(cls, value: RationalLike) -> "StepFunction":
        return cls((), (rat(value),))

    @classmethod
    def from_events(
        cls, events: Iterable[tuple[Fraction, Fraction]], base: RationalLike = 0
    ) -> "StepFunction":
        """Build from jump events (position, delta); value left of everything is `base`."""
        acc: dict[Fraction, Fraction] = {}
        for pos, delta in events:
            acc[rat(pos)] = acc.get(rat(pos), Fraction(0)) + rat(delta)
        bps: list[Fraction] = []
        vals: list[Fraction] = [rat(base)]
        for pos in sorted(acc):
            if acc[pos] == 0:
                continue
            bps.append(pos)
            vals.append(vals[-1] + acc[pos])
        return cls(tuple(bps), tuple(vals))

    def value_at(self, x: Fraction) -> Fraction:
        """Value on the open cell containing x; error if x is a breakpoint."""
        i = bisect.bisect_left(self.breakpoints, x)
        if i < len(self.breakpoints) and self.breakpoints[i] == x:
            raise ValueError(f"value at breakpoint {x} is undefined (a.e. semantics)")
        return self.values[i]

    def shift(self, s: RationalLike) -> "StepFunction":
        s = rat(s)
        return StepFunction(tuple(b + s for b in self.breakpoints), self.values)

    def scale(self, c: RationalLike) -> "StepFunction":
        c = rat(c)
        return StepFunction(self.breakpoints, tuple(c * v for v in self.values))

    def __add__(self, other: "StepFunction") -> "StepFunction":
        bps = sorted(set(self.breakpoints) | set(other.breakpoints))
        vals = []
        probes = _cell_probes(bps)
        for p in probes:
            vals.append(self.value_at(p) + other.value_at(p))
        return StepFunction(tuple(bps), tuple(vals))

    def __neg__(self) -> "StepFunction":
        return self.scale(-1)

    def __sub__(self, other: "StepFunction") -> "StepFunction":
        return self + (-other)

    def cells_in(self, window: Window) -> Iterator[tuple[Interval, Fraction]]:
        """Open cells of the window, clipped, with the function's value on each."""
        cuts = [window.left]
        for b in self.breakpoints:
            if window.left < b < window.right:
                cuts.append(b)
        cuts.append(window.right)
        for lo, hi in zip(cuts, cuts[1:]):
            cell = Interval(lo, hi)
            yield cell, self.value_at(cell.midpoint())

    def integrate(self, window: Window) -> Fraction:
        """Exact integral of the function over the window."""
        total = Fraction(0)
        for cell, v in self.cells_in(window):
            total += v * cell.length
        return total

    def support_bounds(self) -> Optional[tuple[Fraction, Fraction]]:
        """Smallest closed interval outside which the function is 0, or None if 0 everywhere.

        Requires both unbounded end cells to carry the value 0.
        """
        if not self.breakpoints:
            if self.values[0] != 0:
                raise ValueError("function is a nonzero constant; no bounded support")
            return None
        if self.values[0] != 0 or self.values[-1] != 0:
            raise ValueError("function does not vanish near infinity")
        return self.breakpoints[0], self.breakpoints[-1]


def _cell_probes(bps: Sequence[Fraction]) -> list[Fraction]:
    """One interior rational probe point per cell of the given breakpoint list."""
    if not bps:
        return [Fraction(0)]
    probes = [bps[0] - 1]
    for a, b in zip(bps, bps[1:]):
        probes.append((a + b) / 2)
    probes.append(bps[-1] + 1)
    return probes


def indicator(omega: IntervalUnion) -> StepFunction:
    """The indicator function 1_Omega as a canonical step function."""
    events = []
    for c in omega.components:
        events.append((c.left, Fraction(1)))
        events.append((c.right, Fraction(-1)))
    return StepFunction.from_events(events)


def complement_indicator(omega: IntervalUnion) -> StepFunction:
    """The indicator of the complement of Omega (1 outside, 0 inside)."""
    return StepFunction.constant(1) - indicator(omega)


@dataclass(frozen=True)
class AtomicMeasure:
    """Finite positive atomic measure: sorted distinct atoms (point, weight), weight > 0.

    Coinciding input atoms are merged by summing their weights.
    """

    atoms: tuple[tuple[Fraction, Fraction], ...]

    def __post_init__(self) -> None:
        acc: dict[Fraction, Fraction] = {}
        for point, weight in self.atoms:
            point, weight = rat(point), rat(weight)
            if weight <= 0:
                raise ValueError(f"atom at {point} has nonpositive weight {weight}")
            acc[point] = acc.get(point, Fraction(0)) + weight
        object.__setattr__(
            self, "atoms", tuple((p, acc[p]) for p in sorted(acc))
        )

    @classmethod
    def from_pairs(
        cls, pairs: Iterable[tuple[RationalLike, RationalLike]]
    ) -> "AtomicMeasure":
        return cls(tuple((rat(p), rat(w)) for p, w in pairs))

    @classmethod
    def unit_atoms(cls, points: Iterable[RationalLike]) -> "AtomicMeasure":
        return cls.from_pairs((p, 1) for p in points)

    @property
    def total_mass(self) -> Fraction:
        return sum((w for _, w in self.atoms), Fraction(0))

    @property
    def points(self) -> tuple[Fraction, ...]:
        return tuple(p for p, _ in self.atoms)

    def weight_at(self, point: Fraction) -> Fraction:
        i = bisect.bisect_left(self.points, point)
        if i < len(self.atoms) and self.atoms[i][0] == point:
            return self.atoms[i][1]
        return Fraction(0)

    def shift(self, s: RationalLike) -> "AtomicMeasure":
        s = rat(s)
        return AtomicMeasure(tuple((p + s, w) for p, w in self.atoms))

    def restrict_open(self, lo: Fraction, hi: Fraction) -> "AtomicMeasure | None":
        """Atoms with lo < point < hi, or None if none survive."""
        kept = tuple((p, w) for p, w in self.atoms if lo < p < hi)
        return AtomicMeasure(kept) if kept else None

    def __add__(self, other: "AtomicMeasure") -> "AtomicMeasure":
        return AtomicMeasure(self.atoms + other.atoms)


def convolve_indicator(omega: IntervalUnion, mu: AtomicMeasure) -> StepFunction:
    """1_Omega * mu as a canonical step function, exactly.

    Equals sum over atoms (t, w) of w * 1_{Omega + t}.
    """
    events = []
    for t, w in mu.atoms:
        for c in omega.components:
            events.append((c.left + t, w))
            events.append((c.right + t, -w))
    return StepFunction.from_events(events)


@dataclass(frozen=True)
class WeakTilingVerdict:
    """Outcome of a weak-tiling check: holds, or first offending cell with values."""

    holds: bool
    cell: Optional[Interval] = None
    value: Optional[Fraction] = None
    expected: Optional[Fraction] = None

    def __bool__(self) -> bool:
        return self.holds

    def __str__(self) -> str:
        if self.holds:
            return "holds"
        return f"violated on {self.cell}: got {self.value}, expected {self.expected}"


def weak_tiling_check(
    omega: IntervalUnion, nu: AtomicMeasure, window: Window
) -> WeakTilingVerdict:
    """Verify 1_Omega * nu == 1_{complement of Omega} exactly on every cell of the window.

    Atoms t with (Omega + t) disjoint from the window contribute nothing
    there and are ignored.  On failure, reports the leftmost offending cell
    together with the convolution value and the expected value on it.
    """
    lo = window.left - omega.right
    hi = window.right - omega.left
    restricted = nu.restrict_open(lo, hi)
    if restricted is None:
        conv = StepFunction.constant(0)
    else:
        conv = convolve_indicator(omega, restricted)
    target = complement_indicator(omega)
    bps = sorted(
        {window.left, window.right}
        | {b for b in conv.breakpoints if window.left < b < window.right}
        | {b for b in target.breakpoints if window.left < b < window.right}
    )
    for a, b in zip(bps, bps[1:]):
        cell = Interval(a, b)
        got = conv.value_at(cell.midpoint())
        want = target.value_at(cell.midpoint())
        if got != want:
            return WeakTilingVerdict(False, cell, got, want)
    return WeakTilingVerdict(True)


def step_equal_ae(f: StepFunction, g: StepFunction, window: Window) -> bool:
    """Exact a.e. equality of two step functions on a window."""
    bps = sorted(
        {window.left, window.right}
        | {b for b in f.breakpoints if window.left < b < window.right}
        | {b for b in g.breakpoints if window.left < b < window.right}
    )
    for a, b in zip(bps, bps[1:]):
        mid = (a + b) / 2
        if f.value_at(mid) != g.value_at(mid):
            return False
    return True
