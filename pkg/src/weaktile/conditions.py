"""Necessary conditions and special-case classifiers for weak tilings.

Every checker returns a machine-readable justification (a representation
vector, an obstruction value, a forced measure) rather than a bare
boolean, so the CLI can emit certificates.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from typing import Optional

from .core import AtomicMeasure, IntervalUnion, Window
from .semigroup import LengthSemigroup, length_semigroup


@dataclass(frozen=True)
class GapEntry:
    index: int
    length: Fraction
    representation: Optional[tuple[int, ...]]


@dataclass(frozen=True)
class GapReport:
    """Representability of each gap length in the length semigroup.

    A single non-representable gap certifies that the union cannot weakly
    tile its complement (hence cannot tile, and is not spectral either).
    """

    generators: tuple[Fraction, ...]
    entries: tuple[GapEntry, ...]

    @property
    def passed(self) -> bool:
        return all(e.representation is not None for e in self.entries)

    @property
    def non_weak_tiler(self) -> bool:
        return not self.passed

    def first_obstruction(self) -> Optional[GapEntry]:
        for e in self.entries:
            if e.representation is None:
                return e
        return None


def gap_condition(omega: IntervalUnion) -> GapReport:
    """Check that every gap length is a nonnegative integer combination of the lengths."""
    if len(omega.components) < 2:
        raise ValueError("gap condition needs at least two components")
    sg = length_semigroup(omega)
    entries = tuple(
        GapEntry(i, g, sg.member(g)) for i, g in enumerate(omega.gaps)
    )
    return GapReport(sg.generators, entries)


@dataclass(frozen=True)
class IntegerSupportGrid:
    """Support constraint for measures: atoms live on step*Z minus {0}."""

    step: Fraction

    def points_in(self, window: Window) -> list[Fraction]:
        lo = window.left / self.step
        hi = window.right / self.step
        first = lo.numerator // lo.denominator  # floor
        if Fraction(first) < lo:
            first += 1
        out = []
        k = first
        while Fraction(k) <= hi:
            if k != 0:
                out.append(k * self.step)
            k += 1
        return out


@dataclass(frozen=True)
class IntegerCaseReport:
    gap_lengths: tuple[Fraction, ...]
    gaps_integral: bool
    offending_gap: Optional[Fraction]
    support: Optional[IntegerSupportGrid]

    @property
    def non_weak_tiler(self) -> bool:
        return not self.gaps_integral


def integer_case(omega: IntervalUnion) -> IntegerCaseReport:
    """For integer component lengths: gaps must be integers, atoms must sit on Z minus {0}.

    Raises ValueError if some component length is not an integer (rescale
    commensurable instances first).
    """
    for l in omega.lengths:
        if l.denominator != 1:
            raise ValueError(f"component length {l} is not an integer; rescale first")
    gaps = omega.gaps
    offending = next((g for g in gaps if g.denominator != 1), None)
    integral = offending is None
    support = IntegerSupportGrid(Fraction(1)) if integral else None
    return IntegerCaseReport(gaps, integral, offending, support)


@dataclass(frozen=True)
class ForcedTiling:
    """The unique weak tiling of a single interval: unit atoms on a full lattice.

    For an interval of length l the measure is forced to be unit atoms at
    l*(Z minus {0}); translating the interval does not change the measure.
    """

    period: Fraction

    def measure_on(self, window: Window) -> AtomicMeasure:
        first = window.left / self.period
        k = first.numerator // first.denominator  # floor
        points = []
        while Fraction(k) * self.period <= window.right:
            if k != 0 and window.left <= k * self.period:
                points.append(k * self.period)
            k += 1
        return AtomicMeasure.unit_atoms(points)


def single_interval(omega: IntervalUnion) -> ForcedTiling:
    """Forced proper tiling for a one-component union."""
    if len(omega.components) != 1:
        raise ValueError("single_interval needs exactly one component")
    return ForcedTiling(omega.components[0].length)


class TwoIntervalCase(Enum):
    UNEQUAL_LENGTHS_PROPER_FORCED = "UnequalLengths_ProperForced"
    EQUAL_LENGTHS_GAP_MULTIPLE = "EqualLengths_GapMultiple"
    EQUAL_LENGTHS_GAP_NOT_MULTIPLE = "EqualLengths_GapNotMultiple"


@dataclass(frozen=True)
class TwoIntervalVerdict:
    case: TwoIntervalCase
    detail: str
    gap: Fraction
    multiple: Optional[int] = None


def classify_two_intervals(omega: IntervalUnion) -> TwoIntervalVerdict:
    """Classify a two-component union by the forced structure of its weak tilings.

    Unequal lengths force any weak tiling to be proper (short and long
    copies must alternate).  Equal lengths l admit a weak tiling exactly
    when the gap is a positive integer multiple of l, in which case a
    proper tiling exists too.
    """
    if len(omega.components) != 2:
        raise ValueError("classify_two_intervals needs exactly two components")
    l1, l2 = omega.lengths
    gap = omega.gaps[0]
    # normal form (0,h) u (a,b) with h <= b-a, reached by reflection+translation
    h, l = (l1, l2) if l1 <= l2 else (l2, l1)
    if l1 != l2:
        return TwoIntervalVerdict(
            TwoIntervalCase.UNEQUAL_LENGTHS_PROPER_FORCED,
            f"lengths {h} != {l}: every weak tiling is a proper tiling, "
            "with short and long intervals alternating",
            gap,
        )
    ratio = gap / l1
    if ratio.denominator == 1 and ratio >= 1:
        m = int(ratio)
        return TwoIntervalVerdict(
            TwoIntervalCase.EQUAL_LENGTHS_GAP_MULTIPLE,
            f"gap {gap} = {m} * {l1}: a proper tiling exists",
            gap,
            multiple=m,
        )
    return TwoIntervalVerdict(
        TwoIntervalCase.EQUAL_LENGTHS_GAP_NOT_MULTIPLE,
        f"gap {gap} is not a positive integer multiple of the common length {l1}: "
        "no weak tiling exists",
        gap,
    )
