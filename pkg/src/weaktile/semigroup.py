"""Additive semigroup generated by a finite set of positive rational lengths.

The semigroup of all sums  sum_i p_i * l_i  with nonnegative integer
multiplicities governs which gap lengths are representable and where a
weak tiling measure may carry atoms.  Membership and enumeration run on a
rescaled integer lattice via a coin-problem sieve, so every answer is an
exact certificate: a representation vector, or a definite "no".
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import gcd, lcm
from typing import Iterable, Optional

from .core import IntervalUnion, RationalLike, Window, rat


def rational_gcd(a: Fraction, b: Fraction) -> Fraction:
    """Largest rational whose integer multiples include both a and b."""
    return Fraction(
        gcd(a.numerator * b.denominator, b.numerator * a.denominator),
        a.denominator * b.denominator,
    )


def rational_lcm(a: Fraction, b: Fraction) -> Fraction:
    return a * b / rational_gcd(a, b)


@dataclass(frozen=True)
class FrobeniusResult:
    """Structure of the non-representable part of the rescaled lattice.

    All lattice points step*k, k large, belong to the semigroup; `largest_gap`
    is the largest multiple of `step` that does not (None if every nonnegative
    multiple is representable).  `gcd` > 1 of the integer generators is what
    makes `step` coarser than 1/scale.
    """

    gcd: int
    step: Fraction
    largest_gap: Optional[Fraction]

    @property
    def all_representable(self) -> bool:
        return self.largest_gap is None


class LengthSemigroup:
    """Semigroup generated by positive rational lengths, with a memoized sieve.

    `scale` is the least positive integer making every generator integral
    (the lcm of the reduced denominators); `integer_generators` is the
    rescaled sorted generator list and `gcd` its greatest common divisor.
    Queries extend the sieve as needed; the object is otherwise immutable.
    """

    def __init__(self, generators: Iterable[RationalLike]):
        gens = sorted({rat(g) for g in generators})
        if not gens:
            raise ValueError("need at least one generator")
        if gens[0] <= 0:
            raise ValueError("generators must be positive")
        self.generators: tuple[Fraction, ...] = tuple(gens)
        self.scale: Fraction = Fraction(lcm(*(g.denominator for g in gens)))
        int_gens = [int(g * self.scale) for g in gens]
        self.integer_generators: tuple[int, ...] = tuple(int_gens)
        self.gcd: int = gcd(*int_gens)
        # _reach[i][v] == 1 iff v is a sum of generators[i:] (suffix tables,
        # so representations can be lexicographically minimized).
        self._reach: list[bytearray] = []
        self._built: int = -1

    def __repr__(self) -> str:
        return f"LengthSemigroup({list(self.generators)})"

    def _ensure(self, bound: int) -> None:
        if bound <= self._built:
            return
        n = len(self.integer_generators)
        reach = [bytearray(bound + 1) for _ in range(n + 1)]
        reach[n][0] = 1
        for i in range(n - 1, -1, -1):
            a = self.integer_generators[i]
            row = reach[i]
            nxt = reach[i + 1]
            for v in range(bound + 1):
                if nxt[v]:
                    row[v] = 1
                elif v >= a and row[v - a]:
                    row[v] = 1
        self._reach = reach
        self._built = bound

    def _lattice_value(self, x: Fraction) -> Optional[int]:
        v = x * self.scale
        if v.denominator != 1:
            return None
        return int(v)

    def member(self, x: RationalLike) -> Optional[tuple[int, ...]]:
        """Lexicographically smallest representation vector for x, or None.

        The vector is aligned with the sorted, deduplicated generator list.
        """
        x = rat(x)
        if x < 0:
            raise ValueError(f"membership is defined for x >= 0, got {x}")
        v = self._lattice_value(x)
        if v is None:
            return None
        self._ensure(v)
        if not self._reach[0][v]:
            return None
        rep = []
        rem = v
        for i, a in enumerate(self.integer_generators):
            c = 0
            while rem - c * a >= 0 and not self._reach[i + 1][rem - c * a]:
                c += 1
            if rem - c * a < 0:
                raise AssertionError("sieve invariant violated")  # pragma: no cover
            rep.append(c)
            rem -= c * a
        return tuple(rep)

    def __contains__(self, x: RationalLike) -> bool:
        try:
            return self.member(x) is not None
        except ValueError:
            return False

    def enumerate_up_to(self, bound: RationalLike) -> list[Fraction]:
        """All semigroup elements in [0, bound], sorted, each exactly once."""
        bound = rat(bound)
        if bound < 0:
            raise ValueError("bound must be nonnegative")
        top = int(bound * self.scale)  # floor: values above it exceed bound
        self._ensure(top)
        row = self._reach[0]
        return [Fraction(v, 1) / self.scale for v in range(top + 1) if row[v]]

    def frobenius(self) -> FrobeniusResult:
        """Largest non-representable lattice point, reported structurally.

        For gcd g of the integer generators, the semigroup lives on the
        lattice of multiples of step = g/scale; the result gives the largest
        missing multiple of `step` (None when everything is representable,
        e.g. when the smallest reduced generator is 1).
        """
        g = self.gcd
        step = Fraction(g) / self.scale
        reduced = [a // g for a in self.integer_generators]
        if reduced[0] == 1:
            return FrobeniusResult(g, step, None)
        largest = _frobenius_integer(reduced)
        return FrobeniusResult(g, step, Fraction(largest) * step)

    def conductor(self) -> Fraction:
        """Smallest c >= 0 such that every multiple of step that is >= c is in the semigroup."""
        res = self.frobenius()
        if res.largest_gap is None:
            return Fraction(0)
        return res.largest_gap + res.step


def _frobenius_integer(gens: list[int]) -> int:
    """Largest integer not representable by gens (gcd(gens) == 1, min(gens) > 1).

    Self-certifying sieve: once min(gens) consecutive representable values
    appear, everything beyond them is representable too.
    """
    low = gens[0]
    bound = max(gens) * low
    while True:
        reach = bytearray(bound + 1)
        reach[0] = 1
        for a in gens:
            for v in range(a, bound + 1):
                if reach[v - a]:
                    reach[v] = 1
        largest = max((v for v in range(bound + 1) if not reach[v]), default=-1)
        if largest >= 0 and bound - largest >= low:
            return largest
        bound *= 2


def length_semigroup(omega: IntervalUnion) -> LengthSemigroup:
    """Semigroup generated by the component lengths of an interval union."""
    return LengthSemigroup(omega.lengths)


def candidate_support(omega: IntervalUnion, window: Window) -> list[Fraction]:
    """All points in the window where a weak tiling measure for omega may have atoms.

    This is (Theta u -Theta) minus {0} intersected with the closed window,
    where Theta is the semigroup of the component lengths.  Atoms are
    points, so the window endpoints are included.
    """
    sg = length_semigroup(omega)
    points: set[Fraction] = set()
    if window.right > 0:
        for x in sg.enumerate_up_to(window.right):
            if x != 0 and x >= window.left:
                points.add(x)
    if window.left < 0:
        for x in sg.enumerate_up_to(-window.left):
            if x != 0 and -x <= window.right:
                points.add(-x)
    return sorted(points)
