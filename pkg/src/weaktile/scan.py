"""Left-to-right scan certification of weighted interval covers.

A system of weighted open intervals covers an interval I exactly when
  sum_j w_j 1_{I_j} = 1_I   a.e.
The scan walks the frontier from left to right: at each breakpoint the
group of pieces starting there must top the running level up to exactly 1,
and the certificate records those groups and levels.  Failure pinpoints
the first deficit point or excess cell.  Because all data are rational and
piece lists finite, the frontier accounting is exact; no epsilon
neighborhoods are needed.
"""

from __future__ import annotations

import bisect
import heapq
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Optional

from .core import AtomicMeasure, Interval, RationalLike, Window, rat


class ScanError(Exception):
    """Base class for cover-certification failures."""


class PieceEscapesInterval(ScanError):
    def __init__(self, piece: Interval, region: str):
        self.piece = piece
        self.region = region
        super().__init__(f"piece {piece} is not contained in {region}")


class CoverDeficit(ScanError):
    """The achievable mass at the frontier point falls short of 1."""

    def __init__(self, at: Fraction, achieved: Fraction):
        self.at = at
        self.achieved = achieved
        super().__init__(f"cover deficit at {at}: achievable level {achieved} < 1")


class CoverExcess(ScanError):
    """Summed weights exceed 1 on a cell."""

    def __init__(self, cell: Interval, level: Fraction):
        self.cell = cell
        self.level = level
        super().__init__(f"cover excess on {cell}: level {level} > 1")


@dataclass(frozen=True)
class WeightedPieces:
    """Weighted open intervals whose lengths come from a declared finite set.

    Coinciding intervals are pre-merged by summing their weights, so the
    pieces are distinct and sorted by (left, length).
    """

    pieces: tuple[tuple[Interval, Fraction], ...]
    lengths: tuple[Fraction, ...]

    def __post_init__(self) -> None:
        lengths = tuple(sorted({rat(l) for l in self.lengths}))
        if not lengths or lengths[0] <= 0:
            raise ValueError("length set must be nonempty and positive")
        acc: dict[tuple[Fraction, Fraction], Fraction] = {}
        for iv, w in self.pieces:
            w = rat(w)
            if w <= 0:
                raise ValueError(f"piece {iv} has nonpositive weight {w}")
            if iv.length not in lengths:
                raise ValueError(
                    f"piece {iv} has length {iv.length} outside the declared set {list(lengths)}"
                )
            key = (iv.left, iv.right)
            acc[key] = acc.get(key, Fraction(0)) + w
        merged = tuple(
            (Interval(l, r), acc[(l, r)])
            for l, r in sorted(acc, key=lambda k: (k[0], k[1] - k[0]))
        )
        object.__setattr__(self, "pieces", merged)
        object.__setattr__(self, "lengths", lengths)

    @classmethod
    def from_triples(
        cls,
        triples: Iterable[tuple[RationalLike, RationalLike, RationalLike]],
        lengths: Iterable[RationalLike],
    ) -> "WeightedPieces":
        return cls(
            tuple((Interval(rat(a), rat(b)), rat(w)) for a, b, w in triples),
            tuple(rat(l) for l in lengths),
        )

    def __len__(self) -> int:
        return len(self.pieces)


@dataclass(frozen=True)
class ScanCertificate:
    """Breakpoints, piece groups and levels produced by a successful scan.

    breakpoints[k] is where group k starts; levels[k] is the coverage level
    just right of it contributed by earlier groups, and the group's weights
    sum to exactly 1 - levels[k].  Piece indices refer to the canonical
    order of the WeightedPieces input.
    """

    breakpoints: tuple[Fraction, ...]
    groups: tuple[tuple[int, ...], ...]
    levels: tuple[Fraction, ...]
    truncated: bool = False

    @property
    def step_count(self) -> int:
        return len(self.groups)


def _scan(
    start: Fraction,
    stop: Fraction,
    pieces: tuple[tuple[Interval, Fraction], ...],
    allow_truncation: bool,
) -> ScanCertificate:
    """Shared frontier sweep; `stop` is the right end (interval end or window end)."""
    by_left: dict[Fraction, tuple[int, ...]] = {}
    for j, (iv, _) in enumerate(pieces):
        by_left.setdefault(iv.left, ())
        by_left[iv.left] += (j,)
    lefts = sorted(by_left)
    active: list[tuple[Fraction, Fraction]] = []  # heap of (right, weight)
    level = Fraction(0)

    def next_event(x: Fraction, extra_rights: tuple[Fraction, ...] = ()) -> Optional[Fraction]:
        # earliest point > x where coverage can change
        candidates = list(extra_rights)
        i = bisect.bisect_right(lefts, x)
        if i < len(lefts):
            candidates.append(lefts[i])
        if active:
            candidates.append(active[0][0])
        return min(candidates) if candidates else None

    x = start
    breakpoints = [x]
    groups: list[tuple[int, ...]] = []
    levels: list[Fraction] = []

    while True:
        # pieces ending at or before the frontier leave the running level
        while active and active[0][0] <= x:
            _, w = heapq.heappop(active)
            level -= w
        group = by_left.get(x, ())
        have = sum((pieces[j][1] for j in group), Fraction(0))
        need = 1 - level
        if have > need:
            rights = tuple(pieces[j][0].right for j in group)
            nxt = next_event(x, rights)
            raise CoverExcess(Interval(x, nxt if nxt is not None else x + 1), level + have)
        if have < need:
            raise CoverDeficit(x, level + have)
        levels.append(level)
        groups.append(group)
        for j in group:
            iv, w = pieces[j]
            heapq.heappush(active, (iv.right, w))
        level += have  # == 1 now

        nxt = next_event(x)
        assert nxt is not None  # level == 1 implies an active piece must end
        if nxt >= stop:
            breakpoints.append(nxt if allow_truncation else stop)
            return ScanCertificate(
                tuple(breakpoints),
                tuple(groups),
                tuple(levels),
                truncated=allow_truncation,
            )
        breakpoints.append(nxt)
        x = nxt


def scan_cover(interval: Interval, pieces: WeightedPieces) -> ScanCertificate:
    """Certify sum_j w_j 1_{I_j} == 1_I a.e. by the inductive frontier scan.

    Raises PieceEscapesInterval, CoverDeficit or CoverExcess on failure.
    """
    for iv, _ in pieces.pieces:
        if iv.left < interval.left or iv.right > interval.right:
            raise PieceEscapesInterval(iv, str(interval))
    return _scan(interval.left, interval.right, pieces.pieces, allow_truncation=False)


def halfline_scan(
    a: RationalLike, pieces: WeightedPieces, window: Window
) -> ScanCertificate:
    """Scan a cover of the half-line (a, +inf), certified up to the window's right end.

    Pieces must lie in (a, +inf); pieces not meeting (a, right(window)) are
    irrelevant and ignored.  The final breakpoint is the first frontier
    point at or beyond right(window).
    """
    a = rat(a)
    if not window.left >= a:
        raise ValueError(f"window {window} must lie in ({a}, +inf)")
    for iv, _ in pieces.pieces:
        if iv.left < a:
            raise PieceEscapesInterval(iv, f"({a}, +inf)")
    relevant = tuple(
        (iv, w) for iv, w in pieces.pieces if iv.left < window.right
    )
    return _scan(a, window.right, relevant, allow_truncation=True)


def gap_chain(interval: Interval, pieces: WeightedPieces) -> list[int]:
    """A chain of piece indices whose intervals abut and connect the two ends of I.

    Requires a successful scan (the cover identity).  At each point the
    shortest piece starting there is chosen, which makes the chain
    deterministic; its lengths sum to |I|.
    """
    scan_cover(interval, pieces)  # raises if the cover identity fails
    starts: dict[Fraction, list[int]] = {}
    for j, (iv, _) in enumerate(pieces.pieces):
        starts.setdefault(iv.left, []).append(j)
    chain = []
    x = interval.left
    while x < interval.right:
        here = starts.get(x)
        if not here:
            # impossible after a successful scan: mass balance at x would fail
            raise RuntimeError(f"no piece starts at chain point {x}")
        j = min(here, key=lambda j: pieces.pieces[j][0].length)
        chain.append(j)
        x = pieces.pieces[j][0].right
    return chain


def derivative_identity(interval: Interval, pieces: WeightedPieces) -> bool:
    """Check delta_a - delta_b == sum_j w_j (delta_{x_j} - delta_{y_j}) as signed measures.

    A necessary condition for the cover identity, evaluated independently
    of the scan.
    """
    masses: dict[Fraction, Fraction] = {}
    for iv, w in pieces.pieces:
        masses[iv.left] = masses.get(iv.left, Fraction(0)) + w
        masses[iv.right] = masses.get(iv.right, Fraction(0)) - w
    masses = {p: m for p, m in masses.items() if m != 0}
    return masses == {interval.left: Fraction(1), interval.right: Fraction(-1)}


def pieces_measure(pieces: WeightedPieces) -> AtomicMeasure:
    """Positive endpoint measure sum_j w_j delta_{x_j}; handy for diagnostics."""
    return AtomicMeasure.from_pairs((iv.left, w) for iv, w in pieces.pieces)
