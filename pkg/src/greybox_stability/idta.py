"""Cyclic extension of axis-crossing types and the qualitative verdict.

Crossing kinds are unrolled onto the integers so that each net step of +-4
equals one full clockwise loop of the determinant trajectory around the
origin.  The verdict is read off the last point: the system is stable exactly
when it lands within one step of the first point's coordinate.
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import InconsistentCurve, NonAdjacentSequence
from .trajectory import Crossing, CrossingKind


@dataclass(frozen=True)
class IdtaPoint:
    seq: int
    kind: CrossingKind
    coordinate: int
    omega_cross: float


@dataclass(frozen=True)
class IdtaCurve:
    """Ordered crossing points with extended cyclic coordinates.

    Invariants: adjacent coordinates differ by -1, 0 or +1, and every
    coordinate is congruent to its kind's label mod 4.
    """

    points: tuple[IdtaPoint, ...]
    source_form: str | None = None

    def __post_init__(self):
        prev = None
        for p in self.points:
            if (p.coordinate - int(p.kind)) % 4 != 0:
                raise ValueError(f"coordinate {p.coordinate} inconsistent with kind {p.kind!r}")
            if prev is not None and abs(p.coordinate - prev) > 1:
                raise ValueError("adjacent coordinates must differ by at most 1")
            prev = p.coordinate

    def __len__(self) -> int:
        return len(self.points)

    @property
    def first_kind(self) -> CrossingKind | None:
        return self.points[0].kind if self.points else None


@dataclass(frozen=True)
class StabilityVerdict:
    """Qualitative outcome: stable iff the net winding is zero.

    ``winding`` counts net clockwise loops of the trajectory around the
    origin, i.e. the estimated number of right-half-plane zeros of the
    return-difference determinant.
    """

    stable: bool
    winding: int
    first_coordinate: int | None
    last_coordinate: int | None
    diagnostics: tuple[str, ...] = ()

    def __post_init__(self):
        if self.stable != (self.winding == 0):
            raise ValueError("stable flag must equal (winding == 0)")


def build_idta(crossings: list[Crossing], source_form: str | None = None) -> IdtaCurve:
    """Assign extended coordinates to an ordered crossing sequence.

    The first point takes its kind's label (1..4); every subsequent point
    takes the unique integer congruent to its label mod 4 within one step of
    the previous coordinate.  Cyclically opposite consecutive kinds have no
    such integer and raise NonAdjacentSequence (under-sampled trajectory).
    """
    if any(c.origin_pass for c in crossings):
        raise ValueError("origin-pass crossings must be filtered out before building the curve")
    points: list[IdtaPoint] = []
    coord: int | None = None
    for seq, c in enumerate(crossings):
        label = int(c.kind)
        if coord is None:
            coord = label
        else:
            for candidate in (coord - 1, coord, coord + 1):
                if (candidate - label) % 4 == 0:
                    coord = candidate
                    break
            else:
                raise NonAdjacentSequence(
                    points[-1].omega_cross, c.omega_cross, (points[-1].kind, c.kind)
                )
        points.append(IdtaPoint(seq=seq, kind=c.kind, coordinate=coord, omega_cross=c.omega_cross))
    return IdtaCurve(tuple(points), source_form)


def stable_region(first: CrossingKind) -> tuple[int, int, int]:
    """Extended coordinates within one step of the first intersection's label."""
    label = int(first)
    return (label - 1, label, label + 1)


def assess(curve: IdtaCurve) -> StabilityVerdict:
    """Read the verdict off the curve: winding = nearest integer of span/4.

    An empty curve (no axis crossings at all) is stable with winding 0: a
    closed trajectory that never touches an axis cannot encircle the origin.
    """
    if not curve.points:
        return StabilityVerdict(
            stable=True, winding=0, first_coordinate=None, last_coordinate=None,
            diagnostics=("no-crossings",),
        )
    first = curve.points[0].coordinate
    last = curve.points[-1].coordinate
    winding = round((last - first) / 4.0)
    if abs((last - first) - 4 * winding) > 1:
        raise InconsistentCurve(
            f"curve span {last - first} is not within one adjacency step of a full loop count"
        )
    return StabilityVerdict(
        stable=(winding == 0),
        winding=int(winding),
        first_coordinate=first,
        last_coordinate=last,
    )
