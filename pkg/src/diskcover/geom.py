"""Geometric primitives shared by every stage of the solver.

Conventions used throughout the package:

* The separating line is the x-axis (instances are normalized first).
  Points live on or above it, disk centers on or below it.
* Regions are closed: a point on a boundary counts as covered.
* All comparisons are plain double-precision comparisons on squared
  distances or line evaluations; there is no epsilon tolerance.  Ties
  between equal coordinates are broken by input id, which plays the role
  of an infinitesimal perturbation and makes every ordering in the
  pipeline a strict total order.
* Coordinates and radii are bounded by ``COORD_LIMIT`` at load time so
  squared distances stay well inside the exact range of doubles.

Only a disk's portion above the line matters.  Its boundary there is an
upper circular arc; its intersection with the line is the "lower
segment" whose endpoints define the region extent.  Lower half-planes
are kept in slope/intercept form rather than as huge disks; their extent
is a ray (or the whole line) and ``ENVELOPE_SPAN`` bounds the abscissa
range over which upper envelopes are ever evaluated.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional, Tuple, Union

# Maximum magnitude of any input coordinate / radius, enforced at load.
COORD_LIMIT = 1e6

# Envelope pieces are clipped to [-ENVELOPE_SPAN, ENVELOPE_SPAN].  Disk
# extents fit in [-2e6, 2e6]; query abscissas fit in [-1e6, 1e6]; the
# clip only truncates half-plane rays where no query can ever land.
ENVELOPE_SPAN = 2.5e6


class GeometryError(ValueError):
    """Raised for geometrically invalid requests (e.g. coincident regions)."""


@dataclass(frozen=True, slots=True)
class Point:
    x: float
    y: float
    id: int = -1

    def sort_key(self) -> Tuple[float, int]:
        return (self.x, self.id)


@dataclass(frozen=True, slots=True)
class Disk:
    cx: float
    cy: float
    r: float
    id: int = -1


@dataclass(frozen=True, slots=True)
class HalfPlane:
    """Lower half-plane y <= a*x + b."""

    a: float
    b: float
    id: int = -1


Region = Union[Disk, HalfPlane]
Extent = Tuple[float, float]


def point_in_region(s: Region, p: Point) -> bool:
    """Closed membership test for the full region (not just its above-line part)."""
    if isinstance(s, Disk):
        dx = p.x - s.cx
        dy = p.y - s.cy
        return dx * dx + dy * dy <= s.r * s.r
    return p.y <= s.a * p.x + s.b


def region_extent(s: Region) -> Optional[Extent]:
    """x-range of the region's portion above the line, or None if vacuous.

    Disks give a closed interval around the center; lower half-planes a
    ray toward the side their boundary rises, or the whole line for a
    nonnegative horizontal boundary.  A disk strictly below the line and
    a horizontal half-plane with negative intercept are vacuous.
    """
    if isinstance(s, Disk):
        d = s.r * s.r - s.cy * s.cy
        if d < 0.0:
            return None
        h = math.sqrt(d)
        return (s.cx - h, s.cx + h)
    if s.a > 0.0:
        return (-s.b / s.a, math.inf)
    if s.a < 0.0:
        return (-math.inf, -s.b / s.a)
    return (-math.inf, math.inf) if s.b >= 0.0 else None


def upper_boundary_y(s: Region, x: float) -> Optional[float]:
    """Height of the region's upper boundary above the line at ``x``.

    Returns None outside the extent.  For disks this is the upper
    semicircle; a circle point below the line is not part of the
    above-line boundary and also yields None.
    """
    if isinstance(s, Disk):
        dx = x - s.cx
        q = s.r * s.r - dx * dx
        if q < 0.0:
            return None
        y = s.cy + math.sqrt(q)
        return y if y >= 0.0 else None
    v = s.a * x + s.b
    return v if v >= 0.0 else None


def _circle_crossings_above(s1: Disk, s2: Disk):
    """All intersection points of the two circles with y > 0, as (x, y)."""
    ex = s2.cx - s1.cx
    ey = s2.cy - s1.cy
    d2 = ex * ex + ey * ey
    if d2 == 0.0:
        return []
    t = (d2 + s1.r * s1.r - s2.r * s2.r) / (2.0 * d2)
    h2 = s1.r * s1.r / d2 - t * t
    if h2 < 0.0:
        return []
    k = math.sqrt(h2)
    bx = s1.cx + t * ex
    by = s1.cy + t * ey
    out = []
    for sign in (1.0, -1.0):
        px = bx - sign * k * ey
        py = by + sign * k * ex
        if py > 0.0:
            out.append((px, py))
    return out


def boundary_crossing_x(s1: Region, s2: Region) -> Optional[float]:
    """Abscissa of the unique crossing of the two upper boundaries above the line.

    Both regions must come from one admissible family, which guarantees
    at most one such crossing; if the underlying circles meet twice
    above the line the higher crossing is returned.  Returns None for
    disjoint boundaries; coincident regions are degenerate and rejected.
    """
    if isinstance(s1, Disk) and isinstance(s2, Disk):
        if s1.cx == s2.cx and s1.cy == s2.cy and s1.r == s2.r:
            raise GeometryError("coincident disks have no unique boundary crossing")
        pts = _circle_crossings_above(s1, s2)
        if not pts:
            return None
        return max(pts, key=lambda q: q[1])[0]
    if isinstance(s1, HalfPlane) and isinstance(s2, HalfPlane):
        if s1.a == s2.a:
            if s1.b == s2.b:
                raise GeometryError("coincident half-planes have no unique boundary crossing")
            return None
        x = (s2.b - s1.b) / (s1.a - s2.a)
        return x if s1.a * x + s1.b >= 0.0 else None
    raise GeometryError("regions from different families never share an envelope")


def contains_region(s1: Region, s2: Region) -> bool:
    """True iff s2's above-line portion lies inside s1's.

    For disks of one admissible family this reduces to containment of
    the lower segments (extent containment).  Half-planes compare by
    slope and intercept; a vacuous region is contained in anything.
    """
    if isinstance(s1, Disk) and isinstance(s2, Disk):
        e2 = region_extent(s2)
        if e2 is None:
            return True
        e1 = region_extent(s1)
        if e1 is None:
            return False
        return e1[0] <= e2[0] and e2[1] <= e1[1]
    if isinstance(s1, HalfPlane) and isinstance(s2, HalfPlane):
        if region_extent(s2) is None:
            return True
        return s1.a == s2.a and s2.b <= s1.b
    raise GeometryError("containment is only defined within one family")
