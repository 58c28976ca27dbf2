"""Detection of "sandwiched" regions that can be discarded up front.

A region is prunable when some point outside it is covered both by a
region to its left and one to its right (equivalently, the point's
covering index range straddles the region).  Discarding all prunable
regions preserves at least one optimal solution, so the solver works on
the survivors only.

The detector stores every point's covering index interval in a segment
tree over sorted region indices; a region is prunable iff some node on
its root-to-leaf path holds a point outside it.  The per-node "is any
stored point outside region i" test has three interchangeable backends:

* ``fvd``   - farthest-point Voronoi diagram of the node's hull
              vertices with x-slab point location (general disks),
* ``cap``   - the common intersection, below the line, of congruent
              disks centered at the node's points (unit-disk case),
* ``dual``  - upper envelope of the lines dual to the node's points
              (lower half-planes),
* ``naive`` - a full scan of the node's points, kept for differential
              testing.

Like the covering index, chains and envelopes only nominate up to three
candidate pieces; the decisive comparisons are exact squared-distance /
line evaluations.
"""

from __future__ import annotations

import math
from bisect import bisect_right
from dataclasses import dataclass
from typing import List, Optional, Sequence, Set, Tuple

import numpy as np

from .geom import Point
from .instance import SortedInstance
from .sigma import RegionData, SigmaTable

_NEG = -1e18


class UncoveredPointError(ValueError):
    """The covering table marks a point uncovered; the caller must check
    feasibility before asking for prunable regions."""


# ----------------------------------------------------------------------
# canonical point sets over the segment tree


def _canonical_sets(s1: np.ndarray, s2: np.ndarray, size: int):
    """Scatter each point's inclusive index interval to its canonical
    segment-tree nodes.  Returns (heap node id, point position) pairs,
    sorted so every node lists its points in ascending x-rank.
    """
    n = len(s1)
    if n == 0:
        e = np.empty(0, dtype=np.int64)
        return e, e.copy()
    l = s1.astype(np.int64) + size
    r = s2.astype(np.int64) + 1 + size
    pts = np.arange(n, dtype=np.int64)
    nodes_out = []
    pts_out = []
    while True:
        active = l < r
        if not active.any():
            break
        ml = active & ((l & 1) == 1)
        if ml.any():
            nodes_out.append(l[ml].copy())
            pts_out.append(pts[ml])
        l = np.where(ml, l + 1, l)
        mr = active & ((r & 1) == 1)
        if mr.any():
            nodes_out.append(r[mr] - 1)
            pts_out.append(pts[mr])
        r = np.where(mr, r - 1, r)
        l = np.where(active, l >> 1, l)
        r = np.where(active, r >> 1, r)
    if not nodes_out:
        e = np.empty(0, dtype=np.int64)
        return e, e.copy()
    nodes = np.concatenate(nodes_out)
    ppos = np.concatenate(pts_out)
    order = np.lexsort((ppos, nodes))
    return nodes[order], ppos[order]


# ----------------------------------------------------------------------
# per-node structures


@dataclass
class CapChain:
    """Common intersection, below the line, of congruent disks centered
    at a node's points.  ``starts`` are piece boundaries of the chain
    (the x-monotone lower boundary), each piece owned by one center."""

    starts: np.ndarray
    site_x: np.ndarray
    site_y: np.ndarray
    lo_x: float
    hi_x: float
    radius: float

    def contains(self, x: float, y: float) -> bool:
        if x < self.lo_x or x > self.hi_x:
            return False
        if len(self.starts) == 0:
            return True
        i = bisect_right(self.starts, x) - 1
        r2 = self.radius * self.radius
        for c in (i - 1, i, i + 1):
            if 0 <= c < len(self.starts):
                dx = x - self.site_x[c]
                dy = y - self.site_y[c]
                if dx * dx + dy * dy > r2:
                    return False
        return True


def cap_contains(cc: CapChain, c: Point) -> bool:
    """Is the center within the common radius of every stored point?"""
    return cc.contains(float(c.x), float(c.y))


def _cap_graph_crossing(pxl, pyl, pxr, pyr, r):
    """Crossing abscissa of the two lower arcs (left center, right center),
    or None when one dominates throughout.  Equal radii only."""
    dx = pxr - pxl
    dy = pyr - pyl
    d2 = dx * dx + dy * dy
    h2 = r * r - 0.25 * d2
    if h2 < 0.0:
        return None
    d = math.sqrt(d2)
    h = math.sqrt(h2)
    # lower intersection point of the two circles
    zx = 0.5 * (pxl + pxr) + h * dy / d
    zy = 0.5 * (pyl + pyr) - h * dx / d
    if zy <= pyl and zy <= pyr:
        return zx
    return None


def build_cap_chain(px: Sequence[float], py: Sequence[float], r: float) -> CapChain:
    """Lower-boundary chain of the cap from x-sorted center candidates.

    Along the chain the owning centers appear in decreasing x: a center
    right of another constrains harder on the left of their arcs'
    single crossing.  Each new point therefore claims a prefix of the
    chain, which gives the linear stack scan below.
    """
    n = len(px)
    if n == 0:
        e = np.empty(0)
        return CapChain(e, e.copy(), e.copy(), -math.inf, math.inf, r)
    lo = max(px) - r
    hi = min(px) + r
    # equal abscissas: only the highest point can bind below the line
    xs: List[float] = []
    ys: List[float] = []
    for i in range(n):
        if xs and px[i] == xs[-1]:
            if py[i] > ys[-1]:
                ys[-1] = py[i]
            continue
        xs.append(px[i])
        ys.append(py[i])

    # chain stored right-to-left so the leftmost piece sits at the end:
    # each new center (rightmost so far) claims a prefix of the chain.
    r_sx: List[float] = []
    r_sy: List[float] = []
    r_breaks: List[float] = []   # r_breaks[-1] = right end of the leftmost piece

    def value(sx, sy, x):
        return sy - math.sqrt(max(r * r - (x - sx) ** 2, 0.0))

    for qx, qy in zip(xs, ys):
        while r_sx:
            sx, sy = r_sx[-1], r_sy[-1]
            end0 = r_breaks[-1] if r_breaks else math.inf
            xc = _cap_graph_crossing(sx, sy, qx, qy, r)
            if xc is None:
                xm = 0.5 * (sx + qx)
                if value(qx, qy, xm) >= value(sx, sy, xm):
                    r_sx.pop()
                    r_sy.pop()
                    if r_breaks:
                        r_breaks.pop()
                    continue
                break          # dominated everywhere: contributes nothing
            if xc >= end0:
                r_sx.pop()
                r_sy.pop()
                if r_breaks:
                    r_breaks.pop()
                continue
            r_breaks.append(xc)
            r_sx.append(qx)
            r_sy.append(qy)
            break
        else:
            r_sx = [qx]
            r_sy = [qy]
            r_breaks = []
    starts = np.asarray([_NEG] + r_breaks[::-1], dtype=np.float64)
    return CapChain(starts, np.asarray(r_sx[::-1]), np.asarray(r_sy[::-1]), lo, hi, r)


@dataclass
class DualEnvelope:
    """Upper envelope of the lines ``intercept = y(p) - slope * x(p)``
    over a node's points: a half-plane covers them all exactly when its
    intercept clears the envelope at its slope."""

    starts: np.ndarray   # breakpoints in slope space
    la: np.ndarray       # line slope  (= -x(p))
    lb: np.ndarray       # line offset (=  y(p))

    def required_intercept(self, a: float) -> float:
        if len(self.starts) == 0:
            return -math.inf
        i = bisect_right(self.starts, a) - 1
        best = -math.inf
        for c in (i - 1, i, i + 1):
            if 0 <= c < len(self.starts):
                best = max(best, self.la[c] * a + self.lb[c])
        return best

    def covers_all(self, a: float, b: float) -> bool:
        return b >= self.required_intercept(a)


def build_dual_envelope(px: Sequence[float], py: Sequence[float]) -> DualEnvelope:
    """Convex-hull-trick upper envelope; points arrive x-sorted, so the
    dual lines arrive slope-sorted after reversal."""
    la: List[float] = []
    lb: List[float] = []
    for i in range(len(px) - 1, -1, -1):
        a, b = -px[i], py[i]
        if la and la[-1] == a:
            if b > lb[-1]:
                lb[-1] = b
            continue
        la.append(a)
        lb.append(b)
    sx: List[float] = []
    sa: List[float] = []
    sb: List[float] = []
    for a, b in zip(la, lb):
        while sa:
            x_new = (sb[-1] - b) / (a - sa[-1])
            if sx and x_new <= sx[-1]:
                sa.pop()
                sb.pop()
                sx.pop()
                continue
            sa.append(a)
            sb.append(b)
            sx.append(x_new)
            break
        else:
            sa.append(a)
            sb.append(b)
    starts = np.asarray([_NEG] + sx, dtype=np.float64)
    return DualEnvelope(starts, np.asarray(sa), np.asarray(sb))


class FarthestStruct:
    """Farthest-point queries for one node: convex hull, the farthest-
    point Voronoi cells of its vertices clipped to a query box, and an
    x-slab decomposition for logarithmic point location."""

    def __init__(self, px: np.ndarray, py: np.ndarray, pid: np.ndarray, box):
        hull = _convex_hull(px, py, pid)
        self.sites = hull                      # list of (x, y, id)
        self.box = box
        self.slab_x: List[float] = []
        self.slabs: List[List[Tuple[float, float, float, int]]] = []
        if len(hull) > 1:
            self._build_cells()

    def _build_cells(self):
        x0, y0, x1, y1 = self.box
        cells = []
        for i, (sx, sy, _) in enumerate(self.sites):
            poly = [(x0, y0), (x1, y0), (x1, y1), (x0, y1)]
            for j, (qx, qy, _) in enumerate(self.sites):
                if i == j:
                    continue
                # keep the side at least as far from s as from q
                ax = 2.0 * (sx - qx)
                ay = 2.0 * (sy - qy)
                c = sx * sx + sy * sy - qx * qx - qy * qy
                poly = _clip(poly, ax, ay, c)
                if not poly:
                    break
            if poly:
                cells.append((i, poly))
        xs = sorted({v[0] for _, poly in cells for v in poly})
        self.slab_x = xs
        for t in range(len(xs) - 1):
            u, v = xs[t], xs[t + 1]
            if v <= u:
                self.slabs.append([])
                continue
            xm = 0.5 * (u + v)
            entries = []
            for i, poly in cells:
                lo_u = _poly_y_low(poly, u)
                lo_v = _poly_y_low(poly, v)
                if lo_u is None or lo_v is None:
                    continue
                slope = (lo_v - lo_u) / (v - u)
                entries.append((lo_u + slope * (xm - u), slope, lo_u - slope * u, i))
            entries.sort()
            self.slabs.append(entries)

    def farthest(self, qx: float, qy: float) -> Tuple[float, float, int]:
        sites = self.sites
        if len(sites) == 1:
            return sites[0]
        if not self.slabs:     # all cells clipped away numerically: scan
            return max(sites,
                       key=lambda s: ((qx - s[0]) ** 2 + (qy - s[1]) ** 2, -s[2]))
        t = bisect_right(self.slab_x, qx) - 1
        t = min(max(t, 0), len(self.slabs) - 1)
        entries = self.slabs[t]
        lo, hi = 0, len(entries)
        while lo < hi:
            mid = (lo + hi) // 2
            if entries[mid][1] * qx + entries[mid][2] <= qy:
                lo = mid + 1
            else:
                hi = mid
        best = None
        for c in (lo - 2, lo - 1, lo):
            if 0 <= c < len(entries):
                sx, sy, sid = sites[entries[c][3]]
                d2 = (qx - sx) ** 2 + (qy - sy) ** 2
                key = (d2, -sid)
                if best is None or key > best[0]:
                    best = (key, (sx, sy, sid))
        return best[1]


def farthest_point(fs: FarthestStruct, q: Point) -> Point:
    """A stored point at maximum distance from q (distance ties resolved
    toward the lower input rank among the located candidates)."""
    if not fs.sites:
        raise ValueError("farthest_point on an empty point set")
    sx, sy, sid = fs.farthest(float(q.x), float(q.y))
    return Point(sx, sy, sid)


def _convex_hull(px, py, pid):
    """Full convex hull (strict turns) of x-sorted points, as vertex list."""
    pts = []
    for i in range(len(px)):
        if pts and pts[-1][0] == px[i] and pts[-1][1] == py[i]:
            continue
        pts.append((float(px[i]), float(py[i]), int(pid[i])))
    pts = sorted(set(pts))
    if len(pts) <= 2:
        return pts
    def half(seq):
        out = []
        for p in seq:
            while len(out) >= 2:
                ox, oy = out[-1][0] - out[-2][0], out[-1][1] - out[-2][1]
                nx, ny = p[0] - out[-1][0], p[1] - out[-1][1]
                if ox * ny - oy * nx <= 0.0:
                    out.pop()
                else:
                    break
            out.append(p)
        return out
    lower = half(pts)
    upper = half(pts[::-1])
    return lower[:-1] + upper[:-1]


def _clip(poly, ax, ay, c):
    """Keep the part of the convex polygon with ax*x + ay*y <= c."""
    out = []
    k = len(poly)
    for t in range(k):
        x1, y1 = poly[t]
        x2, y2 = poly[(t + 1) % k]
        in1 = ax * x1 + ay * y1 <= c
        in2 = ax * x2 + ay * y2 <= c
        if in1:
            out.append((x1, y1))
        if in1 != in2:
            denom = ax * (x2 - x1) + ay * (y2 - y1)
            if denom != 0.0:
                t_ = (c - ax * x1 - ay * y1) / denom
                out.append((x1 + t_ * (x2 - x1), y1 + t_ * (y2 - y1)))
    return out


def _poly_y_low(poly, x):
    """Lowest y of the convex polygon at abscissa x, or None if outside."""
    best = None
    k = len(poly)
    for t in range(k):
        x1, y1 = poly[t]
        x2, y2 = poly[(t + 1) % k]
        if x1 == x2:
            if x1 == x:
                y = min(y1, y2)
                best = y if best is None else min(best, y)
            continue
        if (x1 - x) * (x2 - x) <= 0.0:
            y = y1 + (y2 - y1) * (x - x1) / (x2 - x1)
            best = y if best is None else min(best, y)
    return best


# ----------------------------------------------------------------------
# the index


class PruneIndex:
    """Segment tree of canonical point sets plus per-node structures."""

    def __init__(self, si: SortedInstance, sig: SigmaTable,
                 xs: np.ndarray, ys: np.ndarray, mode: str):
        if mode not in ("fvd", "cap", "dual", "naive"):
            raise ValueError(f"unknown prune backend '{mode}'")
        if not sig.all_covered:
            raise UncoveredPointError("prunable detection requires every point covered")
        _check_mode(si, mode)
        self.mode = mode
        self.si = si
        self.rd = RegionData(si)
        self.xs = np.ascontiguousarray(xs, dtype=np.float64)
        self.ys = np.ascontiguousarray(ys, dtype=np.float64)
        size = 1
        while size < max(si.m, 1):
            size *= 2
        self.size = size
        self.depth = size.bit_length() - 1
        nodes, ppos = _canonical_sets(sig.s1, sig.s2, size)
        self.ppos: List[np.ndarray] = []
        self.poff: List[np.ndarray] = []
        levels = nodes.astype(np.int64)
        lev = np.frexp(np.maximum(levels, 1).astype(np.float64))[1] - 1  # floor(log2)
        for d in range(self.depth + 1):
            sel = lev == d
            local = levels[sel] - (1 << d)
            pp = ppos[sel]
            order = np.lexsort((pp, local))
            self.ppos.append(pp[order])
            off = np.zeros((1 << d) + 1, dtype=np.int64)
            np.cumsum(np.bincount(local[order], minlength=1 << d), out=off[1:])
            self.poff.append(off)
        if mode == "cap":
            self._build_cap_levels()
        elif mode == "dual":
            self._build_dual_levels()
        elif mode == "fvd":
            self._build_fvd_levels()

    def node_points(self, level: int, k: int) -> np.ndarray:
        lo, hi = self.poff[level][k], self.poff[level][k + 1]
        return self.ppos[level][lo:hi]

    # -- cap -----------------------------------------------------------

    def _build_cap_levels(self):
        self.radius = self.si.radius if self.si.m else 1.0
        self.c_starts: List[np.ndarray] = []
        self.c_sx: List[np.ndarray] = []
        self.c_sy: List[np.ndarray] = []
        self.c_off: List[np.ndarray] = []
        self.c_lo: List[np.ndarray] = []
        self.c_hi: List[np.ndarray] = []
        xs_l = self.xs.tolist()
        ys_l = self.ys.tolist()
        r = self.radius
        for d in range(self.depth + 1):
            nodes = 1 << d
            off = self.poff[d]
            pp = self.ppos[d].tolist()
            starts: List[float] = []
            s_x: List[float] = []
            s_y: List[float] = []
            coff = np.zeros(nodes + 1, dtype=np.int64)
            lo_arr = np.full(nodes, -math.inf)
            hi_arr = np.full(nodes, math.inf)
            for k in range(nodes):
                a, b = off[k], off[k + 1]
                if b > a:
                    px = [xs_l[pp[t]] for t in range(a, b)]
                    py = [ys_l[pp[t]] for t in range(a, b)]
                    cc = build_cap_chain(px, py, r)
                    starts.extend(cc.starts.tolist())
                    s_x.extend(cc.site_x.tolist())
                    s_y.extend(cc.site_y.tolist())
                    lo_arr[k] = cc.lo_x
                    hi_arr[k] = cc.hi_x
                coff[k + 1] = len(starts)
            self.c_starts.append(np.asarray(starts))
            self.c_sx.append(np.asarray(s_x))
            self.c_sy.append(np.asarray(s_y))
            self.c_off.append(coff)
            self.c_lo.append(lo_arr)
            self.c_hi.append(hi_arr)

    def cap_chain(self, level: int, k: int) -> CapChain:
        lo, hi = self.c_off[level][k], self.c_off[level][k + 1]
        return CapChain(self.c_starts[level][lo:hi], self.c_sx[level][lo:hi],
                        self.c_sy[level][lo:hi], float(self.c_lo[level][k]),
                        float(self.c_hi[level][k]), self.radius)

    # -- dual ----------------------------------------------------------

    def _build_dual_levels(self):
        self.d_starts: List[np.ndarray] = []
        self.d_la: List[np.ndarray] = []
        self.d_lb: List[np.ndarray] = []
        self.d_off: List[np.ndarray] = []
        xs_l = self.xs.tolist()
        ys_l = self.ys.tolist()
        for d in range(self.depth + 1):
            nodes = 1 << d
            off = self.poff[d]
            pp = self.ppos[d].tolist()
            starts: List[float] = []
            la: List[float] = []
            lb: List[float] = []
            doff = np.zeros(nodes + 1, dtype=np.int64)
            for k in range(nodes):
                a, b = off[k], off[k + 1]
                if b > a:
                    px = [xs_l[pp[t]] for t in range(a, b)]
                    py = [ys_l[pp[t]] for t in range(a, b)]
                    de = build_dual_envelope(px, py)
                    starts.extend(de.starts.tolist())
                    la.extend(de.la.tolist())
                    lb.extend(de.lb.tolist())
                doff[k + 1] = len(starts)
            self.d_starts.append(np.asarray(starts))
            self.d_la.append(np.asarray(la))
            self.d_lb.append(np.asarray(lb))
            self.d_off.append(doff)

    def dual_envelope(self, level: int, k: int) -> DualEnvelope:
        lo, hi = self.d_off[level][k], self.d_off[level][k + 1]
        return DualEnvelope(self.d_starts[level][lo:hi],
                            self.d_la[level][lo:hi], self.d_lb[level][lo:hi])

    # -- fvd -----------------------------------------------------------

    def _build_fvd_levels(self):
        if self.si.m:
            cx = self.si.cols[:, 0]
            cy = self.si.cols[:, 1]
            box = (float(np.min(cx)) - 1.0, float(np.min(cy)) - 1.0,
                   float(np.max(cx)) + 1.0, float(np.max(cy)) + 1.0)
        else:
            box = (-1.0, -1.0, 1.0, 1.0)
        self.box = box
        self.fvs: List[List[Optional[FarthestStruct]]] = []
        for d in range(self.depth + 1):
            nodes = 1 << d
            off = self.poff[d]
            row: List[Optional[FarthestStruct]] = [None] * nodes
            for k in range(nodes):
                a, b = off[k], off[k + 1]
                if b > a:
                    sel = self.ppos[d][a:b]
                    row[k] = FarthestStruct(self.xs[sel], self.ys[sel], sel, box)
            self.fvs.append(row)

    def farthest_struct(self, level: int, k: int) -> Optional[FarthestStruct]:
        return self.fvs[level][k]


def _check_mode(si: SortedInstance, mode: str) -> None:
    if mode == "cap":
        if si.family != "disk":
            raise ValueError("cap backend requires disks")
        if si.m and float(np.min(si.cols[:, 2])) != float(np.max(si.cols[:, 2])):
            raise ValueError("cap backend requires congruent disks")
    elif mode == "dual":
        if si.family != "halfplane":
            raise ValueError("dual backend requires lower half-planes")
    elif mode == "fvd":
        if si.family != "disk":
            raise ValueError("fvd backend requires disks")


def build_prune_index(si: SortedInstance, sig: SigmaTable,
                      xs: np.ndarray, ys: np.ndarray, mode: str) -> PruneIndex:
    return PruneIndex(si, sig, xs, ys, mode)


def _locate_batch(starts: np.ndarray, lo: np.ndarray, hi: np.ndarray,
                  q: np.ndarray) -> np.ndarray:
    l = lo.copy()
    h = hi.copy()
    if len(starts) == 0:
        return l - 1
    while True:
        active = l < h
        if not active.any():
            break
        mid = (l + h) >> 1
        go = active & (starts[np.minimum(mid, len(starts) - 1)] <= q)
        l = np.where(go, mid + 1, l)
        h = np.where(active & ~go, mid, h)
    return l - 1


def find_prunable(si: SortedInstance, sig: SigmaTable,
                  xs: np.ndarray, ys: np.ndarray, mode: str,
                  index: Optional[PruneIndex] = None) -> Set[int]:
    """Sorted indices of all prunable regions under the given backend."""
    m = si.m
    if m == 0 or len(xs) == 0:
        return set()
    if index is None:
        index = build_prune_index(si, sig, xs, ys, mode)
    if index.mode == "cap":
        return _find_cap(index)
    if index.mode == "dual":
        return _find_dual(index)
    if index.mode == "fvd":
        return _find_fvd(index)
    return _find_naive(index)


def _path_nodes(index: PruneIndex, i: int):
    for d in range(index.depth + 1):
        yield d, i >> (index.depth - d)


def _find_fvd(index: PruneIndex) -> Set[int]:
    si = index.si
    cx = si.cols[:, 0]
    cy = si.cols[:, 1]
    r2 = si.cols[:, 2] ** 2
    out: Set[int] = set()
    for i in range(si.m):
        qx, qy, qr2 = float(cx[i]), float(cy[i]), float(r2[i])
        for d, k in _path_nodes(index, i):
            fs = index.fvs[d][k]
            if fs is None:
                continue
            sx, sy, _ = fs.farthest(qx, qy)
            if (qx - sx) ** 2 + (qy - sy) ** 2 > qr2:
                out.add(i)
                break
    return out


def _find_naive(index: PruneIndex) -> Set[int]:
    rd = index.rd
    xs, ys = index.xs, index.ys
    out: Set[int] = set()
    for i in range(index.si.m):
        done = False
        for d, k in _path_nodes(index, i):
            lo, hi = index.poff[d][k], index.poff[d][k + 1]
            for t in range(lo, hi):
                p = index.ppos[d][t]
                if not rd.member(i, xs[p], ys[p]):
                    out.add(i)
                    done = True
                    break
            if done:
                break
    return out


def _find_cap(index: PruneIndex) -> Set[int]:
    si = index.si
    m = si.m
    qx = np.ascontiguousarray(si.cols[:, 0])
    qy = np.ascontiguousarray(si.cols[:, 1])
    r2 = index.radius * index.radius
    witness = np.zeros(m, dtype=bool)
    leaf = np.arange(m, dtype=np.int64)
    for d in range(index.depth + 1):
        k = leaf >> (index.depth - d)
        witness |= (qx < index.c_lo[d][k]) | (qx > index.c_hi[d][k])
        starts = index.c_starts[d]
        lo = index.c_off[d][k]
        hi = index.c_off[d][k + 1]
        idx = _locate_batch(starts, lo, hi, qx)
        for delta in (-1, 0, 1):
            c = idx + delta
            ok = (c >= lo) & (c < hi)
            if not ok.any():
                continue
            cc = np.where(ok, c, 0)
            dx = qx - index.c_sx[d][cc]
            dy = qy - index.c_sy[d][cc]
            witness |= ok & (dx * dx + dy * dy > r2)
    return set(np.nonzero(witness)[0].tolist())


def _find_dual(index: PruneIndex) -> Set[int]:
    si = index.si
    m = si.m
    qa = np.ascontiguousarray(si.cols[:, 0])
    qb = np.ascontiguousarray(si.cols[:, 1])
    witness = np.zeros(m, dtype=bool)
    leaf = np.arange(m, dtype=np.int64)
    for d in range(index.depth + 1):
        k = leaf >> (index.depth - d)
        starts = index.d_starts[d]
        lo = index.d_off[d][k]
        hi = index.d_off[d][k + 1]
        idx = _locate_batch(starts, lo, hi, qa)
        for delta in (-1, 0, 1):
            c = idx + delta
            ok = (c >= lo) & (c < hi)
            if not ok.any():
                continue
            cc = np.where(ok, c, 0)
            need = index.d_la[d][cc] * qa + index.d_lb[d][cc]
            witness |= ok & (need > qb)
    return set(np.nonzero(witness)[0].tolist())
