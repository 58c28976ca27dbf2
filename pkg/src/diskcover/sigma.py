"""Covering-index queries: smallest/largest sorted region covering a point.

The index is a complete binary tree whose leaves are the sorted regions.
Every node stores the upper envelope of the line and the upper arcs of
its regions; a point is covered by some region of the node exactly when
it lies on or below that envelope.  Locating the smallest covering index
descends the tree preferring the left child, the largest prefers the
right child.

Two query backends answer identically:

* ``binary``  - an O(log m) predecessor search per visited node,
* ``cascade`` - fractional cascading: one search in the root's augmented
  catalog, then O(1) pointer hops per level.

Numeric policy: envelopes only *nominate* up to three candidate pieces
around the located breakpoint; the actual coverage decision is an exact
closed membership test on the candidates' regions.  Breakpoint rounding
therefore never flips an answer.

Envelope representation: piece ``i`` spans ``[starts[i], starts[i+1])``
(the last piece extends right indefinitely) and ``rids[i]`` names the
winning region by sorted index, ``-1`` for the bare line.  Abscissas
left of ``starts[0]`` fall on the bare line.
"""

from __future__ import annotations

import math
from bisect import bisect_right
from dataclasses import dataclass
from typing import List, Optional, Tuple

import numpy as np

from .geom import ENVELOPE_SPAN
from .instance import SortedInstance

_INF = math.inf


class RegionData:
    """Column view of sorted regions with the primitive evaluations the
    envelope machinery needs: boundary height, pairwise crossing, exact
    membership."""

    __slots__ = ("family", "m", "cx", "cy", "r2", "a", "b", "lx", "rx")

    def __init__(self, si: SortedInstance):
        self.family = si.family
        self.m = si.m
        self.lx = si.lx
        self.rx = si.rx
        if si.family == "disk":
            self.cx = si.cols[:, 0]
            self.cy = si.cols[:, 1]
            self.r2 = si.cols[:, 2] ** 2
            self.a = self.b = None
        else:
            self.a = si.cols[:, 0]
            self.b = si.cols[:, 1]
            self.cx = self.cy = self.r2 = None

    def value(self, rid: int, x: float) -> float:
        if self.family == "disk":
            dx = x - self.cx[rid]
            return self.cy[rid] + math.sqrt(max(self.r2[rid] - dx * dx, 0.0))
        return self.a[rid] * x + self.b[rid]

    def member(self, rid: int, x: float, y: float) -> bool:
        if self.family == "disk":
            dx = x - self.cx[rid]
            dy = y - self.cy[rid]
            return dx * dx + dy * dy <= self.r2[rid]
        return y <= self.a[rid] * x + self.b[rid]

    def crossing(self, i: int, j: int) -> Optional[float]:
        """x of the unique upper-boundary crossing above the line, if any."""
        if self.family == "disk":
            ex = self.cx[j] - self.cx[i]
            ey = self.cy[j] - self.cy[i]
            d2 = ex * ex + ey * ey
            if d2 == 0.0:
                return None
            t = (d2 + self.r2[i] - self.r2[j]) / (2.0 * d2)
            h2 = self.r2[i] / d2 - t * t
            if h2 < 0.0:
                return None
            k = math.sqrt(h2)
            by = self.cy[i] + t * ey
            # intersection points: base -+ k*(ey, -ex); keep the higher one
            y1 = by + k * ex
            y2 = by - k * ex
            bx = self.cx[i] + t * ex
            if y1 >= y2:
                if y1 <= 0.0:
                    return None
                return bx - k * ey
            if y2 <= 0.0:
                return None
            return bx + k * ey
        if self.a[i] == self.a[j]:
            return None
        x = (self.b[j] - self.b[i]) / (self.a[i] - self.a[j])
        return x if self.a[i] * x + self.b[i] >= 0.0 else None


@dataclass
class Envelope:
    starts: np.ndarray   # float64, strictly increasing
    rids: np.ndarray     # int32, -1 for the bare line

    def piece_count(self) -> int:
        return len(self.starts)

    def value_at(self, rd: RegionData, x: float) -> float:
        """Envelope height at x (0 on the bare line)."""
        i = bisect_right(self.starts, x) - 1
        if i < 0 or self.rids[i] < 0:
            return 0.0
        return max(rd.value(int(self.rids[i]), x), 0.0)


def _leaf_pieces(rd: RegionData, k: int) -> Tuple[List[float], List[int]]:
    lo = max(float(rd.lx[k]), -ENVELOPE_SPAN)
    hi = float(rd.rx[k])
    if lo > ENVELOPE_SPAN or hi < lo or hi == lo:
        return [], []
    if hi > ENVELOPE_SPAN:
        return [lo], [k]
    return [lo, hi], [k, -1]


def _merge_pieces(sa, ra, sb, rb, rd: RegionData) -> Tuple[List[float], List[int]]:
    """Pointwise maximum of two piecewise envelopes.

    Within each refinement interval at most two arcs compete and, by the
    single-intersection condition, swap dominance at most once; the
    sweep splits there and coalesces equal neighbours.
    """
    out_s: List[float] = []
    out_r: List[int] = []

    def emit(x, rid):
        if out_r:
            if out_s[-1] == x:
                out_s.pop()
                out_r.pop()
                if out_r and out_r[-1] == rid:
                    return
            elif out_r[-1] == rid:
                return
        elif rid == -1:
            return          # leading stretch of bare line stays implicit
        out_s.append(x)
        out_r.append(rid)

    def span(x0, x1, pa, pb):
        if pa < 0 and pb < 0:
            emit(x0, -1)
            return
        if pa < 0:
            emit(x0, pb)
            return
        if pb < 0:
            emit(x0, pa)
            return
        xc = rd.crossing(pa, pb)
        if xc is not None and x0 < xc < x1:
            xm = 0.5 * (x0 + xc)
            va = rd.value(pa, xm)
            vb = rd.value(pb, xm)
            first = pa if va > vb else (pb if vb > va else min(pa, pb))
            second = pb if first == pa else pa
            emit(x0, first)
            emit(xc, second)
            return
        xm = x0 + 1.0 if x1 == _INF else 0.5 * (x0 + x1)
        va = rd.value(pa, xm)
        vb = rd.value(pb, xm)
        emit(x0, pa if va > vb else (pb if vb > va else min(pa, pb)))

    na, nb = len(sa), len(sb)
    ia = ib = 0
    act_a = act_b = -1
    x0 = None
    while ia < na or ib < nb:
        if ib >= nb or (ia < na and sa[ia] <= sb[ib]):
            xe = sa[ia]
        else:
            xe = sb[ib]
        if x0 is not None and xe > x0:
            span(x0, xe, act_a, act_b)
        while ia < na and sa[ia] == xe:
            act_a = ra[ia]
            ia += 1
        while ib < nb and sb[ib] == xe:
            act_b = rb[ib]
            ib += 1
        x0 = xe
    if x0 is not None:
        span(x0, _INF, act_a, act_b)
    return out_s, out_r


def merge_envelopes(ea: Envelope, eb: Envelope, si: SortedInstance) -> Envelope:
    rd = RegionData(si)
    s, r = _merge_pieces(ea.starts.tolist(), ea.rids.tolist(),
                         eb.starts.tolist(), eb.rids.tolist(), rd)
    return Envelope(np.asarray(s, dtype=np.float64), np.asarray(r, dtype=np.int32))


@dataclass
class SigmaTable:
    """Per x-sorted point: smallest/largest covering sorted index, -1 if uncovered."""

    s1: np.ndarray
    s2: np.ndarray

    @property
    def covered(self) -> np.ndarray:
        return self.s1 >= 0

    @property
    def all_covered(self) -> bool:
        return bool(np.all(self.covered))


class SigmaIndex:
    """Envelope tree over the sorted regions, stored level by level.

    ``starts[d]`` / ``rids[d]`` concatenate the envelopes of all 2^d
    nodes of level d; ``off[d]`` holds the per-node piece offsets.  The
    cascade backend adds augmented catalogs with predecessor pointers
    into the node's own pieces and into each child's catalog.
    """

    def __init__(self, si: SortedInstance, backend: str = "binary"):
        if backend not in ("binary", "cascade"):
            raise ValueError(f"unknown sigma backend '{backend}'")
        self.backend = backend
        self.rd = RegionData(si)
        self.m = si.m
        size = 1
        while size < max(self.m, 1):
            size *= 2
        self.size = size
        self.depth = size.bit_length() - 1
        self.starts: List[np.ndarray] = [None] * (self.depth + 1)
        self.rids: List[np.ndarray] = [None] * (self.depth + 1)
        self.off: List[np.ndarray] = [None] * (self.depth + 1)
        self._build_envelopes()
        if backend == "cascade":
            self._build_cascade()

    # ------------------------------------------------------------------
    # construction

    def _build_envelopes(self) -> None:
        rd = self.rd
        d = self.depth
        starts: List[float] = []
        rids: List[int] = []
        off = np.zeros(self.size + 1, dtype=np.int64)
        for k in range(self.size):
            if k < self.m:
                s, r = _leaf_pieces(rd, k)
                starts.extend(s)
                rids.extend(r)
            off[k + 1] = len(starts)
        self.starts[d] = np.asarray(starts, dtype=np.float64)
        self.rids[d] = np.asarray(rids, dtype=np.int32)
        self.off[d] = off
        while d > 0:
            d -= 1
            nodes = 1 << d
            child_s = self.starts[d + 1].tolist()
            child_r = self.rids[d + 1].tolist()
            child_off = self.off[d + 1]
            starts = []
            rids = []
            off = np.zeros(nodes + 1, dtype=np.int64)
            for k in range(nodes):
                l0, l1 = child_off[2 * k], child_off[2 * k + 1]
                r1 = child_off[2 * k + 2]
                s, r = _merge_pieces(child_s[l0:l1], child_r[l0:l1],
                                     child_s[l1:r1], child_r[l1:r1], rd)
                starts.extend(s)
                rids.extend(r)
                off[k + 1] = len(starts)
            self.starts[d] = np.asarray(starts, dtype=np.float64)
            self.rids[d] = np.asarray(rids, dtype=np.int32)
            self.off[d] = off

    def _build_cascade(self) -> None:
        self.axs: List[np.ndarray] = [None] * (self.depth + 1)
        self.pself: List[np.ndarray] = [None] * (self.depth + 1)
        self.pleft: List[np.ndarray] = [None] * (self.depth + 1)
        self.pright: List[np.ndarray] = [None] * (self.depth + 1)
        self.aoff: List[np.ndarray] = [None] * (self.depth + 1)
        d = self.depth
        self.axs[d] = self.starts[d]
        self.pself[d] = np.arange(len(self.starts[d]), dtype=np.int64)
        self.pleft[d] = np.full(len(self.starts[d]), -1, dtype=np.int64)
        self.pright[d] = np.full(len(self.starts[d]), -1, dtype=np.int64)
        self.aoff[d] = self.off[d]
        while d > 0:
            d -= 1
            nodes = 1 << d
            ch_x = self.axs[d + 1]
            ch_off = self.aoff[d + 1]
            counts = np.diff(ch_off)
            pos = np.arange(len(ch_x), dtype=np.int64)
            node_of = np.repeat(np.arange(2 * nodes, dtype=np.int64), counts)
            local = pos - np.repeat(ch_off[:-1], counts)
            mask = (local & 1) == 1
            samp_pos = pos[mask]
            samp_x = ch_x[mask]
            samp_parent = node_of[mask] >> 1
            samp_right = (node_of[mask] & 1) == 1

            piece_x = self.starts[d]
            piece_node = np.repeat(np.arange(nodes, dtype=np.int64), np.diff(self.off[d]))

            xs = np.concatenate([samp_x, piece_x])
            node = np.concatenate([samp_parent, piece_node])
            is_c = np.concatenate([np.zeros(len(samp_x), bool), np.ones(len(piece_x), bool)])
            is_l = np.concatenate([~samp_right, np.zeros(len(piece_x), bool)])
            is_r = np.concatenate([samp_right, np.zeros(len(piece_x), bool)])
            payload = np.concatenate([samp_pos, np.zeros(len(piece_x), dtype=np.int64)])

            order = np.lexsort((np.arange(len(xs)), xs, node))
            xs = xs[order]
            is_c = is_c[order]
            payload = payload[order]
            self.axs[d] = xs
            self.pself[d] = np.cumsum(is_c, dtype=np.int64) - 1
            self.pleft[d] = np.maximum.accumulate(
                np.where(is_l[order], payload, -1))
            self.pright[d] = np.maximum.accumulate(
                np.where(is_r[order], payload, -1))
            aoff = np.zeros(nodes + 1, dtype=np.int64)
            np.cumsum(np.bincount(node, minlength=nodes), out=aoff[1:])
            self.aoff[d] = aoff

    # ------------------------------------------------------------------
    # scalar queries

    def node_envelope(self, level: int, k: int) -> Envelope:
        lo, hi = self.off[level][k], self.off[level][k + 1]
        return Envelope(self.starts[level][lo:hi], self.rids[level][lo:hi])

    def node_span(self, level: int, k: int) -> Tuple[int, int]:
        """Sorted-index range [lo, hi) of the regions below node (level, k)."""
        w = self.size >> level
        return min(k * w, self.m), min((k + 1) * w, self.m)

    def _covered_at(self, level: int, k: int, x: float, y: float) -> bool:
        off = self.off[level]
        lo, hi = int(off[k]), int(off[k + 1])
        if lo == hi:
            return False
        i = bisect_right(self.starts[level], x, lo, hi) - 1
        return self._covered_candidates(level, i, lo, hi, x, y)

    def _covered_candidates(self, level, i, lo, hi, x, y) -> bool:
        rd = self.rd
        rids = self.rids[level]
        for c in (i - 1, i, i + 1):
            if lo <= c < hi:
                rid = int(rids[c])
                if rid >= 0 and rd.member(rid, x, y):
                    return True
        return False

    def query_sigma(self, p) -> Optional[Tuple[int, int]]:
        """(smallest, largest) covering sorted index for the point, or None."""
        x, y = float(p.x), float(p.y)
        if self.m == 0 or not self._covered_at(0, 0, x, y):
            return None
        if self.backend == "cascade":
            return (self._descend_cascade(x, y, True),
                    self._descend_cascade(x, y, False))
        return (self._descend_binary(x, y, True),
                self._descend_binary(x, y, False))

    def _descend_binary(self, x: float, y: float, smallest: bool) -> int:
        k = 0
        for level in range(1, self.depth + 1):
            first = 2 * k if smallest else 2 * k + 1
            if self._covered_at(level, first, x, y):
                k = first
            else:
                k = 2 * k + 1 if smallest else 2 * k
        return k

    def _cascade_child(self, level: int, k: int, ja: int, child: int, x: float) -> int:
        """Predecessor position in the child's augmented catalog, from ja at (level, k)."""
        if ja >= self.aoff[level][k]:
            ptr = self.pright[level][ja] if (child & 1) else self.pleft[level][ja]
        else:
            ptr = -1
        lo, hi = self.aoff[level + 1][child], self.aoff[level + 1][child + 1]
        jc = max(int(ptr), int(lo) - 1)
        cxs = self.axs[level + 1]
        while jc + 1 < hi and cxs[jc + 1] <= x:
            jc += 1
        return jc

    def _cascade_covered(self, level: int, k: int, ja: int, x: float, y: float) -> bool:
        lo, hi = int(self.off[level][k]), int(self.off[level][k + 1])
        if lo == hi:
            return False
        i = int(self.pself[level][ja]) if ja >= self.aoff[level][k] else lo - 1
        if i >= hi:
            i = hi - 1
        return self._covered_candidates(level, i, lo, hi, x, y)

    def _descend_cascade(self, x: float, y: float, smallest: bool) -> int:
        k = 0
        ja = int(np.searchsorted(self.axs[0], x, side="right")) - 1
        for level in range(self.depth):
            first = 2 * k if smallest else 2 * k + 1
            jf = self._cascade_child(level, k, ja, first, x)
            if self._cascade_covered(level + 1, first, jf, x, y):
                k, ja = first, jf
            else:
                other = 2 * k + 1 if smallest else 2 * k
                ja = self._cascade_child(level, k, ja, other, x)
                k = other
        return k

    # ------------------------------------------------------------------
    # batched queries

    def _covered_batch(self, level: int, nodes: np.ndarray,
                       xs: np.ndarray, ys: np.ndarray,
                       ja: Optional[np.ndarray]) -> np.ndarray:
        off = self.off[level]
        starts = self.starts[level]
        if len(starts) == 0:
            return np.zeros(len(xs), dtype=bool)
        lo = off[nodes]
        hi = off[nodes + 1]
        if ja is not None:
            idx = np.where(ja >= self.aoff[level][nodes],
                           self.pself[level][np.maximum(ja, 0)], lo - 1)
            idx = np.minimum(idx, hi - 1)
        else:
            l = lo.copy()
            h = hi.copy()
            while True:
                active = l < h
                if not active.any():
                    break
                mid = (l + h) >> 1
                go = active & (starts[np.minimum(mid, len(starts) - 1)] <= xs)
                l = np.where(go, mid + 1, l)
                h = np.where(active & ~go, mid, h)
            idx = l - 1
        rd = self.rd
        rids = self.rids[level]
        covered = np.zeros(len(xs), dtype=bool)
        for delta in (-1, 0, 1):
            c = idx + delta
            ok = (c >= lo) & (c < hi) & ~covered
            if not ok.any():
                continue
            rid = rids[np.where(ok, c, 0)]
            ok &= rid >= 0
            if not ok.any():
                continue
            r = np.where(ok, rid, 0)
            if rd.family == "disk":
                dx = xs - rd.cx[r]
                dy = ys - rd.cy[r]
                hit = dx * dx + dy * dy <= rd.r2[r]
            else:
                hit = ys <= rd.a[r] * xs + rd.b[r]
            covered |= ok & hit
        return covered

    def _cascade_child_batch(self, level, nodes, ja, children, xs):
        lo = self.aoff[level + 1][children]
        hi = self.aoff[level + 1][children + 1]
        if len(self.axs[level]) == 0:
            ptr = np.full(len(xs), -1, dtype=np.int64)
        else:
            ptr = np.where((children & 1).astype(bool),
                           self.pright[level][np.maximum(ja, 0)],
                           self.pleft[level][np.maximum(ja, 0)])
            ptr = np.where(ja >= self.aoff[level][nodes], ptr, -1)
        jc = np.maximum(ptr, lo - 1)
        cxs = self.axs[level + 1]
        if len(cxs) == 0:
            return jc
        for _ in range(2):
            nxt = jc + 1
            ok = (nxt < hi) & (cxs[np.minimum(nxt, len(cxs) - 1)] <= xs)
            jc = np.where(ok, nxt, jc)
        return jc

    def _descend_batch(self, xs, ys, smallest: bool) -> np.ndarray:
        n = len(xs)
        nodes = np.zeros(n, dtype=np.int64)
        if self.backend == "cascade":
            ja = np.searchsorted(self.axs[0], xs, side="right").astype(np.int64) - 1
        else:
            ja = None
        for level in range(self.depth):
            first = 2 * nodes if smallest else 2 * nodes + 1
            if ja is not None:
                jf = self._cascade_child_batch(level, nodes, ja, first, xs)
                cov = self._covered_batch(level + 1, first, xs, ys, jf)
                other = np.where(cov, first, first ^ 1)
                jo = self._cascade_child_batch(level, nodes, ja, other, xs)
                ja = np.where(cov, jf, jo)
                nodes = other
            else:
                cov = self._covered_batch(level + 1, first, xs, ys, None)
                nodes = np.where(cov, first, first ^ 1)
        return nodes

    def sigma_table(self, xs: np.ndarray, ys: np.ndarray) -> SigmaTable:
        """σ values for x-sorted point columns; -1 marks uncovered points."""
        n = len(xs)
        if n == 0:
            e = np.empty(0, dtype=np.int64)
            return SigmaTable(e, e.copy())
        if self.m == 0:
            e = np.full(n, -1, dtype=np.int64)
            return SigmaTable(e, e.copy())
        xs = np.ascontiguousarray(xs, dtype=np.float64)
        ys = np.ascontiguousarray(ys, dtype=np.float64)
        root_ja = None
        if self.backend == "cascade":
            root_ja = np.searchsorted(self.axs[0], xs, side="right").astype(np.int64) - 1
        cov0 = self._covered_batch(0, np.zeros(n, dtype=np.int64), xs, ys, root_ja)
        s1 = np.full(n, -1, dtype=np.int64)
        s2 = np.full(n, -1, dtype=np.int64)
        if cov0.any():
            sel = np.nonzero(cov0)[0]
            s1[sel] = self._descend_batch(xs[sel], ys[sel], True)
            s2[sel] = self._descend_batch(xs[sel], ys[sel], False)
        return SigmaTable(s1, s2)


def build_sigma_index(si: SortedInstance, backend: str = "binary") -> SigmaIndex:
    return SigmaIndex(si, backend=backend)
