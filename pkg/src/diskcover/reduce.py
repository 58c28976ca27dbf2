"""From surviving regions to the answer: index windows, 1D cover, lift.

For each survivor ``i`` the window ``(a(i), b(i))`` brackets the points
it can usefully cover: ``a(i)`` is the highest x-rank whose covering
range ends left of ``i`` and ``b(i)`` the lowest whose range starts
right of ``i``.  Every point strictly inside the window lies inside the
region, so each survivor turns into the segment of the line spanned by
its window and a greedy minimum segment cover lifts back to a minimum
region cover.

Survivors whose window is empty cover no point that any optimal
solution could need from them; they are dropped before the 1D step
instead of being given a degenerate segment (a degenerate segment would
cover the projection of a point that lies outside the region, which a
lifted solution could then miss).
"""

from __future__ import annotations

import time
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Sequence

import numpy as np

from .instance import Instance, InstanceError, normalize, prune_contained, sorted_points, validate
from .prune import find_prunable
from .sigma import SigmaTable, build_sigma_index


class OneDInfeasible(ValueError):
    """A projected point is covered by no segment."""


@dataclass
class ABTable:
    """Window bounds per sorted region index, x-rank valued.

    ``a[i] == -1`` means no point ends left of i; ``b[i] == n`` means no
    point starts right of i.  Entries are only meaningful for survivors.
    """

    a: np.ndarray
    b: np.ndarray
    survivors: np.ndarray      # ascending sorted indices

    @property
    def n_sentinel(self) -> int:
        return -1


def compute_ab(sig: SigmaTable, survivors: Sequence[int], m: int) -> ABTable:
    """One running-max / running-min sweep over the covering table.

    Because survivors are exactly the non-prunable regions, the largest
    x-rank whose covering range ends left of i equals a(i) (and the
    mirrored statement gives b(i)); no per-region scan is needed.
    """
    n = len(sig.s1)
    if n and not sig.all_covered:
        raise ValueError("window sweep requires every point covered")
    surv = np.asarray(sorted(survivors), dtype=np.int64)
    if m == 0:
        return ABTable(np.empty(0, np.int64), np.empty(0, np.int64), surv)
    bucket_max = np.full(m, -1, dtype=np.int64)
    bucket_min = np.full(m, n, dtype=np.int64)
    if n:
        ranks = np.arange(n, dtype=np.int64)
        np.maximum.at(bucket_max, sig.s2, ranks)
        np.minimum.at(bucket_min, sig.s1, ranks)
    a = np.empty(m, dtype=np.int64)
    a[0] = -1
    if m > 1:
        a[1:] = np.maximum.accumulate(bucket_max)[:-1]
    b = np.empty(m, dtype=np.int64)
    b[m - 1] = n
    if m > 1:
        b[:-1] = np.minimum.accumulate(bucket_min[::-1])[::-1][1:]
    return ABTable(a, b, surv)


@dataclass
class OneDInstance:
    """Projected points plus one segment per useful survivor."""

    point_x: np.ndarray
    seg_left: np.ndarray
    seg_right: np.ndarray
    seg_owner: np.ndarray      # original region ids


def build_segments(ab: ABTable, point_x: np.ndarray,
                   orig_of: Optional[np.ndarray] = None) -> OneDInstance:
    """Materialize the survivors' windows as segments on the line.

    A survivor with an empty window emits nothing (see module note).
    Owners are reported as original ids when ``orig_of`` is given.
    """
    lo = ab.a[ab.survivors] + 1
    hi = ab.b[ab.survivors] - 1
    keep = lo <= hi
    lo = lo[keep]
    hi = hi[keep]
    owners = ab.survivors[keep]
    if orig_of is not None:
        owners = orig_of[owners]
    left = point_x[lo] if len(lo) else np.empty(0)
    right = point_x[hi] if len(hi) else np.empty(0)
    order = np.lexsort((owners, left))
    return OneDInstance(point_x, left[order], right[order], owners[order])


def greedy_cover_1d(inst: OneDInstance) -> List[int]:
    """Minimum-cardinality segment cover of the projected points.

    Sweep the points left to right; for the first uncovered point take,
    among segments starting at or left of it, one reaching farthest
    right (ties to the smaller owner id).  Raises OneDInfeasible when a
    point is covered by no segment.
    """
    px = inst.point_x
    n = len(px)
    sl = inst.seg_left
    sr = inst.seg_right
    so = inst.seg_owner
    k = len(sl)
    chosen: List[int] = []
    j = 0
    best_r = -np.inf
    best_owner = -1
    i = 0
    while i < n:
        x = px[i]
        while j < k and sl[j] <= x:
            r = sr[j]
            if r > best_r or (r == best_r and so[j] < best_owner):
                best_r = r
                best_owner = int(so[j])
            j += 1
        if best_owner < 0 or best_r < x:
            raise OneDInfeasible(f"projected point at x={x!r} is uncovered")
        chosen.append(best_owner)
        i += 1
        while i < n and px[i] <= best_r:
            i += 1
    return chosen


@dataclass
class Solution:
    status: str                          # "optimal" | "infeasible"
    size: int
    chosen: List[int]                    # original region ids, ascending
    witness: Optional[int] = None        # uncovered input point id
    timings: Dict[str, float] = field(default_factory=dict)

    def to_payload(self) -> dict:
        return {"status": self.status, "size": self.size,
                "disks": list(self.chosen), "witness": self.witness}


@dataclass
class SolveOptions:
    algo: str = "auto"                   # auto | general | unit | halfplane | oracle
    sigma_backend: str = "binary"        # binary | cascade
    prune_mode: Optional[str] = None     # fvd | cap | dual | naive (overrides algo)
    validate_input: bool = True


_ALGO_PRUNE = {"general": "fvd", "unit": "cap", "halfplane": "dual"}
_VARIANT_PRUNE = {"unit-disk": "cap", "lower-halfplane": "dual",
                  "line-constrained": "fvd", "line-separable": "fvd"}


def resolve_prune_mode(variant: str, options: SolveOptions) -> str:
    if options.prune_mode is not None:
        return options.prune_mode
    if options.algo == "auto":
        return _VARIANT_PRUNE[variant]
    try:
        return _ALGO_PRUNE[options.algo]
    except KeyError:
        raise InstanceError(f"unknown algorithm '{options.algo}'") from None


def solve(inst: Instance, options: Optional[SolveOptions] = None) -> Solution:
    """Full pipeline: normalize, prune containments, covering index,
    feasibility, prunable detection, window sweep, 1D greedy, lift."""
    options = options or SolveOptions()
    timings: Dict[str, float] = {}
    t_total = time.perf_counter()

    t = time.perf_counter()
    inst = normalize(inst)
    if options.validate_input:
        report = validate(inst)
        if not report.ok:
            raise InstanceError("; ".join(report.findings))
    timings["normalize"] = time.perf_counter() - t

    if options.algo == "oracle":
        from .oracle import brute_min_cover
        size, ids, witness = brute_min_cover(inst)
        timings["total"] = time.perf_counter() - t_total
        if size is None:
            return Solution("infeasible", 0, [], witness, timings)
        return Solution("optimal", size, sorted(ids), None, timings)

    t = time.perf_counter()
    si = prune_contained(inst)
    xs, ys, porder = sorted_points(inst)
    timings["containment"] = time.perf_counter() - t

    if inst.n == 0:
        timings["total"] = time.perf_counter() - t_total
        return Solution("optimal", 0, [], None, timings)

    t = time.perf_counter()
    idx = build_sigma_index(si, backend=options.sigma_backend)
    timings["sigma_build"] = time.perf_counter() - t

    t = time.perf_counter()
    sig = idx.sigma_table(xs, ys)
    timings["sigma_query"] = time.perf_counter() - t

    if not sig.all_covered:
        witness = int(np.min(porder[~sig.covered]))
        timings["total"] = time.perf_counter() - t_total
        return Solution("infeasible", 0, [], witness, timings)

    t = time.perf_counter()
    mode = resolve_prune_mode(inst.variant, options)
    prunable = find_prunable(si, sig, xs, ys, mode)
    survivors = [i for i in range(si.m) if i not in prunable]
    timings["prune"] = time.perf_counter() - t

    t = time.perf_counter()
    ab = compute_ab(sig, survivors, si.m)
    one_d = build_segments(ab, xs, orig_of=si.orig)
    chosen = sorted(greedy_cover_1d(one_d))
    timings["reduce"] = time.perf_counter() - t

    timings["total"] = time.perf_counter() - t_total
    return Solution("optimal", len(chosen), chosen, None, timings)
