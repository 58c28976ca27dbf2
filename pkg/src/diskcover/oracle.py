"""Brute-force references and instance generators for differential testing.

Everything here evaluates definitions directly (full membership matrix,
subset enumeration) and deliberately shares no code with the fast paths
beyond the instance data model, so the two sides can check each other.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from typing import Sequence, Set, Tuple

import numpy as np

from .instance import COORD_LIMIT, Instance, SortedInstance

BRUTE_COVER_GUARD = 20


class GuardExceeded(ValueError):
    """Subset enumeration refused: instance too large for the oracle."""


class GenBudgetExhausted(RuntimeError):
    """The generator's rejection budget ran out."""


@dataclass
class GenParams:
    variant: str
    n: int
    m: int
    seed: int
    span: float = 20.0
    radius: float = 2.0                   # unit-disk variant
    radius_range: Tuple[float, float] = (0.5, 4.0)   # line-constrained
    slope_range: Tuple[float, float] = (-2.0, 2.0)   # lower-halfplane
    intercept_range: Tuple[float, float] = (-2.0, 6.0)
    feasible_only: bool = True
    line_y: float = 0.0


def _membership_matrix(xs: np.ndarray, ys: np.ndarray, si: SortedInstance) -> np.ndarray:
    """Closed membership of every x-sorted point in every sorted region, (n, m)."""
    if si.family == "disk":
        cx = si.cols[:, 0][None, :]
        cy = si.cols[:, 1][None, :]
        r = si.cols[:, 2][None, :]
        dx = xs[:, None] - cx
        dy = ys[:, None] - cy
        return dx * dx + dy * dy <= r * r
    a = si.cols[:, 0][None, :]
    b = si.cols[:, 1][None, :]
    return ys[:, None] <= a * xs[:, None] + b


def brute_sigma(xs: np.ndarray, ys: np.ndarray, si: SortedInstance):
    """Exact (smallest, largest) covering sorted index per point; -1 if uncovered."""
    n = len(xs)
    if n == 0 or si.m == 0:
        e = np.full(n, -1, dtype=np.int64)
        return e, e.copy()
    mat = _membership_matrix(xs, ys, si)
    any_cover = mat.any(axis=1)
    s1 = np.where(any_cover, mat.argmax(axis=1), -1).astype(np.int64)
    s2 = np.where(any_cover, si.m - 1 - mat[:, ::-1].argmax(axis=1), -1).astype(np.int64)
    return s1, s2


def brute_prunable(xs: np.ndarray, ys: np.ndarray, si: SortedInstance,
                   s1: np.ndarray, s2: np.ndarray) -> Set[int]:
    """Sorted indices i with some point outside region i whose covering
    index range [s1, s2] straddles i (the direct quantifier)."""
    m = si.m
    if m == 0 or len(xs) == 0:
        return set()
    mat = _membership_matrix(xs, ys, si)
    idx = np.arange(m)[None, :]
    witness = (~mat) & (s1[:, None] <= idx) & (idx <= s2[:, None])
    return set(np.nonzero(witness.any(axis=0))[0].tolist())


def _cover_masks(inst: Instance) -> Tuple[list, int]:
    """Per-region bitmask over input point indices, plus the full mask."""
    n = inst.n
    full = (1 << n) - 1
    masks = []
    if inst.is_halfplane:
        a = inst.halfplanes[:, 0]
        b = inst.halfplanes[:, 1]
        for j in range(inst.m):
            mask = 0
            for i in range(n):
                x, y = inst.points[i]
                if y <= a[j] * x + b[j]:
                    mask |= 1 << i
            masks.append(mask)
    else:
        for j in range(inst.m):
            cx, cy, r = inst.disks[j]
            r2 = r * r
            mask = 0
            for i in range(n):
                dx = inst.points[i, 0] - cx
                dy = inst.points[i, 1] - cy
                if dx * dx + dy * dy <= r2:
                    mask |= 1 << i
            masks.append(mask)
    return masks, full


def brute_min_cover(inst: Instance):
    """Minimum cover by raw subset enumeration in increasing cardinality.

    Works on the normalized instance so the line-constrained reflection
    applies; ids reported are input ids.  Returns (size, ids, witness):
    witness is the lowest uncovered input point id when infeasible.
    """
    from .instance import normalize

    inst = normalize(inst)
    if inst.m > BRUTE_COVER_GUARD:
        raise GuardExceeded(
            f"brute_min_cover enumerates subsets; m={inst.m} exceeds {BRUTE_COVER_GUARD}")
    masks, full = _cover_masks(inst)
    if full == 0:
        return 0, [], None
    union = 0
    for mask in masks:
        union |= mask
    if union != full:
        uncovered = full & ~union
        return None, [], (uncovered & -uncovered).bit_length() - 1
    for k in range(1, inst.m + 1):
        for combo in itertools.combinations(range(inst.m), k):
            got = 0
            for j in combo:
                got |= masks[j]
            if got == full:
                return k, list(combo), None
    raise AssertionError("unreachable: full union covers")


def verify_cover(inst: Instance, chosen: Sequence[int]) -> bool:
    """Direct check that the chosen region ids cover every point.

    Disk membership is only evaluated for points inside the disk's
    x-extent (found by binary search on the x-sorted points), so the
    cost is proportional to how much the chosen disks overlap.
    """
    from .instance import normalize

    inst = normalize(inst)
    for j in chosen:
        if not (0 <= j < inst.m):
            raise ValueError(f"unknown region id {j}")
    if inst.n == 0:
        return True
    if not chosen:
        return False
    order = np.argsort(inst.points[:, 0], kind="stable")
    xs = inst.points[order, 0]
    ys = inst.points[order, 1]
    covered = np.zeros(inst.n, dtype=bool)
    if inst.is_halfplane:
        for j in chosen:
            a, b = inst.halfplanes[j]
            covered |= ys <= a * xs + b
    else:
        for j in chosen:
            cx, cy, r = inst.disks[j]
            half = r * r - cy * cy
            if half < 0.0:
                continue
            half = math.sqrt(half)
            lo = int(np.searchsorted(xs, cx - half, side="left"))
            hi = int(np.searchsorted(xs, cx + half, side="right"))
            if lo >= hi:
                continue
            seg_x = xs[lo:hi]
            seg_y = ys[lo:hi]
            covered[lo:hi] |= (seg_x - cx) ** 2 + (seg_y - cy) ** 2 <= r * r
    return bool(covered.all())


def gen_instance(gp: GenParams) -> Instance:
    """Deterministic random instance for the given parameters.

    Feasible generation places each point inside a randomly chosen
    region's above-line part, so no rejection loop is needed for disks;
    half-planes resample hosts whose window slice is empty, within a
    bounded budget.
    """
    if gp.n < 0 or gp.m < 0:
        raise ValueError("n and m must be nonnegative")
    rng = np.random.default_rng(gp.seed)
    if gp.variant == "unit-disk":
        return _gen_unit(gp, rng)
    if gp.variant == "line-constrained":
        return _gen_line_constrained(gp, rng)
    if gp.variant == "lower-halfplane":
        return _gen_halfplane(gp, rng)
    raise ValueError(f"no generator for variant '{gp.variant}'")


def _sample_in_disks(rng, n, cx, cy, r) -> np.ndarray:
    """n points, each uniform-in-x under the upper arc of a random disk."""
    if n == 0:
        return np.empty((0, 2))
    m = len(cx)
    if m == 0:
        raise GenBudgetExhausted("cannot place feasible points without regions")
    host = rng.integers(0, m, n)
    half = np.sqrt(np.maximum(r[host] ** 2 - cy[host] ** 2, 0.0))
    x = cx[host] + (2.0 * rng.random(n) - 1.0) * half
    top = cy[host] + np.sqrt(np.maximum(r[host] ** 2 - (x - cx[host]) ** 2, 0.0))
    y = rng.random(n) * np.maximum(top, 0.0)
    return np.column_stack([x, y])


def _gen_unit(gp: GenParams, rng) -> Instance:
    r = gp.radius
    cx = rng.uniform(-gp.span, gp.span, gp.m)
    cy = rng.uniform(-0.9 * r, 0.0, gp.m)
    rr = np.full(gp.m, r)
    if gp.feasible_only:
        pts = _sample_in_disks(rng, gp.n, cx, cy, rr)
    else:
        pts = np.column_stack([rng.uniform(-gp.span - r, gp.span + r, gp.n),
                               rng.uniform(0.0, 1.2 * r, gp.n)])
    pts[:, 1] += gp.line_y
    return Instance("unit-disk", gp.line_y, pts,
                    disks=np.column_stack([cx, cy + gp.line_y, rr]))


def _gen_line_constrained(gp: GenParams, rng) -> Instance:
    lo, hi = gp.radius_range
    cx = rng.uniform(-gp.span, gp.span, gp.m)
    rr = rng.uniform(lo, hi, gp.m)
    cy = np.zeros(gp.m)
    if gp.feasible_only:
        pts = _sample_in_disks(rng, gp.n, cx, cy, rr)
    else:
        pts = np.column_stack([rng.uniform(-gp.span - hi, gp.span + hi, gp.n),
                               rng.uniform(0.0, 1.2 * hi, gp.n)])
    # points may sit on either side of the line in this variant
    flip = rng.random(gp.n) < 0.5
    pts[flip, 1] = -pts[flip, 1]
    pts[:, 1] += gp.line_y
    return Instance("line-constrained", gp.line_y, pts,
                    disks=np.column_stack([cx, cy + gp.line_y, rr]))


def _gen_halfplane(gp: GenParams, rng) -> Instance:
    a = rng.uniform(gp.slope_range[0], gp.slope_range[1], gp.m)
    b = rng.uniform(gp.intercept_range[0], gp.intercept_range[1], gp.m)
    if gp.feasible_only:
        if gp.n and gp.m == 0:
            raise GenBudgetExhausted("no half-planes to host points")
        limit = 0.9 * COORD_LIMIT
        pts = np.empty((gp.n, 2))
        budget = 100 * max(gp.n, 1) + 100
        placed = 0
        while placed < gp.n:
            if budget <= 0:
                raise GenBudgetExhausted(
                    "could not place feasible points inside the half-plane union")
            budget -= 1
            j = int(rng.integers(0, gp.m))
            aj, bj = float(a[j]), float(b[j])
            lo, hi = -gp.span, gp.span
            if aj > 0.0:
                x0 = -bj / aj
                if x0 > lo:
                    lo, hi = x0, x0 + 2.0 * gp.span   # ray starts right of the window
            elif aj < 0.0:
                x0 = -bj / aj
                if x0 < hi:
                    lo, hi = x0 - 2.0 * gp.span, x0
            elif bj < 0.0:
                continue                               # vacuous half-plane
            if lo > hi or abs(lo) > limit or abs(hi) > limit:
                continue
            x = rng.uniform(lo, hi)
            top = aj * x + bj
            if top < 0.0:
                continue
            pts[placed] = (x, rng.random() * min(top, 4.0 * gp.span, limit))
            placed += 1
    else:
        pts = np.column_stack([rng.uniform(-gp.span, gp.span, gp.n),
                               rng.uniform(0.0, gp.span, gp.n)])
    pts[:, 1] += gp.line_y
    return Instance("lower-halfplane", gp.line_y, pts,
                    halfplanes=np.column_stack([a, b + gp.line_y]))
