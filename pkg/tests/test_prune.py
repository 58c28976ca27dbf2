import json
import math

import numpy as np
import pytest

from diskcover.geom import Point, point_in_region
from diskcover.instance import loads_instance, normalize, prune_contained, sorted_points
from diskcover.oracle import GenParams, brute_prunable, brute_sigma, gen_instance
from diskcover.prune import (FarthestStruct, UncoveredPointError, build_cap_chain,
                             build_dual_envelope, build_prune_index, cap_contains,
                             farthest_point, find_prunable)
from diskcover.sigma import build_sigma_index


def pipeline(variant, points, disks=None, halfplanes=None):
    inst = normalize(loads_instance(json.dumps({
        "variant": variant, "line_y": 0.0, "points": points,
        **({"disks": disks} if disks is not None else {}),
        **({"halfplanes": halfplanes} if halfplanes is not None else {}),
    })))
    si = prune_contained(inst)
    xs, ys, _ = sorted_points(inst)
    tab = build_sigma_index(si).sigma_table(xs, ys)
    return inst, si, xs, ys, tab


E1 = dict(points=[[0, 1], [3, 1], [6, 1]], disks=[[0, 0, 2], [3, 0, 2], [6, 0, 2]])
E2 = dict(points=[[0, 1], [2, 2.2], [4, 1]], disks=[[0, 0, 3], [2, 0, 2], [4, 0, 3]])


# ----------------------------------------------------------------- canonical sets

def test_canonical_union_property():
    rng = np.random.default_rng(20)
    for _ in range(50):
        gp = GenParams("unit-disk", int(rng.integers(1, 60)), int(rng.integers(1, 40)),
                       seed=int(rng.integers(2**32)), span=6.0)
        inst = normalize(gen_instance(gp))
        si = prune_contained(inst)
        xs, ys, _ = sorted_points(inst)
        tab = build_sigma_index(si).sigma_table(xs, ys)
        if not tab.all_covered:
            continue
        pi = build_prune_index(si, tab, xs, ys, "naive")
        for i in range(si.m):
            union = []
            for d in range(pi.depth + 1):
                k = i >> (pi.depth - d)
                union.extend(pi.node_points(d, k).tolist())
            want = [p for p in range(len(xs)) if tab.s1[p] <= i <= tab.s2[p]]
            assert sorted(union) == want
            assert len(union) == len(set(union))      # each point stored once


def test_single_point_canonical_sets():
    inst, si, xs, ys, tab = pipeline("unit-disk", [[0, 1]],
                                     disks=[[0, 0, 2], [3.5, 0, 2]])
    pi = build_prune_index(si, tab, xs, ys, "naive")
    total = sum(len(pi.node_points(d, k))
                for d in range(pi.depth + 1) for k in range(1 << d))
    assert total <= pi.depth + 1


def test_rejects_uncovered():
    inst, si, xs, ys, tab = pipeline("unit-disk", [[100, 1]], disks=[[0, 0, 2]])
    with pytest.raises(UncoveredPointError):
        build_prune_index(si, tab, xs, ys, "naive")


# ----------------------------------------------------------------- farthest / cap

def test_farthest_singleton():
    fs = FarthestStruct(np.array([0.0]), np.array([1.0]), np.array([0]),
                        (-5, -5, 5, 5))
    assert farthest_point(fs, Point(0, -1)) == Point(0.0, 1.0, 0)


def test_farthest_symmetric_pair():
    fs = FarthestStruct(np.array([-1.0, 1.0]), np.array([1.0, 1.0]),
                        np.array([0, 1]), (-5, -5, 5, 5))
    assert farthest_point(fs, Point(-2, 0)).x == 1.0


def test_farthest_matches_naive_scan():
    rng = np.random.default_rng(21)
    for _ in range(20):
        pts = rng.uniform(-5, 5, (20, 2))
        pts[:, 1] = np.abs(pts[:, 1])
        order = np.argsort(pts[:, 0], kind="stable")
        px, py = pts[order, 0], pts[order, 1]
        fs = FarthestStruct(px, py, np.arange(20), (-7, -7, 7, 0))
        for _ in range(100):
            q = (float(rng.uniform(-6, 6)), float(rng.uniform(-6, 0)))
            fx, fy, _ = fs.farthest(*q)
            got = (q[0] - fx) ** 2 + (q[1] - fy) ** 2
            want = max((q[0] - x) ** 2 + (q[1] - y) ** 2 for x, y in zip(px, py))
            assert got == pytest.approx(want, rel=1e-12)


def test_cap_contains_examples():
    cc = build_cap_chain([0.0], [1.0], 2.0)
    assert cap_contains(cc, Point(0, -0.5))       # distance 1.5 <= 2
    assert not cap_contains(cc, Point(0, -1.5))   # distance 2.5 > 2
    cc2 = build_cap_chain([-1.0, 1.0], [1.0, 1.0], 2.0)
    # max squared distance from (0,-0.9): 1 + 3.61 = 4.61 > 4
    assert not cap_contains(cc2, Point(0, -0.9))
    assert cap_contains(cc2, Point(0, -0.7))      # 1 + 2.89 < 4


def test_cap_matches_naive_max_distance():
    rng = np.random.default_rng(22)
    for _ in range(50):
        k = int(rng.integers(1, 25))
        px = np.sort(rng.uniform(-4, 4, k))
        py = rng.uniform(0, 1.8, k)
        r = 2.0
        cc = build_cap_chain(px.tolist(), py.tolist(), r)
        assert np.all(np.diff(cc.starts) > 0)
        for _ in range(60):
            q = (float(rng.uniform(-6, 6)), float(rng.uniform(-3, 0)))
            want = max((q[0] - x) ** 2 + (q[1] - y) ** 2
                       for x, y in zip(px, py)) <= r * r
            assert cc.contains(*q) == want


def test_dual_envelope_matches_naive():
    rng = np.random.default_rng(23)
    for _ in range(50):
        k = int(rng.integers(1, 25))
        px = np.sort(rng.uniform(-4, 4, k))
        py = rng.uniform(0, 3, k)
        de = build_dual_envelope(px.tolist(), py.tolist())
        for _ in range(60):
            a = float(rng.uniform(-3, 3))
            b = float(rng.uniform(-2, 6))
            want = bool(np.all(py <= a * px + b))
            assert de.covers_all(a, b) == want


# ----------------------------------------------------------------- find_prunable

def test_find_prunable_examples():
    inst, si, xs, ys, tab = pipeline("line-constrained", **E1)
    for mode in ("fvd", "naive"):
        assert find_prunable(si, tab, xs, ys, mode) == set()

    inst, si, xs, ys, tab = pipeline("line-constrained", **E2)
    # witness p=(2, 2.2) is outside the middle disk with covering range [0, 2]
    for mode in ("fvd", "naive"):
        assert find_prunable(si, tab, xs, ys, mode) == {1}


def test_find_prunable_single_disk():
    inst, si, xs, ys, tab = pipeline("unit-disk", [[0, 1]], disks=[[0, 0, 2]])
    assert find_prunable(si, tab, xs, ys, "cap") == set()


def test_mode_compatibility():
    inst, si, xs, ys, tab = pipeline("line-constrained", **E2)
    with pytest.raises(ValueError):
        build_prune_index(si, tab, xs, ys, "cap")     # mixed radii
    with pytest.raises(ValueError):
        build_prune_index(si, tab, xs, ys, "dual")    # not half-planes


def modes_for(variant):
    out = ["naive"]
    if variant == "unit-disk":
        out += ["cap", "fvd"]
    elif variant == "line-constrained":
        out += ["fvd"]
    else:
        out += ["dual"]
    return out


def test_find_prunable_matches_bruteforce():
    rng = np.random.default_rng(24)
    per_variant = {v: 0 for v in ("unit-disk", "line-constrained", "lower-halfplane")}
    trial = 0
    while min(per_variant.values()) < 1000:
        variant = ("unit-disk", "line-constrained", "lower-halfplane")[trial % 3]
        trial += 1
        if per_variant[variant] >= 1000:
            continue
        n = int(rng.integers(1, 301))
        m = int(rng.integers(1, 301))
        gp = GenParams(variant, n, m, seed=int(rng.integers(2**32)),
                       span=float(rng.uniform(3, 40)))
        inst = normalize(gen_instance(gp))
        si = prune_contained(inst)
        xs, ys, _ = sorted_points(inst)
        s1, s2 = brute_sigma(xs, ys, si)
        if np.any(s1 < 0):
            continue
        per_variant[variant] += 1
        tab = build_sigma_index(si).sigma_table(xs, ys)
        want = brute_prunable(xs, ys, si, s1, s2)
        for mode in modes_for(variant):
            assert find_prunable(si, tab, xs, ys, mode) == want, (variant, mode, gp.seed)


def test_prunable_iff_covered_on_both_sides():
    # prunable <=> some point outside s_i covered by a region on each side
    rng = np.random.default_rng(25)
    for trial in range(300):
        variant = ("unit-disk", "line-constrained")[trial % 2]
        gp = GenParams(variant, int(rng.integers(1, 15)), int(rng.integers(1, 10)),
                       seed=int(rng.integers(2**32)), span=5.0)
        inst = normalize(gen_instance(gp))
        si = prune_contained(inst)
        xs, ys, _ = sorted_points(inst)
        s1, s2 = brute_sigma(xs, ys, si)
        if np.any(s1 < 0):
            continue
        regions = [si.region(k) for k in range(si.m)]
        direct = set()
        for i in range(si.m):
            for t in range(len(xs)):
                p = Point(float(xs[t]), float(ys[t]))
                if point_in_region(regions[i], p):
                    continue
                left = any(point_in_region(regions[k], p) for k in range(i))
                right = any(point_in_region(regions[k], p) for k in range(i + 1, si.m))
                if left and right:
                    direct.add(i)
                    break
        assert direct == brute_prunable(xs, ys, si, s1, s2)


def test_cap_chain_piece_is_boundary_minimizer():
    # on each chain piece the owning site's arc is the pointwise highest
    rng = np.random.default_rng(26)
    # keep the spread under 2r so the cap window is nonempty
    px = np.sort(rng.uniform(-1.5, 1.5, 15))
    py = rng.uniform(0, 1.5, 15)
    r = 2.0
    cc = build_cap_chain(px.tolist(), py.tolist(), r)
    for t in range(len(cc.starts)):
        lo = max(cc.starts[t], cc.lo_x)
        hi = min(cc.starts[t + 1] if t + 1 < len(cc.starts) else cc.hi_x, cc.hi_x)
        if lo >= hi:
            continue
        for x in np.linspace(lo + 1e-9, hi - 1e-9, 25):
            own = cc.site_y[t] - math.sqrt(max(r * r - (x - cc.site_x[t]) ** 2, 0))
            best = max(y - math.sqrt(max(r * r - (x - sx) ** 2, 0))
                       for sx, y in zip(px, py))
            assert own == pytest.approx(best, abs=1e-9)
