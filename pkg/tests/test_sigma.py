import json

import numpy as np
import pytest

from diskcover.geom import Point
from diskcover.instance import loads_instance, normalize, prune_contained, sorted_points
from diskcover.oracle import GenParams, brute_sigma, gen_instance
from diskcover.sigma import Envelope, RegionData, build_sigma_index, merge_envelopes


def make_sorted(variant, points, disks=None, halfplanes=None):
    inst = normalize(loads_instance(json.dumps({
        "variant": variant, "line_y": 0.0, "points": points,
        **({"disks": disks} if disks is not None else {}),
        **({"halfplanes": halfplanes} if halfplanes is not None else {}),
    })))
    return inst, prune_contained(inst)


E1_DISKS = [[0, 0, 2], [3, 0, 2], [6, 0, 2]]
E1_POINTS = [[0, 1], [3, 1], [6, 1]]
E2_DISKS = [[0, 0, 3], [2, 0, 2], [4, 0, 3]]
E2_POINTS = [[0, 1], [2, 2.2], [4, 1]]


def leaf(idx, k):
    return idx.node_envelope(idx.depth, k)


def test_merge_disjoint_arcs():
    _, si = make_sorted("unit-disk", [], disks=[[0, 0, 2], [10, 0, 2]])
    idx = build_sigma_index(si)
    root = idx.node_envelope(0, 0)
    # arc, line, arc, line
    assert list(root.rids) == [0, -1, 1, -1]
    assert list(root.starts) == [-2, 2, 8, 12]


def test_merge_identical_is_idempotent():
    _, si = make_sorted("unit-disk", [], disks=[[0, 0, 2]])
    idx = build_sigma_index(si)
    e = leaf(idx, 0)
    m = merge_envelopes(e, e, si)
    assert np.array_equal(m.starts, e.starts)
    assert np.array_equal(m.rids, e.rids)


def test_merge_crossing_breakpoint():
    _, si = make_sorted("unit-disk", [], disks=[[0, 0, 2], [3, 0, 2]])
    idx = build_sigma_index(si)
    m = merge_envelopes(leaf(idx, 0), leaf(idx, 1), si)
    assert list(m.rids) == [0, 1, -1]
    assert m.starts[1] == pytest.approx(1.5)     # radical axis of congruent disks
    # sampled pointwise maximum agrees
    rd = RegionData(si)
    for x in np.linspace(-2.5, 5.5, 200):
        want = max(rd.value(0, x) if -2 <= x <= 2 else 0.0,
                   rd.value(1, x) if 1 <= x <= 5 else 0.0, 0.0)
        assert m.value_at(rd, float(x)) == pytest.approx(want, abs=1e-12)


def test_build_single_disk():
    _, si = make_sorted("unit-disk", [], disks=[[0, 0, 2]])
    idx = build_sigma_index(si)
    assert idx.depth == 0
    assert list(leaf(idx, 0).rids) == [0, -1]


def test_build_e1_root_breakpoints():
    _, si = make_sorted("line-constrained", [], disks=E1_DISKS)
    idx = build_sigma_index(si)
    root = idx.node_envelope(0, 0)
    assert list(root.rids) == [0, 1, 2, -1]
    assert root.starts[1] == pytest.approx(1.5)
    assert root.starts[2] == pytest.approx(4.5)


def test_build_empty():
    _, si = make_sorted("unit-disk", [], disks=[])
    idx = build_sigma_index(si)
    assert idx.query_sigma(Point(0, 0)) is None


@pytest.mark.parametrize("backend", ["binary", "cascade"])
def test_query_examples(backend):
    _, si = make_sorted("line-constrained", E1_POINTS, disks=E1_DISKS)
    idx = build_sigma_index(si, backend=backend)
    assert idx.query_sigma(Point(3, 1)) == (1, 1)
    assert idx.query_sigma(Point(100, 100)) is None

    _, si2 = make_sorted("line-constrained", E2_POINTS, disks=E2_DISKS)
    idx2 = build_sigma_index(si2, backend=backend)
    # p=(2, 2.2): inside disks 0 and 2 only (2.2^2 = 4.84 > 4 rules out disk 1)
    assert idx2.query_sigma(Point(2, 2.2)) == (0, 2)


@pytest.mark.parametrize("backend", ["binary", "cascade"])
def test_sigma_matches_bruteforce(backend):
    rng = np.random.default_rng(10)
    for trial in range(200):
        variant = ("unit-disk", "line-constrained", "lower-halfplane")[trial % 3]
        gp = GenParams(variant, int(rng.integers(1, 120)), int(rng.integers(1, 120)),
                       seed=int(rng.integers(2**32)), span=float(rng.uniform(3, 25)),
                       feasible_only=bool(rng.random() < 0.7))
        inst = normalize(gen_instance(gp))
        si = prune_contained(inst)
        xs, ys, _ = sorted_points(inst)
        s1, s2 = brute_sigma(xs, ys, si)
        idx = build_sigma_index(si, backend=backend)
        tab = idx.sigma_table(xs, ys)
        assert np.array_equal(tab.s1, s1)
        assert np.array_equal(tab.s2, s2)
        # scalar queries agree with the batch
        for t in rng.choice(len(xs), size=min(5, len(xs)), replace=False):
            got = idx.query_sigma(Point(float(xs[t]), float(ys[t])))
            want = None if s1[t] < 0 else (int(s1[t]), int(s2[t]))
            assert got == want


def test_root_envelope_is_union_boundary():
    gp = GenParams("line-constrained", 0, 30, seed=77, span=8.0)
    inst = normalize(gen_instance(gp))
    si = prune_contained(inst)
    idx = build_sigma_index(si)
    rd = RegionData(si)
    rng = np.random.default_rng(8)
    from diskcover.geom import point_in_region
    regions = [si.region(k) for k in range(si.m)]
    from diskcover.geom import Point as P
    for _ in range(10_000):
        p = P(float(rng.uniform(-12, 12)), float(rng.uniform(0, 5)))
        in_union = any(point_in_region(s, p) for s in regions)
        assert idx._covered_at(0, 0, p.x, p.y) == in_union


@pytest.mark.parametrize("backend", ["binary", "cascade"])
def test_query_at_exact_extent_endpoints(backend):
    # closed regions: a point exactly on an extent endpoint of the line
    # is covered even though the envelope switches pieces right there
    _, si = make_sorted("line-constrained", [], disks=[[0, 0, 2], [5, 0, 1]])
    idx = build_sigma_index(si, backend=backend)
    assert idx.query_sigma(Point(2.0, 0.0)) == (0, 0)    # right endpoint of disk 0
    assert idx.query_sigma(Point(-2.0, 0.0)) == (0, 0)   # left endpoint
    assert idx.query_sigma(Point(4.0, 0.0)) == (1, 1)
    assert idx.query_sigma(Point(6.0, 0.0)) == (1, 1)
    assert idx.query_sigma(Point(3.0, 0.0)) is None      # between the disks
    tab = idx.sigma_table(np.array([-2.0, 2.0, 3.0]), np.zeros(3))
    assert list(tab.s1) == [0, 0, -1]


def test_piece_count_bound():
    for variant, kw in (("line-constrained", dict(radius_range=(0.5, 4.0))),
                        ("unit-disk", {}), ("lower-halfplane", {})):
        gp = GenParams(variant, 0, 97, seed=13, span=10.0, **kw)
        si = prune_contained(normalize(gen_instance(gp)))
        idx = build_sigma_index(si)
        for level in range(idx.depth + 1):
            for k in range(1 << level):
                lo, hi = idx.node_span(level, k)
                env = idx.node_envelope(level, k)
                assert env.piece_count() <= 2 * max(hi - lo, 0) + 1
