import json

import numpy as np
import pytest

from diskcover.instance import loads_instance, normalize, prune_contained, sorted_points
from diskcover.oracle import (GenParams, GuardExceeded, brute_min_cover,
                              brute_prunable, brute_sigma, gen_instance,
                              verify_cover)
from diskcover.instance import dumps_instance


def make(variant, points, disks=None, halfplanes=None):
    return loads_instance(json.dumps({
        "variant": variant, "line_y": 0.0, "points": points,
        **({"disks": disks} if disks is not None else {}),
        **({"halfplanes": halfplanes} if halfplanes is not None else {}),
    }))


E1 = make("line-constrained", [[0, 1], [3, 1], [6, 1]],
          disks=[[0, 0, 2], [3, 0, 2], [6, 0, 2]])
E2 = make("line-constrained", [[0, 1], [2, 2.2], [4, 1]],
          disks=[[0, 0, 3], [2, 0, 2], [4, 0, 3]])


def sorted_view(inst):
    ni = normalize(inst)
    si = prune_contained(ni)
    xs, ys, _ = sorted_points(ni)
    return si, xs, ys


def test_brute_sigma_e1():
    si, xs, ys = sorted_view(E1)
    s1, s2 = brute_sigma(xs, ys, si)
    assert list(s1) == [0, 1, 2]
    assert list(s2) == [0, 1, 2]


def test_brute_sigma_single_disk_and_uncovered():
    inst = make("unit-disk", [[0, 1], [0.5, 0.5], [50, 1]], disks=[[0, 0, 2]])
    si, xs, ys = sorted_view(inst)
    s1, s2 = brute_sigma(xs, ys, si)
    assert list(s1) == [0, 0, -1]
    assert list(s2) == [0, 0, -1]


def test_brute_prunable_examples():
    si, xs, ys = sorted_view(E2)
    s1, s2 = brute_sigma(xs, ys, si)
    assert brute_prunable(xs, ys, si, s1, s2) == {1}
    si, xs, ys = sorted_view(E1)
    s1, s2 = brute_sigma(xs, ys, si)
    assert brute_prunable(xs, ys, si, s1, s2) == set()


def test_brute_prunable_single_region():
    inst = make("unit-disk", [[0, 1]], disks=[[0, 0, 2]])
    si, xs, ys = sorted_view(inst)
    s1, s2 = brute_sigma(xs, ys, si)
    assert brute_prunable(xs, ys, si, s1, s2) == set()


def test_brute_min_cover():
    assert brute_min_cover(E1)[0] == 3
    assert brute_min_cover(E2)[0] == 2
    empty = make("unit-disk", [], disks=[[0, 0, 1]])
    assert brute_min_cover(empty) == (0, [], None)


def test_brute_min_cover_infeasible_witness():
    inst = make("unit-disk", [[0, 1], [90, 1]], disks=[[0, 0, 2]])
    size, ids, witness = brute_min_cover(inst)
    assert size is None and witness == 1


def test_brute_min_cover_guard():
    inst = make("unit-disk", [[0, 1]], disks=[[0, 0, 2]] * 25)
    with pytest.raises(GuardExceeded):
        brute_min_cover(inst)


def test_verify_cover():
    assert verify_cover(E2, [0, 2])
    assert not verify_cover(E2, [1])
    assert verify_cover(make("unit-disk", [], disks=[[0, 0, 1]]), [])
    with pytest.raises(ValueError):
        verify_cover(E2, [5])


def test_gen_deterministic():
    for variant in ("unit-disk", "line-constrained", "lower-halfplane"):
        gp = GenParams(variant, 50, 20, seed=123)
        a = dumps_instance(gen_instance(gp))
        b = dumps_instance(gen_instance(gp))
        assert a == b
        c = dumps_instance(gen_instance(GenParams(variant, 50, 20, seed=124)))
        assert a != c


def test_gen_feasible_instances_are_covered():
    rng = np.random.default_rng(40)
    for variant in ("unit-disk", "line-constrained", "lower-halfplane"):
        for _ in range(20):
            gp = GenParams(variant, 100, 50, seed=int(rng.integers(2**32)))
            inst = gen_instance(gp)
            from diskcover.instance import validate
            ni = normalize(inst)
            assert validate(ni).ok
            si = prune_contained(ni)
            xs, ys, _ = sorted_points(ni)
            s1, _ = brute_sigma(xs, ys, si)
            assert np.all(s1 >= 0)


def test_gen_empty_points():
    inst = gen_instance(GenParams("unit-disk", 0, 5, seed=1))
    assert inst.n == 0 and inst.m == 5


def test_cover_size_monotone_when_adding_disk():
    rng = np.random.default_rng(41)
    for _ in range(40):
        gp = GenParams("line-constrained", int(rng.integers(1, 9)),
                       int(rng.integers(1, 8)), seed=int(rng.integers(2**32)), span=4.0)
        inst = gen_instance(gp)
        base, _, _ = brute_min_cover(inst)
        if base is None:
            continue
        disks = inst.disks.tolist() + [[float(rng.uniform(-4, 4)), 0.0,
                                        float(rng.uniform(0.5, 4))]]
        bigger = make("line-constrained", inst.points.tolist(), disks=disks)
        more, _, _ = brute_min_cover(bigger)
        assert more is not None and more <= base
