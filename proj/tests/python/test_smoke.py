"""End-to-end smoke tests for the python bindings."""

import math

import pytest

import mcl


def test_version():
    assert mcl.__version__


def test_domain_and_distance():
    spec = mcl.make_domain(mcl.DomainKind.hamming, 4)
    x = mcl.Point.from_bit_string("0011")
    y = mcl.Point.from_bit_string("0110")
    assert mcl.distance(spec, x, y) == 0.5
    assert mcl.distance(spec, x, x) == 0.0


def test_sampling_is_deterministic():
    spec = mcl.make_domain(mcl.DomainKind.unit_cube, 8)
    a = mcl.sample_points(spec, 7, 5)
    b = mcl.sample_points(spec, 7, 5)
    assert all(p == q for p, q in zip(a, b))


def test_dimension_mismatch_raises():
    spec = mcl.make_domain(mcl.DomainKind.unit_cube, 3)
    with pytest.raises(mcl.MclError):
        mcl.distance(spec, mcl.Point([1.0]), mcl.Point([1.0, 2.0, 3.0]))


def test_tree_matches_linear_scan():
    spec = mcl.make_domain(mcl.DomainKind.hamming, 12)
    data = mcl.sample_points(spec, 42, 256)
    tree = mcl.build_tree(data, spec, mcl.BuildParams(strategy=mcl.Strategy.vp, b=8), 42)
    ok, violations = mcl.validate_tree(tree, data)
    assert ok, violations
    center = data[17]
    matches, trace = mcl.range_search(tree, data, center, 0.3)
    assert matches == mcl.linear_scan(data, spec, center, 0.3)
    assert trace.cost() >= len(matches)

    nn = mcl.nn_search(tree, data, center)
    assert nn["index"] == 17
    assert nn["distance"] == 0.0


def test_nn_agrees_with_bruteforce():
    spec = mcl.make_domain(mcl.DomainKind.unit_cube, 4)
    data = mcl.sample_points(spec, 9, 128)
    tree = mcl.build_tree(data, spec, mcl.BuildParams(strategy=mcl.Strategy.ball), 9)
    queries = mcl.sample_points(spec, 1001, 20)
    for q in queries:
        nn = mcl.nn_search(tree, data, q)
        dists = [mcl.distance(spec, q, p) for p in data]
        assert nn["distance"] == min(dists)
        assert nn["index"] == dists.index(min(dists))


def test_concentration_formulas():
    assert mcl.chernoff_okamoto_bound(0.1, 50) == pytest.approx(math.exp(-0.375), rel=1e-12)
    assert mcl.halfcube_alpha_exact(50, 0.1) == pytest.approx(0.05946022627971814, abs=1e-12)
    assert mcl.halfcube_alpha_exact(50, 0.1) <= mcl.chernoff_okamoto_bound(0.1, 50)
    lo, hi = mcl.bin_access_prediction(100.0)
    assert (lo, hi) == (5.0, 0.05)


def test_vc_bounds():
    assert mcl.goldberg_jerrum_bound(3, 10) == 144
    assert mcl.bins_class_bound(8, 4) == 768.0
    assert mcl.sample_size_bound(0.1, 0.05, 10) == 881725
    assert mcl.hamming_balls_vc_upper_bound(64) == 70


def test_nn_radius_stats():
    spec = mcl.make_domain(mcl.DomainKind.hamming, 64)
    stats = mcl.nn_radius_stats(spec, 256, 100, 3)
    assert stats.p10 <= stats.median <= stats.p90
    assert stats.occupancy >= 1.0
    oracle = mcl.nn_median_prediction(64, 256)
    assert abs(stats.median - oracle) < 0.08


def test_tree_roundtrip(tmp_path):
    spec = mcl.make_domain(mcl.DomainKind.gaussian, 5)
    data = mcl.sample_points(spec, 3, 64)
    tree = mcl.build_tree(data, spec, mcl.BuildParams(), 3)
    path = str(tmp_path / "t.mct")
    mcl.save_tree(path, tree)
    back = mcl.load_tree(path)
    assert back.leaf_count == tree.leaf_count
    m1, _ = mcl.range_search(tree, data, data[0], 0.5)
    m2, _ = mcl.range_search(back, data, data[0], 0.5)
    assert m1 == m2
