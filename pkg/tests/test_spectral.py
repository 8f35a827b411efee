import random
from fractions import Fraction
from itertools import combinations

import numpy as np
import pytest
from hypothesis import given, strategies as st

from pgfree.errors import HypothesisError, InternalInconsistencyError
from pgfree.pointset import PointSet
from pgfree.spectral import (
    Spectrum,
    claim_quantities,
    counting_bound_check,
    fwht_inplace,
    triangle_count_spectral,
    uniformity,
    walsh_hadamard,
)

from oracles import brute_cone, brute_epsilon_min_num, brute_triangle_count, direct_walsh


def random_set(rng, r, density=0.5):
    return PointSet.from_points(r, [w for w in range(1, 1 << r) if rng.random() < density])


@pytest.mark.parametrize("r", range(1, 9))
def test_walsh_matches_direct_definition(r):
    rng = random.Random(100 + r)
    for _ in range(5):
        e = random_set(rng, r)
        spec = walsh_hadamard(e)
        assert spec.coeffs.tolist() == direct_walsh(e.points, r)
        assert spec[0] == e.size


def test_affine_spectrum_shape():
    r, gamma0 = 5, 0b00110
    e = PointSet.from_points(r, [x for x in range(1, 1 << r) if (x & gamma0).bit_count() & 1])
    spec = walsh_hadamard(e)
    expect = np.zeros(1 << r, dtype=np.int64)
    expect[0] = 1 << (r - 1)
    expect[gamma0] = -(1 << (r - 1))
    assert np.array_equal(spec.coeffs, expect)


def test_parseval_is_enforced_at_construction():
    e = PointSet.from_points(3, [1, 2, 4, 7])
    spec = walsh_hadamard(e)
    assert int(np.dot(spec.coeffs, spec.coeffs)) == e.size << 3
    bad = spec.coeffs.copy()
    bad[3] += 2
    with pytest.raises(InternalInconsistencyError):
        Spectrum(3, bad, e.size)


def test_involution_recovers_indicator():
    rng = random.Random(5)
    for r in (1, 3, 6):
        e = random_set(rng, r)
        a = e.indicator().astype(np.int64)
        fwht_inplace(a)
        fwht_inplace(a)
        assert np.array_equal(a, e.indicator().astype(np.int64) << r)


def test_uniformity_affine_and_empty():
    r, g = 4, 0b0101
    e = PointSet.from_points(r, [x for x in range(1, 16) if (x & g).bit_count() & 1])
    rep = uniformity(e)
    assert rep.epsilon_min == Fraction(1, 2)
    assert rep.alpha == Fraction(1, 2)
    assert rep.worst_gamma == g
    assert uniformity(PointSet.empty(4)).epsilon_min == 0


def test_uniformity_matches_hyperplane_loop():
    rng = random.Random(11)
    for _ in range(25):
        e = PointSet.from_points(4, rng.sample(range(1, 16), 12))
        rep = uniformity(e)
        assert rep.epsilon_min == Fraction(brute_epsilon_min_num(e.points, 4), 16)


def test_character_hyperplane_duality():
    rng = random.Random(23)
    for r in (2, 3, 5):
        e = random_set(rng, r)
        spec = walsh_hadamard(e)
        for gamma in range(1, 1 << r):
            inside = sum(1 for x in e if (x & gamma).bit_count() & 1 == 0)
            outside = e.size - inside
            assert spec[gamma] == inside - outside


def test_spectral_count_examples():
    a, b = 0b01, 0b10
    tri = PointSet.from_points(2, [a, b, a ^ b])
    assert triangle_count_spectral(tri) == 6
    full_plane = PointSet.full(3)
    assert triangle_count_spectral(full_plane) == 42
    assert brute_triangle_count(full_plane.points) == 42
    r, g = 4, 1
    affine = PointSet.from_points(r, [x for x in range(1, 16) if x & g])
    assert triangle_count_spectral(affine) == 0


def test_spectral_equals_naive_exhaustively_small():
    for r in (1, 2, 3):
        npoints = (1 << r) - 1
        for mask in range(1 << npoints):
            e = PointSet(r, mask << 1)
            t = triangle_count_spectral(e)
            assert t == brute_triangle_count(e.points)
            assert t % 6 == 0


@given(st.integers(4, 10), st.randoms(use_true_random=False))
def test_spectral_equals_brute_random(r, rng):
    pts = [w for w in range(1, 1 << r) if rng.random() < 0.4]
    e = PointSet.from_points(r, pts)
    t = triangle_count_spectral(e)
    mem = set(pts)
    pair_count = sum(1 for x, y in combinations(pts, 2) if x ^ y in mem)
    assert t == 2 * pair_count
    assert t % 6 == 0


def test_counting_bound_affine_equality():
    for r in (3, 4, 6):
        e = PointSet.from_points(r, [x for x in range(1, 1 << r) if x & 1])
        holds, lhs, rhs = counting_bound_check(e, Fraction(1, 2))
        assert holds
        assert lhs == rhs == Fraction(1 << (2 * r), 8)


def test_counting_bound_empty_and_random():
    holds, lhs, rhs = counting_bound_check(PointSet.empty(4), Fraction(1, 4))
    assert holds and lhs == 0 and rhs == 0
    rng = random.Random(3)
    for r in range(4, 11):
        e = random_set(rng, r)
        rep = uniformity(e)
        holds, lhs, rhs = counting_bound_check(e, rep.epsilon_min)
        assert holds and lhs <= rhs


def test_counting_bound_requires_uniformity():
    r, g = 4, 1
    e = PointSet.from_points(r, [x for x in range(1, 16) if x & g])
    with pytest.raises(HypothesisError) as exc:
        counting_bound_check(e, Fraction(1, 4))
    assert exc.value.witness == g


def test_claim_quantities_examples():
    tri = PointSet.from_points(3, [1, 2, 3])
    q = claim_quantities(tri)
    assert q.triangle_count == 6
    assert sum(q.cone_sizes.values()) == 6
    assert q.cone_sizes == {1: 2, 2: 2, 3: 2}

    plane = PointSet.full(3)
    q = claim_quantities(plane)
    assert set(q.cone_sizes.values()) == {6}
    assert q.triangle_count == 42
    for p in plane:
        assert len(brute_cone(plane.points, p, 3)) == 6

    free = PointSet.from_points(4, [1, 2, 4, 8])
    q = claim_quantities(free)
    assert q.triangle_count == 0
    assert set(q.cone_sizes.values()) == {0}
    assert not q.lower_holds and q.upper_holds
