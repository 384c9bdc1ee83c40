import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from bfsmooth.errors import InputError, ParameterError, UnisolvencyError
from bfsmooth.polyspace import (
    PolyFrame,
    enumerate_multi_indices,
    is_unisolvent,
    lagrange_apply,
    minimal_unisolvent_subset,
    unisolvency_matrix,
)


class TestEnumeration:
    def test_d1_theta2(self):
        assert enumerate_multi_indices(1, 2) == [(0,), (1,)]

    def test_d2_theta2(self):
        assert enumerate_multi_indices(2, 2) == [(0, 0), (1, 0), (0, 1)]

    def test_d2_theta3_brute_force(self):
        expected = {
            alpha
            for alpha in ((i, j) for i in range(3) for j in range(3))
            if sum(alpha) < 3
        }
        got = enumerate_multi_indices(2, 3)
        assert len(got) == 6
        assert set(got) == expected

    def test_invalid_parameters(self):
        with pytest.raises(ParameterError):
            enumerate_multi_indices(0, 2)
        with pytest.raises(ParameterError):
            enumerate_multi_indices(1, 0)

    @given(d=st.integers(1, 4), theta=st.integers(1, 5))
    @settings(max_examples=40, deadline=None)
    def test_count_is_binomial(self, d, theta):
        indices = enumerate_multi_indices(d, theta)
        assert len(indices) == math.comb(theta - 1 + d, d)
        assert len(set(indices)) == len(indices)
        assert all(sum(a) < theta and min(a) >= 0 for a in indices)


class TestUnisolvencyMatrix:
    def test_vandermonde_rows(self):
        frame = PolyFrame(1, 2)
        np.testing.assert_array_equal(
            unisolvency_matrix(frame, [0.0, 1.0]), [[1, 0], [1, 1]]
        )
        np.testing.assert_array_equal(unisolvency_matrix(frame, [2.0]), [[1, 2]])

    def test_d2_identity_like(self):
        frame = PolyFrame(2, 2)
        P = unisolvency_matrix(frame, [(0, 0), (1, 0), (0, 1)])
        np.testing.assert_array_equal(P, [[1, 0, 0], [1, 1, 0], [1, 0, 1]])


class TestIsUnisolvent:
    def test_two_points_line(self):
        assert is_unisolvent(PolyFrame(1, 2), [0.0, 1.0])

    def test_collinear_points_fail(self):
        assert not is_unisolvent(PolyFrame(2, 2), [(0, 0), (1, 0), (2, 0)])

    def test_too_few_points(self):
        assert not is_unisolvent(PolyFrame(1, 3), [0.0, 1.0])

    def test_duplicates_rejected(self):
        with pytest.raises(InputError):
            is_unisolvent(PolyFrame(1, 2), [0.0, 0.0])


class TestMinimalSubset:
    def test_first_rank_increasing_prefix(self):
        uf = minimal_unisolvent_subset(PolyFrame(1, 2), [0.0, 1.0, 2.0])
        np.testing.assert_array_equal(uf.points.ravel(), [0.0, 1.0])
        # cardinal polynomials 1 - x and x over monomials (1, x)
        np.testing.assert_allclose(uf.cardinal, [[1, -1], [0, 1]], atol=1e-14)

    def test_constants(self):
        uf = minimal_unisolvent_subset(PolyFrame(1, 1), [5.0])
        assert uf.cardinal_values(123.0)[0] == pytest.approx(1.0)

    def test_greedy_skips_collinear(self):
        uf = minimal_unisolvent_subset(
            PolyFrame(2, 2), [(0, 0), (1, 0), (2, 0), (0, 1)]
        )
        np.testing.assert_array_equal(uf.points, [(0, 0), (1, 0), (0, 1)])

    def test_not_unisolvent_raises(self):
        with pytest.raises(UnisolvencyError):
            minimal_unisolvent_subset(PolyFrame(2, 2), [(0, 0), (1, 0), (2, 0)])

    @pytest.mark.parametrize("d,theta", [(1, 1), (1, 3), (2, 2), (2, 3), (3, 2)])
    def test_output_is_minimal_unisolvent(self, d, theta):
        rng = np.random.default_rng(d * 10 + theta)
        frame = PolyFrame(d, theta)
        X = rng.uniform(-1, 1, (frame.M + 10, d))
        uf = minimal_unisolvent_subset(frame, X)
        assert len(uf.points) == frame.M
        assert is_unisolvent(frame, uf.points)

    @pytest.mark.parametrize("d,theta", [(1, 2), (2, 2), (2, 3), (1, 4)])
    def test_cardinal_delta_property(self, d, theta):
        rng = np.random.default_rng(42 + d + theta)
        frame = PolyFrame(d, theta)
        X = rng.uniform(-2, 2, (frame.M + 5, d))
        uf = minimal_unisolvent_subset(frame, X)
        L = uf.cardinal_values(uf.points)
        assert np.max(np.abs(L - np.eye(frame.M))) <= 1e-10


class TestLagrangeOperators:
    def _setup(self, d=2, theta=3, seed=0):
        rng = np.random.default_rng(seed)
        frame = PolyFrame(d, theta)
        X = rng.uniform(-1, 1, (frame.M + 8, d))
        return frame, minimal_unisolvent_subset(frame, X), rng

    def test_reproduces_polynomials(self):
        frame, uf, rng = self._setup()
        coeffs = rng.standard_normal(frame.M)

        def p(x):
            return frame.monomials(x) @ coeffs

        samples = p(uf.points)
        probes = rng.uniform(-1, 1, (20, frame.d))
        np.testing.assert_allclose(
            lagrange_apply(uf, samples, probes), p(probes), atol=1e-10
        )

    def test_zero_samples_zero_projection(self):
        frame, uf, rng = self._setup(seed=1)
        probes = rng.uniform(-1, 1, (10, frame.d))
        assert np.max(np.abs(lagrange_apply(uf, np.zeros(frame.M), probes))) == 0.0

    def test_linear_interpolation_oracle(self):
        uf = minimal_unisolvent_subset(PolyFrame(1, 2), [0.0, 1.0])
        assert lagrange_apply(uf, [3.0, 5.0], 0.5) == pytest.approx(4.0)

    def test_projection_idempotent(self):
        frame, uf, rng = self._setup(seed=2)
        samples = rng.standard_normal(frame.M)
        probes = rng.uniform(-1, 1, (20, frame.d))
        once = lagrange_apply(uf, samples, probes)
        # project the projection: P(Pf) sampled on A equals Pf samples
        resampled = lagrange_apply(uf, samples, uf.points)
        twice = lagrange_apply(uf, resampled, probes)
        np.testing.assert_allclose(twice, once, atol=1e-10)

    def test_q_vanishes_on_a(self):
        frame, uf, rng = self._setup(seed=3)
        samples = rng.standard_normal(frame.M)
        for a, fa in zip(uf.points, samples):
            _, q = lagrange_apply(uf, samples, a, fx=fa)
            assert abs(q) <= 1e-10

    def test_reorder_invariance(self):
        frame, uf, rng = self._setup(seed=4)
        samples = rng.standard_normal(frame.M)
        probes = rng.uniform(-1, 1, (10, frame.d))
        base = lagrange_apply(uf, samples, probes)
        perm = rng.permutation(frame.M)
        uf2 = minimal_unisolvent_subset(frame, uf.points[perm])
        np.testing.assert_allclose(
            lagrange_apply(uf2, samples[perm], probes), base, atol=1e-12
        )

    def test_length_mismatch(self):
        _, uf, _ = self._setup(seed=5)
        with pytest.raises(InputError):
            lagrange_apply(uf, [1.0], 0.0)
