import numpy as np
import pytest

from bfsmooth.errors import ParameterError
from bfsmooth.exact_smoother import diagnostics, fit_exact, functional_value
from bfsmooth.interpolant import (
    FittedModel,
    eval_model,
    fit_interpolant,
    seminorm_sq,
)
from bfsmooth.kernels import KernelSpec
from bfsmooth.polyspace import (
    PolyFrame,
    lagrange_apply,
    minimal_unisolvent_subset,
    unisolvency_matrix,
)
from conftest import scattered_points

TPS = KernelSpec("thinplate", theta=2, d=1, s=1.5)


def _instance(seed, N=30, d=1, theta=2, spec=None):
    rng = np.random.default_rng(seed)
    X = scattered_points(rng, N, d)
    y = rng.standard_normal(N)
    frame = PolyFrame(d, theta)
    if spec is None:
        spec = KernelSpec("thinplate", theta=theta, d=d, s=theta - 0.5)
    return spec, frame, X, y


class TestFitExact:
    def test_rho_nonpositive_rejected(self):
        spec, frame, X, y = _instance(0)
        with pytest.raises(ParameterError):
            fit_exact(spec, frame, X, y, rho=0.0)
        with pytest.raises(ParameterError):
            fit_exact(spec, frame, X, y, rho=-0.1)

    def test_constant_data(self):
        spec, frame, X, _ = _instance(1)
        model = fit_exact(spec, frame, X, np.full(len(X), 3.5), rho=0.7)
        probes = np.linspace(-1.4, 1.4, 50)
        np.testing.assert_allclose(eval_model(model, probes), 3.5, atol=1e-8)

    def test_polynomial_data_reproduced(self):
        spec, frame, X, _ = _instance(2)
        y = 2.0 - 0.5 * X[:, 0]
        for rho in (0.01, 1.0):
            model = fit_exact(spec, frame, X, y, rho=rho)
            probes = np.linspace(-1.4, 1.4, 50)
            np.testing.assert_allclose(
                eval_model(model, probes), 2.0 - 0.5 * probes, atol=1e-8
            )

    def test_small_rho_limit_is_interpolant(self):
        # Smooth data keeps the kernel coefficients moderate, so the O(rho)
        # departure from the interpolant is resolvable at rho = 1e-10.
        spec, frame, X, _ = _instance(3, N=25)
        y = np.sin(2.0 * X[:, 0])
        interp = fit_interpolant(spec, frame, X, y)
        smoother = fit_exact(spec, frame, X, y, rho=1e-10)
        probes = np.linspace(-1.4, 1.4, 50)
        a = eval_model(interp, probes)
        b = eval_model(smoother, probes)
        assert np.max(np.abs(a - b)) <= 1e-5 * max(np.max(np.abs(a)), 1.0)

    def test_constraint_satisfied(self):
        spec, frame, X, y = _instance(4)
        model = fit_exact(spec, frame, X, y, rho=0.2)
        assert model.constraint_violation() <= 1e-8 * max(np.linalg.norm(model.v), 1)


class TestDiagnostics:
    def test_random_instance_identities(self):
        spec, frame, X, y = _instance(5, N=30)
        model = fit_exact(spec, frame, X, y, rho=0.1)
        diag = diagnostics(model, X, y)
        assert diag.ok
        assert diag.gap_energy <= 1e-8
        assert diag.gap_seminorm <= 1e-8
        assert diag.gap_functional <= 1e-8
        assert diag.gap_constraint <= 1e-8
        assert diag.J_e == pytest.approx(
            model.rho * diag.seminorm_sq + diag.residual_ms, rel=1e-10
        )

    def test_polynomial_data_zero_functional(self):
        spec, frame, X, _ = _instance(6)
        y = 1.0 + X[:, 0]
        model = fit_exact(spec, frame, X, y, rho=0.5)
        diag = diagnostics(model, X, y)
        assert diag.ok
        assert diag.J_e <= 1e-10
        np.testing.assert_allclose(eval_model(model, X), y, atol=1e-8)

    def test_residual_orthogonal_to_polynomials(self):
        spec, frame, X, y = _instance(7, N=40)
        model = fit_exact(spec, frame, X, y, rho=0.3)
        P = unisolvency_matrix(frame, X)
        gap = P.T @ (eval_model(model, X) - y)
        assert np.linalg.norm(gap) <= 1e-8 * np.linalg.norm(y)

    def test_identities_across_kernels(self):
        specs = [
            KernelSpec("thinplate", theta=2, d=2, s=1.5),
            KernelSpec("shifted-tps", theta=2, d=2, s=1.0, a=1.0),
            KernelSpec("mq", theta=2, d=2, a=1.0),
            KernelSpec("imq", theta=2, d=2, a=1.0),
            KernelSpec("gauss", theta=2, d=2),
        ]
        for i, spec in enumerate(specs):
            _, frame, X, y = _instance((8, i), N=25, d=2, theta=2, spec=spec)
            model = fit_exact(spec, frame, X, y, rho=0.1)
            assert diagnostics(model, X, y).ok, spec.label()


class TestVariationalProperties:
    def test_functional_minimized(self):
        spec, frame, X, y = _instance(9, N=30)
        rho = 0.2
        smoother = fit_exact(spec, frame, X, y, rho)
        J_s = functional_value(smoother, X, y, rho)
        # competitor 1: the interpolant
        interp = fit_interpolant(spec, frame, X, y)
        assert J_s <= functional_value(interp, X, y, rho) + 1e-10
        # competitor 2: the zero model
        zero = FittedModel(
            spec=spec, frame=frame, centers=np.zeros((0, 1)), v=np.zeros(0),
            beta=np.zeros(frame.M),
        )
        assert J_s <= functional_value(zero, X, y, rho) + 1e-10
        # competitor 3: polynomial projection of the data through A
        uf = minimal_unisolvent_subset(frame, X)
        idx = [int(np.flatnonzero((X == a).all(axis=1))[0]) for a in uf.points]
        p_vals = uf.cardinal_values(X) @ y[idx]
        proj = fit_interpolant(spec, frame, X, p_vals)
        assert J_s <= functional_value(proj, X, y, rho) + 1e-10

    def test_contraction_on_sampled_model(self):
        # data drawn from a known member of the solution space: smoothing
        # never increases the seminorm
        spec, frame, Xc, yc = _instance(10, N=12)
        f_d = fit_interpolant(spec, frame, Xc, yc)
        rng = np.random.default_rng(1010)
        X = scattered_points(rng, 40)
        y = eval_model(f_d, X)
        for rho in (1e-3, 0.1, 10.0):
            model = fit_exact(spec, frame, X, y, rho)
            assert seminorm_sq(model) <= seminorm_sq(f_d) + 1e-8 * (
                1.0 + seminorm_sq(f_d)
            )

    def test_seminorm_monotone_in_rho(self):
        spec, frame, X, y = _instance(11, N=35)
        values = [
            seminorm_sq(fit_exact(spec, frame, X, y, rho))
            for rho in np.logspace(-6, 2, 9)
        ]
        for lo, hi in zip(values, values[1:]):
            assert hi <= lo + 1e-10 * (1.0 + lo)

    def test_non_polynomial_fixed_point_fails(self):
        # smoothing strictly changes any non-polynomial member of the space
        spec, frame, X, y = _instance(12, N=20)
        f_d = fit_interpolant(spec, frame, X, y)
        assert seminorm_sq(f_d) > 1e-6  # genuinely non-polynomial
        model = fit_exact(spec, frame, X, eval_model(f_d, X), rho=0.5)
        probes = np.linspace(-1.4, 1.4, 50)
        diff = np.max(np.abs(eval_model(model, probes) - eval_model(f_d, probes)))
        assert diff > 1e-6

    def test_polynomial_fixed_point_holds(self):
        spec, frame, X, _ = _instance(13)
        uf = minimal_unisolvent_subset(frame, X)
        samples = np.array([2.0, -1.0])  # p(x) = 2 - x through A
        y = uf.cardinal_values(X) @ samples
        model = fit_exact(spec, frame, X, y, rho=0.8)
        probes = np.linspace(-1.4, 1.4, 30)
        expected = lagrange_apply(uf, samples, probes)
        np.testing.assert_allclose(eval_model(model, probes), expected, atol=1e-8)
