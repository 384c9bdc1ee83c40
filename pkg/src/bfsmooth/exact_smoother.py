"""Exact smoother: the penalized least-squares fit over the whole space.

The smoother minimizes J_e[f] = rho |f|^2 + (1/N) sum |f(x_i) - y_i|^2
and, despite being posed over an infinite-dimensional space, always
lands in the same finite expansion as the interpolant.  The diagnostics
check the energy identities the minimizer must satisfy.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .assembly import exact_system, solve_block
from .errors import ParameterError
from .interpolant import FittedModel, eval_model, seminorm_sq
from .kernels import KernelSpec
from .polyspace import PolyFrame, as_points, unisolvency_matrix

IDENTITY_RTOL = 1e-8


def fit_exact(spec: KernelSpec, frame: PolyFrame, X, y, rho: float) -> FittedModel:
    """Fit the Exact smoother with smoothing parameter rho > 0."""
    if rho <= 0:
        raise ParameterError(
            f"rho must be > 0 (use fit_interpolant for rho = 0), got {rho}"
        )
    X = as_points(X, frame.d)
    y = np.asarray(y, dtype=float)
    sys = exact_system(spec, frame, X, y, rho)
    v, beta = sys.split(solve_block(sys))
    return FittedModel(
        spec=spec, frame=frame, centers=X, v=v, beta=beta,
        kind="exact_smoother", rho=rho,
    )


@dataclass(frozen=True)
class SmootherDiagnostics:
    """Functional value and energy-identity checks for a smoother fit.

    gap_* fields hold |left - right| / max(|right|, 1) for each identity;
    `ok` is True when every gap is within IDENTITY_RTOL.
    """

    J_e: float
    seminorm_sq: float
    residual_ms: float
    gap_energy: float
    gap_seminorm: float
    gap_functional: float
    gap_constraint: float
    ok: bool


def functional_value(model: FittedModel, X, y, rho: float | None = None) -> float:
    """J_e[model] = rho |model|^2 + mean squared residual on (X, y)."""
    if rho is None:
        rho = model.rho
    y = np.asarray(y, dtype=float)
    fitted = np.atleast_1d(eval_model(model, X))
    return rho * seminorm_sq(model) + float(np.mean((fitted - y) ** 2))


def diagnostics(model: FittedModel, X, y) -> SmootherDiagnostics:
    """Evaluate the smoother's three energy identities on its data.

    Violations are reported as relative gaps, not raised, so that
    ill-conditioned fits still return inspectable results.
    """
    X = as_points(X, model.frame.d)
    y = np.asarray(y, dtype=float)
    rho = model.rho
    s = np.atleast_1d(eval_model(model, X))
    N = len(y)
    sn = seminorm_sq(model)
    residual_ms = float(np.mean((s - y) ** 2))
    J_e = rho * sn + residual_ms

    def rel(left, right):
        return abs(left - right) / max(abs(right), 1.0)

    # 2 rho |s|^2 + mean|s - y|^2 + mean|s|^2 = mean|y|^2
    gap_energy = rel(
        2 * rho * sn + residual_ms + float(np.mean(s**2)), float(np.mean(y**2))
    )
    # |s|^2 = (1 / (N rho)) sum s(x_k)(y_k - s(x_k))
    gap_seminorm = rel(sn, float(np.sum(s * (y - s))) / (N * rho))
    # J_e = (1/N) sum (y_k - s(x_k)) y_k
    gap_functional = rel(J_e, float(np.mean((y - s) * y)))
    # P_X^T (s_X - y) = 0
    P = unisolvency_matrix(model.frame, X)
    gap_constraint = float(np.linalg.norm(P.T @ (s - y))) / max(
        np.linalg.norm(y), 1.0
    )
    ok = all(
        g <= IDENTITY_RTOL
        for g in (gap_energy, gap_seminorm, gap_functional, gap_constraint)
    )
    return SmootherDiagnostics(
        J_e=J_e,
        seminorm_sq=sn,
        residual_ms=residual_ms,
        gap_energy=gap_energy,
        gap_seminorm=gap_seminorm,
        gap_functional=gap_functional,
        gap_constraint=gap_constraint,
        ok=ok,
    )
