"""Minimal-seminorm interpolation and the fitted-model representation.

A fitted model is u(x) = sum_i v_i G(x - z_i) + sum_j beta_j p_j(x)
with the coefficient constraint P_Z^T v = 0, which places u in the
solution space W_{G,Z} + P_theta shared by the interpolant and both
smoothers.  On that space the seminorm is computable in closed form:
|u|^2 = (2 pi)^(d/2) v^T G_ZZ v.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .assembly import basis_matrix, interp_system, solve_block
from .errors import ContractError, ParameterError
from .kernels import KernelSpec
from .polyspace import PolyFrame, as_points, unisolvency_matrix

CONSTRAINT_RTOL = 1e-8
INTERP_RTOL = 1e-8

MODEL_KINDS = ("interpolant", "exact_smoother", "approx_smoother")


@dataclass(frozen=True)
class FittedModel:
    """Kernel expansion over centers Z plus a polynomial tail."""

    spec: KernelSpec
    frame: PolyFrame
    centers: np.ndarray
    v: np.ndarray
    beta: np.ndarray
    kind: str = "interpolant"
    rho: float = 0.0

    def __post_init__(self):
        if self.kind not in MODEL_KINDS:
            raise ParameterError(f"unknown model kind {self.kind!r}")
        object.__setattr__(self, "centers", as_points(self.centers, self.frame.d))
        object.__setattr__(self, "v", np.asarray(self.v, dtype=float))
        object.__setattr__(self, "beta", np.asarray(self.beta, dtype=float))
        if self.v.shape != (len(self.centers),):
            raise ParameterError("v must have one coefficient per center")
        if self.beta.shape != (self.frame.M,):
            raise ParameterError(f"beta must have length M = {self.frame.M}")

    def constraint_violation(self) -> float:
        """Norm of P_Z^T v, which must vanish for a well-formed model."""
        P = unisolvency_matrix(self.frame, self.centers)
        return float(np.linalg.norm(P.T @ self.v))


def fit_interpolant(spec: KernelSpec, frame: PolyFrame, X, y) -> FittedModel:
    """Fit the minimal-seminorm interpolant of the data (X, y)."""
    X = as_points(X, frame.d)
    y = np.asarray(y, dtype=float)
    sys = interp_system(spec, frame, X, y)
    v, beta = sys.split(solve_block(sys))
    model = FittedModel(spec=spec, frame=frame, centers=X, v=v, beta=beta)
    fitted = eval_model(model, X)
    # tolerance scale matches the solver's norm-wise residual guarantee
    scale = 1.0 + float(np.linalg.norm(y))
    worst = float(np.max(np.abs(fitted - y))) if len(y) else 0.0
    if worst > INTERP_RTOL * scale:
        raise ContractError(f"interpolation residual {worst:.3e} exceeds tolerance")
    return model


def eval_model(model: FittedModel, x):
    """Evaluate the model at one point or an array of points."""
    pts = as_points(x, model.frame.d)
    values = np.zeros(len(pts))
    if len(model.centers):
        values += basis_matrix(model.spec, pts, model.centers) @ model.v
    values += model.frame.monomials(pts) @ model.beta
    if len(values) == 1 and np.ndim(x) < 2:
        return float(values[0])
    return values


def _check_constraint(model: FittedModel):
    vnorm = np.linalg.norm(model.v)
    if model.constraint_violation() > CONSTRAINT_RTOL * max(vnorm, 1.0):
        raise ContractError("model violates P_Z^T v = 0 beyond tolerance")


def seminorm_sq(model: FittedModel) -> float:
    """Squared seminorm (2 pi)^(d/2) v^T G_ZZ v; clipped at zero."""
    _check_constraint(model)
    if not len(model.centers):
        return 0.0
    G = basis_matrix(model.spec, model.centers, model.centers)
    value = (2.0 * np.pi) ** (model.spec.d / 2.0) * float(model.v @ G @ model.v)
    return max(value, 0.0)


def _merged_centers(model1: FittedModel, model2: FittedModel):
    """Signed coefficient union Z1 u Z2 with duplicates merged additively."""
    merged: dict[tuple, float] = {}
    for pts, coeffs, sign in ((model1.centers, model1.v, 1.0),
                              (model2.centers, model2.v, -1.0)):
        for p, c in zip(pts, coeffs):
            key = tuple(p)
            merged[key] = merged.get(key, 0.0) + sign * c
    Z = np.array(list(merged.keys()))
    w = np.array(list(merged.values()))
    return Z, w


def seminorm_sq_diff(model1: FittedModel, model2: FittedModel) -> float:
    """Squared seminorm of the difference of two models.

    Both models must share the kernel spec; the combined coefficient
    vector over the merged center set inherits the zero-sum constraint
    from the two parts.
    """
    if model1.spec != model2.spec:
        raise ParameterError("models must share the same kernel spec")
    _check_constraint(model1)
    _check_constraint(model2)
    Z, w = _merged_centers(model1, model2)
    if not len(Z):
        return 0.0
    G = basis_matrix(model1.spec, Z, Z)
    value = (2.0 * np.pi) ** (model1.spec.d / 2.0) * float(w @ G @ w)
    return max(value, 0.0)
