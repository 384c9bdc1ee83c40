"""Block saddle-point systems for interpolation and smoothing.

Three symmetric systems are assembled here:

    interpolation       [[G_XX, P_X], [P_X^T, 0]] [v; beta] = [y; 0]
    exact smoothing     same with G_XX + (2 pi)^(d/2) N rho I in the corner
    approximate         [[c rho N G_X'X' + B B^T, B P_X, P_X'],
    smoothing            [P_X^T B^T, P_X^T P_X, 0],
                         [P_X'^T, 0, 0]]  with B = G_X'X, c = (2 pi)^(d/2)

The approximate system has N' + 2M rows regardless of N; its
rho-independent blocks are accumulated by streaming over X in chunks so
peak memory stays O(N' * chunk).
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass

import numpy as np
import scipy.linalg

from .errors import ParameterError, SolveError, UnisolvencyError
from .kernels import KernelSpec, kernel_matrix
from .polyspace import PolyFrame, as_points, is_unisolvent, unisolvency_matrix

RESIDUAL_RTOL = 1e-8
CPD_SLACK = -1e-10
DEFAULT_CHUNK = 4096


@dataclass(frozen=True)
class BlockSystem:
    """A square symmetric linear system with named block partition."""

    matrix: np.ndarray
    rhs: np.ndarray
    layout: tuple[int, ...]
    provenance: str

    def split(self, solution: np.ndarray) -> tuple[np.ndarray, ...]:
        """Cut a solution vector along the block layout."""
        return tuple(np.split(solution, np.cumsum(self.layout)[:-1]))


def basis_matrix(spec: KernelSpec, Y, Z) -> np.ndarray:
    """Basis function matrix G_{Y,Z} with entries G(y_i - z_j)."""
    return kernel_matrix(spec, Y, Z)


def _require_unisolvent(frame: PolyFrame, X, what: str):
    if not is_unisolvent(frame, X):
        raise UnisolvencyError(f"{what} is not {frame.theta}-unisolvent")


def interp_system(spec: KernelSpec, frame: PolyFrame, X, y) -> BlockSystem:
    """Saddle-point system of the minimal-seminorm interpolant."""
    X = as_points(X, frame.d)
    y = np.asarray(y, dtype=float)
    _require_unisolvent(frame, X, "X")
    N, M = len(X), frame.M
    if y.shape != (N,):
        raise ParameterError(f"y must have length {N}, got {y.shape}")
    P = unisolvency_matrix(frame, X)
    A = np.zeros((N + M, N + M))
    A[:N, :N] = basis_matrix(spec, X, X)
    A[:N, N:] = P
    A[N:, :N] = P.T
    rhs = np.concatenate([y, np.zeros(M)])
    return BlockSystem(matrix=A, rhs=rhs, layout=(N, M), provenance="interp")


def exact_system(spec: KernelSpec, frame: PolyFrame, X, y, rho: float) -> BlockSystem:
    """Exact-smoother system: interpolation plus the diagonal rho shift."""
    if rho < 0:
        raise ParameterError(f"rho must be >= 0, got {rho}")
    base = interp_system(spec, frame, X, y)
    N = base.layout[0]
    A = base.matrix.copy()
    A[:N, :N] += (2.0 * np.pi) ** (spec.d / 2.0) * N * rho * np.eye(N)
    return BlockSystem(matrix=A, rhs=base.rhs, layout=base.layout, provenance="exact")


@dataclass(frozen=True)
class ApproxParts:
    """rho-independent blocks of the approximate-smoother system.

    Assembled once per (X, y, X') triple; `system(rho)` then costs only
    the diagonal-block update, which is what makes rho searches cheap.
    """

    spec: KernelSpec
    G_pp: np.ndarray  # G_{X',X'}, (N', N')
    BBt: np.ndarray  # G_{X',X} G_{X,X'}, (N', N')
    BP: np.ndarray  # G_{X',X} P_X, (N', M)
    PtP: np.ndarray  # P_X^T P_X, (M, M)
    P_p: np.ndarray  # P_{X'}, (N', M)
    By: np.ndarray  # G_{X',X} y, (N',)
    Pty: np.ndarray  # P_X^T y, (M,)
    N: int

    def system(self, rho: float) -> BlockSystem:
        if rho <= 0:
            raise ParameterError(f"rho must be > 0, got {rho}")
        Np, M = self.G_pp.shape[0], self.PtP.shape[0]
        scale = (2.0 * np.pi) ** (self.spec.d / 2.0) * self.N * rho
        n = Np + 2 * M
        A = np.zeros((n, n))
        A[:Np, :Np] = scale * self.G_pp + self.BBt
        A[:Np, Np : Np + M] = self.BP
        A[Np : Np + M, :Np] = self.BP.T
        A[Np : Np + M, Np : Np + M] = self.PtP
        A[:Np, Np + M :] = self.P_p
        A[Np + M :, :Np] = self.P_p.T
        rhs = np.concatenate([self.By, self.Pty, np.zeros(M)])
        return BlockSystem(matrix=A, rhs=rhs, layout=(Np, M, M), provenance="approx")


def approx_parts(
    spec: KernelSpec, frame: PolyFrame, X, y, Xp, chunk: int = DEFAULT_CHUNK
) -> ApproxParts:
    """Stream over X in chunks to accumulate the approximate-system blocks."""
    X = as_points(X, frame.d)
    Xp = as_points(Xp, frame.d)
    y = np.asarray(y, dtype=float)
    _require_unisolvent(frame, X, "X")
    _require_unisolvent(frame, Xp, "X'")
    N, Np, M = len(X), len(Xp), frame.M
    if y.shape != (N,):
        raise ParameterError(f"y must have length {N}, got {y.shape}")
    BBt = np.zeros((Np, Np))
    BP = np.zeros((Np, M))
    PtP = np.zeros((M, M))
    By = np.zeros(Np)
    Pty = np.zeros(M)
    for lo in range(0, N, chunk):
        hi = min(lo + chunk, N)
        B_c = basis_matrix(spec, Xp, X[lo:hi])  # (N', c)
        P_c = unisolvency_matrix(frame, X[lo:hi])  # (c, M)
        BBt += B_c @ B_c.T
        BP += B_c @ P_c
        PtP += P_c.T @ P_c
        By += B_c @ y[lo:hi]
        Pty += P_c.T @ y[lo:hi]
    return ApproxParts(
        spec=spec,
        G_pp=basis_matrix(spec, Xp, Xp),
        BBt=BBt,
        BP=BP,
        PtP=PtP,
        P_p=unisolvency_matrix(frame, Xp),
        By=By,
        Pty=Pty,
        N=N,
    )


def approx_system(
    spec: KernelSpec,
    frame: PolyFrame,
    X,
    y,
    Xp,
    rho: float,
    chunk: int = DEFAULT_CHUNK,
) -> BlockSystem:
    """Approximate-smoother system over centers X'; size N' + 2M."""
    return approx_parts(spec, frame, X, y, Xp, chunk=chunk).system(rho)


def solve_block(sys: BlockSystem) -> np.ndarray:
    """Dense LU solve with iterative refinement and a mandatory residual check."""
    try:
        with warnings.catch_warnings():
            # singularity is reported through SolveError, not a warning
            warnings.simplefilter("ignore", scipy.linalg.LinAlgWarning)
            lu = scipy.linalg.lu_factor(sys.matrix)
            sol = scipy.linalg.lu_solve(lu, sys.rhs)
    except (scipy.linalg.LinAlgError, ValueError) as exc:
        raise SolveError(f"{sys.provenance} system solve failed: {exc}") from exc
    if not np.all(np.isfinite(sol)):
        raise SolveError(f"{sys.provenance} system is singular to working precision")
    rhs_norm = np.linalg.norm(sys.rhs)
    # Iterative refinement with the residual accumulated in extended
    # precision.  The refined residual is not monotone on ill-conditioned
    # instances, so run a fixed number of sweeps and keep the best iterate.
    A_ext = sys.matrix.astype(np.longdouble)
    rhs_ext = sys.rhs.astype(np.longdouble)

    def _residual(x):
        return float(np.linalg.norm((A_ext @ x - rhs_ext).astype(float)))

    residual = _residual(sol)
    best_sol, best_residual = sol, residual
    for _ in range(8):
        if best_residual <= 0.05 * RESIDUAL_RTOL * rhs_norm:
            break
        correction = scipy.linalg.lu_solve(lu, (rhs_ext - A_ext @ sol).astype(float))
        if not np.all(np.isfinite(correction)):
            break
        sol = sol + correction
        residual = _residual(sol)
        if residual < best_residual:
            best_sol, best_residual = sol, residual
    sol, residual = best_sol, best_residual
    if residual > RESIDUAL_RTOL * max(rhs_norm, 1e-300):
        raise SolveError(
            f"{sys.provenance} system residual {residual:.3e} exceeds "
            f"{RESIDUAL_RTOL:.0e} * |rhs| = {RESIDUAL_RTOL * rhs_norm:.3e}",
            residual=residual,
        )
    return sol


def cpd_check(spec: KernelSpec, frame: PolyFrame, X, trials: int, seed=0) -> bool:
    """Sample null(P_X^T) vectors and test v^T G_XX v > 0 (up to slack)."""
    X = as_points(X, frame.d)
    _require_unisolvent(frame, X, "X")
    if trials < 1:
        raise ParameterError("trials must be >= 1")
    P = unisolvency_matrix(frame, X)
    Q, _ = np.linalg.qr(P)
    G = basis_matrix(spec, X, X)
    rng = np.random.default_rng(seed)
    for _ in range(trials):
        v = rng.standard_normal(len(X))
        v -= Q @ (Q.T @ v)
        norm2 = v @ v
        if norm2 < 1e-20:  # degenerate draw; P_X spans almost everything
            continue
        if v @ G @ v <= CPD_SLACK * norm2:
            return False
    return True
