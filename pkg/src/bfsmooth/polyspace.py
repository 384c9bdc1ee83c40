"""Polynomial spaces of bounded total order and unisolvent point sets.

The space P_theta consists of all d-variate polynomials of total order
< theta (total degree <= theta - 1), spanned here by the monomial basis
x^alpha with |alpha| < theta.  A point set is theta-unisolvent when the
only member of P_theta vanishing on it is zero; a *minimal* unisolvent
set has exactly M = dim P_theta points and carries a cardinal basis
l_j with l_j(a_i) = delta_ij, which in turn defines the Lagrange
projection Pf = sum f(a_i) l_i and its complement Q = I - P.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field

import numpy as np

from .errors import InputError, ParameterError, UnisolvencyError

# Singular values below RANK_RTOL * s_max count as zero when ranking
# Vandermonde-type matrices.
RANK_RTOL = 1e-10


def enumerate_multi_indices(d: int, theta: int) -> list[tuple[int, ...]]:
    """All multi-indexes alpha with |alpha| < theta, graded-lex order.

    Returns binomial(theta-1+d, d) tuples, sorted first by total degree
    and then lexicographically within each degree.
    """
    if d < 1:
        raise ParameterError(f"dimension d must be >= 1, got {d}")
    if theta < 1:
        raise ParameterError(f"order theta must be >= 1, got {theta}")
    indices = []
    for degree in range(theta):
        block = [
            alpha
            for alpha in itertools.product(range(degree + 1), repeat=d)
            if sum(alpha) == degree
        ]
        # graded-lex with x1 ranked highest: within a degree, (1,0) < (0,1)
        block.sort(reverse=True)
        indices.extend(block)
    return indices


@dataclass(frozen=True)
class PolyFrame:
    """Monomial frame for P_theta in R^d.

    `indices` lists all multi-indexes of total degree < theta in
    graded-lexicographic order; M is their count.
    """

    d: int
    theta: int
    indices: tuple[tuple[int, ...], ...] = field(init=False)
    M: int = field(init=False)

    def __post_init__(self):
        idx = tuple(enumerate_multi_indices(self.d, self.theta))
        object.__setattr__(self, "indices", idx)
        object.__setattr__(self, "M", len(idx))

    def monomials(self, points: np.ndarray) -> np.ndarray:
        """Evaluate every basis monomial at each point; shape (npts, M)."""
        pts = as_points(points, self.d)
        cols = [np.prod(pts**np.array(alpha), axis=1) for alpha in self.indices]
        return np.column_stack(cols)


def as_points(points, d: int) -> np.ndarray:
    """Coerce input to a float array of shape (N, d)."""
    pts = np.atleast_1d(np.asarray(points, dtype=float))
    if pts.ndim == 1:
        if d == 1:
            pts = pts[:, None]
        elif pts.shape[0] == d:
            pts = pts[None, :]
        else:
            raise InputError(f"cannot interpret shape {pts.shape} as points in R^{d}")
    if pts.ndim != 2 or pts.shape[1] != d:
        raise InputError(f"expected points of shape (N, {d}), got {pts.shape}")
    if not np.all(np.isfinite(pts)):
        raise InputError("points contain non-finite values")
    return pts


def unisolvency_matrix(frame: PolyFrame, X) -> np.ndarray:
    """The N x M matrix P_X with entries monomial_j(x_i)."""
    return frame.monomials(X)


def _has_duplicates(pts: np.ndarray) -> bool:
    return len(np.unique(pts, axis=0)) != len(pts)


def is_unisolvent(frame: PolyFrame, X) -> bool:
    """True iff P_X has full column rank M under the rank tolerance."""
    pts = as_points(X, frame.d)
    if _has_duplicates(pts):
        raise InputError("duplicate points in X")
    if len(pts) < frame.M:
        return False
    sv = np.linalg.svd(unisolvency_matrix(frame, pts), compute_uv=False)
    return sv[-1] > RANK_RTOL * sv[0]


@dataclass(frozen=True)
class UnisolventFrame:
    """A minimal unisolvent set A plus the cardinal basis over monomials.

    cardinal[j, k] gives l_j(x) = sum_k cardinal[j, k] * x^indices[k],
    so that l_j(a_i) = delta_ij.
    """

    frame: PolyFrame
    points: np.ndarray
    cardinal: np.ndarray

    def cardinal_values(self, x) -> np.ndarray:
        """Evaluate all cardinal polynomials l_j; shape (npts, M)."""
        return self.frame.monomials(x) @ self.cardinal.T


def minimal_unisolvent_subset(frame: PolyFrame, X) -> UnisolventFrame:
    """Greedy extraction of a minimal unisolvent subset of X.

    Scans X in input order, keeping a point iff its monomial row
    increases the rank of the accumulated rows; stops at M points.
    The cardinal matrix is C = (P_A)^-T.
    """
    pts = as_points(X, frame.d)
    if _has_duplicates(pts):
        raise InputError("duplicate points in X")
    rows = unisolvency_matrix(frame, pts)
    kept: list[int] = []
    rank = 0
    for i in range(len(pts)):
        trial = rows[kept + [i]]
        sv = np.linalg.svd(trial, compute_uv=False)
        trial_rank = int(np.sum(sv > RANK_RTOL * sv[0]))
        if trial_rank > rank:
            kept.append(i)
            rank = trial_rank
            if rank == frame.M:
                break
    if rank < frame.M:
        raise UnisolvencyError(
            f"X is not {frame.theta}-unisolvent: rank {rank} < M = {frame.M}"
        )
    A = pts[kept]
    cardinal = np.linalg.inv(rows[kept]).T
    return UnisolventFrame(frame=frame, points=A, cardinal=cardinal)


def lagrange_apply(uf: UnisolventFrame, samples, x, fx=None):
    """Lagrange projection Pf(x) = sum f(a_i) l_i(x) from samples on A.

    When the true value f(x) is supplied, also returns Qf(x) = f(x) - Pf(x).
    """
    samples = np.asarray(samples, dtype=float)
    if samples.shape != (uf.frame.M,):
        raise InputError(
            f"expected {uf.frame.M} samples on the minimal set, got {samples.shape}"
        )
    values = uf.cardinal_values(x) @ samples
    if values.shape == (1,):
        values = values[0]
    if fx is not None:
        return values, fx - values
    return values
