"""Least-squares and ridge solvers, the objective, and relative error."""

from __future__ import annotations

import enum
from dataclasses import dataclass

import numpy as np
import scipy.linalg

from .core import Dataset, numerical_rank
from .errors import RankDeficient, ShapeError


class Source(str, enum.Enum):
    EXACT = "exact"
    ADDITIVE_NOISE = "additive_noise"
    RANDOM_PROJECTION = "random_projection"
    RIDGE = "ridge"


@dataclass(frozen=True, eq=False)
class ModelEstimate:
    theta: np.ndarray
    source: Source = Source.EXACT


@dataclass(frozen=True)
class RidgeProblem:
    lam: float

    def __post_init__(self):
        if not self.lam >= 0:
            raise ValueError(f"lambda must be nonnegative, got {self.lam!r}")


def _check_xy(X, y):
    X = np.asarray(X, dtype=np.float64)
    y = np.asarray(y, dtype=np.float64)
    if X.ndim != 2 or y.ndim != 1 or X.shape[0] != y.shape[0]:
        raise ShapeError(f"incompatible shapes X{X.shape}, y{y.shape}")
    return X, y


def least_squares(X, y, source: Source = Source.EXACT) -> ModelEstimate:
    """argmin ||X theta - y||^2 by Householder QR; X must have full column rank."""
    X, y = _check_xy(X, y)
    n, d = X.shape
    if n < d:
        raise RankDeficient(f"underdetermined system: {n} rows < {d} columns")
    Q, R = np.linalg.qr(X, mode="reduced")
    if numerical_rank(np.linalg.svd(R, compute_uv=False), X.shape) < d:
        raise RankDeficient("X is numerically rank deficient")
    theta = scipy.linalg.solve_triangular(R, Q.T @ y)
    return ModelEstimate(theta, Source(source))


def ridge_closed_form(X, y, rp: RidgeProblem | float) -> ModelEstimate:
    """``V (S^2 + lam I)^-1 S U^T y`` from the thin SVD ``X = U S V^T``."""
    X, y = _check_xy(X, y)
    lam = rp.lam if isinstance(rp, RidgeProblem) else RidgeProblem(float(rp)).lam
    U, s, Vt = np.linalg.svd(X, full_matrices=False)
    if lam == 0 and (X.shape[0] < X.shape[1] or numerical_rank(s, X.shape) < X.shape[1]):
        raise RankDeficient("lambda = 0 requires X to have full column rank")
    theta = Vt.T @ (s / (s**2 + lam) * (U.T @ y))
    return ModelEstimate(theta, Source.RIDGE)


def objective(X, y, theta) -> float:
    X, y = _check_xy(X, y)
    theta = np.asarray(getattr(theta, "theta", theta), dtype=np.float64)
    if theta.ndim != 1 or theta.shape[0] != X.shape[1]:
        raise ShapeError(f"theta has shape {theta.shape}, expected ({X.shape[1]},)")
    res = X @ theta - y
    return float(res @ res)


def relative_error(ds: Dataset, theta_hat) -> float:
    """``g(theta_hat) / g(theta*)`` on the original problem ``(ds.X, ds.y)``.

    Raises ZeroResidual when the original problem is consistent.
    """
    g_star = ds.spectral.residual_norm**2
    return objective(ds.X, ds.y, theta_hat) / g_star
