"""Dataset container and the spectral functionals of (X, y).

Everything the mechanisms and bound evaluators need from the data is derived
from a single thin SVD of ``X``, computed lazily and cached on the dataset.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property
from types import MappingProxyType
from typing import Any, Mapping

import numpy as np

from .errors import EntryOutOfRange, RankDeficient, ShapeError, ZeroResidual

# Relative cutoff for "the residual is zero": ||res|| <= ZERO_RESIDUAL_RTOL * ||y||.
ZERO_RESIDUAL_RTOL = 1e-12


def _frozen(a: np.ndarray) -> np.ndarray:
    a = np.array(a, dtype=np.float64, copy=True)
    a.setflags(write=False)
    return a


@dataclass(frozen=True)
class SpectralSummary:
    singular_values: np.ndarray
    sigma_max: float
    sigma_min: float
    kappa: float
    r: float
    f: float
    f_per_column: np.ndarray
    f_sq: float
    # ||X theta*|| and ||X theta* - y||; r is their ratio.
    fit_norm: float
    residual_norm: float


@dataclass(frozen=True, eq=False)
class Dataset:
    """Regression data: ``X`` is n x d with entries in [-1, 1], ``y`` has length n.

    Instances are only meant to be built through :func:`validate_dataset`,
    which enforces n > d, the entry bound, and full column rank.
    """

    X: np.ndarray
    y: np.ndarray
    meta: Mapping[str, Any] = field(default_factory=dict)

    @property
    def n(self) -> int:
        return self.X.shape[0]

    @property
    def d(self) -> int:
        return self.X.shape[1]

    @cached_property
    def svd(self) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
        U, s, Vt = np.linalg.svd(self.X, full_matrices=False)
        return U, s, Vt

    @cached_property
    def leverage_floor_sq(self) -> float:
        """``f(X)**2`` computed without a square-root round trip."""
        sq = self.X**2
        return float(np.maximum(sq.sum(axis=0) - sq.max(axis=0), 0.0).min())

    @cached_property
    def leverage_floor(self) -> tuple[float, np.ndarray]:
        sq = self.X**2
        per_col = np.sqrt(np.maximum(sq.sum(axis=0) - sq.max(axis=0), 0.0))
        per_col.setflags(write=False)
        return float(per_col.min()), per_col

    @cached_property
    def theta_star(self) -> np.ndarray:
        U, s, Vt = self.svd
        theta = Vt.T @ ((U.T @ self.y) / s)
        theta.setflags(write=False)
        return theta

    @cached_property
    def spectral(self) -> SpectralSummary:
        U, s, _ = self.svd
        fitted = U @ (U.T @ self.y)
        fit_norm = float(np.linalg.norm(fitted))
        residual_norm = float(np.linalg.norm(fitted - self.y))
        if residual_norm <= ZERO_RESIDUAL_RTOL * float(np.linalg.norm(self.y)):
            raise ZeroResidual("y lies in the column space of X; r(y) is undefined")
        f, f_per_column = self.leverage_floor
        sv = _frozen(s)
        return SpectralSummary(
            singular_values=sv,
            sigma_max=float(sv[0]),
            sigma_min=float(sv[-1]),
            kappa=float(sv[0] / sv[-1]),
            r=fit_norm / residual_norm,
            f=f,
            f_per_column=f_per_column,
            f_sq=self.leverage_floor_sq,
            fit_norm=fit_norm,
            residual_norm=residual_norm,
        )


def numerical_rank(s: np.ndarray, shape: tuple[int, int]) -> int:
    """Count singular values above ``max(n, d) * eps * sigma_max``."""
    if s.size == 0 or s[0] == 0:
        return 0
    tol = max(shape) * np.finfo(np.float64).eps * s[0]
    return int(np.count_nonzero(s > tol))


def validate_dataset(X, y, meta: Mapping[str, Any] | None = None) -> Dataset:
    X = np.asarray(X, dtype=np.float64)
    y = np.asarray(y, dtype=np.float64)
    if X.ndim == 1:
        X = X[:, None]
    if X.ndim != 2 or X.size == 0:
        raise ShapeError(f"X must be a nonempty 2-D matrix, got shape {X.shape}")
    if y.ndim != 1 or y.shape[0] != X.shape[0]:
        raise ShapeError(f"y must be a vector of length {X.shape[0]}, got shape {y.shape}")
    n, d = X.shape
    if n <= d:
        raise ShapeError(f"need more rows than columns, got n={n}, d={d}")
    if not (np.all(np.isfinite(X)) and np.all(np.isfinite(y))):
        raise ShapeError("X and y must be finite")
    bad = np.argwhere(np.abs(X) > 1.0)
    if bad.size:
        i, j = bad[0]
        raise EntryOutOfRange(f"|X[{i},{j}]| = {abs(X[i, j])!r} exceeds 1")

    ds = Dataset(_frozen(X), _frozen(y), MappingProxyType(dict(meta or {})))
    rank = numerical_rank(ds.svd[1], X.shape)
    if rank < d:
        raise RankDeficient(f"numerical rank {rank} < d={d}")
    return ds


def spectral_summary(ds: Dataset) -> SpectralSummary:
    """kappa, r(y), f(X) and the singular values of ``ds``; cached per dataset."""
    return ds.spectral


def column_leverage_floor(ds: Dataset) -> tuple[float, np.ndarray]:
    """Return ``(f, f_per_column)``.

    ``f_per_column[i]**2`` is the energy of column i minus its largest squared
    entry, i.e. the interference the other users contribute to any single
    entry of that column after projection. ``f`` is the minimum over columns.
    """
    return ds.leverage_floor
