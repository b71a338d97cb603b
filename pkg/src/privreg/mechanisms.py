"""Noise calibration for an epsilon-MI-DP budget and the two release mechanisms.

Budgets are in bits, so both calibrations are built on ``2**(2*eps) - 1``:
the released entry sees a Gaussian channel whose capacity
``0.5 * log2(1 + snr)`` must not exceed ``eps``.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from typing import Optional

import numpy as np

from .core import Dataset
from .errors import InvalidBudget, ProjectionTooLarge


class Scheme(str, enum.Enum):
    ADDITIVE_NOISE = "additive_noise"
    RANDOM_PROJECTION = "random_projection"


@dataclass(frozen=True)
class PrivacyBudget:
    epsilon: float

    def __post_init__(self):
        eps = self.epsilon
        if not (isinstance(eps, (int, float, np.floating, np.integer)) and math.isfinite(eps) and eps > 0):
            raise InvalidBudget(f"epsilon must be positive and finite, got {eps!r}")
        object.__setattr__(self, "epsilon", float(eps))


@dataclass(frozen=True)
class MechanismConfig:
    scheme: Scheme
    epsilon: PrivacyBudget
    n_prime: Optional[int] = None
    seed: int = 0

    def __post_init__(self):
        object.__setattr__(self, "scheme", Scheme(self.scheme))
        if not isinstance(self.epsilon, PrivacyBudget):
            object.__setattr__(self, "epsilon", PrivacyBudget(self.epsilon))
        if self.scheme is Scheme.RANDOM_PROJECTION:
            if self.n_prime is None or int(self.n_prime) < 1:
                raise ValueError("random projection requires a positive n_prime")
            object.__setattr__(self, "n_prime", int(self.n_prime))
        elif self.n_prime is not None:
            raise ValueError("n_prime is only meaningful for random projection")
        if not 0 <= int(self.seed) < 2**64:
            raise ValueError("seed must be a 64-bit unsigned integer")


@dataclass(frozen=True, eq=False)
class MechanismOutput:
    X_out: np.ndarray
    y_out: np.ndarray
    # Internal: the projection mechanism never publishes its noise level.
    sigma_sq: float
    scheme: Scheme
    epsilon: PrivacyBudget
    seed: int
    n_prime: Optional[int] = None


@dataclass(frozen=True)
class DPGuarantee:
    epsilon_dp: float
    delta_dp: float


def _eps(epsilon) -> float:
    if isinstance(epsilon, PrivacyBudget):
        return epsilon.epsilon
    return PrivacyBudget(epsilon).epsilon


def _snr_budget(eps: float) -> float:
    # 2**(2 eps) - 1 without cancellation for small eps
    return math.expm1(2.0 * eps * math.log(2.0))


def calibrate_additive_noise(epsilon) -> float:
    """Noise variance ``1 / (2**(2 eps) - 1)`` for per-entry additive noise."""
    return 1.0 / _snr_budget(_eps(epsilon))


def calibrate_projection_noise(epsilon, n_prime: int, f: float) -> float:
    """Extra noise variance ``max(0, n' / (2**(2 eps) - 1) - f**2)`` after projecting.

    ``f`` is the column-leverage floor of the original data: the other users
    in a column already act as Gaussian interference of variance ``f**2``.
    """
    if f < 0:
        raise ValueError(f"f must be nonnegative, got {f}")
    return _projection_noise(epsilon, n_prime, float(f) ** 2)


def _projection_noise(epsilon, n_prime: int, f_sq: float) -> float:
    if n_prime < 1:
        raise ValueError(f"n_prime must be >= 1, got {n_prime}")
    return max(0.0, n_prime / _snr_budget(_eps(epsilon)) - f_sq)


def apply_additive_noise(ds: Dataset, epsilon, seed: int) -> MechanismOutput:
    budget = epsilon if isinstance(epsilon, PrivacyBudget) else PrivacyBudget(epsilon)
    sigma_sq = calibrate_additive_noise(budget)
    rng = np.random.default_rng(seed)
    N = rng.standard_normal(ds.X.shape)
    return MechanismOutput(
        X_out=ds.X + math.sqrt(sigma_sq) * N,
        y_out=ds.y.copy(),
        sigma_sq=sigma_sq,
        scheme=Scheme.ADDITIVE_NOISE,
        epsilon=budget,
        seed=seed,
    )


def apply_random_projection(ds: Dataset, epsilon, n_prime: int, seed: int) -> MechanismOutput:
    """Release ``(S X + sigma N, S y)`` with S (n' x n) and N (n' x d) standard Gaussian.

    S is drawn before N from the same seeded stream, both in row-major order.
    """
    budget = epsilon if isinstance(epsilon, PrivacyBudget) else PrivacyBudget(epsilon)
    n_prime = int(n_prime)
    if n_prime >= ds.n:
        raise ProjectionTooLarge(f"n'={n_prime} must be smaller than n={ds.n}")
    sigma_sq = _projection_noise(budget, n_prime, ds.leverage_floor_sq)
    rng = np.random.default_rng(seed)
    S = rng.standard_normal((n_prime, ds.n))
    N = rng.standard_normal((n_prime, ds.d))
    return MechanismOutput(
        X_out=S @ ds.X + math.sqrt(sigma_sq) * N,
        y_out=S @ ds.y,
        sigma_sq=sigma_sq,
        scheme=Scheme.RANDOM_PROJECTION,
        epsilon=budget,
        seed=seed,
        n_prime=n_prime,
    )


def apply_mechanism(ds: Dataset, cfg: MechanismConfig) -> MechanismOutput:
    if cfg.scheme is Scheme.ADDITIVE_NOISE:
        return apply_additive_noise(ds, cfg.epsilon, cfg.seed)
    return apply_random_projection(ds, cfg.epsilon, cfg.n_prime, cfg.seed)


def mi_dp_to_dp(epsilon: float) -> DPGuarantee:
    """(0, delta)-DP implied by epsilon-MI-DP, ``delta = sqrt(2 eps / log2(e))`` capped at 1."""
    eps = float(epsilon.epsilon if isinstance(epsilon, PrivacyBudget) else epsilon)
    if not eps >= 0:
        raise InvalidBudget(f"epsilon must be nonnegative, got {eps!r}")
    return DPGuarantee(epsilon_dp=0.0, delta_dp=min(1.0, math.sqrt(2.0 * eps / math.log2(math.e))))
