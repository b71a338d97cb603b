"""Closed-form utility and leakage bounds.

Utility side: the least-squares perturbation bound, the Gaussian top singular
value tail, their composition for additive noise, the ridge residual/norm
bounds, and the sketched-ridge bound for random projection.

Leakage side: coherent and non-coherent SIMO capacity bounds for the channel a
single database entry sees after projection.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Mapping

import numpy as np

from .core import SpectralSummary
from .errors import ConditionViolated, DegenerateChannel
from .mechanisms import _projection_noise, calibrate_additive_noise

# Unknown absolute constants of the sketching guarantee; defaults only.
SKETCH_CONSTANTS = {"c0": 1.0, "c1": 1.0, "c2": 1.0}


@dataclass(frozen=True)
class BoundReport:
    eta_bound: float
    probability_lower_bound: float
    delta_free: float
    intermediates: Mapping[str, float] = field(default_factory=dict)
    unresolved: tuple[str, ...] = ()


@dataclass(frozen=True)
class ChannelSpec:
    n_prime: int
    sigma_rp_sq: float
    f_sq: float

    def __post_init__(self):
        if self.n_prime < 1 or self.sigma_rp_sq < 0 or self.f_sq < 0:
            raise ValueError(f"invalid channel {self}")

    @property
    def sigma_nu_sq(self) -> float:
        return self.sigma_rp_sq + self.f_sq


@dataclass(frozen=True)
class TailQuery:
    n: int
    d: int
    t: float

    def __post_init__(self):
        if self.t < 0:
            raise ValueError(f"t must be nonnegative, got {self.t}")

    @property
    def threshold(self) -> float:
        return math.sqrt(self.n) + math.sqrt(self.d) + self.t


def wedin_perturbation_bound(kappa: float, Delta: float, r: float) -> float:
    """Bound on ||X theta_hat - y|| / ||X theta* - y|| (not squared).

    Requires ``kappa * Delta < 1``; Delta is the relative spectral-norm size of
    the perturbation of X.
    """
    kd = kappa * Delta
    if kd >= 1:
        raise ConditionViolated(f"kappa * Delta = {kd:.6g} >= 1")
    return 1.0 + kd / (1.0 - kd) * (kappa + r)


def gaussian_smax_tail(q: TailQuery) -> float:
    """Lower bound on P(sigma_max(N) <= sqrt(n) + sqrt(d) + t), clamped at 0."""
    return max(0.0, 1.0 - 2.0 * math.exp(-(q.t**2) / 2.0))


def additive_noise_delta(ss: SpectralSummary, epsilon, n: int, d: int) -> float:
    """Delta(X, eps) = sigma_AN * (sqrt(n) + sqrt(d)) / sigma_max."""
    sigma = math.sqrt(calibrate_additive_noise(epsilon))
    return sigma * (math.sqrt(n) + math.sqrt(d)) / ss.sigma_max


def auto_delta_free(kappa: float, Delta: float) -> float:
    """Halfway between 0 and the validity boundary ``kappa (Delta + delta) = 1``."""
    delta = (1.0 / kappa - Delta) / 2.0
    if delta <= 0:
        raise ConditionViolated(
            f"kappa * Delta = {kappa * Delta:.6g} >= 1; no admissible free parameter"
        )
    return delta


def additive_noise_bound(ss: SpectralSummary, epsilon, n: int, d: int, delta_free="auto") -> BoundReport:
    sigma_sq = calibrate_additive_noise(epsilon)
    Delta = additive_noise_delta(ss, epsilon, n, d)
    if delta_free == "auto" or delta_free is None:
        delta_free = auto_delta_free(ss.kappa, Delta)
    delta_free = float(delta_free)
    if not delta_free > 0:
        raise ValueError(f"delta_free must be positive, got {delta_free}")
    # sigma_max(N) <= sqrt(n)+sqrt(d)+t with t = sigma_max(X) delta / sigma_AN
    # gives ||sigma_AN N|| / ||X|| <= Delta + delta.
    ratio = wedin_perturbation_bound(ss.kappa, Delta + delta_free, ss.r)
    prob_raw = 1.0 - 2.0 * math.exp(-(ss.sigma_max**2) * delta_free**2 / (2.0 * sigma_sq))
    return BoundReport(
        eta_bound=ratio**2,
        probability_lower_bound=max(0.0, prob_raw),
        delta_free=delta_free,
        intermediates={
            "Delta": Delta,
            "sigma_sq": sigma_sq,
            "kappa": ss.kappa,
            "r": ss.r,
            "sigma_max": ss.sigma_max,
            "t": ss.sigma_max * delta_free / math.sqrt(sigma_sq),
            "probability_raw": prob_raw,
        },
    )


def ridge_relative_bound(sigma_min: float, lam: float, r: float) -> float:
    """Bound on ||X theta_RR - y|| / ||X theta* - y||."""
    if sigma_min <= 0 or lam < 0 or r < 0:
        raise ValueError("need sigma_min > 0, lambda >= 0, r >= 0")
    if math.isinf(lam):
        return 1.0 + r
    return 1.0 + lam / (sigma_min**2 + lam) * r


def ridge_norm_bound(singular_values, lam: float, x_theta_star_norm: float) -> float:
    """Bound on ||theta_RR||: ``max_i s_i / (s_i^2 + lam) * ||X theta*||``."""
    s = np.asarray(singular_values, dtype=np.float64)
    if lam < 0 or np.any(s <= 0):
        raise ValueError("need lambda >= 0 and positive singular values")
    return float(np.max(s / (s**2 + lam))) * float(x_theta_star_norm)


def projection_bound(ss: SpectralSummary, epsilon, n_prime: int, delta_free: float, d: int | None = None,
                     constants: Mapping[str, float] | None = None) -> BoundReport:
    """Relative-error bound ``(1+delta)^2 (1+l1) (1+l2)^2`` for the projection mechanism.

    The probability is ``1 - c1 exp(-c2 n' delta^2)``, valid for
    ``delta >= sqrt(c0 d / n')``. The constants are not known; the defaults
    in SKETCH_CONSTANTS are placeholders and are listed in ``unresolved``.
    """
    consts = dict(SKETCH_CONSTANTS)
    if constants:
        consts.update(constants)
    delta_free = float(delta_free)
    if not delta_free > 0:
        raise ValueError(f"delta_free must be positive, got {delta_free}")
    sigma_sq = _projection_noise(epsilon, n_prime, ss.f_sq)
    s = ss.singular_values
    l1 = sigma_sq * float(np.max(s / (s**2 + sigma_sq))) ** 2 * ss.r**2
    l2 = sigma_sq * ss.r / (ss.sigma_min**2 + sigma_sq)
    eta = (1.0 + delta_free) ** 2 * (1.0 + l1) * (1.0 + l2) ** 2
    prob_raw = 1.0 - consts["c1"] * math.exp(-consts["c2"] * n_prime * delta_free**2)
    inter = {
        "sigma_sq": sigma_sq,
        "f_sq": ss.f_sq,
        "l1": l1,
        "l2": l2,
        "kappa": ss.kappa,
        "r": ss.r,
        "probability_raw": prob_raw,
        **consts,
    }
    if d is not None:
        inter["delta_min"] = math.sqrt(consts["c0"] * d / n_prime)
    return BoundReport(
        eta_bound=eta,
        probability_lower_bound=max(0.0, prob_raw),
        delta_free=delta_free,
        intermediates=inter,
        unresolved=tuple(k for k in ("c0", "c1", "c2") if not constants or k not in constants),
    )


def _capacity_term(snr: float) -> float:
    # 0.5 * log2(1 + snr)
    return 0.5 * math.log1p(snr) / math.log(2.0)


def coherent_simo_capacity(ch: ChannelSpec) -> float:
    """``0.5 * log2(1 + n' / sigma_nu^2)`` bits: the fading vector is known at the receiver."""
    if ch.sigma_nu_sq == 0:
        raise DegenerateChannel("noise variance is zero; capacity is unbounded")
    if math.isinf(ch.sigma_nu_sq):
        return 0.0
    return _capacity_term(ch.n_prime / ch.sigma_nu_sq)


def noncoherent_simo_capacity(ch: ChannelSpec) -> float:
    """``(n'/2) * log2(1 + 1 / sigma_nu^2)`` bits."""
    if ch.sigma_nu_sq == 0:
        raise DegenerateChannel("noise variance is zero; capacity is unbounded")
    if math.isinf(ch.sigma_nu_sq):
        return 0.0
    return ch.n_prime * _capacity_term(1.0 / ch.sigma_nu_sq)
