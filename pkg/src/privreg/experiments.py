"""Seeded privacy-utility sweeps.

Seed derivation: trial ``i`` of any sweep uses ``s_i = base_seed + i``. The
synthetic dataset of that trial is drawn from ``s_i`` directly; mechanism
randomness and train/test shuffles come from independent child streams of
``s_i`` (see :func:`derive_seed`). All schemes of one trial share the same
dataset, so scheme comparisons use common random numbers.
"""

from __future__ import annotations

import enum
import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Callable, Iterable, Optional, Sequence, TypeVar

import numpy as np

from .core import Dataset, validate_dataset
from .errors import DegenerateSplit, LabelError, ShapeError
from .mechanisms import MechanismConfig, Scheme, apply_mechanism
from .solvers import Source, least_squares, relative_error

T = TypeVar("T")

MECHANISM_STREAM = 1
SPLIT_STREAM = 2
SAMPLE_STREAM = 3


class Schedule(str, enum.Enum):
    LOGARITHMIC = "log"
    LINEAR = "linear"
    FULL = "full"


@dataclass(frozen=True)
class ScheduleKind:
    kind: Schedule
    base: int = 1000

    def __post_init__(self):
        object.__setattr__(self, "kind", Schedule(self.kind))
        if int(self.base) < 1:
            raise ValueError(f"base must be >= 1, got {self.base}")

    @property
    def label(self) -> str:
        return self.kind.value


@dataclass(frozen=True)
class TradeoffRecord:
    scheme: str
    schedule: str
    epsilon: float
    n: int
    d: int
    n_prime: Optional[int]
    eta_mean: float
    eta_std: float
    trials: int
    base_seed: int


@dataclass(frozen=True)
class ClassificationRecord:
    scheme: str
    schedule: str
    epsilon: float
    n: int
    n_prime: Optional[int]
    test_error: float
    test_error_std: float
    split_fraction: float
    trials: int
    base_seed: int


def derive_seed(seed: int, stream: int) -> int:
    """Independent 64-bit child seed of ``seed`` for the given stream tag."""
    return int(np.random.SeedSequence([int(seed), int(stream)]).generate_state(1, np.uint64)[0])


def _round_half_up(x: float) -> int:
    return int(math.floor(x + 0.5))


def projection_schedule(s: ScheduleKind, k: int) -> int:
    if k < 1:
        raise ValueError(f"k must be >= 1, got {k}")
    if s.kind is Schedule.LOGARITHMIC:
        return _round_half_up(s.base * (math.log(k) + 1.0))
    if s.kind is Schedule.LINEAR:
        return _round_half_up(s.base * (k + 1) / 2.0)
    return s.base * k


def generate_random_dataset(n: int, d: int, seed: int) -> Dataset:
    """Uniform [-1, 1] features with a planted linear response.

    ``y = X theta0 + 0.1 sqrt(d) z`` with theta0 uniform on [-1, 1]^d and z
    standard normal, which keeps r(y) of order one.
    """
    if n <= d:
        raise ShapeError(f"need n > d, got n={n}, d={d}")
    rng = np.random.default_rng(seed)
    X = rng.uniform(-1.0, 1.0, size=(n, d))
    theta0 = rng.uniform(-1.0, 1.0, size=d)
    noise_scale = 0.1 * math.sqrt(d)
    y = X @ theta0 + noise_scale * rng.standard_normal(n)
    return validate_dataset(X, y, meta={"seed": int(seed), "theta0": theta0, "noise_scale": noise_scale})


def generate_blobs(n: int, d: int, seed: int, separation: float = 0.3, spread: float = 0.5,
                   correlation: float = 0.9) -> Dataset:
    """Two equiprobable Gaussian classes with labels in {-1, +1}.

    Class means are ``+-separation`` along a fixed direction; both classes
    share an equicorrelated covariance (``spread**2`` variance, pairwise
    ``correlation``), so the best linear separator is far from the
    mean-difference direction. Features are clipped to [-1, 1].
    """
    if n <= d:
        raise ShapeError(f"need n > d, got n={n}, d={d}")
    rng = np.random.default_rng(seed)
    labels = np.where(rng.random(n) < 0.5, -1.0, 1.0)
    direction = np.zeros(d)
    direction[: d // 2] = 1.0
    direction /= np.linalg.norm(direction)
    shared = rng.standard_normal(n)[:, None]
    own = rng.standard_normal((n, d))
    noise = spread * (math.sqrt(correlation) * shared + math.sqrt(1.0 - correlation) * own)
    X = np.clip(labels[:, None] * separation * direction + noise, -1.0, 1.0)
    return validate_dataset(X, labels, meta={"seed": int(seed), "separation": separation,
                                             "spread": spread, "correlation": correlation})


def default_threads() -> int:
    env = os.environ.get("PRIVREG_THREADS")
    if env:
        try:
            value = int(env)
        except ValueError:
            raise ValueError(f"PRIVREG_THREADS must be a positive integer, got {env!r}") from None
        if value < 1:
            raise ValueError(f"PRIVREG_THREADS must be a positive integer, got {env!r}")
        return value
    return os.cpu_count() or 1


def _map_trials(fn: Callable[[int], T], trials: int, threads: Optional[int]) -> list[T]:
    # results are returned in trial order regardless of completion order
    threads = default_threads() if threads is None else threads
    if threads <= 1 or trials <= 1:
        return [fn(i) for i in range(trials)]
    with ThreadPoolExecutor(max_workers=min(threads, trials)) as pool:
        return list(pool.map(fn, range(trials)))


def _mean_std(values: Sequence[float]) -> tuple[float, float]:
    a = np.asarray(values, dtype=np.float64)
    return float(a.mean()), float(a.std())


def _variants(schedules: Iterable[ScheduleKind], include_additive: bool):
    out: list[Optional[ScheduleKind]] = [None] if include_additive else []
    out.extend(schedules)
    return out


def _n_prime_for(variant: Optional[ScheduleKind], k: int, n: int) -> Optional[int]:
    if variant is None:
        return None
    # the full schedule may reach n; projections must stay strictly smaller
    return min(projection_schedule(variant, k), n - 1)


def _config(variant, epsilon, k, n, seed) -> MechanismConfig:
    if variant is None:
        return MechanismConfig(Scheme.ADDITIVE_NOISE, epsilon, None, seed)
    return MechanismConfig(Scheme.RANDOM_PROJECTION, epsilon, _n_prime_for(variant, k, n), seed)


def _labels(variant: Optional[ScheduleKind]) -> tuple[str, str]:
    if variant is None:
        return Scheme.ADDITIVE_NOISE.value, "none"
    return Scheme.RANDOM_PROJECTION.value, variant.label


def run_trial(ds: Dataset, cfg: MechanismConfig) -> float:
    """Release ``ds`` through the mechanism, fit on the release, score on ``ds``."""
    out = apply_mechanism(ds, cfg)
    est = least_squares(out.X_out, out.y_out, Source(cfg.scheme.value))
    return relative_error(ds, est)


def sweep_n(d: int, epsilon: float, k_range: Iterable[int], schedules: Sequence[ScheduleKind],
            trials: int, base_seed: int, *, n_per_k: int = 1000, include_additive: bool = True,
            threads: Optional[int] = None) -> list[TradeoffRecord]:
    """Relative error against dataset size ``n = n_per_k * k``.

    Emits, per k, one additive-noise record (if enabled) followed by one
    record per schedule, each aggregated over ``trials`` fresh datasets.
    """
    if trials < 1:
        raise ValueError("trials must be >= 1")
    variants = _variants(schedules, include_additive)
    records = []
    for k in k_range:
        n = n_per_k * k

        def one(i, k=k, n=n):
            s_i = base_seed + i
            ds = generate_random_dataset(n, d, s_i)
            mseed = derive_seed(s_i, MECHANISM_STREAM)
            return [run_trial(ds, _config(v, epsilon, k, n, mseed)) for v in variants]

        etas = np.asarray(_map_trials(one, trials, threads))
        for j, v in enumerate(variants):
            mean, std = _mean_std(etas[:, j])
            scheme, sched = _labels(v)
            records.append(TradeoffRecord(scheme, sched, float(epsilon), n, d, _n_prime_for(v, k, n),
                                          mean, std, trials, base_seed))
    return records


def sweep_epsilon(n: int, d: int, epsilon_grid: Iterable[float], schedules: Sequence[ScheduleKind],
                  trials: int, base_seed: int, *, k: Optional[int] = None, n_per_k: int = 1000,
                  include_additive: bool = True, threads: Optional[int] = None) -> list[TradeoffRecord]:
    """Relative error against the privacy budget at fixed ``n``.

    Projection dimensions come from the schedules at ``k`` (default
    ``max(1, round(n / n_per_k))``).
    """
    if trials < 1:
        raise ValueError("trials must be >= 1")
    if k is None:
        k = max(1, _round_half_up(n / n_per_k))
    grid = [float(e) for e in epsilon_grid]
    variants = _variants(schedules, include_additive)

    def one(i):
        s_i = base_seed + i
        ds = generate_random_dataset(n, d, s_i)
        mseed = derive_seed(s_i, MECHANISM_STREAM)
        return [[run_trial(ds, _config(v, eps, k, n, mseed)) for v in variants] for eps in grid]

    etas = np.asarray(_map_trials(one, trials, threads))
    records = []
    for e, eps in enumerate(grid):
        for j, v in enumerate(variants):
            mean, std = _mean_std(etas[:, e, j])
            scheme, sched = _labels(v)
            records.append(TradeoffRecord(scheme, sched, eps, n, d, _n_prime_for(v, k, n),
                                          mean, std, trials, base_seed))
    return records


def split_indices(n: int, split_fraction: float, seed: int) -> tuple[np.ndarray, np.ndarray]:
    """Seeded uniform shuffle; the test side gets ``round((1 - split) * n)`` rows."""
    if not 0 < split_fraction < 1:
        raise ValueError(f"split_fraction must be in (0, 1), got {split_fraction}")
    n_test = _round_half_up((1.0 - split_fraction) * n)
    perm = np.random.default_rng(seed).permutation(n)
    return np.sort(perm[n_test:]), np.sort(perm[:n_test])


def sign_error(X: np.ndarray, labels: np.ndarray, theta: np.ndarray) -> float:
    """Fraction of rows with ``sign(x . theta) != label``; a zero score is an error."""
    return float(np.mean(labels * (X @ theta) <= 0))


def classification_experiment(ds: Dataset, epsilon: float, schedules: Sequence[ScheduleKind],
                              split_fraction: float = 0.8, trials: int = 10, base_seed: int = 0, *,
                              k: Optional[int] = None, n_per_k: int = 1000, include_additive: bool = True,
                              threads: Optional[int] = None) -> list[ClassificationRecord]:
    """Test error of a least-squares sign classifier trained on a private release.

    Each trial reshuffles the train/test split, releases the training rows
    through every mechanism and scores the fitted models on the held-out rows.
    """
    if not np.all(np.isin(ds.y, (-1.0, 1.0))):
        raise LabelError("classification labels must be -1 or +1")
    if trials < 1:
        raise ValueError("trials must be >= 1")
    if k is None:
        k = max(1, _round_half_up(ds.n / n_per_k))
    variants = _variants(schedules, include_additive)
    if not 0 < split_fraction < 1:
        raise ValueError(f"split_fraction must be in (0, 1), got {split_fraction}")
    n_test = _round_half_up((1.0 - split_fraction) * ds.n)
    n_train = ds.n - n_test
    if min(n_train, n_test) < ds.d:
        raise DegenerateSplit(f"split leaves {n_train} train / {n_test} test rows for d={ds.d}")

    def one(i):
        s_i = base_seed + i
        tr, te = split_indices(ds.n, split_fraction, derive_seed(s_i, SPLIT_STREAM))
        train = validate_dataset(ds.X[tr], ds.y[tr])
        mseed = derive_seed(s_i, MECHANISM_STREAM)
        errs = []
        for v in variants:
            out = apply_mechanism(train, _config(v, epsilon, k, n_train, mseed))
            theta = least_squares(out.X_out, out.y_out).theta
            errs.append(sign_error(ds.X[te], ds.y[te], theta))
        return errs

    errs = np.asarray(_map_trials(one, trials, threads))
    records = []
    for j, v in enumerate(variants):
        mean, std = _mean_std(errs[:, j])
        scheme, sched = _labels(v)
        records.append(ClassificationRecord(scheme, sched, float(epsilon), ds.n, _n_prime_for(v, k, n_train),
                                            mean, std, split_fraction, trials, base_seed))
    return records
