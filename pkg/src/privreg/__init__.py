"""Privacy-preserving linear regression via additive noise and Gaussian random projection."""

__version__ = "0.1.0"

from .core import Dataset, SpectralSummary, column_leverage_floor, spectral_summary, validate_dataset
from .errors import (
    ConditionViolated,
    DegenerateChannel,
    DegenerateSplit,
    EntryOutOfRange,
    InvalidBudget,
    IoError,
    LabelError,
    ParseError,
    PrivregError,
    ProjectionTooLarge,
    RankDeficient,
    ShapeError,
    ZeroResidual,
)
from .mechanisms import (
    DPGuarantee,
    MechanismConfig,
    MechanismOutput,
    PrivacyBudget,
    Scheme,
    apply_additive_noise,
    apply_mechanism,
    apply_random_projection,
    calibrate_additive_noise,
    calibrate_projection_noise,
    mi_dp_to_dp,
)
from .solvers import ModelEstimate, RidgeProblem, Source, least_squares, objective, relative_error, ridge_closed_form
from .bounds import (
    BoundReport,
    ChannelSpec,
    TailQuery,
    additive_noise_bound,
    coherent_simo_capacity,
    gaussian_smax_tail,
    noncoherent_simo_capacity,
    projection_bound,
    ridge_norm_bound,
    ridge_relative_bound,
    wedin_perturbation_bound,
)
from .experiments import (
    ClassificationRecord,
    Schedule,
    ScheduleKind,
    TradeoffRecord,
    classification_experiment,
    generate_blobs,
    generate_random_dataset,
    projection_schedule,
    run_trial,
    sweep_epsilon,
    sweep_n,
)
from .io import ReportTable, emit_report, load_csv_dataset, read_report
