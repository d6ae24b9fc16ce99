"""Trigonometric approximation by de la Vallee-Poussin means, pointwise
windowed norms and moduli, best-approximation solvers, and a verification
harness for the associated approximation inequalities."""

from .approx import (
    AveragedErrorTable,
    BestApproxResult,
    averaged_error,
    averaged_error_table,
    best_approximation,
    clear_caches,
    pointwise_error,
    residual_function,
    windowed_best_error,
    windowed_error,
)
from .config import STATEMENTS, RunConfig, Tolerances, canonical_text, load_config, parse_config
from .corpus import DEFAULT_CORPUS, CorpusFunction, corpus_members
from .errors import (
    AliasingError,
    ConfigError,
    SolverConvergenceError,
    WindowTooSmallError,
)
from .fourier import (
    FourierCoefficients,
    TrigPolynomial,
    dirichlet_kernel,
    fourier_coefficients,
    partial_sum,
    vp_kernel,
    vp_mean,
    vp_mean_by_kernel,
    vp_mean_weights,
)
from .grid import GridFunction, grid_norm, uniform_grid, wrap_angle
from .harness import (
    CampaignResult,
    InequalityReport,
    StatementResult,
    fit_constant,
    run_campaign,
    write_artifacts,
)
from .sequences import (
    DecreasingIndexSequence,
    IncreasingIndexSequence,
    MeanDifference,
    decreasing_index_sequence,
    increasing_index_sequence,
    mean_difference,
)
from .windows import (
    ModulusTable,
    Variant,
    WindowSpec,
    averaged_global_modulus,
    averaged_modulus,
    difference_function,
    global_modulus,
    modulus_table,
    pointwise_difference,
    pointwise_modulus,
    windowed_norm,
)

__version__ = "0.1.0"
