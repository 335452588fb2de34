"""Segmented first-order Markov chains for synthetic solar-irradiance states."""

__version__ = "0.1.0"

from .discretize import (
    DEFAULT_THRESHOLDS,
    SolarState,
    StateSequence,
    ThresholdConfig,
    classify,
    discretize_day,
    to_state,
)
from .errors import (
    ConfigError,
    DataError,
    DegenerateDistributionError,
    GridMismatchError,
    SolarMarkovError,
)
from .evaluation import EvaluationReport, compare, state_sigma, trace_diff
from .generator import (
    GenerationResult,
    SegmentationPlan,
    SegmentedModel,
    fit_segmented,
    generate,
    plan_preset,
    sample,
)
from .ingest import IrradianceSeries, RepresentativeDay, parse_csv, representative_day
from .kernels import BACKEND
from .markov import argmax_state, count_transitions, propagate, to_probabilities
from .stats import (
    alpha_statistic,
    chi2_critical,
    dependency_test,
    marginals,
    stationarity_check,
)
