"""Collusion-secure fingerprinting codes with Gauss-Legendre bias distributions."""

from .attack import ERASED, ONE, ZERO, PiratedWord, collude, parse_strategy, validate_marking
from .bias import BiasDistribution, gl_distribution, is_c_ind, is_c_ind_fast, script_R
from .codebook import Codebook, generate, load, memory_report, save
from .estimator import FingerprintTracer
from .params import (
    CodeParameters,
    InfeasibleKnobsError,
    SecurityGoal,
    SolverKnobs,
    derive_params,
    params_from_auxiliary,
)
from .quadrature import QuadratureSystem, gauss_legendre_qs
from .sim import ExperimentConfig, run_trials, sweep
from .tracing import ScoreTable, exact_score_table, exact_scores, trace

__version__ = "0.1.0"

__all__ = [
    "ZERO", "ONE", "ERASED", "PiratedWord", "collude", "parse_strategy", "validate_marking",
    "BiasDistribution", "gl_distribution", "is_c_ind", "is_c_ind_fast", "script_R",
    "Codebook", "generate", "load", "save", "memory_report",
    "FingerprintTracer",
    "CodeParameters", "InfeasibleKnobsError", "SecurityGoal", "SolverKnobs",
    "derive_params", "params_from_auxiliary",
    "QuadratureSystem", "gauss_legendre_qs",
    "ExperimentConfig", "run_trials", "sweep",
    "ScoreTable", "exact_score_table", "exact_scores", "trace",
]
