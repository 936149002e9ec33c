"""Perturbative and brute-force analysis of a probed non-degenerate hyper-Raman coupler."""

from .scenario import (
    ModeId,
    CoherentAmplitudes,
    Couplings,
    WaveVectors,
    PhaseMismatches,
    Scenario,
    ValidityReport,
    derive_mismatches,
    validate_scenario,
)
from .kernels import CoefficientSet, eval_coefficients, phase_E, phase_F
from .witnesses import WitnessKind, WitnessReport, evaluate, evaluate_scenario, full_report

__version__ = "0.1.0"

__all__ = [
    "ModeId",
    "CoherentAmplitudes",
    "Couplings",
    "WaveVectors",
    "PhaseMismatches",
    "Scenario",
    "ValidityReport",
    "derive_mismatches",
    "validate_scenario",
    "CoefficientSet",
    "eval_coefficients",
    "phase_E",
    "phase_F",
    "WitnessKind",
    "WitnessReport",
    "evaluate",
    "evaluate_scenario",
    "full_report",
]
