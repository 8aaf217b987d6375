"""Fairness-aware secure ISAC beamforming bindings."""

from ._secisac import (
    ConvergenceStatus,
    FairnessState,
    HfroResult,
    NullProjector,
    RateReport,
    Scenario,
    SolveResult,
    Solution,
    SystemConfig,
    TraceRow,
    alternating_solve,
    beam_gain,
    entropy,
    fairness_closed_form,
    hfro_optimize,
    jain_index,
    null_projector,
    project_simplex,
    rate_report,
    sample_scenario,
    sinr_legitimate,
    snr_eavesdropper,
    steering_vector,
)

__all__ = [
    "ConvergenceStatus",
    "FairnessState",
    "HfroResult",
    "NullProjector",
    "RateReport",
    "Scenario",
    "SolveResult",
    "Solution",
    "SystemConfig",
    "TraceRow",
    "alternating_solve",
    "beam_gain",
    "entropy",
    "fairness_closed_form",
    "hfro_optimize",
    "jain_index",
    "null_projector",
    "project_simplex",
    "rate_report",
    "sample_scenario",
    "sinr_legitimate",
    "snr_eavesdropper",
    "steering_vector",
]
