"""Metric operators for complex Darboux partners on the half-line."""

from ._core import (  # noqa: F401
    AlphaOnSpectrum,
    ConfigError,
    Error,
    InvalidParams,
    KernelDetected,
    UnknownEntry,
    WrongEntry,
    alpha,
    coefficients,
    constant_state,
    metric_pipeline,
    nodes,
    parse_config,
    probe,
    run_suite,
)

__all__ = [name for name in dir() if not name.startswith("_")]
