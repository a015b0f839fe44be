"""Likelihood-ratio tests for block-diagonal, diagonal and equal covariance
structure in high dimensions, with a reproducible Monte Carlo engine."""

from ._core import (
    HdlrtError,
    TestReport,
    block_constants,
    block_test,
    correlation_constants,
    correlation_test,
    eqcov_test,
    log_det_correlation,
    log_lambda,
    log_vn,
    simulate,
)

__all__ = [
    "HdlrtError",
    "TestReport",
    "block_constants",
    "block_test",
    "correlation_constants",
    "correlation_test",
    "eqcov_test",
    "log_det_correlation",
    "log_lambda",
    "log_vn",
    "simulate",
]
