"""Efficiency comparison of joint versus marginal predictor pairs.

Both measures put the joint pair's covariance in the numerator:

    d_efficiency     = det(joint cov) / det(marginal cov)
    trace_efficiency = trace(joint cov) / trace(marginal cov)

so a d_efficiency below one means the joint pair wins on the
determinant criterion.  The derived quantities keep the same
orientation: efficiency_gain = 1 - d_efficiency, efficiency_loss =
1 - trace_efficiency, overall_gain = gain - loss.  The squared-scale
factor cancels from every ratio.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import NumericalError
from .predict import JointPrediction


@dataclass(frozen=True)
class EfficiencyReport:
    d_efficiency: float
    trace_efficiency: float
    efficiency_gain: float
    efficiency_loss: float
    overall_gain: float
    joint_cov: np.ndarray
    marginal_cov: np.ndarray


def efficiency_report(
    joint: JointPrediction, marginal_cov: np.ndarray
) -> EfficiencyReport:
    """Compare a joint prediction's covariance against a marginal pair's."""
    marginal_cov = np.asarray(marginal_cov, dtype=float)
    if marginal_cov.shape != (2, 2):
        raise ValueError(f"marginal covariance must be 2x2, got {marginal_cov.shape}")
    if abs(marginal_cov[0, 1] - marginal_cov[1, 0]) > 1e-10 * (
        1.0 + abs(marginal_cov[0, 1])
    ):
        raise ValueError("marginal covariance must be symmetric")
    det_m = float(np.linalg.det(marginal_cov))
    tr_m = float(np.trace(marginal_cov))
    if det_m <= 0.0 or tr_m <= 0.0:
        raise NumericalError(
            f"marginal covariance is not usable as a denominator "
            f"(det={det_m:.3e}, trace={tr_m:.3e}); upstream numerics failed"
        )
    d_eff = float(np.linalg.det(joint.cov)) / det_m
    t_eff = float(np.trace(joint.cov)) / tr_m
    gain = 1.0 - d_eff
    loss = 1.0 - t_eff
    return EfficiencyReport(
        d_efficiency=d_eff,
        trace_efficiency=t_eff,
        efficiency_gain=gain,
        efficiency_loss=loss,
        overall_gain=gain - loss,
        joint_cov=joint.cov,
        marginal_cov=marginal_cov,
    )
