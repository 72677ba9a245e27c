"""Best linear unbiased estimation of location and scale.

Given the first r of n order statistics and the standardized moments,
the location and scale estimates are the generalized-least-squares
solution of X ~ mu * 1 + sigma * means, weighted by the inverse of the
observed block of the covariance matrix.  All inverse-matrix quantities
are obtained from one Cholesky factorization; the matrix is never
inverted explicitly.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.linalg import cho_factor, cho_solve

from .errors import NumericalError
from .moments import MomentSet

CONDITION_LIMIT = 1e12  # past this, 4-decimal results are meaningless


@dataclass(frozen=True)
class CensoredSample:
    """The first r order statistics observed out of n units on test."""

    n: int
    values: np.ndarray

    def __post_init__(self):
        values = np.array(self.values, dtype=float)  # copy: callers keep their buffer
        object.__setattr__(self, "values", values)
        if values.ndim != 1:
            raise ValueError("values must be a one-dimensional sequence")
        if len(values) < 2:
            raise ValueError("need at least two observed failures to estimate two parameters")
        if len(values) >= self.n:
            raise ValueError(
                f"observed count {len(values)} must be below the sample size {self.n} "
                "(no future order statistic would remain)"
            )
        if not np.all(np.isfinite(values)):
            raise ValueError("values must be finite")
        if not np.all(np.diff(values) > 0):
            raise ValueError("values must be strictly increasing")
        values.flags.writeable = False

    @property
    def r(self) -> int:
        return len(self.values)


@dataclass(frozen=True)
class BlueEstimate:
    """Location/scale estimates with their second-moment structure.

    The variance and covariance fields are coefficients on the unknown
    squared scale.  ``delta`` is the generalized variance of the
    estimator pair.  The weight vectors reproduce the estimates exactly:
    location == location_weights @ values.
    """

    location: float
    scale: float
    var_location: float
    var_scale: float
    cov_location_scale: float
    delta: float
    location_weights: np.ndarray
    scale_weights: np.ndarray


@dataclass(frozen=True)
class SolveContext:
    """Cholesky solves against the observed r x r covariance block.

    ci_ones is the solve against the all-ones vector (equivalently the
    row sums of the inverse block, by symmetry); ci_means the solve
    against the truncated means vector.  g11, g12, g22 are the Gram
    scalars of (ones, means) in the inverse-covariance inner product,
    and delta = g11 g22 - g12^2.
    """

    r: int
    means_r: np.ndarray
    chol: tuple
    ci_ones: np.ndarray
    ci_means: np.ndarray
    g11: float
    g12: float
    g22: float
    delta: float

    def solve(self, rhs: np.ndarray) -> np.ndarray:
        return cho_solve(self.chol, rhs)


def solve_context(moments: MomentSet, r: int) -> SolveContext:
    """Factor the observed covariance block and precompute the Gram scalars."""
    if not 2 <= r < moments.n:
        raise ValueError(f"observed count r={r} must satisfy 2 <= r < n={moments.n}")
    block = moments.cov[:r, :r]
    cond = float(np.linalg.cond(block))
    if not np.isfinite(cond) or cond > CONDITION_LIMIT:
        raise NumericalError(
            f"observed covariance block is numerically singular "
            f"(condition estimate {cond:.3e} exceeds {CONDITION_LIMIT:.0e})"
        )
    try:
        chol = cho_factor(block, lower=True)
    except np.linalg.LinAlgError as exc:
        raise NumericalError(f"covariance block failed to factor: {exc}") from None
    means_r = moments.means[:r]
    ones = np.ones(r)
    ci_ones = cho_solve(chol, ones)
    ci_means = cho_solve(chol, means_r)
    g11 = float(ones @ ci_ones)
    g12 = float(means_r @ ci_ones)
    g22 = float(means_r @ ci_means)
    delta = g11 * g22 - g12 * g12
    if delta <= 0:
        raise NumericalError(f"generalized variance came out non-positive ({delta:.3e})")
    return SolveContext(r, means_r, chol, ci_ones, ci_means, g11, g12, g22, delta)


def blue_weights(ctx: SolveContext) -> tuple[np.ndarray, np.ndarray]:
    """Location and scale weight vectors on the observed order statistics."""
    w_loc = (ctx.g22 * ctx.ci_ones - ctx.g12 * ctx.ci_means) / ctx.delta
    w_scl = (ctx.g11 * ctx.ci_means - ctx.g12 * ctx.ci_ones) / ctx.delta
    return w_loc, w_scl


def blue_estimate(sample: CensoredSample, moments: MomentSet) -> BlueEstimate:
    """Best linear unbiased estimates of location and scale."""
    if moments.n != sample.n:
        raise ValueError(
            f"moment set is for n={moments.n} but the sample has n={sample.n}"
        )
    ctx = solve_context(moments, sample.r)
    w_loc, w_scl = blue_weights(ctx)
    return BlueEstimate(
        location=float(w_loc @ sample.values),
        scale=float(w_scl @ sample.values),
        var_location=ctx.g22 / ctx.delta,
        var_scale=ctx.g11 / ctx.delta,
        cov_location_scale=-ctx.g12 / ctx.delta,
        delta=ctx.delta,
        location_weights=w_loc,
        scale_weights=w_scl,
    )
