"""Linear unbiased prediction of unobserved order statistics.

Two predictor kinds are provided for a future order statistic index s:

* the marginal predictor, which adds to the plugin value
  (location + scale * mean_s) a correction proportional to the
  generalized-least-squares residuals of the observed prefix, weighted
  by the covariances between observed and target order statistics; and

* the joint predictor pair for two targets s < t, whose weight vectors
  minimize the determinant of the pair's 2 x 2 covariance matrix among
  all linear unbiased pairs.  The minimizer has a closed form built
  from the inverse-covariance row sums, and its covariance matrix comes
  out as quadratic forms of the shifted means vectors divided by the
  generalized variance.

The closed form divides by the gap between the two targets' means, so
the pair must be distinct; requests that cannot have an exact solution
at all (more than two targets, or a model with no location parameter)
are screened by ``check_joint_feasibility``, and the singular linear
system behind the three-target case can be exhibited numerically with
``three_target_singularity_diagnostic``.
"""

from __future__ import annotations

import enum
from collections.abc import Collection
from dataclasses import dataclass

import numpy as np

from .blue import BlueEstimate, CensoredSample, SolveContext, solve_context
from .families import DistributionModel
from .moments import MomentSet

MEAN_GAP_LIMIT = 1e-12  # below this, dividing by the target-mean gap is invalid


@dataclass(frozen=True)
class PredictorWeights:
    """A linear predictor of the order statistic at ``target_index``.

    Unbiasedness pins two moments of the weights: they sum to one, and
    their inner product with the observed means equals the target mean.
    """

    target_index: int
    weights: np.ndarray

    def __post_init__(self):
        self.weights.flags.writeable = False

    def predict(self, values: np.ndarray) -> float:
        return float(self.weights @ np.asarray(values, dtype=float))


@dataclass(frozen=True)
class JointPrediction:
    """Joint determinant-optimal prediction of the pair (s, t).

    ``cov`` is the predictor pair's covariance matrix in units of the
    squared scale.  ``cov_inv_row_sums`` holds the row sums of the
    inverse observed covariance block and ``cov_inv_mean_sums`` the
    solve of that block against the observed means; both are the
    building blocks of the closed-form weights and are exposed for
    diagnostics.
    """

    s: int
    t: int
    weights_s: PredictorWeights
    weights_t: PredictorWeights
    predicted_s: float
    predicted_t: float
    cov: np.ndarray
    cov_inv_row_sums: np.ndarray
    cov_inv_mean_sums: np.ndarray


class FeasibilityVerdict(str, enum.Enum):
    FEASIBLE = "feasible"
    INFEASIBLE_COUNT = "infeasible-count"
    INFEASIBLE_FAMILY = "infeasible-family"


def _check_target(moments: MomentSet, r: int, s: int) -> None:
    if not r < s <= moments.n:
        raise ValueError(f"target index {s} must satisfy r={r} < s <= n={moments.n}")


def marginal_blup(
    sample: CensoredSample,
    moments: MomentSet,
    blue: BlueEstimate,
    s: int,
) -> tuple[PredictorWeights, float]:
    """Marginal predictor of the order statistic at index s.

    Returns the explicit weight vector on the observed values (obtained
    by expanding the location/scale estimates through their own weight
    vectors) together with the predicted value; the two agree exactly.
    """
    if moments.n != sample.n:
        raise ValueError(f"moment set is for n={moments.n} but the sample has n={sample.n}")
    r = sample.r
    _check_target(moments, r, s)
    ctx = solve_context(moments, r)
    cross_cov = moments.cov[:r, s - 1]
    q = ctx.solve(cross_cov)
    d = (
        (1.0 - float(q @ np.ones(r))) * blue.location_weights
        + (moments.means[s - 1] - float(q @ ctx.means_r)) * blue.scale_weights
        + q
    )
    pw = PredictorWeights(target_index=s, weights=d)
    return pw, pw.predict(sample.values)


def _joint_weights(ctx: SolveContext, target_mean: float) -> np.ndarray:
    # i-th weight = (1/delta) sum_j (mean_j - target_mean)
    #                   * (ci_means_j * ci_ones_i - ci_ones_j * ci_means_i)
    shifted = ctx.means_r - target_mean
    c_means = float(shifted @ ctx.ci_means)
    c_ones = float(shifted @ ctx.ci_ones)
    return (c_means * ctx.ci_ones - c_ones * ctx.ci_means) / ctx.delta


def _joint_cov(ctx: SolveContext, mean_s: float, mean_t: float) -> np.ndarray:
    shift_s = ctx.means_r - mean_s
    shift_t = ctx.means_r - mean_t
    ci_s = ctx.ci_means - mean_s * ctx.ci_ones
    ci_t = ctx.ci_means - mean_t * ctx.ci_ones
    v11 = float(shift_s @ ci_s) / ctx.delta
    v12 = float(shift_t @ ci_s) / ctx.delta
    v22 = float(shift_t @ ci_t) / ctx.delta
    return np.array([[v11, v12], [v12, v22]])


def joint_predictor_weights(
    moments: MomentSet, r: int, s: int, t: int
) -> tuple[PredictorWeights, PredictorWeights, np.ndarray, SolveContext]:
    """Closed-form joint predictor weights and covariance, data-free part."""
    _check_target(moments, r, s)
    _check_target(moments, r, t)
    if s == t:
        raise ValueError(f"joint prediction needs two distinct targets, got s = t = {s}")
    if s > t:
        raise ValueError(f"targets must be ordered s < t, got ({s}, {t})")
    mean_s = float(moments.means[s - 1])
    mean_t = float(moments.means[t - 1])
    if abs(mean_t - mean_s) < MEAN_GAP_LIMIT:
        raise ValueError(
            f"target means at indices {s} and {t} coincide to within {MEAN_GAP_LIMIT:g}; "
            "the joint closed form divides by their gap"
        )
    ctx = solve_context(moments, r)
    pw_s = PredictorWeights(s, _joint_weights(ctx, mean_s))
    pw_t = PredictorWeights(t, _joint_weights(ctx, mean_t))
    cov = _joint_cov(ctx, mean_s, mean_t)
    return pw_s, pw_t, cov, ctx


def joint_blup(
    sample: CensoredSample, moments: MomentSet, s: int, t: int
) -> JointPrediction:
    """Determinant-optimal joint prediction of the pair (s, t)."""
    if moments.n != sample.n:
        raise ValueError(f"moment set is for n={moments.n} but the sample has n={sample.n}")
    pw_s, pw_t, cov, ctx = joint_predictor_weights(moments, sample.r, s, t)
    return JointPrediction(
        s=s,
        t=t,
        weights_s=pw_s,
        weights_t=pw_t,
        predicted_s=pw_s.predict(sample.values),
        predicted_t=pw_t.predict(sample.values),
        cov=cov,
        cov_inv_row_sums=ctx.ci_ones,
        cov_inv_mean_sums=ctx.ci_means,
    )


def predictor_pair_covariance(
    moments: MomentSet, w1: PredictorWeights, w2: PredictorWeights
) -> np.ndarray:
    """Covariance matrix (in squared-scale units) of two linear predictors."""
    r = len(w1.weights)
    if len(w2.weights) != r:
        raise ValueError("weight vectors have different lengths")
    block = moments.cov[:r, :r]
    b1 = block @ w1.weights
    b2 = block @ w2.weights
    return np.array(
        [
            [float(w1.weights @ b1), float(w1.weights @ b2)],
            [float(w1.weights @ b2), float(w2.weights @ b2)],
        ]
    )


def check_joint_feasibility(
    targets: Collection[int], model: DistributionModel
) -> FeasibilityVerdict:
    """Screen a joint-prediction request for structural non-existence.

    More than two targets: the linear system determining the predictor
    covariance entries is singular for any location-scale family, so no
    exact joint predictor exists.  Scale-only model: the stationarity
    conditions force the constraint multipliers to zero, so the
    determinant criterion admits no solution either.
    """
    if len(set(targets)) > 2:
        return FeasibilityVerdict.INFEASIBLE_COUNT
    if model.scale_only:
        return FeasibilityVerdict.INFEASIBLE_FAMILY
    return FeasibilityVerdict.FEASIBLE


def three_target_system(
    moments: MomentSet, r: int, s: int, t: int, u: int
) -> tuple[np.ndarray, np.ndarray]:
    """The 6 x 6 linear system a three-target joint prediction would have to solve.

    The six unbiasedness constraints of three linear predictors reduce
    to linear equations in the six distinct entries of their covariance
    matrix, ordered (V11, V12, V13, V22, V23, V33).  Returns the
    coefficient matrix and right-hand side.
    """
    for idx in (s, t, u):
        _check_target(moments, r, idx)
    if not s < t < u:
        raise ValueError(f"targets must be ordered s < t < u, got ({s}, {t}, {u})")
    m_s = float(moments.means[s - 1])
    m_t = float(moments.means[t - 1])
    m_u = float(moments.means[u - 1])
    gaps = [(m_t - m_s, (s, t)), (m_u - m_t, (t, u)), (m_s - m_u, (u, s))]
    for gap, pair in gaps:
        if abs(gap) < MEAN_GAP_LIMIT:
            raise ValueError(f"target means at indices {pair} coincide; system undefined")
    ctx = solve_context(moments, r)
    big_r = ctx.g11   # total of the inverse-block row sums
    r_star = ctx.g12  # means-weighted total
    g22 = ctx.g22
    a1 = (m_t * big_r - r_star) / (m_t - m_s)
    a2 = (m_u * big_r - r_star) / (m_u - m_t)
    a3 = (m_s * big_r - r_star) / (m_s - m_u)
    b1 = (m_t * r_star - g22) / (m_t - m_s)
    b2 = (m_u * r_star - g22) / (m_u - m_t)
    b3 = (m_s * r_star - g22) / (m_s - m_u)
    matrix = np.array(
        [
            [a1, a2, a3, 0.0, 0.0, 0.0],
            [b1, b2, b3, 0.0, 0.0, 0.0],
            [0.0, a1, 0.0, a2, a3, 0.0],
            [0.0, b1, 0.0, b2, b3, 0.0],
            [0.0, 0.0, a1, 0.0, a2, a3],
            [0.0, 0.0, b1, 0.0, b2, b3],
        ]
    )
    rhs = np.array([1.0, m_s, 1.0, m_t, 1.0, m_u])
    return matrix, rhs


def three_target_singularity_diagnostic(
    moments: MomentSet, r: int, s: int, t: int, u: int
) -> float:
    """Determinant of the three-target constraint system.

    In exact arithmetic this determinant is identically zero, which is
    why no exact three-target joint predictor exists; callers confirm
    the computed value is negligible relative to the matrix scale.
    """
    matrix, _ = three_target_system(moments, r, s, t, u)
    return float(np.linalg.det(matrix))
