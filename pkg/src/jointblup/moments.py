"""Means and covariances of standardized order statistics.

For a sample of size n from a standardized parent Z, this module
computes the vector of expected order statistics E[Z_i:n] and the full
n x n covariance matrix Cov(Z_i:n, Z_j:n).  The exponential parent has
closed forms (partial sums of reciprocals); every other case goes
through deterministic quadrature on the unit interval:

    E[Z_i:n]      = n C(n-1, i-1) Int_0^1 Q(u) u^(i-1) (1-u)^(n-i) du
    E[Z_i Z_j]    = c_ij Int_0^1 Int_0^v Q(u) Q(v) u^(i-1) (v-u)^(j-i-1)
                    (1-v)^(n-j) du dv,   i < j

with Q the parent quantile function and c_ij the multinomial count
n! / ((i-1)! (j-i-1)! (n-j)!).  The inner integral is taken with the
unit-interval rule rescaled to (0, v), which factorizes so that one
(K x K) quantile evaluation and one power-accumulation kernel call
serve every (i, j) pair at once.

Computed moments are validated against identities (monotone means,
positive definiteness, the trace identity, and family-specific row
sums) before they are returned or cached.
"""

from __future__ import annotations

import json
import math
import os
import warnings
from dataclasses import dataclass
from pathlib import Path

import numpy as np
from scipy.linalg import cholesky

from .errors import MomentValidationError
from .families import DistributionModel, Family
from .quadrature import QuadratureSettings, unit_rule

MAX_SAMPLE_SIZE = 50  # quadrature accuracy unvalidated beyond this
CACHE_FORMAT_VERSION = 1

CLOSED_FORM = "closed-form"
QUADRATURE = "quadrature"

_IDENTITY_TOL = {CLOSED_FORM: 1e-12, QUADRATURE: 1e-4}
_ROW_SUM_TOL = 1e-4


def _load_kernel():
    # The accumulation is a matrix product in disguise, and the BLAS-backed
    # NumPy kernel measures several times faster than the compiled loop
    # (see benchmarks/bench_kernels.py), so NumPy is the default.  The
    # compiled kernel stays available for environments with a weak BLAS.
    if os.environ.get("JOINTBLUP_COMPILED") and not os.environ.get("JOINTBLUP_PURE_PYTHON"):
        try:
            from . import _kernels

            return _kernels
        except ImportError:
            pass
    from . import _kernels_py

    return _kernels_py


_kernel = _load_kernel()


def kernel_backend() -> str:
    """Which product-moment kernel is active: 'compiled' or 'python'."""
    return _kernel.BACKEND


@dataclass(frozen=True)
class MomentSet:
    """Moments of the standardized order statistics of one (family, n).

    ``means[i-1]`` is E[Z_i:n]; ``cov`` is the full n x n covariance
    matrix.  Instances are immutable and safe to share across threads.
    """

    model: DistributionModel
    n: int
    means: np.ndarray
    cov: np.ndarray
    provenance: str
    settings: QuadratureSettings | None = None

    def __post_init__(self):
        self.means.flags.writeable = False
        self.cov.flags.writeable = False


def _check_request(model: DistributionModel, n: int) -> None:
    if not isinstance(model, DistributionModel):
        raise ValueError(f"unsupported distribution model: {model!r}")
    if n < 1:
        raise ValueError(f"sample size must be positive, got {n}")
    if n > MAX_SAMPLE_SIZE:
        raise ValueError(
            f"sample size {n} exceeds the validated maximum {MAX_SAMPLE_SIZE}"
        )


def _resolve_method(model: DistributionModel, method: str) -> str:
    if method == "auto":
        return CLOSED_FORM if model.family is Family.EXPONENTIAL else QUADRATURE
    if method == CLOSED_FORM and model.family is not Family.EXPONENTIAL:
        raise ValueError(f"no closed-form moments for family {model.family.value!r}")
    if method not in (CLOSED_FORM, QUADRATURE):
        raise ValueError(f"unknown method {method!r}")
    return method


def _exponential_means(n: int) -> np.ndarray:
    # E[Z_i:n] = sum_{k=1..i} 1/(n-k+1): spacings are independent exponentials
    return np.cumsum(1.0 / (n - np.arange(n)))


def _exponential_cov(n: int) -> np.ndarray:
    csum = np.cumsum(1.0 / (n - np.arange(n)) ** 2)
    idx = np.arange(n)
    return csum[np.minimum.outer(idx, idx)]


def _quadrature_means(model, n, settings, power=1):
    u, w = unit_rule(settings)
    q = model.quantile(u) ** power
    out = np.empty(n)
    u_pow = np.power.outer(u, np.arange(n))
    c_pow = np.power.outer(1.0 - u, np.arange(n))
    for i in range(1, n + 1):
        coeff = n * math.comb(n - 1, i - 1)
        out[i - 1] = coeff * float(np.sum(w * q * u_pow[:, i - 1] * c_pow[:, n - i]))
    return out


def _quadrature_cov(model, n, settings):
    u, w = unit_rule(settings)
    q = model.quantile(u)

    second = np.zeros((n, n))
    np.fill_diagonal(second, _quadrature_means(model, n, settings, power=2))

    if n > 1:
        # inner rule on (0, v) is the unit rule scaled by v; scaling factors
        # v^(j-1) fold into the outer weight, so the quantile matrix and the
        # power table below are shared by every (i, j) pair
        psi_w = model.quantile(np.outer(u, u)) * w[None, :]
        table = _kernel.pair_power_table(psi_w, u, 1.0 - u, n - 1, n - 1)
        u_pow = np.power.outer(u, np.arange(n))
        c_pow = np.power.outer(1.0 - u, np.arange(n))
        fact = [math.factorial(k) for k in range(n + 1)]
        for j in range(2, n + 1):
            outer = w * q * c_pow[:, n - j] * u_pow[:, j - 1]
            for i in range(1, j):
                coeff = float(fact[n] // (fact[i - 1] * fact[j - i - 1] * fact[n - j]))
                val = coeff * float(outer @ table[:, i - 1, j - i - 1])
                second[i - 1, j - 1] = val
                second[j - 1, i - 1] = val

    means = _quadrature_means(model, n, settings)
    return second - np.outer(means, means)


def order_statistic_means(
    model: DistributionModel,
    n: int,
    settings: QuadratureSettings | None = None,
    method: str = "auto",
) -> np.ndarray:
    """E[Z_i:n] for i = 1..n of the standardized parent."""
    _check_request(model, n)
    method = _resolve_method(model, method)
    if method == CLOSED_FORM:
        return _exponential_means(n)
    return _quadrature_means(model, n, settings or QuadratureSettings())


def order_statistic_cov(
    model: DistributionModel,
    n: int,
    settings: QuadratureSettings | None = None,
    method: str = "auto",
) -> np.ndarray:
    """Cov(Z_i:n, Z_j:n) as a full n x n matrix."""
    _check_request(model, n)
    method = _resolve_method(model, method)
    if method == CLOSED_FORM:
        return _exponential_cov(n)
    return _quadrature_cov(model, n, settings or QuadratureSettings())


def moment_residuals(ms: MomentSet) -> dict[str, float]:
    """Residuals of the identities the moments must satisfy.

    Keys: 'asymmetry' (matrix symmetry defect), 'trace' (defect of
    trace(cov) + |means|^2 = n E[Z^2]), 'mean_symmetry' (for symmetric
    parents, defect of means[i] = -means[n+1-i]), 'row_sum' (defect of
    the family's known row-sum constant, when it has one).
    """
    res = {
        "asymmetry": float(np.max(np.abs(ms.cov - ms.cov.T))),
        "trace": abs(
            float(np.trace(ms.cov) + ms.means @ ms.means)
            - ms.n * ms.model.second_moment
        ),
    }
    if ms.model.symmetric:
        res["mean_symmetry"] = float(np.max(np.abs(ms.means + ms.means[::-1])))
    if ms.model.row_sum_identity is not None:
        res["row_sum"] = float(
            np.max(np.abs(ms.cov.sum(axis=1) - ms.model.row_sum_identity))
        )
    return res


def validate_moment_set(ms: MomentSet) -> dict[str, float]:
    """Check every MomentSet invariant; raise MomentValidationError on failure.

    Returns the residual dictionary on success so callers can log the
    achieved accuracy.
    """
    if ms.means.shape != (ms.n,) or ms.cov.shape != (ms.n, ms.n):
        raise MomentValidationError(
            f"shape mismatch: means {ms.means.shape}, cov {ms.cov.shape}, n={ms.n}"
        )
    res = moment_residuals(ms)
    if not np.all(np.diff(ms.means) > 0) and ms.n > 1:
        raise MomentValidationError(
            "order-statistic means are not strictly increasing", residuals=res
        )

    tol = _IDENTITY_TOL[ms.provenance]
    for key in ("asymmetry", "trace", "mean_symmetry"):
        if key in res and res[key] > tol:
            raise MomentValidationError(
                f"{key} residual {res[key]:.3e} exceeds {tol:.0e} "
                f"({ms.model.family.value}, n={ms.n}); quadrature did not converge",
                residuals=res,
            )
    if "row_sum" in res and res["row_sum"] > _ROW_SUM_TOL:
        raise MomentValidationError(
            f"row-sum residual {res['row_sum']:.3e} exceeds {_ROW_SUM_TOL:.0e}",
            residuals=res,
        )

    try:
        # Cholesky of the full matrix certifies every leading principal
        # submatrix positive definite at once
        cholesky(ms.cov, lower=True)
    except np.linalg.LinAlgError as exc:
        raise MomentValidationError(
            f"covariance matrix is not positive definite: {exc}", residuals=res
        ) from None
    return res


def build_moment_set(
    model: DistributionModel,
    n: int,
    settings: QuadratureSettings | None = None,
    method: str = "auto",
) -> MomentSet:
    """Compute and validate a MomentSet without touching any cache."""
    _check_request(model, n)
    method = _resolve_method(model, method)
    if method == CLOSED_FORM:
        ms = MomentSet(model, n, _exponential_means(n), _exponential_cov(n), CLOSED_FORM)
    else:
        settings = settings or QuadratureSettings()
        means = _quadrature_means(model, n, settings)
        cov = _quadrature_cov(model, n, settings)
        cov = 0.5 * (cov + cov.T)
        ms = MomentSet(model, n, means, cov, QUADRATURE, settings)
    validate_moment_set(ms)
    return ms


# ---------------------------------------------------------------------------
# cache: one self-describing JSON file per (family, n)

def cache_path(cache_dir: Path | str, model: DistributionModel, n: int) -> Path:
    return Path(cache_dir) / f"{model.family.value}_n{n:02d}.json"


def _cache_payload(ms: MomentSet) -> dict:
    return {
        "format_version": CACHE_FORMAT_VERSION,
        "family": ms.model.family.value,
        "n": ms.n,
        "provenance": ms.provenance,
        "quadrature": ms.settings.as_dict() if ms.settings else None,
        "means": ms.means.tolist(),
        "cov": ms.cov.tolist(),
    }


def save_moments(ms: MomentSet, cache_dir: Path | str) -> Path:
    """Persist a validated MomentSet; the write is atomic (tmp + rename)."""
    validate_moment_set(ms)
    cache_dir = Path(cache_dir)
    cache_dir.mkdir(parents=True, exist_ok=True)
    path = cache_path(cache_dir, ms.model, ms.n)
    payload = json.dumps(_cache_payload(ms), sort_keys=True, indent=1)
    tmp = path.with_suffix(f".tmp{os.getpid()}")
    tmp.write_text(payload)
    os.replace(tmp, path)
    return path


def _load_cached(
    cache_dir, model, n, settings, expected_provenance
) -> MomentSet | None:
    path = cache_path(cache_dir, model, n)
    if not path.exists():
        return None
    try:
        raw = json.loads(path.read_text())
        key_ok = (
            raw["format_version"] == CACHE_FORMAT_VERSION
            and raw["family"] == model.family.value
            and raw["n"] == n
            and raw["provenance"] == expected_provenance
            and raw["quadrature"]
            == (settings.as_dict() if expected_provenance == QUADRATURE else None)
        )
        if not key_ok:
            return None  # stale or foreign entry: treat as a miss
        means = np.asarray(raw["means"], dtype=float)
        cov = np.asarray(raw["cov"], dtype=float)
        ms = MomentSet(
            model,
            n,
            means,
            cov,
            raw["provenance"],
            settings if expected_provenance == QUADRATURE else None,
        )
        validate_moment_set(ms)
        return ms
    except (json.JSONDecodeError, KeyError, TypeError, ValueError, MomentValidationError) as exc:
        warnings.warn(
            f"moment cache entry {path} is unreadable ({exc}); recomputing",
            stacklevel=2,
        )
        return None


def load_or_build_moments(
    model: DistributionModel,
    n: int,
    cache_dir: Path | str | None = None,
    settings: QuadratureSettings | None = None,
) -> MomentSet:
    """Return cached moments when a matching entry exists, else build.

    A cache entry matches only if format version, family, n, and
    quadrature settings all agree; anything else is a miss.  Corrupt
    entries are recomputed with a warning.  Freshly built moments are
    validated before they are persisted.
    """
    _check_request(model, n)
    method = _resolve_method(model, "auto")
    settings = settings or QuadratureSettings()
    if cache_dir is not None:
        cached = _load_cached(cache_dir, model, n, settings, method)
        if cached is not None:
            return cached
    ms = build_moment_set(model, n, settings=settings)
    if cache_dir is not None:
        save_moments(ms, cache_dir)
    return ms
