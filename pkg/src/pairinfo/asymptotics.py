"""Large-sample machinery for the plug-in estimators.

The plug-in entropy and mutual information are smooth functions of the
empirical p.m.f., so the delta method gives each one a limiting normal law
``sqrt(n) * (estimate - truth) -> N(0, sigma^2)``.  For a statistic with
per-cell weight ``c_k`` the variance has the quadratic form

    canonical = sum_k p_k c_k^2 - (sum_k p_k c_k)^2.

An alternate closed form is also computed side by side.  It keeps the
``p_k (1 - p_k)`` diagonal but weights each distinct ordered cross pair by
``(p_k p_k')^{3/2}`` with a leading factor of 2:

    alternate = sum_k p_k (1 - p_k) c_k^2
                - 2 * sum_{k != k'} (p_k p_k')^{3/2} c_k c_k'.

The two disagree in general.  Every variance function returns both values
in a :class:`VariancePair` so simulation can adjudicate; the Monte Carlo
harness pins its checks to ``canonical``.

Also here: the summability constant ``sum_k |1 + log p_k|`` that controls
the estimator's convergence rate, the scaled multinomial covariance matrix,
normal-based confidence intervals, and plain estimate reports.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .measures import joint_entropy, mutual_information
from .pmf import PmfLike, ZPmf, z_vector


@dataclass(frozen=True)
class VariancePair:
    """Asymptotic variance computed two ways (both in nats squared)."""

    canonical: float
    alternate: float

    @property
    def discrepancy(self) -> float:
        """Absolute gap between the two forms."""
        return abs(self.canonical - self.alternate)


@dataclass(frozen=True)
class EstimateReport:
    """Point estimate with plug-in standard error and normal interval."""

    measure: str
    estimate: float
    n: int
    variance: VariancePair
    std_error: float
    ci_lower: float
    ci_upper: float
    alpha: float


def _variance_pair(probs: np.ndarray, weights: np.ndarray) -> VariancePair:
    """Both variance forms for weights ``c`` against probabilities ``p``.

    Applied literally to whatever sub-vector the caller selects; no
    normalization of ``probs`` is assumed.  Cells with ``p_k = 0`` drop
    out of every sum (the 0 * log 0 convention), so callers may pass
    weights that are only finite on the support.
    """
    mask = probs > 0
    p = probs[mask]
    c = weights[mask]
    pc = p * c
    canonical = float((pc * c).sum() - pc.sum() ** 2)
    # (sum p^{3/2} c)^2 counts the diagonal once; remove it before doubling.
    p32c = p**1.5 * c
    cross = p32c.sum() ** 2 - (p**3 * c * c).sum()
    alternate = float((p * (1 - p) * c * c).sum() - 2.0 * cross)
    return VariancePair(canonical=canonical, alternate=alternate)


def _log_weights(probs: np.ndarray) -> np.ndarray:
    out = np.zeros_like(probs)
    mask = probs > 0
    out[mask] = 1.0 + np.log(probs[mask])
    return out


def entropy_variance(p: PmfLike) -> VariancePair:
    """Delta-method variance of the plug-in joint entropy.

    ``canonical`` equals ``sum p (log p)^2 - H^2``; it is 0 exactly when
    the distribution is uniform or degenerate.
    """
    probs = z_vector(p)
    return _variance_pair(probs, _log_weights(probs))


def _pointwise_mi(p: PmfLike) -> tuple[np.ndarray, np.ndarray]:
    """Flattened probabilities and per-cell log(p_ij / (p_i p_j)) weights."""
    probs = z_vector(p)
    table = probs.reshape(p.shape.rows, p.shape.cols)
    denom = np.outer(table.sum(axis=1), table.sum(axis=0))
    weights = np.zeros_like(table)
    mask = table > 0
    weights[mask] = np.log(table[mask] / denom[mask])
    return probs, weights.ravel()


def mi_variance(p: PmfLike) -> VariancePair:
    """Delta-method variance of the plug-in mutual information.

    ``canonical`` equals ``sum p B^2 - MI^2`` where ``B`` is the pointwise
    mutual information of each cell; it is 0 when the coordinates are
    independent.
    """
    probs, weights = _pointwise_mi(p)
    return _variance_pair(probs, weights)


def diagonal_mi_variance(p: PmfLike) -> VariancePair:
    """Variance form restricted to the diagonal cells of a square table.

    Uses the same quadratic forms as :func:`mi_variance` but only over the
    cells with equal row and column index (flattened positions
    ``1 + (i - 1) * (cols + 1)``), covering paired data where only
    agreement between the coordinates is observed.
    """
    if not p.shape.is_square:
        raise ValueError(
            f"diagonal variance needs a square shape, got "
            f"{p.shape.rows}x{p.shape.cols}"
        )
    probs, weights = _pointwise_mi(p)
    idx = np.arange(p.shape.rows) * (p.shape.cols + 1)
    return _variance_pair(probs[idx], weights[idx])


def marginal_variance(p: PmfLike, axis: str, index: int) -> VariancePair:
    """Variance pair for one marginal probability estimate.

    ``axis`` is ``"x"`` (row variable) or ``"y"`` (column variable) and
    ``index`` is the 1-based symbol.  ``canonical`` reduces to the binomial
    form ``m (1 - m)`` for marginal value ``m``.
    """
    table = z_vector(p).reshape(p.shape.rows, p.shape.cols)
    if axis == "x":
        if not 1 <= index <= p.shape.rows:
            raise ValueError(
                f"row index i = {index} outside [1, {p.shape.rows}]"
            )
        cells = table[index - 1, :]
    elif axis == "y":
        if not 1 <= index <= p.shape.cols:
            raise ValueError(
                f"column index j = {index} outside [1, {p.shape.cols}]"
            )
        cells = table[:, index - 1]
    else:
        raise ValueError(f"axis must be 'x' or 'y', got {axis!r}")
    return _variance_pair(cells, np.ones_like(cells))


def rate_constant(p: PmfLike) -> float:
    """Summability constant ``sum_k |1 + log p_k|`` of the flattened p.m.f.

    Controls the almost-sure convergence rate of the plug-in entropy; it
    is finite only for strictly positive distributions, so zero cells are
    rejected.
    """
    probs = z_vector(p)
    if np.any(probs == 0):
        k = int(np.argmax(probs == 0))
        raise ValueError(
            f"rate constant requires a strictly positive p.m.f.; "
            f"flattened cell k = {k + 1} is zero"
        )
    return float(np.abs(1.0 + np.log(probs)).sum())


def multinomial_covariance(p: PmfLike) -> np.ndarray:
    """Scaled covariance matrix of the empirical p.m.f. at sample size n.

    Entry (k, k') is ``1 - p_k`` on the diagonal and ``-sqrt(p_k p_k')``
    off it, i.e. ``I - u u^T`` for ``u = sqrt(p)``.  Symmetric and positive
    semidefinite with a zero eigenvalue along ``u``.  Requires a strictly
    positive p.m.f.
    """
    probs = z_vector(p)
    if np.any(probs == 0):
        k = int(np.argmax(probs == 0))
        raise ValueError(
            f"covariance matrix requires a strictly positive p.m.f.; "
            f"flattened cell k = {k + 1} is zero"
        )
    u = np.sqrt(probs)
    return np.eye(len(probs)) - np.outer(u, u)


# Rational approximation coefficients for the standard normal quantile
# (Acklam), accurate to ~1e-9 before refinement.
_NQ_A = (
    -3.969683028665376e+01, 2.209460984245205e+02, -2.759285104469687e+02,
    1.383577518672690e+02, -3.066479806614716e+01, 2.506628277459239e+00,
)
_NQ_B = (
    -5.447609879822406e+01, 1.615858368580409e+02, -1.556989798598866e+02,
    6.680131188771972e+01, -1.328068155288572e+01,
)
_NQ_C = (
    -7.784894002430293e-03, -3.223964580411365e-01, -2.400758277161838e+00,
    -2.549732539343734e+00, 4.374664141464968e+00, 2.938163982698783e+00,
)
_NQ_D = (
    7.784695709041462e-03, 3.224671290700398e-01,
    2.445134137142996e+00, 3.754408661907416e+00,
)


def normal_quantile(q: float) -> float:
    """Quantile of the standard normal law, |error| below 1e-8.

    Rational approximation in three regions, then one Halley refinement
    step against the exact c.d.f. (via erfc), which brings the result to
    near machine precision.
    """
    if not 0.0 < q < 1.0:
        raise ValueError(f"quantile level must be in (0, 1), got {q}")
    a, b, c, d = _NQ_A, _NQ_B, _NQ_C, _NQ_D
    p_low = 0.02425
    if q < p_low:
        t = math.sqrt(-2.0 * math.log(q))
        x = (((((c[0] * t + c[1]) * t + c[2]) * t + c[3]) * t + c[4]) * t + c[5]) / (
            (((d[0] * t + d[1]) * t + d[2]) * t + d[3]) * t + 1.0
        )
    elif q <= 1.0 - p_low:
        t = q - 0.5
        r = t * t
        x = (
            (((((a[0] * r + a[1]) * r + a[2]) * r + a[3]) * r + a[4]) * r + a[5])
            * t
            / (((((b[0] * r + b[1]) * r + b[2]) * r + b[3]) * r + b[4]) * r + 1.0)
        )
    else:
        t = math.sqrt(-2.0 * math.log(1.0 - q))
        x = -(((((c[0] * t + c[1]) * t + c[2]) * t + c[3]) * t + c[4]) * t + c[5]) / (
            (((d[0] * t + d[1]) * t + d[2]) * t + d[3]) * t + 1.0
        )
    # Halley step: e is the c.d.f. error, u its ratio to the density.
    e = 0.5 * math.erfc(-x / math.sqrt(2.0)) - q
    u = e * math.sqrt(2.0 * math.pi) * math.exp(x * x / 2.0)
    return x - u / (1.0 + x * u / 2.0)


def confidence_interval(
    estimate: float, variance: float, n: int, alpha: float
) -> tuple[float, float]:
    """Two-sided normal interval ``estimate -+ z_{1-alpha/2} sqrt(variance/n)``."""
    if not 0.0 < alpha < 1.0:
        raise ValueError(f"alpha must be in (0, 1), got {alpha}")
    if variance < 0:
        raise ValueError(f"variance must be nonnegative, got {variance}")
    if n < 1:
        raise ValueError(f"sample size must be at least 1, got {n}")
    half = normal_quantile(1.0 - alpha / 2.0) * math.sqrt(variance / n)
    return estimate - half, estimate + half


def estimate_report(measure: str, emp, alpha: float = 0.05) -> EstimateReport:
    """Estimate a measure from an empirical p.m.f. with plug-in inference.

    ``measure`` is ``"joint_entropy"`` or ``"mutual_information"``.  The
    variance is evaluated at the empirical distribution itself; a tiny
    negative MI from rounding is clamped to 0 here (and only here).
    """
    n = emp.n
    if measure == "joint_entropy":
        value = joint_entropy(emp)
        var = entropy_variance(emp)
    elif measure == "mutual_information":
        value = max(0.0, mutual_information(emp))
        var = mi_variance(emp)
    else:
        raise ValueError(
            f"unknown measure {measure!r}; expected 'joint_entropy' or "
            f"'mutual_information'"
        )
    lo, hi = confidence_interval(value, var.canonical, n, alpha)
    return EstimateReport(
        measure=measure,
        estimate=value,
        n=n,
        variance=var,
        std_error=math.sqrt(var.canonical / n),
        ci_lower=lo,
        ci_upper=hi,
        alpha=alpha,
    )


__all__ = [
    "VariancePair",
    "EstimateReport",
    "entropy_variance",
    "mi_variance",
    "diagonal_mi_variance",
    "marginal_variance",
    "rate_constant",
    "multinomial_covariance",
    "normal_quantile",
    "confidence_interval",
    "estimate_report",
]
