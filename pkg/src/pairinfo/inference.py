"""Likelihood-ratio independence test for a pair of categorical variables.

The statistic is ``gamma_sq = 2 n MI(p_hat)``, twice the sample size times
the plug-in mutual information of the empirical table.  Under independence
it is asymptotically chi-square with ``(r - 1)(s - 1)`` degrees of freedom,
so the test rejects at level alpha when the statistic exceeds the
``1 - alpha`` chi-square quantile; equivalently, when the plug-in MI
exceeds ``quantile / (2 n)``.

The chi-square c.d.f. and quantile are implemented here via the
regularized lower incomplete gamma function (series expansion for small
arguments, Lentz continued fraction otherwise) so results are bit-stable
across platforms.  Targets: |cdf error| <= 1e-10, |quantile error| <= 1e-8.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .asymptotics import normal_quantile
from .measures import mutual_information
from .pmf import EmpiricalPmf

_MAX_ITER = 500
_EPS = 1e-16


@dataclass(frozen=True)
class TestReport:
    """Outcome of the likelihood-ratio independence test."""

    gamma_sq: float
    df: int
    threshold: float
    mi_threshold: float
    p_value: float
    reject: bool
    alpha: float
    n: int


def lrt_statistic(emp: EmpiricalPmf) -> float:
    """Likelihood-ratio statistic ``2 n MI`` of an empirical table.

    Computed literally as twice the sample size times the plug-in mutual
    information, so the identity with :func:`~pairinfo.measures.mutual_information`
    is exact by construction.  May be a hair below 0 (never below -1e-9)
    from floating-point cancellation when the table is nearly a product.
    """
    return 2.0 * emp.n * mutual_information(emp)


def _gamma_p_series(a: float, x: float) -> float:
    ap = a
    term = 1.0 / a
    total = term
    for _ in range(_MAX_ITER):
        ap += 1.0
        term *= x / ap
        total += term
        if abs(term) < abs(total) * _EPS:
            break
    return total * math.exp(-x + a * math.log(x) - math.lgamma(a))


def _gamma_q_contfrac(a: float, x: float) -> float:
    # Lentz's algorithm on the continued fraction for the upper tail Q(a, x).
    tiny = 1e-300
    b = x + 1.0 - a
    c = 1.0 / tiny
    d = 1.0 / b
    h = d
    for i in range(1, _MAX_ITER):
        an = -i * (i - a)
        b += 2.0
        d = an * d + b
        if abs(d) < tiny:
            d = tiny
        c = b + an / c
        if abs(c) < tiny:
            c = tiny
        d = 1.0 / d
        factor = d * c
        h *= factor
        if abs(factor - 1.0) < _EPS:
            break
    return math.exp(-x + a * math.log(x) - math.lgamma(a)) * h


def _gamma_p(a: float, x: float) -> float:
    """Regularized lower incomplete gamma P(a, x) for a > 0, x >= 0."""
    if x == 0.0:
        return 0.0
    if x < a + 1.0:
        return _gamma_p_series(a, x)
    return 1.0 - _gamma_q_contfrac(a, x)


def _validate_df(df: int) -> int:
    if not isinstance(df, (int,)) or isinstance(df, bool):
        raise ValueError(f"degrees of freedom must be an integer, got {df!r}")
    if df < 1:
        raise ValueError(f"degrees of freedom must be at least 1, got {df}")
    return df


def chi_square_cdf(x: float, df: int) -> float:
    """Chi-square c.d.f. with ``df`` degrees of freedom at ``x >= 0``."""
    _validate_df(df)
    if x < 0:
        raise ValueError(f"chi-square c.d.f. argument must be >= 0, got {x}")
    return min(1.0, max(0.0, _gamma_p(df / 2.0, x / 2.0)))


def _chi_square_pdf(x: float, df: int) -> float:
    a = df / 2.0
    if x <= 0.0:
        return math.inf if df == 1 else (0.5 if df == 2 else 0.0)
    return math.exp((a - 1.0) * math.log(x) - x / 2.0 - math.lgamma(a) - a * math.log(2.0))


def chi_square_quantile(p: float, df: int) -> float:
    """Inverse chi-square c.d.f.: the x with ``chi_square_cdf(x, df) = p``.

    Wilson-Hilferty starting point, then Newton iterations safeguarded by
    a shrinking bisection bracket.
    """
    _validate_df(df)
    if not 0.0 < p < 1.0:
        raise ValueError(f"quantile level must be in (0, 1), got {p}")
    a = df / 2.0
    # Wilson-Hilferty cube approximation; fall back to the small-x power
    # law when the cube would go nonpositive (tiny p at small df).
    z = normal_quantile(p)
    t = 1.0 - 2.0 / (9.0 * df) + z * math.sqrt(2.0 / (9.0 * df))
    if t > 0:
        x = df * t**3
    else:
        x = 2.0 * math.exp((math.log(p) + math.lgamma(a + 1.0)) / a)
    lo, hi = 0.0, max(2.0 * x, 1.0)
    while chi_square_cdf(hi, df) < p:
        hi *= 2.0
        if hi > 1e9:
            break
    x = min(max(x, lo + 1e-300), hi)
    for _ in range(200):
        f = chi_square_cdf(x, df) - p
        if f >= 0:
            hi = x
        else:
            lo = x
        if abs(f) < 1e-14:
            break
        slope = _chi_square_pdf(x, df)
        step_ok = math.isfinite(slope) and slope > 0
        nxt = x - f / slope if step_ok else 0.5 * (lo + hi)
        if not lo < nxt < hi:
            nxt = 0.5 * (lo + hi)
        if abs(nxt - x) <= 1e-13 * max(1.0, x):
            x = nxt
            break
        x = nxt
    return x


def independence_test(emp: EmpiricalPmf, alpha: float = 0.05) -> TestReport:
    """Likelihood-ratio test of independence between the two coordinates.

    Rejects at level ``alpha`` when ``gamma_sq`` exceeds the ``1 - alpha``
    chi-square quantile with ``(rows - 1)(cols - 1)`` degrees of freedom.
    Both alphabets must have at least two symbols, otherwise the degrees
    of freedom vanish and no test exists.

    Degrees of freedom stay fixed at ``(rows - 1)(cols - 1)`` even if some
    empirical rows or columns are all zero; callers with structurally
    absent categories should shrink the table first.
    """
    if not 0.0 < alpha < 1.0:
        raise ValueError(f"alpha must be in (0, 1), got {alpha}")
    r, s = emp.shape.rows, emp.shape.cols
    if r < 2 or s < 2:
        raise ValueError(
            f"test undefined for degenerate alphabet: shape {r}x{s} gives "
            f"0 degrees of freedom"
        )
    df = (r - 1) * (s - 1)
    gamma_sq = lrt_statistic(emp)
    threshold = chi_square_quantile(1.0 - alpha, df)
    p_value = 1.0 - chi_square_cdf(max(gamma_sq, 0.0), df)
    return TestReport(
        gamma_sq=gamma_sq,
        df=df,
        threshold=threshold,
        mi_threshold=threshold / (2.0 * emp.n),
        p_value=p_value,
        reject=bool(gamma_sq > threshold),
        alpha=alpha,
        n=emp.n,
    )


__all__ = [
    "TestReport",
    "lrt_statistic",
    "chi_square_cdf",
    "chi_square_quantile",
    "independence_test",
]
