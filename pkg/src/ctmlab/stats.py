"""Statistical analyses behind the CLI: correlation matrices, the one-sample
t-test, maximum-likelihood logistic regression, and the span scan relating
mean local complexity to randomness ratings.

Student-t p-values go through a local regularized incomplete beta
(continued-fraction evaluation, ~1e-13 accuracy); normal-tail p-values use
``math.erfc``.  Everything here is deterministic given its inputs.
"""

from __future__ import annotations

import csv
import math
import warnings
from dataclasses import dataclass
from pathlib import Path
from typing import Callable, Sequence

import numpy as np

from .queries import TableView, local_complexity


class PerfectSeparationError(RuntimeError):
    """The predictor separates the two response classes; the ML fit diverges."""


@dataclass(frozen=True)
class ResponseRecord:
    """One experimental observation: a stimulus string and a response value
    (rating, or 0/1 choice), with an optional group label."""

    string: str
    value: float
    group: str | None = None


@dataclass(frozen=True)
class TTestResult:
    t: float
    df: int
    p: float


@dataclass(frozen=True)
class RegressionFit:
    slope: float
    intercept: float
    odds_ratio: float  # exp(slope)
    threshold: float  # predictor value with fitted probability 0.5
    p_value_slope: float


def read_response_csv(path: str | Path) -> list[ResponseRecord]:
    """Load ``string,value[,group]`` rows; the header row is required."""
    from .distribution import DataError

    path = Path(path)
    with path.open(encoding="utf-8", newline="") as fh:
        reader = csv.reader(fh)
        try:
            header = next(reader)
        except StopIteration:
            raise DataError(f"{path}: empty response file") from None
        header = [h.strip().lower() for h in header]
        if header[:2] != ["string", "value"]:
            raise DataError(
                f"{path}: response files need a 'string,value[,group]' header"
            )
        records = []
        for lineno, row in enumerate(reader, start=2):
            if not row or (len(row) == 1 and not row[0].strip()):
                continue
            if len(row) < 2:
                raise DataError(f"{path}:{lineno}: expected string,value")
            try:
                value = float(row[1])
            except ValueError as exc:
                raise DataError(f"{path}:{lineno}: bad value {row[1]!r}") from exc
            group = row[2].strip() if len(row) > 2 and row[2].strip() else None
            records.append(ResponseRecord(row[0].strip(), value, group))
    if not records:
        raise DataError(f"{path}: no data rows")
    return records


# -- incomplete beta / distribution tails ------------------------------------


def _betacf(a: float, b: float, x: float) -> float:
    """Continued fraction for the incomplete beta (modified Lentz)."""
    tiny = 1e-300
    qab, qap, qam = a + b, a + 1.0, a - 1.0
    c = 1.0
    d = 1.0 - qab * x / qap
    if abs(d) < tiny:
        d = tiny
    d = 1.0 / d
    h = d
    for m in range(1, 300):
        m2 = 2 * m
        aa = m * (b - m) * x / ((qam + m2) * (a + m2))
        d = 1.0 + aa * d
        if abs(d) < tiny:
            d = tiny
        c = 1.0 + aa / c
        if abs(c) < tiny:
            c = tiny
        d = 1.0 / d
        h *= d * c
        aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2))
        d = 1.0 + aa * d
        if abs(d) < tiny:
            d = tiny
        c = 1.0 + aa / c
        if abs(c) < tiny:
            c = tiny
        d = 1.0 / d
        delta = d * c
        h *= delta
        if abs(delta - 1.0) < 1e-15:
            return h
    raise RuntimeError("incomplete beta continued fraction did not converge")


def betainc_reg(a: float, b: float, x: float) -> float:
    """Regularized incomplete beta I_x(a, b)."""
    if not 0.0 <= x <= 1.0:
        raise ValueError(f"x must be in [0, 1], got {x}")
    if x == 0.0 or x == 1.0:
        return x
    front = math.exp(
        math.lgamma(a + b)
        - math.lgamma(a)
        - math.lgamma(b)
        + a * math.log(x)
        + b * math.log1p(-x)
    )
    if x < (a + 1.0) / (a + b + 2.0):
        return front * _betacf(a, b, x) / a
    return 1.0 - front * _betacf(b, a, 1.0 - x) / b


def student_t_sf2(t: float, df: int) -> float:
    """Two-sided tail probability of Student's t."""
    if df < 1:
        raise ValueError("df must be >= 1")
    if math.isinf(t):
        return 0.0
    return betainc_reg(df / 2.0, 0.5, df / (df + t * t))


def normal_sf2(z: float) -> float:
    """Two-sided tail probability of the standard normal."""
    return math.erfc(abs(z) / math.sqrt(2.0))


# -- analyses -----------------------------------------------------------------


def pearson_r(x: Sequence[float], y: Sequence[float]) -> float:
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    if x.shape != y.shape or x.size < 3:
        raise ValueError("need two equal-length vectors of at least 3 values")
    dx = x - x.mean()
    dy = y - y.mean()
    denom = math.sqrt(float(dx @ dx) * float(dy @ dy))
    if denom == 0.0:
        raise ValueError("zero variance: correlation undefined")
    return float(dx @ dy) / denom


def correlation_matrix(
    strings: Sequence[str],
    measures: dict[str, Callable[[str], float]],
) -> tuple[list[str], np.ndarray]:
    """Pairwise Pearson correlations of the measures over the strings.

    Strings on which any measure is NaN are dropped listwise; at least 3
    complete rows must remain.
    """
    names = list(measures)
    if len(names) < 2:
        raise ValueError("need at least two measures")
    columns = np.array(
        [[measures[name](s) for name in names] for s in strings], dtype=float
    )
    complete = ~np.isnan(columns).any(axis=1)
    dropped = int((~complete).sum())
    if dropped:
        warnings.warn(
            f"dropped {dropped} of {len(strings)} strings with undefined values",
            stacklevel=2,
        )
    columns = columns[complete]
    if columns.shape[0] < 3:
        raise ValueError("fewer than 3 strings with all measures defined")
    k = len(names)
    matrix = np.eye(k)
    for i in range(k):
        for j in range(i + 1, k):
            matrix[i, j] = matrix[j, i] = pearson_r(columns[:, i], columns[:, j])
    return names, matrix


def one_sample_t(values: Sequence[float], mu0: float) -> TTestResult:
    """Two-sided one-sample t-test of mean(values) against ``mu0``."""
    x = np.asarray(values, dtype=float)
    if x.size < 2:
        raise ValueError("need at least 2 values")
    n = x.size
    mean = float(x.mean())
    sd = float(x.std(ddof=1))
    if sd == 0.0:
        # degenerate sample: all values identical
        t = 0.0 if mean == mu0 else math.copysign(math.inf, mean - mu0)
    else:
        t = (mean - mu0) / (sd / math.sqrt(n))
    return TTestResult(t, n - 1, student_t_sf2(t, n - 1))


def logistic_fit_with_cov(
    x: Sequence[float], y: Sequence[int]
) -> tuple[RegressionFit, np.ndarray]:
    """Maximum-likelihood logistic regression of a binary response on one
    predictor, by iteratively reweighted least squares.

    Converges when the log-likelihood moves by less than 1e-10 (at most 100
    iterations).  Raises :class:`PerfectSeparationError` when the predictor
    separates the classes and no finite fit exists.  Returns the fit together
    with the 2x2 covariance of (intercept, slope).
    """
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    if x.shape != y.shape:
        raise ValueError("x and y must have equal length")
    if not set(np.unique(y)) <= {0.0, 1.0}:
        raise ValueError("responses must be 0/1")
    if y.min() == y.max():
        raise ValueError("both response classes must be present")
    if max(x[y == 0]) < min(x[y == 1]) or max(x[y == 1]) < min(x[y == 0]):
        raise PerfectSeparationError(
            "predictor perfectly separates the classes; no finite estimate"
        )

    X = np.column_stack([np.ones_like(x), x])
    beta = np.zeros(2)
    last_ll = -math.inf
    for _ in range(100):
        eta = X @ beta
        p = 1.0 / (1.0 + np.exp(-eta))
        w = np.clip(p * (1.0 - p), 1e-12, None)
        z = eta + (y - p) / w
        xtw = X.T * w
        beta = np.linalg.solve(xtw @ X, xtw @ z)
        eta = X @ beta
        ll = float(y @ eta - np.logaddexp(0.0, eta).sum())
        if abs(ll - last_ll) < 1e-10:
            break
        last_ll = ll

    eta = X @ beta
    p = 1.0 / (1.0 + np.exp(-eta))
    w = p * (1.0 - p)
    cov = np.linalg.inv((X.T * w) @ X)
    intercept, slope = float(beta[0]), float(beta[1])
    se_slope = math.sqrt(float(cov[1, 1]))
    fit = RegressionFit(
        slope=slope,
        intercept=intercept,
        odds_ratio=math.exp(slope),
        threshold=-intercept / slope,
        p_value_slope=normal_sf2(slope / se_slope),
    )
    return fit, cov


def logistic_fit(x: Sequence[float], y: Sequence[int]) -> RegressionFit:
    """See :func:`logistic_fit_with_cov`; returns the fit alone."""
    return logistic_fit_with_cov(x, y)[0]


def logistic_curve(
    fit: RegressionFit,
    cov: np.ndarray,
    grid: Sequence[float],
    z: float = 1.959963984540054,
) -> dict[str, np.ndarray]:
    """Fitted probability curve with pointwise Wald confidence bands."""
    grid = np.asarray(grid, dtype=float)
    X = np.column_stack([np.ones_like(grid), grid])
    eta = fit.intercept + fit.slope * grid
    se_eta = np.sqrt(np.einsum("ij,jk,ik->i", X, cov, X))
    expit = lambda v: 1.0 / (1.0 + np.exp(-v))
    return {
        "x": grid,
        "y": expit(eta),
        "lower": expit(eta - z * se_eta),
        "upper": expit(eta + z * se_eta),
    }


def simple_r_squared(x: Sequence[float], y: Sequence[float]) -> float:
    """R^2 of the simple linear regression of y on x."""
    return pearson_r(x, y) ** 2


def span_scan(
    records: Sequence[ResponseRecord],
    table: TableView,
    spans: Sequence[int] = range(3, 12),
) -> dict[int, float]:
    """Per-span R^2 between mean local complexity and the mean rating.

    For each span, every stimulus is summarized by the mean complexity of its
    sliding windows; records whose windows are not all tabled are dropped
    (with a warning) for that span.
    """
    ratings = np.array([r.value for r in records], dtype=float)
    out: dict[int, float] = {}
    for span in spans:
        mlc = np.array(
            [float(np.mean(local_complexity(r.string, table, span=span))) for r in records]
        )
        keep = ~np.isnan(mlc)
        if (~keep).sum():
            warnings.warn(
                f"span {span}: dropped {int((~keep).sum())} records with "
                "untabled windows",
                stacklevel=2,
            )
        if keep.sum() < 3:
            raise ValueError(f"span {span}: fewer than 3 usable records")
        out[span] = simple_r_squared(mlc[keep], ratings[keep])
    return out
