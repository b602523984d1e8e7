"""Nonparametric analysis: medians/IQR, Friedman, Wilcoxon signed-rank, Bonferroni, effect size r."""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from . import _kernels


def midranks(values: Sequence[float]) -> np.ndarray:
    """1-based ranks with ties replaced by the mean of the ranks they span."""
    x = np.asarray(values, dtype=float)
    order = np.argsort(x, kind="mergesort")
    ranks = np.empty(len(x))
    sorted_x = x[order]
    i = 0
    while i < len(x):
        j = i
        while j + 1 < len(x) and sorted_x[j + 1] == sorted_x[i]:
            j += 1
        ranks[order[i:j + 1]] = (i + j) / 2.0 + 1.0
        i = j + 1
    return ranks


def _median_sorted(xs: np.ndarray) -> float:
    n = len(xs)
    mid = n // 2
    return float(xs[mid]) if n % 2 else float((xs[mid - 1] + xs[mid]) / 2.0)


def median_iqr(values: Sequence[float]) -> tuple[float, float]:
    """Median and interquartile range.

    Quartiles are the medians of the lower and upper halves, excluding the
    overall median when the count is odd (Tukey hinges, exclusive form).
    A single value has IQR 0.
    """
    xs = np.sort(np.asarray(values, dtype=float))
    if xs.size == 0:
        raise ValueError("median of an empty sample")
    med = _median_sorted(xs)
    half = xs.size // 2
    if half == 0:
        return med, 0.0
    q1 = _median_sorted(xs[:half])
    q3 = _median_sorted(xs[xs.size - half:])
    return med, q3 - q1


# -- chi-square tail ---------------------------------------------------------

_EPS = 1e-15
_TINY = 1e-300


def _gamma_p_series(a: float, x: float) -> float:
    term = 1.0 / a
    total = term
    ap = a
    for _ in range(10000):
        ap += 1.0
        term *= x / ap
        total += term
        if abs(term) < abs(total) * _EPS:
            break
    return total * math.exp(-x + a * math.log(x) - math.lgamma(a))


def _gamma_q_contfrac(a: float, x: float) -> float:
    # modified Lentz evaluation of the Legendre continued fraction
    b = x + 1.0 - a
    c = 1.0 / _TINY
    d = 1.0 / b
    h = d
    for i in range(1, 10000):
        an = -i * (i - a)
        b += 2.0
        d = an * d + b
        if abs(d) < _TINY:
            d = _TINY
        c = b + an / c
        if abs(c) < _TINY:
            c = _TINY
        d = 1.0 / d
        delta = d * c
        h *= delta
        if abs(delta - 1.0) < _EPS:
            break
    return math.exp(-x + a * math.log(x) - math.lgamma(a)) * h


def gamma_q(a: float, x: float) -> float:
    """Regularized upper incomplete gamma Q(a, x).

    Power series for x < a + 1, continued fraction otherwise.
    """
    if a <= 0:
        raise ValueError("shape must be positive")
    if x <= 0:
        return 1.0
    if x < a + 1.0:
        return max(0.0, 1.0 - _gamma_p_series(a, x))
    return min(1.0, _gamma_q_contfrac(a, x))


def chi2_sf(x: float, df: int) -> float:
    return gamma_q(df / 2.0, x / 2.0)


def normal_two_sided(z: float) -> float:
    return math.erfc(abs(z) / math.sqrt(2.0))


# -- Friedman ----------------------------------------------------------------

@dataclass(frozen=True)
class FriedmanResult:
    chi2: float
    df: int
    p: float
    n: int
    k: int

    def __str__(self) -> str:
        return f"χ²({self.df})={self.chi2:.2f}, {format_p(self.p)}, N={self.n}"


def _as_matrix(matrix) -> np.ndarray:
    m = np.asarray(matrix, dtype=float)
    if m.ndim != 2 or m.shape[0] < 2 or m.shape[1] < 2:
        raise ValueError("Friedman test needs at least 2 subjects x 2 conditions")
    return m


def friedman_statistic(ranks: np.ndarray) -> float:
    n, k = ranks.shape
    rank_sums = ranks.sum(axis=0)
    chi2 = 12.0 / (n * k * (k + 1)) * float(np.sum(rank_sums**2)) - 3.0 * n * (k + 1)
    # all-tied rows cancel exactly in theory; drop float residue
    return 0.0 if abs(chi2) < 1e-9 else chi2


def friedman(matrix) -> FriedmanResult:
    """Friedman omnibus test on an n-subjects x k-conditions matrix.

    Rows are mid-ranked within subject; no tie correction is applied to the
    statistic. The p-value is the chi-square(k-1) upper tail.
    """
    m = _as_matrix(matrix)
    n, k = m.shape
    ranks = np.vstack([midranks(row) for row in m])
    chi2 = friedman_statistic(ranks)
    return FriedmanResult(chi2=chi2, df=k - 1, p=chi2_sf(chi2, k - 1), n=n, k=k)


# Largest |chi-square p - exact p| over every tie-free rank configuration with
# k = 3, found by exhaustive enumeration (rounded up). Small n is far from the
# asymptotic regime, so treat chi-square p-values there as rough.
FRIEDMAN_K3_APPROX_GAP = {2: 0.277, 3: 0.228, 4: 0.181, 5: 0.143, 6: 0.134}


def friedman_exact_p(matrix) -> float:
    """Exact permutation p-value: every within-subject reordering is equally likely under H0.

    Enumerates (k!)**n rank arrangements, so keep n * log(k!) small.
    """
    m = _as_matrix(matrix)
    n, k = m.shape
    ranks = np.vstack([midranks(row) for row in m])
    perms = list(itertools.permutations(range(k)))
    perm_ranks = np.ascontiguousarray(ranks[:, perms])  # (n, k!, k)
    observed = float(np.sum(ranks.sum(axis=0) ** 2))
    hits, total = _kernels.friedman_tail(perm_ranks, observed)
    return hits / total


# -- Wilcoxon signed-rank ----------------------------------------------------

@dataclass(frozen=True)
class WilcoxonResult:
    w: float
    z: float
    p: float
    n_effective: int


def wilcoxon_signed_rank(x: Sequence[float], y: Sequence[float]) -> WilcoxonResult:
    """Paired signed-rank test on x - y.

    Zero differences are dropped, absolute differences mid-ranked, W is the
    sum of positive ranks. Normal approximation with tie-corrected variance
    and no continuity correction; two-sided p.
    """
    if len(x) != len(y):
        raise ValueError("paired samples must have equal length")
    if len(x) < 1:
        raise ValueError("need at least one pair")
    d = np.asarray(x, dtype=float) - np.asarray(y, dtype=float)
    d = d[d != 0]
    m = d.size
    if m == 0:
        raise ValueError("degenerate comparison: all differences are zero")
    r = midranks(np.abs(d))
    w = float(r[d > 0].sum())
    mu = m * (m + 1) / 4.0
    _, counts = np.unique(np.abs(d), return_counts=True)
    var = m * (m + 1) * (2 * m + 1) / 24.0 - float(np.sum(counts**3 - counts)) / 48.0
    z = (w - mu) / math.sqrt(var) if var > 0 else 0.0
    return WilcoxonResult(w=w, z=z, p=normal_two_sided(z), n_effective=m)


def bonferroni(p_values: Sequence[float], m: int | None = None) -> list[float]:
    if not p_values:
        raise ValueError("no p-values to adjust")
    m = len(p_values) if m is None else m
    if m < len(p_values):
        raise ValueError("family size smaller than number of p-values")
    for p in p_values:
        if not 0.0 <= p <= 1.0:
            raise ValueError(f"p-value {p} outside [0, 1]")
    return [min(1.0, p * m) for p in p_values]


@dataclass(frozen=True)
class EffectSize:
    r: float

    @property
    def magnitude(self) -> str:
        if self.r > 0.5:
            return "large"
        if self.r > 0.3:
            return "medium"
        if self.r > 0.1:
            return "small"
        return "negligible"


def effect_size_r(z: float, n_subjects: int) -> EffectSize:
    """r = |z| / sqrt(2N): N subjects contribute 2N paired observations."""
    if n_subjects < 1:
        raise ValueError("need at least one subject")
    return EffectSize(abs(z) / math.sqrt(2 * n_subjects))


def format_p(p: float) -> str:
    return "p<0.001" if p < 0.001 else f"p={p:.3f}"


# -- analysis report ---------------------------------------------------------

@dataclass(frozen=True)
class PostHoc:
    a: str
    b: str
    result: WilcoxonResult
    p_adjusted: float
    effect: EffectSize


def post_hoc(columns: dict[str, Sequence[float]]) -> list[PostHoc]:
    names = list(columns)
    pairs = list(itertools.combinations(names, 2))
    results = []
    for a, b in pairs:
        try:
            results.append(wilcoxon_signed_rank(columns[a], columns[b]))
        except ValueError:
            # identical columns: no evidence of a difference
            results.append(WilcoxonResult(w=0.0, z=0.0, p=1.0, n_effective=0))
    adjusted = bonferroni([r.p for r in results], len(pairs))
    n = len(next(iter(columns.values())))
    return [
        PostHoc(a, b, res, p_adj, effect_size_r(res.z, n))
        for (a, b), res, p_adj in zip(pairs, results, adjusted)
    ]


def report(measure: str, columns: dict[str, Sequence[float]]) -> str:
    """Per-condition median (IQR), the Friedman line and a Bonferroni post-hoc table."""
    lines = [f"[{measure}]"]
    for name, values in columns.items():
        med, iqr = median_iqr(values)
        lines.append(f"  {name}: {med:.1f} (IQR={iqr:.1f})")
    matrix = np.column_stack([np.asarray(v, dtype=float) for v in columns.values()])
    lines.append(f"  Friedman: {friedman(matrix)}")
    lines.append(f"  {'comparison':<40} {'test statistic':<22} {'p (Bonferroni)':<15} effect size")
    for ph in post_hoc(columns):
        label = f"{ph.a} vs {ph.b}"
        stat = f"W={ph.result.w:g}, Z={ph.result.z:.2f}"
        p = f"p={ph.p_adjusted:.3f}"
        lines.append(f"  {label:<40} {stat:<22} {p:<15} r={ph.effect.r:.2f}")
    return "\n".join(lines) + "\n"
