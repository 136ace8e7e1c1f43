"""Exponent fitting, ensemble averaging and distribution comparison."""

from __future__ import annotations

import math
from collections.abc import Sequence
from dataclasses import asdict, dataclass

import numpy as np

from .distribution import DegreeDistribution
from .errors import InsufficientData, InvalidComparison

DEFAULT_BAND = (1e-6, 1e-4)


@dataclass(frozen=True)
class FitResult:
    gamma: float
    intercept: float
    band: tuple[float, float]
    points_used: int
    residual: float
    regressor: str = "k"

    def as_dict(self) -> dict:
        return asdict(self)


@dataclass(frozen=True)
class ComparisonReport:
    max_abs_diff: float
    degree_at_max: int
    ks: float
    rms_log_ratio: float
    rms_points: int

    def as_dict(self) -> dict:
        return asdict(self)


def log_bin(P: DegreeDistribution, bins_per_decade: int = 10) -> tuple[np.ndarray, np.ndarray]:
    """Average P over logarithmic degree bins; returns (geometric bin centre, mean P)."""
    k = np.arange(1, len(P.p))
    if len(k) == 0:
        return k.astype(float), k.astype(float)
    n_bins = max(1, int(math.ceil(np.log10(k[-1] + 1) * bins_per_decade)))
    edges = np.unique(np.floor(np.logspace(0, np.log10(k[-1] + 1), n_bins + 1)).astype(int))
    centres, means = [], []
    for lo, hi in zip(edges[:-1], edges[1:]):
        vals = P.p[lo:hi]
        if len(vals) and np.any(vals > 0):
            centres.append(math.sqrt(lo * (hi - 1)) if hi - 1 > lo else float(lo))
            means.append(float(vals.mean()))
    return np.array(centres), np.array(means)


def fit_exponent(
    P: DegreeDistribution,
    band: tuple[float, float] = DEFAULT_BAND,
    log_binned: bool = False,
) -> FitResult:
    """Least-squares slope of log10 P(k) against log10 k over ``lo < P(k) < hi``.

    Degrees with P(k) = 0 and k = 0 never enter the fit.
    """
    lo, hi = band
    if log_binned:
        k, p = log_bin(P)
    else:
        k = np.arange(len(P.p), dtype=float)
        p = P.p
    sel = (k >= 1) & (p > lo) & (p < hi)
    if np.count_nonzero(sel) < 2:
        raise InsufficientData(f"only {np.count_nonzero(sel)} degrees with {lo} < P(k) < {hi}")
    x = np.log10(k[sel])
    y = np.log10(p[sel])
    slope, intercept = np.polyfit(x, y, 1)
    resid = y - (slope * x + intercept)
    return FitResult(
        gamma=float(-slope),
        intercept=float(intercept),
        band=(lo, hi),
        points_used=int(sel.sum()),
        residual=float(np.sqrt(np.mean(resid**2))),
    )


def average_runs(histograms: Sequence[DegreeDistribution]) -> DegreeDistribution:
    """Per-degree ensemble mean and standard error; absent degrees count as zero."""
    if not histograms:
        raise InsufficientData("no histograms to average")
    width = max(len(h.p) for h in histograms)
    stack = np.vstack([h.padded(width) for h in histograms])
    # fixed summation order, independent of how runs were scheduled
    mean = np.array([math.fsum(col) for col in stack.T]) / len(histograms)
    if len(histograms) > 1:
        se = stack.std(axis=0, ddof=1) / math.sqrt(len(histograms))
    else:
        se = np.zeros(width)
    meta = dict(histograms[0].meta)
    meta.pop("seed", None)
    meta.update(method="ensemble", runs=len(histograms))
    return DegreeDistribution(mean, meta, se)


def compare(
    A: DegreeDistribution, B: DegreeDistribution, band: tuple[float, float] = DEFAULT_BAND
) -> ComparisonReport:
    """Distance metrics between two degree distributions.

    The log-ratio RMS uses degrees where both lie inside ``band``; if there are
    none it falls back to all degrees where both are positive.
    """
    width = max(len(A.p), len(B.p))
    a, b = A.padded(width), B.padded(width)
    shared = (a > 0) & (b > 0)
    if not shared.any():
        raise InvalidComparison("distributions have disjoint support")
    diff = np.abs(a - b)
    k_star = int(np.argmax(diff))
    ks = float(np.max(np.abs(np.cumsum(a) - np.cumsum(b))))
    lo, hi = band
    sel = shared & (a > lo) & (a < hi) & (b > lo) & (b < hi)
    if not sel.any():
        sel = shared
    ratio = np.log10(a[sel] / b[sel])
    return ComparisonReport(
        max_abs_diff=float(diff[k_star]),
        degree_at_max=k_star,
        ks=ks,
        rms_log_ratio=float(np.sqrt(np.mean(ratio**2))),
        rms_points=int(sel.sum()),
    )


def within_standard_errors(
    reference: DegreeDistribution, ensemble: DegreeDistribution, k_max: int, n_se: float = 3.0
) -> tuple[bool, list[int]]:
    """Check ``|ref(k) - mean(k)| <= n_se * SE(k)`` for ``k <= k_max``; returns (ok, failing degrees)."""
    if ensemble.stderr is None:
        raise InvalidComparison("ensemble distribution carries no standard errors")
    width = max(len(reference.p), len(ensemble.p), k_max + 1)
    ref = reference.padded(width)
    mean = ensemble.padded(width)
    se = np.zeros(width)
    se[: len(ensemble.stderr)] = ensemble.stderr
    bad = [k for k in range(k_max + 1) if abs(ref[k] - mean[k]) > n_se * se[k]]
    return not bad, bad
