"""Baseline-relative accuracy comparisons.

Paired RMSEs on common quarters, the Diebold-Mariano equal-accuracy statistic
with squared-error loss, the Harvey-Leybourne-Newbold small-sample correction,
and beat-the-baseline shares per participation threshold.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Mapping, Sequence

import numpy as np
import scipy.stats

from .errors import EstimationError
from .judgment import BaselineSeries, passes_threshold
from .panel import ActualSeries, ForecastPanel, participation_share
from .quarters import Quarter, ReleaseKind


@dataclass(frozen=True)
class AccuracyComparison:
    economist_id: str
    release: ReleaseKind
    n_common: int
    rmse_self: float
    rmse_baseline: float
    dm_statistic: float | None
    hln_statistic: float | None
    p_value_hln: float | None
    note: str = ""


def paired_rmse(
    forecasts: Mapping[Quarter, float],
    baseline_values: Mapping[Quarter, float],
    actuals: ActualSeries,
) -> tuple[float, float, int]:
    """RMSEs of forecaster and baseline over exactly their common quarters."""
    common = sorted(q for q in forecasts if q in baseline_values and q in actuals.values)
    if not common:
        raise EstimationError("no common quarters for accuracy comparison")
    e_self = np.array([forecasts[q] - actuals.values[q] for q in common])
    e_base = np.array([baseline_values[q] - actuals.values[q] for q in common])
    rmse_self = math.sqrt(float(np.mean(e_self**2)))
    rmse_base = math.sqrt(float(np.mean(e_base**2)))
    return rmse_self, rmse_base, len(common)


def dm_test(d: Sequence[float], h: int = 1) -> float:
    """Diebold-Mariano statistic for a loss-differential series.

    Long-run variance uses population (1/T) autocovariances up to lag h-1;
    for one-step comparisons this is the lag-0 autocovariance.
    """
    d = np.asarray(d, dtype=float)
    nobs = d.size
    if nobs < 2:
        raise EstimationError(f"need at least 2 loss differentials, got {nobs}")
    if h < 1 or h > nobs:
        raise EstimationError(f"invalid horizon {h} for {nobs} observations")
    d_bar = d.mean()
    centered = d - d_bar
    variance = float(np.mean(centered**2))
    for lag in range(1, h):
        variance += 2.0 * float(np.mean(centered[lag:] * centered[:-lag]) * (nobs - lag) / nobs)
    if variance <= 0.0:
        raise EstimationError("degenerate comparison: loss differential has zero variance")
    return float(d_bar / math.sqrt(variance / nobs))


def hln_correction(dm: float, nobs: int, h: int = 1) -> tuple[float, float]:
    """Harvey-Leybourne-Newbold corrected statistic and two-sided t(T-1) p-value."""
    if nobs <= h:
        raise EstimationError(f"need T > h, got T={nobs}, h={h}")
    factor = math.sqrt((nobs + 1 - 2 * h + h * (h - 1) / nobs) / nobs)
    statistic = dm * factor
    p_value = 2.0 * float(scipy.stats.t.sf(abs(statistic), df=nobs - 1))
    return statistic, p_value


def compare_forecaster(
    economist_id: str,
    forecasts: Mapping[Quarter, float],
    base: BaselineSeries,
    actuals: ActualSeries,
    h: int = 1,
) -> AccuracyComparison:
    """Full accuracy comparison of one forecaster against the baseline."""
    rmse_self, rmse_base, n_common = paired_rmse(forecasts, base.values, actuals)
    common = sorted(q for q in forecasts if q in base.values and q in actuals.values)
    e_self = np.array([forecasts[q] - actuals.values[q] for q in common])
    e_base = np.array([base.values[q] - actuals.values[q] for q in common])
    d = e_self**2 - e_base**2
    dm = hln = p = None
    note = ""
    try:
        dm = dm_test(d, h=h)
        hln, p = hln_correction(dm, n_common, h=h)
    except EstimationError as exc:
        note = str(exc)
    return AccuracyComparison(
        economist_id, base.release, n_common, rmse_self, rmse_base, dm, hln, p, note
    )


def accuracy_table(
    panel: ForecastPanel,
    base: BaselineSeries,
    actuals: ActualSeries,
    h: int = 1,
) -> list[AccuracyComparison]:
    """Per-economist accuracy comparisons, in economist-id order."""
    out = []
    for econ in panel.economists(base.release):
        series = panel.series_for(econ, base.release)
        try:
            out.append(compare_forecaster(econ, series, base, actuals, h=h))
        except EstimationError:
            continue  # no overlap with the actuals at all
    return out


def beat_baseline_share(
    panel: ForecastPanel,
    base: BaselineSeries,
    actuals: ActualSeries,
    thresholds: Sequence[float] = (0.10, 0.25, 0.50),
    sample: tuple[Quarter, Quarter] | None = None,
) -> dict[float, float | None]:
    """Share of qualifying forecasters with strictly lower RMSE than the baseline.

    Ties count as not beating.  None when no forecaster qualifies.
    """
    release = base.release
    quarters = panel.quarters(release)
    if sample is None:
        if not quarters:
            return {thr: None for thr in thresholds}
        sample = (quarters[0], quarters[-1])
    comparisons = {c.economist_id: c for c in accuracy_table(panel, base, actuals)}
    out: dict[float, float | None] = {}
    for threshold in thresholds:
        qualifying = [
            c
            for econ, c in comparisons.items()
            if passes_threshold(participation_share(panel, econ, release, sample), threshold)
        ]
        if not qualifying:
            out[threshold] = None
            continue
        beating = sum(1 for c in qualifying if c.rmse_self < c.rmse_baseline)
        out[threshold] = beating / len(qualifying)
    return out
