"""Common baseline construction and judgment extraction.

The baseline is the per-quarter cross-sectional median (or mean) of the
reported forecasts; a forecaster's judgment is the deviation of their forecast
from it.  Judgments are "neutral" when forecast and baseline coincide once
both are rounded to the reporting grid (default 0.1 percentage points).
"""
from __future__ import annotations

import math
import statistics
import warnings
from dataclasses import dataclass
from typing import Mapping, Sequence

import numpy as np

from .panel import ActualSeries, ForecastPanel, participation_share
from .quarters import Quarter, ReleaseKind

DEFAULT_GRID = 0.1
DEFAULT_THRESHOLDS = (0.10, 0.25, 0.50)
HISTOGRAM_BINS = ("<=20%", "20-40%", "40-60%", "60-80%", ">80%")


def grid_round(value: float, grid: float) -> float:
    """Round to the nearest multiple of the reporting grid (no-op for grid 0)."""
    if grid <= 0:
        return value
    return round(value / grid) * grid


def passes_threshold(share: float, threshold: float) -> bool:
    """Participation rule: strictly above for the 10% cut, at-least otherwise."""
    if abs(threshold - 0.10) < 1e-12:
        return share > threshold
    return share >= threshold - 1e-12


@dataclass(frozen=True)
class BaselineSeries:
    release: ReleaseKind
    method: str  # "median" or "mean"
    values: Mapping[Quarter, float]

    def __post_init__(self):
        object.__setattr__(self, "values", dict(self.values))

    def quarters(self) -> list[Quarter]:
        return sorted(self.values)


@dataclass(frozen=True, slots=True)
class JudgmentEntry:
    value: float
    neutral: bool


@dataclass
class JudgmentPanel:
    """Judgments keyed by (economist, quarter, release)."""

    entries: dict[tuple[str, Quarter, ReleaseKind], JudgmentEntry]
    grid: float = DEFAULT_GRID

    def releases(self) -> list[ReleaseKind]:
        return sorted({k[2] for k in self.entries})

    def economists(self, release: ReleaseKind | None = None) -> list[str]:
        return sorted({k[0] for k in self.entries if release is None or k[2] == release})

    def series_for(self, economist_id: str, release: ReleaseKind) -> dict[Quarter, JudgmentEntry]:
        return {
            q: entry
            for (econ, q, rel), entry in self.entries.items()
            if econ == economist_id and rel == release
        }

    def get(self, economist_id: str, quarter: Quarter, release: ReleaseKind) -> JudgmentEntry | None:
        return self.entries.get((economist_id, quarter, release))


def baseline(panel: ForecastPanel, release: ReleaseKind, method: str = "median") -> BaselineSeries:
    """Per-quarter median or mean of all forecasts (the forecaster's own included)."""
    if method not in ("median", "mean"):
        raise ValueError(f"unknown baseline method {method!r}")
    values: dict[Quarter, float] = {}
    for quarter in panel.quarters(release):
        xs = panel.values_for_quarter(quarter, release)
        if not xs:
            continue
        values[quarter] = statistics.median(xs) if method == "median" else statistics.fmean(xs)
    return BaselineSeries(release=release, method=method, values=values)


def extract_judgments(
    panel: ForecastPanel, base: BaselineSeries, grid: float = DEFAULT_GRID
) -> JudgmentPanel:
    """Judgment = forecast - baseline for every record of the baseline's release."""
    entries: dict[tuple[str, Quarter, ReleaseKind], JudgmentEntry] = {}
    rounded_base = {q: grid_round(v, grid) for q, v in base.values.items()}
    for rec in panel.records_for_release(base.release):
        if rec.quarter not in base.values:
            raise ValueError(f"baseline does not cover {rec.quarter}")
        b = base.values[rec.quarter]
        value = rec.value
        neutral = grid_round(value, grid) == rounded_base[rec.quarter]
        entries[(rec.economist_id, rec.quarter, rec.release)] = JudgmentEntry(value - b, neutral)
    return JudgmentPanel(entries=entries, grid=grid)


def _default_sample(panel: ForecastPanel, release: ReleaseKind) -> tuple[Quarter, Quarter]:
    quarters = panel.quarters(release)
    if not quarters:
        raise ValueError(f"panel has no forecasts for release {release.value}")
    return quarters[0], quarters[-1]


def economist_sign_shares(
    jp: JudgmentPanel, economist_id: str, release: ReleaseKind
) -> tuple[float, float, float] | None:
    """This economist's (negative, positive, neutral) judgment shares."""
    series = jp.series_for(economist_id, release)
    if not series:
        return None
    n = len(series)
    neu = sum(1 for e in series.values() if e.neutral)
    neg = sum(1 for e in series.values() if not e.neutral and e.value < 0)
    pos = n - neu - neg
    return neg / n, pos / n, neu / n


@dataclass(frozen=True)
class SignShareStats:
    threshold: float
    n_economists: int
    mean_negative: float
    sd_negative: float
    mean_positive: float
    sd_positive: float
    mean_neutral: float
    sd_neutral: float


def sign_shares(
    jp: JudgmentPanel,
    panel: ForecastPanel,
    release: ReleaseKind,
    thresholds: Sequence[float] = DEFAULT_THRESHOLDS,
    sample: tuple[Quarter, Quarter] | None = None,
) -> dict[float, SignShareStats]:
    """Cross-economist mean and population sd of sign shares per threshold."""
    if sample is None:
        sample = _default_sample(panel, release)
    out: dict[float, SignShareStats] = {}
    for threshold in thresholds:
        rows = []
        for econ in jp.economists(release):
            share = participation_share(panel, econ, release, sample)
            if not passes_threshold(share, threshold):
                continue
            shares = economist_sign_shares(jp, econ, release)
            if shares is not None:
                rows.append(shares)
        if not rows:
            warnings.warn(f"no economist passes threshold {threshold} for release {release.value}")
            out[threshold] = SignShareStats(threshold, 0, *(math.nan,) * 6)
            continue
        arr = np.asarray(rows)
        means = arr.mean(axis=0)
        sds = arr.std(axis=0)  # population sd across economists
        out[threshold] = SignShareStats(
            threshold, len(rows), means[0], sds[0], means[1], sds[1], means[2], sds[2]
        )
    return out


def negative_share_histogram(
    jp: JudgmentPanel,
    panel: ForecastPanel,
    release: ReleaseKind,
    threshold: float,
    sample: tuple[Quarter, Quarter] | None = None,
) -> dict[str, int]:
    """Bin qualifying economists by the negative share of their non-neutral judgments.

    Economists with only neutral judgments are excluded from every bin.
    """
    if sample is None:
        sample = _default_sample(panel, release)
    counts = {label: 0 for label in HISTOGRAM_BINS}
    for econ in jp.economists(release):
        share = participation_share(panel, econ, release, sample)
        if not passes_threshold(share, threshold):
            continue
        series = jp.series_for(econ, release)
        non_neutral = [e for e in series.values() if not e.neutral]
        if not non_neutral:
            continue
        frac = sum(1 for e in non_neutral if e.value < 0) / len(non_neutral)
        if frac <= 0.2:
            label = "<=20%"
        elif frac <= 0.4:
            label = "20-40%"
        elif frac <= 0.6:
            label = "40-60%"
        elif frac <= 0.8:
            label = "60-80%"
        else:
            label = ">80%"
        counts[label] += 1
    return counts


@dataclass(frozen=True)
class BaselineHitStats:
    correct: float
    overprediction: float
    underprediction: float


def baseline_hit_stats(
    base: BaselineSeries, actuals: ActualSeries, grid: float = DEFAULT_GRID
) -> BaselineHitStats:
    """Shares of overlapping quarters where the baseline equals / exceeds / trails the actual.

    Equality is judged on the reporting grid.
    """
    overlap = [q for q in base.values if q in actuals.values]
    if not overlap:
        raise ValueError("baseline and actuals share no quarters")
    correct = over = under = 0
    for q in overlap:
        b = grid_round(base.values[q], grid)
        y = grid_round(actuals.values[q], grid)
        if math.isclose(b, y, abs_tol=(grid or 1e-12) / 4):
            correct += 1
        elif b > y:
            over += 1
        else:
            under += 1
    n = len(overlap)
    return BaselineHitStats(correct / n, over / n, under / n)
