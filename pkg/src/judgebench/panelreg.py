"""Judgment-persistence panel regressions.

Builds own-lag and cross-release regression datasets from a judgment panel and
estimates pooled, entity fixed-effects, and entity-plus-time fixed-effects
specifications on the unbalanced panel, with standard errors clustered on
forecasters.  Two-way effects use entity demeaning plus explicit quarter
indicators, which is exact for unbalanced panels.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np
import scipy.stats

from .errors import EstimationError
from .judgment import JudgmentPanel
from .quarters import Quarter, ReleaseKind

SPECS = ("pooled", "fe", "fe_te")
REGRESSOR_KINDS = ("own_lag", "prior_release")
STAR_LEVELS = (0.10, 0.05, 0.01)


@dataclass(frozen=True, slots=True)
class PanelObservation:
    economist_id: str
    quarter: Quarter
    response: float
    regressor: float
    regressor_kind: str


def build_persistence_dataset(
    jp: JudgmentPanel, release: ReleaseKind, regressor_kind: str
) -> list[PanelObservation]:
    """Pair each judgment with its persistence regressor.

    own_lag: the same release's judgment in the immediately preceding quarter
    (gaps drop the observation, they never chain).  prior_release: the previous
    release's judgment in the same quarter; for the first release this becomes
    the third release's judgment of the preceding quarter.
    """
    if regressor_kind not in REGRESSOR_KINDS:
        raise ValueError(f"unknown regressor kind {regressor_kind!r}")
    out: list[PanelObservation] = []
    keys = sorted(
        (k for k in jp.entries if k[2] == release), key=lambda k: (k[0], k[1])
    )
    predecessors: dict[Quarter, Quarter] = {}
    for econ, quarter, _ in keys:
        response = jp.entries[(econ, quarter, release)].value
        pred = predecessors.get(quarter)
        if pred is None:
            pred = predecessors[quarter] = quarter.predecessor()
        if regressor_kind == "own_lag":
            source = jp.get(econ, pred, release)
            kind = "own_lag"
        elif release == ReleaseKind.FIRST:
            source = jp.get(econ, pred, ReleaseKind.THIRD)
            kind = "prior_release_lagged"
        else:
            source = jp.get(econ, quarter, ReleaseKind(release.value - 1))
            kind = "prior_release"
        if source is None:
            continue
        out.append(PanelObservation(econ, quarter, response, source.value, kind))
    return out


@dataclass(frozen=True)
class PanelFitResult:
    spec: str
    beta: float
    se_clustered: float
    n_obs: int
    n_forecasters: int
    r_squared: float          # within-R^2 for FE specs, ordinary R^2 for pooled
    r_squared_overall: float  # squared correlation of raw response and beta*x
    singletons_dropped: int = 0


def clustered_covariance(
    X: np.ndarray, residuals: np.ndarray, clusters: np.ndarray
) -> np.ndarray:
    """Cluster-robust sandwich with factor G/(G-1) * (N-1)/(N-K)."""
    X = np.atleast_2d(np.asarray(X, dtype=float))
    residuals = np.asarray(residuals, dtype=float)
    codes, inverse = np.unique(clusters, return_inverse=True)
    n_clusters = codes.size
    nobs, nparams = X.shape
    if n_clusters < 2:
        raise EstimationError("clustered covariance needs at least 2 clusters")
    scores = X * residuals[:, None]
    cluster_scores = np.zeros((n_clusters, nparams))
    np.add.at(cluster_scores, inverse, scores)
    meat = cluster_scores.T @ cluster_scores
    bread = np.linalg.inv(X.T @ X)
    factor = (n_clusters / (n_clusters - 1)) * ((nobs - 1) / (nobs - nparams))
    return factor * bread @ meat @ bread


def cluster_se(
    X: np.ndarray, residuals: np.ndarray, clusters: np.ndarray, column: int = 0
) -> float:
    """Clustered standard error of one coefficient."""
    cov = clustered_covariance(X, residuals, clusters)
    return math.sqrt(max(cov[column, column], 0.0))


def _demean_by(values: np.ndarray, inverse: np.ndarray, n_groups: int) -> np.ndarray:
    """Subtract group means; values may be 1-d or 2-d (rows are observations)."""
    counts = np.bincount(inverse, minlength=n_groups).astype(float)
    if values.ndim == 1:
        sums = np.bincount(inverse, weights=values, minlength=n_groups)
        return values - (sums / counts)[inverse]
    out = np.empty_like(values)
    for j in range(values.shape[1]):
        sums = np.bincount(inverse, weights=values[:, j], minlength=n_groups)
        out[:, j] = values[:, j] - (sums / counts)[inverse]
    return out


def _solve_ols(X: np.ndarray, y: np.ndarray, context: str) -> np.ndarray:
    coef, _, rank, _ = np.linalg.lstsq(X, y, rcond=None)
    if rank < X.shape[1]:
        raise EstimationError(f"{context}: design is rank deficient")
    return coef


def fe_estimate(data: Sequence[PanelObservation], spec: str) -> PanelFitResult:
    """Estimate the single-regressor persistence equation under one specification.

    pooled: OLS with intercept.  fe: within transformation by economist
    (singleton economists dropped).  fe_te: entity demeaning plus explicit
    quarter indicators.  Standard errors are clustered on economists.
    """
    if spec not in SPECS:
        raise ValueError(f"unknown spec {spec!r}")
    if not data:
        raise EstimationError("empty persistence dataset")
    econs = np.array([obs.economist_id for obs in data])
    y = np.array([obs.response for obs in data])
    x = np.array([obs.regressor for obs in data])
    quarters = np.array([obs.quarter.index for obs in data])

    singletons_dropped = 0
    if spec in ("fe", "fe_te"):
        codes, inverse = np.unique(econs, return_inverse=True)
        counts = np.bincount(inverse)
        keep = counts[inverse] >= 2
        singletons_dropped = int(codes.size - np.sum(counts >= 2))
        if not np.any(keep):
            raise EstimationError("no economist has 2 or more observations")
        econs, y, x, quarters = econs[keep], y[keep], x[keep], quarters[keep]

    codes, inverse = np.unique(econs, return_inverse=True)
    n_clusters = codes.size
    nobs = y.size
    if spec != "pooled" and n_clusters < 2:
        raise EstimationError("all observations come from a single economist")

    if spec == "pooled":
        X = np.column_stack([np.ones(nobs), x])
        beta_col = 1
        y_reg = y
    elif spec == "fe":
        y_reg = _demean_by(y, inverse, n_clusters)
        X = _demean_by(x, inverse, n_clusters)[:, None]
        beta_col = 0
    else:  # fe_te
        uq = np.unique(quarters)
        dummies = (quarters[:, None] == uq[None, 1:]).astype(float)  # drop first quarter
        X = np.column_stack([x, dummies])
        X = _demean_by(X, inverse, n_clusters)
        y_reg = _demean_by(y, inverse, n_clusters)
        beta_col = 0

    nparams = X.shape[1]
    if nobs - nparams < 1:
        raise EstimationError(
            f"not enough residual degrees of freedom: {nobs} obs, {nparams} parameters"
        )
    coef = _solve_ols(X, y_reg, spec)
    fitted = X @ coef
    residuals = y_reg - fitted

    if np.allclose(residuals, 0.0):
        se = 0.0
    else:
        se = cluster_se(X, residuals, inverse, column=beta_col)

    # R^2 convention: ordinary for pooled, within for FE specs.
    tss = float(np.sum((y_reg - y_reg.mean()) ** 2))
    rss = float(residuals @ residuals)
    if spec == "pooled":
        r_squared = 1.0 - rss / tss if tss > 0 else math.nan
    else:
        sd_f, sd_y = np.std(fitted), np.std(y_reg)
        r_squared = float(np.corrcoef(fitted, y_reg)[0, 1] ** 2) if sd_f > 0 and sd_y > 0 else math.nan

    beta = float(coef[beta_col])
    overall_fit = beta * x
    sd_o, sd_raw = np.std(overall_fit), np.std(y)
    r2_overall = float(np.corrcoef(overall_fit, y)[0, 1] ** 2) if sd_o > 0 and sd_raw > 0 else math.nan

    return PanelFitResult(
        spec=spec,
        beta=beta,
        se_clustered=se,
        n_obs=int(nobs),
        n_forecasters=int(n_clusters),
        r_squared=r_squared,
        r_squared_overall=r2_overall,
        singletons_dropped=singletons_dropped,
    )


def significance_stars(p_value: float, levels: Sequence[float] = STAR_LEVELS) -> str:
    stars = ""
    for level in sorted(levels, reverse=True):
        if p_value < level:
            stars += "*"
    return stars


@dataclass(frozen=True)
class PersistenceCell:
    release: ReleaseKind
    regressor_kind: str
    spec: str
    result: PanelFitResult | None
    p_value: float | None
    stars: str
    error: str | None = None


@dataclass
class PersistenceReport:
    cells: list[PersistenceCell] = field(default_factory=list)
    broken_chains: dict[tuple[ReleaseKind, str], int] = field(default_factory=dict)

    def for_release(self, release: ReleaseKind) -> list[PersistenceCell]:
        return [c for c in self.cells if c.release == release]


def persistence_battery(jp: JudgmentPanel) -> PersistenceReport:
    """Six estimation cells per release: {own-lag, cross-release} x {pooled, FE, FE+TE}.

    Per-cell failures are reported inline; the battery always completes.
    Significance is two-sided from a t distribution with G-1 degrees of
    freedom, G the number of forecasters.
    """
    report = PersistenceReport()
    for release in (ReleaseKind.FIRST, ReleaseKind.SECOND, ReleaseKind.THIRD):
        n_responses = sum(1 for k in jp.entries if k[2] == release)
        for kind in REGRESSOR_KINDS:
            data = build_persistence_dataset(jp, release, kind)
            report.broken_chains[(release, kind)] = n_responses - len(data)
            for spec in SPECS:
                try:
                    result = fe_estimate(data, spec)
                except EstimationError as exc:
                    report.cells.append(
                        PersistenceCell(release, kind, spec, None, None, "", str(exc))
                    )
                    continue
                if result.se_clustered > 0:
                    t_stat = result.beta / result.se_clustered
                    p = 2.0 * float(
                        scipy.stats.t.sf(abs(t_stat), df=result.n_forecasters - 1)
                    )
                else:
                    p = 0.0 if result.beta != 0 else 1.0
                report.cells.append(
                    PersistenceCell(release, kind, spec, result, p, significance_stars(p))
                )
    return report
