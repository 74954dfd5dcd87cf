"""Command-line entry point wiring ingestion, analyses and report emission.

Every command is deterministic given its inputs and seed; ``report`` runs the
full pipeline and writes the eight table-shaped CSVs plus a manifest with the
effective configuration and its hash.
"""
from __future__ import annotations

import argparse
import csv
import hashlib
import json
import math
import os
import sys
from dataclasses import asdict, dataclass, field, fields, replace
from pathlib import Path

from . import __version__
from .accuracy import accuracy_table, beat_baseline_share
from .armodel import ARSpec, fill_missing, recursive_ar_forecast, select_lag
from .descriptive import armse, quarter_stats
from .errors import EstimationError, JudgebenchError
from .judgment import (
    DEFAULT_GRID,
    DEFAULT_THRESHOLDS,
    baseline,
    baseline_hit_stats,
    extract_judgments,
    negative_share_histogram,
    sign_shares,
)
from .linreg import newey_west_auto_lag, test_battery_aggregate, test_battery_individual
from .panel import (
    ForecastPanel,
    clean_panel,
    joint_coverage,
    load_actuals,
    load_forecasts,
    load_spf,
    participation_share,
)
from .panelreg import REGRESSOR_KINDS, SPECS, persistence_battery
from .quarters import Quarter, ReleaseKind, parse_quarter
from .syngen import SynthConfig, recovery_experiment, simulate_world

RELEASES = (ReleaseKind.FIRST, ReleaseKind.SECOND, ReleaseKind.THIRD)
RELEASE_LABEL = {ReleaseKind.FIRST: "first", ReleaseKind.SECOND: "second", ReleaseKind.THIRD: "third"}


@dataclass
class RunConfig:
    """Effective run configuration; flags override config-file values."""

    actuals: str | None = None
    forecasts: str | None = None
    spf: str | None = None
    sample_from: str | None = None
    sample_to: str | None = None
    baseline_method: str = "median"
    grid: float = DEFAULT_GRID
    thresholds: tuple[float, ...] = DEFAULT_THRESHOLDS
    alpha: float = 0.05
    hac_lag: str = "auto"  # "auto" or an integer literal
    ar_lag: str = "1"      # "auto" or an integer literal
    out: str = "out"
    seed: int = 12345
    replications: int = 100
    # Synthetic-world knobs (simulate / recovery).
    n_forecasters: int = 50
    n_quarters: int = 92
    rho_own: float = 0.1
    rho_own_sd: float = 0.0
    kappa: float = 0.0
    judgment_sd: float = 0.2
    p_neutral: float = 0.0
    participation_low: float = 1.0
    participation_high: float = 1.0

    def semantic_dict(self) -> dict:
        """Fields that affect results (output location excluded)."""
        data = asdict(self)
        data.pop("out")
        data["thresholds"] = list(self.thresholds)
        return data

    def config_hash(self) -> str:
        blob = json.dumps(self.semantic_dict(), sort_keys=True).encode()
        return hashlib.sha256(blob).hexdigest()

    def hac_lag_for(self, nobs: int) -> int:
        return newey_west_auto_lag(nobs) if self.hac_lag == "auto" else int(self.hac_lag)

    def synth_config(self) -> SynthConfig:
        return SynthConfig(
            n_forecasters=self.n_forecasters,
            n_quarters=self.n_quarters,
            seed=self.seed,
            rho_own=self.rho_own,
            rho_own_sd=self.rho_own_sd,
            kappa=self.kappa,
            judgment_sd=self.judgment_sd,
            p_neutral=self.p_neutral,
            participation_low=self.participation_low,
            participation_high=self.participation_high,
            grid=self.grid,
        )


class CliError(Exception):
    def __init__(self, message: str, exit_code: int = 2):
        super().__init__(message)
        self.exit_code = exit_code


def _fmt(value) -> str:
    if value is None:
        return ""
    if isinstance(value, float):
        if math.isnan(value):
            return ""
        return f"{value:.12g}"
    if isinstance(value, bool):
        return "1" if value else "0"
    return str(value)


def write_csv(path: Path, header: list[str], rows: list[list], comment: str | None = None) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", encoding="utf-8", newline="") as fh:
        if comment:
            fh.write(f"# {comment}\n")
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(header)
        for row in rows:
            writer.writerow([_fmt(cell) for cell in row])


def _workers() -> int:
    raw = os.environ.get("JUDGEBENCH_THREADS", "1")
    try:
        return max(int(raw), 1)
    except ValueError:
        return 1


def _require_input(path: str | None, what: str) -> Path:
    if path is None:
        raise CliError(f"error: missing-argument name=--{what}")
    p = Path(path)
    if not p.exists():
        raise CliError(f"error: missing-input path={p}")
    return p


def _restrict_panel(panel: ForecastPanel, cfg: RunConfig) -> ForecastPanel:
    if cfg.sample_from is None and cfg.sample_to is None:
        return panel
    lo = parse_quarter(cfg.sample_from) if cfg.sample_from else None
    hi = parse_quarter(cfg.sample_to) if cfg.sample_to else None
    return ForecastPanel(
        r
        for r in panel.records
        if (lo is None or lo <= r.quarter) and (hi is None or r.quarter <= hi)
    )


def _load_panel(cfg: RunConfig) -> tuple[ForecastPanel, list[list]]:
    path = _require_input(cfg.forecasts, "forecasts")
    raw = load_forecasts(path)
    cleaned, log = clean_panel(raw)
    cleaned = _restrict_panel(cleaned, cfg)
    log_rows = [
        [e.action.value, e.record.economist_id, e.record.firm_id, str(e.record.quarter),
         e.record.release.value, e.record.value]
        for e in log.entries
    ]
    return cleaned, log_rows


def _load_actuals(cfg: RunConfig) -> dict[ReleaseKind, "ActualSeries"]:
    path = _require_input(cfg.actuals, "actuals")
    return {rel: load_actuals(path, rel) for rel in RELEASES}


def _ar_forecasts(cfg: RunConfig, actuals) -> dict[ReleaseKind, dict[Quarter, float]]:
    """Recursive AR forecasts for every quarter with enough presample."""
    out = {}
    for rel, series in actuals.items():
        series = fill_missing(series)
        if cfg.ar_lag == "auto":
            spec = ARSpec(p=1, reselect=True)
            min_p = 0
        else:
            spec = ARSpec(p=int(cfg.ar_lag))
            min_p = spec.p
        first_target = series.first.shifted(min_p + 10)
        targets = [q for q in series.quarters() if q >= first_target]
        out[rel] = recursive_ar_forecast(series, targets, spec) if targets else {}
    return out


# ---------------------------------------------------------------------------
# Command implementations.  Each returns the list of files written.
# ---------------------------------------------------------------------------


def cmd_describe(cfg: RunConfig, out: Path) -> list[Path]:
    panel, _ = _load_panel(cfg)
    actuals = _load_actuals(cfg)
    stat_rows = []
    table1_rows = []
    import warnings

    for rel in RELEASES:
        with warnings.catch_warnings():
            warnings.simplefilter("ignore")
            stats = quarter_stats(panel, actuals[rel], rel)
        for s in stats:
            stat_rows.append(
                [RELEASE_LABEL[rel], str(s.quarter), s.n, s.rmse, s.std_dev, s.skewness, s.excess_kurtosis]
            )
        if not stats:
            continue
        ns = [s.n for s in stats]
        rmses = [s.rmse for s in stats]
        stds = [s.std_dev for s in stats]
        skews = [s.skewness for s in stats if s.skewness is not None]
        kurts = [s.excess_kurtosis for s in stats if s.excess_kurtosis is not None]

        def agg(xs):
            if not xs:
                return (None, None, None)
            return (sum(xs) / len(xs), min(xs), max(xs))

        table1_rows.append(
            [RELEASE_LABEL[rel], *agg(ns), armse(stats), min(rmses), max(rmses),
             *agg(stds), *agg(skews), *agg(kurts)]
        )
    files = []
    p = out / "quarter_stats.csv"
    write_csv(p, ["release", "quarter", "n", "rmse", "std_dev", "skewness", "excess_kurtosis"], stat_rows,
              comment="per-quarter cross-sectional statistics (kurtosis is excess: normal = 0)")
    files.append(p)
    p = out / "table1_descriptive.csv"
    write_csv(
        p,
        ["release", "avg_n", "min_n", "max_n", "armse", "min_rmse", "max_rmse",
         "avg_std", "min_std", "max_std", "avg_skew", "min_skew", "max_skew",
         "avg_excess_kurt", "min_excess_kurt", "max_excess_kurt"],
        table1_rows,
        comment="table 1: descriptive statistics by release (averages with min/max across quarters)",
    )
    files.append(p)
    return files


def cmd_table2(cfg: RunConfig, out: Path, panel: ForecastPanel | None = None) -> list[Path]:
    if panel is None:
        panel, _ = _load_panel(cfg)
    rows = []
    for rel in RELEASES:
        records = panel.records_for_release(rel)
        econs = panel.economists(rel)
        quarters = panel.quarters(rel)
        counts = {thr: 0 for thr in cfg.thresholds}
        if quarters:
            sample = (quarters[0], quarters[-1])
            for econ in econs:
                share = participation_share(panel, econ, rel, sample)
                for thr in cfg.thresholds:
                    from .judgment import passes_threshold

                    if passes_threshold(share, thr):
                        counts[thr] += 1
        rows.append(["total_predictions", RELEASE_LABEL[rel], len(records)])
        rows.append(["n_economists", RELEASE_LABEL[rel], len(econs)])
        for thr in cfg.thresholds:
            rows.append([f"n_economists_ge_{int(round(thr * 100))}pct", RELEASE_LABEL[rel], counts[thr]])
    cov = joint_coverage(panel)
    rows.append(["joint_cells_releases_1_2", "", cov.pair_12])
    rows.append(["joint_cells_releases_1_3", "", cov.pair_13])
    rows.append(["joint_cells_releases_2_3", "", cov.pair_23])
    rows.append(["joint_cells_releases_1_2_3", "", cov.all_three])
    p = out / "table2_participation.csv"
    write_csv(p, ["metric", "release", "value"], rows,
              comment="table 2: participation and joint-coverage counts "
                      "(joint counts are economist-quarter cells)")
    return [p]


def cmd_judgment(cfg: RunConfig, out: Path) -> list[Path]:
    panel, _ = _load_panel(cfg)
    actuals = _load_actuals(cfg)
    files = []
    baseline_rows, judgment_rows, table3_rows, hist_rows, hit_rows = [], [], [], [], []
    for rel in RELEASES:
        base = baseline(panel, rel, cfg.baseline_method)
        for q in base.quarters():
            baseline_rows.append([RELEASE_LABEL[rel], str(q), base.values[q]])
        jp = extract_judgments(panel, base, grid=cfg.grid)
        for (econ, q, _), entry in sorted(jp.entries.items()):
            judgment_rows.append([econ, str(q), RELEASE_LABEL[rel], entry.value, entry.neutral])
        shares = sign_shares(jp, panel, rel, cfg.thresholds)
        for thr in cfg.thresholds:
            s = shares[thr]
            table3_rows.append(
                [RELEASE_LABEL[rel], thr, s.n_economists, s.mean_negative, s.sd_negative,
                 s.mean_positive, s.sd_positive, s.mean_neutral, s.sd_neutral]
            )
            hist = negative_share_histogram(jp, panel, rel, thr)
            for label, count in hist.items():
                hist_rows.append([RELEASE_LABEL[rel], thr, label, count])
        try:
            hits = baseline_hit_stats(base, actuals[rel], grid=cfg.grid)
            hit_rows.append([RELEASE_LABEL[rel], hits.correct, hits.overprediction, hits.underprediction])
        except ValueError:
            hit_rows.append([RELEASE_LABEL[rel], None, None, None])
    p = out / f"baseline_{cfg.baseline_method}.csv"
    write_csv(p, ["release", "quarter", "value"], baseline_rows)
    files.append(p)
    p = out / "judgments.csv"
    write_csv(p, ["economist_id", "quarter", "release", "judgment", "neutral"], judgment_rows)
    files.append(p)
    p = out / "table3_sign_shares.csv"
    write_csv(p, ["release", "threshold", "n_economists", "mean_negative", "sd_negative",
                  "mean_positive", "sd_positive", "mean_neutral", "sd_neutral"], table3_rows,
              comment="table 3: cross-economist sign shares of judgments by participation threshold")
    files.append(p)
    p = out / "fig3_negative_histogram.csv"
    write_csv(p, ["release", "threshold", "bin", "count"], hist_rows,
              comment="negative-judgment share histogram (non-neutral judgments only)")
    files.append(p)
    p = out / "baseline_hits.csv"
    write_csv(p, ["release", "correct", "overprediction", "underprediction"], hit_rows,
              comment="baseline vs actual on the reporting grid")
    files.append(p)
    return files


def cmd_efficiency(cfg: RunConfig, out: Path) -> list[Path]:
    panel, _ = _load_panel(cfg)
    actuals = _load_actuals(cfg)
    spf = load_spf(_require_input(cfg.spf, "spf"))
    ar = _ar_forecasts(cfg, actuals)
    hac_lag = None if cfg.hac_lag == "auto" else int(cfg.hac_lag)
    report = test_battery_aggregate(panel, actuals, spf, ar, hac_lag=hac_lag)
    table4_rows = []
    for (rel, method), cell in sorted(report.items()):
        table4_rows.append(
            [RELEASE_LABEL[rel], method, cell.unbiasedness_p, cell.efficiency_p, cell.rmse,
             "; ".join(cell.errors)]
        )
    battery = test_battery_individual(
        panel, actuals, spf, ar, thresholds=cfg.thresholds, alpha=cfg.alpha, hac_lag=hac_lag
    )
    table5_rows = [
        [RELEASE_LABEL[row.release], row.threshold, row.n_qualifying,
         row.share_unbiased, row.share_efficient,
         row.n_tested_unbiased, row.n_tested_efficient,
         row.n_excluded_unbiased, row.n_excluded_efficient]
        for row in battery.shares
    ]
    detail_rows = [
        [d.economist_id, RELEASE_LABEL[d.release], d.nobs, d.alpha_hat, d.beta_hat,
         d.p_unbiased, d.p_efficient, d.note]
        for d in battery.details
    ]
    files = []
    p = out / "table4_aggregate_tests.csv"
    write_csv(p, ["release", "method", "unbiasedness_p", "efficiency_p", "rmse", "errors"], table4_rows,
              comment="table 4: baseline unbiasedness/efficiency p-values (HAC) and RMSE")
    files.append(p)
    p = out / "table5_individual_tests.csv"
    write_csv(p, ["release", "threshold", "n_qualifying", "share_unbiased", "share_efficient",
                  "n_tested_unbiased", "n_tested_efficient",
                  "n_excluded_unbiased", "n_excluded_efficient"], table5_rows,
              comment=f"table 5: share of forecasters not rejected at the {cfg.alpha:g} level")
    files.append(p)
    p = out / "individual_detail.csv"
    write_csv(p, ["economist_id", "release", "n_obs", "alpha_hat", "beta_hat",
                  "p_unbiased", "p_efficient", "note"], detail_rows)
    files.append(p)
    return files


def cmd_accuracy(cfg: RunConfig, out: Path) -> list[Path]:
    panel, _ = _load_panel(cfg)
    actuals = _load_actuals(cfg)
    comp_rows, beat_rows = [], []
    for rel in RELEASES:
        base = baseline(panel, rel, cfg.baseline_method)
        for c in accuracy_table(panel, base, actuals[rel]):
            comp_rows.append(
                [c.economist_id, RELEASE_LABEL[rel], c.n_common, c.rmse_self, c.rmse_baseline,
                 c.dm_statistic, c.hln_statistic, c.p_value_hln, c.note]
            )
        shares = beat_baseline_share(panel, base, actuals[rel], cfg.thresholds)
        for thr in cfg.thresholds:
            beat_rows.append([RELEASE_LABEL[rel], thr, shares[thr]])
    files = []
    p = out / "accuracy_comparisons.csv"
    write_csv(p, ["economist_id", "release", "n_common", "rmse_self", "rmse_baseline",
                  "dm_statistic", "hln_statistic", "p_value_hln", "note"], comp_rows,
              comment="per-forecaster accuracy vs baseline over common quarters")
    files.append(p)
    p = out / "beat_shares.csv"
    write_csv(p, ["release", "threshold", "share_beating_baseline"], beat_rows)
    files.append(p)
    return files


def cmd_persistence(cfg: RunConfig, out: Path) -> list[Path]:
    panel, _ = _load_panel(cfg)
    jp_entries = {}
    for rel in RELEASES:
        base = baseline(panel, rel, cfg.baseline_method)
        jp_rel = extract_judgments(panel, base, grid=cfg.grid)
        jp_entries.update(jp_rel.entries)
    from .judgment import JudgmentPanel

    jp = JudgmentPanel(entries=jp_entries, grid=cfg.grid)
    report = persistence_battery(jp)
    files = []
    table_names = {
        ReleaseKind.FIRST: "table6_persistence_first.csv",
        ReleaseKind.SECOND: "table7_persistence_second.csv",
        ReleaseKind.THIRD: "table8_persistence_third.csv",
    }
    column_order = [(kind, spec) for kind in REGRESSOR_KINDS for spec in SPECS]
    diag_rows = []
    for rel in RELEASES:
        rows = []
        cells = {(c.regressor_kind, c.spec): c for c in report.for_release(rel)}
        for i, (kind, spec) in enumerate(column_order, start=1):
            cell = cells[(kind, spec)]
            if cell.result is None:
                rows.append([i, kind, spec, None, None, "", None, None, None, None, None, cell.error])
            else:
                r = cell.result
                rows.append([i, kind, spec, r.beta, r.se_clustered, cell.stars, cell.p_value,
                             r.n_obs, r.n_forecasters, r.r_squared, r.r_squared_overall, ""])
            if cell.result is not None and cell.result.singletons_dropped:
                diag_rows.append([RELEASE_LABEL[rel], kind, spec,
                                  "singletons_dropped", cell.result.singletons_dropped])
        for kind in REGRESSOR_KINDS:
            diag_rows.append([RELEASE_LABEL[rel], kind, "", "broken_lag_chains",
                              report.broken_chains[(rel, kind)]])
        p = out / table_names[rel]
        write_csv(p, ["column", "regressor", "spec", "beta", "se_clustered", "stars", "p_value",
                      "n_obs", "n_forecasters", "r_squared_within", "r_squared_overall", "error"],
                  rows,
                  comment=f"table {5 + rel.value}: judgment persistence, {RELEASE_LABEL[rel]} release "
                          "(clustered on forecasters; stars at 10/5/1%)")
        files.append(p)
    p = out / "persistence_diagnostics.csv"
    write_csv(p, ["release", "regressor", "spec", "metric", "value"], diag_rows)
    files.append(p)
    return files


def cmd_ar_forecast(cfg: RunConfig, out: Path) -> list[Path]:
    actuals = _load_actuals(cfg)
    rows = []
    for rel in RELEASES:
        forecasts = _ar_forecasts(cfg, {rel: actuals[rel]})[rel]
        p_used = cfg.ar_lag if cfg.ar_lag != "auto" else "auto"
        for q in sorted(forecasts):
            rows.append([str(q), RELEASE_LABEL[rel], forecasts[q], p_used])
    p = out / "ar_forecasts.csv"
    write_csv(p, ["quarter", "release", "forecast", "p_used"], rows)
    return [p]


def cmd_simulate(cfg: RunConfig, out: Path) -> list[Path]:
    world = simulate_world(cfg.synth_config(), seed=cfg.seed)
    files = []
    actual_rows = []
    for rel in RELEASES:
        series = world.actuals[rel]
        for q in series.quarters():
            actual_rows.append([str(q), rel.value, series.values[q]])
    p = out / "actuals.csv"
    write_csv(p, ["quarter", "release", "value"], actual_rows)
    files.append(p)
    forecast_rows = [
        [str(r.quarter), r.release.value, r.economist_id, r.firm_id, r.value, ""]
        for r in world.panel.records
    ]
    p = out / "forecasts.csv"
    write_csv(p, ["quarter", "release", "economist_id", "firm_id", "value", "report_date"],
              forecast_rows)
    files.append(p)
    spf_rows = [
        [str(q), world.spf.median[q], world.spf.mean[q]] for q in sorted(world.spf.median)
    ]
    p = out / "spf.csv"
    write_csv(p, ["quarter", "median", "mean"], spf_rows)
    files.append(p)
    truth_rows = []
    t = world.truth
    for k in range(3):
        for i_q, q in enumerate(t.quarters):
            truth_rows.append(["baseline", "", str(q), k + 1, t.baselines[k, i_q]])
    for i, econ in enumerate(t.economists):
        truth_rows.append(["rho_own", econ, "", "", t.rho_i[i]])
        for i_q, q in enumerate(t.quarters):
            for k in range(3):
                truth_rows.append(["judgment", econ, str(q), k + 1, t.judgments[i, i_q, k]])
    p = out / "truth.csv"
    write_csv(p, ["kind", "economist_id", "quarter", "release", "value"], truth_rows)
    files.append(p)
    return files


def cmd_recovery(cfg: RunConfig, out: Path) -> list[Path]:
    summary = recovery_experiment(
        cfg.synth_config(), cfg.replications, base_seed=cfg.seed, workers=_workers()
    )
    rows = [[cfg.replications, summary.n_completed, summary.n_failed,
             summary.mean_beta, summary.sd_beta, summary.ci_coverage, cfg.rho_own]]
    p = out / "recovery_summary.csv"
    write_csv(p, ["replications", "n_completed", "n_failed", "mean_beta", "sd_beta",
                  "ci_coverage_95", "rho_own_true"], rows)
    return [p]


def cmd_report(cfg: RunConfig, out: Path) -> list[Path]:
    files = []
    diagnostics = []
    for name, fn in [
        ("describe", cmd_describe),
        ("table2", cmd_table2),
        ("judgment", cmd_judgment),
        ("efficiency", cmd_efficiency),
        ("accuracy", cmd_accuracy),
        ("persistence", cmd_persistence),
    ]:
        try:
            files.extend(fn(cfg, out))
        except (JudgebenchError, ValueError) as exc:
            diagnostics.append([name, str(exc)])
    if diagnostics:
        p = out / "diagnostics.csv"
        write_csv(p, ["stage", "error"], diagnostics)
        files.append(p)
    manifest = {
        "artifact": "judgebench",
        "version": __version__,
        "config": cfg.semantic_dict(),
        "config_hash": cfg.config_hash(),
        "inputs": {
            name: _file_digest(getattr(cfg, name))
            for name in ("actuals", "forecasts", "spf")
            if getattr(cfg, name)
        },
        "outputs": sorted(p.name for p in files),
    }
    p = out / "manifest.json"
    p.parent.mkdir(parents=True, exist_ok=True)
    with open(p, "w", encoding="utf-8") as fh:
        json.dump(manifest, fh, indent=2, sort_keys=True)
        fh.write("\n")
    files.append(p)
    return files


def _file_digest(path: str) -> str:
    p = Path(path)
    if not p.exists():
        return "missing"
    return hashlib.sha256(p.read_bytes()).hexdigest()


COMMANDS = {
    "describe": cmd_describe,
    "judgment": cmd_judgment,
    "efficiency": cmd_efficiency,
    "accuracy": cmd_accuracy,
    "persistence": cmd_persistence,
    "ar-forecast": cmd_ar_forecast,
    "simulate": cmd_simulate,
    "recovery": cmd_recovery,
    "report": cmd_report,
}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="judgebench", description=__doc__)
    parser.add_argument("command", choices=sorted(COMMANDS))
    parser.add_argument("--config", help="JSON config file; flags override its values")
    parser.add_argument("--actuals")
    parser.add_argument("--forecasts")
    parser.add_argument("--spf")
    parser.add_argument("--from", dest="sample_from")
    parser.add_argument("--to", dest="sample_to")
    parser.add_argument("--baseline", dest="baseline_method", choices=["median", "mean"])
    parser.add_argument("--grid", type=float)
    parser.add_argument("--thresholds")
    parser.add_argument("--alpha", type=float)
    parser.add_argument("--hac-lag", dest="hac_lag")
    parser.add_argument("--ar-lag", dest="ar_lag")
    parser.add_argument("--out")
    parser.add_argument("--seed", type=int)
    parser.add_argument("--replications", type=int)
    parser.add_argument("--n-forecasters", dest="n_forecasters", type=int)
    parser.add_argument("--n-quarters", dest="n_quarters", type=int)
    parser.add_argument("--rho-own", dest="rho_own", type=float)
    parser.add_argument("--rho-own-sd", dest="rho_own_sd", type=float)
    parser.add_argument("--kappa", type=float)
    parser.add_argument("--judgment-sd", dest="judgment_sd", type=float)
    parser.add_argument("--p-neutral", dest="p_neutral", type=float)
    parser.add_argument("--participation-low", dest="participation_low", type=float)
    parser.add_argument("--participation-high", dest="participation_high", type=float)
    return parser


def config_from_args(args: argparse.Namespace) -> RunConfig:
    cfg = RunConfig()
    if args.config:
        with open(args.config, "r", encoding="utf-8") as fh:
            file_values = json.load(fh)
        known = {f.name for f in fields(RunConfig)}
        unknown = set(file_values) - known
        if unknown:
            raise CliError(f"error: unknown-config-keys keys={','.join(sorted(unknown))}")
        if "thresholds" in file_values:
            file_values["thresholds"] = tuple(file_values["thresholds"])
        cfg = replace(cfg, **file_values)
    overrides = {}
    for f in fields(RunConfig):
        value = getattr(args, f.name, None)
        if value is not None:
            overrides[f.name] = value
    if "thresholds" in overrides and isinstance(overrides["thresholds"], str):
        overrides["thresholds"] = tuple(float(t) for t in overrides["thresholds"].split(","))
    if overrides:
        cfg = replace(cfg, **overrides)
    return cfg


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        cfg = config_from_args(args)
        out = Path(cfg.out)
        out.mkdir(parents=True, exist_ok=True)
        files = COMMANDS[args.command](cfg, out)
    except CliError as exc:
        print(str(exc), file=sys.stderr)
        return exc.exit_code
    except JudgebenchError as exc:
        print(f"error: {type(exc).__name__.lower()} detail={exc}", file=sys.stderr)
        return 1
    for path in files:
        print(path)
    return 0


if __name__ == "__main__":
    sys.exit(main())
