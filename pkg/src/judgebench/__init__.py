"""Judgment evaluation for panels of macroeconomic backcasts.

A library and CLI that extracts forecaster judgment relative to a common
baseline, tests unbiasedness, efficiency and accuracy of the judgment-
augmented predictions, and estimates judgment persistence with fixed-effects
panel regressions.
"""

from .quarters import Quarter, ReleaseKind, parse_quarter, quarter_range
from .panel import (
    ActualSeries,
    CleaningLog,
    ForecastPanel,
    ForecastRecord,
    SpfNowcasts,
    clean_panel,
    joint_coverage,
    load_actuals,
    load_forecasts,
    load_spf,
    participation_share,
)
from .descriptive import QuarterStats, armse, quarter_stats, rmse_series
from .judgment import (
    BaselineSeries,
    JudgmentPanel,
    baseline,
    baseline_hit_stats,
    extract_judgments,
    negative_share_histogram,
    sign_shares,
)
from .linreg import (
    CovarianceEstimate,
    JointTestResult,
    RegressionFit,
    efficiency_regression,
    efficiency_test,
    hac_covariance,
    hc_covariance,
    newey_west_auto_lag,
    ols,
    test_battery_aggregate,
    test_battery_individual,
    unbiasedness_test,
    wald_joint_test,
)
from .accuracy import (
    AccuracyComparison,
    accuracy_table,
    beat_baseline_share,
    dm_test,
    hln_correction,
    paired_rmse,
)
from .panelreg import (
    PanelFitResult,
    PanelObservation,
    build_persistence_dataset,
    cluster_se,
    clustered_covariance,
    fe_estimate,
    persistence_battery,
)
from .armodel import ARSpec, fill_missing, recursive_ar_forecast, select_lag
from .syngen import SynthConfig, SynthWorld, recovery_experiment, simulate_world

__version__ = "0.1.0"
