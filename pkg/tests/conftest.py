"""Shared helpers for building small panels and series in tests."""
from __future__ import annotations

import sys
from datetime import date

from judgebench.panel import ActualSeries, ForecastPanel, ForecastRecord
from judgebench.quarters import Quarter, ReleaseKind


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    """Replay the acceptance verdict lines after the run, despite capture."""
    module = sys.modules.get("test_acceptance") or sys.modules.get("tests.test_acceptance")
    verdicts = getattr(module, "VERDICTS", None)
    if verdicts:
        terminalreporter.section("acceptance verdicts")
        for line in verdicts:
            terminalreporter.write_line(line)


def q(year: int, quarter: int) -> Quarter:
    return Quarter(year, quarter)


def rec(
    econ: str,
    quarter: Quarter,
    value: float,
    release: ReleaseKind = ReleaseKind.FIRST,
    firm: str = "F1",
    report_date: date | None = None,
) -> ForecastRecord:
    return ForecastRecord(econ, firm, quarter, release, value, report_date)


def panel_from_values(
    values_by_quarter: dict[Quarter, list[float]],
    release: ReleaseKind = ReleaseKind.FIRST,
) -> ForecastPanel:
    """One economist per cross-section slot, named E0, E1, ..."""
    records = []
    for quarter, values in values_by_quarter.items():
        for i, value in enumerate(values):
            records.append(rec(f"E{i}", quarter, value, release))
    return ForecastPanel(records)


def actuals_from(values: dict[Quarter, float], release: ReleaseKind = ReleaseKind.FIRST) -> ActualSeries:
    return ActualSeries(release=release, values=values)
