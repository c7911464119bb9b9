"""Drift statistics, convergence orders, envelope fits and report text."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

#: Sentinel returned by refinement_order when both drifts sit at rounding level.
EXACT = "exact"

_FLOOR = 1e-300


def relative_drift(series: np.ndarray) -> float:
    """max_t |E(t) - E(0)| / max(|E(0)|, floor)."""
    series = np.asarray(series, dtype=float)
    if series.size == 0:
        return 0.0
    ref = max(abs(series[0]), _FLOOR)
    return float(np.max(np.abs(series - series[0])) / ref)


def max_abs(series: np.ndarray) -> float:
    series = np.asarray(series, dtype=float)
    return float(np.max(np.abs(series))) if series.size else 0.0


def refinement_order(drift_coarse: float, drift_fine: float,
                     exact_tol: float = 1e-13):
    """log2(drift ratio); the EXACT sentinel when both are at rounding level."""
    if abs(drift_coarse) <= exact_tol and abs(drift_fine) <= exact_tol:
        return EXACT
    if drift_fine == 0.0 or drift_coarse == 0.0:
        return EXACT
    return float(np.log2(drift_coarse / drift_fine))


def fit_exponential_envelope(times: np.ndarray, series: np.ndarray):
    """Least-squares line through log(series) over the second half of the run.

    Returns (rate C, intercept, r_squared); the first half is discarded as
    transient.  Non-positive entries are floored before the log.
    """
    times = np.asarray(times, dtype=float)
    series = np.asarray(series, dtype=float)
    half = len(times) // 2
    t = times[half:]
    y = np.log(np.maximum(series[half:], _FLOOR))
    if len(t) < 2 or np.ptp(t) == 0.0:
        return 0.0, float(y[0]) if len(y) else 0.0, 1.0
    coeffs = np.polyfit(t, y, 1)
    fitted = np.polyval(coeffs, t)
    ss_res = float(np.sum((y - fitted) ** 2))
    ss_tot = float(np.sum((y - np.mean(y)) ** 2))
    r2 = 1.0 if ss_tot == 0.0 else 1.0 - ss_res / ss_tot
    return float(coeffs[0]), float(coeffs[1]), r2


@dataclass
class ReportRow:
    name: str
    kind: str
    statistic: float
    verdict: str = ""
    detail: str = ""


@dataclass
class EnergyReport:
    metadata: dict = field(default_factory=dict)
    rows: list = field(default_factory=list)
    orders: dict = field(default_factory=dict)

    def add(self, name: str, kind: str, statistic: float, verdict: str = "",
            detail: str = "") -> None:
        self.rows.append(ReportRow(name, kind, statistic, verdict, detail))

    def render(self) -> str:
        lines = ["run report", "=========="]
        for key in sorted(self.metadata):
            lines.append(f"{key}: {self.metadata[key]}")
        lines.append("")
        lines.append(f"{'monitor':<24} {'kind':<18} {'statistic':<14} verdict")
        lines.append("-" * 72)
        for row in self.rows:
            stat = format_float(row.statistic)
            tail = f"  {row.detail}" if row.detail else ""
            lines.append(f"{row.name:<24} {row.kind:<18} {stat:<14} {row.verdict}{tail}")
        if self.orders:
            lines.append("")
            lines.append("refinement orders")
            lines.append("-----------------")
            for name in sorted(self.orders):
                val = self.orders[name]
                shown = val if isinstance(val, str) else format_float(val)
                lines.append(f"{name:<24} {shown}")
        return "\n".join(lines) + "\n"


def format_float(x: float) -> str:
    """Shortest decimal text that round-trips the binary float."""
    return repr(float(x))


def write_series_csv(path, times, series: dict) -> None:
    """series.csv: header t,<monitor names...>; round-trip floats."""
    names = list(series)
    with open(path, "w") as fh:
        fh.write(",".join(["t"] + names) + "\n")
        for j, t in enumerate(times):
            row = [format_float(t)] + [format_float(series[n][j]) for n in names]
            fh.write(",".join(row) + "\n")
