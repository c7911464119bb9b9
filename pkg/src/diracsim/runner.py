"""Generic time loop with a rolling five-level monitor window.

The loop never stores the full history: a deque keeps the five most recent
levels, and every monitor is evaluated at the center of that window, so the
recorded series covers steps 2 .. n_steps-2 at the requested cadence.  Only
scalar monitor values are kept, which keeps long refinement runs cheap.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from typing import Callable, Optional

import numpy as np

from .dwm import DWState, Instability
from .monitors import Monitor
from .reports import (
    EnergyReport,
    fit_exponential_envelope,
    max_abs,
    relative_drift,
)


@dataclass
class RunResult:
    times: np.ndarray
    series: dict
    final_state: object
    instability_step: Optional[int] = None
    extra: dict = field(default_factory=dict)

    @property
    def stable(self) -> bool:
        return self.instability_step is None


def _finite(state) -> bool:
    if isinstance(state, DWState):
        return bool(np.all(np.isfinite(state.phi)) and np.all(np.isfinite(state.psi)))
    return bool(np.all(np.isfinite(state)))


def run_loop(step: Callable, state0, dt: float, n_steps: int, monitors: dict,
             t0: float = 0.0, output_every: int = 1) -> RunResult:
    """Advance `state0` n_steps times, recording monitor values.

    `step(state, t)` returns the state at t + dt.  On non-finite output (or
    an Instability raised by the step) the loop stops and the result carries
    the offending step index.
    """
    if n_steps < 4:
        raise ValueError("need at least four steps for the monitor window")
    window = deque(maxlen=5)
    window.append(state0)
    times_window = deque(maxlen=5)
    times_window.append(t0)

    rec_times = []
    rec = {name: [] for name in monitors}
    state = state0
    instability = None

    for k in range(1, n_steps + 1):
        t = t0 + (k - 1) * dt
        try:
            state = step(state, t)
        except Instability:
            instability = k
            break
        if not _finite(state):
            instability = k
            break
        window.append(state)
        times_window.append(t0 + k * dt)
        if len(window) == 5:
            center_step = k - 2
            if center_step % output_every == 0:
                w = list(window)
                tw = list(times_window)
                rec_times.append(tw[2])
                for name, mon in monitors.items():
                    rec[name].append(mon.evaluator(w, tw))

    series = {name: np.asarray(vals) for name, vals in rec.items()}
    return RunResult(np.asarray(rec_times), series, state, instability)


def evolve_plain(step: Callable, state0, dt: float, n_steps: int, t0: float = 0.0):
    """Advance without recording anything; returns the final state."""
    state = state0
    for k in range(n_steps):
        state = step(state, t0 + k * dt)
    return state


def sample_history(step: Callable, state0, dt: float, n_levels: int,
                   t0: float = 0.0) -> tuple[list, list]:
    """First n_levels consecutive states and their times (for stencil tests)."""
    states = [state0]
    times = [t0]
    state = state0
    for k in range(n_levels - 1):
        state = step(state, t0 + k * dt)
        states.append(state)
        times.append(t0 + (k + 1) * dt)
    return states, times


def build_report(result: RunResult, monitors: dict, metadata: dict) -> EnergyReport:
    report = EnergyReport(metadata=dict(metadata))
    if result.instability_step is not None:
        report.metadata["instability_step"] = result.instability_step
    for name, mon in monitors.items():
        series = result.series.get(name, np.array([]))
        if series.size == 0:
            continue
        if mon.kind == "conserved":
            report.add(name, mon.kind, relative_drift(series), detail=mon.note)
        elif mon.kind == "identity-residual":
            report.add(name, mon.kind, max_abs(series), detail=mon.note)
        elif mon.kind == "inequality-audit":
            worst = float(np.max(series))
            verdict = "PASS" if worst <= mon.cap else "FAIL"
            report.add(name, mon.kind, worst, verdict=verdict, detail=mon.note)
        elif mon.kind == "envelope-fit":
            rate, _, r2 = fit_exponential_envelope(result.times, series)
            report.add(name, mon.kind, rate, detail=f"r2={r2:.4f}")
    return report
