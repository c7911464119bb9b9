"""Monitor registry, report statistics and the generic run loop."""

import numpy as np
import pytest

from diracsim.dwm import Instability
from diracsim.grid import Grid
from diracsim.initial import band_limited_spinor
from diracsim.linear_dirac import free_transport_step, massive_step
from diracsim.monitors import (
    REGISTRY_NAMES,
    dwm_monitors,
    gronwall_monitor,
    linear_monitors,
    monitors_for,
    thirring_monitors,
    twisted_monitors,
)
from diracsim.reports import (
    EXACT,
    EnergyReport,
    fit_exponential_envelope,
    format_float,
    max_abs,
    refinement_order,
    relative_drift,
    write_series_csv,
)
from diracsim.runner import build_report, evolve_plain, run_loop, sample_history
from diracsim.targets import SphereTarget
from diracsim.twisted import abelian_connection

TWO_PI = 2.0 * np.pi


def test_registry_covers_every_family_and_is_duplicate_free():
    assert len(REGISTRY_NAMES) == len(set(REGISTRY_NAMES)) == 21
    g = Grid(TWO_PI, 64)
    produced = set()
    produced |= set(linear_monitors(g, 1.0))
    produced |= set(twisted_monitors(g, abelian_connection(g), 1.0))
    produced |= set(thirring_monitors(g, 1.0, 1.0))
    produced |= set(dwm_monitors(g, SphereTarget(3)))
    produced.add(gronwall_monitor().name)
    assert produced == set(REGISTRY_NAMES)


def test_monitors_for_dispatch_and_errors():
    g = Grid(TWO_PI, 64)
    assert set(monitors_for("free", g)) == set(linear_monitors(g, 0.0))
    with pytest.raises(ValueError):
        monitors_for("twisted", g)
    with pytest.raises(ValueError):
        monitors_for("dirac_wave_map", g)
    with pytest.raises(ValueError):
        monitors_for("nonsense", g)


def test_free_run_conserves_all_quadratic_energies_exactly():
    """At unit CFL the free solver is an exact shift, so every shift-invariant
    functional in the linear family is machine-conserved."""
    g = Grid(TWO_PI, 64)
    psi0 = band_limited_spinor(g, 7, 1.0)
    monitors = monitors_for("free", g)
    result = run_loop(lambda p, t: free_transport_step(p), psi0, g.dx, 16, monitors)
    for name, series in result.series.items():
        assert relative_drift(series) <= 1e-13, name


def test_gronwall_monitor_refuses_window_evaluation():
    mon = gronwall_monitor()
    with pytest.raises(RuntimeError):
        mon.evaluator([], [])


def test_relative_drift_and_max_abs():
    assert relative_drift(np.array([2.0, 2.0 + 1e-8, 2.0 - 2e-8])) == pytest.approx(1e-8)
    assert relative_drift(np.array([])) == 0.0
    assert max_abs(np.array([-3.0, 2.0])) == 3.0
    assert max_abs(np.array([])) == 0.0


def test_refinement_order_and_exact_sentinel():
    assert refinement_order(4e-4, 1e-4) == pytest.approx(2.0)
    assert refinement_order(5e-15, 8e-16) == EXACT
    assert refinement_order(0.0, 0.0) == EXACT


def test_fit_exponential_envelope_recovers_rate():
    t = np.linspace(0.0, 4.0, 100)
    y = 3.0 * np.exp(1.7 * t)
    rate, intercept, r2 = fit_exponential_envelope(t, y)
    assert rate == pytest.approx(1.7, rel=1e-6)
    assert r2 >= 0.999


def test_format_float_round_trips():
    for x in (0.1, 1.0 / 3.0, -2.5e-13, 0.0):
        assert float(format_float(x)) == x


def test_write_series_csv_round_trips(tmp_path):
    times = np.array([0.1, 0.2])
    series = {"E1": np.array([1.0 / 3.0, 1.0 / 3.0 + 1e-16])}
    path = tmp_path / "series.csv"
    write_series_csv(path, times, series)
    lines = path.read_text().strip().splitlines()
    assert lines[0] == "t,E1"
    assert float(lines[1].split(",")[1]) == series["E1"][0]


def test_run_loop_window_and_cadence():
    g = Grid(TWO_PI, 64)
    psi0 = band_limited_spinor(g, 7)
    monitors = monitors_for("free", g)
    result = run_loop(lambda p, t: free_transport_step(p), psi0, g.dx, 20, monitors)
    # window centers cover steps 2 .. n_steps - 2
    assert len(result.times) == 17
    assert np.isclose(result.times[0], 2 * g.dx)
    every2 = run_loop(lambda p, t: free_transport_step(p), psi0, g.dx, 20,
                      monitors, output_every=2)
    assert len(every2.times) == 9
    with pytest.raises(ValueError):
        run_loop(lambda p, t: p, psi0, g.dx, 3, monitors)


def test_run_loop_captures_instability():
    g = Grid(TWO_PI, 64)
    psi0 = band_limited_spinor(g, 7)

    def exploding(p, t):
        if t > 5 * g.dx:
            raise Instability("boom")
        return free_transport_step(p)

    result = run_loop(exploding, psi0, g.dx, 20, monitors_for("free", g))
    assert not result.stable
    assert result.instability_step == 7

    def nan_step(p, t):
        return p * np.nan

    result = run_loop(nan_step, psi0, g.dx, 20, monitors_for("free", g))
    assert result.instability_step == 1


def test_evolve_plain_and_sample_history_agree_with_loop():
    g = Grid(TWO_PI, 64)
    psi0 = band_limited_spinor(g, 7)
    step = lambda p, t: massive_step(p, 1.0, g.dx)
    final = evolve_plain(step, psi0, g.dx, 5)
    states, times = sample_history(step, psi0, g.dx, 6)
    assert np.array_equal(states[-1], final)
    assert np.isclose(times[-1], 5 * g.dx)


def test_build_report_kinds_and_render():
    g = Grid(TWO_PI, 64)
    psi0 = band_limited_spinor(g, 3, 0.5)
    monitors = monitors_for("thirring", g, lam=1.0, kappa=1.0)
    from diracsim.thirring import thirring_step
    result = run_loop(lambda p, t: thirring_step(p, 1.0, 1.0, g.dx),
                      psi0, g.dx, 16, monitors)
    report = build_report(result, monitors, {"model": "thirring"})
    text = report.render()
    assert "thirring_E1" in text and "conserved" in text
    assert "envelope-fit" in text
    kinds = {row.name: row.kind for row in report.rows}
    assert kinds["thirring_box"] == "identity-residual"


def test_inequality_audit_verdicts():
    report = EnergyReport()
    g = Grid(TWO_PI, 64)
    conn = abelian_connection(g)
    mons = twisted_monitors(g, conn, 1.0, audit_slack=1e-8)
    audit = mons["twisted_E3_audit"]
    from diracsim.runner import RunResult
    passing = RunResult(np.array([0.0, 0.1]), {"twisted_E3_audit": np.array([-0.5, -0.6])},
                        None)
    failing = RunResult(np.array([0.0, 0.1]), {"twisted_E3_audit": np.array([-0.5, 0.2])},
                        None)
    rep_pass = build_report(passing, {"twisted_E3_audit": audit}, {})
    rep_fail = build_report(failing, {"twisted_E3_audit": audit}, {})
    assert rep_pass.rows[0].verdict == "PASS"
    assert rep_fail.rows[0].verdict == "FAIL"
