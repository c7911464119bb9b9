"""Turns a validated ScenarioConfig into a concrete run."""

from __future__ import annotations

import numpy as np

from .config import ConfigError, ScenarioConfig
from .dwm import (
    DWState,
    dwm_initial_state,
    dwm_step,
    geodesic_wave_map,
    uncoupled_state,
)
from .grid import Grid
from .initial import band_limited_spinor, band_limited_twisted, chiral_pulse
from .linear_dirac import free_transport_step, massive_step, plane_wave
from .monitors import gronwall_monitor, monitors_for
from .runner import RunResult, build_report, run_loop
from .targets import FlatTorusTarget, SphereTarget
from .thirring import perturbation_growth, thirring_step
from .twisted import TwistedStepper, abelian_connection, flat_connection

TWO_PI = 2.0 * np.pi


def _grid(cfg: ScenarioConfig) -> Grid:
    length = cfg.get("grid", "length", TWO_PI, float)
    n = cfg.get("grid", "n", 64, int)
    try:
        return Grid(length, n)
    except ValueError as exc:
        raise ConfigError(f"key 'n' in section [grid]: {exc}")


def _steps(cfg: ScenarioConfig, grid: Grid) -> int:
    steps = cfg.get("time", "steps", None, int)
    if steps is None:
        t_final = cfg.get("time", "t_final", None, float)
        if t_final is None:
            raise ConfigError("missing key 'steps' or 't_final' in section [time]")
        steps = int(round(t_final / grid.dx))
    if steps < 4:
        raise ConfigError("key 'steps' in section [time] must be at least 4")
    return steps


def _connection(cfg: ScenarioConfig, grid: Grid):
    kind = cfg.get("params", "connection", "abelian")
    strength = cfg.get("params", "connection_strength", 1.0, float)
    if kind == "flat":
        return flat_connection(grid, 1)
    if kind == "abelian":
        return abelian_connection(grid, strength)
    raise ConfigError(f"key 'connection' in section [params] has unknown value '{kind}'")


def _target(cfg: ScenarioConfig):
    kind = cfg.get("params", "target", "sphere")
    q = cfg.get("params", "q", 3, int)
    if kind == "sphere":
        return SphereTarget(q)
    if kind == "torus":
        return FlatTorusTarget(q)
    raise ConfigError(f"key 'target' in section [params] has unknown value '{kind}'")


def _initial_spinor(cfg: ScenarioConfig, grid: Grid, lam: float) -> np.ndarray:
    kind = cfg.get("initial", "kind", "spinor")
    seed = cfg.get("initial", "seed", 0, int)
    amplitude = cfg.get("initial", "amplitude", 0.5, float)
    n_modes = cfg.get("initial", "n_modes", 6, int)
    if kind == "chiral":
        return chiral_pulse(grid, seed, amplitude, n_modes)
    if kind == "spinor":
        return band_limited_spinor(grid, seed, amplitude, n_modes)
    if kind == "plane_wave":
        mode = cfg.get("initial", "mode", 1, int)
        branch = cfg.get("initial", "branch", 1, int)
        return plane_wave(grid, mode, lam, branch).field(0.0)
    raise ConfigError(f"key 'kind' in section [initial] has unknown value '{kind}'")


def _initial_dwm(cfg: ScenarioConfig, grid: Grid, target) -> DWState:
    kind = cfg.get("initial", "kind", "dwm_random")
    dt = grid.dx
    if kind == "geodesic":
        a = cfg.get("initial", "a", 1.0, float)
        b = cfg.get("initial", "b", 1.0, float)
        phi = geodesic_wave_map(grid, a, b, 0.0, target.q)
        phi_prev = geodesic_wave_map(grid, a, b, -dt, target.q)
        psi = np.zeros((grid.n, 2, target.q), dtype=complex)
        return DWState(phi, phi_prev, psi, 0.0)
    if kind == "uncoupled":
        a = cfg.get("initial", "a", 1.0, float)
        b = cfg.get("initial", "b", 1.0, float)
        return uncoupled_state(grid, a, b, (1.0, 0.0), (0.0, 0.0), 0.0, dt, target.q)
    if kind == "dwm_random":
        seed = cfg.get("initial", "seed", 0, int)
        amplitude = cfg.get("initial", "amplitude", 0.2, float)
        n_modes = cfg.get("initial", "n_modes", 4, int)
        return dwm_initial_state(grid, target, seed, amplitude, n_modes, dt)
    raise ConfigError(f"key 'kind' in section [initial] has unknown value '{kind}'")


def _select_monitors(cfg: ScenarioConfig, available: dict, model: str) -> dict:
    names = cfg.get("monitors", "names", "all")
    if names == "all":
        return available
    wanted = [n.strip() for n in names.split(",") if n.strip()]
    out = {}
    for name in wanted:
        if name not in available:
            raise ConfigError(
                f"monitor '{name}' is not available for model '{model}'")
        out[name] = available[name]
    return out


def run_scenario(cfg: ScenarioConfig):
    """Build and run; returns (RunResult, monitors, metadata)."""
    model = cfg.require("scenario", "model")
    grid = _grid(cfg)
    dt = grid.dx
    n_steps = _steps(cfg, grid)
    output_every = cfg.get("time", "output_every", 1, int)
    lam = cfg.get("params", "lambda", 0.0, float)
    kappa = cfg.get("params", "kappa", 0.0, float)

    metadata = {
        "model": model,
        "grid": f"L={grid.length}, N={grid.n}",
        "steps": n_steps,
        "lambda": lam,
        "kappa": kappa,
        "seed": cfg.get("initial", "seed", 0, int),
    }

    if model == "free":
        state0 = _initial_spinor(cfg, grid, 0.0)
        monitors = monitors_for("free", grid, lam=0.0)
        step = lambda psi, t: free_transport_step(psi)
    elif model == "massive":
        state0 = _initial_spinor(cfg, grid, lam)
        monitors = monitors_for("massive", grid, lam=lam)
        step = lambda psi, t: massive_step(psi, lam, dt)
    elif model == "twisted":
        conn = _connection(cfg, grid)
        seed = cfg.get("initial", "seed", 0, int)
        amplitude = cfg.get("initial", "amplitude", 0.5, float)
        n_modes = cfg.get("initial", "n_modes", 6, int)
        state0 = band_limited_twisted(grid, conn.rank, seed, amplitude, n_modes)
        monitors = monitors_for("twisted", grid, lam=lam, conn=conn)
        stepper = TwistedStepper(conn, lam, dt)
        step = stepper.step
        metadata["connection"] = cfg.get("params", "connection", "abelian")
    elif model == "thirring":
        state0 = _initial_spinor(cfg, grid, lam)
        monitors = monitors_for("thirring", grid, lam=lam, kappa=kappa)
        step = lambda psi, t: thirring_step(psi, lam, kappa, dt)
    elif model == "dirac_wave_map":
        target = _target(cfg)
        state0 = _initial_dwm(cfg, grid, target)
        monitors = monitors_for("dirac_wave_map", grid, target=target)
        step = lambda st, t: dwm_step(grid, st, target, dt)
        metadata["target"] = cfg.get("params", "target", "sphere")
    else:  # pragma: no cover - guarded by config validation
        raise ConfigError(f"unknown model '{model}'")

    monitors = _select_monitors(cfg, monitors, model)
    result = run_loop(step, state0, dt, n_steps, monitors, output_every=output_every)

    # paired-run separation envelope for the uniqueness experiment
    delta = cfg.get("params", "delta", None, float)
    if delta is not None and model == "thirring" and result.stable:
        sep = perturbation_growth(grid, state0, _delta_field(state0, delta),
                                  lam, kappa, n_steps)
        idx = [2 + k * output_every for k in range(len(result.times))]
        result.series["gronwall_envelope"] = np.asarray([sep[i] for i in idx])
        monitors = dict(monitors)
        monitors["gronwall_envelope"] = gronwall_monitor()
        metadata["delta"] = delta

    return result, monitors, metadata


def _delta_field(psi0: np.ndarray, delta: float) -> np.ndarray:
    rng = np.random.default_rng(12345)
    return delta * (rng.standard_normal(psi0.shape)
                    + 1j * rng.standard_normal(psi0.shape))


def report_for(cfg: ScenarioConfig):
    result, monitors, metadata = run_scenario(cfg)
    return result, monitors, build_report(result, monitors, metadata)
