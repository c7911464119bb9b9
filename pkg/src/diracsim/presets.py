"""Built-in scenario presets.

Each preset is a full config (section -> {key: string}); a config file that
names a preset inherits these values and may override any of them.  All
presets run quickly at their default sizes and are exercised by the smoke
tests.
"""

from __future__ import annotations

PRESETS = {
    "free_chiral": {
        "scenario": {"model": "free"},
        "grid": {"length": "6.283185307179586", "n": "64"},
        "time": {"steps": "16", "output_every": "1"},
        "initial": {"kind": "chiral", "seed": "7", "amplitude": "1.0",
                    "n_modes": "6"},
        "monitors": {"names": "all"},
    },
    "massive_plane_wave": {
        "scenario": {"model": "massive"},
        "grid": {"length": "6.283185307179586", "n": "64"},
        "time": {"steps": "16", "output_every": "1"},
        "params": {"lambda": "1.0"},
        "initial": {"kind": "plane_wave", "mode": "2", "branch": "1"},
        "monitors": {"names": "all"},
    },
    "twisted_abelian": {
        "scenario": {"model": "twisted"},
        "grid": {"length": "6.283185307179586", "n": "64"},
        "time": {"steps": "16", "output_every": "1"},
        "params": {"lambda": "1.0", "connection": "abelian",
                   "connection_strength": "1.0"},
        "initial": {"kind": "spinor", "seed": "11", "amplitude": "0.5",
                    "n_modes": "6"},
        "monitors": {"names": "all"},
    },
    "thirring_massless": {
        "scenario": {"model": "thirring"},
        "grid": {"length": "6.283185307179586", "n": "64"},
        "time": {"steps": "16", "output_every": "1"},
        "params": {"lambda": "0.0", "kappa": "1.0"},
        "initial": {"kind": "spinor", "seed": "3", "amplitude": "0.5",
                    "n_modes": "6"},
        "monitors": {"names": "all"},
    },
    "thirring_massive": {
        "scenario": {"model": "thirring"},
        "grid": {"length": "6.283185307179586", "n": "64"},
        "time": {"steps": "16", "output_every": "1"},
        "params": {"lambda": "1.0", "kappa": "1.0"},
        "initial": {"kind": "spinor", "seed": "3", "amplitude": "0.5",
                    "n_modes": "6"},
        "monitors": {"names": "all"},
    },
    "dwm_geodesic": {
        "scenario": {"model": "dirac_wave_map"},
        "grid": {"length": "6.283185307179586", "n": "64"},
        "time": {"steps": "16", "output_every": "1"},
        "params": {"target": "sphere", "q": "3"},
        "initial": {"kind": "geodesic", "a": "1.0", "b": "1.0"},
        "monitors": {"names": "all"},
    },
    "dwm_uncoupled_exact": {
        "scenario": {"model": "dirac_wave_map"},
        "grid": {"length": "6.283185307179586", "n": "64"},
        "time": {"steps": "16", "output_every": "1"},
        "params": {"target": "sphere", "q": "3"},
        "initial": {"kind": "uncoupled", "a": "1.0", "b": "1.0"},
        "monitors": {"names": "all"},
    },
    "dwm_random_smooth": {
        "scenario": {"model": "dirac_wave_map"},
        "grid": {"length": "6.283185307179586", "n": "64"},
        "time": {"steps": "16", "output_every": "1"},
        "params": {"target": "sphere", "q": "3"},
        "initial": {"kind": "dwm_random", "seed": "5", "amplitude": "0.2",
                    "n_modes": "4"},
        "monitors": {"names": "all"},
    },
    "gronwall_pair": {
        "scenario": {"model": "thirring"},
        "grid": {"length": "6.283185307179586", "n": "64"},
        "time": {"steps": "16", "output_every": "1"},
        "params": {"lambda": "1.0", "kappa": "1.0", "delta": "1e-6"},
        "initial": {"kind": "spinor", "seed": "3", "amplitude": "0.5",
                    "n_modes": "6"},
        "monitors": {"names": "all"},
    },
}


def preset_names() -> list:
    return sorted(PRESETS)
