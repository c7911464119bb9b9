"""Seeded band-limited initial data.

All synthesizers draw their Fourier coefficients before touching the grid,
so a given (seed, n_modes) pair defines one continuum function that can be
sampled on any resolution -- refinement studies evolve the same data.
"""

from __future__ import annotations

import numpy as np

from .grid import Grid


def _mode_table(rng: np.random.Generator, n_modes: int, shape: tuple[int, ...]):
    """Complex coefficients c_k for modes k = 1..n_modes with smooth decay."""
    ks = np.arange(1, n_modes + 1)
    decay = 1.0 / (1.0 + ks**2)
    coeffs = rng.standard_normal((n_modes,) + shape) + 1j * rng.standard_normal((n_modes,) + shape)
    return ks, coeffs * decay.reshape((n_modes,) + (1,) * len(shape))


def _synthesize(grid: Grid, ks, coeffs) -> np.ndarray:
    x = grid.x
    phases = np.exp(2j * np.pi * np.outer(ks, x) / grid.length)  # (n_modes, N)
    out = np.tensordot(phases, coeffs, axes=(0, 0))  # (N,) + shape
    return out


def band_limited_spinor(grid: Grid, seed: int, amplitude: float = 0.5, n_modes: int = 6) -> np.ndarray:
    """Smooth random spinor field (N, 2)."""
    if n_modes > grid.n // 8:
        raise ValueError("n_modes must stay at or below N/8")
    rng = np.random.default_rng(seed)
    ks, coeffs = _mode_table(rng, n_modes, (2,))
    return amplitude * _synthesize(grid, ks, coeffs)


def band_limited_real(grid: Grid, seed: int, amplitude: float = 0.5, n_modes: int = 6) -> np.ndarray:
    """Smooth random real scalar field (N,), zero mean."""
    if n_modes > grid.n // 8:
        raise ValueError("n_modes must stay at or below N/8")
    rng = np.random.default_rng(seed)
    ks, coeffs = _mode_table(rng, n_modes, ())
    return amplitude * np.real(_synthesize(grid, ks, coeffs))


def band_limited_twisted(grid: Grid, rank: int, seed: int, amplitude: float = 0.5,
                         n_modes: int = 6) -> np.ndarray:
    """Smooth random twisted spinor field (N, 2, rank)."""
    if n_modes > grid.n // 8:
        raise ValueError("n_modes must stay at or below N/8")
    rng = np.random.default_rng(seed)
    ks, coeffs = _mode_table(rng, n_modes, (2, rank))
    return amplitude * _synthesize(grid, ks, coeffs)


def chiral_pulse(grid: Grid, seed: int = 7, amplitude: float = 1.0, n_modes: int = 6) -> np.ndarray:
    """Right-moving data: smooth random u component, v identically zero."""
    psi = band_limited_spinor(grid, seed, amplitude, n_modes)
    psi[:, 1] = 0.0
    return psi
