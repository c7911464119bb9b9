"""Seeded band-limited data: determinism and resolution independence."""

import numpy as np
import pytest

from diracsim.grid import Grid
from diracsim.initial import (
    band_limited_real,
    band_limited_spinor,
    band_limited_twisted,
    chiral_pulse,
)

TWO_PI = 2.0 * np.pi


def test_deterministic_for_fixed_seed():
    g = Grid(TWO_PI, 64)
    a = band_limited_spinor(g, 42)
    b = band_limited_spinor(g, 42)
    assert np.array_equal(a, b)
    assert not np.array_equal(a, band_limited_spinor(g, 43))


def test_resolution_independence():
    """Coarse samples are the even-index fine samples of the same function."""
    coarse = Grid(TWO_PI, 64)
    fine = Grid(TWO_PI, 128)
    pc = band_limited_spinor(coarse, 5, 0.7, 4)
    pf = band_limited_spinor(fine, 5, 0.7, 4)
    assert np.max(np.abs(pf[::2] - pc)) <= 1e-12
    rc = band_limited_real(coarse, 9, 1.0, 4)
    rf = band_limited_real(fine, 9, 1.0, 4)
    assert np.max(np.abs(rf[::2] - rc)) <= 1e-12


def test_shapes_and_band_limit_guard():
    g = Grid(TWO_PI, 64)
    assert band_limited_spinor(g, 0).shape == (64, 2)
    assert band_limited_real(g, 0).shape == (64,)
    assert band_limited_twisted(g, 3, 0).shape == (64, 2, 3)
    with pytest.raises(ValueError):
        band_limited_spinor(g, 0, n_modes=9)


def test_real_field_is_real_and_mean_zero():
    g = Grid(TWO_PI, 64)
    f = band_limited_real(g, 3)
    assert f.dtype.kind == "f"
    assert abs(np.mean(f)) <= 1e-13


def test_chiral_pulse_is_right_moving_only():
    g = Grid(TWO_PI, 64)
    psi = chiral_pulse(g, 7)
    assert np.all(psi[:, 1] == 0.0)
    assert np.max(np.abs(psi[:, 0])) > 0.0
