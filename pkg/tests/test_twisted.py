"""Twisted spinors: connection validation, curvature, unitarity, the
second-order wave identity of the twisted Dirac square."""

import numpy as np
import pytest

from diracsim.clifford import beta_density
from diracsim.grid import Grid, History, integrate
from diracsim.initial import band_limited_spinor, band_limited_twisted
from diracsim.linear_dirac import massive_step
from diracsim.twisted import (
    Connection,
    TwistedStepper,
    abelian_connection,
    covariant_t,
    covariant_x,
    curvature,
    flat_connection,
    twisted_step,
    weitzenboeck_defect,
)

TWO_PI = 2.0 * np.pi


def test_connection_validation_rejects_bad_samplers():
    g = Grid(TWO_PI, 64)
    wrong_shape = Connection(g, 2, lambda t: np.zeros((g.n, 1, 1), complex),
                             lambda t: np.zeros((g.n, 2, 2), complex))
    with pytest.raises(ValueError):
        wrong_shape.validate()
    hermitian = np.ones((g.n, 1, 1), dtype=complex)  # not skew
    not_skew = Connection(g, 1, lambda t: hermitian,
                          lambda t: np.zeros((g.n, 1, 1), complex))
    with pytest.raises(ValueError):
        not_skew.validate()
    abelian_connection(g).validate()


def test_abelian_curvature_matches_closed_form():
    g = Grid(TWO_PI, 64)
    conn = abelian_connection(g, strength=0.8)
    r = curvature(conn)
    expected = -1j * 0.8 * (TWO_PI / g.length) * np.cos(TWO_PI * g.x / g.length)
    assert np.max(np.abs(r[:, 0, 0] - expected)) <= 1e-10


def test_curvature_time_derivative_fallback():
    """A time-dependent connection without analytic derivatives falls back
    to a finite difference that matches the analytic curvature."""
    g = Grid(TWO_PI, 64)
    base = 1j * np.sin(TWO_PI * g.x / g.length).reshape(g.n, 1, 1)

    def a_x(t):
        return np.cos(t) * base

    zero = np.zeros((g.n, 1, 1), complex)
    conn_fd = Connection(g, 1, lambda t: zero, a_x, time_dependent=True)
    conn_exact = Connection(g, 1, lambda t: zero, a_x,
                            da_t_dt=lambda t: zero,
                            da_x_dt=lambda t: -np.sin(t) * base,
                            time_dependent=True)
    r_fd = curvature(conn_fd, 0.4)
    r_exact = curvature(conn_exact, 0.4)
    assert np.max(np.abs(r_fd - r_exact)) <= 1e-8


def test_flat_connection_reduces_to_untwisted_solver():
    g = Grid(TWO_PI, 64)
    psi = band_limited_spinor(g, 11)[:, :, None]  # rank-1 twisted shape
    conn = flat_connection(g, 1)
    out = twisted_step(psi, conn, 1.0, g.dx)
    ref = massive_step(psi[:, :, 0], 1.0, g.dx)
    assert np.max(np.abs(out[:, :, 0] - ref)) <= 1e-13


def test_twisted_step_preserves_beta_norm_pointwise_up_to_transport():
    """The zero-order substep is exactly unitary pointwise, so the integrated
    beta density is machine-conserved even on curved backgrounds."""
    g = Grid(TWO_PI, 64)
    conn = abelian_connection(g, 1.0)
    psi = band_limited_twisted(g, 1, 13, 0.5)
    e0 = integrate(g, beta_density(psi))
    stepper = TwistedStepper(conn, 1.0, g.dx)
    for k in range(48):
        psi = stepper.step(psi, k * g.dx)
    assert abs(integrate(g, beta_density(psi)) - e0) <= 1e-12 * e0


def test_stepper_rejects_bad_dt_and_shape():
    g = Grid(TWO_PI, 64)
    conn = abelian_connection(g)
    with pytest.raises(ValueError):
        TwistedStepper(conn, 1.0, 0.5 * g.dx)
    stepper = TwistedStepper(conn, 1.0, g.dx)
    with pytest.raises(ValueError):
        stepper.step(np.zeros((g.n, 2, 2), complex))


def test_covariant_derivatives_reduce_to_plain_for_flat():
    g = Grid(TWO_PI, 64)
    conn = flat_connection(g, 1)
    psi = band_limited_twisted(g, 1, 3)
    from diracsim.grid import central_diff
    assert np.max(np.abs(covariant_x(conn, psi) - central_diff(g, psi))) == 0.0
    h = History(psi, psi, psi, g.dx)
    assert np.max(np.abs(covariant_t(conn, h) - h.time_derivative())) == 0.0


def _smooth_window(grid, dt, t0=0.0):
    """Five levels of a closed-form smooth field exp(i(2x - 3t)) chi."""
    chi = np.array([[0.7 + 0.2j], [-0.4 + 0.9j]])
    out, times = [], []
    for k in range(-2, 3):
        t = t0 + k * dt
        phase = np.exp(1j * (2.0 * grid.x - 3.0 * t))
        out.append(phase[:, None, None] * chi[None, :, :])
        times.append(t)
    return out, times


def test_weitzenboeck_identity_second_order():
    """(D^F)^2 = covariant box minus gamma_t gamma_x R^F, discretely O(h^2)."""
    defects = []
    for n in (64, 128):
        g = Grid(TWO_PI, n)
        conn = abelian_connection(g, 1.0)
        window, times = _smooth_window(g, g.dx)
        defects.append(np.max(np.abs(weitzenboeck_defect(window, conn, times))))
    assert 3.2 <= defects[0] / defects[1] <= 4.8


def test_weitzenboeck_wrong_curvature_sign_is_order_one():
    """Flipping the curvature term leaves an O(1) defect: the identity is
    sensitive to the sign, so the check cannot pass by accident."""
    g = Grid(TWO_PI, 128)
    conn = abelian_connection(g, 1.0)
    window, times = _smooth_window(g, g.dx)
    good = np.max(np.abs(weitzenboeck_defect(window, conn, times)))
    bad = np.max(np.abs(weitzenboeck_defect(window, conn, times, rhs_sign=+1.0)))
    assert bad > 50.0 * good


def test_weitzenboeck_needs_five_levels():
    g = Grid(TWO_PI, 64)
    conn = abelian_connection(g)
    window, times = _smooth_window(g, g.dx)
    with pytest.raises(ValueError):
        weitzenboeck_defect(window[:3], conn, times[:3])
