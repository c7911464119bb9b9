"""2x2 matrix model of the spinor bundle over 1+1 Minkowski space.

A spinor value is a pair (u, v) of complex numbers, stored as a numpy array
with the spinor index on axis 0 (shape (2,) or (2, r) for r internal
components).  Grid fields put the grid index first, so fields have shape
(N, 2) / (N, 2, r); the field helpers at the bottom assume that layout.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

# Chiral representation: gamma_t^2 = +I, gamma_x^2 = -I,
# gamma_t gamma_x + gamma_x gamma_t = 0, and A gamma_t = I so the beta norm
# is the plain Hermitian norm.  In this basis the free evolution is exactly
# diagonal: u transports right, v transports left.
GAMMA_T = np.array([[0.0, 1.0], [1.0, 0.0]], dtype=complex)
GAMMA_X = np.array([[0.0, 1.0], [-1.0, 0.0]], dtype=complex)
PAIRING = np.array([[0.0, 1.0], [1.0, 0.0]], dtype=complex)

# gamma_t gamma_x = diag(-1, +1); shows up in every chiral decomposition
GAMMA_TX = GAMMA_T @ GAMMA_X


@dataclass(frozen=True)
class TangentVector:
    """Tangent vector a_t d/dt + a_x d/dx of R^{1,1}."""

    a_t: float
    a_x: float


D_T = TangentVector(1.0, 0.0)
D_X = TangentVector(0.0, 1.0)


def minkowski(x: TangentVector, y: TangentVector) -> float:
    """g(X, Y) with signature (+, -)."""
    return x.a_t * y.a_t - x.a_x * y.a_x


@dataclass(frozen=True)
class CliffordRep:
    gamma_t: np.ndarray
    gamma_x: np.ndarray
    pairing: np.ndarray


def default_rep() -> CliffordRep:
    return CliffordRep(GAMMA_T.copy(), GAMMA_X.copy(), PAIRING.copy())


def gamma_of(x: TangentVector, rep: CliffordRep | None = None) -> np.ndarray:
    """Matrix of Clifford multiplication by X."""
    rep = rep or _DEFAULT
    return x.a_t * rep.gamma_t + x.a_x * rep.gamma_x


def clifford_mul(x: TangentVector, psi: np.ndarray, rep: CliffordRep | None = None) -> np.ndarray:
    """X . psi for a spinor value (spinor index on axis 0)."""
    return np.einsum("ab,b...->a...", gamma_of(x, rep), np.asarray(psi, dtype=complex))


def indef_product(xi: np.ndarray, psi: np.ndarray, rep: CliffordRep | None = None) -> complex:
    """Indefinite Hermitian product <xi, psi> = psi^dagger A xi.

    Linear in the first slot, anti-linear in the second.  Internal components
    (trailing axes) are contracted with the standard Hermitian product.
    """
    rep = rep or _DEFAULT
    xi = np.asarray(xi, dtype=complex)
    psi = np.asarray(psi, dtype=complex)
    return complex(np.sum(np.conj(psi) * np.einsum("ab,b...->a...", rep.pairing, xi)))


def beta_norm_sq(psi: np.ndarray) -> float:
    """|psi|_beta^2 = <gamma_t psi, psi>; equals |u|^2 + |v|^2 in this rep."""
    psi = np.asarray(psi)
    return float(np.sum(np.abs(psi) ** 2))


def validate_rep(rep: CliffordRep, tol: float = 1e-12) -> list[str]:
    """Names of violated representation invariants (empty list iff valid)."""
    gt, gx, a = rep.gamma_t, rep.gamma_x, rep.pairing
    eye = np.eye(2)
    bad = []
    if not np.allclose(gt @ gt, eye, atol=tol, rtol=0.0):
        bad.append("gamma_t_square")
    if not np.allclose(gx @ gx, -eye, atol=tol, rtol=0.0):
        bad.append("gamma_x_square")
    if not np.allclose(gt @ gx + gx @ gt, 0.0, atol=tol, rtol=0.0):
        bad.append("anticommutation")
    if not np.allclose(a, a.conj().T, atol=tol, rtol=0.0):
        bad.append("pairing_hermitian")
    if not np.allclose(a @ gt, gt.conj().T @ a, atol=tol, rtol=0.0):
        bad.append("compatibility_t")
    if not np.allclose(a @ gx, gx.conj().T @ a, atol=tol, rtol=0.0):
        bad.append("compatibility_x")
    if not np.allclose(a @ gt, eye, atol=tol, rtol=0.0):
        bad.append("normalization")
    return bad


_DEFAULT = default_rep()


# ---------------------------------------------------------------------------
# Field-level helpers: arrays of shape (N, 2, ...extra), spinor index axis 1.
# ---------------------------------------------------------------------------

def field_gamma(mat: np.ndarray, psi: np.ndarray) -> np.ndarray:
    """Apply a 2x2 spinor matrix pointwise to a field (N, 2, ...)."""
    return np.einsum("ab,ib...->ia...", mat, psi)


def beta_density(psi: np.ndarray) -> np.ndarray:
    """Pointwise |psi|_beta^2, internal components summed.  Shape (N,)."""
    return np.sum(np.abs(psi) ** 2, axis=tuple(range(1, psi.ndim)))


def x_density(psi: np.ndarray) -> np.ndarray:
    """Pointwise <gamma_x psi, psi> = |v|^2 - |u|^2 (real)."""
    diff = np.abs(psi[:, 1, ...]) ** 2 - np.abs(psi[:, 0, ...]) ** 2
    if diff.ndim > 1:
        diff = np.sum(diff, axis=tuple(range(1, diff.ndim)))
    return diff


def s_density(psi: np.ndarray) -> np.ndarray:
    """Pointwise <i gamma_x gamma_t psi, psi> = 2 Im(conj(u) v) (real)."""
    prod = np.conj(psi[:, 0, ...]) * psi[:, 1, ...]
    if prod.ndim > 1:
        prod = np.sum(prod, axis=tuple(range(1, prod.ndim)))
    return 2.0 * np.imag(prod)


def indef_density(xi: np.ndarray, psi: np.ndarray) -> np.ndarray:
    """Pointwise <xi, psi> = psi^dagger A xi, internal components summed."""
    paired = np.einsum("ab,ib...->ia...", PAIRING, xi)
    prod = np.conj(psi) * paired
    return np.sum(prod, axis=tuple(range(1, prod.ndim)))
