"""Explicitly embedded targets for the coupled map-spinor system.

Targets are described extrinsically: an ambient R^q together with the
second fundamental form II, the shape operator P and the tangent projector
of the embedding.  Two instances cover the interesting and the degenerate
case: the unit sphere S^{q-1} (curved) and the flat torus R^q / (2 pi Z)^q
(totally geodesic image, II = 0, so map and spinor decouple).

Ambient contractions are complex-bilinear in both slots; map fields are
real (N, q) arrays and vector spinors are complex (N, 2, q) arrays with the
ambient index last.
"""

from __future__ import annotations

import numpy as np


def ambient_dot(x: np.ndarray, y: np.ndarray) -> np.ndarray:
    """Bilinear contraction over the trailing ambient index."""
    return np.sum(x * y, axis=-1)


class SphereTarget:
    """Unit sphere S^{q-1} in R^q.

    II(p, X, Y) = -<X, Y> p,  P(p, xi, X) = -<p, xi> X,  Pi_p = I - p p^T.
    """

    def __init__(self, q: int = 3):
        if q < 2:
            raise ValueError("sphere target needs ambient dimension >= 2")
        self.q = q
        self.curved = True

    def ii(self, p: np.ndarray, x: np.ndarray, y: np.ndarray) -> np.ndarray:
        return -ambient_dot(x, y)[..., None] * p

    def ii_spinor(self, p: np.ndarray, x: np.ndarray, xi: np.ndarray) -> np.ndarray:
        """II with a vector-spinor second argument: pairs ambient indices,
        leaves a spinor multiple of the normal p.  x: (N, q), xi: (N, 2, q)."""
        coeff = np.einsum("na,nsa->ns", x, xi)  # (N, 2)
        return -coeff[:, :, None] * p[:, None, :]

    def shape_operator(self, p: np.ndarray, xi: np.ndarray, x: np.ndarray) -> np.ndarray:
        return -ambient_dot(p, xi)[..., None] * x

    def project(self, p: np.ndarray, v: np.ndarray) -> np.ndarray:
        """Tangent projection of an ambient vector field (N, q)."""
        return v - ambient_dot(p, v)[..., None] * p

    def project_spinor(self, p: np.ndarray, psi: np.ndarray) -> np.ndarray:
        """Tangency projection of a vector spinor (N, 2, q)."""
        coeff = np.einsum("na,nsa->ns", p, psi)
        return psi - coeff[:, :, None] * p[:, None, :]

    def normalize(self, phi: np.ndarray) -> np.ndarray:
        return phi / np.linalg.norm(phi, axis=-1, keepdims=True)

    def constraint_defect(self, phi: np.ndarray) -> float:
        return float(np.max(np.abs(np.linalg.norm(phi, axis=-1) - 1.0)))


class FlatTorusTarget:
    """Flat torus: ambient coordinates are the chart, II = 0, no constraint."""

    def __init__(self, q: int = 3):
        self.q = q
        self.curved = False

    def ii(self, p, x, y):
        return np.zeros_like(p)

    def ii_spinor(self, p, x, xi):
        return np.zeros_like(xi)

    def shape_operator(self, p, xi, x):
        return np.zeros_like(x)

    def project(self, p, v):
        return v

    def project_spinor(self, p, psi):
        return psi

    def normalize(self, phi):
        return phi

    def constraint_defect(self, phi) -> float:
        return 0.0


def random_tangent(rng: np.random.Generator, phi: np.ndarray,
                   target) -> np.ndarray:
    """Smoothness-free random tangent vector field at phi (for tests)."""
    v = rng.standard_normal(phi.shape)
    return target.project(phi, v)
