"""Simulation library for linear and nonlinear Dirac-type equations on
1+1-dimensional Minkowski space, with every conserved energy, identity and
exact solution wired up as a runtime monitor or residual oracle.

Conventions (fixed once, used everywhere):
  metric          g = diag(+1, -1) in coordinates (t, x)
  Clifford        X.Y + Y.X = +2 g(X,Y), gamma_t^2 = +1, gamma_x^2 = -1
  representation  gamma_t = [[0,1],[1,0]], gamma_x = [[0,1],[-1,0]]
  pairing         <xi,psi> = psi^dagger A xi with A = [[0,1],[1,0]]
  beta norm       |psi|_beta^2 = <gamma_t psi, psi> = |u|^2 + |v|^2
  CFL             dt = dx everywhere; chiral transport is an exact index shift
"""

from .grid import Grid, History, shift, central_diff, integrate, box_residual
from .clifford import (
    CliffordRep,
    TangentVector,
    default_rep,
    clifford_mul,
    indef_product,
    beta_norm_sq,
    validate_rep,
)

__version__ = "0.1.0"
