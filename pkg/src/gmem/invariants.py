"""Deformation invariants of the membrane kernel.

Three sets: the area-split invariants of the right surface Cauchy-Green
tensor C, the exact logarithmic-strain invariants, and the two-constant
polynomial approximations f1, f2 that replace the exact ones in the fast
membrane model. A nine-scalar extension couples C with a curvature tensor.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .lattice import LatticeFrame, structural_contraction
from .surface_tensors import SurfTensor2, spectral


@dataclass(frozen=True, slots=True)
class InvariantState:
    """Area stretch J1, shear invariant J2, anisotropy invariant J3, and the
    two structural contractions of the area-invariant tensor they derive
    from."""

    J1: float
    J2: float
    J3: float
    mC: float
    nC: float


@dataclass(frozen=True, slots=True)
class LogInvariantState:
    J1E: float
    J2E: float
    J3E: float


@dataclass(frozen=True, slots=True)
class ApproxConstants:
    """Fitted constants of the polynomial shear/anisotropy approximation."""

    e1: float = 0.25
    e2: float = 0.0811
    g1: float = 0.125
    g2: float = 0.06057


DEFAULT_APPROX = ApproxConstants()


@dataclass(frozen=True, slots=True)
class CurvatureInvariants:
    """Joint invariants of C and a symmetric curvature tensor kappa.

    J1..J3 are the membrane invariants; J4, J5 are mean and Gaussian
    curvature; J6 is the pure curvature anisotropy invariant; J7..J9 couple
    stretch and curvature.
    """

    J1: float
    J2: float
    J3: float
    J4: float
    J5: float
    J6: float
    J7: float
    J8: float
    J9: float


def invariants_C(c: SurfTensor2, frame: LatticeFrame) -> InvariantState:
    """Invariants of C: J1 = sqrt(det C), J2 = (1/2) Cp:Cp with Cp the
    traceless part of C/J1, and J3 = ((M:Cb)^3 - 3 (M:Cb)(N:Cb)^2) / 8."""
    c.require_positive_definite()
    J = math.sqrt(c.det())
    cb = c.scaled(1.0 / J)
    half_tr = 0.5 * cb.trace()
    p11 = cb.c11 - half_tr
    p12 = cb.c12
    J2 = p11 * p11 + p12 * p12
    mC = frame.m_hat.ddot(cb)
    nC = frame.n_hat.ddot(cb)
    J3 = 0.125 * (mC ** 3 - 3.0 * mC * nC * nC)
    return InvariantState(J, J2, J3, mC, nC)


def invariants_C_eigen(c: SurfTensor2, frame: LatticeFrame) -> InvariantState:
    """Eigenvalue route to the same invariants, kept as a cross-check.

    J2 = (L1/L2 + L2/L1 - 2)/4 and J3 = ((l1/l2 - l2/l1)^3 cos 6 dtheta)/8
    with l_a the principal stretches and dtheta the angle between the
    maximum-stretch axis and the armchair axis.
    """
    c.require_positive_definite()
    sd = spectral(c)
    J = sd.lambda1 * sd.lambda2
    r = sd.Lambda1 / sd.Lambda2
    J2 = 0.25 * (r + 1.0 / r - 2.0)
    rs = sd.lambda1 / sd.lambda2
    dtheta = sd.theta - frame.theta_lattice
    J3 = 0.125 * (rs - 1.0 / rs) ** 3 * math.cos(6.0 * dtheta)
    cb = c.scaled(1.0 / J)
    return InvariantState(J, J2, J3, frame.m_hat.ddot(cb), frame.n_hat.ddot(cb))


def invariants_log_exact(c: SurfTensor2, frame: LatticeFrame) -> LogInvariantState:
    """Invariants of the logarithmic strain (1/2) ln C.

    J1E = ln(l1 l2), J2E = (ln sqrt(l1/l2))^2, and
    J3E = (ln sqrt(l1/l2))^3 cos 6 dtheta.
    """
    c.require_positive_definite()
    sd = spectral(c)
    J1E = math.log(sd.lambda1 * sd.lambda2)
    lam = 0.5 * math.log(sd.lambda1 / sd.lambda2)
    dtheta = sd.theta - frame.theta_lattice
    return LogInvariantState(J1E, lam * lam, lam ** 3 * math.cos(6.0 * dtheta))


def approx_log_invariants(inv: InvariantState,
                          k: ApproxConstants = DEFAULT_APPROX) -> tuple:
    """Polynomial surrogates f1 = e1 J2 - e2 J2^2 and f2 = J3 (g1 - g2 J2)
    for the exact log invariants J2E, J3E."""
    f1 = k.e1 * inv.J2 - k.e2 * inv.J2 * inv.J2
    f2 = inv.J3 * (k.g1 - k.g2 * inv.J2)
    return f1, f2


def invariants_C_kappa(c: SurfTensor2, kappa: SurfTensor2,
                       frame: LatticeFrame) -> CurvatureInvariants:
    """Nine joint invariants of (C, kappa) under the lattice symmetry.

    Mixed anisotropy invariants are evaluated through the structural triple
    contraction, never through eigenvector angles.
    """
    base = invariants_C(c, frame)
    J = base.J1
    cb = c.scaled(1.0 / J)
    J4 = 0.5 * kappa.trace()
    J5 = kappa.det()
    J6 = 0.125 * structural_contraction(frame, kappa, kappa, kappa)
    J7 = 0.5 * cb.ddot(kappa)
    J8 = 0.125 * structural_contraction(frame, cb, cb, kappa)
    J9 = 0.125 * structural_contraction(frame, kappa, kappa, cb)
    return CurvatureInvariants(base.J1, base.J2, base.J3,
                               J4, J5, J6, J7, J8, J9)
