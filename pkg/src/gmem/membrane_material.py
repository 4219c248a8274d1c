"""Membrane constitutive models for a hexagonal 2D crystal.

Two models share one energy functional: the fast metric model evaluates it
on polynomial invariant surrogates (f1, f2) of C with fully analytic stress
and tangent, and the logarithmic reference model evaluates it on the exact
invariants of (1/2) ln C through the spectral decomposition. Units: lengths
nm, forces nN, so surface stresses and energy densities are N/m.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .invariants import DEFAULT_APPROX, InvariantState
from .lattice import LatticeFrame
from .surface_tensors import (
    FrameMismatchError,
    NotPositiveDefiniteError,
    SurfTensor2,
    Tangent4,
    boxtimes_product,
    oplus_product,
    sqrt_spd,
    tangent_from_pairs,
    tensor_product,
)

_E1 = DEFAULT_APPROX.e1
_E2 = DEFAULT_APPROX.e2
_G1 = DEFAULT_APPROX.g1
_G2 = DEFAULT_APPROX.g2


@dataclass(frozen=True, slots=True)
class MaterialParams:
    """Calibrated constants of the membrane energy, all moduli in N/m."""

    alpha_hat: float
    epsilon: float
    mu0: float
    mu1: float
    beta_hat: float
    eta0: float
    eta1: float
    name: str = ""


GGA = MaterialParams(1.53, 93.84, 172.18, 27.03, 5.16, 94.65, 4393.26, name="GGA")
LDA = MaterialParams(1.38, 116.43, 164.17, 17.31, 6.22, 86.9, 3611.5, name="LDA")
PARAM_SETS = {"GGA": GGA, "LDA": LDA}


def material_preset(name: str) -> MaterialParams:
    try:
        return PARAM_SETS[name]
    except KeyError:
        raise ValueError(f"unknown parameter set {name!r}; "
                         f"choose from {sorted(PARAM_SETS)}") from None


@dataclass(frozen=True, slots=True)
class CoefficientSet:
    """Stress coefficients H1..H3, the anisotropy amplitudes aM, aN, and the
    nine partial derivatives dH[i][j] = dHi/dJj used by the tangent."""

    H1: float
    H2: float
    H3: float
    aM: float
    aN: float
    dH: tuple


@dataclass(frozen=True, slots=True)
class StressResult:
    """2.PK stress S plus its Kirchhoff and Cauchy push-forwards (computed
    with the rotation-free stretch F = sqrt(C)) and the energy density."""

    S: SurfTensor2
    tau: SurfTensor2
    sigma: SurfTensor2
    W: float


def _unpack(c: SurfTensor2, frame: LatticeFrame):
    m = frame.m_hat
    if c.frame_tag != m.frame_tag:
        raise FrameMismatchError(
            f"frame mismatch: {c.frame_tag!r} vs {m.frame_tag!r}")
    return (c.c11, c.c22, c.c12, m.c11, m.c12,
            frame.n_hat.c11, frame.n_hat.c12)


def _metric_scalars(c11, c22, c12, m11, m12, n11, n12):
    """Invariant scalars and inverse components of a metric-model state."""
    det = c11 * c22 - c12 * c12
    if not (det > 0.0 and c11 + c22 > 0.0):
        raise NotPositiveDefiniteError(
            f"C is not positive definite: det={det}, tr={c11 + c22}")
    J = math.sqrt(det)
    lnJ = 0.5 * math.log(det)
    i11 = c22 / det
    i22 = c11 / det
    i12 = -c12 / det
    p11 = 0.5 * (c11 - c22) / J
    p12 = c12 / J
    J2 = p11 * p11 + p12 * p12
    dm = 2.0 * p11
    cb12 = c12 / J
    mC = m11 * dm + 2.0 * m12 * cb12
    nC = n11 * dm + 2.0 * n12 * cb12
    J3 = 0.125 * mC * (mC * mC - 3.0 * nC * nC)
    return J, lnJ, i11, i22, i12, p11, p12, J2, mC, nC, J3


def _h_coefficients(J, lnJ, J2, J3, p: MaterialParams, order: int):
    """Energy W, coefficients (H1, H2, H3), and for order >= 2 the table of
    partials dHi/dJj, all analytic."""
    Jb = J ** p.beta_hat
    mu = p.mu0 - p.mu1 * Jb
    eta = p.eta0 - p.eta1 * lnJ * lnJ
    f1 = _E1 * J2 - _E2 * J2 * J2
    f2 = J3 * (_G1 - _G2 * J2)
    ea = math.exp(-p.alpha_hat * lnJ)
    a2 = p.alpha_hat * p.alpha_hat
    W = p.epsilon * (1.0 - (1.0 + p.alpha_hat * lnJ) * ea) + 2.0 * mu * f1 + eta * f2
    if order == 0:
        return W, None, None

    e1m = _E1 - 2.0 * _E2 * J2
    g1m = _G1 - _G2 * J2
    H2 = 2.0 * (2.0 * mu * e1m - _G2 * eta * J3)
    H3 = eta * g1m
    mu1b = p.mu1 * p.beta_hat
    H1 = (p.epsilon * a2 * lnJ * ea - 2.0 * mu1b * Jb * f1
          - 2.0 * p.eta1 * lnJ * f2 - H2 * J2 - 3.0 * H3 * J3)
    if order == 1:
        return W, (H1, H2, H3), None

    mu_p = -mu1b * Jb / J
    eta_p = -2.0 * p.eta1 * lnJ / J
    H21 = 2.0 * (2.0 * mu_p * e1m - _G2 * eta_p * J3)
    H22 = -8.0 * mu * _E2
    H23 = -2.0 * _G2 * eta
    H31 = eta_p * g1m
    H32 = -_G2 * eta
    H33 = 0.0
    H11 = (p.epsilon * a2 / J * (1.0 - p.alpha_hat * lnJ) * ea
           - 2.0 * mu1b * p.beta_hat * Jb / J * f1 - 2.0 * p.eta1 / J * f2
           - H21 * J2 - 3.0 * H31 * J3)
    H12 = (-2.0 * mu1b * Jb * e1m + 2.0 * p.eta1 * _G2 * lnJ * J3
           - H2 - H22 * J2 - 3.0 * H32 * J3)
    H13 = -2.0 * p.eta1 * lnJ * g1m + 2.0 * _G2 * eta * J2 - 3.0 * H3
    dH = ((H11, H12, H13), (H21, H22, H23), (H31, H32, H33))
    return W, (H1, H2, H3), dH


def coefficients(c: SurfTensor2, frame: LatticeFrame,
                 p: MaterialParams) -> CoefficientSet:
    cc = _unpack(c, frame)
    J, lnJ, *_rest = _metric_scalars(*cc)
    _i11, _i22, _i12, _p11, _p12, J2, mC, nC, J3 = _rest
    _w, (H1, H2, H3), dH = _h_coefficients(J, lnJ, J2, J3, p, order=2)
    aM = 3.0 * (mC * mC - nC * nC)
    aN = -6.0 * mC * nC
    return CoefficientSet(H1, H2, H3, aM, aN, dH)


def energy_metric(c: SurfTensor2, frame: LatticeFrame, p: MaterialParams) -> float:
    cc = _unpack(c, frame)
    J, lnJ, _i11, _i22, _i12, _p11, _p12, J2, _mC, _nC, J3 = _metric_scalars(*cc)
    W, _h, _d = _h_coefficients(J, lnJ, J2, J3, p, order=0)
    return W


def _metric_stress_core(cc, p: MaterialParams):
    """Returns (W, S pair triple) for raw components."""
    J, lnJ, i11, i22, i12, p11, p12, J2, mC, nC, J3 = _metric_scalars(*cc)
    W, (H1, H2, H3), _d = _h_coefficients(J, lnJ, J2, J3, p, order=1)
    m11, m12, n11, n12 = cc[3], cc[4], cc[5], cc[6]
    aM = 3.0 * (mC * mC - nC * nC)
    aN = -6.0 * mC * nC
    z11 = aM * m11 + aN * n11
    z12 = aM * m12 + aN * n12
    qh = H2 / J
    rh = 0.25 * H3 / J
    s11 = H1 * i11 + qh * p11 + rh * z11
    s22 = H1 * i22 - qh * p11 - rh * z11
    s12 = H1 * i12 + qh * p12 + rh * z12
    return W, (s11, s22, s12)


def _sym_sandwich(u, s):
    """(U S U) for symmetric pair triples u, s."""
    u11, u22, u12 = u
    s11, s22, s12 = s
    t11 = u11 * s11 + u12 * s12
    t12 = u11 * s12 + u12 * s22
    t21 = u12 * s11 + u22 * s12
    t22 = u12 * s12 + u22 * s22
    return (t11 * u11 + t12 * u12, t21 * u12 + t22 * u22, t11 * u12 + t12 * u22)


def _package_stress(c: SurfTensor2, W, s_pair) -> StressResult:
    tag = c.frame_tag
    S = SurfTensor2(*s_pair, tag)
    u = sqrt_spd(c)
    tau_pair = _sym_sandwich((u.c11, u.c22, u.c12), s_pair)
    tau = SurfTensor2(*tau_pair, tag)
    J = math.sqrt(c.det())
    sigma = tau.scaled(1.0 / J)
    return StressResult(S, tau, sigma, W)


def stress_metric(c: SurfTensor2, frame: LatticeFrame,
                  p: MaterialParams) -> StressResult:
    W, s_pair = _metric_stress_core(_unpack(c, frame), p)
    return _package_stress(c, W, s_pair)


_ISO_PAIRS = ((1.0, -1.0, 0.0), (-1.0, 1.0, 0.0), (0.0, 0.0, 1.0))


def _sym_square_pairs(a):
    """Pair matrix of (A [x] A + A (+) A) for a symmetric A."""
    a0, a1, a2 = a
    return ((2.0 * a0 * a0, 2.0 * a2 * a2, 2.0 * a0 * a2),
            (2.0 * a2 * a2, 2.0 * a1 * a1, 2.0 * a1 * a2),
            (2.0 * a0 * a2, 2.0 * a1 * a2, a0 * a1 + a2 * a2))


def _metric_tangent_core(cc, p: MaterialParams):
    """Returns (W, S triple, tangent 3x3 pair matrix), all analytic."""
    J, lnJ, i11, i22, i12, p11, p12, J2, mC, nC, J3 = _metric_scalars(*cc)
    W, (H1, H2, H3), dH = _h_coefficients(J, lnJ, J2, J3, p, order=2)
    (H11, H12, H13), (H21, H22, H23), (H31, H32, H33) = dH
    m11, m12, n11, n12 = cc[3], cc[4], cc[5], cc[6]
    aM = 3.0 * (mC * mC - nC * nC)
    aN = -6.0 * mC * nC
    z11 = aM * m11 + aN * n11
    z12 = aM * m12 + aN * n12
    qh = H2 / J
    rh = 0.25 * H3 / J
    s11 = H1 * i11 + qh * p11 + rh * z11
    s22 = H1 * i22 - qh * p11 - rh * z11
    s12 = H1 * i12 + qh * p12 + rh * z12

    J2i = 1.0 / (J * J)
    g_cc = J * H11 - 2.0 * J2 * H12 - 3.0 * J3 * H13
    g_pp = 2.0 * H22 * J2i
    g_cp = 2.0 * H12 / J
    g_cz = 0.25 * H13 / J
    g_pz = 0.25 * H23 * J2i
    g_inv = -H1
    g_iso = H2 * J2i
    g_k = 3.0 * H3 * J2i

    ci = (i11, i22, i12)
    cp = (p11, -p11, p12)
    zz = (z11, -z11, z12)
    mv = (m11, -m11, m12)
    nv = (n11, -n11, n12)
    sq = _sym_square_pairs(ci)
    g = [[0.0, 0.0, 0.0] for _ in range(3)]
    for a in range(3):
        for b in range(3):
            val = (g_cc * ci[a] * ci[b]
                   + g_pp * cp[a] * cp[b]
                   + g_cp * (ci[a] * cp[b] + cp[a] * ci[b])
                   + g_cz * (ci[a] * zz[b] + zz[a] * ci[b])
                   + g_pz * (cp[a] * zz[b] + zz[a] * cp[b])
                   + g_k * (mC * (mv[a] * mv[b] - nv[a] * nv[b])
                            - nC * (mv[a] * nv[b] + nv[a] * mv[b]))
                   + g_inv * sq[a][b]
                   + g_iso * _ISO_PAIRS[a][b])
            g[a][b] = val
    return W, (s11, s22, s12), g


def tangent_metric(c: SurfTensor2, frame: LatticeFrame,
                   p: MaterialParams) -> Tangent4:
    """Analytic elasticity tensor 2 dS/dC of the metric model."""
    _w, _s, g = _metric_tangent_core(_unpack(c, frame), p)
    return tangent_from_pairs(np.array(g))


def stress_tangent_metric(c: SurfTensor2, frame: LatticeFrame,
                          p: MaterialParams):
    """One-pass (StressResult, Tangent4) evaluation."""
    W, s_pair, g = _metric_tangent_core(_unpack(c, frame), p)
    return _package_stress(c, W, s_pair), tangent_from_pairs(np.array(g))


def _tangent_terms(c: SurfTensor2, frame: LatticeFrame, p: MaterialParams):
    """The tangent as a list of (coefficient, A, B, product-kind) terms with
    kind in {"ot", "op", "bt"}; the direct assembly and the alternative
    component-order assembly are both generated from this list."""
    cc = _unpack(c, frame)
    J, lnJ, i11, i22, i12, p11, p12, J2, mC, nC, J3 = _metric_scalars(*cc)
    _w, (H1, H2, H3), dH = _h_coefficients(J, lnJ, J2, J3, p, order=2)
    (H11, H12, H13), (H21, H22, H23), _h3row = dH
    m11, m12, n11, n12 = cc[3], cc[4], cc[5], cc[6]
    aM = 3.0 * (mC * mC - nC * nC)
    aN = -6.0 * mC * nC
    tag = c.frame_tag
    ci = SurfTensor2(i11, i22, i12, tag)
    cp = SurfTensor2(p11, -p11, p12, tag)
    zz = SurfTensor2(aM * m11 + aN * n11, -(aM * m11 + aN * n11),
                     aM * m12 + aN * n12, tag)
    mv = frame.m_hat
    nv = frame.n_hat
    ident = SurfTensor2(1.0, 1.0, 0.0, tag)
    J2i = 1.0 / (J * J)
    g_cc = J * H11 - 2.0 * J2 * H12 - 3.0 * J3 * H13
    g_pp = 2.0 * H22 * J2i
    g_cp = 2.0 * H12 / J
    g_cz = 0.25 * H13 / J
    g_pz = 0.25 * H23 * J2i
    g_k = 3.0 * H3 * J2i
    terms = [
        (g_cc, ci, ci, "ot"),
        (g_pp, cp, cp, "ot"),
        (g_cp, ci, cp, "ot"), (g_cp, cp, ci, "ot"),
        (g_cz, ci, zz, "ot"), (g_cz, zz, ci, "ot"),
        (g_pz, cp, zz, "ot"), (g_pz, zz, cp, "ot"),
        (g_k * mC, mv, mv, "ot"), (-g_k * mC, nv, nv, "ot"),
        (-g_k * nC, mv, nv, "ot"), (-g_k * nC, nv, mv, "ot"),
        (-H1, ci, ci, "bt"), (-H1, ci, ci, "op"),
        (H2 * J2i, ident, ident, "bt"), (H2 * J2i, ident, ident, "op"),
        (-H2 * J2i, ident, ident, "ot"),
    ]
    return terms


_PRODUCT = {"ot": tensor_product, "op": oplus_product, "bt": boxtimes_product}
# Component-order substitution: (x) -> (+), (+) -> [x], [x] -> (x); all
# arguments here are symmetric so the transposes in the mapping are free.
_OPLUS_SUBST = {"ot": "op", "op": "bt", "bt": "ot"}


def tangent_metric_reference(c: SurfTensor2, frame: LatticeFrame,
                             p: MaterialParams) -> Tangent4:
    """Term-list assembly of the tangent; slow, used to validate the fast
    pair-matrix assembly."""
    out = np.zeros((2, 2, 2, 2))
    for k, a, b, kind in _tangent_terms(c, frame, p):
        out += k * _PRODUCT[kind](a, b).comp
    return Tangent4(out)


def tangent_metric_oplus(c: SurfTensor2, frame: LatticeFrame,
                         p: MaterialParams) -> Tangent4:
    """The tangent assembled directly in the alternative component order
    used for matrix assembly; rearrange() maps it back to the standard
    order."""
    out = np.zeros((2, 2, 2, 2))
    for k, a, b, kind in _tangent_terms(c, frame, p):
        out += k * _PRODUCT[_OPLUS_SUBST[kind]](a, b).comp
    return Tangent4(out, "oplus")


def _log_core(cc, p: MaterialParams, order: int):
    """Spectral evaluation of the logarithmic-strain model.

    Returns (W, S pair triple or None). The stress is the energy gradient
    mapped through the derivative of (1/2) ln C: eigenvalue directions scale
    by 1/Lambda_a, the mixed direction by the divided difference of ln,
    which switches to its analytic limit at near-coincident eigenvalues.
    """
    c11, c22, c12, m11, m12, n11, n12 = cc
    mean = 0.5 * (c11 + c22)
    hd = 0.5 * (c11 - c22)
    disc = math.hypot(hd, c12)
    L1 = mean + disc
    L2 = mean - disc
    if L2 <= 0.0:
        raise NotPositiveDefiniteError(f"C is not positive definite: "
                                       f"eigenvalues {L1}, {L2}")
    th = 0.5 * math.atan2(2.0 * c12, c11 - c22)
    l1 = 0.5 * math.log(L1)
    l2 = 0.5 * math.log(L2)
    J1E = l1 + l2
    ed = 0.5 * (l1 - l2)
    ct, st = math.cos(th), math.sin(th)
    c2t = ct * ct - st * st
    s2t = 2.0 * ct * st
    ed11 = ed * c2t
    ed12 = ed * s2t
    mE = 2.0 * (m11 * ed11 + m12 * ed12)
    nE = 2.0 * (n11 * ed11 + n12 * ed12)
    J2E = 0.25 * (mE * mE + nE * nE)
    J3E = 0.125 * mE * (mE * mE - 3.0 * nE * nE)
    eb = math.exp(p.beta_hat * J1E)
    mu = p.mu0 - p.mu1 * eb
    eta = p.eta0 - p.eta1 * J1E * J1E
    ea = math.exp(-p.alpha_hat * J1E)
    W = (p.epsilon * (1.0 - (1.0 + p.alpha_hat * J1E) * ea)
         + 2.0 * mu * J2E + eta * J3E)
    if order == 0:
        return W, None

    dW1 = (p.epsilon * p.alpha_hat * p.alpha_hat * J1E * ea
           - 2.0 * p.mu1 * p.beta_hat * eb * J2E - 2.0 * p.eta1 * J1E * J3E)
    aME = 3.0 * (mE * mE - nE * nE)
    aNE = -6.0 * mE * nE
    w11 = 0.125 * eta * (aME * m11 + aNE * n11)
    w12 = 0.125 * eta * (aME * m12 + aNE * n12)
    t11 = dW1 + 2.0 * mu * ed11 + w11
    t22 = dW1 - 2.0 * mu * ed11 - w11
    t12 = 2.0 * mu * ed12 + w12
    # into the eigenframe of C
    cc_ = ct * ct
    ss_ = st * st
    cs_ = ct * st
    tp11 = cc_ * t11 + 2.0 * cs_ * t12 + ss_ * t22
    tp22 = ss_ * t11 - 2.0 * cs_ * t12 + cc_ * t22
    tp12 = (cc_ - ss_) * t12 + cs_ * (t22 - t11)
    sp11 = tp11 / L1
    sp22 = tp22 / L2
    if abs(L1 - L2) < 1e-8 * (L1 + L2):
        k12 = 2.0 / (L1 + L2)
    else:
        k12 = (math.log(L1) - math.log(L2)) / (L1 - L2)
    sp12 = tp12 * k12
    s11 = cc_ * sp11 - 2.0 * cs_ * sp12 + ss_ * sp22
    s22 = ss_ * sp11 + 2.0 * cs_ * sp12 + cc_ * sp22
    s12 = cs_ * (sp11 - sp22) + (cc_ - ss_) * sp12
    return W, (s11, s22, s12)


def energy_log(c: SurfTensor2, frame: LatticeFrame, p: MaterialParams) -> float:
    W, _s = _log_core(_unpack(c, frame), p, order=0)
    return W


def stress_log(c: SurfTensor2, frame: LatticeFrame,
               p: MaterialParams) -> StressResult:
    W, s_pair = _log_core(_unpack(c, frame), p, order=1)
    return _package_stress(c, W, s_pair)


LOG_TANGENT_STEP = 1e-5


def _log_tangent_pairs(cc, p: MaterialParams, rel_step=LOG_TANGENT_STEP):
    """Central-difference tangent of the log model, 3x3 pair matrix.

    The reference model's tangent is differenced from its analytic stress;
    only the metric model carries an analytic tangent.
    """
    base = list(cc)
    g = [[0.0, 0.0, 0.0] for _ in range(3)]
    for j in range(3):
        h = rel_step * max(abs(base[j]), 1.0)
        up = list(base)
        dn = list(base)
        up[j] += h
        dn[j] -= h
        _wu, su = _log_core(tuple(up), p, order=1)
        _wd, sd = _log_core(tuple(dn), p, order=1)
        w = 0.5 if j == 2 else 1.0
        for a in range(3):
            g[a][j] = 2.0 * w * (su[a] - sd[a]) / (2.0 * h)
    return g


def tangent_log(c: SurfTensor2, frame: LatticeFrame,
                p: MaterialParams) -> Tangent4:
    g = _log_tangent_pairs(_unpack(c, frame), p)
    return tangent_from_pairs(np.array(g))


def stress_tangent_log(c: SurfTensor2, frame: LatticeFrame,
                       p: MaterialParams):
    cc = _unpack(c, frame)
    W, s_pair = _log_core(cc, p, order=1)
    g = _log_tangent_pairs(cc, p)
    return _package_stress(c, W, s_pair), tangent_from_pairs(np.array(g))


@dataclass(frozen=True)
class CurvilinearComponents:
    """Contravariant components on the reference tangent basis."""

    tau: np.ndarray
    moduli: np.ndarray


def _frame_to_contra(geom) -> np.ndarray:
    """u[i, a] = E_i . A^a for the orthonormal frame E built from the
    reference tangent vectors by Gram-Schmidt."""
    A1 = np.asarray(geom.A_alpha[0], dtype=float)
    A2 = np.asarray(geom.A_alpha[1], dtype=float)
    E1 = A1 / np.linalg.norm(A1)
    E2 = A2 - (A2 @ E1) * E1
    E2 = E2 / np.linalg.norm(E2)
    A_contra_vecs = geom.A_contra @ np.vstack([A1, A2])
    return np.vstack([E1, E2]) @ A_contra_vecs.T


def cauchy_green_from_geometry(geom, frame_tag: str = "default") -> SurfTensor2:
    """Components of C = a_ab A^a (x) A^b in the orthonormal surface frame."""
    u = _frame_to_contra(geom)
    cm = np.einsum("ab,ia,jb->ij", geom.a_cov, u, u)
    return SurfTensor2.from_matrix(cm, frame_tag)


def curvilinear_components(s: StressResult, t: Tangent4,
                           geom) -> CurvilinearComponents:
    """Push orthonormal-frame stress and tangent components to contravariant
    components on the reference parametrization basis. In the thin-shell
    setting these 2.PK components equal the in-plane Kirchhoff components."""
    det = float(np.linalg.det(np.asarray(geom.A_cov, dtype=float)))
    if not det > 0.0:
        raise ValueError("singular reference metric")
    u = _frame_to_contra(geom)
    tau = np.einsum("ij,ia,jb->ab", s.S.as_matrix(), u, u)
    moduli = np.einsum("ijkl,ia,jb,kc,ld->abcd", t.comp, u, u, u, u)
    return CurvilinearComponents(tau, moduli)


def kirchhoff_contravariant_direct(geom, frame: LatticeFrame,
                                   p: MaterialParams) -> np.ndarray:
    """Membrane Kirchhoff components straight from the two surface metrics,
    with no orthonormal-frame detour: invariants from index traces, then
    tau^ab = H1 a^ab + (H2/J^2)(C^ab - tr(C)/2 A^ab) + (H3/4J) Z^ab."""
    A_cov = np.asarray(geom.A_cov, dtype=float)
    a_cov = np.asarray(geom.a_cov, dtype=float)
    detA = float(np.linalg.det(A_cov))
    deta = float(np.linalg.det(a_cov))
    if not (detA > 0.0 and deta > 0.0):
        raise ValueError("singular metric")
    A_up = np.linalg.inv(A_cov)
    a_up = np.linalg.inv(a_cov)
    detC = deta / detA
    J = math.sqrt(detC)
    trC = float(np.sum(a_cov * A_up))
    C_up = A_up @ a_cov @ A_up
    CC = float(np.sum(a_cov * C_up))
    J2 = (CC - 0.5 * trC * trC) / (2.0 * detC)
    u = _frame_to_contra(geom)
    m_up = np.einsum("ij,ia,jb->ab", frame.m_hat.as_matrix(), u, u)
    n_up = np.einsum("ij,ia,jb->ab", frame.n_hat.as_matrix(), u, u)
    mC = float(np.sum(m_up * a_cov)) / J
    nC = float(np.sum(n_up * a_cov)) / J
    J3 = 0.125 * mC * (mC * mC - 3.0 * nC * nC)
    lnJ = math.log(J)
    _w, (H1, H2, H3), _d = _h_coefficients(J, lnJ, J2, J3, p, order=1)
    aM = 3.0 * (mC * mC - nC * nC)
    aN = -6.0 * mC * nC
    return (H1 * a_up
            + H2 / (J * J) * (C_up - 0.5 * trC * A_up)
            + 0.25 * H3 / J * (aM * m_up + aN * n_up))
