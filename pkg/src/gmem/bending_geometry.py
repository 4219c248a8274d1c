"""Surface kinematics on analytically parametrized surfaces and the
squared-curvature (Canham) bending model.

Geometry records carry reference and current tangent vectors, both metrics
with inverses, curvature components, Christoffel symbols, and the scalar
curvature invariants. Bending energy, stress, moment, and the four bending
tangents are analytic; every derivative is validated elsewhere against
central differences that treat (a_ab, b_ab) as independent inputs.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Optional

import numpy as np


@dataclass(frozen=True)
class SurfacePointGeometry:
    """Pointwise first/second fundamental data of a deforming surface.

    Covariant index placement is encoded in names: *_cov holds lower-index
    components, *_contra upper-index ones. gamma[g][a][b] are the current
    surface's Christoffel symbols of the second kind.
    """

    A_alpha: np.ndarray
    a_alpha: np.ndarray
    A_cov: np.ndarray
    A_contra: np.ndarray
    a_cov: np.ndarray
    a_contra: np.ndarray
    b_cov: np.ndarray
    b_contra: np.ndarray
    gamma: np.ndarray
    n: np.ndarray
    J: float
    H: float
    kappa_gauss: float
    k1: float
    k2: float


@dataclass(frozen=True)
class AnalyticSurface:
    """Closed-form parametrization x(u, v) with analytic derivatives.

    jacobian returns rows d x / d xi^alpha, hessian the (2, 2, 3) second
    derivatives. singular, if set, flags parameter points where the
    parametrization degenerates.
    """

    name: str
    position: Callable[[float, float], np.ndarray]
    jacobian: Callable[[float, float], np.ndarray]
    hessian: Callable[[float, float], np.ndarray]
    singular: Optional[Callable[[float, float], bool]] = None


def flat_patch(e1=(1.0, 0.0, 0.0), e2=(0.0, 1.0, 0.0),
               origin=(0.0, 0.0, 0.0)) -> AnalyticSurface:
    """Plane x = origin + u e1 + v e2; skew basis vectors are allowed."""
    e1 = np.asarray(e1, dtype=float)
    e2 = np.asarray(e2, dtype=float)
    origin = np.asarray(origin, dtype=float)
    jac = np.vstack([e1, e2])
    zero2 = np.zeros((2, 2, 3))
    return AnalyticSurface(
        "flat-patch",
        lambda u, v: origin + u * e1 + v * e2,
        lambda u, v: jac.copy(),
        lambda u, v: zero2.copy(),
    )


def cylinder_surface(radius: float) -> AnalyticSurface:
    """Arc-length parametrized cylinder of radius R; (u, v) = (arc, axial).

    The winding sense is chosen so the normal points toward the axis, which
    makes both principal curvatures non-negative: k = (1/R, 0).
    """
    R = float(radius)

    def pos(u, v):
        return np.array([R * math.cos(u / R), -R * math.sin(u / R), v])

    def jac(u, v):
        return np.array([[-math.sin(u / R), -math.cos(u / R), 0.0],
                         [0.0, 0.0, 1.0]])

    def hess(u, v):
        out = np.zeros((2, 2, 3))
        out[0, 0] = [-math.cos(u / R) / R, math.sin(u / R) / R, 0.0]
        return out

    return AnalyticSurface("cylinder", pos, jac, hess)


def sphere_surface(radius: float) -> AnalyticSurface:
    """Sphere of radius R with (u, v) = (azimuth, polar angle), ordered so
    the normal points inward and k = (1/R, 1/R). Poles are singular."""
    R = float(radius)

    def pos(u, v):
        return np.array([R * math.sin(v) * math.cos(u),
                         R * math.sin(v) * math.sin(u),
                         R * math.cos(v)])

    def jac(u, v):
        return np.array([
            [-R * math.sin(v) * math.sin(u), R * math.sin(v) * math.cos(u), 0.0],
            [R * math.cos(v) * math.cos(u), R * math.cos(v) * math.sin(u),
             -R * math.sin(v)],
        ])

    def hess(u, v):
        out = np.zeros((2, 2, 3))
        out[0, 0] = [-R * math.sin(v) * math.cos(u),
                     -R * math.sin(v) * math.sin(u), 0.0]
        out[0, 1] = [-R * math.cos(v) * math.sin(u),
                     R * math.cos(v) * math.cos(u), 0.0]
        out[1, 0] = out[0, 1]
        out[1, 1] = [-R * math.sin(v) * math.cos(u),
                     -R * math.sin(v) * math.sin(u), -R * math.cos(v)]
        return out

    return AnalyticSurface("sphere", pos, jac, hess,
                           singular=lambda u, v: abs(math.sin(v)) < 1e-12)


def cone_surface(half_angle: float, tip_offset: float = 0.0) -> AnalyticSurface:
    """Cone with apex half-angle alpha; (u, v) = (azimuth, slant distance).

    Principal curvatures at slant distance s: (cos(alpha)/(s sin(alpha)), 0).
    The apex s = 0 is singular; points with s < tip_offset are rejected so a
    truncated cone can exclude a neighborhood of the tip.
    """
    sa = math.sin(half_angle)
    ca = math.cos(half_angle)
    if not 0.0 < half_angle < 0.5 * math.pi:
        raise ValueError("half_angle must lie in (0, pi/2)")
    cut = max(float(tip_offset), 0.0)

    def pos(u, v):
        return np.array([v * sa * math.cos(u), -v * sa * math.sin(u), v * ca])

    def jac(u, v):
        return np.array([
            [-v * sa * math.sin(u), -v * sa * math.cos(u), 0.0],
            [sa * math.cos(u), -sa * math.sin(u), ca],
        ])

    def hess(u, v):
        out = np.zeros((2, 2, 3))
        out[0, 0] = [-v * sa * math.cos(u), v * sa * math.sin(u), 0.0]
        out[0, 1] = [-sa * math.sin(u), -sa * math.cos(u), 0.0]
        out[1, 0] = out[0, 1]
        return out

    return AnalyticSurface("cone", pos, jac, hess,
                           singular=lambda u, v: v <= cut or v <= 0.0)


def reparametrized(surface: AnalyticSurface, scale_u: float,
                   scale_v: float) -> AnalyticSurface:
    """Same surface under xi -> (scale_u * u, scale_v * v); changes all
    component values but no invariant."""
    su, sv = float(scale_u), float(scale_v)
    sc1 = np.array([su, sv])[:, None]
    sc2 = np.array([[su * su, su * sv], [su * sv, sv * sv]])[:, :, None]

    def sing(u, v):
        return surface.singular(su * u, sv * v) if surface.singular else False

    return AnalyticSurface(
        surface.name + "-reparam",
        lambda u, v: surface.position(su * u, sv * v),
        lambda u, v: sc1 * surface.jacobian(su * u, sv * v),
        lambda u, v: sc2 * surface.hessian(su * u, sv * v),
        singular=sing,
    )


def _curvature_scalars(a_cov, a_contra, b_cov):
    H = 0.5 * float(np.sum(a_contra * b_cov))
    kappa = float(np.linalg.det(b_cov) / np.linalg.det(a_cov))
    disc = math.sqrt(max(H * H - kappa, 0.0))
    return H, kappa, H + disc, H - disc


def evaluate_geometry(surface: AnalyticSurface, xi,
                      reference: Optional[AnalyticSurface] = None,
                      reference_xi=None) -> SurfacePointGeometry:
    """All pointwise geometry of `surface` at parameter point xi.

    With no reference the point is its own reference (J = 1). Otherwise the
    reference surface is evaluated at reference_xi (default: the same xi)
    and J is the area stretch between the two parametrizations.
    """
    u, v = float(xi[0]), float(xi[1])
    if surface.singular is not None and surface.singular(u, v):
        raise ValueError(f"{surface.name}: singular parametrization "
                         f"point ({u}, {v})")
    a_alpha = np.asarray(surface.jacobian(u, v), dtype=float)
    second = np.asarray(surface.hessian(u, v), dtype=float)
    a_cov = a_alpha @ a_alpha.T
    deta = float(np.linalg.det(a_cov))
    if not deta > 0.0:
        raise ValueError(f"{surface.name}: degenerate tangent plane "
                         f"at ({u}, {v})")
    cr = np.cross(a_alpha[0], a_alpha[1])
    n = cr / np.linalg.norm(cr)
    a_contra = np.linalg.inv(a_cov)
    b_cov = np.einsum("abk,k->ab", second, n)
    b_contra = a_contra @ b_cov @ a_contra
    contra_vecs = a_contra @ a_alpha
    gamma = np.einsum("gk,abk->gab", contra_vecs, second)
    if reference is None:
        A_alpha = a_alpha
        A_cov = a_cov
        A_contra = a_contra
        J = 1.0
    else:
        ru, rv = (u, v) if reference_xi is None else (float(reference_xi[0]),
                                                     float(reference_xi[1]))
        A_alpha = np.asarray(reference.jacobian(ru, rv), dtype=float)
        A_cov = A_alpha @ A_alpha.T
        detA = float(np.linalg.det(A_cov))
        if not detA > 0.0:
            raise ValueError("degenerate reference tangent plane")
        A_contra = np.linalg.inv(A_cov)
        J = math.sqrt(deta / detA)
    H, kappa, k1, k2 = _curvature_scalars(a_cov, a_contra, b_cov)
    return SurfacePointGeometry(A_alpha, a_alpha, A_cov, A_contra, a_cov,
                                a_contra, b_cov, b_contra, gamma, n, J, H,
                                kappa, k1, k2)


def geometry_from_metrics(A_cov, a_cov, b_cov) -> SurfacePointGeometry:
    """Geometry record built from metric data alone.

    Used by the derivative checks, which vary a_ab and b_ab independently;
    no embedding compatibility is implied. Tangent vectors are a canonical
    planar realization of each metric and gamma is zero.
    """
    A_cov = np.asarray(A_cov, dtype=float)
    a_cov = np.asarray(a_cov, dtype=float)
    b_cov = np.asarray(b_cov, dtype=float)
    for m in (A_cov, a_cov):
        if not (np.linalg.det(m) > 0.0 and m[0, 0] > 0.0):
            raise ValueError("metric must be positive definite")
    a_alpha = np.zeros((2, 3))
    a_alpha[:, :2] = np.linalg.cholesky(a_cov)
    A_alpha = np.zeros((2, 3))
    A_alpha[:, :2] = np.linalg.cholesky(A_cov)
    a_contra = np.linalg.inv(a_cov)
    A_contra = np.linalg.inv(A_cov)
    J = math.sqrt(np.linalg.det(a_cov) / np.linalg.det(A_cov))
    H, kappa, k1, k2 = _curvature_scalars(a_cov, a_contra, b_cov)
    return SurfacePointGeometry(A_alpha, a_alpha, A_cov, A_contra, a_cov,
                                a_contra, b_cov, a_contra @ b_cov @ a_contra,
                                np.zeros((2, 2, 2)), np.array([0.0, 0.0, 1.0]),
                                J, H, kappa, k1, k2)


def canham_energy(g: SurfacePointGeometry, c_bend: float) -> float:
    """Bending energy density per reference area: J (c/2)(k1^2 + k2^2)."""
    return g.J * 0.5 * c_bend * (g.k1 * g.k1 + g.k2 * g.k2)


def bending_stress_moment(g: SurfacePointGeometry, c_bend: float):
    """Contravariant bending stress and moment components.

    tau_b = J c [(2H^2 + kappa) a^ab - 4 H b^ab], M0 = c J b^ab; both equal
    the (a, b)-partials of the bending energy.
    """
    h = 2.0 * g.H * g.H + g.kappa_gauss
    tau = g.J * c_bend * (h * g.a_contra - 4.0 * g.H * g.b_contra)
    m0 = c_bend * g.J * g.b_contra
    return tau, m0


@dataclass(frozen=True)
class BendingTangents:
    """The four bending moduli: c = 2 dtau/da, d = dtau/db, e = 2 dM0/da,
    f = dM0/db, all contravariant (2, 2, 2, 2) blocks. e equals the major
    transpose of d identically."""

    c: np.ndarray
    d: np.ndarray
    e: np.ndarray
    f: np.ndarray


def bending_tangents(g: SurfacePointGeometry, c_bend: float) -> BendingTangents:
    au = g.a_contra
    bu = g.b_contra
    H = g.H
    kappa = g.kappa_gauss
    pref = g.J * c_bend

    def ot(x, y):
        return np.einsum("ab,gd->abgd", x, y)

    def sym4(x, y):
        return 0.5 * (np.einsum("ag,bd->abgd", x, y)
                      + np.einsum("ad,bg->abgd", x, y))

    a4 = sym4(au, au)
    ab_s = sym4(au, bu) + sym4(bu, au)
    c_t = pref * ((2.0 * H * H - kappa) * ot(au, au)
                  - 4.0 * H * (ot(au, bu) + ot(bu, au))
                  + 4.0 * ot(bu, bu)
                  - 2.0 * (2.0 * H * H + kappa) * a4
                  + 8.0 * H * ab_s)
    d_t = pref * (4.0 * H * ot(au, au) - ot(au, bu) - 2.0 * ot(bu, au)
                  - 4.0 * H * a4)
    e_t = d_t.transpose(2, 3, 0, 1)
    f_t = pref * a4
    return BendingTangents(c_t, d_t, e_t, f_t)
