"""Surface geometry evaluation and the curvature-quadratic bending model."""

import math

import numpy as np
import pytest

from gmem import bending_geometry as bg

CB = 0.238

A0 = np.array([[1.1, 0.1], [0.1, 0.9]])
a0 = np.array([[1.3, -0.2], [-0.2, 0.8]])
b0 = np.array([[0.35, 0.22], [0.22, -0.15]])


def pair_of(t4):
    return np.array([
        [t4[0, 0, 0, 0], t4[0, 0, 1, 1], t4[0, 0, 0, 1]],
        [t4[1, 1, 0, 0], t4[1, 1, 1, 1], t4[1, 1, 0, 1]],
        [t4[0, 1, 0, 0], t4[0, 1, 1, 1], t4[0, 1, 0, 1]],
    ])


def test_flat_patch_geometry():
    g = bg.evaluate_geometry(bg.flat_patch(), (0.7, -0.3))
    assert g.J == 1.0
    assert g.H == 0.0 and g.kappa_gauss == 0.0
    assert np.all(g.b_cov == 0.0)
    assert np.all(g.gamma == 0.0)
    np.testing.assert_allclose(g.n, [0.0, 0.0, 1.0])
    assert bg.canham_energy(g, CB) == 0.0


def test_flat_patch_degenerate_basis_rejected():
    bad = bg.flat_patch(e1=(1.0, 0.0, 0.0), e2=(2.0, 0.0, 0.0))
    with pytest.raises(ValueError):
        bg.evaluate_geometry(bad, (0.0, 0.0))


def test_cylinder_curvatures():
    g = bg.evaluate_geometry(bg.cylinder_surface(2.0), (0.4, 1.7))
    assert g.H == pytest.approx(0.25, rel=1e-13)
    assert abs(g.kappa_gauss) < 1e-14
    assert g.k1 == pytest.approx(0.5, rel=1e-13)
    assert abs(g.k2) < 1e-13
    # arc-length coordinates: unit metric, flat connection
    np.testing.assert_allclose(g.a_cov, np.eye(2), atol=1e-14)
    np.testing.assert_allclose(g.gamma, 0.0, atol=1e-14)


def test_cylinder_closed_forms_against_flat_reference():
    g = bg.evaluate_geometry(bg.cylinder_surface(1.0), (0.9, 0.4),
                             reference=bg.flat_patch())
    assert g.J == pytest.approx(1.0, rel=1e-13)
    assert bg.canham_energy(g, CB) == pytest.approx(0.5 * CB, rel=1e-12)
    tau, m0 = bg.bending_stress_moment(g, CB)
    np.testing.assert_allclose(m0, np.diag([CB, 0.0]), atol=1e-13)
    np.testing.assert_allclose(tau, np.diag([-1.5 * CB, 0.5 * CB]),
                               atol=1e-13)


def test_sphere_curvatures_and_isotropic_stress():
    r = 2.0
    g = bg.evaluate_geometry(bg.sphere_surface(r), (0.7, 1.0))
    assert g.H == pytest.approx(1.0 / r, rel=1e-12)
    assert g.kappa_gauss == pytest.approx(1.0 / r ** 2, rel=1e-12)
    tau, m0 = bg.bending_stress_moment(g, CB)
    # an umbilic point: mixed components are isotropic
    np.testing.assert_allclose(tau @ g.a_cov, -(CB / r ** 2) * np.eye(2),
                               atol=1e-14)
    np.testing.assert_allclose(m0 @ g.a_cov, (CB / r) * np.eye(2),
                               atol=1e-14)


def test_sphere_christoffel_symbols():
    g = bg.evaluate_geometry(bg.sphere_surface(2.0), (0.7, 1.0))
    cot = math.cos(1.0) / math.sin(1.0)
    assert g.gamma[0, 0, 1] == pytest.approx(cot, rel=1e-12)
    assert g.gamma[0, 1, 0] == pytest.approx(cot, rel=1e-12)
    assert g.gamma[1, 0, 0] == pytest.approx(-math.sin(1.0) * math.cos(1.0),
                                             rel=1e-12)


def test_sphere_pole_is_singular():
    s = bg.sphere_surface(1.0)
    with pytest.raises(ValueError):
        bg.evaluate_geometry(s, (0.3, 0.0))
    with pytest.raises(ValueError):
        bg.evaluate_geometry(s, (0.3, math.pi))


def test_cone_curvature_and_apex_guard():
    alpha = math.pi / 6.0
    g = bg.evaluate_geometry(bg.cone_surface(alpha), (0.3, 2.0))
    assert g.k1 == pytest.approx(
        math.cos(alpha) / (2.0 * math.sin(alpha)), rel=1e-12)
    assert abs(g.k2) < 1e-13
    with pytest.raises(ValueError):
        bg.evaluate_geometry(bg.cone_surface(alpha), (0.3, 0.0))
    trunc = bg.cone_surface(alpha, tip_offset=0.5)
    with pytest.raises(ValueError):
        bg.evaluate_geometry(trunc, (0.3, 0.4))
    bg.evaluate_geometry(trunc, (0.3, 0.6))
    with pytest.raises(ValueError):
        bg.cone_surface(0.0)
    with pytest.raises(ValueError):
        bg.cone_surface(math.pi / 2.0)


def test_reparametrization_leaves_invariants_alone():
    base = bg.evaluate_geometry(bg.cylinder_surface(1.5), (0.8, 0.6))
    rep = bg.reparametrized(bg.cylinder_surface(1.5), 2.0, 0.5)
    g = bg.evaluate_geometry(rep, (0.4, 1.2))  # same surface point
    for name in ("H", "kappa_gauss", "k1", "k2"):
        assert getattr(g, name) == pytest.approx(getattr(base, name),
                                                 rel=1e-12, abs=1e-13)
    assert bg.canham_energy(g, CB) == pytest.approx(
        bg.canham_energy(base, CB), rel=1e-12)


def test_geometry_from_metrics_basics():
    g = bg.geometry_from_metrics(np.eye(2), np.eye(2),
                                 np.diag([0.2, -0.1]))
    assert g.J == 1.0
    assert g.H == pytest.approx(0.05)
    assert g.kappa_gauss == pytest.approx(-0.02)
    np.testing.assert_allclose(g.b_contra,
                               g.a_contra @ g.b_cov @ g.a_contra)
    with pytest.raises(ValueError):
        bg.geometry_from_metrics(np.eye(2), np.diag([1.0, -1.0]),
                                 np.zeros((2, 2)))


def test_bending_stress_moment_frozen_state():
    g = bg.geometry_from_metrics(A0, a0, b0)
    tau, m0 = bg.bending_stress_moment(g, CB)
    np.testing.assert_allclose(
        [tau[0, 0], tau[1, 1], tau[0, 1]],
        [-0.0405185139816123069, -0.0164520604377161373,
         -0.0253107161127314215], rtol=1e-13)
    np.testing.assert_allclose(
        [m0[0, 0], m0[1, 1], m0[0, 1]],
        [0.0693360625360281041, -0.0300760798309886124,
         0.0612099914066322999], rtol=1e-13)
    assert tau[0, 1] == pytest.approx(tau[1, 0], rel=1e-14)
    assert m0[0, 1] == pytest.approx(m0[1, 0], rel=1e-14)


def test_bending_tangents_frozen_state():
    g = bg.geometry_from_metrics(A0, a0, b0)
    t = bg.bending_tangents(g, CB)
    c_want = np.array([
        [0.1626433617381, -0.009992374826534, 0.1034210361797],
        [-0.009992374826534, 0.1049015859041, 0.01280734924477],
        [0.1034210361797, 0.01280734924477, 0.1086259049462],
    ])
    d_want = np.array([
        [-0.1664065500865, -0.0730288569901, -0.07670241813972],
        [0.04116888817153, 0.1172967113409, -0.06754255689623],
        [-0.1118031987578, -0.153130761691, -0.07831801571337],
    ])
    f_want = np.array([
        [0.1538664355862, 0.009616652224137, 0.03846660889655],
        [0.009616652224137, 0.4063035564698, 0.06250823945689],
        [0.03846660889655, 0.06250823945689, 0.1298248050259],
    ])
    np.testing.assert_allclose(pair_of(t.c), c_want, rtol=1e-11)
    np.testing.assert_allclose(pair_of(t.d), d_want, rtol=1e-11)
    np.testing.assert_allclose(pair_of(t.e), d_want.T, rtol=1e-11)
    np.testing.assert_allclose(pair_of(t.f), f_want, rtol=1e-11)


def test_moment_stretch_tangent_is_stress_curvature_transpose():
    g = bg.geometry_from_metrics(A0, a0, b0)
    t = bg.bending_tangents(g, CB)
    assert np.array_equal(t.e, t.d.transpose(2, 3, 0, 1))


def test_bending_tangent_symmetries():
    g = bg.geometry_from_metrics(A0, a0, b0)
    t = bg.bending_tangents(g, CB)
    for q in (t.c, t.f):
        # second-derivative blocks of one variable carry major symmetry
        assert np.max(np.abs(q - q.transpose(2, 3, 0, 1))) < 1e-13
    for q in (t.c, t.d, t.e, t.f):
        assert np.max(np.abs(q - q.transpose(1, 0, 2, 3))) < 1e-13
        assert np.max(np.abs(q - q.transpose(0, 1, 3, 2))) < 1e-13


def test_metric_identities_on_curved_surfaces():
    for surf, xi in ((bg.sphere_surface(1.7), (0.5, 1.1)),
                     (bg.cone_surface(0.6, 0.1), (1.0, 1.5)),
                     (bg.cylinder_surface(0.8), (0.2, -0.4))):
        g = bg.evaluate_geometry(surf, xi)
        np.testing.assert_allclose(g.a_cov @ g.a_contra, np.eye(2),
                                   atol=1e-12)
        assert np.linalg.norm(g.n) == pytest.approx(1.0, rel=1e-13)
        # tangent vectors are orthogonal to the normal
        np.testing.assert_allclose(g.a_alpha @ g.n, 0.0, atol=1e-12)
        # curvature scalars are consistent with the principal values
        assert g.H == pytest.approx(0.5 * (g.k1 + g.k2), rel=1e-11,
                                    abs=1e-13)
        assert g.kappa_gauss == pytest.approx(g.k1 * g.k2, rel=1e-10,
                                              abs=1e-13)
