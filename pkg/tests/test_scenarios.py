"""Deformation drivers, model comparison, the verification engine, and the
closed-form calculators."""

import math

import numpy as np
import pytest

from gmem import membrane_material as mm
from gmem import scenarios as sc
from gmem.lattice import ZIGZAG_OFFSET, make_frame
from gmem.surface_tensors import SurfTensor2

ARMCHAIR = make_frame(0.0)


def uniaxial(end, steps=2, direction=0.0):
    return sc.DeformationProtocol("uniaxial-constrained", direction,
                                  1.0, end, steps)


def shear(end, steps=2, direction=0.0):
    return sc.DeformationProtocol("pure-shear", direction, 1.0, end, steps)


def test_protocol_validation():
    with pytest.raises(ValueError):
        sc.DeformationProtocol("simple-shear")
    with pytest.raises(ValueError):
        sc.DeformationProtocol("pure-shear", 0.0, 0.6, 1.2, 5)
    with pytest.raises(ValueError):
        sc.DeformationProtocol("pure-shear", 0.0, 1.0, 1.7, 5)
    with pytest.raises(ValueError):
        sc.DeformationProtocol("dilatation", 0.0, 1.0, 1.2, 0)


def test_protocol_values_and_states():
    p = sc.DeformationProtocol("dilatation", 0.0, 1.0, 1.21, 3)
    np.testing.assert_allclose(p.values(), [1.0, 1.105, 1.21])
    st = p.state(1.21, 0.0)
    assert (st.c11, st.c22, st.c12) == (1.21, 1.21, 0.0)

    u = uniaxial(1.2).state(1.2, 0.0)
    assert (u.c11, u.c22, u.c12) == pytest.approx((1.44, 1.0, 0.0))
    # pulling at ninety degrees lands the stretch on the second axis
    u90 = sc.DeformationProtocol(
        "uniaxial-constrained", math.pi / 2.0, 1.0, 1.2, 2).state(1.2, 0.0)
    assert (u90.c11, u90.c22) == pytest.approx((1.0, 1.44))
    assert abs(u90.c12) < 1e-15

    s = shear(1.15).state(1.15, 0.0)
    assert (s.c11, s.c22) == pytest.approx((1.3225, 1.0 / 1.3225))


def test_run_curve_rejects_unknown_model():
    with pytest.raises(ValueError):
        sc.run_curve(uniaxial(1.1), "mooney", mm.GGA, ARMCHAIR)


def test_uniaxial_armchair_frozen_points():
    pts = sc.run_curve(uniaxial(1.1), "metric", mm.GGA, ARMCHAIR)
    q = pts[1]
    assert q.lam == pytest.approx(1.1, rel=1e-15)
    assert q.sigma11 == pytest.approx(26.6862641044064581, rel=1e-13)
    assert q.sigma22 == pytest.approx(4.16686675668229117, rel=1e-13)
    assert abs(q.sigma12) < 1e-12
    log_q = sc.run_curve(uniaxial(1.1), "log", mm.GGA, ARMCHAIR)[1]
    assert log_q.sigma11 == pytest.approx(26.6849807415642513, rel=1e-13)
    assert log_q.sigma22 == pytest.approx(4.1682952518618133, rel=1e-13)
    far = sc.run_curve(uniaxial(1.2), "metric", mm.GGA, ARMCHAIR)[1]
    assert far.sigma11 == pytest.approx(34.3948393241277157, rel=1e-13)
    assert far.sigma22 == pytest.approx(4.18485890208150048, rel=1e-13)


def test_uniaxial_zigzag_frozen_points():
    pts = sc.run_curve(uniaxial(1.1, direction=ZIGZAG_OFFSET), "metric",
                       mm.GGA, ARMCHAIR)
    assert pts[1].sigma11 == pytest.approx(26.5119596933684981, rel=1e-13)
    assert pts[1].sigma22 == pytest.approx(4.67078213343304776, rel=1e-13)
    assert abs(pts[1].sigma12) < 1e-12
    far = sc.run_curve(uniaxial(1.2, direction=ZIGZAG_OFFSET), "metric",
                       mm.GGA, ARMCHAIR)[1]
    assert far.sigma11 == pytest.approx(37.4855744670469245, rel=1e-13)
    assert far.sigma22 == pytest.approx(5.14022338780789545, rel=1e-13)


def test_pure_shear_frozen_points():
    q = sc.run_curve(shear(1.15), "metric", mm.GGA, ARMCHAIR)[1]
    assert q.sigma11 == pytest.approx(37.8168144283678209, rel=1e-13)
    assert q.sigma22 == pytest.approx(-48.7103328662696338, rel=1e-13)
    lq = sc.run_curve(shear(1.15), "log", mm.GGA, ARMCHAIR)[1]
    assert lq.sigma11 == pytest.approx(37.8973121463848227, rel=1e-13)
    assert lq.sigma22 == pytest.approx(-48.7949806789650124, rel=1e-13)
    rot = sc.run_curve(shear(1.1, direction=math.pi / 12.0), "metric",
                       mm.GGA, ARMCHAIR)[1]
    assert rot.sigma11 == pytest.approx(25.1331199759632194, rel=1e-13)
    assert rot.sigma22 == pytest.approx(-30.2015735106046069, rel=1e-13)
    assert rot.sigma12 == pytest.approx(-1.28213805870161682, rel=1e-12)


def test_curve_point_energy_matches_model():
    pts = sc.run_curve(uniaxial(1.1), "metric", mm.GGA, ARMCHAIR)
    st = uniaxial(1.1).state(1.1, 0.0)
    assert pts[1].W == pytest.approx(
        mm.energy_metric(st, ARMCHAIR, mm.GGA), rel=1e-15)


def test_peak_of_curve_and_direction_ordering():
    fine_arm = sc.run_curve(
        sc.DeformationProtocol("uniaxial-constrained", 0.0, 1.0, 1.25, 251),
        "metric", mm.GGA, ARMCHAIR)
    lam_a, peak_a = sc.peak_of_curve(fine_arm)
    assert lam_a == pytest.approx(1.189, abs=1e-3)
    assert peak_a == pytest.approx(34.5216060696, abs=5e-4)
    fine_zz = sc.run_curve(
        sc.DeformationProtocol("uniaxial-constrained", ZIGZAG_OFFSET,
                               1.0, 1.25, 251), "metric", mm.GGA, ARMCHAIR)
    lam_z, peak_z = sc.peak_of_curve(fine_zz)
    assert lam_z == pytest.approx(1.246, abs=1e-3)
    assert peak_z == pytest.approx(38.5955397934, abs=5e-4)
    assert peak_z > peak_a


def test_compare_models_dilatation_is_exact():
    p = sc.DeformationProtocol("dilatation", 0.0, 1.0, 1.21, 11)
    out = sc.compare_models(p, mm.GGA, ARMCHAIR)
    assert set(out) == {"sigma11", "sigma22", "sigma12"}
    assert out["sigma11"] < 1e-10
    assert out["sigma22"] < 1e-10


def test_compare_models_uniaxial_magnitudes():
    p = sc.DeformationProtocol("uniaxial-constrained", 0.0, 1.0, 1.25, 101)
    out = sc.compare_models(p, mm.GGA, ARMCHAIR)
    assert out["sigma11"] == pytest.approx(0.0166, abs=2e-3)
    assert out["sigma22"] == pytest.approx(0.1204, abs=5e-3)


def test_invariant_surrogate_error_maxima():
    out = sc.invariant_approximation_errors(np.linspace(1.0, 1.3, 601))
    assert out["f1_vs_J2E"] == pytest.approx(0.021959877, rel=1e-5)
    assert out["f2_vs_J3E"] == pytest.approx(0.038404956, rel=1e-5)
    tight = sc.invariant_approximation_errors(np.linspace(1.0, 1.25, 501))
    assert tight["f1_vs_J2E"] == pytest.approx(0.011504798, rel=1e-4)
    assert tight["f2_vs_J3E"] == pytest.approx(0.019924312, rel=1e-4)


def test_verify_derivatives_metric():
    rep = sc.verify_derivatives("metric", n_samples=20, seed=3)
    assert rep["pass"] is True
    assert rep["param_set"] == "GGA"
    assert set(rep["checks"]) == {"stress_fd", "tangent_fd",
                                  "major_symmetry", "rearrangement"}
    for chk in rep["checks"].values():
        assert chk["max"] < chk["tol"]
        assert 0.0 <= chk["mean"] <= chk["max"]


def test_verify_derivatives_log_and_bending():
    rep = sc.verify_derivatives("log", params=mm.LDA, n_samples=10, seed=5)
    assert rep["pass"] is True
    assert rep["param_set"] == "LDA"
    assert set(rep["checks"]) == {"stress_fd", "major_symmetry"}
    bend = sc.verify_derivatives("bending", n_samples=10, seed=7)
    assert bend["pass"] is True
    assert bend["checks"]["transpose_identity"]["max"] == 0.0


def test_verify_derivatives_is_deterministic():
    a = sc.verify_derivatives("metric", n_samples=8, seed=11)
    b = sc.verify_derivatives("metric", n_samples=8, seed=11)
    assert a == b


def test_verify_derivatives_tolerance_handling():
    rep = sc.verify_derivatives("metric", n_samples=5,
                                tolerances={"tangent_fd": 1e-16})
    assert rep["pass"] is False
    assert rep["checks"]["tangent_fd"]["pass"] is False
    with pytest.raises(ValueError):
        sc.verify_derivatives("metric", n_samples=5,
                              tolerances={"bogus": 1.0})
    with pytest.raises(ValueError):
        sc.verify_derivatives("maxwell")
    with pytest.raises(ValueError):
        sc.verify_derivatives("metric", n_samples=0)


def test_contact_potential_values():
    psi, tr = sc.contact_potential(0.34)
    assert psi == -0.14
    assert tr == 0.0
    psi5, tr5 = sc.contact_potential(0.5)
    assert psi5 == pytest.approx(-0.0638546229792499302, rel=1e-14)
    assert tr5 == pytest.approx(-0.357014573626498744, rel=1e-14)
    with pytest.raises(ValueError):
        sc.contact_potential(0.0)
    with pytest.raises(ValueError):
        sc.contact_potential(-0.2)


def test_contact_traction_is_minus_potential_slope():
    h = 1e-6
    psi_p, _ = sc.contact_potential(0.5 + h)
    psi_m, _ = sc.contact_potential(0.5 - h)
    _, tr = sc.contact_potential(0.5)
    assert tr == pytest.approx(-(psi_p - psi_m) / (2.0 * h), rel=1e-8)


def test_traction_extremum_location():
    rx = sc.traction_extremum()
    assert rx == pytest.approx(0.39609763725524241, rel=1e-12)
    assert rx == pytest.approx(2.5 ** (1.0 / 6.0) * 0.34, rel=1e-9)


def test_beam_force_frozen_values():
    b = sc.BeamParams(340.0, 1.0, 38.19, math.radians(17.45))
    assert b.i_y == pytest.approx(math.pi, rel=1e-15)
    f_w, f_a = sc.beam_force(b, 0.1)
    assert f_w == pytest.approx(0.0183021422694824289, rel=1e-13)
    assert f_a == pytest.approx(0.0582241000598239362, rel=1e-13)
    # superposition holds to rounding
    f1, _ = sc.beam_force(b, 0.04)
    f2, _ = sc.beam_force(b, 0.06)
    assert f1 + f2 == pytest.approx(f_w, rel=1e-14)


def test_beam_params_validation():
    with pytest.raises(ValueError):
        sc.BeamParams(340.0, -1.0, 38.19, 0.3)
    with pytest.raises(ValueError):
        sc.BeamParams(340.0, 1.0, 0.0, 0.3)
    with pytest.raises(ValueError):
        sc.BeamParams(340.0, 1.0, 38.19, 0.0)
    with pytest.raises(ValueError):
        sc.BeamParams(340.0, 1.0, 38.19, math.pi / 2.0)


def test_apex_angles():
    assert sc.apex_angle(300.0) == pytest.approx(19.1881364537209229,
                                                 rel=1e-13)
    assert sc.apex_angle(240.0) == pytest.approx(38.9424412689813827,
                                                 rel=1e-13)
    assert sc.apex_angle(180.0) == pytest.approx(60.0, rel=1e-13)
    for bad in (0.0, 90.0, 360.0):
        with pytest.raises(ValueError):
            sc.apex_angle(bad)


def test_benchmark_report_shape():
    rep = sc.benchmark_models(mm.GGA, n_evals=10_000, seed=1)
    assert rep["n_evals"] == 10_000
    assert rep["param_set"] == "GGA"
    assert rep["speedup_stress_tangent"] > 0.0
    assert rep["speedup_stress_only"] > 0.0
    assert rep["reference_ratio"] == 1.5
    assert rep["consistency_gate"]["pass"] is True
    assert rep["consistency_gate"]["max_percent"] < 1.0
    assert rep["metric"]["stress_tangent_s"] > 0.0
    with pytest.raises(ValueError):
        sc.benchmark_models(mm.GGA, n_evals=5000)


def test_curve_csv_round_trip(tmp_path):
    pts = sc.run_curve(uniaxial(1.1, steps=3), "metric", mm.GGA, ARMCHAIR)
    path = tmp_path / "curve.csv"
    sc.write_curve_csv(path, pts, "metric", "GGA", 0.0)
    lines = path.read_text().splitlines()
    assert lines[0] == ("step,lambda_or_J,sigma11,sigma22,sigma12,W,"
                        "model,param_set,theta_deg")
    assert len(lines) == 4
    row = lines[2].split(",")
    assert int(row[0]) == 1
    assert float(row[2]) == pts[1].sigma11
    assert row[6] == "metric" and row[7] == "GGA"
    # byte-stable on rewrite
    first = path.read_bytes()
    sc.write_curve_csv(path, pts, "metric", "GGA", 0.0)
    assert path.read_bytes() == first


def test_contact_csv(tmp_path):
    path = tmp_path / "contact.csv"
    sc.write_contact_csv(path, [0.34, 0.5])
    lines = path.read_text().splitlines()
    assert lines[0] == "step,r_nm,psi,traction"
    assert float(lines[1].split(",")[2]) == -0.14


def test_zigzag_frame_helper():
    fr = sc.zigzag_frame(0.4)
    assert fr.theta_lattice == 0.4
    assert sc.STRETCH_RANGE == (0.7, 1.6)
    assert sc.MODEL_NAMES == ("metric", "log")
