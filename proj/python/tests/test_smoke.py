import json
import math

import numpy as np
import pytest

import folicurve as fc


def test_conversions():
    K, R = fc.euclidean_to_hyperbolic(5.0, 3.0)
    assert K == pytest.approx(4.0, abs=1e-12)
    assert R == pytest.approx(math.log(2.0), abs=1e-12)
    k, r = fc.hyperbolic_to_euclidean(K, R)
    assert (k, r) == pytest.approx((5.0, 3.0), rel=1e-12)


def test_invalid_sphere_raises_with_kind():
    with pytest.raises(fc.FolicurveError) as info:
        fc.euclidean_to_hyperbolic(1.0, 2.0)
    assert info.value.kind == "InvalidSphere"


def test_identity_reports():
    riem = fc.verify_identity("riemannian")
    assert riem["pass"] is True
    assert riem["sign"] == 1
    # The reference Lorentzian bracket leaves a nonzero residual.
    assert fc.verify_identity("lorentzian")["pass"] is False
    assert fc.verify_identity("riemannian", mutate="c2")["pass"] is False
    with pytest.raises(ValueError):
        fc.verify_identity("euclidean")


def test_cylinder_curvature():
    R = 1.0
    jet = fc.FoliationJet(k=math.cosh(R), r=math.sinh(R))
    for x in fc.leaf_points(jet, 3, 5):
        H = fc.mean_curvature_at(x, 0.0, jet)
        assert abs(H) == pytest.approx(2.0 / 3.0 / math.tanh(R), abs=1e-9)


def test_theorem_residuals_vanish_on_rotational_jets():
    jet = fc.FoliationJet(k=2.0, k1=0.25, r=1.0, r1=0.5)
    assert jet.center_drift() == 0.0
    assert fc.theorem_residuals(jet, 0.5, 3) == (0.0, 0.0)


def test_scan_and_expressions():
    report = fc.scan("cosh(1)", "sinh(1)", n=3)
    assert report["max_deviation"] < 1e-12
    assert len(report["rows"]) == 11 * 8
    assert fc.differentiate("cosh(t)") == "sinh(t)"
    assert fc.evaluate("t^2 + 1", 3.0) == 10.0
    with pytest.raises(fc.FolicurveError) as info:
        fc.scan("cosh(", "1")
    assert info.value.kind == "ParseError"
    assert info.value.offset == 5


def test_generate_catenoid():
    p = fc.generate(H=0.0, K=1.0, r0=1.0, t1=0.5)
    assert p.halt == "none"
    rows = p.rows
    assert isinstance(rows, np.ndarray)
    assert rows.shape == (501, 8)
    assert np.max(np.abs(rows[:, 7] - 1.0)) < 1e-12
    report = p.validate(samples=20)
    assert report["max_abs_H"] < 1e-5
    assert p.to_csv().startswith("t,r,r1,k,k1,K_check\n")


def test_generate_n2_mesh():
    p = fc.generate(H=0.75, n=2, t1=0.3)
    assert abs(p.oriented_H()) == 0.75
    off = p.to_off(segments=8)
    head = off.splitlines()
    assert head[0] == "OFF"
    assert head[1] == f"{len(p) * 8} {2 * (len(p) - 1) * 8} 0"


def test_generate_halts_on_radius_floor():
    p = fc.generate(r0=1e-7)
    assert p.halt == "radius_floor"
    assert len(p) == 0


def test_cli_in_process():
    code, out, _ = fc.run_cli(["convert", "--k", "5", "--r", "3"])
    assert code == 0
    assert json.loads(out)["K"] == pytest.approx(4.0)
    code, _, _ = fc.run_cli(["convert", "--k", "1", "--r", "2"])
    assert code == 2
