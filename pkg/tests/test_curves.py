import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from minkcurve.curves import (FAMILIES, ExpressionCurve, SampledCurve, Tolerances, UnitSpeedCurve,
                              arclength, builtin_family, derivatives, load_samples_csv,
                              reparametrize_unit_speed, write_samples_csv)
from minkcurve.errors import (BadParams, DomainError, FileError, LightlikeTangent,
                              MixedCausality, SpecValidationError, UnknownFamily, ZeroScale)
from minkcurve.lorentz import Causal, pseudo_dot

W_SPACE = ("sinh(t)", "cosh(t)", "sqrt(2)*cos(t)", "sqrt(2)*sin(t)")
W_TIME = ("sqrt(2)*sinh(t)", "sqrt(2)*cosh(t)", "cos(t)", "sin(t)")
CONTROL = ("t^2/2", "t", "cos(t)", "sin(t)")


@pytest.mark.parametrize("comps, domain, t0, t, expected", [
    (("0", "cos(t)", "sin(t)", "0"), (0, 4), 0.0, math.pi, math.pi),
    (W_SPACE, (0, 2), 0.0, 1.0, 1.0),
    (W_SPACE, (0, 2), 0.7, 0.7, 0.0),
    (W_TIME, (0, 2), 0.0, 2.0, 2.0),
    (("0", "t", "t^2", "0"), (0, 1), 0.0, 1.0, math.sqrt(5) / 2 + math.asinh(2) / 4),
])
def test_arclength_values(comps, domain, t0, t, expected):
    assert arclength(ExpressionCurve(comps, domain), t0, t) == pytest.approx(expected, abs=1e-10)


def test_arclength_errors():
    with pytest.raises(DomainError):
        arclength(ExpressionCurve(W_SPACE, (0, 2)), 0.0, 3.0)
    # (t, t, 0, 0) has a lightlike tangent everywhere
    with pytest.raises(LightlikeTangent):
        arclength(ExpressionCurve(("t", "t", "0", "0"), (0, 1)), 0.0, 1.0)


@settings(max_examples=60, deadline=None)
@given(st.floats(0.3, 1.3), st.floats(0.3, 1.3), st.floats(0.3, 1.3))
def test_arclength_additive(a, b, c):
    src = ExpressionCurve(CONTROL, (0.3, 1.3))
    t0, t1, t2 = sorted((a, b, c))
    total = arclength(src, t0, t2)
    assert arclength(src, t0, t1) + arclength(src, t1, t2) == pytest.approx(total, abs=1e-9)


@settings(max_examples=30, deadline=None)
@given(st.floats(0.1, 20.0), st.floats(0.35, 1.3))
def test_arclength_homothety(lam, t):
    src = ExpressionCurve(CONTROL, (0.3, 1.3))
    assert arclength(src.scaled(lam), 0.3, t) == pytest.approx(lam * arclength(src, 0.3, t),
                                                                rel=1e-12, abs=1e-9)


@pytest.mark.parametrize("name", sorted(FAMILIES))
def test_unit_speed_on_200_points(name):
    curve = UnitSpeedCurve(builtin_family(name))
    for s in np.linspace(0, curve.length, 200):
        d1 = derivatives(curve, s, 1)[0]
        assert abs(abs(pseudo_dot(d1, d1)) - 1.0) <= 1e-8


def test_inverse_map_round_trip():
    curve = UnitSpeedCurve(ExpressionCurve(CONTROL, (0.3, 1.3)))
    t = np.linspace(0.3, 1.3, 57)
    assert np.allclose(curve.t_of_s(curve.s_of_t(t)), t, atol=1e-12, rtol=0)


def test_unit_speed_identity_map():
    curve = reparametrize_unit_speed(ExpressionCurve(W_SPACE, (0.5, 2.5)))
    t = np.linspace(0.5, 2.5, 41)
    assert np.allclose(curve.s_of_t(t), t - 0.5, atol=1e-10, rtol=0)


def test_radius_two_circle_length():
    curve = UnitSpeedCurve(ExpressionCurve(("0", "2*cos(t)", "2*sin(t)", "0"), (0, 2 * math.pi)))
    assert curve.length == pytest.approx(4 * math.pi, abs=1e-8)


def test_timelike_tangent_detected():
    curve = UnitSpeedCurve(ExpressionCurve(W_TIME, (0, 2)))
    assert curve.causal is Causal.TIMELIKE and curve.eps_t == -1
    assert curve.length == pytest.approx(2.0, abs=1e-10)


def test_mixed_causality_rejected():
    # speed^2 = 4 t^2 - 1 changes sign at t = 1/2
    with pytest.raises(MixedCausality):
        UnitSpeedCurve(ExpressionCurve(("t", "t^2", "0", "0"), (0, 1)))


def test_second_derivative_of_w_curve_at_zero():
    curve = UnitSpeedCurve(ExpressionCurve(W_SPACE, (0, 2)))
    assert np.allclose(derivatives(curve, 0.0, 2)[1], [0, 1, -math.sqrt(2), 0], atol=1e-12)


def test_straight_line_has_zero_acceleration():
    curve = UnitSpeedCurve(ExpressionCurve(("0", "t", "0", "0"), (0, 1)))
    d = derivatives(curve, 0.4, 5)
    assert np.array_equal(d[0], [0, 1, 0, 0])
    for v in d[1:]:
        assert np.array_equal(v, np.zeros(4))


@pytest.mark.parametrize("name", sorted(FAMILIES))
def test_symbolic_second_derivative_vs_difference(name):
    curve = UnitSpeedCurve(builtin_family(name))
    h = 1e-4
    for s in np.linspace(0.1, 0.9, 7) * curve.length:
        fd = (derivatives(curve, s + h, 1)[0] - derivatives(curve, s - h, 1)[0]) / (2 * h)
        assert np.allclose(derivatives(curve, s, 2)[1], fd, atol=1e-6, rtol=0)


def test_derivatives_order_bounds():
    curve = UnitSpeedCurve(ExpressionCurve(W_SPACE, (0, 2)))
    with pytest.raises(ValueError):
        derivatives(curve, 0.5, 6)
    with pytest.raises(DomainError):
        derivatives(curve, 5.0, 2)


@pytest.mark.parametrize("name, params, causal", [
    ("spacelike_w", {"a": 1, "m": 1, "n": 1, "b": math.sqrt(2)}, Causal.SPACELIKE),
    ("timelike_w", {"a": math.sqrt(2), "m": 1, "b": 1, "n": 1}, Causal.TIMELIKE),
    ("spacelike_w", {"a": 2, "m": 0.5, "b": math.sqrt(2), "n": 1}, Causal.SPACELIKE),
])
def test_builtin_unit_speed(name, params, causal):
    src = builtin_family(name, params)
    q = src.velocity_sq(np.linspace(*src.domain, 50))
    assert np.allclose(q, 1.0 if causal is Causal.SPACELIKE else -1.0, atol=1e-12)


def test_builtin_errors():
    with pytest.raises(UnknownFamily):
        builtin_family("helix")
    with pytest.raises(BadParams):
        builtin_family("spacelike_w", {"b": 1.0})
    with pytest.raises(BadParams):
        builtin_family("planar_circle", {"r": 2.0})
    # the constraint tolerance is 1e-8
    builtin_family("spacelike_w", {"b": 1.41421356})
    with pytest.raises(BadParams):
        builtin_family("spacelike_w", {"b": 1.414213})


def test_scaled_source():
    src = builtin_family("spacelike_w")
    assert np.allclose(src.scaled(3.0).position(0.4), 3.0 * src.position(0.4))
    with pytest.raises(ZeroScale):
        src.scaled(0.0)


def test_sampled_curve_reproduces_polynomial():
    t = np.linspace(0, 1, 30)
    x = np.stack([t**3, t, t**2, 0 * t], axis=1)
    d = SampledCurve(t, x).derivs(np.array([0.37]), 3)[0]
    assert np.allclose(d[:, 0], [0.37**3, 0.37, 0.37**2, 0], atol=1e-12)
    assert np.allclose(d[:, 3], [6, 0, 0, 0], atol=1e-7)


@pytest.mark.parametrize("t, x", [
    (np.arange(10.0), np.zeros((10, 4))),
    (np.r_[0.0, 2.0, 1.0, np.arange(3.0, 12.0)], np.zeros((12, 4))),
])
def test_sampled_curve_rejects_bad_samples(t, x):
    with pytest.raises(ValueError):
        SampledCurve(t, x)


def test_samples_csv_round_trip(tmp_path):
    t = np.linspace(0, 1, 15)
    x = np.stack([np.sinh(t), np.cosh(t), np.sqrt(2) * np.cos(t), np.sqrt(2) * np.sin(t)], axis=1)
    path = tmp_path / "w.csv"
    write_samples_csv(path, t, x)
    src = load_samples_csv(path)
    assert np.array_equal(src.t, t) and np.array_equal(src.x, x)


@pytest.mark.parametrize("text", [
    "t,x1,x2\n0,1,2\n",
    "t,x1,x2,x3,x4\n0,1,2,3\n",
    "t,x1,x2,x3,x4\n0,a,2,3,4\n",
    "t,x1,x2,x3,x4\n" + "".join(f"{i % 3},0,0,0,0\n" for i in range(12)),
])
def test_samples_csv_errors(tmp_path, text):
    path = tmp_path / "bad.csv"
    path.write_text(text)
    with pytest.raises(SpecValidationError):
        load_samples_csv(path)


def test_samples_csv_missing(tmp_path):
    with pytest.raises(FileError):
        load_samples_csv(tmp_path / "nope.csv")


def test_tolerances_replace_ignores_none():
    tol = Tolerances().replace(tol=1e-4, eps_null=None)
    assert tol.tol == 1e-4 and tol.eps_null == Tolerances().eps_null
