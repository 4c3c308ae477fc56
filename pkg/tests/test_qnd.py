from __future__ import annotations

import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from eitcv.atomic import BECMedium, SpinMoments, spin_moments
from eitcv.gaussian import ValidationError
from eitcv.qnd import (
    DegenerateInputError,
    PolaritonAngle,
    classical_coefficients,
    closed_form_coefficients,
    correlation_report,
    fock_medium_coefficients,
    from_rabi,
    qnd_condition_check,
    storage_map,
)

open_angles = st.floats(1e-3, math.pi / 2 - 1e-3)
var = st.floats(0.1, 3.0)


def medium(v_q, v_p=None):
    return SpinMoments(0.0, 0.0, v_q, v_q if v_p is None else v_p)


VAC = SpinMoments.coherent()


@given(st.floats(0, math.pi / 2 - 1e-6))
def test_angle_identities(theta):
    a = PolaritonAngle(theta)
    assert abs(a.mu**2 + a.nu**2 - 1) < 1e-14
    assert abs(a.n_g - a.nu**2 / a.mu**2) <= 1e-10 * max(1.0, a.n_g)


def test_angle_validation():
    with pytest.raises(ValidationError):
        PolaritonAngle(-0.1)
    with pytest.raises(ValidationError):
        PolaritonAngle(2.0)
    with pytest.raises(ValidationError):
        PolaritonAngle(math.pi / 2).n_g


def test_from_rabi():
    a = from_rabi(10.0, 1.0, 100)
    assert a.theta == pytest.approx(math.pi / 4, abs=1e-15) and a.n_g == pytest.approx(1.0, abs=1e-12)
    assert from_rabi(5.0, 0.0, 10).n_g == 0.0
    b = from_rabi(1.0, math.sqrt(3.0), 1)
    assert b.n_g == pytest.approx(3.0, rel=1e-12) and b.nu**2 == pytest.approx(0.75, abs=1e-15)
    with pytest.raises(ValidationError):
        from_rabi(0.0, 1.0, 10)


def test_storage_map_examples():
    assert np.array_equal(storage_map(PolaritonAngle(0.0)).a_block, np.eye(2))
    swap = storage_map(PolaritonAngle(math.pi / 2)).a_block
    assert np.allclose(np.abs(swap), [[0, 1], [1, 0]], atol=1e-15)
    m = storage_map(PolaritonAngle(math.pi / 4))
    assert m.canonical and np.allclose(np.abs(m.a_block) ** 2, 0.5)


def test_qnd_optimum():
    rep = correlation_report(VAC, medium(0.5), PolaritonAngle(math.pi / 4))
    for q in (rep.q, rep.p):
        assert abs(q.c1 - 2 / 3) < 1e-12 and abs(q.c2 - 2 / 3) < 1e-12 and abs(q.c3 - 1 / 9) < 1e-12
    assert rep.qnd_gain[0] == pytest.approx(math.sqrt(0.5), abs=1e-15)


def test_figure_point():
    xi = spin_moments(BECMedium.from_population(1000, 0.3, math.pi / 4))
    rep = correlation_report(VAC, xi, PolaritonAngle(math.pi / 4))
    assert rep.q.c1 == pytest.approx(1 / 1.58, abs=1e-12)


@given(open_angles)
def test_classical_limit(theta):
    rep = correlation_report(VAC, VAC, PolaritonAngle(theta))
    mu2, nu2, c3 = classical_coefficients(theta)
    assert abs(rep.q.c1 - mu2) < 1e-12 and abs(rep.q.c2 - nu2) < 1e-12 and abs(rep.q.c3) < 1e-12


@given(open_angles, st.integers(0, 20))
def test_fock_medium_form(theta, n1):
    c1, c2, c3 = fock_medium_coefficients(n1, theta)
    mu2, nu2 = math.cos(theta) ** 2, math.sin(theta) ** 2
    assert c1 == pytest.approx(mu2 / (1 + 2 * nu2 * n1), abs=1e-14)
    rep = correlation_report(VAC, medium(1 + 2 * n1), PolaritonAngle(theta))
    assert (rep.q.c1, rep.q.c2, rep.q.c3) == pytest.approx((c1, c2, c3), abs=1e-12)


@given(open_angles, var, var, var, var)
def test_path_independence(theta, vfq, vfp, vxq, vxp):
    # correlation_report raises if the two routes disagree by more than 1e-10
    rep = correlation_report(SpinMoments(0.3, -1.0, vfq, vfp), medium(vxq, vxp), PolaritonAngle(theta))
    ref = closed_form_coefficients(vfq, vxq, theta)
    assert np.allclose((rep.q.c1, rep.q.c2, rep.q.c3), ref, atol=1e-10)
    for quad in (rep.q, rep.p):
        assert all(0.0 <= c <= 1.0 + 1e-15 for c in (quad.c1, quad.c2, quad.c3))


@given(open_angles, var)
def test_equal_variances(theta, v):
    c1, c2, c3 = closed_form_coefficients(v, v, theta)
    assert abs(c1 + c2 - 1) < 1e-12 and abs(c3) < 1e-12


@given(open_angles)
def test_ideal_qnd_limit(theta):
    c = closed_form_coefficients(1.0, 1e-12, theta)
    assert np.allclose(c, 1.0, atol=1e-9)


@given(open_angles, var, var, var)
def test_monotonicity(theta, vf, v1, v2):
    lo, hi = sorted((v1, v2))
    assert closed_form_coefficients(vf, lo, theta)[0] >= closed_form_coefficients(vf, hi, theta)[0] - 1e-15
    assert closed_form_coefficients(lo, vf, theta)[1] <= closed_form_coefficients(hi, vf, theta)[1] + 1e-15


def test_degenerate_input():
    with pytest.raises(DegenerateInputError):
        correlation_report(SpinMoments(0, 0, 0, 1), SpinMoments(0, 0, 0, 1), PolaritonAngle(0.5))


def test_qnd_condition():
    assert qnd_condition_check(medium(0.0), PolaritonAngle(0.2)) == (True, True)
    assert qnd_condition_check(medium(0.0, 1.0), PolaritonAngle(math.pi / 4)) == (True, False)
    assert qnd_condition_check(medium(0.3), PolaritonAngle(0.0)) == (False, False)
    assert qnd_condition_check(medium(0.0), PolaritonAngle(0.0)) == (True, True)
    with pytest.raises(ValidationError):
        qnd_condition_check(medium(0.5), PolaritonAngle(0.3), margin=0.0)
