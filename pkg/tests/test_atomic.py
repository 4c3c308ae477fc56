from __future__ import annotations

import math

import pytest
from hypothesis import given
from hypothesis import strategies as st

from eitcv.atomic import (
    BECMedium,
    CapacityError,
    CoherentMedium,
    FockMedium,
    SpinMoments,
    adiabatic_condition,
    exact_bec_moments,
    spin_moments,
)
from eitcv.checks import condensate_sweep, fock_limit_sweep, monotone_excess
from eitcv.gaussian import ValidationError

pops = st.floats(0, 1)
phases = st.floats(0, 2 * math.pi)


def test_balanced_condensate_variances():
    m = spin_moments(BECMedium.from_population(1000, 0.5, math.pi / 4))
    assert m.v_q == pytest.approx(0.5, abs=1e-15) and m.v_p == pytest.approx(0.5, abs=1e-15)


def test_figure_parameters():
    m = spin_moments(BECMedium.from_population(1000, 0.3, math.pi / 4))
    assert m.v_q == pytest.approx(0.58, abs=1e-14)
    m0 = spin_moments(BECMedium.from_population(1000, 0.3, 0.0))
    assert m0.v_q == pytest.approx(1 - 4 * 0.21, abs=1e-14) and m0.v_p == pytest.approx(1.0, abs=1e-15)


def test_empty_level_is_coherent_level():
    m = spin_moments(BECMedium.from_population(10, 0.0, 0.7))
    assert (m.v_q, m.v_p, m.mean_q, m.mean_p) == (1.0, 1.0, 0.0, -0.0)


def test_fock_medium():
    m = spin_moments(FockMedium(1, 20))
    assert m.v_q == pytest.approx((1 * 21 + 20 * 2) / 21, abs=1e-15)
    assert spin_moments(CoherentMedium()) == SpinMoments(0, 0, 1, 1, 0)


def test_validation():
    with pytest.raises(ValidationError):
        BECMedium.from_population(10, 1.2, 0)
    with pytest.raises(ValidationError):
        BECMedium(0, 0.5)
    with pytest.raises(ValidationError):
        FockMedium(-1, 2)
    with pytest.raises(ValidationError):
        FockMedium(0, 0)
    with pytest.raises(ValidationError):
        SpinMoments(0, 0, -1, 1)
    with pytest.raises(CapacityError):
        exact_bec_moments(BECMedium.from_population(500, 0.5, 0.0))


@given(pops, phases)
def test_phase_swap_symmetry(p, phi):
    a = spin_moments(BECMedium.from_population(50, p, phi))
    b = spin_moments(BECMedium.from_population(50, p, math.pi / 2 - phi))
    assert a.v_q == pytest.approx(b.v_p, abs=1e-14) and a.v_p == pytest.approx(b.v_q, abs=1e-14)


@given(pops, phases)
def test_sum_rule(p, phi):
    m = spin_moments(BECMedium.from_population(50, p, phi))
    assert m.v_q + m.v_p == pytest.approx(2 - 4 * p * (1 - p), abs=1e-14)


@given(st.integers(1, 60), pops, phases)
def test_expansion_agrees_with_closed_form(n, p, phi):
    med = BECMedium.from_population(n, p, phi)
    a, b = spin_moments(med), exact_bec_moments(med)
    for k in ("mean_q", "mean_p", "v_q", "v_p", "cov_qp"):
        assert getattr(a, k) == pytest.approx(getattr(b, k), abs=1e-10 * max(1.0, n))


def test_finite_n_sweep_trend():
    sweep = condensate_sweep((10, 20, 50, 100), 0.5, math.pi / 4)
    for err, n in zip(sweep["oracle_error"], sweep["n"]):
        assert err <= 5 / n
    assert monotone_excess(sweep["oracle_error"]) == 0.0
    assert sweep["fitted_C"] < 1e-9


def test_fock_variance_approaches_boson_limit():
    res = fock_limit_sweep(2, (10, 20, 50, 100))
    assert max(res["exact_error"]) < 1e-12
    assert res["limit_error"] == pytest.approx([8 / n for n in (10, 20, 50, 100)], abs=1e-12)


@pytest.mark.parametrize(
    "pops_, expected",
    [((10, 20, 0.5), True), ((10, 20, 2), False), ((30, 20, 0), False)],
)
def test_adiabatic_condition(pops_, expected):
    assert adiabatic_condition(*pops_) is expected


def test_adiabatic_ratio_validation():
    with pytest.raises(ValidationError):
        adiabatic_condition(1, 2, 0, ratio=0)
