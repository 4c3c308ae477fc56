from __future__ import annotations

import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from eitcv import fock
from eitcv.atomic import BECMedium, FockMedium, spin_moments
from eitcv.checks import amplifier_scenario, clone_bosonic_scenario, clone_condensate_scenario, spin_oracle_moments, storage_scenario
from eitcv.fock import (
    BeamSplitter,
    CapacityError,
    Coherent,
    Condensate,
    Number,
    Squeezed,
    TruncationError,
    Vacuum,
    TwoModeSqueezer,
    apply_beamsplitter,
    apply_two_mode_squeezer,
    build_state,
    moments,
)


def test_number_state_basis_vector():
    s = build_state([("a", Number(2, 5)), ("b", Number(3, 5))])
    assert s.amplitudes[2, 3] == 1.0 and np.count_nonzero(s.amplitudes) == 1


def test_condensate_two_atoms():
    s = build_state([(("a1", "a2"), Condensate(2, 1 / math.sqrt(2), 1 / math.sqrt(2)))])
    amp = s.amplitudes
    assert amp[2, 0] == pytest.approx(0.5) and amp[1, 1] == pytest.approx(1 / math.sqrt(2)) and amp[0, 2] == pytest.approx(0.5)


def test_coherent_mean_number():
    assert abs(build_state([("f", Coherent(1.0, 20))]).mean_number("f") - 1.0) < 1e-10


def test_construction_errors():
    with pytest.raises(TruncationError):
        build_state([("f", Coherent(2.0, 15))])
    with pytest.raises(CapacityError):
        build_state([("a", Vacuum(999)), ("b", Vacuum(999)), ("c", Vacuum(20))])
    with pytest.raises(ValueError):
        build_state([("a", Condensate(3, 1.0, 0.0))])


def test_beamsplitter_examples():
    s = build_state([("a", Number(1, 4)), ("b", Vacuum(4))])
    assert np.allclose(apply_beamsplitter(s, "a", "b", 0.0).amplitudes, s.amplitudes)
    swapped = apply_beamsplitter(s, "a", "b", math.pi / 2).amplitudes
    assert abs(abs(swapped[0, 1]) - 1) < 1e-12


def test_beamsplitter_on_coherent_state():
    alpha = 0.8 - 0.3j
    s = build_state([("a", Coherent(alpha, 30)), ("b", Vacuum(30))])
    out = apply_beamsplitter(s, "a", "b", math.pi / 4)
    ref = build_state([("a", Coherent(alpha / math.sqrt(2), 30)), ("b", Coherent(alpha / math.sqrt(2), 30))])
    assert abs(abs(np.vdot(ref.amplitudes, out.amplitudes)) - 1) < 1e-10


def test_two_mode_squeezed_vacuum():
    s = apply_two_mode_squeezer(build_state([("f", Vacuum(40)), ("c", Vacuum(40))]), "f", "c")
    assert s.mean_number("f") == pytest.approx(1.0, abs=1e-10)
    _, cov = moments(s, [fock.Q("f")])
    assert cov[0, 0] == pytest.approx(3.0, abs=1e-9)


def test_squeezer_leak_detected():
    s = build_state([("f", Vacuum(10)), ("c", Vacuum(10))])
    with pytest.raises(TruncationError):
        apply_two_mode_squeezer(s, "f", "c")


def test_mean_quadrature_amplified():
    s = build_state([("f", Coherent(0.5, 55)), ("c", Vacuum(55))])
    m, _ = moments(apply_two_mode_squeezer(s, "f", "c"), [fock.Q("f")])
    assert m[0] == pytest.approx(math.sqrt(2) * 1.0, abs=1e-9)


@given(st.floats(0, 2 * math.pi), st.floats(0, 1.2), st.floats(0, 2 * math.pi))
def test_unitarity(theta, amp, phase):
    s = build_state([("a", Coherent(amp * np.exp(1j * phase), 30)), ("b", Squeezed(0.3, phase, 30))])
    out = fock._apply_gate(s.amplitudes, s.labels, BeamSplitter("a", "b", theta), check=False)
    assert abs(np.linalg.norm(out) - 1) < 1e-12


def test_squeezer_norm():
    s = build_state([("f", Coherent(0.3, 50)), ("c", Vacuum(50))])
    out = fock._apply_gate(s.amplitudes, s.labels, TwoModeSqueezer("f", "c"), check=False)
    assert abs(np.linalg.norm(out) - 1) < 1e-12


def test_vacuum_variance():
    _, cov = moments(build_state([("f", Vacuum(5))]), [fock.Q("f"), fock.P("f")])
    assert np.allclose(cov, np.eye(2), atol=1e-15)


@pytest.mark.parametrize("r,phi", [(0.4, 0.0), (0.3, 1.0), (0.5, 2.5)])
def test_squeezed_moments(r, phi):
    _, cov = moments(build_state([("f", Squeezed(r, phi, 40))]), [fock.Q("f"), fock.P("f")])
    c2, s2 = math.cosh(2 * r), math.sinh(2 * r)
    assert cov[0, 0] == pytest.approx(c2 - s2 * math.cos(phi), abs=1e-10)
    assert cov[1, 1] == pytest.approx(c2 + s2 * math.cos(phi), abs=1e-10)
    assert cov[0, 1] == pytest.approx(-s2 * math.sin(phi), abs=1e-10)


def test_condensate_spin_variance():
    m = spin_oracle_moments(BECMedium.from_population(50, 0.5, math.pi / 4))
    assert abs(m.v_q - 0.5) <= 5 / 50


def test_fock_medium_exact():
    med = FockMedium(1, 20)
    assert spin_oracle_moments(med).v_q == pytest.approx((1 * 21 + 20 * 2) / 21, abs=1e-13)


@given(st.integers(1, 25), st.floats(0, 1), st.floats(0, 2 * math.pi))
def test_condensate_matches_closed_form(n, p, phi):
    med = BECMedium.from_population(n, p, phi)
    a, b = spin_oracle_moments(med), spin_moments(med)
    for k in ("mean_q", "mean_p", "v_q", "v_p", "cov_qp"):
        assert getattr(a, k) == pytest.approx(getattr(b, k), abs=1e-10)


def test_engine_agreement_scenarios():
    assert storage_scenario(Coherent(0.7j, 30), Squeezed(0.4, 0.3, 30), 0.9) < 1e-8
    assert amplifier_scenario(0.5 - 0.2j, 55) < 1e-8
    assert clone_bosonic_scenario(0.3, Squeezed(0.35, math.pi / 2, 40), 55) < 1e-8
    assert clone_condensate_scenario(0.2, BECMedium.from_population(6, 0.5, math.pi / 4), 55) < 1e-8
