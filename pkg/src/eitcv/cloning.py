"""Symmetric 1 -> 2 cloning: gain-2 amplifier followed by polariton storage.

Modes are the signal ``f``, the amplifier ancilla ``c`` (vacuum) and the
medium excitation ``xi``. The bright clone leaves in ``f``, the dark clone in
``xi``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .atomic import AtomicMediumState, BECMedium, SpinMoments, spin_moments
from .gaussian import GaussianState, ModeMap, ValidationError, apply_map, compose, embed, make_vacuum, set_mode_moments
from .qnd import PolaritonAngle, squared_correlation, storage_map

MODES = ("f", "c", "xi")
BALANCED = math.pi / 4
# previously claimed fidelity at the balanced condensate point
# (|alpha1|^2 = 1/2, phi = pi/4); direct evaluation gives 8/11
CLAIMED_BEC_FIDELITY = 0.8


def amplifier_map() -> ModeMap:
    """Phase-insensitive gain-2 amplifier on (f, c): f -> sqrt2 f + c^+."""
    r2 = math.sqrt(2.0)
    return ModeMap(np.diag([r2, r2]), np.array([[0.0, 1.0], [1.0, 0.0]]))


def one_shot_clone_map() -> ModeMap:
    """Balanced-angle cloner from (f, c, xi) straight to the clones (f, xi)."""
    h = 1.0 / math.sqrt(2.0)
    a = np.array([[1.0, 0.0, -h], [1.0, 0.0, h]])
    b = np.array([[0.0, h, 0.0], [0.0, h, 0.0]])
    return ModeMap(a, b)


def cloner_map(angle: PolaritonAngle) -> ModeMap:
    """Amplifier then storage, as a square map on (f, c, xi)."""
    amp = embed(amplifier_map(), ("f", "c"), MODES)
    store = embed(storage_map(angle), ("f", "xi"), MODES)
    return compose(store, amp)


def fidelity(vq_added: float, vp_added: float) -> float:
    """Coherent-state cloning fidelity 2 / sqrt((2 + V_Q)(2 + V_P)) from added noise."""
    if vq_added < -2 or vp_added < -2:
        raise ValidationError(f"added noise ({vq_added}, {vp_added}) below -2")
    den = (2.0 + vq_added) * (2.0 + vp_added)
    if den <= 0.0:
        raise ValidationError("fidelity denominator is not positive")
    return 2.0 / math.sqrt(den)


@dataclass(frozen=True)
class CloneMoments:
    mean_q: float
    mean_p: float
    v_q: float
    v_p: float


@dataclass(frozen=True)
class CloneReport:
    input: CloneMoments
    bright: CloneMoments
    dark: CloneMoments
    added_noise: tuple[float, float]
    added_noise_dark: tuple[float, float]
    fidelity: float
    fidelity_dark: float
    # per quadrature: (input vs bright, input vs dark, bright vs dark)
    correlations: dict[str, tuple[float, float, float]]
    theta: float
    theta_warning: bool = False
    claimed_fidelity: float | None = None
    notes: tuple[str, ...] = field(default_factory=tuple)

    def as_dict(self) -> dict:
        out = {
            "theta": self.theta,
            "theta_warning": self.theta_warning,
            "input": vars(self.input),
            "bright": vars(self.bright),
            "dark": vars(self.dark),
            "added_noise": {"V_Q": self.added_noise[0], "V_P": self.added_noise[1]},
            "added_noise_dark": {"V_Q": self.added_noise_dark[0], "V_P": self.added_noise_dark[1]},
            "fidelity": self.fidelity,
            "fidelity_dark": self.fidelity_dark,
            "correlations": {q: dict(zip(("C1", "C2", "C3"), v)) for q, v in self.correlations.items()},
            "notes": list(self.notes),
        }
        if self.claimed_fidelity is not None:
            out["fidelity_claimed"] = self.claimed_fidelity
        return out


def _input_state(signal: SpinMoments, medium: SpinMoments) -> GaussianState:
    state = make_vacuum(MODES)
    state = set_mode_moments(state, "f", signal.mean_q, signal.mean_p, signal.v_q, signal.v_p, signal.cov_qp)
    return set_mode_moments(state, "xi", medium.mean_q, medium.mean_p, medium.v_q, medium.v_p, medium.cov_qp)


def clone_moments(signal: SpinMoments, medium: SpinMoments, mode_map: ModeMap, out_labels=MODES):
    """Propagate (f, c, xi) through ``mode_map``; returns (input state, output state, cross cov)."""
    state = _input_state(signal, medium)
    out, cross = apply_map(state, mode_map, MODES, out_labels)
    return state, out, cross


def _is_balanced_condensate(medium: AtomicMediumState) -> bool:
    return (
        isinstance(medium, BECMedium)
        and math.isclose(medium.mag1**2, 0.5, abs_tol=1e-9)
        and math.isclose(medium.phi % (2 * math.pi), BALANCED, abs_tol=1e-9)
    )


def clone(
    signal: SpinMoments,
    medium: AtomicMediumState,
    theta: PolaritonAngle = PolaritonAngle(BALANCED),
    balance_tol: float = 1e-6,
) -> CloneReport:
    """Clone a signal with the ancilla in vacuum and the medium as given."""
    xi = spin_moments(medium)
    state, out, cross = clone_moments(signal, xi, cloner_map(theta))

    def moments(st: GaussianState, lab: str) -> CloneMoments:
        return CloneMoments(st.mean(lab, "Q"), st.mean(lab, "P"), st.variance(lab, "Q"), st.variance(lab, "P"))

    inp, bright, dark = moments(state, "f"), moments(out, "f"), moments(out, "xi")
    correlations = {}
    for quad in ("Q", "P"):
        i_in = state.quadrature_index("f", quad)
        j_f = out.quadrature_index("f", quad)
        j_x = out.quadrature_index("xi", quad)
        v_in = state.cov[i_in, i_in]
        correlations[quad] = tuple(
            float(c)
            for c in (
                squared_correlation(cross[i_in, j_f], v_in, out.cov[j_f, j_f]),
                squared_correlation(cross[i_in, j_x], v_in, out.cov[j_x, j_x]),
                squared_correlation(out.cov[j_f, j_x], out.cov[j_f, j_f], out.cov[j_x, j_x]),
            )
        )

    added = (bright.v_q - inp.v_q, bright.v_p - inp.v_p)
    added_dark = (dark.v_q - inp.v_q, dark.v_p - inp.v_p)
    warn = abs(theta.theta - BALANCED) > balance_tol
    notes = []
    if warn:
        notes.append(f"theta = {theta.theta:.6g} is not balanced mixing; clones are asymmetric")
    claimed = None
    f_bright = fidelity(*added)
    if _is_balanced_condensate(medium):
        claimed = CLAIMED_BEC_FIDELITY
        notes.append(
            f"fidelity from the added noise is {f_bright:.6f}; the previously claimed value "
            f"{CLAIMED_BEC_FIDELITY} at this point does not follow from the same formula"
        )
    return CloneReport(
        input=inp,
        bright=bright,
        dark=dark,
        added_noise=added,
        added_noise_dark=added_dark,
        fidelity=f_bright,
        fidelity_dark=fidelity(*added_dark),
        correlations=correlations,
        theta=theta.theta,
        theta_warning=warn,
        claimed_fidelity=claimed,
        notes=tuple(notes),
    )
