"""Polariton storage map and the input/output correlation coefficients.

The medium mixes the signal f with the collective excitation xi:

    Phi_f  = mu f  - nu xi
    Phi_xi = mu xi + nu f,        mu = cos(theta), nu = sin(theta)

and the storage quality is judged per quadrature X by three squared
correlation coefficients: input signal vs output signal (c1), input signal
vs output excitation (c2) and between the two outputs (c3).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .atomic import SpinMoments
from .gaussian import ModeMap, ValidationError, apply_map, make_vacuum, set_mode_moments

PATH_AGREEMENT_TOL = 1e-10
QUADRATURES = ("Q", "P")


class DegenerateInputError(ValueError):
    """Both input variances of a quadrature vanish; the coefficients are 0/0."""


class ConsistencyError(ArithmeticError):
    """Two independent evaluation routes disagree beyond tolerance."""


@dataclass(frozen=True)
class PolaritonAngle:
    theta: float

    def __post_init__(self) -> None:
        if not (0.0 <= self.theta <= math.pi / 2) or math.isnan(self.theta):
            raise ValidationError(f"theta must lie in [0, pi/2], got {self.theta}")

    @property
    def mu(self) -> float:
        return math.cos(self.theta)

    @property
    def nu(self) -> float:
        return math.sin(self.theta)

    @property
    def n_g(self) -> float:
        """Group index tan^2(theta); undefined at theta = pi/2."""
        if math.isclose(self.theta, math.pi / 2, rel_tol=0.0, abs_tol=1e-15):
            raise ValidationError("n_g is undefined at theta = pi/2")
        return math.tan(self.theta) ** 2


def from_rabi(omega1: float, omega2: float, n_atoms: int) -> PolaritonAngle:
    """Mixing angle from tan^2(theta) = omega2^2 N / omega1^2."""
    if omega1 == 0:
        raise ValidationError("omega1 = 0 gives a singular mixing angle")
    if omega1 < 0 or omega2 < 0:
        raise ValidationError("Rabi frequencies must be nonnegative")
    if n_atoms < 1:
        raise ValidationError("n_atoms must be positive")
    return PolaritonAngle(math.atan(omega2 * math.sqrt(n_atoms) / omega1))


def storage_map(angle: PolaritonAngle) -> ModeMap:
    """Two-mode rotation on (f, xi)."""
    mu, nu = angle.mu, angle.nu
    return ModeMap(np.array([[mu, -nu], [nu, mu]]), np.zeros((2, 2)))


@dataclass(frozen=True)
class QuadratureCorrelations:
    c1: float
    c2: float
    c3: float
    v_in_f: float
    v_in_xi: float
    v_out_f: float
    v_out_xi: float
    gain: float


@dataclass(frozen=True)
class CorrelationReport:
    q: QuadratureCorrelations
    p: QuadratureCorrelations
    theta: float

    def __getitem__(self, quad: str) -> QuadratureCorrelations:
        return {"Q": self.q, "P": self.p}[quad]

    @property
    def qnd_gain(self) -> tuple[float, float]:
        return self.q.gain, self.p.gain


def _ratio(num: float, den: float) -> float:
    # a coefficient against a noiseless quadrature is taken as zero correlation
    if den <= 0.0:
        return 0.0
    return num / den


def squared_correlation(cov: float, v_a: float, v_b: float) -> float:
    return _ratio(cov * cov, v_a * v_b)


def closed_form_coefficients(v_f, v_xi, theta):
    """Coefficients (c1, c2, c3) from the input variances; numpy-broadcasting."""
    v_f = np.asarray(v_f, dtype=float)
    v_xi = np.asarray(v_xi, dtype=float)
    mu2 = np.cos(theta) ** 2
    nu2 = np.sin(theta) ** 2
    d1 = mu2 * v_f + nu2 * v_xi
    d2 = mu2 * v_xi + nu2 * v_f
    with np.errstate(divide="ignore", invalid="ignore"):
        c1 = np.where(d1 > 0, mu2 * v_f / d1, 0.0)
        c2 = np.where(d2 > 0, nu2 * v_f / d2, 0.0)
        c3 = np.where(d1 * d2 > 0, mu2 * nu2 * (v_f - v_xi) ** 2 / (d1 * d2), 0.0)
    return c1, c2, c3


def fock_medium_coefficients(n1: float, theta):
    """Coherent signal against a medium of excitation variance 1 + 2 n1."""
    mu2, nu2 = np.cos(theta) ** 2, np.sin(theta) ** 2
    c1 = mu2 / (1 + 2 * nu2 * n1)
    c2 = nu2 / (1 + 2 * mu2 * n1)
    c3 = 4 * mu2 * nu2 * n1**2 / (1 + 4 * mu2 * nu2 * n1**2 + 2 * n1)
    return c1, c2, c3


def classical_coefficients(theta):
    """Coherent signal and coherent medium: (mu^2, nu^2, 0)."""
    return np.cos(theta) ** 2, np.sin(theta) ** 2, np.zeros_like(np.asarray(theta, dtype=float))


def _propagated(signal: SpinMoments, medium: SpinMoments, angle: PolaritonAngle):
    state = make_vacuum(("f", "xi"))
    state = set_mode_moments(state, "f", signal.mean_q, signal.mean_p, signal.v_q, signal.v_p, signal.cov_qp)
    state = set_mode_moments(state, "xi", medium.mean_q, medium.mean_p, medium.v_q, medium.v_p, medium.cov_qp)
    out, cross = apply_map(state, storage_map(angle), ("f", "xi"), ("f", "xi"))
    return state, out, cross


def correlation_report(signal: SpinMoments, medium: SpinMoments, angle: PolaritonAngle) -> CorrelationReport:
    """Correlation coefficients from propagated moments, checked against the closed forms."""
    for quad, vf, vx in (("Q", signal.v_q, medium.v_q), ("P", signal.v_p, medium.v_p)):
        if vf == 0.0 and vx == 0.0:
            raise DegenerateInputError(f"both {quad} input variances are zero")

    state, out, cross = _propagated(signal, medium, angle)
    per_quad = {}
    for k, quad in enumerate(QUADRATURES):
        i_f = state.quadrature_index("f", quad)
        v_in_f = state.cov[i_f, i_f]
        v_in_xi = state.variance("xi", quad)
        v_out_f = out.variance("f", quad)
        v_out_xi = out.variance("xi", quad)
        cov_f = cross[i_f, k]  # output f occupies columns 0, 1
        cov_xi = cross[i_f, 2 + k]
        cov_out = out.covariance(("f", quad), ("xi", quad))
        c1 = squared_correlation(cov_f, v_in_f, v_out_f)
        c2 = squared_correlation(cov_xi, v_in_f, v_out_xi)
        c3 = squared_correlation(cov_out, v_out_f, v_out_xi)

        ref = [float(x) for x in closed_form_coefficients(v_in_f, v_in_xi, angle.theta)]
        delta = max(abs(a - b) for a, b in zip((c1, c2, c3), ref))
        if delta > PATH_AGREEMENT_TOL:
            raise ConsistencyError(f"{quad}: propagated and closed-form coefficients differ by {delta:.3e}")
        gain = _ratio(cov_xi, v_in_f)
        per_quad[quad] = QuadratureCorrelations(
            *(float(x) for x in (c1, c2, c3, v_in_f, v_in_xi, v_out_f, v_out_xi, gain))
        )
    return CorrelationReport(per_quad["Q"], per_quad["P"], angle.theta)


def qnd_condition_check(medium: SpinMoments, angle: PolaritonAngle, margin: float = 0.1) -> tuple[bool, bool]:
    """Whether V_X,xi <= margin * nu^2 / mu^2 holds for X = Q and X = P."""
    if not 0.0 < margin <= 1.0:
        raise ValidationError(f"margin must lie in (0, 1], got {margin}")
    mu2 = angle.mu**2
    bound = math.inf if mu2 < 1e-30 else margin * angle.nu**2 / mu2
    return medium.v_q <= bound, medium.v_p <= bound
