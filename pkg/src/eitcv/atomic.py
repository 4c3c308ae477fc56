"""Collective-excitation quadrature moments of the atomic medium.

The excitation operator is xi = a2^+ a1 / sqrt(N) over two atomic levels
(Schwinger representation), with Q_xi = xi + xi^+ and P_xi = i(xi^+ - xi).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Union

import numpy as np
from scipy.special import gammaln

from .gaussian import ValidationError

MAX_EXACT_ATOMS = 200
ROUNDOFF = 1e-12


class CapacityError(ValueError):
    """Raised when an exact computation would exceed its size limit."""


@dataclass(frozen=True)
class FockMedium:
    """Two-mode number state |n1>|n2> of the atomic levels."""

    n1: int
    n2: int

    def __post_init__(self) -> None:
        if self.n1 < 0 or self.n2 < 0 or int(self.n1) != self.n1 or int(self.n2) != self.n2:
            raise ValidationError("Fock occupations must be nonnegative integers")
        if self.n1 + self.n2 == 0:
            raise ValidationError("Fock medium needs at least one atom")

    @property
    def n_atoms(self) -> int:
        return self.n1 + self.n2


@dataclass(frozen=True)
class BECMedium:
    """Condensate (SU(2) coherent) state (alpha1 a1^+ + alpha2 a2^+)^N |0> / sqrt(N!).

    Only |alpha1| is stored; |alpha2| = sqrt(1 - |alpha1|^2) keeps the state
    normalised.
    """

    n_atoms: int
    mag1: float
    phase1: float = 0.0
    phase2: float = 0.0

    def __post_init__(self) -> None:
        if self.n_atoms < 1 or int(self.n_atoms) != self.n_atoms:
            raise ValidationError("BEC medium needs a positive integer atom number")
        if not 0.0 <= self.mag1 <= 1.0:
            raise ValidationError(f"|alpha1| must lie in [0, 1], got {self.mag1}")

    @classmethod
    def from_population(cls, n_atoms: int, pop1: float, phi: float) -> "BECMedium":
        """Build from |alpha1|^2 and the relative phase phi = phase2 - phase1."""
        if not 0.0 <= pop1 <= 1.0:
            raise ValidationError(f"|alpha1|^2 must lie in [0, 1], got {pop1}")
        return cls(n_atoms, math.sqrt(pop1), 0.0, phi)

    @property
    def mag2(self) -> float:
        return math.sqrt(max(0.0, 1.0 - self.mag1**2))

    @property
    def phi(self) -> float:
        return self.phase2 - self.phase1

    @property
    def alpha1(self) -> complex:
        return self.mag1 * np.exp(1j * self.phase1)

    @property
    def alpha2(self) -> complex:
        return self.mag2 * np.exp(1j * self.phase2)


@dataclass(frozen=True)
class CoherentMedium:
    """Idealised medium with vacuum-level excitation noise."""


AtomicMediumState = Union[FockMedium, BECMedium, CoherentMedium]


@dataclass(frozen=True)
class SpinMoments:
    mean_q: float
    mean_p: float
    v_q: float
    v_p: float
    cov_qp: float = 0.0

    def __post_init__(self) -> None:
        if self.v_q < -ROUNDOFF or self.v_p < -ROUNDOFF:
            raise ValidationError(f"negative variance in {self}")
        # exact zeros (fully polarised states) come out as tiny negatives
        object.__setattr__(self, "v_q", max(float(self.v_q), 0.0))
        object.__setattr__(self, "v_p", max(float(self.v_p), 0.0))

    @classmethod
    def coherent(cls, mean_q: float = 0.0, mean_p: float = 0.0) -> "SpinMoments":
        return cls(mean_q, mean_p, 1.0, 1.0, 0.0)


def spin_moments(state: AtomicMediumState) -> SpinMoments:
    """Closed-form moments of (Q_xi, P_xi).

    For the condensate the Bloch vector is n = (2|a1||a2|cos(phi),
    2|a1||a2|sin(phi), |a2|^2 - |a1|^2) and the spin-coherent covariance
    (N/4)(1 - n n^T) gives V_Q = 1 - n_x^2, V_P = 1 - n_y^2 and
    cov(Q, P) = n_x n_y, exact at every N.
    """
    if isinstance(state, CoherentMedium):
        return SpinMoments(0.0, 0.0, 1.0, 1.0, 0.0)
    if isinstance(state, FockMedium):
        n1, n2 = state.n1, state.n2
        v = (n1 * (n2 + 1) + n2 * (n1 + 1)) / (n1 + n2)
        return SpinMoments(0.0, 0.0, v, v, 0.0)
    if isinstance(state, BECMedium):
        root = math.sqrt(state.n_atoms)
        nx = 2.0 * state.mag1 * state.mag2 * math.cos(state.phi)
        ny = 2.0 * state.mag1 * state.mag2 * math.sin(state.phi)
        # P_xi = -2 J_y / sqrt(N): its mean carries the opposite sign of sin(phi)
        return SpinMoments(root * nx, -root * ny, 1.0 - nx**2, 1.0 - ny**2, nx * ny)
    raise TypeError(f"unsupported medium {state!r}")


def _bec_amplitudes(state: BECMedium) -> np.ndarray:
    """Amplitudes c_k on |k, N-k>, k = n1 = 0..N."""
    n = state.n_atoms
    k = np.arange(n + 1)
    log_binom = 0.5 * (gammaln(n + 1) - gammaln(k + 1) - gammaln(n - k + 1))
    with np.errstate(divide="ignore", invalid="ignore"):
        t1 = np.where(k == 0, 0.0, k * np.log(state.mag1))
        t2 = np.where(k == n, 0.0, (n - k) * np.log(state.mag2))
    log_mag = log_binom + t1 + t2
    phase = np.exp(1j * (k * state.phase1 + (n - k) * state.phase2))
    return np.exp(log_mag) * phase


def exact_bec_moments(state: BECMedium, max_atoms: int = MAX_EXACT_ATOMS) -> SpinMoments:
    """Moments of (Q_xi, P_xi) from the binomial expansion of the condensate state."""
    if not isinstance(state, BECMedium):
        raise TypeError("exact_bec_moments needs a BECMedium")
    if state.n_atoms > max_atoms:
        raise CapacityError(f"N = {state.n_atoms} exceeds the exact-expansion limit {max_atoms}")
    n = state.n_atoms
    c = _bec_amplitudes(state)
    k = np.arange(n + 1)

    def lower(v: np.ndarray) -> np.ndarray:
        # xi |k, N-k> = sqrt(k (N-k+1) / N) |k-1, N-k+1>
        out = np.zeros_like(v)
        out[:-1] = np.sqrt(k[1:] * (n - k[1:] + 1) / n) * v[1:]
        return out

    def raise_(v: np.ndarray) -> np.ndarray:
        out = np.zeros_like(v)
        out[1:] = np.sqrt(k[1:] * (n - k[1:] + 1) / n) * v[:-1]
        return out

    xi_c = lower(c)
    m1 = np.vdot(c, xi_c)
    m2 = np.vdot(c, lower(xi_c))  # <xi^2>
    n_dag_n = np.vdot(xi_c, xi_c).real  # <xi^+ xi>
    xd = raise_(c)
    n_n_dag = np.vdot(xd, xd).real  # <xi xi^+>

    mean_q = 2.0 * m1.real
    mean_p = 2.0 * m1.imag
    q2 = 2.0 * m2.real + n_dag_n + n_n_dag
    p2 = n_dag_n + n_n_dag - 2.0 * m2.real
    qp = 2.0 * m2.imag
    return SpinMoments(
        float(mean_q),
        float(mean_p),
        float(max(q2 - mean_q**2, 0.0)),
        float(max(p2 - mean_p**2, 0.0)),
        float(qp - mean_q * mean_p),
    )


def adiabatic_condition(n1: float, n2: float, n3: float, ratio: float = 0.1) -> bool:
    """Populations satisfy n3 << n1 < n2, with "<<" read as n3 <= ratio * n1."""
    if not 0.0 < ratio <= 1.0:
        raise ValidationError(f"ratio must lie in (0, 1], got {ratio}")
    return n3 <= ratio * n1 and n1 < n2
