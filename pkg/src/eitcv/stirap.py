"""Mean-field dynamics of stimulated Raman two-colour photoassociation.

Amplitudes <a1> (free atoms), <a2> (ground molecules), <a3> (excited
molecules) and <f> (signal field) evolve in the rotating frame as

    d<a1>/dt = -g1 <a1> + i d1 <a1> + i k2 W1* <a3>
    d<a2>/dt = -g2 <a2> + i d2 <a2> + i k3 W2 <f>* <a3>
    d<a3>/dt = -g3 <a3> + i k4a W1 <a1> + i k4b W2 <f> <a2>
    d<f>/dt  =                          i k5 W2 <a2>* <a3>

with W1 = kappa(t) <a1>, W2 = Omega2(t) and d_j = Delta_j - sum_k lam_jk n_k.
The coupling factors (k2, k3, k4a, k4b, k5) select the equation variant:

    printed      (1, 1/2, 1/2, 1, 1/2)   the default
    symmetrized  (1/2, 1/2, 1/2, 1/2, 1/2)
    hamiltonian  (1, 1/2, 1/2, 1/2, 1/2) Heisenberg equations of the
                                          three-mode Hamiltonian
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace
from typing import Sequence

import numpy as np
from numpy.typing import NDArray
from scipy.integrate import solve_ivp

from .atomic import adiabatic_condition
from .gaussian import ValidationError

VARIANTS = {
    "printed": (1.0, 0.5, 0.5, 1.0, 0.5),
    "symmetrized": (0.5, 0.5, 0.5, 0.5, 0.5),
    "hamiltonian": (1.0, 0.5, 0.5, 0.5, 0.5),
}
PULSE_SHAPES = ("gaussian", "sech")


class StiffnessError(RuntimeError):
    """The adaptive integrator could not advance (step size underflow)."""


@dataclass(frozen=True)
class Pulse:
    center: float
    width: float
    shape: str = "gaussian"

    def __post_init__(self) -> None:
        if self.width <= 0:
            raise ValidationError(f"pulse width must be positive, got {self.width}")
        if self.shape not in PULSE_SHAPES:
            raise ValidationError(f"pulse shape must be one of {PULSE_SHAPES}")

    def __call__(self, t):
        x = (np.asarray(t, dtype=float) - self.center) / self.width
        if self.shape == "gaussian":
            return np.exp(-(x**2))
        return 1.0 / np.cosh(x)

    def reflected(self, t0: float, t1: float) -> "Pulse":
        return replace(self, center=t0 + t1 - self.center)


@dataclass(frozen=True)
class StirapParams:
    """Couplings in rad/s, decay rates in 1/s, pulse times in s.

    ``laser_omega1``/``laser_omega2`` are the carrier frequencies removed by
    the rotating frame; they are kept as metadata only.
    """

    kappa: complex
    omega2_peak: complex
    kappa_pulse: Pulse
    omega2_pulse: Pulse
    delta1: float = 0.0
    delta2: float = 0.0
    lam: NDArray[np.float64] = field(default_factory=lambda: np.zeros((3, 3)))
    gamma: tuple[float, float, float] = (0.0, 0.0, 0.0)
    variant: str = "printed"
    laser_omega1: float | None = None
    laser_omega2: float | None = None

    def __post_init__(self) -> None:
        lam = np.array(self.lam, dtype=float)
        if lam.shape != (3, 3):
            raise ValidationError("lam must be 3x3")
        if not np.array_equal(lam, lam.T):
            raise ValidationError("lam must be symmetric")
        lam.setflags(write=False)
        object.__setattr__(self, "lam", lam)
        gamma = tuple(float(g) for g in self.gamma)
        if len(gamma) != 3 or min(gamma) < 0:
            raise ValidationError("gamma must be three nonnegative rates")
        object.__setattr__(self, "gamma", gamma)
        if self.variant not in VARIANTS:
            raise ValidationError(f"variant must be one of {sorted(VARIANTS)}")

    def kappa_at(self, t):
        return self.kappa * self.kappa_pulse(t)

    def omega2_at(self, t):
        return self.omega2_peak * self.omega2_pulse(t)

    def time_reversed(self, t0: float, t1: float) -> "StirapParams":
        return replace(
            self,
            kappa_pulse=self.kappa_pulse.reflected(t0, t1),
            omega2_pulse=self.omega2_pulse.reflected(t0, t1),
        )


@dataclass(frozen=True)
class StirapState:
    amp1: complex
    amp2: complex
    amp3: complex
    ampf: complex
    t: float = 0.0

    @property
    def vector(self) -> NDArray[np.complex128]:
        return np.array([self.amp1, self.amp2, self.amp3, self.ampf], dtype=complex)

    @property
    def populations(self) -> NDArray[np.float64]:
        return np.abs(self.vector) ** 2


def _derivative(t: float, y: NDArray[np.complex128], params: StirapParams) -> NDArray[np.complex128]:
    a1, a2, a3, f = y
    k2, k3, k4a, k4b, k5 = VARIANTS[params.variant]
    g1, g2, g3 = params.gamma
    n = np.abs(y[:3]) ** 2
    d1 = params.delta1 - params.lam[0] @ n
    d2 = params.delta2 - params.lam[1] @ n
    w1 = params.kappa_at(t) * a1
    w2 = params.omega2_at(t)
    return np.array(
        [
            -g1 * a1 + 1j * d1 * a1 + 1j * k2 * np.conj(w1) * a3,
            -g2 * a2 + 1j * d2 * a2 + 1j * k3 * w2 * np.conj(f) * a3,
            -g3 * a3 + 1j * k4a * w1 * a1 + 1j * k4b * w2 * f * a2,
            1j * k5 * w2 * np.conj(a2) * a3,
        ]
    )


def rhs(state: StirapState, params: StirapParams) -> NDArray[np.complex128]:
    """Time derivative of (<a1>, <a2>, <a3>, <f>) at ``state``."""
    return _derivative(state.t, state.vector, params)


def charge_weights(variant: str) -> NDArray[np.float64]:
    """Weights w with sum_j w_j n_j conserved by ``variant`` when gamma = 0.

    Together with n_f - n_2 (conserved by every variant) this fixes the
    atom-number-like charge each variant actually preserves; only the
    hamiltonian variant gives n1 + 2 n2 + 2 n3.
    """
    k2, k3, k4a, k4b, _ = VARIANTS[variant]
    w3 = k2 / k4a
    return np.array([1.0, k4b * w3 / k3, w3, 0.0])


@dataclass(frozen=True)
class Diagnostics:
    q1_drift: float
    q2_drift: float
    variant_charge_drift: float
    max_n3_over_n: float
    molecular_fraction: float
    adiabatic: NDArray[np.bool_]
    nfev: int


@dataclass(frozen=True)
class Trajectory:
    t: NDArray[np.float64]
    amps: NDArray[np.complex128]  # (samples, 4)
    variant: str
    diagnostics: Diagnostics

    @property
    def populations(self) -> NDArray[np.float64]:
        return np.abs(self.amps) ** 2

    @property
    def q1(self) -> NDArray[np.float64]:
        n = self.populations
        return n[:, 0] + 2 * n[:, 1] + 2 * n[:, 2]

    @property
    def q2(self) -> NDArray[np.float64]:
        n = self.populations
        return n[:, 3] - n[:, 1]

    def state(self, i: int) -> StirapState:
        return StirapState(*self.amps[i], t=float(self.t[i]))


def _relative_drift(series: NDArray[np.float64], scale: float) -> float:
    return float(np.max(np.abs(series - series[0])) / scale)


def integrate(
    initial: StirapState,
    params: StirapParams,
    t_end: float,
    rel_tol: float = 1e-10,
    abs_tol: float = 1e-12,
    n_samples: int = 1001,
    method: str = "RK45",
    adiabatic_ratio: float = 0.1,
) -> Trajectory:
    """Integrate with an embedded explicit Runge-Kutta pair under (rel_tol, abs_tol)."""
    if t_end <= initial.t:
        raise ValidationError("t_end must exceed the initial time")
    y0 = initial.vector

    def f(t, y):
        d = _derivative(t, y[:4] + 1j * y[4:], params)
        return np.concatenate([d.real, d.imag])

    t_eval = np.linspace(initial.t, t_end, n_samples)
    with np.errstate(over="ignore", invalid="ignore"):
        sol = solve_ivp(
            f,
            (initial.t, t_end),
            np.concatenate([y0.real, y0.imag]),
            method=method,
            t_eval=t_eval,
            rtol=rel_tol,
            atol=abs_tol,
        )
    if sol.status != 0:
        where = f" after t = {sol.t[-1]:.6g}" if len(sol.t) else ""
        raise StiffnessError(f"integration stopped{where}: {sol.message}")
    amps = (sol.y[:4] + 1j * sol.y[4:]).T
    n = np.abs(amps) ** 2
    q1 = n[:, 0] + 2 * n[:, 1] + 2 * n[:, 2]
    q2 = n[:, 3] - n[:, 1]
    own = n @ charge_weights(params.variant)
    n_total = q1[0] if q1[0] > 0 else 1.0
    scale2 = abs(q2[0]) if q2[0] != 0 else max(float(n[0].sum()), 1.0)
    diag = Diagnostics(
        q1_drift=_relative_drift(q1, n_total),
        q2_drift=_relative_drift(q2, scale2),
        variant_charge_drift=_relative_drift(own, own[0] if own[0] > 0 else 1.0),
        max_n3_over_n=float(n[:, 2].max() / n_total),
        molecular_fraction=float(2 * n[-1, 1] / n_total),
        adiabatic=np.array([adiabatic_condition(*row[:3], ratio=adiabatic_ratio) for row in n]),
        nfev=int(sol.nfev),
    )
    return Trajectory(sol.t, amps, params.variant, diag)


def eit_angle_trace(trajectory: Trajectory, params: StirapParams) -> NDArray[np.float64]:
    """Mixing angle atan(|Omega2| sqrt(N) / |Omega1|) along the trajectory.

    N is the initial value of n1 + 2 n2 + 2 n3; samples with Omega1 = 0 are NaN.
    """
    q1 = trajectory.q1
    n_atoms = q1[0]
    w1 = np.abs(params.kappa_at(trajectory.t) * trajectory.amps[:, 0])
    w2 = np.abs(params.omega2_at(trajectory.t))
    theta = np.full(trajectory.t.shape, np.nan)
    ok = w1 > 0
    theta[ok] = np.arctan(w2[ok] * math.sqrt(n_atoms) / w1[ok])
    return theta


def counterintuitive_preset(variant: str = "printed", n_atoms: float = 100.0, n_photons: float = 1000.0):
    """Adiabatic counterintuitive sequence: the Omega2 pulse precedes the kappa pulse.

    Returns (initial state, params, t_end) with t_end = 10 pulse widths.
    """
    width = 1e-5
    params = StirapParams(
        kappa=5.0 / width,
        omega2_peak=1.0 / width,
        kappa_pulse=Pulse(6 * width, width),
        omega2_pulse=Pulse(4 * width, width),
        variant=variant,
    )
    initial = StirapState(math.sqrt(n_atoms), 0.0, 0.0, math.sqrt(n_photons), 0.0)
    return initial, params, 10 * width


def compare_variants(
    initial: StirapState,
    params: StirapParams,
    t_end: float,
    variants: Sequence[str] = ("printed", "symmetrized"),
    **kwargs,
) -> dict[str, Trajectory]:
    return {v: integrate(initial, replace(params, variant=v), t_end, **kwargs) for v in variants}
