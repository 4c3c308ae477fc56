"""Brute-force truncated Fock-space simulator.

States are dense amplitude tensors over a product number basis, one axis
per mode. Unitaries act exactly on the truncated tensor and every operation
checks that the truncation does not leak more than ``LEAK_TOL`` of
probability. Observables are linear combinations of mode quadratures and of
collective spin quadratures built from two atomic modes.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Sequence, Union

import numpy as np
from numpy.typing import NDArray
from scipy.linalg import expm
from scipy.special import gammaln
from scipy.stats import poisson

MAX_DIMENSION = 10**7
LEAK_TOL = 1e-10
NORM_TOL = 1e-12


class CapacityError(ValueError):
    pass


class TruncationError(ArithmeticError):
    """Probability weight beyond the cutoff exceeds the allowed leak."""


# state descriptors ---------------------------------------------------------


@dataclass(frozen=True)
class Vacuum:
    cutoff: int


@dataclass(frozen=True)
class Number:
    n: int
    cutoff: int


@dataclass(frozen=True)
class Coherent:
    alpha: complex
    cutoff: int


@dataclass(frozen=True)
class Squeezed:
    """Squeezed vacuum S(r e^{i phi})|0>; phi = 0 squeezes Q."""

    r: float
    phi: float
    cutoff: int


@dataclass(frozen=True)
class Condensate:
    """Two-mode state (alpha1 a1^+ + alpha2 a2^+)^N |0> / sqrt(N!); spans two modes."""

    n_atoms: int
    alpha1: complex
    alpha2: complex


Descriptor = Union[Vacuum, Number, Coherent, Squeezed, Condensate]


def _single_mode(desc: Descriptor) -> NDArray[np.complex128]:
    if isinstance(desc, Vacuum):
        v = np.zeros(desc.cutoff + 1, complex)
        v[0] = 1.0
        return v
    if isinstance(desc, Number):
        if not 0 <= desc.n <= desc.cutoff:
            raise ValueError(f"n = {desc.n} outside cutoff {desc.cutoff}")
        v = np.zeros(desc.cutoff + 1, complex)
        v[desc.n] = 1.0
        return v
    if isinstance(desc, Coherent):
        a = complex(desc.alpha)
        mag = abs(a)
        if desc.cutoff < mag**2 + 8 * mag + 10:
            raise TruncationError(f"cutoff {desc.cutoff} too small for |alpha| = {mag:.3g}")
        tail = poisson.sf(desc.cutoff, mag**2) if mag > 0 else 0.0
        if tail > LEAK_TOL:
            raise TruncationError(f"coherent tail {tail:.2e} beyond cutoff")
        n = np.arange(desc.cutoff + 1)
        if mag == 0:
            return _single_mode(Vacuum(desc.cutoff))
        log_amp = -0.5 * mag**2 + n * math.log(mag) - 0.5 * gammaln(n + 1)
        v = np.exp(log_amp) * np.exp(1j * n * np.angle(a))
        return v / np.linalg.norm(v)
    if isinstance(desc, Squeezed):
        if desc.r == 0:
            return _single_mode(Vacuum(desc.cutoff))
        t = math.tanh(abs(desc.r))
        phase = desc.phi + (math.pi if desc.r < 0 else 0.0)
        m_max = desc.cutoff // 2
        m_ext = m_max + 2000
        m = np.arange(m_ext + 1)
        log_amp = (
            m * math.log(t) + 0.5 * gammaln(2 * m + 1) - m * math.log(2.0) - gammaln(m + 1)
            - 0.5 * math.log(math.cosh(abs(desc.r)))
        )
        weights = np.exp(2 * log_amp)
        tail = weights[m_max + 1 :].sum()
        if tail > LEAK_TOL:
            raise TruncationError(f"squeezed tail {tail:.2e} beyond cutoff {desc.cutoff}")
        v = np.zeros(desc.cutoff + 1, complex)
        v[0 : 2 * m_max + 1 : 2] = np.exp(log_amp[: m_max + 1]) * (-np.exp(1j * phase)) ** m[: m_max + 1]
        return v / np.linalg.norm(v)
    raise TypeError(f"not a single-mode descriptor: {desc!r}")


def _condensate(desc: Condensate) -> NDArray[np.complex128]:
    n = desc.n_atoms
    if n < 1:
        raise ValueError("condensate needs at least one atom")
    norm = abs(desc.alpha1) ** 2 + abs(desc.alpha2) ** 2
    if not math.isclose(norm, 1.0, abs_tol=1e-12):
        raise ValueError(f"|alpha1|^2 + |alpha2|^2 = {norm}, expected 1")
    psi = np.zeros((n + 1, n + 1), complex)
    for k in range(n + 1):
        psi[k, n - k] = math.sqrt(math.comb(n, k)) * desc.alpha1**k * desc.alpha2 ** (n - k)
    return psi


# states --------------------------------------------------------------------


@dataclass(frozen=True)
class FockState:
    labels: tuple[str, ...]
    amplitudes: NDArray[np.complex128]

    def __post_init__(self) -> None:
        amp = np.asarray(self.amplitudes, dtype=complex)
        if amp.ndim != len(self.labels) or len(set(self.labels)) != len(self.labels):
            raise ValueError("labels must be distinct and match the tensor rank")
        if amp.size > MAX_DIMENSION:
            raise CapacityError(f"dimension {amp.size} exceeds {MAX_DIMENSION}")
        norm = np.linalg.norm(amp)
        if abs(norm - 1.0) > NORM_TOL:
            raise ValueError(f"state norm {norm!r} differs from 1")
        amp = amp.copy()
        amp.setflags(write=False)
        object.__setattr__(self, "labels", tuple(self.labels))
        object.__setattr__(self, "amplitudes", amp)

    @property
    def dims(self) -> tuple[int, ...]:
        return self.amplitudes.shape

    def axis(self, label: str) -> int:
        try:
            return self.labels.index(label)
        except ValueError:
            raise KeyError(f"unknown mode {label!r}") from None

    def populations(self, label: str) -> NDArray[np.float64]:
        ax = self.axis(label)
        prob = np.abs(self.amplitudes) ** 2
        return prob.sum(axis=tuple(i for i in range(prob.ndim) if i != ax))

    def mean_number(self, label: str) -> float:
        p = self.populations(label)
        return float(np.arange(p.size) @ p)


def build_state(components: Sequence[tuple[Union[str, tuple[str, str]], Descriptor]]) -> FockState:
    """Product state from (label, descriptor) pairs; a Condensate takes a label pair."""
    labels: list[str] = []
    factors = []
    size = 1
    for lab, desc in components:
        if isinstance(desc, Condensate):
            if isinstance(lab, str) or len(lab) != 2:
                raise ValueError("a condensate needs two mode labels")
            size *= (desc.n_atoms + 1) ** 2
            labels.extend(lab)
            if size > MAX_DIMENSION:
                raise CapacityError(f"dimension {size} exceeds {MAX_DIMENSION}")
            factors.append(_condensate(desc))
        else:
            size *= desc.cutoff + 1
            if size > MAX_DIMENSION:
                raise CapacityError(f"dimension {size} exceeds {MAX_DIMENSION}")
            labels.append(lab)
            factors.append(_single_mode(desc))
    psi = factors[0]
    for f in factors[1:]:
        psi = np.multiply.outer(psi, f)
    return FockState(tuple(labels), psi / np.linalg.norm(psi))


# ladder operators on tensors ----------------------------------------------


def _lower(psi: NDArray, ax: int) -> NDArray:
    d = psi.shape[ax]
    out = np.zeros_like(psi)
    shape = [1] * psi.ndim
    shape[ax] = d - 1
    coef = np.sqrt(np.arange(1, d)).reshape(shape)
    src = [slice(None)] * psi.ndim
    dst = [slice(None)] * psi.ndim
    src[ax] = slice(1, d)
    dst[ax] = slice(0, d - 1)
    out[tuple(dst)] = coef * psi[tuple(src)]
    return out


def _raise(psi: NDArray, ax: int) -> NDArray:
    # amplitude pushed above the cutoff is dropped
    d = psi.shape[ax]
    out = np.zeros_like(psi)
    shape = [1] * psi.ndim
    shape[ax] = d - 1
    coef = np.sqrt(np.arange(1, d)).reshape(shape)
    src = [slice(None)] * psi.ndim
    dst = [slice(None)] * psi.ndim
    src[ax] = slice(0, d - 1)
    dst[ax] = slice(1, d)
    out[tuple(dst)] = coef * psi[tuple(src)]
    return out


def _number_grid(shape: tuple[int, ...], ax: int) -> NDArray:
    s = [1] * len(shape)
    s[ax] = shape[ax]
    return np.arange(shape[ax]).reshape(s)


# unitaries -----------------------------------------------------------------


def _beamsplitter_tensor(psi: NDArray, ax_a: int, ax_b: int, theta: float) -> NDArray:
    """exp(theta (b^+ a - a^+ b)) applied block by block in total number."""
    moved = np.moveaxis(psi, (ax_a, ax_b), (0, 1))
    da, db = moved.shape[:2]
    flat = moved.reshape(da, db, -1)
    out = np.zeros_like(flat)
    for n in range(da + db - 1):
        ks = np.arange(max(0, n - db + 1), min(n, da - 1) + 1)
        m = ks.size
        gen = np.zeros((m, m))
        for i, k in enumerate(ks[:-1]):
            # a^+ b |k, n-k> = sqrt((k+1)(n-k)) |k+1, n-k-1>
            amp = math.sqrt((k + 1) * (n - k))
            gen[i + 1, i] = -theta * amp
            gen[i, i + 1] = theta * amp
        u = expm(gen)
        block = flat[ks, n - ks, :]
        out[ks, n - ks, :] = u @ block
    out = out.reshape(moved.shape)
    return np.moveaxis(out, (0, 1), (ax_a, ax_b))


def _leaky_block_weight(psi: NDArray, ax_a: int, ax_b: int) -> float:
    da, db = psi.shape[ax_a], psi.shape[ax_b]
    total = _number_grid(psi.shape, ax_a) + _number_grid(psi.shape, ax_b)
    return float(np.sum(np.abs(psi[np.broadcast_to(total > min(da, db) - 1, psi.shape)]) ** 2))


def _series(psi: NDArray, step: Callable[[NDArray], NDArray], coef: float) -> NDArray:
    """exp(coef * op) psi for an operator that is nilpotent on the truncated space."""
    acc = psi.copy()
    term = psi
    k = 1
    while True:
        term = step(term) * (coef / k)
        if not np.any(term):
            return acc
        acc = acc + term
        k += 1


def _squeezer_tensor(psi: NDArray, ax_a: int, ax_b: int, r: float) -> NDArray:
    """exp(r (a^+ b^+ - a b)) in normal-ordered (disentangled) form.

    Each factor is exact on the truncated support, so output amplitudes
    inside the cutoff are exact; only amplitude pushed past the cutoff is lost.
    """
    t = math.tanh(r)
    out = _series(psi, lambda v: _lower(_lower(v, ax_a), ax_b), -t)
    n_tot = _number_grid(psi.shape, ax_a) + _number_grid(psi.shape, ax_b)
    out = out * np.cosh(r) ** (-(n_tot + 1.0))
    return _series(out, lambda v: _raise(_raise(v, ax_a), ax_b), t)


@dataclass(frozen=True)
class BeamSplitter:
    mode_a: str
    mode_b: str
    theta: float


@dataclass(frozen=True)
class TwoModeSqueezer:
    mode_a: str
    mode_b: str
    gain: float = math.sqrt(2.0)


Gate = Union[BeamSplitter, TwoModeSqueezer]


def _top_weight(psi: NDArray, axes: Sequence[int], depth: int) -> float:
    prob = np.abs(psi) ** 2
    w = 0.0
    for ax in axes:
        d = psi.shape[ax]
        sl = [slice(None)] * psi.ndim
        sl[ax] = slice(max(0, d - depth), d)
        w = max(w, float(prob[tuple(sl)].sum()))
    return w


def _apply_gate(psi: NDArray, labels: tuple[str, ...], gate: Gate, check: bool) -> NDArray:
    ax_a, ax_b = labels.index(gate.mode_a), labels.index(gate.mode_b)
    if ax_a == ax_b:
        raise ValueError("gate modes must be distinct")
    if isinstance(gate, BeamSplitter):
        if check:
            leak = _leaky_block_weight(psi, ax_a, ax_b)
            if leak > LEAK_TOL:
                raise TruncationError(f"beamsplitter input has weight {leak:.2e} in truncated blocks")
        return _beamsplitter_tensor(psi, ax_a, ax_b, gate.theta)
    if isinstance(gate, TwoModeSqueezer):
        if gate.gain < 1:
            raise ValueError("squeezer gain must be >= 1")
        out = _squeezer_tensor(psi, ax_a, ax_b, math.acosh(gate.gain))
        if check:
            lost = 1.0 - float(np.linalg.norm(out) ** 2)
            # levels n > cutoff - 4 count as leaked
            top = _top_weight(out, (ax_a, ax_b), 4)
            if lost > LEAK_TOL or top > LEAK_TOL:
                raise TruncationError(f"squeezer leak: lost {lost:.2e}, near-cutoff weight {top:.2e}")
            out = out / np.linalg.norm(out)
        return out
    raise TypeError(f"unknown gate {gate!r}")


def run(state: FockState, gates: Sequence[Gate]) -> FockState:
    psi = state.amplitudes
    for g in gates:
        psi = _apply_gate(psi, state.labels, g, check=True)
    return FockState(state.labels, psi)


def apply_beamsplitter(state: FockState, mode_a: str, mode_b: str, theta: float) -> FockState:
    """Heisenberg action a -> cos(theta) a - sin(theta) b, b -> cos(theta) b + sin(theta) a."""
    return run(state, [BeamSplitter(mode_a, mode_b, theta)])


def apply_two_mode_squeezer(state: FockState, mode_a: str, mode_b: str, gain: float = math.sqrt(2.0)) -> FockState:
    """Heisenberg action a -> gain a + sqrt(gain^2 - 1) b^+ (and a <-> b)."""
    return run(state, [TwoModeSqueezer(mode_a, mode_b, gain)])


# observables ---------------------------------------------------------------


@dataclass(frozen=True)
class Quadrature:
    mode: str
    kind: str  # "Q" or "P"


@dataclass(frozen=True)
class SpinQuadrature:
    """(a1^+ a2 + a2^+ a1)/sqrt(N) for Q, i(a1^+ a2 - a2^+ a1)/sqrt(N) for P."""

    mode1: str
    mode2: str
    kind: str
    n_atoms: int


Term = Union[Quadrature, SpinQuadrature]


@dataclass(frozen=True)
class Observable:
    """Real linear combination of quadrature terms."""

    terms: tuple[tuple[float, Term], ...]

    def __add__(self, other: "Observable") -> "Observable":
        return Observable(self.terms + other.terms)

    def __sub__(self, other: "Observable") -> "Observable":
        return self + (-1.0) * other

    def __rmul__(self, c: float) -> "Observable":
        return Observable(tuple((c * w, t) for w, t in self.terms))

    def __neg__(self) -> "Observable":
        return (-1.0) * self


def Q(mode: str) -> Observable:
    return Observable(((1.0, Quadrature(mode, "Q")),))


def P(mode: str) -> Observable:
    return Observable(((1.0, Quadrature(mode, "P")),))


def spin_Q(mode1: str, mode2: str, n_atoms: int) -> Observable:
    return Observable(((1.0, SpinQuadrature(mode1, mode2, "Q", n_atoms)),))


def spin_P(mode1: str, mode2: str, n_atoms: int) -> Observable:
    return Observable(((1.0, SpinQuadrature(mode1, mode2, "P", n_atoms)),))


def _apply_term(psi: NDArray, labels: tuple[str, ...], term: Term) -> NDArray:
    if isinstance(term, Quadrature):
        ax = labels.index(term.mode)
        lo, hi = _lower(psi, ax), _raise(psi, ax)
        return lo + hi if term.kind == "Q" else 1j * (hi - lo)
    if isinstance(term, SpinQuadrature):
        a1, a2 = labels.index(term.mode1), labels.index(term.mode2)
        up = _raise(_lower(psi, a2), a1)  # a1^+ a2
        down = _raise(_lower(psi, a1), a2)  # a2^+ a1
        s = 1.0 / math.sqrt(term.n_atoms)
        return s * (up + down) if term.kind == "Q" else 1j * s * (up - down)
    raise TypeError(f"unknown term {term!r}")


def _apply_observable(psi: NDArray, labels: tuple[str, ...], obs: Observable) -> NDArray:
    out = np.zeros_like(psi)
    for w, term in obs.terms:
        out = out + w * _apply_term(psi, labels, term)
    return out


def _check_quadrature_headroom(state: FockState, observables: Sequence[Observable]) -> None:
    modes = {t.mode for obs in observables for _, t in obs.terms if isinstance(t, Quadrature)}
    for m in modes:
        top = state.populations(m)[-1]
        if top > LEAK_TOL:
            raise TruncationError(f"mode {m!r} has weight {top:.2e} on its top level")


def moments(state: FockState, observables: Sequence[Observable]) -> tuple[NDArray, NDArray]:
    """Exact means and symmetrised covariance matrix of Hermitian observables."""
    _check_quadrature_headroom(state, observables)
    psi = state.amplitudes
    applied = [_apply_observable(psi, state.labels, o) for o in observables]
    means = np.array([np.vdot(psi, v).real for v in applied])
    second = np.array([[np.vdot(u, v).real for v in applied] for u in applied])
    return means, second - np.outer(means, means)


def heisenberg_moments(
    state: FockState,
    gates: Sequence[Gate],
    inputs: Sequence[Observable],
    outputs: Sequence[Observable],
) -> dict[str, NDArray]:
    """Moments of input observables, of outputs after ``gates``, and their cross covariance.

    The symmetrised correlation of X_in with U^+ Y U is Re <U X psi | Y U psi>,
    so each input observable is applied to the state and evolved alongside it.
    """
    _check_quadrature_headroom(state, inputs)
    out_state = run(state, gates)
    _check_quadrature_headroom(out_state, outputs)
    psi = state.amplitudes
    evolved = out_state.amplitudes
    x_psi = [_apply_observable(psi, state.labels, o) for o in inputs]
    m_in = np.array([np.vdot(psi, v).real for v in x_psi])
    y_out = [_apply_observable(evolved, state.labels, o) for o in outputs]
    m_out = np.array([np.vdot(evolved, v).real for v in y_out])

    ux = []
    for v in x_psi:
        for g in gates:
            v = _apply_gate(v, state.labels, g, check=False)
        ux.append(v)
    cross = np.array([[np.vdot(u, y).real for y in y_out] for u in ux]) - np.outer(m_in, m_out)
    cov_in = np.array([[np.vdot(u, v).real for v in x_psi] for u in x_psi]) - np.outer(m_in, m_in)
    cov_out = np.array([[np.vdot(u, v).real for v in y_out] for u in y_out]) - np.outer(m_out, m_out)
    return {"mean_in": m_in, "mean_out": m_out, "cov_in": cov_in, "cov_out": cov_out, "cross": cross}
