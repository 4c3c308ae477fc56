"""First- and second-moment propagation of bosonic modes through linear maps.

Quadratures follow Q = a + a^+, P = i(a^+ - a), so the vacuum has unit
variance in both. A state over M modes is stored as a mean vector ordered
(Q_1, P_1, ..., Q_M, P_M) and the symmetrised covariance matrix.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

import numpy as np
from numpy.typing import NDArray

CANONICAL_TOL = 1e-12


class ValidationError(ValueError):
    """Raised when a state or map violates its construction contract."""


def _frozen(arr: NDArray) -> NDArray:
    arr = np.array(arr, copy=True)
    arr.setflags(write=False)
    return arr


@dataclass(frozen=True)
class GaussianState:
    mode_labels: tuple[str, ...]
    means: NDArray[np.float64]
    cov: NDArray[np.float64]

    def __post_init__(self) -> None:
        labels = tuple(self.mode_labels)
        if len(labels) == 0:
            raise ValidationError("a state needs at least one mode")
        if len(set(labels)) != len(labels):
            raise ValidationError(f"duplicate mode labels in {labels}")
        means = np.asarray(self.means, dtype=float)
        cov = np.asarray(self.cov, dtype=float)
        dim = 2 * len(labels)
        if means.shape != (dim,):
            raise ValidationError(f"means must have length {dim}, got {means.shape}")
        if cov.shape != (dim, dim):
            raise ValidationError(f"cov must be {dim}x{dim}, got {cov.shape}")
        if not (np.all(np.isfinite(means)) and np.all(np.isfinite(cov))):
            raise ValidationError("non-finite moments")
        # stored exactly symmetric
        cov = 0.5 * (cov + cov.T)
        if np.any(np.diag(cov) < -CANONICAL_TOL):
            raise ValidationError("negative quadrature variance")
        object.__setattr__(self, "mode_labels", labels)
        object.__setattr__(self, "means", _frozen(means))
        object.__setattr__(self, "cov", _frozen(cov))

    @property
    def n_modes(self) -> int:
        return len(self.mode_labels)

    def index(self, label: str) -> int:
        try:
            return self.mode_labels.index(label)
        except ValueError:
            raise ValidationError(f"unknown mode label {label!r}") from None

    def quadrature_index(self, label: str, quad: str) -> int:
        """Row of ``quad`` ('Q' or 'P') of mode ``label`` in means/cov."""
        if quad not in ("Q", "P"):
            raise ValidationError(f"quadrature must be 'Q' or 'P', got {quad!r}")
        return 2 * self.index(label) + (quad == "P")

    def mean(self, label: str, quad: str) -> float:
        return float(self.means[self.quadrature_index(label, quad)])

    def variance(self, label: str, quad: str) -> float:
        i = self.quadrature_index(label, quad)
        return float(self.cov[i, i])

    def covariance(self, a: tuple[str, str], b: tuple[str, str]) -> float:
        return float(self.cov[self.quadrature_index(*a), self.quadrature_index(*b)])


def make_vacuum(labels: Sequence[str]) -> GaussianState:
    labels = tuple(labels)
    return GaussianState(labels, np.zeros(2 * len(labels)), np.eye(2 * len(labels)))


def set_mode_moments(
    state: GaussianState,
    label: str,
    mean_q: float,
    mean_p: float,
    v_q: float,
    v_p: float,
    cov_qp: float = 0.0,
) -> GaussianState:
    """Replace one mode's moments; its correlations with other modes are zeroed."""
    if v_q < 0 or v_p < 0:
        raise ValidationError(f"negative variance ({v_q}, {v_p}) for mode {label!r}")
    k = 2 * state.index(label)
    means = np.array(state.means)
    cov = np.array(state.cov)
    means[k : k + 2] = (mean_q, mean_p)
    cov[k : k + 2, :] = 0.0
    cov[:, k : k + 2] = 0.0
    cov[k : k + 2, k : k + 2] = [[v_q, cov_qp], [cov_qp, v_p]]
    return GaussianState(state.mode_labels, means, cov)


def symplectic_form(n_modes: int) -> NDArray[np.float64]:
    """Commutator matrix of (Q_1, P_1, ...) in units of 2i."""
    return np.kron(np.eye(n_modes), np.array([[0.0, 1.0], [-1.0, 0.0]]))


@dataclass(frozen=True)
class ModeMap:
    """Linear map a_out = A a_in + B a_in^+ on annihilation operators.

    ``canonical`` is True when the output operators obey bosonic commutation
    relations, i.e. A A^H - B B^H = 1 and A B^T - B A^T = 0 entrywise within
    1e-12.
    """

    a_block: NDArray[np.complex128]
    b_block: NDArray[np.complex128]
    canonical: bool = field(init=False)

    def __post_init__(self) -> None:
        a = np.atleast_2d(np.asarray(self.a_block, dtype=complex))
        b = np.atleast_2d(np.asarray(self.b_block, dtype=complex))
        if a.shape != b.shape:
            raise ValidationError(f"block shapes differ: {a.shape} vs {b.shape}")
        object.__setattr__(self, "a_block", _frozen(a))
        object.__setattr__(self, "b_block", _frozen(b))
        comm = a @ a.conj().T - b @ b.conj().T - np.eye(a.shape[0])
        anti = a @ b.T - b @ a.T
        ok = np.max(np.abs(comm)) <= CANONICAL_TOL and np.max(np.abs(anti), initial=0.0) <= CANONICAL_TOL
        object.__setattr__(self, "canonical", bool(ok))

    @property
    def n_out(self) -> int:
        return self.a_block.shape[0]

    @property
    def n_in(self) -> int:
        return self.a_block.shape[1]

    def quadrature_matrix(self) -> NDArray[np.float64]:
        """Real matrix S with (Q, P)_out = S (Q, P)_in."""
        a, b = self.a_block, self.b_block
        u = a + b.conj()  # Q_out = Re(u) Q - Im(u) P
        w = a - b.conj()  # P_out = Im(w) Q + Re(w) P
        s = np.empty((2 * self.n_out, 2 * self.n_in))
        s[0::2, 0::2] = u.real
        s[0::2, 1::2] = -u.imag
        s[1::2, 0::2] = w.imag
        s[1::2, 1::2] = w.real
        return s


def compose(second: ModeMap, first: ModeMap) -> ModeMap:
    """The map ``second`` after ``first`` (on the same ordered mode set)."""
    if second.n_in != first.n_out:
        raise ValidationError(f"cannot compose: {second.n_in} inputs vs {first.n_out} outputs")
    a2, b2, a1, b1 = second.a_block, second.b_block, first.a_block, first.b_block
    return ModeMap(a2 @ a1 + b2 @ b1.conj(), a2 @ b1 + b2 @ a1.conj())


def embed(mode_map: ModeMap, active: Sequence[str], labels: Sequence[str]) -> ModeMap:
    """Extend a square map on ``active`` modes to identity on the rest of ``labels``."""
    labels = list(labels)
    if mode_map.n_in != mode_map.n_out or mode_map.n_in != len(active):
        raise ValidationError("embed needs a square map matching the active modes")
    try:
        idx = [labels.index(lab) for lab in active]
    except ValueError:
        raise ValidationError(f"active modes {list(active)} not all in {labels}") from None
    a = np.eye(len(labels), dtype=complex)
    b = np.zeros((len(labels), len(labels)), dtype=complex)
    ix = np.ix_(idx, idx)
    a[ix] = mode_map.a_block
    b[ix] = mode_map.b_block
    return ModeMap(a, b)


def apply_map(
    state: GaussianState,
    mode_map: ModeMap,
    in_labels: Sequence[str],
    out_labels: Sequence[str],
) -> tuple[GaussianState, NDArray[np.float64]]:
    """Propagate moments through ``mode_map``.

    The modes ``in_labels`` are consumed and ``out_labels`` produced; a label
    present in both keeps its position, other modes are carried through.

    Returns the new state and the input-output cross covariance
    ``cov_in[:, in] @ S.T``, with rows in the input state's quadrature order
    and columns in the order of ``out_labels``.
    """
    in_labels, out_labels = list(in_labels), list(out_labels)
    if len(in_labels) != mode_map.n_in or len(out_labels) != mode_map.n_out:
        raise ValidationError(
            f"map is {mode_map.n_out}x{mode_map.n_in} but got "
            f"{len(out_labels)} outputs and {len(in_labels)} inputs"
        )
    if len(set(in_labels)) != len(in_labels) or len(set(out_labels)) != len(out_labels):
        raise ValidationError("repeated labels in map arguments")
    in_idx = [state.index(lab) for lab in in_labels]
    carried = [lab for lab in state.mode_labels if lab not in in_labels]
    clash = set(carried) & set(out_labels)
    if clash:
        raise ValidationError(f"output labels {sorted(clash)} collide with untouched modes")

    new_labels = [lab for lab in state.mode_labels if lab in carried or lab in out_labels]
    new_labels += [lab for lab in out_labels if lab not in new_labels]

    s = mode_map.quadrature_matrix()
    cols = np.ravel([[2 * i, 2 * i + 1] for i in in_idx])
    n_old = 2 * state.n_modes
    t = np.zeros((2 * len(new_labels), n_old))
    for row, lab in enumerate(new_labels):
        if lab in out_labels:
            k = out_labels.index(lab)
            t[2 * row : 2 * row + 2, cols] = s[2 * k : 2 * k + 2]
        else:
            j = state.index(lab)
            t[2 * row, 2 * j] = 1.0
            t[2 * row + 1, 2 * j + 1] = 1.0

    means = t @ state.means
    cov = t @ state.cov @ t.T
    cross = state.cov[:, cols] @ s.T
    return GaussianState(tuple(new_labels), means, cov), cross
