"""Jordan-Wigner Pauli observables built from fermionic ladder operators.

For mode j the string ``prod_{m<j} (1 - 2 n_m)`` is diagonal in the pattern
basis, so every operator here is materialized as a dense matrix from
:func:`fermictx.fock.operator_matrix` plus a diagonal sign vector.
"""
from __future__ import annotations

import functools
from dataclasses import dataclass, field
from typing import NamedTuple, Optional, Sequence

import numpy as np

from .errors import DomainError
from .fock import (CACHE_MAX_MODES, FermionState, check_dense, check_mode,
                   number_diagonal, operator_matrix, popcount)


@dataclass(frozen=True)
class Direction:
    """Measurement direction ``n = (sin t cos p, sin t sin p, cos t)``."""

    theta: float
    phi: float = 0.0

    @property
    def vector(self) -> np.ndarray:
        st = np.sin(self.theta)
        return np.array([st * np.cos(self.phi), st * np.sin(self.phi), np.cos(self.theta)])

    @classmethod
    def from_vector(cls, n: Sequence[float]) -> "Direction":
        n = np.asarray(n, dtype=float)
        r = np.linalg.norm(n)
        if r == 0:
            raise DomainError("zero vector has no direction")
        x, y, z = n / r
        return cls(float(np.arccos(np.clip(z, -1.0, 1.0))), float(np.arctan2(y, x)))

    def flipped(self) -> "Direction":
        """The antipodal direction ``-n``."""
        return Direction(self.theta + np.pi, self.phi)


X_AXIS = Direction(np.pi / 2, 0.0)
Y_AXIS = Direction(np.pi / 2, np.pi / 2)
Z_AXIS = Direction(0.0, 0.0)


@dataclass(frozen=True)
class ObservableSpec:
    """``sigma`` along ``direction`` on mode ``mode`` (1-based)."""

    mode: int
    direction: Direction
    primed_label: str = ""


@dataclass(frozen=True)
class MeasurementContext:
    """Joint measurement: one optional direction per mode.

    ``None`` entries mean the identity on that mode. Observables on distinct
    modes commute, so any such context is jointly measurable.
    """

    entries: tuple = field(default=())

    def __post_init__(self):
        entries = tuple(self.entries)
        if not entries:
            raise DomainError("context needs at least one mode")
        for e in entries:
            if e is not None and not isinstance(e, Direction):
                raise TypeError(f"context entries must be Direction or None, got {e!r}")
        object.__setattr__(self, "entries", entries)

    @property
    def mode_count(self) -> int:
        return len(self.entries)

    @property
    def is_full(self) -> bool:
        return all(e is not None for e in self.entries)

    @classmethod
    def full(cls, directions: Sequence[Direction]) -> "MeasurementContext":
        return cls(tuple(directions))

    @classmethod
    def partial(cls, mode_count: int, directions: dict) -> "MeasurementContext":
        """Context from ``{mode: Direction}`` with 1-based modes."""
        entries = [None] * mode_count
        for mode, d in directions.items():
            check_mode(mode, mode_count)
            entries[mode - 1] = d
        return cls(tuple(entries))

    def specs(self) -> list:
        return [ObservableSpec(j + 1, d) for j, d in enumerate(self.entries) if d is not None]


def _as_spec(spec) -> ObservableSpec:
    if isinstance(spec, ObservableSpec):
        return spec
    mode, direction = spec
    return ObservableSpec(int(mode), direction)


@functools.lru_cache(maxsize=128)
def jw_string(j: int, mode_count: int) -> np.ndarray:
    """Diagonal of ``prod_{m=1}^{j-1} (1 - 2 a_m^dag a_m)`` (empty product for j=1)."""
    idx = np.arange(1 << mode_count, dtype=np.int64)
    diag = 1.0 - 2.0 * (popcount(idx & ((1 << (j - 1)) - 1)) % 2)
    diag.setflags(write=False)
    return diag


def sigma_component(j: int, component: str, mode_count: int) -> np.ndarray:
    """``sigma^+``, ``sigma^-``, ``sigma^z``, ``sigma^x`` or ``sigma^y`` of mode j.

    ``sigma^x`` and ``sigma^y`` follow from ``sigma^+- = (sigma^x +- i sigma^y)/2``.
    """
    check_mode(j, mode_count)
    check_dense(mode_count)
    string = jw_string(j, mode_count)[:, None]
    if component == "plus":
        return string * operator_matrix(j, "creation", mode_count)
    if component == "minus":
        return string * operator_matrix(j, "annihilation", mode_count)
    if component == "z":
        return np.diag(2 * number_diagonal(j, mode_count) - 1).astype(complex)
    if component == "x":
        return sigma_component(j, "plus", mode_count) + sigma_component(j, "minus", mode_count)
    if component == "y":
        return -1j * (sigma_component(j, "plus", mode_count)
                      - sigma_component(j, "minus", mode_count))
    raise DomainError(f"unknown component {component!r}")


def _build_sigma(j: int, theta: float, phi: float, mode_count: int) -> np.ndarray:
    a_dag = operator_matrix(j, "creation", mode_count)
    a = operator_matrix(j, "annihilation", mode_count)
    string = jw_string(j, mode_count)[:, None]
    op = string * (np.exp(1j * phi) * a + np.exp(-1j * phi) * a_dag) * np.sin(theta)
    # longitudinal part 2 a^dag a - 1 is diagonal
    op[np.diag_indices_from(op)] += (2 * number_diagonal(j, mode_count) - 1) * np.cos(theta)
    op.setflags(write=False)
    return op


_sigma_cached = functools.lru_cache(maxsize=2048)(_build_sigma)


def _sigma_direction(j: int, theta: float, phi: float, mode_count: int) -> np.ndarray:
    if mode_count <= CACHE_MAX_MODES - 2:
        return _sigma_cached(j, theta, phi, mode_count)
    return _build_sigma(j, theta, phi, mode_count)


def sigma_direction(spec, mode_count: int) -> np.ndarray:
    """Dense ``sigma_j . n`` for an :class:`ObservableSpec` (or ``(mode, Direction)``).

    Returned arrays are cached and read-only.
    """
    spec = _as_spec(spec)
    check_mode(spec.mode, mode_count)
    check_dense(mode_count)
    d = spec.direction
    return _sigma_direction(spec.mode, float(d.theta), float(d.phi), mode_count)


def eigenprojector(spec, outcome: int, mode_count: int) -> np.ndarray:
    """Projector for ``outcome`` in {0, 1}: ``[1 + (-1)**(outcome + 1) sigma] / 2``.

    Outcome 0 is the eigenvalue -1 branch, outcome 1 the eigenvalue +1 branch.
    """
    if outcome not in (0, 1):
        raise DomainError(f"outcome must be 0 or 1, got {outcome!r}")
    sigma = sigma_direction(spec, mode_count)
    return (np.eye(1 << mode_count) + (-1) ** (outcome + 1) * sigma) / 2


def outcome_eigenvalue(outcome: int) -> int:
    return -1 if outcome == 0 else 1


def hatted_pauli(direction: Direction) -> np.ndarray:
    """Two-by-two image of ``sigma . n`` on one qubit.

    Note the ``-cos(theta)`` in the upper-left entry: basis order is
    (empty, occupied), and ``sigma^z = 2n - 1`` is -1 on the empty mode.
    """
    c, s = np.cos(direction.theta), np.sin(direction.theta)
    e = np.exp(1j * direction.phi)
    return np.array([[-c, s * e], [s * np.conj(e), c]], dtype=complex)


def fock_to_qubit(state: FermionState) -> np.ndarray:
    """Amplitude vector on ``(C^2)^{(x) M}`` with ket ``|mu_1 mu_2 ... mu_M>``.

    Uses the conventional big-endian qubit order (mode 1 is the most
    significant tensor factor), i.e. the layout expected by ``np.kron``.
    """
    check_dense(state.mode_count)
    M = state.mode_count
    idx = state.indices
    # reverse the bit order: little-endian pattern index -> big-endian ket index
    ket = np.zeros_like(idx)
    for j in range(M):
        ket |= ((idx >> j) & 1) << (M - 1 - j)
    vec = np.zeros(1 << M, dtype=complex)
    vec[ket] = state.coefficients
    return vec


class Correspondence(NamedTuple):
    lhs: float
    rhs: float
    abs_diff: float


def _fock_expectation(vec: np.ndarray, ops: list) -> complex:
    out = vec
    for op in reversed(ops):
        out = op @ out
    return complex(np.vdot(vec, out))


def correspondence_check(state: FermionState,
                         directions: Sequence[Optional[Direction]]) -> Correspondence:
    """Compare a Fock-space correlator with its multiqubit image.

    ``directions`` has one entry per mode; ``None`` leaves that mode
    unmeasured (identity on the qubit side). The left side multiplies the
    dense Jordan-Wigner operators in mode order; the right side contracts a
    Kronecker product of :func:`hatted_pauli` matrices with
    :func:`fock_to_qubit`. The absolute difference is computed on the complex
    values before taking real parts.
    """
    M = state.mode_count
    if len(directions) != M:
        raise DomainError(f"need {M} directions, got {len(directions)}")
    check_dense(M)
    ops = [sigma_direction((j + 1, d), M) for j, d in enumerate(directions) if d is not None]
    lhs = _fock_expectation(state.to_vector(), ops)

    qubit = np.ones((1, 1), dtype=complex)
    for d in directions:
        qubit = np.kron(qubit, np.eye(2) if d is None else hatted_pauli(d))
    psi_h = fock_to_qubit(state)
    rhs = complex(np.vdot(psi_h, qubit @ psi_h))
    return Correspondence(lhs.real, rhs.real, abs(lhs - rhs))
