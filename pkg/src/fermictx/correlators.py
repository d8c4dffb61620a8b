"""Expectation values and joint outcome probabilities.

Two independent engines evaluate full-string correlators
``<psi| sigma_1 sigma_2 ... sigma_M |psi>``:

* :func:`expectation_dense` multiplies materialized Jordan-Wigner matrices;
* :func:`expectation_fast` sums closed-form matrix elements over the state's
  support, at cost ``O(S**2 * M)`` for support size ``S``, never touching the
  ``2**M`` dimensional space.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence, Union

import numpy as np

from .errors import CapacityError, DomainError
from .fock import (DensityState, FermionState, check_dense, get_dense_cap,
                   parse_pattern)
from .jw import (Direction, MeasurementContext, X_AXIS, Y_AXIS, Z_AXIS,
                 eigenprojector, hatted_pauli, sigma_direction)

AnyState = Union[FermionState, DensityState]


def _as_context(context, mode_count: int) -> MeasurementContext:
    if not isinstance(context, MeasurementContext):
        context = MeasurementContext(tuple(context))
    if context.mode_count != mode_count:
        raise DomainError(f"context spans {context.mode_count} modes, state has {mode_count}")
    return context


def _apply_all(ops: list, target: np.ndarray) -> np.ndarray:
    for op in reversed(ops):
        target = op @ target
    return target


def _expect_ops(state: AnyState, ops: list) -> complex:
    if isinstance(state, DensityState):
        return complex(np.trace(_apply_all(ops, state.matrix)))
    vec = state.to_vector()
    return complex(np.vdot(vec, _apply_all(ops, vec)))


def expectation_dense(state: AnyState, context) -> float:
    """Correlator of the context's observables (dense oracle).

    ``context`` is a :class:`MeasurementContext` or a per-mode sequence of
    ``Direction``/``None``. Works for pure and mixed states and for partial
    strings.
    """
    M = state.mode_count
    context = _as_context(context, M)
    check_dense(M)
    ops = [sigma_direction(spec, M) for spec in context.specs()]
    return _expect_ops(state, ops).real


# ---------------------------------------------------------------------------
# closed-form matrix elements

def xi_exponents(nu: Sequence[int]) -> tuple:
    """``xi_j = nu_{j+1} + ... + nu_M`` (so ``xi_M = 0``)."""
    nu = parse_pattern(nu)
    tail = np.cumsum(nu[::-1])[::-1]
    return tuple(int(t - n) for t, n in zip(tail, nu))


def eta_exponent(nu: Sequence[int], mu: Sequence[int]) -> int:
    """``eta = sum_{s<t} (mu_s + nu_s) nu_t``."""
    nu, mu = parse_pattern(nu), parse_pattern(mu)
    if len(nu) != len(mu):
        raise DomainError("bra and ket patterns differ in length")
    return int(sum((m + n) * x for m, n, x in zip(mu, nu, xi_exponents(nu))))


def _mode_term(nu_j: int, mu_j: int, theta: float, phi: float) -> complex:
    if nu_j == 0 and mu_j == 0:
        return -np.cos(theta)
    if nu_j == 1 and mu_j == 0:
        return np.sin(theta) * np.exp(-1j * phi)
    if nu_j == 0 and mu_j == 1:
        return np.sin(theta) * np.exp(1j * phi)
    return np.cos(theta)


@dataclass(frozen=True)
class ClosedFormElement:
    nu: tuple
    mu: tuple
    eta: int
    xi: tuple
    tilde_thetas: tuple
    value: complex


def closed_form_element(nu, mu, directions: Sequence[Direction]) -> ClosedFormElement:
    """``<nu| sigma_1 ... sigma_M |mu>`` reduced to a signed product of per-mode terms.

    Moving every ladder operator into the standard form flips ``theta_j`` to
    ``(-1)**xi_j * theta_j`` and contributes an overall ``(-1)**eta``.
    """
    nu, mu = parse_pattern(nu), parse_pattern(mu)
    if not len(nu) == len(mu) == len(directions):
        raise DomainError("nu, mu and directions must cover the same modes")
    eta = eta_exponent(nu, mu)
    xi = xi_exponents(nu)
    tilde = tuple((-1) ** x * d.theta for x, d in zip(xi, directions))
    value = complex((-1) ** eta)
    for n, m, t, d in zip(nu, mu, tilde, directions):
        value *= _mode_term(n, m, t, d.phi)
    return ClosedFormElement(nu, mu, eta, xi, tilde, value)


def matrix_element_closed_form(nu, mu, directions: Sequence[Direction]) -> complex:
    return closed_form_element(nu, mu, directions).value


def _support_bits(indices: np.ndarray, mode_count: int) -> np.ndarray:
    return ((indices[:, None] >> np.arange(mode_count)) & 1).astype(np.int64)


def expectation_fast(state: FermionState, context) -> float:
    """Full-string correlator from closed-form elements over the support.

    Only pure states and full strings are supported; use
    :func:`expectation` to fall back to the dense engine otherwise.
    """
    if isinstance(state, DensityState):
        raise DomainError("closed-form engine takes pure states only")
    M = state.mode_count
    context = _as_context(context, M)
    if not context.is_full:
        raise DomainError("closed-form engine needs a direction on every mode")
    bits = _support_bits(state.indices, M)          # (S, M), row a = pattern
    xi = np.cumsum(bits[:, ::-1], axis=1)[:, ::-1] - bits
    # eta parity for bra a, ket b: sum_s (mu_s + nu_s) xi_s(nu)
    eta = (bits @ xi.T).T + np.sum(bits * xi, axis=1)[:, None]
    elem = np.where(eta % 2 == 0, 1.0, -1.0).astype(complex)
    for j, d in enumerate(context.entries):
        c, s = np.cos(d.theta), np.sin(d.theta)
        nu_j = bits[:, j][:, None]
        mu_j = bits[:, j][None, :]
        sin_sign = np.where(xi[:, j] % 2 == 0, 1.0, -1.0)[:, None]
        off = np.where(nu_j == 1, np.exp(-1j * d.phi), np.exp(1j * d.phi)) * s * sin_sign
        diag = np.where(nu_j == 1, c, -c)
        elem *= np.where(nu_j == mu_j, diag, off)
    t = state.coefficients
    return float(np.real(np.conj(t) @ elem @ t))


def expectation(state: AnyState, context, engine: str = "auto") -> float:
    """Dispatch to the closed-form engine when possible, else the dense one."""
    M = state.mode_count
    context = _as_context(context, M)
    if engine == "dense":
        return expectation_dense(state, context)
    fast_ok = isinstance(state, FermionState) and context.is_full
    if engine == "fast" or (engine == "auto" and fast_ok):
        return expectation_fast(state, context)
    return expectation_dense(state, context)


# ---------------------------------------------------------------------------
# probabilities

def joint_probability(state: AnyState, settings: Sequence[tuple]) -> float:
    """``P(outcome_1 ... outcome_M | n_1 ... n_M)`` for per-mode ``(Direction, outcome)``.

    Outcome 0 is the eigenvalue -1 branch of ``sigma . n``.
    """
    M = state.mode_count
    if len(settings) != M:
        raise DomainError(f"need a (direction, outcome) pair for each of {M} modes")
    if M > get_dense_cap():
        raise CapacityError(f"joint probabilities are dense-only; {M} modes exceeds the cap")
    ops = [eigenprojector((j + 1, d), o, M) for j, (d, o) in enumerate(settings)]
    return _expect_ops(state, ops).real


# ---------------------------------------------------------------------------
# correlation tensor

def _pauli_basis() -> np.ndarray:
    """Stack (identity, x, y, z) in the two-by-two hatted representation."""
    return np.stack([np.eye(2, dtype=complex), hatted_pauli(X_AXIS),
                     hatted_pauli(Y_AXIS), hatted_pauli(Z_AXIS)])


_PAULI = _pauli_basis()


def _qubit_density(state: AnyState) -> np.ndarray:
    M = state.mode_count
    if isinstance(state, FermionState):
        from .jw import fock_to_qubit
        psi = fock_to_qubit(state)
        return np.outer(psi, psi.conj())
    idx = np.arange(1 << M, dtype=np.int64)
    ket = np.zeros_like(idx)
    for j in range(M):
        ket |= ((idx >> j) & 1) << (M - 1 - j)
    rho = np.empty_like(state.matrix)
    rho[np.ix_(ket, ket)] = state.matrix
    return rho


MAX_TENSOR_MODES = 8


def correlation_tensor(state: AnyState) -> np.ndarray:
    """All ``4**M`` correlators ``<prod_j s_j^{a_j}>`` with ``a_j`` in (1, x, y, z).

    Evaluated on the multiqubit image of the state, which reproduces the Fock
    correlators exactly (including partial strings). Real array of shape
    ``(4,) * M``.
    """
    M = state.mode_count
    if M > MAX_TENSOR_MODES:
        raise CapacityError(f"correlation tensor limited to {MAX_TENSOR_MODES} modes")
    rho = _qubit_density(state).reshape((2,) * (2 * M))
    # axes: rows 0..M-1, cols M..2M-1; contract (row_j, col_j) with P[a, col, row]
    t = rho
    for j in range(M):
        t = np.tensordot(t, _PAULI, axes=([0, M - j], [2, 1]))
    return np.ascontiguousarray(t.real)


def contract_tensor(tensor: np.ndarray, vectors: Sequence[np.ndarray]) -> float:
    """Contract a correlation tensor with one 4-vector (identity weight, n) per mode."""
    out = tensor
    for v in vectors:
        out = np.tensordot(v, out, axes=([0], [0]))
    return float(out)


def observable_vector(direction) -> np.ndarray:
    """4-vector of ``sigma . n`` in the (identity, x, y, z) basis."""
    n = direction.vector if isinstance(direction, Direction) else np.asarray(direction)
    return np.concatenate([[0.0], n])


def projector_vector(direction, outcome: int) -> np.ndarray:
    n = direction.vector if isinstance(direction, Direction) else np.asarray(direction)
    sign = -1.0 if outcome == 0 else 1.0
    return np.concatenate([[0.5], 0.5 * sign * n])


IDENTITY_VECTOR = np.array([1.0, 0.0, 0.0, 0.0])
