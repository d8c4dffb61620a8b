"""Fermionic Fock space over M ordered modes.

Basis vectors are labelled by occupation patterns ``(mu_1, ..., mu_M)`` and
stored under the integer index ``sum_j mu_j * 2**(j - 1)`` (mode 1 is the
least significant bit). A pattern stands for the normal-ordered vector

    (a_1^dag)^mu_1 (a_2^dag)^mu_2 ... (a_M^dag)^mu_M |vacuum>

so creating a fermion in mode ``j`` picks up ``(-1)**(number of occupied
modes below j)``. Mode indices in the public API are 1-based.
"""
from __future__ import annotations

import contextlib
import contextvars
import functools
import itertools
from dataclasses import dataclass, field
from typing import Iterable, Mapping, Sequence, Union

import numpy as np

from .errors import CapacityError, DomainError, NormalizationError

ATOL = 1e-10
EXACT_ATOL = 1e-12
DEFAULT_DENSE_CAP = 12

_dense_cap = contextvars.ContextVar("dense_cap", default=DEFAULT_DENSE_CAP)

Pattern = tuple
PatternLike = Union[str, Sequence[int]]


@contextlib.contextmanager
def dense_cap(max_modes: int):
    """Temporarily change the largest mode count allowed for dense matrices."""
    token = _dense_cap.set(int(max_modes))
    try:
        yield
    finally:
        _dense_cap.reset(token)


def get_dense_cap() -> int:
    return _dense_cap.get()


def check_dense(mode_count: int) -> None:
    cap = _dense_cap.get()
    if mode_count > cap:
        raise CapacityError(
            f"dense operators limited to {cap} modes, got {mode_count}; "
            "raise the cap with fermictx.fock.dense_cap()")


def check_mode(j: int, mode_count: int) -> None:
    if not 1 <= j <= mode_count:
        raise DomainError(f"mode index {j} outside 1..{mode_count}")


# ---------------------------------------------------------------------------
# patterns

def parse_pattern(pattern: PatternLike, mode_count: int | None = None) -> Pattern:
    """Normalize ``"101"`` or ``[1, 0, 1]`` to a tuple of bits, mode 1 first."""
    if isinstance(pattern, str):
        bits = tuple(int(c) for c in pattern.strip())
    else:
        bits = tuple(int(b) for b in pattern)
    if any(b not in (0, 1) for b in bits):
        raise DomainError(f"occupation pattern must be binary, got {pattern!r}")
    if mode_count is not None and len(bits) != mode_count:
        raise DomainError(
            f"pattern {pattern!r} has {len(bits)} modes, expected {mode_count}")
    return bits


def pattern_to_index(pattern: PatternLike) -> int:
    bits = parse_pattern(pattern)
    return sum(b << j for j, b in enumerate(bits))


def index_to_pattern(index: int, mode_count: int) -> Pattern:
    return tuple((int(index) >> j) & 1 for j in range(mode_count))


def format_pattern(pattern: PatternLike) -> str:
    return "".join(str(b) for b in parse_pattern(pattern))


def popcount(values: np.ndarray) -> np.ndarray:
    return np.bitwise_count(np.asarray(values, dtype=np.int64)).astype(np.int64)


# ---------------------------------------------------------------------------
# states

def _readonly(arr: np.ndarray) -> np.ndarray:
    arr.setflags(write=False)
    return arr


@dataclass(frozen=True, eq=False)
class FermionState:
    """Pure state stored sparsely as (basis index, amplitude) pairs.

    Instances are not validated; use the ``make_*`` constructors for physical
    states and :func:`unchecked_state` for arbitrary vectors. Operator
    application may return unnormalized or zero states.
    """

    mode_count: int
    indices: np.ndarray
    coefficients: np.ndarray
    label: str = field(default="")

    def __post_init__(self):
        if self.mode_count < 1:
            raise DomainError("a Fock space needs at least one mode")
        idx = np.asarray(self.indices, dtype=np.int64).ravel()
        coef = np.asarray(self.coefficients, dtype=complex).ravel()
        if idx.shape != coef.shape:
            raise ValueError("indices and coefficients differ in length")
        if idx.size and (idx.min() < 0 or idx.max() >= 1 << self.mode_count):
            raise DomainError("basis index outside the Fock space")
        # merge duplicates, drop exact zeros, sort by index
        uniq, inverse = np.unique(idx, return_inverse=True)
        summed = np.zeros(uniq.size, dtype=complex)
        np.add.at(summed, inverse, coef)
        keep = summed != 0
        object.__setattr__(self, "indices", _readonly(uniq[keep]))
        object.__setattr__(self, "coefficients", _readonly(summed[keep]))

    @property
    def dimension(self) -> int:
        return 1 << self.mode_count

    @property
    def amplitudes(self) -> dict:
        """Mapping pattern tuple -> amplitude over the support."""
        return {index_to_pattern(i, self.mode_count): complex(c)
                for i, c in zip(self.indices, self.coefficients)}

    @property
    def support(self) -> list:
        return [index_to_pattern(i, self.mode_count) for i in self.indices]

    @property
    def norm(self) -> float:
        return float(np.linalg.norm(self.coefficients))

    def is_zero(self) -> bool:
        return self.indices.size == 0

    def parities(self) -> set:
        return set((popcount(self.indices) % 2).tolist())

    def particle_numbers(self) -> set:
        return set(popcount(self.indices).tolist())

    def amplitude(self, pattern: PatternLike) -> complex:
        i = pattern_to_index(parse_pattern(pattern, self.mode_count))
        pos = np.searchsorted(self.indices, i)
        if pos < self.indices.size and self.indices[pos] == i:
            return complex(self.coefficients[pos])
        return 0j

    def to_vector(self) -> np.ndarray:
        check_dense(self.mode_count)
        vec = np.zeros(self.dimension, dtype=complex)
        vec[self.indices] = self.coefficients
        return vec

    def number_expectation(self) -> float:
        """<N> with N = sum_j a_j^dag a_j (diagonal in the pattern basis)."""
        weights = np.abs(self.coefficients) ** 2
        return float(np.sum(weights * popcount(self.indices)))

    def scaled(self, factor: complex) -> "FermionState":
        return FermionState(self.mode_count, self.indices,
                            self.coefficients * factor, self.label)

    def inner(self, other: "FermionState") -> complex:
        """<self|other>."""
        common, i, j = np.intersect1d(self.indices, other.indices,
                                      assume_unique=True, return_indices=True)
        return complex(np.vdot(self.coefficients[i], other.coefficients[j]))

    def __repr__(self):
        terms = ", ".join(f"{format_pattern(p)}: {a:.6g}"
                          for p, a in self.amplitudes.items())
        return f"FermionState(M={self.mode_count}, {{{terms}}}, label={self.label!r})"


def _check_normalized(weights: np.ndarray, what: str) -> None:
    total = float(np.sum(weights))
    if abs(total - 1.0) > ATOL:
        raise NormalizationError(f"{what} sum to {total!r}, expected 1")


def unchecked_state(mode_count: int, amplitudes, label: str = "") -> FermionState:
    """Build a state from a pattern mapping or a dense vector with no checks.

    Intended for algebraic identities that hold for arbitrary vectors, e.g.
    superpositions mixing even and odd particle number.
    """
    if isinstance(amplitudes, Mapping):
        idx = [pattern_to_index(parse_pattern(p, mode_count)) for p in amplitudes]
        coef = list(amplitudes.values())
        return FermionState(mode_count, np.array(idx, dtype=np.int64),
                            np.array(coef, dtype=complex), label)
    vec = np.asarray(amplitudes, dtype=complex).ravel()
    if vec.size != 1 << mode_count:
        raise DomainError(f"vector of length {vec.size} for {mode_count} modes")
    nz = np.flatnonzero(vec)
    return FermionState(mode_count, nz, vec[nz], label)


def make_state(mode_count: int, amplitudes, label: str = "") -> FermionState:
    """Physical pure state: normalized and within a single parity sector."""
    state = unchecked_state(mode_count, amplitudes, label)
    _check_normalized(np.abs(state.coefficients) ** 2, "squared amplitudes")
    if len(state.parities()) > 1:
        raise DomainError("superposition of even and odd fermion number "
                          "violates parity superselection")
    return state


def make_single_fermion_state(g: Sequence[complex], label: str = "") -> FermionState:
    """sum_j g_j a_j^dag |vacuum> over M = len(g) modes."""
    g = np.asarray(g, dtype=complex).ravel()
    if g.size == 0:
        raise DomainError("need at least one mode")
    _check_normalized(np.abs(g) ** 2, "|g_j|^2")
    idx = np.left_shift(1, np.arange(g.size, dtype=np.int64))
    return FermionState(g.size, idx, g, label)


def make_n_fermion_state(mode_count: int, coefficients: Mapping, label: str = "") -> FermionState:
    """N-fermion state ``sum g_(j1..jN) a_j1^dag ... a_jN^dag |vacuum>``.

    Keys of ``coefficients`` are strictly increasing tuples of 1-based mode
    indices, all of the same length N. Because the creators are applied in
    increasing mode order, each amplitude lands on its pattern with sign +1.
    """
    if mode_count < 1:
        raise DomainError("need at least one mode")
    idx, coef, sizes = [], [], set()
    for subset, value in coefficients.items():
        subset = tuple(int(m) for m in subset)
        if len(set(subset)) != len(subset):
            raise DomainError(f"mode repeated in {subset}: Pauli exclusion")
        if list(subset) != sorted(subset):
            raise DomainError(f"modes must be strictly increasing, got {subset}")
        for m in subset:
            check_mode(m, mode_count)
        sizes.add(len(subset))
        idx.append(sum(1 << (m - 1) for m in subset))
        coef.append(value)
    if len(sizes) > 1:
        raise DomainError(f"mixed particle numbers {sorted(sizes)}")
    coef = np.asarray(coef, dtype=complex)
    _check_normalized(np.abs(coef) ** 2, "squared coefficients")
    return FermionState(mode_count, np.asarray(idx, dtype=np.int64), coef, label)


def w_state(mode_count: int, label: str | None = None) -> FermionState:
    g = np.full(mode_count, 1 / np.sqrt(mode_count))
    return make_single_fermion_state(g, label=f"W(M={mode_count})" if label is None else label)


def dicke_state(mode_count: int, particles: int, label: str | None = None) -> FermionState:
    if not 0 <= particles <= mode_count:
        raise DomainError(f"cannot place {particles} fermions in {mode_count} modes")
    subsets = list(itertools.combinations(range(1, mode_count + 1), particles))
    amp = 1 / np.sqrt(len(subsets))
    if label is None:
        label = f"Dicke(M={mode_count},N={particles})"
    return make_n_fermion_state(mode_count, {s: amp for s in subsets}, label)


def random_state(mode_count: int, rng: np.random.Generator, *, particles: int | None = None,
                 physical: bool = True, label: str = "random") -> FermionState:
    """Haar-like random state.

    ``particles`` restricts to one number sector; ``physical=False`` draws an
    arbitrary vector over the whole Fock space (parity mixing allowed).
    """
    dim = 1 << mode_count
    idx = np.arange(dim)
    if particles is not None:
        idx = idx[popcount(idx) == particles]
    elif physical:
        idx = idx[popcount(idx) % 2 == rng.integers(2)]
    coef = rng.normal(size=idx.size) + 1j * rng.normal(size=idx.size)
    coef /= np.linalg.norm(coef)
    return FermionState(mode_count, idx, coef, label)


# ---------------------------------------------------------------------------
# ladder operators

def apply_creation(state: FermionState, j: int) -> FermionState:
    """a_j^dag |state>; Pauli exclusion maps occupied-mode components to zero."""
    check_mode(j, state.mode_count)
    bit = 1 << (j - 1)
    idx = state.indices
    free = (idx & bit) == 0
    sign = 1 - 2 * (popcount(idx[free] & (bit - 1)) % 2)
    return FermionState(state.mode_count, idx[free] | bit,
                        state.coefficients[free] * sign, state.label)


def apply_annihilation(state: FermionState, j: int) -> FermionState:
    """a_j |state>, the adjoint of :func:`apply_creation`."""
    check_mode(j, state.mode_count)
    bit = 1 << (j - 1)
    idx = state.indices
    occ = (idx & bit) != 0
    sign = 1 - 2 * (popcount(idx[occ] & (bit - 1)) % 2)
    return FermionState(state.mode_count, idx[occ] & ~bit,
                        state.coefficients[occ] * sign, state.label)


# only small spaces are cached; one 12-mode matrix is already 268 MB
CACHE_MAX_MODES = 8


def _ladder_matrix(j: int, creation: bool, mode_count: int) -> np.ndarray:
    if mode_count <= CACHE_MAX_MODES:
        return _ladder_matrix_cached(j, creation, mode_count)
    return _build_ladder(j, creation, mode_count)


def _build_ladder(j: int, creation: bool, mode_count: int) -> np.ndarray:
    dim = 1 << mode_count
    bit = 1 << (j - 1)
    src = np.arange(dim, dtype=np.int64)
    src = src[(src & bit) == 0] if creation else src[(src & bit) != 0]
    dst = src ^ bit
    sign = 1 - 2 * (popcount(src & (bit - 1)) % 2)
    mat = np.zeros((dim, dim), dtype=complex)
    mat[dst, src] = sign
    return _readonly(mat)


_ladder_matrix_cached = functools.lru_cache(maxsize=256)(_build_ladder)


def operator_matrix(j: int, kind: str, mode_count: int) -> np.ndarray:
    """Dense matrix of ``a_j^dag`` (kind='creation') or ``a_j`` ('annihilation').

    The returned array is read-only and shared between calls.
    """
    check_mode(j, mode_count)
    check_dense(mode_count)
    if kind not in ("creation", "annihilation"):
        raise DomainError(f"kind must be 'creation' or 'annihilation', got {kind!r}")
    return _ladder_matrix(j, kind == "creation", mode_count)


@functools.lru_cache(maxsize=64)
def number_diagonal(j: int, mode_count: int) -> np.ndarray:
    """Occupation of mode j for every basis index (read-only)."""
    idx = np.arange(1 << mode_count, dtype=np.int64)
    return _readonly(((idx >> (j - 1)) & 1).astype(float))


def number_operator(mode_count: int, j: int | None = None) -> np.ndarray:
    """Dense number operator, total (``j=None``) or for a single mode."""
    check_dense(mode_count)
    if j is not None:
        check_mode(j, mode_count)
        return np.diag(number_diagonal(j, mode_count)).astype(complex)
    idx = np.arange(1 << mode_count, dtype=np.int64)
    return np.diag(popcount(idx).astype(complex))


# ---------------------------------------------------------------------------
# mixed states

@dataclass(frozen=True, eq=False)
class DensityState:
    """Density matrix on the 2**M dimensional Fock space."""

    mode_count: int
    matrix: np.ndarray
    label: str = field(default="")

    def __post_init__(self):
        check_dense(self.mode_count)
        mat = np.array(self.matrix, dtype=complex)
        dim = 1 << self.mode_count
        if mat.shape != (dim, dim):
            raise DomainError(f"density matrix shape {mat.shape}, expected {(dim, dim)}")
        if not np.allclose(mat, mat.conj().T, atol=ATOL, rtol=0):
            raise DomainError("density matrix is not Hermitian")
        if abs(np.trace(mat).real - 1) > ATOL:
            raise NormalizationError(f"trace {np.trace(mat).real!r}, expected 1")
        if np.linalg.eigvalsh(mat).min() < -ATOL:
            raise DomainError("density matrix is not positive semidefinite")
        object.__setattr__(self, "matrix", _readonly(mat))

    @classmethod
    def from_pure(cls, state: FermionState, label: str | None = None) -> "DensityState":
        vec = state.to_vector()
        return cls(state.mode_count, np.outer(vec, vec.conj()),
                   state.label if label is None else label)

    @classmethod
    def from_mixture(cls, weights: Sequence[float], states: Sequence[FermionState],
                     label: str = "mixture") -> "DensityState":
        weights = np.asarray(weights, dtype=float)
        if len(weights) != len(states) or not states:
            raise DomainError("need one weight per state")
        if np.any(weights < 0):
            raise DomainError("mixture weights must be nonnegative")
        _check_normalized(weights, "mixture weights")
        modes = {s.mode_count for s in states}
        if len(modes) != 1:
            raise DomainError("mixture components live on different mode counts")
        mode_count = modes.pop()
        mat = sum(w * np.outer(v, v.conj())
                  for w, v in zip(weights, (s.to_vector() for s in states)))
        return cls(mode_count, mat, label)

    @classmethod
    def maximally_mixed(cls, mode_count: int) -> "DensityState":
        dim = 1 << mode_count
        return cls(mode_count, np.eye(dim) / dim, "maximally mixed")

    def purification_terms(self) -> Iterable[tuple]:
        """(weight, vector) pairs of the eigendecomposition with weight > 0."""
        vals, vecs = np.linalg.eigh(self.matrix)
        for w, v in zip(vals, vecs.T):
            if w > EXACT_ATOL:
                yield float(w), v


def random_density_state(mode_count: int, rng: np.random.Generator, rank: int | None = None,
                         label: str = "random mixed") -> DensityState:
    dim = 1 << mode_count
    rank = dim if rank is None else rank
    g = rng.normal(size=(dim, rank)) + 1j * rng.normal(size=(dim, rank))
    rho = g @ g.conj().T
    return DensityState(mode_count, rho / np.trace(rho).real, label)
