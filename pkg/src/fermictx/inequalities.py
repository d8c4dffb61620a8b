"""CHSH, Hardy and Peres-Mermin noncontextuality expressions.

CHSH and Hardy are written as :class:`Expression` objects: signed sums of
products over modes, where each mode contributes the identity, an observable
``sigma . n`` or an outcome projector for one of its two settings (unprimed
= 0, primed = 1). The same term list is evaluated three ways: on dense Fock
operators, on a correlation tensor, and under deterministic outcome
assignments for the noncontextual bound.
"""
from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from .correlators import (AnyState, IDENTITY_VECTOR, contract_tensor,
                          expectation_dense, joint_probability,
                          observable_vector, projector_vector)
from .errors import CapacityError, DomainError
from .fock import ATOL, DensityState, check_dense
from .jw import (Direction, MeasurementContext, X_AXIS, Y_AXIS, Z_AXIS,
                 outcome_eigenvalue, sigma_direction)

TSIRELSON = 2 * math.sqrt(2)
MAX_HARDY_ENUMERATION_MODES = 8

# per-mode factor kinds
IDENTITY, OBSERVABLE, OUTCOME0, OUTCOME1 = "id", "obs", "p0", "p1"


@dataclass(frozen=True)
class Expression:
    """``sum_t coefficient_t * < prod_j factor_{t,j} >``.

    Each factor is ``(setting, kind)``; ``setting`` selects the unprimed (0)
    or primed (1) direction of that mode.
    """

    name: str
    mode_count: int
    terms: tuple
    nc_bound: int

    @property
    def labels(self) -> list:
        """(setting, mode) pairs the expression depends on, mode 1-based."""
        used = {(s, j + 1) for _, factors in self.terms
                for j, (s, kind) in enumerate(factors) if kind != IDENTITY}
        return sorted(used, key=lambda sm: (sm[1], sm[0]))


def chsh_expression() -> Expression:
    obs = OBSERVABLE
    terms = (
        (1, ((0, obs), (0, obs))),
        (1, ((0, obs), (1, obs))),
        (1, ((1, obs), (0, obs))),
        (-1, ((1, obs), (1, obs))),
    )
    return Expression("chsh", 2, terms, nc_bound=2)


def hardy_expression(mode_count: int) -> Expression:
    """P(0..0|k) - sum_j P(0..0|k with k_j primed) - P(1..1|k')."""
    if mode_count < 2:
        raise DomainError("Hardy inequality needs at least two modes")
    M = mode_count
    terms = [(1, tuple((0, OUTCOME0) for _ in range(M)))]
    for j in range(M):
        terms.append((-1, tuple((1 if m == j else 0, OUTCOME0) for m in range(M))))
    terms.append((-1, tuple((1, OUTCOME1) for _ in range(M))))
    return Expression("hardy", M, tuple(terms), nc_bound=0)


def get_expression(name: str, mode_count: int) -> Expression:
    if name == "chsh":
        if mode_count != 2:
            raise DomainError(f"CHSH is defined on two modes, got {mode_count}")
        return chsh_expression()
    if name == "hardy":
        return hardy_expression(mode_count)
    raise DomainError(f"unknown inequality {name!r}")


# ---------------------------------------------------------------------------
# settings

@dataclass(frozen=True)
class Settings:
    """Unprimed and primed direction for every mode."""

    unprimed: tuple
    primed: tuple

    def __post_init__(self):
        object.__setattr__(self, "unprimed", tuple(self.unprimed))
        object.__setattr__(self, "primed", tuple(self.primed))
        if len(self.unprimed) != len(self.primed):
            raise DomainError("primed and unprimed settings cover different modes")

    @property
    def mode_count(self) -> int:
        return len(self.unprimed)

    def direction(self, setting: int, mode: int) -> Direction:
        return (self.unprimed, self.primed)[setting][mode - 1]

    def replace(self, setting: int, mode: int, direction: Direction) -> "Settings":
        rows = [list(self.unprimed), list(self.primed)]
        rows[setting][mode - 1] = direction
        return type(self)(tuple(rows[0]), tuple(rows[1]))

    def unit_vectors(self) -> np.ndarray:
        """Array of shape (2, M, 3)."""
        return np.array([[d.vector for d in row] for row in (self.unprimed, self.primed)])

    @classmethod
    def from_vectors(cls, vectors: np.ndarray) -> "Settings":
        rows = [tuple(Direction.from_vector(v) for v in row) for row in vectors]
        return cls(rows[0], rows[1])

    @classmethod
    def random(cls, mode_count: int, rng: np.random.Generator) -> "Settings":
        """Directions uniform on the sphere."""
        v = rng.normal(size=(2, mode_count, 3))
        v /= np.linalg.norm(v, axis=-1, keepdims=True)
        return cls.from_vectors(v)

    def to_records(self) -> list:
        out = []
        for setting, row in enumerate((self.unprimed, self.primed)):
            for j, d in enumerate(row, start=1):
                out.append({
                    "label": f"k{j}" + "'" * setting,
                    "mode": j,
                    "setting": setting,
                    "theta_rad": float(d.theta),
                    "phi_rad": float(d.phi),
                    "theta_deg": math.degrees(d.theta),
                    "phi_deg": math.degrees(d.phi),
                })
        return out


class ChshSettings(Settings):
    def __post_init__(self):
        super().__post_init__()
        if self.mode_count != 2:
            raise DomainError("CHSH settings cover exactly two modes")


class HardySettings(Settings):
    pass


# ---------------------------------------------------------------------------
# evaluation

def _dense_term(state: AnyState, factors: tuple, settings: Settings) -> float:
    kinds = {kind for _, kind in factors}
    if kinds <= {IDENTITY, OBSERVABLE}:
        ctx = [None if kind == IDENTITY else settings.direction(s, j + 1)
               for j, (s, kind) in enumerate(factors)]
        return expectation_dense(state, MeasurementContext(tuple(ctx)))
    if IDENTITY in kinds or OBSERVABLE in kinds:
        raise DomainError("dense evaluation mixes observables with projectors")
    return joint_probability(state, [(settings.direction(s, j + 1), 0 if kind == OUTCOME0 else 1)
                                     for j, (s, kind) in enumerate(factors)])


def evaluate_dense(expr: Expression, state: AnyState, settings: Settings) -> float:
    """Expression value from materialized Fock operators."""
    if state.mode_count != expr.mode_count or settings.mode_count != expr.mode_count:
        raise DomainError(f"{expr.name} needs {expr.mode_count} modes")
    return float(sum(c * _dense_term(state, f, settings) for c, f in expr.terms))


def _factor_vector(kind: str, n: np.ndarray) -> np.ndarray:
    if kind == IDENTITY:
        return IDENTITY_VECTOR
    if kind == OBSERVABLE:
        return observable_vector(n)
    return projector_vector(n, 0 if kind == OUTCOME0 else 1)


def evaluate_tensor(expr: Expression, tensor: np.ndarray, vectors: np.ndarray) -> float:
    """Expression value from a correlation tensor.

    ``vectors[s, j]`` is the Bloch 3-vector of setting ``s`` on mode ``j + 1``;
    it need not be a unit vector, which lets callers probe the expression's
    affine dependence on one label.
    """
    total = 0.0
    for c, factors in expr.terms:
        vecs = [_factor_vector(kind, vectors[s, j]) for j, (s, kind) in enumerate(factors)]
        total += c * contract_tensor(tensor, vecs)
    return total


def evaluate_deterministic(expr: Expression, eigenvalues: np.ndarray) -> np.ndarray:
    """Expression value for deterministic +-1 outcomes per label.

    ``eigenvalues`` has shape (..., 2, M); vectorized over leading axes.
    Integer in, integer out.
    """
    eig = np.asarray(eigenvalues, dtype=np.int64)
    total = np.zeros(eig.shape[:-2], dtype=np.int64)
    for c, factors in expr.terms:
        prod = np.ones_like(total)
        for j, (s, kind) in enumerate(factors):
            e = eig[..., s, j]
            if kind == OBSERVABLE:
                prod = prod * e
            elif kind == OUTCOME0:
                prod = prod * (e == outcome_eigenvalue(0))
            elif kind == OUTCOME1:
                prod = prod * (e == outcome_eigenvalue(1))
        total = total + c * prod
    return total


def chsh_value(state: AnyState, settings: Settings) -> float:
    """E(k1,k2) + E(k1,k2') + E(k1',k2) - E(k1',k2')."""
    if state.mode_count != 2:
        raise DomainError(f"CHSH needs M = 2, got {state.mode_count}")
    return evaluate_dense(chsh_expression(), state, settings)


def hardy_value(state: AnyState, settings: Settings) -> float:
    if state.mode_count < 2:
        raise DomainError("Hardy inequality needs M >= 2")
    return evaluate_dense(hardy_expression(state.mode_count), state, settings)


def inequality_value(name: str, state: AnyState, settings: Settings) -> float:
    if name == "chsh":
        return chsh_value(state, settings)
    if name == "hardy":
        return hardy_value(state, settings)
    raise DomainError(f"unknown inequality {name!r}")


def chsh_analytic_optimum(g1: float, g2: float) -> tuple:
    """Closed-form optimal CHSH settings for ``g1 a_1^dag + g2 a_2^dag``.

    Returns ``(settings, 2 sqrt(1 + 4 g1^2 g2^2))`` with
    ``theta_1 = pi``, ``theta_2 = arctan(2 g1 g2)``, ``theta_1' = pi/2``,
    ``theta_2' = -theta_2`` and all azimuths zero.
    """
    g1, g2 = float(g1), float(g2)
    if abs(g1 * g1 + g2 * g2 - 1) > ATOL:
        raise DomainError(f"g1^2 + g2^2 = {g1 * g1 + g2 * g2!r}, expected 1")
    t2 = math.atan(2 * g1 * g2)
    settings = ChshSettings((Direction(math.pi, 0.0), Direction(t2, 0.0)),
                            (Direction(math.pi / 2, 0.0), Direction(-t2, 0.0)))
    return settings, 2 * math.sqrt(1 + 4 * g1 * g1 * g2 * g2)


# ---------------------------------------------------------------------------
# Peres-Mermin square

@dataclass(frozen=True)
class PmDirections:
    """Directions (n1, n2), (n1', n2'), (n1'', n2'') filling the square."""

    n1: Direction = Z_AXIS
    n2: Direction = Z_AXIS
    n1p: Direction = X_AXIS
    n2p: Direction = X_AXIS
    n1pp: Direction = Y_AXIS
    n2pp: Direction = Y_AXIS


# sign of each row/column triple in the Peres-Mermin combination
PM_CONTEXTS = (
    (1, ((0, 0), (0, 1), (0, 2))),
    (1, ((1, 0), (1, 1), (1, 2))),
    (1, ((2, 0), (2, 1), (2, 2))),
    (1, ((0, 0), (1, 0), (2, 0))),
    (1, ((0, 1), (1, 1), (2, 1))),
    (-1, ((0, 2), (1, 2), (2, 2))),
)


def pm_grid(directions: PmDirections | None = None) -> list:
    """3x3 nested list of dense two-mode operators."""
    d = PmDirections() if directions is None else directions
    s = lambda mode, n: sigma_direction((mode, n), 2)  # noqa: E731
    return [
        [s(1, d.n1), s(2, d.n2), s(1, d.n1) @ s(2, d.n2)],
        [s(2, d.n2p), s(1, d.n1p), s(1, d.n1p) @ s(2, d.n2p)],
        [s(1, d.n1) @ s(2, d.n2p), s(1, d.n1p) @ s(2, d.n2), s(1, d.n1pp) @ s(2, d.n2pp)],
    ]


def pm_square_value(state: AnyState, directions: PmDirections | None = None) -> float:
    """Signed sum of the six row/column triple-product expectations."""
    if state.mode_count != 2:
        raise DomainError(f"Peres-Mermin square needs M = 2, got {state.mode_count}")
    check_dense(2)
    grid = pm_grid(directions)
    rho = state.matrix if isinstance(state, DensityState) else DensityState.from_pure(state).matrix
    total = 0.0
    for sign, cells in PM_CONTEXTS:
        op = np.eye(4, dtype=complex)
        for r, c in cells:
            op = op @ grid[r][c]
        total += sign * np.trace(rho @ op).real
    return float(total)


def pm_deterministic(assignments: np.ndarray) -> np.ndarray:
    """PM combination for +-1 assignments of shape (..., 3, 3)."""
    a = np.asarray(assignments, dtype=np.int64)
    total = np.zeros(a.shape[:-2], dtype=np.int64)
    for sign, cells in PM_CONTEXTS:
        prod = np.ones_like(total)
        for r, c in cells:
            prod = prod * a[..., r, c]
        total = total + sign * prod
    return total


# ---------------------------------------------------------------------------
# noncontextual bounds

def _all_sign_assignments(n: int) -> np.ndarray:
    """Every +-1 vector of length n, lexicographic in (-1 < +1)."""
    bits = (np.arange(1 << n)[:, None] >> np.arange(n - 1, -1, -1)) & 1
    return 2 * bits - 1


def nchv_bound(name: str, mode_count: int | None = None) -> int:
    """Maximum of the expression over deterministic noncontextual assignments.

    CHSH assigns +-1 to four labels, Hardy one outcome to each of the 2M
    labels, Peres-Mermin +-1 to the nine square entries independently.
    """
    if name == "chsh":
        expr = chsh_expression()
        values = evaluate_deterministic(expr, _all_sign_assignments(4).reshape(-1, 2, 2))
        return int(values.max())
    if name == "hardy":
        M = 2 if mode_count is None else int(mode_count)
        if M > MAX_HARDY_ENUMERATION_MODES:
            raise CapacityError(f"Hardy enumeration limited to M <= {MAX_HARDY_ENUMERATION_MODES}")
        expr = hardy_expression(M)
        values = evaluate_deterministic(expr, _all_sign_assignments(2 * M).reshape(-1, 2, M))
        return int(values.max())
    if name == "pm":
        return int(pm_deterministic(_all_sign_assignments(9).reshape(-1, 3, 3)).max())
    raise DomainError(f"unknown inequality {name!r}")


# ---------------------------------------------------------------------------
# reports

def _clean(x: float) -> float:
    return 0.0 if x == 0 else float(x)


@dataclass(frozen=True)
class InequalityReport:
    name: str
    quantum_value: float
    nc_bound: float
    settings: Optional[list]
    state_label: str
    notes: dict = field(default_factory=dict)

    @property
    def margin(self) -> float:
        return self.quantum_value - self.nc_bound

    @property
    def violation(self) -> bool:
        return self.margin > 0

    def to_dict(self) -> dict:
        return {
            "name": self.name,
            "quantum_value": _clean(self.quantum_value),
            "nc_bound": _clean(self.nc_bound),
            "margin": _clean(self.margin),
            "violation": self.violation,
            "settings": self.settings,
            "state_label": self.state_label,
            "notes": self.notes,
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2, sort_keys=True)

    def to_text(self) -> str:
        lines = [
            f"name          {self.name}",
            f"state_label   {self.state_label}",
            f"quantum_value {self.quantum_value:.9g}",
            f"nc_bound      {self.nc_bound:.9g}",
            f"margin        {self.margin:.9g}",
            f"violation     {'yes' if self.violation else 'no'}",
        ]
        for key in sorted(self.notes):
            lines.append(f"{key:<13} {self.notes[key]}")
        if self.settings:
            lines.append("settings      label   theta[rad]    phi[rad]  theta[deg]    phi[deg]")
            for r in self.settings:
                lines.append(f"              {r['label']:<5} {r['theta_rad']:>11.9g} {r['phi_rad']:>11.9g} "
                             f"{r['theta_deg']:>11.9g} {r['phi_deg']:>11.9g}")
        return "\n".join(lines)
