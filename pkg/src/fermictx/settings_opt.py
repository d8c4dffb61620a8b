"""Measurement-setting optimization for CHSH and Hardy expressions.

Every expression is affine in the Bloch vector of any single label (mode and
setting) once the others are fixed: ``f(n) = c + B . n``. Coordinate ascent
sets ``n = B / |B|`` label by label, which is the exact block maximum, so
the value never decreases.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from .correlators import AnyState, IDENTITY_VECTOR, correlation_tensor
from .errors import DomainError
from .fock import check_dense
from .inequalities import (IDENTITY, OBSERVABLE, OUTCOME0, Expression,
                           Settings, evaluate_tensor,
                           get_expression, inequality_value)
from .jw import Direction, eigenprojector, sigma_direction


@dataclass(frozen=True)
class OptimizerConfig:
    restarts: int = 16
    max_sweeps: int = 500
    tolerance: float = 1e-12
    seed: int = 42
    grid_resolution: int = 12
    degeneracy: float = 1e-12

    def __post_init__(self):
        if self.restarts < 1:
            raise DomainError("restarts must be >= 1")
        if self.tolerance <= 0:
            raise DomainError("tolerance must be positive")
        if self.max_sweeps < 1 or self.grid_resolution < 2:
            raise DomainError("max_sweeps >= 1 and grid_resolution >= 2 required")


@dataclass(frozen=True)
class TraceRow:
    sweep: int
    label: str
    value: float
    flat: bool = False


@dataclass(frozen=True)
class AscentResult:
    settings: Settings
    value: float
    trace: tuple = field(repr=False)
    converged: bool = True
    restart: int = 0

    def trace_rows(self) -> list:
        return [(r.sweep, r.label, r.value, r.flat) for r in self.trace]


def _label_name(setting: int, mode: int) -> str:
    return f"k{mode}" + "'" * setting


def _factor_vectors(kind: str, n: np.ndarray) -> np.ndarray:
    """Batched 4-vectors (identity weight, Bloch part) for Bloch vectors ``n`` of shape (R, 3)."""
    R = n.shape[0]
    if kind == IDENTITY:
        return np.broadcast_to(IDENTITY_VECTOR, (R, 4))
    if kind == OBSERVABLE:
        return np.concatenate([np.zeros((R, 1)), n], axis=1)
    sign = -1.0 if kind == OUTCOME0 else 1.0
    return np.concatenate([np.full((R, 1), 0.5), 0.5 * sign * n], axis=1)


def _affine_coefficients(expr: Expression, tensor: np.ndarray, vectors: np.ndarray,
                         setting: int, mode: int) -> tuple:
    """Constant ``c`` and gradient ``B`` of the expression in one label's Bloch vector.

    Equivalent to evaluating the expression with that label set to the zero
    vector and to each coordinate axis, done as a single contraction per term
    that leaves the label's mode open. ``vectors`` has shape (R, 2, M, 3);
    returns arrays of shape (R,) and (R, 3).
    """
    R = vectors.shape[0]
    j = mode - 1
    const = np.zeros(R)
    grad = np.zeros((R, 3))
    for c, factors in expr.terms:
        env = np.broadcast_to(tensor, (R,) + tensor.shape)
        # contract modes in order; the open mode stays at axis 1
        for m, (s, kind) in enumerate(factors):
            if m == j:
                continue
            v = _factor_vectors(kind, vectors[:, s, m])
            axis = 1 if m < j else 2
            env = np.einsum("ra...,ra->r...", np.moveaxis(env, axis, 1), v)
        s, kind = factors[j]
        if s != setting or kind == IDENTITY:
            const += c * np.einsum("ra,ra->r", _factor_vectors(kind, vectors[:, s, j]), env)
        elif kind == OBSERVABLE:
            grad += c * env[:, 1:]
        else:
            sign = -1.0 if kind == OUTCOME0 else 1.0
            const += c * 0.5 * env[:, 0]
            grad += c * 0.5 * sign * env[:, 1:]
    return const, grad


def _ascend(expr: Expression, tensor: np.ndarray, vectors: np.ndarray,
            config: OptimizerConfig) -> tuple:
    """Run independent ascents for a batch of starting points.

    A restart stops updating once a full sweep gains less than
    ``config.tolerance``, so each batch member follows exactly the path a
    standalone run would.
    """
    vectors = np.array(vectors, dtype=float)
    R = vectors.shape[0]
    values = np.array([evaluate_tensor(expr, tensor, v) for v in vectors])
    traces = [[TraceRow(0, "start", float(v))] for v in values]
    active = np.ones(R, dtype=bool)
    for sweep in range(1, config.max_sweeps + 1):
        start = values.copy()
        for setting, mode in expr.labels:
            const, grad = _affine_coefficients(expr, tensor, vectors, setting, mode)
            norm = np.linalg.norm(grad, axis=1)
            flat = norm < config.degeneracy
            update = active & ~flat
            vectors[update, setting, mode - 1] = grad[update] / norm[update, None]
            current = np.einsum("ri,ri->r", grad, vectors[:, setting, mode - 1])
            values = np.where(active, const + current, values)
            name = _label_name(setting, mode)
            for r in np.flatnonzero(active):
                traces[r].append(TraceRow(sweep, name, float(values[r]), bool(flat[r])))
        active &= ~(values - start < config.tolerance)
        if not active.any():
            break
    return vectors, values, traces, ~active


def coordinate_ascent(state: AnyState, inequality: str, initial: Settings,
                      config: OptimizerConfig | None = None,
                      tensor: np.ndarray | None = None) -> AscentResult:
    """Single-start ascent from ``initial``; see the module docstring."""
    config = OptimizerConfig() if config is None else config
    expr = get_expression(inequality, state.mode_count)
    if tensor is None:
        tensor = correlation_tensor(state)
    vectors, values, traces, converged = _ascend(expr, tensor, initial.unit_vectors()[None], config)
    return AscentResult(Settings.from_vectors(vectors[0]), float(values[0]),
                        tuple(traces[0]), bool(converged[0]))


def _settings_key(settings: Settings) -> tuple:
    return tuple(round(a, 12) for d in settings.unprimed + settings.primed
                 for a in (d.theta, d.phi))


def optimize(state: AnyState, inequality: str, config: OptimizerConfig | None = None,
             initial: Optional[Settings] = None) -> AscentResult:
    """Multi-start coordinate ascent.

    Restart 0 begins at ``initial`` when given; the rest draw uniform random
    directions from ``config.seed``. The best value wins, ties going to the
    lexicographically smallest angles.
    """
    config = OptimizerConfig() if config is None else config
    rng = np.random.default_rng(config.seed)
    expr = get_expression(inequality, state.mode_count)
    tensor = correlation_tensor(state)
    M = state.mode_count
    starts = [initial if (r == 0 and initial is not None) else Settings.random(M, rng)
              for r in range(config.restarts)]
    vectors, values, traces, converged = _ascend(
        expr, tensor, np.stack([s.unit_vectors() for s in starts]), config)
    results = [AscentResult(Settings.from_vectors(vectors[r]), float(values[r]),
                            tuple(traces[r]), bool(converged[r]), r)
               for r in range(config.restarts)]
    return min(results, key=lambda res: (-res.value, _settings_key(res.settings)))


def certify_local_max(state: AnyState, inequality: str, settings: Settings,
                      epsilon: float = 1e-3, atol: float = 1e-12) -> bool:
    """True iff no single-angle perturbation by +-epsilon raises the value.

    Uses the dense evaluation path.
    """
    base = inequality_value(inequality, state, settings)
    for setting, row in enumerate((settings.unprimed, settings.primed)):
        for j, d in enumerate(row, start=1):
            for dtheta, dphi in ((epsilon, 0), (-epsilon, 0), (0, epsilon), (0, -epsilon)):
                moved = settings.replace(setting, j, Direction(d.theta + dtheta, d.phi + dphi))
                if inequality_value(inequality, state, moved) > base + atol:
                    return False
    return True


# ---------------------------------------------------------------------------
# grid oracle

@dataclass(frozen=True)
class GridResult:
    value: float
    settings: Settings
    evaluations: int


def _grid_angles(resolution: int) -> np.ndarray:
    return np.linspace(-np.pi, np.pi, resolution, endpoint=False)


def _factor_stack(kind: str, mode: int, angles: np.ndarray) -> np.ndarray:
    """Dense factor operators of one mode for every grid angle, phi = 0."""
    ops = []
    for t in angles:
        d = Direction(float(t), 0.0)
        if kind == OBSERVABLE:
            ops.append(sigma_direction((mode, d), 2))
        else:
            ops.append(eigenprojector((mode, d), 0 if kind == OUTCOME0 else 1, 2))
    return np.stack(ops)


def _grid_two_mode(state: AnyState, expr: Expression, angles: np.ndarray) -> GridResult:
    """Exhaustive grid over (theta_1, theta_2, theta_1', theta_2') with phi = 0."""
    from .fock import DensityState
    rho = state.matrix if isinstance(state, DensityState) else DensityState.from_pure(state).matrix
    n = angles.size
    total = np.zeros((n, n, n, n))      # axes: (s=0,j=1), (0,2), (1,1), (1,2)
    for c, factors in expr.terms:
        (s1, k1), (s2, k2) = factors
        f1 = _factor_stack(k1, 1, angles)
        f2 = _factor_stack(k2, 2, angles)
        vals = np.einsum("aij,bjk,ki->ab", f1, f2, rho).real
        shape = [1, 1, 1, 1]
        shape[2 * s1] = n
        shape[2 * s2 + 1] = n
        total = total + c * vals.reshape(shape)
    best = np.unravel_index(int(np.argmax(total)), total.shape)
    t = angles[list(best)]
    settings = Settings((Direction(t[0]), Direction(t[1])), (Direction(t[2]), Direction(t[3])))
    return GridResult(float(total[best]), settings, total.size)


def grid_search(state: AnyState, inequality: str, resolution: int = 12) -> GridResult:
    """Coarse grid maximum in the x-z plane (phi = 0), dense operators only.

    Two modes: all four polar angles are scanned. More modes: symmetric
    ansatz with one angle shared by every unprimed setting and one by every
    primed setting.
    """
    M = state.mode_count
    check_dense(M)
    expr = get_expression(inequality, M)
    angles = _grid_angles(resolution)
    if M == 2:
        return _grid_two_mode(state, expr, angles)
    best = None
    for a, b in itertools.product(angles, repeat=2):
        settings = Settings((Direction(float(a)),) * M, (Direction(float(b)),) * M)
        v = inequality_value(inequality, state, settings)
        if best is None or v > best[0]:
            best = (v, settings)
    return GridResult(best[0], best[1], angles.size ** 2)
