"""Momentum to position mode change for a single fermion in a finite box.

A box of length ``L`` sampled at ``M'`` points carries momenta
``k_j = 2 pi (j - 1) / L`` and positions ``x_m = (m - 1) L / M'``. The
one-particle amplitudes transform as

    f_m = (1 / sqrt(M')) * sum_j g_j exp(i k_j x_m),

which is unitary on the one-particle sector when both grids have ``M'``
points. Fewer momentum modes are zero-padded.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DomainError
from .fock import FermionState, make_single_fermion_state
from .inequalities import InequalityReport, nchv_bound
from .settings_opt import OptimizerConfig, grid_search, optimize


@dataclass(frozen=True)
class ModeGrid:
    modes: int
    length: float = 1.0

    def __post_init__(self):
        if int(self.modes) != self.modes or self.modes < 2:
            raise DomainError(f"position grid needs at least 2 modes, got {self.modes}")
        if not self.length > 0:
            raise DomainError("box length must be positive")

    @property
    def positions(self) -> np.ndarray:
        return np.arange(self.modes) * self.length / self.modes

    @property
    def momenta(self) -> np.ndarray:
        return 2 * np.pi * np.arange(self.modes) / self.length

    def planewave_matrix(self) -> np.ndarray:
        """``U[m, j] = exp(i k_j x_m) / sqrt(M')``."""
        return np.exp(1j * np.outer(self.positions, self.momenta)) / np.sqrt(self.modes)


def single_particle_amplitudes(state: FermionState) -> np.ndarray:
    """Coefficients ``g_j`` of a one-fermion state."""
    if state.particle_numbers() != {1}:
        raise DomainError("basis change is defined for one-particle states only")
    g = np.zeros(state.mode_count, dtype=complex)
    for idx, c in zip(state.indices, state.coefficients):
        g[int(idx).bit_length() - 1] = c
    return g


def momentum_to_position(state: FermionState, grid: ModeGrid) -> FermionState:
    g = single_particle_amplitudes(state)
    if g.size > grid.modes:
        raise DomainError(f"{g.size} momentum modes do not fit a {grid.modes}-point grid")
    padded = np.zeros(grid.modes, dtype=complex)
    padded[:g.size] = g
    f = grid.planewave_matrix() @ padded
    # renormalize away rounding only; the map itself is unitary
    f /= np.linalg.norm(f)
    label = f"x-basis[{state.label}]" if state.label else "x-basis"
    return make_single_fermion_state(f, label=label)


def position_to_momentum(state: FermionState, grid: ModeGrid) -> FermionState:
    f = single_particle_amplitudes(state)
    if f.size != grid.modes:
        raise DomainError("position state must live on the grid's modes")
    g = grid.planewave_matrix().conj().T @ f
    g /= np.linalg.norm(g)
    return make_single_fermion_state(g, label=f"k-basis[{state.label}]")


def definite_momentum_state(k_index: int, grid: ModeGrid) -> FermionState:
    """Fermion in momentum mode ``k_index`` (1-based) of the grid."""
    if not 1 <= k_index <= grid.modes:
        raise DomainError(f"momentum index {k_index} outside 1..{grid.modes}")
    g = np.zeros(grid.modes)
    g[k_index - 1] = 1.0
    return make_single_fermion_state(g, label=f"k_{k_index}")


def position_basis_report(state: FermionState, grid: ModeGrid,
                          config: OptimizerConfig | None = None) -> InequalityReport:
    """Optimize CHSH (two position modes) or Hardy (three or more) after the basis change."""
    config = OptimizerConfig() if config is None else config
    x_state = momentum_to_position(state, grid)
    name = "chsh" if grid.modes == 2 else "hardy"
    best = optimize(x_state, name, config)
    notes = {"grid_modes": grid.modes, "box_length": grid.length,
             "optimizer_restart": best.restart}
    if name == "hardy":
        notes["grid_oracle_value"] = grid_search(x_state, name, config.grid_resolution).value
    amp = np.abs(single_particle_amplitudes(x_state))
    notes["position_moduli"] = [float(a) for a in amp]
    return InequalityReport(name, best.value, nchv_bound(name, grid.modes),
                            best.settings.to_records(), x_state.label, notes)
