"""Quantum contextuality of fermions in Fock space.

Jordan-Wigner observables over ordered momentum (or position) modes, two
independent correlator engines, CHSH / Hardy / Peres-Mermin expressions with
their noncontextual bounds, and a measurement-setting optimizer.
"""
from .complementarity import (ModeGrid, definite_momentum_state, momentum_to_position,
                              position_basis_report, position_to_momentum)
from .correlators import (ClosedFormElement, closed_form_element, correlation_tensor,
                          eta_exponent, expectation, expectation_dense, expectation_fast,
                          joint_probability, matrix_element_closed_form, xi_exponents)
from .errors import CapacityError, DomainError, FermiCtxError, NormalizationError
from .fock import (DensityState, FermionState, apply_annihilation, apply_creation,
                   dense_cap, dicke_state, make_n_fermion_state, make_single_fermion_state,
                   make_state, operator_matrix, random_density_state, random_state,
                   unchecked_state, w_state)
from .inequalities import (ChshSettings, HardySettings, InequalityReport, PmDirections,
                           Settings, chsh_analytic_optimum, chsh_value, hardy_value,
                           nchv_bound, pm_square_value)
from .jw import (Direction, MeasurementContext, ObservableSpec, correspondence_check,
                 eigenprojector, fock_to_qubit, hatted_pauli, sigma_component,
                 sigma_direction)
from .settings_opt import (OptimizerConfig, certify_local_max, coordinate_ascent,
                           grid_search, optimize)

__version__ = "0.1.0"

__all__ = [
    "CapacityError", "ChshSettings", "ClosedFormElement", "DensityState", "Direction",
    "DomainError", "FermiCtxError", "FermionState", "HardySettings", "InequalityReport",
    "MeasurementContext", "ModeGrid", "NormalizationError", "ObservableSpec",
    "OptimizerConfig", "PmDirections", "Settings", "apply_annihilation", "apply_creation",
    "certify_local_max", "chsh_analytic_optimum", "chsh_value", "closed_form_element",
    "coordinate_ascent", "correlation_tensor", "correspondence_check", "definite_momentum_state",
    "dense_cap", "dicke_state", "eigenprojector", "eta_exponent", "expectation",
    "expectation_dense", "expectation_fast", "fock_to_qubit", "grid_search", "hardy_value",
    "hatted_pauli", "joint_probability", "make_n_fermion_state", "make_single_fermion_state",
    "make_state", "matrix_element_closed_form", "momentum_to_position", "nchv_bound",
    "operator_matrix", "optimize", "pm_square_value", "position_basis_report",
    "position_to_momentum", "random_density_state", "random_state", "sigma_component",
    "sigma_direction", "unchecked_state", "w_state", "xi_exponents",
]
