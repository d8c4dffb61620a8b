"""Peres-Mermin square on two modes: every state gives 6, hidden variables at most 4."""
import numpy as np

from fermictx import fock, inequalities as I

rng = np.random.default_rng(42)
values = [I.pm_square_value(fock.random_density_state(2, rng)) for _ in range(10)]
print("random mixed states:", np.round(values, 12))
print("maximally mixed:", I.pm_square_value(fock.DensityState.maximally_mixed(2)))
print("deterministic assignments, best of 512:", I.nchv_bound("pm"))
