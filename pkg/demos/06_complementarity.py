"""A fermion of definite momentum is delocalized in position and violates there."""
import numpy as np

from fermictx import complementarity as X

for modes in (2, 3, 4):
    grid = X.ModeGrid(modes, length=1.0)
    k_state = X.definite_momentum_state(2 if modes > 2 else 1, grid)
    x_state = X.momentum_to_position(k_state, grid)
    report = X.position_basis_report(k_state, grid)
    print(f"M'={modes}: |f_m| = {np.round(np.abs(X.single_particle_amplitudes(x_state)), 6)}")
    print(f"       {report.name} value {report.quantum_value:.7f}, bound {report.nc_bound}, "
          f"margin {report.margin:.4f}")
