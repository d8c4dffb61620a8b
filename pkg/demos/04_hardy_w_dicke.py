"""Hardy's inequality for several modes.

W and Dicke states violate it; a single Fock term does not. A coarse grid
over a symmetric ansatz gives an independent lower bound on the maximum.
"""
from fermictx import fock, inequalities as I
from fermictx.settings_opt import grid_search, optimize

states = [fock.w_state(3), fock.w_state(4), fock.dicke_state(4, 2),
          fock.make_n_fermion_state(4, {(1, 3): 1.0}, label="single term {1,3}")]
for state in states:
    best = optimize(state, "hardy")
    grid = grid_search(state, "hardy", 12)
    print(f"{state.label:<22} optimizer {best.value:.6f}  grid {grid.value:.6f}  "
          f"bound {I.nchv_bound('hardy', state.mode_count)}")

# with two modes the Hardy expression is CHSH in probability form
w2 = fock.w_state(2)
print("M=2: hardy", round(optimize(w2, "hardy").value, 9),
      " (chsh - 2)/4", round((optimize(w2, "chsh").value - 2) / 4, 9))
