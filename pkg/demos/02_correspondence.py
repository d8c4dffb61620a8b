"""A Fock-space correlator equals the same correlator on a multiqubit state.

The Jordan-Wigner observable along n on mode j is measured on the fermion
state; the right-hand side replaces each observable by a two-by-two matrix
and the state by the qubit vector with the same amplitudes.
"""
import numpy as np

from fermictx import fock, jw

rng = np.random.default_rng(42)
for M in range(1, 9):
    worst = 0.0
    for _ in range(25):
        state = fock.random_state(M, rng, physical=False)
        dirs = [jw.Direction(rng.uniform(0, np.pi), rng.uniform(-np.pi, np.pi)) for _ in range(M)]
        worst = max(worst, jw.correspondence_check(state, dirs).abs_diff)
    print(f"M={M}: max |lhs - rhs| over 25 random cases = {worst:.1e}")

w = fock.make_single_fermion_state([2 ** -0.5, 2 ** -0.5])
print("qubit image of (a1^dag + a2^dag)|0>/sqrt2:", np.round(jw.fock_to_qubit(w), 4))
