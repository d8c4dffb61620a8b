"""Fermionic ladder operators and their sign bookkeeping.

Patterns list mode 1 first. Creating a fermion in mode j picks up a minus
sign for every occupied mode below j, which is all the canonical
anticommutation relations need.
"""
import numpy as np

from fermictx import fock

s = fock.unchecked_state(2, {"10": 1})
print("a2^dag |10>  =", fock.apply_creation(s, 2))
print("a1^dag |10>  =", fock.apply_creation(s, 1), "(Pauli exclusion)")
print("a2 |11>      =", fock.apply_annihilation(fock.unchecked_state(2, {"11": 1}), 2))

M = 4
eye = np.eye(1 << M)
worst = 0.0
for j in range(1, M + 1):
    for k in range(1, M + 1):
        a = fock.operator_matrix(j, "annihilation", M)
        ad = fock.operator_matrix(k, "creation", M)
        worst = max(worst, np.abs(a @ ad + ad @ a - (j == k) * eye).max())
print(f"max |{{a_j, a_k^dag}} - delta_jk| over M={M}: {worst:.1e}")

g = fock.make_single_fermion_state([0.6, 0.8j])
print("single fermion", g, "<N> =", g.number_expectation())
print("Dicke(4, 2) support:", [fock.format_pattern(p) for p in fock.dicke_state(4, 2).support])
