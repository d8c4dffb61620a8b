"""CHSH for one fermion shared by two momentum modes.

The optimizer and the closed-form settings agree with 2 sqrt(1 + 4 g1^2 g2^2)
over the whole range of g1^2; only g1 g2 = 0 fails to violate.
"""
import math

import numpy as np

from fermictx import fock, inequalities as I
from fermictx.settings_opt import certify_local_max, optimize

print(f"{'g1^2':>5} {'formula':>10} {'analytic':>10} {'optimizer':>10}  local max")
for g1sq in np.linspace(0, 1, 11):
    g1, g2 = math.sqrt(g1sq), math.sqrt(1 - g1sq)
    state = fock.make_single_fermion_state([g1, g2])
    settings, predicted = I.chsh_analytic_optimum(g1, g2)
    best = optimize(state, "chsh")
    print(f"{g1sq:5.2f} {predicted:10.7f} {I.chsh_value(state, settings):10.7f} "
          f"{best.value:10.7f}  {certify_local_max(state, 'chsh', settings)}")

print("classical bound:", I.nchv_bound("chsh"))
