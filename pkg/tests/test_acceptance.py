"""Acceptance criteria, one test per criterion.

Each test records a PASS/FAIL line that is printed in the terminal summary.
Run with ``pytest tests/test_acceptance.py -v``.
"""
import itertools
import math
import subprocess
import sys
import time

import numpy as np

from fermictx import complementarity as X, correlators as C, fock, inequalities as I, jw
from fermictx.settings_opt import OptimizerConfig, grid_search, optimize

from conftest import random_direction

SEED = 42


def _rng(criterion: int) -> np.random.Generator:
    return np.random.default_rng([SEED, criterion])


def test_1_chsh_maximum_formula(acceptance):
    worst_opt = worst_analytic = worst_time = 0.0
    for g1sq in np.linspace(0.0, 1.0, 21):
        g1, g2 = math.sqrt(g1sq), math.sqrt(1.0 - g1sq)
        start = time.perf_counter()
        state = fock.make_single_fermion_state([g1, g2])
        settings, predicted = I.chsh_analytic_optimum(g1, g2)
        formula = 2 * math.sqrt(1 + 4 * g1sq * (1 - g1sq))
        at_analytic = I.chsh_value(state, settings)
        best = optimize(state, "chsh", OptimizerConfig())
        worst_time = max(worst_time, time.perf_counter() - start)
        worst_opt = max(worst_opt, abs(best.value - formula))
        worst_analytic = max(worst_analytic, abs(at_analytic - formula), abs(predicted - formula))
    ok = worst_opt <= 1e-6 and worst_analytic <= 1e-9 and worst_time < 1.0
    acceptance(1, "CHSH maximum 2 sqrt(1 + 4 g1^2 g2^2)", ok,
               f"optimizer err {worst_opt:.1e}, analytic settings err {worst_analytic:.1e}, "
               f"slowest point {worst_time:.2f} s")
    assert ok


def test_2_correspondence(acceptance):
    rng = _rng(2)
    worst_full = worst_partial = 0.0
    for M in range(1, 9):
        for case in range(100):
            state = fock.random_state(M, rng, physical=bool(case % 2))
            dirs = [random_direction(rng) for _ in range(M)]
            worst_full = max(worst_full, jw.correspondence_check(state, dirs).abs_diff)
    partial_cases = 0
    for M in range(1, 7):
        for case in range(100):
            state = fock.random_state(M, rng, physical=bool(case % 2))
            dirs = [random_direction(rng) for _ in range(M)]
            # at least one identity slot
            for j in rng.choice(M, size=int(rng.integers(1, M + 1)), replace=False):
                dirs[j] = None
            worst_partial = max(worst_partial, jw.correspondence_check(state, dirs).abs_diff)
            partial_cases += 1
    ok = worst_full < 1e-10 and worst_partial < 1e-10
    acceptance(2, "Fock correlators equal their multiqubit images", ok,
               f"800 full cases max {worst_full:.1e}, {partial_cases} partial cases max "
               f"{worst_partial:.1e}")
    assert ok


def test_3_algebra(acceptance):
    rng = _rng(3)
    worst = {"anticommutators": 0.0, "jw commutators": 0.0, "sigma^2": 0.0, "cross-mode": 0.0}
    for M in range(1, 7):
        eye = np.eye(1 << M)
        for j, k in itertools.product(range(1, M + 1), repeat=2):
            a_j = fock.operator_matrix(j, "annihilation", M)
            a_k = fock.operator_matrix(k, "annihilation", M)
            ad_k = fock.operator_matrix(k, "creation", M)
            d = float(j == k)
            worst["anticommutators"] = max(worst["anticommutators"],
                                           np.abs(a_j @ ad_k + ad_k @ a_j - d * eye).max(),
                                           np.abs(a_j @ a_k + a_k @ a_j).max())
            sp_j = jw.sigma_component(j, "plus", M)
            sz_j = jw.sigma_component(j, "z", M)
            sp_k = jw.sigma_component(k, "plus", M)
            sm_k = jw.sigma_component(k, "minus", M)
            worst["jw commutators"] = max(worst["jw commutators"],
                                          np.abs(sp_j @ sm_k - sm_k @ sp_j - d * sz_j).max(),
                                          np.abs(sz_j @ sp_k - sp_k @ sz_j - 2 * d * sp_k).max(),
                                          np.abs(sz_j @ sm_k - sm_k @ sz_j + 2 * d * sm_k).max())
        for _ in range(5):
            ops = [jw.sigma_direction((j, random_direction(rng)), M) for j in range(1, M + 1)]
            for op in ops:
                worst["sigma^2"] = max(worst["sigma^2"], np.abs(op @ op - eye).max())
            for a, b in itertools.combinations(ops, 2):
                worst["cross-mode"] = max(worst["cross-mode"], np.abs(a @ b - b @ a).max())
    ok = all(v <= 1e-12 for v in worst.values())
    acceptance(3, "operator algebra for M <= 6", ok,
               ", ".join(f"{k} {v:.1e}" for k, v in worst.items()))
    assert ok


def test_4_nchv_bounds(acceptance):
    cases = [("chsh", None, 2), ("pm", None, 4)] + [("hardy", M, 0) for M in (2, 3, 4, 5)]
    results = []
    for name, M, expected in cases:
        start = time.perf_counter()
        value = I.nchv_bound(name, M)
        results.append((name, M, value, expected, time.perf_counter() - start))
    ok = all(type(v) is int and v == e and t < 1.0 for _, _, v, e, t in results)
    detail = ", ".join(f"{n}{'' if M is None else M}={v}" for n, M, v, _, _ in results)
    acceptance(4, "noncontextual bounds by enumeration", ok,
               f"{detail}; slowest {max(r[4] for r in results):.3f} s")
    assert ok


def test_5_peres_mermin(acceptance):
    rng = _rng(5)
    values = [I.pm_square_value(fock.random_density_state(2, rng)) for _ in range(50)]
    worst = max(abs(v - 6) for v in values)
    margins = [v - I.nchv_bound("pm") for v in values]
    ok = worst < 1e-10 and all(abs(m - 2) < 1e-10 for m in margins)
    acceptance(5, "Peres-Mermin value 6 for every two-mode state", ok,
               f"50 mixed states, max |value - 6| {worst:.1e}")
    assert ok


def test_6_hardy_violations(acceptance):
    config = OptimizerConfig()
    violators = [fock.w_state(3), fock.w_state(4), fock.dicke_state(4, 2)]
    lines, ok = [], True
    for state in violators:
        best = optimize(state, "hardy", config)
        grid = grid_search(state, "hardy", config.grid_resolution)
        margin = best.value - I.nchv_bound("hardy", state.mode_count)
        good = margin > 1e-3 and grid.value > 0 and best.value >= grid.value - 1e-4
        ok &= good
        lines.append(f"{state.label} margin {margin:.4f} grid {grid.value:.4f}")
    single_terms = [
        fock.make_n_fermion_state(2, {(1, 2): 1.0}),
        fock.make_single_fermion_state([0, 1, 0]),
        fock.make_n_fermion_state(4, {(1, 3): 1.0}),
        fock.make_n_fermion_state(5, {(1, 2, 4): 1j}),
    ]
    worst_single = max(optimize(s, "hardy", config).value for s in single_terms)
    ok &= worst_single <= 1e-9
    acceptance(6, "Hardy violations for W and Dicke states", ok,
               "; ".join(lines) + f"; single-term max {worst_single:.1e}")
    assert ok


def test_7_engine_equivalence(acceptance):
    rng = _rng(7)
    worst_eval = 0.0
    for case in range(200):
        M = int(rng.integers(1, 11))
        state = fock.random_state(M, rng, physical=bool(case % 2))
        dirs = [random_direction(rng) for _ in range(M)]
        worst_eval = max(worst_eval, abs(C.expectation_fast(state, dirs)
                                         - C.expectation_dense(state, dirs)))
    worst_elem = 0.0
    for M in range(1, 6):
        dirs = [random_direction(rng) for _ in range(M)]
        full = np.eye(1 << M, dtype=complex)
        for j, d in enumerate(dirs, start=1):
            full = full @ jw.sigma_direction((j, d), M)
        for nu, mu in itertools.product(range(1 << M), repeat=2):
            closed = C.matrix_element_closed_form(fock.index_to_pattern(nu, M),
                                                  fock.index_to_pattern(mu, M), dirs)
            worst_elem = max(worst_elem, abs(closed - full[nu, mu]))
    w20 = fock.w_state(20)
    dirs = [random_direction(rng) for _ in range(20)]
    start = time.perf_counter()
    value = C.expectation_fast(w20, dirs)
    elapsed = time.perf_counter() - start
    ok = worst_eval < 1e-9 and worst_elem <= 1e-12 and elapsed < 1.0 and np.isfinite(value)
    acceptance(7, "closed-form engine equals dense engine", ok,
               f"200 cases max {worst_eval:.1e}, elements M<=5 max {worst_elem:.1e}, "
               f"M=20 W state {elapsed * 1e3:.1f} ms")
    assert ok


def test_8_complementarity(acceptance):
    config = OptimizerConfig()
    grid2 = X.ModeGrid(2)
    chsh = X.position_basis_report(X.definite_momentum_state(1, grid2), grid2, config)
    grid4 = X.ModeGrid(4)
    hardy = X.position_basis_report(X.definite_momentum_state(1, grid4), grid4, config)
    rng = _rng(8)
    worst_trip = 0.0
    for M in range(2, 9):
        grid = X.ModeGrid(M, length=float(rng.uniform(0.5, 2.0)))
        f = rng.normal(size=M) + 1j * rng.normal(size=M)
        f /= np.linalg.norm(f)
        back = X.momentum_to_position(
            X.position_to_momentum(fock.make_single_fermion_state(f), grid), grid)
        worst_trip = max(worst_trip, np.abs(X.single_particle_amplitudes(back) - f).max())
    chsh_err = abs(chsh.quantum_value - 2 * math.sqrt(2))
    ok = chsh_err <= 1e-7 and hardy.margin > 1e-3 and worst_trip <= 1e-12
    acceptance(8, "definite momentum violates in the position basis", ok,
               f"M'=2 CHSH err {chsh_err:.1e}, M'=4 Hardy margin {hardy.margin:.4f}, "
               f"round trip {worst_trip:.1e}")
    assert ok


def _cli(*argv) -> bytes:
    return subprocess.run([sys.executable, "-m", "fermictx", *argv], check=True,
                          capture_output=True).stdout


def test_9_determinism(acceptance):
    commands = [
        ("hardy", "--state", "W", "--modes", "3", "--format", "json"),
        ("chsh", "--g1", "0.6", "--g2", "0.8", "--format", "csv"),
        ("pm", "--format", "json"),
        ("complementarity", "--modes", "4"),
        ("verify", "correlators", "--format", "json"),
    ]
    same = [_cli(*cmd) == _cli(*cmd) for cmd in commands]
    a = optimize(fock.dicke_state(4, 2), "hardy")
    b = optimize(fock.dicke_state(4, 2), "hardy")
    same.append(a.trace_rows() == b.trace_rows() and a.settings == b.settings)
    ok = all(same)
    acceptance(9, "identical seeds give byte-identical reports", ok,
               f"{sum(same)}/{len(same)} outputs identical across two runs")
    assert ok
