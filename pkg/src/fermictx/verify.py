"""Invariant suites behind ``fermictx verify``.

Each check returns a :class:`Check` with the largest error seen and the
threshold it must stay under. Sample sizes here are smaller than in the test
suite so a full run finishes in seconds.
"""
from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from typing import Callable

import numpy as np

from . import correlators, fock, inequalities, jw

SCOPES = ("fock", "jw", "correlators", "inequalities")


@dataclass(frozen=True)
class Check:
    suite: str
    name: str
    max_error: float
    threshold: float

    @property
    def passed(self) -> bool:
        return bool(self.max_error < self.threshold)


def _anticomm(a, b):
    return a @ b + b @ a


def _comm(a, b):
    return a @ b - b @ a


def _random_direction(rng) -> jw.Direction:
    return jw.Direction(float(rng.uniform(0, np.pi)), float(rng.uniform(-np.pi, np.pi)))


def fock_suite(rng: np.random.Generator) -> list:
    err_ac = err_aa = err_sq = err_adj = err_n = 0.0
    for M in range(1, 7):
        eye = np.eye(1 << M)
        for j, k in itertools.product(range(1, M + 1), repeat=2):
            a_j = fock.operator_matrix(j, "annihilation", M)
            a_k = fock.operator_matrix(k, "annihilation", M)
            ad_k = fock.operator_matrix(k, "creation", M)
            err_ac = max(err_ac, np.abs(_anticomm(a_j, ad_k) - (j == k) * eye).max())
            err_aa = max(err_aa, np.abs(_anticomm(a_j, a_k)).max())
        for j in range(1, M + 1):
            phi, psi = (fock.random_state(M, rng, physical=False) for _ in range(2))
            lhs = phi.inner(fock.apply_annihilation(psi, j))
            rhs = fock.apply_creation(phi, j).inner(psi)
            err_adj = max(err_adj, abs(lhs - rhs))
            twice = fock.apply_creation(fock.apply_creation(psi, j), j)
            err_sq = max(err_sq, twice.norm)
        for N in range(M + 1):
            st = fock.dicke_state(M, N)
            err_n = max(err_n, abs(st.number_expectation() - N))
    return [
        Check("fock", "{a_j, a_k^dag} = delta_jk (M<=6)", err_ac, 1e-12),
        Check("fock", "{a_j, a_k} = 0 (M<=6)", err_aa, 1e-12),
        Check("fock", "(a_j^dag)^2 = 0", err_sq, 1e-12),
        Check("fock", "<phi|a psi> = <a^dag phi|psi>", err_adj, 1e-12),
        Check("fock", "<N> = N for N-fermion states", err_n, 1e-12),
    ]


def jw_suite(rng: np.random.Generator, cases_per_m: int = 20) -> list:
    err_pm = err_zpm = err_herm = err_inv = err_cross = 0.0
    for M in range(1, 7):
        for j, k in itertools.product(range(1, M + 1), repeat=2):
            sp = jw.sigma_component(j, "plus", M)
            sm_k = jw.sigma_component(k, "minus", M)
            sz = jw.sigma_component(j, "z", M)
            sp_k = jw.sigma_component(k, "plus", M)
            err_pm = max(err_pm, np.abs(_comm(sp, sm_k) - (j == k) * sz).max())
            err_zpm = max(err_zpm, np.abs(_comm(sz, sp_k) - 2 * (j == k) * sp_k).max(),
                          np.abs(_comm(sz, sm_k) + 2 * (j == k) * sm_k).max())
        specs = [(j, _random_direction(rng)) for j in range(1, M + 1)]
        ops = [jw.sigma_direction(s, M) for s in specs]
        eye = np.eye(1 << M)
        for op in ops:
            err_herm = max(err_herm, np.abs(op - op.conj().T).max(), abs(np.trace(op)))
            err_inv = max(err_inv, np.abs(op @ op - eye).max())
        for a, b in itertools.combinations(ops, 2):
            err_cross = max(err_cross, np.abs(_comm(a, b)).max())
    err_corr = 0.0
    for M in range(1, 9):
        for _ in range(cases_per_m):
            st = fock.random_state(M, rng, physical=False)
            dirs = [_random_direction(rng) for _ in range(M)]
            err_corr = max(err_corr, jw.correspondence_check(st, dirs).abs_diff)
    return [
        Check("jw", "[s+_j, s-_k] = delta s^z_j (M<=6)", err_pm, 1e-12),
        Check("jw", "[s^z_j, s+-_k] = +-2 delta s+-_j (M<=6)", err_zpm, 1e-12),
        Check("jw", "sigma.n Hermitian and traceless", err_herm, 1e-12),
        Check("jw", "(sigma.n)^2 = 1", err_inv, 1e-12),
        Check("jw", "cross-mode observables commute", err_cross, 1e-12),
        Check("jw", "Fock correlator = multiqubit image (M<=8)", err_corr, 1e-10),
    ]


def correlators_suite(rng: np.random.Generator, cases: int = 60) -> list:
    err_elem = 0.0
    for M in range(1, 5):
        dirs = [_random_direction(rng) for _ in range(M)]
        ops = [jw.sigma_direction((j + 1, d), M) for j, d in enumerate(dirs)]
        full = np.linalg.multi_dot(ops) if M > 1 else ops[0]
        for nu, mu in itertools.product(range(1 << M), repeat=2):
            closed = correlators.matrix_element_closed_form(
                fock.index_to_pattern(nu, M), fock.index_to_pattern(mu, M), dirs)
            err_elem = max(err_elem, abs(closed - full[nu, mu]))
    err_fast = 0.0
    for _ in range(cases):
        M = int(rng.integers(1, 9))
        st = fock.random_state(M, rng, physical=bool(rng.integers(2)))
        ctx = jw.MeasurementContext(tuple(_random_direction(rng) for _ in range(M)))
        err_fast = max(err_fast, abs(correlators.expectation_fast(st, ctx)
                                     - correlators.expectation_dense(st, ctx)))
    err_prob = 0.0
    for M in (1, 2, 3):
        st = fock.random_state(M, rng)
        dirs = [_random_direction(rng) for _ in range(M)]
        probs = [correlators.joint_probability(st, list(zip(dirs, out)))
                 for out in itertools.product((0, 1), repeat=M)]
        err_prob = max(err_prob, abs(sum(probs) - 1), -min(probs))
    return [
        Check("correlators", "closed-form element = dense element (M<=4, exhaustive)", err_elem, 1e-12),
        Check("correlators", "closed-form engine = dense engine (M<=8)", err_fast, 1e-9),
        Check("correlators", "joint probabilities normalized and nonnegative", err_prob, 1e-12),
    ]


def inequalities_suite(rng: np.random.Generator) -> list:
    bounds = [("chsh", None, 2), ("pm", None, 4)] + [("hardy", M, 0) for M in range(2, 6)]
    err_bound = max(abs(inequalities.nchv_bound(n, M) - b) for n, M, b in bounds)
    err_pm = 0.0
    for _ in range(10):
        rho = fock.random_density_state(2, rng)
        err_pm = max(err_pm, abs(inequalities.pm_square_value(rho) - 6))
    err_eq14 = 0.0
    for g1sq in np.linspace(0, 1, 21):
        g1, g2 = math.sqrt(g1sq), math.sqrt(1 - g1sq)
        settings, predicted = inequalities.chsh_analytic_optimum(g1, g2)
        st = fock.make_single_fermion_state([g1, g2])
        err_eq14 = max(err_eq14, abs(inequalities.chsh_value(st, settings) - predicted))
    excess = 0.0
    for _ in range(200):
        st = fock.random_state(2, rng)
        v = inequalities.chsh_value(st, inequalities.Settings.random(2, rng))
        excess = max(excess, abs(v) - inequalities.TSIRELSON)
    return [
        Check("inequalities", "NCHV bounds exactly 2 (CHSH), 4 (PM), 0 (Hardy M=2..5)", err_bound, 0.5),
        Check("inequalities", "Peres-Mermin value = 6 for random mixed states", err_pm, 1e-10),
        Check("inequalities", "CHSH at analytic settings = 2 sqrt(1 + 4 g1^2 g2^2)", err_eq14, 1e-9),
        Check("inequalities", "|CHSH| - 2 sqrt 2 (random settings)", max(excess, 0.0), 1e-9),
    ]


SUITES: dict = {
    "fock": fock_suite,
    "jw": jw_suite,
    "correlators": correlators_suite,
    "inequalities": inequalities_suite,
}


def run(scope: str = "all", seed: int = 42) -> list:
    """Run the selected suites with one RNG stream per suite."""
    names = SCOPES if scope == "all" else (scope,)
    if any(n not in SUITES for n in names):
        raise ValueError(f"unknown verify scope {scope!r}")
    checks = []
    for name in names:
        suite: Callable = SUITES[name]
        checks.extend(suite(np.random.default_rng([seed, SCOPES.index(name)])))
    return checks
