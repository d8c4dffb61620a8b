import itertools
import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from fermictx import fock, jw
from fermictx.errors import CapacityError, DomainError

from conftest import kron_annihilation, kron_creation, kron_expectation, random_direction

# textbook Paulis on (empty, occupied); the hatted image uses X, -Y, -Z
X = np.array([[0, 1], [1, 0]], dtype=complex)
Y = np.array([[0, -1j], [1j, 0]])
Z = np.diag([1.0, -1.0]).astype(complex)


def comm(a, b):
    return a @ b - b @ a


class TestComponents:
    def test_single_mode_sigma_z(self):
        np.testing.assert_array_equal(jw.sigma_component(1, "z", 1), np.diag([-1, 1]))

    @pytest.mark.parametrize("M", [1, 2, 3, 4, 5, 6])
    def test_plus_matches_string_times_creation(self, M):
        for j in range(1, M + 1):
            string = np.eye(1 << M, dtype=complex)
            for m in range(1, j):
                string = string @ (np.eye(1 << M) - 2 * kron_creation(m, M) @ kron_annihilation(m, M))
            np.testing.assert_allclose(jw.sigma_component(j, "plus", M),
                                       string @ kron_creation(j, M), atol=1e-14)
            np.testing.assert_allclose(jw.sigma_component(j, "z", M),
                                       2 * kron_creation(j, M) @ kron_annihilation(j, M)
                                       - np.eye(1 << M), atol=1e-14)

    @pytest.mark.parametrize("M", [1, 2, 3, 4, 5, 6])
    def test_commutation_relations(self, M):
        for j, k in itertools.product(range(1, M + 1), repeat=2):
            sp_j = jw.sigma_component(j, "plus", M)
            sm_k = jw.sigma_component(k, "minus", M)
            sp_k = jw.sigma_component(k, "plus", M)
            sz_j = jw.sigma_component(j, "z", M)
            d = float(j == k)
            assert np.abs(comm(sp_j, sm_k) - d * sz_j).max() < 1e-12
            # the factor 2 is the standard su(2) normalization for sigma^z = 2n - 1
            assert np.abs(comm(sz_j, sp_k) - 2 * d * sp_k).max() < 1e-12
            assert np.abs(comm(sz_j, sm_k) + 2 * d * sm_k).max() < 1e-12

    def test_unknown_component(self):
        with pytest.raises(DomainError):
            jw.sigma_component(1, "w", 2)

    def test_capacity(self):
        with fock.dense_cap(4):
            with pytest.raises(CapacityError):
                jw.sigma_component(1, "z", 5)


class TestDirection:
    def test_theta_zero_is_sigma_z(self):
        for j in (1, 2, 3):
            np.testing.assert_array_equal(jw.sigma_direction((j, jw.Direction(0.0)), 3),
                                          jw.sigma_component(j, "z", 3))

    def test_x_type_single_mode(self):
        np.testing.assert_allclose(jw.sigma_direction((1, jw.X_AXIS), 1), X, atol=1e-15)

    def test_axis_components(self):
        M = 3
        for j in range(1, M + 1):
            np.testing.assert_allclose(jw.sigma_direction((j, jw.X_AXIS), M),
                                       jw.sigma_component(j, "x", M), atol=1e-15)
            np.testing.assert_allclose(jw.sigma_direction((j, jw.Y_AXIS), M),
                                       jw.sigma_component(j, "y", M), atol=1e-15)

    @pytest.mark.parametrize("M", [2, 5])
    def test_hermitian_involutory_traceless(self, rng, M):
        eye = np.eye(1 << M)
        for j in range(1, M + 1):
            op = jw.sigma_direction((j, random_direction(rng)), M)
            assert np.abs(op - op.conj().T).max() < 1e-12
            assert np.abs(op @ op - eye).max() < 1e-12
            assert abs(np.trace(op)) < 1e-12

    @pytest.mark.parametrize("M", [2, 3, 4, 5, 6])
    def test_cross_mode_observables_commute(self, rng, M):
        ops = [jw.sigma_direction((j, random_direction(rng)), M) for j in range(1, M + 1)]
        for a, b in itertools.combinations(ops, 2):
            assert np.abs(comm(a, b)).max() < 1e-12

    def test_uncached_path_matches(self, rng):
        # large mode counts bypass the cache; spot-check one against the small-M builder
        d = random_direction(rng)
        big = jw.sigma_direction((2, d), 8)
        assert np.abs(big @ big - np.eye(256)).max() < 1e-12

    def test_from_vector_round_trip(self, rng):
        d = random_direction(rng)
        np.testing.assert_allclose(jw.Direction.from_vector(d.vector).vector, d.vector, atol=1e-14)

    def test_flipped_is_antipodal(self, rng):
        d = random_direction(rng)
        np.testing.assert_allclose(d.flipped().vector, -d.vector, atol=1e-14)


class TestProjectors:
    @pytest.mark.parametrize("outcome", [0, 1])
    def test_idempotent(self, rng, outcome):
        P = jw.eigenprojector((2, random_direction(rng)), outcome, 4)
        assert np.abs(P @ P - P).max() < 1e-12

    def test_complete(self, rng):
        spec = (3, random_direction(rng))
        total = jw.eigenprojector(spec, 0, 4) + jw.eigenprojector(spec, 1, 4)
        assert np.abs(total - np.eye(16)).max() < 1e-12

    def test_outcome_zero_is_eigenvalue_minus_one(self, rng):
        spec = jw.ObservableSpec(2, random_direction(rng))
        sigma = jw.sigma_direction(spec, 3)
        P0 = jw.eigenprojector(spec, 0, 3)
        P1 = jw.eigenprojector(spec, 1, 3)
        assert np.abs(sigma @ P0 + P0).max() < 1e-12
        assert np.abs(sigma @ P1 - P1).max() < 1e-12
        assert jw.outcome_eigenvalue(0) == -1 and jw.outcome_eigenvalue(1) == 1

    def test_bad_outcome(self):
        with pytest.raises(DomainError):
            jw.eigenprojector((1, jw.Z_AXIS), 2, 1)


class TestHatted:
    def test_theta_zero(self):
        np.testing.assert_array_equal(jw.hatted_pauli(jw.Direction(0.0)), np.diag([-1, 1]))

    def test_x_axis(self):
        np.testing.assert_allclose(jw.hatted_pauli(jw.X_AXIS), X, atol=1e-15)

    def test_is_bloch_form_with_flipped_y_and_z(self, rng):
        d = random_direction(rng)
        n = d.vector
        np.testing.assert_allclose(jw.hatted_pauli(d), n[0] * X - n[1] * Y - n[2] * Z, atol=1e-14)

    def test_involutory_traceless(self, rng):
        h = jw.hatted_pauli(random_direction(rng))
        np.testing.assert_allclose(h @ h, np.eye(2), atol=1e-14)
        assert abs(np.trace(h)) < 1e-14


class TestQubitMap:
    def test_single_fermion_is_w_form(self):
        s = fock.make_single_fermion_state([1 / math.sqrt(2), 1 / math.sqrt(2)])
        # kets |mu1 mu2>: |10> is index 2, |01> is index 1
        np.testing.assert_allclose(jw.fock_to_qubit(s), [0, 1 / math.sqrt(2), 1 / math.sqrt(2), 0])

    def test_doubly_occupied(self):
        np.testing.assert_array_equal(jw.fock_to_qubit(fock.unchecked_state(2, {"11": 1})),
                                      [0, 0, 0, 1])

    def test_dicke_form(self):
        c = 1 / math.sqrt(3)
        s = fock.make_n_fermion_state(3, {(1, 2): c, (1, 3): c, (2, 3): c})
        expected = np.zeros(8)
        expected[[0b110, 0b101, 0b011]] = c
        np.testing.assert_allclose(jw.fock_to_qubit(s), expected)

    def test_ket_order_matches_kron(self):
        s = fock.unchecked_state(3, {"100": 1})
        e1, e0 = np.array([0, 1]), np.array([1, 0])
        np.testing.assert_array_equal(jw.fock_to_qubit(s), np.kron(np.kron(e1, e0), e0))

    @settings(max_examples=40, deadline=None)
    @given(M=st.integers(1, 8), seed=st.integers(0, 2**32 - 1))
    def test_norm_preserving_permutation(self, M, seed):
        s = fock.random_state(M, np.random.default_rng(seed), physical=False)
        q = jw.fock_to_qubit(s)
        assert np.linalg.norm(q) == pytest.approx(s.norm, abs=1e-13)
        assert sorted(np.abs(q)) == pytest.approx(sorted(np.abs(s.to_vector())))


class TestCorrespondence:
    def test_occupied_single_mode(self):
        res = jw.correspondence_check(fock.unchecked_state(1, {"1": 1}), [jw.Direction(0.0)])
        assert res.lhs == pytest.approx(1.0) and res.rhs == pytest.approx(1.0)

    def test_w_state_zz(self):
        s = fock.w_state(2)
        res = jw.correspondence_check(s, [jw.Z_AXIS, jw.Z_AXIS])
        assert res.lhs == pytest.approx(-1.0, abs=1e-12)
        assert res.abs_diff < 1e-12

    def test_rhs_agrees_with_independent_kron(self, rng):
        s = fock.random_state(3, rng, physical=False)
        dirs = [random_direction(rng) for _ in range(3)]
        n = [d.vector for d in dirs]
        mats = [v[0] * X - v[1] * Y - v[2] * Z for v in n]
        assert jw.correspondence_check(s, dirs).rhs == pytest.approx(
            kron_expectation(jw.fock_to_qubit(s), mats).real, abs=1e-12)

    @settings(max_examples=80, deadline=None)
    @given(M=st.integers(1, 6), seed=st.integers(0, 2**32 - 1))
    def test_random_partial_strings(self, M, seed):
        rng = np.random.default_rng(seed)
        s = fock.random_state(M, rng, physical=False)
        dirs = [random_direction(rng) if rng.random() < 0.6 else None for _ in range(M)]
        assert jw.correspondence_check(s, dirs).abs_diff < 1e-10

    def test_wrong_length(self):
        with pytest.raises(DomainError):
            jw.correspondence_check(fock.w_state(3), [jw.Z_AXIS])


def test_context_partial():
    ctx = jw.MeasurementContext.partial(3, {2: jw.X_AXIS})
    assert ctx.entries == (None, jw.X_AXIS, None)
    assert not ctx.is_full
    assert [s.mode for s in ctx.specs()] == [2]
    with pytest.raises(DomainError):
        jw.MeasurementContext.partial(3, {4: jw.X_AXIS})
