import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy.linalg import expm

from helpers import random_density, random_hermitian, random_local_hamiltonian
from krauscorr.compat import CnotCorrelation, cnot_hamiltonian, cnot_closed_form_operator
from krauscorr.composite import (
    BipartiteState,
    CorrelationOperator,
    correlation_operator,
    make_probe_state,
    maximally_mixed,
)
from krauscorr.dynamics import (
    apply_kraus,
    evolve,
    inhomogeneous_part,
    is_local_unitary,
    kraus_operators,
    split_reduced_map,
)
from krauscorr.linalg import partial_trace_a, partial_trace_b
from krauscorr.su_basis import generators


def bell():
    psi = np.array([1, 0, 0, 1]) / np.sqrt(2)
    return BipartiteState(2, 2, np.outer(psi, psi))


class TestEvolve:
    def test_zero_time(self, rng):
        s = BipartiteState(2, 3, random_density(rng, 6))
        np.testing.assert_array_equal(evolve(random_hermitian(rng, 6), s, 0.0).rho, s.rho)

    def test_cnot_flips_a_when_b_is_one(self):
        one = np.diag([0.0, 1.0])
        s = BipartiteState(2, 2, np.kron(one, one))
        out = evolve(cnot_hamiltonian(), s, np.pi / 2)
        # brute force with scipy
        u = expm(-1j * np.pi / 2 * cnot_hamiltonian())
        np.testing.assert_allclose(out.rho, u @ s.rho @ u.conj().T, atol=1e-12)
        np.testing.assert_allclose(out.rho_a, np.diag([1.0, 0.0]), atol=1e-12)
        np.testing.assert_allclose(out.rho_b, one, atol=1e-12)

    def test_spectrum_invariant(self, rng):
        s = BipartiteState(3, 2, random_density(rng, 6))
        out = evolve(random_hermitian(rng, 6), s, 1.7)
        np.testing.assert_allclose(np.linalg.eigvalsh(out.rho), np.linalg.eigvalsh(s.rho), atol=1e-12)

    def test_dimension_mismatch(self, rng):
        s = BipartiteState(2, 2, random_density(rng, 4))
        with pytest.raises(ValueError):
            evolve(np.eye(6), s, 1.0)


class TestKraus:
    def test_identity_at_t0(self, rng):
        rb = random_density(rng, 3)
        k = kraus_operators(random_hermitian(rng, 6), rb, 0.0)
        p = k.env_eigenvalues
        for mu in range(3):
            for nu in range(3):
                np.testing.assert_allclose(k.operators[mu, nu], np.sqrt(p[nu]) * (mu == nu) * np.eye(2), atol=1e-14)
        ra = random_density(rng, 2)
        np.testing.assert_allclose(apply_kraus(k, ra), ra, atol=1e-14)

    def test_local_hamiltonian_is_local_conjugation(self, rng):
        ha, hb = random_hermitian(rng, 2), random_hermitian(rng, 3)
        h = np.kron(ha, np.eye(3)) + np.kron(np.eye(2), hb)
        ra, rb = random_density(rng, 2), random_density(rng, 3)
        t = 0.9
        ua = expm(-1j * t * ha)
        out = apply_kraus(kraus_operators(h, rb, t), ra)
        np.testing.assert_allclose(out, ua @ ra @ ua.conj().T, atol=1e-12)

    def test_cnot_completeness(self):
        k = kraus_operators(cnot_hamiltonian(), maximally_mixed(2), np.pi / 2)
        assert k.completeness_residual() < 1e-12

    def test_matrix_element_definition(self, rng):
        # M_{mu nu} = sqrt(p_nu) (I (x) <mu|) U (I (x) |nu>) checked by explicit slicing
        h = random_hermitian(rng, 6)
        rb = random_density(rng, 3)
        t = 0.4
        k = kraus_operators(h, rb, t)
        u = expm(-1j * t * h)
        vecs = k.env_eigenvectors
        for mu in range(3):
            bra = np.kron(np.eye(2), vecs[:, mu].conj()[None, :])
            for nu in range(3):
                ket = np.kron(np.eye(2), vecs[:, nu][:, None])
                expected = np.sqrt(k.env_eigenvalues[nu]) * bra @ u @ ket
                np.testing.assert_allclose(k.operators[mu, nu], expected, atol=1e-12)

    def test_zero_eigenvalues_kept(self, rng):
        rb = np.diag([1.0, 0.0, 0.0])
        k = kraus_operators(random_hermitian(rng, 6), rb, 1.0)
        assert k.operators.shape == (3, 3, 2, 2)
        assert k.completeness_residual() < 1e-12

    def test_invalid_environment_state(self, rng):
        with pytest.raises(ValueError):
            kraus_operators(random_hermitian(rng, 4), np.eye(2), 1.0)

    @pytest.mark.parametrize("na,nb", [(2, 2), (3, 2), (2, 3)])
    def test_factorable_kraus_equals_exact(self, rng, na, nb):
        h = random_hermitian(rng, na * nb)
        ra, rb = random_density(rng, na), random_density(rng, nb)
        s = BipartiteState(na, nb, np.kron(ra, rb))
        for t in rng.uniform(0, 5, size=5):
            exact = partial_trace_b(expm(-1j * t * h) @ s.rho @ expm(1j * t * h), na, nb)
            out = apply_kraus(kraus_operators(h, rb, t), ra)
            np.testing.assert_allclose(out, exact, atol=1e-11)
            assert np.trace(out).real == pytest.approx(1, abs=1e-10)
            assert np.linalg.eigvalsh(out)[0] > -1e-9

    def test_apply_dimension_mismatch(self, rng):
        k = kraus_operators(random_hermitian(rng, 4), maximally_mixed(2), 1.0)
        with pytest.raises(ValueError):
            apply_kraus(k, maximally_mixed(3))


class TestInhomogeneousPart:
    def test_zero_correlation(self, rng):
        cor = CorrelationOperator.zero(2, 3)
        for t in (0.0, 1.0, 3.0):
            np.testing.assert_array_equal(inhomogeneous_part(random_hermitian(rng, 6), cor, t), 0)

    def test_local_dynamics_vanishes(self, rng):
        cor = correlation_operator(BipartiteState(3, 2, random_density(rng, 6)))
        h = random_local_hamiltonian(rng, 3, 2)
        for t in rng.uniform(-5, 5, size=10):
            assert np.linalg.norm(inhomogeneous_part(h, cor, t)) < 1e-10

    def test_cnot_closed_form(self, rng):
        gamma = np.zeros((3, 3))
        gamma[1, 2], gamma[2, 2] = 0.13, -0.07
        cg = CnotCorrelation(gamma)
        for t in rng.uniform(0, 2 * np.pi, size=10):
            d = inhomogeneous_part(cnot_hamiltonian(), cg.operator(), t)
            assert np.linalg.norm(d - cnot_closed_form_operator(cg, t)) < 1e-9

    @settings(max_examples=30, deadline=None)
    @given(seed=st.integers(0, 2**32 - 1), t=st.floats(-6, 6))
    def test_hermitian_and_traceless(self, seed, t):
        rng = np.random.default_rng(seed)
        cor = correlation_operator(BipartiteState(2, 3, random_density(rng, 6)))
        d = inhomogeneous_part(random_hermitian(rng, 6), cor, t)
        assert np.linalg.norm(d - d.conj().T) < 1e-10
        assert abs(np.trace(d)) < 1e-10


class TestSplit:
    def test_factorable(self, rng):
        s = BipartiteState(2, 2, np.kron(random_density(rng, 2), random_density(rng, 2)))
        sp = split_reduced_map(random_hermitian(rng, 4), s, 1.3)
        assert np.linalg.norm(sp.inhomogeneous) < 1e-10
        np.testing.assert_allclose(sp.reduced, sp.homogeneous, atol=1e-10)

    def test_bell_under_cnot(self):
        sp = split_reduced_map(cnot_hamiltonian(), bell(), 1.0)
        assert sp.residual < 1e-10
        assert sp.kraus.completeness_residual() < 1e-12

    def test_probe_state_has_inhomogeneity(self):
        s = make_probe_state(2, 3, maximally_mixed(2), maximally_mixed(2), eps=0.1)
        sp = split_reduced_map(cnot_hamiltonian(), s, 1.0)
        expected = 0.2 * (np.sin(1) ** 2 * generators(2)[1] - np.sin(1) * np.cos(1) * generators(2)[2])
        np.testing.assert_allclose(sp.inhomogeneous, expected, atol=1e-12)
        assert np.linalg.norm(sp.inhomogeneous) > 0.1

    @settings(max_examples=30, deadline=None)
    @given(seed=st.integers(0, 2**32 - 1), na=st.integers(2, 3), nb=st.integers(2, 3), t=st.floats(-5, 5))
    def test_split_identity(self, seed, na, nb, t):
        rng = np.random.default_rng(seed)
        s = BipartiteState(na, nb, random_density(rng, na * nb))
        sp = split_reduced_map(random_hermitian(rng, na * nb), s, t)
        assert sp.residual < 1e-10
        assert sp.kraus.completeness_residual() < 1e-12
        # homogeneous part alone is a valid state; so is the full reduced state
        for m in (sp.homogeneous, sp.reduced):
            assert np.trace(m).real == pytest.approx(1, abs=1e-10)
            assert np.linalg.eigvalsh(m)[0] > -1e-9

    def test_reduced_matches_brute_force(self, rng):
        s = BipartiteState(3, 2, random_density(rng, 6))
        h = random_hermitian(rng, 6)
        u = expm(-2.1j * h)
        sp = split_reduced_map(h, s, 2.1)
        np.testing.assert_allclose(sp.reduced, partial_trace_b(u @ s.rho @ u.conj().T, 3, 2), atol=1e-12)
        np.testing.assert_allclose(partial_trace_a(s.rho, 3, 2), s.rho_b)


class TestIsLocalUnitary:
    def test_local(self, paulis):
        x, _, z = paulis
        assert is_local_unitary(np.kron(z, np.eye(2)) + np.kron(np.eye(2), x), 2, 2)

    def test_cnot(self):
        assert not is_local_unitary(cnot_hamiltonian(), 2, 2)

    def test_below_tolerance(self, paulis):
        x = paulis[0]
        h = np.kron(paulis[2], np.eye(2)) + 1e-14 * np.kron(x, x)
        assert is_local_unitary(h, 2, 2, tol=1e-10)

    def test_factorises_at_all_times(self, rng):
        h = random_local_hamiltonian(rng, 2, 3)
        assert is_local_unitary(h, 2, 3)
        u = expm(-0.8j * h)
        # operator-Schmidt rank 1: realignment has a single nonzero singular value
        realigned = u.reshape(2, 3, 2, 3).transpose(0, 2, 1, 3).reshape(4, 9)
        sv = np.linalg.svd(realigned, compute_uv=False)
        assert np.sum(sv > 1e-10) == 1
