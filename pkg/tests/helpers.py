"""Random instance generators shared by the test modules."""

import numpy as np

from krauscorr.su_basis import coupled_operator, generators

SEED = 20240613


def random_hermitian(rng, n, scale=1.0):
    a = rng.normal(size=(n, n)) + 1j * rng.normal(size=(n, n))
    return scale * 0.5 * (a + a.conj().T)


def random_density(rng, n, rank=None):
    rank = rank or n
    g = rng.normal(size=(n, rank)) + 1j * rng.normal(size=(n, rank))
    rho = g @ g.conj().T
    return rho / np.trace(rho).real


def random_local_hamiltonian(rng, na, nb):
    return np.kron(random_hermitian(rng, na), np.eye(nb)) + np.kron(
        np.eye(na), random_hermitian(rng, nb)
    ) + rng.normal() * np.eye(na * nb)


def random_interaction_coeffs(rng, na, nb, kind=None):
    """Interaction coefficient matrices with a mix of sparsity patterns so
    that both passing and failing probes occur."""
    shape = (na * na - 1, nb * nb - 1)
    kind = kind or rng.choice(["dense", "single", "columns", "diagonal"])
    if kind == "dense":
        return rng.normal(size=shape)
    v = np.zeros(shape)
    if kind == "single":
        v[rng.integers(shape[0]), rng.integers(shape[1])] = rng.normal() + np.sign(rng.normal())
    elif kind == "columns":
        cols = rng.random(shape[1]) < 0.4
        v[:, cols] = rng.normal(size=(shape[0], cols.sum()))
    else:
        # only diagonal generators of A; these commute among themselves
        v[-(na - 1):, :] = rng.normal(size=(na - 1, shape[1]))
        v[:, rng.random(shape[1]) < 0.5] = 0.0
    return v


def interaction_from_coeffs(v, na, nb):
    return coupled_operator(v, generators(na), generators(nb))


ACCEPTANCE_LINES: list[str] = []
