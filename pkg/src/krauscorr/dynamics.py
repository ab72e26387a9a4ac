"""Exact reduced dynamics of subsystem A and its Kraus + inhomogeneous split."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .composite import (
    BipartiteState,
    CorrelationOperator,
    correlation_operator,
    decompose_hamiltonian,
)
from .linalg import (
    TOL_RECON,
    as_square,
    check_density,
    check_hermitian,
    dagger,
    eig_hermitian,
    frobenius,
    partial_trace_b,
    unitary_exp,
)


def _joint_unitary(h, dim: int, t: float) -> np.ndarray:
    h = check_hermitian(h, "Hamiltonian")
    if h.shape[0] != dim:
        raise ValueError(f"Hamiltonian of side {h.shape[0]} does not act on dimension {dim}")
    return unitary_exp(h, t)


def evolve(h, s: BipartiteState, t: float) -> BipartiteState:
    """Joint state ``U(t) rho U(t)^dag`` with ``U(t) = exp(-i h t)``."""
    u = _joint_unitary(h, s.rho.shape[0], t)
    if t == 0:
        return s
    rho = u @ s.rho @ dagger(u)
    return BipartiteState(s.dim_a, s.dim_b, 0.5 * (rho + dagger(rho)))


def reduced_state(h, s: BipartiteState, t: float) -> np.ndarray:
    return evolve(h, s, t).rho_a


@dataclass(frozen=True)
class KrausSet:
    """Kraus operators ``M[mu, nu] = sqrt(p_nu) <mu| U |nu>`` acting on A.

    The B-side index basis ``|mu>`` is taken equal to the eigenbasis ``|nu>``
    of the initial environment state. Operators with ``p_nu = 0`` are kept
    (they are zero).
    """

    dim_a: int
    operators: np.ndarray  # shape (M, M, N, N), indexed [mu, nu]
    env_eigenvalues: np.ndarray
    env_eigenvectors: np.ndarray

    def flat(self) -> np.ndarray:
        return self.operators.reshape(-1, self.dim_a, self.dim_a)

    def completeness(self) -> np.ndarray:
        ops = self.flat()
        return np.einsum("kba,kbc->ac", np.conj(ops), ops)

    def completeness_residual(self) -> float:
        return frobenius(self.completeness() - np.eye(self.dim_a))


def kraus_operators(h, rho_b0, t: float, dim_a: int | None = None) -> KrausSet:
    rho_b0 = check_density(rho_b0, "rho_B(0)")
    dim_b = rho_b0.shape[0]
    h = check_hermitian(h, "Hamiltonian")
    if dim_a is None:
        dim_a, rem = divmod(h.shape[0], dim_b)
        if rem:
            raise ValueError(f"Hamiltonian of side {h.shape[0]} has no factor of size {dim_b}")
    u = _joint_unitary(h, dim_a * dim_b, t)
    p, vecs = eig_hermitian(rho_b0)
    p = np.clip(p, 0.0, None)
    # rotate the B factor into the eigenbasis: <mu| U |nu> blocks
    big = np.kron(np.eye(dim_a), vecs)
    ub = (dagger(big) @ u @ big).reshape(dim_a, dim_b, dim_a, dim_b)
    ops = np.einsum("amcn->mnac", ub) * np.sqrt(p)[None, :, None, None]
    return KrausSet(dim_a, ops, p, vecs)


def apply_kraus(k: KrausSet, rho_a0) -> np.ndarray:
    rho = as_square(rho_a0, "rho_A")
    if rho.shape[0] != k.dim_a:
        raise ValueError(f"state of side {rho.shape[0]} does not match Kraus operators on {k.dim_a}")
    ops = k.flat()
    return np.einsum("kab,bc,kdc->ad", ops, rho, np.conj(ops))


def inhomogeneous_part(h, cor0: CorrelationOperator, t: float) -> np.ndarray:
    """``tr_B(U(t) rho_COR U(t)^dag)``, the correction to the Kraus map."""
    u = _joint_unitary(h, cor0.matrix.shape[0], t)
    return partial_trace_b(u @ cor0.matrix @ dagger(u), cor0.dim_a, cor0.dim_b)


@dataclass(frozen=True)
class ReducedMapSplit:
    time: float
    reduced: np.ndarray
    homogeneous: np.ndarray
    inhomogeneous: np.ndarray
    kraus: KrausSet

    @property
    def residual(self) -> float:
        return frobenius(self.reduced - self.homogeneous - self.inhomogeneous)


def split_reduced_map(h, s0: BipartiteState, t: float, tol: float = TOL_RECON) -> ReducedMapSplit:
    """Compute ``rho_A(t)`` three independent ways and check they add up.

    ``reduced`` comes from evolving the joint state, ``homogeneous`` from the
    Kraus operators applied to ``rho_A(0)``, ``inhomogeneous`` from evolving
    the correlation operator alone.
    """
    reduced = reduced_state(h, s0, t)
    kraus = kraus_operators(h, s0.rho_b, t, dim_a=s0.dim_a)
    homogeneous = apply_kraus(kraus, s0.rho_a)
    inhomogeneous = inhomogeneous_part(h, correlation_operator(s0), t)
    split = ReducedMapSplit(t, reduced, homogeneous, inhomogeneous, kraus)
    if split.residual > tol:
        raise ArithmeticError(
            f"reduced state differs from Kraus + inhomogeneous part by {split.residual:.3e} at t={t}"
        )
    return split


def is_local_unitary(h, dim_a: int, dim_b: int, tol: float = 1e-10) -> bool:
    """True when the interaction part of ``h`` vanishes, so that
    ``exp(-i h t)`` factorises as ``U_A(t) (x) U_B(t)`` for all ``t``."""
    return frobenius(decompose_hamiltonian(h, dim_a, dim_b).v_coeffs) < tol
