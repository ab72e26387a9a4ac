"""Bipartite states, correlation operators and the local/interaction split of
a joint Hamiltonian."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .linalg import (
    TOL_PSD,
    TOL_RECON,
    check_density,
    check_hermitian,
    frobenius,
    partial_trace_a,
    partial_trace_b,
    svd_real,
    tensor_product,
)
from .su_basis import (
    GeneratorBasis,
    coupled_operator,
    expand_bipartite,
    generators,
    real_part,
)


@dataclass(frozen=True)
class BipartiteState:
    dim_a: int
    dim_b: int
    rho: np.ndarray

    def __post_init__(self):
        rho = check_density(self.rho, "bipartite state")
        if rho.shape[0] != self.dim_a * self.dim_b:
            raise ValueError(
                f"state of side {rho.shape[0]} does not match {self.dim_a} x {self.dim_b}"
            )
        object.__setattr__(self, "rho", rho)

    @property
    def rho_a(self) -> np.ndarray:
        return partial_trace_b(self.rho, self.dim_a, self.dim_b)

    @property
    def rho_b(self) -> np.ndarray:
        return partial_trace_a(self.rho, self.dim_a, self.dim_b)


@dataclass(frozen=True)
class CorrelationOperator:
    """Hermitian operator with vanishing partial traces on both factors."""

    dim_a: int
    dim_b: int
    matrix: np.ndarray

    def __post_init__(self):
        m = check_hermitian(self.matrix, "correlation operator")
        if m.shape[0] != self.dim_a * self.dim_b:
            raise ValueError(
                f"correlation of side {m.shape[0]} does not match {self.dim_a} x {self.dim_b}"
            )
        scale = max(1.0, frobenius(m))
        for name, red in (
            ("tr_B", partial_trace_b(m, self.dim_a, self.dim_b)),
            ("tr_A", partial_trace_a(m, self.dim_a, self.dim_b)),
        ):
            if frobenius(red) > TOL_RECON * scale:
                raise ValueError(f"{name} of a correlation operator must vanish")
        object.__setattr__(self, "matrix", m)

    @classmethod
    def zero(cls, dim_a: int, dim_b: int) -> "CorrelationOperator":
        n = dim_a * dim_b
        return cls(dim_a, dim_b, np.zeros((n, n), dtype=complex))

    def norm(self) -> float:
        return frobenius(self.matrix)


def correlation_operator(s: BipartiteState) -> CorrelationOperator:
    """``rho_AB - rho_A (x) rho_B``."""
    m = s.rho - tensor_product(s.rho_a, s.rho_b)
    return CorrelationOperator(s.dim_a, s.dim_b, m)


def is_factorable(s: BipartiteState, tol: float = TOL_RECON) -> bool:
    return correlation_operator(s).norm() < tol


@dataclass(frozen=True)
class HamiltonianDecomposition:
    """``H = scalar I + h_a (x) I + I (x) h_b + v`` with traceless local parts
    and ``v = sum_ij v_coeffs[i, j] sigma_i (x) tau_j``."""

    dim_a: int
    dim_b: int
    scalar: float
    h_a: np.ndarray
    h_b: np.ndarray
    v: np.ndarray
    v_coeffs: np.ndarray

    def reassemble(self) -> np.ndarray:
        n = self.dim_a * self.dim_b
        return (
            self.scalar * np.eye(n)
            + tensor_product(self.h_a, np.eye(self.dim_b))
            + tensor_product(np.eye(self.dim_a), self.h_b)
            + self.v
        )


def decompose_hamiltonian(h, dim_a: int, dim_b: int) -> HamiltonianDecomposition:
    h = check_hermitian(h, "Hamiltonian")
    if h.shape[0] != dim_a * dim_b:
        raise ValueError(f"Hamiltonian of side {h.shape[0]} does not match {dim_a} x {dim_b}")
    basis_a, basis_b = generators(dim_a), generators(dim_b)
    ex = expand_bipartite(h, basis_a, basis_b)
    a = real_part(ex.a, "local A coefficients")
    b = real_part(ex.b, "local B coefficients")
    c = real_part(ex.c, "interaction coefficients")
    return HamiltonianDecomposition(
        dim_a=dim_a,
        dim_b=dim_b,
        scalar=float(ex.c00.real),
        h_a=np.einsum("i,iab->ab", a, basis_a.generators).astype(complex),
        h_b=np.einsum("j,jab->ab", b, basis_b.generators).astype(complex),
        v=coupled_operator(c, basis_a, basis_b),
        v_coeffs=c,
    )


@dataclass(frozen=True)
class CanonicalInteraction:
    """Interaction in SVD-aligned generator bases.

    ``values`` has ``L**2 - 1`` entries with ``L = min(N, M)``; the rotated
    bases are complete (``N**2 - 1`` and ``M**2 - 1`` generators) so that
    every probe direction can be formed from them.
    """

    l: int
    values: np.ndarray
    basis_a: GeneratorBasis
    basis_b: GeneratorBasis
    left: np.ndarray
    right: np.ndarray

    def operator(self) -> np.ndarray:
        return coupled_operator(self.coeffs(), self.basis_a, self.basis_b)

    def coeffs(self) -> np.ndarray:
        """Diagonal coefficient matrix of the interaction in the rotated bases."""
        c = np.zeros((len(self.basis_a), len(self.basis_b)))
        k = len(self.values)
        c[np.arange(k), np.arange(k)] = self.values
        return c


def canonical_interaction(
    d: HamiltonianDecomposition,
    basis_a: GeneratorBasis | None = None,
    basis_b: GeneratorBasis | None = None,
) -> CanonicalInteraction:
    """Diagonalise the interaction coefficients, ``v = U diag(s) W^T``.

    The rotated generators ``s'_k = sum_i U_ik s_i`` and ``t'_k = sum_j W_jk t_j``
    are again orthonormal because ``U`` and ``W`` are orthogonal.
    """
    basis_a = basis_a or generators(d.dim_a)
    basis_b = basis_b or generators(d.dim_b)
    u, s, w = svd_real(d.v_coeffs)
    return CanonicalInteraction(
        l=min(d.dim_a, d.dim_b),
        values=s,
        basis_a=basis_a.rotated(u),
        basis_b=basis_b.rotated(w),
        left=u,
        right=w,
    )


def make_probe_correlation(
    l: int, m: int, basis_a: GeneratorBasis, basis_b: GeneratorBasis
) -> CorrelationOperator:
    """Correlation direction ``sigma_l (x) tau_m`` (1-based labels)."""
    if not 1 <= l <= len(basis_a):
        raise ValueError(f"probe index l={l} outside 1..{len(basis_a)}")
    if not 1 <= m <= len(basis_b):
        raise ValueError(f"probe index m={m} outside 1..{len(basis_b)}")
    return CorrelationOperator(
        basis_a.n, basis_b.n, tensor_product(basis_a[l - 1], basis_b[m - 1])
    )


def auto_epsilon(rho_a, rho_b, direction) -> float:
    """``lambda_min(rho_a (x) rho_b) / (2 ||direction||_2)``, a sufficient
    strength for ``rho_a (x) rho_b + eps * direction`` to stay positive."""
    direction = np.asarray(getattr(direction, "matrix", direction), dtype=complex)
    lam_min = np.linalg.eigvalsh(tensor_product(rho_a, rho_b))[0]
    return 0.5 * max(0.0, lam_min) / (np.linalg.norm(direction, 2) + TOL_PSD)


def make_correlated_state(rho_a, rho_b, direction, eps: float | str = "auto") -> BipartiteState:
    """``rho_a (x) rho_b + eps * direction`` for a correlation direction.

    With ``eps="auto"`` the strength is half the largest value that the
    spectral-norm bound certifies as positive.
    """
    rho_a = check_density(rho_a, "rho_A")
    rho_b = check_density(rho_b, "rho_B")
    direction = np.asarray(getattr(direction, "matrix", direction), dtype=complex)
    # validates the vanishing partial traces
    CorrelationOperator(rho_a.shape[0], rho_b.shape[0], direction)
    product = tensor_product(rho_a, rho_b)
    if isinstance(eps, str):
        if eps != "auto":
            raise ValueError(f"eps must be a number or 'auto', got {eps!r}")
        eps = auto_epsilon(rho_a, rho_b, direction)
    rho = product + eps * direction
    lam = np.linalg.eigvalsh(rho)[0]
    if lam < -TOL_PSD:
        raise ValueError(
            f"eps={eps:g} breaks positivity (min eigenvalue {lam:.3e}); "
            "use a smaller eps or full-rank marginals such as the maximally mixed state"
        )
    return BipartiteState(rho_a.shape[0], rho_b.shape[0], rho)


def make_probe_state(
    l: int,
    m: int,
    rho_a,
    rho_b,
    eps: float | str = "auto",
    basis_a: GeneratorBasis | None = None,
    basis_b: GeneratorBasis | None = None,
) -> BipartiteState:
    rho_a = np.asarray(rho_a)
    rho_b = np.asarray(rho_b)
    basis_a = basis_a or generators(rho_a.shape[0])
    basis_b = basis_b or generators(rho_b.shape[0])
    probe = make_probe_correlation(l, m, basis_a, basis_b)
    return make_correlated_state(rho_a, rho_b, probe, eps)


def maximally_mixed(n: int) -> np.ndarray:
    return np.eye(n, dtype=complex) / n

