"""Orthogonal SU(N) generators, structure constants and operator expansions.

Generators are labelled 1..N^2-1 in physics texts; arrays here are indexed
from 0, so ``basis[0]`` is sigma_1.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .linalg import TOL_HERM, TOL_RECON, as_square, tensor_product


@dataclass(frozen=True)
class GeneratorBasis:
    """An ordered family of ``n**2 - 1`` Hermitian, traceless generators
    normalised to ``tr(s_i s_j) = 2 delta_ij``."""

    n: int
    generators: np.ndarray  # shape (n*n - 1, n, n)

    def __len__(self) -> int:
        return len(self.generators)

    def __getitem__(self, i: int) -> np.ndarray:
        return self.generators[i]

    def __iter__(self):
        return iter(self.generators)

    def gram(self) -> np.ndarray:
        """Matrix of ``tr(s_i s_j)``."""
        return np.einsum("iab,jba->ij", self.generators, self.generators)

    def check(self, tol: float = TOL_RECON) -> None:
        g = self.generators
        if g.shape != (self.n**2 - 1, self.n, self.n):
            raise ValueError(f"expected {self.n**2 - 1} generators of size {self.n}")
        if np.abs(g - np.conj(np.swapaxes(g, 1, 2))).max() > tol:
            raise ValueError("generators must be Hermitian")
        if np.abs(np.einsum("iaa->i", g)).max() > tol:
            raise ValueError("generators must be traceless")
        if np.abs(self.gram() - 2 * np.eye(len(g))).max() > tol:
            raise ValueError("generators must satisfy tr(s_i s_j) = 2 delta_ij")

    def rotated(self, o: np.ndarray) -> "GeneratorBasis":
        """New basis ``s'_k = sum_i o[i, k] s_i`` for a real orthogonal ``o``."""
        return GeneratorBasis(self.n, np.einsum("ik,iab->kab", o, self.generators))


@dataclass(frozen=True)
class StructureConstants:
    n: int
    g: np.ndarray  # real, shape (n*n - 1,) * 3

    def check(self, basis: GeneratorBasis, tol: float = TOL_RECON) -> None:
        g = self.g
        for perm in [(1, 0, 2), (0, 2, 1), (2, 1, 0)]:
            if np.abs(g + g.transpose(perm)).max() > tol:
                raise ValueError("structure constants are not totally antisymmetric")
        if commutator_residual(basis, self).max() > tol:
            raise ValueError("structure constants do not reproduce the commutators")


@dataclass(frozen=True)
class CoefficientExpansion:
    """``O = scalar * I + sum_i coeffs[i] * sigma_i``."""

    scalar: complex
    coeffs: np.ndarray

    def reconstruct(self, basis: GeneratorBasis) -> np.ndarray:
        return self.scalar * np.eye(basis.n) + np.einsum("i,iab->ab", self.coeffs, basis.generators)


@dataclass(frozen=True)
class BipartiteExpansion:
    """``O = c00 I(x)I + sum a_i s_i(x)I + sum b_j I(x)t_j + sum c_ij s_i(x)t_j``."""

    c00: complex
    a: np.ndarray
    b: np.ndarray
    c: np.ndarray

    def reconstruct(self, basis_a: GeneratorBasis, basis_b: GeneratorBasis) -> np.ndarray:
        eye_a, eye_b = np.eye(basis_a.n), np.eye(basis_b.n)
        out = self.c00 * np.eye(basis_a.n * basis_b.n, dtype=complex)
        out += tensor_product(np.einsum("i,iab->ab", self.a, basis_a.generators), eye_b)
        out += tensor_product(eye_a, np.einsum("j,jab->ab", self.b, basis_b.generators))
        out += _coupled(self.c, basis_a, basis_b)
        return out


def _coupled(c: np.ndarray, basis_a: GeneratorBasis, basis_b: GeneratorBasis) -> np.ndarray:
    na, nb = basis_a.n, basis_b.n
    t = np.einsum("ij,iac,jbd->abcd", c, basis_a.generators, basis_b.generators)
    return t.reshape(na * nb, na * nb)


def coupled_operator(c, basis_a: GeneratorBasis, basis_b: GeneratorBasis) -> np.ndarray:
    """``sum_ij c[i, j] sigma_i (x) tau_j`` as a dense matrix."""
    return _coupled(np.asarray(c), basis_a, basis_b)


@lru_cache(maxsize=None)
def _gell_mann(n: int) -> np.ndarray:
    sym, anti, diag = [], [], []
    for j in range(n):
        for k in range(j + 1, n):
            s = np.zeros((n, n), dtype=complex)
            s[j, k] = s[k, j] = 1
            sym.append(s)
            a = np.zeros((n, n), dtype=complex)
            a[j, k] = -1j
            a[k, j] = 1j
            anti.append(a)
    for d in range(1, n):
        m = np.zeros((n, n), dtype=complex)
        m[np.arange(d), np.arange(d)] = 1
        m[d, d] = -d
        diag.append(np.sqrt(2.0 / (d * (d + 1))) * m)
    g = np.array(sym + anti + diag)
    g.setflags(write=False)
    return g


def generators(n: int) -> GeneratorBasis:
    """Generalised Gell-Mann basis of SU(n).

    Order: symmetric ``E_jk + E_kj`` for ``j < k``, then antisymmetric
    ``-i(E_jk - E_kj)``, then the ``n - 1`` diagonal generators. For
    ``n = 2`` this gives the Pauli matrices X, Y, Z.
    """
    if int(n) != n or n < 2:
        raise ValueError(f"SU(n) needs n >= 2, got {n}")
    return GeneratorBasis(int(n), _gell_mann(int(n)))


def structure_constants(basis: GeneratorBasis) -> StructureConstants:
    """``g_iln`` defined by ``[s_i, s_l] = 2i sum_n g_iln s_n``.

    Evaluated as ``tr([s_i, s_l] s_n) / 4i``; valid for any orthonormal
    generator family, not only the Gell-Mann one.
    """
    s = basis.generators
    prod = np.einsum("iab,lbc->ilac", s, s)
    comm = prod - prod.transpose(1, 0, 2, 3)
    raw = np.einsum("ilab,nba->iln", comm, s) / 4j
    resid = np.abs(raw.imag).max(initial=0.0)
    if resid > TOL_RECON:
        raise ValueError(f"structure constants have imaginary residue {resid:.3e}")
    return StructureConstants(basis.n, raw.real)


def commutator_residual(basis: GeneratorBasis, sc: StructureConstants) -> np.ndarray:
    """Frobenius norm of ``[s_i, s_l] - 2i sum_n g_iln s_n`` for every pair."""
    s = basis.generators
    prod = np.einsum("iab,lbc->ilac", s, s)
    comm = prod - prod.transpose(1, 0, 2, 3)
    rebuilt = 2j * np.einsum("iln,nab->ilab", sc.g, s)
    return np.linalg.norm(comm - rebuilt, axis=(2, 3))


def expand(o, basis: GeneratorBasis) -> CoefficientExpansion:
    o = as_square(o)
    if o.shape[0] != basis.n:
        raise ValueError(f"operator of side {o.shape[0]} cannot be expanded in SU({basis.n})")
    scalar = np.trace(o) / basis.n
    coeffs = np.einsum("ab,iba->i", o, basis.generators) / 2
    return CoefficientExpansion(complex(scalar), coeffs)


def expand_bipartite(o, basis_a: GeneratorBasis, basis_b: GeneratorBasis) -> BipartiteExpansion:
    """Expand an operator on ``A (x) B`` in the product operator basis."""
    na, nb = basis_a.n, basis_b.n
    o = as_square(o)
    if o.shape[0] != na * nb:
        raise ValueError(f"operator of side {o.shape[0]} does not match {na} x {nb}")
    t = o.reshape(na, nb, na, nb)
    c00 = np.einsum("abab->", t) / (na * nb)
    a = np.einsum("abcb,ica->i", t, basis_a.generators) / (2 * nb)
    b = np.einsum("abad,jdb->j", t, basis_b.generators) / (2 * na)
    c = np.einsum("abcd,ica,jdb->ij", t, basis_a.generators, basis_b.generators) / 4
    return BipartiteExpansion(complex(c00), a, b, c)


def real_part(x: np.ndarray, what: str, tol: float = TOL_HERM) -> np.ndarray:
    """Drop a negligible imaginary part, raising if it is not negligible."""
    x = np.asarray(x)
    if np.iscomplexobj(x):
        if np.abs(x.imag).max(initial=0.0) > tol * max(1.0, np.abs(x).max(initial=0.0)):
            raise ValueError(f"{what} should be real")
        return x.real.copy()
    return x.astype(float)
