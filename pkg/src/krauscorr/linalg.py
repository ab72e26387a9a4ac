"""Dense complex linear algebra for small bipartite systems.

Matrices are plain ``numpy.ndarray`` values. System A is always the left
(slow) tensor factor, so an operator on ``A (x) B`` reshapes to
``(dimA, dimB, dimA, dimB)``.
"""

from __future__ import annotations

import numpy as np

TOL_HERM = 1e-10
TOL_UNIT = 1e-10
TOL_TRACE = 1e-10
TOL_PSD = 1e-9
TOL_RECON = 1e-9


def _scaled(tol: float, m: np.ndarray) -> float:
    # relative tolerance once the matrix norm exceeds 1
    return tol * max(1.0, float(np.linalg.norm(m)))


def as_square(m, name: str = "matrix") -> np.ndarray:
    a = np.asarray(m, dtype=complex)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise ValueError(f"{name} must be a square matrix, got shape {a.shape}")
    return a


def dagger(m: np.ndarray) -> np.ndarray:
    return np.conj(m).T


def is_hermitian(m: np.ndarray, tol: float = TOL_HERM) -> bool:
    m = np.asarray(m)
    return m.ndim == 2 and m.shape[0] == m.shape[1] and (
        np.linalg.norm(m - dagger(m)) <= _scaled(tol, m)
    )


def is_unitary(m: np.ndarray, tol: float = TOL_UNIT) -> bool:
    m = np.asarray(m)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        return False
    return np.linalg.norm(m @ dagger(m) - np.eye(m.shape[0])) <= tol * m.shape[0]


def check_hermitian(m, name: str = "operator", tol: float = TOL_HERM) -> np.ndarray:
    """Return ``m`` as a complex square array, raising if it is not Hermitian."""
    a = as_square(m, name)
    if not is_hermitian(a, tol):
        dev = np.linalg.norm(a - dagger(a))
        raise ValueError(f"{name} is not Hermitian (|A - A^dag|_F = {dev:.3e})")
    return a


def check_density(m, name: str = "density operator") -> np.ndarray:
    """Validate a density operator: Hermitian, unit trace, positive semidefinite."""
    a = check_hermitian(m, name)
    tr = np.trace(a)
    if abs(tr - 1.0) > TOL_TRACE:
        raise ValueError(f"{name} must have unit trace, got {tr.real:.12g}")
    lam_min = np.linalg.eigvalsh(a)[0]
    if lam_min < -TOL_PSD:
        raise ValueError(f"{name} is not positive semidefinite (min eigenvalue {lam_min:.3e})")
    return a


def is_density(m) -> bool:
    try:
        check_density(m)
    except ValueError:
        return False
    return True


def tensor_product(a, b) -> np.ndarray:
    """Kronecker product with ``a`` as the slow (left) factor."""
    return np.kron(np.asarray(a, dtype=complex), np.asarray(b, dtype=complex))


def _blocks(m, dim_a: int, dim_b: int) -> np.ndarray:
    a = as_square(m)
    if dim_a < 1 or dim_b < 1 or a.shape[0] != dim_a * dim_b:
        raise ValueError(
            f"matrix of side {a.shape[0]} does not factor as {dim_a} x {dim_b}"
        )
    return a.reshape(dim_a, dim_b, dim_a, dim_b)


def partial_trace_b(m, dim_a: int, dim_b: int) -> np.ndarray:
    """Trace out the right factor B, returning a ``dim_a x dim_a`` matrix."""
    return np.einsum("ijkj->ik", _blocks(m, dim_a, dim_b))


def partial_trace_a(m, dim_a: int, dim_b: int) -> np.ndarray:
    """Trace out the left factor A, returning a ``dim_b x dim_b`` matrix."""
    return np.einsum("ijil->jl", _blocks(m, dim_a, dim_b))


def eig_hermitian(h) -> tuple[np.ndarray, np.ndarray]:
    """Eigen-decomposition of a Hermitian matrix.

    Returns
    -------
    eigenvalues : ndarray
        Real eigenvalues in ascending order.
    eigenvectors : ndarray
        Unitary matrix whose columns are the matching eigenvectors.
    """
    a = check_hermitian(h, "eig_hermitian input")
    # symmetrise so eigh sees an exactly Hermitian matrix
    w, v = np.linalg.eigh(0.5 * (a + dagger(a)))
    return w, v


def unitary_exp(h, t: float) -> np.ndarray:
    """``exp(-i h t)`` for Hermitian ``h`` via its eigenbasis."""
    a = check_hermitian(h, "Hamiltonian")
    if t == 0:
        return np.eye(a.shape[0], dtype=complex)
    w, v = eig_hermitian(a)
    return (v * np.exp(-1j * w * t)) @ dagger(v)


def svd_real(m) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Full SVD of a real matrix: ``m = left @ diag(s) @ right.T``.

    ``left`` and ``right`` are square orthogonal matrices; ``s`` has
    ``min(rows, cols)`` entries in descending order.
    """
    a = np.asarray(m)
    if a.ndim != 2:
        raise ValueError(f"svd_real expects a 2-d array, got shape {a.shape}")
    if np.iscomplexobj(a):
        if np.abs(a.imag).max(initial=0.0) > TOL_HERM:
            raise ValueError("svd_real expects a real-valued matrix")
        a = a.real
    u, s, vt = np.linalg.svd(a.astype(float), full_matrices=True)
    return u, s, vt.T


def frobenius(m) -> float:
    return float(np.linalg.norm(m))


def trace_norm(m) -> float:
    """Sum of singular values."""
    return float(np.linalg.svd(np.asarray(m), compute_uv=False).sum())
