"""Dense complex-matrix kernels: norms, decompositions, spectra, kernels.

All routines operate on square complex128 arrays and are pure functions.
LAPACK (through numpy) supplies the factorizations; this module owns input
validation, ordering conventions, tolerances and error mapping.
"""

from __future__ import annotations

from typing import NamedTuple

import numpy as np

from .errors import (
    DimensionMismatchError,
    NoConvergenceError,
    NonFiniteError,
    NotHermitianError,
)

#: default relative tolerance for rank and kernel decisions
DEFAULT_TOL = 1e-10

#: relative Hermiticity tolerance accepted by :func:`hermitian_eig`
HERMITIAN_TOL = 1e-10


def as_cmatrix(a) -> np.ndarray:
    """Validate and return ``a`` as a square, finite complex128 array."""
    arr = np.asarray(a, dtype=np.complex128)
    if arr.ndim != 2 or arr.shape[0] != arr.shape[1] or arr.shape[0] < 1:
        raise DimensionMismatchError(f"expected a square matrix, got shape {arr.shape}")
    if not np.isfinite(arr).all():
        raise NonFiniteError("matrix contains non-finite entries")
    return arr


def frobenius(a) -> float:
    return float(np.linalg.norm(a))


class EigenDecomposition(NamedTuple):
    values: np.ndarray   # real eigenvalues, ascending
    vectors: np.ndarray  # unitary; column j pairs with values[j]


class SvdResult(NamedTuple):
    u: np.ndarray
    sigma: np.ndarray  # nonnegative, descending
    v: np.ndarray      # right singular vectors as columns


def operator_norm(a) -> float:
    """Largest singular value of ``a``."""
    arr = as_cmatrix(a)
    try:
        return float(np.linalg.norm(arr, 2))
    except np.linalg.LinAlgError as exc:  # pragma: no cover - LAPACK failure
        raise NoConvergenceError("SVD failed to converge") from exc


def hermitian_eig(a) -> EigenDecomposition:
    """Eigendecomposition of a Hermitian matrix, eigenvalues ascending."""
    arr = as_cmatrix(a)
    if frobenius(arr - arr.conj().T) > HERMITIAN_TOL * frobenius(arr):
        raise NotHermitianError("matrix is not Hermitian within 1e-10 relative")
    herm = 0.5 * (arr + arr.conj().T)
    try:
        values, vectors = np.linalg.eigh(herm)
    except np.linalg.LinAlgError as exc:  # pragma: no cover
        raise NoConvergenceError("Hermitian eigensolver failed to converge") from exc
    return EigenDecomposition(values, vectors)


def svd(a) -> SvdResult:
    """Singular value decomposition with right singular vectors as columns."""
    arr = as_cmatrix(a)
    try:
        u, sigma, vh = np.linalg.svd(arr)
    except np.linalg.LinAlgError as exc:  # pragma: no cover
        raise NoConvergenceError("SVD failed to converge") from exc
    return SvdResult(u, sigma, vh.conj().T)


def eig_general(a) -> np.ndarray:
    """All eigenvalues, sorted lexicographically by (real, imaginary)."""
    arr = as_cmatrix(a)
    try:
        vals = np.linalg.eigvals(arr)
    except np.linalg.LinAlgError as exc:  # pragma: no cover
        raise NoConvergenceError("eigenvalue iteration failed to converge") from exc
    order = np.lexsort((vals.imag, vals.real))
    return vals[order]


def null_space_basis(a, tol: float = DEFAULT_TOL) -> np.ndarray:
    """Orthonormal kernel basis as columns; shape (n, 0) when trivial.

    Keeps right singular vectors whose singular value is at most
    ``tol * max(1, sigma_1)``.
    """
    if tol <= 0:
        raise ValueError("tol must be positive")
    res = svd(a)
    cutoff = tol * max(1.0, float(res.sigma[0]))
    return res.v[:, res.sigma <= cutoff]
