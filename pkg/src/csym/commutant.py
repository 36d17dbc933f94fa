"""Commutant of {T, T*}: numerical dimension, irreducibility, reducing projections.

The commutant is the null space of the stacked linear map
``X -> (XT - TX, XT* - T*X)``; its dimension is 1 exactly when T commutes
with no projection other than 0 and the identity.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

import numpy as np

from .errors import NumericalAmbiguityError
from .matcore import as_cmatrix, frobenius

DEFAULT_TOL = 1e-8

#: reports whose kept/discarded singular-value ratio is below this are flagged
GAP_FLAG_RATIO = 10.0


@dataclass(frozen=True)
class CommutantReport:
    dimension: int
    basis: np.ndarray  # (dimension, n, n), Frobenius-orthonormal
    gap: float         # smallest kept constraint sigma / largest null sigma
    ambiguous: bool
    tol: float


def constraint_matrix(t) -> np.ndarray:
    """Stacked 2n^2 x n^2 operator X -> (XT - TX, XT* - T*X) on row-major vec(X)."""
    arr = as_cmatrix(t)
    n = arr.shape[0]
    eye = np.eye(n)
    adj = arr.conj().T
    top = np.kron(eye, arr.T) - np.kron(arr, eye)
    bot = np.kron(eye, np.conj(arr)) - np.kron(adj, eye)
    return np.vstack([top, bot])


def commutant_dimension(t, tol: float = DEFAULT_TOL) -> CommutantReport:
    """Numerical dimension and orthonormal basis of {X : XT = TX, XT* = T*X}.

    Dimension counts singular values of the constraint operator below
    ``tol * max(1, sigma_1)``.  A gap ratio under 10 marks the decision
    ambiguous; the report is still returned with the flag set.
    """
    if tol <= 0:
        raise ValueError("tol must be positive")
    arr = as_cmatrix(t)
    n = arr.shape[0]
    _, sigma, vh = np.linalg.svd(constraint_matrix(arr))
    cutoff = tol * max(1.0, float(sigma[0]))
    null_mask = sigma <= cutoff
    dim = int(null_mask.sum())
    kept = sigma[~null_mask]
    if kept.size == 0:
        gap = float("inf")
    else:
        floor = max(float(sigma[null_mask].max()) if dim else 0.0, 1e-300)
        gap = float(kept.min()) / floor
    basis = vh[null_mask].conj().reshape(dim, n, n)
    return CommutantReport(dim, basis, gap, bool(gap < GAP_FLAG_RATIO), tol)


def commutant_dimension_elimination(t, tol: float = DEFAULT_TOL) -> int:
    """Commutant dimension via Gaussian elimination with partial pivoting.

    Independent of the SVD route: rank is the number of pivots exceeding
    ``tol`` times the largest absolute entry of the constraint matrix.
    """
    if tol <= 0:
        raise ValueError("tol must be positive")
    mat = constraint_matrix(as_cmatrix(t)).copy()
    m, ncols = mat.shape
    scale = float(np.abs(mat).max())
    if scale == 0.0:
        return ncols
    thresh = tol * scale
    rank = 0
    row = 0
    for col in range(ncols):
        piv_row = int(np.argmax(np.abs(mat[row:, col]))) + row
        if abs(mat[piv_row, col]) <= thresh:
            continue
        if piv_row != row:
            mat[[row, piv_row]] = mat[[piv_row, row]]
        factors = mat[row + 1 :, col] / mat[row, col]
        mat[row + 1 :, col:] -= np.outer(factors, mat[row, col:])
        rank += 1
        row += 1
        if row == m:
            break
    return ncols - rank


def is_irreducible(t, tol: float = DEFAULT_TOL) -> bool:
    """True when the commutant of {T, T*} is (numerically) just the scalars."""
    report = commutant_dimension(t, tol)
    if report.ambiguous:
        raise NumericalAmbiguityError(
            f"commutant gap ratio {report.gap:.3g} below {GAP_FLAG_RATIO}", report=report
        )
    return report.dimension == 1


def _nonscalar_mass(x: np.ndarray) -> float:
    n = x.shape[0]
    return frobenius(x - (np.trace(x) / n) * np.eye(n))


def reducing_projection(t, tol: float = DEFAULT_TOL) -> Optional[np.ndarray]:
    """A nontrivial orthogonal projection commuting with T, or None.

    Returns None when the commutant is trivial.  Otherwise takes a basis
    element X with the largest non-scalar part, forms the Hermitian parts
    X + X* and (X - X*)/i (the commutant is closed under adjoints), deflates
    the identity component, and splits the spectrum at the midpoint of the
    extreme eigenvalues.
    """
    arr = as_cmatrix(t)
    n = arr.shape[0]
    report = commutant_dimension(arr, tol)
    if report.ambiguous:
        raise NumericalAmbiguityError(
            f"commutant gap ratio {report.gap:.3g} below {GAP_FLAG_RATIO}", report=report
        )
    if report.dimension <= 1:
        return None
    eye = np.eye(n, dtype=np.complex128)
    for x in sorted(report.basis, key=_nonscalar_mass, reverse=True):
        for herm in (x + x.conj().T, (x - x.conj().T) / 1j):
            herm = herm - (np.trace(herm) / n) * eye
            herm = 0.5 * (herm + herm.conj().T)
            if frobenius(herm) <= 1e-8:
                continue
            values, vectors = np.linalg.eigh(herm)
            mid = 0.5 * (float(values[0]) + float(values[-1]))
            sel = values > mid
            rank = int(sel.sum())
            if rank == 0 or rank == n:
                continue
            v = vectors[:, sel]
            return v @ v.conj().T
    raise NumericalAmbiguityError(
        "commutant basis produced no usable non-scalar Hermitian element", report=report
    )
