"""Conjugations (antiunitary involutions) and their fixed-point bases.

A conjugation acts as ``x -> s @ conj(x)`` for a symmetric unitary matrix
``s``; every conjugation on a finite-dimensional space has this form once a
basis is fixed, so storing ``s`` turns antiunitary algebra into ordinary
matrix algebra.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DimensionMismatchError, NumericalBreakdownError
from .matcore import as_cmatrix, frobenius
from .sampling import complex_gaussian, haar_unitary, rng_from

#: relative (per dimension) tolerance for accepting a conjugation matrix
CONJUGATION_TOL = 1e-10


@dataclass(frozen=True)
class Conjugation:
    """The symmetric unitary ``s`` of the conjugation ``x -> s @ conj(x)``.

    The constructor only checks shape and finiteness; use
    :func:`verify_conjugation` to test the symmetry and unitarity axioms.
    """

    s: np.ndarray

    def __post_init__(self):
        arr = as_cmatrix(self.s).copy()
        arr.flags.writeable = False
        object.__setattr__(self, "s", arr)

    @property
    def n(self) -> int:
        return self.s.shape[0]

    def apply(self, x) -> np.ndarray:
        return apply_conjugation(self, x)


@dataclass(frozen=True)
class ConjugationReport:
    symmetry_residual: float
    unitarity_residual: float
    valid: bool


def canonical_conjugation(n: int) -> Conjugation:
    """Entrywise conjugation: ``s`` is the identity."""
    if n < 1:
        raise ValueError("n must be positive")
    return Conjugation(np.eye(n, dtype=np.complex128))


def random_conjugation(n: int, seed: int) -> Conjugation:
    """Seeded random conjugation, ``s = U @ U.T`` for a Haar unitary U."""
    if n < 1:
        raise ValueError("n must be positive")
    u = haar_unitary(n, rng_from(seed))
    return Conjugation(u @ u.T)


def apply_conjugation(c: Conjugation, x) -> np.ndarray:
    vec = np.asarray(x, dtype=np.complex128)
    if vec.shape != (c.n,):
        raise DimensionMismatchError(f"expected a vector of length {c.n}, got shape {vec.shape}")
    return c.s @ np.conj(vec)


def verify_conjugation(c: Conjugation, tol: float = CONJUGATION_TOL) -> ConjugationReport:
    """Frobenius residuals of the symmetry and unitarity axioms."""
    s = c.s
    sym = frobenius(s - s.T)
    uni = frobenius(s @ s.conj().T - np.eye(c.n))
    return ConjugationReport(sym, uni, valid=(sym <= tol * c.n and uni <= tol * c.n))


def _orthogonalize(x: np.ndarray, cols: list[np.ndarray]) -> np.ndarray:
    # two Gram-Schmidt passes keep loss of orthogonality at rounding level
    for _ in range(2):
        for b in cols:
            x = x - np.vdot(b, x) * b
    return x


def c_real_basis(c: Conjugation, seed: int = 0, max_retries: int = 50) -> np.ndarray:
    """Unitary whose columns b_j satisfy ``c.apply(b_j) == b_j``.

    Greedy symmetrization: draw a random unit vector x in the orthocomplement
    of the columns found so far (that complement is invariant under c), keep
    the fixed vector x + Cx, or i(x - Cx) when the former nearly cancels.
    For a unit x the two candidates satisfy ``|x+Cx|^2 + |x-Cx|^2 = 4``, so
    at least one always has norm >= sqrt(2).
    """
    n = c.n
    if np.array_equal(c.s, np.eye(n, dtype=np.complex128)):
        return np.eye(n, dtype=np.complex128)
    rng = rng_from(seed)
    cols: list[np.ndarray] = []
    retries = 0
    while len(cols) < n:
        x = complex_gaussian(rng, n)
        x = _orthogonalize(x, cols)
        nrm = float(np.linalg.norm(x))
        if nrm < 1e-6:
            retries += 1
            if retries > max_retries:
                raise NumericalBreakdownError("could not draw a vector in the orthocomplement")
            continue
        x = x / nrm
        y = x + c.apply(x)
        if np.linalg.norm(y) < 0.1:
            y = 1j * (x - c.apply(x))
        y = _orthogonalize(y, cols)
        nrm = float(np.linalg.norm(y))
        if nrm < 0.1:
            retries += 1
            if retries > max_retries:
                raise NumericalBreakdownError("fixed-vector construction stalled")
            continue
        cols.append(y / nrm)
    return np.column_stack(cols)
