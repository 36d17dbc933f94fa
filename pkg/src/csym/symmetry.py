"""Certifying complex symmetry and measuring g-normality defects.

A matrix T is complex symmetric when ``s @ conj(T) = T* @ s`` for some
symmetric unitary s (equivalently CTC = T* for the conjugation C built on
s).  This module measures that residual, searches for a witness s, and
evaluates two necessary conditions built from polynomials in two free
variables: equality of the operator norms ``|p(T*,T)| = |p~(T,T*)|`` and
the matching trace identity, where p~ conjugates each coefficient.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np

from .conjugation import Conjugation, verify_conjugation
from .errors import DimensionMismatchError
from .matcore import as_cmatrix, frobenius, operator_norm
from .sampling import haar_unitary, rng_from

#: relative residual below which a certificate is accepted
CERTIFICATE_TOL = 1e-8

#: relative singular-value cutoff for the witness constraint null space
NULLSPACE_TOL = 1e-9

WORD_ALPHABET = frozenset("zw")
MAX_WORD_LEN = 8


@dataclass(frozen=True)
class CsoCertificate:
    """Witness that ``s @ conj(T) ~= T* @ s`` with the achieved residual."""

    conjugation: Conjugation
    residual: float


@dataclass(frozen=True)
class NcPolynomial:
    """Polynomial in two free (noncommuting) variables z and w.

    Terms are (coefficient, word) pairs; the empty word is the identity.
    Duplicate words are allowed; evaluation just sums the terms.
    """

    terms: tuple[tuple[complex, str], ...]

    def __post_init__(self):
        if not self.terms:
            raise ValueError("polynomial needs at least one term")
        canon = []
        for coeff, word in self.terms:
            word = str(word)
            if len(word) > MAX_WORD_LEN or not set(word) <= WORD_ALPHABET:
                raise ValueError(f"invalid word {word!r}")
            canon.append((complex(coeff), word))
        object.__setattr__(self, "terms", tuple(canon))

    def conjugate_coefficients(self) -> "NcPolynomial":
        return NcPolynomial(tuple((coeff.conjugate(), word) for coeff, word in self.terms))

    def to_json(self) -> dict:
        return {
            "terms": [
                {"re": coeff.real, "im": coeff.imag, "word": word}
                for coeff, word in self.terms
            ]
        }

    @classmethod
    def from_json(cls, obj) -> "NcPolynomial":
        terms = tuple(
            (complex(term["re"], term["im"]), term["word"]) for term in obj["terms"]
        )
        return cls(terms)


def word_eval(p: NcPolynomial, first, second) -> np.ndarray:
    """Substitute z -> first, w -> second and sum the coefficient-weighted words."""
    a = as_cmatrix(first)
    b = as_cmatrix(second)
    if a.shape != b.shape:
        raise DimensionMismatchError("arguments must share one square shape")
    n = a.shape[0]
    eye = np.eye(n, dtype=np.complex128)
    out = np.zeros((n, n), dtype=np.complex128)
    for coeff, word in p.terms:
        acc = eye
        for ch in word:
            acc = acc @ (a if ch == "z" else b)
        out = out + coeff * acc
    return out


def c_symmetry_residual(t, c: Conjugation) -> float:
    """Relative Frobenius residual of ``s @ conj(t) = t* @ s``."""
    arr = as_cmatrix(t)
    if arr.shape[0] != c.n:
        raise DimensionMismatchError("matrix and conjugation dimensions differ")
    lhs = c.s @ np.conj(arr)
    rhs = arr.conj().T @ c.s
    return float(frobenius(lhs - rhs) / max(1.0, frobenius(arr)))


def certificate(t, c: Conjugation) -> CsoCertificate:
    """Bundle a conjugation with its measured residual for ``t``."""
    return CsoCertificate(c, c_symmetry_residual(t, c))


def gnormal_defect(t, polys: Sequence[NcPolynomial]) -> float:
    """Worst relative gap between ``|p(T*,T)|`` and ``|p~(T,T*)|``.

    Zero (to rounding) for every complex symmetric matrix; a strictly
    positive value certifies that no conjugation can work.
    """
    arr = as_cmatrix(t)
    if not polys:
        raise ValueError("need at least one polynomial")
    adj = arr.conj().T
    worst = 0.0
    for p in polys:
        lhs = operator_norm(word_eval(p, adj, arr))
        rhs = operator_norm(word_eval(p.conjugate_coefficients(), arr, adj))
        worst = max(worst, abs(lhs - rhs) / (1.0 + lhs))
    return worst


def trace_defect(t, polys: Sequence[NcPolynomial]) -> float:
    """Worst gap between ``tr p~(T,T*)`` and ``conj(tr p(T*,T))``.

    For a C-symmetric T the two evaluations are conjugate by the isometry C,
    so the traces agree; nonzero defect obstructs complex symmetry.  Only
    words of length >= 6 can see the obstruction: any shorter binary word is
    a cyclic rotation of its own reversal, which forces the traces to match
    for every matrix.
    """
    arr = as_cmatrix(t)
    if not polys:
        raise ValueError("need at least one polynomial")
    adj = arr.conj().T
    worst = 0.0
    for p in polys:
        lhs = np.trace(word_eval(p.conjugate_coefficients(), arr, adj))
        rhs = np.conj(np.trace(word_eval(p, adj, arr)))
        worst = max(worst, float(abs(lhs - rhs)))
    return worst


def random_polynomials(
    count: int,
    seed: int,
    *,
    max_len: int = 4,
    max_terms: int = 5,
    min_len: int = 1,
) -> tuple[NcPolynomial, ...]:
    """Seeded defect-test polynomials.

    Each polynomial has 1..max_terms terms, words of min_len..max_len
    letters over {z, w}, and coefficients uniform in the closed unit disk.
    """
    if not (1 <= min_len <= max_len <= MAX_WORD_LEN):
        raise ValueError("word length bounds out of range")
    rng = rng_from(seed)
    polys = []
    for _ in range(count):
        n_terms = int(rng.integers(1, max_terms + 1))
        terms = []
        for _ in range(n_terms):
            length = int(rng.integers(min_len, max_len + 1))
            word = "".join("z" if bit == 0 else "w" for bit in rng.integers(0, 2, size=length))
            radius = float(np.sqrt(rng.uniform()))
            angle = float(rng.uniform(0.0, 2.0 * np.pi))
            terms.append((radius * np.exp(1j * angle), word))
        polys.append(NcPolynomial(tuple(terms)))
    return tuple(polys)


@dataclass(frozen=True)
class ConjugationSearch:
    """Outcome of :func:`find_conjugation`.

    ``found=False`` is inconclusive (the search is a heuristic, not a
    decision procedure); ``best_residual`` is the smallest certificate
    residual reached over all attempted witnesses.
    """

    found: bool
    certificate: Optional[CsoCertificate]
    best_residual: float
    restarts_used: int


def _constraint_null_basis(arr: np.ndarray, null_tol: float) -> np.ndarray:
    """Frobenius-orthonormal basis of {S : S conj(T) = T* S, S = S^T}.

    The first constraint is linear in S (a Sylvester-type operator acting on
    the row-major vectorization); the symmetry constraint is appended as
    extra rows so one SVD yields the intersection.
    """
    n = arr.shape[0]
    adj = arr.conj().T
    eye = np.eye(n)
    scale = max(1.0, float(np.linalg.norm(arr, 2)))
    sylvester = (np.kron(eye, adj) - np.kron(adj, eye)) / scale
    blocks = [sylvester]
    if n > 1:
        sym = np.zeros((n * (n - 1) // 2, n * n), dtype=np.complex128)
        row = 0
        for i in range(n):
            for j in range(i + 1, n):
                sym[row, i * n + j] = 1.0 / np.sqrt(2.0)
                sym[row, j * n + i] = -1.0 / np.sqrt(2.0)
                row += 1
        blocks.append(sym)
    stacked = np.vstack(blocks)
    _, sigma, vh = np.linalg.svd(stacked)
    cutoff = null_tol * max(float(sigma[0]), 1e-300)
    null_rows = vh[sigma <= cutoff].conj()
    return null_rows.reshape(-1, n, n)


def _closest_unitary(s: np.ndarray) -> np.ndarray:
    u, _, vh = np.linalg.svd(s)
    return u @ vh


def _project_span(basis: np.ndarray, s: np.ndarray) -> np.ndarray:
    coeffs = np.tensordot(basis.conj(), s, axes=([1, 2], [0, 1]))
    return np.tensordot(coeffs, basis, axes=(0, 0))


def find_conjugation(
    t,
    restarts: int = 8,
    max_iter: int = 500,
    *,
    seed: int = 0,
    residual_tol: float = CERTIFICATE_TOL,
    null_tol: float = NULLSPACE_TOL,
) -> ConjugationSearch:
    """Search for a conjugation witnessing complex symmetry of ``t``.

    Alternating projections between the affine space of symmetric solutions
    of ``S conj(T) = T* S`` and the unitary group (polar projection), with
    seeded random restarts.  An accepted witness passes
    :func:`verify_conjugation` and has certificate residual <= residual_tol.
    """
    arr = as_cmatrix(t)
    if restarts < 1 or max_iter < 1:
        raise ValueError("restarts and max_iter must be >= 1")
    n = arr.shape[0]

    best_res = float("inf")

    def consider(s_mat: np.ndarray, used: int) -> Optional[ConjugationSearch]:
        nonlocal best_res
        cand = Conjugation(s_mat)
        res = c_symmetry_residual(arr, cand)
        best_res = min(best_res, res)
        if res <= residual_tol and verify_conjugation(cand).valid:
            return ConjugationSearch(True, CsoCertificate(cand, res), res, used)
        return None

    # entrywise conjugation certifies every symmetric matrix outright
    hit = consider(np.eye(n, dtype=np.complex128), 0)
    if hit is not None:
        return hit

    basis = _constraint_null_basis(arr, null_tol)
    if basis.shape[0] == 0:
        return ConjugationSearch(False, None, best_res, 0)

    eye = np.eye(n, dtype=np.complex128)
    for ridx in range(restarts):
        rng = rng_from((int(seed), 0xF1D, ridx))
        start = _project_span(basis, eye if ridx == 0 else haar_unitary(n, rng))
        if frobenius(start) < 1e-10:
            coeffs = rng.standard_normal(len(basis)) + 1j * rng.standard_normal(len(basis))
            start = np.tensordot(coeffs, basis, axes=(0, 0))
        s_cur = start
        for _ in range(max_iter):
            u_cur = _closest_unitary(s_cur)
            s_next = _project_span(basis, u_cur)
            delta = frobenius(u_cur - s_next)
            s_cur = s_next
            if delta < 1e-10 and frobenius(s_cur @ s_cur.conj().T - eye) < 1e-10:
                break
        hit = consider(_closest_unitary(s_cur), ridx + 1)
        if hit is not None:
            return hit
    return ConjugationSearch(False, None, float(best_res), restarts)
