"""Builders and samplers for the operator classes used across the library.

Random certified complex symmetric matrices, Jordan blocks, finite weighted
shifts with palindromic weight moduli, block matrices with commuting normal
entries, and square-roots-of-normal forms.  Every builder that claims a
conjugation returns one whose certificate residual is at rounding level.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np

from .conjugation import Conjugation
from .errors import (
    DimensionMismatchError,
    InvalidSpecError,
    NotCommutingError,
    NotNormalError,
    NotPositiveError,
    NotUnitaryError,
    NumericalBreakdownError,
)
from .matcore import as_cmatrix, frobenius, operator_norm
from .sampling import haar_unitary, rng_from

#: relative tolerance for the normality and commutation preconditions
NORMALITY_TOL = 1e-9

#: relative tolerance on weight moduli for the palindromic condition
PALINDROME_TOL = 1e-10


def random_cso(n: int, seed: int) -> tuple[np.ndarray, Conjugation]:
    """Random complex symmetric matrix with a rotated conjugation witness.

    Draws real symmetric A, B with Gaussian entries, sets M = A + iB, and
    conjugates by a Haar unitary U; the witness is s = U @ U.T.
    """
    if n < 1:
        raise ValueError("n must be positive")
    rng = rng_from(seed)
    g = rng.standard_normal((n, n))
    a = 0.5 * (g + g.T)
    g = rng.standard_normal((n, n))
    b = 0.5 * (g + g.T)
    u = haar_unitary(n, rng)
    t = u @ (a + 1j * b) @ u.conj().T
    return t, Conjugation(u @ u.T)


def jordan_block(n: int, lam) -> tuple[np.ndarray, Conjugation]:
    """lam * I plus the nilpotent upshift, certified by the flip conjugation."""
    if n < 1:
        raise ValueError("n must be positive")
    t = complex(lam) * np.eye(n, dtype=np.complex128) + np.eye(n, k=1, dtype=np.complex128)
    return t, Conjugation(np.fliplr(np.eye(n, dtype=np.complex128)))


@dataclass(frozen=True)
class WeightedShiftSpec:
    """Finite weighted shift: t e_i = weights[i] e_{i+1} on m+1 basis vectors.

    ``symmetry_index`` (1-indexed, optional) claims the palindromic-modulus
    relation |w_j| = |w_{k-j}|; for a finite weight list the only consistent
    value is k = len(weights) + 1.
    """

    weights: tuple[complex, ...]
    kind: str = "unilateral"
    symmetry_index: Optional[int] = None

    def __post_init__(self):
        if not self.weights:
            raise InvalidSpecError("weights must be nonempty")
        object.__setattr__(self, "weights", tuple(complex(w) for w in self.weights))
        if self.kind not in ("unilateral", "bilateral-truncation"):
            raise InvalidSpecError(f"unknown kind {self.kind!r}")

    def to_json(self) -> dict:
        return {
            "weights": [[w.real, w.imag] for w in self.weights],
            "kind": self.kind,
            "symmetry_index": self.symmetry_index,
        }

    @classmethod
    def from_json(cls, obj) -> "WeightedShiftSpec":
        weights = tuple(complex(re, im) for re, im in obj["weights"])
        return cls(weights, obj.get("kind", "unilateral"), obj.get("symmetry_index"))


def _palindromic(mods: np.ndarray) -> bool:
    m = len(mods)
    return all(
        abs(mods[j] - mods[m - 1 - j]) <= PALINDROME_TOL * max(1.0, mods[j], mods[m - 1 - j])
        for j in range(m)
    )


def weighted_shift(spec: WeightedShiftSpec) -> tuple[np.ndarray, Optional[Conjugation]]:
    """Build the (m+1) x (m+1) shift matrix and, when the weight moduli are
    palindromic, a certifying conjugation (flip composed with a phase
    diagonal solved by forward recursion).  Returns (matrix, None) otherwise.
    """
    w = np.asarray(spec.weights, dtype=np.complex128)
    m = len(w)
    size = m + 1
    t = np.zeros((size, size), dtype=np.complex128)
    for i in range(m):
        t[i + 1, i] = w[i]

    mods = np.abs(w)
    pal = _palindromic(mods)
    if spec.symmetry_index is not None:
        if spec.symmetry_index != m + 1:
            raise InvalidSpecError(
                f"symmetry_index must be {m + 1} for {m} weights, got {spec.symmetry_index}"
            )
        if not pal:
            raise InvalidSpecError("claimed palindromic moduli do not hold")
    if not pal:
        return t, None

    # phases on the antidiagonal: s[i, size-1-i] = phi[i] with
    # phi_{i+1} = phi_i * conj(w_{m-1-i} / w_i); unit modulus by palindromy.
    phi = np.ones(size, dtype=np.complex128)
    for i in range(m):
        if mods[i] > 0.0:
            ratio = np.conj(w[m - 1 - i] / w[i])
            ratio /= abs(ratio)
        else:
            ratio = 1.0
        phi[i + 1] = phi[i] * ratio
    s = np.zeros((size, size), dtype=np.complex128)
    for i in range(size):
        s[i, size - 1 - i] = phi[i]
    return t, Conjugation(s)


def _check_normal(mat: np.ndarray, label: str, tol: float = NORMALITY_TOL) -> None:
    lhs = mat @ mat.conj().T - mat.conj().T @ mat
    if frobenius(lhs) > tol * frobenius(mat) ** 2:
        raise NotNormalError(f"{label} is not normal within {tol:g}")


def _check_commuting(a: np.ndarray, b: np.ndarray, labels: str, tol: float = NORMALITY_TOL) -> None:
    if frobenius(a @ b - b @ a) > tol * frobenius(a) * frobenius(b):
        raise NotCommutingError(f"{labels} do not commute within {tol:g}")


def _simdiag_recursive(herms: list[np.ndarray], rng, depth: int, max_depth: int) -> np.ndarray:
    n = herms[0].shape[0]
    if n == 1:
        return np.eye(1, dtype=np.complex128)
    combo = np.zeros((n, n), dtype=np.complex128)
    for h in herms:
        combo += rng.standard_normal() * h
    combo = 0.5 * (combo + combo.conj().T)
    values, vectors = np.linalg.eigh(combo)
    spread = max(1.0, float(values[-1] - values[0]))
    v = vectors.astype(np.complex128)
    if depth >= max_depth:
        return v
    # recurse inside eigenvalue clusters with a fresh random combination
    start = 0
    while start < n:
        end = start + 1
        while end < n and values[end] - values[end - 1] < 1e-7 * spread:
            end += 1
        if end - start > 1:
            vc = v[:, start:end]
            sub = [vc.conj().T @ h @ vc for h in herms]
            sub = [0.5 * (x + x.conj().T) for x in sub]
            v[:, start:end] = vc @ _simdiag_recursive(sub, rng, depth + 1, max_depth)
        start = end
    return v


def simultaneous_diagonalize(
    mats: Sequence[np.ndarray],
    tol: float = NORMALITY_TOL,
    seed: int = 0,
    off_tol: float = 1e-8,
    max_depth: int = 5,
) -> np.ndarray:
    """Common diagonalizing unitary for pairwise commuting normal matrices.

    Diagonalizes a random Hermitian combination of the Hermitian and
    anti-Hermitian parts of all inputs, recursing inside eigenvalue clusters.
    The returned v leaves each input with off-diagonal Frobenius mass at most
    ``off_tol`` times its Frobenius norm.
    """
    arrs = [as_cmatrix(m) for m in mats]
    if not arrs:
        raise ValueError("mats must be nonempty")
    n = arrs[0].shape[0]
    for idx, m in enumerate(arrs):
        if m.shape != (n, n):
            raise DimensionMismatchError("all matrices must share one shape")
        _check_normal(m, f"matrix {idx}", tol)
    for i in range(len(arrs)):
        for j in range(i + 1, len(arrs)):
            _check_commuting(arrs[i], arrs[j], f"matrices {i} and {j}", tol)

    herms = []
    for m in arrs:
        herms.append(0.5 * (m + m.conj().T))
        herms.append((m - m.conj().T) / 2j)
    v = _simdiag_recursive(herms, rng_from((int(seed), 0x51D)), 0, max_depth)
    for idx, m in enumerate(arrs):
        rotated = v.conj().T @ m @ v
        off = rotated - np.diag(np.diagonal(rotated))
        if frobenius(off) > off_tol * max(frobenius(m), 1e-300):
            raise NumericalBreakdownError(
                f"matrix {idx} kept off-diagonal mass {frobenius(off):.3g} after rotation"
            )
    return v


@dataclass(frozen=True)
class BinormalSpec:
    """Four commuting normal n x n blocks of a 2n x 2n block matrix."""

    n11: np.ndarray
    n12: np.ndarray
    n21: np.ndarray
    n22: np.ndarray

    def __post_init__(self):
        blocks = [as_cmatrix(b) for b in (self.n11, self.n12, self.n21, self.n22)]
        n = blocks[0].shape[0]
        if any(b.shape != (n, n) for b in blocks):
            raise DimensionMismatchError("all four blocks must share one shape")
        for name, arr in zip(("n11", "n12", "n21", "n22"), blocks):
            object.__setattr__(self, name, arr)

    @property
    def block_size(self) -> int:
        return self.n11.shape[0]

    def blocks(self) -> tuple[np.ndarray, np.ndarray, np.ndarray, np.ndarray]:
        return (self.n11, self.n12, self.n21, self.n22)

    def to_json(self) -> dict:
        from .jsonio import matrix_to_json

        return {
            "n11": matrix_to_json(self.n11),
            "n12": matrix_to_json(self.n12),
            "n21": matrix_to_json(self.n21),
            "n22": matrix_to_json(self.n22),
        }

    @classmethod
    def from_json(cls, obj) -> "BinormalSpec":
        from .jsonio import matrix_from_json

        return cls(*(matrix_from_json(obj[key]) for key in ("n11", "n12", "n21", "n22")))


def binormal_matrix(spec: BinormalSpec, seed: int = 0) -> tuple[np.ndarray, np.ndarray]:
    """Assemble the 2n x 2n block matrix and a unitary splitting it into
    2x2 blocks.

    Returns (t, w) with ``w* t w`` block diagonal with 2x2 blocks
    ``[[d11_i, d12_i], [d21_i, d22_i]]`` built from the simultaneous
    diagonalization of the four entries.
    """
    blocks = spec.blocks()
    v = simultaneous_diagonalize(blocks, seed=seed)
    n = spec.block_size
    t = np.block([[blocks[0], blocks[1]], [blocks[2], blocks[3]]])
    big_v = np.zeros((2 * n, 2 * n), dtype=np.complex128)
    big_v[:n, :n] = v
    big_v[n:, n:] = v
    # interleave so (block b, index i) lands at position 2i + b
    cols = [b * n + i for i in range(n) for b in (0, 1)]
    w = big_v[:, cols]
    residual = block_decomposition_residual(t, w)
    if residual > 1e-8 * max(frobenius(t), 1e-300):
        raise NumericalBreakdownError(
            f"2x2 block decomposition kept residual {residual:.3g}"
        )
    return t, w


def block_decomposition_residual(t: np.ndarray, w: np.ndarray) -> float:
    """Frobenius mass of ``w* t w`` outside its 2x2 diagonal blocks."""
    rotated = w.conj().T @ as_cmatrix(t) @ w
    n2 = rotated.shape[0]
    off = rotated.copy()
    for i in range(n2 // 2):
        sl = slice(2 * i, 2 * i + 2)
        off[sl, sl] = 0.0
    return frobenius(off)


def extract_two_by_two_blocks(t: np.ndarray, w: np.ndarray) -> list[np.ndarray]:
    """The 2x2 diagonal blocks of ``w* t w``."""
    rotated = w.conj().T @ as_cmatrix(t) @ w
    return [rotated[2 * i : 2 * i + 2, 2 * i : 2 * i + 2] for i in range(rotated.shape[0] // 2)]


def sqrt_normal_matrix(nrm, a, b, tol: float = NORMALITY_TOL) -> np.ndarray:
    """Direct sum of a normal block with [[a, b], [0, -a]], whose square is normal.

    Requires a normal, b positive semidefinite and commuting with a; ``nrm``
    may be None (or 0 x 0) to omit the normal summand.
    """
    a = as_cmatrix(a)
    b = as_cmatrix(b)
    if a.shape != b.shape:
        raise DimensionMismatchError("a and b must share one shape")
    if nrm is None:
        nrm = np.zeros((0, 0), dtype=np.complex128)
    else:
        nrm = np.asarray(nrm, dtype=np.complex128)
        if nrm.ndim != 2 or nrm.shape[0] != nrm.shape[1]:
            raise DimensionMismatchError("nrm must be square (possibly 0 x 0)")
    if nrm.shape[0] > 0:
        _check_normal(nrm, "nrm", tol)
    _check_normal(a, "a", tol)
    herm_gap = frobenius(b - b.conj().T)
    if herm_gap > tol * max(1.0, frobenius(b)):
        raise NotPositiveError("b is not Hermitian")
    bh = 0.5 * (b + b.conj().T)
    min_eig = float(np.linalg.eigvalsh(bh)[0])
    if min_eig < -1e-10 * max(operator_norm(b), 1e-300):
        raise NotPositiveError(f"b has negative eigenvalue {min_eig:.3g}")
    _check_commuting(a, b, "a and b", tol)

    m = a.shape[0]
    size = nrm.shape[0] + 2 * m
    t = np.zeros((size, size), dtype=np.complex128)
    k = nrm.shape[0]
    t[:k, :k] = nrm
    t[k : k + m, k : k + m] = a
    t[k : k + m, k + m :] = b
    t[k + m :, k + m :] = -a

    sq = t @ t
    comm = sq @ sq.conj().T - sq.conj().T @ sq
    if frobenius(comm) > 1e-8 * max(frobenius(t) ** 4, 1e-300):
        raise NumericalBreakdownError("square of the output failed the normality check")
    return t


def direct_sum(
    parts: Sequence[np.ndarray],
    conjs: Optional[Sequence[Optional[Conjugation]]] = None,
) -> tuple[np.ndarray, Optional[Conjugation]]:
    """Block-diagonal sum; block-diagonal conjugation when every part has one."""
    arrs = [as_cmatrix(p) for p in parts]
    if not arrs:
        raise ValueError("parts must be nonempty")
    n = sum(p.shape[0] for p in arrs)
    t = np.zeros((n, n), dtype=np.complex128)
    pos = 0
    for p in arrs:
        k = p.shape[0]
        t[pos : pos + k, pos : pos + k] = p
        pos += k
    if conjs is None or any(c is None for c in conjs):
        return t, None
    if len(conjs) != len(arrs):
        raise DimensionMismatchError("need one conjugation per part")
    s = np.zeros((n, n), dtype=np.complex128)
    pos = 0
    for p, c in zip(arrs, conjs):
        k = p.shape[0]
        if c.n != k:
            raise DimensionMismatchError("conjugation size does not match its part")
        s[pos : pos + k, pos : pos + k] = c.s
        pos += k
    return t, Conjugation(s)


def conjugate_by_unitary(
    t, c: Conjugation, u
) -> tuple[np.ndarray, Conjugation]:
    """Transport (t, c) along a unitary: (u t u*, conjugation u s u^T)."""
    arr = as_cmatrix(t)
    uu = as_cmatrix(u)
    n = arr.shape[0]
    if uu.shape != (n, n) or c.n != n:
        raise DimensionMismatchError("matrix, conjugation, and unitary sizes differ")
    if frobenius(uu @ uu.conj().T - np.eye(n)) > 1e-10 * n:
        raise NotUnitaryError("u is not unitary within 1e-10 * n")
    return uu @ arr @ uu.conj().T, Conjugation(uu @ c.s @ uu.T)
