"""Small-norm perturbations that preserve complex symmetry.

Two constructions:

* :func:`make_irreducible_cso` rotates into a basis fixed by the
  conjugation, spreads the spectrum of the real part so it becomes simple,
  and fills every entry of the imaginary part, after which only scalars can
  commute with the result.  The perturbation norm stays strictly below the
  requested budget.
* :func:`remove_point` adds a rank-k rotation of the kernel of T - lambda0
  (scaled to eps/2) that pushes lambda0 out of the spectrum while keeping
  the same conjugation as a witness; :func:`remove_points` applies it
  sequentially over a geometric budget schedule.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .commutant import commutant_dimension
from .conjugation import Conjugation, c_real_basis
from .errors import (
    BudgetExhaustedError,
    DegenerateKernelError,
    EpsTooSmallError,
    NotCSymmetricError,
)
from .matcore import (
    as_cmatrix,
    eig_general,
    frobenius,
    null_space_basis,
    operator_norm,
    svd,
)
from .symmetry import CERTIFICATE_TOL, CsoCertificate, c_symmetry_residual

#: relative floor under which a removed point counts as still spectral
SIGMA_MIN_FLOOR = 1e-10


@dataclass(frozen=True)
class PerturbationResult:
    k: np.ndarray
    perturbed: np.ndarray
    certificate: CsoCertificate
    norm_bound: float
    diagnostics: dict


def make_irreducible_cso(
    t,
    c: Conjugation,
    eps: float,
    *,
    residual_tol: float = CERTIFICATE_TOL,
    basis_seed: int = 0,
    with_commutant: bool = True,
    commutant_tol: float = 1e-8,
) -> PerturbationResult:
    """Perturb a certified matrix into an irreducible one, ``|K| < eps``.

    Steps: rotate into a basis fixed by ``c`` (where the matrix is
    symmetric and splits as A + iB with A, B real symmetric), orthogonally
    diagonalize A, add the offsets ``(j-1) * eps / (4n)`` so the diagonal
    becomes strictly increasing, and raise every entry of B below
    ``f = eps / (5 n^2)`` to magnitude f (sign of 0 taken positive).  The
    result has a simple real part and an entrywise nonzero imaginary part,
    so any commuting projection is scalar.  All choices are deterministic.
    """
    arr = as_cmatrix(t)
    n = arr.shape[0]
    if eps <= 0:
        raise ValueError("eps must be positive")
    norm_t = operator_norm(arr)
    if eps < 1e3 * np.finfo(np.float64).eps * (1.0 + norm_t):
        raise EpsTooSmallError(f"eps={eps} would drown in rounding for norm {norm_t:.3g}")
    res_in = c_symmetry_residual(arr, c)
    if res_in > residual_tol:
        raise NotCSymmetricError(f"certificate residual {res_in:.3g} exceeds {residual_tol:.3g}")

    u = c_real_basis(c, seed=basis_seed)
    t0 = u.conj().T @ arr @ u
    if frobenius(t0 - t0.T) > 1e-8 * (1.0 + frobenius(arr)):
        raise NotCSymmetricError("matrix is not symmetric in the fixed-point basis")
    a = np.real(t0)
    a = 0.5 * (a + a.T)
    b = np.imag(t0)
    b = 0.5 * (b + b.T)

    d, q = np.linalg.eigh(a)  # ascending; q real orthogonal, keeps the basis fixed by c
    b1 = q.T @ b @ q
    b1 = 0.5 * (b1 + b1.T)

    shift = (eps / (4.0 * n)) * np.arange(n, dtype=np.float64)
    fill = eps / (5.0 * n * n)
    signs = np.where(b1 >= 0.0, 1.0, -1.0)
    b2 = np.where(np.abs(b1) < fill, fill * signs, b1)

    k_basis = np.diag(shift).astype(np.complex128) + 1j * (b2 - b1)
    rot = u @ q
    k = rot @ k_basis @ rot.conj().T
    perturbed = arr + k
    norm_k = operator_norm(k)
    cert = CsoCertificate(c, c_symmetry_residual(perturbed, c))
    diagnostics = {
        "a_values": [float(x) for x in (d + shift)],
        "fill_magnitude": float(fill),
        "basis": rot,
        "input_residual": float(res_in),
    }
    if with_commutant:
        report = commutant_dimension(perturbed, commutant_tol)
        diagnostics["commutant_dimension"] = report.dimension
        diagnostics["commutant_gap"] = report.gap
        diagnostics["commutant_ambiguous"] = report.ambiguous
    return PerturbationResult(k, perturbed, cert, float(norm_k), diagnostics)


def remove_point(
    t,
    c: Conjugation,
    lambda0,
    eps: float,
    *,
    kernel_tol: float = 1e-10,
    spectral_tol: float = 1e-8,
    residual_tol: float = CERTIFICATE_TOL,
) -> PerturbationResult:
    """Push ``lambda0`` out of the spectrum with ``|K| = eps/2``.

    With {e_i} an orthonormal kernel basis of T - lambda0, the perturbation
    ``K = (eps/2) * sum_i (C e_i) e_i*`` satisfies CKC = K* and makes
    T + K - lambda0 injective.  When lambda0 is not within ``spectral_tol``
    (relative) of the spectrum, K = 0 is returned and flagged as a no-op.
    """
    arr = as_cmatrix(t)
    n = arr.shape[0]
    if eps <= 0:
        raise ValueError("eps must be positive")
    res_in = c_symmetry_residual(arr, c)
    if res_in > residual_tol:
        raise NotCSymmetricError(f"certificate residual {res_in:.3g} exceeds {residual_tol:.3g}")
    lam = complex(lambda0)
    norm_t = operator_norm(arr)
    floor = SIGMA_MIN_FLOOR * max(1.0, norm_t)
    dist = float(np.min(np.abs(eig_general(arr) - lam)))
    if dist > spectral_tol * max(1.0, norm_t):
        cert = CsoCertificate(c, res_in)
        diagnostics = {
            "noop": True,
            "lambda0": [lam.real, lam.imag],
            "spectral_distance": dist,
            "sigma_floor": floor,
        }
        return PerturbationResult(np.zeros_like(arr), arr.copy(), cert, 0.0, diagnostics)

    kernel = null_space_basis(arr - lam * np.eye(n), kernel_tol)
    if kernel.shape[1] == 0:
        raise DegenerateKernelError(
            f"lambda0={lam} is spectral within {spectral_tol} but no singular value met "
            f"kernel_tol={kernel_tol}; tolerances conflict"
        )
    images = np.column_stack([c.apply(kernel[:, j]) for j in range(kernel.shape[1])])
    k = (eps / 2.0) * (images @ kernel.conj().T)
    perturbed = arr + k
    smin = float(svd(perturbed - lam * np.eye(n)).sigma[-1])
    cert = CsoCertificate(c, c_symmetry_residual(perturbed, c))
    diagnostics = {
        "noop": False,
        "lambda0": [lam.real, lam.imag],
        "kernel_dimension": int(kernel.shape[1]),
        "sigma_min": smin,
        "sigma_floor": floor,
        "sigma_min_ok": bool(smin > floor),
        "near_floor": bool(smin <= 10.0 * floor),
        "spectral_distance": dist,
    }
    return PerturbationResult(k, perturbed, cert, float(operator_norm(k)), diagnostics)


def remove_points(
    t,
    c: Conjugation,
    lambdas,
    eps: float,
    *,
    max_retries: int = 10,
    kernel_tol: float = 1e-10,
    spectral_tol: float = 1e-8,
    residual_tol: float = CERTIFICATE_TOL,
) -> PerturbationResult:
    """Remove several spectral points; total ``|K|`` stays strictly below eps.

    Point i gets budget ``eps / 2^(i+1)``.  After each step every previously
    removed (non no-op) point is rechecked against the singular-value floor;
    a violation halves that step's budget and retries, up to ``max_retries``
    times before raising :class:`BudgetExhaustedError` with the partial
    result attached.
    """
    arr = as_cmatrix(t)
    n = arr.shape[0]
    points = [complex(lam) for lam in lambdas]
    if not points:
        raise ValueError("lambdas must be nonempty")
    for i in range(len(points)):
        for j in range(i + 1, len(points)):
            if abs(points[i] - points[j]) <= 1e-8:
                raise ValueError("lambdas must be pairwise distinct (within 1e-8)")
    floor = SIGMA_MIN_FLOOR * max(1.0, operator_norm(arr))
    eye = np.eye(n)

    current = arr
    total_k = np.zeros_like(arr)
    removed: list[complex] = []
    steps: list[dict] = []
    for i, lam in enumerate(points):
        budget = eps / (2.0 ** (i + 1))
        accepted = None
        for attempt in range(max_retries + 1):
            step = remove_point(
                current,
                c,
                lam,
                budget,
                kernel_tol=kernel_tol,
                spectral_tol=spectral_tol,
                residual_tol=residual_tol,
            )
            bad = [
                mu
                for mu in removed
                if float(svd(step.perturbed - mu * eye).sigma[-1]) <= floor
            ]
            if not bad:
                accepted = step
                break
            budget /= 2.0
        if accepted is None:
            partial = PerturbationResult(
                total_k,
                current,
                CsoCertificate(c, c_symmetry_residual(current, c)),
                float(operator_norm(total_k)),
                {"steps": steps, "failed_point": [lam.real, lam.imag]},
            )
            raise BudgetExhaustedError(
                f"could not remove {lam} without disturbing earlier points", partial=partial
            )
        current = accepted.perturbed
        total_k = total_k + accepted.k
        if not accepted.diagnostics.get("noop", False):
            removed.append(lam)
        steps.append(
            {
                "lambda0": [lam.real, lam.imag],
                "budget": budget,
                "retries": attempt,
                "noop": accepted.diagnostics.get("noop", False),
                "sigma_min": accepted.diagnostics.get("sigma_min"),
            }
        )

    cert = CsoCertificate(c, c_symmetry_residual(current, c))
    diagnostics = {"steps": steps, "sigma_floor": floor, "points_removed": len(removed)}
    return PerturbationResult(total_k, current, cert, float(operator_norm(total_k)), diagnostics)
