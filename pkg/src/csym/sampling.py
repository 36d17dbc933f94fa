"""Seeded random sources: Haar unitaries and deterministic seed splitting."""

from __future__ import annotations

import numpy as np


def rng_from(seed) -> np.random.Generator:
    """Generator from an int seed or a tuple of ints (namespaced seeding)."""
    return np.random.default_rng(seed)


def child_seed(seed: int, *path: int) -> int:
    """64-bit child seed for (seed, *path); independent of evaluation order."""
    ss = np.random.SeedSequence((int(seed),) + tuple(int(p) for p in path))
    return int(ss.generate_state(1, np.uint64)[0])


def complex_gaussian(rng: np.random.Generator, shape) -> np.ndarray:
    return (rng.standard_normal(shape) + 1j * rng.standard_normal(shape)) / np.sqrt(2.0)


def haar_unitary(n: int, rng: np.random.Generator) -> np.ndarray:
    """Haar-distributed unitary via QR of a complex Ginibre matrix.

    Columns are rephased so the R factor has positive diagonal, which makes
    the distribution exactly Haar and the output a deterministic function
    of the Gaussian draws.
    """
    z = complex_gaussian(rng, (n, n))
    q, r = np.linalg.qr(z)
    d = np.diagonal(r)
    ph = np.where(np.abs(d) > 0, d / np.abs(np.where(np.abs(d) > 0, d, 1.0)), 1.0)
    return q * ph
