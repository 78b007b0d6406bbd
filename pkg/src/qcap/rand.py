"""Seeded random states, unitaries, and channels for tests and demos."""

from __future__ import annotations

import numpy as np

from .qmath import DensityOperator, PureState, QuantumChannel


def generator(seed) -> np.random.Generator:
    return np.random.default_rng(seed)


def _ginibre(rng, rows: int, cols: int) -> np.ndarray:
    return rng.standard_normal((rows, cols)) + 1j * rng.standard_normal((rows, cols))


def random_pure(d: int, rng) -> PureState:
    v = _ginibre(rng, d, 1).reshape(-1)
    return PureState(v / np.linalg.norm(v))


def random_density(d: int, rng, rank=None) -> DensityOperator:
    r = d if rank is None else int(rank)
    g = _ginibre(rng, d, r)
    m = g @ g.conj().T
    return DensityOperator(m / m.trace())


def random_unitary(d: int, rng) -> np.ndarray:
    q, r = np.linalg.qr(_ginibre(rng, d, d))
    # fix column phases so the distribution is Haar
    return q * (np.diagonal(r) / np.abs(np.diagonal(r)))


def random_channel(d_in: int, d_out: int, env: int, rng) -> QuantumChannel:
    """Haar-random isometry split into `env` Kraus blocks of shape (d_out, d_in)."""
    if d_out * env < d_in:
        raise ValueError("d_out * env must be at least d_in for an isometry")
    g = _ginibre(rng, d_out * env, d_in)
    q, r = np.linalg.qr(g)
    q = q * (np.diagonal(r) / np.abs(np.diagonal(r)))
    return QuantumChannel([q[k * d_out:(k + 1) * d_out, :] for k in range(env)])
