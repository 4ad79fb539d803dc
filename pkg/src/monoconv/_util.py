"""Small shared helpers."""

from __future__ import annotations

import numpy as np

TWO_PI = 2.0 * np.pi


def canonical_angle(theta: float) -> float:
    """Map an angle to the canonical half-open interval [0, 2*pi)."""
    a = float(np.mod(theta, TWO_PI))
    return 0.0 if a == TWO_PI else a


def ring_grid(radii, n_angles: int) -> np.ndarray:
    """Points r*exp(2*pi*i*j/n_angles) for every radius, as a flat array."""
    th = TWO_PI * np.arange(n_angles) / n_angles
    ring = np.exp(1j * th)
    return np.concatenate([r * ring for r in radii])


def toeplitz_from_moments(moments, size: int) -> np.ndarray:
    """Hermitian Toeplitz matrix T[j, k] = m_{j-k} with m_0 = 1, m_{-k} = conj(m_k).

    ``moments`` holds m_1, m_2, ... and must cover index size - 1.
    """
    m = np.concatenate(([1.0 + 0.0j], np.asarray(moments, dtype=np.complex128)))
    idx = np.arange(size)
    diff = idx[:, None] - idx[None, :]
    t = m[np.abs(diff)]
    return np.where(diff >= 0, t, np.conj(t))
