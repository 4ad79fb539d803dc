"""Multiplicative monotone convolution of circle measures.

The convolution mu |> nu is the measure whose K-transform is the
composition K_mu(K_nu(z)).  It is associative and affine in the first
argument, but not commutative.
"""

from __future__ import annotations

import numpy as np

from .errors import DomainError
from .measure import CircleMeasure, k_transform, moments_from_k
from .series import DEFAULT_ORDER

__all__ = ["monotone_convolve", "affine_mixture_convolve"]


def monotone_convolve(mu: CircleMeasure, nu: CircleMeasure, n: int = DEFAULT_ORDER) -> CircleMeasure:
    """Moments of mu |> nu through order n, via K-transform composition.

    The result is always moment-represented; composition preserves only
    the analytic data, so no re-atomization is attempted.
    """
    k = k_transform(mu, n).compose(k_transform(nu, n))
    return CircleMeasure.from_moments(moments_from_k(k, n))


def affine_mixture_convolve(mu: CircleMeasure, nu: CircleMeasure, n: int = DEFAULT_ORDER) -> CircleMeasure:
    """mu |> nu computed as the mixture sum_j w_j (delta_{x_j} |> nu).

    Uses the affinity of the convolution in its first argument; ``mu`` must
    be atomic.  Serves as an independent cross-check of
    :func:`monotone_convolve`.
    """
    if not mu.is_atomic:
        raise DomainError("affine mixture requires an atomic first argument")
    angles, weights = mu.atoms
    k_nu = k_transform(nu, n).series
    total = np.zeros(n, dtype=np.complex128)
    for theta, w in zip(angles, weights):
        scaled = np.exp(1j * theta) * k_nu  # K of delta_x composed with K_nu
        psi = scaled * (1 - scaled).reciprocal()
        total += w * psi.coeffs[1:]
    return CircleMeasure.from_moments(total)
