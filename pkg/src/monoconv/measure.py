"""Probability measures on the unit circle and their K-transforms.

A measure is represented either by weighted atoms (angle, weight) or by a
finite moment sequence m_k = integral of x^k.  The moment generating
function psi(z) = sum_{k>=1} m_k z^k determines the K-transform
K = psi / (1 + psi), a holomorphic self-map of the disk with K(0) = 0 that
characterizes the measure completely.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ._util import TWO_PI, canonical_angle, ring_grid, toeplitz_from_moments
from .errors import DomainError
from .series import DEFAULT_ORDER, TruncatedSeries

_WEIGHT_TOL = 1e-12
_MOMENT_TOL = 1e-9


class CircleMeasure:
    """A probability measure on the unit circle.

    Construct through :meth:`from_atoms`, :meth:`from_moments`,
    :meth:`dirac`, :meth:`haar` or :meth:`uniform_atoms`.  Instances are
    immutable and safe to share.
    """

    __slots__ = ("_angles", "_weights", "_moments")

    def __init__(self, angles=None, weights=None, moments=None):
        if moments is not None:
            if angles is not None or weights is not None:
                raise ValueError("give either atoms or moments, not both")
            m = np.array(moments, dtype=np.complex128)
            if m.ndim != 1 or m.size == 0:
                raise ValueError("moment sequence must be a non-empty 1-d sequence")
            if np.max(np.abs(m)) > 1.0 + _MOMENT_TOL:
                raise ValueError("moments of a circle measure must satisfy |m_k| <= 1")
            m.setflags(write=False)
            self._angles = None
            self._weights = None
            self._moments = m
            return
        a = np.array([canonical_angle(t) for t in np.atleast_1d(angles)], dtype=float)
        w = np.array(weights, dtype=float)
        if a.shape != w.shape or a.ndim != 1 or a.size == 0:
            raise ValueError("angles and weights must be 1-d sequences of equal length")
        if np.any(w < 0):
            raise ValueError("atom weights must be nonnegative")
        if abs(w.sum() - 1.0) > _WEIGHT_TOL:
            raise ValueError(f"atom weights must sum to 1 (got {float(w.sum())!r})")
        a.setflags(write=False)
        w.setflags(write=False)
        self._angles = a
        self._weights = w
        self._moments = None

    # -- constructors ------------------------------------------------------

    @classmethod
    def from_atoms(cls, angles, weights) -> "CircleMeasure":
        return cls(angles=angles, weights=weights)

    @classmethod
    def from_moments(cls, moments) -> "CircleMeasure":
        return cls(moments=moments)

    @classmethod
    def dirac(cls, angle: float) -> "CircleMeasure":
        """Point mass at exp(i*angle)."""
        return cls(angles=[angle], weights=[1.0])

    @classmethod
    def haar(cls, order: int = DEFAULT_ORDER) -> "CircleMeasure":
        """Normalized arc length, as the all-zero moment sequence m_1..m_order."""
        return cls(moments=np.zeros(order))

    @classmethod
    def uniform_atoms(cls, m: int) -> "CircleMeasure":
        """m equal atoms at the m-th roots of unity (atomic Haar quadrature)."""
        if m < 1:
            raise ValueError("need at least one atom")
        return cls(angles=TWO_PI * np.arange(m) / m, weights=np.full(m, 1.0 / m))

    # -- structure ---------------------------------------------------------

    @property
    def is_atomic(self) -> bool:
        return self._angles is not None

    @property
    def atoms(self):
        """(angles, weights) arrays; raises for moment-represented measures."""
        if not self.is_atomic:
            raise DomainError("measure is represented by moments, not atoms")
        return self._angles, self._weights

    @property
    def n_moments(self) -> int:
        """Largest moment order available without recomputation limits."""
        if self.is_atomic:
            return np.iinfo(np.int64).max
        return self._moments.size

    def moments(self, n: int) -> np.ndarray:
        """Moments m_1..m_n; for atomic measures m_k = sum_j w_j e^{i k angle_j}."""
        if n < 1:
            raise ValueError("moment order must be >= 1")
        if self.is_atomic:
            k = np.arange(1, n + 1)
            return np.exp(1j * np.outer(k, self._angles)) @ self._weights.astype(complex)
        if n > self._moments.size:
            raise DomainError(
                f"measure stores {self._moments.size} moments, {n} requested"
            )
        return self._moments[:n].copy()

    def psi_series(self, n: int = DEFAULT_ORDER) -> TruncatedSeries:
        """Moment generating series psi(z) = sum_{k=1..n} m_k z^k."""
        c = np.zeros(n + 1, dtype=np.complex128)
        c[1:] = self.moments(n)
        return TruncatedSeries(c)

    def __repr__(self):
        if self.is_atomic:
            return f"CircleMeasure(atoms={self._angles.size})"
        return f"CircleMeasure(moments={self._moments.size})"


@dataclass(frozen=True)
class ClosedForm:
    """Tag enabling exact evaluation of special K-transforms."""

    kind: str  # "dirac" | "haar" | "monomial"
    angle: float = 0.0
    degree: int = 1

    @staticmethod
    def dirac(angle: float) -> "ClosedForm":
        return ClosedForm("dirac", angle=canonical_angle(angle))

    @staticmethod
    def haar() -> "ClosedForm":
        return ClosedForm("haar")

    @staticmethod
    def monomial(degree: int) -> "ClosedForm":
        return ClosedForm("monomial", degree=degree)


@dataclass(frozen=True)
class KTransform:
    """A holomorphic self-map of the disk with K(0) = 0, held as a series.

    ``closed_form`` optionally tags measures whose transform has an exact
    expression (point masses, Haar, uniform roots of unity), in which case
    pointwise evaluation bypasses the truncated polynomial.
    """

    series: TruncatedSeries
    closed_form: ClosedForm | None = None

    def __post_init__(self):
        if self.series.coeffs[0] != 0:
            raise DomainError("a K-transform must vanish at the origin")

    # -- constructors ------------------------------------------------------

    @classmethod
    def from_coefficients(cls, coeffs, closed_form=None) -> "KTransform":
        return cls(TruncatedSeries(coeffs), closed_form)

    @classmethod
    def identity(cls, order: int = DEFAULT_ORDER) -> "KTransform":
        return cls(TruncatedSeries.identity(order), ClosedForm.dirac(0.0))

    @classmethod
    def dirac(cls, angle: float, order: int = DEFAULT_ORDER) -> "KTransform":
        """K(z) = e^{i*angle} z, the transform of a point mass."""
        return cls(
            np.exp(1j * angle) * TruncatedSeries.identity(order),
            ClosedForm.dirac(angle),
        )

    @classmethod
    def haar(cls, order: int = DEFAULT_ORDER) -> "KTransform":
        return cls(TruncatedSeries.zero(order), ClosedForm.haar())

    @classmethod
    def monomial(cls, degree: int, order: int = DEFAULT_ORDER) -> "KTransform":
        """K(z) = z^degree, the transform of the uniform measure on the
        degree-th roots of unity."""
        return cls(TruncatedSeries.monomial(degree, order), ClosedForm.monomial(degree))

    # -- evaluation --------------------------------------------------------

    @property
    def order(self) -> int:
        return self.series.order

    def eval(self, z):
        """K(z), exact for tagged closed forms, Horner otherwise.

        Accepts scalars or numpy arrays.
        """
        cf = self.closed_form
        if cf is not None:
            if cf.kind == "dirac":
                return np.exp(1j * cf.angle) * z
            if cf.kind == "haar":
                return np.zeros_like(np.asarray(z, dtype=complex)) if np.ndim(z) else 0j
            if cf.kind == "monomial":
                return np.asarray(z, dtype=complex) ** cf.degree if np.ndim(z) else z**cf.degree
        return self._horner(self.series.coeffs, z)

    def derivative_eval(self, z):
        """K'(z), matching the evaluation rule of :meth:`eval`."""
        cf = self.closed_form
        if cf is not None:
            if cf.kind == "dirac":
                return np.full_like(np.asarray(z, dtype=complex), np.exp(1j * cf.angle)) if np.ndim(z) else np.exp(1j * cf.angle)
            if cf.kind == "haar":
                return np.zeros_like(np.asarray(z, dtype=complex)) if np.ndim(z) else 0j
            if cf.kind == "monomial":
                d = cf.degree
                return d * (np.asarray(z, dtype=complex) ** (d - 1)) if np.ndim(z) else d * z ** (d - 1)
        return self._horner(self.series.derivative().coeffs, z)

    @staticmethod
    def _horner(coeffs, z):
        z = np.asarray(z, dtype=complex)
        acc = np.zeros_like(z)
        for ck in coeffs[::-1]:
            acc = acc * z + ck
        return acc if acc.ndim else complex(acc)

    @property
    def derivative_at_zero(self) -> complex:
        return self.series[1]

    def compose(self, other: "KTransform") -> "KTransform":
        """The K-transform z -> self(other(z))."""
        cf = _compose_closed_forms(self.closed_form, other.closed_form)
        return KTransform(self.series.compose(other.series), cf)


def _compose_closed_forms(outer, inner):
    if outer is not None and outer.kind == "haar":
        return ClosedForm.haar()
    if inner is not None and inner.kind == "haar":
        # outer(0) = 0 for every K-transform
        return ClosedForm.haar()
    if outer is None or inner is None:
        return None
    if outer.kind == "dirac" and inner.kind == "dirac":
        return ClosedForm.dirac(outer.angle + inner.angle)
    if outer.kind == "monomial" and inner.kind == "monomial":
        return ClosedForm.monomial(outer.degree * inner.degree)
    return None


# -- transforms ------------------------------------------------------------


def k_transform(mu: CircleMeasure, n: int | None = None) -> KTransform:
    """K-transform of ``mu`` through order ``n``: K = psi / (1 + psi).

    When ``n`` is omitted it defaults to 32, capped at the stored moment
    count for moment-represented measures.
    """
    if n is None:
        n = DEFAULT_ORDER if mu.is_atomic else min(DEFAULT_ORDER, mu.n_moments)
    if mu.is_atomic:
        angles, weights = mu.atoms
        if angles.size == 1:
            return KTransform.dirac(angles[0], n)
    elif not np.any(mu.moments(mu.n_moments)):
        return KTransform.haar(n)
    psi = mu.psi_series(n)
    return KTransform(psi * (1 + psi).reciprocal())


def moments_from_k(k: KTransform, n: int = DEFAULT_ORDER) -> np.ndarray:
    """Moments m_1..m_n of the measure with K-transform ``k``.

    Inverts K = psi/(1+psi) as psi = K/(1-K) and reads the coefficients.
    """
    if k.series.order < n:
        cf = k.closed_form
        if cf is None:
            raise DomainError(
                f"K-transform series has order {k.series.order}, cannot produce {n} moments"
            )
        k = _regenerate(cf, n)
    ks = k.series.truncate(n)
    psi = ks * (1 - ks).reciprocal()
    return psi.coeffs[1:].copy()


def _regenerate(cf: ClosedForm, order: int) -> KTransform:
    if cf.kind == "dirac":
        return KTransform.dirac(cf.angle, order)
    if cf.kind == "haar":
        return KTransform.haar(order)
    return KTransform.monomial(cf.degree, order)


@dataclass(frozen=True)
class KValidationReport:
    """Outcome of the three K-transform validity checks."""

    k_at_zero_ok: bool
    schur_bound_ok: bool
    toeplitz_psd_ok: bool
    max_grid_modulus: float
    min_toeplitz_eigenvalue: float

    @property
    def all_ok(self) -> bool:
        return self.k_at_zero_ok and self.schur_bound_ok and self.toeplitz_psd_ok


def validate_k(k) -> KValidationReport:
    """Diagnostic checks that ``k`` looks like the transform of a measure.

    Checks K(0) = 0, |K| < 1 + 1e-9 on three rings of radius 0.3/0.6/0.9
    with 64 angles each, and positive semidefiniteness (eigenvalue floor
    -1e-9) of the Toeplitz moment matrix built from the inverted moments.
    Accepts a :class:`KTransform` or a bare :class:`TruncatedSeries` (the
    latter so that candidates violating K(0) = 0 can still be diagnosed).
    """
    if isinstance(k, TruncatedSeries):
        series = k
        transform = KTransform(series) if series.coeffs[0] == 0 else None
    else:
        series = k.series
        transform = k
    k_at_zero_ok = series.coeffs[0] == 0

    grid = ring_grid((0.3, 0.6, 0.9), 64)
    if transform is not None:
        vals = transform.eval(grid)
    else:
        vals = KTransform._horner(series.coeffs, grid)
    max_mod = float(np.max(np.abs(vals)))
    schur_ok = max_mod < 1.0 + 1e-9

    min_eig = np.inf
    toeplitz_ok = True
    if k_at_zero_ok:
        m = moments_from_k(transform, series.order)
        size = m.size // 2 + 1
        if size >= 2:
            eigs = np.linalg.eigvalsh(toeplitz_from_moments(m, size))
            min_eig = float(eigs[0])
            toeplitz_ok = min_eig >= -1e-9
    else:
        toeplitz_ok = False
        min_eig = -np.inf

    return KValidationReport(
        k_at_zero_ok=bool(k_at_zero_ok),
        schur_bound_ok=bool(schur_ok),
        toeplitz_psd_ok=bool(toeplitz_ok),
        max_grid_modulus=max_mod,
        min_toeplitz_eigenvalue=min_eig,
    )


def poisson_density(mu: CircleMeasure, r: float, grid_size: int) -> np.ndarray:
    """Poisson-kernel smoothed density on the uniform angle grid.

    Returns p(theta_j) = 1 + 2 sum_k Re(m_k r^k e^{-i k theta_j}) for
    theta_j = 2*pi*j/grid_size, a density with respect to d(theta)/(2*pi).
    The trapezoid integral over the grid equals 1 exactly as long as
    grid_size exceeds the number of moments used.
    """
    if not 0.0 < r < 1.0:
        raise DomainError("Poisson radius must lie in (0, 1)")
    if grid_size < 1:
        raise ValueError("grid_size must be positive")
    if mu.is_atomic:
        # pick enough moments for the geometric tail to fall below 1e-9
        n = DEFAULT_ORDER
        while 2.0 * r ** (n + 1) / (1.0 - r) > 1e-9 and n < 4096:
            n *= 2
    else:
        n = mu.n_moments
    m = mu.moments(n)
    kk = np.arange(1, n + 1)
    theta = TWO_PI * np.arange(grid_size) / grid_size
    phases = np.exp(-1j * np.outer(theta, kk))
    return 1.0 + 2.0 * np.real(phases @ (m * r**kk))
