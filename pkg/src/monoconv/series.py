"""Truncated complex power series arithmetic.

Every analytic transform in this package (moment generating functions,
K-transforms, vector fields, semigroup flows) is carried numerically as a
Taylor polynomial around 0, together with its truncation order N.  The
order is explicit in every operation: binary operations between series of
different orders truncate to the smaller order, because a composition or
product only determines that many coefficients reliably.  Accessing a
coefficient beyond the truncation order raises instead of silently
returning zero.

Coefficients are double-precision complex numbers.  Series are immutable;
every operation returns a new instance.
"""

from __future__ import annotations

import numpy as np

from .errors import DomainError

#: Default truncation order used throughout the package.
DEFAULT_ORDER = 32


class TruncatedSeries:
    """A polynomial c_0 + c_1 z + ... + c_N z^N standing in for a power series.

    Parameters
    ----------
    coeffs : sequence of complex
        Coefficients c_0..c_N in increasing order.  N = len(coeffs) - 1.
    """

    __slots__ = ("_c",)

    def __init__(self, coeffs):
        arr = np.array(coeffs, dtype=np.complex128)
        if arr.ndim != 1 or arr.size == 0:
            raise ValueError("coefficients must be a non-empty 1-d sequence")
        arr.setflags(write=False)
        self._c = arr

    # -- constructors ------------------------------------------------------

    @classmethod
    def zero(cls, order: int = DEFAULT_ORDER) -> "TruncatedSeries":
        return cls(np.zeros(order + 1))

    @classmethod
    def constant(cls, value, order: int = DEFAULT_ORDER) -> "TruncatedSeries":
        c = np.zeros(order + 1, dtype=np.complex128)
        c[0] = value
        return cls(c)

    @classmethod
    def identity(cls, order: int = DEFAULT_ORDER) -> "TruncatedSeries":
        """The series z."""
        return cls.monomial(1, order)

    @classmethod
    def monomial(cls, degree: int, order: int = DEFAULT_ORDER) -> "TruncatedSeries":
        if not 0 <= degree <= order:
            raise ValueError("monomial degree must lie within the truncation order")
        c = np.zeros(order + 1, dtype=np.complex128)
        c[degree] = 1.0
        return cls(c)

    # -- basic access ------------------------------------------------------

    @property
    def coeffs(self) -> np.ndarray:
        """Read-only coefficient array c_0..c_N."""
        return self._c

    @property
    def order(self) -> int:
        return self._c.size - 1

    def __getitem__(self, k: int) -> complex:
        if not 0 <= k <= self.order:
            raise IndexError(
                f"coefficient {k} requested but series is truncated at order {self.order}"
            )
        return complex(self._c[k])

    def truncate(self, order: int) -> "TruncatedSeries":
        """Drop coefficients above ``order`` (never extends)."""
        if order >= self.order:
            return self
        if order < 0:
            raise ValueError("truncation order must be >= 0")
        return TruncatedSeries(self._c[: order + 1])

    # -- arithmetic --------------------------------------------------------

    def __add__(self, other):
        if isinstance(other, TruncatedSeries):
            n = min(self.order, other.order)
            return TruncatedSeries(self._c[: n + 1] + other._c[: n + 1])
        c = self._c.copy()
        c[0] += other
        return TruncatedSeries(c)

    __radd__ = __add__

    def __neg__(self):
        return TruncatedSeries(-self._c)

    def __sub__(self, other):
        return self + (-other if isinstance(other, TruncatedSeries) else -complex(other))

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, TruncatedSeries):
            n = min(self.order, other.order)
            prod = np.convolve(self._c[: n + 1], other._c[: n + 1])[: n + 1]
            return TruncatedSeries(prod)
        return TruncatedSeries(self._c * complex(other))

    __rmul__ = __mul__

    def reciprocal(self) -> "TruncatedSeries":
        """Multiplicative inverse through order N; requires c_0 != 0."""
        a = self._c
        if a[0] == 0:
            raise DomainError("reciprocal of a series with zero constant term")
        n = self.order
        b = np.zeros(n + 1, dtype=np.complex128)
        b[0] = 1.0 / a[0]
        for k in range(1, n + 1):
            b[k] = -b[0] * np.dot(a[1 : k + 1], b[k - 1 :: -1])
        return TruncatedSeries(b)

    def derivative(self) -> "TruncatedSeries":
        """Formal derivative; the order drops by one."""
        if self.order == 0:
            return TruncatedSeries([0.0])
        k = np.arange(1, self.order + 1)
        return TruncatedSeries(self._c[1:] * k)

    def compose(self, inner: "TruncatedSeries") -> "TruncatedSeries":
        """Coefficients of self(inner(z)) through order min(N_self, N_inner).

        ``inner`` must have zero constant term, otherwise the truncated
        composition would depend on coefficients beyond the stored order.
        """
        if inner._c[0] != 0:
            raise DomainError("inner series of a composition must have zero constant term")
        n = min(self.order, inner.order)
        g = inner.truncate(n)
        # Horner on series: acc <- acc*g + c_k, from the top coefficient down.
        acc = TruncatedSeries.zero(n)
        for ck in self._c[n::-1]:
            acc = acc * g + ck
        return acc

    # -- evaluation --------------------------------------------------------

    def __call__(self, z) -> complex:
        """Horner evaluation of the truncated polynomial at ``z``.

        The caller picks |z| small enough for the truncation to be
        acceptable: when all |c_k| <= 1 the dropped tail is bounded by
        |z|^(N+1) / (1 - |z|).
        """
        acc = 0.0 + 0.0j
        for ck in self._c[::-1]:
            acc = acc * z + ck
        return complex(acc)

    # -- comparison / repr -------------------------------------------------

    def isclose(self, other: "TruncatedSeries", tol: float = 1e-12) -> bool:
        n = min(self.order, other.order)
        return bool(np.max(np.abs(self._c[: n + 1] - other._c[: n + 1])) <= tol)

    def __repr__(self):
        head = ", ".join(f"{c:.3g}" for c in self._c[:4])
        tail = ", ..." if self.order > 3 else ""
        return f"TruncatedSeries([{head}{tail}], order={self.order})"
