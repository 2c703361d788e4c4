"""Truncated-Taylor (jet) arithmetic.

A jet stores the Taylor coefficients c_0..c_K of a function at a point:
c_j = f^(j)(center) / j!.  Propagating jets through elementary operations
applies differential operators of arbitrary order exactly (to rounding),
which is how the high-order ladder chains are realized numerically.

Conventions:
  - binary operations truncate to the smaller order; nothing ever reads
    beyond a jet's stored order;
  - differentiation lowers the order by exactly 1;
  - coefficients are complex128 throughout (real inputs stay exactly real).
"""

from __future__ import annotations

import cmath
import math

import numpy as np

from .errors import EvaluationDomainError

__all__ = ["Jet", "lift", "const", "compose_series"]


class Jet:
    """Truncated Taylor expansion of one function at one point."""

    __slots__ = ("center", "coeffs")

    def __init__(self, center: float, coeffs):
        self.center = float(center)
        self.coeffs = np.asarray(coeffs, dtype=complex)
        if self.coeffs.ndim != 1 or self.coeffs.size == 0:
            raise EvaluationDomainError("jet needs a nonempty 1-d coefficient array")

    @property
    def order(self) -> int:
        return self.coeffs.size - 1

    @property
    def value(self) -> complex:
        return complex(self.coeffs[0])

    def deriv(self, k: int) -> complex:
        """k-th derivative at the center (coefficient times k!)."""
        if k > self.order:
            raise EvaluationDomainError(
                f"jet of order {self.order} cannot produce derivative {k}")
        return complex(self.coeffs[k]) * math.factorial(k)

    def truncate(self, order: int) -> "Jet":
        if order > self.order:
            raise EvaluationDomainError(
                f"cannot extend jet of order {self.order} to {order}")
        return Jet(self.center, self.coeffs[: order + 1])

    def real_part(self) -> "Jet":
        return Jet(self.center, self.coeffs.real.astype(complex))

    def imag_part(self) -> "Jet":
        return Jet(self.center, self.coeffs.imag.astype(complex))

    def differentiate(self) -> "Jet":
        """d/dx, order K -> K-1."""
        if self.order < 1:
            raise EvaluationDomainError("cannot differentiate an order-0 jet")
        j = np.arange(1, self.order + 1)
        return Jet(self.center, self.coeffs[1:] * j)

    # -- ring operations ---------------------------------------------------

    def _match(self, other: "Jet") -> int:
        if self.center != other.center:
            raise EvaluationDomainError("jet centers differ")
        return min(self.order, other.order)

    def __add__(self, other):
        if isinstance(other, Jet):
            n = self._match(other) + 1
            return Jet(self.center, self.coeffs[:n] + other.coeffs[:n])
        out = self.coeffs.copy()
        out[0] += other
        return Jet(self.center, out)

    __radd__ = __add__

    def __neg__(self):
        return Jet(self.center, -self.coeffs)

    def __sub__(self, other):
        return self + (-other if isinstance(other, Jet) else -complex(other))

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, Jet):
            n = self._match(other) + 1
            prod = np.convolve(self.coeffs[:n], other.coeffs[:n])
            return Jet(self.center, prod[:n])
        return Jet(self.center, self.coeffs * other)

    __rmul__ = __mul__

    def __truediv__(self, other):
        if isinstance(other, Jet):
            n = self._match(other) + 1
            a = self.coeffs[:n]
            b = other.coeffs[:n]
            if b[0] == 0:
                raise EvaluationDomainError("jet division by zero leading coefficient")
            c = np.empty(n, dtype=complex)
            c[0] = a[0] / b[0]
            for k in range(1, n):
                c[k] = (a[k] - np.dot(b[1 : k + 1], c[k - 1 :: -1])) / b[0]
            return Jet(self.center, c)
        return Jet(self.center, self.coeffs / other)

    def __rtruediv__(self, other):
        return const(other, self.order, self.center) / self

    # -- elementary functions ----------------------------------------------
    # Standard Taylor recurrences: for f' = g(f) u', the degree-k coefficient
    # follows from the convolution of u' with previously computed ones.

    def exp(self) -> "Jet":
        u = self.coeffs
        n = u.size
        ju = u * np.arange(n)
        e = np.empty(n, dtype=complex)
        e[0] = cmath.exp(u[0])
        for k in range(1, n):
            e[k] = np.dot(ju[1 : k + 1], e[k - 1 :: -1]) / k
        return Jet(self.center, e)

    def _sin_cos(self):
        u = self.coeffs
        n = u.size
        ju = u * np.arange(n)
        s = np.empty(n, dtype=complex)
        c = np.empty(n, dtype=complex)
        s[0] = cmath.sin(u[0])
        c[0] = cmath.cos(u[0])
        for k in range(1, n):
            s[k] = np.dot(ju[1 : k + 1], c[k - 1 :: -1]) / k
            c[k] = -np.dot(ju[1 : k + 1], s[k - 1 :: -1]) / k
        return Jet(self.center, s), Jet(self.center, c)

    def sin(self) -> "Jet":
        return self._sin_cos()[0]

    def cos(self) -> "Jet":
        return self._sin_cos()[1]

    def _sinh_cosh(self):
        u = self.coeffs
        n = u.size
        ju = u * np.arange(n)
        sh = np.empty(n, dtype=complex)
        ch = np.empty(n, dtype=complex)
        sh[0] = cmath.sinh(u[0])
        ch[0] = cmath.cosh(u[0])
        for k in range(1, n):
            sh[k] = np.dot(ju[1 : k + 1], ch[k - 1 :: -1]) / k
            ch[k] = np.dot(ju[1 : k + 1], sh[k - 1 :: -1]) / k
        return Jet(self.center, sh), Jet(self.center, ch)

    def sinh(self) -> "Jet":
        return self._sinh_cosh()[0]

    def cosh(self) -> "Jet":
        return self._sinh_cosh()[1]

    def tanh(self) -> "Jet":
        sh, ch = self._sinh_cosh()
        return sh / ch

    def sech(self) -> "Jet":
        return 1.0 / self.cosh()

    def cot(self) -> "Jet":
        s, c = self._sin_cos()
        if s.coeffs[0] == 0:
            raise EvaluationDomainError("cot evaluated at a pole (sin = 0)")
        return c / s

    def powr(self, r: float) -> "Jet":
        """self**r for a real exponent; requires positive real leading value."""
        u = self.coeffs
        u0 = u[0]
        if u0.imag != 0.0 or u0.real <= 0.0:
            raise EvaluationDomainError(
                f"powr base leading coefficient must be positive real, got {u0}")
        n = u.size
        p = np.empty(n, dtype=complex)
        p[0] = u0.real**r
        for k in range(1, n):
            w = r * np.arange(1, k + 1) - (k - np.arange(1, k + 1))
            p[k] = np.dot(w * u[1 : k + 1], p[k - 1 :: -1]) / (k * u0)
        return Jet(self.center, p)


def lift(x: float, order: int) -> Jet:
    """Jet of the identity function at x: c_0 = x, c_1 = 1, rest 0."""
    c = np.zeros(order + 1, dtype=complex)
    c[0] = x
    if order >= 1:
        c[1] = 1.0
    return Jet(x, c)


def const(value: complex, order: int, center: float = 0.0) -> Jet:
    c = np.zeros(order + 1, dtype=complex)
    c[0] = value
    return Jet(center, c)


def compose_series(derivs, inner: Jet) -> Jet:
    """Compose an outer function, given by derivatives at inner.value, with
    an inner jet: sum_k derivs[k]/k! * (inner - inner_0)^k via Horner.

    `derivs` are plain derivatives d^k f/dz^k (not divided by k!), as
    returned by specfun.jacobi.
    """
    dz = inner - inner.value
    coeffs = [derivs[k] / math.factorial(k) for k in range(len(derivs))]
    acc = const(coeffs[-1], inner.order, inner.center)
    for c in reversed(coeffs[:-1]):
        acc = acc * dz + c
    return acc
