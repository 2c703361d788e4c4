"""Special-function kernel: complex log-gamma and Jacobi polynomials.

Jacobi polynomials are needed for arbitrary, possibly complex, parameter
pairs (a, b): bound-state wavefunctions use positive real parameters,
polynomial seed solutions use large negative ones, and the trigonometric
system uses a conjugate complex pair with a purely imaginary argument.
Degree recursion is the primary evaluation route; an explicit finite sum
built from Pochhammer products is the fallback when a recurrence
denominator degenerates (and doubles as an independent cross-check).

Everything here is pure and stateless.
"""

import cmath
import math

import numpy as np

from .errors import EvaluationDomainError

__all__ = ["log_gamma", "jacobi", "jacobi_value", "jacobi_explicit"]

# Lanczos coefficients, g = 607/128, 15 terms (Godfrey's set).  Relative
# accuracy ~1e-15 on the half-plane Re z >= 0.5.
_LANCZOS_G = 607.0 / 128.0
_LANCZOS_C = (
    0.99999999999999709182,
    57.156235665862923517,
    -59.597960355475491248,
    14.136097974741747174,
    -0.49191381609762019978,
    0.33994649984811888699e-4,
    0.46523628927048575665e-4,
    -0.98374475304879564677e-4,
    0.15808870322491248884e-3,
    -0.21026444172410488319e-3,
    0.21743961811521264320e-3,
    -0.16431810653676389022e-3,
    0.84418223983852743293e-4,
    -0.26190838401581408670e-4,
    0.36899182659531622704e-5,
)

_HALF_LOG_TWO_PI = 0.5 * math.log(2.0 * math.pi)


def _is_nonpositive_integer(z: complex, tol: float = 1e-12) -> bool:
    if abs(z.imag) > tol:
        return False
    r = z.real
    return r < 0.5 and abs(r - round(r)) < tol


def log_gamma(z: complex) -> complex:
    """Principal-branch log of the gamma function.

    Lanczos approximation on Re z >= 0.5, reflection formula otherwise.
    Working in log scale keeps arguments like gamma(2s - n + 1) for deep
    wells far away from overflow.

    Raises EvaluationDomainError at the poles (nonpositive integers).
    """
    z = complex(z)
    if _is_nonpositive_integer(z):
        raise EvaluationDomainError(f"log_gamma pole at nonpositive integer z={z}")
    if z.real < 0.5:
        # log Gamma(z) = log(pi / sin(pi z)) - log Gamma(1 - z)
        s = cmath.sin(cmath.pi * z)
        if s == 0:
            raise EvaluationDomainError(f"log_gamma pole at z={z}")
        out = cmath.log(cmath.pi) - cmath.log(s) - log_gamma(1.0 - z)
    else:
        acc = complex(_LANCZOS_C[0])
        for i, c in enumerate(_LANCZOS_C[1:], start=1):
            acc += c / (z - 1.0 + i)
        t = z + (_LANCZOS_G - 0.5)
        out = _HALF_LOG_TWO_PI + (z - 0.5) * cmath.log(t) - t + cmath.log(acc)
    if not (math.isfinite(out.real) and math.isfinite(out.imag)):
        raise EvaluationDomainError(f"log_gamma({z}) is not finite")
    return out


_NEAR_POLE = 1e-10


def _recurrence_degenerate(n: int, a: complex, b: complex) -> bool:
    """True when any degree-recursion denominator is dangerously small."""
    ab = a + b
    for m in range(2, n + 1):
        q = 2 * m + ab
        if abs(q * (q - 1.0) * (q - 2.0)) < _NEAR_POLE:
            return True
        if abs(2 * m * (m + ab) * (q - 2.0)) < _NEAR_POLE:
            return True
    return False


def _jacobi_recurrence(n: int, a: complex, b: complex, z: complex) -> complex:
    """Three-term recursion in the degree with (a, b) fixed."""
    if n == 0:
        return 1.0 + 0.0j
    p_prev = 1.0 + 0.0j
    p = (a + 1.0) + (a + b + 2.0) * (z - 1.0) / 2.0
    ab = a + b
    for m in range(2, n + 1):
        q = 2 * m + ab
        denom = 2 * m * (m + ab) * (q - 2.0)
        c1 = (q - 1.0) * ((q * (q - 2.0)) * z + a * a - b * b)
        c2 = 2.0 * (m + a - 1.0) * (m + b - 1.0) * q
        p, p_prev = (c1 * p - c2 * p_prev) / denom, p
    return complex(p)


def jacobi_explicit(n: int, a: complex, b: complex, z: complex) -> complex:
    """Explicit finite-sum value of P_n^{(a,b)}(z).

    Hypergeometric sum arranged as Pochhammer products so no gamma-function
    pole is ever touched, whatever (a, b) are:

        P_n = sum_m  (a+m+1)_{n-m} (n+a+b+1)_m / ((n-m)! m!) * ((z-1)/2)^m
    """
    half = (z - 1.0) / 2.0
    total = 0.0 + 0.0j
    for m in range(n + 1):
        term = 1.0 + 0.0j
        for j in range(n - m):  # (a+m+1)_{n-m}
            term *= a + m + 1.0 + j
        for j in range(m):  # (n+a+b+1)_m
            term *= n + a + b + 1.0 + j
        term /= math.factorial(n - m) * math.factorial(m)
        total += term * half**m
    return total


def jacobi_value(n: int, a: complex, b: complex, z: complex) -> complex:
    """P_n^{(a,b)}(z) by recursion, falling back to the explicit sum near
    parameter degeneracies of the recursion."""
    if n < 0:
        raise EvaluationDomainError("jacobi degree must be nonnegative")
    if _recurrence_degenerate(n, complex(a), complex(b)):
        return jacobi_explicit(n, complex(a), complex(b), complex(z))
    return _jacobi_recurrence(n, complex(a), complex(b), complex(z))


def jacobi(n: int, a: complex, b: complex, z: complex, max_deriv: int = 0) -> np.ndarray:
    """Value and z-derivatives 0..max_deriv of P_n^{(a,b)}(z).

    Derivative k comes from the parameter-shift identity applied k times:

        d^k/dz^k P_n^{(a,b)} = 2^{-k} (n+a+b+1)_k  P_{n-k}^{(a+k,b+k)}

    Derivatives beyond the degree are exactly zero.
    """
    if max_deriv < 0:
        raise EvaluationDomainError("max_deriv must be nonnegative")
    a = complex(a)
    b = complex(b)
    z = complex(z)
    out = np.zeros(max_deriv + 1, dtype=complex)
    factor = 1.0 + 0.0j
    for k in range(min(max_deriv, n) + 1):
        if k > 0:
            factor *= (n + a + b + k) / 2.0
        out[k] = factor * jacobi_value(n - k, a + k, b + k, z)
    return out
