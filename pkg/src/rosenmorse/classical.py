"""Classical-analogue bounded motion in the Rosen-Morse wells.

With hbar = 2m = 1 the classical conventions are fixed as H = p^2 + V(x),
xdot = 2p, pdot = -V'(x), so quantum <H> and classical E compare directly.
Integration is fixed-step leapfrog (kick-drift-kick), second order and
symplectic: energy error stays bounded and shrinks ~4x per dt halving.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

import numpy as np

from . import specfun
from .errors import ValidationError
from .susy import RationalExtension
from .systems import RMI, RMII, SystemParams

__all__ = [
    "Potential1D", "PhaseTrajectory", "harmonic_potential",
    "system_potential", "extension_potential", "turning_points", "flow",
]


@dataclass(frozen=True)
class Potential1D:
    """Scalar potential with its derivative and a root-scan bracket."""

    v: Callable[[float], float]
    dv: Callable[[float], float]
    bracket: tuple
    label: str = ""


def harmonic_potential() -> Potential1D:
    """V = x^2 test hook; under these conventions x(t) = x0 cos(2t) + ..."""
    return Potential1D(lambda x: x * x, lambda x: 2.0 * x, (-1e3, 1e3), "harmonic")


def system_potential(params: SystemParams) -> Potential1D:
    s, lam = params.s, params.lam
    if params.variant == RMII:
        def v(x):
            sech = 1.0 / math.cosh(x)
            return 2.0 * lam * math.tanh(x) - s * (s + 1.0) * sech * sech

        def dv(x):
            sech2 = 1.0 / math.cosh(x) ** 2
            return 2.0 * lam * sech2 + 2.0 * s * (s + 1.0) * sech2 * math.tanh(x)

        return Potential1D(v, dv, (-40.0, 40.0), "rmii")

    def v(x):
        csc = 1.0 / math.sin(x)
        return -2.0 * lam / math.tan(x) + s * (s - 1.0) * csc * csc

    def dv(x):
        csc2 = 1.0 / math.sin(x) ** 2
        return 2.0 * lam * csc2 - 2.0 * s * (s - 1.0) * csc2 / math.tan(x)

    return Potential1D(v, dv, (1e-6, math.pi - 1e-6), "rmi")


def extension_potential(ext: RationalExtension) -> Potential1D:
    """Extended potential through polynomial coefficient arrays.

    The rational correction is N(z)/P(z)^2 with N a fixed polynomial, so
    values and derivatives are a handful of Horner evaluations per call
    (plain-float Horner: this sits inside million-step integrator loops).
    """
    from numpy.polynomial import Polynomial

    k = ext.k
    derivs = specfun.jacobi(k, -ext.a_t, -ext.b_t, 0.0, k)
    P = Polynomial([derivs[j].real / math.factorial(j) for j in range(k + 1)])
    P1 = P.deriv()
    one = Polynomial([1.0, 0.0, -1.0])  # 1 - z^2
    z_p = Polynomial([0.0, 1.0])
    N = 2.0 * one * (2.0 * z_p * P1 * P - one * (P1.deriv() * P - P1 * P1)
                     - float(k) * P * P)

    def horner(poly):
        rev = tuple(float(c) for c in poly.coef[::-1])

        def ev(z, rev=rev):
            acc = 0.0
            for c in rev:
                acc = acc * z + c
            return acc

        return ev

    p_at = horner(P)
    p1_at = horner(P1)
    n_at = horner(N)
    n1_at = horner(N.deriv())
    s, lam = ext.base.s, ext.base.lam
    s1 = s + 1.0

    def v(x):
        z = math.tanh(x)
        pz = p_at(z)
        return (2.0 * lam * z - s1 * (s1 + 1.0) * (1.0 - z * z)
                + n_at(z) / (pz * pz))

    def dv(x):
        z = math.tanh(x)
        pz = p_at(z)
        dvdz = (2.0 * lam + 2.0 * s1 * (s1 + 1.0) * z
                + (n1_at(z) * pz - 2.0 * n_at(z) * p1_at(z)) / (pz * pz * pz))
        return (1.0 - z * z) * dvdz

    return Potential1D(v, dv, (-40.0, 40.0), f"type3(k={k})")


@dataclass
class PhaseTrajectory:
    """Sampled (t, x(t), p(t)) with the conserved energy of the start."""

    t: np.ndarray
    x: np.ndarray
    p: np.ndarray
    energy: float
    potential: Potential1D

    def energies(self) -> np.ndarray:
        v = np.array([self.potential.v(float(x)) for x in self.x])
        return self.p**2 + v

    def energy_drift(self) -> float:
        e = self.energies()
        return float(np.max(np.abs(e - self.energy)) / abs(self.energy))


def turning_points(pot: Potential1D, energy: float, bracket=None) -> tuple:
    """The two roots of V(x) = E in the bracket, bisected to 1e-10."""
    lo, hi = bracket if bracket is not None else pot.bracket
    xs = np.linspace(lo, hi, 4096)
    f = np.array([pot.v(float(x)) - energy for x in xs])
    idx = np.nonzero(f[1:] * f[:-1] < 0)[0]
    if len(idx) != 2:
        raise ValidationError(
            f"no bounded well at E={energy}: found {len(idx)} crossings in "
            f"[{lo}, {hi}] instead of 2")

    def bisect(a, b):
        fa = pot.v(a) - energy
        while b - a > 1e-10:
            m = 0.5 * (a + b)
            fm = pot.v(m) - energy
            if fm == 0.0:
                return m
            if (fa < 0) != (fm < 0):
                b = m
            else:
                a, fa = m, fm
        return 0.5 * (a + b)

    roots = [bisect(float(xs[i]), float(xs[i + 1])) for i in idx]
    return roots[0], roots[1]


def flow(pot: Potential1D, x0: float, p0: float, t_end: float,
         dt: float = 1e-4, max_samples: int = 30001) -> PhaseTrajectory:
    """Leapfrog integration of xdot = 2p, pdot = -V'(x) from (x0, p0).

    The energy must define a bounded orbit; leaving the bracketing turning
    points by more than 10% of their separation aborts the run.  Samples
    are stored with a stride so output stays near `max_samples` rows even
    for very small dt.
    """
    if dt <= 0 or t_end <= 0:
        raise ValidationError("need positive dt and t_end")
    energy = p0 * p0 + pot.v(x0)
    x_lo, x_hi = turning_points(pot, energy)
    slack = 0.1 * (x_hi - x_lo)
    lo, hi = x_lo - slack, x_hi + slack

    n = int(round(t_end / dt))
    stride = max(1, -(-n // (max_samples - 1)))  # ceil division
    kept = n // stride + 1
    ts = np.empty(kept)
    xs = np.empty(kept)
    ps = np.empty(kept)
    x, p = float(x0), float(p0)
    ts[0], xs[0], ps[0] = 0.0, x, p
    dv = pot.dv
    half = 0.5 * dt
    two_dt = 2.0 * dt
    j = 1
    for i in range(1, n + 1):
        p -= half * dv(x)
        x += two_dt * p
        p -= half * dv(x)
        if not lo <= x <= hi:
            raise ValidationError(
                f"unbounded motion: x={x:.6g} left [{lo:.6g}, {hi:.6g}] at t={i * dt:.6g}")
        if i % stride == 0:
            ts[j], xs[j], ps[j] = i * dt, x, p
            j += 1
    return PhaseTrajectory(ts[:j], xs[:j], ps[:j], energy, pot)
