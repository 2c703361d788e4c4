"""First-order SUSY machinery: superpotentials, intertwiners, the
shape-invariance hierarchy, and the state-adding rational extensions.

With W the logarithmic derivative of the annihilated state, the first-order
operators B(+/-) = W(x) +/- d/dx satisfy

    B- H = H~ B-,     H B+ = B+ H~,
    H = B+ B- + eps,  H~ = B- B+ + eps,      V~ = V - 2 W'.

Deleting the ground state maps each Rosen-Morse system onto itself with s
translated by -1 (hyperbolic) or +1 (trigonometric).  The state-adding
partner built from an even-degree nodeless polynomial seed in z = tanh(x)
adds one level eps below the hyperbolic tower and digs a sub-well into the
potential.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Optional

import numpy as np

from . import jets, specfun
from .errors import EvaluationDomainError, ValidationError
from .jets import Jet
from .quadrature import gauss_legendre_grid, integrate
from .systems import (RMI, RMII, SystemParams, WaveFunction, eigenstate,
                      potential, spectrum)

__all__ = [
    "FirstOrderOp", "RationalExtension", "superpotential", "intertwiners",
    "partner_potential", "susy_map", "type3_extension", "type3_potential",
    "type3_state",
]


@dataclass(frozen=True)
class FirstOrderOp:
    """W(x) + sign * d/dx acting on jets; lowers the jet order by one."""

    w: Callable[[float, int], Jet]
    sign: int
    label: str = ""

    def apply(self, u: Jet) -> Jet:
        if u.order < 1:
            raise EvaluationDomainError(
                f"{self.label or 'first-order op'} needs jet order >= 1")
        wj = self.w(u.center, u.order - 1)
        return wj * u + float(self.sign) * u.differentiate()

    def apply_wavefunction(self, wf: WaveFunction, scale: float = 1.0,
                           **tags) -> WaveFunction:
        op = self

        def evaluate(x: float, order: int) -> Jet:
            return scale * op.apply(wf.evaluator(x, order + 1))

        return WaveFunction(evaluate, tags.get("n", wf.n), tags.get("energy", wf.energy),
                            tags.get("system", wf.system),
                            normalizable=tags.get("normalizable", wf.normalizable),
                            label=tags.get("label", ""))


def superpotential(params: SystemParams) -> Callable[[float, int], Jet]:
    """Logarithmic derivative of the ground state.

    Hyperbolic: -s*tanh(x) - lam/s.  Trigonometric: s*cot(x) - lam/s; the
    constant term must be lam/s for B- to annihilate the ground state
    sin^s(x) * exp(-lam*x/s).
    """
    s, lam = params.s, params.lam
    if params.variant == RMII:
        def w(x: float, order: int) -> Jet:
            return -s * jets.lift(x, order).tanh() - lam / s
    else:
        def w(x: float, order: int) -> Jet:
            return s * jets.lift(x, order).cot() - lam / s
    return w


def _superpotential_slope(params: SystemParams) -> Callable[[Jet], Jet]:
    """W'(x) composed with an arbitrary inner jet (closed form)."""
    s = params.s
    if params.variant == RMII:
        return lambda x: -s * x.sech() * x.sech()
    return lambda x: -s / (x.sin() * x.sin())


def intertwiners(params: SystemParams) -> tuple[FirstOrderOp, FirstOrderOp]:
    """(B-, B+) for the ground-state-deleting transformation of `params`."""
    w = superpotential(params)
    tag = f"{params.variant} s={params.s}"
    return (FirstOrderOp(w, -1, f"B-[{tag}]"), FirstOrderOp(w, +1, f"B+[{tag}]"))


def partner_potential(params: SystemParams) -> Callable[[Jet], Jet]:
    """V(x) - 2 W'(x); equals the potential with s -> s-1 (hyperbolic) or
    s -> s+1 (trigonometric) by shape invariance."""
    slope = _superpotential_slope(params)
    return lambda x: potential(params, x) - 2.0 * slope(x)


def partner_params(params: SystemParams) -> SystemParams:
    """Parameter translation realized by one state-deleting step."""
    return params.shifted(-1 if params.variant == RMII else +1)


def susy_map(params: SystemParams, direction: str, wf: WaveFunction) -> WaveFunction:
    """Map a state across one state-deleting SUSY step, normalized.

    direction "down": wf is the (n+1)-th state of `params`; returns the n-th
    state of the partner (same energy).  direction "up": wf is the n-th
    state of the partner; returns the (n+1)-th state of `params`.
    """
    b_minus, b_plus = intertwiners(params)
    ground = spectrum(params).ground_energy
    gap = wf.energy - ground
    if direction == "down":
        if wf.n < 1:
            raise ValidationError("the ground state is annihilated; nothing to map down")
        target = partner_params(params)
        return b_minus.apply_wavefunction(
            wf, scale=1.0 / math.sqrt(gap), n=wf.n - 1, system=target,
            label=f"{target.variant}(s={target.s}) n={wf.n - 1} [mapped]")
    if direction == "up":
        return b_plus.apply_wavefunction(
            wf, scale=1.0 / math.sqrt(gap), n=wf.n + 1, system=params,
            label=f"{params.variant}(s={params.s}) n={wf.n + 1} [mapped]")
    raise ValidationError(f"direction must be 'down' or 'up', got {direction!r}")


# ---------------------------------------------------------------------------
# Type III rational extensions (hyperbolic variant only)
# ---------------------------------------------------------------------------

@dataclass(eq=False)
class RationalExtension:
    """State-adding partner of a hyperbolic system from a degree-k seed.

    The seed u(x) = (1-z)^(-a_t/2) (1+z)^(-b_t/2) P_k(z), z = tanh(x), with
    P_k a Jacobi polynomial of parameters (-a_t, -b_t), is nodeless and
    unbounded while 1/u is normalizable; the transformation inserts the
    level eps = -(s+k+1)^2 - lam^2/(s+k+1)^2 below the tower.
    """

    base: SystemParams
    k: int
    a_t: float
    b_t: float
    eps: float
    seed: Callable[[float, int], Jet]
    b_minus: FirstOrderOp
    b_plus: FirstOrderOp
    _ground_norm: Optional[float] = field(default=None, repr=False)

    @property
    def n_max(self) -> int:
        """Top excitation of the extended tower (added level + full tower)."""
        return spectrum(self.base).n_max + 1

    def energy(self, n: int) -> float:
        if n == 0:
            return self.eps
        return spectrum(self.base).energy(n - 1)

    def shifted_energy(self, n: int) -> float:
        """Shifted energy relative to the lowest laddered level (n = 1)."""
        return self.energy(n) - self.energy(1)


def _seed_poly_params(params: SystemParams, k: int) -> tuple[float, float, float]:
    skp = params.s + k + 1.0
    a_t = skp + params.lam / skp
    b_t = skp - params.lam / skp
    eps = -(skp * skp) - (params.lam / skp) ** 2
    return a_t, b_t, eps


def _one_minus_tanh(xj: Jet) -> Jet:
    """1 - tanh(x) as 2/(exp(2x)+1): stays positive in the far right tail,
    where tanh rounds to exactly 1."""
    return 2.0 / ((2.0 * xj).exp() + 1.0)


def _one_plus_tanh(xj: Jet) -> Jet:
    return 2.0 / ((-2.0 * xj).exp() + 1.0)


def _poly_jet(k: int, a_t: float, b_t: float, z: Jet) -> Jet:
    """P_k^{(-a_t,-b_t)} composed with a z-jet."""
    derivs = specfun.jacobi(k, -a_t, -b_t, z.value, min(k, z.order))
    return jets.compose_series(derivs, z)


def type3_extension(params: SystemParams, k: int) -> RationalExtension:
    """Build the degree-k state-adding extension of a hyperbolic system.

    Even k keeps the seed polynomial nodeless on (-1, 1); this is verified
    by a sign scan anyway to guard parameter corner cases.
    """
    if params.variant != RMII:
        raise ValidationError("rational extensions are built on the hyperbolic variant")
    if k < 2 or k % 2 != 0:
        raise ValidationError(f"seed degree must be even and >= 2, got {k}")
    a_t, b_t, eps = _seed_poly_params(params, k)

    zs = np.linspace(-1.0, 1.0, 4098)[1:-1]
    pvals = np.array([specfun.jacobi_value(k, -a_t, -b_t, z).real for z in zs])
    ends = [specfun.jacobi_explicit(k, -a_t, -b_t, z).real for z in (-1.0, 1.0)]
    samples = np.concatenate(([ends[0]], pvals, [ends[1]]))
    if np.any(samples == 0.0) or np.any(samples[1:] * samples[:-1] < 0.0):
        raise ValidationError(
            f"seed polynomial of degree {k} has a node on [-1, 1]; "
            "no nodeless state-adding transformation with these parameters")

    skp = params.s + k + 1.0

    def w_ext(x: float, order: int) -> Jet:
        xj = jets.lift(x, order + 1)
        th = xj.tanh()
        p = _poly_jet(k, a_t, b_t, th)
        return (skp * th.truncate(order) + params.lam / skp
                + p.differentiate() / p.truncate(order))

    def seed(x: float, order: int) -> Jet:
        xj = jets.lift(x, order)
        th = xj.tanh()
        return (_one_minus_tanh(xj).powr(-a_t / 2.0)
                * _one_plus_tanh(xj).powr(-b_t / 2.0)
                * _poly_jet(k, a_t, b_t, th))

    tag = f"type3 s={params.s} k={k}"
    return RationalExtension(
        base=params, k=k, a_t=a_t, b_t=b_t, eps=eps, seed=seed,
        b_minus=FirstOrderOp(w_ext, -1, f"B-[{tag}]"),
        b_plus=FirstOrderOp(w_ext, +1, f"B+[{tag}]"))


def type3_potential(ext: RationalExtension, x: Jet) -> Jet:
    """Extended potential: the base potential with s -> s+1 plus a rational
    correction in z = tanh(x) that vanishes at both asymptotes."""
    z = x.tanh()
    derivs = specfun.jacobi(ext.k, -ext.a_t, -ext.b_t, z.value,
                            min(ext.k, z.order) + 2)
    p = jets.compose_series(derivs[:-2], z)
    dp = jets.compose_series(derivs[1:-1], z)
    ddp = jets.compose_series(derivs[2:], z)
    one_minus_z2 = 1.0 - z * z
    ratio = dp / p
    corr = 2.0 * one_minus_z2 * (2.0 * z * ratio
                                 - one_minus_z2 * (ddp / p - ratio * ratio)
                                 - float(ext.k))
    return potential(ext.base.shifted(+1), x) + corr


def _ground_norm(ext: RationalExtension) -> float:
    if ext._ground_norm is None:
        grid = gauss_legendre_grid(-25.0, 25.0, 64)
        inv = _inverse_seed_evaluator(ext)
        vals = np.array([inv(float(x), 0).value for x in grid.nodes])
        ext._ground_norm = math.sqrt(integrate(np.abs(vals) ** 2, grid).real)
    return ext._ground_norm


def _inverse_seed_evaluator(ext: RationalExtension) -> Callable[[float, int], Jet]:
    """1/u evaluated directly through positive powers (safe in the far tails,
    where u itself overflows)."""
    a_t, b_t, k = ext.a_t, ext.b_t, ext.k

    def evaluate(x: float, order: int) -> Jet:
        xj = jets.lift(x, order)
        th = xj.tanh()
        num = _one_minus_tanh(xj).powr(a_t / 2.0) * _one_plus_tanh(xj).powr(b_t / 2.0)
        return num / _poly_jet(k, a_t, b_t, th)

    return evaluate


def type3_state(ext: RationalExtension, n: int) -> WaveFunction:
    """Eigenstate of the extended potential.

    n = 0 is the added level, proportional to 1/u, normalized with positive
    sign at x = 0; n >= 1 descends from the base eigenstate n-1 through the
    extension intertwiner, which lands unit-normalized."""
    if n < 0 or n > ext.n_max:
        raise ValidationError(
            f"extension excitation {n} out of range 0..{ext.n_max}")
    if n == 0:
        inv = _inverse_seed_evaluator(ext)
        scale = 1.0 / _ground_norm(ext)
        if inv(0.0, 0).value.real < 0:
            scale = -scale

        def evaluate(x: float, order: int) -> Jet:
            return scale * inv(x, order)

        return WaveFunction(evaluate, 0, ext.eps, ext,
                            label=f"type3(k={ext.k}) n=0 [added level]")
    base_wf = eigenstate(ext.base, n - 1)
    energy = ext.energy(n)
    return ext.b_minus.apply_wavefunction(
        base_wf, scale=1.0 / math.sqrt(energy - ext.eps), n=n, energy=energy,
        system=ext, label=f"type3(k={ext.k}) n={n}")
