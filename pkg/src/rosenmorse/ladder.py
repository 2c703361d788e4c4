"""Ladder operators as ordered chains of first-order operators and
ground-state multipliers.

Raising and lowering between adjacent levels of one fixed system is built
in three moves through the shape-invariance hierarchy: descend to the
ground state of the matching member with intertwiners (energy fixed),
shift to the adjacent member's ground state with an invertible multiplier
(energy moves), climb back with intertwiners (energy fixed).  The result
is a differential operator of order 2n+1 (raising) or 2n-1 (lowering,
n >= 1), applied here numerically through jets.

The same construction transfers to the state-adding extensions by
sandwiching between the extension intertwiners; the added ground level
sits outside the laddered subspace.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Optional, Union

import numpy as np

from . import jets
from .errors import EvaluationDomainError, ValidationError
from .jets import Jet
from .susy import FirstOrderOp, RationalExtension, intertwiners, type3_state
from .systems import (RMI, RMII, SystemParams, WaveFunction, _log_norm_rmi,
                      _log_norm_rmii, eigenstate, potential, spectrum)

__all__ = [
    "MultiplierOp", "OperatorChain", "ground_shift", "build_ladder",
    "build_re_ladder", "apply", "gha_check", "shifted_energy",
    "action_residual", "annihilation_residual",
]


def shifted_energy(source: Union[SystemParams, RationalExtension], n: int) -> float:
    """k(n): energy above the lowest laddered level."""
    if isinstance(source, RationalExtension):
        return source.shifted_energy(n)
    return spectrum(source).shifted_energy(n)


@dataclass(frozen=True)
class MultiplierOp:
    """Multiplication by a nonvanishing ground-state ratio function."""

    g: Callable[[float, int], Jet]
    label: str
    prefactor: float

    def apply(self, u: Jet) -> Jet:
        return self.prefactor * (self.g(u.center, u.order) * u)


@dataclass(frozen=True)
class OperatorChain:
    """Ordered operator product; ops[0] acts first.

    `scalar` accumulates every 1/sqrt(energy difference) normalizer.  The
    image of the matching eigenstate is sqrt(k) times the neighbouring
    eigenstate; `normalizable` is False only when raising the top state of
    a finite tower, whose image grows at one infinity.
    """

    ops: tuple
    scalar: float
    variant: str
    direction: int
    n: int
    source: object
    normalizable: bool = True

    @property
    def n_first_order(self) -> int:
        return sum(1 for op in self.ops if isinstance(op, FirstOrderOp))

    def apply_jet(self, u: Jet) -> Jet:
        for op in self.ops:
            u = op.apply(u)
        return self.scalar * u


def _log_ground_norm(params: SystemParams) -> float:
    if params.variant == RMII:
        return _log_norm_rmii(params, 0)[0]
    return _log_norm_rmi(params, 0)


def ground_shift(params: SystemParams, direction: str) -> MultiplierOp:
    """Multiplier mapping the ground state of `params` to the ground state
    of the adjacent hierarchy member ("+" raises energy, "-" lowers it).

    Hyperbolic: gamma(x) = cosh(x) * exp(-lam*x/(s(s-1))) sends s -> s-1;
    trigonometric: gamma(x) = sin(x) * exp(+lam*x/(s(s+1))) sends s -> s+1.
    Prefactors are ratios of ground-state normalization constants.
    """
    if direction not in ("+", "-"):
        raise ValidationError(f"direction must be '+' or '-', got {direction!r}")
    s, lam = params.s, params.lam
    raising = direction == "+"
    ds = (-1 if raising else +1) if params.variant == RMII else (+1 if raising else -1)
    target = params.shifted(ds)  # raises ValidationError when out of range
    prefactor = math.exp(_log_ground_norm(target) - _log_ground_norm(params))

    if params.variant == RMII:
        member = s if raising else s + 1.0
        rate = -lam / (member * (member - 1.0))
    else:
        member = s if raising else s - 1.0
        rate = lam / (member * (member + 1.0))
    invert = not raising

    def g(x: float, order: int) -> Jet:
        xj = jets.lift(x, order)
        osc = xj.cosh() if params.variant == RMII else xj.sin()
        base = osc * (xj * rate).exp()
        return 1.0 / base if invert else base

    tag = "raise" if raising else "lower"
    return MultiplierOp(g, f"gamma[{params.variant} s={s} {tag}]", prefactor)


def _bare_multiplier(params: SystemParams, direction: str) -> MultiplierOp:
    """ground_shift without the normalization prefactor, for the formally
    ill-defined raising at the top of a finite tower (the adjacent member
    sits outside the valid parameter window there)."""
    s, lam = params.s, params.lam
    rate = -lam / (s * (s - 1.0))

    def g(x: float, order: int) -> Jet:
        xj = jets.lift(x, order)
        return xj.cosh() * (xj * rate).exp()

    return MultiplierOp(g, f"gamma[{params.variant} s={s} raise, unnormalized]", 1.0)


def build_ladder(params: SystemParams, n: int, direction: str) -> OperatorChain:
    """Chain realizing the raising ("+") or lowering ("-") action on the
    n-th eigenstate of `params`.

    Lowering n = 0 is the single annihilating intertwiner.  Raising the top
    state of a finite tower is allowed but flagged: the image is unbounded
    and the chain carries no meaningful normalizer.
    """
    if direction not in ("+", "-"):
        raise ValidationError(f"direction must be '+' or '-', got {direction!r}")
    if n < 0:
        raise ValidationError("excitation must be nonnegative")
    spec = spectrum(params)
    if spec.n_max is not None and n > spec.n_max:
        raise ValidationError(f"excitation {n} exceeds the bounded tower (n_max={spec.n_max})")
    member = (lambda j: params.shifted(-j)) if params.variant == RMII \
        else (lambda j: params.shifted(+j))
    energy = spec.energy

    ops: list = []
    scalar = 1.0
    normalizable = True
    at_top = spec.n_max is not None and n == spec.n_max

    if direction == "-":
        if n == 0:
            b_minus, _ = intertwiners(params)
            return OperatorChain((b_minus,), 1.0, params.variant, -1, 0, params)
        b_minus, _ = intertwiners(member(0))
        ops.append(b_minus)
        for j in range(1, n):
            ops.append(intertwiners(member(j))[0])
            scalar /= math.sqrt(energy(n) - energy(j))
        ops.append(ground_shift(member(n), "-"))
        for i in range(n - 2, -1, -1):
            ops.append(intertwiners(member(i))[1])
            scalar /= math.sqrt(energy(n - 1) - energy(i))
    else:
        for j in range(0, n):
            ops.append(intertwiners(member(j))[0])
            scalar /= math.sqrt(energy(n) - energy(j))
        if at_top:
            # the adjacent member's ground state is not a valid bound state;
            # keep the function-level shift and flag the image unbounded
            ops.append(_bare_multiplier(member(n), "+"))
            normalizable = False
        else:
            ops.append(ground_shift(member(n), "+"))
        for i in range(n, 0, -1):
            ops.append(intertwiners(member(i))[1])
            scalar /= math.sqrt(energy(n + 1) - energy(i))
        ops.append(intertwiners(member(0))[1])

    return OperatorChain(tuple(ops), scalar, params.variant,
                         +1 if direction == "+" else -1, n, params,
                         normalizable=normalizable)


def build_re_ladder(ext: RationalExtension, n: int, direction: str) -> OperatorChain:
    """Ladder chain on the extension's laddered subspace (n >= 1).

    Sandwich of the base-system chain between the extension intertwiners,
    with the two extra 1/sqrt(E - eps) normalizers.  Lowering n = 1
    annihilates; its chain reduces to the second-order product of the
    extension raiser and the base annihilator.
    """
    if n < 1:
        raise ValidationError(
            "the added ground level is outside the laddered subspace (need n >= 1)")
    if direction not in ("+", "-"):
        raise ValidationError(f"direction must be '+' or '-', got {direction!r}")
    if n > ext.n_max:
        raise ValidationError(f"extension excitation {n} exceeds n_max={ext.n_max}")
    if direction == "-" and n == 1:
        base_annihilator = build_ladder(ext.base, 0, "-")
        ops = (ext.b_plus,) + base_annihilator.ops
        scalar = 1.0 / math.sqrt(ext.energy(1) - ext.eps)
        return OperatorChain(ops, scalar, "type3", -1, 1, ext)
    inner = build_ladder(ext.base, n - 1, direction)
    m = n + 1 if direction == "+" else n - 1
    scalar = inner.scalar / math.sqrt(
        (ext.energy(m) - ext.eps) * (ext.energy(n) - ext.eps))
    return OperatorChain((ext.b_plus,) + inner.ops + (ext.b_minus,), scalar,
                         "type3", inner.direction, n, ext,
                         normalizable=inner.normalizable)


def apply(chain: OperatorChain, wf: WaveFunction) -> WaveFunction:
    """Apply a chain to a state; for ladder chains on the matching
    eigenstate the image is sqrt(k) times the neighbouring eigenstate."""
    if wf.n != chain.n:
        raise ValidationError(
            f"chain built for excitation {chain.n} applied to excitation {wf.n}")
    bump = chain.n_first_order

    def evaluate(x: float, order: int) -> Jet:
        return chain.apply_jet(wf.evaluator(x, order + bump))

    m = chain.n + chain.direction
    if isinstance(chain.source, RationalExtension):
        energy = chain.source.energy(max(m, 0))
    else:
        energy = spectrum(chain.source).energy(max(m, 0))
    return WaveFunction(evaluate, m, energy, chain.source,
                        normalizable=chain.normalizable,
                        label=f"chain({'+' if chain.direction > 0 else '-'}, "
                              f"n={chain.n}) image")


def _default_check_points(variant: str) -> np.ndarray:
    if variant == RMII:
        return np.linspace(-10.0, 10.0, 241)
    return np.linspace(0.15, math.pi - 0.15, 241)


def action_residual(source: Union[SystemParams, RationalExtension], n: int,
                    direction: str, xs=None) -> float:
    """Relative grid max-norm of (chain image - sqrt(k) * neighbour)."""
    if isinstance(source, RationalExtension):
        state = lambda m: type3_state(source, m)
        chain = build_re_ladder(source, n, direction)
        variant = RMII
    else:
        state = lambda m: eigenstate(source, m)
        chain = build_ladder(source, n, direction)
        variant = source.variant
    k = shifted_energy(source, n + 1 if direction == "+" else n)
    if xs is None:
        xs = _default_check_points(variant)
    image = apply(chain, state(n))
    target = state(n + 1 if direction == "+" else n - 1)
    got = image.values(xs)
    want = math.sqrt(k) * target.values(xs)
    return float(np.max(np.abs(got - want)) / np.max(np.abs(want)))


def annihilation_residual(source: Union[SystemParams, RationalExtension],
                          xs=None) -> float:
    """max |A- psi_lowest| / max |psi_lowest| for the annihilated state."""
    if isinstance(source, RationalExtension):
        wf = type3_state(source, 1)
        chain = build_re_ladder(source, 1, "-")
        if xs is None:
            xs = _default_check_points(RMII)
    else:
        wf = eigenstate(source, 0)
        chain = build_ladder(source, 0, "-")
        if xs is None:
            xs = _default_check_points(source.variant)
    image = apply(chain, wf)
    return float(np.max(np.abs(image.values(xs)))
                 / np.max(np.abs(wf.values(xs))))


def gha_check(params: SystemParams, n: int, xs=None) -> dict:
    """Residuals of the algebra generated by {H, A-, A+} on the n-th state.

    Checks [H, A+-] psi(n) = (E(n+-1) - E(n)) A+- psi(n) and
    [A-, A+] psi(n) = (k(n+1) - k(n)) psi(n), everything applied through
    jets on a verification grid.
    """
    spec = spectrum(params)
    if spec.n_max is not None and n + 1 > spec.n_max:
        raise ValidationError(
            f"need excitation n+1={n + 1} bounded for the commutator check")
    if xs is None:
        xs = _default_check_points(params.variant)
    psi_n = eigenstate(params, n)

    def hamiltonian_residual(image: WaveFunction, target_energy: float) -> float:
        num = 0.0
        den = 0.0
        for x in xs:
            j = image(float(x), 2)
            v = potential(params, jets.lift(float(x), 0)).value
            h = -j.deriv(2) + v * j.value
            num = max(num, abs(h - target_energy * j.value))
            den = max(den, abs(target_energy * j.value))
        return num / den

    up = apply(build_ladder(params, n, "+"), psi_n)
    res_plus = hamiltonian_residual(up, spec.energy(n + 1))
    if n >= 1:
        down = apply(build_ladder(params, n, "-"), psi_n)
        res_minus = hamiltonian_residual(down, spec.energy(n - 1))
    else:
        res_minus = 0.0

    lower_after_raise = apply(build_ladder(params, n + 1, "-"), up)
    c1 = lower_after_raise.values(xs)
    if n >= 1:
        raise_after_lower = apply(build_ladder(params, n - 1, "+"), down)
        c2 = raise_after_lower.values(xs)
    else:
        c2 = np.zeros_like(c1)
    omega = spec.shifted_energy(n + 1) - spec.shifted_energy(n)
    expected = omega * psi_n.values(xs)
    res_comm = float(np.max(np.abs(c1 - c2 - expected)) / np.max(np.abs(expected)))

    return {
        "hamiltonian_raising": float(res_plus),
        "hamiltonian_lowering": float(res_minus),
        "commutator": res_comm,
        "delta_plus": spec.energy(n + 1) - spec.energy(n),
        "delta_minus": (spec.energy(n - 1) - spec.energy(n)) if n >= 1 else math.nan,
        "omega": omega,
    }
