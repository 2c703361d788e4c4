"""The two Rosen-Morse systems: potentials, spectra, eigenstates.

Hyperbolic variant ("rmii"): V(x) = 2*lam*tanh(x) - s(s+1)*sech^2(x) on the
real line, finitely many bound states.  Trigonometric variant ("rmi"):
V(x) = -2*lam*cot(x) + s(s-1)*csc^2(x) on (0, pi), infinitely many bound
states.  Units are hbar = 2m = 1 throughout, so H = -d^2/dx^2 + V.

Eigenstates are returned as jet evaluators so that differential operators
of arbitrary order can act on them exactly.  Normalization constants are
assembled in log space and exponentiated once, which keeps deep wells
(s = 20 and beyond) far from overflow.

The trigonometric eigenstates are evaluated through genuinely complex
arithmetic (conjugate polynomial parameters, imaginary argument); the
imaginary part of the result is a pure rounding residue, asserted small by
`imag_residue` and dropped from the public evaluator.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Optional

import numpy as np

from . import jets, specfun
from .errors import EvaluationDomainError, ValidationError
from .jets import Jet
from .quadrature import QuadratureGrid, gauss_legendre_grid, integrate

__all__ = [
    "RMII", "RMI", "SystemParams", "Spectrum", "WaveFunction",
    "potential", "spectrum", "eigenstate", "imag_residue",
    "default_grid", "schrodinger_residual", "count_nodes",
]

RMII = "rmii"
RMI = "rmi"


@dataclass(frozen=True)
class SystemParams:
    """One Rosen-Morse system: asymmetry lam, depth/shape s, and variant."""

    lam: float
    s: float
    variant: str

    def __post_init__(self):
        if self.variant not in (RMII, RMI):
            raise ValidationError(f"unknown variant {self.variant!r}")
        if self.variant == RMII:
            if not self.s > 0:
                raise ValidationError(f"hyperbolic variant needs s > 0, got s={self.s}")
            if not 0 <= self.lam < self.s**2:
                raise ValidationError(
                    f"hyperbolic variant needs 0 <= lam < s^2, got lam={self.lam}, s={self.s}")
        else:
            if not self.s > 1:
                raise ValidationError(f"trigonometric variant needs s > 1, got s={self.s}")
            if not self.lam >= 0:
                raise ValidationError(f"lam must be nonnegative, got {self.lam}")

    def shifted(self, ds: int) -> "SystemParams":
        """Same variant and lam with s translated by ds."""
        return SystemParams(self.lam, self.s + ds, self.variant)


@dataclass(frozen=True)
class Spectrum:
    """Bound-state energies; n_max is None for the infinite trigonometric tower."""

    params: SystemParams
    n_max: Optional[int]

    def energy(self, n: int) -> float:
        p = self.params
        if p.variant == RMII:
            sn = p.s - n
            return -(sn * sn) - (p.lam / sn) ** 2
        sn = p.s + n
        return sn * sn - (p.lam / sn) ** 2

    @property
    def ground_energy(self) -> float:
        return self.energy(0)

    def shifted_energy(self, n: int) -> float:
        """k(n) = E(n) - E(0), the ladder-action proportionality factor."""
        return self.energy(n) - self.energy(0)


def spectrum(params: SystemParams) -> Spectrum:
    if params.variant == RMII:
        # largest integer strictly below s - sqrt(lam); the cutoff keeps
        # every bound energy under the lower asymptote -2*lam
        edge = params.s - math.sqrt(params.lam)
        n_max = math.floor(edge)
        if n_max >= edge:
            n_max -= 1
        return Spectrum(params, int(n_max))
    return Spectrum(params, None)


def potential(params: SystemParams, x: Jet) -> Jet:
    """Potential as a jet, order preserved."""
    s, lam = params.s, params.lam
    if params.variant == RMII:
        return 2.0 * lam * x.tanh() - s * (s + 1.0) * x.sech() * x.sech()
    if not 0.0 < x.center < math.pi:
        raise EvaluationDomainError(
            f"trigonometric potential needs 0 < x < pi, got x={x.center}")
    sn = x.sin()
    csc2 = 1.0 / (sn * sn)
    return -2.0 * lam * x.cot() + s * (s - 1.0) * csc2


@dataclass
class WaveFunction:
    """A state as a jet evaluator, tagged with its excitation and energy.

    evaluator(x, order) returns the jet of the wavefunction at x up to the
    requested order.  `normalizable` is False only for formal images such
    as raising the top state of a finite tower.
    """

    evaluator: Callable[[float, int], Jet]
    n: int
    energy: float
    system: object
    normalizable: bool = True
    label: str = ""

    def __call__(self, x: float, order: int = 0) -> Jet:
        return self.evaluator(x, order)

    def values(self, xs, order: int = 0) -> np.ndarray:
        """Values of the order-th derivative on an array of points."""
        fact = math.factorial(order)
        return np.array([self.evaluator(float(x), order).coeffs[order] * fact
                         for x in np.asarray(xs, dtype=float)])

    def value_and_slope(self, xs):
        out = [self.evaluator(float(x), 1) for x in np.asarray(xs, dtype=float)]
        vals = np.array([j.coeffs[0] for j in out])
        slopes = np.array([j.coeffs[1] for j in out])
        return vals, slopes


def _log_norm_rmii(params: SystemParams, n: int) -> tuple[float, float]:
    """log|M| and sign of the hyperbolic normalization constant."""
    s, lam = params.s, params.lam
    sn = s - n
    binding = sn * sn - (lam / sn) ** 2
    lg = lambda z: specfun.log_gamma(z).real
    log_m = (n - s) * math.log(2.0) + 0.5 * (
        lg(n + 1.0) + math.log(binding) + lg(2.0 * s - n + 1.0)
        - math.log(sn) - lg(s + 1.0 + lam / sn) - lg(s + 1.0 - lam / sn))
    return log_m, (-1.0) ** n


def _log_norm_rmi(params: SystemParams, n: int) -> float:
    """log of the trigonometric normalization constant (positive real)."""
    s, lam = params.s, params.lam
    sn = s + n
    lg = lambda z: specfun.log_gamma(z).real
    return (lam * math.pi / (2.0 * sn) + (n + s) * math.log(2.0) + 0.5 * (
        lg(n + 1.0) + math.log(sn * sn + (lam / sn) ** 2)
        + 2.0 * specfun.log_gamma(complex(s, lam / sn)).real
        - math.log(math.pi) - math.log(2.0 * sn) - lg(2.0 * s + n)))


def _check_excitation(params: SystemParams, n: int) -> Spectrum:
    if n < 0 or n != int(n):
        raise ValidationError(f"excitation must be a nonnegative integer, got {n}")
    spec = spectrum(params)
    if spec.n_max is not None and n > spec.n_max:
        raise ValidationError(
            f"excitation {n} out of range: only n <= {spec.n_max} is bounded")
    return spec


def _rmii_evaluator(params: SystemParams, n: int) -> Callable[[float, int], Jet]:
    s, lam = params.s, params.lam
    sn = s - n
    a = sn + lam / sn
    b = sn - lam / sn
    log_m, sign = _log_norm_rmii(params, n)

    def evaluate(x: float, order: int) -> Jet:
        xj = jets.lift(x, order)
        th = xj.tanh()
        pol = jets.compose_series(
            specfun.jacobi(n, a, b, th.value, min(n, order)), th)
        amp = xj.cosh().powr(-sn)
        expo = (xj * (-lam / sn) + log_m).exp()
        return sign * (amp * expo * pol)

    return evaluate


def _rmi_complex_evaluator(params: SystemParams, n: int) -> Callable[[float, int], Jet]:
    s, lam = params.s, params.lam
    sn = s + n
    c = complex(-sn, lam / sn)
    d = complex(-sn, -lam / sn)
    log_k = _log_norm_rmi(params, n)
    phase = 1j**n

    def evaluate(x: float, order: int) -> Jet:
        if not 0.0 < x < math.pi:
            raise EvaluationDomainError(
                f"trigonometric state evaluated outside (0, pi): x={x}")
        xj = jets.lift(x, order)
        z = 1j * xj.cot()
        pol = jets.compose_series(
            specfun.jacobi(n, c, d, z.value, min(n, order)), z)
        amp = xj.sin().powr(sn)
        expo = (xj * (-lam / sn) + log_k).exp()
        return phase * (amp * expo * pol)

    return evaluate


def eigenstate(params: SystemParams, n: int) -> WaveFunction:
    """Normalized closed-form bound state as a jet evaluator.

    Trigonometric states are real up to rounding; the public evaluator
    returns the real part (see `imag_residue` for the discarded residue).
    """
    spec = _check_excitation(params, n)
    if params.variant == RMII:
        evaluate = _rmii_evaluator(params, n)
    else:
        raw = _rmi_complex_evaluator(params, n)
        evaluate = lambda x, order: raw(x, order).real_part()
    return WaveFunction(evaluate, n, spec.energy(n), params,
                        label=f"{params.variant}(s={params.s}, lam={params.lam}) n={n}")


def imag_residue(params: SystemParams, n: int, xs) -> float:
    """max |Im psi| / max |psi| of the raw complex trigonometric state."""
    if params.variant != RMI:
        return 0.0
    raw = _rmi_complex_evaluator(params, n)
    vals = np.array([raw(float(x), 0).value for x in np.asarray(xs, dtype=float)])
    return float(np.max(np.abs(vals.imag)) / np.max(np.abs(vals)))


def default_grid(params: SystemParams, cutoff: float = 25.0, panels: int = 64,
                 points_per_panel: int = 32) -> QuadratureGrid:
    """Quadrature grid over the variant's working domain.

    The real line is truncated to [-cutoff, cutoff]; callers should confirm
    the truncation with `tail_maximum` when precision matters.
    """
    if params.variant == RMII:
        return gauss_legendre_grid(-cutoff, cutoff, panels, points_per_panel)
    return gauss_legendre_grid(0.0, math.pi, panels, points_per_panel)


def tail_maximum(wf: WaveFunction, cutoff: float) -> float:
    """max of |psi| at the two truncation endpoints."""
    return max(abs(wf(-cutoff).value), abs(wf(cutoff).value))


def schrodinger_residual(wf: WaveFunction, v_of_jet: Callable[[Jet], Jet],
                         xs) -> float:
    """Grid max-norm of (-psi'' + V psi - E psi) relative to max |psi|."""
    res = 0.0
    amp = 0.0
    for x in np.asarray(xs, dtype=float):
        j = wf(float(x), 2)
        v = v_of_jet(jets.lift(float(x), 0)).value
        r = -j.deriv(2) + v * j.value - wf.energy * j.value
        res = max(res, abs(r))
        amp = max(amp, abs(j.value))
    return res / amp


def count_nodes(values: np.ndarray) -> int:
    """Sign changes of a real sampled function (zeros of the state)."""
    v = np.asarray(values).real
    s = np.sign(v)
    s = s[s != 0]
    return int(np.sum(s[1:] * s[:-1] < 0))
