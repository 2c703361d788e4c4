"""Coherent states as (almost) eigenstates of the lowering operators,
their time evolution, densities, and position-momentum observables.

A state is a weighted superposition with weights w^n / sqrt(rho(n)),
rho(n) the running product of shifted energies.  Finite towers give
*almost* eigenstates: the lowering action misses only the unmatched top
term, whose norm |w|^(M) / sqrt(N rho_top) is the exact deviation.  The
infinite trigonometric tower converges super-factorially and is truncated
at a requested discarded-weight fraction.

Observables come in two independent routes: direct quadrature of the
evolved state, and a spectral route through cached one-body matrix
elements (used for dense (w, t) sweeps; the two must agree, and tests hold
them to it).
"""

from __future__ import annotations

import hashlib
import math
from dataclasses import dataclass, field
from typing import Callable, Optional, Union

import numpy as np

from .errors import ToleranceError, ValidationError
from .jets import Jet
from .ladder import apply, build_ladder, build_re_ladder, shifted_energy
from .quadrature import QuadratureGrid, integrate
from .susy import RationalExtension, type3_state
from .systems import (RMI, RMII, SystemParams, WaveFunction, eigenstate,
                      spectrum)

__all__ = [
    "CoherentState", "rho", "coherent_state", "almost_eigen_deviation",
    "measured_lowering_deviation", "evolve", "state_values", "density",
    "observables", "observables_spectral", "trajectory", "mean_energy",
    "KIND_FINITE_RMII", "KIND_SHIFTED_TYPE3", "KIND_TRUNCATED_RMI",
]

KIND_FINITE_RMII = "finite-rmii"
KIND_SHIFTED_TYPE3 = "shifted-type3"
KIND_TRUNCATED_RMI = "truncated-rmi"

Source = Union[SystemParams, RationalExtension]


def rho(source: Source, n: int) -> float:
    """Running product of shifted energies normalizing the superposition.

    Plain systems: rho(0) = 1, rho(n) = prod_{j=1..n} k(j).  Extensions
    index from the lowest laddered level: rho(1) = 1, and rho(n+1) equals
    the base system's rho(n).
    """
    if isinstance(source, RationalExtension):
        if n < 1:
            raise ValidationError("extension weights start at excitation 1")
        start = 2
    else:
        if n < 0:
            raise ValidationError("excitation must be nonnegative")
        start = 1
    out = 1.0
    for j in range(start, n + 1):
        out *= shifted_energy(source, j)
    return out


@dataclass(frozen=True)
class Term:
    amplitude: complex  # w^j / sqrt(rho); the complex phase of w^j rides along
    energy: float
    wf: WaveFunction


@dataclass(eq=False)
class CoherentState:
    """Normalized finite superposition labelled by w.

    norm_const is N(|w|^2) = sum |amplitude|^2; dividing amplitudes by
    sqrt(N) makes the state unit-norm.  truncation fields are set only for
    the truncated trigonometric kind.
    """

    w: complex
    kind: str
    source: Source
    terms: tuple
    norm_const: float
    truncation_tol: Optional[float] = None
    truncation_index: Optional[int] = None
    _cache: dict = field(default_factory=dict, repr=False)

    @property
    def n_terms(self) -> int:
        return len(self.terms)

    def coefficients(self, t: float = 0.0) -> np.ndarray:
        """Normalized amplitudes with time phases exp(-i E t)."""
        amps = np.array([term.amplitude for term in self.terms])
        energies = np.array([term.energy for term in self.terms])
        return amps * np.exp(-1j * energies * t) / math.sqrt(self.norm_const)


def _finite_terms(source: Source, w: complex) -> list:
    if isinstance(source, RationalExtension):
        top = spectrum(source.base).n_max
        make = lambda j: type3_state(source, j + 1)
        weight = lambda j: rho(source, j + 1)
        energy = lambda j: source.energy(j + 1)
    else:
        top = spectrum(source).n_max
        make = lambda j: eigenstate(source, j)
        weight = lambda j: rho(source, j)
        energy = lambda j: spectrum(source).energy(j)
    return [Term(w**j / math.sqrt(weight(j)), energy(j), make(j))
            for j in range(top + 1)]


def coherent_state(source: Source, w: complex, truncation_tol: Optional[float] = None,
                   max_terms: int = 200) -> CoherentState:
    """Build the coherent state labelled by w for a system or extension.

    Finite towers take every bounded level (the extension's added ground
    level stays out: the ladder does not act on it).  The trigonometric
    tower is cut at the first index where the bounded discarded-weight
    fraction drops below truncation_tol (default 1e-12).
    """
    w = complex(w)
    if isinstance(source, RationalExtension):
        terms = _finite_terms(source, w)
        norm = float(sum(abs(t.amplitude) ** 2 for t in terms))
        return CoherentState(w, KIND_SHIFTED_TYPE3, source, tuple(terms), norm)
    if source.variant == RMII:
        terms = _finite_terms(source, w)
        norm = float(sum(abs(t.amplitude) ** 2 for t in terms))
        return CoherentState(w, KIND_FINITE_RMII, source, tuple(terms), norm)

    tol = 1e-12 if truncation_tol is None else float(truncation_tol)
    if not tol > 0:
        raise ValidationError("truncation tolerance must be positive")
    spec = spectrum(source)
    ww = abs(w) ** 2
    weights = [1.0]
    rho_n = 1.0
    cut = None
    for n in range(1, max_terms + 1):
        rho_n *= spec.shifted_energy(n)
        weights.append(ww**n / rho_n)
        # the term ratio ww/k(n) is eventually < 1 and decreasing, so the
        # discarded tail is bounded by a geometric series from the next term
        q = ww / spec.shifted_energy(n + 1)
        if q < 1.0:
            tail = weights[-1] * q / (1.0 - q)
            if tail < tol * (sum(weights) + tail):
                cut = n
                break
    if cut is None:
        raise ToleranceError(
            f"truncation tolerance {tol} not reached within {max_terms} terms")
    terms = [Term(w**n / math.sqrt(rho(source, n)), spec.energy(n),
                  eigenstate(source, n)) for n in range(cut + 1)]
    norm = float(sum(abs(t.amplitude) ** 2 for t in terms))
    return CoherentState(w, KIND_TRUNCATED_RMI, source, tuple(terms), norm,
                         truncation_tol=tol, truncation_index=cut)


def mean_energy(cs: CoherentState) -> float:
    """<H> of the normalized state."""
    c = cs.coefficients(0.0)
    return float(sum(abs(ci) ** 2 * term.energy for ci, term in zip(c, cs.terms)).real)


def almost_eigen_deviation(cs: CoherentState) -> float:
    """||A- phi(w) - w phi(w)||: the norm of the unmatched top term,
    |w|^M / sqrt(N rho_top) for an M-term superposition."""
    top = cs.terms[-1]
    return float(abs(cs.w) * abs(top.amplitude) / math.sqrt(cs.norm_const))


# ---------------------------------------------------------------------------
# evaluation caches
# ---------------------------------------------------------------------------

def _points_key(xs: np.ndarray) -> str:
    return hashlib.sha1(np.ascontiguousarray(xs).tobytes()).hexdigest()


_STATE_CACHE: dict = {}


def _basis_values(cs: CoherentState, xs: np.ndarray, slopes: bool):
    """Values (and first derivatives) of every basis state on `xs`.

    Cached per state at module level: the basis does not depend on w, so
    (w, t) sweeps evaluate each state once per grid, and the truncated
    trigonometric kind only tops up new states as w grows the sum.
    """
    pk = _points_key(xs)
    vals = []
    ders = []
    for j, term in enumerate(cs.terms):
        key = (cs.source, term.wf.n, pk)
        entry = _STATE_CACHE.get(key)
        if entry is None or (slopes and entry[1] is None):
            if slopes:
                entry = term.wf.value_and_slope(xs)
            else:
                entry = (term.wf.values(xs), None)
            _STATE_CACHE[key] = entry
        vals.append(entry[0])
        ders.append(entry[1])
    if slopes:
        return np.array(vals), np.array(ders)
    return np.array(vals), None


def state_values(cs: CoherentState, t: float, xs, slopes: bool = False):
    """Phi(x, t) (and d/dx Phi) sampled on an array of points."""
    xs = np.asarray(xs, dtype=float)
    vals, ders = _basis_values(cs, xs, slopes)
    c = cs.coefficients(t)
    phi = c @ vals
    if not slopes:
        return phi
    return phi, c @ ders


def density(cs: CoherentState, t: float, xs) -> np.ndarray:
    phi = state_values(cs, t, xs)
    return np.abs(phi) ** 2


def evolve(cs: CoherentState, t: float) -> Callable[[float, int], Jet]:
    """Jet evaluator of the unitarily evolved state."""
    c = cs.coefficients(t)

    def evaluate(x: float, order: int) -> Jet:
        acc = None
        for ci, term in zip(c, cs.terms):
            piece = complex(ci) * term.wf(x, order)
            acc = piece if acc is None else acc + piece
        return acc

    return evaluate


# ---------------------------------------------------------------------------
# observables
# ---------------------------------------------------------------------------

def _coverage_check(phi: np.ndarray, grid: QuadratureGrid) -> None:
    peak = float(np.max(np.abs(phi)))
    edge = max(abs(phi[0]), abs(phi[-1]))
    if edge > 1e-6 * peak:
        raise ValidationError(
            f"quadrature grid does not cover the state: |phi| at the domain "
            f"edge is {edge:.3e} against a peak of {peak:.3e}")


def observables(cs: CoherentState, t: float, grid: QuadratureGrid) -> dict:
    """Position/momentum moments by direct quadrature at time t.

    <p> = Im int(conj(Phi) Phi') and <p^2> = int |Phi'|^2 (integration by
    parts; the states vanish at the domain edges, which is checked).
    """
    phi, dphi = state_values(cs, t, grid.nodes, slopes=True)
    _coverage_check(phi, grid)
    dens = np.abs(phi) ** 2
    norm = integrate(dens, grid).real
    mean_x = integrate(grid.nodes * dens, grid).real / norm
    mean_x2 = integrate(grid.nodes**2 * dens, grid).real / norm
    mean_p = integrate(np.conj(phi) * dphi, grid).imag / norm
    mean_p2 = integrate(np.abs(dphi) ** 2, grid).real / norm
    var_x = mean_x2 - mean_x**2
    var_p = mean_p2 - mean_p**2
    return {
        "norm": norm,
        "mean_x": mean_x,
        "mean_p": mean_p,
        "var_x": var_x,
        "var_p": var_p,
        "uncertainty_product": var_x * var_p,
    }


_MATRIX_CACHE: dict = {}


def _matrix_elements(cs: CoherentState, grid: QuadratureGrid) -> dict:
    """One-body matrices over the basis states, cached per (source, grid)."""
    key = (cs.source, cs.n_terms, grid.x_lo, grid.x_hi, grid.panels,
           grid.points_per_panel)
    if key not in _MATRIX_CACHE:
        vals, ders = _basis_values(cs, grid.nodes, slopes=True)
        wx = grid.weights * grid.nodes
        wx2 = grid.weights * grid.nodes**2
        conj = np.conj(vals)
        x_mat = conj @ (wx[None, :] * vals).T
        x2_mat = conj @ (wx2[None, :] * vals).T
        p_mat = -1j * (conj @ (grid.weights[None, :] * ders).T)
        d_mat = np.conj(ders) @ (grid.weights[None, :] * ders).T
        _MATRIX_CACHE[key] = {"x": x_mat, "x2": x2_mat, "p": p_mat, "p2": d_mat}
    return _MATRIX_CACHE[key]


def observables_spectral(cs: CoherentState, t: float, grid: QuadratureGrid) -> dict:
    """Same moments through cached matrix elements (cheap in t and w)."""
    m = _matrix_elements(cs, grid)
    c = cs.coefficients(t)
    cc = np.conj(c)
    mean_x = float((cc @ m["x"] @ c).real)
    mean_x2 = float((cc @ m["x2"] @ c).real)
    mean_p = float((cc @ m["p"] @ c).real)
    mean_p2 = float((cc @ m["p2"] @ c).real)
    var_x = mean_x2 - mean_x**2
    var_p = mean_p2 - mean_p**2
    return {
        "norm": float((cc @ c).real),
        "mean_x": mean_x,
        "mean_p": mean_p,
        "var_x": var_x,
        "var_p": var_p,
        "uncertainty_product": var_x * var_p,
    }


def trajectory(cs: CoherentState, ts, grid: QuadratureGrid):
    """(<x>(t), <p>(t)) sampled on a time grid (spectral route)."""
    m = _matrix_elements(cs, grid)
    xs = np.empty(len(ts))
    ps = np.empty(len(ts))
    for i, t in enumerate(np.asarray(ts, dtype=float)):
        c = cs.coefficients(t)
        cc = np.conj(c)
        xs[i] = (cc @ m["x"] @ c).real
        ps[i] = (cc @ m["p"] @ c).real
    return xs, ps


# ---------------------------------------------------------------------------
# chain-applied lowering (the measurement side of the deviation identity)
# ---------------------------------------------------------------------------

_CHAIN_IMAGE_CACHE: dict = {}


def _lowering_images(cs: CoherentState, xs: np.ndarray) -> np.ndarray:
    """Values of A- applied termwise through the operator chains.

    Cached per (source, points, term count) at module level: the chains do
    not depend on w, so sweeps over w reuse one expensive evaluation.
    """
    key = (cs.source, _points_key(xs), cs.n_terms)
    if key not in _CHAIN_IMAGE_CACHE:
        is_ext = isinstance(cs.source, RationalExtension)
        images = []
        for j, term in enumerate(cs.terms):
            if is_ext:
                chain = build_re_ladder(cs.source, j + 1, "-")
            else:
                chain = build_ladder(cs.source, j, "-")
            images.append(apply(chain, term.wf).values(xs))
        _CHAIN_IMAGE_CACHE[key] = np.array(images)
    return _CHAIN_IMAGE_CACHE[key]


def measured_lowering_deviation(cs: CoherentState, grid: QuadratureGrid) -> float:
    """||A- phi(w) - w phi(w)|| with A- applied through the actual operator
    chains and the norm taken by quadrature."""
    images = _lowering_images(cs, grid.nodes)
    c = cs.coefficients(0.0)
    lowered = c @ images
    residual = lowered - cs.w * state_values(cs, 0.0, grid.nodes)
    return float(math.sqrt(integrate(np.abs(residual) ** 2, grid).real))
