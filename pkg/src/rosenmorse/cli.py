"""Command-line frontend: batch computation with deterministic CSV/JSON
emission, one subcommand per report, optional matplotlib rendering of the
same data to a PNG next to the delimited output.

Conventions:
  - floats are written with 17 significant digits (lossless round-trip);
  - identical configuration produces byte-identical data files;
  - JSON output embeds the resolved flat config; feeding that file back
    through --config reproduces the run (flags still override);
  - exit codes: 0 success, 2 invalid parameters/config, 3 a *-verify
    command found a residual above tolerance.
"""

from __future__ import annotations

import functools
import json
import math
import sys
from pathlib import Path

import click
import numpy as np

from . import classical, coherent, jets, ladder, susy, systems
from .errors import ToleranceError, ValidationError
from .quadrature import gauss_legendre_grid, integrate
from .systems import RMI, RMII, SystemParams

RANDOM_SEED = 20210626  # fixed seed: verify commands must be reproducible


# ---------------------------------------------------------------------------
# config plumbing
# ---------------------------------------------------------------------------

def _parse_values(spec) -> np.ndarray:
    """Parse 'start:stop:step' (inclusive of stop up to rounding) or a
    comma-separated list into a float array."""
    if isinstance(spec, (int, float)):
        return np.array([float(spec)])
    text = str(spec)
    if ":" in text:
        parts = text.split(":")
        if len(parts) != 3:
            raise ValidationError(f"grid spec must be start:stop:step, got {text!r}")
        a, b, step = (float(p) for p in parts)
        if step <= 0 or b < a:
            raise ValidationError(f"bad grid spec {text!r}")
        return np.arange(a, b + step / 2.0, step)
    try:
        vals = np.array([float(p) for p in text.split(",") if p.strip() != ""])
    except ValueError as err:
        raise ValidationError(f"cannot parse value list {text!r}") from err
    if vals.size == 0:
        raise ValidationError(f"empty value list {text!r}")
    if vals.size > 1 and np.any(np.diff(vals) <= 0):
        raise ValidationError(f"value list must be strictly increasing: {text!r}")
    return vals


def _load_config(path) -> dict:
    if path is None:
        return {}
    try:
        doc = json.loads(Path(path).read_text())
    except json.JSONDecodeError as err:
        raise ValidationError(f"config file {path} is not valid JSON: {err}") from err
    if isinstance(doc, dict) and isinstance(doc.get("config"), dict):
        return dict(doc["config"])
    if not isinstance(doc, dict):
        raise ValidationError("config file must hold a flat JSON object")
    return doc


REQUIRED = object()  # defaults-dict marker: no fallback, flag or config must set it


def _resolve(flags: dict, config: dict, defaults: dict) -> dict:
    """flags override config-file values override defaults."""
    out = {}
    for key, fallback in defaults.items():
        if flags.get(key) is not None:
            out[key] = flags[key]
        elif key in config and config[key] is not None:
            out[key] = config[key]
        else:
            out[key] = fallback
    missing = [k for k, v in out.items() if v is REQUIRED]
    if missing:
        raise ValidationError(
            f"missing required option(s): {', '.join('--' + m for m in missing)}")
    return out


def _fmt_cell(v) -> str:
    if isinstance(v, str):
        return v
    if isinstance(v, (bool, np.bool_)):
        return "1" if v else "0"
    if isinstance(v, (int, np.integer)):
        return str(int(v))
    return f"{float(v):.17g}"


def _jsonable(v):
    if isinstance(v, (np.floating, float)):
        return float(v)
    if isinstance(v, (np.integer, int)):
        return int(v)
    return v


def _write_rows(command: str, cfg: dict, columns, rows, fmt: str, path: str) -> str:
    if fmt == "csv":
        lines = [",".join(columns)]
        lines.extend(",".join(_fmt_cell(v) for v in row) for row in rows)
        Path(path).write_text("\n".join(lines) + "\n")
    else:
        doc = {
            "command": command,
            "config": {k: _jsonable(v) for k, v in cfg.items()},
            "columns": list(columns),
            "rows": [[_jsonable(v) for v in row] for row in rows],
        }
        Path(path).write_text(json.dumps(doc, sort_keys=True, indent=2) + "\n")
    return path


def _out_path(cfg: dict, command: str) -> str:
    if cfg.get("output"):
        return str(cfg["output"])
    return f"{command}.{cfg['format']}"


def _guarded(fn):
    @functools.wraps(fn)
    def wrapper(*args, **kwargs):
        try:
            return fn(*args, **kwargs)
        except ValidationError as err:
            click.echo(f"error: {err}", err=True)
            sys.exit(2)
        except ToleranceError as err:
            click.echo(f"tolerance failure: {err}", err=True)
            sys.exit(3)

    return wrapper


def _common_options(fn):
    fn = click.option("--config", "config_path", default=None,
                      help="JSON config file; flags override its values.")(fn)
    fn = click.option("--output", default=None, help="Output data file path.")(fn)
    fn = click.option("--format", "fmt", type=click.Choice(["csv", "json"]),
                      default=None, help="Output format (default csv).")(fn)
    fn = click.option("--plot/--no-plot", "plot", default=None,
                      help="Also render a PNG next to the data file.")(fn)
    return fn


def _system_options(fn):
    fn = click.option("--variant", type=click.Choice([RMII, RMI]), default=None,
                      help="Which Rosen-Morse system.")(fn)
    fn = click.option("--s", type=float, default=None, help="Depth/shape parameter.")(fn)
    fn = click.option("--lambda", "lam", type=float, default=None,
                      help="Potential asymmetry parameter.")(fn)
    return fn


_COMMON_DEFAULTS = {"output": "", "format": "csv", "plot": False}
_SYSTEM_DEFAULTS = {"variant": REQUIRED, "s": REQUIRED, "lambda": REQUIRED}


def _build_params(cfg) -> SystemParams:
    return SystemParams(float(cfg["lambda"]), float(cfg["s"]), cfg["variant"])


def _build_source(cfg):
    """SystemParams, or the type III extension when k is configured."""
    params = _build_params(cfg)
    k = cfg.get("k")
    if k in (None, "", 0):
        return params
    if params.variant != RMII:
        raise ValidationError("--k (rational extension) requires --variant rmii")
    return susy.type3_extension(params, int(k))


def _coherent(cfg):
    source = _build_source(cfg)
    return coherent.coherent_state(source, complex(float(cfg["w"])),
                                   truncation_tol=float(cfg["truncation_tol"]))


def _default_xs(variant: str, cutoff: float) -> str:
    if variant == RMII:
        lim = min(10.0, cutoff)
        return f"{-lim}:{lim}:0.05"
    return "0.02:3.12:0.01"


def _quad_grid(cfg, params: SystemParams):
    return systems.default_grid(params, cutoff=float(cfg["cutoff"]),
                                panels=int(cfg["panels"]))


def _echo_written(data_path, figure_path=None):
    click.echo(f"wrote {data_path}")
    if figure_path:
        click.echo(f"wrote {figure_path}")


@click.group()
def main():
    """Rosen-Morse systems: spectra, eigenstates, SUSY and ladder
    verification, coherent states, and classical phase flows."""


# ---------------------------------------------------------------------------
# spectrum
# ---------------------------------------------------------------------------

@main.command()
@_system_options
@click.option("--n-max", "n_max", type=int, default=None,
              help="Row cap for the infinite trigonometric tower (default 20).")
@_common_options
@_guarded
def spectrum(variant, s, lam, n_max, config_path, output, fmt, plot):
    """Bound-state energies and shifted energies."""
    cfg = _resolve(
        {"variant": variant, "s": s, "lambda": lam, "n_max": n_max,
         "output": output, "format": fmt, "plot": plot},
        _load_config(config_path),
        {**_SYSTEM_DEFAULTS, "n_max": 20, **_COMMON_DEFAULTS})
    params = _build_params(cfg)
    spec = systems.spectrum(params)
    top = spec.n_max if spec.n_max is not None else int(cfg["n_max"])
    rows = [(n, spec.energy(n), spec.shifted_energy(n)) for n in range(top + 1)]
    path = _write_rows("spectrum", cfg, ("n", "energy", "shifted_energy"),
                       rows, cfg["format"], _out_path(cfg, "spectrum"))
    fig = None
    if cfg["plot"]:
        from . import plots
        fig = plots.render_spectrum([r[0] for r in rows], [r[1] for r in rows],
                                    str(Path(path).with_suffix(".png")),
                                    f"{params.variant} s={params.s} lam={params.lam}")
    click.echo(f"{len(rows)} levels, E(0) = {rows[0][1]:.10g}")
    _echo_written(path, fig)


# ---------------------------------------------------------------------------
# eigenstate
# ---------------------------------------------------------------------------

@main.command()
@_system_options
@click.option("--n", type=int, default=None, help="Excitation number.")
@click.option("--x", "x_spec", default=None, help="x grid (start:stop:step or list).")
@click.option("--jet-order", type=int, default=None,
              help="Emit derivative columns up to this order (default 1).")
@click.option("--cutoff", type=float, default=None, help="Domain truncation (default 25).")
@_common_options
@_guarded
def eigenstate(variant, s, lam, n, x_spec, jet_order, cutoff, config_path,
               output, fmt, plot):
    """Sample one normalized eigenstate on an x grid."""
    cfg = _resolve(
        {"variant": variant, "s": s, "lambda": lam, "n": n, "x": x_spec,
         "jet_order": jet_order, "cutoff": cutoff, "output": output,
         "format": fmt, "plot": plot},
        _load_config(config_path),
        {**_SYSTEM_DEFAULTS, "n": REQUIRED, "x": "", "jet_order": 1, "cutoff": 25.0,
         **_COMMON_DEFAULTS})
    params = _build_params(cfg)
    wf = systems.eigenstate(params, int(cfg["n"]))
    xs = _parse_values(cfg["x"] or _default_xs(params.variant, float(cfg["cutoff"])))
    order = int(cfg["jet_order"])
    columns = ["x", "psi", "density"] + [f"psi_d{j}" for j in range(1, order + 1)]
    rows = []
    for x in xs:
        j = wf(float(x), order)
        vals = [float(x), j.value.real, abs(j.value) ** 2]
        vals.extend(j.deriv(m).real for m in range(1, order + 1))
        rows.append(tuple(vals))
    path = _write_rows("eigenstate", cfg, columns, rows, cfg["format"],
                       _out_path(cfg, "eigenstate"))
    fig = None
    if cfg["plot"]:
        from . import plots
        fig = plots.render_eigenstate(xs, [r[1] for r in rows], [r[2] for r in rows],
                                      str(Path(path).with_suffix(".png")),
                                      f"{params.variant} n={int(cfg['n'])}")
    click.echo(f"E({int(cfg['n'])}) = {wf.energy:.10g}")
    _echo_written(path, fig)


# ---------------------------------------------------------------------------
# verification commands
# ---------------------------------------------------------------------------

def _random_bump_jets(rng, count, lo, hi):
    """Smooth, effectively compactly supported test functions: gaussian
    bumps times low-degree polynomials with random coefficients."""
    specs = []
    for _ in range(count):
        x0 = rng.uniform(lo * 0.4, hi * 0.4)
        sigma = rng.uniform(0.6, 1.8)
        coeffs = rng.normal(size=3)
        specs.append((x0, sigma, coeffs))

    def make(spec):
        x0, sigma, coeffs = spec

        def f(x: float, order: int):
            xj = jets.lift(x, order)
            bump = (-(xj - x0) * (xj - x0) * (0.5 / sigma**2)).exp()
            poly = coeffs[0] + coeffs[1] * xj + coeffs[2] * xj * xj
            return bump * poly

        return f

    return [make(sp) for sp in specs]


def _verify_points(params: SystemParams) -> np.ndarray:
    if params.variant == RMII:
        return np.linspace(-10.0, 10.0, 201)
    return np.linspace(0.1, math.pi - 0.1, 201)


def _apply_h(v_of_jet, f, x: float, order: int):
    fj = f(x, order + 2)
    xj = jets.lift(x, order + 2)
    return -fj.differentiate().differentiate() + v_of_jet(xj) * fj


def susy_checks(params: SystemParams, k=None, cutoff: float = 25.0) -> list:
    """All first-order SUSY identities as (name, value, tolerance) rows."""
    rng = np.random.default_rng(RANDOM_SEED)
    xs = _verify_points(params)
    spec = systems.spectrum(params)
    w = susy.superpotential(params)
    ground = spec.ground_energy
    v_of = lambda xj: systems.potential(params, xj)

    checks = []

    # Riccati: W' + W^2 - V + eps = 0, scaled by the potential span
    num = 0.0
    den = 0.0
    for x in xs:
        wj = w(float(x), 1)
        v = v_of(jets.lift(float(x), 0)).value
        num = max(num, abs(wj.deriv(1) + wj.value**2 - v + ground))
        den = max(den, abs(v - ground))
    checks.append(("riccati_residual", num / den, 1e-10))

    # partner potential identity (grid max-norm, absolute)
    partner = susy.partner_potential(params)
    shifted = susy.partner_params(params)
    diff = max(abs((partner(jets.lift(float(x), 0))
                    - systems.potential(shifted, jets.lift(float(x), 0))).value)
               for x in xs)
    checks.append(("partner_identity", diff, 1e-12))

    # ground-state annihilation
    b_minus, b_plus = susy.intertwiners(params)
    psi0 = systems.eigenstate(params, 0)
    vals0 = psi0.values(xs)
    ann = max(abs(b_minus.apply(psi0(float(x), 1)).value) for x in xs)
    checks.append(("ground_annihilation", ann / np.max(np.abs(vals0)), 1e-10))

    # intertwining and factorizations on random smooth test jets
    lo, hi = (xs[0], xs[-1])
    test_fns = _random_bump_jets(rng, 20, lo, hi)
    probe = xs[::10]
    v_partner = susy.partner_potential(params)
    worst_inter = 0.0
    worst_fac = 0.0
    worst_fac_partner = 0.0
    for f in test_fns:
        for x in probe:
            x = float(x)
            bhf = b_minus.apply(_apply_h(v_of, f, x, 1))
            # H~ (B- f): apply B- first, then the partner Hamiltonian
            bf = lambda xx, order: b_minus.apply(f(xx, order + 1))
            htild_bf = _apply_h(v_partner, bf, x, 0)
            scale = max(abs(bhf.value), abs(htild_bf.value), 1e-6)
            worst_inter = max(worst_inter, abs(bhf.value - htild_bf.value) / scale)

            hf = _apply_h(v_of, f, x, 0).value
            fac = b_plus.apply(b_minus.apply(f(x, 2))).value + ground * f(x, 0).value
            worst_fac = max(worst_fac, abs(fac - hf) / max(abs(hf), 1e-6))

            htf = _apply_h(v_partner, f, x, 0).value
            fac2 = b_minus.apply(b_plus.apply(f(x, 2))).value + ground * f(x, 0).value
            worst_fac_partner = max(worst_fac_partner,
                                    abs(fac2 - htf) / max(abs(htf), 1e-6))
    checks.append(("intertwining_residual", worst_inter, 1e-8))
    checks.append(("factorization_residual", worst_fac, 1e-9))
    checks.append(("partner_factorization_residual", worst_fac_partner, 1e-9))

    if k is not None:
        ext = susy.type3_extension(params, int(k))
        checks.append(("extension_level", ext.eps, math.nan))
        ext_v = lambda xj: susy.type3_potential(ext, xj)
        t0 = susy.type3_state(ext, 0)
        checks.append(("extension_ground_residual",
                       systems.schrodinger_residual(t0, ext_v, xs), 1e-8))
        asym = max(abs(ext_v(jets.lift(cutoff, 0)).value.real - 2.0 * params.lam),
                   abs(ext_v(jets.lift(-cutoff, 0)).value.real + 2.0 * params.lam))
        checks.append(("extension_asymptote", asym, 1e-6))
        # two independent constructions of the same potential
        wext = ext.b_minus.w
        two_route = max(
            abs((ext_v(jets.lift(float(x), 0))
                 - (v_of(jets.lift(float(x), 1))
                    - 2.0 * wext(float(x), 1).differentiate())).value)
            for x in xs)
        checks.append(("extension_potential_two_routes", two_route, 1e-9))
        grid = gauss_legendre_grid(-cutoff, cutoff, 64)
        inv_norm = integrate(np.abs(t0.values(grid.nodes)) ** 2, grid).real
        checks.append(("extension_ground_norm", inv_norm, math.nan))
    return checks


@main.command("susy-verify")
@_system_options
@click.option("--k", type=int, default=None, help="Also verify the degree-k extension.")
@click.option("--cutoff", type=float, default=None)
@_common_options
@_guarded
def susy_verify(variant, s, lam, k, cutoff, config_path, output, fmt, plot):
    """Verify superpotential, intertwining, factorization, and extension
    identities; exit 3 when any residual exceeds its tolerance."""
    cfg = _resolve(
        {"variant": variant, "s": s, "lambda": lam, "k": k, "cutoff": cutoff,
         "output": output, "format": fmt, "plot": plot},
        _load_config(config_path),
        {**_SYSTEM_DEFAULTS, "k": None, "cutoff": 25.0, **_COMMON_DEFAULTS})
    params = _build_params(cfg)
    k_val = cfg.get("k")
    checks = susy_checks(params, k=None if k_val in (None, "") else int(k_val),
                         cutoff=float(cfg["cutoff"]))
    rows = []
    failures = []
    for name, value, tol in checks:
        ok = True if math.isnan(tol) else value <= tol
        rows.append((name, value, tol, int(ok)))
        mark = "info" if math.isnan(tol) else ("pass" if ok else "FAIL")
        click.echo(f"{name:38s} {value: .6e}  tol {tol:.0e}  {mark}"
                   if not math.isnan(tol) else f"{name:38s} {value: .6e}  (info)")
        if not ok:
            failures.append((name, value, tol))
    path = _write_rows("susy-verify", cfg, ("check", "value", "tolerance", "passed"),
                       rows, cfg["format"], _out_path(cfg, "susy-verify"))
    _echo_written(path)
    if failures:
        raise ToleranceError("; ".join(
            f"{n}: {v:.3e} > {t:.0e}" for n, v, t in failures))


def ladder_checks(params: SystemParams, k=None, n_check: int = 6,
                  gha_n: int = 4) -> list:
    """Ladder action, annihilation, and algebra residual rows."""
    rows = []
    spec = systems.spectrum(params)
    top = spec.n_max if spec.n_max is not None else 10**9

    def tol_for(n):
        return 1e-6 if n <= 6 else 1e-3

    rows.append(("annihilation", 0, "-", ladder.annihilation_residual(params), 1e-10))
    for n in range(0, n_check + 1):
        if n + 1 <= top:
            rows.append(("action", n, "+",
                         ladder.action_residual(params, n, "+"), tol_for(n)))
        if n >= 1 and n <= top:
            rows.append(("action", n, "-",
                         ladder.action_residual(params, n, "-"), tol_for(n)))
    for n in range(0, gha_n + 1):
        res = ladder.gha_check(params, n)
        rows.append(("gha_hamiltonian_raising", n, "+", res["hamiltonian_raising"], 1e-6))
        rows.append(("gha_hamiltonian_lowering", n, "-", res["hamiltonian_lowering"], 1e-6))
        rows.append(("gha_commutator", n, "", res["commutator"], 1e-6))
    if k is not None:
        ext = susy.type3_extension(params, int(k))
        rows.append(("re_annihilation", 1, "-", ladder.annihilation_residual(ext), 1e-9))
        rows.append(("re_action", 2, "-", ladder.action_residual(ext, 2, "-"), 1e-6))
        rows.append(("re_action", 1, "+", ladder.action_residual(ext, 1, "+"), 1e-6))
        rows.append(("re_action", 3, "-", ladder.action_residual(ext, 3, "-"), 1e-6))
    return rows


@main.command("ladder-verify")
@_system_options
@click.option("--k", type=int, default=None, help="Also verify the extension ladder.")
@click.option("--n-check", type=int, default=None, help="Top excitation for the action check.")
@click.option("--gha-n", type=int, default=None, help="Top excitation for algebra checks.")
@_common_options
@_guarded
def ladder_verify(variant, s, lam, k, n_check, gha_n, config_path, output, fmt, plot):
    """Verify the ladder action and the generated algebra on eigenstates."""
    cfg = _resolve(
        {"variant": variant, "s": s, "lambda": lam, "k": k, "n_check": n_check,
         "gha_n": gha_n, "output": output, "format": fmt, "plot": plot},
        _load_config(config_path),
        {**_SYSTEM_DEFAULTS, "k": None, "n_check": 6, "gha_n": 4, **_COMMON_DEFAULTS})
    params = _build_params(cfg)
    k_val = cfg.get("k")
    rows = ladder_checks(params, k=None if k_val in (None, "") else int(k_val),
                         n_check=int(cfg["n_check"]), gha_n=int(cfg["gha_n"]))
    out_rows = []
    failures = []
    for name, n, direction, value, tol in rows:
        ok = value <= tol
        out_rows.append((name, n, direction, value, tol, int(ok)))
        click.echo(f"{name:28s} n={n:<3d} {direction or ' '}  {value: .6e}  "
                   f"tol {tol:.0e}  {'pass' if ok else 'FAIL'}")
        if not ok:
            failures.append((name, n, value, tol))
    path = _write_rows("ladder-verify", cfg,
                       ("check", "n", "direction", "residual", "tolerance", "passed"),
                       out_rows, cfg["format"], _out_path(cfg, "ladder-verify"))
    _echo_written(path)
    if failures:
        raise ToleranceError("; ".join(
            f"{n0} n={n1}: {v:.3e} > {t:.0e}" for n0, n1, v, t in failures))


# ---------------------------------------------------------------------------
# coherent-state reports
# ---------------------------------------------------------------------------

_COHERENT_DEFAULTS = {
    **_SYSTEM_DEFAULTS, "k": None, "truncation_tol": 1e-12, "cutoff": 25.0,
    "panels": 64, **_COMMON_DEFAULTS,
}


def _coherent_options(fn):
    fn = click.option("--k", type=int, default=None,
                      help="Use the degree-k rational extension (hyperbolic only).")(fn)
    fn = click.option("--truncation-tol", type=float, default=None,
                      help="Discarded-weight fraction for the trigonometric sum.")(fn)
    fn = click.option("--cutoff", type=float, default=None)(fn)
    fn = click.option("--panels", type=int, default=None)(fn)
    return fn


@main.command("coherent-density")
@_system_options
@_coherent_options
@click.option("--w", "w_spec", default=None, help="w values (list or range).")
@click.option("--t", "t_spec", default=None, help="times (list or range).")
@click.option("--x", "x_spec", default=None, help="x grid.")
@_common_options
@_guarded
def coherent_density(variant, s, lam, k, truncation_tol, cutoff, panels,
                     w_spec, t_spec, x_spec, config_path, output, fmt, plot):
    """Probability density of coherent states over x for each (w, t)."""
    cfg = _resolve(
        {"variant": variant, "s": s, "lambda": lam, "k": k,
         "truncation_tol": truncation_tol, "cutoff": cutoff, "panels": panels,
         "w": w_spec, "t": t_spec, "x": x_spec, "output": output,
         "format": fmt, "plot": plot},
        _load_config(config_path),
        {**_COHERENT_DEFAULTS, "w": "0:10:0.1", "t": "0", "x": ""})
    params = _build_params(cfg)
    ws = _parse_values(cfg["w"])
    ts = _parse_values(cfg["t"])
    xs = _parse_values(cfg["x"] or _default_xs(params.variant, float(cfg["cutoff"])))
    rows = []
    dens_by_wt = {}
    for w in ws:
        cs = _coherent({**cfg, "w": w})
        for t in ts:
            dens = coherent.density(cs, float(t), xs)
            dens_by_wt[(float(w), float(t))] = dens
            rows.extend((float(w), float(t), float(x), float(d))
                        for x, d in zip(xs, dens))
    path = _write_rows("coherent-density", cfg, ("w", "t", "x", "density"),
                       rows, cfg["format"], _out_path(cfg, "coherent-density"))
    fig = None
    if cfg["plot"]:
        from . import plots
        fig_path = str(Path(path).with_suffix(".png"))
        title = f"{params.variant} s={params.s} lam={params.lam}"
        if len(ts) == 1:
            grid2d = [dens_by_wt[(float(w), float(ts[0]))] for w in ws]
            fig = plots.render_density(xs, ws, grid2d, "w", fig_path, title)
        elif len(ws) == 1:
            grid2d = [dens_by_wt[(float(ws[0]), float(t))] for t in ts]
            fig = plots.render_density(xs, ts, grid2d, "t", fig_path, title)
        else:
            click.echo("plot skipped: vary only one of w, t for a heatmap")
    _echo_written(path, fig)


@main.command()
@_system_options
@_coherent_options
@click.option("--w", "w_spec", default=None, help="w values (list or range).")
@click.option("--t", "t_spec", default=None, help="time grid (start:stop:step).")
@_common_options
@_guarded
def trajectory(variant, s, lam, k, truncation_tol, cutoff, panels, w_spec,
               t_spec, config_path, output, fmt, plot):
    """Expectation-value trajectories (<x>(t), <p>(t)) per w."""
    cfg = _resolve(
        {"variant": variant, "s": s, "lambda": lam, "k": k,
         "truncation_tol": truncation_tol, "cutoff": cutoff, "panels": panels,
         "w": w_spec, "t": t_spec, "output": output, "format": fmt, "plot": plot},
        _load_config(config_path),
        {**_COHERENT_DEFAULTS, "w": "0.5,1,2", "t": "0:3:0.005"})
    params = _build_params(cfg)
    ws = _parse_values(cfg["w"])
    ts = _parse_values(cfg["t"])
    grid = _quad_grid(cfg, params)
    rows = []
    curves = {}
    for w in ws:
        cs = _coherent({**cfg, "w": w})
        mean_x, mean_p = coherent.trajectory(cs, ts, grid)
        curves[float(w)] = (mean_x, mean_p)
        rows.extend((float(w), float(t), float(x), float(p))
                    for t, x, p in zip(ts, mean_x, mean_p))
    path = _write_rows("trajectory", cfg, ("w", "t", "mean_x", "mean_p"),
                       rows, cfg["format"], _out_path(cfg, "trajectory"))
    fig = None
    if cfg["plot"]:
        from . import plots
        fig = plots.render_trajectory(curves, str(Path(path).with_suffix(".png")),
                                      f"{params.variant} s={params.s} lam={params.lam}")
    _echo_written(path, fig)


@main.command("uncertainty-sweep")
@_system_options
@_coherent_options
@click.option("--w", "w_spec", default=None, help="w sweep (start:stop:step).")
@click.option("--t", type=float, default=None, help="Evaluation time (default 0).")
@_common_options
@_guarded
def uncertainty_sweep(variant, s, lam, k, truncation_tol, cutoff, panels,
                      w_spec, t, config_path, output, fmt, plot):
    """Position-momentum uncertainty product as a function of w."""
    cfg = _resolve(
        {"variant": variant, "s": s, "lambda": lam, "k": k,
         "truncation_tol": truncation_tol, "cutoff": cutoff, "panels": panels,
         "w": w_spec, "t": t, "output": output, "format": fmt, "plot": plot},
        _load_config(config_path),
        {**_COHERENT_DEFAULTS, "w": "0:15:0.25", "t": 0.0})
    params = _build_params(cfg)
    ws = _parse_values(cfg["w"])
    grid = _quad_grid(cfg, params)
    t_val = float(cfg["t"])
    rows = []
    violations = []
    for w in ws:
        cs = _coherent({**cfg, "w": w})
        obs = coherent.observables_spectral(cs, t_val, grid)
        rows.append((float(w), obs["var_x"], obs["var_p"], obs["uncertainty_product"]))
        if obs["uncertainty_product"] < 0.25 - 1e-9:
            violations.append((float(w), obs["uncertainty_product"]))
    path = _write_rows("uncertainty-sweep", cfg,
                       ("w", "var_x", "var_p", "uncertainty_product"),
                       rows, cfg["format"], _out_path(cfg, "uncertainty-sweep"))
    fig = None
    if cfg["plot"]:
        from . import plots
        fig = plots.render_uncertainty([r[0] for r in rows], [r[3] for r in rows],
                                       str(Path(path).with_suffix(".png")),
                                       f"{params.variant} s={params.s} lam={params.lam}")
    _echo_written(path, fig)
    if violations:
        raise ToleranceError(
            "uncertainty product below 1/4 at " +
            ", ".join(f"w={w:g} ({v:.12f})" for w, v in violations))


# ---------------------------------------------------------------------------
# classical orbit
# ---------------------------------------------------------------------------

_AUTO_DT = {  # calibrated so the energy drift over t in [0, 3] stays < 1e-8
    ("rmii", False): 1e-5,
    ("rmii", True): 8e-7,
    ("rmi", False): 3e-7,
}


@main.command("classical-orbit")
@_system_options
@_coherent_options
@click.option("--w", type=float, default=None,
              help="Match the orbit energy to <H> of the coherent state phi(w).")
@click.option("--energy", type=float, default=None, help="Orbit energy directly.")
@click.option("--t-end", type=float, default=None)
@click.option("--dt", type=float, default=None, help="Fixed step (default calibrated per system).")
@click.option("--x0", type=float, default=None, help="Start position (default right turning point).")
@click.option("--p0", type=float, default=None, help="Start momentum (default 0).")
@_common_options
@_guarded
def classical_orbit(variant, s, lam, k, truncation_tol, cutoff, panels, w,
                    energy, t_end, dt, x0, p0, config_path, output, fmt, plot):
    """Phase-space trajectory of the classical analogue."""
    cfg = _resolve(
        {"variant": variant, "s": s, "lambda": lam, "k": k,
         "truncation_tol": truncation_tol, "cutoff": cutoff, "panels": panels,
         "w": w, "energy": energy, "t_end": t_end, "dt": dt, "x0": x0, "p0": p0,
         "output": output, "format": fmt, "plot": plot},
        _load_config(config_path),
        {**_COHERENT_DEFAULTS, "w": None, "energy": None, "t_end": 3.0,
         "dt": None, "x0": None, "p0": None})
    params = _build_params(cfg)
    k_val = cfg.get("k")
    is_ext = k_val not in (None, "", 0)
    if is_ext:
        ext = susy.type3_extension(params, int(k_val))
        pot = classical.extension_potential(ext)
    else:
        pot = classical.system_potential(params)

    if cfg["energy"] is not None:
        e_val = float(cfg["energy"])
    elif cfg["w"] is not None:
        cs = _coherent({**cfg, "w": float(cfg["w"])})
        e_val = coherent.mean_energy(cs)
    else:
        raise ValidationError("provide --w or --energy to set the orbit")

    dt_val = cfg["dt"]
    if dt_val is None:
        dt_val = _AUTO_DT[(params.variant, is_ext)]
    x_start = cfg["x0"]
    if x_start is None:
        x_start = classical.turning_points(pot, e_val)[1]
    p_start = 0.0 if cfg["p0"] is None else float(cfg["p0"])
    cfg["dt"] = float(dt_val)
    cfg["x0"] = float(x_start)
    cfg["p0"] = float(p_start)
    cfg["energy"] = float(e_val)

    traj = classical.flow(pot, float(x_start), float(p_start),
                          float(cfg["t_end"]), float(dt_val))
    rows = list(zip(traj.t, traj.x, traj.p))
    path = _write_rows("classical-orbit", cfg, ("t", "x", "p"), rows,
                       cfg["format"], _out_path(cfg, "classical-orbit"))
    fig = None
    if cfg["plot"]:
        from . import plots
        fig = plots.render_orbit(traj.x, traj.p, str(Path(path).with_suffix(".png")),
                                 f"{pot.label} E={e_val:.6g}")
    click.echo(f"E = {traj.energy:.10g}, relative energy drift = {traj.energy_drift():.3e}")
    _echo_written(path, fig)


if __name__ == "__main__":
    main()
