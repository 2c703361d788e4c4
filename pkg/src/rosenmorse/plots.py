"""Matplotlib renderers for the CLI report paths.

Each function takes already-computed rows and writes one PNG next to the
delimited output.  Figures are a convenience view; the CSV/JSON data files
remain the authoritative artifact.
"""

from __future__ import annotations

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt
import numpy as np

__all__ = [
    "render_spectrum", "render_eigenstate", "render_density",
    "render_trajectory", "render_uncertainty", "render_orbit",
]


def _save(fig, path: str) -> str:
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)
    return path


def render_spectrum(ns, energies, path: str, title: str) -> str:
    fig, ax = plt.subplots(figsize=(5, 4))
    for n, e in zip(ns, energies):
        ax.hlines(e, n - 0.35, n + 0.35, color="tab:blue")
    ax.set_xlabel("n")
    ax.set_ylabel("E(n)")
    ax.set_title(title)
    return _save(fig, path)


def render_eigenstate(xs, psi, dens, path: str, title: str) -> str:
    fig, ax = plt.subplots(figsize=(6, 4))
    ax.plot(xs, psi, label="psi", color="tab:blue")
    ax.plot(xs, dens, label="|psi|^2", color="tab:green", ls="--")
    ax.set_xlabel("x")
    ax.legend()
    ax.set_title(title)
    return _save(fig, path)


def render_density(xs, axis_vals, dens2d, axis_name: str, path: str, title: str) -> str:
    """Heatmap of |Phi|^2 over x and a second axis (w or t), or a line plot
    when the second axis has a single value."""
    fig, ax = plt.subplots(figsize=(6, 4))
    if len(axis_vals) == 1:
        ax.plot(xs, dens2d[0], color="tab:blue")
        ax.set_ylabel("|Phi|^2")
    else:
        mesh = ax.pcolormesh(np.asarray(xs), np.asarray(axis_vals),
                             np.asarray(dens2d), shading="auto", cmap="viridis")
        fig.colorbar(mesh, ax=ax, label="|Phi|^2")
        ax.set_ylabel(axis_name)
    ax.set_xlabel("x")
    ax.set_title(title)
    return _save(fig, path)


def render_trajectory(curves: dict, path: str, title: str) -> str:
    fig, ax = plt.subplots(figsize=(5, 5))
    for w, (xs, ps) in sorted(curves.items()):
        ax.plot(xs, ps, lw=0.8, label=f"w={w:g}")
    ax.set_xlabel("<x>")
    ax.set_ylabel("<p>")
    ax.legend()
    ax.set_title(title)
    return _save(fig, path)


def render_uncertainty(ws, products, path: str, title: str) -> str:
    fig, ax = plt.subplots(figsize=(6, 4))
    ax.plot(ws, products, color="tab:green")
    ax.axhline(0.25, color="black", ls=":", label="1/4 bound")
    ax.set_xlabel("w")
    ax.set_ylabel("(Var x)(Var p)")
    ax.legend()
    ax.set_title(title)
    return _save(fig, path)


def render_orbit(xs, ps, path: str, title: str) -> str:
    fig, ax = plt.subplots(figsize=(5, 5))
    ax.plot(xs, ps, lw=0.7, color="tab:red")
    ax.set_xlabel("x")
    ax.set_ylabel("p")
    ax.set_title(title)
    return _save(fig, path)
