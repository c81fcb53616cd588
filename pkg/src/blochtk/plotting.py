"""Figure rendering for the CLI report path.

Trajectories and spectra written as CSV can also be rendered to files
(PNG/PDF per the output extension) so a run leaves a ready-to-look-at
picture next to the delimited data.
"""
from __future__ import annotations

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402

from . import layout  # noqa: E402
from .dynamics import Spectrum, Trajectory  # noqa: E402


def plot_trajectory(traj: Trajectory, elements, path: str, title: str = "") -> str:
    """Plot the requested observables against time (microseconds)."""
    cols = layout.observable_columns(traj.n_levels, elements)
    fig, ax = plt.subplots(figsize=(7, 4.2))
    t_us = traj.times * 1e6
    for name, slot in cols:
        ax.plot(t_us, traj.states[:, slot], lw=1.2, label=_pretty(name))
    ax.set_xlabel("time (µs)")
    ax.set_ylabel("density-matrix element")
    if title:
        ax.set_title(title)
    ax.grid(alpha=0.3)
    if len(cols) <= 14:
        ax.legend(fontsize="small", ncols=2)
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)
    return path


def plot_spectrum(spec: Spectrum, elements, path: str, title: str = "",
                  marks: list[float] | None = None) -> str:
    """Plot the requested observables against detuning (MHz)."""
    cols = layout.observable_columns(spec.n_levels, elements)
    fig, ax = plt.subplots(figsize=(7, 4.2))
    for name, slot in cols:
        ax.plot(spec.detunings_mhz, spec.final_states[:, slot], lw=1.2,
                label=_pretty(name))
    for x in marks or []:
        ax.axvline(x, color="0.6", ls="--", lw=0.8)
    ax.set_xlabel("detuning (MHz)")
    ax.set_ylabel("steady-state element")
    if title:
        ax.set_title(title)
    ax.grid(alpha=0.3)
    if len(cols) <= 14:
        ax.legend(fontsize="small", ncols=2)
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)
    return path


def _pretty(name: str) -> str:
    if name.startswith("rho_"):
        _, i, j = name.split("_")
        return rf"$\rho_{{{i},{j}}}$"
    prefix, _, i, j = name.split("_")
    part = "Re" if prefix == "re" else "Im"
    return rf"{part} $\sigma_{{{i},{j}}}$"
