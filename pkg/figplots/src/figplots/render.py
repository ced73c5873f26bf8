"""Render stalab figure CSVs to images.

One PlotJob per CSV panel.  Sweep datasets (fig1a/b/c, fig2a/b/c, fig4)
become (t, sweep value) heatmaps of the population columns; the
single-run gain/loss datasets (fig3, fig5) become two-panel line plots
of populations and relative populations; fig6 is a three-curve line
plot of the imaginary off-diagonal pulse with the fixed style mapping

    gamma = 0          blue dotted
    gamma = 0.5        red solid
    gamma = 1/(2+t^2)  green dashed

Rendering is read-only over the CSVs and deterministic for identical
input.  Schema mismatches name the missing column; an empty CSV is an
error, never a blank image.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass
from pathlib import Path

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt  # noqa: E402
import numpy as np  # noqa: E402

SWEEP_FIGURES = ("fig1a", "fig1b", "fig1c", "fig2a", "fig2b", "fig2c")
SWEEP_AXIS_LABEL = {
    "fig1a": "alpha0 (Omega0)",
    "fig1b": "alpha0 (Omega0)",
    "fig1c": "alpha0 (Omega0)",
    "fig2a": "kappa (Omega0)",
    "fig2b": "kappa (Omega0)",
    "fig2c": "kappa (Omega0)",
    "fig4": "gamma (Omega0)",
}

FIGURE_SCHEMAS = {
    **{fig: ["sweep_value", "t", "P1", "P2", "P1rel", "P2rel", "norm"]
       for fig in SWEEP_FIGURES},
    "fig3": ["t", "P1", "P2", "P1rel", "P2rel", "norm"],
    "fig4": ["sweep_value", "t", "P1", "P2", "P1rel", "P2rel", "norm"],
    "fig5": ["t", "P1", "P2", "P1rel", "P2rel", "norm"],
    "fig6": ["gamma_label", "t", "im_a12"],
}

FIG6_STYLES = {
    "0": {"color": "blue", "linestyle": ":", "label": "gamma = 0"},
    "0.5": {"color": "red", "linestyle": "-", "label": "gamma = 0.5"},
    "1/(2+t^2)": {"color": "green", "linestyle": "--", "label": "gamma = 1/(2+t^2)"},
}


@dataclass(frozen=True)
class PlotJob:
    csv_path: Path
    figure_id: str
    output_image_path: Path


def load_columns(csv_path: Path | str, figure_id: str) -> dict[str, list[str]]:
    """Read the CSV and validate its header against the figure's schema."""
    if figure_id not in FIGURE_SCHEMAS:
        raise ValueError(f"unknown figure id {figure_id!r}; expected one of {sorted(FIGURE_SCHEMAS)}")
    schema = FIGURE_SCHEMAS[figure_id]
    with open(csv_path, newline="") as fh:
        rows = list(csv.reader(fh))
    if not rows:
        raise ValueError(f"{csv_path}: empty CSV, nothing to render")
    header, data = rows[0], rows[1:]
    missing = [col for col in schema if col not in header]
    if missing:
        raise ValueError(f"{csv_path}: schema mismatch, missing column(s) {missing}")
    if not data:
        raise ValueError(f"{csv_path}: empty CSV, nothing to render")
    idx = {col: header.index(col) for col in schema}
    return {col: [row[idx[col]] for row in data] for col in schema}


def _floats(values: list[str]) -> np.ndarray:
    return np.array([float(v) if v != "" else np.nan for v in values])


def _edges(centers: np.ndarray) -> np.ndarray:
    """Cell edges around sorted center coordinates (pcolormesh input)."""
    if len(centers) == 1:
        half = 0.5 if centers[0] == 0 else 0.5 * abs(centers[0])
        return np.array([centers[0] - half, centers[0] + half])
    mids = 0.5 * (centers[1:] + centers[:-1])
    first = centers[0] - (mids[0] - centers[0])
    last = centers[-1] + (centers[-1] - mids[-1])
    return np.concatenate([[first], mids, [last]])


def _pivot(sweep: np.ndarray, t: np.ndarray, values: np.ndarray):
    svals = np.unique(sweep)
    tvals = np.unique(t)
    grid = np.full((len(svals), len(tvals)), np.nan)
    si = np.searchsorted(svals, sweep)
    ti = np.searchsorted(tvals, t)
    grid[si, ti] = values
    return svals, tvals, grid


def _heatmap_panel(ax, sweep, t, values, sweep_label, title):
    svals, tvals, grid = _pivot(sweep, t, values)
    mesh = ax.pcolormesh(_edges(tvals), _edges(svals), grid, shading="flat",
                         cmap="viridis", vmin=0.0, vmax=max(1.0, np.nanmax(grid)))
    ax.set_xlabel("t (1/Omega0)")
    ax.set_ylabel(sweep_label)
    ax.set_title(title)
    return mesh


def build_figure(job: PlotJob):
    """Assemble the matplotlib Figure for a job (render() saves it)."""
    cols = load_columns(job.csv_path, job.figure_id)
    fig_id = job.figure_id

    if fig_id in SWEEP_FIGURES:
        fig, ax = plt.subplots(figsize=(7, 4.5))
        mesh = _heatmap_panel(ax, _floats(cols["sweep_value"]), _floats(cols["t"]),
                              _floats(cols["P2"]), SWEEP_AXIS_LABEL[fig_id],
                              f"{fig_id}: P2")
        fig.colorbar(mesh, ax=ax, label="P2")
    elif fig_id == "fig4":
        fig, axes = plt.subplots(1, 2, figsize=(11, 4.5))
        sweep, t = _floats(cols["sweep_value"]), _floats(cols["t"])
        for ax, col, name in zip(axes, ("P1rel", "P2rel"), ("P1'", "P2'")):
            mesh = _heatmap_panel(ax, sweep, t, _floats(cols[col]),
                                  SWEEP_AXIS_LABEL["fig4"], f"fig4: {name}")
            fig.colorbar(mesh, ax=ax, label=name)
    elif fig_id in ("fig3", "fig5"):
        fig, axes = plt.subplots(1, 2, figsize=(11, 4.5))
        t = _floats(cols["t"])
        axes[0].plot(t, _floats(cols["P1"]), label="P1")
        axes[0].plot(t, _floats(cols["P2"]), label="P2")
        axes[0].set_title(f"{fig_id}(a): populations")
        axes[1].plot(t, _floats(cols["P1rel"]), label="P1'")
        axes[1].plot(t, _floats(cols["P2rel"]), label="P2'")
        axes[1].set_title(f"{fig_id}(b): relative populations")
        for ax in axes:
            ax.set_xlabel("t (1/Omega0)")
            ax.legend()
    elif fig_id == "fig6":
        fig, ax = plt.subplots(figsize=(7, 4.5))
        labels = cols["gamma_label"]
        t = _floats(cols["t"])
        vals = _floats(cols["im_a12"])
        for label in dict.fromkeys(labels):  # first-appearance order
            mask = np.array([lab == label for lab in labels])
            style = FIG6_STYLES.get(label, {"label": f"gamma = {label}"})
            ax.plot(t[mask], vals[mask], **style)
        ax.set_xlabel("t (1/Omega0)")
        ax.set_ylabel("Im A12 (hbar Omega0)")
        ax.set_title("fig6: imaginary part of the off-diagonal pulse")
        ax.legend()
    else:  # pragma: no cover - guarded by load_columns
        raise ValueError(f"unknown figure id {fig_id!r}")
    fig.tight_layout()
    return fig


def render(job: PlotJob) -> Path:
    """Render the job to its output image; returns the written path."""
    fig = build_figure(job)
    out = Path(job.output_image_path)
    out.parent.mkdir(parents=True, exist_ok=True)
    try:
        fig.savefig(out, dpi=120)
    finally:
        plt.close(fig)
    return out
