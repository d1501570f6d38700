"""Figure panels from scenario CSVs: curves, heatmaps, and the dephasing sweep.

This is a pure post-processing consumer: it validates the CSV column
contracts, reshapes, and draws.  No physics is recomputed, and rendering is
deterministic — a fixed SVG hash salt and scrubbed metadata make reruns on
identical inputs produce identical bytes.
"""

from __future__ import annotations

import csv
import json
import math
from dataclasses import dataclass
from pathlib import Path

import matplotlib

matplotlib.use("Agg")
matplotlib.rcParams["svg.hashsalt"] = "render-figs"

import matplotlib.pyplot as plt
import numpy as np

CURVE_COLUMNS = ("tau", "r_hat", "g2")
MAP_COLUMNS = ("tau", "delta_f", "r_ab", "i_a", "i_b")
INTENSITY_COLUMNS = (
    "tau",
    "ia_mean_full",
    "ib_mean_full",
    "ia_mean_filtered",
    "ib_mean_filtered",
)
SWEEP_COLUMNS = ("zeta_halfwidth", "r_hat_zero")

PANEL_KINDS = ("curves", "heatmap", "intensities", "sweep")

_EXPECTED = {
    "curves": CURVE_COLUMNS,
    "heatmap": MAP_COLUMNS,
    "intensities": INTENSITY_COLUMNS,
    "sweep": SWEEP_COLUMNS,
}

_FIGSIZE = (6.4, 4.2)
_DPI = 130

_PNG_METADATA = {"Software": "render-figs"}
_SVG_METADATA = {"Date": None, "Creator": "render-figs"}


class ColumnMismatchError(ValueError):
    """Input columns do not match the scenario CSV contract."""


@dataclass(frozen=True)
class FigureSpec:
    """One panel: a CSV input, its kind, labels, and the output path stem."""

    input_path: Path
    kind: str
    out_stem: Path
    title: str = ""
    xlabel: str = ""
    ylabel: str = ""

    def __post_init__(self):
        if self.kind not in PANEL_KINDS:
            raise ValueError(f"unknown panel kind {self.kind!r}")


def read_table(path: Path) -> tuple[dict | None, tuple[str, ...], np.ndarray]:
    """Parse a scenario CSV: optional '#' metadata line, header, float rows.

    Empty cells (flagged gaps) come back as NaN.
    """
    metadata = None
    with Path(path).open(encoding="utf-8", newline="") as fh:
        first = fh.readline()
        if first.startswith("#"):
            try:
                metadata = json.loads(first[1:].strip())
            except json.JSONDecodeError:
                metadata = None
            header_line = fh.readline()
        else:
            header_line = first
        columns = tuple(header_line.strip().split(","))
        rows = []
        for row in csv.reader(fh):
            if not row:
                continue
            rows.append([math.nan if cell == "" else float(cell) for cell in row])
    data = np.asarray(rows, dtype=float)
    if data.ndim != 2 or data.shape[1] != len(columns):
        raise ColumnMismatchError(f"{path}: ragged rows against header {columns}")
    return metadata, columns, data


def _check_columns(path: Path, found: tuple[str, ...], expected: tuple[str, ...]) -> None:
    if found != expected:
        raise ColumnMismatchError(
            f"{path}: expected columns {','.join(expected)} but found {','.join(found)}"
        )


def _figure():
    return plt.figure(figsize=_FIGSIZE, dpi=_DPI)


def _save(fig, out_stem: Path) -> list[Path]:
    out_stem.parent.mkdir(parents=True, exist_ok=True)
    png = out_stem.with_suffix(".png")
    svg = out_stem.with_suffix(".svg")
    fig.savefig(png, metadata=dict(_PNG_METADATA))
    fig.savefig(svg, metadata=dict(_SVG_METADATA))
    plt.close(fig)
    return [png, svg]


def _render_curves(spec: FigureSpec, data: np.ndarray) -> list[Path]:
    tau, r_hat, g2 = data[:, 0], data[:, 1], data[:, 2]
    fig = _figure()
    ax = fig.add_subplot(111)
    ax.axhline(1.0, color="0.6", lw=0.8, ls=":")
    ax.axhline(0.5, color="0.6", lw=0.8, ls="--")
    ax.plot(tau, r_hat, color="tab:green", lw=1.6, label="coincidence rate")
    # NaN gaps break the curve instead of being interpolated over
    ax.plot(tau, g2, color="tab:blue", lw=1.2, ls="--", label="g2")
    ax.set_xlabel(spec.xlabel or "delay (1/spectral width)")
    ax.set_ylabel(spec.ylabel or "normalized rate")
    ax.set_ylim(-0.05, 1.3)
    ax.legend(loc="upper right", frameon=False)
    if spec.title:
        ax.set_title(spec.title)
    return _save(fig, spec.out_stem)


def _reshape_map(path: Path, data: np.ndarray) -> tuple[np.ndarray, np.ndarray, list[np.ndarray]]:
    tau = data[:, 0]
    df = data[:, 1]
    n_df = int(np.flatnonzero(tau != tau[0]).min()) if np.any(tau != tau[0]) else tau.size
    if data.shape[0] % n_df:
        raise ColumnMismatchError(f"{path}: long table is not rectangular")
    n_tau = data.shape[0] // n_df
    taus = tau.reshape(n_tau, n_df)[:, 0]
    dfs = df[:n_df]
    grids = [data[:, k].reshape(n_tau, n_df) for k in (2, 3, 4)]
    return taus, dfs, grids


def _render_heatmap(spec: FigureSpec, data: np.ndarray) -> list[Path]:
    taus, dfs, (r_ab, i_a, i_b) = _reshape_map(spec.input_path, data)
    extent = (taus[0], taus[-1], dfs[0], dfs[-1])
    fig = plt.figure(figsize=(10.5, 3.4), dpi=_DPI)
    panels = (
        ("coincidence", r_ab.T, 0.0, 1.0),
        ("intensity A", i_a.T, 0.0, 2.0),
        ("intensity B", i_b.T, 0.0, 2.0),
    )
    for k, (label, grid, vmin, vmax) in enumerate(panels, start=1):
        ax = fig.add_subplot(1, 3, k)
        im = ax.imshow(
            grid,
            origin="lower",
            aspect="auto",
            extent=extent,
            vmin=vmin,
            vmax=vmax,
            cmap="viridis",
        )
        ax.set_title(label)
        ax.set_xlabel(spec.xlabel or "delay (1/spectral width)")
        if k == 1:
            ax.set_ylabel("detuning (spectral widths)")
        fig.colorbar(im, ax=ax, fraction=0.046)
    if spec.title:
        fig.suptitle(spec.title)
    return _save(fig, spec.out_stem)


def _render_intensities(spec: FigureSpec, data: np.ndarray) -> list[Path]:
    tau = data[:, 0]
    fig = _figure()
    ax = fig.add_subplot(111)
    ax.axhline(1.0, color="0.6", lw=0.8, ls=":")
    styles = (
        ("mean A (full span)", "tab:green", "-"),
        ("mean B (full span)", "tab:red", "-"),
        ("mean A (filtered)", "tab:green", "--"),
        ("mean B (filtered)", "tab:red", "--"),
    )
    for k, (label, color, ls) in enumerate(styles, start=1):
        ax.plot(tau, data[:, k], color=color, ls=ls, lw=1.4, label=label)
    ax.set_xlabel(spec.xlabel or "delay (1/spectral width)")
    ax.set_ylabel(spec.ylabel or "mean intensity")
    ax.set_ylim(0.0, 2.0)
    ax.legend(loc="upper right", frameon=False, fontsize=8)
    if spec.title:
        ax.set_title(spec.title)
    return _save(fig, spec.out_stem)


def _render_sweep(spec: FigureSpec, data: np.ndarray) -> list[Path]:
    fig = _figure()
    ax = fig.add_subplot(111)
    ax.axhline(0.5, color="0.6", lw=0.8, ls="--")
    ax.plot(data[:, 0], data[:, 1], "o-", color="tab:purple", lw=1.4)
    ax.set_xlabel(spec.xlabel or "zeta half-width (rad)")
    ax.set_ylabel(spec.ylabel or "coincidence rate at zero delay")
    ax.set_ylim(-0.02, 0.7)
    if spec.title:
        ax.set_title(spec.title)
    return _save(fig, spec.out_stem)


_RENDERERS = {
    "curves": _render_curves,
    "heatmap": _render_heatmap,
    "intensities": _render_intensities,
    "sweep": _render_sweep,
}


def render(spec: FigureSpec) -> list[Path]:
    """Render one panel; returns the written PNG and SVG paths."""
    _, columns, data = read_table(spec.input_path)
    _check_columns(spec.input_path, columns, _EXPECTED[spec.kind])
    return _RENDERERS[spec.kind](spec, data)
