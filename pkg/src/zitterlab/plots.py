"""Figure rendering for the CLI report paths.

Figures are written straight to files with the Agg backend, one plot per
file next to the CSV/JSON artifacts.  Styling is deliberately plain and
fixed so identical data produces identical files.
"""

from __future__ import annotations

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt
import numpy as np

from .fieldcalc import ScalarField

_FIGSIZE = (6.0, 4.0)
_DPI = 120


def _save(fig, path):
    fig.savefig(path, dpi=_DPI)
    plt.close(fig)
    return str(path)


def save_scalar_field(path, f: ScalarField, title: str, value_label: str = "value"):
    """Line plot (1D) or heat map (2D) of a scalar field."""
    fig, ax = plt.subplots(figsize=_FIGSIZE)
    if f.grid.ndim == 1:
        ax.plot(f.grid.axis_coords(0), f.values, lw=1.2)
        ax.set_xlabel("x")
        ax.set_ylabel(value_label)
    else:
        extent = [
            f.grid.axis_coords(1)[0], f.grid.axis_coords(1)[-1],
            f.grid.axis_coords(0)[0], f.grid.axis_coords(0)[-1],
        ]
        im = ax.imshow(f.values, origin="lower", extent=extent, aspect="auto")
        fig.colorbar(im, ax=ax, label=value_label)
        ax.set_xlabel("y")
        ax.set_ylabel("x")
    ax.set_title(title)
    fig.tight_layout()
    return _save(fig, path)


def save_convergence(path, spacings, errors, slope: float, title: str):
    fig, ax = plt.subplots(figsize=_FIGSIZE)
    ax.loglog(spacings, errors, "o-", label=f"measured (slope {slope:.2f})")
    ref = errors[0] * (np.asarray(spacings) / spacings[0]) ** 2
    ax.loglog(spacings, ref, "k--", lw=0.8, label="h^2 reference")
    ax.set_xlabel("grid spacing h")
    ax.set_ylabel("interior max residual")
    ax.set_title(title)
    ax.legend()
    ax.grid(True, which="both", alpha=0.3)
    fig.tight_layout()
    return _save(fig, path)


def save_series(path, x, curves: dict, xlabel: str, ylabel: str, title: str):
    fig, ax = plt.subplots(figsize=_FIGSIZE)
    for label, y in curves.items():
        ax.plot(x, y, lw=1.2, label=label)
    ax.set_xlabel(xlabel)
    ax.set_ylabel(ylabel)
    ax.set_title(title)
    ax.legend()
    ax.grid(True, alpha=0.3)
    fig.tight_layout()
    return _save(fig, path)


def save_trajectory(path, positions: np.ndarray, title: str):
    """Projection of a lab trajectory onto its orbit plane axes."""
    fig, ax = plt.subplots(figsize=(4.8, 4.8))
    spans = positions.max(axis=0) - positions.min(axis=0)
    i, j = np.argsort(spans)[-2:][::-1]
    ax.plot(positions[:, i], positions[:, j], lw=1.0)
    ax.set_xlabel("xyz"[i])
    ax.set_ylabel("xyz"[j])
    ax.set_title(title)
    ax.set_aspect("equal", adjustable="datalim")
    ax.grid(True, alpha=0.3)
    fig.tight_layout()
    return _save(fig, path)


def save_suite_margins(path, results):
    """Bar chart of log10 margin (tolerance / measured) per suite check."""
    labels, margins, colors = [], [], []
    for r in results:
        pairs = [
            (float(r.measured[k]), float(tol))
            for k, tol in r.tolerance.items()
            if k in r.measured and isinstance(r.measured[k], (int, float))
            and not isinstance(r.measured[k], bool) and tol > 0
        ]
        pairs = [(m, t) for m, t in pairs if m is not None]
        if not pairs:
            continue
        worst = min(t / max(m, 1e-300) for m, t in pairs)
        labels.append(r.check_id)
        margins.append(np.log10(worst))
        colors.append("tab:blue" if r.passed else "tab:red")
    fig, ax = plt.subplots(figsize=(7.0, 0.35 * len(labels) + 1.5))
    ax.barh(np.arange(len(labels)), margins, color=colors)
    ax.set_yticks(np.arange(len(labels)), labels, fontsize=7)
    ax.axvline(0.0, color="k", lw=0.8)
    ax.set_xlabel("log10(tolerance / measured)")
    ax.set_title("verification margins")
    fig.tight_layout()
    return _save(fig, path)
