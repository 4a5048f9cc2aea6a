"""Matplotlib figure rendering for bench results and PoV curves.

Figures are written to files next to the CSV output; nothing here affects
the delimited data contract.
"""

from __future__ import annotations

import math
from pathlib import Path

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt

__all__ = ["save_bench_figures", "save_pov_figure"]

_MARKERS = {"lsb": "o", "2lsb": "s", "bpi": "^"}


def _series(rows, scheme: str, column):
    by_rate: dict[float, list[float]] = {}
    for r in rows:
        if r.scheme == scheme and r.rate > 0:
            by_rate.setdefault(r.rate, []).append(column(r))
    rates = sorted(by_rate)
    means = [sum(by_rate[p]) / len(by_rate[p]) for p in rates]
    return rates, means


def _line_figure(rows, column, ylabel: str, title: str, path: Path) -> None:
    fig, ax = plt.subplots(figsize=(6, 4))
    for scheme in sorted({r.scheme for r in rows}):
        rates, means = _series(rows, scheme, column)
        if not rates:
            continue
        ax.plot(rates, means, marker=_MARKERS.get(scheme, "x"), label=scheme)
    ax.set_xlabel("embedding rate")
    ax.set_ylabel(ylabel)
    ax.set_title(title)
    ax.grid(True, alpha=0.3)
    ax.legend()
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)


def save_bench_figures(rows, out_dir) -> list[Path]:
    """Render mean-per-rate figures for PSNR, both WS planes, and PoV."""
    rows = [r for r in rows if not math.isinf(r.psnr_db) or r.rate == 0]
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    plotted = []

    targets = [
        ("psnr_vs_rate.png", lambda r: r.psnr_db, "PSNR (dB)", "Stego quality"),
        ("ws_plane1_vs_rate.png", lambda r: r.ws_plane1, "estimate", "WS estimate, first LSB plane"),
        ("ws_plane2_vs_rate.png", lambda r: r.ws_plane2, "estimate", "WS estimate, second LSB plane"),
        ("pov_vs_rate.png", lambda r: r.pov_mean_pvalue, "mean p-value", "PoV embedding probability"),
    ]
    for filename, column, ylabel, title in targets:
        path = out / filename
        _line_figure(rows, column, ylabel, title, path)
        plotted.append(path)
    return plotted


def save_pov_figure(curve, path, title: str = "PoV curve") -> Path:
    """Render one PoV probability-vs-fraction curve."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    fig, ax = plt.subplots(figsize=(6, 4))
    ax.plot(curve.fractions, curve.p_values, marker=".", linewidth=1)
    ax.set_xlabel("fraction of pixels tested")
    ax.set_ylabel("embedding probability")
    ax.set_ylim(-0.05, 1.05)
    ax.set_title(title)
    ax.grid(True, alpha=0.3)
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)
    return path
