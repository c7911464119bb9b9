"""Monitor-series figures rendered next to the CSV output.

The CSV remains the machine contract; the PNG figures are a human
convenience produced by the report path (disable with plots = false).
"""

from __future__ import annotations

import numpy as np


def render_series_figures(out_dir, times, series: dict) -> list:
    """One PNG per monitor series plus a combined overview; returns paths."""
    import matplotlib
    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    times = np.asarray(times)
    written = []

    fig, ax = plt.subplots(figsize=(7, 4))
    for name, values in series.items():
        values = np.asarray(values, dtype=float)
        if values.size != times.size or values.size == 0:
            continue
        spread = np.max(np.abs(values))
        ax.plot(times, values / spread if spread > 0 else values, label=name, lw=1)
    ax.set_xlabel("t")
    ax.set_ylabel("monitor value (scaled to max 1)")
    ax.legend(fontsize=7, ncol=2)
    ax.set_title("monitor overview")
    path = out_dir / "monitors.png"
    fig.tight_layout()
    fig.savefig(path, dpi=120)
    plt.close(fig)
    written.append(path)

    for name, values in series.items():
        values = np.asarray(values, dtype=float)
        if values.size != times.size or values.size == 0:
            continue
        fig, ax = plt.subplots(figsize=(6, 3))
        ax.plot(times, values, lw=1.2)
        ax.set_xlabel("t")
        ax.set_ylabel(name)
        ax.set_title(name)
        path = out_dir / f"{name}.png"
        fig.tight_layout()
        fig.savefig(path, dpi=120)
        plt.close(fig)
        written.append(path)
    return written
