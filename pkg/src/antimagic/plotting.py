"""Report figures: residue histograms and sorted vertex sums, written as PNG."""

from __future__ import annotations

from pathlib import Path

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402
import numpy as np  # noqa: E402


def residue_figure(sums, modulus: int, path) -> Path:
    """Bar chart of how many vertex sums fall in each class mod ``modulus``."""
    counts = np.bincount(np.mod(np.asarray(sums, dtype=np.int64), modulus), minlength=modulus)
    fig, ax = plt.subplots(figsize=(8, 3))
    colours = ["tab:red" if c and i == 0 else "tab:blue" for i, c in enumerate(counts)]
    ax.bar(np.arange(modulus), counts, color=colours, width=1.0)
    ax.set_xlabel(f"sum mod {modulus}")
    ax.set_ylabel("vertices")
    ax.set_title(f"Vertex sums by residue (class 0 holds {int(counts[0])})")
    fig.tight_layout()
    path = Path(path)
    fig.savefig(path, dpi=100)
    plt.close(fig)
    return path


def sorted_sums_figure(sums, path) -> Path:
    """Sorted vertex sums; repeated values show up as flat steps in red."""
    s = np.sort(np.asarray(sums, dtype=np.int64))
    fig, ax = plt.subplots(figsize=(6, 4))
    ax.plot(np.arange(len(s)), s, lw=1)
    dup = np.flatnonzero(np.diff(s) == 0) if len(s) > 1 else np.zeros(0, dtype=int)
    if dup.size:
        ax.scatter(dup, s[dup], color="tab:red", s=8, label=f"{dup.size} repeated")
        ax.legend()
    ax.set_xlabel("rank")
    ax.set_ylabel("vertex sum")
    ax.set_title("Sorted vertex sums")
    fig.tight_layout()
    path = Path(path)
    fig.savefig(path, dpi=100)
    plt.close(fig)
    return path


def write_report_figures(sums, directory, modulus: int | None = None, prefix: str = "labelling") -> list[Path]:
    d = Path(directory)
    d.mkdir(parents=True, exist_ok=True)
    out = [sorted_sums_figure(sums, d / f"{prefix}_sums.png")]
    if modulus:
        out.append(residue_figure(sums, modulus, d / f"{prefix}_residues.png"))
    return out
