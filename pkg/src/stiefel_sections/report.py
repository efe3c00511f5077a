"""Sweep output: delimited rows plus a rendered status map.

The CSV is the machine-readable artifact; next to it we always drop a PNG
heatmap of the same grid so a sweep can be eyeballed without reloading it.
"""

from __future__ import annotations

import csv

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt
from matplotlib.colors import ListedColormap
from matplotlib.patches import Patch

from .verdict import (
    CSV_COLUMNS,
    NECESSARY_ONLY,
    NO_SECTION,
    SECTION_EXISTS,
    UNKNOWN,
    SectionVerdict,
    csv_row,
)

_STATUS_ORDER = (NO_SECTION, SECTION_EXISTS, NECESSARY_ONLY, UNKNOWN)
_STATUS_COLOR = {
    NO_SECTION: "#b2182b",
    SECTION_EXISTS: "#2166ac",
    NECESSARY_ONLY: "#f4a582",
    UNKNOWN: "#cccccc",
}


def write_sweep_csv(verdicts: list[SectionVerdict], path: str) -> None:
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(CSV_COLUMNS)
        for v in verdicts:
            w.writerow(csv_row(v))


def render_sweep_png(verdicts: list[SectionVerdict], path: str) -> None:
    """Heatmap of status over the (n, r) grid, one panel per value of l."""
    if not verdicts:
        raise ValueError("nothing to render")
    ls = sorted({v.query.l for v in verdicts})
    ns = sorted({v.query.n for v in verdicts})
    rs = sorted({v.query.r for v in verdicts})
    n_idx = {n: i for i, n in enumerate(ns)}
    r_idx = {r: i for i, r in enumerate(rs)}
    code = {s: i for i, s in enumerate(_STATUS_ORDER)}
    cmap = ListedColormap([_STATUS_COLOR[s] for s in _STATUS_ORDER])

    fig, axes = plt.subplots(
        1, len(ls), figsize=(4.2 * len(ls) + 1, 3.6), squeeze=False)
    for ax, l in zip(axes[0], ls):
        grid = [[float("nan")] * len(ns) for _ in rs]
        for v in verdicts:
            if v.query.l == l:
                grid[r_idx[v.query.r]][n_idx[v.query.n]] = code[v.status]
        ax.imshow(grid, cmap=cmap, vmin=-0.5, vmax=len(_STATUS_ORDER) - 0.5,
                  origin="lower", aspect="auto", interpolation="nearest")
        ax.set_title(f"l = {l}")
        ax.set_xlabel("n")
        ax.set_ylabel("r")
        step = max(1, len(ns) // 10)
        ax.set_xticks(range(0, len(ns), step), [str(n) for n in ns[::step]])
        step = max(1, len(rs) // 10)
        ax.set_yticks(range(0, len(rs), step), [str(r) for r in rs[::step]])
    handles = [Patch(color=_STATUS_COLOR[s], label=s) for s in _STATUS_ORDER]
    fig.legend(handles=handles, loc="center right", frameon=False)
    fig.suptitle("section verdicts for V_{r+l}(A^n) -> V_r(A^n)")
    fig.tight_layout(rect=(0, 0, 0.84, 1))
    fig.savefig(path, dpi=120)
    plt.close(fig)
