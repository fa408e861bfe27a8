"""Deterministic rendering of the four standard figure kinds.

Fixed policies, so the same CSV always yields byte-identical output:
series are drawn in sorted key order, SINR axes are in dB, throughput
axes are log-scaled, CDF axes span [0, 1], and the PNG is written
without the mutable Software metadata chunk.
"""

from __future__ import annotations

from pathlib import Path

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt
import numpy as np

from .figspec import FigureSpec, series_label
from .schema import SchemaError, Table, column_float, read_table, require_columns


class RenderError(ValueError):
    """The table is schema-valid but cannot be drawn as requested."""


class MissingSeriesError(RenderError):
    """An expected series has no rows in the input table."""


#: numeric columns each kind draws from (checked up front, all rows).
_REQUIRED_NUMERIC = {
    "sinr_cdf": ("sinr_db", "cdf"),
    "tput_vs_isd": ("isd_m", "mean_ue_tput_bps"),
    "sched_bars": ("ues_per_cell", "mean_cell_tput_bps"),
    "ee_vs_isd": ("isd_m", "ee_bps_per_w"),
}

_RC = {
    "figure.figsize": (6.4, 4.8),
    "figure.dpi": 100,
    "savefig.dpi": 100,
    "font.family": "DejaVu Sans",
    "font.size": 10,
    "axes.grid": True,
    "grid.alpha": 0.3,
    "lines.linewidth": 1.5,
}


def _sort_key(values: tuple[str, ...]) -> tuple:
    """Numeric-aware ordering of a series key tuple."""
    key = []
    for v in values:
        try:
            key.append((0, float(v), ""))
        except ValueError:
            key.append((1, 0.0, v))
    return tuple(key)


def _series(table: Table, spec: FigureSpec) -> list[tuple[str, list[int]]]:
    """(label, row indices) per series, in deterministic sorted order."""
    require_columns(table, spec.series_columns)
    groups: dict[tuple[str, ...], list[int]] = {}
    for i, row in enumerate(table.rows):
        key = tuple(row[c].strip() for c in spec.series_columns)
        groups.setdefault(key, []).append(i)

    out = []
    labels = set()
    for key in sorted(groups, key=_sort_key):
        label = series_label(spec.series_columns, key)
        if label in labels:
            raise RenderError(
                f"{table.path}: two series collapse to the same legend label "
                f"{label!r}; refine series columns {list(spec.series_columns)}"
            )
        labels.add(label)
        out.append((label, groups[key]))

    for expected in spec.expect_series:
        if expected not in labels:
            raise MissingSeriesError(
                f"{table.path}: expected series {expected!r} has no rows; "
                f"present: {sorted(labels)}"
            )
    return out


def _draw_sinr_cdf(ax, table, spec, series):
    x = column_float(table, "sinr_db")
    y = column_float(table, "cdf")
    for label, idx in series:
        order = np.argsort(x[idx], kind="stable")
        sel = np.asarray(idx)[order]
        ax.plot(x[sel], y[sel], label=label)
    ax.set_xlabel("data SINR [dB]")
    ax.set_ylabel("CDF")
    ax.set_ylim(0.0, 1.0)
    ax.legend(loc="lower right")


def _draw_tput_vs_isd(ax, table, spec, series):
    x = column_float(table, "isd_m")
    y = column_float(table, "mean_ue_tput_bps")
    for label, idx in series:
        order = np.argsort(x[idx], kind="stable")
        sel = np.asarray(idx)[order]
        ax.plot(x[sel], y[sel], marker="o", label=label)
    ax.set_xlabel("inter-site distance [m]")
    ax.set_ylabel("mean UE throughput [bit/s]")
    ax.set_yscale("log")
    ax.legend(loc="upper right")


def _draw_sched_bars(ax, table, spec, series):
    u = column_float(table, "ues_per_cell")
    y = column_float(table, "mean_cell_tput_bps")
    loads = np.unique(u)
    centers = np.arange(len(loads), dtype=float)
    width = 0.8 / len(series)
    for k, (label, idx) in enumerate(series):
        heights = []
        for load in loads:
            rows = [i for i in idx if u[i] == load]
            if len(rows) != 1:
                raise RenderError(
                    f"{table.path}: series {label!r} has {len(rows)} rows at "
                    f"{int(load)} UEs per cell; expected exactly 1"
                )
            heights.append(y[rows[0]])
        offset = (k - (len(series) - 1) / 2.0) * width
        ax.bar(centers + offset, heights, width=width, label=label, log=True)
    ax.set_xticks(centers)
    ax.set_xticklabels([f"{load:g}" for load in loads])
    ax.set_xlabel("UEs per cell")
    ax.set_ylabel("cell throughput [bit/s]")
    ax.legend(loc="upper left")


def _draw_ee_vs_isd(ax, table, spec, series):
    x = column_float(table, "isd_m")
    y = column_float(table, "ee_bps_per_w")
    for label, idx in series:
        order = np.argsort(x[idx], kind="stable")
        sel = np.asarray(idx)[order]
        ax.plot(x[sel], y[sel], marker="o", label=label)
    ax.set_xlabel("inter-site distance [m]")
    ax.set_ylabel("energy efficiency [bit/J]")
    ax.legend(loc="upper right")


_DRAWERS = {
    "sinr_cdf": _draw_sinr_cdf,
    "tput_vs_isd": _draw_tput_vs_isd,
    "sched_bars": _draw_sched_bars,
    "ee_vs_isd": _draw_ee_vs_isd,
}


def render(spec: FigureSpec) -> Path:
    """Validate the input table and write the figure; returns the path.

    All validation happens before the output file is touched, so a
    failing render leaves no image behind.
    """
    table = read_table(spec.in_csv)
    require_columns(table, _REQUIRED_NUMERIC[spec.kind])
    for col in _REQUIRED_NUMERIC[spec.kind]:
        column_float(table, col)
    series = _series(table, spec)
    if spec.kind == "sched_bars":
        require_columns(table, ("scheduler",))
        schedulers = {row["scheduler"].strip() for row in table.rows}
        for needed in ("rr", "pf"):
            if needed not in schedulers:
                raise MissingSeriesError(
                    f"{table.path}: scheduler {needed!r} has no rows; "
                    f"present: {sorted(schedulers)}"
                )

    out = Path(spec.out_path)
    with plt.rc_context(_RC):
        fig, ax = plt.subplots()
        try:
            _DRAWERS[spec.kind](ax, table, spec, series)
            fig.tight_layout()
            out.parent.mkdir(parents=True, exist_ok=True)
            fig.savefig(out, format="png", metadata={"Software": None})
        finally:
            plt.close(fig)
    return out
