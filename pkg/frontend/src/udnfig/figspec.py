"""Figure specifications and the legend naming convention.

A :class:`FigureSpec` names the figure kind, the input table, the
columns whose distinct value-tuples define the plotted series, and the
output path. Legend entries follow the compact scenario notation:

    i   inter-site distance [m]          d   UE density [1/km^2]
    ud  UE distribution (0 uniform, 1 clustered)
    s   idle mode (1 on, 0 off)          sm  idle-power profile index
    f   carrier frequency [GHz]          a   BS antennas
    t   cell-edge SNR target [dB]

so a series over scenario columns reads e.g. ``i35 d300 ud1 s1 f2 a1
t12``. Grouping columns without a letter token (such as ``scheduler``)
append their raw value.
"""

from __future__ import annotations

from dataclasses import dataclass, field


FIGURE_KINDS = ("sinr_cdf", "tput_vs_isd", "sched_bars", "ee_vs_isd")

#: Default series-grouping columns per figure kind. The x-axis column is
#: never part of the grouping.
DEFAULT_SERIES_COLUMNS: dict[str, tuple[str, ...]] = {
    "sinr_cdf": (
        "isd_m",
        "ue_density_per_km2",
        "ue_distribution",
        "idle_mode",
        "carrier_ghz",
        "num_bs_antennas",
        "target_edge_snr_db",
    ),
    "tput_vs_isd": (
        "ue_density_per_km2",
        "ue_distribution",
        "idle_mode",
        "carrier_ghz",
        "num_bs_antennas",
        "target_edge_snr_db",
    ),
    "sched_bars": ("isd_m", "scheduler"),
    "ee_vs_isd": ("num_bs_antennas", "sleep_model"),
}


@dataclass(frozen=True)
class FigureSpec:
    """What to draw: kind, input table, series grouping, output image."""

    kind: str
    in_csv: str
    out_path: str
    series_columns: tuple[str, ...] = ()
    #: Legend labels that must be present; any absent one aborts the render.
    expect_series: tuple[str, ...] = field(default_factory=tuple)

    def __post_init__(self):
        if self.kind not in FIGURE_KINDS:
            raise ValueError(
                f"unknown figure kind {self.kind!r}; expected one of {FIGURE_KINDS}"
            )
        if not self.series_columns:
            object.__setattr__(
                self, "series_columns", DEFAULT_SERIES_COLUMNS[self.kind]
            )


def _fmt_num(value: str) -> str:
    """Compact numeric formatting: '35.0' -> '35', '3.5' stays '3.5'."""
    x = float(value)
    return str(int(x)) if x == int(x) else f"{x:g}"


def _fmt_dist(value: str) -> str:
    mapping = {"uniform": "0", "nonuniform": "1"}
    return mapping.get(value.strip(), value.strip())


# (legend letter, column, formatter) in canonical legend order.
_LEGEND_TOKENS = (
    ("i", "isd_m", _fmt_num),
    ("d", "ue_density_per_km2", _fmt_num),
    ("ud", "ue_distribution", _fmt_dist),
    ("s", "idle_mode", _fmt_num),
    ("sm", "sleep_model", _fmt_num),
    ("f", "carrier_ghz", _fmt_num),
    ("a", "num_bs_antennas", _fmt_num),
    ("t", "target_edge_snr_db", _fmt_num),
)


def series_label(series_columns, key_values) -> str:
    """Legend label for one series, in the canonical token order."""
    values = dict(zip(series_columns, key_values))
    parts = []
    for letter, column, fmt in _LEGEND_TOKENS:
        if column in values:
            parts.append(f"{letter}{fmt(values[column])}")
    for column in series_columns:
        if column not in {c for _, c, _ in _LEGEND_TOKENS}:
            parts.append(str(values[column]))
    return " ".join(parts)
