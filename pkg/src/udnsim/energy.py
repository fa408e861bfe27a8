"""Base-station power consumption and network energy efficiency.

Power draw per site comes from a component-level power model of a 2020
small-cell base station at 20 MHz bandwidth, evaluated for the studied
transmit-power levels and 1/2/4 antenna chains. The embedded table
carries, per (ISD, antennas): calibrated transmit power, full-load
consumption, slow-idle consumption and shut-down consumption. Small
cell consumption scales roughly linearly with antenna chains - the
power amplifier dominates.

Idle-mode profiles sm1..sm5 set what a switched-off site still draws:
sm1 the slow-idle figure, sm2 the shut-down figure, sm3/sm4 futuristic
modes at 30 % / 15 % of slow idle, and sm5 a perfect idle drawing
nothing (e.g. fully energy-harvesting powered).

An active site consumes between slow idle and full load linearly in its
scheduled-resource share; the full-buffer traffic model of the
throughput studies corresponds to load 1. Network energy efficiency is
the served throughput per Watt summed over all deployed (non-guard)
sites, idle sites included at their profile draw.

The transmit-power column is retained for cross-checking the link
calibration; it never feeds back into SINR computations.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

SLEEP_MODELS = (1, 2, 3, 4, 5)


@dataclass(frozen=True)
class PowerRow:
    """Consumption figures of one base-station type."""

    isd_m: float
    n_antennas: int
    tx_power_dbm: float
    tx_power_mw: float
    full_load_w: float
    idle1_w: float  # slow idle
    idle2_w: float  # shut-down


# (isd, tx dBm, tx mW, {antennas: (full, idle1, idle2)})
_TABLE = (
    (200.0, 23.27, 212.32, {1: (1.8923, 0.2324, 0.1881), 2: (2.5848, 0.3105, 0.2478), 4: (4.4560, 0.4959, 0.4073)}),
    (150.0, 20.52, 112.72, {1: (1.3405, 0.2191, 0.1748), 2: (2.0316, 0.2971, 0.2345), 4: (3.9015, 0.4825, 0.3939)}),
    (100.0, 16.64, 46.13, {1: (0.9793, 0.2104, 0.1661), 2: (1.6696, 0.2884, 0.2257), 4: (3.5386, 0.4738, 0.3852)}),
    (75.0, 13.90, 24.55, {1: (0.8643, 0.2076, 0.1633), 2: (1.5544, 0.2856, 0.2230), 4: (3.4231, 0.4710, 0.3824)}),
    (50.0, 10.02, 10.05, {1: (0.7853, 0.2057, 0.1614), 2: (1.4752, 0.2837, 0.2210), 4: (3.3437, 0.4691, 0.3804)}),
    (35.0, 6.61, 4.58, {1: (0.7558, 0.2050, 0.1607), 2: (1.4456, 0.2830, 0.2203), 4: (3.3141, 0.4683, 0.3797)}),
    (20.0, 1.27, 1.34, {1: (0.7383, 0.2046, 0.1603), 2: (1.4281, 0.2826, 0.2199), 4: (3.2965, 0.4679, 0.3793)}),
    (10.0, -5.20, 0.30, {1: (0.7326, 0.2044, 0.1601), 2: (1.4224, 0.2824, 0.2198), 4: (3.2908, 0.4678, 0.3792)}),
    (5.0, -11.89, 0.06, {1: (0.7314, 0.2044, 0.1601), 2: (1.4211, 0.2824, 0.2197), 4: (3.2895, 0.4678, 0.3791)}),
)

POWER_TABLE: dict[tuple[float, int], PowerRow] = {
    (isd, n): PowerRow(isd, n, dbm, mw, *vals)
    for isd, dbm, mw, per_n in _TABLE
    for n, vals in per_n.items()
}


def power_row(isd_m: float, n_antennas: int) -> PowerRow:
    """Table row for a deployment; raises if the type was never profiled."""
    for (isd, n), row in POWER_TABLE.items():
        if n == n_antennas and math.isclose(isd, isd_m, rel_tol=1e-9, abs_tol=1e-6):
            return row
    raise ValueError(f"no power-model row for isd_m={isd_m}, n_antennas={n_antennas}")


def idle_power_w(row: PowerRow, sleep_model: int) -> float:
    """Draw of a switched-off site under the given idle-mode profile."""
    if sleep_model == 1:
        return row.idle1_w
    if sleep_model == 2:
        return row.idle2_w
    if sleep_model == 3:
        return 0.30 * row.idle1_w
    if sleep_model == 4:
        return 0.15 * row.idle1_w
    if sleep_model == 5:
        return 0.0
    raise ValueError(f"sleep_model must be in {SLEEP_MODELS}")


def site_power_w(active: bool, row: PowerRow, sleep_model: int, load_fraction: float = 1.0) -> float:
    """Power draw of one site.

    Active sites interpolate linearly between slow idle and full load in
    their scheduled-resource share (full-buffer traffic -> load 1);
    idle sites draw their profile power.
    """
    if active:
        return row.idle1_w + (row.full_load_w - row.idle1_w) * float(load_fraction)
    return idle_power_w(row, sleep_model)


def network_power_w(
    n_active_sites: int,
    n_idle_sites: int,
    row: PowerRow,
    sleep_model: int,
    load_fraction: float = 1.0,
) -> float:
    """Total draw of all deployed sites (guard sites excluded by the caller)."""
    return n_active_sites * site_power_w(True, row, sleep_model, load_fraction) + (
        n_idle_sites * idle_power_w(row, sleep_model)
    )


def network_energy_efficiency_bps_per_w(
    served_throughput_bps: float,
    n_active_sites: int,
    n_idle_sites: int,
    row: PowerRow,
    sleep_model: int,
    load_fraction: float = 1.0,
) -> float:
    """Served bits per second per Watt over the deployed network."""
    power = network_power_w(n_active_sites, n_idle_sites, row, sleep_model, load_fraction)
    return served_throughput_bps / power
