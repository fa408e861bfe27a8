"""Resource-block scheduling: round robin and proportional fair.

Scheduling operates on a 180 kHz x 1 ms resource grid. Two schedulers
are modelled:

* Round robin (RR) hands resource blocks to UEs cyclically, carrying
  its cursor across intervals so long-run shares are equal and channel
  state never matters.
* Proportional fair (PF) works in two stages per interval. The time
  domain ranks UEs by estimated achievable rate over moving-average
  served rate and admits the top 10. The frequency domain then assigns
  each resource block to the admitted UE with the highest per-block
  SINR relative to its own full-band SINR sum (ties to the lower UE
  id). Served rates update an exponential moving average with a 100-
  interval time constant, seeded from the first interval's estimates.

The study driver measures PF-over-RR gains on a lattice where every
cell serves the same number of UEs, dropped uniformly inside their
serving cell (rejection sampling against the site Voronoi regions) and
pinned to it, so the population per cell is exact and common random
numbers carry across UE counts and schedulers: the same drops, fading
streams and nested UE slots back every configuration.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from . import link, scenario
from .fastfading import interval_rng, k_factor, los_phases, rician_channel
from .propagation import PathGainModel, path_gain_db
from .antenna import bs_antenna_gain_db
from .scenario import ScenarioConfig, UE_HEIGHT_M, UE_EXCLUSION_RADIUS_M

RB_BANDWIDTH_HZ = 180e3
TTI_S = 1e-3
PF_MAX_SCHEDULED = 10  # time-domain admission limit per interval
PF_TIME_CONSTANT_TTIS = 100


def n_resource_blocks(bandwidth_hz: float) -> int:
    """Whole resource blocks fitting in the bandwidth (20 MHz -> 111)."""
    return int(np.floor(bandwidth_hz / RB_BANDWIDTH_HZ))


_BACKOFF_LIN = 10.0 ** (link.CAPACITY_SINR_BACKOFF_DB / 10.0)


def per_rb_capacity_bps(sinr_linear) -> np.ndarray:
    """Per-resource-block rate at a linear SINR (same back-off as wideband)."""
    return RB_BANDWIDTH_HZ * np.log2(1.0 + np.asarray(sinr_linear, dtype=float) / _BACKOFF_LIN)


def rr_assignments(n_ues: int, n_rbs: int, cursor: int):
    """Round-robin owner of each resource block this interval, plus new cursor."""
    assign = (cursor + np.arange(n_rbs)) % n_ues
    return assign, cursor + n_rbs


def pf_td_select(est_rate_bps, avg_rate_bps, max_scheduled: int = PF_MAX_SCHEDULED):
    """Time-domain stage: admit the UEs with the highest rate ratio.

    Returns a boolean mask over UEs; ties resolve to lower UE ids.
    """
    est = np.asarray(est_rate_bps, dtype=float)
    avg = np.asarray(avg_rate_bps, dtype=float)
    metric = est / avg
    order = np.argsort(-metric, kind="stable")
    mask = np.zeros(est.shape[0], dtype=bool)
    mask[order[:max_scheduled]] = True
    return mask


def pf_fd_assign(per_rb_sinr_linear, eligible=None) -> np.ndarray:
    """Frequency-domain stage: per-block argmax of self-normalised SINR.

    ``per_rb_sinr_linear`` has shape (U, R); the metric of UE u on block
    k is sinr[u, k] / sum_k' sinr[u, k'], so UEs compete with their own
    spectral peaks rather than their absolute SINR level. Returns the
    winning UE index per block; ties resolve to the lower UE id.
    """
    sinr = np.asarray(per_rb_sinr_linear, dtype=float)
    weights = sinr / sinr.sum(axis=1, keepdims=True)
    if eligible is not None:
        weights = np.where(np.asarray(eligible, dtype=bool)[:, None], weights, -np.inf)
    return np.argmax(weights, axis=0)


def pf_update_avg_rate(avg_rate_bps, served_rate_bps, time_constant: int = PF_TIME_CONSTANT_TTIS):
    """Exponential moving average of served rate."""
    t = float(time_constant)
    return (1.0 - 1.0 / t) * np.asarray(avg_rate_bps, dtype=float) + np.asarray(
        served_rate_bps, dtype=float
    ) / t


@dataclass
class SchedulerStudyConfig:
    """Study grid: PF vs RR across densification levels and cell loads."""

    isds_m: tuple = (150.0, 40.0, 20.0)
    ues_per_cell: tuple = (1, 2, 4, 8)
    carrier_ghz: float = 2.0
    bandwidth_hz: float = 20e6
    target_edge_snr_db: float = 12.0
    n_drops: int = 30
    warmup_ttis: int = 100
    measure_ttis: int = 100
    seed: int = 0
    # Region side grows with the ISD to hold enough cells, within bounds
    # that keep the largest case tractable and the smallest statistical.
    cells_across: float = 6.0
    region_side_min_m: float = 240.0
    region_side_max_m: float = 900.0

    def region_side_m(self, isd_m: float) -> float:
        return float(np.clip(self.cells_across * isd_m, self.region_side_min_m, self.region_side_max_m))


def _drop_rng(seed: int, isd_index: int, drop: int) -> np.random.Generator:
    key = np.array([seed, (isd_index << 32) | drop], dtype=np.uint64)
    return np.random.Generator(np.random.Philox(key=key))


def _voronoi_cell_slots(
    site_xy: np.ndarray,
    owner_sites: np.ndarray,
    isd_m: float,
    n_slots: int,
    rng: np.random.Generator,
    max_rounds: int = 200,
) -> np.ndarray:
    """Drop ``n_slots`` UEs uniformly inside each owner site's Voronoi cell.

    Candidates are drawn uniformly on the disc circumscribing the cell
    and accepted when the owner is their nearest site; acceptance is the
    hexagon-to-disc area ratio (~0.83), so a few rounds suffice.
    """
    n_cells = owner_sites.shape[0]
    radius = isd_m / np.sqrt(3.0)
    out = np.empty((n_cells, n_slots, 2))
    need_cell, need_slot = np.meshgrid(
        np.arange(n_cells), np.arange(n_slots), indexing="ij"
    )
    need_cell, need_slot = need_cell.ravel(), need_slot.ravel()
    for _ in range(max_rounds):
        if need_cell.size == 0:
            return out
        centers = site_xy[owner_sites[need_cell]]
        r = radius * np.sqrt(rng.uniform(size=need_cell.size))
        phi = rng.uniform(0.0, 2.0 * np.pi, size=need_cell.size)
        pts = centers + np.column_stack([r * np.cos(phi), r * np.sin(phi)])
        d2 = np.sum((pts[:, None, :] - site_xy[None, :, :]) ** 2, axis=2)
        ok = (np.argmin(d2, axis=1) == owner_sites[need_cell]) & (
            d2[np.arange(pts.shape[0]), owner_sites[need_cell]]
            >= UE_EXCLUSION_RADIUS_M**2
        )
        out[need_cell[ok], need_slot[ok]] = pts[ok]
        need_cell, need_slot = need_cell[~ok], need_slot[~ok]
    raise RuntimeError("could not fill the per-cell UE slots")


def _wideband_sinr_linear(
    site_xy, site_height, ue_xy, serving, cfg: SchedulerStudyConfig, isd_m: float, rng
):
    """Large-scale linear SINR of each pinned UE, all sites transmitting."""
    dx = ue_xy[None, :, 0] - site_xy[:, None, 0]
    dy = ue_xy[None, :, 1] - site_xy[:, None, 1]
    d2d = np.hypot(dx, dy)
    dz = (site_height - UE_HEIGHT_M)[:, None]
    d3d = np.hypot(d2d, dz)
    theta = np.arctan2(dz, d2d)

    model = PathGainModel(carrier_ghz=cfg.carrier_ghz)
    gain = path_gain_db(d3d, model) + bs_antenna_gain_db(theta)
    # Shadowing: independent across UEs, correlated across sites through
    # a per-UE common component (site-to-site correlation 0.5).
    n_sites, n_ues = d2d.shape
    sigma, rho = 6.0, 0.5
    z_common = rng.standard_normal(n_ues)
    z_site = rng.standard_normal((n_sites, n_ues))
    gain = gain + sigma * (np.sqrt(rho) * z_common[None, :] + np.sqrt(1.0 - rho) * z_site)

    tx = link.calibrate_tx_power_dbm(
        isd_m=isd_m,
        bandwidth_hz=cfg.bandwidth_hz,
        target_edge_snr_db=cfg.target_edge_snr_db,
        carrier_ghz=cfg.carrier_ghz,
        bs_height_m=float(site_height[0]),
    )
    rx_mw = link.db_to_linear(tx + gain)
    noise_mw = float(link.db_to_linear(link.receiver_noise_dbm(cfg.bandwidth_hz)))
    idx = np.arange(n_ues)
    signal = rx_mw[serving, idx]
    interference = rx_mw.sum(axis=0) - signal
    sinr_lin = signal / (interference + noise_mw)
    d3d_serving = d3d[serving, idx]
    return sinr_lin, d3d_serving


@dataclass
class _Accumulator:
    sum_rate_bps: float = 0.0
    n_samples: int = 0

    def mean(self) -> float:
        return self.sum_rate_bps / self.n_samples


def run_scheduler_study(cfg: SchedulerStudyConfig) -> list[dict]:
    """PF vs RR mean throughputs over the full study grid.

    Returns one row per (ISD, UEs-per-cell, scheduler) with mean per-UE
    and per-cell throughput; PF rows carry the gain over the matching RR
    row. All configurations of one ISD share drops and fading draws.
    """
    n_rbs = n_resource_blocks(cfg.bandwidth_hz)
    max_u = max(cfg.ues_per_cell)
    acc = {
        (isd, u, s): _Accumulator()
        for isd in cfg.isds_m
        for u in cfg.ues_per_cell
        for s in ("rr", "pf")
    }

    for isd_index, isd in enumerate(cfg.isds_m):
        scen = ScenarioConfig(
            isd_m=isd,
            carrier_ghz=cfg.carrier_ghz,
            bandwidth_hz=cfg.bandwidth_hz,
            target_edge_snr_db=cfg.target_edge_snr_db,
            region_side_m=cfg.region_side_m(isd),
            seed=cfg.seed,
        )
        grid = scenario.build_hex_grid(scen)
        owner_sites = np.flatnonzero(~grid.site_is_guard)
        n_cells = owner_sites.shape[0]

        for drop in range(cfg.n_drops):
            rng = _drop_rng(cfg.seed, isd_index, drop)
            fading_seed = int(rng.integers(2**63))

            slots = _voronoi_cell_slots(grid.site_xy, owner_sites, isd, max_u, rng)
            ue_xy = slots.reshape(-1, 2)
            serving = np.repeat(owner_sites, max_u)
            sinr_lin, d3d_serving = _wideband_sinr_linear(
                grid.site_xy, grid.site_height_m, ue_xy, serving, cfg, isd, rng
            )
            k = k_factor(d3d_serving).reshape(n_cells, max_u, 1)
            phi = los_phases(rng, (n_cells, max_u, 1))
            sinr3 = sinr_lin.reshape(n_cells, max_u, 1)

            rr_cursor = {u: 0 for u in cfg.ues_per_cell}
            pf_avg = {u: None for u in cfg.ues_per_cell}

            for tti in range(cfg.warmup_ttis + cfg.measure_ttis):
                h = rician_channel(
                    np.broadcast_to(k, (n_cells, max_u, n_rbs)),
                    np.broadcast_to(phi, (n_cells, max_u, n_rbs)),
                    interval_rng(fading_seed, tti),
                )
                gamma = sinr3 * np.abs(h) ** 2  # (cells, slots, RBs)
                caps = per_rb_capacity_bps(gamma)
                measuring = tti >= cfg.warmup_ttis

                for u in cfg.ues_per_cell:
                    caps_u = caps[:, :u, :]
                    gamma_u = gamma[:, :u, :]

                    # Round robin: channel-independent cyclic ownership.
                    assign, rr_cursor[u] = rr_assignments(u, n_rbs, rr_cursor[u])
                    if measuring:
                        served_rr = np.zeros((n_cells, u))
                        # Summed through the same reduction as the PF path so
                        # equal assignments give bit-equal rates.
                        for s in range(u):
                            served_rr[:, s] = np.where(assign == s, caps_u[:, s, :], 0.0).sum(axis=1)
                        a = acc[(isd, u, "rr")]
                        a.sum_rate_bps += float(served_rr.sum())
                        a.n_samples += n_cells * u

                    # Proportional fair: TD admission then FD assignment.
                    est = per_rb_capacity_bps(gamma_u.mean(axis=2))
                    if pf_avg[u] is None:
                        pf_avg[u] = est.copy()
                    if u > PF_MAX_SCHEDULED:
                        metric = est / pf_avg[u]
                        thresh = -np.sort(-metric, axis=1)[:, PF_MAX_SCHEDULED - 1]
                        eligible = metric >= thresh[:, None]
                    else:
                        eligible = np.ones((n_cells, u), dtype=bool)
                    weights = gamma_u / gamma_u.sum(axis=2, keepdims=True)
                    weights = np.where(eligible[:, :, None], weights, -np.inf)
                    winner = np.argmax(weights, axis=1)  # (cells, RBs)
                    served_pf = np.zeros((n_cells, u))
                    for s in range(u):
                        served_pf[:, s] = np.where(winner == s, caps_u[:, s, :], 0.0).sum(axis=1)
                    pf_avg[u] = pf_update_avg_rate(pf_avg[u], served_pf)
                    if measuring:
                        a = acc[(isd, u, "pf")]
                        a.sum_rate_bps += float(served_pf.sum())
                        a.n_samples += n_cells * u

    rows = []
    for isd in cfg.isds_m:
        for u in cfg.ues_per_cell:
            rr_mean = acc[(isd, u, "rr")].mean()
            pf_mean = acc[(isd, u, "pf")].mean()
            for sched, mean in (("rr", rr_mean), ("pf", pf_mean)):
                rows.append(
                    {
                        "isd_m": isd,
                        "ues_per_cell": u,
                        "scheduler": sched,
                        "mean_ue_tput_bps": mean,
                        "mean_cell_tput_bps": mean * u,
                        "pf_gain_pct": (pf_mean - rr_mean) / rr_mean * 100.0
                        if sched == "pf"
                        else "",
                    }
                )
    return rows
