"""Monte-Carlo execution: runs, aggregation, sweeps and CSV reporting.

Every run is reproducible in isolation: the generator for run ``r`` of
sweep point ``p`` under master seed ``m`` is seeded by a splitmix64
chain ``mix(mix(mix(m) ^ p) ^ r)``, so execution order - serial,
shuffled or parallel - cannot change any output. Sweep points take
their ids from the canonical cross-product enumeration of the sweep
specification, independent of execution order.

A run draws one deployment and one shadowing realisation, associates
UEs, resolves idle mode, beams and SINRs, and records per-UE statistics
over the UEs served by in-region sites (guard-tier service is dropped;
sample counts are kept). Aggregation pools UEs across runs; the 5th
percentile - the cell-edge figure - interpolates linearly between the
two closest order statistics, e.g. values 1..100 give 5.95 at 5 %.

CSV outputs start with a ``#``-prefixed audit block recording every
model constant and design decision in force, then a regular header row.
"""

from __future__ import annotations

import csv
import itertools
from dataclasses import dataclass, field

import numpy as np

from . import antenna, energy, fastfading, link, propagation, scenario, scheduler
from .scenario import ScenarioConfig

SINR_CDF_GRID_DB = np.arange(-20.0, 60.0 + 1e-9, 0.5)

_MASK64 = (1 << 64) - 1


def _splitmix64(x: int) -> int:
    """One splitmix64 output step (the documented 64-bit mix)."""
    x = (x + 0x9E3779B97F4A7C15) & _MASK64
    z = x
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & _MASK64
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & _MASK64
    return (z ^ (z >> 31)) & _MASK64


def run_seed(master_seed: int, point_index: int, run_index: int) -> int:
    """Seed for one run: splitmix64 chained over master, point and run."""
    h = _splitmix64(master_seed & _MASK64)
    h = _splitmix64(h ^ (point_index & _MASK64))
    h = _splitmix64(h ^ (run_index & _MASK64))
    return h


def run_rng(master_seed: int, point_index: int, run_index: int) -> np.random.Generator:
    return np.random.default_rng(run_seed(master_seed, point_index, run_index))


def percentile(values, q: float) -> float:
    """Percentile with linear interpolation between closest order statistics."""
    return float(np.percentile(np.asarray(values, dtype=float), q, method="linear"))


@dataclass
class RunMetrics:
    """Per-run outcome over statistics-eligible UEs (in-region service only)."""

    pilot_sinr_db: np.ndarray  # per eligible UE, holes included
    data_sinr_db: np.ndarray  # per eligible UE, holes included
    ue_tput_bps: np.ndarray  # per eligible traffic-carrying UE
    n_ues_total: int
    n_ues_eligible: int
    n_holes: int
    n_sites_deployed: int  # in-region sites
    n_active_bs: int  # in-region sites serving at least one UE
    active_ues_per_active_bs: float
    sum_tput_bps: float
    tx_power_dbm: float


def execute_run(cfg: ScenarioConfig, run_index: int, point_index: int = 0) -> RunMetrics:
    """One full deployment -> propagation -> association -> SINR -> rate run."""
    cfg.validate()
    rng = run_rng(cfg.seed, point_index, run_index)
    deployment = scenario.build_deployment(cfg, rng)
    links = link.build_links(deployment, cfg, rng)
    assoc = link.associate(links, deployment, cfg.idle_mode)
    beams = link.resolve_beams(links, assoc, cfg.num_bs_antennas)
    sinr_db = link.data_sinr_db(links, assoc, beams)
    tput = link.ue_throughput_bps(sinr_db, assoc, cfg.effective_bandwidth_hz)

    eligible = assoc.counts_in_stats
    carrying = eligible & ~assoc.is_hole
    in_region = ~deployment.site_is_guard
    eligible_serving = np.unique(assoc.serving_site[eligible])
    n_active_bs = int(np.count_nonzero(in_region[eligible_serving]))
    n_active_ues = int(np.count_nonzero(carrying))
    return RunMetrics(
        pilot_sinr_db=assoc.pilot_sinr_db[eligible],
        data_sinr_db=sinr_db[eligible],
        ue_tput_bps=tput[carrying],
        n_ues_total=deployment.n_ues,
        n_ues_eligible=int(np.count_nonzero(eligible)),
        n_holes=int(np.count_nonzero(assoc.is_hole & eligible)),
        n_sites_deployed=int(np.count_nonzero(in_region)),
        n_active_bs=n_active_bs,
        active_ues_per_active_bs=(n_active_ues / n_active_bs) if n_active_bs else 0.0,
        sum_tput_bps=float(tput[carrying].sum()),
        tx_power_dbm=links.tx_power_dbm,
    )


@dataclass
class Summary:
    """Aggregate over a list of runs (UEs pooled across runs)."""

    n_runs: int
    mean_ue_tput_bps: float
    p5_ue_tput_bps: float
    mean_data_sinr_db: float
    median_data_sinr_db: float
    p5_data_sinr_db: float
    median_pilot_sinr_db: float
    mean_active_ues_per_active_bs: float
    mean_active_bs: float
    mean_sites_deployed: float
    hole_fraction: float
    mean_ues_eligible: float
    tx_power_dbm: float
    cdf_grid_db: np.ndarray = field(repr=False)
    data_sinr_cdf: np.ndarray = field(repr=False)
    ee_bps_per_w: dict = field(default_factory=dict)


def aggregate(runs: list[RunMetrics], cfg: ScenarioConfig | None = None) -> Summary:
    """Pool runs into one summary record; needs at least one run."""
    if not runs:
        raise ValueError("aggregate requires at least one run")
    data_sinr = np.concatenate([r.data_sinr_db for r in runs])
    pilot_sinr = np.concatenate([r.pilot_sinr_db for r in runs])
    tput = np.concatenate([r.ue_tput_bps for r in runs])
    n_eligible = sum(r.n_ues_eligible for r in runs)
    n_holes = sum(r.n_holes for r in runs)
    cdf = np.mean(data_sinr[:, None] <= SINR_CDF_GRID_DB[None, :], axis=0)

    ee = {}
    if cfg is not None:
        try:
            row = energy.power_row(cfg.isd_m, cfg.num_bs_antennas)
        except ValueError:
            row = None
        if row is not None:
            total_tput = sum(r.sum_tput_bps for r in runs)
            for sm in energy.SLEEP_MODELS:
                total_power = sum(
                    energy.network_power_w(
                        r.n_active_bs, r.n_sites_deployed - r.n_active_bs, row, sm
                    )
                    for r in runs
                )
                ee[sm] = total_tput / total_power

    return Summary(
        n_runs=len(runs),
        mean_ue_tput_bps=float(tput.mean()) if tput.size else 0.0,
        p5_ue_tput_bps=percentile(tput, 5.0) if tput.size else 0.0,
        mean_data_sinr_db=float(data_sinr.mean()),
        median_data_sinr_db=percentile(data_sinr, 50.0),
        p5_data_sinr_db=percentile(data_sinr, 5.0),
        median_pilot_sinr_db=percentile(pilot_sinr, 50.0),
        mean_active_ues_per_active_bs=float(
            np.mean([r.active_ues_per_active_bs for r in runs])
        ),
        mean_active_bs=float(np.mean([r.n_active_bs for r in runs])),
        mean_sites_deployed=float(np.mean([r.n_sites_deployed for r in runs])),
        hole_fraction=(n_holes / n_eligible) if n_eligible else 0.0,
        mean_ues_eligible=n_eligible / len(runs),
        tx_power_dbm=float(np.mean([r.tx_power_dbm for r in runs])),
        cdf_grid_db=SINR_CDF_GRID_DB.copy(),
        data_sinr_cdf=cdf,
        ee_bps_per_w=ee,
    )


def simulate(cfg: ScenarioConfig, point_index: int = 0):
    """Execute all runs of one configuration and aggregate them."""
    runs = [execute_run(cfg, r, point_index) for r in range(cfg.runs)]
    return aggregate(runs, cfg), runs


@dataclass
class SweepSpec:
    """Cross-product experiment grid; every axis is a list of values."""

    isds_m: tuple = (200.0,)
    ue_densities_per_km2: tuple = (300.0,)
    ue_distributions: tuple = ("uniform",)
    idle_modes: tuple = (True,)
    sleep_models: tuple = (1,)
    carriers_ghz: tuple = (2.0,)
    antenna_counts: tuple = (1,)
    target_snrs_db: tuple = (12.0,)
    runs: int = 150
    seed: int = 0
    region_side_m: float = 500.0
    bandwidth_hz: float | None = None  # None -> 5 % of each carrier

    def points(self) -> list[ScenarioConfig]:
        """Canonical enumeration; the position in this list is the point id."""
        out = []
        for isd, dens, dist, idle, sm, f, a, t in itertools.product(
            self.isds_m,
            self.ue_densities_per_km2,
            self.ue_distributions,
            self.idle_modes,
            self.sleep_models,
            self.carriers_ghz,
            self.antenna_counts,
            self.target_snrs_db,
        ):
            out.append(
                ScenarioConfig(
                    isd_m=isd,
                    ue_density_per_km2=dens,
                    ue_distribution=dist,
                    idle_mode=idle,
                    sleep_model=sm,
                    carrier_ghz=f,
                    bandwidth_hz=self.bandwidth_hz,
                    num_bs_antennas=a,
                    target_edge_snr_db=t,
                    region_side_m=self.region_side_m,
                    runs=self.runs,
                    seed=self.seed,
                )
            )
        return out


def sweep(spec: SweepSpec, point_indices=None) -> list[tuple[ScenarioConfig, Summary]]:
    """Run (a subset of) the sweep; output is independent of execution order."""
    points = spec.points()
    if point_indices is None:
        point_indices = range(len(points))
    results = []
    for p in point_indices:
        cfg = points[p]
        summary, _ = simulate(cfg, point_index=p)
        results.append((cfg, summary))
    return results


# ---------------------------------------------------------------------------
# CSV reporting
# ---------------------------------------------------------------------------

_CONFIG_COLUMNS = (
    "isd_m",
    "ue_density_per_km2",
    "ue_distribution",
    "idle_mode",
    "sleep_model",
    "carrier_ghz",
    "bandwidth_hz",
    "num_bs_antennas",
    "target_edge_snr_db",
    "region_side_m",
    "runs",
    "seed",
)

_SUMMARY_COLUMNS = (
    "mean_ue_tput_bps",
    "p5_ue_tput_bps",
    "mean_data_sinr_db",
    "median_data_sinr_db",
    "p5_data_sinr_db",
    "median_pilot_sinr_db",
    "mean_active_ues_per_active_bs",
    "mean_active_bs",
    "mean_sites_deployed",
    "hole_fraction",
    "mean_ues_eligible",
    "tx_power_dbm",
)


def audit_parameters() -> dict:
    """Every constant and recorded design decision, for the CSV audit block."""
    cfg_defaults = ScenarioConfig()
    arr = antenna.DipoleArrayConfig()
    return {
        "thermal_noise_dbm_per_hz": link.THERMAL_NOISE_DBM_PER_HZ,
        "receiver_noise_figure_db": link.DEFAULT_NOISE_FIGURE_DB,
        "pilot_sinr_floor_db": link.PILOT_SINR_FLOOR_DB,
        "capacity_sinr_backoff_db": link.CAPACITY_SINR_BACKOFF_DB,
        "edge_rule": cfg_defaults.edge_rule,
        "tx_power_reference": "thermal noise over full bandwidth, no noise figure",
        "pathloss_los_db": "22.0*log10(d_3d_m) + 28.0 + 20*log10(f_ghz)",
        "pathloss_nlos_db": "36.7*log10(d_3d_m) + 22.7 + 26*log10(f_ghz)",
        "los_probability": "min(18/d,1)*(1-exp(-d/36)) + exp(-d/36), certain to 18 m",
        "los_smoothing_window_m": propagation.SPLINE_WINDOW_M,
        "min_link_distance_m": 0.5,
        "shadow_sigma_db": 6.0,
        "shadow_inter_site_correlation": 0.5,
        "shadow_decorrelation_distance_m": 20.0,
        "antenna_max_gain_dbi": arr.max_element_gain_dbi,
        "antenna_vertical_elements": arr.n_elements_vertical,
        "antenna_excitation": arr.excitation,
        "antenna_phase_increment_rad": arr.phase_increment_rad,
        "antenna_spacing_wavelengths": arr.spacing_wavelengths,
        "pattern_floor_db": antenna.PATTERN_FLOOR_DB,
        "rician_k_full_los": fastfading.K_FULL_LOS,
        "rician_k_floor": fastfading.K_FLOOR,
        "rician_k_decay_length_m": float(fastfading.K_DECAY_LENGTH_M),
        "rb_bandwidth_hz": scheduler.RB_BANDWIDTH_HZ,
        "tti_s": scheduler.TTI_S,
        "pf_max_scheduled": scheduler.PF_MAX_SCHEDULED,
        "pf_time_constant_ttis": scheduler.PF_TIME_CONSTANT_TTIS,
        "bs_height_rule_m": "clip(6*isd/50, 3, 24)",
        "guard_tiers": cfg_defaults.guard_tiers,
        "ue_height_m": scenario.UE_HEIGHT_M,
        "ue_exclusion_radius_m": scenario.UE_EXCLUSION_RADIUS_M,
        "hotspot_radius_m": scenario.HOTSPOT_RADIUS_M,
        "hotspot_min_separation_m": scenario.HOTSPOT_MIN_SEPARATION_M,
        "ues_per_hotspot": scenario.UES_PER_HOTSPOT,
        "percentile_rule": "linear interpolation between closest order statistics",
        "seed_mix": "splitmix64(splitmix64(splitmix64(master) ^ point) ^ run)",
        "sinr_cdf_grid_db": f"{SINR_CDF_GRID_DB[0]}..{SINR_CDF_GRID_DB[-1]} step 0.5",
        "bandwidth_default": "5 % of the carrier frequency",
    }


def _write_audit_block(f, extra: dict | None = None) -> None:
    params = audit_parameters()
    if extra:
        params.update(extra)
    for key, value in params.items():
        f.write(f"# {key} = {value}\n")


def _config_values(cfg: ScenarioConfig) -> list:
    vals = []
    for col in _CONFIG_COLUMNS:
        if col == "bandwidth_hz":
            vals.append(cfg.effective_bandwidth_hz)
        elif col == "idle_mode":
            vals.append(int(cfg.idle_mode))
        else:
            vals.append(getattr(cfg, col))
    return vals


def write_summary_csv(path, results: list[tuple[ScenarioConfig, Summary]]) -> None:
    """One row per configuration: config columns then aggregate metrics."""
    with open(path, "w", newline="") as f:
        _write_audit_block(f)
        writer = csv.writer(f)
        writer.writerow(_CONFIG_COLUMNS + _SUMMARY_COLUMNS)
        for cfg, summary in results:
            writer.writerow(
                _config_values(cfg) + [getattr(summary, c) for c in _SUMMARY_COLUMNS]
            )


def write_sinr_cdf_csv(path, results: list[tuple[ScenarioConfig, Summary]]) -> None:
    """Long-form SINR CDF: config columns + (sinr_db, cdf) per grid point."""
    with open(path, "w", newline="") as f:
        _write_audit_block(f)
        writer = csv.writer(f)
        writer.writerow(_CONFIG_COLUMNS + ("sinr_db", "cdf"))
        for cfg, summary in results:
            base = _config_values(cfg)
            for x, c in zip(summary.cdf_grid_db, summary.data_sinr_cdf):
                writer.writerow(base + [x, c])


def write_sched_csv(path, study_cfg: scheduler.SchedulerStudyConfig, rows: list[dict]) -> None:
    with open(path, "w", newline="") as f:
        _write_audit_block(
            f,
            {
                "sched_n_drops": study_cfg.n_drops,
                "sched_warmup_ttis": study_cfg.warmup_ttis,
                "sched_measure_ttis": study_cfg.measure_ttis,
                "sched_bandwidth_hz": study_cfg.bandwidth_hz,
                "sched_carrier_ghz": study_cfg.carrier_ghz,
                "sched_seed": study_cfg.seed,
            },
        )
        writer = csv.DictWriter(
            f,
            fieldnames=(
                "isd_m",
                "ues_per_cell",
                "scheduler",
                "mean_ue_tput_bps",
                "mean_cell_tput_bps",
                "pf_gain_pct",
            ),
        )
        writer.writeheader()
        writer.writerows(rows)


def write_ee_csv(path, rows: list[dict], extra_audit: dict | None = None) -> None:
    with open(path, "w", newline="") as f:
        _write_audit_block(f, extra_audit)
        writer = csv.DictWriter(
            f,
            fieldnames=(
                "isd_m",
                "num_bs_antennas",
                "sleep_model",
                "mean_ue_tput_bps",
                "mean_active_bs",
                "mean_sites_deployed",
                "ee_bps_per_w",
            ),
        )
        writer.writeheader()
        writer.writerows(rows)


@dataclass
class EnergyStudyConfig:
    """EE across densification for every idle profile and antenna count."""

    isds_m: tuple = tuple(sorted({k[0] for k in energy.POWER_TABLE}, reverse=True))
    antenna_counts: tuple = (1, 2, 4)
    ue_density_per_km2: float = 300.0
    ue_distribution: str = "nonuniform"
    idle_mode: bool = True
    carrier_ghz: float = 2.0
    bandwidth_hz: float = 20e6  # the power model is profiled at 20 MHz
    target_edge_snr_db: float = 12.0
    region_side_m: float = 500.0
    runs: int = 50
    seed: int = 0


def run_energy_study(study: EnergyStudyConfig) -> list[dict]:
    """EE rows for every (ISD, antennas, sleep model); one sim serves all five."""
    rows = []
    for point, (isd, n_ant) in enumerate(
        itertools.product(study.isds_m, study.antenna_counts)
    ):
        cfg = ScenarioConfig(
            isd_m=isd,
            ue_density_per_km2=study.ue_density_per_km2,
            ue_distribution=study.ue_distribution,
            idle_mode=study.idle_mode,
            carrier_ghz=study.carrier_ghz,
            bandwidth_hz=study.bandwidth_hz,
            num_bs_antennas=n_ant,
            target_edge_snr_db=study.target_edge_snr_db,
            region_side_m=study.region_side_m,
            runs=study.runs,
            seed=study.seed,
        )
        summary, _ = simulate(cfg, point_index=point)
        for sm in energy.SLEEP_MODELS:
            rows.append(
                {
                    "isd_m": isd,
                    "num_bs_antennas": n_ant,
                    "sleep_model": sm,
                    "mean_ue_tput_bps": summary.mean_ue_tput_bps,
                    "mean_active_bs": summary.mean_active_bs,
                    "mean_sites_deployed": summary.mean_sites_deployed,
                    "ee_bps_per_w": summary.ee_bps_per_w[sm],
                }
            )
    return rows
