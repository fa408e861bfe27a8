"""Deployment geometry: hexagonal base-station grid and UE drops.

Base stations sit on a uniform hexagonal lattice (flat-top rows aligned
with the x axis, grid centred on the region centre). The lattice extends
two full guard tiers beyond every region edge; guard sites transmit and
can serve UEs, but anything they serve is excluded from statistics.

UEs are dropped either uniformly over the region or in a non-uniform
mixture: half uniform, half clustered into circular hotspots of 40 m
radius holding 20 UEs each.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

# Inter-site distances studied in the measurement campaigns this model
# mirrors. Other positive values are accepted with a validity note.
STANDARD_ISDS_M = (200.0, 150.0, 100.0, 75.0, 50.0, 35.0, 20.0, 10.0, 5.0)

HOTSPOT_RADIUS_M = 40.0       # radius of a UE hotspot
HOTSPOT_MIN_SEPARATION_M = 40.0  # minimum distance between hotspot centres
UES_PER_HOTSPOT = 20          # nominal UE count of a full hotspot
UE_EXCLUSION_RADIUS_M = 0.5   # no UE closer than this to any site
UE_HEIGHT_M = 1.5             # receiver height above ground

VALID_ANTENNA_COUNTS = (1, 2, 4)
VALID_SNR_TARGETS_DB = (9.0, 12.0, 15.0)
EDGE_LOSS_RULES = ("los", "blended")


@dataclass
class ScenarioConfig:
    """Full experiment descriptor (legend parameters i, d, ud, s, sm, f, a, t)."""

    isd_m: float = 200.0              # i: inter-site distance [m]
    ue_density_per_km2: float = 300.0  # d: active UEs per km^2
    ue_distribution: str = "uniform"  # ud: "uniform" or "nonuniform"
    idle_mode: bool = True            # s: switch off BSs with no associated UE
    sleep_model: int = 1              # sm: idle power profile, 1..5
    carrier_ghz: float = 2.0          # f: carrier frequency [GHz]
    bandwidth_hz: float | None = None  # defaults to 5 % of the carrier
    num_bs_antennas: int = 1          # a: horizontal array size, 1/2/4
    target_edge_snr_db: float = 12.0  # t: SNR target at the cell edge [dB]
    region_side_m: float = 500.0      # side of the square measured region
    runs: int = 150                   # Monte-Carlo runs per configuration
    seed: int = 0                     # master seed
    guard_tiers: int = 2              # lattice tiers beyond each region edge
    edge_rule: str = "sqrt3_over_2"   # cell-edge distance rule (see link module)
    edge_loss_rule: str = "los"       # loss term of the edge power budget
    calibration_margin_db: float | None = None  # None -> rule default (link module)

    @property
    def effective_bandwidth_hz(self) -> float:
        if self.bandwidth_hz is not None:
            return float(self.bandwidth_hz)
        return 0.05 * self.carrier_ghz * 1e9

    @property
    def region_area_km2(self) -> float:
        return (self.region_side_m / 1e3) ** 2

    def validate(self) -> list[str]:
        """Raise ValueError on hard errors; return soft validity notes."""
        notes = []
        if self.isd_m <= 0:
            raise ValueError("isd_m must be positive")
        if self.ue_density_per_km2 <= 0:
            raise ValueError("ue_density_per_km2 must be positive")
        if self.region_side_m <= 0:
            raise ValueError("region_side_m must be positive")
        if self.region_side_m < self.isd_m:
            raise ValueError("degenerate region: side smaller than one cell")
        if self.ue_distribution not in ("uniform", "nonuniform"):
            raise ValueError(f"unknown ue_distribution {self.ue_distribution!r}")
        if self.num_bs_antennas not in VALID_ANTENNA_COUNTS:
            raise ValueError(f"num_bs_antennas must be one of {VALID_ANTENNA_COUNTS}")
        if self.sleep_model not in (1, 2, 3, 4, 5):
            raise ValueError("sleep_model must be in 1..5")
        if self.edge_loss_rule not in EDGE_LOSS_RULES:
            raise ValueError(f"edge_loss_rule must be one of {EDGE_LOSS_RULES}")
        if not any(math.isclose(self.isd_m, s) for s in STANDARD_ISDS_M):
            notes.append(f"isd_m={self.isd_m} outside the studied set {STANDARD_ISDS_M}")
        if not any(math.isclose(self.target_edge_snr_db, t) for t in VALID_SNR_TARGETS_DB):
            notes.append(f"target_edge_snr_db={self.target_edge_snr_db} outside {VALID_SNR_TARGETS_DB}")
        return notes


@dataclass
class Deployment:
    """Site lattice plus one UE drop.

    ``hotspot_id`` is -1 for UEs of the uniform component.
    """

    site_xy: np.ndarray          # (S, 2) site positions [m]
    site_height_m: np.ndarray    # (S,) antenna heights [m]
    site_is_guard: np.ndarray    # (S,) bool, True outside the measured region
    ue_xy: np.ndarray = field(default_factory=lambda: np.empty((0, 2)))
    ue_hotspot_id: np.ndarray = field(default_factory=lambda: np.empty(0, dtype=int))
    hotspot_centers: np.ndarray = field(default_factory=lambda: np.empty((0, 2)))
    hotspot_radius_m: float = HOTSPOT_RADIUS_M

    @property
    def n_sites(self) -> int:
        return self.site_xy.shape[0]

    @property
    def n_ues(self) -> int:
        return self.ue_xy.shape[0]


def bs_height_m(isd_m: float) -> float:
    """Antenna height for a given ISD.

    The array pattern was tuned for a fixed downtilt, so the antenna
    height scales with the ISD (6 m at a 50 m reference pitch) and is
    clamped to the realistic 3..24 m street-furniture range.
    """
    return float(np.clip(6.0 * (isd_m / 50.0), 3.0, 24.0))


def hex_site_density_per_km2(isd_m: float) -> float:
    """Analytic site density of a hexagonal lattice with pitch ``isd_m``."""
    return 2e6 / (math.sqrt(3) * isd_m ** 2)


def reported_site_density_per_km2(isd_m: float) -> int:
    """Site density as conventionally reported (next integer up)."""
    return math.ceil(hex_site_density_per_km2(isd_m))


def build_hex_grid(cfg: ScenarioConfig) -> Deployment:
    """Construct the site lattice covering the region plus guard tiers.

    Rows are spaced ``sqrt(3)/2 * isd`` apart with odd rows shifted by
    half a pitch; the lattice is centred on the region centre so the
    layout is reproducible for a given config.
    """
    cfg.validate()
    isd = cfg.isd_m
    side = cfg.region_side_m
    margin = cfg.guard_tiers * isd
    dy = math.sqrt(3.0) / 2.0 * isd
    cx = cy = side / 2.0

    n_rows = int(math.ceil((side / 2.0 + margin) / dy))
    n_cols = int(math.ceil((side / 2.0 + margin) / isd)) + 1

    rows = np.arange(-n_rows, n_rows + 1)
    cols = np.arange(-n_cols, n_cols + 1)
    cc, rr = np.meshgrid(cols, rows)
    x = cx + cc * isd + (rr % 2) * (isd / 2.0)
    y = cy + rr * dy
    x = x.ravel()
    y = y.ravel()

    keep = (x >= -margin) & (x <= side + margin) & (y >= -margin) & (y <= side + margin)
    x, y = x[keep], y[keep]

    # Deterministic site ids: sort by (y, x).
    order = np.lexsort((x, y))
    xy = np.column_stack([x[order], y[order]])
    in_region = (
        (xy[:, 0] >= 0.0) & (xy[:, 0] <= side) & (xy[:, 1] >= 0.0) & (xy[:, 1] <= side)
    )
    heights = np.full(xy.shape[0], bs_height_m(isd))
    return Deployment(site_xy=xy, site_height_m=heights, site_is_guard=~in_region)


def _resample_near_sites(xy, site_xy, rng, sampler, max_tries=1000):
    """Redraw points that violate the UE-site exclusion radius."""
    for _ in range(max_tries):
        d2 = np.min(
            np.sum((xy[:, None, :] - site_xy[None, :, :]) ** 2, axis=2), axis=1
        )
        bad = d2 < UE_EXCLUSION_RADIUS_M ** 2
        if not bad.any():
            return xy
        xy[bad] = sampler(int(bad.sum()))
    raise RuntimeError("could not satisfy the UE-site exclusion radius")


def _place_hotspot_centers(n_hotspots, side, rng, max_tries=1000):
    """Hotspot centres: uniform, full disc inside the region, pairwise >= 40 m."""
    pad = HOTSPOT_RADIUS_M
    if side <= 2 * pad and n_hotspots > 0:
        raise RuntimeError("hotspot packing failed: region too small for a hotspot")
    for _ in range(max_tries):
        centers = rng.uniform(pad, side - pad, size=(n_hotspots, 2))
        if n_hotspots < 2:
            return centers
        d = np.sqrt(np.sum((centers[:, None] - centers[None, :]) ** 2, axis=2))
        np.fill_diagonal(d, np.inf)
        if d.min() >= HOTSPOT_MIN_SEPARATION_M:
            return centers
    raise RuntimeError("hotspot packing failed")


def drop_ues(cfg: ScenarioConfig, deployment: Deployment, rng: np.random.Generator) -> Deployment:
    """Drop one UE realisation into an already-built site grid.

    Uniform mode places all UEs i.i.d. over the region. Non-uniform mode
    splits the population: the uniform half (rounded up) is spread over
    the region, the clustered half fills hotspots of 20 UEs each, with
    any remainder (< 20) forming one final under-filled hotspot.
    """
    side = cfg.region_side_m
    n_ues = int(round(cfg.ue_density_per_km2 * cfg.region_area_km2))
    site_xy = deployment.site_xy

    def uniform_sampler(n):
        return rng.uniform(0.0, side, size=(n, 2))

    if cfg.ue_distribution == "uniform" or n_ues == 0:
        xy = _resample_near_sites(uniform_sampler(n_ues), site_xy, rng, uniform_sampler)
        hotspot_id = np.full(n_ues, -1, dtype=int)
        centers = np.empty((0, 2))
    else:
        n_clustered = n_ues // 2
        n_uniform = n_ues - n_clustered
        n_full, remainder = divmod(n_clustered, UES_PER_HOTSPOT)
        counts = [UES_PER_HOTSPOT] * n_full + ([remainder] if remainder else [])
        centers = _place_hotspot_centers(len(counts), side, rng)

        xy_u = _resample_near_sites(
            uniform_sampler(n_uniform), site_xy, rng, uniform_sampler
        )
        parts = [xy_u]
        ids = [np.full(n_uniform, -1, dtype=int)]
        for h, (center, count) in enumerate(zip(centers, counts)):
            def disc_sampler(n, center=center):
                r = HOTSPOT_RADIUS_M * np.sqrt(rng.uniform(size=n))
                phi = rng.uniform(0.0, 2.0 * np.pi, size=n)
                return center + np.column_stack([r * np.cos(phi), r * np.sin(phi)])

            xy_h = _resample_near_sites(disc_sampler(count), site_xy, rng, disc_sampler)
            parts.append(xy_h)
            ids.append(np.full(count, h, dtype=int))
        xy = np.concatenate(parts)
        hotspot_id = np.concatenate(ids)

    return Deployment(
        site_xy=deployment.site_xy,
        site_height_m=deployment.site_height_m,
        site_is_guard=deployment.site_is_guard,
        ue_xy=xy,
        ue_hotspot_id=hotspot_id,
        hotspot_centers=centers,
    )


def build_deployment(cfg: ScenarioConfig, rng: np.random.Generator) -> Deployment:
    """Grid plus UE drop in one call."""
    return drop_ues(cfg, build_hex_grid(cfg), rng)


def dump_deployment_csv(deployment: Deployment, sites_path, ues_path) -> None:
    """Debug dump of the deployment geometry as two CSV files."""
    with open(sites_path, "w") as f:
        f.write("site_id,x,y,height,guard\n")
        for i in range(deployment.n_sites):
            f.write(
                f"{i},{deployment.site_xy[i, 0]:.3f},{deployment.site_xy[i, 1]:.3f},"
                f"{deployment.site_height_m[i]:.2f},{int(deployment.site_is_guard[i])}\n"
            )
    with open(ues_path, "w") as f:
        f.write("ue_id,x,y,hotspot_id\n")
        for i in range(deployment.n_ues):
            f.write(
                f"{i},{deployment.ue_xy[i, 0]:.3f},{deployment.ue_xy[i, 1]:.3f},"
                f"{deployment.ue_hotspot_id[i]}\n"
            )
