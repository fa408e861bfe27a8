"""Deployment geometry: hex lattice, heights, densities, UE drops."""

import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from udnsim.scenario import (
    HOTSPOT_MIN_SEPARATION_M,
    HOTSPOT_RADIUS_M,
    STANDARD_ISDS_M,
    UE_EXCLUSION_RADIUS_M,
    UES_PER_HOTSPOT,
    Deployment,
    ScenarioConfig,
    bs_height_m,
    build_deployment,
    build_hex_grid,
    drop_ues,
    dump_deployment_csv,
    hex_site_density_per_km2,
    reported_site_density_per_km2,
)

# Densities conventionally quoted for the nine standard pitches.
REPORTED_DENSITIES = {
    200.0: 29,
    150.0: 52,
    100.0: 116,
    75.0: 206,
    50.0: 462,
    35.0: 943,
    20.0: 2887,
    10.0: 11548,
    5.0: 46189,
}


def test_reported_density_table_exact():
    for isd, want in REPORTED_DENSITIES.items():
        assert reported_site_density_per_km2(isd) == want


def test_reported_density_is_ceiling_of_analytic():
    for isd in STANDARD_ISDS_M:
        analytic = hex_site_density_per_km2(isd)
        assert reported_site_density_per_km2(isd) == math.ceil(analytic)
        assert analytic == pytest.approx(2e6 / (math.sqrt(3) * isd**2))


@given(isd=st.floats(min_value=1.0, max_value=500.0, allow_nan=False))
def test_density_matches_lattice_counting(isd):
    """Site count of a large lattice approaches the analytic density."""
    side = 40.0 * isd  # large region so the boundary bias is < 5 %
    cfg = ScenarioConfig(isd_m=isd, region_side_m=side, guard_tiers=0)
    dep = build_hex_grid(cfg)
    counted = (~dep.site_is_guard).sum() / (side / 1e3) ** 2
    assert counted == pytest.approx(hex_site_density_per_km2(isd), rel=0.05)


def test_lattice_geometry_pitch_and_rows():
    cfg = ScenarioConfig(isd_m=50.0, region_side_m=500.0)
    dep = build_hex_grid(cfg)
    xy = dep.site_xy
    ys = np.unique(np.round(xy[:, 1], 6))
    # Row spacing sqrt(3)/2 * isd.
    assert np.allclose(np.diff(ys), math.sqrt(3) / 2 * 50.0)
    # Within one row, sites are one pitch apart.
    row = xy[np.isclose(xy[:, 1], ys[len(ys) // 2])]
    assert np.allclose(np.diff(np.sort(row[:, 0])), 50.0)
    # Adjacent rows are offset by half a pitch.
    row2 = xy[np.isclose(xy[:, 1], ys[len(ys) // 2 + 1])]
    offset = (np.sort(row2[:, 0])[0] - np.sort(row[:, 0])[0]) % 50.0
    assert math.isclose(offset, 25.0)


def test_lattice_nearest_neighbour_distance_is_isd():
    cfg = ScenarioConfig(isd_m=35.0, region_side_m=300.0)
    xy = build_hex_grid(cfg).site_xy
    d = np.sqrt(((xy[:, None] - xy[None, :]) ** 2).sum(-1))
    np.fill_diagonal(d, np.inf)
    assert d.min() == pytest.approx(35.0)


def test_guard_band_extends_two_tiers():
    cfg = ScenarioConfig(isd_m=100.0, region_side_m=500.0, guard_tiers=2)
    dep = build_hex_grid(cfg)
    guards = dep.site_xy[dep.site_is_guard]
    inside = dep.site_xy[~dep.site_is_guard]
    assert ((inside >= 0.0) & (inside <= 500.0)).all()
    assert len(guards) > 0
    assert guards.min() >= -200.0 and guards.max() <= 700.0
    # Guard sites exist beyond every region edge.
    assert (guards[:, 0] < 0).any() and (guards[:, 0] > 500).any()
    assert (guards[:, 1] < 0).any() and (guards[:, 1] > 500).any()


def test_site_ids_are_deterministic_row_major():
    cfg = ScenarioConfig(isd_m=75.0)
    a = build_hex_grid(cfg).site_xy
    b = build_hex_grid(cfg).site_xy
    assert np.array_equal(a, b)
    order = np.lexsort((a[:, 0], a[:, 1]))
    assert np.array_equal(order, np.arange(len(a)))


def test_bs_height_scales_with_pitch_and_clamps():
    assert bs_height_m(50.0) == pytest.approx(6.0)
    assert bs_height_m(200.0) == pytest.approx(24.0)  # clamped top
    assert bs_height_m(300.0) == pytest.approx(24.0)
    assert bs_height_m(10.0) == pytest.approx(3.0)  # clamped bottom
    assert bs_height_m(5.0) == pytest.approx(3.0)
    assert bs_height_m(75.0) == pytest.approx(9.0)


def test_uniform_drop_counts_and_bounds():
    cfg = ScenarioConfig(isd_m=50.0, ue_density_per_km2=300.0, region_side_m=500.0)
    dep = build_deployment(cfg, np.random.default_rng(7))
    assert dep.n_ues == 75  # 300 per km^2 over 0.25 km^2
    assert ((dep.ue_xy >= 0.0) & (dep.ue_xy <= 500.0)).all()
    assert (dep.ue_hotspot_id == -1).all()


def test_ue_site_exclusion_radius():
    cfg = ScenarioConfig(isd_m=5.0, ue_density_per_km2=600.0, region_side_m=100.0)
    dep = build_deployment(cfg, np.random.default_rng(3))
    d = np.sqrt(
        ((dep.ue_xy[:, None, :] - dep.site_xy[None, :, :]) ** 2).sum(-1)
    ).min(axis=1)
    assert (d >= UE_EXCLUSION_RADIUS_M).all()


def test_nonuniform_drop_split_and_hotspot_geometry():
    cfg = ScenarioConfig(
        isd_m=50.0,
        ue_density_per_km2=600.0,
        ue_distribution="nonuniform",
        region_side_m=500.0,
    )
    dep = build_deployment(cfg, np.random.default_rng(11))
    assert dep.n_ues == 150
    clustered = dep.ue_hotspot_id >= 0
    assert clustered.sum() == 75  # half (rounded down) in hotspots
    # 75 = 3 full hotspots of 20 plus one remainder hotspot of 15.
    counts = np.bincount(dep.ue_hotspot_id[clustered])
    assert sorted(counts.tolist()) == [15, 20, 20, 20]
    assert len(dep.hotspot_centers) == 4
    # Every clustered UE within its hotspot disc.
    centers = dep.hotspot_centers[dep.ue_hotspot_id[clustered]]
    r = np.sqrt(((dep.ue_xy[clustered] - centers) ** 2).sum(-1))
    assert (r <= HOTSPOT_RADIUS_M + 1e-9).all()
    # Centres pairwise separated and discs fully inside the region.
    c = dep.hotspot_centers
    dc = np.sqrt(((c[:, None] - c[None, :]) ** 2).sum(-1))
    np.fill_diagonal(dc, np.inf)
    assert dc.min() >= HOTSPOT_MIN_SEPARATION_M
    assert (c >= HOTSPOT_RADIUS_M).all() and (c <= 500.0 - HOTSPOT_RADIUS_M).all()


def test_hotspot_population_constant():
    assert UES_PER_HOTSPOT == 20


def test_drop_is_rng_driven_and_grid_is_not():
    cfg = ScenarioConfig(isd_m=100.0, ue_distribution="nonuniform")
    grid = build_hex_grid(cfg)
    a = drop_ues(cfg, grid, np.random.default_rng(0))
    b = drop_ues(cfg, grid, np.random.default_rng(0))
    c = drop_ues(cfg, grid, np.random.default_rng(1))
    assert np.array_equal(a.ue_xy, b.ue_xy)
    assert not np.array_equal(a.ue_xy, c.ue_xy)
    assert np.array_equal(a.site_xy, c.site_xy)


def test_validate_rejects_bad_configs():
    with pytest.raises(ValueError):
        ScenarioConfig(isd_m=-1.0).validate()
    with pytest.raises(ValueError):
        ScenarioConfig(ue_density_per_km2=0.0).validate()
    with pytest.raises(ValueError):
        ScenarioConfig(ue_distribution="clustered").validate()
    with pytest.raises(ValueError):
        ScenarioConfig(num_bs_antennas=3).validate()
    with pytest.raises(ValueError):
        ScenarioConfig(sleep_model=6).validate()
    with pytest.raises(ValueError):
        ScenarioConfig(edge_loss_rule="mixed").validate()
    with pytest.raises(ValueError):
        ScenarioConfig(isd_m=200.0, region_side_m=100.0).validate()


def test_validate_notes_nonstandard_values():
    notes = ScenarioConfig(isd_m=123.0, target_edge_snr_db=10.0).validate()
    assert len(notes) == 2
    assert ScenarioConfig().validate() == []


def test_effective_bandwidth_defaults_to_five_percent():
    assert ScenarioConfig(carrier_ghz=2.0).effective_bandwidth_hz == pytest.approx(100e6)
    assert ScenarioConfig(carrier_ghz=10.0).effective_bandwidth_hz == pytest.approx(500e6)
    assert ScenarioConfig(bandwidth_hz=20e6).effective_bandwidth_hz == pytest.approx(20e6)


def test_dump_deployment_csv_roundtrip(tmp_path):
    cfg = ScenarioConfig(isd_m=100.0, ue_density_per_km2=100.0)
    dep = build_deployment(cfg, np.random.default_rng(5))
    sites = tmp_path / "sites.csv"
    ues = tmp_path / "ues.csv"
    dump_deployment_csv(dep, sites, ues)
    site_rows = sites.read_text().strip().splitlines()
    ue_rows = ues.read_text().strip().splitlines()
    assert site_rows[0] == "site_id,x,y,height,guard"
    assert len(site_rows) == dep.n_sites + 1
    assert len(ue_rows) == dep.n_ues + 1
    x = float(site_rows[1].split(",")[1])
    assert x == pytest.approx(dep.site_xy[0, 0], abs=1e-3)
