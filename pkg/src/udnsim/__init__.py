"""System-level Monte-Carlo simulator for ultra-dense outdoor small-cell networks.

The package models the full downlink chain of a hexagonal small-cell
deployment: site lattice and UE drops, urban-micro propagation with
correlated shadowing, elevation antenna patterns with codebook
beamforming, pilot-based association with idle mode, wideband SINR and
Shannon-bound throughput, resource-block scheduling (round robin and
proportional fair) over Rician fast fading, and base-station power
consumption for network energy efficiency.
"""

from .scenario import Deployment, ScenarioConfig, build_deployment, build_hex_grid, drop_ues
from .propagation import PathGainModel, ShadowField, los_probability, path_gain_db
from .antenna import DipoleArrayConfig, bs_antenna_gain_db, codebook, select_beam
from .link import (
    AssociationState,
    LinkState,
    associate,
    build_links,
    CALIBRATION_MARGIN_DB,
    calibrate_tx_power_dbm,
    data_sinr_db,
    resolve_beams,
    shannon_capacity_bps,
    ue_throughput_bps,
)
from .fastfading import k_factor, rician_channel
from .scheduler import SchedulerStudyConfig, run_scheduler_study
from .energy import POWER_TABLE, PowerRow, network_energy_efficiency_bps_per_w, power_row
from .runner import (
    EnergyStudyConfig,
    RunMetrics,
    Summary,
    SweepSpec,
    aggregate,
    execute_run,
    run_energy_study,
    simulate,
    sweep,
)

__version__ = "0.1.0"

__all__ = [
    "Deployment",
    "ScenarioConfig",
    "build_deployment",
    "build_hex_grid",
    "drop_ues",
    "PathGainModel",
    "ShadowField",
    "los_probability",
    "path_gain_db",
    "DipoleArrayConfig",
    "bs_antenna_gain_db",
    "codebook",
    "select_beam",
    "AssociationState",
    "LinkState",
    "associate",
    "build_links",
    "CALIBRATION_MARGIN_DB",
    "calibrate_tx_power_dbm",
    "data_sinr_db",
    "resolve_beams",
    "shannon_capacity_bps",
    "ue_throughput_bps",
    "k_factor",
    "rician_channel",
    "SchedulerStudyConfig",
    "run_scheduler_study",
    "POWER_TABLE",
    "PowerRow",
    "network_energy_efficiency_bps_per_w",
    "power_row",
    "EnergyStudyConfig",
    "RunMetrics",
    "Summary",
    "SweepSpec",
    "aggregate",
    "execute_run",
    "run_energy_study",
    "simulate",
    "sweep",
]
