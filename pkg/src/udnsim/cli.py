"""Command-line front end.

Subcommands: ``simulate`` (one configuration), ``sweep`` (cross-product
grid from a config file), ``sched-study`` (PF vs RR), ``ee-study``
(energy efficiency across densification), ``dump-deployment`` (geometry
CSVs for inspection).

Flags mirror the scenario legend (--isd, --ue-density, --ue-dist,
--idle, --sleep-model, --carrier-ghz, --bandwidth-hz, --antennas,
--target-snr-db, --runs, --seed, --out). A plain-text config file of
``key = value`` lines can supply any of them - keys are the flag names
without leading dashes - and explicit flags override the file. Sweep
axes take comma-separated value lists in the same file format.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from . import runner, scenario, scheduler
from .scenario import ScenarioConfig

_SCENARIO_KEYS = (
    "isd",
    "ue-density",
    "ue-dist",
    "idle",
    "sleep-model",
    "carrier-ghz",
    "bandwidth-hz",
    "antennas",
    "target-snr-db",
    "runs",
    "seed",
    "region-side",
)


def parse_config_file(path) -> dict[str, str]:
    """Read ``key = value`` lines; '#' starts a comment, blanks ignored."""
    out = {}
    text = Path(path).read_text()
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ValueError(f"{path}:{lineno}: expected 'key = value', got {raw!r}")
        key, value = (part.strip() for part in line.split("=", 1))
        out[key] = value
    return out


def _dist_name(value: str) -> str:
    mapping = {"uniform": "uniform", "hotspot": "nonuniform"}
    if value not in mapping:
        raise ValueError(f"ue-dist must be 'uniform' or 'hotspot', got {value!r}")
    return mapping[value]


def _idle_flag(value: str) -> bool:
    mapping = {"on": True, "off": False}
    if value not in mapping:
        raise ValueError(f"idle must be 'on' or 'off', got {value!r}")
    return mapping[value]


def _add_scenario_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--config", help="config file of 'key = value' lines")
    p.add_argument("--isd", type=float, help="inter-site distance [m]")
    p.add_argument("--ue-density", type=float, help="UE density [1/km^2]")
    p.add_argument("--ue-dist", choices=("uniform", "hotspot"), help="UE placement")
    p.add_argument("--idle", choices=("on", "off"), help="idle mode")
    p.add_argument("--sleep-model", type=int, choices=(1, 2, 3, 4, 5))
    p.add_argument("--carrier-ghz", type=float, help="carrier frequency [GHz]")
    p.add_argument("--bandwidth-hz", type=float, help="bandwidth [Hz]; default 5%% of carrier")
    p.add_argument("--antennas", type=int, choices=(1, 2, 4), help="BS antennas")
    p.add_argument("--target-snr-db", type=float, choices=(9.0, 12.0, 15.0))
    p.add_argument("--runs", type=int, help="Monte-Carlo runs")
    p.add_argument("--seed", type=int, help="master seed")
    p.add_argument("--region-side", type=float, help="region side [m]")
    p.add_argument("--out", default="out", help="output directory")


def _merged(args: argparse.Namespace, parser: argparse.ArgumentParser) -> dict:
    """Flag values on top of config-file values; file on top of defaults."""
    values = {}
    if args.config:
        try:
            file_values = parse_config_file(args.config)
        except (OSError, ValueError) as exc:
            parser.error(str(exc))
        unknown = set(file_values) - set(_SCENARIO_KEYS) - {"out"}
        if unknown:
            parser.error(f"unknown config keys: {sorted(unknown)}")
        values.update(file_values)
    for key in _SCENARIO_KEYS:
        flag_value = getattr(args, key.replace("-", "_"), None)
        if flag_value is not None:
            values[key] = flag_value
    return values


def _scenario_from(values: dict, parser: argparse.ArgumentParser) -> ScenarioConfig:
    if "isd" not in values:
        parser.error("--isd is required (flag or config file)")
    defaults = ScenarioConfig()
    try:
        cfg = ScenarioConfig(
            isd_m=float(values["isd"]),
            ue_density_per_km2=float(values.get("ue-density", defaults.ue_density_per_km2)),
            ue_distribution=_dist_name(values["ue-dist"])
            if "ue-dist" in values
            else defaults.ue_distribution,
            idle_mode=_idle_flag(values["idle"]) if "idle" in values else defaults.idle_mode,
            sleep_model=int(values.get("sleep-model", defaults.sleep_model)),
            carrier_ghz=float(values.get("carrier-ghz", defaults.carrier_ghz)),
            bandwidth_hz=float(values["bandwidth-hz"]) if "bandwidth-hz" in values else None,
            num_bs_antennas=int(values.get("antennas", defaults.num_bs_antennas)),
            target_edge_snr_db=float(values.get("target-snr-db", defaults.target_edge_snr_db)),
            region_side_m=float(values.get("region-side", defaults.region_side_m)),
            runs=int(values.get("runs", defaults.runs)),
            seed=int(values.get("seed", defaults.seed)),
        )
        cfg.validate()
    except ValueError as exc:
        parser.error(str(exc))
    return cfg


def _out_dir(args) -> Path:
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    return out


def _split_list(value: str) -> list[str]:
    return [v.strip() for v in str(value).split(",") if v.strip()]


def _cmd_simulate(args, parser) -> int:
    cfg = _scenario_from(_merged(args, parser), parser)
    summary, _ = runner.simulate(cfg)
    out = _out_dir(args)
    runner.write_summary_csv(out / "summary.csv", [(cfg, summary)])
    runner.write_sinr_cdf_csv(out / "sinr_cdf.csv", [(cfg, summary)])
    print(f"wrote {out / 'summary.csv'} and {out / 'sinr_cdf.csv'}")
    return 0


def _cmd_sweep(args, parser) -> int:
    if not args.config:
        parser.error("sweep requires --config with the axis lists")
    try:
        values = parse_config_file(args.config)
    except (OSError, ValueError) as exc:
        parser.error(str(exc))
    unknown = set(values) - set(_SCENARIO_KEYS) - {"out"}
    if unknown:
        parser.error(f"unknown config keys: {sorted(unknown)}")
    defaults = runner.SweepSpec()
    try:
        spec = runner.SweepSpec(
            isds_m=tuple(float(v) for v in _split_list(values["isd"]))
            if "isd" in values
            else defaults.isds_m,
            ue_densities_per_km2=tuple(float(v) for v in _split_list(values["ue-density"]))
            if "ue-density" in values
            else defaults.ue_densities_per_km2,
            ue_distributions=tuple(_dist_name(v) for v in _split_list(values["ue-dist"]))
            if "ue-dist" in values
            else defaults.ue_distributions,
            idle_modes=tuple(_idle_flag(v) for v in _split_list(values["idle"]))
            if "idle" in values
            else defaults.idle_modes,
            sleep_models=tuple(int(v) for v in _split_list(values["sleep-model"]))
            if "sleep-model" in values
            else defaults.sleep_models,
            carriers_ghz=tuple(float(v) for v in _split_list(values["carrier-ghz"]))
            if "carrier-ghz" in values
            else defaults.carriers_ghz,
            antenna_counts=tuple(int(v) for v in _split_list(values["antennas"]))
            if "antennas" in values
            else defaults.antenna_counts,
            target_snrs_db=tuple(float(v) for v in _split_list(values["target-snr-db"]))
            if "target-snr-db" in values
            else defaults.target_snrs_db,
            runs=int(values.get("runs", args.runs if args.runs is not None else defaults.runs)),
            seed=int(values.get("seed", args.seed if args.seed is not None else defaults.seed)),
            region_side_m=float(values.get("region-side", defaults.region_side_m)),
            bandwidth_hz=float(values["bandwidth-hz"]) if "bandwidth-hz" in values else None,
        )
    except ValueError as exc:
        parser.error(str(exc))
    results = runner.sweep(spec)
    out = _out_dir(args)
    runner.write_summary_csv(out / "summary.csv", results)
    runner.write_sinr_cdf_csv(out / "sinr_cdf.csv", results)
    print(f"wrote {len(results)} sweep rows to {out / 'summary.csv'}")
    return 0


def _cmd_sched_study(args, parser) -> int:
    defaults = scheduler.SchedulerStudyConfig()
    cfg = scheduler.SchedulerStudyConfig(
        isds_m=tuple(float(v) for v in _split_list(args.isds)) if args.isds else defaults.isds_m,
        ues_per_cell=tuple(int(v) for v in _split_list(args.ues_per_cell))
        if args.ues_per_cell
        else defaults.ues_per_cell,
        n_drops=args.drops if args.drops is not None else defaults.n_drops,
        warmup_ttis=args.warmup_ttis if args.warmup_ttis is not None else defaults.warmup_ttis,
        measure_ttis=args.measure_ttis
        if args.measure_ttis is not None
        else defaults.measure_ttis,
        seed=args.seed if args.seed is not None else defaults.seed,
    )
    rows = scheduler.run_scheduler_study(cfg)
    out = _out_dir(args)
    runner.write_sched_csv(out / "sched.csv", cfg, rows)
    print(f"wrote {len(rows)} rows to {out / 'sched.csv'}")
    return 0


def _cmd_ee_study(args, parser) -> int:
    defaults = runner.EnergyStudyConfig()
    study = runner.EnergyStudyConfig(
        isds_m=tuple(float(v) for v in _split_list(args.isds)) if args.isds else defaults.isds_m,
        runs=args.runs if args.runs is not None else defaults.runs,
        seed=args.seed if args.seed is not None else defaults.seed,
    )
    rows = runner.run_energy_study(study)
    out = _out_dir(args)
    runner.write_ee_csv(
        out / "ee.csv",
        rows,
        {
            "ee_runs": study.runs,
            "ee_seed": study.seed,
            "ee_bandwidth_hz": study.bandwidth_hz,
            "ee_ue_density_per_km2": study.ue_density_per_km2,
            "ee_ue_distribution": study.ue_distribution,
        },
    )
    print(f"wrote {len(rows)} rows to {out / 'ee.csv'}")
    return 0


def _cmd_dump_deployment(args, parser) -> int:
    cfg = _scenario_from(_merged(args, parser), parser)
    rng = runner.run_rng(cfg.seed, 0, 0)
    deployment = scenario.build_deployment(cfg, rng)
    out = _out_dir(args)
    scenario.dump_deployment_csv(deployment, out / "sites.csv", out / "ues.csv")
    print(f"wrote {out / 'sites.csv'} and {out / 'ues.csv'}")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="udnsim",
        description="System-level simulator for ultra-dense small-cell networks.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_sim = sub.add_parser("simulate", help="run one configuration")
    _add_scenario_flags(p_sim)
    p_sim.set_defaults(handler=_cmd_simulate)

    p_sweep = sub.add_parser("sweep", help="run a cross-product sweep from a config file")
    p_sweep.add_argument("--config", required=False, help="config file with axis lists")
    p_sweep.add_argument("--runs", type=int, help="runs per point (file value wins)")
    p_sweep.add_argument("--seed", type=int)
    p_sweep.add_argument("--out", default="out")
    p_sweep.set_defaults(handler=_cmd_sweep)

    p_sched = sub.add_parser("sched-study", help="PF vs RR scheduler comparison")
    p_sched.add_argument("--isds", help="comma-separated ISD list [m]")
    p_sched.add_argument("--ues-per-cell", help="comma-separated UE counts")
    p_sched.add_argument("--drops", type=int)
    p_sched.add_argument("--warmup-ttis", type=int)
    p_sched.add_argument("--measure-ttis", type=int)
    p_sched.add_argument("--seed", type=int)
    p_sched.add_argument("--out", default="out")
    p_sched.set_defaults(handler=_cmd_sched_study)

    p_ee = sub.add_parser("ee-study", help="energy efficiency across densification")
    p_ee.add_argument("--isds", help="comma-separated ISD list [m]")
    p_ee.add_argument("--runs", type=int)
    p_ee.add_argument("--seed", type=int)
    p_ee.add_argument("--out", default="out")
    p_ee.set_defaults(handler=_cmd_ee_study)

    p_dump = sub.add_parser("dump-deployment", help="write deployment geometry CSVs")
    _add_scenario_flags(p_dump)
    p_dump.set_defaults(handler=_cmd_dump_deployment)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    return args.handler(args, parser)


if __name__ == "__main__":
    sys.exit(main())
