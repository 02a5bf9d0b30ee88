"""Command-line front end: simulate, sweep, verify.

Exit codes: 0 success, 1 verification mismatch, 2 usage/config error,
3 simulation-domain error.
"""

from __future__ import annotations

import argparse
import sys
from datetime import datetime, timezone

from . import __version__
from .efficiency import EfficiencyParams, sweep as efficiency_sweep
from .noise import POLARIZATION, ensemble_from_specs, mix_general, mix_two, product_ensemble
from .optics import GATE_TABLE, GateTable
from .oracle import ORACLE_MAX_PHOTONS, densify, oracle_run
from .protocol import (
    AcceptanceRule,
    ProtocolResult,
    closed_form_fidelity_general,
    closed_form_fidelity_pair,
    closed_form_success_general,
    closed_form_success_pair,
    infer_flip_plan,
    merged_fidelity,
    run_bitflip,
    run_general,
    run_phaseflip,
)
from .records import (
    ConfigError,
    ProtocolConfig,
    RunRecord,
    load_config,
    parse_target,
    rows_to_csv,
    rows_to_json,
)
from .states import SPATIAL, Ensemble, make_ghz_pol, make_ghz_spatial

EXIT_OK = 0
EXIT_VERIFY_FAILED = 1
EXIT_USAGE = 2
EXIT_DOMAIN = 3

VERIFY_TOL = 1e-10


def build_input(config: ProtocolConfig) -> Ensemble:
    """Joint input mixture described by a config's noise lists."""
    pol = ensemble_from_specs(config.m, POLARIZATION, config.pol_noise)
    spatial = ensemble_from_specs(config.m, SPATIAL, config.spatial_noise)
    return product_ensemble(pol, spatial)


def _weight_vector(config: ProtocolConfig, which: str) -> list[float]:
    specs = config.pol_noise if which == "pol" else config.spatial_noise
    vec = [0.0] * 2 ** (config.m - 1)
    for s in specs:
        vec[s.target_index] += s.weight
    vec[0] = 1.0 - sum(s.weight for s in specs)
    return vec


def execute(config: ProtocolConfig) -> tuple[ProtocolResult, dict, dict]:
    """Run the configured protocol; returns (result, closed_form, deviation)."""
    ensemble = build_input(config)
    index, sign = parse_target(config.target)
    target = make_ghz_pol(config.m, index, sign)
    f_pol = 1.0 - sum(s.weight for s in config.pol_noise)
    f_spatial = 1.0 - sum(s.weight for s in config.spatial_noise)

    if config.mode == "bitflip":
        result = run_bitflip(ensemble, target=target)
        closed = {
            "fidelity": closed_form_fidelity_pair(f_pol, f_spatial),
            "success_probability": closed_form_success_pair(f_pol, f_spatial),
        }
    elif config.mode == "phaseflip":
        result = run_phaseflip(ensemble, target=target)
        closed = {
            "fidelity": closed_form_fidelity_pair(f_pol, f_spatial),
            "success_probability": closed_form_success_pair(f_pol, f_spatial),
        }
    elif config.mode == "general":
        result = run_general(ensemble, corrections={}, acceptance=AcceptanceRule("bitflip"), target=target)
        pol_vec = _weight_vector(config, "pol")
        spatial_vec = _weight_vector(config, "spatial")
        components = closed_form_fidelity_general(pol_vec, spatial_vec)
        closed = {
            "fidelity": components[index] if sign == 1 else 0.0,
            "success_probability": closed_form_success_general(pol_vec, spatial_vec),
            "fidelity_components": list(components),
        }
    else:  # deterministic-demo
        result = run_general(ensemble, target=target)
        closed = {"fidelity": 1.0, "success_probability": 1.0}

    reference = make_ghz_pol(config.m, 0, +1)
    deviation = {
        "fidelity": abs(merged_fidelity(result, reference) - closed["fidelity"]),
        "success_probability": abs(result.success_probability - closed["success_probability"]),
    }
    return result, closed, deviation


def pattern_name(pattern: tuple[int, ...]) -> str:
    return "".join("ks"[b] for b in pattern)


def result_dict(result: ProtocolResult) -> dict:
    return {
        "success_probability": result.success_probability,
        "rejected_probability": result.rejected_probability,
        "output_fidelity": result.output_fidelity,
        "accepted_patterns": [
            {
                "pattern": pattern_name(pattern),
                "probability": outcome.probability,
                "fidelity": outcome.fidelity,
            }
            for pattern, outcome in sorted(result.accepted.items())
        ],
    }


def _cmd_simulate(args) -> int:
    try:
        config = load_config(args.config)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    try:
        result, closed, deviation = execute(config)
    except ValueError as exc:
        print(f"simulation error: {exc}", file=sys.stderr)
        return EXIT_DOMAIN
    timestamp = None if args.reproducible else datetime.now(timezone.utc).isoformat(timespec="seconds")
    record = RunRecord(
        config=config.to_dict(),
        result=result_dict(result),
        closed_form=closed,
        deviation=deviation,
        tool_version=__version__,
        timestamp=timestamp,
    )
    payload = record.to_csv() if args.format == "csv" else record.to_json()
    _emit(payload, args.out)
    return EXIT_OK


def _emit(payload: str, out: str | None) -> None:
    if out:
        with open(out, "w", encoding="utf-8", newline="") as fh:
            fh.write(payload)
    else:
        sys.stdout.write(payload)


def _fidelity_grid(spec: str) -> list[float]:
    try:
        start, stop, step = (float(x) for x in spec.split(":"))
    except ValueError as exc:
        raise ConfigError(f"grid must look like 0.1:0.9:0.1, got {spec!r}") from exc
    if step <= 0 or stop < start:
        raise ConfigError(f"empty or descending grid {spec!r}")
    values = []
    v = start
    while v <= stop + 1e-9:
        values.append(round(v, 12))
        v += step
    return values


def _cmd_sweep(args) -> int:
    try:
        if args.axis in ("L", "N"):
            params = EfficiencyParams(
                eta_d=args.eta_d, eta_c=args.eta_c, L=args.L, L0=args.L0, N=args.N, p1=args.p1
            )
            rows = efficiency_sweep(params, args.axis, args.start, args.stop, args.step)
            header = ["L_km" if args.axis == "L" else "N", "R"]
            table = [[x, r] for x, r in rows]
        else:
            values = _fidelity_grid(args.grid)
            header = [
                "F1",
                "F2",
                "fidelity_sim",
                "fidelity_closed",
                "success_sim",
                "success_closed",
                "deviation",
            ]
            table = []
            for f1 in values:
                for f2 in values:
                    pol = mix_two(make_ghz_pol(args.m, 0), make_ghz_pol(args.m, 1), f1)
                    spatial = mix_two(make_ghz_spatial(args.m, 0), make_ghz_spatial(args.m, 1), f2)
                    res = run_bitflip(product_ensemble(pol, spatial))
                    fc = closed_form_fidelity_pair(f1, f2)
                    sc = closed_form_success_pair(f1, f2)
                    dev = max(abs(res.output_fidelity - fc), abs(res.success_probability - sc))
                    table.append([f1, f2, res.output_fidelity, fc, res.success_probability, sc, dev])
    except (ConfigError, ValueError) as exc:
        print(f"sweep error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    payload = rows_to_json(header, table) if args.format == "json" else rows_to_csv(header, table)
    _emit(payload, args.out)
    return EXIT_OK


def _verify_grid(m: int) -> list[float]:
    if m <= 3:
        return [round(0.1 * k, 12) for k in range(1, 10)]
    if m == 4:
        return [0.1, 0.3, 0.5, 0.7, 0.9]
    return [0.3, 0.7]


def _bitflip_pair(m: int, f1: float, f2: float) -> Ensemble:
    pol = mix_two(make_ghz_pol(m, 0), make_ghz_pol(m, 1), f1)
    spatial = mix_two(make_ghz_spatial(m, 0), make_ghz_spatial(m, 1), f2)
    return product_ensemble(pol, spatial)


def _phaseflip_pair(m: int, f3: float, f4: float) -> Ensemble:
    pol = mix_two(make_ghz_pol(m, 0, +1), make_ghz_pol(m, 0, -1), f3)
    spatial = mix_two(make_ghz_spatial(m, 0, +1), make_ghz_spatial(m, 0, -1), f4)
    return product_ensemble(pol, spatial)


def _general_pair(m: int, f1: float, f2: float) -> Ensemble:
    count = min(4, 2 ** (m - 1))
    rest1 = (1.0 - f1) / (count - 1)
    rest2 = (1.0 - f2) / (count - 1)
    pol = mix_general(
        [make_ghz_pol(m, i) for i in range(count)], [f1] + [rest1] * (count - 1)
    )
    spatial = mix_general(
        [make_ghz_spatial(m, i) for i in range(count)], [f2] + [rest2] * (count - 1)
    )
    return product_ensemble(pol, spatial)


def _deterministic_pair(m: int, f1: float, f2: float) -> Ensemble:
    pol = mix_two(make_ghz_pol(m, 0), make_ghz_pol(m, 1), f1)
    spatial = mix_two(make_ghz_spatial(m, 0), make_ghz_spatial(m, 2), f2)
    return product_ensemble(pol, spatial)


def _cmd_verify(args) -> int:
    m = args.m
    table: GateTable | None = None
    if args.inject_gate_fault:
        # swap the outputs of the two rail-1 rows: still a bijection, wrong physics
        table = dict(GATE_TABLE)
        table[(0, 0)], table[(1, 0)] = table[(1, 0)], table[(0, 0)]
        print("note: gate fault injected into the engine routing table", file=sys.stderr)

    grid = _verify_grid(m)
    target = make_ghz_pol(m, 0, +1)
    failed = False
    for mode in ("bitflip", "phaseflip", "general", "deterministic"):
        if mode == "deterministic" and m == 2:
            print(f"{mode:>13}: skipped (needs distinct error indices, m >= 3)")
            continue
        worst = 0.0
        worst_at = None
        for f1 in grid:
            for f2 in grid:
                if mode == "bitflip":
                    ens = _bitflip_pair(m, f1, f2)
                    engine = run_bitflip(ens, target=target, gate_table=table)
                    dense = oracle_run(densify(ens), m, AcceptanceRule("bitflip"), target=target)
                elif mode == "phaseflip":
                    ens = _phaseflip_pair(m, f1, f2)
                    engine = run_phaseflip(ens, target=target, gate_table=table)
                    dense = oracle_run(densify(ens), m, AcceptanceRule("phaseflip"), target=target)
                elif mode == "general":
                    ens = _general_pair(m, f1, f2)
                    engine = run_general(
                        ens, corrections={}, acceptance=AcceptanceRule("bitflip"),
                        target=target, gate_table=table,
                    )
                    dense = oracle_run(densify(ens), m, AcceptanceRule("bitflip"), corrections={}, target=target)
                else:
                    ens = _deterministic_pair(m, f1, f2)
                    plan = infer_flip_plan(ens)
                    engine = run_general(ens, corrections=plan, target=target, gate_table=table)
                    dense = oracle_run(densify(ens), m, AcceptanceRule("general"), corrections=plan, target=target)
                dev = max(
                    abs(engine.output_fidelity - dense.output_fidelity),
                    abs(engine.success_probability - dense.success_probability),
                )
                if dev > worst:
                    worst, worst_at = dev, (f1, f2)
        status = "ok" if worst < VERIFY_TOL else "MISMATCH"
        if worst >= VERIFY_TOL:
            failed = True
            print(f"{mode:>13}: {status}  worst deviation {worst:.3e} at F=({worst_at[0]}, {worst_at[1]}), m={m}")
        else:
            print(f"{mode:>13}: {status}  worst deviation {worst:.3e}")
    print(f"verify m={m}: {'FAILED' if failed else 'passed'} (tolerance {VERIFY_TOL:g})")
    return EXIT_VERIFY_FAILED if failed else EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="ghzpurify",
        description="Exact simulator for single-copy GHZ purification with hyperentangled inputs",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    sim = sub.add_parser("simulate", help="run a configured protocol and emit a run record")
    sim.add_argument("config", help="path to a JSON config file")
    sim.add_argument("--out", help="output path (default: stdout)")
    sim.add_argument("--format", choices=("json", "csv"), default="json")
    sim.add_argument(
        "--reproducible", action="store_true", help="omit the timestamp for byte-identical output"
    )
    sim.set_defaults(func=_cmd_simulate)

    swp = sub.add_parser("sweep", help="tabulate efficiency ratios or fidelity grids")
    swp.add_argument("--axis", choices=("L", "N", "F"), required=True)
    swp.add_argument("--from", dest="start", type=float, default=20.0, help="axis start (L/N)")
    swp.add_argument("--to", dest="stop", type=float, default=100.0, help="axis end (L/N)")
    swp.add_argument("--step", type=float, default=1.0)
    swp.add_argument("--N", type=int, default=3, help="photon count (fixed for the L axis)")
    swp.add_argument("--L", type=float, default=25.0, help="distance in km (fixed for the N axis)")
    swp.add_argument("--L0", type=float, default=25.0, help="attenuation length, km")
    swp.add_argument("--eta-d", dest="eta_d", type=float, default=0.9)
    swp.add_argument("--eta-c", dest="eta_c", type=float, default=0.95)
    swp.add_argument("--p1", type=float, default=1.0)
    swp.add_argument("--grid", default="0.1:0.9:0.1", help="F axis grid start:stop:step")
    swp.add_argument("--m", type=int, default=3, help="photon count for the F axis")
    swp.add_argument("--out")
    swp.add_argument("--format", choices=("csv", "json"), default="csv")
    swp.set_defaults(func=_cmd_sweep)

    ver = sub.add_parser("verify", help="cross-check the engine against the dense oracle")
    ver.add_argument("--m", type=int, choices=range(2, ORACLE_MAX_PHOTONS + 1), required=True)
    ver.add_argument(
        "--inject-gate-fault",
        action="store_true",
        help="corrupt one routing-table row first (self-test: verification must fail)",
    )
    ver.set_defaults(func=_cmd_verify)
    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
