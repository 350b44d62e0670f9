"""Command-line front end: evaluate, select, sweep, simulate, validate, and
registry management.

Exit codes: 0 success, 1 domain error (unsatisfiable requirements,
degenerate weights, saturated model), 2 usage/parse error, 3 validation
threshold exceeded.
"""

from __future__ import annotations

import argparse
import json
import os
import sys

import numpy as np

from .context import NetworkContext, context_from_dict, load_context
from .numfmt import sig6
from .cpf import SWEEP_HEADER, Weights, evaluate_all, rank_evaluations, sweep
from .errors import MacselError
from .radio import RadioProfile, load_profile
from .registry import (
    ProtocolRecord,
    Requirement,
    add_category,
    add_protocol,
    add_requirement,
    load_registry_file,
    save_registry_file,
    seed_registry,
)
from .selector import select
from .sim import (
    SimConfig,
    build_tsmp_schedule,
    compare_model_sim,
    deploy,
    run_psa,
    run_smac,
    run_tsmp,
)

REGISTRY_ENV = "MACSEL_REGISTRY"


def fmt(x: float) -> str:
    """Numeric rendering used in all table output: 6 significant digits."""
    return sig6(x)


def _weights(args) -> Weights:
    try:
        return Weights(alpha=args.alpha, beta=args.beta)
    except ValueError as exc:
        raise MacselError(f"degenerate CPF: {exc}") from exc


def _load_pair(args) -> tuple[NetworkContext, RadioProfile]:
    ctx = load_context(args.context) if args.context else NetworkContext()
    prof = load_profile(args.profile) if args.profile else RadioProfile()
    return ctx, prof


def _registry(args):
    path = getattr(args, "registry", None) or os.environ.get(REGISTRY_ENV)
    if path:
        return load_registry_file(path), path
    return seed_registry(), None


def _evaluation_lines(evals, ranked, ties) -> list[str]:
    header = "category collision overhearing idle overhead total_energy delay cpf"
    lines = [header]
    for ev in evals:
        if ev.error is not None:
            lines.append(f"{ev.category} error: {ev.error}")
            continue
        e = ev.energy
        lines.append(
            " ".join(
                [ev.category]
                + [fmt(v) for v in (e.collision, e.overhearing, e.idle_listening,
                                    e.overhead, e.total, ev.delay.seconds, ev.cpf)]
            )
        )
    if ranked:
        lines.append(f"best: {ranked[0].category}")
    for a, b in ties:
        lines.append(f"tie: {a} = {b}")
    return lines


def _selection_lines(result) -> list[str]:
    lines = ["rank category cpf"]
    ok = [ev for ev in result.evaluations if ev.error is None]
    for i, ev in enumerate(sorted(ok, key=lambda e: -e.cpf)):
        lines.append(f"{i + 1} {ev.category} {fmt(ev.cpf)}")
    for ev in result.evaluations:
        if ev.error is not None:
            lines.append(f"- {ev.category} error: {ev.error}")
    lines.append("selected category: " + result.best_category)
    lines.append("selected protocols: " + ", ".join(result.protocols))
    for w in result.warnings:
        lines.append(f"warning: {w}")
    return lines


def cmd_evaluate(args) -> int:
    ctx, prof = _load_pair(args)
    w = _weights(args)
    evals = evaluate_all(ctx, prof, w)
    ranked, ties = rank_evaluations(evals)
    if args.json:
        doc = {
            "evaluations": [
                {
                    "category": ev.category,
                    "error": ev.error,
                    "energy": None if ev.energy is None else {
                        "collision": ev.energy.collision,
                        "overhearing": ev.energy.overhearing,
                        "idle_listening": ev.energy.idle_listening,
                        "overhead": ev.energy.overhead,
                        "total": ev.energy.total,
                    },
                    "delay": None if ev.delay is None else ev.delay.seconds,
                    "cpf": ev.cpf,
                }
                for ev in evals
            ],
            "best_category": ranked[0].category if ranked else None,
            "ties": [list(t) for t in ties],
        }
        print(json.dumps(doc, indent=2))
    else:
        print("\n".join(_evaluation_lines(evals, ranked, ties)))
    return 0


def cmd_select(args) -> int:
    ctx, prof = _load_pair(args)
    w = _weights(args)
    reg, _ = _registry(args)
    req = set(filter(None, (args.require or "").split(",")))
    result = select(reg, ctx, prof, req, w)
    if args.json:
        doc = {
            "feasible_categories": list(result.feasible_categories),
            "best_category": result.best_category,
            "protocols": list(result.protocols),
            "cpf": {
                ev.category: ev.cpf for ev in result.evaluations if ev.error is None
            },
            "warnings": list(result.warnings),
        }
        print(json.dumps(doc, indent=2))
    else:
        print("\n".join(_selection_lines(result)))
    return 0


def cmd_sweep(args) -> int:
    ctx, prof = _load_pair(args)
    w = _weights(args)
    if args.steps < 2:
        raise MacselError("sweep needs steps >= 2")
    if not args.from_value < args.to_value:
        raise MacselError("sweep needs from < to")
    values = list(np.linspace(args.from_value, args.to_value, args.steps))
    rows = sweep(ctx, prof, w, args.axis, values)
    out_lines = [SWEEP_HEADER] + [r.as_csv() for r in rows]
    text = "\n".join(out_lines) + "\n"
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return 0


def _sim_config(args) -> SimConfig:
    with open(args.config) as fh:
        doc = json.load(fh)
    ctx = context_from_dict(doc.get("context", {}))
    prof = RadioProfile(**doc.get("profile", {}))
    sim = doc.get("sim", {})
    return SimConfig(
        context=ctx,
        profile=prof,
        area=tuple(sim.get("area", (100.0, 100.0))),
        seed=int(sim.get("seed", 1)),
        sim_duration=float(sim.get("sim_duration", 20.0)),
        confidence=float(sim.get("confidence", 0.95)),
        rel_error=float(sim.get("rel_error", 0.05)),
        max_reps=int(sim.get("max_reps", 12)),
        wrap_edges=bool(sim.get("wrap_edges", True)),
    )


def _stats_doc(stats) -> dict:
    return {
        "energy_per_second": stats.energy_per_second,
        "energy_hw": stats.energy_hw,
        "delay": stats.delay,
        "delay_hw": stats.delay_hw,
        "collision": stats.collision,
        "overhearing": stats.overhearing,
        "idle_listening": stats.idle_listening,
        "overhead": stats.overhead,
        "replications": stats.replications,
        "packets_generated": stats.packets_generated,
        "packets_delivered": stats.packets_delivered,
        "packets_dropped": stats.packets_dropped,
        "packets_in_flight": stats.packets_in_flight,
        "converged": stats.converged,
        "rng": stats.rng,
        "seed": stats.seed,
    }


def cmd_simulate(args) -> int:
    cfg = _sim_config(args)
    if args.protocol == "psa":
        stats = run_psa(cfg)
    elif args.protocol == "smac":
        stats = run_smac(cfg)
    else:
        positions = deploy(cfg)
        sched = build_tsmp_schedule(
            positions, cfg.context.tx_range, args.rows, args.cols,
            seed=cfg.seed, area=cfg.area, wrap=cfg.wrap_edges,
        )
        stats = run_tsmp(cfg, sched)
    doc = _stats_doc(stats)
    text = json.dumps(doc, indent=2)
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(text + "\n")
    print(text)
    if not stats.converged:
        print("warning: stopping rule not met within max_reps", file=sys.stderr)
    return 0


def cmd_validate(args) -> int:
    cfg = _sim_config(args)
    category = {"psa": "PSP", "smac": "CAP", "tsmp": "ScP"}[args.protocol]
    rates = tuple(float(x) for x in args.points.split(","))
    report = compare_model_sim(cfg, category, pkt_rates=rates,
                               rows=args.rows, cols=args.cols)
    header = ("axis_value,model_energy,sim_energy,sim_energy_hw,"
              "energy_divergence,model_delay,sim_delay,sim_delay_hw,"
              "delay_divergence,converged")
    lines = [header]
    for p in report.points:
        lines.append(",".join([
            fmt(p.axis_value), fmt(p.model_energy), fmt(p.sim_energy),
            fmt(p.sim_energy_hw), fmt(p.energy_divergence), fmt(p.model_delay),
            fmt(p.sim_delay), fmt(p.sim_delay_hw), fmt(p.delay_divergence),
            str(p.converged),
        ]))
    text = "\n".join(lines) + "\n"
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(text)
    sys.stdout.write(text)
    worst = report.max_energy_divergence
    print(f"max energy divergence: {fmt(worst)}")
    if worst > args.tolerance:
        print(
            f"validation failed: {fmt(worst)} > tolerance {fmt(args.tolerance)}",
            file=sys.stderr,
        )
        return 3
    return 0


def cmd_registry(args) -> int:
    reg, path = _registry(args)
    if args.action == "list":
        doc = {
            "categories": [c.id for c in reg.categories],
            "requirements": [r.id for r in reg.requirements],
            "protocols": [
                {"name": p.name, "category": p.category,
                 "satisfies": sorted(p.satisfies)}
                for p in reg.protocols
            ],
        }
        print(json.dumps(doc, indent=2))
        return 0
    if path is None:
        raise MacselError(
            "registry mutations need a file: pass --registry or set "
            f"{REGISTRY_ENV}"
        )
    if args.action == "add-protocol":
        if not args.name or not args.category:
            raise MacselError("add-protocol needs --name and --category")
        rec = ProtocolRecord(
            name=args.name,
            category=args.category,
            satisfies=frozenset(filter(None, (args.satisfies or "").split(","))),
            reviewed_against=frozenset(
                filter(None, (args.reviewed or args.satisfies or "").split(","))
            ),
        )
        reg = add_protocol(reg, rec)
    elif args.action == "add-category":
        if not args.name:
            raise MacselError("add-category needs --name")
        reg = add_category(reg, args.name, args.representative or "", args.note or "")
    elif args.action == "add-requirement":
        if not args.name:
            raise MacselError("add-requirement needs --name")
        reg, worklist = add_requirement(
            reg, Requirement(args.name, args.description or "")
        )
        print("review worklist (most combination coverage first):")
        for p in worklist:
            print(f"  {p.name} [{p.category}] satisfies: {', '.join(sorted(p.satisfies)) or '-'}")
    save_registry_file(reg, path)
    print(f"registry updated: {path}")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="macsel",
        description="Rank WSN MAC protocol categories by combined energy/delay "
                    "performance and pick satisfying protocols.",
    )
    sub = parser.add_subparsers(dest="verb", required=True)

    def common(p):
        p.add_argument("--context", help="network context JSON file")
        p.add_argument("--profile", help="radio profile JSON file")
        p.add_argument("--alpha", type=float, default=10.0 / 11.0)
        p.add_argument("--beta", type=float, default=1.0 / 11.0)
        p.add_argument("--json", action="store_true", help="full-precision JSON output")

    p = sub.add_parser("evaluate", help="per-category energy, delay and CPF")
    common(p)
    p.set_defaults(fn=cmd_evaluate)

    p = sub.add_parser("select", help="filter by requirements and rank by CPF")
    common(p)
    p.add_argument("--registry", help="registry JSON file")
    p.add_argument("--require", help="comma-separated requirement ids")
    p.set_defaults(fn=cmd_select)

    p = sub.add_parser("sweep", help="CSV sweep over one context axis")
    common(p)
    p.add_argument("--axis", required=True,
                   choices=["pkt_rate", "n_nodes", "network_radius"])
    p.add_argument("--from", dest="from_value", type=float, required=True)
    p.add_argument("--to", dest="to_value", type=float, required=True)
    p.add_argument("--steps", type=int, required=True)
    p.add_argument("--out", help="output CSV path (default stdout)")
    p.set_defaults(fn=cmd_sweep)

    p = sub.add_parser("simulate", help="run the discrete-event simulator")
    p.add_argument("--protocol", required=True, choices=["psa", "smac", "tsmp"])
    p.add_argument("--config", required=True, help="simulation JSON config")
    p.add_argument("--rows", type=int, default=3, help="superframe frequencies")
    p.add_argument("--cols", type=int, default=30, help="superframe slots")
    p.add_argument("--out", help="write the JSON report here too")
    p.set_defaults(fn=cmd_simulate)

    p = sub.add_parser("validate", help="model-vs-simulation divergence")
    p.add_argument("--protocol", required=True, choices=["psa", "smac", "tsmp"])
    p.add_argument("--config", required=True)
    p.add_argument("--tolerance", type=float, default=0.10)
    p.add_argument("--points", default="1,5,10,15,20",
                   help="comma-separated packet rates")
    p.add_argument("--rows", type=int, default=3)
    p.add_argument("--cols", type=int, default=30)
    p.add_argument("--out", help="write the CSV report here too")
    p.set_defaults(fn=cmd_validate)

    p = sub.add_parser("registry", help="inspect or extend the protocol registry")
    p.add_argument("action",
                   choices=["list", "add-protocol", "add-category", "add-requirement"])
    p.add_argument("--registry", help="registry JSON file")
    p.add_argument("--name")
    p.add_argument("--category")
    p.add_argument("--satisfies")
    p.add_argument("--reviewed")
    p.add_argument("--representative")
    p.add_argument("--note")
    p.add_argument("--description")
    p.set_defaults(fn=cmd_registry)

    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.fn(args)
    except MacselError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except FileNotFoundError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
