"""Command-line interface: ``rumorcontain {graph,simulate,optimize,sweep,experiment}``.

Exit status is 0 on success, 2 for usage or configuration errors and 3 when
the integrator fails.
"""

from __future__ import annotations

import argparse
import json
import logging
import math
import sys
from pathlib import Path

from rumorcontain import __version__
from rumorcontain.config import load_config
from rumorcontain.dynamics import URTUParams, default_dt, integrate, write_trajectory_csv
from rumorcontain.errors import ConfigError, DomainError, IntegrationError, ParseError
from rumorcontain.experiments import (
    SWEEP_PARAMETERS,
    THREADS_ENV,
    RowFailure,
    SweepSpec,
    experiment_instances,
    experiment_sweeps,
    run_experiment_table,
    run_sweep,
    sweep_manifest,
    write_manifest,
    write_sweep_csv,
)
from rumorcontain.graphs import (
    barabasi_albert,
    load_graph,
    named_small_graph,
    save_graph,
    watts_strogatz,
)
from rumorcontain.objective import Strategy, gamma2_of
from rumorcontain.optimizer import solve_rc

log = logging.getLogger("rumorcontain")

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_NUMERIC = 3


class UsageError(Exception):
    pass


def parse_values(text):
    """``START:STOP:STEP`` (STOP included within 1e-12) or a comma-separated list."""
    if ":" in text:
        parts = text.split(":")
        if len(parts) != 3:
            raise UsageError(f"expected START:STOP:STEP, got {text!r}")
        try:
            start, stop, step = (float(p) for p in parts)
        except ValueError:
            raise UsageError(f"non-numeric value range {text!r}") from None
        if not (step > 0 and math.isfinite(step)) or stop < start:
            raise UsageError(f"value range needs STEP > 0 and STOP >= START, got {text!r}")
        count = math.floor((stop - start) / step)
        if start + (count + 1) * step <= stop + 1e-12 * max(1.0, abs(stop)):
            count += 1
        return [round(start + k * step, 12) for k in range(count + 1)]
    try:
        return [float(v) for v in text.split(",") if v.strip()]
    except ValueError:
        raise UsageError(f"non-numeric value list {text!r}") from None


def _meta(config=None, **extra):
    doc = {"tool": "rumorcontain", "version": __version__}
    if config is not None:
        doc["config"] = config.to_json()
    doc.update(extra)
    return doc


def _dump(doc, path):
    text = json.dumps(doc, indent=1, sort_keys=True) + "\n"
    if path is None or path == "-":
        sys.stdout.write(text)
    else:
        Path(path).write_text(text)


def cmd_graph(args):
    if args.graph_command == "gen":
        if args.model == "named":
            if args.index is None:
                raise UsageError("--model named needs --index")
            graph = named_small_graph(args.index)
            params = {"index": args.index}
        elif args.model == "ws":
            if args.n is None:
                raise UsageError("--model ws needs --n")
            graph = watts_strogatz(args.n, args.k, args.p, args.seed)
            params = {"n": args.n, "k": args.k, "p": args.p, "seed": args.seed}
        else:
            if args.n is None:
                raise UsageError("--model ba needs --n")
            graph = barabasi_albert(args.n, args.m, args.seed)
            params = {"n": args.n, "m": args.m, "seed": args.seed}
        comments = [f"rumorcontain {__version__} graph gen --model {args.model} "
                    + " ".join(f"--{k} {v}" for k, v in params.items()), graph.label]
    else:
        graph = load_graph(args.input, symmetric=args.symmetric)
        comments = [f"rumorcontain {__version__} graph convert from {args.input}", graph.label]
    save_graph(graph, args.out, comments)
    log.info("wrote %s (%d nodes, %d arcs)", args.out, graph.n, graph.num_arcs)
    return EXIT_OK


def cmd_simulate(args):
    config = load_config(args.config)
    instance = config.instance()
    gamma1 = args.gamma1
    gamma2 = args.gamma2 if args.gamma2 is not None else gamma2_of(instance, gamma1)
    strategy = Strategy(gamma1, gamma2)
    if not args.free_strategy and not instance.on_budget_line(strategy):
        raise UsageError(
            f"strategy ({gamma1}, {gamma2}) violates c1*gamma1 + c2*gamma2 = {instance.budget}; "
            "pass --free-strategy to simulate it anyway")
    dt = args.dt or config.dt or default_dt(instance.horizon)
    params = URTUParams(instance.beta1, instance.beta2, gamma1, gamma2, instance.delta)
    traj = integrate(instance.init, params, instance.gR, instance.gT, instance.horizon, dt)
    write_trajectory_csv(traj, args.out)
    manifest = _meta(config, gamma1=gamma1, gamma2=gamma2, dt=dt,
                     free_strategy=bool(args.free_strategy),
                     eU=gamma1 * float(traj.accU[-1]), eR=gamma2 * float(traj.accR[-1]))
    _dump(manifest, args.manifest or f"{args.out}.manifest.json")
    return EXIT_OK


def cmd_optimize(args):
    config = load_config(args.config)
    instance = config.instance()
    dt = args.dt or config.dt
    result = solve_rc(instance, args.grid_points or config.grid_points,
                      args.refine_tol or config.refine_tol, dt)
    doc = result.to_json(profile=args.profile)
    doc["meta"] = _meta(config)
    _dump(doc, args.out)
    return EXIT_OK


def cmd_sweep(args):
    if args.param not in SWEEP_PARAMETERS:
        raise UsageError(
            f"unknown parameter {args.param!r}; valid names: {', '.join(SWEEP_PARAMETERS)}")
    config = load_config(args.config)
    base = config.instance()
    try:
        spec = SweepSpec(base, args.param, parse_values(args.values),
                         label=Path(args.out).stem)
    except DomainError as exc:
        raise UsageError(str(exc)) from exc
    dt = args.dt or config.dt
    result = run_sweep(spec, config.grid_points, config.refine_tol, dt, args.threads)
    write_sweep_csv(result, args.out)
    manifest = sweep_manifest(spec, result, config.grid_points, config.refine_tol, dt,
                              seed=config.seed, config=config.to_json())
    write_manifest(manifest, args.manifest or f"{args.out}.manifest.json")
    failed = [r for r in result.rows if r.error]
    for r in failed:
        print(f"error: {args.param}={r.value:g}: {r.error}", file=sys.stderr)
    if any(r.error.startswith("IntegrationError") for r in failed):
        return EXIT_NUMERIC
    return EXIT_USAGE if failed else EXIT_OK


def cmd_experiment(args):
    """Write the data behind one published experiment into ``--out``."""
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    number = args.number
    if number in (1, 2):
        instances = experiment_instances(number, seed=args.seed)
        results = run_experiment_table(instances, threads=args.threads)
        rows = []
        for k, (inst, res) in enumerate(zip(instances, results), start=1):
            if isinstance(res, RowFailure):
                rows.append({"model": k, "error": res.error})
                continue
            row = res.to_json(profile=args.profile)
            row["model"] = k
            row["rumor_network"] = inst.gR.label
            row["truth_network"] = inst.gT.label
            rows.append(row)
        _dump({"experiment": number, "results": rows, "meta": _meta(seed=args.seed)},
              out / f"experiment{number}.json")
    else:
        for spec in experiment_sweeps(number, seed=args.seed):
            result = run_sweep(spec, threads=args.threads)
            write_sweep_csv(result, out / f"{spec.label}.csv")
            manifest = sweep_manifest(spec, result, None, None, None, seed=args.seed)
            write_manifest(manifest, out / f"{spec.label}.csv.manifest.json")
    return EXIT_OK


def build_parser():
    parser = argparse.ArgumentParser(
        prog="rumorcontain",
        description="Rumor/truth spreading simulation and budget-constrained strategy optimisation.")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    parser.add_argument("-v", "--verbose", action="store_true")
    parser.add_argument("--threads", type=int, default=None,
                        help=f"worker threads for sweeps (default: ${THREADS_ENV} or CPU count)")
    sub = parser.add_subparsers(dest="command", required=True)

    graph = sub.add_parser("graph", help="generate or convert networks")
    gsub = graph.add_subparsers(dest="graph_command", required=True)
    gen = gsub.add_parser("gen", help="generate a network")
    gen.add_argument("--model", choices=["named", "ws", "ba"], required=True)
    gen.add_argument("--index", type=int, help="catalog index 1..9 (named)")
    gen.add_argument("--n", type=int, help="node count (ws, ba)")
    gen.add_argument("--k", type=int, default=4, help="lattice degree (ws)")
    gen.add_argument("--p", type=float, default=0.1, help="rewiring probability (ws)")
    gen.add_argument("--m", type=int, default=2, help="links per new node (ba)")
    gen.add_argument("--seed", type=int, default=1)
    gen.add_argument("--out", required=True, help="output path; .json selects JSON")
    conv = gsub.add_parser("convert", help="convert between edge-list and JSON")
    conv.add_argument("--in", dest="input", required=True)
    conv.add_argument("--out", required=True)
    conv.add_argument("--symmetric", action="store_true", help="add the reverse of every arc")
    graph.set_defaults(func=cmd_graph)

    sim = sub.add_parser("simulate", help="integrate one strategy and write the trajectory CSV")
    sim.add_argument("--config", required=True)
    sim.add_argument("--gamma1", type=float, required=True)
    sim.add_argument("--gamma2", type=float, help="default: spend the rest of the budget")
    sim.add_argument("--dt", type=float)
    sim.add_argument("--free-strategy", action="store_true",
                     help="allow strategies off the budget line")
    sim.add_argument("--out", required=True)
    sim.add_argument("--manifest", help="default: OUT.manifest.json")
    sim.set_defaults(func=cmd_simulate)

    opt = sub.add_parser("optimize", help="find the most effective strategy")
    opt.add_argument("--config", required=True)
    opt.add_argument("--out", default="-")
    opt.add_argument("--profile", action="store_true", help="include the grid profile")
    opt.add_argument("--dt", type=float)
    opt.add_argument("--grid-points", type=int)
    opt.add_argument("--refine-tol", type=float)
    opt.set_defaults(func=cmd_optimize)

    sw = sub.add_parser("sweep", help="solve over a range of one parameter")
    sw.add_argument("--config", required=True)
    sw.add_argument("--param", required=True, help=", ".join(SWEEP_PARAMETERS))
    sw.add_argument("--values", required=True, help="START:STOP:STEP or v1,v2,...")
    sw.add_argument("--dt", type=float)
    sw.add_argument("--out", required=True)
    sw.add_argument("--manifest", help="default: OUT.manifest.json")
    sw.set_defaults(func=cmd_sweep)

    exp = sub.add_parser("experiment", help="reproduce a published experiment (1..9)")
    exp.add_argument("--number", type=int, choices=range(1, 10), required=True)
    exp.add_argument("--seed", type=int, default=1, help="seed for the 50-node networks")
    exp.add_argument("--profile", action="store_true")
    exp.add_argument("--out", required=True, help="output directory")
    exp.set_defaults(func=cmd_experiment)
    return parser


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s: %(message)s")
    if args.threads is not None and args.threads < 1:
        parser.error("--threads must be positive")
    try:
        return args.func(args)
    except IntegrationError as exc:
        print(f"error: numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    except (UsageError, ConfigError, ParseError, DomainError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
