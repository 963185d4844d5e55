"""Command-line interface: generation, construction, measurement, checks,
adversarial runs, and the scaling experiment harness.

Exit codes: 0 success, 1 domain error, 2 usage error.
"""

from __future__ import annotations

import argparse
import json
import os
import sys

from . import experiments, geometry, graphs, interference, topologies


def _gen(args) -> int:
    if args.kind == "uniform":
        ps = geometry.gen_uniform(args.n, args.d, args.seed)
    elif args.kind == "chain":
        ps = geometry.gen_halving_chain(args.n, ratio=args.ratio, g0=args.g0, d=args.d)
    else:  # zeno
        cfg = geometry.ZenoConfig(k=args.k, u=args.u)
        ps = geometry.gen_zeno(cfg, d=args.d, seed=args.sample_seed)
    geometry.save_points(ps, args.out)
    print(f"n={ps.n} d={ps.dim} -> {args.out}")
    return 0


def _build(args) -> int:
    ps = geometry.load_points(args.points)
    cfg = topologies.TopologyConfig(t=args.t, net_radius=args.net_radius)
    if args.topology == "mst":
        g = graphs.build_mst(ps)
    elif args.topology == "nn":
        g = graphs.build_nn_graph(ps)
    elif args.topology == "hub":
        g = topologies.build_hub_graph(ps, cfg)
    else:
        g = topologies.build_bucketed_graph(ps, cfg)
    graphs.save_graph(g, args.out)
    print(f"edges={g.m} connected={graphs.is_connected(g)} -> {args.out}")
    return 0


def _measure(args) -> int:
    ps = geometry.load_points(args.points)
    g = graphs.load_graph(ps, args.graph)
    rep = interference.interference_report_accelerated(ps, g)
    text = (interference.report_to_json(rep) + "\n" if args.format == "json"
            else interference.report_to_csv(rep))
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    print(f"max={rep.max_value} argmax={rep.argmax}", file=sys.stderr)
    return 0


def _check(args) -> int:
    ps = geometry.load_points(args.points)
    wanted = args.checks.split(",")
    ok_all = True
    for check in wanted:
        if check == "logd-bound":
            value, ratio, bound, ok = interference.log_d_bound_check(ps)
            print(f"logd-bound: {'pass' if ok else 'FAIL'} "
                  f"(interference={value}, D={ratio:.6g}, bound={bound:.6g})")
        elif check in ("diameter-ball", "connectivity"):
            if not args.graph:
                print(f"{check}: requires --graph", file=sys.stderr)
                return 2
            g = graphs.load_graph(ps, args.graph)
            if check == "connectivity":
                ok = graphs.is_connected(g)
                print(f"connectivity: {'pass' if ok else 'FAIL'}")
            else:
                ok, witness = graphs.diameter_ball_property(g)
                suffix = "" if ok else f" witness edge={witness[0]} vertex={witness[1]}"
                print(f"diameter-ball: {'pass' if ok else 'FAIL'}{suffix}")
        else:
            print(f"unknown check {check!r}", file=sys.stderr)
            return 2
        ok_all = ok_all and ok
    return 0 if ok_all else 1


def _adversarial(args) -> int:
    rows = experiments.run_adversarial(args.kind, args.param,
                                       ambient_n=args.embed_n, seed=args.seed)
    for row in rows:
        print(json.dumps(row))
    return 0


def _experiment(args) -> int:
    if args.preset:
        spec = experiments.PRESETS[args.preset]
    else:
        if not args.sizes:
            print("either --preset or --sizes is required", file=sys.stderr)
            return 2
        overrides = None
        if args.t is not None or args.net_radius is not None:
            overrides = topologies.TopologyConfig(t=args.t, net_radius=args.net_radius)
        spec = experiments.ExperimentSpec(
            sizes=tuple(args.sizes), d=args.d, trials=args.trials,
            master_seed=args.seed, topologies=tuple(args.topologies.split(",")),
            overrides=overrides)
    workers = args.workers or int(os.environ.get("INTERFSIM_WORKERS", "1"))
    res = experiments.run_scaling(spec, workers=workers)
    with open(args.csv, "w") as fh:
        fh.write(res.to_csv(include_timing=not args.omit_timing))
    print(f"rows={len(res.rows)} failures={len(res.failures)} -> {args.csv}")
    if args.json:
        with open(args.json, "w") as fh:
            fh.write(experiments.summary_to_json(experiments.summarize(res)))
        print(f"summary -> {args.json}")
    for failure in res.failures:
        print(f"row failure: {failure}", file=sys.stderr)
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="interfsim",
        description="Receiver-centric interference of geometric graphs")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("gen", help="generate a point set")
    gensub = p.add_subparsers(dest="kind", required=True)
    pu = gensub.add_parser("uniform")
    pu.add_argument("-n", type=int, required=True)
    pu.add_argument("-d", type=int, default=2)
    pu.add_argument("--seed", type=int, default=0)
    pc = gensub.add_parser("chain")
    pc.add_argument("-n", type=int, required=True)
    pc.add_argument("-d", type=int, default=1)
    pc.add_argument("--ratio", type=float, default=0.5)
    pc.add_argument("--g0", type=float, default=0.5)
    pz = gensub.add_parser("zeno")
    pz.add_argument("-k", type=int, required=True)
    pz.add_argument("-d", type=int, default=2)
    pz.add_argument("--u", type=float, default=None)
    pz.add_argument("--sample-seed", type=int, default=None,
                    help="sample one point per ball instead of the centers")
    for sp in (pu, pc, pz):
        sp.add_argument("-o", "--out", required=True)
        sp.set_defaults(func=_gen)

    p = sub.add_parser("build", help="build a topology over a point set")
    p.add_argument("topology", choices=("mst", "hub", "bucketed", "nn"))
    p.add_argument("-i", "--points", required=True)
    p.add_argument("-o", "--out", required=True)
    p.add_argument("--t", type=float, default=None,
                   help="cell density parameter (default 2^((log2 n)^(1/3)))")
    p.add_argument("--net-radius", type=float, default=None,
                   help="hub net radius (default n^(-1/2))")
    p.set_defaults(func=_build)

    p = sub.add_parser("measure", help="interference report for a graph")
    p.add_argument("-p", "--points", required=True)
    p.add_argument("-g", "--graph", required=True)
    p.add_argument("--format", choices=("json", "csv"), default="json")
    p.add_argument("-o", "--out", default=None)
    p.set_defaults(func=_measure)

    p = sub.add_parser("check", help="structural/bound checks")
    p.add_argument("-p", "--points", required=True)
    p.add_argument("-g", "--graph", default=None)
    p.add_argument("--checks", default="diameter-ball,logd-bound,connectivity")
    p.set_defaults(func=_check)

    p = sub.add_parser("adversarial", help="adversarial lower-bound runs")
    p.add_argument("kind", choices=("zeno", "chain"))
    p.add_argument("param", type=int, help="k for zeno, n for chain")
    p.add_argument("--embed-n", type=int, default=None,
                   help="embed the zeno configuration among this many uniform points")
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(func=_adversarial)

    p = sub.add_parser("experiment", help="Monte-Carlo scaling runs")
    p.add_argument("--preset", choices=tuple(experiments.PRESETS), default=None)
    p.add_argument("--sizes", type=int, nargs="+", default=None)
    p.add_argument("--trials", type=int, default=1)
    p.add_argument("--d", type=int, default=2)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--topologies", default="mst")
    p.add_argument("--t", type=float, default=None)
    p.add_argument("--net-radius", type=float, default=None)
    p.add_argument("--workers", type=int, default=None)
    p.add_argument("--csv", required=True)
    p.add_argument("--json", default=None)
    p.add_argument("--omit-timing", action="store_true",
                   help="blank the wall_ms column for byte-identical reruns")
    p.set_defaults(func=_experiment)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (ValueError, OSError, AssertionError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
