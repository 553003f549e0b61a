"""Command line entry point.

Exit status: 0 success, 1 a verification or acceptance check failed,
2 usage error.
"""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import asdict

from .distributions import DomainError, RngStream
from .generators import dlp_generate, gnm_supercritical, gnp_supercritical, write_labels
from .graph import connected_components, core_mantle_decompose, read_edge_list, write_edge_list
from .harness import DEFAULT_J_GRID, ExperimentConfig, run_experiment, theory_summary
from .process import color_count, order_edges, prefix_length, rainbow_giant, run_process, write_trace_csv
from .verify import verify_distributions, verify_oracle


def _j_grid(text: str) -> tuple[int, ...]:
    try:
        vals = tuple(int(x) for x in text.split(",") if x.strip())
    except ValueError:
        raise argparse.ArgumentTypeError(f"bad --j-grid {text!r}")
    if not vals or min(vals) < 1:
        raise argparse.ArgumentTypeError("--j-grid needs positive integers")
    return vals


def _parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="rainbowgiant", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True)

    def model(sp, need_n=True):
        sp.add_argument("--n", type=int, required=need_n)
        sp.add_argument("--epsilon", type=float, required=need_n)
        sp.add_argument("--generator", choices=("gnp", "gnm", "dlp"), default="gnp")
        sp.add_argument("--seed", type=int, default=0)

    sp = sub.add_parser("generate", help="sample a graph and write it as an edge list")
    model(sp)
    sp.add_argument("--out")

    sp = sub.add_parser("decompose", help="core/mantle split of the largest component")
    model(sp, need_n=False)
    sp.add_argument("--input", help="edge-list file (otherwise sample from --n/--epsilon)")
    sp.add_argument("--out")

    sp = sub.add_parser("process", help="run the coloring process and dump its trace")
    model(sp, need_n=False)
    sp.add_argument("--input")
    sp.add_argument("--alpha", type=float, default=1.0)
    sp.add_argument("--colors-n", type=int, help="n used for ceil(alpha n) (default: --n or graph size)")
    sp.add_argument("--out", help="trace CSV path (default stdout)")
    sp.add_argument("--colored", help="also write the 'u v color' edge list here")

    sp = sub.add_parser("experiment", help="seeded Monte Carlo trials and report")
    model(sp)
    sp.add_argument("--alpha", type=float, default=1.0)
    sp.add_argument("--trials", type=int, default=20)
    sp.add_argument("--j-grid", type=_j_grid, default=DEFAULT_J_GRID)
    sp.add_argument("--format", choices=("json", "csv"), default="json")
    sp.add_argument("--workers", type=int, default=1)
    sp.add_argument("--out")

    sp = sub.add_parser("theory", help="model predictions as JSON")
    sp.add_argument("--n", type=int, required=True)
    sp.add_argument("--epsilon", type=float, required=True)
    sp.add_argument("--alpha", type=float, default=1.0)
    sp.add_argument("--edges", type=int, help="observed giant edge count")

    sp = sub.add_parser("verify-distributions", help="mu solver, Borel tail and PGW checks")
    sp.add_argument("--seed", type=int, default=7)

    sp = sub.add_parser("oracle-check", help="process versus exhaustive maximum rainbow tree")
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--instances", type=int, default=200)
    sp.add_argument("--trials", type=int, default=20)
    return p


def _emit(text: str, path: str | None) -> None:
    if path:
        with open(path, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _sample(args):
    gen = RngStream(args.seed, 0).gen
    if args.generator == "dlp":
        return dlp_generate(args.n, args.epsilon, gen)
    f = gnp_supercritical if args.generator == "gnp" else gnm_supercritical
    return f(args.n, args.epsilon, gen)


def _load(args, parser):
    if args.input:
        with open(args.input) as fh:
            g, _ = read_edge_list(fh)
        return g
    if args.n is None or args.epsilon is None:
        parser.error("need --input or both --n and --epsilon")
    out = _sample(args)
    return out.graph if hasattr(out, "graph") else out


def main(argv=None) -> int:
    parser = _parser()
    args = parser.parse_args(argv)
    try:
        return _dispatch(args, parser)
    except DomainError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


def _dispatch(args, parser) -> int:
    cmd = args.command
    if cmd == "generate":
        out = _sample(args)
        g = out.graph if hasattr(out, "graph") else out
        if args.out:
            with open(args.out, "w") as fh:
                write_edge_list(g, fh)
            if hasattr(out, "graph"):
                with open(args.out + ".labels", "w") as fh:
                    write_labels(out, fh)
        else:
            write_edge_list(g, sys.stdout)
        return 0

    if cmd == "decompose":
        g = _load(args, parser)
        comp = connected_components(g)
        cm = core_mantle_decompose(g, comp, comp.giant)
        doc = {
            "component": cm.component,
            "component_size": cm.n_component,
            "core_vertices": cm.core_vertices.tolist(),
            "core_edges": cm.core_edges.tolist(),
            "mantle": [
                {"edge_id": int(e), "child": int(cm.child[e]), "desc": int(cm.desc[e])}
                for e in cm.mantle_edges
            ],
        }
        _emit(json.dumps(doc) + "\n", args.out)
        return 0

    if cmd == "process":
        g = _load(args, parser)
        comp = connected_components(g)
        cm = core_mantle_decompose(g, comp, comp.giant)
        n_amb = args.colors_n or args.n or g.n
        prefix = prefix_length(args.epsilon, n_amb) if args.epsilon else 0
        gen = RngStream(args.seed, 1).gen
        coloring, trace = run_process(g, cm, order_edges(g, cm), color_count(args.alpha, n_amb), gen,
                                      prefix=prefix)
        if args.out:
            with open(args.out, "w") as fh:
                write_trace_csv(trace, fh)
        else:
            write_trace_csv(trace, sys.stdout)
        if args.colored:
            with open(args.colored, "w") as fh:
                write_edge_list(g, fh, coloring.output_colors())
        _, size = rainbow_giant(g, coloring)
        print(f"component {cm.n_component} rainbow giant {size} deletions {trace.deletions} S {trace.s}",
              file=sys.stderr)
        return 0

    if cmd == "experiment":
        cfg = ExperimentConfig(n=args.n, epsilon=args.epsilon, alpha=args.alpha, trials=args.trials,
                               master_seed=args.seed, generator=args.generator, j_grid=args.j_grid,
                               out=args.out, format=args.format)
        rep = run_experiment(cfg, workers=args.workers)
        _emit(rep.render(cfg.format), args.out)
        for name, ok in rep.checks.items():
            print(f"{'PASS' if ok else 'FAIL'} {name}", file=sys.stderr)
        return 0 if rep.passed else 1

    if cmd == "theory":
        ts = theory_summary(args.n, args.epsilon, args.alpha, args.edges)
        print(json.dumps(asdict(ts), indent=2))
        return 0

    if cmd == "verify-distributions":
        res = verify_distributions(args.seed)
        for name in ("mu", "borel_tail", "pgw_gof"):
            print(f"{'PASS' if res[name]['passed'] else 'FAIL'} {name}")
        print(json.dumps(res, indent=2))
        return 0 if res["passed"] else 1

    if cmd == "oracle-check":
        res = verify_oracle(args.seed, instances=args.instances, runs=args.trials)
        print(json.dumps(res, indent=2))
        return 0 if res["passed"] else 1

    parser.error(f"unknown command {cmd}")
    return 2


if __name__ == "__main__":
    sys.exit(main())
