"""Command-line interface: ``antimagic <command> [options]``.

Exit codes: 0 success, 1 verification failure or no labelling exists,
2 input error, 3 pipeline failure.
"""

from __future__ import annotations

import argparse
import json
import logging
import os
import sys

from .errors import (
    AntimagicError,
    BudgetExceededError,
    GraphError,
    PipelineError,
    PreconditionError,
)
from .generators import from_spec
from .graph import Graph
from .io import dumps, format_edge_list, labelling_document, read_graph, read_labelling

EXIT_OK, EXIT_FAIL, EXIT_INPUT, EXIT_PIPELINE = 0, 1, 2, 3

log = logging.getLogger("antimagic")


class InputError(Exception):
    pass


def _configure_logging() -> None:
    level = os.environ.get("ANTIMAGIC_LOG", "WARNING").upper()
    logging.basicConfig(level=getattr(logging, level, logging.WARNING),
                        format="%(levelname)s %(name)s: %(message)s", stream=sys.stderr)


def _load_graph(args) -> Graph:
    if getattr(args, "input", None) and getattr(args, "spec", None):
        raise InputError("give either --input or --spec, not both")
    if getattr(args, "input", None):
        try:
            return read_graph(args.input)
        except OSError as exc:
            raise InputError(f"cannot read {args.input}: {exc.strerror}") from None
    if getattr(args, "spec", None):
        return from_spec(args.spec, seed=args.seed)
    raise InputError("a graph is required: use --input FILE or --spec 'name(args)'")


def _emit(text: str, output: str | None) -> None:
    if output:
        with open(output, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _add_graph_args(p: argparse.ArgumentParser) -> None:
    p.add_argument("--input", help="edge-list file ('n m' header, then 'u v' lines)")
    p.add_argument("--spec", help="generator spec, e.g. 'min_degree(4000, 1700)'")
    p.add_argument("--seed", type=int, default=0, help="random seed (default 0)")


def _add_moduli(p: argparse.ArgumentParser) -> None:
    p.add_argument("--k1", type=int, default=13)
    p.add_argument("--k2", type=int, default=11)


def cmd_label(args) -> int:
    from .pipeline import PipelineConfig, label_graph, label_min_degree
    from .verify import verify_antimagic, verify_g_antimagic

    g = _load_graph(args)
    if args.core_degree is not None and not args.unsafe_skip_delta_check:
        raise InputError("--core-degree requires --unsafe-skip-delta-check")
    cfg = PipelineConfig(k1=args.k1, k2=args.k2, seed=args.seed,
                         skip_delta_check=args.unsafe_skip_delta_check,
                         core_degree=args.core_degree)
    if args.min_degree_mode:
        res = label_min_degree(g, cfg=cfg)
    else:
        res = label_graph(g, cfg)
    config = dict(cfg.to_json(), mode="min_degree" if args.min_degree_mode else "average_degree")
    verified = False
    if args.verify:
        if args.min_degree_mode:
            report = verify_g_antimagic(g, res.labels, None, cfg.K)
        else:
            report = verify_antimagic(g, res.labels)
        if not report.ok:
            print(json.dumps(report.to_json()), file=sys.stderr)
            print("verification failed; labelling not written", file=sys.stderr)
            return EXIT_FAIL
        verified = True
    _emit(dumps(labelling_document(g, res.labels, res.sums, config, verified)), args.output)
    if args.figures:
        from .plotting import write_report_figures
        write_report_figures(res.sums, args.figures, cfg.K)
    return EXIT_OK


def cmd_verify(args) -> int:
    from .verify import verify_g_antimagic

    g = _load_graph(args)
    labels = read_labelling(args.labelling, g)
    report = verify_g_antimagic(g, labels, None, args.modulus)
    print(json.dumps(report.to_json()))
    if args.figures:
        from .plotting import write_report_figures
        write_report_figures(g.edge_sums(labels), args.figures, args.modulus)
    return EXIT_OK if report.ok else EXIT_FAIL


def cmd_core(args) -> int:
    from .partition import r_core

    g = _load_graph(args)
    split = r_core(g, args.r)
    doc = {"r": split.r, "core": split.core.tolist(), "shell": split.shell.tolist()}
    _emit(json.dumps(doc) + "\n", args.output)
    return EXIT_OK


def cmd_stars(args) -> int:
    from .partition import build_star_forest

    g = _load_graph(args)
    delta = args.delta if args.delta is not None else g.min_degree()
    r = args.r if args.r is not None else g.n
    plan = build_star_forest(g, delta, r, seed=args.seed)
    _emit(json.dumps(plan.to_json()) + "\n", args.output)
    return EXIT_OK


def cmd_brute(args) -> int:
    from .verify import brute_force_antimagic

    g = _load_graph(args)
    labels = brute_force_antimagic(g, budget=args.budget, max_edges=args.max_edges)
    if labels is None:
        print("no antimagic labelling exists")
        return EXIT_FAIL
    sums = g.edge_sums(labels)
    _emit(dumps(labelling_document(g, labels, sums, {"mode": "brute_force"}, True)), args.output)
    return EXIT_OK


def cmd_gen(args) -> int:
    if not args.spec:
        raise InputError("gen needs --spec")
    g = from_spec(args.spec, seed=args.seed)
    _emit(format_edge_list(g), args.output)
    return EXIT_OK


def cmd_constants(args) -> int:
    from .pipeline import constants

    c = constants(args.k1, args.k2)
    if args.json:
        print(json.dumps(c.to_json()))
    else:
        print(f"c={c.c}")
        print(f"delta={c.delta}")
        print(f"d0={c.d0}")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="antimagic", description="Antimagic labellings of dense graphs.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("label", help="label a graph and write labelling JSON")
    _add_graph_args(p)
    _add_moduli(p)
    p.add_argument("--output", help="output JSON path (default stdout)")
    p.add_argument("--min-degree-mode", action="store_true",
                   help="label the whole graph as a large-minimum-degree graph")
    p.add_argument("--unsafe-skip-delta-check", action="store_true",
                   help="run below the proven degree threshold (may fail)")
    p.add_argument("--core-degree", type=int, default=None,
                   help="core threshold override; needs --unsafe-skip-delta-check")
    p.add_argument("--verify", action="store_true", help="verify before writing; refuse to write on failure")
    p.add_argument("--figures", metavar="DIR", help="also write PNG report figures into DIR")
    p.set_defaults(func=cmd_label)

    p = sub.add_parser("verify", help="check a labelling JSON against a graph")
    _add_graph_args(p)
    p.add_argument("--labelling", required=True, help="labelling JSON written by 'label'")
    p.add_argument("--modulus", type=int, default=None, help="also flag sums divisible by this")
    p.add_argument("--figures", metavar="DIR", help="also write PNG report figures into DIR")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("core", help="print the r-core split")
    _add_graph_args(p)
    p.add_argument("--r", type=int, required=True)
    p.add_argument("--output")
    p.set_defaults(func=cmd_core)

    p = sub.add_parser("stars", help="print the star forest plan")
    _add_graph_args(p)
    p.add_argument("--delta", type=int, default=None, help="degree threshold (default: minimum degree)")
    p.add_argument("--r", type=int, default=None, help="edges to keep among unused vertices (default n)")
    p.add_argument("--output")
    p.set_defaults(func=cmd_stars)

    p = sub.add_parser("brute", help="exhaustive search on a tiny graph")
    _add_graph_args(p)
    p.add_argument("--budget", type=int, default=5_000_000)
    p.add_argument("--max-edges", type=int, default=15)
    p.add_argument("--output")
    p.set_defaults(func=cmd_brute)

    p = sub.add_parser("gen", help="write a generated graph as an edge list")
    p.add_argument("--spec", required=True)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--output")
    p.set_defaults(func=cmd_gen)

    p = sub.add_parser("constants", help="print c, delta and d0")
    _add_moduli(p)
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_constants)
    return parser


def main(argv=None) -> int:
    _configure_logging()
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (InputError, GraphError) as exc:
        print(f"input error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except PreconditionError as exc:
        print(f"input error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except BudgetExceededError as exc:
        print(f"search incomplete: {exc}", file=sys.stderr)
        return EXIT_PIPELINE
    except PipelineError as exc:
        print(f"pipeline failure in stage {exc.stage}: {exc.cause}", file=sys.stderr)
        return EXIT_PIPELINE
    except AntimagicError as exc:
        print(f"pipeline failure: {exc}", file=sys.stderr)
        return EXIT_PIPELINE


if __name__ == "__main__":
    sys.exit(main())
