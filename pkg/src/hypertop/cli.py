"""Command line interface: ``hypertop {topo,check,corpus,plot}``."""

from __future__ import annotations

import argparse
import json
import os
import signal
import sys
import time
from concurrent.futures import ProcessPoolExecutor
from contextlib import contextmanager
from pathlib import Path

from .curvedef import CurveError, HMap, NotBirational, birational_check
from .curvespec import CurveSpec, SpecError, corpus_names, load, load_corpus
from .graph import load_graph
from .planar_topo import Topology, compute_topology
from .space_topo import RandomizationExhausted, check_hypotheses, topology3d
from .svg import EmptyGraph, emit_svg

EXIT_OK = 0
EXIT_INPUT = 2
EXIT_NOT_BIRATIONAL = 3
EXIT_HYPOTHESES = 4
EXIT_TIMEOUT = 5


class ComputationTimeout(RuntimeError):
    pass


@contextmanager
def _deadline(seconds: float | None):
    if not seconds or seconds <= 0 or not hasattr(signal, "SIGALRM"):
        yield
        return

    def handler(signum, frame):
        raise ComputationTimeout(f"computation exceeded {seconds} s")

    old = signal.signal(signal.SIGALRM, handler)
    signal.setitimer(signal.ITIMER_REAL, seconds)
    try:
        yield
    finally:
        signal.setitimer(signal.ITIMER_REAL, 0)
        signal.signal(signal.SIGALRM, old)


def _env_default(name: str, cast, fallback):
    raw = os.environ.get(name)
    if raw is None or raw == "":
        return fallback
    return cast(raw)


def _read_spec(args) -> CurveSpec:
    if args.input is None:
        raise SpecError("--input is required")
    spec = load(args.input)
    if args.dim is not None and args.dim != spec.dim:
        raise SpecError(f"--dim {args.dim} does not match the {spec.dim} map components")
    return spec


def run_topology(spec: CurveSpec, *, certify: bool = True, seed: int = 0, digits: int = 6,
                 polylines: bool = True) -> Topology:
    curve, hmap = spec.build()
    if spec.dim == 2:
        topo = compute_topology(hmap, curve, certify=certify, seed=seed, digits=digits,
                                polylines=polylines)
        topo.graph.metadata.setdefault("hypotheses", None)
    else:
        topo = topology3d(hmap, curve, certify=certify, seed=seed, digits=digits,
                          polylines=polylines)
    md = topo.graph.metadata
    md["precision"] = digits
    if spec.name:
        md["name"] = spec.name
    if hmap.substitution is not None:
        md["substitution"] = hmap.substitution.describe()
        md["warnings"] = list(md.get("warnings", [])) + list(hmap.substitution.warnings)
    return topo


# --------------------------------------------------------------------------
# commands
# --------------------------------------------------------------------------

def cmd_topo(args) -> int:
    spec = _read_spec(args)
    with _deadline(args.timeout):
        topo = run_topology(spec, certify=not args.no_certify, seed=args.seed,
                            digits=args.precision)
    g = topo.graph
    text = g.dumps()
    if args.json:
        Path(args.json).write_text(text)
    if args.dot:
        Path(args.dot).write_text(g.to_dot())
    if args.svg:
        Path(args.svg).write_text(emit_svg(g))
    if not (args.json or args.dot or args.svg):
        sys.stdout.write(text + "\n")
    else:
        comps, cycles = g.components_and_cycles()
        si = sum("self_intersection" in v.roles for v in g.vertices)
        print(f"vertices={len(g.vertices)} edges={len(g.edges)} components={comps} "
              f"cycles={cycles} self_intersections={si}")
    return EXIT_OK


def cmd_check(args) -> int:
    spec = _read_spec(args)
    with _deadline(args.timeout):
        curve, hmap = spec.build()
        out: dict = {"genus": curve.genus, "dim": spec.dim}
        if spec.dim == 2:
            ok = birational_check(hmap, curve, seed=args.seed)
            out["birational"] = ok
            print(json.dumps(out, indent=1))
            return EXIT_OK if ok else EXIT_NOT_BIRATIONAL
        rep = check_hypotheses(hmap, curve, seed=args.seed)
        out["hypotheses"] = rep.to_json(curve.p)
        if not rep.ok:
            from .space_topo import randomize_coordinates

            try:
                setup = randomize_coordinates(hmap, curve, seed=args.seed)
                out["coordinate_change"] = setup.applied_change
            except RandomizationExhausted:
                c = hmap.components
                bir = any(birational_check(HMap([c[i], c[j]]), curve, seed=args.seed)
                          for i, j in ((0, 1), (0, 2), (1, 2)))
                out["birational"] = bir
                print(json.dumps(out, indent=1))
                return EXIT_HYPOTHESES if bir else EXIT_NOT_BIRATIONAL
        out["birational"] = True
        print(json.dumps(out, indent=1))
        return EXIT_OK


def _corpus_row(name: str, certify: bool, seed: int, timeout: float | None) -> dict:
    spec = load_corpus(name)
    t0 = time.perf_counter()
    row = {"name": name, "dim": spec.dim, "questionable": spec.questionable,
           "expected": spec.expected}
    try:
        with _deadline(timeout):
            topo = run_topology(spec, certify=certify, seed=seed, polylines=False)
    except Exception as exc:  # reported in the table, not raised
        row.update(error=type(exc).__name__, message=str(exc))
    else:
        md = topo.graph.metadata
        row.update(genus=md["genus"], p_inf_affine=md["flags"]["p_inf_affine"],
                   self_intersection=md["flags"]["self_intersection"],
                   asymptotes=md["flags"]["asymptotes"], base_points=md["flags"]["base_points"])
        row["matches"] = all(row.get(k) == v for k, v in spec.expected.items())
    row["seconds"] = round(time.perf_counter() - t0, 2)
    return row


def _mark(v) -> str:
    return {True: "yes", False: "no", None: "-"}.get(v, str(v))


def cmd_corpus(args) -> int:
    names = [n for n in corpus_names()
             if args.dim is None or load_corpus(n).dim == args.dim]
    certify = not args.no_certify
    if args.workers > 1:
        with ProcessPoolExecutor(max_workers=args.workers) as ex:
            rows = list(ex.map(_corpus_row, names, [certify] * len(names),
                               [args.seed] * len(names), [args.timeout] * len(names)))
    else:
        rows = [_corpus_row(n, certify, args.seed, args.timeout) for n in names]
    if args.json:
        Path(args.json).write_text(json.dumps(rows, indent=1))
    header = f"{'example':<10} {'genus':>5} {'P_inf aff':>9} {'S.I.':>5} {'match':>6} {'time(s)':>8}"
    print(header)
    for r in rows:
        if "error" in r:
            print(f"{r['name']:<10} error: {r['error']}: {r['message']}")
            continue
        match = _mark(r["matches"]) + ("?" if r["questionable"] else "")
        print(f"{r['name']:<10} {r['genus']:>5} {_mark(r['p_inf_affine']):>9} "
              f"{_mark(r['self_intersection']):>5} {match:>6} {r['seconds']:>8}")
    return EXIT_OK


def cmd_plot(args) -> int:
    if args.input is None:
        raise SpecError("--input is required")
    try:
        data = json.loads(Path(args.input).read_text())
        g = load_graph(data)
    except (json.JSONDecodeError, KeyError, TypeError) as exc:
        raise SpecError(f"not a graph output file: {exc}") from None
    svg = emit_svg(g)
    if args.svg:
        Path(args.svg).write_text(svg)
    else:
        sys.stdout.write(svg)
    return EXIT_OK


# --------------------------------------------------------------------------
# entry point
# --------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="hypertop",
                                     description="Topology of plane and space hyperelliptic curves.")
    sub = parser.add_subparsers(dest="command", required=True)
    seed = _env_default("HYPERTOP_SEED", int, 0)
    timeout = _env_default("HYPERTOP_TIMEOUT", float, None)

    def common(p, needs_input=True):
        p.add_argument("--input", help="JSON curve specification" if needs_input else "input file")
        p.add_argument("--dim", type=int, choices=(2, 3))
        p.add_argument("--seed", type=int, default=seed)
        p.add_argument("--timeout", type=float, default=timeout, help="seconds")
        p.add_argument("--no-certify", action="store_true",
                       help="merge vertices by a 1e-8 threshold instead of exact tests")

    p = sub.add_parser("topo", help="compute the topology graph")
    common(p)
    p.add_argument("--json")
    p.add_argument("--dot")
    p.add_argument("--svg")
    p.add_argument("--precision", type=int, default=6)
    p.set_defaults(func=cmd_topo)

    p = sub.add_parser("check", help="birationality and space-curve hypotheses")
    common(p)
    p.set_defaults(func=cmd_check)

    p = sub.add_parser("corpus", help="run the bundled examples")
    common(p, needs_input=False)
    p.add_argument("--json")
    p.add_argument("--workers", type=int, default=1)
    p.set_defaults(func=cmd_corpus)

    p = sub.add_parser("plot", help="SVG from a graph JSON file")
    p.add_argument("--input", help="graph JSON produced by 'topo --json'")
    p.add_argument("--svg")
    p.set_defaults(func=cmd_plot)
    return parser


def _error(exc: BaseException, code: int) -> int:
    sys.stderr.write(json.dumps({"error": type(exc).__name__, "message": str(exc),
                                 "exit_code": code}) + "\n")
    return code


def run(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except ComputationTimeout as exc:
        return _error(exc, EXIT_TIMEOUT)
    except NotBirational as exc:
        return _error(exc, EXIT_NOT_BIRATIONAL)
    except RandomizationExhausted as exc:
        return _error(exc, EXIT_HYPOTHESES)
    except (CurveError, EmptyGraph, OSError) as exc:
        return _error(exc, EXIT_INPUT)


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
