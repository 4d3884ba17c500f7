"""Command-line entry point: ``homlab <command> ...``.

Exit codes: 0 success or affirmative answer, 1 negative finding (no
homomorphism, not certified), 2 usage or input error.
"""

from __future__ import annotations

import argparse
import logging
import sys
from pathlib import Path

from homlab import certify as cert
from homlab import experiments, formula, hom, sampler
from homlab.graph import (
    CycleTarget,
    GraphFormatError,
    emit_edge_list,
    named_graph,
    parse_edge_list,
    parse_target,
    union_of_matchings,
)

EXIT_OK, EXIT_NEGATIVE, EXIT_USAGE = 0, 1, 2


class UsageError(Exception):
    pass


def _read(path: str) -> str:
    if path == "-":
        return sys.stdin.read()
    try:
        return Path(path).read_text()
    except OSError as exc:
        raise UsageError(f"cannot read {path}: {exc.strerror}") from None


def load_graph(spec: str):
    """A path to an edge-list file, or ``named:<name>`` for a built-in graph."""
    if spec.startswith("named:"):
        return named_graph(spec[len("named:"):])
    return parse_edge_list(_read(spec))


def _write(path: str | None, text: str) -> None:
    if path is None or path == "-":
        sys.stdout.write(text)
    else:
        Path(path).write_text(text)


def _int_list(text: str) -> list[int]:
    try:
        return [int(x) for x in text.split(",") if x.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}")


def cmd_hom_check(args) -> int:
    g = load_graph(args.graph)
    target = parse_target(args.target)
    if args.map:
        m = hom.parse_hom_map(_read(args.map), target)
        ok = hom.verify_homomorphism(g, m)
        print("valid homomorphism" if ok else "not a homomorphism")
        return EXIT_OK if ok else EXIT_NEGATIVE
    m = hom.find_homomorphism(g, target)
    if m is None:
        print(f"no homomorphism to {target}")
        return EXIT_NEGATIVE
    _write(args.out, hom.format_hom_map(m))
    return EXIT_OK


def cmd_hom_tighten(args) -> int:
    g = load_graph(args.graph)
    target = parse_target(args.target)
    m = hom.parse_hom_map(_read(args.map), target)
    tight, steps = hom.tighten_trace(g, m)
    print(f"{len(steps)} steps", file=sys.stderr)
    _write(args.out, hom.format_hom_map(tight))
    return EXIT_OK


def cmd_hom_count(args) -> int:
    g = load_graph(args.graph)
    target = parse_target(args.target)
    if not isinstance(target, CycleTarget):
        raise UsageError("count supports cycle targets only")
    print(hom.count_homomorphisms(g, target, tight_only=args.tight))
    return EXIT_OK


def cmd_chi_c(args) -> int:
    g = load_graph(args.graph)
    r = hom.circular_chromatic_upper(g, args.q_max)
    print(f"{r.numerator}/{r.denominator}")
    return EXIT_OK


def cmd_sample(args) -> int:
    cfg = sampler.SamplerConfig(args.n, args.seed, args.min_girth)
    t = sampler.sample_min_girth(cfg, sampler.stream(args.seed), args.attempt_cap)
    text = emit_edge_list(union_of_matchings(t)) if args.edge_list else sampler.format_triple(t)
    _write(args.out, text)
    return EXIT_OK


def cmd_experiment(args) -> int:
    spec = experiments.ExperimentSpec(args.kind, tuple(args.n), args.samples, args.seed, args.k)
    rows = experiments.run(spec, args.workers)
    for r in rows:
        if r.mean_ratio is not None:
            print(f"n={r.n}: mean MIS/n = {r.mean_ratio:.6f}", file=sys.stderr)
    _write(args.out, experiments.to_csv(rows))
    return EXIT_OK


def cmd_formula_term(args) -> int:
    parts = args.composition
    if len(parts) != 7:
        raise UsageError("composition needs exactly 7 class sizes")
    c = formula.Composition(tuple(parts))
    if args.n is not None and c.n != args.n:
        raise UsageError(f"composition sums to {c.n}, not --n {args.n}")
    print(formula.tight_pair_count(c))
    return EXIT_OK


def cmd_formula_expected(args) -> int:
    r = formula.expected_tight_upper(args.n)
    print(f"{r.numerator}/{r.denominator}" if r.denominator != 1 else r.numerator)
    print(f"{float(r):.12g}")
    return EXIT_OK


def cmd_certify(args) -> int:
    report = cert.certify(args.threshold, args.eps, args.eps_min, slack=args.slack,
                          workers=args.workers, max_offenders=args.max_offenders)
    if args.report:
        Path(args.report).write_text(report.to_json())
    verdict = "certified" if report.certified else "NOT certified"
    print(f"{verdict}: max bound {report.max_bound:.9f} (log {report.max_log_bound:.9g}) "
          f"vs threshold {report.threshold}; {report.boxes_feasible} boxes, "
          f"{report.boxes_refined} refined, {report.offender_count} offenders")
    return EXIT_OK if report.certified else EXIT_NEGATIVE


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="homlab", description=__doc__.splitlines()[0])
    p.add_argument("-v", "--verbose", action="store_true")
    sub = p.add_subparsers(dest="command", required=True)

    h = sub.add_parser("hom", help="check, tighten or count homomorphisms")
    hsub = h.add_subparsers(dest="action", required=True)
    graph_help = "edge-list file, '-' for stdin, or named:petersen / named:cycle:7 ..."
    for name, fn, text in (("check", cmd_hom_check, "find or verify a homomorphism"),
                           ("tighten", cmd_hom_tighten, "tighten a map into an odd cycle"),
                           ("count", cmd_hom_count, "count homomorphisms by enumeration")):
        s = hsub.add_parser(name, help=text)
        s.add_argument("--graph", required=True, help=graph_help)
        s.add_argument("--target", default="cycle:7", help="cycle:K or clique:P/Q")
        if name == "check":
            s.add_argument("--map", help="verify this map instead of searching")
        if name == "tighten":
            s.add_argument("--map", required=True, help="map file, one 'v label' per line")
        if name == "count":
            s.add_argument("--tight", action="store_true", help="count tight maps only")
        if name != "count":
            s.add_argument("--out", help="write the map here instead of stdout")
        s.set_defaults(func=fn)

    s = sub.add_parser("chi-c", help="upper bound on the circular chromatic number")
    s.add_argument("--graph", required=True, help=graph_help)
    s.add_argument("--q-max", type=int, default=4)
    s.set_defaults(func=cmd_chi_c)

    s = sub.add_parser("sample", help="sample a matching triple")
    s.add_argument("--n", type=int, required=True)
    s.add_argument("--seed", type=int, default=0)
    s.add_argument("--min-girth", type=int)
    s.add_argument("--attempt-cap", type=int, default=sampler.DEFAULT_ATTEMPT_CAP)
    s.add_argument("--edge-list", action="store_true", help="emit the union as an edge list")
    s.add_argument("--out")
    s.set_defaults(func=cmd_sample)

    s = sub.add_parser("experiment", help="Monte Carlo experiments (CSV output)")
    s.add_argument("kind", choices=experiments.KINDS)
    s.add_argument("--n", type=_int_list, required=True, help="comma-separated even sizes")
    s.add_argument("--samples", type=int, default=500)
    s.add_argument("--k", type=int, default=7, help="target cycle for hom-fraction")
    s.add_argument("--seed", type=int, default=0)
    s.add_argument("--workers", type=int, default=None)
    s.add_argument("--out")
    s.set_defaults(func=cmd_experiment)

    f = sub.add_parser("formula", help="exact tight-homomorphism counts")
    fsub = f.add_subparsers(dest="action", required=True)
    s = fsub.add_parser("term", help="count for one class-size composition")
    s.add_argument("--n", type=int)
    s.add_argument("--composition", type=_int_list, required=True, help="n0,...,n6")
    s.set_defaults(func=cmd_formula_term)
    s = fsub.add_parser("expected-upper", help="exact expected number of tight maps")
    s.add_argument("--n", type=int, required=True)
    s.set_defaults(func=cmd_formula_expected)

    s = sub.add_parser("certify", help="branch-and-bound certification of the rate bound")
    s.add_argument("--threshold", type=float, default=0.99)
    s.add_argument("--eps", type=float, default=0.01)
    s.add_argument("--eps-min", type=float, default=0.00125)
    s.add_argument("--slack", type=float, default=cert.DEFAULT_SLACK)
    s.add_argument("--report", help="write the JSON report here")
    s.add_argument("--workers", type=int, default=None)
    s.add_argument("--max-offenders", type=int, default=cert.DEFAULT_MAX_OFFENDERS)
    s.set_defaults(func=cmd_certify)
    return p


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    if getattr(args, "workers", 0) is None:
        args.workers = experiments.default_workers()
    try:
        return args.func(args)
    except (UsageError, GraphFormatError, ValueError) as exc:
        print(f"homlab: error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
