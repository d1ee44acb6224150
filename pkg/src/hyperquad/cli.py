"""hyperquad command line: interval | sphere | mz | minpoints | fetch-designs."""

from __future__ import annotations

import argparse
import json
import logging
import sys

from . import experiments as ex
from .designs import default_cache_dir, fetch_design
from .errors import HyperquadError


def _rule_from_args(args, default_kind=None) -> ex.RuleSpec:
    """--rule may be compact ('gauss:41') or a kind combined with --m/--degree/--design-file."""
    text = args.rule or default_kind
    if text is None:
        raise ex.ConfigError("--rule is required")
    if ":" in text:
        return ex.RuleSpec.parse(text)
    if text == "spherical_design":
        if not args.design_file or args.t is None:
            raise ex.ConfigError("spherical_design needs --design-file and --t")
        return ex.RuleSpec(text, (args.design_file, args.t))
    if args.m is None:
        raise ex.ConfigError(f"rule {text} needs --m")
    if text == "equispaced_l1":
        if args.degree is None:
            raise ex.ConfigError("equispaced_l1 needs --degree")
        return ex.RuleSpec(text, (args.m, args.degree))
    if text == "tensor_cc":
        return ex.RuleSpec(text, (args.m, args.n_lon if args.n_lon else 2 * args.n + 1))
    return ex.RuleSpec(text, (args.m,))


def _parse_design(text: str) -> tuple[str, int]:
    path, sep, t = text.rpartition(":")
    if not sep:
        raise argparse.ArgumentTypeError(f"expected PATH:T, got {text!r}")
    return path, int(t)


def _emit(result, args):
    print(ex.summary_table(result))
    if args.out:
        paths = ex.write_result(result, args.out, args.format)
        if args.plot:
            from .plotting import plot_result

            paths.append(plot_result(result, args.out))
        for p in paths:
            print(f"wrote {p}")
    bad = [r for r in result.rows if r.satisfied is False or r.stability_satisfied is False]
    return 1 if bad else 0


def cmd_interval(args) -> int:
    overrides = dict(n=args.n, k=args.k, force=args.force, output_path=args.out,
                     test_function=args.function or "exp_neg_x2")
    if args.grid:
        overrides["grid_resolution"] = args.grid
    if args.rule:
        overrides["rules"] = [ex.RuleSpec.parse(r) for r in args.rule]
    return _emit(ex.run_interval_experiment(ex.interval_config(**overrides)), args)


def cmd_sphere(args) -> int:
    overrides = dict(n=args.n, k=args.k, force=args.force, output_path=args.out,
                     tensor_fallback=not args.no_fallback)
    if args.grid:
        overrides["grid_resolution"] = args.grid
    if args.rule:
        overrides["rules"] = [ex.RuleSpec.parse(r) for r in args.rule]
    config = ex.sphere_config(design_files=args.design_file or (), **overrides)
    return _emit(ex.run_sphere_experiment(config), args)


def cmd_mz(args) -> int:
    spec = _rule_from_args(args)
    report = ex.run_mz_audit(spec, args.n)
    text = json.dumps(report, indent=1)
    if args.out:
        with open(args.out, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text + "\n")
    print(text)
    return 0


def cmd_minpoints(args) -> int:
    report = ex.run_min_points(args.domain, args.n, args.k)
    print(json.dumps(report, indent=1))
    return 0


def cmd_fetch(args) -> int:
    for name in args.names:
        print(fetch_design(name, base_url=args.base_url, cache_dir=args.cache_dir, refresh=args.refresh))
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="hyperquad", description=__doc__)
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    def outputs(p):
        p.add_argument("--out", help="output directory")
        p.add_argument("--format", choices=("csv", "json"), default="csv")
        p.add_argument("--grid", type=int, help="grid resolution (points; sphere: latitudes)")
        p.add_argument("--plot", action="store_true", help="also render PNG figures into --out")
        p.add_argument("--force", action="store_true", help="override the exactness refusal")
        p.add_argument("--k", type=int)

    p = sub.add_parser("interval", help="degree-n hyperinterpolants on [-1, 1]")
    p.add_argument("--n", type=int, default=40)
    p.add_argument("--rule", action="append", help="e.g. gauss:41, clenshaw_curtis:50, equispaced_l1:186:49")
    p.add_argument("--function", choices=("exp_neg_x2", "abs_x"))
    outputs(p)
    p.set_defaults(func=cmd_interval)

    p = sub.add_parser("sphere", help="degree-n hyperinterpolants of a Wendland function on the sphere")
    p.add_argument("--n", type=int, default=25)
    p.add_argument("--rule", action="append", help="e.g. tensor:50, tensor_cc:30:51")
    p.add_argument("--design-file", action="append", type=_parse_design, metavar="PATH:T")
    p.add_argument("--no-fallback", action="store_true", help="fail instead of using product rules")
    outputs(p)
    p.set_defaults(func=cmd_sphere)

    p = sub.add_parser("mz", help="exactness residuals and the MZ constant of one rule")
    p.add_argument("--rule", required=True, help="kind (with --m) or compact spec like gauss:41")
    p.add_argument("--m", type=int, help="point count, or degree t for tensor rules")
    p.add_argument("--degree", type=int, help="exactness degree for equispaced_l1")
    p.add_argument("--n-lon", type=int, help="longitudes for tensor_cc")
    p.add_argument("--design-file")
    p.add_argument("--t", type=int, help="design strength")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--out", help="write the JSON report here")
    p.set_defaults(func=cmd_mz)

    p = sub.add_parser("minpoints", help="lower bounds on the number of quadrature points")
    p.add_argument("--domain", choices=("interval", "sphere"), default="interval")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--k", type=int, required=True)
    p.set_defaults(func=cmd_minpoints)

    p = sub.add_parser("fetch-designs", help="download design files into the cache")
    p.add_argument("names", nargs="+")
    p.add_argument("--base-url", help="defaults to $HYPERQUAD_DESIGN_URL")
    p.add_argument("--cache-dir", default=None, help=f"default {default_cache_dir()}")
    p.add_argument("--refresh", action="store_true")
    p.set_defaults(func=cmd_fetch)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        return args.func(args)
    except (HyperquadError, ValueError, OSError, RuntimeError) as exc:
        print(f"hyperquad: error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
