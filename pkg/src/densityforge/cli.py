"""Command-line front end: ``densityforge <command> [flags]``.

Exit status is 0 on success, 1 for usage and input errors, 2 when a
resource cap stops the computation.
"""

from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction
from typing import Sequence

from .apset import ResourceCapError, limits
from .counterexamples import Example4Family, TaggedSet, default_samples, symmetric_darboux_demo
from .darboux import DarbouxRequest, as_rational, construct, dual_construct
from .density import estimate_banach, estimate_upper_asymptotic
from .dsl import parse_apset
from .harness import (
    AXIOMS,
    FUNCTIONALS,
    GeneratorConfig,
    check_axioms,
    check_weak_darboux_consequence,
)

EXIT_OK, EXIT_USAGE, EXIT_CAP = 0, 1, 2


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    # argparse exits with 2 on bad usage; 2 is reserved for resource caps here
    def error(self, message):
        raise UsageError(f"{self.prog}: {message}")


def _q(v) -> str:
    if isinstance(v, Fraction):
        return str(v)
    return f"{v:.6g}"


def _emit_json(data) -> None:
    print(json.dumps(data, sort_keys=True, indent=2))


def _table(rows: list[list[str]], header: list[str]) -> str:
    cols = [header] + rows
    widths = [max(len(r[i]) for r in cols) for i in range(len(header))]
    fmt = "  ".join(f"{{:<{w}}}" for w in widths)
    lines = [fmt.format(*header), fmt.format(*("-" * w for w in widths))]
    lines += [fmt.format(*r) for r in rows]
    return "\n".join(line.rstrip() for line in lines)


def _functional(name: str):
    try:
        return FUNCTIONALS[name]
    except KeyError:
        raise UsageError(
            f"unknown functional {name!r}; choose from {', '.join(FUNCTIONALS)}"
        ) from None


def _rational(text: str) -> Fraction:
    try:
        return as_rational(text)
    except (TypeError, ValueError) as exc:
        raise UsageError(str(exc)) from None


# ---------------------------------------------------------------------------
# commands


def cmd_eval(args) -> int:
    text = args.set if args.set is not None else args.expr
    if text is None:
        raise UsageError("eval needs a set expression (positional or --set)")
    f = _functional(args.functional)
    a = parse_apset(text)
    value = Fraction(f.eval(a))
    if args.format == "json":
        _emit_json({"expr": text, "functional": f.name, "set": a.to_json(),
                    "value": f"{value.numerator}/{value.denominator}"})
    else:
        print(value)
    return EXIT_OK


def cmd_construct(args) -> int:
    if args.x is None or args.y is None or args.target is None:
        raise UsageError("construct needs --x, --y and --target")
    req = DarbouxRequest(parse_apset(args.x), parse_apset(args.y),
                         _rational(args.target), args.depth)
    run = dual_construct if args.lower else construct
    trace = run(req)
    if args.format == "json":
        _emit_json(trace.to_json(include_sets=args.sets == "full"))
    else:
        rows = [[str(s.n), str(s.k), str(s.h), str(s.valA), str(s.valB),
                 str(s.valB - s.valA), str(s.A.modulus), str(s.B.modulus)]
                for s in trace.stages]
        print(_table(rows, ["n", "k", "h", "valA", "valB", "gap", "mod(A)", "mod(B)"]))
        print(f"sense: {trace.sense}  target: {req.target}"
              + ("  (boundary)" if trace.boundary else ""))
    if args.plot:
        from .plotting import plot_trace
        plot_trace(trace, args.plot)
    if trace.truncated:
        print(f"warning: stopped after {len(trace.stages)} of {req.depth} stages: "
              f"{trace.stop_reason}", file=sys.stderr)
        return EXIT_CAP
    return EXIT_OK


def cmd_axioms(args) -> int:
    f = _functional(args.functional)
    cfg = GeneratorConfig(args.seed, args.max_modulus, args.max_finite, args.trials)
    report = check_axioms(f, cfg)
    weak = check_weak_darboux_consequence(f, cfg) if args.weak else None
    if args.format == "json":
        out = report.to_json()
        if weak is not None:
            out["weak_darboux"] = weak.to_json()
        _emit_json(out)
        return EXIT_OK
    rows = []
    for name in AXIOMS:
        v = report.verdicts[name]
        wit = ""
        if v.witness is not None:
            w = v.witness
            wit = f"{' ; '.join(w['sets'])}  [{w['lhs']} vs {w['rhs']}]"
            if "k" in w:
                wit += f" k={w['k']} h={w['h']}"
        rows.append([name, "violated" if v.violated else "pass", str(v.trials), wit])
    print(f"functional: {f.name}  seed: {cfg.seed}  sets: {cfg.trials}")
    print(_table(rows, ["axiom", "verdict", "checks", "witness"]))
    if weak is not None:
        line = f"weak Darboux: {weak.status}"
        if weak.refuted:
            line += f" by {weak.witness} (value {weak.witness_value} > {weak.empty_value})"
        print(line)
    return EXIT_OK


def _parse_interpolant(text: str) -> TaggedSet:
    expr, sep, iota = text.rpartition(":")
    if not sep:
        raise UsageError(f"interpolant {text!r} must look like 'DSL:iota'")
    try:
        tag = int(iota)
    except ValueError:
        raise UsageError(f"interpolant iota {iota!r} is not an integer") from None
    return TaggedSet(f"X+{expr.strip()}", tag, extra=parse_apset(expr))


def cmd_demo(args) -> int:
    fam = Example4Family(n_max=args.n_max)
    if args.interpolant:
        samples = [fam.tagged_X(), fam.tagged_Y()]
        samples += [_parse_interpolant(t) for t in args.interpolant]
    else:
        samples = default_samples(fam)
    report = symmetric_darboux_demo(fam, samples)
    if args.format == "json":
        _emit_json(report.to_json())
    else:
        head = report.dstar_X_estimate
        n = head.samples[-1][0]
        print(f"d*(X) estimate at N={n}: {head.value:.6f} (exact 1/4)")
        rows = [[e.name, str(e.iota), _q(e.dstar), _q(e.value),
                 "exact" if e.exact else "estimate",
                 f"[{e.lower_bound}, {e.upper_bound}]",
                 "yes" if e.certified_not_half else "no"]
                for e in report.entries]
        print(_table(rows, ["set", "iota", "d*", "theta*", "kind", "bounds",
                            "certified != 1/2"]))
        print(f"attains 1/2: {'yes' if report.attains_half else 'no'}  ({report.note})")
    if args.plot:
        from .plotting import plot_demo
        plot_demo(report, args.plot)
    return EXIT_OK


def _schedule(text: str) -> list[int]:
    try:
        return [int(t) for t in text.split(",") if t.strip()]
    except ValueError:
        raise UsageError(f"schedule {text!r} must be comma-separated integers") from None


def cmd_estimate(args) -> int:
    if args.set is None:
        raise UsageError("estimate needs --set")
    a = parse_apset(args.set)
    if args.window is not None:
        kind = "banach"
        est = estimate_banach(a, args.window, args.scan)
    else:
        kind = "upper_asymptotic"
        est = estimate_upper_asymptotic(a, _schedule(args.schedule))
    exact = Fraction(FUNCTIONALS["canonical"].eval(a))
    if args.format == "json":
        out = est.to_json()
        out.update(kind=kind, set=a.to_json(),
                   exact=f"{exact.numerator}/{exact.denominator}")
        _emit_json(out)
    else:
        rows = [[str(n), str(r), f"{float(r):.6f}"] for n, r in est.samples]
        print(_table(rows, ["N", "ratio", "float"]))
        line = f"{kind} estimate: {est.value:.6f}  exact value: {exact}"
        if est.bound is not None:
            line += f"  error bound: {est.bound}"
        print(line)
    if args.plot:
        from .plotting import plot_estimate
        plot_estimate(est, args.plot, reference=exact)
    return EXIT_OK


# ---------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    common = _Parser(add_help=False)
    common.add_argument("--format", choices=("table", "json"), default="table")
    common.add_argument("--lcm-cap", type=int, default=None,
                        help="largest modulus any intermediate set may reach")

    parser = _Parser(prog="densityforge",
                     description="Exact densities on eventually periodic sets.")
    sub = parser.add_subparsers(dest="command", metavar="COMMAND",
                                parser_class=_Parser)

    p = sub.add_parser("eval", parents=[common], help="evaluate a functional on a set")
    p.add_argument("expr", nargs="?")
    p.add_argument("--set")
    p.add_argument("--functional", default="canonical")
    p.set_defaults(run=cmd_eval)

    p = sub.add_parser("construct", parents=[common],
                       help="build nested sets approaching a target density")
    p.add_argument("--x")
    p.add_argument("--y")
    p.add_argument("--target")
    p.add_argument("--depth", type=int, default=3)
    p.add_argument("--lower", action="store_true", help="use the lower density")
    p.add_argument("--sets", choices=("full", "summary"), default="full",
                   help="JSON: full residue lists or sizes only")
    p.add_argument("--plot", metavar="PATH")
    p.set_defaults(run=cmd_construct)

    p = sub.add_parser("axioms", parents=[common], help="randomized axiom checks")
    p.add_argument("--functional", default="canonical")
    p.add_argument("--trials", type=int, default=500)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--max-modulus", type=int, default=60)
    p.add_argument("--max-finite", type=int, default=8)
    p.add_argument("--weak", action="store_true",
                   help="also search finite sets refuting the weak Darboux property")
    p.set_defaults(run=cmd_axioms)

    p = sub.add_parser("demo", parents=[common], help="theta* on the factorial blocks")
    p.add_argument("--n-max", type=int, default=3)
    p.add_argument("--interpolant", action="append", metavar="DSL:IOTA",
                   help="sample X ∪ S with the given iota tag (repeatable)")
    p.add_argument("--plot", metavar="PATH")
    p.set_defaults(run=cmd_demo)

    p = sub.add_parser("estimate", parents=[common], help="counting density estimates")
    p.add_argument("--set")
    p.add_argument("--schedule", default="1000,10000,100000")
    p.add_argument("--window", type=int)
    p.add_argument("--scan", type=int, default=100000)
    p.add_argument("--plot", metavar="PATH")
    p.set_defaults(run=cmd_estimate)
    return parser


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        if args.command is None:
            raise UsageError(f"{parser.prog}: missing command")
        with limits(lcm_cap=args.lcm_cap):
            return args.run(args)
    except UsageError as exc:
        print(parser.format_usage().rstrip(), file=sys.stderr)
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except ResourceCapError as exc:
        print(f"error: resource cap: {exc}", file=sys.stderr)
        return EXIT_CAP
    except ValueError as exc:
        # DSL syntax errors, bad rationals and failed preconditions
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
