"""Command-line interface.

Exit status: 0 on success, 1 for bad input or usage, 2 when the mathematics
fails (degenerate frames, failed verification suites).
"""

from __future__ import annotations

import argparse
import logging
import sys

import numpy as np

from .catalog import EXPECTED_VERDICTS
from .classify import VERDICT_ORDER
from .curvedoc import load_curve_spec
from .curves import FAMILIES, UnitSpeedCurve
from .equiform import equiform_apparatus
from .errors import DegenerateTorsion, KernelError, ValidationError
from .frenet import frenet_apparatus
from .runner import fmt, run_analyze, run_verify

EXIT_OK, EXIT_INPUT, EXIT_KERNEL = 0, 1, 2


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_INPUT, f"{self.prog}: error: {message}\n")


def _positive(text: str) -> float:
    try:
        x = float(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a number: {text!r}") from None
    if not np.isfinite(x) or x <= 0:
        raise argparse.ArgumentTypeError(f"must be a positive number: {text!r}")
    return x


def _global_flags(defaults: bool) -> argparse.ArgumentParser:
    # parsed both before and after the subcommand; SUPPRESS keeps the later one from
    # overwriting an earlier value with its default
    p = argparse.ArgumentParser(add_help=False)
    kw = {} if defaults else {"default": argparse.SUPPRESS}
    p.add_argument("--tol", type=_positive, help="classification threshold", **kw)
    p.add_argument("--fd-step", type=_positive, help="finite-difference step", **kw)
    p.add_argument("--eps-null", type=_positive, help="lightlike threshold", **kw)
    return p


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="minkcurve", parents=[_global_flags(True)],
                     description="Frenet and equiform invariants of curves in Minkowski 4-space.")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)
    common = [_global_flags(False)]

    a = sub.add_parser("analyze", parents=common, help="profile and classify a curve")
    a.add_argument("spec", help="curve description (JSON)")
    a.add_argument("--out", default="out", help="output directory (default: out)")
    a.add_argument("--format", choices=("csv", "json"), default="csv")

    v = sub.add_parser("verify", parents=common, help="run residual and homothety suites")
    v.add_argument("spec")
    v.add_argument("--lambda", dest="lambdas", type=_positive, nargs="+", default=[2.0],
                   metavar="L", help="homothety coefficients (default: 2)")

    sub.add_parser("catalog", parents=common, help="list builtin curve families")

    f = sub.add_parser("frame", parents=common, help="print the apparatus at one arclength value")
    f.add_argument("spec")
    f.add_argument("--at", type=float, required=True, metavar="S", help="arclength value")
    return parser


def _tolerances(args, spec):
    return spec.tolerances.replace(tol=args.tol, fd_step=args.fd_step, eps_null=args.eps_null)


def _cmd_catalog(args) -> int:
    for name, fam in FAMILIES.items():
        comps = ", ".join(c.format(**{k: k for k in fam.defaults}) for c in fam.template)
        params = ", ".join(f"{k}={v:.10g}" for k, v in fam.defaults.items())
        verdicts = ", ".join(v for v in VERDICT_ORDER if v in EXPECTED_VERDICTS[name]) or "None"
        print(f"{name}: ({comps}) on [{fam.domain[0]:.10g}, {fam.domain[1]:.10g}]"
              + (f"; {params}" if params else "") + f"; expected {verdicts}")
    return EXIT_OK


def _print_report(report) -> None:
    print(f"curve: {report.name} ({report.causal}, {report.case})")
    print(f"rows: {len(report.profile)} of {report.samples_requested}")
    for s, reason in report.profile.dropped:
        print(f"  dropped s={fmt(s)}: {reason}")
    print("verdicts: " + ", ".join(report.verdicts))
    for name, suite in report.suites.items():
        worst = "n/a" if suite.max_residual is None else f"{suite.max_residual:.3e}"
        state = "pass" if suite.passed else "FAIL"
        note = f" [{suite.note}]" if suite.note else ""
        print(f"{name}: max residual {worst} (threshold {suite.threshold:.1e}) {state}{note}")
    for h in report.homothety:
        state = "pass" if h["passed"] else "FAIL"
        print(f"homothety lambda={h['lambda']:g}: max deviation "
              f"{max(*h['kappa'], h['rho'], *h['K'], h['sigma']):.3e} {state}")


def _cmd_analyze(args) -> int:
    spec = load_curve_spec(args.spec)
    report = run_analyze(spec, args.out, args.format, _tolerances(args, spec))
    _print_report(report)
    print(f"wrote {args.out}")
    return EXIT_OK


def _cmd_verify(args) -> int:
    spec = load_curve_spec(args.spec)
    report = run_verify(spec, args.lambdas, _tolerances(args, spec))
    _print_report(report)
    return EXIT_OK if report.passed else EXIT_KERNEL


def _cmd_frame(args) -> int:
    spec = load_curve_spec(args.spec)
    curve = UnitSpeedCurve(spec.build_source(), _tolerances(args, spec))
    if not 0.0 <= args.at <= curve.length:
        raise ValidationError(f"--at {args.at} outside [0, {curve.length:.17g}]")
    try:
        fa = frenet_apparatus(curve, args.at)
    except DegenerateTorsion as exc:
        print(f"s = {fmt(args.at)}")
        print(f"k1 = {fmt(exc.partial['k1'])}")
        print("k2 = 0 (planar: b1, b2 undefined)")
        raise
    ea = equiform_apparatus(curve, args.at)
    print(f"s = {fmt(fa.s)}")
    print(f"sigma = {fmt(ea.sigma)}")
    print(f"case = {fa.signature.case}")
    for label, val in zip(("k1", "k2", "k3"), fa.kappas):
        print(f"{label} = {fmt(val)}")
    print(f"rho = {fmt(ea.rho)}")
    for label, val in zip(("EK1", "EK2", "EK3"), ea.curvatures):
        print(f"{label} = {fmt(val)}")
    for label, row in zip(("t", "n", "b1", "b2"), fa.frame):
        print(f"{label} = " + " ".join(fmt(x) for x in row))
    return EXIT_OK


COMMANDS = {"analyze": _cmd_analyze, "verify": _cmd_verify, "catalog": _cmd_catalog,
            "frame": _cmd_frame}


def main(argv=None) -> int:
    logging.basicConfig(level=logging.WARNING, format="%(levelname)s: %(message)s")
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_INPUT if exc.code not in (0, None) else EXIT_OK
    try:
        return COMMANDS[args.command](args)
    except ValidationError as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except KernelError as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_KERNEL


if __name__ == "__main__":
    sys.exit(main())
