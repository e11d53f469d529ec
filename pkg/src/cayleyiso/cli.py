"""Command-line front end.

Subcommands mirror the library: ``growth``, ``phi``, ``avg-length``,
``boundary``, ``check``, ``transport``, ``folner``, ``convert``, ``certify``,
``quotient`` and ``suite``.  Every rational parameter is parsed exactly from
``p/q`` or integer syntax.  Exit codes: 0 on success (and on every check that
holds), 2 when a mathematical check is falsified (the witness is printed),
1 on usage or resource errors.

Subsets are given as ``--omega a..b`` (an integer interval, z:1 only) or as
``--omega-file`` with one canonical element key per line.  The memory budget
(maximum enumerated elements) comes from ``--memory-budget``, else the
``CAYLEYISO_MEMORY_BUDGET`` environment variable, else a built-in default.
``--threads`` is validated and recorded, but execution is sequential; results
are defined to be independent of it.
"""

from __future__ import annotations

import argparse
import json
import os
import re
import sys
from fractions import Fraction

from . import acceptance
from .balls import (
    DEFAULT_MAX_ELEMENTS,
    INFINITE,
    average_length,
    enumerate_ball,
    phi,
    table_for_volume,
)
from .constants import (
    BallSubsetsScope,
    ConnectedScope,
    CscBound,
    FolnerBound,
    certify_at_scale,
    csc_to_folner,
    folner_to_csc,
    quotient_estimate,
)
from .errors import CayleyIsoError, PreconditionUnmet
from .folner import folner_exact, folner_family_upper
from .groups import ZPowerD, make_group
from .isoperimetry import FORMS, FiniteSubset, boundary_ratio, check_inequality
from .transport import LEMMAS, build_ledger, verify_lemma

ENV_BUDGET = "CAYLEYISO_MEMORY_BUDGET"


class _Parser(argparse.ArgumentParser):
    # usage errors exit 1; exit 2 is reserved for falsified checks
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(1, f"{self.prog}: error: {message}\n")


def _rational(text: str) -> Fraction:
    try:
        return Fraction(text)
    except (ValueError, ZeroDivisionError) as exc:
        raise argparse.ArgumentTypeError(f"not an exact rational: {text!r}") from exc


def _positive_int(text: str) -> int:
    value = int(text)
    if value < 1:
        raise argparse.ArgumentTypeError(f"must be >= 1, got {text}")
    return value


def build_parser() -> _Parser:
    parser = _Parser(prog="cayleyiso", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, omega=False):
        p.add_argument("--group", required=True, help="z:<d>, free:<rank>, dinf, heis, lamplighter")
        p.add_argument("--format", choices=("csv", "json"), default="csv")
        p.add_argument("--output", default="-", help="output path, '-' for stdout")
        p.add_argument("--memory-budget", type=_positive_int, default=None,
                       help="max enumerated elements (default from environment)")
        p.add_argument("--threads", type=_positive_int, default=1,
                       help="accepted for compatibility; execution is sequential")
        if omega:
            p.add_argument("--omega", default=None, help="integer range a..b (z:1 only)")
            p.add_argument("--omega-file", default=None,
                           help="file with one canonical element key per line")

    p = sub.add_parser("growth", help="ball, sphere and average-length table")
    common(p)
    p.add_argument("--radius", type=int, required=True)

    p = sub.add_parser("phi", help="growth inverse: least r with |B(r)| > v")
    common(p)
    p.add_argument("--volume", type=_rational, required=True)
    p.add_argument("--radius", type=int, default=None, help="fixed table horizon (default: grow as needed)")

    p = sub.add_parser("avg-length", help="average word norm over B(r), exact")
    common(p)
    p.add_argument("--r", type=int, required=True)

    p = sub.add_parser("boundary", help="inner boundary and boundary ratio of a subset")
    common(p, omega=True)

    p = sub.add_parser("check", help="evaluate one isoperimetric inequality form")
    common(p, omega=True)
    p.add_argument("--form", choices=FORMS, required=True)
    p.add_argument("--alpha", type=_rational, default=None)
    p.add_argument("--eps", type=_rational, default=None)
    p.add_argument("--radius", type=int, default=None, help="fixed table horizon (default: grow as needed)")

    p = sub.add_parser("transport", help="build a transport ledger and verify counting lemmas")
    common(p, omega=True)
    p.add_argument("--r", type=int, required=True)
    p.add_argument("--lemma", choices=LEMMAS + ("all",), default="all")
    p.add_argument("--alpha", type=_rational, default=None)
    p.add_argument("--size-cap", type=_positive_int, default=64,
                   help="largest |omega| the ledger will iterate")
    p.add_argument("--radius-cap", type=_positive_int, default=6,
                   help="largest ledger radius allowed")

    p = sub.add_parser("folner", help="exact Folner value by exhaustive connected search")
    common(p)
    p.add_argument("--n", type=_positive_int, required=True)
    p.add_argument("--cap", type=_positive_int, default=10,
                   help="search size cap; cost grows exponentially with it")
    p.add_argument("--family-only", action="store_true",
                   help="report only the closed-family upper bound")

    p = sub.add_parser("convert", help="convert bound parameters between the two shapes")
    p.add_argument("--direction", choices=("csc-to-folner", "folner-to-csc"), required=True)
    p.add_argument("--c", type=_rational, required=True)
    p.add_argument("--alpha", type=_rational, required=True)
    p.add_argument("--rho", type=_rational, default=None)
    p.add_argument("--s-size", type=_positive_int, default=None)
    p.add_argument("--output", default="-")
    p.add_argument("--format", choices=("csv", "json"), default="json")

    p = sub.add_parser("certify", help="check an outer bound over an exhaustive scope")
    common(p)
    p.add_argument("--c", type=_rational, required=True)
    p.add_argument("--alpha", type=_rational, required=True)
    p.add_argument("--scope", required=True,
                   help="'b2' (all subsets of B(2)) or 'connected:<k>'")

    p = sub.add_parser("quotient", help="window statistics for the optimal-constant quotient")
    common(p)
    p.add_argument("--horizon", type=_positive_int, required=True)
    p.add_argument("--cap", type=_positive_int, default=9,
                   help="search cap for the Folner records")

    p = sub.add_parser("suite", help="run the full acceptance battery")
    p.add_argument("--threads", type=_positive_int, default=1)
    p.add_argument("--output", default="-")

    return parser


def _budget(args) -> int:
    if getattr(args, "memory_budget", None):
        return args.memory_budget
    env = os.environ.get(ENV_BUDGET)
    if env:
        try:
            value = int(env)
        except ValueError:
            raise CayleyIsoError(f"{ENV_BUDGET} must be an integer, got {env!r}")
        if value < 1:
            raise CayleyIsoError(f"{ENV_BUDGET} must be >= 1, got {value}")
        return value
    return DEFAULT_MAX_ELEMENTS


def _emit(args, text: str):
    if getattr(args, "output", "-") in ("-", None):
        sys.stdout.write(text)
        if not text.endswith("\n"):
            sys.stdout.write("\n")
    else:
        with open(args.output, "w", encoding="utf-8") as fh:
            fh.write(text if text.endswith("\n") else text + "\n")


def _json(payload) -> str:
    return json.dumps(payload, indent=2, sort_keys=False)


_RANGE = re.compile(r"^(-?\d+)\.\.(-?\d+)$")


def _parse_omega(group, args) -> FiniteSubset:
    if args.omega is not None and args.omega_file is not None:
        raise CayleyIsoError("give either --omega or --omega-file, not both")
    if args.omega is not None:
        if not (isinstance(group, ZPowerD) and group.d == 1):
            raise CayleyIsoError("--omega ranges are only defined for z:1; use --omega-file")
        m = _RANGE.match(args.omega.strip())
        if not m:
            raise CayleyIsoError(f"range must look like a..b, got {args.omega!r}")
        a, b = int(m.group(1)), int(m.group(2))
        if a > b:
            raise CayleyIsoError(f"empty range {args.omega!r}")
        return FiniteSubset(group, [(i,) for i in range(a, b + 1)])
    if args.omega_file is not None:
        with open(args.omega_file, "r", encoding="utf-8") as fh:
            subset = FiniteSubset.from_keys(group, fh)
        if not subset.elements:
            raise CayleyIsoError(f"no elements in {args.omega_file}")
        return subset
    raise CayleyIsoError("a subset is required: --omega or --omega-file")


def _cmd_growth(args) -> int:
    table = enumerate_ball(make_group(args.group), args.radius, max_elements=_budget(args))
    if args.format == "json":
        _emit(args, _json(table.to_json_dict()))
    else:
        lines = ["r,b_r,s_r,length_sum_r,avg_len_num,avg_len_den"]
        lines += [",".join(str(v) for v in row) for row in table.csv_rows()]
        _emit(args, "\n".join(lines))
    return 0


def _cmd_phi(args) -> int:
    group = make_group(args.group)
    if args.radius is not None:
        table = enumerate_ball(group, args.radius, max_elements=_budget(args))
    else:
        table = table_for_volume(group, args.volume, max_elements=_budget(args))
    value = phi(table, args.volume)
    text = "infinite" if value is INFINITE else str(value)
    if args.format == "json":
        _emit(args, _json({"group": group.descriptor, "volume": str(args.volume), "phi": text}))
    else:
        _emit(args, text)
    return 0


def _cmd_avg_length(args) -> int:
    group = make_group(args.group)
    table = enumerate_ball(group, args.r, max_elements=_budget(args))
    avg = average_length(table, args.r)
    if args.format == "json":
        _emit(args, _json({"group": group.descriptor, "r": args.r,
                           "avg_len": {"num": avg.numerator, "den": avg.denominator}}))
    else:
        _emit(args, f"{avg.numerator}/{avg.denominator}")
    return 0


def _cmd_boundary(args) -> int:
    group = make_group(args.group)
    omega = _parse_omega(group, args)
    ratio = boundary_ratio(omega)
    keys = [group.format_element(x) for x in
            sorted(omega.boundary_set(), key=group.key)]
    if args.format == "json":
        _emit(args, _json({
            "group": group.descriptor,
            "omega_size": len(omega),
            "boundary": keys,
            "ratio": {"num": ratio.numerator, "den": ratio.denominator},
        }))
    else:
        lines = keys + [f"ratio,{ratio.numerator}/{ratio.denominator}"]
        _emit(args, "\n".join(lines))
    return 0


def _inequality_volume(form, size, alpha, eps):
    if form in ("csc-original", "pete-correia"):
        return 2 * size
    if form in ("avg-growth", "growth-cor"):
        return (1 + alpha) * size
    return size / eps


def _cmd_check(args) -> int:
    group = make_group(args.group)
    omega = _parse_omega(group, args)
    if args.radius is not None:
        table = enumerate_ball(group, args.radius, max_elements=_budget(args))
    else:
        volume = _inequality_volume(args.form, len(omega), args.alpha, args.eps)
        table = table_for_volume(group, volume, max_elements=_budget(args))
    report = check_inequality(omega, table, args.form, alpha=args.alpha, eps=args.eps)
    if args.format == "json":
        _emit(args, _json(report.to_json_dict()))
    else:
        radius = "infinite" if report.radius_used is INFINITE else report.radius_used
        _emit(args, "form,lhs,rhs,holds,strict,radius_used\n"
              f"{report.form},{report.lhs.numerator}/{report.lhs.denominator},"
              f"{report.rhs.numerator}/{report.rhs.denominator},"
              f"{report.holds},{report.strict},{radius}")
    if not report.holds:
        sys.stderr.write(f"falsified: {args.form} on the given subset\n")
        return 2
    return 0


def _cmd_transport(args) -> int:
    group = make_group(args.group)
    omega = _parse_omega(group, args)
    budget = _budget(args)
    radius = args.r
    table = enumerate_ball(group, radius, max_elements=budget)
    if args.alpha is not None:
        # the alpha lemmas evaluate the growth inverse at (1+alpha)|W|
        volume = (1 + args.alpha) * len(omega)
        while table.b[-1] <= volume and not table.exhausted:
            radius *= 2
            table = enumerate_ball(group, radius, max_elements=budget)
    ledger = build_ledger(omega, table, args.r,
                          size_cap=args.size_cap, radius_cap=args.radius_cap)
    if args.lemma == "all":
        lemmas = ["transport", "counting", "fiber", "spheres", "balls"]
        if args.alpha is not None:
            lemmas += ["ray-lower", "conclude"]
    else:
        lemmas = [args.lemma]
    rows = []
    failures = []
    for name in lemmas:
        try:
            report = verify_lemma(name, table=table, ledger=ledger, alpha=args.alpha)
        except PreconditionUnmet as exc:
            # reported, never silently dropped; an unmet hypothesis is not a
            # falsification
            rows.append({"which": name, "holds": "precondition-unmet",
                         "witness": None, "detail": str(exc)})
            continue
        rows.append(report.to_json_dict())
        if not report.holds:
            failures.append(report)
    payload = ledger.to_json_dict()
    payload["lemma_results"] = rows
    if args.format == "json":
        _emit(args, _json(payload))
    else:
        lines = ["lemma,holds,detail"]
        lines += [f"{r['which']},{r['holds']},{r['detail']}" for r in rows]
        _emit(args, "\n".join(lines))
    if failures:
        for r in failures:
            sys.stderr.write(f"falsified: {r.which} with witness {r.witness}\n")
        return 2
    return 0


def _cmd_folner(args) -> int:
    group = make_group(args.group)
    if args.family_only:
        value = folner_family_upper(group, args.n)
        if args.format == "json":
            _emit(args, _json({"group": group.descriptor, "n": args.n, "family_upper": value}))
        else:
            _emit(args, f"n,family_upper\n{args.n},{value}")
        return 0
    record = folner_exact(group, args.n, args.cap)
    if args.format == "json":
        payload = record.to_json_dict()
        payload["group"] = group.descriptor
        _emit(args, _json(payload))
    else:
        row = record.csv_row()
        _emit(args, "n,value_or_bound,kind,witness_size,family_upper\n"
              + ",".join(str(v) for v in row))
    return 0


def _cmd_convert(args) -> int:
    if args.direction == "csc-to-folner":
        if args.rho is None:
            raise CayleyIsoError("csc-to-folner needs --rho > 0")
        result = csc_to_folner(CscBound(args.c, args.alpha), args.rho)
        payload = {"direction": args.direction,
                   "input": {"c": str(args.c), "alpha": str(args.alpha)},
                   "output": result.params_dict()}
    else:
        if args.rho is None or args.s_size is None:
            raise CayleyIsoError("folner-to-csc needs --rho and --s-size")
        result = folner_to_csc(FolnerBound(args.c, args.alpha, args.rho), args.s_size)
        payload = {"direction": args.direction,
                   "input": {"c": str(args.c), "alpha": str(args.alpha),
                             "rho": str(args.rho), "s_size": args.s_size},
                   "output": result.params_dict()}
    _emit(args, _json(payload))
    return 0


def _parse_scope(text: str):
    if text == "b2":
        return BallSubsetsScope(2)
    m = re.fullmatch(r"connected:(\d+)", text)
    if m:
        return ConnectedScope(int(m.group(1)))
    raise CayleyIsoError(f"scope must be 'b2' or 'connected:<k>', got {text!r}")


def _cmd_certify(args) -> int:
    group = make_group(args.group)
    scope = _parse_scope(args.scope)
    cert = certify_at_scale(group, CscBound(args.c, args.alpha), scope,
                            max_elements=_budget(args))
    if args.format == "json":
        _emit(args, _json(cert.to_json_dict()))
    else:
        _emit(args, "holds,scope,checked_sets\n"
              f"{cert.holds},{cert.scope.describe()},{cert.checked_sets}")
    if not cert.holds:
        sys.stderr.write(f"falsified with witness {cert.witness.keys()}\n")
        return 2
    return 0


def _cmd_quotient(args) -> int:
    group = make_group(args.group)
    table = enumerate_ball(group, args.horizon, max_elements=_budget(args))
    # lazy: the growth hypothesis is checked before any record is computed
    records = (folner_exact(group, n, args.cap) for n in range(1, args.horizon + 1))
    estimate = quotient_estimate(group, args.horizon, records, table)
    _emit(args, _json(estimate.to_json_dict()))
    return 0


def _cmd_suite(args) -> int:
    text, passed = acceptance.run_suite(threads=args.threads)
    _emit(args, text)
    return 0 if passed else 2


_COMMANDS = {
    "growth": _cmd_growth,
    "phi": _cmd_phi,
    "avg-length": _cmd_avg_length,
    "boundary": _cmd_boundary,
    "check": _cmd_check,
    "transport": _cmd_transport,
    "folner": _cmd_folner,
    "convert": _cmd_convert,
    "certify": _cmd_certify,
    "quotient": _cmd_quotient,
    "suite": _cmd_suite,
}


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return exc.code if isinstance(exc.code, int) else 1
    try:
        return _COMMANDS[args.command](args)
    except CayleyIsoError as exc:
        sys.stderr.write(f"cayleyiso {args.command}: error: {exc}\n")
        return 1
    except OSError as exc:
        sys.stderr.write(f"cayleyiso {args.command}: {exc}\n")
        return 1


def entry():
    sys.exit(main(sys.argv[1:]))


if __name__ == "__main__":
    entry()
