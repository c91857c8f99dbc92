"""Command-line front end.

Exit status: 0 on success (or a proven certificate), 1 on usage or input
errors, 2 when the answer is honestly inconclusive (failed certification,
search-only or unknown constant).
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from decimal import Decimal, localcontext
from fractions import Fraction
from pathlib import Path

from .certify import certify_supremum, dump_certificate, find_defect, load_certificate
from .constants import (
    Provenance,
    SigmaConstant,
    ThetaSpec,
    UnknownConstant,
    search_candidates,
    sigma_constant,
)
from .exact import RatioPair, format_rational, parse_rational
from .sigma import SigmaEnclosure, sigma2_enclosure, sigma2_exact
from .simulator import lil_trace

EXIT_OK, EXIT_USAGE, EXIT_INCONCLUSIVE = 0, 1, 2
MAX_DEPTH_ENV = "LIL_SIGMA_MAX_DEPTH"


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def decimal_text(x: Fraction, digits: int = 30) -> str:
    with localcontext() as ctx:
        ctx.prec = digits
        return str(Decimal(x.numerator) / Decimal(x.denominator))


def exact_field(x: Fraction) -> dict:
    return {"exact": format_rational(x), "decimal": decimal_text(x)}


def _rational_arg(text: str) -> Fraction:
    try:
        return parse_rational(text)
    except (ValueError, ZeroDivisionError) as exc:
        raise argparse.ArgumentTypeError(f"not a rational: {text!r}") from exc


def _ratio(args) -> RatioPair:
    try:
        return RatioPair(args.p, args.q)
    except ValueError as exc:
        raise UsageError(str(exc)) from exc


def _max_depth(args) -> int:
    if args.max_depth is not None:
        return args.max_depth
    env = os.environ.get(MAX_DEPTH_ENV)
    if env:
        try:
            return int(env)
        except ValueError as exc:
            raise UsageError(f"{MAX_DEPTH_ENV}={env!r} is not an integer") from exc
    return 8


# ---------------------------------------------------------------------------
# subcommands; each returns (exit status, document, text lines)


def cmd_sigma2(args):
    pq = _ratio(args)
    a = args.at
    if not 0 <= a < 1:
        raise UsageError("--at must lie in [0, 1)")
    if args.depth is None:
        value = sigma2_exact(pq, a)
        doc = {"p": pq.p, "q": pq.q, "at": format_rational(a), "sigma2": exact_field(value)}
        return EXIT_OK, doc, [format_rational(value)]
    enc: SigmaEnclosure = sigma2_enclosure(pq, a, args.depth)
    doc = {
        "p": pq.p, "q": pq.q, "at": format_rational(a), "depth": args.depth,
        "lower": exact_field(enc.lower), "upper": exact_field(enc.upper),
    }
    return EXIT_OK, doc, [f"[{format_rational(enc.lower)}, {format_rational(enc.upper)}]"]


def _constant_doc(const: SigmaConstant) -> dict:
    doc = {
        "sigma_squared": exact_field(const.sigma_squared),
        "provenance": const.provenance.value,
        "display": None,
        "maximizer": None if const.maximizer is None else format_rational(const.maximizer),
        "type": const.type_k,
    }
    if const.display is not None:
        coeff, radicand = const.display
        doc["display"] = {"coeff": format_rational(coeff), "radicand": format_rational(radicand),
                          "text": const.display_text()}
    return doc


def cmd_constant(args):
    if args.irrational:
        spec = ThetaSpec.irrational_powers()
    else:
        if args.p is None or args.q is None:
            raise UsageError("--p and --q are required unless --irrational is given")
        spec = ThetaSpec(_ratio(args), args.r)
    try:
        const = sigma_constant(spec, search_depth=args.search_depth,
                               certify=not args.no_certify, max_depth=_max_depth(args))
    except UnknownConstant as exc:
        doc = {"provenance": "Unknown", "reason": str(exc),
               "lower_bound": None if exc.lower_bound is None else exact_field(exc.lower_bound)}
        return EXIT_INCONCLUSIVE, doc, [f"Unknown: {exc}"]
    doc = _constant_doc(const)
    lines = [f"Sigma^2 = {format_rational(const.sigma_squared)}"]
    if const.display is not None:
        lines.append(f"Sigma = {const.display_text()}")
    lines.append(f"provenance: {const.provenance.value}")
    status = EXIT_INCONCLUSIVE if const.provenance is Provenance.SEARCH_ONLY else EXIT_OK
    return status, doc, lines


def _certificate_summary(cert) -> tuple[dict, list[str]]:
    doc = {
        "p": cert.pq.p, "q": cert.pq.q, "c": format_rational(cert.c),
        "sigma2_c": exact_field(cert.sigma2_c), "status": cert.status,
        "pieces": len(cert.verdicts),
        "failures": [
            {"lo": format_rational(f.interval.lo), "hi": format_rational(f.interval.hi),
             "depth": f.depth, "reason": f.reason}
            for f in cert.failures
        ],
    }
    lines = [f"{cert.status}: sup sigma^2 on [0,1/2) vs sigma^2({format_rational(cert.c)})"
             f" with {len(cert.verdicts)} pieces"]
    lines += [f"  unproven {f.interval} depth {f.depth}: {f.reason}" for f in cert.failures]
    return doc, lines


def cmd_certify(args):
    pq = _ratio(args)
    if pq.q == 1:
        raise UsageError("certify needs q >= 2: the derivative tail bound diverges for q = 1; "
                         "use `constant`, which has closed forms for q = 1")
    if not 0 < args.c <= Fraction(1, 2):
        raise UsageError("--c must lie in (0, 1/2]")
    cert = certify_supremum(pq, args.c, max_depth=_max_depth(args),
                            initial_depth=args.initial_depth)
    if args.emit_certificate:
        Path(args.emit_certificate).write_text(dump_certificate(cert))
    doc, lines = _certificate_summary(cert)
    return (EXIT_OK if cert.proven else EXIT_INCONCLUSIVE), doc, lines


def cmd_recheck(args):
    try:
        cert = load_certificate(Path(args.path).read_text())
    except (OSError, ValueError, KeyError) as exc:
        raise UsageError(f"cannot read certificate: {exc}") from exc
    problem = find_defect(cert)
    doc = {"path": str(args.path), "valid": problem is None, "problem": problem}
    if problem is None:
        return EXIT_OK, doc, ["certificate valid"]
    return EXIT_INCONCLUSIVE, doc, [f"certificate invalid: {problem}"]


def cmd_search(args):
    pq = _ratio(args)
    cands = search_candidates(pq, args.max_k, args.top)
    rows, lines = [], []
    for cand in cands:
        if isinstance(cand.value, SigmaEnclosure):
            value = {"lower": exact_field(cand.value.lower), "upper": exact_field(cand.value.upper)}
        else:
            value = exact_field(cand.value)
        rows.append({"k": cand.k, "n": cand.n, "c": format_rational(cand.c), "value": value})
        lines.append(f"k={cand.k} c={format_rational(cand.c)} sigma2~{decimal_text(cand.rank_value)}")
    return EXIT_OK, {"p": pq.p, "q": pq.q, "candidates": rows}, lines


def cmd_simulate(args):
    pq = _ratio(args)
    checkpoints = args.checkpoints or [args.n]
    if max(checkpoints) > args.n:
        raise UsageError("checkpoints may not exceed --n")
    try:
        reports = lil_trace(pq, args.x0, checkpoints)
    except ValueError as exc:
        raise UsageError(str(exc)) from exc
    try:
        ref = sigma_constant(ThetaSpec(pq), certify=False)
        reference = {"sigma_squared": exact_field(ref.sigma_squared),
                     "provenance": ref.provenance.value}
        ref_text = decimal_text(ref.sigma_squared)
    except UnknownConstant:
        reference, ref_text = None, "unknown"
    rows = [{"N": r.N, "d_extreme": decimal_text(r.d_extreme), "d_star": decimal_text(r.d_star),
             "lil_ratio": r.lil_ratio} for r in reports]
    lines = [f"reference Sigma^2 = {ref_text}", "N  D_N  lil_ratio"]
    lines += [f"{r.N}  {float(r.d_extreme):.6g}  {r.lil_ratio:.6f}" for r in reports]
    doc = {"p": pq.p, "q": pq.q, "x0": format_rational(args.x0), "reference": reference,
           "rows": rows}
    return EXIT_OK, doc, lines


# ---------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="lil-sigma", description=__doc__.splitlines()[0])
    parser.add_argument("--format", choices=("text", "structured"), default="text")
    parser.add_argument("--output", help="write the output document here instead of stdout")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def ratio_args(sp, required=True):
        sp.add_argument("--p", type=int, required=required)
        sp.add_argument("--q", type=int, required=required)

    sp = sub.add_parser("sigma2", help="evaluate sigma^2 at a rational point")
    ratio_args(sp)
    sp.add_argument("--at", type=_rational_arg, required=True)
    sp.add_argument("--depth", type=int, help="print an enclosure at this depth instead")
    sp.set_defaults(func=cmd_sigma2)

    sp = sub.add_parser("constant", help="compute Sigma^2 for theta^r = p/q")
    ratio_args(sp, required=False)
    sp.add_argument("--r", type=int, default=1)
    sp.add_argument("--irrational", action="store_true", help="theta with no rational power")
    sp.add_argument("--search-depth", type=int, default=6)
    sp.add_argument("--max-depth", type=int)
    sp.add_argument("--no-certify", action="store_true")
    sp.set_defaults(func=cmd_constant)

    sp = sub.add_parser("certify", help="certify that sigma^2 peaks at c")
    ratio_args(sp)
    sp.add_argument("--c", type=_rational_arg, required=True)
    sp.add_argument("--max-depth", type=int)
    sp.add_argument("--initial-depth", type=int, default=1)
    sp.add_argument("--emit-certificate", metavar="PATH")
    sp.set_defaults(func=cmd_certify)

    sp = sub.add_parser("recheck", help="re-verify a certificate file")
    sp.add_argument("path")
    sp.set_defaults(func=cmd_recheck)

    sp = sub.add_parser("search", help="rank type-k maximizer candidates")
    ratio_args(sp)
    sp.add_argument("--max-k", type=int, default=6)
    sp.add_argument("--top", type=int, default=5)
    sp.set_defaults(func=cmd_search)

    sp = sub.add_parser("simulate", help="discrepancy of an exact orbit")
    ratio_args(sp)
    sp.add_argument("--x0", type=_rational_arg, required=True)
    sp.add_argument("--n", type=int, required=True)
    sp.add_argument("--checkpoints", type=int, nargs="+")
    sp.set_defaults(func=cmd_simulate)
    return parser


def render(doc: dict, lines: list[str], fmt: str) -> str:
    if fmt == "structured":
        return json.dumps(doc, indent=2) + "\n"
    return "\n".join(lines) + "\n"


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        status, doc, lines = args.func(args)
    except UsageError as exc:
        print(f"lil-sigma: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    text = render(doc, lines, args.format)
    if args.output:
        Path(args.output).write_text(text)
    else:
        sys.stdout.write(text)
    return status


if __name__ == "__main__":
    sys.exit(main())
