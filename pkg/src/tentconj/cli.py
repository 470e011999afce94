"""Command-line front end: ``tentconj <command> ...``.

Exit status is 0 on success, 1 when a mathematical check fails and 2 on
usage errors (bad flags, malformed rationals, unreadable files).
"""

from __future__ import annotations

import argparse
import csv
import io
import math
import sys
from fractions import Fraction

from . import __version__
from . import analysis, conjugacy, itergroup, plconj, plmap, semiconj
from .exactnum import format_decimal, format_rat, parse_rat


class MathFailure(Exception):
    """A well-formed request whose mathematical check failed."""


def _rat(text):
    try:
        return parse_rat(text)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None


def _unit_open(text):
    r = _rat(text)
    if not 0 < r < 1:
        raise argparse.ArgumentTypeError("value must lie strictly between 0 and 1")
    return r


def _read(path):
    try:
        return plmap.read_plmap(path)
    except OSError as exc:
        raise UsageError(f"cannot read {path}: {exc.strerror}") from None
    except ValueError as exc:
        raise UsageError(f"{path}: {exc}") from None


class UsageError(Exception):
    pass


def _emit(text: str, out: str | None):
    if out in (None, "-"):
        sys.stdout.write(text)
    else:
        with open(out, "w", newline="\n") as fh:
            fh.write(text)


def _csv(header, rows) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(header)
    writer.writerows(rows)
    return buf.getvalue()


def _num(value, digits):
    return format_rat(value) if digits is None else format_decimal(value, digits)


# conj -----------------------------------------------------------------------

def cmd_conj_table(args):
    sys_ = conjugacy.ConjSystem(args.v)
    pts = [p.to_rat() for p in conjugacy.build_A(args.n).points]
    digits = None if args.exact else args.digits
    rows = [(_num(x, digits), _num(conjugacy.h_on_dyadic(sys_, x), digits)) for x in pts]
    _emit(_csv(["x", "h"], rows), args.out)


def cmd_conj_eval(args):
    value, err = conjugacy.h_eval(conjugacy.ConjSystem(args.v), args.x, args.tol)
    digits = args.digits
    _emit(_csv(["x", "h", "error_bound"],
               [(format_rat(args.x), _num(value, digits), _num(err, digits))]), args.out)


# analysis --------------------------------------------------------------------

def cmd_length(args):
    if args.polyline:
        value = analysis.graph_length_polyline(args.v, args.n + 1)
    else:
        value = analysis.graph_length_formula(float(args.v), args.n)
    _emit(f"{value:.15g}\n", None)


def cmd_deriv(args):
    if args.sample is not None:
        share = analysis.flattening_fraction(args.v, args.bits, args.sample, args.seed)
        _emit(f"samples={args.sample} bits={args.bits} seed={args.seed} below_1e-3={share!r}\n", args.out)
        return
    if args.x is None:
        raise UsageError("deriv needs --x or --sample")
    ev = analysis.derivative_classify(args.v, args.x, depth=args.depth)
    if args.csv:
        rows = [
            (m, "" if r is None else repr(r), "" if l is None else repr(l))
            for m, r, l in zip(ev.depths, ev.right_quotients, ev.left_quotients)
        ]
        _emit(_csv(["m", "right_quotient", "left_quotient"], rows), args.out)
    else:
        _emit(
            f"claimed={ev.claimed} observed={ev.observed} "
            f"contradiction={str(ev.contradiction).lower()}\n",
            args.out,
        )


def cmd_omega(args):
    rows = []
    tol = Fraction(1, 10**12)
    for i in range(args.samples):
        # one period in log2 x: x from 1/2 to 1
        x = Fraction(1, 2) + Fraction(i, 2 * max(args.samples - 1, 1))
        w = analysis.omega1_extract(args.v, x, tol)
        rows.append((format_rat(x), repr(math.log2(float(x))), repr(w)))
    _emit(_csv(["x", "log2x", "omega1"], rows), args.out)


def cmd_htilde(args):
    if args.threshold:
        lo, hi = analysis.htilde_threshold(args.n, args.k, args.lo, args.hi)
        _emit(f"{lo:.10f} {hi:.10f}\n", None)
        return
    res = analysis.htilde_extremum(args.v, args.n, args.k)
    _emit(f"t={res.t!r} violation={str(res.violation).lower()}\n", None)


# plconj ----------------------------------------------------------------------

def cmd_plconj_extend(args):
    half = plconj.HalfMap(args.side, _read(args.infile))
    try:
        g, h = (plconj.extend_left if args.side == "left" else plconj.extend_right)(half)
    except ValueError as exc:
        raise MathFailure(str(exc)) from None
    _emit(plmap.dumps(g), args.out_g)
    if args.out_h:
        _emit(plmap.dumps(h), args.out_h)


def cmd_plconj_type(args):
    try:
        g, h = plconj.construct_type(args.p, args.q)
    except ValueError as exc:
        raise MathFailure(str(exc)) from None
    _emit(plmap.dumps(g), args.out_g)
    if args.out_h:
        _emit(plmap.dumps(h), args.out_h)


def cmd_plconj_check(args):
    g, h = _read(args.g), _read(args.h)
    try:
        ok = plconj.check_conjugacy(g, h)
    except ValueError as exc:
        raise MathFailure(str(exc)) from None
    _emit("conjugate\n" if ok else "not conjugate\n", None)
    if not ok:
        raise MathFailure("h o f != g o h")


def cmd_plconj_perturb(args):
    res = plconj.perturb_non_conjugate(args.x0, args.eps)
    _emit(plmap.dumps(res.g), args.out)
    if res.kind == "peak":
        note = f"# peak value {format_rat(res.max_value)} < 1: 1 has no preimage\n"
    else:
        ivs = ", ".join(f"[{format_rat(a)}, {format_rat(b)}]" for a, b in res.g_fixed_intervals)
        note = (
            f"# periodic point {format_rat(res.periodic_point)} of period {res.period}; "
            f"g^{res.exponent} fixes {ivs}; f^{res.exponent} fixes no interval\n"
        )
    sys.stderr.write(note)
    if not res.certified:
        raise MathFailure("certificate check failed")


# semiconj --------------------------------------------------------------------

def cmd_semiconj_census(args):
    c = semiconj.census(args.n)
    rows = []
    if args.continuable:
        header = ["values", "witness_k", "congruence_ok", "count", "formula_count", "matches_formula"]
        for t in c.tables:
            rows.append((
                " ".join(format_rat(v) for v in t.table.values), t.witness,
                str(t.congruence_ok).lower(), c.continuable, c.continuable_formula,
                str(c.continuable_matches_formula).lower(),
            ))
    else:
        header = ["values", "count", "second_count", "formula_count", "matches_formula"]
        _, tables = semiconj.enumerate_admissible(args.n)
        for t in tables:
            rows.append((
                " ".join(format_rat(v) for v in t.values), c.admissible,
                "" if c.admissible_second is None else c.admissible_second,
                c.admissible_formula, str(c.admissible_matches_formula).lower(),
            ))
    _emit(_csv(header, rows), args.out)


# itergroup -----------------------------------------------------------------

def cmd_itergroup_classify(args):
    c = itergroup.classify_finite_group(_read(args.infile))
    if c.finite:
        _emit(f"{c.kind} {format_rat(c.a)} {format_rat(c.b)}\n", None)
    else:
        _emit("NotFinite\n", None)


def cmd_itergroup_conjugate(args):
    a, b = _read(args.a), _read(args.b)
    try:
        result = itergroup.conjugate_finite_group(a, b)
    except ValueError as exc:
        raise MathFailure(str(exc)) from None
    _emit(result + "\n", None)


# plot ------------------------------------------------------------------------

def svg_polyline(points, size: int = 1024) -> str:
    coords = " ".join(
        f"{float(x) * size:.4f},{(1 - float(y)) * size:.4f}" for x, y in points
    )
    return (
        '<?xml version="1.0" encoding="UTF-8"?>\n'
        f'<svg xmlns="http://www.w3.org/2000/svg" version="1.1" '
        f'viewBox="0 0 {size} {size}" width="{size}" height="{size}">\n'
        f'<polyline fill="none" stroke="black" stroke-width="1" points="{coords}"/>\n'
        "</svg>\n"
    )


def cmd_plot(args):
    if args.what == "hn":
        if args.v is None or args.n is None:
            raise UsageError("plot --what hn needs --v and --n")
        sys_ = conjugacy.ConjSystem(args.v)
        xs = [p.to_rat() for p in conjugacy.build_A(args.n).points]
        points = list(zip(xs, sys_.B(args.n)))  # keep every grid vertex
    else:
        if args.infile is None:
            raise UsageError("plot --what plmap needs --in")
        points = _read(args.infile).points
    _emit(svg_polyline(points), args.out)


# parser ----------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="tentconj", description=__doc__.splitlines()[0])
    p.add_argument("--version", action="version", version=f"tentconj {__version__}")
    sub = p.add_subparsers(dest="command", required=True)

    conj = sub.add_parser("conj", help="values of the tent/skew-tent conjugacy")
    csub = conj.add_subparsers(dest="action", required=True)
    t = csub.add_parser("table", help="h on the grid A_n as CSV")
    t.add_argument("--v", type=_unit_open, required=True)
    t.add_argument("--n", type=int, required=True)
    mode = t.add_mutually_exclusive_group()
    mode.add_argument("--digits", type=int, default=None)
    mode.add_argument("--exact", action="store_true")
    t.add_argument("--out")
    t.set_defaults(func=cmd_conj_table)
    e = csub.add_parser("eval", help="certified enclosure of h(x)")
    e.add_argument("--v", type=_unit_open, required=True)
    e.add_argument("--x", type=_rat, required=True)
    e.add_argument("--tol", type=_rat, default=Fraction(1, 10**12))
    e.add_argument("--digits", type=int, default=None)
    e.add_argument("--out")
    e.set_defaults(func=cmd_conj_eval)

    ln = sub.add_parser("length", help="length of the graph of h_{n+1}")
    ln.add_argument("--v", type=_unit_open, required=True)
    ln.add_argument("--n", type=int, required=True)
    lmode = ln.add_mutually_exclusive_group()
    lmode.add_argument("--formula", action="store_true")
    lmode.add_argument("--polyline", action="store_true")
    ln.set_defaults(func=cmd_length)

    d = sub.add_parser("deriv", help="difference-quotient evidence for h'(x)")
    d.add_argument("--v", type=_unit_open, required=True)
    d.add_argument("--x", type=_rat)
    d.add_argument("--depth", type=int, default=40)
    d.add_argument("--sample", type=int, help="random digit strings for the flattening statistic")
    d.add_argument("--bits", type=int, default=200)
    d.add_argument("--seed", type=int, default=20240601)
    d.add_argument("--csv", action="store_true")
    d.add_argument("--out")
    d.set_defaults(func=cmd_deriv)

    o = sub.add_parser("omega", help="periodic factor of h in log2 x")
    o.add_argument("--v", type=_unit_open, required=True)
    o.add_argument("--samples", type=int, default=65)
    o.add_argument("--out")
    o.set_defaults(func=cmd_omega)

    ht = sub.add_parser("htilde", help="monotonicity of the log-domain interpolant")
    ht.add_argument("--v", type=float, default=0.2)
    ht.add_argument("--n", type=int, default=3)
    ht.add_argument("--k", type=int, default=3)
    ht.add_argument("--threshold", action="store_true", help="bisect on v over [--lo, --hi]")
    ht.add_argument("--lo", type=float, default=0.1)
    ht.add_argument("--hi", type=float, default=0.3)
    ht.set_defaults(func=cmd_htilde)

    pc = sub.add_parser("plconj", help="piecewise-linear conjugates of the tent map")
    psub = pc.add_subparsers(dest="action", required=True)
    ex = psub.add_parser("extend", help="complete a half map")
    ex.add_argument("--side", choices=("left", "right"), required=True)
    ex.add_argument("--in", dest="infile", required=True)
    ex.add_argument("--out-g")
    ex.add_argument("--out-h")
    ex.set_defaults(func=cmd_plconj_extend)
    ty = psub.add_parser("type", help="a map of linearity type (p, q)")
    ty.add_argument("--p", type=int, required=True)
    ty.add_argument("--q", type=int, required=True)
    ty.add_argument("--out-g")
    ty.add_argument("--out-h")
    ty.set_defaults(func=cmd_plconj_type)
    ck = psub.add_parser("check", help="exact test of h o f = g o h")
    ck.add_argument("--g", required=True)
    ck.add_argument("--h", required=True)
    ck.set_defaults(func=cmd_plconj_check)
    pt = psub.add_parser("perturb", help="non-conjugate perturbation of the tent map")
    pt.add_argument("--x0", type=_rat, required=True)
    pt.add_argument("--eps", type=_rat, required=True)
    pt.add_argument("--out")
    pt.set_defaults(func=cmd_plconj_perturb)

    sc = sub.add_parser("semiconj", help="self-semiconjugations of the tent map")
    ssub = sc.add_subparsers(dest="action", required=True)
    ce = ssub.add_parser("census", help="grid solutions with closed-form comparison")
    ce.add_argument("--n", type=int, required=True)
    ce.add_argument("--continuable", action="store_true")
    ce.add_argument("--out")
    ce.set_defaults(func=cmd_semiconj_census)

    ig = sub.add_parser("itergroup", help="maps with a finite iteration group")
    isub = ig.add_subparsers(dest="action", required=True)
    cl = isub.add_parser("classify")
    cl.add_argument("--in", dest="infile", required=True)
    cl.set_defaults(func=cmd_itergroup_classify)
    cj = isub.add_parser("conjugate")
    cj.add_argument("--a", required=True)
    cj.add_argument("--b", required=True)
    cj.set_defaults(func=cmd_itergroup_conjugate)

    pl = sub.add_parser("plot", help="SVG polyline of a map or of h_n")
    pl.add_argument("--what", choices=("hn", "plmap"), required=True)
    pl.add_argument("--v", type=_unit_open)
    pl.add_argument("--n", type=int)
    pl.add_argument("--in", dest="infile")
    pl.add_argument("--out")
    pl.set_defaults(func=cmd_plot)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        args.func(args)
    except UsageError as exc:
        sys.stderr.write(f"tentconj: error: {exc}\n")
        return 2
    except MathFailure as exc:
        sys.stderr.write(f"tentconj: {exc}\n")
        return 1
    except ValueError as exc:
        sys.stderr.write(f"tentconj: error: {exc}\n")
        return 2
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
