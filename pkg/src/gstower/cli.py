"""Command-line front end.

    gstower presentation --file F --max-degree N
    gstower tower --config F --n-start A --n-end B --k K
    gstower poly --coeffs "1 -3 2" | --q D R Rp p

Exit codes: 0 success, 1 input error, 2 inconclusive or no witness,
3 failed tower hypotheses.
"""

import argparse
import csv
import io
import json
import os
import sys
from fractions import Fraction

from .errors import GsTowerError, HypothesisError, InconclusiveError, WordSyntaxError
from .gspoly import (
    GsPolynomial,
    certified_negativity,
    critical_point,
    evaluate,
    format_polynomial,
    m_lower_bound,
    negativity_sides,
    negativity_witness,
    q_at_tn,
    q_polynomial,
)
from .presentation import Presentation, gs_polynomial, hilbert_coeffs, relator_depths, rho_estimate
from .tower import check_hypotheses, growth_table, tower_from_config

EXIT_OK, EXIT_INPUT, EXIT_INCONCLUSIVE, EXIT_HYPOTHESIS = 0, 1, 2, 3
DEFAULT_TOL = Fraction(1, 2**20)


def fmt_q(x):
    """Exact rational with a 6-decimal companion, e.g. ``44/13 (3.384615)``."""
    if x is None:
        return "-"
    x = Fraction(x)
    if x.denominator == 1:
        return str(x.numerator)
    return f"{x} ({float(x):.6f})"


def exact(x):
    return "" if x is None else str(Fraction(x))


def decimal(x):
    return "" if x is None else f"{float(Fraction(x)):.6f}"


class Report:
    """Collects key/value lines and one table, then renders in a chosen format."""

    def __init__(self):
        self.fields = []
        self.header = None
        self.rows = []

    def add(self, key, value):
        self.fields.append((key, value))

    def table(self, header, rows):
        self.header = list(header)
        self.rows = [list(r) for r in rows]

    def render(self, kind):
        if kind == "json":
            out = {k: v for k, v in self.fields}
            if self.header:
                out["rows"] = [dict(zip(self.header, r)) for r in self.rows]
            return json.dumps(out, indent=2, default=str) + "\n"
        if kind == "csv":
            buf = io.StringIO()
            w = csv.writer(buf, lineterminator="\n")
            if self.header:
                w.writerow(self.header)
                w.writerows(self.rows)
            for k, v in self.fields:
                w.writerow(["#", k, v])
            return buf.getvalue()
        lines = []
        if self.fields:
            width = max(len(k) for k, _ in self.fields)
            lines += [f"{k.ljust(width)}  {v}" for k, v in self.fields]
        if self.header:
            cells = [self.header] + [[str(c) for c in r] for r in self.rows]
            widths = [max(len(r[i]) for r in cells) for i in range(len(self.header))]
            if lines:
                lines.append("")
            for i, r in enumerate(cells):
                lines.append("  ".join(c.rjust(wd) for c, wd in zip(r, widths)).rstrip())
                if i == 0:
                    lines.append("  ".join("-" * wd for wd in widths))
        return "\n".join(lines) + "\n"


def _limit_threads():
    value = os.environ.get("GSTOWER_THREADS")
    if not value:
        return
    try:
        from threadpoolctl import threadpool_limits
    except ImportError:
        return
    threadpool_limits(int(value))


# presentation ------------------------------------------------------------------

def cmd_presentation(args, out):
    with open(args.file) as fh:
        text = fh.read()
    try:
        P = Presentation.from_json(text)
    except json.JSONDecodeError as exc:
        raise GsTowerError(f"{args.file}: invalid JSON at line {exc.lineno}, column {exc.colno}") from None
    except WordSyntaxError as exc:
        raise GsTowerError(f"{args.file}: {exc}") from None
    N = args.max_degree
    rep = Report()
    depths = relator_depths(P, N)
    H = hilbert_coeffs(P, N)
    rep.add("p", P.p)
    rep.add("generators", " ".join(P.labels))
    rep.add("depths", ",".join(str(dv) for dv in depths))
    rep.add("coefficients", ",".join(str(c) for c in H.coeffs))
    rep.add("stabilized", H.stabilized)
    rep.add("sum", H.total())
    code = EXIT_OK
    try:
        Pgs = gs_polynomial(P, N)
    except InconclusiveError as exc:
        rep.add("gs_polynomial", f"inconclusive: {exc}")
        code = EXIT_INCONCLUSIVE
    else:
        rep.add("gs_polynomial", format_polynomial(Pgs))
        try:
            w = negativity_witness(Pgs, args.tol)
        except InconclusiveError as exc:
            rep.add("witness", f"inconclusive: {exc}")
            code = EXIT_INCONCLUSIVE
        else:
            if w is None:
                rep.add("witness", "none")
                rep.add("rho_lower_bound", "-")
                if not H.stabilized:
                    code = EXIT_INCONCLUSIVE
            else:
                rep.add("witness", fmt_q(w.t0))
                rep.add("inf_bracket", f"[{fmt_q(w.lo)}, {fmt_q(w.hi)}]")
                rep.add("rho_lower_bound", fmt_q(1 / w.hi))
    if N >= 2:
        rep.add("rho_estimate", fmt_q(rho_estimate(H)))
    rep.table(["n", "c_n"], [[n, c] for n, c in enumerate(H.coeffs)])
    out.write(rep.render(args.format))
    return code


# tower -------------------------------------------------------------------------

def _read_config(path):
    if path == "-":
        return sys.stdin.read()
    with open(path) as fh:
        return fh.read()


def cmd_tower(args, out):
    text = _read_config(args.config)
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise GsTowerError(f"invalid JSON at line {exc.lineno}, column {exc.colno}") from None
    if args.k is not None:
        data["k"] = args.k
    spec, dmodel, cmodel = tower_from_config(data)
    report = check_hypotheses(spec)
    rep = Report()
    for c in report.conditions:
        rep.add(f"condition ({c.label})", f"{c.comparison} {'pass' if c.passed else 'FAIL'}")
    if not report.passed:
        out.write(rep.render(args.format))
        failed = ", ".join(f"({c.label})" for c in report.failures)
        print(f"error: hypotheses fail: {failed}", file=sys.stderr)
        return EXIT_HYPOTHESIS
    if args.n_end < args.n_start or args.n_start < 0:
        raise GsTowerError("need 0 <= n-start <= n-end")
    T = growth_table(spec, dmodel, cmodel, range(args.n_start, args.n_end + 1), spec.k)
    rows = []
    for row in T.rows:
        pr = row.profile
        rows.append([
            row.n, pr.D, pr.R, pr.Rp, exact(pr.t),
            "-" if row.q_value < 0 else ("0" if row.q_value == 0 else "+"),
            str(row.certified).lower(),
            exact(row.rho_bound), decimal(row.rho_bound),
            exact(row.m_bound), decimal(row.m_bound),
        ])
    rep.table(["n", "D_n", "R_n", "Rp_n", "t_n", "Q_sign", "certified",
               "rho_bound", "rho_decimal", "m_bound", "m_decimal"], rows)
    rep.add("k", spec.k)
    rep.add("C_max", fmt_q(T.C_max))
    rep.add("A", fmt_q(T.A))
    rep.add("B", fmt_q(T.B))
    rep.add("A/4-B", fmt_q(T.m_limit))
    rep.add("n0_candidate", "-" if T.n0 is None else T.n0)
    out.write(rep.render(args.format))
    return EXIT_OK if all(r.certified for r in T.rows) else EXIT_INCONCLUSIVE


# poly --------------------------------------------------------------------------

def _parse_coeffs(text):
    try:
        return [Fraction(tok) for tok in text.replace(",", " ").split()]
    except (ValueError, ZeroDivisionError):
        raise GsTowerError(f"malformed coefficient list {text!r}") from None


def cmd_poly(args, out):
    rep = Report()
    if args.q is not None:
        try:
            D, R, Rp = (Fraction(x) for x in args.q[:3])
            p = int(args.q[3])
        except (ValueError, ZeroDivisionError):
            raise GsTowerError(f"malformed Q-form {' '.join(args.q)!r}") from None
        P = q_polynomial(D, R, Rp, p)
        t = critical_point(D, R)
        lhs, rhs = negativity_sides(D, R, Rp, p)
        rep.add("polynomial", format_polynomial(P))
        rep.add("t_n", fmt_q(t))
        rep.add("Q(t_n)", fmt_q(q_at_tn(D, R, Rp, p)))
        rep.add("certified", str(certified_negativity(D, R, Rp, p) and 0 < t < 1).lower())
        rep.add("inequality", f"{fmt_q(lhs)} vs {fmt_q(rhs)}")
        rep.add("m_bound", fmt_q(m_lower_bound(D, R, Rp, p)))
    else:
        coeffs = _parse_coeffs(args.coeffs)
        if not coeffs:
            raise GsTowerError("empty coefficient list")
        P = GsPolynomial.from_coefficients(coeffs)
        rep.add("polynomial", format_polynomial(P))
    grid = [Fraction(i, 8) for i in range(9)]
    rep.table(["t", "P(t)"], [[exact(t), fmt_q(evaluate(P, t))] for t in grid])
    try:
        w = negativity_witness(P, args.tol)
    except InconclusiveError as exc:
        rep.add("witness", f"inconclusive: {exc}")
        out.write(rep.render(args.format))
        return EXIT_INCONCLUSIVE
    if w is None:
        rep.add("witness", "no witness")
        out.write(rep.render(args.format))
        return EXIT_INCONCLUSIVE
    rep.add("witness", fmt_q(w.t0))
    rep.add("inf_bracket", f"[{fmt_q(w.lo)}, {fmt_q(w.hi)}]")
    rep.add("rho_lower_bound", fmt_q(1 / w.hi))
    out.write(rep.render(args.format))
    return EXIT_OK


def build_parser():
    parser = argparse.ArgumentParser(prog="gstower", description=__doc__.split("\n")[0])
    parser.add_argument("--format", choices=["table", "csv", "json"], default="table")
    parser.add_argument("--tol", type=Fraction, default=DEFAULT_TOL, help="bracket width for witnesses")
    sub = parser.add_subparsers(dest="command", required=True)

    # subcommand-local copies so options work on either side of the command
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=["table", "csv", "json"], default=argparse.SUPPRESS)
    common.add_argument("--tol", type=Fraction, default=argparse.SUPPRESS)

    sp = sub.add_parser("presentation", parents=[common], help="analyse a pro-p presentation")
    sp.add_argument("--file", required=True)
    sp.add_argument("--max-degree", type=int, default=8)
    sp.set_defaults(func=cmd_presentation)

    st = sub.add_parser("tower", parents=[common], help="growth table for a Z_p-tower")
    st.add_argument("--config", required=True, help="JSON file, or - for stdin")
    st.add_argument("--n-start", type=int, default=0)
    st.add_argument("--n-end", type=int, default=6)
    st.add_argument("--k", type=int, default=None)
    st.set_defaults(func=cmd_tower)

    so = sub.add_parser("poly", parents=[common], help="analyse a single polynomial")
    group = so.add_mutually_exclusive_group(required=True)
    group.add_argument("--coeffs", help='ascending coefficients, e.g. "1 -3 2"')
    group.add_argument("--q", nargs=4, metavar=("D", "R", "Rp", "p"))
    so.set_defaults(func=cmd_poly)
    return parser


def main(argv=None, out=None):
    out = out or sys.stdout
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_OK if exc.code == 0 else EXIT_INPUT
    if args.tol <= 0:
        print("error: tolerance must be positive", file=sys.stderr)
        return EXIT_INPUT
    _limit_threads()
    try:
        return args.func(args, out)
    except HypothesisError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_HYPOTHESIS
    except InconclusiveError as exc:
        print(f"inconclusive: {exc}", file=sys.stderr)
        return EXIT_INCONCLUSIVE
    except (GsTowerError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
