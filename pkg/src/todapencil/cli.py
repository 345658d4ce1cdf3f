"""Command line front end.

Exit codes: 0 ok, 1 I/O, schema or usage error, 2 breakdown, 3 verification failure.
"""
from __future__ import annotations

import argparse
import csv
import io as _stdio
import logging
import sys

from todapencil import demos
from todapencil import io as docio
from todapencil.pencil import PencilSpec, TransformResult, assemble_pencil, assemble_result
from todapencil.polyseq import build_family_general, check_identities
from todapencil.scalar import ParseError, ScalarMode, format_scalar
from todapencil.transform import ALGORITHMS, Breakdown, Trajectory, transform
from todapencil.verify import charpoly, check_tau_formulas, real_roots

log = logging.getLogger("todapencil")

EXIT_OK, EXIT_IO, EXIT_BREAKDOWN, EXIT_VERIFY = 0, 1, 2, 3


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    # argparse exits with 2 on usage errors, which would collide with breakdown
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_IO, f"{self.prog}: error: {message}\n")


def _read_input(path: str) -> bytes:
    if path == "-":
        return sys.stdin.buffer.read()
    with open(path, "rb") as fh:
        return fh.read()


def _write_output(path: str | None, data: bytes):
    if path is None or path == "-":
        sys.stdout.buffer.write(data)
        sys.stdout.flush()
    else:
        with open(path, "wb") as fh:
            fh.write(data)


def _report_breakdown(exc: Breakdown):
    print(f"breakdown: zero divisor {exc.divisor} at k={exc.k}, n={exc.n}", file=sys.stderr)


def cmd_transform(args) -> int:
    mode = ScalarMode.from_name(args.mode)
    if args.verify and mode is not ScalarMode.EXACT:
        raise UsageError("--verify needs --mode exact (exact equality is undefined in float mode)")
    spec = docio.read_pencil(_read_input(args.input), mode)
    try:
        result, _ = transform(spec, args.algorithm)
    except Breakdown as exc:
        _report_breakdown(exc)
        return EXIT_BREAKDOWN
    if not args.verify:
        _write_output(args.output, docio.write_result(result))
        return EXIT_OK
    A, B = assemble_pencil(spec)
    expected = charpoly(A, B)
    got = charpoly(assemble_result(result))
    verified = expected == got
    _write_output(args.output, docio.write_result(result, charpoly=got, verified=verified))
    if not verified:
        print("verification failed: characteristic polynomials differ", file=sys.stderr)
        return EXIT_VERIFY
    return EXIT_OK


def cmd_verify(args) -> int:
    """Full exact report: isospectrality, polynomial identities, tau ratios (M = 1)."""
    spec = docio.read_pencil(_read_input(args.input), ScalarMode.EXACT)
    try:
        # extra levels let the polynomial family reach every index the identities need
        result, traj = transform(spec, args.algorithm, extra_steps=spec.N + spec.M)
    except Breakdown as exc:
        _report_breakdown(exc)
        return EXIT_BREAKDOWN
    lines = []
    ok = True
    A, B = assemble_pencil(spec)
    same = charpoly(A, B) == charpoly(assemble_result(result))
    ok &= same
    lines.append(f"isospectral: {'pass' if same else 'FAIL'}")
    report = check_identities(build_family_general(traj), traj, spec)
    ok &= report.passed
    lines.extend(f"identity {c}" for c in report.checks)
    if spec.M == 1:
        tau_report = check_tau_formulas(result, spec=spec)
        ok &= tau_report.passed
        detail = "pass" if tau_report.passed else "FAIL " + ", ".join(tau_report.failures())
        lines.append(f"tau formulas: {detail}")
    positive = spec.is_positive()
    if positive:
        pos = all(x > 0 for x in traj.values())
        ok &= pos
        lines.append(f"positivity: {'pass' if pos else 'FAIL'}")
    lines.append(f"verified: {'true' if ok else 'false'}")
    _write_output(args.output, ("\n".join(lines) + "\n").encode())
    return EXIT_OK if ok else EXIT_VERIFY


def cmd_roots(args) -> int:
    data = _read_input(args.input)
    fmt = docio.document_format(data)
    if fmt == docio.PENCIL_FORMAT:
        A, B = assemble_pencil(docio.read_pencil(data))
        p = charpoly(A, B)
    elif fmt == docio.RESULT_FORMAT:
        result, _ = docio.read_result(data)
        p = charpoly(assemble_result(result))
    else:
        raise docio.SchemaError("$.format", f"unknown document format {fmt!r}")
    report = real_roots(p, args.tol)
    out = []
    for r, m in zip(report.roots, report.multiplicities):
        out.append(f"{r:.12g}" if m == 1 else f"{r:.12g} (multiplicity {m})")
    if report.non_simple:
        out.append(f"# non-simple content: {report.non_simple} root(s) multiple or non-real ({report.nonreal} non-real)")
    _write_output(args.output, ("\n".join(out) + "\n").encode())
    return EXIT_OK


def trajectory_csv(traj: Trajectory) -> str:
    buf = _stdio.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["k", "n", "q", "e", "f", "d"])
    N = traj.N
    last = -1 if traj.k_max is None else traj.k_max
    for k in range(last + 1):
        for n in range(N):
            cells = []
            for table in (traj.q, traj.e, traj.f, traj.d):
                row = table[k] if k < len(table) else None
                cells.append(format_scalar(row[n]) if row is not None and n < len(row) else "")
            w.writerow([k, n, *cells])
    return buf.getvalue()


def cmd_trajectory(args) -> int:
    mode = ScalarMode.from_name(args.mode)
    spec = docio.read_pencil(_read_input(args.input), mode)
    try:
        _, traj = transform(spec, args.algorithm)
    except Breakdown as exc:
        if exc.trajectory is not None:
            _write_output(args.output, trajectory_csv(exc.trajectory).encode())
        _report_breakdown(exc)
        return EXIT_BREAKDOWN
    _write_output(args.output, trajectory_csv(traj).encode())
    return EXIT_OK


def cmd_demo(args) -> int:
    try:
        section = int(args.section)
        factory = demos.DEMOS[section]
    except (ValueError, KeyError):
        raise UsageError(f"unknown demo section {args.section!r}; choose 2, 3 or 4") from None
    _write_output(args.output, docio.write_pencil(factory()))
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="todapencil", description=__doc__.splitlines()[0])
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def common(p, mode=True, algorithm=True):
        p.add_argument("--input", "-i", required=True, help="input document, '-' for stdin")
        p.add_argument("--output", "-o", default=None, help="output path (default stdout)")
        if mode:
            p.add_argument("--mode", default="exact", choices=["exact", "f64"])
        if algorithm:
            p.add_argument("--algorithm", default="auto", choices=ALGORITHMS)

    p = sub.add_parser("transform", help="transform a pencil into a tridiagonal/Hessenberg matrix")
    common(p)
    p.add_argument("--verify", action="store_true", help="attach the exact charpoly and a verified flag")
    p.set_defaults(func=cmd_transform)

    p = sub.add_parser("verify", help="run every exact check on a pencil")
    common(p, mode=False)
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("roots", help="real roots of the charpoly of a pencil or result")
    common(p, mode=False, algorithm=False)
    p.add_argument("--tol", type=float, default=1e-10)
    p.set_defaults(func=cmd_roots)

    p = sub.add_parser("trajectory", help="dump the Toda evolution as CSV")
    common(p)
    p.set_defaults(func=cmd_trajectory)

    p = sub.add_parser("demo", help="emit a built-in pencil document")
    p.add_argument("--section", required=True, help="2, 3 or 4")
    p.add_argument("--output", "-o", default=None)
    p.set_defaults(func=cmd_demo)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.WARNING, format="%(message)s")
    try:
        return args.func(args)
    except UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return EXIT_IO
    except (OSError, docio.SchemaError, ParseError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_IO


if __name__ == "__main__":
    sys.exit(main())
