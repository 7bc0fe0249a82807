"""
Command-line entry points: analyze, curve, verify-betti, pencil, corpus

Exit codes: 0 success, 1 input or validation error, 2 non-reduced input detected.
"""
import argparse
import json
import re
import sys
from pathlib import Path
from typing import List, Optional

import config
from groebner_engine import InhomogeneousInputError, SyzygyError
from hilbert_engine import NonReducedInputError
from pencil_builder import analyze_pencil
from poly_core import CoefficientField, IncompatibleOperandsError, VariableSet
from poly_parser import (PolynomialParseError, betti_from_resolution_text, parse_polynomial,
                         serialize_report)
from resolution_engine import BettiData, MalformedResolutionError
from surface_analyzer import (AnalysisOptions, CurveReport, SurfaceAnalyzer, SurfaceReport,
                              build_curve_report, build_surface_report)

EXIT_OK = 0
EXIT_ERROR = 1
EXIT_NOT_REDUCED = 2

_INPUT_ERRORS = (PolynomialParseError, MalformedResolutionError, InhomogeneousInputError,
                 IncompatibleOperandsError, SyzygyError, ValueError, OSError)


def read_input(source: str) -> str:
    """An existing file path is read as UTF-8 expression text, anything else is the expression itself"""
    path = Path(source)
    try:
        if path.is_file():
            return path.read_text(encoding="utf-8")
    except OSError:
        pass
    return source


def output_path(target: str) -> Path:
    """Bare file names land in config.OUTPUT_DIR"""
    path = Path(target)
    if path.parent == Path("."):
        path = Path(config.OUTPUT_DIR) / path
    path.parent.mkdir(parents=True, exist_ok=True)
    return path


def write_json(target: Optional[str], text: str):
    if not target:
        return
    path = output_path(target)
    path.write_text(text + "\n", encoding="utf-8")
    print(f"✓ JSON written to {path}")


def parse_sequence(text: str) -> List[int]:
    """'1,4,4,7' or '1 4^2 7' (value^multiplicity)"""
    values = []
    for token in re.split(r"[,\s]+", (text or "").strip()):
        if not token:
            continue
        match = re.fullmatch(r"(-?\d+)(?:\^(\d+))?", token)
        if not match:
            raise ValueError(f"Cannot read Betti entry '{token}'")
        values.extend([int(match.group(1))] * int(match.group(2) or 1))
    return values


def _flag(ok: Optional[bool]) -> str:
    if ok is None:
        return "-"
    return "✓" if ok else "⚠️ "


def print_surface_report(report: SurfaceReport):
    print(f"\n{'=' * 60}")
    print(f"Surface of degree {report.degree} over {report.field}"
          + (" (modular: Betti numbers may exceed the rational ones)" if report.modular else ""))
    print(f"{'=' * 60}")
    print(f"  Resolution: {report.resolution_text}")
    print(f"  d = {report.betti.d}")
    print(f"  c = {report.betti.c}")
    print(f"  b = {report.betti.b}")
    ids = report.identities
    print(f"  {_flag(ids.count_check)} p + r = q + 3   ({report.betti.p} + {report.betti.r} vs {report.betti.q} + 3)")
    print(f"  {_flag(ids.sum_check)} alternating sum = d - 1   ({ids.sum_value})")
    print(f"  {_flag(ids.square_check)} (d-1)^2 + S2 = 0   ({ids.square_value})")
    if ids.smooth_pattern:
        print("  ✓ Koszul pattern: X is smooth")
    print(f"  dim Σ: {report.sigma_dimension}")
    if report.tau is not None:
        print(f"  τ(X) = {report.tau}")
    elif report.hilbert_polynomial is not None:
        hp = report.hilbert_polynomial
        print(f"  P(u) = ({hp.A_half}) u - ({hp.B})")
    if report.hilbert_polynomial is not None:
        print(f"  Hilbert function stable from degree {report.hilbert_polynomial.k0}")
    if report.coefficient_oracle is not None:
        oracle = report.coefficient_oracle
        print(f"  {_flag(oracle.leading_vanish and oracle.linear_matches and oracle.constant_matches)} "
              f"coefficient oracle ({oracle.cubic}, {oracle.quadratic}, {oracle.linear}, {oracle.constant})")
    bounds = report.bounds
    if bounds.dupw is not None:
        print(f"  {_flag(bounds.dupw.satisfied)} {bounds.dupw.lower} <= τ <= {bounds.dupw.upper}")
        print(f"  {_flag(bounds.cor_printed.satisfied)} S3 window (printed): "
              f"[{bounds.cor_printed.lower}, {bounds.cor_printed.upper}] ∋ {bounds.cor_printed.value}")
        print(f"  {_flag(bounds.cor_derived.satisfied)} S3 window (derived): "
              f"[{bounds.cor_derived.lower}, {bounds.cor_derived.upper}] ∋ {bounds.cor_derived.value}")
    if bounds.suspension_bound is not None:
        print(f"  {_flag(bounds.suspension_satisfied)} τ <= {bounds.suspension_bound} (2 d1 >= d)")
    if report.type_record.t is not None:
        print(f"  t(X) = {report.type_record.t}, α = {report.type_record.alpha}, β = {report.type_record.beta} "
              f"{_flag(report.type_record.gap_sum_matches)}")
    if report.mdr is not None:
        print(f"  mdr(f) = {report.mdr}")
    if bounds.nodal_bound is not None:
        print(f"  {_flag(bounds.nodal_satisfied)} nodal bound mdr >= {bounds.nodal_bound}")
    if report.elapsed_seconds is not None:
        print(f"  ({report.elapsed_seconds:.2f}s)")


def print_curve_report(report: CurveReport):
    print(f"\n{'=' * 60}")
    print(f"Plane curve of degree {report.degree} over {report.field}")
    print(f"{'=' * 60}")
    print(f"  Resolution: {report.resolution_text}")
    print(f"  d' = {report.betti.d}, c' = {report.betti.c}")
    print(f"  {_flag(report.count_check)} p' = q' + 2")
    print(f"  {_flag(report.sum_check)} alternating sum = d - 1")
    print(f"  τ(C) = {report.tau}")
    print(f"  t(C) = {report.type_c} ({report.classification}), ε = {report.epsilon} "
          f"{_flag(report.type_matches_epsilon)}")
    if report.exponents:
        print(f"  exponents {report.exponents} {_flag(report.free_check)}")
    if report.tjurina_maximal_bound is not None:
        print(f"  τ <= {report.tjurina_maximal_bound}{' (attained)' if report.tjurina_maximal else ''}")


def _not_reduced(e: NonReducedInputError) -> int:
    print(f"⚠️  {e}", file=sys.stderr)
    if e.resolution_text:
        print(f"   resolution: {e.resolution_text}", file=sys.stderr)
    print("   input not reduced", file=sys.stderr)
    return EXIT_NOT_REDUCED


def cmd_analyze(args) -> int:
    field = CoefficientField.from_tag(args.field)
    f = parse_polynomial(read_input(args.input), VariableSet.surface(), field)
    options = AnalysisOptions(assume_nodal=args.nodal, compute_mdr=not args.no_mdr,
                              verify=False if args.no_verify else None)
    analyzer = SurfaceAnalyzer(verbose=not args.quiet, verify=options.verify,
                               assume_nodal=options.assume_nodal, compute_mdr=options.compute_mdr)
    report = analyzer.analyze(f)
    print_surface_report(report)
    write_json(args.json, serialize_report(report))
    return EXIT_OK


def cmd_curve(args) -> int:
    field = CoefficientField.from_tag(args.field)
    f = parse_polynomial(read_input(args.input), VariableSet.curve(), field)
    report = SurfaceAnalyzer(verbose=not args.quiet).analyze_curve(f)
    print_curve_report(report)
    write_json(args.json, serialize_report(report))
    return EXIT_OK


def cmd_verify_betti(args) -> int:
    n_vars = 3 if args.curve else 4
    if args.resolution:
        betti = betti_from_resolution_text(args.resolution, args.degree, n_vars)
    else:
        betti = BettiData(args.degree, parse_sequence(args.d), parse_sequence(args.c),
                          parse_sequence(args.b), n_vars=n_vars)
    if args.curve:
        report = build_curve_report(betti, args.field)
        print_curve_report(report)
    else:
        report = build_surface_report(betti, args.field, strict=False)
        print_surface_report(report)
        if not (report.identities.count_check and report.identities.sum_check):
            print("⚠️  Betti identities fail: such data cannot come from a reduced surface")
    write_json(args.json, serialize_report(report))
    return EXIT_OK


def cmd_pencil(args) -> int:
    field = CoefficientField.from_tag(args.field)
    g = parse_polynomial(args.g, VariableSet.surface(), field)
    h = parse_polynomial(args.h, VariableSet.surface(), field)
    report = analyze_pencil(g, h, args.m)
    print(f"\n[PENCIL] f = ({g})^{args.m} + ({h})^{args.m}, degree {report.f.degree}")
    print("  ω(P) = dg ∧ dh:")
    for key, value in sorted(report.two_form.components.items()):
        print(f"    d{g.variables.names[key[0]]}∧d{g.variables.names[key[1]]}: {value}")
    for rho, content in zip(report.syzygies, report.contents):
        print(f"  {rho.label} (degree {rho.degree}, content {content}): "
              f"({', '.join(str(c) for c in rho.components)})")
    print(f"  {_flag(report.all_verified)} all four are Jacobian syzygies of f")
    print(f"  rank = {report.rank}")
    if report.plane is not None:
        print(f"  plane ℓ = {report.plane}, base curve in plane: {_flag(report.plane_contains_base)}")
    print(f"  predicted t(X) = {report.predicted_t}")
    if not report.m_verified:
        print(f"⚠️  m = {args.m} is outside the computationally checked range {config.PENCIL_VERIFIED_M}")
    if args.measure:
        surface = SurfaceAnalyzer(verbose=False, verify=False, compute_mdr=False).analyze(report.f)
        report.measured_t = surface.type_record.t
        print(f"  {_flag(report.measured_t == report.predicted_t)} measured t(X) = {report.measured_t}")
    write_json(args.json, json.dumps(report.to_dict(), indent=2, ensure_ascii=False))
    return EXIT_OK


def cmd_corpus(args) -> int:
    from corpus import CorpusRunner

    runner = CorpusRunner(max_workers=args.workers, include_slow=args.slow, field_tag=args.field)
    results = runner.run(args.filter)
    document = {"schema": config.REPORT_SCHEMA, "results": [r.model_dump() for r in results]}
    write_json(args.json, json.dumps(document, indent=2, ensure_ascii=False, default=str))
    if not results:
        return EXIT_ERROR
    return EXIT_OK if all(r.passed for r in results) else EXIT_ERROR


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(description="Betti numbers and Tjurina invariants of Jacobian algebras")
    subparsers = parser.add_subparsers(dest="command", required=True)

    def add_common(sub, field_default=config.DEFAULT_FIELD):
        sub.add_argument("--field", default=field_default, help="q or fp:<prime>")
        sub.add_argument("--json", help="write the report as JSON to this path")

    analyze = subparsers.add_parser("analyze", help="full analysis of a surface f(x, y, z, t)")
    analyze.add_argument("input", help="expression or path to a UTF-8 expression file")
    add_common(analyze)
    analyze.add_argument("--nodal", action="store_true", help="assert the surface is nodal")
    analyze.add_argument("--no-mdr", action="store_true", help="skip the mdr computation")
    analyze.add_argument("--no-verify", action="store_true", help="skip resolution checks")
    analyze.add_argument("--quiet", action="store_true")
    analyze.set_defaults(handler=cmd_analyze)

    curve = subparsers.add_parser("curve", help="analysis of a plane curve f(x, y, z)")
    curve.add_argument("input")
    add_common(curve)
    curve.add_argument("--quiet", action="store_true")
    curve.set_defaults(handler=cmd_curve)

    verify = subparsers.add_parser("verify-betti", help="arithmetic checks on given Betti data")
    verify.add_argument("--degree", type=int, required=True)
    verify.add_argument("--d", default="", help="d_i, e.g. '1,4^2,7^2,8^3'")
    verify.add_argument("--c", default="")
    verify.add_argument("--b", default="")
    verify.add_argument("--resolution", help="resolution text, e.g. '0 -> S(-6)^2 -> ... -> S'")
    verify.add_argument("--curve", action="store_true", help="data of a plane curve")
    add_common(verify, field_default="q")
    verify.set_defaults(handler=cmd_verify_betti)

    pencil = subparsers.add_parser("pencil", help="pencil syzygies of g^m + h^m")
    pencil.add_argument("--g", required=True)
    pencil.add_argument("--h", required=True)
    pencil.add_argument("--m", type=int, required=True)
    pencil.add_argument("--measure", action="store_true", help="also resolve f to measure t(X)")
    add_common(pencil)
    pencil.set_defaults(handler=cmd_pencil)

    corpus = subparsers.add_parser("corpus", help="run the regression corpus")
    corpus.add_argument("--filter", help="run entries whose name contains this text")
    corpus.add_argument("--slow", action="store_true", help="include slow entries")
    corpus.add_argument("--workers", type=int, default=None)
    corpus.add_argument("--field", default=None, help="override each entry's recommended field")
    corpus.add_argument("--json")
    corpus.set_defaults(handler=cmd_corpus)
    return parser


def main(argv: List[str] = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.handler(args)
    except NonReducedInputError as e:
        return _not_reduced(e)
    except _INPUT_ERRORS as e:
        print(f"❌ {type(e).__name__}: {e}", file=sys.stderr)
        return EXIT_ERROR


if __name__ == "__main__":
    sys.exit(main())
