"""Command-line interface: ``wgshift <command> ...``.

Exit codes: 0 success, 1 validation or verification failure, 2 usage error.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path
from typing import List, Optional

from . import analysis, io
from .adjoint import adjoint_decompose
from .core import TOLERANCE_ENV, WgsError, apply, default_tolerance
from .semigroup import NullSequence, check_closure, run_truncation_study
from .verify import verify_operator


def _read_operator(path: str):
    return io.load_operator(Path(path).read_bytes())


def _tolerance_dict(tol) -> dict:
    return {"atol": tol.atol, "rtol": tol.rtol}


def _emit(obj, as_json: bool, table: Optional[str] = None):
    if as_json or table is None:
        print(json.dumps(obj, indent=2))
    else:
        print(table)


def cmd_info(args) -> int:
    op = _read_operator(args.operator)
    info = {
        "n": op.n,
        "image_size": int(len(set(op.phi.tolist()))),
        "max_fiber_cardinality": analysis.max_fiber_cardinality(op.phi),
        "fiber_norm": analysis.fiber_norm(op),
    }
    table = "\n".join(f"{k:<22}{v}" for k, v in info.items())
    _emit(info, args.json, table)
    return 0


def cmd_apply(args) -> int:
    op = _read_operator(args.operator)
    x = io.load_vector(Path(args.vector).read_bytes(), n=op.n)
    print(io.save_vector(apply(op, x)))
    return 0


def cmd_adjoint(args) -> int:
    op = _read_operator(args.operator)
    result = adjoint_decompose(op)
    summary = {
        "term_count": len(result.terms),
        "anchor": result.anchor,
        "fiber_counts": list(result.fiber_counts),
    }
    if args.out:
        summary["manifest"] = str(io.save_decomposition(result, args.out))
    _emit(summary, args.json, f"terms: {len(result.terms)}")
    return 0


def cmd_classify(args) -> int:
    op = _read_operator(args.operator)
    tol = default_tolerance()
    report = analysis.classify(op, tol).to_dict()
    report["tolerance"] = _tolerance_dict(tol)
    print(json.dumps(report, indent=2))
    return 0


def cmd_verify(args) -> int:
    op = _read_operator(args.operator)
    terms = None
    if args.adjoint:
        n, terms, _ = io.load_sum_manifest(args.adjoint)
        if n != op.n:
            raise io.ValidationError(f"adjoint manifest has n={n}, operator has n={op.n}")
    report = verify_operator(op, terms, trials=args.trials, seed=args.seed, tol=default_tolerance())
    _emit(report.to_dict(), args.json, report.format_table())
    if not report.passed:
        failed = ", ".join(c.name for c in report.checks if not c.passed)
        print(f"verification failed: {failed}", file=sys.stderr)
        return 1
    return 0


def cmd_closure(args) -> int:
    _, terms, _ = io.load_sum_manifest(args.manifest)
    alphabet = io.load_alphabet(Path(args.alphabet).read_bytes())
    report = check_closure(terms, alphabet, default_tolerance())
    lines = [f"closed: {str(report.closed).lower()}", f"adjoint terms: {len(report.adjoint_terms)}"]
    lines += [f"  witness: term {t} index {b} weight {w}" for t, b, w in report.witnesses]
    _emit(report.to_dict(), args.json, "\n".join(lines))
    return 0 if report.closed else 1


def _parse_dims(text: str) -> List[int]:
    try:
        return [int(part) for part in text.split(",") if part.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"invalid dimension list {text!r}") from None


def cmd_study(args) -> int:
    if args.rule == "reciprocal":
        if args.ratio is not None or args.scale is not None:
            raise io.ValidationError("--ratio/--scale only apply to the geometric rule")
        rule = NullSequence("reciprocal")
    else:
        rule = NullSequence("geometric", args.ratio, args.scale)
    study = run_truncation_study(rule, args.dims)
    doc = {"rule": json.loads(io.save_alphabet(rule)), **study.to_dict()}
    if args.out:
        Path(args.out).write_text(json.dumps(doc, indent=2) + "\n")
    if args.json:
        print(json.dumps(doc, indent=2))
    else:
        print(study.format_table())
    return 0


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--json", action="store_true", help="print machine-readable JSON")

    parser = argparse.ArgumentParser(
        prog="wgshift",
        description="Weighted generalized shift operators: adjoints, classification and oracle checks.",
        epilog=f"Set {TOLERANCE_ENV} to override the relative comparison tolerance.",
    )
    sub = parser.add_subparsers(dest="command", metavar="command")
    sub.required = True

    p = sub.add_parser("info", parents=[common], help="dimension, image size, fiber cardinality, norm")
    p.add_argument("operator")
    p.set_defaults(func=cmd_info)

    p = sub.add_parser("apply", parents=[common], help="apply an operator to a vector")
    p.add_argument("operator")
    p.add_argument("--vector", required=True)
    p.set_defaults(func=cmd_apply)

    p = sub.add_parser("adjoint", parents=[common], help="decompose the adjoint into shifts")
    p.add_argument("operator")
    p.add_argument("--out", help="directory for term documents and manifest.json")
    p.set_defaults(func=cmd_adjoint)

    p = sub.add_parser("classify", parents=[common], help="norm and structural predicates as JSON")
    p.add_argument("operator")
    p.set_defaults(func=cmd_classify)

    p = sub.add_parser("verify", parents=[common], help="cross-check against the dense oracle")
    p.add_argument("operator")
    p.add_argument("--trials", type=int, default=20)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--adjoint", help="audit a stored decomposition manifest instead of recomputing")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("closure", parents=[common], help="check adjoint weights stay in an alphabet")
    p.add_argument("manifest")
    p.add_argument("--alphabet", required=True)
    p.set_defaults(func=cmd_closure)

    p = sub.add_parser("study", parents=[common], help="term-count growth over truncations")
    p.add_argument("--rule", choices=["reciprocal", "geometric"], default="reciprocal")
    p.add_argument("--ratio", type=float)
    p.add_argument("--scale", type=float)
    p.add_argument("--dims", type=_parse_dims, required=True, help="comma-separated, e.g. 2,4,8,16")
    p.add_argument("--out", help="also write the study JSON to this file")
    p.set_defaults(func=cmd_study)
    return parser


def main(argv: Optional[List[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return args.func(args)
    except (WgsError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
