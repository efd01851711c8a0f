"""Command-line front end.

Exit codes: 0 pass, 1 verified failure, 2 usage/parse/precondition error,
3 decomposition found nothing.  All payloads are JSON with rationals as
"p/q" strings; output is byte-identical for identical arguments.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys

from . import kernels
from .box import (
    DEFAULT_KSTAR_BUDGET,
    DEFAULT_SUBSET_LIMIT,
    BudgetExceeded,
    VectorSequence,
    is_tau_witness,
    kstar_check,
    min_box_subset,
    minimal_multiset_enum,
    sum_check,
)
from .constructions import ConstructionError, construct_one, construct_three, construct_two
from .decompose import decompose, threshold
from .signmatrix import (
    NormalizationError,
    SignMatrix,
    search_rect,
    search_square,
    sylvester,
    verify_rect,
    verify_square,
)
from .steinitz import steinitz_order, verify_prefix_bound

DEFAULT_SEED = 0
DEFAULT_BUDGET = 10**4

EXIT_OK, EXIT_FAIL, EXIT_USAGE, EXIT_NOT_FOUND = 0, 1, 2, 3


class UsageError(Exception):
    pass


def _dump(obj) -> str:
    return json.dumps(obj, indent=2) + "\n"


def _emit(text: str, out_path: str | None) -> None:
    if out_path:
        with open(out_path, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _read_json(path: str):
    if path == "-":
        text = sys.stdin.read()
    else:
        with open(path, encoding="utf-8") as fh:
            text = fh.read()
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise UsageError(f"{path}: invalid JSON ({exc})") from None


def _read_sequence(path: str) -> VectorSequence:
    try:
        return VectorSequence.from_dict(_read_json(path))
    except (ValueError, TypeError, ZeroDivisionError) as exc:
        raise UsageError(f"{path}: {exc}") from None


def _read_matrix(path: str) -> SignMatrix:
    try:
        return SignMatrix.from_dict(_read_json(path))
    except (ValueError, TypeError) as exc:
        raise UsageError(f"{path}: {exc}") from None


def _is_pow2(d: int) -> bool:
    return d >= 1 and d & (d - 1) == 0


# --------------------------------------------------------------------------
# subcommands
# --------------------------------------------------------------------------

def cmd_construct(args) -> int:
    if args.matrix is None and args.d is None:
        raise UsageError("construct needs --d or --matrix")
    if args.kind == "c1":
        if args.matrix:
            C = _read_matrix(args.matrix)
        else:
            C = search_rect(args.d, args.budget, args.seed).matrix
        cert = verify_rect(C)
        if not cert.passed:
            raise UsageError("matrix fails the rect contract (rank deficient)")
        out = construct_one(cert.matrix, limit=args.limit)
    else:
        if args.matrix:
            A = _read_matrix(args.matrix)
        elif args.source == "search" or (args.source == "auto" and not _is_pow2(args.d)):
            A = search_square(args.d, args.budget, args.seed).matrix
        else:
            A = sylvester(args.d)
        out = (construct_two if args.kind == "c2" else construct_three)(A)
    seq = out.seq
    if args.format == "csv":
        _emit(_csv_summary(out, args.limit), args.output)
    else:
        _emit(seq.to_json(), args.output)
    return EXIT_OK


def _csv_summary(out, limit) -> str:
    seq = out.seq
    try:
        rep = min_box_subset(seq, limit)
        min_size = "" if rep.min_size is None else str(rep.min_size)
    except BudgetExceeded:
        min_size = "over_limit"
    cert = out.certificate
    if out.kind == "c1":
        metric_name, metric = "z_l1", cert.t
    else:
        metric_name, metric = "first_row_min", cert.first_row_min
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["d", "kind", "dim", "t", "min_subset_size", "metric", "metric_value"])
    w.writerow([out.source.rows, out.kind, seq.dim, seq.t, min_size, metric_name, metric])
    return buf.getvalue()


def cmd_verify(args) -> int:
    seq = _read_sequence(args.input)
    if args.mode == "witness":
        rep = is_tau_witness(seq, args.limit)
    elif args.mode == "kstar":
        if seq.t < 4:
            raise UsageError(f"kstar mode needs t >= 4, got t={seq.t}")
        rep = kstar_check(seq, args.limit, args.kstar_budget)
    elif args.mode == "min-subset":
        rep = min_box_subset(seq, args.limit)
    else:
        rep = sum_check(seq)
    _emit(_dump(rep.to_dict()), args.output)
    return EXIT_OK if rep.passed else EXIT_FAIL


def cmd_decompose(args) -> int:
    seq = _read_sequence(args.input)
    res = decompose(seq)
    head = {"t": seq.t, "dim": seq.dim, "threshold": threshold(seq.dim),
            "guaranteed": seq.t >= threshold(seq.dim)}
    if res is None:
        _emit(_dump({"status": "NOT_FOUND", **head}), args.output)
        return EXIT_NOT_FOUND
    _emit(_dump({"status": "FOUND", **head, **res.to_dict(seq)}), args.output)
    return EXIT_OK


def cmd_steinitz(args) -> int:
    seq = _read_sequence(args.input)
    ordering = steinitz_order(seq, keep_certificates=False)
    payload = ordering.to_dict()
    payload["verified"] = verify_prefix_bound(ordering, seq, seq.dim)
    _emit(_dump(payload), args.output)
    return EXIT_OK if payload["verified"] else EXIT_FAIL


def cmd_matrix(args) -> int:
    if args.action == "verify":
        if not args.input:
            raise UsageError("matrix verify needs --input")
        M = _read_matrix(args.input)
        if M.cols == M.rows:
            cert = verify_square(M)
        elif M.cols == M.rows + 1:
            cert = verify_rect(M)
        else:
            raise UsageError(f"cannot verify a {M.rows}x{M.cols} matrix")
        _emit(_dump({"matrix": M.to_dict(), "certificate": cert.to_dict()}), args.output)
        return EXIT_OK if cert.passed else EXIT_FAIL
    if args.d is None:
        raise UsageError(f"matrix {args.action} needs --d")
    if args.action == "sylvester":
        M = sylvester(args.d)
        cert = verify_square(M)
        payload = {"matrix": M.to_dict(), "certificate": cert.to_dict()}
    else:
        search = search_rect if args.action == "search-rect" else search_square
        res = search(args.d, args.budget, args.seed)
        cert = res.certificate
        payload = res.to_dict()
        payload.update({"seed": args.seed, "budget": args.budget})
    _emit(_dump(payload), args.output)
    return EXIT_OK if cert.passed else EXIT_FAIL


def cmd_enum(args) -> int:
    found = minimal_multiset_enum(args.m, args.N, args.t_max)
    lengths = [s.t for s in found]
    payload = {
        "m": args.m,
        "N": args.N,
        "t_max": args.t_max,
        "count": len(found),
        "max_length": max(lengths, default=None),
        "multisets": [[[int(c) for c in v] for v in s.vectors] for s in found],
    }
    _emit(_dump(payload), args.output)
    return EXIT_OK


# --------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="boxseq", description=__doc__.splitlines()[0])
    p.add_argument("--version", action="version", version="boxseq 0.1.0")
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp, seed=False):
        sp.add_argument("-o", "--output", help="write JSON here instead of stdout")
        if seed:
            sp.add_argument("--seed", type=int, default=DEFAULT_SEED)
            sp.add_argument("--budget", type=int, default=DEFAULT_BUDGET)

    c = sub.add_parser("construct", help="build a lower-bound sequence (c1, c2, c3)")
    c.add_argument("kind", choices=["c1", "c2", "c3"])
    c.add_argument("--d", type=int)
    c.add_argument("--matrix", help="sign matrix JSON to use instead of a provider")
    c.add_argument("--source", choices=["auto", "sylvester", "search"], default="auto",
                   help="square-matrix provider for c2/c3 (auto: Sylvester for powers of two)")
    c.add_argument("--format", choices=["json", "csv"], default="json")
    c.add_argument("--limit", type=int, default=DEFAULT_SUBSET_LIMIT)
    common(c, seed=True)
    c.set_defaults(func=cmd_construct)

    v = sub.add_parser("verify", help="check a sequence file")
    v.add_argument("input")
    v.add_argument("--mode", choices=["witness", "kstar", "sum", "min-subset"], default="witness")
    v.add_argument("--limit", type=int, default=DEFAULT_SUBSET_LIMIT,
                   help="exhaustive cap: at most 2**limit multiplicity patterns")
    v.add_argument("--kstar-budget", type=int, default=DEFAULT_KSTAR_BUDGET)
    common(v)
    v.set_defaults(func=cmd_verify)

    d = sub.add_parser("decompose", help="find a proper subsequence with sum in the box")
    d.add_argument("input")
    common(d)
    d.set_defaults(func=cmd_decompose)

    s = sub.add_parser("steinitz", help="order a zero-sum sequence with prefix sums in d*box")
    s.add_argument("input")
    common(s)
    s.set_defaults(func=cmd_steinitz)

    m = sub.add_parser("matrix", help="sign-matrix providers and verifiers")
    m.add_argument("action", choices=["search-rect", "search-square", "verify", "sylvester"])
    m.add_argument("--d", type=int)
    m.add_argument("--input")
    common(m, seed=True)
    m.set_defaults(func=cmd_matrix)

    e = sub.add_parser("enum", help="minimal multisets (non-redundant subadditivity constraints)")
    e.add_argument("--m", type=int, required=True)
    e.add_argument("--N", type=int, required=True)
    e.add_argument("--t-max", type=int, required=True)
    common(e)
    e.set_defaults(func=cmd_enum)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0) and EXIT_USAGE
    try:
        return args.func(args)
    except (UsageError, ConstructionError, NormalizationError, BudgetExceeded,
            ValueError, OSError) as exc:
        err = {"error": type(exc).__name__, "message": str(exc), "backend": kernels.backend()}
        sys.stderr.write(json.dumps(err) + "\n")
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
