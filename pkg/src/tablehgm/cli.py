"""Command-line front end.

Reads a JSON problem document, runs the pipeline, and writes a JSON result
document.  Rational values cross the boundary as exact "num/den" strings;
decimal renderings are correctly rounded to the requested number of
significant digits.

Exit codes: 0 success, 2 parse/validation failure, 3 violated mathematical
precondition, 4 internal assertion failure.
"""

from __future__ import annotations

import argparse
import json
import sys

from .contiguity import contiguity_matrix
from .engine import EvalOptions, TableProblem, evaluate
from .errors import (
    InputError,
    InternalCheckError,
    PreconditionError,
    TableHgmError,
    XNotGenericError,
)
from .gauss_manin import psi_all
from .rationals import rat_from_str, rat_to_decimal_str, rat_to_str


def parse_problem_document(doc):
    """Validate and convert a problem document to a TableProblem."""
    if not isinstance(doc, dict):
        raise InputError("problem document must be a JSON object")
    for key in ("row_sums", "col_sums", "probabilities"):
        if key not in doc:
            raise InputError(f"missing field {key!r}")

    def read_sums(key):
        raw = doc[key]
        if not isinstance(raw, list) or not raw:
            raise InputError(f"{key} must be a nonempty list of integers")
        out = []
        for pos, v in enumerate(raw):
            if not isinstance(v, int) or isinstance(v, bool):
                raise InputError(f"{key}[{pos}] must be an integer, got {v!r}")
            out.append(v)
        return tuple(out)

    rs = read_sums("row_sums")
    cs = read_sums("col_sums")
    raw_p = doc["probabilities"]
    if not isinstance(raw_p, list) or len(raw_p) != len(rs):
        raise InputError("probabilities must be a list with one row per row sum")
    grid = []
    for i, row in enumerate(raw_p):
        if not isinstance(row, list) or len(row) != len(cs):
            raise InputError(f"probabilities[{i}] must list one entry per column sum")
        cells = []
        for j, v in enumerate(row):
            where = f"probabilities[{i}][{j}]"
            if isinstance(v, bool):
                raise InputError(f"{where} must be a rational string or integer")
            if isinstance(v, int):
                cells.append(rat_from_str(str(v)))
            elif isinstance(v, str):
                try:
                    cells.append(rat_from_str(v))
                except ValueError as exc:
                    raise InputError(f"{where}: {exc}") from exc
            elif isinstance(v, float):
                raise InputError(
                    f"{where}: floats are not lossless; write the value as a string"
                )
            else:
                raise InputError(f"{where} must be a rational string or integer")
        grid.append(tuple(cells))
    return TableProblem(rs, cs, tuple(grid))


def load_problem(path):
    try:
        with open(path, "r", encoding="utf-8") as handle:
            doc = json.load(handle)
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise InputError(f"invalid JSON in {path}: {exc}") from exc
    return parse_problem_document(doc)


def _fmt(value, digits, backend):
    """(exact-string-or-None, decimal-string) for one scalar."""
    if backend == "float":
        return None, repr(float(value))
    return rat_to_str(value), rat_to_decimal_str(value, digits)


def _matrix_strings(matrix, digits, backend):
    exact, dec = [], []
    for row in matrix:
        erow, drow = [], []
        for v in row:
            e, d = _fmt(v, digits, backend)
            erow.append(e)
            drow.append(d)
        exact.append(erow)
        dec.append(drow)
    if backend == "float":
        exact = None
    return exact, dec


def _gradient_strings(grads, digits, backend):
    if grads is None:
        return None, None
    exact, dec = [], []
    for row in grads:
        erow, drow = [], []
        for cell in row:
            eblk, dblk = [], []
            for prow in cell:
                ep, dp = [], []
                for v in prow:
                    e, d = _fmt(v, digits, backend)
                    ep.append(e)
                    dp.append(d)
                eblk.append(ep)
                dblk.append(dp)
            erow.append(eblk)
            drow.append(dblk)
        exact.append(erow)
        dec.append(drow)
    if backend == "float":
        exact = None
    return exact, dec


def _exact_matrix(rows):
    return [[rat_to_str(v) for v in row] for row in rows]


def result_document(result, digits=15, emit_pfaffian=False, emit_contiguity=()):
    """Render an EvalResult as a JSON-ready dict."""
    backend = result.diagnostics.backend
    z_exact, z_dec = _fmt(result.Z, digits, backend)
    e_exact, e_dec = _matrix_strings(result.expectations, digits, backend)
    g_exact, g_dec = _gradient_strings(result.gradients, digits, backend)
    diag = result.diagnostics
    doc = {
        "z_exact": z_exact,
        "z_decimal": z_dec,
        "expectations": e_exact,
        "expectations_decimal": e_dec,
        "gradients": g_exact,
        "gradients_decimal": g_dec,
        "diagnostics": {
            "e": diag.e,
            "path": [[i, d] for i, d in diag.path],
            "millis": diag.millis,
            "backend": backend,
            "dynamic_range_digits": diag.dynamic_range_digits,
            "kept_rows": list(diag.kept_rows),
            "kept_cols": list(diag.kept_cols),
            "alpha": list(diag.alpha.entries) if diag.alpha is not None else None,
            "x": (
                [[rat_to_str(v) for v in row] for row in diag.x.entries]
                if diag.x is not None
                else None
            ),
        },
    }
    if diag.oracle is not None:
        doc["oracle"] = {
            "match": diag.oracle["match"],
            "z": rat_to_str(diag.oracle["z"]),
            "expectations": _exact_matrix(diag.oracle["expectations"]),
        }
    if emit_pfaffian and diag.alpha is not None:
        blocks = []
        for (i, j), m in sorted(psi_all(diag.alpha, diag.x).items()):
            blocks.append(
                {
                    "i": i,
                    "j": j,
                    "basis": [list(J.elements) for J in m.row_labels],
                    "matrix": _exact_matrix(m.rows),
                }
            )
        doc["pfaffian"] = blocks
    if emit_contiguity and diag.alpha is not None:
        blocks = []
        for i in emit_contiguity:
            m = contiguity_matrix(diag.alpha, diag.x, i)
            blocks.append(
                {
                    "index": i,
                    "basis": [list(J.elements) for J in m.row_labels],
                    "matrix": _exact_matrix(m.rows),
                }
            )
        doc["contiguity"] = blocks
    return doc


def parse_result_document(doc):
    """Read the exact rationals back out of a result document (round-trip)."""
    if doc.get("z_exact") is None:
        raise InputError("result document carries no exact values (float backend)")
    out = {"z": rat_from_str(doc["z_exact"])}
    out["expectations"] = tuple(
        tuple(rat_from_str(v) for v in row) for row in doc["expectations"]
    )
    if doc.get("gradients") is not None:
        out["gradients"] = tuple(
            tuple(
                tuple(tuple(rat_from_str(v) for v in prow) for prow in cell)
                for cell in row
            )
            for row in doc["gradients"]
        )
    return out


def _build_parser():
    parser = argparse.ArgumentParser(
        prog="tablehgm",
        description=(
            "Exact normalizing constants, expectations, and expectation "
            "gradients for two-way tables with fixed margins."
        ),
    )
    parser.add_argument("problem", help="path to a JSON problem document")
    parser.add_argument("-o", "--output", help="write the result document here instead of stdout")
    parser.add_argument("--oracle", action="store_true", help="cross-check against brute-force enumeration")
    parser.add_argument("--float", dest="use_float", action="store_true", help="opt-in binary64 transport")
    parser.add_argument("--digits", type=int, default=15, help="significant digits for decimal renderings")
    parser.add_argument("--emit-pfaffian", action="store_true", help="include the connection coefficient matrices")
    parser.add_argument(
        "--emit-contiguity",
        type=int,
        action="append",
        default=[],
        metavar="I",
        help="include the contiguity matrix for shift index I (repeatable)",
    )
    parser.add_argument("--quiet", action="store_true", help="suppress the stderr summary line")
    return parser


def run(argv):
    """Entry point returning an exit code; never raises for expected failures."""
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return 2 if exc.code not in (0, None) else 0

    def emit_error(kind, exc, code, extra=None):
        payload = {"error": {"type": kind, "message": str(exc), **(extra or {})}}
        print(json.dumps(payload, indent=2))
        return code

    try:
        if args.digits < 1:
            raise InputError("--digits must be at least 1")
        problem = load_problem(args.problem)
        k_n_top = len(problem.row_sums) + len(problem.col_sums) - 1
        for i in args.emit_contiguity:
            if not (1 <= i <= k_n_top):
                raise InputError(f"--emit-contiguity index {i} out of range 1..{k_n_top}")
        options = EvalOptions(
            oracle=args.oracle,
            backend="float" if args.use_float else "exact",
        )
        result = evaluate(problem, options)
        doc = result_document(
            result,
            digits=args.digits,
            emit_pfaffian=args.emit_pfaffian,
            emit_contiguity=args.emit_contiguity,
        )
        text = json.dumps(doc, indent=2)
        if args.output:
            with open(args.output, "w", encoding="utf-8") as handle:
                handle.write(text + "\n")
        else:
            print(text)
        if not args.quiet:
            print(
                f"Z = {doc['z_decimal']} (e = {doc['diagnostics']['e']}, "
                f"{doc['diagnostics']['millis']:.1f} ms)",
                file=sys.stderr,
            )
            span = doc["diagnostics"].get("dynamic_range_digits")
            if span is not None and span > 12:
                print(
                    f"warning: float transport traversed ~{span:.0f} orders of "
                    "magnitude; binary64 carries ~16 digits, so this result is "
                    "unreliable — use the exact backend",
                    file=sys.stderr,
                )
        return 0
    except XNotGenericError as exc:
        return emit_error(
            "precondition",
            exc,
            3,
            {"vanishing_minors": [list(J.elements) for J in exc.vanishing]},
        )
    except InputError as exc:
        return emit_error("input", exc, 2)
    except PreconditionError as exc:
        return emit_error("precondition", exc, 3)
    except InternalCheckError as exc:
        return emit_error("internal", exc, 4)
    except TableHgmError as exc:
        return emit_error("internal", exc, 4)
    except Exception as exc:  # pragma: no cover - catch-all for exit code 4
        return emit_error("internal", exc, 4)


def main():
    sys.exit(run(sys.argv[1:]))


if __name__ == "__main__":
    main()
