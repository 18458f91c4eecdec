"""``tropic`` command-line frontend.

Exit codes: 0 answered, 1 no solution, 2 usage, 3 malformed JSON,
4 schema or dimension error, 5 unknown semifield, 6 value outside the
carrier, 7 enumeration cap exceeded, 8 unsupported plot, 9 unreadable file.
Column and row indices in results are 1-based.
"""

from __future__ import annotations

import argparse
import os
import sys
from typing import Callable, Optional

from .dependence import extract_basis, independence_margin, is_dependent
from .distance import nearest_point, project_above, project_below
from .io import ProblemDocument, ProblemError, SchemaError, dumps_result, encode_number, encode_values, parse_problem
from .linalg import DimensionError, Vector
from .semifield import DomainError, SemifieldMismatchError
from .solver import (
    CapacityError,
    FamilyMember,
    enumerate_minimal_generators,
    general_solution,
    solve_equation,
    solve_extended,
    solve_inequality,
    solve_system,
    split_extended,
)

EXIT_OK = 0
EXIT_NO_SOLUTION = 1
EXIT_USAGE = 2
EXIT_CAPACITY = 7
EXIT_IO = 9

COMMANDS = (
    "distance", "solve", "solve-all", "inequality", "system",
    "extended", "basis", "independent", "membership",
)


def _vec(v: Optional[Vector]):
    return None if v is None else encode_values(v.values)


def _idx(indices) -> list[int]:
    return [int(i) + 1 for i in sorted(indices)]


def _member(m: FamilyMember) -> dict:
    return {
        "I": _idx(m.index_set),
        "fixed": {str(j + 1): encode_number(v) for j, v in sorted(m.fixed.items())},
        "bounds": {str(j + 1): encode_number(v) for j, v in sorted(m.bounded.items())},
        "free": _idx(m.free),
    }


def _require(doc: ProblemDocument, *names: str, command: str):
    missing = [n for n in names if getattr(doc, n) is None]
    if missing:
        raise SchemaError(f"{command} needs field(s) {', '.join(missing)}")


def _diagnostics(doc: ProblemDocument, consistent) -> dict:
    free = doc.A.zero_columns()
    if consistent is None:
        return {"I": [], "J": [], "free": _idx(free)}
    return {
        "I": _idx(consistent.zero_rows_of_d),
        "J": _idx(consistent.forced_zero_cols),
        "free": _idx(free),
    }


def _distance(doc, tol, cap, unique):
    _require(doc, "d", command="distance")
    res = nearest_point(doc.A, doc.d)
    out = {"delta": encode_number(res.delta.value), "x": _vec(res.argmin_x), "y": _vec(res.nearest_y)}
    if res.finite:
        x1, r1 = project_below(doc.A, doc.d)
        x2, r2 = project_above(doc.A, doc.d)
        out["below"] = {"x": _vec(x1), "y": _vec(doc.A @ x1), "rho": encode_number(r1.value)}
        out["above"] = {"x": _vec(x2), "y": _vec(doc.A @ x2), "rho": encode_number(r2.value)}
    out["diagnostics"] = _diagnostics(doc, res.consistent)
    return out, EXIT_OK


def _solve(doc, tol, cap, unique):
    _require(doc, "d", command="solve")
    sol = solve_equation(doc.A, doc.d, check_uniqueness=unique, tol=tol, cap=cap)
    out = {
        "solvable": sol.solvable,
        "delta": encode_number(sol.delta.value),
        "maximal": _vec(sol.maximal),
        "pseudo": _vec(sol.pseudo),
    }
    if unique:
        out["unique"] = sol.unique
    out["diagnostics"] = _diagnostics(doc, sol.consistent)
    return out, EXIT_OK if sol.solvable else EXIT_NO_SOLUTION


def _solve_all(doc, tol, cap, unique):
    _require(doc, "d", command="solve-all")
    sol = solve_equation(doc.A, doc.d, tol=tol, cap=cap)
    family = general_solution(doc.A, doc.d, tol=tol, cap=cap)
    out = {
        "solvable": bool(family),
        "delta": encode_number(sol.delta.value),
        "maximal": _vec(sol.maximal),
        "generators": [_idx(I) for I in enumerate_minimal_generators(doc.A, doc.d, tol, cap)],
        "family": [_member(m) for m in family],
        "diagnostics": _diagnostics(doc, sol.consistent),
    }
    return out, EXIT_OK if family else EXIT_NO_SOLUTION


def _inequality(doc, tol, cap, unique):
    _require(doc, "d", command="inequality")
    sol = solve_inequality(doc.A, doc.d)
    return {"solvable": True, "bounds": _vec(sol.upper_bound), "free": _idx(sol.free_cols)}, EXIT_OK


def _system(doc, tol, cap, unique):
    _require(doc, "d", "C", "b", command="system")
    eq = solve_equation(doc.A, doc.d, tol=tol, cap=cap)
    family = solve_system(doc.A, doc.d, doc.C, doc.b, tol=tol, cap=cap)
    out = {"solvable": bool(family), "delta": encode_number(eq.delta.value)}
    if not family:
        out["reason"] = "Ax = d has no solution" if not eq.solvable else "no member satisfies Cx ≤ b"
    out["family"] = [_member(m) for m in family]
    out["diagnostics"] = _diagnostics(doc, eq.consistent)
    return out, EXIT_OK if family else EXIT_NO_SOLUTION


def _extended(doc, tol, cap, unique):
    _require(doc, "d", "b", command="extended")
    if len(doc.b) != doc.A.shape[0]:
        raise SchemaError(f"b has length {len(doc.b)} but A has {doc.A.shape[0]} rows")
    split = split_extended(doc.A, doc.b, doc.d, tol)
    if split is None:
        return {"solvable": False, "reason": "b not ≤ d"}, EXIT_NO_SOLUTION
    family = solve_extended(doc.A, doc.b, doc.d, tol=tol, cap=cap)
    out = {"solvable": bool(family), "split": {"I1": _idx(split.I1), "I2": _idx(split.I2)}}
    if split.I1:
        out["delta1"] = encode_number(nearest_point(split.A1, split.d1).delta.value)
    if not family:
        out["reason"] = "no solution of A1 x = d1 satisfies A2 x ≤ b2"
    out["family"] = [_member(m) for m in family]
    return out, EXIT_OK if family else EXIT_NO_SOLUTION


def _basis(doc, tol, cap, unique):
    res = extract_basis(doc.A, tol)
    return {
        "kept": _idx(res.kept),
        "basis": encode_values(res.basis.values),
        "margin": encode_number(res.margin.value),
    }, EXIT_OK


def _independent(doc, tol, cap, unique):
    sf = doc.A.semifield
    margin = independence_margin(doc.A)
    independent = not bool(sf.le_tol(margin.value, sf.one, tol))
    return {"independent": independent, "margin": encode_number(margin.value)}, EXIT_OK


def _membership(doc, tol, cap, unique):
    _require(doc, "d", command="membership")
    rep = is_dependent(doc.d, doc.A, tol)
    return {
        "member": rep.dependent,
        "delta": encode_number(rep.delta.value),
        "witness": _vec(rep.coefficients),
    }, EXIT_OK


HANDLERS: dict[str, Callable] = {
    "distance": _distance,
    "solve": _solve,
    "solve-all": _solve_all,
    "inequality": _inequality,
    "system": _system,
    "extended": _extended,
    "basis": _basis,
    "independent": _independent,
    "membership": _membership,
}


def run(
    command: str,
    doc: ProblemDocument,
    tolerance: Optional[float] = None,
    cap: Optional[int] = None,
    check_uniqueness: Optional[bool] = None,
) -> tuple[dict, int]:
    """Answer ``command`` for ``doc``; returns the result and the exit code.

    Keyword arguments override the document's options. Library errors are
    re-raised as :class:`SchemaError` so that they carry an exit code.
    """
    if command not in HANDLERS:
        raise ProblemError(f"unknown command {command!r}; expected one of {', '.join(COMMANDS)}")
    tol = doc.tolerance if tolerance is None else tolerance
    cap = doc.cap if cap is None else cap
    unique = doc.check_uniqueness if check_uniqueness is None else check_uniqueness
    try:
        body, code = HANDLERS[command](doc, tol, cap, unique)
    except (DimensionError, DomainError, SemifieldMismatchError) as exc:
        raise SchemaError(str(exc)) from None
    return {"command": command, "semifield": doc.semifield.tag, **body}, code


def _env_cap() -> Optional[int]:
    raw = os.environ.get("TROPIC_CAP")
    if not raw:
        return None
    try:
        value = int(raw)
    except ValueError:
        raise ProblemError(f"TROPIC_CAP must be a positive integer, got {raw!r}") from None
    if value < 1:
        raise ProblemError(f"TROPIC_CAP must be a positive integer, got {raw!r}")
    return value


def _positive_int(text: str) -> int:
    value = int(text)
    if value < 1:
        raise argparse.ArgumentTypeError("must be a positive integer")
    return value


def _nonnegative_float(text: str) -> float:
    value = float(text)
    if not value >= 0:
        raise argparse.ArgumentTypeError("must be a nonnegative number")
    return value


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="tropic", description="Tropical linear systems via the residual.")
    p.add_argument("command", choices=COMMANDS)
    p.add_argument("--input", required=True, help="problem JSON file, or - for stdin")
    p.add_argument("--output", help="write the result here instead of stdout")
    p.add_argument("--svg", help="also draw the instance (two rows, max-plus or max-times)")
    p.add_argument("--tolerance", type=_nonnegative_float)
    p.add_argument("--cap", type=_positive_int, help="column cap for generating-set enumeration")
    p.add_argument("--check-uniqueness", action="store_true", default=None)
    return p


def main(argv: Optional[list[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        doc = parse_problem(sys.stdin if args.input == "-" else args.input)
        cap = args.cap if args.cap is not None else _env_cap()
        result, code = run(args.command, doc, args.tolerance, cap, args.check_uniqueness)
    except OSError as exc:
        print(f"tropic: {exc}", file=sys.stderr)
        return EXIT_IO
    except CapacityError as exc:
        print(f"tropic: {exc}", file=sys.stderr)
        return EXIT_CAPACITY
    except ProblemError as exc:
        print(f"tropic: {exc}", file=sys.stderr)
        return exc.exit_code

    text = dumps_result(result) + "\n"
    try:
        if args.output:
            with open(args.output, "w", encoding="utf-8") as fh:
                fh.write(text)
        else:
            sys.stdout.write(text)
        if args.svg:
            from .svg import emit_svg

            emit_svg(doc, result, args.svg)
    except OSError as exc:
        print(f"tropic: {exc}", file=sys.stderr)
        return EXIT_IO
    except ProblemError as exc:
        print(f"tropic: {exc}", file=sys.stderr)
        return exc.exit_code
    return code


if __name__ == "__main__":
    sys.exit(main())
