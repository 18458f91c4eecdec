"""JSON problem documents and result encoding.

A problem file looks like::

    {"semifield": "max-plus",
     "A": [[1, 3], [2, "-inf"]],
     "d": [4, 5],
     "C": [[0, 0]], "b": [1],
     "options": {"tolerance": 1e-9, "cap": 20, "check_uniqueness": false}}

Only ``semifield`` and ``A`` are always required; ``d``, ``C`` and ``b`` are
demanded by the commands that use them. Infinite values are written as the
strings ``"-inf"`` and ``"+inf"``; each semifield accepts them only where they
denote its zero element.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from typing import Any, Optional

import numpy as np

from .linalg import Matrix, Vector
from .semifield import DEFAULT_TOL, SEMIFIELDS, Semifield
from .solver import DEFAULT_CAP


class ProblemError(Exception):
    exit_code = 2


class MalformedJSONError(ProblemError):
    exit_code = 3


class SchemaError(ProblemError):
    """Missing fields, ragged or mismatched dimensions, unknown tokens."""

    exit_code = 4


class UnknownSemifieldError(ProblemError):
    exit_code = 5


class CarrierError(ProblemError):
    """A value outside the semifield's carrier, e.g. a negative max-times entry."""

    exit_code = 6


TOKENS = {"-inf": -math.inf, "+inf": math.inf}


@dataclass
class ProblemDocument:
    semifield: Semifield
    A: Matrix
    d: Optional[Vector] = None
    C: Optional[Matrix] = None
    b: Optional[Vector] = None
    tolerance: float = DEFAULT_TOL
    cap: int = DEFAULT_CAP
    check_uniqueness: bool = False


def _number(x, where: str) -> float:
    if isinstance(x, bool):
        raise SchemaError(f"{where}: booleans are not numbers")
    if isinstance(x, (int, float)):
        return float(x)
    if isinstance(x, str):
        try:
            return TOKENS[x]
        except KeyError:
            raise SchemaError(f"{where}: unknown token {x!r}; use \"-inf\" or \"+inf\"") from None
    raise SchemaError(f"{where}: expected a number or an infinity token, got {type(x).__name__}")


def _vector(sf: Semifield, raw, name: str) -> Vector:
    if not isinstance(raw, list) or not raw:
        raise SchemaError(f"{name} must be a nonempty list")
    vals = np.array([_number(x, f"{name}[{i}]") for i, x in enumerate(raw)])
    _check_carrier(sf, vals, name)
    return Vector(sf, vals)


def _matrix(sf: Semifield, raw, name: str) -> Matrix:
    if not isinstance(raw, list) or not raw or not all(isinstance(r, list) for r in raw):
        raise SchemaError(f"{name} must be a nonempty list of rows")
    widths = {len(r) for r in raw}
    if len(widths) != 1 or 0 in widths:
        raise SchemaError(f"{name} rows must be nonempty and of equal length")
    vals = np.array(
        [[_number(x, f"{name}[{i}][{j}]") for j, x in enumerate(r)] for i, r in enumerate(raw)]
    )
    _check_carrier(sf, vals, name)
    return Matrix(sf, vals)


def _check_carrier(sf: Semifield, vals: np.ndarray, name: str):
    bad = ~sf.in_carrier(vals)
    if np.any(bad):
        idx = tuple(int(i) for i in np.argwhere(bad)[0])
        raise CarrierError(f"{name}{list(idx)} = {vals[idx]} is not in the {sf.tag} carrier")


def _reject_constant(name):
    raise MalformedJSONError(f"non-standard JSON constant {name}")


def parse_problem_text(text: str) -> ProblemDocument:
    try:
        raw = json.loads(text, parse_constant=_reject_constant)
    except json.JSONDecodeError as exc:
        raise MalformedJSONError(str(exc)) from None
    return problem_from_dict(raw)


def parse_problem(source) -> ProblemDocument:
    """Parse a problem from a path or a readable text stream."""
    if hasattr(source, "read"):
        return parse_problem_text(source.read())
    try:
        with open(source, encoding="utf-8") as fh:
            text = fh.read()
    except UnicodeDecodeError as exc:
        raise MalformedJSONError(str(exc)) from None
    return parse_problem_text(text)


def problem_from_dict(raw: Any) -> ProblemDocument:
    if not isinstance(raw, dict):
        raise SchemaError("a problem must be a JSON object")
    tag = raw.get("semifield")
    if tag is None:
        raise SchemaError("missing field 'semifield'")
    if tag not in SEMIFIELDS:
        raise UnknownSemifieldError(f"unknown semifield {tag!r}; expected one of {sorted(SEMIFIELDS)}")
    sf = SEMIFIELDS[tag]
    if "A" not in raw:
        raise SchemaError("missing field 'A'")
    A = _matrix(sf, raw["A"], "A")
    m, n = A.shape
    d = _vector(sf, raw["d"], "d") if raw.get("d") is not None else None
    if d is not None and len(d) != m:
        raise SchemaError(f"d has length {len(d)} but A has {m} rows")
    C = _matrix(sf, raw["C"], "C") if raw.get("C") is not None else None
    if C is not None and C.shape[1] != n:
        raise SchemaError(f"C has {C.shape[1]} columns but A has {n}")
    b = _vector(sf, raw["b"], "b") if raw.get("b") is not None else None
    if b is not None and C is not None and len(b) != C.shape[0]:
        raise SchemaError(f"b has length {len(b)} but C has {C.shape[0]} rows")

    opts = raw.get("options") or {}
    if not isinstance(opts, dict):
        raise SchemaError("options must be an object")
    unknown = set(opts) - {"tolerance", "cap", "check_uniqueness"}
    if unknown:
        raise SchemaError(f"unknown options {sorted(unknown)}")
    tol = opts.get("tolerance", DEFAULT_TOL)
    cap = opts.get("cap", DEFAULT_CAP)
    flag = opts.get("check_uniqueness", False)
    if isinstance(tol, bool) or not isinstance(tol, (int, float)) or tol < 0:
        raise SchemaError("options.tolerance must be a nonnegative number")
    if isinstance(cap, bool) or not isinstance(cap, int) or cap < 1:
        raise SchemaError("options.cap must be a positive integer")
    if not isinstance(flag, bool):
        raise SchemaError("options.check_uniqueness must be a boolean")
    return ProblemDocument(sf, A, d, C, b, float(tol), cap, flag)


# -- encoding ------------------------------------------------------------------


def encode_number(v: float):
    """Infinities as tokens, integral values as ints, anything else via repr
    (the shortest string that reads back to the same double)."""
    v = float(v)
    if math.isinf(v):
        return "+inf" if v > 0 else "-inf"
    if v.is_integer() and abs(v) < 2**53:
        return int(v)
    return v


def encode_values(arr) -> list:
    arr = np.asarray(arr, dtype=float)
    if arr.ndim == 2:
        return [encode_values(row) for row in arr]
    return [encode_number(v) for v in arr]


def problem_to_dict(doc: ProblemDocument) -> dict:
    out: dict[str, Any] = {"semifield": doc.semifield.tag, "A": encode_values(doc.A.values)}
    for name in ("d", "C", "b"):
        val = getattr(doc, name)
        if val is not None:
            out[name] = encode_values(val.values)
    out["options"] = {
        "tolerance": doc.tolerance,
        "cap": doc.cap,
        "check_uniqueness": doc.check_uniqueness,
    }
    return out


def serialize_problem(doc: ProblemDocument) -> str:
    return json.dumps(problem_to_dict(doc), ensure_ascii=False)


def dumps_result(result: dict) -> str:
    return json.dumps(result, indent=2, ensure_ascii=False)
