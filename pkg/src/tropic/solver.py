"""Solution of ``Ax <= d``, ``Ax = d``, ``{Ax = d, Cx <= b}`` and ``Ax + b = d``.

All entry points accept arbitrary matrices: zero columns are split off as
free components, degenerate right-hand sides are answered in closed form and
the remaining problem is made consistent with ``d`` before the residual
machinery runs. Column indices in results always refer to the input matrix.
"""

from __future__ import annotations

import os
from dataclasses import dataclass, field
from itertools import combinations
from typing import Optional

import numpy as np

from .distance import ConsistentForm, make_consistent, nearest_point, project_above, project_below
from .linalg import DimensionError, IndexSet, Matrix, Vector
from .semifield import DEFAULT_TOL, Scalar, Semifield, check_same

DEFAULT_CAP = 20


class CapacityError(RuntimeError):
    """Enumeration of generating sets would exceed the configured column cap."""


def default_cap() -> int:
    env = os.environ.get("TROPIC_CAP")
    return int(env) if env else DEFAULT_CAP


# -- preprocessing -------------------------------------------------------------


@dataclass(frozen=True)
class Preprocessed:
    """A problem with zero columns removed and the rest made consistent with d.

    ``verdict`` is ``None`` for a regular problem, ``"all"`` when A and d are
    both zero (every x solves), ``"none"`` when A is zero but d is not, and
    ``"zero"`` when d is zero (x vanishes off the free columns).
    """

    A: Matrix
    d: Vector
    verdict: Optional[str]
    free_cols: IndexSet
    kept_cols: tuple[int, ...]
    consistent: Optional[ConsistentForm] = None

    @property
    def semifield(self) -> Semifield:
        return self.A.semifield

    @property
    def reduced(self) -> Matrix:
        """Consistent form of the kept columns (reduced indexing)."""
        return self.consistent.A_hat

    def expand(self, reduced_values, free_value: float) -> Vector:
        """Lift a vector over the kept columns back to the original indexing."""
        full = np.full(self.A.shape[1], free_value)
        if self.kept_cols:
            full[list(self.kept_cols)] = reduced_values
        return Vector(self.semifield, full)


def preprocess(A: Matrix, d: Vector) -> Preprocessed:
    check_same(A.semifield, d.semifield)
    if A.shape[0] != len(d):
        raise DimensionError(f"matrix {A.shape} vs right-hand side of length {len(d)}")
    free = A.zero_columns()
    kept = tuple(j for j in range(A.shape[1]) if j not in free)
    if not kept:
        return Preprocessed(A, d, "all" if d.is_zero() else "none", free, kept)
    if d.is_zero():
        return Preprocessed(A, d, "zero", free, kept)
    form = make_consistent(A.columns(kept), d)
    return Preprocessed(A, d, None, free, kept, form)


def _upper_bound(pre: Preprocessed) -> np.ndarray:
    """``(d^- A)^-`` over the kept columns; zero on the forced columns."""
    dA = pre.d.pinv() @ pre.reduced
    if dA.is_zero():  # every column is forced to zero
        return dA.values.copy()
    return dA.pinv().values


# -- inequality ----------------------------------------------------------------


@dataclass(frozen=True)
class InequalitySolution:
    """``Ax <= d`` holds exactly when ``x <= upper_bound``.

    Free columns carry the maximal element as their bound.
    """

    upper_bound: Vector
    free_cols: IndexSet

    def contains(self, x: Vector, tol: float = DEFAULT_TOL) -> bool:
        sf = self.upper_bound.semifield
        return bool(np.all(sf.le_tol(x.values, self.upper_bound.values, tol)))


def solve_inequality(A: Matrix, d: Vector) -> InequalitySolution:
    pre = preprocess(A, d)
    sf = pre.semifield
    if pre.verdict in ("all", "none"):
        return InequalitySolution(Vector(sf, np.full(A.shape[1], sf.top)), pre.free_cols)
    if pre.verdict == "zero":
        return InequalitySolution(pre.expand(sf.zero, sf.top), pre.free_cols)
    return InequalitySolution(pre.expand(_upper_bound(pre), sf.top), pre.free_cols)


# -- equation ------------------------------------------------------------------


@dataclass(frozen=True)
class EquationSolution:
    solvable: bool
    delta: Scalar
    maximal: Optional[Vector]
    unique: Optional[bool]
    pseudo: Optional[Vector]
    free_cols: IndexSet = IndexSet()
    consistent: Optional[ConsistentForm] = None


def solve_equation(
    A: Matrix,
    d: Vector,
    check_uniqueness: bool = False,
    tol: float = DEFAULT_TOL,
    cap: Optional[int] = None,
) -> EquationSolution:
    """Existence, maximal solution and pseudo-solution of ``Ax = d``.

    ``unique`` stays ``None`` unless ``check_uniqueness`` is set, because the
    test enumerates every minimal generating set.
    """
    pre = preprocess(A, d)
    sf = pre.semifield
    n = A.shape[1]
    one, top = Scalar(sf, sf.one), Scalar(sf, sf.top)
    if pre.verdict == "none":
        return EquationSolution(False, top, None, False if check_uniqueness else None, None, pre.free_cols)
    if pre.verdict == "all":
        everything = Vector(sf, np.full(n, sf.top))
        unique = (n == 0) if check_uniqueness else None
        return EquationSolution(True, one, everything, unique, everything, pre.free_cols)
    if pre.verdict == "zero":
        x = pre.expand(sf.zero, sf.top)
        unique = (not pre.free_cols) if check_uniqueness else None
        return EquationSolution(True, one, x, unique, x, pre.free_cols)

    res = nearest_point(pre.reduced, d)
    if not res.finite:
        return EquationSolution(
            False, res.delta, None, False if check_uniqueness else None, None,
            pre.free_cols, pre.consistent,
        )
    solvable = res.is_member(tol)
    x1 = _upper_bound(pre)
    pseudo = pre.expand(res.argmin_x.values, sf.top)
    maximal = pre.expand(x1, sf.top) if solvable else None
    unique = None
    if check_uniqueness:
        unique = False
        if solvable and not pre.free_cols:
            family = _minimal_generators(pre, tol, cap)
            unique = family == [_candidates(pre)]
    return EquationSolution(solvable, res.delta, maximal, unique, pseudo, pre.free_cols, pre.consistent)


def bilateral_bounds(A: Matrix, d: Vector) -> tuple[Vector, Vector]:
    """Coefficients of the closest points of the span below and above ``d``."""
    x1, _ = project_below(A, d)
    x2, _ = project_above(A, d)
    return x1, x2


# -- general solution ----------------------------------------------------------


@dataclass(frozen=True)
class FamilyMember:
    """Solutions with ``fixed`` components pinned, ``bounded`` components at or
    below their bound, and ``free`` components arbitrary."""

    index_set: tuple[int, ...]
    fixed: dict[int, float]
    bounded: dict[int, float]
    free: tuple[int, ...]
    semifield: Semifield = field(repr=False, compare=False, default=None)

    @property
    def n(self) -> int:
        return len(self.fixed) + len(self.bounded) + len(self.free)

    def extreme(self) -> Vector:
        """Largest member: bounded components at their bounds, free ones at top."""
        sf = self.semifield
        vals = np.full(self.n, sf.top)
        for j, v in {**self.fixed, **self.bounded}.items():
            vals[j] = v
        return Vector(sf, vals)


def _candidates(pre: Preprocessed) -> tuple[int, ...]:
    """Reduced indices of the kept columns that are not forced to zero."""
    return tuple(
        k for k in range(len(pre.kept_cols)) if k not in pre.consistent.forced_zero_cols
    )


def _cover_masks(pre: Preprocessed, x1: np.ndarray, tol: float) -> dict[int, int]:
    """Bitmask of the rows where column k, scaled by its maximal coefficient,
    attains ``d``; a set of columns generates ``d`` iff its masks cover supp(d)."""
    sf = pre.semifield
    A_hat = pre.reduced.values
    rows = np.flatnonzero(pre.d.values != sf.zero)
    masks = {}
    for k in _candidates(pre):
        scaled = sf.mul(A_hat[rows, k], x1[k])
        hit = sf.close(scaled, pre.d.values[rows], tol)
        masks[k] = sum(1 << r for r in np.flatnonzero(hit).tolist())
    return masks


def _minimal_generators(pre: Preprocessed, tol: float, cap: Optional[int]) -> list[tuple[int, ...]]:
    """Minimal generating sets in reduced indexing, breadth-first by size."""
    cands = _candidates(pre)
    cap = default_cap() if cap is None else cap
    if len(cands) > cap:
        raise CapacityError(
            f"{len(cands)} columns exceed the enumeration cap of {cap}; "
            "raise it with --cap or TROPIC_CAP"
        )
    x1 = _upper_bound(pre)
    masks = _cover_masks(pre, x1, tol)
    target = (1 << int(np.count_nonzero(pre.d.values != pre.semifield.zero))) - 1
    found: list[tuple[int, ...]] = []
    found_bits: list[int] = []
    for size in range(1, len(cands) + 1):
        for combo in combinations(cands, size):
            bits = sum(1 << k for k in combo)
            if any(f & bits == f for f in found_bits):
                continue
            covered = 0
            for k in combo:
                covered |= masks[k]
            if covered == target:
                found.append(combo)
                found_bits.append(bits)
    return found


def enumerate_minimal_generators(
    A: Matrix, d: Vector, tol: float = DEFAULT_TOL, cap: Optional[int] = None
) -> list[tuple[int, ...]]:
    """Every minimal set of columns of ``A`` generating ``d``.

    Ordered by size, then lexicographically. Empty when ``Ax = d`` has no
    solution; a zero ``d`` is generated by the empty set.
    """
    pre = preprocess(A, d)
    if pre.verdict == "none":
        return []
    if pre.verdict in ("all", "zero"):
        return [()]
    if not nearest_point(pre.reduced, d).is_member(tol):
        return []
    return [tuple(pre.kept_cols[k] for k in I) for I in _minimal_generators(pre, tol, cap)]


def _meet(sf: Semifield, a, b):
    """Component-wise order minimum."""
    return np.minimum(a, b) if sf.is_max else np.maximum(a, b)


def _member(sf, index_set, pinned: dict, bound: np.ndarray) -> FamilyMember:
    """Classify the unpinned components by their bound: zero pins, top frees."""
    fixed = dict(pinned)
    bounded, free = {}, []
    for j, v in enumerate(bound.tolist()):
        if j in fixed:
            continue
        if v == sf.zero:
            fixed[j] = sf.zero
        elif v == sf.top:
            free.append(j)
        else:
            bounded[j] = v
    return FamilyMember(tuple(index_set), dict(sorted(fixed.items())), bounded, tuple(free), sf)


def _family(
    pre: Preprocessed,
    generators: list[tuple[int, ...]],
    limit: Optional[np.ndarray] = None,
    tol: float = DEFAULT_TOL,
) -> list[FamilyMember]:
    """Members for the given generating sets (reduced indexing).

    ``limit`` is an extra upper bound on x in original indexing (from a side
    inequality); generating sets whose pinned values break it are dropped.
    """
    sf = pre.semifield
    n = pre.A.shape[1]
    full = np.full(n, sf.top)
    full[list(pre.kept_cols)] = _upper_bound(pre)
    bound = full if limit is None else _meet(sf, full, limit)
    members = []
    for I in generators:
        I_orig = tuple(pre.kept_cols[k] for k in I)
        if limit is not None and not all(sf.le_tol(full[j], limit[j], tol) for j in I_orig):
            continue
        members.append(_member(sf, I_orig, {j: float(full[j]) for j in I_orig}, bound))
    return members


def _trivial_family(pre: Preprocessed, limit: Optional[np.ndarray] = None) -> list[FamilyMember]:
    """Family for a zero d (verdicts "zero" and "all"): the nonzero columns
    must vanish, the zero columns are limited only by ``limit``."""
    sf = pre.semifield
    bound = np.full(pre.A.shape[1], sf.top) if limit is None else np.asarray(limit, float)
    return [_member(sf, (), {j: sf.zero for j in pre.kept_cols}, bound)]


def general_solution(
    A: Matrix, d: Vector, tol: float = DEFAULT_TOL, cap: Optional[int] = None
) -> list[FamilyMember]:
    """All solutions of ``Ax = d`` as one member per minimal generating set.

    Inside a member the generating columns take their maximal coefficient and
    the others may be anything up to it; columns forced to zero by zero
    entries of ``d`` are pinned at zero.
    """
    pre = preprocess(A, d)
    if pre.verdict == "none":
        return []
    if pre.verdict in ("all", "zero"):
        return _trivial_family(pre)
    if not nearest_point(pre.reduced, d).is_member(tol):
        return []
    return _family(pre, _minimal_generators(pre, tol, cap), tol=tol)


# -- combined system -----------------------------------------------------------


def _system_family(pre: Preprocessed, limit, tol, cap) -> list[FamilyMember]:
    if pre.verdict == "none":
        return []
    if pre.verdict in ("all", "zero"):
        return _trivial_family(pre, limit)
    if not nearest_point(pre.reduced, pre.d).is_member(tol):
        return []
    return _family(pre, _minimal_generators(pre, tol, cap), limit, tol)


def solve_system(
    A: Matrix,
    d: Vector,
    C: Matrix,
    b: Vector,
    tol: float = DEFAULT_TOL,
    cap: Optional[int] = None,
) -> list[FamilyMember]:
    """General solution of ``Ax = d`` together with ``Cx <= b``.

    A member of the equation's family survives when its pinned values respect
    ``(b^- C)^-``; its remaining bounds tighten to ``(d^- a_i + b^- c_i)^-``.
    An empty list means the system has no solution.
    """
    check_same(A.semifield, C.semifield, b.semifield)
    if C.shape[1] != A.shape[1]:
        raise DimensionError(f"A has {A.shape[1]} columns but C has {C.shape[1]}")
    if C.shape[0] != len(b):
        raise DimensionError(f"matrix {C.shape} vs bound of length {len(b)}")
    limit = solve_inequality(C, b).upper_bound.values
    return _system_family(preprocess(A, d), limit, tol, cap)


# -- extended equation ---------------------------------------------------------


@dataclass(frozen=True)
class ExtendedSplit:
    I1: IndexSet  # rows with b_i < d_i: must be met by Ax
    I2: IndexSet  # rows with b_i = d_i: Ax may not exceed d there
    A1: Matrix
    A2: Matrix
    d1: Vector
    b2: Vector


def split_extended(A: Matrix, b: Vector, d: Vector, tol: float = DEFAULT_TOL) -> Optional[ExtendedSplit]:
    """Row split of ``Ax + b = d``; ``None`` when ``b <= d`` fails.

    Rows where ``b`` and ``d`` agree within ``tol`` go to the inequality part.
    """
    sf = check_same(A.semifield, b.semifield, d.semifield)
    if not (len(b) == len(d) == A.shape[0]):
        raise DimensionError(f"matrix {A.shape}, b of length {len(b)}, d of length {len(d)}")
    if not np.all(sf.le_tol(b.values, d.values, tol)):
        return None
    tie = sf.close(b.values, d.values, tol)
    I1 = np.flatnonzero(~tie).tolist()
    I2 = np.flatnonzero(tie).tolist()
    return ExtendedSplit(
        IndexSet(I1), IndexSet(I2), A.rows(I1), A.rows(I2), d.take(I1), b.take(I2)
    )


def solve_extended(
    A: Matrix, b: Vector, d: Vector, tol: float = DEFAULT_TOL, cap: Optional[int] = None
) -> list[FamilyMember]:
    """General solution of ``Ax + b = d`` (empty when there is none).

    The equation splits into ``A1 x = d1`` on the rows where ``b < d`` and
    ``A2 x <= b2`` on the rows where ``b = d``. When every row ties, the
    solution set is just ``x <= (d^- A)^-``.
    """
    split = split_extended(A, b, d, tol)
    if split is None:
        return []
    limit = solve_inequality(split.A2, split.b2).upper_bound.values
    if not split.I1:
        return [_member(A.semifield, (), {}, limit)]
    return _system_family(preprocess(split.A1, split.d1), limit, tol, cap)
