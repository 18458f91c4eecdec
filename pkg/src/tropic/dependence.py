"""Linear dependence, the independence margin and basis extraction."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

from .distance import membership, nearest_point
from .linalg import IndexSet, Matrix, Vector
from .semifield import DEFAULT_TOL, DomainError, Scalar


@dataclass(frozen=True)
class DependenceReport:
    dependent: bool
    delta: Scalar
    coefficients: Optional[Vector]


@dataclass(frozen=True)
class BasisResult:
    kept: IndexSet
    basis: Matrix
    margin: Scalar


def _others(A: Matrix, i: int, pool) -> Matrix:
    return A.columns([j for j in pool if j != i])


def is_dependent(d: Vector, A: Matrix, tol: float = DEFAULT_TOL) -> DependenceReport:
    res = nearest_point(A, d)
    member, witness = membership(A, d, tol)
    return DependenceReport(member, res.delta, witness)


def independence_margin(A: Matrix) -> Scalar:
    """Smallest residual of a column against the remaining ones.

    A single nonzero column is independent by convention, so its margin is
    the maximal element.
    """
    m, n = A.shape
    if n == 0:
        raise DomainError("the margin needs at least one column")
    if not A.column_regular:
        raise DomainError(f"zero columns {sorted(A.zero_columns())} have no margin")
    sf = A.semifield
    if n == 1:
        return Scalar(sf, sf.top)
    margin = None
    for i in range(n):
        delta = nearest_point(_others(A, i, range(n)), A.column(i)).delta
        margin = delta if margin is None or delta < margin else margin
    return margin


def is_independent(A: Matrix, tol: float = DEFAULT_TOL) -> bool:
    margin = independence_margin(A)
    return not bool(A.semifield.le_tol(margin.value, A.semifield.one, tol))


def extract_basis(A: Matrix, tol: float = DEFAULT_TOL) -> BasisResult:
    """Drop, in ascending column order, every column generated by the columns
    still retained; what is left is independent and spans the same space."""
    n = A.shape[1]
    if not A.column_regular:
        raise DomainError(f"zero columns {sorted(A.zero_columns())} cannot enter a basis")
    kept = list(range(n))
    for i in range(n):
        if len(kept) == 1:
            break
        if membership(_others(A, i, kept), A.column(i), tol)[0]:
            kept.remove(i)
    basis = A.columns(kept)
    return BasisResult(IndexSet(kept), basis, independence_margin(basis))
