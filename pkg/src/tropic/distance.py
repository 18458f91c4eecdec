"""Distance from a vector to the linear span of the columns of a matrix.

The central quantity is the residual ``Delta = sqrt((A (d^- A)^-)^- d)``.
It is the least distance from ``d`` to ``span(A)``, it equals one exactly
when ``d`` lies in the span, and its square is the distance from ``d`` to
both half-spaces ``{Ax <= d}`` and ``{Ax >= d}``.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Optional

import numpy as np

from .linalg import DimensionError, IndexSet, Matrix, Vector, vec_distance
from .semifield import DEFAULT_TOL, DomainError, Scalar, check_same

HALF = Fraction(1, 2)


class InconsistentInputError(ValueError):
    """The matrix has not been made consistent with the right-hand side."""


@dataclass(frozen=True)
class ConsistentForm:
    A_hat: Matrix
    forced_zero_cols: IndexSet  # J: columns touching a zero row of d
    zero_rows_of_d: IndexSet  # I


@dataclass(frozen=True)
class Residual:
    delta: Scalar
    argmin_x: Optional[Vector]
    nearest_y: Optional[Vector]
    row_regular: bool
    consistent: Optional[ConsistentForm] = None

    @property
    def finite(self) -> bool:
        return not self.delta.is_top

    def is_member(self, tol: float = DEFAULT_TOL) -> bool:
        return self.finite and bool(self.delta.semifield.is_one(self.delta.value, tol))


def _check_pair(A: Matrix, d: Vector):
    sf = check_same(A.semifield, d.semifield)
    if A.shape[0] != len(d):
        raise DimensionError(f"matrix {A.shape} vs right-hand side of length {len(d)}")
    return sf


def make_consistent(A: Matrix, d: Vector) -> ConsistentForm:
    """Zero the entries of ``A`` outside the zero rows of ``d`` in every column
    that meets one of those rows."""
    sf = _check_pair(A, d)
    if d.is_zero():
        raise DomainError("the consistent form needs a nonzero right-hand side")
    zero_rows = d.values == sf.zero
    touches = np.any((A.values != sf.zero) & zero_rows[:, None], axis=0)
    vals = A.values.copy()
    vals[np.ix_(~zero_rows, touches)] = sf.zero
    return ConsistentForm(
        A_hat=Matrix(sf, vals),
        forced_zero_cols=IndexSet(np.flatnonzero(touches).tolist()),
        zero_rows_of_d=IndexSet(np.flatnonzero(zero_rows).tolist()),
    )


def _maximal_coefficients(A: Matrix, d: Vector) -> Vector:
    """``(d^- A)^-``, the greatest x with Ax <= d for a consistent pair."""
    return (d.pinv() @ A).pinv()


def _core(A_hat: Matrix, d: Vector) -> tuple[Scalar, Optional[Vector], bool]:
    """Residual of a consistent pair along with ``(d^- A)^-`` when finite.

    Rows where ``d`` vanishes are matched by forcing the touching coefficients
    to zero, so only the rows in ``supp(d)`` decide row regularity.
    """
    sf = A_hat.semifield
    live = A_hat.values[d.values != sf.zero]
    row_regular = bool(np.all(np.any(live != sf.zero, axis=1)))
    if not row_regular:
        return Scalar(sf, sf.top), None, False
    x1 = _maximal_coefficients(A_hat, d)
    squared = (A_hat @ x1).pinv() @ d
    return squared ** HALF, x1, True


def residual(A: Matrix, d: Vector) -> Residual:
    """Residual of a pair that is already consistent (see :func:`make_consistent`)."""
    form = make_consistent(A, d)
    if form.A_hat != A:
        raise InconsistentInputError(
            f"columns {sorted(form.forced_zero_cols)} must be zero outside the zero rows of d"
        )
    delta, x1, row_regular = _core(A, d)
    if x1 is None:
        return Residual(delta, None, None, row_regular, form)
    x = delta * x1
    return Residual(delta, x, A @ x, row_regular, form)


def nearest_point(A: Matrix, d: Vector) -> Residual:
    """Least distance from ``d`` to ``span(A)`` with a minimiser.

    Works for any ``A`` and ``d``: zero columns get zero coefficients, the
    pair is made consistent first, and a zero ``d`` is at distance one from
    the span with the zero vector as witness.
    """
    sf = _check_pair(A, d)
    n = A.shape[1]
    if d.is_zero():
        return Residual(Scalar(sf, sf.one), Vector.zeros(sf, n), d, True, None)
    form = make_consistent(A, d)
    delta, x1, row_regular = _core(form.A_hat, d)
    if x1 is None:
        return Residual(delta, None, None, row_regular, form)
    x = delta * x1
    return Residual(delta, x, A @ x, row_regular, form)


def project_below(A: Matrix, d: Vector) -> tuple[Vector, Scalar]:
    """Closest point of ``{Ax <= d}``: ``x1 = (d^- A)^-`` at distance ``Delta^2``."""
    sf = _check_pair(A, d)
    if d.is_zero():
        return Vector.zeros(sf, A.shape[1]), Scalar(sf, sf.one)
    A_hat = make_consistent(A, d).A_hat
    dA = d.pinv() @ A_hat
    if dA.is_zero():
        x1 = Vector.zeros(sf, A.shape[1])
    else:
        x1 = dA.pinv()
    return x1, vec_distance(A @ x1, d)


def project_above(A: Matrix, d: Vector) -> tuple[Vector, Scalar]:
    """Closest point of ``{Ax >= d}``: ``x2 = Delta^2 (d^- A)^-``."""
    sf = _check_pair(A, d)
    if d.is_zero():
        return Vector.zeros(sf, A.shape[1]), Scalar(sf, sf.one)
    A_hat = make_consistent(A, d).A_hat
    delta, x1, _ = _core(A_hat, d)
    if x1 is None:
        raise DomainError("no vector of the span dominates d at a finite distance")
    x2 = (delta * delta) * x1
    return x2, vec_distance(A @ x2, d)


def membership(A: Matrix, d: Vector, tol: float = DEFAULT_TOL) -> tuple[bool, Optional[Vector]]:
    """Whether ``d`` lies in ``span(A)``; the witness satisfies ``A w = d``."""
    sf = _check_pair(A, d)
    if d.is_zero():
        return True, Vector.zeros(sf, A.shape[1])
    A_hat = make_consistent(A, d).A_hat
    delta, x1, _ = _core(A_hat, d)
    if x1 is None or not sf.is_one(delta.value, tol):
        return False, None
    return True, x1
