"""Vectors, co-vectors and matrices over a semifield.

All containers are immutable wrappers around float64 arrays tagged with their
semifield. Operators follow the semiring: ``+`` is component-wise idempotent
addition, ``*`` multiplies by a scalar, ``@`` is the semiring product.
Indices are 0-based throughout.
"""

from __future__ import annotations

from typing import Iterable, Sequence

import numpy as np

from .semifield import (
    DEFAULT_TOL,
    DomainError,
    Scalar,
    Semifield,
    _distance_kernel,
    check_same,
    get_semifield,
)

IndexSet = frozenset


class DimensionError(ValueError):
    pass


def _frozen(values, ndim: int) -> np.ndarray:
    arr = np.array(values, dtype=float)
    if arr.ndim != ndim:
        if ndim == 2 and arr.size == 0:
            arr = arr.reshape(0, 0)
        else:
            raise DimensionError(f"expected a {ndim}-d array, got shape {arr.shape}")
    arr.flags.writeable = False
    return arr


def _scalar_value(sf: Semifield, x) -> float:
    if isinstance(x, Scalar):
        check_same(sf, x.semifield)
        return x.value
    return float(x)


class _Array:
    __slots__ = ("semifield", "values")
    ndim = 1

    def __init__(self, semifield: Semifield | str, values):
        self.semifield = get_semifield(semifield)
        self.values = _frozen(values, self.ndim)

    def __len__(self):
        return self.values.shape[0]

    def __iter__(self):
        sf = self.semifield
        return (Scalar(sf, v) for v in self.values)

    def __getitem__(self, i) -> Scalar:
        return Scalar(self.semifield, self.values[i])

    def __eq__(self, other):
        if type(other) is not type(self):
            return NotImplemented
        return (
            self.semifield is other.semifield
            and self.values.shape == other.values.shape
            and bool(np.array_equal(self.values, other.values))
        )

    __hash__ = None

    def tolist(self) -> list:
        return self.values.tolist()

    def is_zero(self) -> bool:
        return bool(np.all(self.values == self.semifield.zero))

    def is_regular(self) -> bool:
        return bool(np.all(self.values != self.semifield.zero))

    def support(self) -> IndexSet:
        return support(self)

    def close(self, other, tol: float = DEFAULT_TOL) -> bool:
        check_same(self.semifield, other.semifield)
        _check_len(self, other)
        return bool(np.all(self.semifield.close(self.values, other.values, tol)))

    def __le__(self, other) -> bool:
        check_same(self.semifield, other.semifield)
        _check_len(self, other)
        return bool(np.all(self.semifield.le(self.values, other.values)))

    def __ge__(self, other) -> bool:
        return other.__le__(self)

    def __repr__(self):
        return f"{type(self).__name__}({self.semifield.tag!r}, {self.values.tolist()!r})"


class Vector(_Array):
    """Column vector."""

    __slots__ = ()

    @classmethod
    def zeros(cls, semifield, m: int) -> Vector:
        sf = get_semifield(semifield)
        return cls(sf, np.full(m, sf.zero))

    def __add__(self, other):
        if not isinstance(other, Vector):
            return NotImplemented
        return vec_add(self, other)

    def __mul__(self, x):
        return scalar_mul(x, self)

    __rmul__ = __mul__

    def __matmul__(self, other):
        if isinstance(other, CoVector):
            check_same(self.semifield, other.semifield)
            sf = self.semifield
            return Matrix(sf, sf.mul(self.values[:, None], other.values[None, :]))
        return NotImplemented

    def pinv(self) -> CoVector:
        return pseudo_invert(self)

    def take(self, idx: Iterable[int]) -> Vector:
        return Vector(self.semifield, self.values[list(idx)])


class CoVector(_Array):
    """Row vector, the result of pseudo-inverting a column vector."""

    __slots__ = ()

    def __add__(self, other):
        if not isinstance(other, CoVector):
            return NotImplemented
        check_same(self.semifield, other.semifield)
        _check_len(self, other)
        return CoVector(self.semifield, self.semifield.add(self.values, other.values))

    def __mul__(self, x):
        sf = self.semifield
        return CoVector(sf, sf.mul(_scalar_value(sf, x), self.values))

    __rmul__ = __mul__

    def __matmul__(self, other):
        sf = self.semifield
        if isinstance(other, Vector):
            check_same(sf, other.semifield)
            _check_len(self, other)
            return Scalar(sf, sf.sum(sf.mul(self.values, other.values)))
        if isinstance(other, Matrix):
            check_same(sf, other.semifield)
            if other.shape[0] != len(self):
                raise DimensionError(f"{len(self)} vs {other.shape}")
            return CoVector(sf, sf.sum(sf.mul(self.values[:, None], other.values), axis=0))
        return NotImplemented

    def pinv(self) -> Vector:
        """Pseudo-inverse back to a column vector (component-wise rule)."""
        if self.is_zero():
            raise DomainError("the zero co-vector has no pseudo-inverse")
        return Vector(self.semifield, self.semifield.pinv(self.values))


class Matrix:
    __slots__ = ("semifield", "values")

    def __init__(self, semifield: Semifield | str, values):
        self.semifield = get_semifield(semifield)
        self.values = _frozen(values, 2)

    @classmethod
    def zeros(cls, semifield, m: int, n: int) -> Matrix:
        sf = get_semifield(semifield)
        return cls(sf, np.full((m, n), sf.zero))

    @classmethod
    def identity(cls, semifield, n: int) -> Matrix:
        sf = get_semifield(semifield)
        vals = np.full((n, n), sf.zero)
        np.fill_diagonal(vals, sf.one)
        return cls(sf, vals)

    @classmethod
    def from_columns(cls, semifield, columns: Sequence[Vector | Sequence[float]]) -> Matrix:
        sf = get_semifield(semifield)
        cols = [c.values if isinstance(c, Vector) else np.asarray(c, float) for c in columns]
        return cls(sf, np.column_stack(cols))

    @property
    def shape(self) -> tuple[int, int]:
        return self.values.shape

    def column(self, j: int) -> Vector:
        return Vector(self.semifield, self.values[:, j])

    def columns(self, idx: Iterable[int]) -> Matrix:
        return Matrix(self.semifield, self.values[:, list(idx)].reshape(self.shape[0], -1))

    def rows(self, idx: Iterable[int]) -> Matrix:
        return Matrix(self.semifield, self.values[list(idx), :].reshape(-1, self.shape[1]))

    def zero_columns(self) -> IndexSet:
        return IndexSet(np.flatnonzero(np.all(self.values == self.semifield.zero, axis=0)).tolist())

    def zero_rows(self) -> IndexSet:
        return IndexSet(np.flatnonzero(np.all(self.values == self.semifield.zero, axis=1)).tolist())

    @property
    def row_regular(self) -> bool:
        return regularity(self)[0]

    @property
    def column_regular(self) -> bool:
        return regularity(self)[1]

    def is_zero(self) -> bool:
        return bool(np.all(self.values == self.semifield.zero))

    def __add__(self, other):
        if not isinstance(other, Matrix):
            return NotImplemented
        check_same(self.semifield, other.semifield)
        if self.shape != other.shape:
            raise DimensionError(f"{self.shape} vs {other.shape}")
        return Matrix(self.semifield, self.semifield.add(self.values, other.values))

    def __mul__(self, x):
        sf = self.semifield
        return Matrix(sf, sf.mul(_scalar_value(sf, x), self.values))

    __rmul__ = __mul__

    def __matmul__(self, other):
        if isinstance(other, Vector):
            return mat_vec_mul(self, other)
        if isinstance(other, Matrix):
            return mat_mul(self, other)
        return NotImplemented

    def __le__(self, other) -> bool:
        check_same(self.semifield, other.semifield)
        if self.shape != other.shape:
            raise DimensionError(f"{self.shape} vs {other.shape}")
        return bool(np.all(self.semifield.le(self.values, other.values)))

    def __ge__(self, other) -> bool:
        return other.__le__(self)

    def __eq__(self, other):
        if not isinstance(other, Matrix):
            return NotImplemented
        return (
            self.semifield is other.semifield
            and self.shape == other.shape
            and bool(np.array_equal(self.values, other.values))
        )

    __hash__ = None

    def tolist(self) -> list:
        return self.values.tolist()

    def __repr__(self):
        return f"Matrix({self.semifield.tag!r}, {self.values.tolist()!r})"


def _check_len(a, b):
    if len(a) != len(b):
        raise DimensionError(f"length {len(a)} vs {len(b)}")


def vec_add(a: Vector, b: Vector) -> Vector:
    sf = check_same(a.semifield, b.semifield)
    _check_len(a, b)
    return Vector(sf, sf.add(a.values, b.values))


def scalar_mul(x: Scalar | float, a: Vector) -> Vector:
    sf = a.semifield
    return Vector(sf, sf.mul(_scalar_value(sf, x), a.values))


def mat_vec_mul(A: Matrix, x: Vector) -> Vector:
    sf = check_same(A.semifield, x.semifield)
    if A.shape[1] != len(x):
        raise DimensionError(f"matrix {A.shape} times vector of length {len(x)}")
    return Vector(sf, sf.sum(sf.mul(A.values, x.values[None, :]), axis=1))


def mat_mul(B: Matrix, C: Matrix) -> Matrix:
    sf = check_same(B.semifield, C.semifield)
    if B.shape[1] != C.shape[0]:
        raise DimensionError(f"{B.shape} times {C.shape}")
    prod = sf.mul(B.values[:, :, None], C.values[None, :, :])
    return Matrix(sf, sf.sum(prod, axis=1))


def pseudo_invert(x: Vector) -> CoVector:
    if x.is_zero():
        raise DomainError("pseudo-inverse is only defined for nonzero vectors")
    return CoVector(x.semifield, x.semifield.pinv(x.values))


def support(a: Vector) -> IndexSet:
    return IndexSet(np.flatnonzero(a.values != a.semifield.zero).tolist())


def regularity(A: Matrix) -> tuple[bool, bool]:
    """(row regular, column regular): no zero rows / no zero columns."""
    nz = A.values != A.semifield.zero
    return bool(np.all(np.any(nz, axis=1))), bool(np.all(np.any(nz, axis=0)))


def vec_distance(a: Vector, b: Vector) -> Scalar:
    """``b^- a + a^- b``, top when the supports differ, one for two zero vectors."""
    sf = check_same(a.semifield, b.semifield)
    _check_len(a, b)
    za = a.values == sf.zero
    zb = b.values == sf.zero
    if np.any(za != zb):
        return Scalar(sf, sf.top)
    if np.all(za):
        return Scalar(sf, sf.one)
    keep = ~za
    per_entry = _distance_kernel(sf, a.values[keep], b.values[keep])
    return Scalar(sf, sf.sum(per_entry))
