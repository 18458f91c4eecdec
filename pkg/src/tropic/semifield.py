"""Scalar algebra of the linearly ordered radicable idempotent semifields.

Four concrete semifields are provided, all carried by IEEE doubles:

==========  =======  ====  =====  ======  ==================
tag         zero     one   plus   times   maximal element
==========  =======  ====  =====  ======  ==================
max-plus    -inf     0     max    +       +inf
min-plus    +inf     0     min    +       -inf
max-times   0        1     max    *       +inf
min-times   +inf     1     min    *       0
==========  =======  ====  =====  ======  ==================

A :class:`Semifield` exposes vectorised kernels that work on floats and
numpy arrays alike; :class:`Scalar` is the tagged value used at the public
API boundary.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Union

import numpy as np

DEFAULT_TOL = 1e-9

Exponent = Union[int, Fraction, str]


class SemifieldMismatchError(ValueError):
    """Operands belong to different semifields."""


class DomainError(ValueError):
    """An operation was applied outside its domain (e.g. inverting zero)."""


@dataclass(frozen=True, eq=False)
class Semifield:
    tag: str
    zero: float
    one: float
    top: float
    is_max: bool
    multiplicative: bool

    def __repr__(self) -> str:
        return f"Semifield({self.tag!r})"

    def __reduce__(self):
        return (get_semifield, (self.tag,))

    # -- kernels -----------------------------------------------------------

    def add(self, x, y):
        return np.maximum(x, y) if self.is_max else np.minimum(x, y)

    def sum(self, a, axis=None):
        """Idempotent sum along ``axis``; the empty sum is zero."""
        a = np.asarray(a, dtype=float)
        if self.is_max:
            return np.max(a, axis=axis, initial=self.zero)
        return np.min(a, axis=axis, initial=self.zero)

    def mul(self, x, y):
        x = np.asarray(x, dtype=float)
        y = np.asarray(y, dtype=float)
        with np.errstate(invalid="ignore", over="ignore"):
            raw = x * y if self.multiplicative else x + y
        # zero absorbs everything, the maximal element included
        return np.where((x == self.zero) | (y == self.zero), self.zero, raw)

    def inv(self, x):
        """Inverse without a zero check; zero maps to the maximal element."""
        x = np.asarray(x, dtype=float)
        if not self.multiplicative:
            return 0.0 - x  # no negative zero
        with np.errstate(divide="ignore"):
            return 1.0 / x

    def div(self, x, y):
        """``x y^-1`` for nonzero ``y`` in one rounding step; equal arguments give one."""
        x = np.asarray(x, dtype=float)
        y = np.asarray(y, dtype=float)
        with np.errstate(invalid="ignore"):
            raw = x / y if self.multiplicative else x - y
        raw = np.where(x == y, self.one, raw)
        return np.where(x == self.zero, self.zero, raw)

    def pinv(self, x):
        """Component-wise pseudo-inverse: inverse off zero, zero on zero."""
        x = np.asarray(x, dtype=float)
        return np.where(x == self.zero, self.zero, self.inv(x))

    def power(self, x, q):
        q = Fraction(q)
        x = np.asarray(x, dtype=float)
        if q == 0:
            return np.full_like(x, self.one)
        with np.errstate(invalid="ignore", over="ignore", divide="ignore"):
            if self.multiplicative:
                raw = np.power(x, float(q))
            else:
                raw = x * float(q)
        return np.where(x == self.zero, self.zero if q > 0 else self.top, raw)

    def le(self, x, y):
        return np.less_equal(x, y) if self.is_max else np.greater_equal(x, y)

    def lt(self, x, y):
        return np.less(x, y) if self.is_max else np.greater(x, y)

    # -- the order-preserving isomorphism onto max-plus --------------------

    def to_additive(self, x):
        x = np.asarray(x, dtype=float)
        with np.errstate(divide="ignore"):
            if self.tag == "max-plus":
                return x.copy()
            if self.tag == "min-plus":
                return 0.0 - x
            if self.tag == "max-times":
                return np.log(x)
            return -np.log(x)

    def from_additive(self, y):
        y = np.asarray(y, dtype=float)
        if self.tag == "max-plus":
            return y.copy()
        if self.tag == "min-plus":
            return 0.0 - y
        if self.tag == "max-times":
            return np.exp(y)
        return np.exp(-y)

    # -- tolerant comparisons (absolute on the additive scale) -------------

    def close(self, x, y, tol: float = DEFAULT_TOL):
        ax, ay = self.to_additive(x), self.to_additive(y)
        same = ax == ay  # covers matching infinities
        with np.errstate(invalid="ignore"):
            near = np.abs(ax - ay) <= tol
        return same | near

    def le_tol(self, x, y, tol: float = DEFAULT_TOL):
        ax, ay = self.to_additive(x), self.to_additive(y)
        with np.errstate(invalid="ignore"):
            return (ax <= ay) | (ax - ay <= tol)

    def is_one(self, x, tol: float = DEFAULT_TOL):
        return self.close(x, self.one, tol)

    def in_carrier(self, x) -> np.ndarray:
        """True where ``x`` is a carrier value: nonzero finite or zero, never top."""
        x = np.asarray(x, dtype=float)
        ok = np.isfinite(x) | (x == self.zero)
        if self.multiplicative:
            ok &= x >= 0
            if self.tag == "min-times":
                ok &= x != 0
        return ok


MAX_PLUS = Semifield("max-plus", -math.inf, 0.0, math.inf, True, False)
MIN_PLUS = Semifield("min-plus", math.inf, 0.0, -math.inf, False, False)
MAX_TIMES = Semifield("max-times", 0.0, 1.0, math.inf, True, True)
MIN_TIMES = Semifield("min-times", math.inf, 1.0, 0.0, False, True)

SEMIFIELDS = {sf.tag: sf for sf in (MAX_PLUS, MIN_PLUS, MAX_TIMES, MIN_TIMES)}


def get_semifield(tag: str | Semifield) -> Semifield:
    if isinstance(tag, Semifield):
        return tag
    try:
        return SEMIFIELDS[tag]
    except KeyError:
        raise ValueError(
            f"unknown semifield {tag!r}; expected one of {sorted(SEMIFIELDS)}"
        ) from None


def check_same(*semifields: Semifield) -> Semifield:
    first = semifields[0]
    for other in semifields[1:]:
        if other is not first:
            raise SemifieldMismatchError(f"{first.tag} vs {other.tag}")
    return first


class Scalar:
    """An element of one semifield.

    ``+`` is the idempotent addition, ``*`` the semifield multiplication and
    comparisons follow the order induced by addition.
    """

    __slots__ = ("semifield", "value")

    def __init__(self, semifield: Semifield | str, value: float):
        self.semifield = get_semifield(semifield)
        self.value = float(value)

    @classmethod
    def zero(cls, semifield) -> Scalar:
        sf = get_semifield(semifield)
        return cls(sf, sf.zero)

    @classmethod
    def one(cls, semifield) -> Scalar:
        sf = get_semifield(semifield)
        return cls(sf, sf.one)

    @classmethod
    def top(cls, semifield) -> Scalar:
        sf = get_semifield(semifield)
        return cls(sf, sf.top)

    @property
    def is_zero(self) -> bool:
        return self.value == self.semifield.zero

    @property
    def is_top(self) -> bool:
        return self.value == self.semifield.top

    def _coerce(self, other) -> Scalar:
        if isinstance(other, Scalar):
            check_same(self.semifield, other.semifield)
            return other
        if isinstance(other, (int, float, np.floating, np.integer)):
            return Scalar(self.semifield, other)
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return binary_add(self, other)

    __radd__ = __add__

    def __mul__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return binary_mul(self, other)

    __rmul__ = __mul__

    def __pow__(self, q):
        return rational_power(self, q)

    def inverse(self) -> Scalar:
        return invert(self)

    def __eq__(self, other):
        if isinstance(other, Scalar):
            return self.semifield is other.semifield and self.value == other.value
        if isinstance(other, (int, float)):
            return self.value == other
        return NotImplemented

    def __hash__(self):
        return hash(self.value)

    def __le__(self, other):
        other = self._coerce(other)
        return bool(self.semifield.le(self.value, other.value))

    def __lt__(self, other):
        other = self._coerce(other)
        return bool(self.semifield.lt(self.value, other.value))

    def __ge__(self, other):
        other = self._coerce(other)
        return bool(self.semifield.le(other.value, self.value))

    def __gt__(self, other):
        other = self._coerce(other)
        return bool(self.semifield.lt(other.value, self.value))

    def __float__(self):
        return self.value

    def __repr__(self):
        return f"Scalar({self.semifield.tag!r}, {self.value!r})"


def binary_add(x: Scalar, y: Scalar) -> Scalar:
    sf = check_same(x.semifield, y.semifield)
    return Scalar(sf, sf.add(x.value, y.value))


def binary_mul(x: Scalar, y: Scalar) -> Scalar:
    sf = check_same(x.semifield, y.semifield)
    return Scalar(sf, sf.mul(x.value, y.value))


def invert(x: Scalar) -> Scalar:
    if x.is_zero:
        raise DomainError("zero has no inverse")
    return Scalar(x.semifield, x.semifield.inv(x.value))


def rational_power(x: Scalar, q: Exponent) -> Scalar:
    """Raise ``x`` to a rational power; ``q`` may be an int, Fraction or "p/q"."""
    q = Fraction(q)
    if x.is_zero and q <= 0:
        raise DomainError("zero can only be raised to a positive power")
    return Scalar(x.semifield, x.semifield.power(x.value, q))


def scalar_distance(x: Scalar, y: Scalar) -> Scalar:
    """``y^-1 x + x^-1 y``; one for two zeros, top when exactly one is zero."""
    sf = check_same(x.semifield, y.semifield)
    if x.is_zero and y.is_zero:
        return Scalar(sf, sf.one)
    if x.is_zero or y.is_zero:
        return Scalar(sf, sf.top)
    return Scalar(sf, _distance_kernel(sf, x.value, y.value))


def _distance_kernel(sf: Semifield, x, y):
    return sf.add(sf.div(x, y), sf.div(y, x))


def isomorphism_map(x: Scalar, target: Semifield | str) -> Scalar:
    """Carry ``x`` into ``target`` along the isomorphisms between the semifields.

    Composes the edge maps ``y = -x``, ``y = 1/x``, ``y = ln x`` and
    ``y = exp x``; zero goes to zero and the maximal element to the maximal
    element.
    """
    target = get_semifield(target)
    return Scalar(target, target.from_additive(x.semifield.to_additive(x.value)))
