"""Brute-force cross-checks for the solvers.

Nothing here is used by the solvers themselves. The grid sweep works in the
max-plus image of the problem with ordinary numpy arithmetic, so it shares no
code path with the residual computations it is meant to check.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np

from .distance import membership
from .linalg import Matrix, Vector
from .semifield import DEFAULT_TOL, MAX_PLUS, Scalar, Semifield, check_same

EXHAUSTIVE_CAP = 12


class BudgetError(RuntimeError):
    pass


@dataclass(frozen=True)
class GridSpec:
    """Per-component sweep ``lower, lower + step, ..., upper`` on the additive
    scale, optionally with the zero element adjoined."""

    lower: Sequence[float] | float
    upper: Sequence[float] | float
    step: float
    include_zero: bool = True
    budget: int = 5_000_000

    def axes(self, n: int) -> list[np.ndarray]:
        lo = np.broadcast_to(np.asarray(self.lower, float), (n,))
        hi = np.broadcast_to(np.asarray(self.upper, float), (n,))
        if np.any(lo > hi) or self.step <= 0:
            raise ValueError("grid needs lower <= upper and a positive step")
        axes = []
        for a, b in zip(lo, hi):
            k = int(np.floor((b - a) / self.step + 1e-9))
            pts = a + self.step * np.arange(k + 1)
            if self.include_zero:
                pts = np.concatenate([[-np.inf], pts])
            axes.append(pts)
        size = int(np.prod([len(ax) for ax in axes], dtype=float))
        if size > self.budget:
            raise BudgetError(f"grid of {size} points exceeds the budget of {self.budget}")
        return axes

    def contains(self, x: Vector) -> bool:
        """Whether the max-plus image of ``x`` is a grid point."""
        ax = x.semifield.to_additive(x.values)
        for pts, v in zip(self.axes(len(ax)), ax):
            if not np.any(pts == v):
                return False
        return True


def _chebyshev(Y: np.ndarray, d: np.ndarray) -> np.ndarray:
    """Max-plus distance of every row of ``Y`` to ``d``: the largest absolute
    gap on a shared support, infinite when the supports differ."""
    zy = np.isneginf(Y)
    zd = np.isneginf(d)
    mismatch = np.any(zy != zd[None, :], axis=1)
    with np.errstate(invalid="ignore"):
        gaps = np.where(zd[None, :], 0.0, np.abs(Y - d[None, :]))
    dist = gaps.max(axis=1, initial=0.0)
    return np.where(mismatch, np.inf, dist)


def grid_min_distance(
    A: Matrix,
    d: Vector,
    grid: GridSpec,
    constraint: Optional[str] = None,
    chunk: int = 200_000,
) -> tuple[Scalar, Optional[Vector]]:
    """Smallest distance ``rho(Ax, d)`` over a grid of coefficient vectors.

    ``constraint`` restricts the sweep to ``"below"`` (``Ax <= d``) or
    ``"above"`` (``Ax >= d``). Returns the best value in the native semifield
    with the grid point attaining it (``None`` if nothing was feasible).
    """
    sf = check_same(A.semifield, d.semifield)
    a = sf.to_additive(A.values)
    dv = sf.to_additive(d.values)
    m, n = a.shape
    axes = grid.axes(n)
    mesh = np.stack(np.meshgrid(*axes, indexing="ij"), axis=-1).reshape(-1, n)
    best, arg = np.inf, None
    for start in range(0, len(mesh), chunk):
        X = mesh[start:start + chunk]
        Y = np.full((len(X), m), -np.inf)
        for j in range(n):
            with np.errstate(invalid="ignore"):
                term = a[None, :, j] + X[:, j, None]
            term[np.isnan(term)] = -np.inf
            Y = np.maximum(Y, term)
        dist = _chebyshev(Y, dv)
        if constraint == "below":
            dist = np.where(np.all(Y <= dv[None, :], axis=1), dist, np.inf)
        elif constraint == "above":
            dist = np.where(np.all(Y >= dv[None, :], axis=1), dist, np.inf)
        elif constraint is not None:
            raise ValueError(f"unknown constraint {constraint!r}")
        k = int(np.argmin(dist))
        if dist[k] < best:
            best, arg = float(dist[k]), X[k]
    value = Scalar(sf, sf.from_additive(best))
    if arg is None:
        return value, None
    return value, Vector(sf, sf.from_additive(arg))


def exhaustive_minimal_generators(A: Matrix, d: Vector, tol: float = DEFAULT_TOL) -> list[tuple[int, ...]]:
    """Minimal generating sets found by testing every column subset.

    Only the zero vector is generated by the empty set.
    """
    n = A.shape[1]
    if n > EXHAUSTIVE_CAP:
        raise BudgetError(f"{n} columns exceed the exhaustive cap of {EXHAUSTIVE_CAP}")
    if d.is_zero():
        return [()]
    generating = [
        S
        for size in range(1, n + 1)
        for S in itertools.combinations(range(n), size)
        if membership(A.columns(S), d, tol)[0]
    ]
    sets = [frozenset(S) for S in generating]
    return [S for S, fs in zip(generating, sets) if not any(o < fs for o in sets)]


@dataclass
class FamilyReport:
    ok: bool
    checked: int
    violation: Optional[str] = None
    point: Optional[Vector] = None


def _sample_member(member, sf: Semifield, rng: np.random.Generator, extreme: bool) -> np.ndarray:
    x = member.extreme().values.copy()
    if extreme:
        return x
    for j, bound in member.bounded.items():
        if rng.random() < 0.15:
            x[j] = sf.zero
        else:
            shift = -rng.uniform(0, 10)
            x[j] = sf.from_additive(sf.to_additive(bound) + shift)
    for j in member.free:
        x[j] = sf.zero if rng.random() < 0.15 else sf.from_additive(rng.uniform(-30, 30))
    return x


def verify_family(
    A: Matrix,
    d: Vector,
    family,
    C: Optional[Matrix] = None,
    b: Optional[Vector] = None,
    extended: bool = False,
    samples: int = 20,
    seed: int = 0,
    tol: float = DEFAULT_TOL,
) -> FamilyReport:
    """Sample every member and check it against the defining relations.

    Checks ``Ax = d`` (or ``Ax + b = d`` when ``extended``) and, if ``C`` is
    given, ``Cx <= b``. The first sample of each member is its extreme point.
    """
    sf = A.semifield
    rng = np.random.default_rng(seed)
    checked = 0
    for member in family:
        for k in range(samples + 1):
            x = _sample_member(member, sf, rng, extreme=(k == 0))
            xv = Vector(sf, x)
            lhs = A @ xv
            if extended:
                lhs = lhs + b
            checked += 1
            if not lhs.close(d, tol):
                return FamilyReport(False, checked, f"member {member.index_set}: Ax != d", xv)
            if C is not None and not np.all(sf.le_tol((C @ xv).values, b.values, tol)):
                return FamilyReport(False, checked, f"member {member.index_set}: Cx > b", xv)
    return FamilyReport(True, checked)


# -- random instances ----------------------------------------------------------


def random_matrix(
    rng: np.random.Generator,
    m: int,
    n: int,
    low: int = -10,
    high: int = 10,
    zero_prob: float = 0.1,
    column_regular: bool = True,
) -> np.ndarray:
    """Integer max-plus entries with independent zero (-inf) entries."""
    while True:
        vals = rng.integers(low, high + 1, size=(m, n)).astype(float)
        vals[rng.random((m, n)) < zero_prob] = -np.inf
        if not column_regular or np.all(np.any(np.isfinite(vals), axis=0)):
            return vals


def random_vector(
    rng: np.random.Generator, m: int, low: int = -10, high: int = 10, zero_prob: float = 0.1
) -> np.ndarray:
    """Integer max-plus vector, never entirely zero."""
    while True:
        vals = rng.integers(low, high + 1, size=m).astype(float)
        vals[rng.random(m) < zero_prob] = -np.inf
        if np.any(np.isfinite(vals)):
            return vals


def random_instance(
    rng: np.random.Generator,
    m: int,
    n: int,
    semifield: Semifield = MAX_PLUS,
    zero_prob: float = 0.1,
) -> tuple[Matrix, Vector]:
    """Column-regular ``A`` and nonzero ``d``, drawn in max-plus and mapped."""
    A = random_matrix(rng, m, n, zero_prob=zero_prob)
    d = random_vector(rng, m, zero_prob=zero_prob)
    sf = semifield
    return Matrix(sf, sf.from_additive(A)), Vector(sf, sf.from_additive(d))
