"""Acceptance suite: one test per criterion, summarised in the terminal report."""

import json
import subprocess
import sys
import time
import xml.etree.ElementTree as ET

import numpy as np
import pytest

from conftest import mp_matrix, mp_vector
from tropic.dependence import extract_basis, is_independent
from tropic.distance import make_consistent, membership, nearest_point, project_above, project_below
from tropic.io import dumps_result, parse_problem_text, serialize_problem
from tropic.linalg import Matrix, Vector, vec_distance
from tropic.oracle import (
    GridSpec,
    exhaustive_minimal_generators,
    grid_min_distance,
    random_matrix,
    random_vector,
    verify_family,
)
from tropic.semifield import MAX_TIMES
from tropic.solver import (
    enumerate_minimal_generators,
    general_solution,
    solve_equation,
    solve_extended,
    solve_inequality,
    solve_system,
)

criterion = pytest.mark.criterion


def instance(rng, max_m=6, max_n=6, low=-10, high=10):
    m = int(rng.integers(1, max_m + 1))
    n = int(rng.integers(1, max_n + 1))
    A = random_matrix(rng, m, n, low=low, high=high)
    return mp_matrix(A)


def coefficients(rng, n, zero_prob=0.1):
    x = rng.integers(-10, 11, n).astype(float)
    x[rng.random(n) < zero_prob] = -np.inf
    return x


@criterion(1, "residual law: distance at x* equals Delta >= 1 exactly (500 instances, < 5 s)")
def test_residual_law():
    rng = np.random.default_rng(1)
    start = time.perf_counter()
    finite = 0
    for _ in range(500):
        A = instance(rng)
        d = mp_vector(random_vector(rng, A.shape[0]))
        res = nearest_point(A, d)
        assert res.delta.value >= 0
        if res.finite:
            finite += 1
            assert vec_distance(A @ res.argmin_x, d) == res.delta
    elapsed = time.perf_counter() - start
    assert finite > 250
    assert elapsed < 5.0, f"{elapsed:.2f} s"


@criterion(2, "grid oracle: best >= Delta, equal when x* is a grid point (100 instances, < 30 s)")
def test_grid_optimality():
    rng = np.random.default_rng(2)
    grid = GridSpec(-30, 30, 0.5)
    start = time.perf_counter()
    on_grid = finite = 0
    for _ in range(100):
        A = instance(rng, max_n=3)
        d = mp_vector(random_vector(rng, A.shape[0]))
        res = nearest_point(A, d)
        best, _ = grid_min_distance(A, d, grid)
        assert best >= res.delta
        finite += res.finite
        if res.finite and grid.contains(res.argmin_x):
            on_grid += 1
            assert best == res.delta
        elif not res.finite:
            assert best.is_top
    elapsed = time.perf_counter() - start
    assert on_grid == finite > 0
    assert elapsed < 30.0, f"{elapsed:.2f} s"


@criterion(3, "solvable by construction: d = Ax is solved, A max = d, max >= x (500 instances)")
def test_solvable_by_construction():
    rng = np.random.default_rng(3)
    for _ in range(500):
        A = instance(rng)
        x = mp_vector(coefficients(rng, A.shape[1]))
        d = A @ x
        sol = solve_equation(A, d)
        assert sol.solvable
        assert A @ sol.maximal == d
        assert x <= sol.maximal


def _below_d(rng, A, d):
    """Random x with Ax <= d, built in plain arithmetic without residuation."""
    a, dv = A.values, d.values
    x = coefficients(rng, A.shape[1], zero_prob=0.2)
    blocked = np.any(np.isfinite(a) & np.isneginf(dv)[:, None], axis=0)
    x[blocked] = -np.inf
    with np.errstate(invalid="ignore"):
        Ax = np.max(a + x[None, :], axis=1)
    live = np.isfinite(dv) & np.isfinite(Ax)
    if np.any(live):
        x = x - np.max(Ax[live] - dv[live]) - rng.integers(0, 4)
    return mp_vector(x)


@criterion(4, "inequality equivalence: x <= (d^- A)^- iff Ax <= d (200 instances x 40 samples)")
def test_inequality_equivalence():
    rng = np.random.default_rng(4)
    for _ in range(200):
        A = instance(rng)
        d = mp_vector(random_vector(rng, A.shape[0]))
        bound = solve_inequality(A, d).upper_bound
        assert A @ bound <= d
        for _ in range(20):
            x = bound.values - rng.integers(0, 11, len(bound))
            x[rng.random(len(bound)) < 0.15] = -np.inf
            assert A @ mp_vector(x) <= d
        for _ in range(20):
            x = _below_d(rng, A, d)
            assert A @ x <= d
            assert x <= bound


@criterion(5, "half-space projections: deviations equal Delta^2, grid finds nothing closer (200 instances)")
def test_half_space_projections():
    rng = np.random.default_rng(5)
    grid = GridSpec(-40, 40, 1)
    done = 0
    while done < 200:
        A = instance(rng, max_n=3)
        d = mp_vector(random_vector(rng, A.shape[0]))
        res = nearest_point(A, d)
        if not res.finite:
            continue
        done += 1
        squared = res.delta * res.delta
        x1, rho1 = project_below(A, d)
        x2, rho2 = project_above(A, d)
        assert A @ x1 <= d and A @ x2 >= d
        assert rho1 == squared and rho2 == squared
        assert grid_min_distance(A, d, grid, "below")[0] >= squared
        assert grid_min_distance(A, d, grid, "above")[0] >= squared


@criterion(6, "family completeness: generators match exhaustive search, members sound (100 instances)")
def test_family_completeness():
    rng = np.random.default_rng(6)
    multi = 0
    for k in range(100):
        width = 10 if k % 2 else 3
        A = instance(rng, max_n=5, low=-width, high=width)
        d = A @ mp_vector(coefficients(rng, A.shape[1]))
        found = enumerate_minimal_generators(A, d)
        assert set(found) == set(exhaustive_minimal_generators(A, d))
        family = general_solution(A, d)
        assert verify_family(A, d, family, samples=20, seed=k).ok
        maximal = solve_equation(A, d).maximal
        assert all(member.extreme() == maximal for member in family)
        multi += len(family) > 1
    assert multi > 0


@criterion(7, "consistency invariance: rho(Ax, d) = rho(A^x, d) for irregular d (100 instances x 50)")
def test_consistency_invariance():
    rng = np.random.default_rng(7)
    for _ in range(100):
        A = instance(rng)
        m = A.shape[0]
        if m == 1:
            A = mp_matrix(np.vstack([A.values, random_matrix(rng, 1, A.shape[1])]))
            m = 2
        dv = random_vector(rng, m)
        dv[rng.choice(m, size=int(rng.integers(1, m)), replace=False)] = -np.inf
        if np.all(np.isneginf(dv)):
            dv[0] = 0.0
        d = mp_vector(dv)
        form = make_consistent(A, d)
        for k in range(50):
            x = coefficients(rng, A.shape[1], zero_prob=0.2)
            if k % 2:
                x[list(form.forced_zero_cols)] = -np.inf
            xv = mp_vector(x)
            assert vec_distance(A @ xv, d) == vec_distance(form.A_hat @ xv, d)


def _planted(rng):
    """Six columns: a few random generators plus copies, multiples and sums."""
    m = int(rng.integers(2, 5))
    base = [random_matrix(rng, m, 1)[:, 0] for _ in range(int(rng.integers(2, 4)))]
    cols = list(base)
    while len(cols) < 6:
        kind = rng.integers(3)
        a = cols[rng.integers(len(cols))]
        if kind == 0:
            cols.append(a.copy())
        elif kind == 1:
            cols.append(a + rng.integers(-5, 6))
        else:
            b = cols[rng.integers(len(cols))]
            cols.append(np.maximum(a + rng.integers(-3, 4), b + rng.integers(-3, 4)))
    order = rng.permutation(6)
    return mp_matrix(np.column_stack([cols[i] for i in order]))


@criterion(8, "basis extraction: independent output spanning every input column (100 instances)")
def test_basis_extraction():
    rng = np.random.default_rng(8)
    for _ in range(100):
        A = _planted(rng)
        res = extract_basis(A)
        assert len(res.kept) < 6
        assert len(res.kept) == 1 or is_independent(res.basis)
        for j in range(6):
            assert membership(res.basis, A.column(j))[0]


def _rel_close(a, b):
    a, b = np.asarray(a, float), np.asarray(b, float)
    zero = (a == 0) | (b == 0)
    return np.array_equal(a == 0, b == 0) and np.allclose(a[~zero], b[~zero], rtol=1e-6, atol=0)


@criterion(9, "isomorphism commutation: max-times solve = exp of max-plus solve (100 instances, rel 1e-6)")
def test_isomorphism_commutation():
    rng = np.random.default_rng(9)
    solvable = 0
    for k in range(100):
        A_add = instance(rng)
        if k % 2:
            d_add = A_add @ mp_vector(coefficients(rng, A_add.shape[1]))
        else:
            d_add = mp_vector(random_vector(rng, A_add.shape[0]))
        A_mul = Matrix(MAX_TIMES, np.exp(A_add.values))
        d_mul = Vector(MAX_TIMES, np.exp(d_add.values))
        native = solve_equation(A_mul, d_mul)
        mapped = solve_equation(A_add, d_add)
        assert native.solvable == mapped.solvable
        solvable += native.solvable
        assert _rel_close(native.delta.value, np.exp(mapped.delta.value))
        if mapped.pseudo is not None:
            assert _rel_close(native.pseudo.values, np.exp(mapped.pseudo.values))
            assert _rel_close(project_below(A_mul, d_mul)[0].values, np.exp(project_below(A_add, d_add)[0].values))
            assert _rel_close(project_above(A_mul, d_mul)[0].values, np.exp(project_above(A_add, d_add)[0].values))
        if mapped.solvable:
            assert _rel_close(native.maximal.values, np.exp(mapped.maximal.values))
    assert 0 < solvable < 100


@criterion(10, "combined system and extended equation desk examples")
def test_desk_examples():
    A = mp_matrix([[0, 2], [2, 0]])
    d = mp_vector([2, 2])
    C = mp_matrix([[0, 0]])
    (member,) = solve_system(A, d, C, mp_vector([1]))
    assert member.fixed == {0: 0, 1: 0} and member.extreme() == mp_vector([0, 0])
    assert solve_system(A, d, C, mp_vector([-1])) == []

    A = mp_matrix([[0], [0]])
    b, d = mp_vector([1, 5]), mp_vector([3, 5])
    (member,) = solve_extended(A, b, d)
    assert member.fixed == {0: 3} and not member.bounded
    assert (A @ member.extreme()) + b == d
    bare = solve_equation(A, d)
    assert not bare.solvable and bare.delta == 1


CLI_EXAMPLES = [
    ("solve", {"semifield": "max-plus", "A": [[1, 3], [2, 1]], "d": [4, 5]}, 0,
     {"solvable": True, "delta": 0, "maximal": [3, 1]}),
    ("distance", {"semifield": "max-plus", "A": [[0], [0]], "d": [3, 5]}, 0,
     {"delta": 1, "x": [4], "y": [4, 4]}),
    ("extended", {"semifield": "max-plus", "A": [[0], [0]], "b": [4, 6], "d": [3, 5]}, 1,
     {"solvable": False, "reason": "b not ≤ d"}),
]

SVG_EXAMPLES = [
    ("distance", {"semifield": "max-plus", "A": [[1, 3], [2, 1]], "d": [4, 5]}),
    ("distance", {"semifield": "max-plus", "A": [[0], [0]], "d": [3, 5]}),
    ("extended", {"semifield": "max-plus", "A": [[0], [0]], "b": [1, 5], "d": [3, 5]}),
    ("distance", {"semifield": "max-times", "A": [[1, 2], [3, 1]], "d": [2, 8]}),
]


def _tropic(*args):
    return subprocess.run([sys.executable, "-m", "tropic", *args], capture_output=True, text=True)


@criterion(11, "CLI contract: round trip, exit codes of the examples, deterministic well-formed SVG")
def test_cli_contract(tmp_path):
    docs = [raw for _, raw, _, _ in CLI_EXAMPLES] + [
        {"semifield": "min-times", "A": [[0.1, "+inf"], [1 / 3, 2e-300]], "d": [0.7, 3.14159]},
        {"semifield": "max-plus", "A": [[-1.5e-7, "-inf"]], "d": [123456789.123456789],
         "C": [[0, 1]], "b": [2]},
    ]
    for raw in docs:
        text = serialize_problem(parse_problem_text(json.dumps(raw)))
        again = parse_problem_text(text)
        assert serialize_problem(again) == text
        assert np.array_equal(again.A.values, parse_problem_text(json.dumps(raw)).A.values)

    for command, raw, code, expected in CLI_EXAMPLES:
        src = tmp_path / f"{command}.json"
        src.write_text(json.dumps(raw), encoding="utf-8")
        proc = _tropic(command, "--input", str(src))
        assert proc.returncode == code, proc.stderr
        result = json.loads(proc.stdout)
        assert {k: result[k] for k in expected} == expected
        assert json.loads(dumps_result(result)) == result

    for i, (command, raw) in enumerate(SVG_EXAMPLES):
        src = tmp_path / f"svg{i}.json"
        src.write_text(json.dumps(raw), encoding="utf-8")
        outputs = []
        for k in range(2):
            path = tmp_path / f"svg{i}_{k}.svg"
            proc = _tropic(command, "--input", str(src), "--svg", str(path))
            assert proc.returncode in (0, 1), proc.stderr
            outputs.append(path.read_bytes())
        assert outputs[0] == outputs[1]
        assert ET.fromstring(outputs[0]).tag.endswith("svg")
