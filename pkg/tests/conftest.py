import numpy as np
import pytest

from tropic.linalg import Matrix, Vector
from tropic.semifield import MAX_PLUS

NEG = -np.inf

_criteria: dict[int, tuple[str, list[bool]]] = {}


def mp_matrix(rows):
    return Matrix(MAX_PLUS, np.array(rows, dtype=float))


def mp_vector(vals):
    return Vector(MAX_PLUS, np.array(vals, dtype=float))


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


def pytest_runtest_makereport(item, call):
    marker = item.get_closest_marker("criterion")
    if marker is None or call.when != "call":
        return
    number, title = marker.args
    entry = _criteria.setdefault(number, (title, []))
    entry[1].append(call.excinfo is None)


def pytest_terminal_summary(terminalreporter):
    if not _criteria:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(_criteria):
        title, outcomes = _criteria[number]
        verdict = "PASS" if outcomes and all(outcomes) else "FAIL"
        terminalreporter.write_line(f"criterion {number:2d} {verdict}  {title}")
