import math

import numpy as np
import pytest
from hypothesis import strategies as st

from opsqft.quaternion import PureUnit, Quaternion

finite = st.floats(min_value=-10.0, max_value=10.0, allow_nan=False, allow_infinity=False)
angles = st.floats(min_value=-2 * math.pi, max_value=2 * math.pi, allow_nan=False)


@st.composite
def quaternions(draw):
    return Quaternion(draw(finite), draw(finite), draw(finite), draw(finite))


@st.composite
def unit_quaternions(draw):
    v = np.array([draw(finite) for _ in range(4)])
    n = np.linalg.norm(v)
    if n < 1e-3:
        v, n = np.array([1.0, 0, 0, 0]), 1.0
    return Quaternion(*(v / n))


@st.composite
def pure_units(draw):
    v = np.array([draw(finite) for _ in range(3)])
    if np.linalg.norm(v) < 1e-3:
        v = np.array([1.0, 0, 0])
    return PureUnit.from_vector(*v)


@st.composite
def fg_pairs(draw):
    """(f, g) with the degenerate branches g = f, g = -f drawn often."""
    f = draw(pure_units())
    kind = draw(st.sampled_from(["free", "same", "opposite"]))
    if kind == "same":
        return f, f
    if kind == "opposite":
        return f, -f
    return f, draw(pure_units())


def qclose(p, q, tol=1e-12):
    return (p - q).norm() <= tol * max(1.0, q.norm())


# ---------------------------------------------------------------------------
# acceptance summary: test_acceptance.py records one line per criterion

ACCEPTANCE = {}


@pytest.fixture
def acceptance():
    def record(number, title, ok, detail=""):
        ACCEPTANCE[number] = (title, ok, detail)
        print(f"[{'PASS' if ok else 'FAIL'}] criterion {number}: {title} {detail}")

    return record


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(ACCEPTANCE):
        title, ok, detail = ACCEPTANCE[number]
        terminalreporter.write_line(f"[{'PASS' if ok else 'FAIL'}] {number}: {title} {detail}")
