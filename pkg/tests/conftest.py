import numpy as np
import pytest
from hypothesis import strategies as st

from wsemigroup.hardy_core import polynomial

ACCEPTANCE_LINES: list[str] = []


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


def random_poly(rng, degree, unit=True):
    c = rng.standard_normal(degree + 1) + 1j * rng.standard_normal(degree + 1)
    if unit:
        c /= np.linalg.norm(c)
    return polynomial(c)


_coef = st.complex_numbers(max_magnitude=10, allow_nan=False, allow_infinity=False)
poly_coeffs = st.lists(_coef, min_size=1, max_size=60)
polys = poly_coeffs.map(polynomial)


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
