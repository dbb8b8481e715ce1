import numpy as np
import pytest
from hypothesis import settings
from hypothesis import strategies as st

from nonadditive.analysis import paper_projector
from nonadditive.pauli import PauliString

settings.register_profile("default", deadline=None, max_examples=200)
settings.load_profile("default")


@st.composite
def pauli_strings(draw, n=None):
    if n is None:
        n = draw(st.integers(1, 5))
    x = draw(st.integers(0, (1 << n) - 1))
    z = draw(st.integers(0, (1 << n) - 1))
    return PauliString(n, x, z, draw(st.integers(0, 3)))


@pytest.fixture(scope="session")
def P():
    return paper_projector()


def random_hermitian(rng: np.random.Generator, n: int) -> np.ndarray:
    a = rng.standard_normal((1 << n, 1 << n)) + 1j * rng.standard_normal((1 << n, 1 << n))
    return (a + a.conj().T) / 2


def pytest_terminal_summary(terminalreporter):
    import sys

    module = sys.modules.get("test_acceptance")
    if module is None or not module.RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for line in module.summary_lines():
        terminalreporter.write_line(line)
