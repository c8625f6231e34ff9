import math
import sys

import hypothesis
import numpy as np
import pytest

from sbmap.bath import DiscretizedBath

hypothesis.settings.register_profile("default", max_examples=25, deadline=None)
hypothesis.settings.register_profile("fast", max_examples=5, deadline=None)
hypothesis.settings.load_profile("default")


@pytest.fixture
def single_mode():
    return DiscretizedBath.from_modes([(1.0, 0.5)])


@pytest.fixture
def rng():
    return np.random.default_rng(1234)


def random_density(rng, rank=2):
    a = rng.normal(size=(2, rank)) + 1j * rng.normal(size=(2, rank))
    rho = a @ a.conj().T
    return rho / np.trace(rho)


def ln2_beta(omega=1.0):
    return math.log(2.0) / omega


def pytest_terminal_summary(terminalreporter):
    mod = sys.modules.get("test_acceptance")
    lines = getattr(mod, "RESULTS", None)
    if lines:
        terminalreporter.section("acceptance criteria")
        for line in sorted(lines, key=lambda s: int(s.split("criterion ")[1].split(":")[0])):
            terminalreporter.write_line(line)
