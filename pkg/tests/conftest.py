import math

import numpy as np
import pytest
from hypothesis import settings

from quasisect.generators import MatrixGenSpec, gen_msectorial

settings.register_profile("default", max_examples=60, deadline=None)
settings.load_profile("default")


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


def complex_gaussian(rng, *shape):
    return (rng.standard_normal(shape) + 1j * rng.standard_normal(shape)) / math.sqrt(2.0)


def random_hermitian(rng, d):
    G = complex_gaussian(rng, d, d)
    return 0.5 * (G + G.conj().T)


def random_unitary(rng, d):
    Q, R = np.linalg.qr(complex_gaussian(rng, d, d))
    return Q * (np.diag(R) / np.abs(np.diag(R)))


@pytest.fixture(scope="session")
def sectorial_pi4():
    return gen_msectorial(MatrixGenSpec(20, math.pi / 4, 11))


@pytest.fixture(scope="session")
def sectorial_pi6():
    return gen_msectorial(MatrixGenSpec(20, math.pi / 6, 12))


# One line per acceptance criterion, printed after the run.
_ACCEPTANCE = pytest.StashKey[list]()


@pytest.fixture
def acceptance_log(request):
    return request.config.stash.setdefault(_ACCEPTANCE, [])


def pytest_terminal_summary(terminalreporter):
    lines = terminalreporter.config.stash.get(_ACCEPTANCE, [])
    if lines:
        terminalreporter.section("acceptance criteria")
        for line in sorted(lines, key=lambda s: int(s.split()[1].rstrip(":"))):
            terminalreporter.write_line(line)
