import numpy as np
import pytest

from torimirror import make_bundle, make_torus, make_unitary_set

A5 = [[1, 0], [0, 0]]


@pytest.fixture
def square_torus():
    return make_torus(1j * np.eye(2))


@pytest.fixture
def counter_sets():
    """The two transition-matrix sets of the worked counterexample (r = 2, A = diag(1, 0))."""
    swap = np.array([[0, 1], [1, 0]])
    I2 = np.eye(2)
    U = make_unitary_set([swap, I2], [np.diag([1, -1]), I2])
    Uprime = make_unitary_set([swap, I2], [np.diag([1j, -1j]), I2])
    return U, Uprime


@pytest.fixture
def counter_bundles(counter_sets):
    U, Uprime = counter_sets
    return make_bundle(2, A5, [0, 0], [0, 0], U), make_bundle(2, A5, [0, 0], [0, 0], Uprime)


@pytest.fixture
def rng():
    return np.random.default_rng(20261016)


# ----------------------------------------------------------- acceptance log

_ACCEPTANCE = []


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    rep = outcome.get_result()
    marker = item.get_closest_marker("criterion")
    if marker and rep.when == "call":
        status = "PASS" if rep.passed else "FAIL"
        _ACCEPTANCE.append(f"[{status}] criterion {marker.args[0]}: {marker.args[1]}")


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(number, title): acceptance criterion")


def pytest_terminal_summary(terminalreporter):
    if _ACCEPTANCE:
        terminalreporter.section("acceptance criteria")
        for line in sorted(_ACCEPTANCE, key=lambda s: int(s.split("criterion ")[1].split(":")[0])):
            terminalreporter.write_line(line)
