import numpy as np
import pytest

from privreg import validate_dataset


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


@pytest.fixture
def small_dataset():
    X = np.array([[1.0, 0.5], [0.5, -1.0], [-0.5, 0.5], [1.0, 1.0], [0.2, -0.3]])
    y = np.array([1.0, -2.0, 0.5, 3.0, 0.7])
    return validate_dataset(X, y)


def random_problem(rng, n, d):
    X = rng.uniform(-1, 1, size=(n, d))
    y = X @ rng.uniform(-1, 1, size=d) + 0.3 * rng.standard_normal(n)
    return X, y


_ACCEPTANCE_LINES = []


@pytest.fixture
def criterion_log():
    """Callable ``log(number, passed, detail)`` collecting one line per acceptance criterion."""

    def log(number, passed, detail):
        line = f"{'PASS' if passed else 'FAIL'} criterion {number}: {detail}"
        _ACCEPTANCE_LINES.append((number, line))
        print(line)

    return log


def pytest_terminal_summary(terminalreporter):
    if _ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for _, line in sorted(_ACCEPTANCE_LINES):
            terminalreporter.write_line(line)
