import numpy as np
import pytest

from wgof.rng import stream
from wgof.transport import SolverConfig


@pytest.fixture
def rng():
    return stream(12345, "tests")


@pytest.fixture
def fast_cfg():
    """Small solver budget for unit tests."""
    return SolverConfig(ref_sample_size=5000, seed=7)


@pytest.fixture
def desk_cfg():
    return SolverConfig.desk(seed=7)


def kendall_tau_brute(x, y):
    """Kendall tau by explicit pair counting (no ties)."""
    x = np.asarray(x)
    y = np.asarray(y)
    s = 0.0
    for i in range(len(x) - 1):
        s += np.sum(np.sign(x[i + 1:] - x[i]) * np.sign(y[i + 1:] - y[i]))
    n = len(x)
    return 2.0 * s / (n * (n - 1))


def primal_ot_cost(x, a, y, b, p):
    """Discrete optimal transport cost by the primal linear program."""
    from scipy.optimize import linprog
    x, y = np.atleast_2d(x), np.atleast_2d(y)
    n, m = len(x), len(y)
    c = np.linalg.norm(x[:, None, :] - y[None, :, :], axis=2) ** p
    rows = np.zeros((n + m, n * m))
    for i in range(n):
        rows[i, i * m:(i + 1) * m] = 1.0
    for k in range(m):
        rows[n + k, k::m] = 1.0
    res = linprog(c.ravel(), A_eq=rows, b_eq=np.concatenate([a, b]), bounds=(0, None), method="highs")
    assert res.status == 0
    return res.fun
