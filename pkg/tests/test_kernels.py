"""Backend equivalence: compiled and NumPy kernels share one stream."""
import numpy as np
import pytest

from vera.engine import _kernels_py
from vera.engine.kernels import backend_name

cython_kernels = pytest.importorskip(
    "vera.engine._kernels", reason="compiled kernels not built")


@pytest.mark.parametrize("seed", [0, 1, 7, 123456789, 2 ** 63 + 11])
def test_sir_chain_bit_identical(seed):
    args = (990, 10, 0, 16.0, 0.025, 1 / 14, 60, seed)
    for fast, slow in zip(cython_kernels.sir_chain(*args),
                          _kernels_py.sir_chain(*args)):
        assert np.array_equal(fast, slow)


@pytest.mark.parametrize("seed", [0, 3, 99999])
def test_phenomenon_chain_bit_identical(seed):
    args = (10, 5000, 4, 0.5, 1, 12, 30, 90, seed)
    for fast, slow in zip(cython_kernels.phenomenon_chain(*args),
                          _kernels_py.phenomenon_chain(*args)):
        assert np.array_equal(fast, slow)


def test_backend_selection_reports_a_backend():
    assert backend_name() in ("cython", "python")


def test_zero_transmission_is_flat():
    S, I, R = _kernels_py.sir_chain(100, 5, 0, 16.0, 0.0, 0.0, 30, 42)
    assert np.all(S == 100) and np.all(I == 5) and np.all(R == 0)


def test_single_agent_population():
    # N == 1: infection probability is defined as zero
    S, I, R = _kernels_py.sir_chain(0, 1, 0, 16.0, 0.025, 0.0, 10, 1)
    assert np.all(I == 1)
