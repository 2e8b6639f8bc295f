from __future__ import annotations

import os
import subprocess
import sys
from fractions import Fraction

import numpy as np
import pytest

from bkforms import _pykernels, kernels

try:
    from bkforms import _ckernels
except ImportError:  # extension not built
    _ckernels = None

needs_ext = pytest.mark.skipif(_ckernels is None, reason="compiled kernels not built")


def _random_2d(rng, rows, half):
    a = rng.normal(size=(rows, 2 * half + 1)) + 1j * rng.normal(size=(rows, 2 * half + 1))
    # real-valued circle functions have Hermitian coefficient rows
    return 0.5 * (a + a[:, ::-1].conj())


@needs_ext
@pytest.mark.parametrize("seed", range(5))
def test_mul_backends_agree(seed):
    rng = np.random.default_rng(seed)
    a1, b1 = rng.normal(size=7), rng.normal(size=5)
    assert np.allclose(_ckernels.mul_series(a1, b1, 8), _pykernels.mul_series(a1, b1, 8), atol=1e-14)
    a2, b2 = _random_2d(rng, 6, 3), _random_2d(rng, 4, 2)
    assert np.allclose(_ckernels.mul_series(a2, b2, 7), _pykernels.mul_series(a2, b2, 7), atol=1e-13)


@needs_ext
@pytest.mark.parametrize("alpha", [-3, -1, 0.5, 2.5])
def test_pow_backends_agree(alpha):
    rng = np.random.default_rng(11)
    a1 = np.concatenate([[1.7], rng.normal(size=5)])
    assert np.allclose(_ckernels.pow_series(a1, alpha, 9), _pykernels.pow_series(a1, alpha, 9), rtol=1e-12)
    a2 = _random_2d(rng, 4, 2)
    a2[0] = 0.0
    a2[0, 2] = 1.3
    assert np.allclose(_ckernels.pow_series(a2, alpha, 6), _pykernels.pow_series(a2, alpha, 6), rtol=1e-12, atol=1e-12)


def test_convolution_oracle():
    a = np.array([1.0, 2.0, 3.0])
    b = np.array([4.0, 5.0])
    assert np.allclose(kernels.mul_series(a, b, 10), np.polynomial.polynomial.polymul(a, b))
    assert np.allclose(kernels.mul_series(a, b, 1), [4.0, 13.0])


def test_exact_arrays_use_fallback():
    a = np.array([Fraction(1), Fraction(1, 3)], dtype=object)
    out = kernels.pow_series(a, -1, 3)
    assert list(out) == [1, Fraction(-1, 3), Fraction(1, 9), Fraction(-1, 27)]


def test_pure_python_switch():
    env = dict(os.environ, BKFORMS_PURE_PYTHON="1")
    out = subprocess.run(
        [sys.executable, "-c", "import bkforms.kernels as k; print(k.BACKEND)"],
        env=env, capture_output=True, text=True, check=True,
    )
    assert out.stdout.strip() == "python"
