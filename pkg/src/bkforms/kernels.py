"""Backend selection for the series kernels.

The compiled extension ``_ckernels`` is used when it was built; otherwise the
pure-Python module ``_pykernels`` is used.  Setting ``BKFORMS_PURE_PYTHON=1``
forces the fallback.  Object arrays (exact ``Fraction`` arithmetic) always go
through the fallback.
"""

import os

import numpy as np

from . import _pykernels

BACKEND = "python"
_impl = _pykernels

if not os.environ.get("BKFORMS_PURE_PYTHON"):
    try:
        from . import _ckernels
    except ImportError:  # extension not built
        pass
    else:
        _impl = _ckernels
        BACKEND = "cython"


def _pick(*arrays):
    if any(x.dtype == object for x in arrays):
        return _pykernels
    return _impl


def mul_series(a: np.ndarray, b: np.ndarray, n: int) -> np.ndarray:
    """Product of two coefficient arrays, truncated after y-degree ``n``."""
    if a.ndim != b.ndim:
        raise ValueError("cannot multiply 1-D and 2-D coefficient arrays")
    return _pick(a, b).mul_series(a, b, n)


def pow_series(a: np.ndarray, alpha, n: int) -> np.ndarray:
    """``a ** alpha`` through y-degree ``n``; the constant term must be a nonzero constant."""
    impl = _pick(a)
    if impl is _pykernels:
        return impl.pow_series(a, alpha, n)
    return impl.pow_series(a, float(alpha), n)
