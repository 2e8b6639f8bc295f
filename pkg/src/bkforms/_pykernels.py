"""Pure-Python series kernels.

Reference implementations of the truncated-product and power recurrences.
They accept float64/complex128 arrays as well as object arrays holding
``fractions.Fraction`` values (the exact scalar mode), which the compiled
kernels do not.

Layout: a scalar series is a 1-D array indexed by y-degree.  A series with
circle-function coefficients is a 2-D array ``a[j, F + m]`` holding the
complex Fourier coefficient of ``exp(2 pi i m theta)`` in the y^j term, with
an odd number of columns centred on frequency zero.
"""

import numpy as np


def mul_series(a, b, n):
    """Cauchy product of two series truncated after degree ``n``."""
    ra, rb = a.shape[0], b.shape[0]
    rows = max(0, min(n + 1, ra + rb - 1))
    if a.ndim == 1:
        out = np.convolve(a, b)[:rows] if ra and rb else np.zeros(0, a.dtype)
        return out.copy()
    dtype = np.result_type(a.dtype, b.dtype)
    out = np.zeros((rows, a.shape[1] + b.shape[1] - 1), dtype=dtype)
    for i in range(rows):
        for j in range(max(0, i - rb + 1), min(i, ra - 1) + 1):
            aj = a[j]
            if not aj.any():
                continue
            bl = b[i - j]
            if not bl.any():
                continue
            out[i] += np.convolve(aj, bl)
    return out


def pow_series(a, alpha, n):
    """Coefficients of ``a**alpha`` through degree ``n``.

    Uses the J.C.P. Miller recurrence, so ``a[0]`` must be a nonzero scalar
    (1-D) or a nonzero constant row (2-D).
    """
    if a.ndim == 1:
        s0 = a[0]
        w = [s0 ** alpha]
        for m in range(1, n + 1):
            acc = 0 * s0
            for j in range(1, min(m, a.shape[0] - 1) + 1):
                acc = acc + ((alpha + 1) * j - m) * a[j] * w[m - j]
            w.append(acc / (m * s0))
        if a.dtype == object:
            return np.array(w, dtype=object)
        return np.array(w, dtype=a.dtype)

    ca = a.shape[1]
    fa = (ca - 1) // 2
    s0 = a[0, fa].real
    width = 1 + n * (ca - 1)
    fw = (width - 1) // 2
    w = np.zeros((n + 1, width), dtype=np.complex128)
    w[0, fw] = s0 ** alpha
    for m in range(1, n + 1):
        # row m of w only reaches frequency m * fa
        for j in range(1, min(m, a.shape[0] - 1) + 1):
            aj = a[j]
            if not aj.any():
                continue
            factor = ((alpha + 1) * j - m) / (m * s0)
            hw = (m - j) * fa
            prev = w[m - j, fw - hw:fw + hw + 1]
            conv = np.convolve(aj, prev)
            h = (conv.shape[0] - 1) // 2
            w[m, fw - h:fw + h + 1] += factor * conv
    return w
