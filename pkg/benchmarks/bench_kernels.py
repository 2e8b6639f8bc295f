"""Time the compiled series kernels against the pure-Python fallback.

Usage::

    python benchmarks/bench_kernels.py [--repeat 5] [--order 12] [--max-frequency 8]

A 1-D array holds y-coefficients; a 2-D array holds one row of complex
Fourier coefficients in theta per y-degree, centred on frequency zero.
"""

from __future__ import annotations

import argparse
import timeit

import numpy as np

from bkforms import _pykernels

try:
    from bkforms import _ckernels
except ImportError:  # extension not built
    _ckernels = None


def _cases(order: int, max_frequency: int, rng: np.random.Generator):
    a1 = rng.normal(size=order + 1)
    b1 = rng.normal(size=order + 1)
    a1[0] = 1.5
    shape = (order + 1, 2 * max_frequency + 1)
    a2 = rng.normal(scale=0.1, size=shape) + 1j * rng.normal(scale=0.1, size=shape)
    b2 = rng.normal(scale=0.1, size=shape) + 1j * rng.normal(scale=0.1, size=shape)
    # pow_series needs a nonzero theta-constant leading term (centre column)
    a2[0] = 0.0
    a2[0, max_frequency] = 1.5
    return [
        ("mul_series 1-D", "mul_series", (a1, b1, order)),
        ("mul_series 2-D", "mul_series", (a2, b2, order)),
        ("pow_series 1-D", "pow_series", (a1, -2.5, order)),
        ("pow_series 2-D", "pow_series", (a2, -2.5, order)),
    ]


def _best(fn, args, repeat: int) -> float:
    timer = timeit.Timer(lambda: fn(*args))
    number, _ = timer.autorange()
    return min(timer.repeat(repeat=repeat, number=number)) / number


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--repeat", type=int, default=5)
    parser.add_argument("--order", type=int, default=12)
    parser.add_argument("--max-frequency", type=int, default=8, help="theta bandwidth of the 2-D case")
    parser.add_argument("--seed", type=int, default=0)
    args = parser.parse_args(argv)

    if _ckernels is None:
        print("compiled kernels are not built; nothing to compare")
        return 1
    rng = np.random.default_rng(args.seed)
    print(f"order {args.order}, theta frequencies up to {args.max_frequency}, best of {args.repeat}")
    print(f"{'kernel':<16}{'python':>12}{'cython':>12}{'speedup':>10}{'max diff':>12}")
    for label, name, call in _cases(args.order, args.max_frequency, rng):
        py, cy = getattr(_pykernels, name), getattr(_ckernels, name)
        diff = float(np.max(np.abs(py(*call) - cy(*call))))
        t_py = _best(py, call, args.repeat)
        t_cy = _best(cy, call, args.repeat)
        print(f"{label:<16}{t_py * 1e6:>10.1f}us{t_cy * 1e6:>10.1f}us{t_py / t_cy:>9.1f}x{diff:>12.1e}")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
