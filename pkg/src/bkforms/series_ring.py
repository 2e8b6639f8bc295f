"""Truncated power series and Laurent series over trigonometric polynomials.

``CircleFunction`` is a real trigonometric polynomial on the circle with
coordinate theta in [0, 1).  ``CollarSeries`` is a power series in the
defining coordinate y whose coefficients are circle functions, known up to a
declared order.  ``LaurentSeries`` allows finitely many negative powers and
either scalar or circle-function coefficients.  Scalar Laurent series may hold
``fractions.Fraction`` coefficients for exact arithmetic.

All values are immutable.
"""

from __future__ import annotations

import math
from fractions import Fraction
from numbers import Real
from typing import Iterable, Sequence

import numpy as np

from . import kernels
from .errors import (
    FrequencyCapExceeded,
    InvalidPolynomial,
    NonInvertibleLeadingCoefficient,
    NotDivisible,
    UnrepresentableResult,
)

MAX_FREQUENCY = 64
DEFAULT_ORDER = 16
SAMPLES = 256
_MAX_SAMPLES = 1 << 16

TWO_PI = 2.0 * math.pi


def _trim_columns(c: np.ndarray) -> np.ndarray:
    """Drop outer frequency columns that are identically zero."""
    width = c.shape[-1]
    f = (width - 1) // 2
    while f > 0:
        if c.ndim == 1:
            edge = c[0] != 0 or c[-1] != 0
        else:
            edge = c[:, 0].any() or c[:, -1].any()
        if edge:
            break
        c = c[..., 1:-1]
        f -= 1
    return c


def _check_cap(freq: int) -> None:
    if freq > MAX_FREQUENCY:
        raise FrequencyCapExceeded(
            f"Fourier frequency {freq} exceeds the cap {MAX_FREQUENCY}"
        )


def _pad_columns(c: np.ndarray, half: int) -> np.ndarray:
    f = (c.shape[-1] - 1) // 2
    if f == half:
        return c
    pad = [(0, 0)] * (c.ndim - 1) + [(half - f, half - f)]
    return np.pad(c, pad)


def _is_exact(x) -> bool:
    return isinstance(x, (Fraction, int)) and not isinstance(x, bool)


# ----------------------------------------------------------------------
# Circle functions
# ----------------------------------------------------------------------


class CircleFunction:
    """Real trigonometric polynomial ``c0 + sum a_m cos(2 pi m t) + b_m sin(2 pi m t)``.

    Internally stored as complex Fourier coefficients ``c[F + m]`` for
    ``m = -F..F``.
    """

    __slots__ = ("_c",)

    def __init__(
        self,
        constant: float = 0.0,
        cosines: Iterable[tuple[int, float]] = (),
        sines: Iterable[tuple[int, float]] = (),
    ):
        cos_terms = _collect_terms(cosines, "cosine")
        sin_terms = _collect_terms(sines, "sine")
        f = max([0, *cos_terms, *sin_terms])
        _check_cap(f)
        c = np.zeros(2 * f + 1, dtype=np.complex128)
        c[f] = float(constant)
        for m, amp in cos_terms.items():
            c[f + m] += amp / 2.0
            c[f - m] += amp / 2.0
        for m, amp in sin_terms.items():
            c[f + m] += -0.5j * amp
            c[f - m] += 0.5j * amp
        self._c = _trim_columns(c)

    @classmethod
    def _from_fourier(cls, c: np.ndarray) -> CircleFunction:
        obj = cls.__new__(cls)
        c = _trim_columns(np.asarray(c, dtype=np.complex128))
        _check_cap((c.shape[0] - 1) // 2)
        obj._c = c
        return obj

    @classmethod
    def coerce(cls, value) -> CircleFunction:
        if isinstance(value, CircleFunction):
            return value
        if isinstance(value, Real):
            return cls(float(value))
        raise TypeError(f"cannot interpret {value!r} as a circle function")

    # -- data access ---------------------------------------------------

    @property
    def fourier(self) -> np.ndarray:
        """Complex Fourier coefficients, centred on frequency zero (read-only copy)."""
        return self._c.copy()

    @property
    def max_frequency(self) -> int:
        return (self._c.shape[0] - 1) // 2

    @property
    def constant(self) -> float:
        return float(self._c[self.max_frequency].real)

    @property
    def cosines(self) -> list[tuple[int, float]]:
        f = self.max_frequency
        out = []
        for m in range(1, f + 1):
            amp = float(self._c[f + m].real + self._c[f - m].real)
            if amp != 0.0:
                out.append((m, amp))
        return out

    @property
    def sines(self) -> list[tuple[int, float]]:
        f = self.max_frequency
        out = []
        for m in range(1, f + 1):
            amp = float(self._c[f - m].imag - self._c[f + m].imag)
            if amp != 0.0:
                out.append((m, amp))
        return out

    def mean(self) -> float:
        """Integral over the circle with the normalization of integral dtheta = 1."""
        return self.constant

    def is_zero(self, atol: float = 0.0) -> bool:
        return bool(np.all(np.abs(self._c) <= atol))

    def is_constant(self) -> bool:
        return self.max_frequency == 0

    def sup_bound(self) -> float:
        """Upper bound for max |f| (sum of Fourier moduli)."""
        return float(np.abs(self._c).sum())

    def derivative_bound(self) -> float:
        """Upper bound for max |df/dtheta|."""
        f = self.max_frequency
        m = np.abs(np.arange(-f, f + 1))
        return float(TWO_PI * (m * np.abs(self._c)).sum())

    # -- evaluation ----------------------------------------------------

    def __call__(self, theta):
        theta = np.asarray(theta, dtype=float)
        f = self.max_frequency
        m = np.arange(-f, f + 1)
        phase = np.exp(1j * TWO_PI * np.multiply.outer(theta, m))
        return (phase @ self._c).real

    def sign(self) -> int:
        """Certified sign of the function: +1, -1, or 0 if it vanishes somewhere.

        Samples on an equispaced grid and accepts the sign only when the
        smallest sample exceeds the derivative bound times half the spacing;
        otherwise the grid is refined.  Returns 0 when a sign change or a zero
        is seen, or when the function cannot be certified away from zero.
        """
        return _certified_sign(self, self.derivative_bound())

    # -- arithmetic ----------------------------------------------------

    def derivative(self) -> CircleFunction:
        f = self.max_frequency
        m = np.arange(-f, f + 1)
        return CircleFunction._from_fourier(self._c * (1j * TWO_PI * m))

    def __neg__(self) -> CircleFunction:
        return CircleFunction._from_fourier(-self._c)

    def __add__(self, other) -> CircleFunction:
        if isinstance(other, CollarSeries | LaurentSeries):
            return NotImplemented
        other = CircleFunction.coerce(other)
        half = max(self.max_frequency, other.max_frequency)
        return CircleFunction._from_fourier(
            _pad_columns(self._c, half) + _pad_columns(other._c, half)
        )

    __radd__ = __add__

    def __sub__(self, other) -> CircleFunction:
        if isinstance(other, CollarSeries | LaurentSeries):
            return NotImplemented
        return self + (-CircleFunction.coerce(other))

    def __rsub__(self, other) -> CircleFunction:
        return CircleFunction.coerce(other) + (-self)

    def __mul__(self, other) -> CircleFunction:
        if isinstance(other, CircleFunction):
            return CircleFunction._from_fourier(np.convolve(self._c, other._c))
        if isinstance(other, Real):
            return CircleFunction._from_fourier(self._c * float(other))
        return NotImplemented

    __rmul__ = __mul__

    def __truediv__(self, other) -> CircleFunction:
        if isinstance(other, Real):
            return CircleFunction._from_fourier(self._c / float(other))
        return NotImplemented

    def __eq__(self, other) -> bool:
        if isinstance(other, Real):
            other = CircleFunction(float(other))
        if not isinstance(other, CircleFunction):
            return NotImplemented
        return self._c.shape == other._c.shape and bool(np.all(self._c == other._c))

    def __hash__(self) -> int:
        return hash(self._c.tobytes())

    def allclose(self, other, atol: float = 1e-12) -> bool:
        other = CircleFunction.coerce(other)
        half = max(self.max_frequency, other.max_frequency)
        diff = _pad_columns(self._c, half) - _pad_columns(other._c, half)
        return bool(np.all(np.abs(diff) <= atol))

    def to_dict(self) -> dict:
        return {
            "constant": self.constant,
            "cos": [[m, a] for m, a in self.cosines],
            "sin": [[m, b] for m, b in self.sines],
        }

    @classmethod
    def from_dict(cls, data) -> CircleFunction:
        if isinstance(data, Real):
            return cls(float(data))
        unknown = set(data) - {"constant", "cos", "sin"}
        if unknown:
            raise ValueError(f"unknown circle-function fields: {sorted(unknown)}")
        return cls(
            data.get("constant", 0.0),
            [tuple(t) for t in data.get("cos", [])],
            [tuple(t) for t in data.get("sin", [])],
        )

    def __repr__(self) -> str:
        parts = [f"{self.constant:g}"]
        parts += [f"{a:+g}*cos(2pi*{m}t)" for m, a in self.cosines]
        parts += [f"{b:+g}*sin(2pi*{m}t)" for m, b in self.sines]
        return f"CircleFunction({' '.join(parts)})"


def _collect_terms(terms, kind: str) -> dict[int, float]:
    out: dict[int, float] = {}
    for entry in terms:
        m, amp = entry
        if isinstance(m, float) and m.is_integer():
            m = int(m)
        if not isinstance(m, int) or m < 1:
            raise ValueError(f"{kind} frequency must be an integer >= 1, got {m!r}")
        if m in out:
            raise ValueError(f"duplicate {kind} frequency {m}")
        amp = float(amp)
        if amp != 0.0:
            out[m] = amp
    return out


def _certified_sign(fn, lipschitz: float) -> int:
    n = SAMPLES
    while n <= _MAX_SAMPLES:
        vals = fn(np.arange(n) / n)
        lo, hi = float(vals.min()), float(vals.max())
        if lo <= 0.0 <= hi:
            return 0
        if min(abs(lo), abs(hi)) > lipschitz / (2.0 * n):
            return 1 if lo > 0 else -1
        n *= 2
    return 0


def integrate_over_circle(f: CircleFunction) -> float:
    """Exact integral of f over [0, 1)."""
    return CircleFunction.coerce(f).mean()


# ----------------------------------------------------------------------
# Collar series
# ----------------------------------------------------------------------


class CollarSeries:
    """Truncated series ``sum_{j=0}^{N} y^j g_j(theta)`` with circle-function coefficients.

    Terms of degree above ``order`` are unknown and discarded; every operation
    records the order up to which its result is valid.
    """

    __slots__ = ("_data", "_order")

    def __init__(self, coeffs: Sequence, order: int | None = None):
        cfs = [CircleFunction.coerce(c) for c in coeffs]
        if order is None:
            order = len(cfs) - 1
        if order < 0:
            raise ValueError("order must be >= 0")
        cfs = cfs[: order + 1]
        half = max([0] + [c.max_frequency for c in cfs])
        data = np.zeros((order + 1, 2 * half + 1), dtype=np.complex128)
        for j, c in enumerate(cfs):
            data[j] = _pad_columns(c._c, half)
        self._data = _trim_columns(data)
        self._order = order

    @classmethod
    def _from_array(cls, data: np.ndarray, order: int) -> CollarSeries:
        obj = cls.__new__(cls)
        rows = order + 1
        if data.shape[0] < rows:
            data = np.vstack([data, np.zeros((rows - data.shape[0], data.shape[1]), data.dtype)])
        data = _trim_columns(np.asarray(data[:rows], dtype=np.complex128))
        _check_cap((data.shape[1] - 1) // 2)
        obj._data = data
        obj._order = order
        return obj

    @classmethod
    def constant(cls, value, order: int = DEFAULT_ORDER) -> CollarSeries:
        return cls([value], order)

    @classmethod
    def monomial(cls, degree: int, order: int = DEFAULT_ORDER, coefficient=1.0) -> CollarSeries:
        coeffs = [0.0] * degree + [coefficient]
        return cls(coeffs, order)

    @classmethod
    def from_polynomial(cls, poly: RealPolynomial, order: int = DEFAULT_ORDER) -> CollarSeries:
        return cls([float(c) for c in poly.coefficients], order)

    # -- data access ---------------------------------------------------

    @property
    def order(self) -> int:
        return self._order

    @property
    def max_frequency(self) -> int:
        return (self._data.shape[1] - 1) // 2

    @property
    def array(self) -> np.ndarray:
        return self._data.copy()

    def coeff(self, j: int) -> CircleFunction:
        if j < 0:
            return CircleFunction()
        if j > self._order:
            raise IndexError(f"degree {j} is beyond the truncation order {self._order}")
        return CircleFunction._from_fourier(self._data[j])

    @property
    def coeffs(self) -> tuple[CircleFunction, ...]:
        return tuple(self.coeff(j) for j in range(self._order + 1))

    def theta_means(self) -> np.ndarray:
        """Circle means of each coefficient g_0..g_N."""
        return self._data[:, self.max_frequency].real.copy()

    def is_zero(self, atol: float = 0.0) -> bool:
        return bool(np.all(np.abs(self._data) <= atol))

    # -- bounds and evaluation -----------------------------------------

    def sup_bound(self, radius: float) -> float:
        """Bound for max |A(y, theta)| over |y| <= radius."""
        row = np.abs(self._data).sum(axis=1)
        return float(np.sum(row * radius ** np.arange(self._order + 1)))

    def y_derivative_bound(self, radius: float) -> float:
        row = np.abs(self._data).sum(axis=1)
        j = np.arange(self._order + 1)
        powers = np.where(j > 0, radius ** np.maximum(j - 1, 0), 0.0)
        return float(np.sum(j * row * powers))

    def theta_derivative_bound(self, radius: float) -> float:
        f = self.max_frequency
        m = np.abs(np.arange(-f, f + 1))
        row = (np.abs(self._data) * m).sum(axis=1) * TWO_PI
        return float(np.sum(row * radius ** np.arange(self._order + 1)))

    def __call__(self, y, theta):
        y, theta = np.broadcast_arrays(np.asarray(y, float), np.asarray(theta, float))
        f = self.max_frequency
        m = np.arange(-f, f + 1)
        phase = np.exp(1j * TWO_PI * np.multiply.outer(theta, m))
        rows = phase @ self._data.T
        out = np.zeros(y.shape, dtype=np.complex128)
        for j in range(self._order, -1, -1):
            out = out * y + rows[..., j]
        return out.real

    def grid(self, ys, thetas) -> np.ndarray:
        """Values on the tensor grid ``ys x thetas`` (shape ``(len(ys), len(thetas))``)."""
        ys = np.asarray(ys, float)
        thetas = np.asarray(thetas, float)
        f = self.max_frequency
        m = np.arange(-f, f + 1)
        phase = np.exp(1j * TWO_PI * np.multiply.outer(m, thetas))
        ypow = ys[:, None] ** np.arange(self._order + 1)[None, :]
        return (ypow @ self._data @ phase).real

    def at_y(self, y: float) -> CircleFunction:
        """The circle function theta -> A(y, theta) for fixed y."""
        acc = np.zeros(self._data.shape[1], dtype=np.complex128)
        for j in range(self._order, -1, -1):
            acc = acc * y + self._data[j]
        return CircleFunction._from_fourier(acc)

    # -- ring operations -----------------------------------------------

    def _coerce(self, other) -> CollarSeries | None:
        if isinstance(other, CollarSeries):
            return other
        if isinstance(other, (CircleFunction, Real)):
            return CollarSeries([other], self._order)
        return None

    def __add__(self, other) -> CollarSeries:
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        n = min(self._order, other._order)
        half = max(self.max_frequency, other.max_frequency)
        data = _pad_columns(self._data[: n + 1], half) + _pad_columns(other._data[: n + 1], half)
        return CollarSeries._from_array(data, n)

    __radd__ = __add__

    def __neg__(self) -> CollarSeries:
        return CollarSeries._from_array(-self._data, self._order)

    def __sub__(self, other) -> CollarSeries:
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other) -> CollarSeries:
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return other + (-self)

    def __mul__(self, other) -> CollarSeries:
        if isinstance(other, Real):
            return CollarSeries._from_array(self._data * float(other), self._order)
        if isinstance(other, CircleFunction):
            data = kernels.mul_series(self._data, other._c[None, :], self._order)
            return CollarSeries._from_array(data, self._order)
        if isinstance(other, CollarSeries):
            n = min(self._order, other._order)
            return CollarSeries._from_array(kernels.mul_series(self._data, other._data, n), n)
        return NotImplemented

    __rmul__ = __mul__

    def __truediv__(self, other) -> CollarSeries:
        if isinstance(other, Real):
            return CollarSeries._from_array(self._data / float(other), self._order)
        return NotImplemented

    def __pow__(self, alpha) -> CollarSeries:
        return self.power(alpha)

    def power(self, alpha, order: int | None = None) -> CollarSeries:
        """``self ** alpha``.

        Nonnegative integer powers are computed by repeated multiplication and
        work for any leading coefficient.  Other exponents need a nonzero
        constant leading coefficient.
        """
        n = self._order if order is None else min(order, self._order)
        if isinstance(alpha, int) and alpha >= 0:
            result = CollarSeries.constant(1.0, n)
            base = self.truncate(n)
            e = alpha
            while e:
                if e & 1:
                    result = result * base
                e >>= 1
                if e:
                    base = base * base
            return result
        lead = self.coeff(0)
        _require_invertible_constant(lead)
        return CollarSeries._from_array(kernels.pow_series(self._data, alpha, n), n)

    def reciprocal(self) -> CollarSeries:
        return series_reciprocal(self)

    def truncate(self, order: int) -> CollarSeries:
        if order >= self._order:
            return self
        return CollarSeries._from_array(self._data[: order + 1], order)

    def with_order(self, order: int) -> CollarSeries:
        """Truncate, or zero-extend treating the stored polynomial as exact."""
        if order <= self._order:
            return self.truncate(order)
        return CollarSeries._from_array(self._data, order)

    @property
    def degree(self) -> int:
        """Highest degree with a nonzero coefficient (-1 for the zero series)."""
        nz = np.flatnonzero(np.any(self._data != 0, axis=1))
        return int(nz[-1]) if nz.size else -1

    def shift(self, m: int) -> CollarSeries:
        """Multiply by y^m (m >= 0)."""
        if m < 0:
            return self.divide_by_y(-m)
        pad = np.zeros((m, self._data.shape[1]), dtype=np.complex128)
        return CollarSeries._from_array(np.vstack([pad, self._data]), self._order + m)

    def divide_by_y(self, m: int = 1) -> CollarSeries:
        """Exact division by y^m; the first m coefficients must vanish."""
        if m > self._order:
            raise NotDivisible(f"cannot divide an order-{self._order} series by y^{m}")
        if np.any(self._data[:m] != 0):
            raise NotDivisible(f"series is not divisible by y^{m}")
        return CollarSeries._from_array(self._data[m:], self._order - m)

    def derivative_y(self) -> CollarSeries:
        if self._order == 0:
            raise ValueError("an order-0 series carries no information about d/dy")
        j = np.arange(1, self._order + 1)[:, None]
        return CollarSeries._from_array(self._data[1:] * j, self._order - 1)

    def derivative_theta(self) -> CollarSeries:
        f = self.max_frequency
        m = np.arange(-f, f + 1)[None, :]
        return CollarSeries._from_array(self._data * (1j * TWO_PI * m), self._order)

    def compose(self, inner: CollarSeries) -> CollarSeries:
        """Substitute ``y -> inner(y, theta)``; inner must vanish at y = 0."""
        if np.any(inner._data[0] != 0):
            raise ValueError("inner series must have zero constant term")
        n = min(self._order, inner._order)
        top = max(self.degree, 0)
        result = CollarSeries([self.coeff(top)], n)
        for j in range(top - 1, -1, -1):
            result = result * inner + self.coeff(j)
        return result.truncate(n)

    def __eq__(self, other) -> bool:
        if not isinstance(other, CollarSeries):
            return NotImplemented
        return (
            self._order == other._order
            and self._data.shape == other._data.shape
            and bool(np.all(self._data == other._data))
        )

    def __hash__(self) -> int:
        return hash((self._order, self._data.tobytes()))

    def allclose(self, other: CollarSeries, atol: float = 1e-12, order: int | None = None) -> bool:
        n = min(self._order, other._order) if order is None else order
        half = max(self.max_frequency, other.max_frequency)
        a = _pad_columns(self._data[: n + 1], half)
        b = _pad_columns(other._data[: n + 1], half)
        return bool(np.all(np.abs(a - b) <= atol))

    def to_dict(self) -> dict:
        return {"order": self._order, "coeffs": [c.to_dict() for c in self.coeffs]}

    @classmethod
    def from_dict(cls, data) -> CollarSeries:
        coeffs = [CircleFunction.from_dict(c) for c in data["coeffs"]]
        return cls(coeffs, data.get("order"))

    def __repr__(self) -> str:
        return f"CollarSeries(order={self._order}, coeffs={list(self.coeffs)!r})"


def _require_invertible_constant(lead: CircleFunction) -> None:
    if lead.sign() == 0:
        raise NonInvertibleLeadingCoefficient(
            "leading coefficient vanishes somewhere on the circle"
        )
    if not lead.is_constant():
        raise UnrepresentableResult(
            "the reciprocal of a nonconstant trigonometric polynomial is not a "
            "trigonometric polynomial"
        )


# ----------------------------------------------------------------------
# Laurent series
# ----------------------------------------------------------------------


class LaurentSeries:
    """Series ``sum_{d=v}^{N} c_d y^d`` with scalar or circle-function coefficients.

    ``valuation`` is the lowest stored degree v, ``order`` the highest known
    degree N.  Scalar series are stored as float64 arrays, or as object arrays
    of ``Fraction`` in exact mode.
    """

    __slots__ = ("_v", "_order", "_body")

    def __init__(self, coeffs: Sequence, valuation: int = 0, order: int | None = None):
        coeffs = list(coeffs)
        if order is None:
            order = valuation + len(coeffs) - 1
        rows = order - valuation + 1
        if rows < 0:
            raise ValueError("order must be >= valuation - 1")
        coeffs = coeffs[:rows] + [0] * (rows - len(coeffs))
        if any(isinstance(c, CircleFunction) for c in coeffs):
            body = CollarSeries(coeffs, rows - 1)._data if rows else np.zeros((0, 1), complex)
        elif coeffs and all(_is_exact(c) for c in coeffs) and any(isinstance(c, Fraction) for c in coeffs):
            body = np.array([Fraction(c) for c in coeffs], dtype=object)
        else:
            body = np.array([float(c) for c in coeffs], dtype=np.float64)
        self._v = valuation
        self._order = order
        self._body = body

    @classmethod
    def _from_array(cls, valuation: int, order: int, body: np.ndarray) -> LaurentSeries:
        obj = cls.__new__(cls)
        rows = order - valuation + 1
        if body.shape[0] < rows:
            pad_shape = (rows - body.shape[0],) + body.shape[1:]
            filler = np.zeros(pad_shape, dtype=body.dtype)
            if body.dtype == object:
                filler[...] = Fraction(0)
            body = np.concatenate([body, filler])
        body = body[:rows]
        if body.ndim == 2:
            body = _trim_columns(body)
            _check_cap((body.shape[1] - 1) // 2)
        obj._v = valuation
        obj._order = order
        obj._body = body
        return obj

    @classmethod
    def from_collar(cls, s: CollarSeries, shift: int = 0) -> LaurentSeries:
        """The Laurent series ``y^shift * s``."""
        return cls._from_array(shift, s.order + shift, s._data.copy())

    # -- data access ---------------------------------------------------

    @property
    def valuation(self) -> int:
        return self._v

    @property
    def order(self) -> int:
        return self._order

    @property
    def is_scalar(self) -> bool:
        return self._body.ndim == 1

    @property
    def is_exact(self) -> bool:
        return self._body.dtype == object

    def coefficient(self, degree: int):
        if degree > self._order:
            raise IndexError(f"degree {degree} is beyond the truncation order {self._order}")
        if degree < self._v:
            if self.is_scalar:
                return Fraction(0) if self.is_exact else 0.0
            return CircleFunction()
        row = self._body[degree - self._v]
        if self.is_scalar:
            return row if self.is_exact else float(row)
        return CircleFunction._from_fourier(row)

    __getitem__ = coefficient

    @property
    def coeffs(self) -> list:
        return [self.coefficient(d) for d in range(self._v, self._order + 1)]

    def residue(self):
        """Coefficient of y^-1."""
        return self.coefficient(-1)

    def negative_coefficients(self) -> list:
        """Coefficients of y^v .. y^-1."""
        return [self.coefficient(d) for d in range(min(self._v, 0), min(0, self._order + 1))]

    def principal_part(self) -> LaurentSeries:
        v = min(self._v, 0)
        hi = min(-1, self._order)
        return LaurentSeries([self.coefficient(d) for d in range(v, hi + 1)], v, hi)

    def has_zero_principal_part(self, atol: float = 0.0) -> bool:
        for c in self.negative_coefficients():
            if isinstance(c, CircleFunction):
                if not c.is_zero(atol):
                    return False
            elif abs(c) > atol:
                return False
        return True

    def nonnegative_part(self) -> CollarSeries:
        """Degrees 0..N as a collar series (scalars promoted to constants)."""
        if self._order < 0:
            raise ValueError("series has no known nonnegative degrees")
        body = self._circle_body()
        start = -self._v
        if start >= 0:
            data = body[start:]
        else:
            data = np.vstack([np.zeros((-start, body.shape[1]), complex), body])
        return CollarSeries._from_array(data, self._order)

    def as_float(self) -> LaurentSeries:
        if not self.is_exact:
            return self
        return LaurentSeries._from_array(self._v, self._order, self._body.astype(np.float64))

    def _circle_body(self) -> np.ndarray:
        if self.is_scalar:
            return self._body.astype(np.complex128)[:, None]
        return self._body

    # -- arithmetic ----------------------------------------------------

    def _coerce(self, other) -> LaurentSeries | None:
        if isinstance(other, LaurentSeries):
            return other
        if isinstance(other, CollarSeries):
            return LaurentSeries.from_collar(other)
        if isinstance(other, CircleFunction):
            return LaurentSeries([other], 0, max(self._order, 0))
        if isinstance(other, (Real, Fraction)):
            return LaurentSeries([other], 0, max(self._order, 0))
        return None

    def _unify(self, other: LaurentSeries) -> tuple[np.ndarray, np.ndarray]:
        a, b = self._body, other._body
        if a.ndim != b.ndim:
            a, b = self._circle_body(), other._circle_body()
        elif a.ndim == 1 and a.dtype != b.dtype:
            a, b = a.astype(np.float64), b.astype(np.float64)
        if a.ndim == 2:
            half = max((a.shape[1] - 1) // 2, (b.shape[1] - 1) // 2)
            a, b = _pad_columns(a, half), _pad_columns(b, half)
        return a, b

    def __add__(self, other) -> LaurentSeries:
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        a, b = self._unify(other)
        v = min(self._v, other._v)
        n = min(self._order, other._order)
        rows = n - v + 1
        shape = (max(rows, 0),) + a.shape[1:]
        out = np.zeros(shape, dtype=np.result_type(a.dtype, b.dtype))
        if out.dtype == object:
            out[...] = Fraction(0)
        for src, sv in ((a, self._v), (b, other._v)):
            lo = sv - v
            take = max(0, min(src.shape[0], rows - lo))
            out[lo : lo + take] = out[lo : lo + take] + src[:take]
        return LaurentSeries._from_array(v, n, out)

    __radd__ = __add__

    def __neg__(self) -> LaurentSeries:
        return LaurentSeries._from_array(self._v, self._order, -self._body)

    def __sub__(self, other) -> LaurentSeries:
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other) -> LaurentSeries:
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return other + (-self)

    def __mul__(self, other) -> LaurentSeries:
        if isinstance(other, (Real, Fraction)) and not isinstance(other, bool):
            body = self._body * (other if self.is_exact else float(other))
            return LaurentSeries._from_array(self._v, self._order, body)
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        a, b = self._unify(other)
        v = self._v + other._v
        n = min(self._order + other._v, other._order + self._v)
        body = kernels.mul_series(a, b, n - v)
        return LaurentSeries._from_array(v, n, body)

    __rmul__ = __mul__

    def shift(self, m: int) -> LaurentSeries:
        """Multiply by y^m."""
        return LaurentSeries._from_array(self._v + m, self._order + m, self._body.copy())

    def derivative(self) -> LaurentSeries:
        """Formal d/dy."""
        degrees = np.arange(self._v, self._order + 1)
        if self.is_scalar:
            body = self._body * (degrees if not self.is_exact else degrees.astype(object))
        else:
            body = self._body * degrees[:, None]
        return LaurentSeries._from_array(self._v - 1, self._order - 1, body)

    def reciprocal(self) -> LaurentSeries:
        """1 / self; the lowest stored coefficient must be invertible."""
        lead = self.coefficient(self._v)
        if isinstance(lead, CircleFunction):
            _require_invertible_constant(lead)
        elif lead == 0:
            raise NonInvertibleLeadingCoefficient("leading coefficient is zero")
        n = self._order - self._v
        body = kernels.pow_series(self._body, -1, n)
        return LaurentSeries._from_array(-self._v, -self._v + n, body)

    def truncate(self, order: int) -> LaurentSeries:
        if order >= self._order:
            return self
        return LaurentSeries._from_array(self._v, order, self._body[: order - self._v + 1])

    def __call__(self, y, theta=None):
        y = np.asarray(y, dtype=float)
        if self.is_scalar:
            coeffs = self._body.astype(np.float64)
            acc = np.zeros_like(y)
            for c in coeffs[::-1]:
                acc = acc * y + c
            return acc * y ** float(self._v)
        if theta is None:
            raise ValueError("theta is required for circle-valued coefficients")
        poly = CollarSeries._from_array(self._body, self._order - self._v)
        return poly(y, theta) * np.asarray(y, float) ** float(self._v)

    def allclose(self, other: LaurentSeries, atol: float = 1e-12) -> bool:
        diff = self - other
        body = diff._body.astype(np.complex128) if diff.is_exact else diff._body
        return bool(np.all(np.abs(body) <= atol))

    def __eq__(self, other) -> bool:
        if not isinstance(other, LaurentSeries):
            return NotImplemented
        return (
            self._v == other._v
            and self._order == other._order
            and self._body.shape == other._body.shape
            and bool(np.all(self._body == other._body))
        )

    def __hash__(self) -> int:
        return hash((self._v, self._order, self._body.tobytes()))

    def __repr__(self) -> str:
        return f"LaurentSeries(valuation={self._v}, order={self._order}, coeffs={self.coeffs!r})"


# ----------------------------------------------------------------------
# Real polynomials
# ----------------------------------------------------------------------


class RealPolynomial:
    """Polynomial ``sum p_i y^i`` with float or Fraction coefficients."""

    __slots__ = ("_p",)

    def __init__(self, coefficients: Sequence):
        p = list(coefficients) or [0.0]
        while len(p) > 1 and p[-1] == 0:
            p.pop()
        self._p = tuple(p)

    @property
    def coefficients(self) -> tuple:
        return self._p

    @property
    def degree(self) -> int:
        return len(self._p) - 1

    def __getitem__(self, i: int):
        return self._p[i] if 0 <= i < len(self._p) else 0 * self._p[0]

    def __call__(self, y):
        acc = 0
        for c in reversed(self._p):
            acc = acc * y + c
        return acc

    def derivative(self) -> RealPolynomial:
        if len(self._p) == 1:
            return RealPolynomial([0 * self._p[0]])
        return RealPolynomial([i * c for i, c in enumerate(self._p) if i > 0])

    def __add__(self, other) -> RealPolynomial:
        if not isinstance(other, RealPolynomial):
            other = RealPolynomial([other])
        n = max(len(self._p), len(other._p))
        return RealPolynomial([self[i] + other[i] for i in range(n)])

    __radd__ = __add__

    def __neg__(self) -> RealPolynomial:
        return RealPolynomial([-c for c in self._p])

    def __sub__(self, other) -> RealPolynomial:
        if not isinstance(other, RealPolynomial):
            other = RealPolynomial([other])
        return self + (-other)

    def __mul__(self, other) -> RealPolynomial:
        if isinstance(other, RealPolynomial):
            out = [0 * self._p[0]] * (len(self._p) + len(other._p) - 1)
            for i, a in enumerate(self._p):
                if a == 0:
                    continue
                for j, b in enumerate(other._p):
                    out[i + j] = out[i + j] + a * b
            return RealPolynomial(out)
        if isinstance(other, (Real, Fraction)):
            return RealPolynomial([c * other for c in self._p])
        return NotImplemented

    __rmul__ = __mul__

    def __pow__(self, n: int) -> RealPolynomial:
        if not isinstance(n, int) or n < 0:
            raise ValueError("only nonnegative integer powers")
        result = RealPolynomial([1 + 0 * self._p[0]])
        base = self
        while n:
            if n & 1:
                result = result * base
            n >>= 1
            if n:
                base = base * base
        return result

    def compose(self, inner: RealPolynomial) -> RealPolynomial:
        """The polynomial ``self(inner(y))``."""
        result = RealPolynomial([self._p[-1]])
        for c in reversed(self._p[:-1]):
            result = result * inner + c
        return result

    def truncate(self, degree: int) -> RealPolynomial:
        return RealPolynomial(self._p[: degree + 1])

    def as_float(self) -> RealPolynomial:
        return RealPolynomial([float(c) for c in self._p])

    def __eq__(self, other) -> bool:
        if not isinstance(other, RealPolynomial):
            return NotImplemented
        return self._p == other._p

    def __hash__(self) -> int:
        return hash(self._p)

    def __repr__(self) -> str:
        return f"RealPolynomial({list(self._p)!r})"


# ----------------------------------------------------------------------
# Module-level operations
# ----------------------------------------------------------------------


def series_add(a, b):
    return a + b


def series_mul(a, b):
    return a * b


def series_derivative(a):
    """Formal d/dy of a collar or Laurent series."""
    if isinstance(a, CollarSeries):
        return a.derivative_y()
    return a.derivative()


def series_reciprocal(u):
    """Two-sided inverse of ``u`` up to its truncation order.

    The leading coefficient must be nonvanishing on the circle (certified by
    sampling plus a derivative bound) and, for the result to be a finite
    trigonometric polynomial, constant in theta.

    Raises:
        NonInvertibleLeadingCoefficient: the leading coefficient has a zero.
        UnrepresentableResult: the leading coefficient is not constant.
    """
    if isinstance(u, LaurentSeries):
        return u.reciprocal()
    _require_invertible_constant(u.coeff(0))
    return CollarSeries._from_array(kernels.pow_series(u._data, -1, u.order), u.order)


def residue(s: LaurentSeries):
    return s.residue()


def _validate_reparam(P: RealPolynomial) -> None:
    if P[0] != 0:
        raise InvalidPolynomial(f"P(0) must be 0, got {P[0]!r}")
    if not P[1] > 0:
        raise InvalidPolynomial(f"P'(0) must be positive, got {P[1]!r}")


def expand_dP_over_Pk(
    P: RealPolynomial, i: int, order: int = DEFAULT_ORDER, exact: bool = False
) -> LaurentSeries:
    """Laurent series of ``P'(y) / P(y)**i`` through degree ``order``.

    Written as ``P' * (p1 y)**-i * (1 + u)**-i`` with ``u = P/(p1 y) - 1``, so
    the lowest degree is exactly ``-i``.  With ``exact=True`` the coefficients
    are converted to ``Fraction`` and all arithmetic is rational.

    Raises:
        InvalidPolynomial: if ``P(0) != 0`` or ``P'(0) <= 0``.
    """
    if i < 1:
        raise ValueError("pole order i must be >= 1")
    _validate_reparam(P)
    conv = Fraction if exact else float
    p = [conv(c) for c in P.coefficients]
    p1 = p[1]
    span = order + i  # degrees 0..order+i of the regular factor
    ratio = [c / p1 for c in p[1:]][: span + 1]
    dtype = object if exact else np.float64
    w = np.array(ratio, dtype=dtype)
    inv = kernels.pow_series(w, -i, span)
    dp = np.array([k * p[k] for k in range(1, len(p))][: span + 1], dtype=dtype)
    body = kernels.mul_series(dp, inv, span) * (p1 ** (-i))
    return LaurentSeries._from_array(-i, order, body)
