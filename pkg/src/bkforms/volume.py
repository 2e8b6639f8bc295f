"""Cutoff integrals, volume polynomials and Liouville volumes.

Every integral here is a finite sum of monomial integrals in y against circle
means, so it is evaluated in exact rational arithmetic (each float input is
converted to the ``Fraction`` it represents).  Float results are rounded only
at the end; the asymptotic gaps at small epsilon therefore measure the form,
not cancellation error.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

from .bk_forms import BkSurfaceForm, laurent_normal_form
from .errors import EpsilonOutOfRange

DEFAULT_EPS_GRID = (1e-1, 1e-2, 1e-3, 1e-4)


def _q(x) -> Fraction:
    return x if isinstance(x, Fraction) else Fraction(x)


def _even_power_integral(p: int, lo: Fraction, hi: Fraction) -> Fraction:
    """``int_{lo <= |y| <= hi} y^p dy`` for even p (the odd case vanishes)."""
    return 2 * (hi ** (p + 1) - lo ** (p + 1)) / (p + 1)


@dataclass(frozen=True)
class VolumePolynomial:
    """``P(t) = sum_j q_j t^j`` with exact rational coefficients.

    Only the constant term and odd powers can be nonzero: the pole of order i
    contributes to t^(i-1) for even i only.
    """

    exact_coefficients: tuple[Fraction, ...]
    k: int
    radii: dict = field(default_factory=dict)

    def __post_init__(self):
        coeffs = tuple(_q(c) for c in self.exact_coefficients)
        for j, c in enumerate(coeffs):
            if j >= 2 and j % 2 == 0 and c != 0:
                raise ValueError(f"volume polynomial cannot have a t^{j} term")
        object.__setattr__(self, "exact_coefficients", coeffs)

    @property
    def coefficients(self) -> tuple[float, ...]:
        return tuple(float(c) for c in self.exact_coefficients)

    @property
    def constant_term(self) -> float:
        return float(self.exact_coefficients[0])

    def __call__(self, t):
        exact = isinstance(t, (Fraction, int))
        t = _q(t)
        acc = Fraction(0)
        for c in reversed(self.exact_coefficients):
            acc = acc * t + c
        return acc if exact else float(acc)

    def is_zero(self, atol: float = 0.0) -> bool:
        return all(abs(c) <= atol for c in self.exact_coefficients)

    def format(self, var: str = "t") -> str:
        return format_polynomial(self.coefficients, var)


def format_polynomial(coefficients, var: str = "t") -> str:
    """Human-readable ``c0 + c1 var + ...`` (zero terms omitted)."""
    terms = []
    for j, c in enumerate(coefficients):
        if c == 0:
            continue
        mag = _fmt(abs(c))
        if j == 0:
            body = mag
        else:
            coef = "" if abs(c) == 1 else mag
            body = f"{coef}{var}" + (f"^{j}" if j > 1 else "")
        if not terms:
            terms.append(("-" if c < 0 else "") + body)
        else:
            terms.append(("- " if c < 0 else "+ ") + body)
    return " ".join(terms) if terms else "0"


def _fmt(x: float) -> str:
    s = f"{x:.17g}"
    short = repr(x)
    return short if float(short) == x and len(short) < len(s) else s


def _check_eps(f: BkSurfaceForm, eps) -> None:
    if not eps > 0:
        raise EpsilonOutOfRange(f"epsilon must be positive, got {eps!r}")
    for c in f.collars:
        if not eps < c.R:
            raise EpsilonOutOfRange(
                f"epsilon {eps!r} is not below the half-width {c.R!r} of collar {c.circle_id!r}"
            )


def vol_cutoff(f: BkSurfaceForm, eps, exact: bool = False):
    """Integral of the form over M minus the strips ``|y| < eps`` around Z.

    On each collar the y^-1 term integrates to ``log(R/eps)`` on both sides
    with opposite signs and cancels; odd powers cancel likewise.

    Raises:
        EpsilonOutOfRange: unless ``0 < eps < R`` for every collar.
    """
    _check_eps(f, eps)
    e = _q(eps)
    total = _q(f.bulk_integral)
    for c in f.collars:
        R = _q(c.R)
        acc = Fraction(0)
        for j, m in enumerate(c.A.theta_means()):
            p = j - c.k
            if m == 0 or p % 2:
                continue
            acc += _q(float(m)) * _even_power_integral(p, e, R)
        total += c.orientation * acc
    return total if exact else float(total)


def volume_polynomial(f: BkSurfaceForm) -> VolumePolynomial:
    """Volume polynomial assembled from the Laurent normal form.

    With ``a_i`` the circle integral of ``alpha_{-i}`` (times orientation), the
    even pole orders give ``q_{i-1} = 2 a_i / (i - 1)`` and contribute
    ``-2 R^(1-i) a_i / (i - 1)`` to the constant term, which also collects the
    bulk integral and the integral of beta over each collar.
    """
    k = f.k
    q = [Fraction(0)] * k
    q[0] = _q(f.bulk_integral)
    radii = {}
    for data, piece in zip(laurent_normal_form(f).circles, f.collars):
        R = _q(piece.R)
        radii[piece.circle_id] = piece.R
        sgn = piece.orientation
        for i in range(2, k + 1, 2):
            a = sgn * _q(data.alpha(i).mean())
            q[i - 1] += 2 * a / (i - 1)
            q[0] += -2 * R ** (1 - i) * a / (i - 1)
        for j, m in enumerate(data.beta.theta_means()):
            if m == 0 or j % 2:
                continue
            q[0] += sgn * _q(float(m)) * 2 * R ** (j + 1) / (j + 1)
    return VolumePolynomial(tuple(q), k, radii)


def liouville_volume(f: BkSurfaceForm) -> float:
    """Constant term of the volume polynomial."""
    return volume_polynomial(f).constant_term


def smooth_part_integral(f: BkSurfaceForm) -> float:
    """Integral of the smooth part of a top-degree form.

    Pairing against the class of the constant function 1 reduces this to the
    Liouville volume.
    """
    return liouville_volume(f)


def asymptotic_gap(f: BkSurfaceForm, eps_grid=DEFAULT_EPS_GRID) -> list[tuple[float, float]]:
    """``|P(1/eps) - vol_cutoff(eps)|`` on a grid, computed exactly and then rounded."""
    P = volume_polynomial(f)
    out = []
    for eps in eps_grid:
        gap = P(1 / _q(eps)) - vol_cutoff(f, eps, exact=True)
        out.append((float(eps), float(abs(gap))))
    return out
