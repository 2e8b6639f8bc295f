"""Reparameterizations of the defining function.

``poly_pick`` builds the polynomial that brings a constant-coefficient
Laurent tail to the normal shape ``1/y^k + a_{-1}/y``.  ``reparam_*`` pull
forms back along ``(y, theta) -> (P(y), theta)``, and ``jet_change``
re-expresses a form in a new defining function ``y2 = y (1 + g y^(k-1))``
from the same (k-1)-jet class.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from numbers import Real
from typing import Mapping, Sequence

import numpy as np

from .bk_forms import (
    BkSurfaceForm,
    CircleLaurentData,
    CollarPiece,
    LaurentNormalForm,
    collar_normal_form,
    collar_sign,
)
from .errors import InvalidPolynomial, UnrepresentableResult, VerificationFailed
from .series_ring import (
    DEFAULT_ORDER,
    CircleFunction,
    CollarSeries,
    LaurentSeries,
    RealPolynomial,
    _validate_reparam,
    expand_dP_over_Pk,
)

_THETA_NODES = 512


@dataclass(frozen=True)
class ResidueVector:
    """Constant pole coefficients ``(a_{-1}, ..., a_{-k})`` with ``a_{-k} > 0``."""

    values: tuple[float, ...]

    def __post_init__(self):
        vals = tuple(float(v) for v in self.values)
        if not vals:
            raise ValueError("residue vector must be nonempty")
        if not vals[-1] > 0:
            raise ValueError(f"leading coefficient a_-{len(vals)} must be positive, got {vals[-1]!r}")
        object.__setattr__(self, "values", vals)

    @property
    def k(self) -> int:
        return len(self.values)

    def __getitem__(self, i: int) -> float:
        """``a[i]`` is ``a_{-i}`` for i = 1..k."""
        return self.values[i - 1]


@dataclass(frozen=True)
class JetChange:
    """The new defining function ``y2 = y (1 + g y^(k-1))``.

    ``g`` is taken as an exact polynomial in y, so y2 agrees with y to order
    k - 1 by construction.
    """

    g: CollarSeries
    k: int

    def y2(self, order: int) -> CollarSeries:
        g = self.g.with_order(order)
        return CollarSeries.monomial(1, order) + g.shift(self.k).truncate(order)

    def jacobian(self, order: int) -> CollarSeries:
        """d y2 / dy."""
        return self.y2(order + 1).derivative_y()


# ----------------------------------------------------------------------
# polynomial normalization of constant pole data
# ----------------------------------------------------------------------


def residue_expansion(a: ResidueVector, P: RealPolynomial, order: int = -1) -> LaurentSeries:
    """Laurent series of ``sum_i a_{-i} P'/P^i`` through degree ``order``."""
    total = None
    for i in range(1, a.k + 1):
        term = expand_dP_over_Pk(P, i, order) * a[i]
        total = term if total is None else total + term
    return total


def poly_pick(a: ResidueVector, order: int = DEFAULT_ORDER) -> RealPolynomial:
    """Polynomial P with ``P(0) = 0``, ``P'(0) > 0`` and
    ``sum_i a_{-i} P'/P^i = 1/y^k + a_{-1}/y + (regular)``.

    Starts from ``P = c y`` with ``c = a_{-k}^(1/(k-1))`` and, for
    ``j = 1..k-2``, replaces P by ``P + t P^(j+1)`` with
    ``t = -b_{-k+j} p1^(k-j-1) / (a_{-k} (j + 1 - k))``, which clears the
    ``y^(-k+j)`` coefficient without touching lower ones.  Only p_1..p_{k-1}
    enter the coefficients being cleared (the residue is a_{-1} for every P),
    so P is kept to degree k - 1.  The result is verified by
    series expansion to ``order`` before it is returned.

    Raises:
        VerificationFailed: the expansion does not have the promised shape.
    """
    k = a.k
    if k == 1:
        P = RealPolynomial([0.0, 1.0])
    else:
        ak = a[k]
        P = RealPolynomial([0.0, ak ** (1.0 / (k - 1))])
        for j in range(1, k - 1):
            b = residue_expansion(a, P).coefficient(-k + j)
            p1 = P[1]
            t = -b * p1 ** (k - j - 1) / (ak * (j + 1 - k))
            P = (P + (P ** (j + 1)) * t).truncate(k - 1)
    _verify_pick(a, P, order)
    return P


def _verify_pick(a: ResidueVector, P: RealPolynomial, order: int) -> None:
    k = a.k
    expansion = residue_expansion(a, P, max(order, -1))
    scale = 1.0 + sum(abs(v) for v in a.values)
    tol = 1e-9 * scale
    target = {-k: 1.0, -1: a[1]} if k > 1 else {-1: a[1]}
    for d in range(-k, 0):
        want = target.get(d, 0.0)
        got = expansion.coefficient(d)
        if abs(got - want) > tol:
            raise VerificationFailed(
                f"poly_pick: coefficient of y^{d} is {got!r}, expected {want!r}"
            )


# ----------------------------------------------------------------------
# Jet equivalence
# ----------------------------------------------------------------------


def jet_equivalence_defect(k: int, change: JetChange, order: int = DEFAULT_ORDER) -> LaurentSeries:
    """dy-component of ``d(y2)/y2^k - dy/y^k`` as a Laurent series in y.

    Equals ``y^-k (J w^-k - 1)`` with ``w = 1 + g y^(k-1)`` and J = d y2/dy;
    the dtheta component ``y^k dg/dtheta / w^k`` is smooth and not returned.
    Writing ``J = w + y dw/dy`` gives ``w^(1-k) - 1 + y (dw/dy) w^-k``, where
    every cancellation below degree k happens exactly in floating point, so
    the principal part comes out as exact zeros.
    """
    n = order + k
    g = change.g.with_order(n)
    w = CollarSeries.constant(1.0, n) + g.shift(k - 1).truncate(n)
    S = w.power(1 - k) - 1.0 + w.derivative_y().shift(1) * w.power(-k)
    return LaurentSeries.from_collar(S, -k)


def jet_defect_dtheta(k: int, change: JetChange, order: int = DEFAULT_ORDER) -> CollarSeries:
    """dtheta-component of ``d(y2)/y2^k`` (always smooth)."""
    g = change.g.with_order(order)
    w = CollarSeries.constant(1.0, order) + g.shift(k - 1).truncate(order)
    return g.derivative_theta() * w.power(-k)


def _invert(y2: CollarSeries, J: CollarSeries, order: int) -> CollarSeries:
    """Series Y(s, theta) with ``y2(Y(s, theta), theta) = s`` (Newton, doubling precision)."""
    lead = y2.coeff(1)
    if not lead.is_constant() or lead.constant <= 0:
        raise UnrepresentableResult("dy2/dy at Z must be a positive constant")
    s = CollarSeries.monomial(1, order)
    Y = s / lead.constant
    prec = 1
    while prec < order:
        prec = min(2 * prec, order)
        Yp = Y.with_order(prec)
        err = y2.with_order(prec).compose(Yp) - s.truncate(prec)
        slope = J.with_order(prec).compose(Yp)
        Y = Yp - err * slope.reciprocal()
    return Y


def _antiderivative(p: int, y):
    if p == -1:
        return np.log(np.abs(y))
    return y ** (p + 1) / (p + 1)


def _collar_band_integral(piece: CollarPiece, lower, upper) -> float:
    """Integral of the collar density over ``[-R, lower(t)] u [upper(t), R]``.

    ``lower``/``upper`` are arrays of endpoint values on the equispaced theta
    nodes; the theta integral uses the trapezoid rule, which is spectrally
    accurate for smooth periodic integrands.
    """
    k = piece.k
    n = lower.shape[0]
    thetas = np.arange(n) / n
    R = piece.R
    acc = np.zeros(n)
    for j in range(piece.A.order + 1):
        coeff = piece.A.coeff(j)
        if coeff.is_zero():
            continue
        p = j - k
        F = lambda y: _antiderivative(p, y)  # noqa: E731
        acc += coeff(thetas) * (F(R) - F(upper) + F(lower) - F(-R))
    return piece.orientation * float(acc.mean())


def _solve_level(y2: CollarSeries, J: CollarSeries, level: float, thetas, start: float):
    y = np.full(thetas.shape, start, dtype=float)
    for _ in range(100):
        step = (y2(y, thetas) - level) / J(y, thetas)
        y = y - step
        if np.max(np.abs(step)) < 1e-15 * max(1.0, abs(level)):
            break
    return y


def _monotone_radius(J: CollarSeries, R: float) -> float:
    """Largest ``R / 2^m`` on whose collar dy2/dy is certified positive."""
    r = R
    for _ in range(40):
        if collar_sign(J, r)[0] > 0:
            return r
        r *= 0.5
    raise ValueError("jet change is not increasing near Z")


def _tail_radius(A: CollarSeries, k: int, rel: float = 1e-15) -> float:
    """Radius on which the last stored coefficients of A contribute below ``rel``.

    The truncated tail of a convergent series is dominated by its first
    omitted terms, which are estimated by the last few stored ones.
    """
    norms = [A.coeff(j).sup_bound() for j in range(A.order + 1)]
    scale = max(1.0, max(norms))
    r = math.inf
    for j in range(max(k, A.order - 3), A.order + 1):
        if norms[j] > 0:
            r = min(r, (rel * scale / norms[j]) ** (1.0 / (j - k + 1)))
    return r


def jet_change(
    f: BkSurfaceForm,
    change: JetChange | Mapping[str, JetChange],
    order: int | None = None,
    radius: float | Mapping[str, float] | None = None,
) -> BkSurfaceForm:
    """Re-express ``f`` in the defining function ``y2 = y (1 + g y^(k-1))``.

    The new density is ``A2(s) = [A (1 + g y^(k-1))^k / J](Y(s))`` with Y the
    inverse of y2, truncated at ``order``; since ``Y (1 + g Y^(k-1)) = s`` and
    ``J(Y) Y' = 1`` this equals ``A(Y) (s / Y)^k Y'``.  The new collar ``|y2| <= R2`` lies
    inside the old one, and the integral of the form over the band between
    them is added to the bulk integral.
    """
    changes = change if isinstance(change, Mapping) else None
    collars = []
    bulk = f.bulk_integral
    thetas = np.arange(_THETA_NODES) / _THETA_NODES
    for piece in f.collars:
        ch = changes.get(piece.circle_id) if changes is not None else change
        if ch is None:
            collars.append(piece)
            continue
        if ch.k != piece.k:
            raise ValueError(f"jet change for k = {ch.k} applied to a form with k = {piece.k}")
        k = piece.k
        n = order if order is not None else max(20, piece.A.order)
        y2 = ch.y2(n + 1)
        J = ch.jacobian(n + 1)
        r = _monotone_radius(J, piece.R)
        Y = _invert(y2, J, n + 1)
        # (1 + g y^(k-1)) o Y = s / Y and (1 / J) o Y = Y'
        A2 = (
            piece.A.with_order(n).compose(Y.truncate(n))
            * Y.divide_by_y(1).power(-k)
            * Y.derivative_y()
        )

        if radius is None:
            level = min(
                y2(np.full(thetas.shape, r), thetas).min(),
                -y2(np.full(thetas.shape, -r), thetas).max(),
            )
            R2 = min(0.5 * level, _tail_radius(A2, k))
        elif isinstance(radius, Real):
            R2 = float(radius)
        else:
            R2 = float(radius[piece.circle_id])
        upper = _solve_level(y2, J, R2, thetas, R2)
        lower = _solve_level(y2, J, -R2, thetas, -R2)
        if np.any(upper > piece.R) or np.any(lower < -piece.R):
            raise ValueError("new collar must lie inside the old one")
        bulk += _collar_band_integral(piece, lower, upper)
        collars.append(CollarPiece(piece.circle_id, R2, k, A2, piece.orientation))
    return f.replace_collars(collars, bulk)


# ----------------------------------------------------------------------
# Pullback along (y, theta) -> (P(y), theta)
# ----------------------------------------------------------------------


def reparam_circle(data: CircleLaurentData, P: RealPolynomial, order: int = DEFAULT_ORDER) -> CircleLaurentData:
    k = len(data.alphas)
    expansions = [expand_dP_over_Pk(P, j, order) for j in range(1, k + 1)]
    alphas = []
    for i in range(1, k + 1):
        acc = CircleFunction()
        for j in range(i, k + 1):
            acc = acc + data.alpha(j) * expansions[j - 1].coefficient(-i)
        alphas.append(acc)
    Pc = CollarSeries.from_polynomial(P, order + 1)
    beta = data.beta.with_order(order).compose(Pc.truncate(order)) * Pc.derivative_y()
    for j in range(1, k + 1):
        beta = beta + expansions[j - 1].nonnegative_part() * data.alpha(j)
    return CircleLaurentData(data.circle_id, tuple(alphas), beta.truncate(order), data.orientation)


def reparam_decomposition(
    lnf: LaurentNormalForm,
    P: RealPolynomial | Mapping[str, RealPolynomial],
    order: int = DEFAULT_ORDER,
) -> LaurentNormalForm:
    """Normal form of the pullback along ``(y, theta) -> (P(y), theta)``.

    ``alpha'_{-i} = sum_j [y^-i](P'/P^j) alpha_{-j}``; the nonnegative parts of
    each ``P'/P^j`` join the new beta together with ``beta(P(y)) P'(y)``.
    Since ``P'/P`` has residue 1 and ``P'/P^j`` (j >= 2) none,
    ``alpha'_{-1} = alpha_{-1}``.

    Raises:
        InvalidPolynomial: unless ``P(0) = 0`` and ``P'(0) > 0``.
    """
    circles = []
    for data in lnf.circles:
        poly = P[data.circle_id] if isinstance(P, Mapping) else P
        _validate_reparam(poly)
        circles.append(reparam_circle(data, poly, order))
    return LaurentNormalForm(lnf.k, tuple(circles))


def _default_reparam_radius(P: RealPolynomial, R: float) -> float:
    coeffs = [float(c) for c in P.coefficients]
    # keep well inside the disc where y/P(y) has a convergent series
    quotient = coeffs[1:]
    rho = math.inf
    if len(quotient) > 1:
        roots = np.roots(quotient[::-1])
        if roots.size:
            rho = float(np.min(np.abs(roots)))
    dP = P.as_float().derivative()
    crit = [abs(r.real) for r in np.roots([float(c) for c in dP.coefficients][::-1] or [0.0])
            if abs(r.imag) < 1e-12] if dP.degree >= 1 else []
    r = min(rho / 3.0, R, *(c * 0.9 for c in crit)) if crit else min(rho / 3.0, R)
    while P(r) > R or P(-r) < -R:
        r *= 0.9
    return r


def reparam_form(
    f: BkSurfaceForm,
    P: RealPolynomial | Mapping[str, RealPolynomial],
    order: int | None = None,
    radius: float | Mapping[str, float] | None = None,
) -> BkSurfaceForm:
    """Pull ``f`` back along ``(y, theta) -> (P(y), theta)`` near each circle.

    The new collar ``|y| <= r`` maps into the old one; the integral of ``f``
    over the uncovered band ``[P(r), R] u [-R, P(-r)]`` is moved into the bulk
    integral so that the diffeomorphism is accounted for globally.  ``order``
    defaults to 32 or the degree of ``beta(P) P'``, whichever is larger.
    """
    collars = []
    bulk = f.bulk_integral
    for piece in f.collars:
        poly = P[piece.circle_id] if isinstance(P, Mapping) else P
        _validate_reparam(poly)
        data = collar_normal_form(piece)
        # beta(P) P' is a polynomial; keep all of it by default
        n = order if order is not None else max(2 * DEFAULT_ORDER, (data.beta.degree + 1) * poly.degree)
        new = reparam_circle(data, poly, n)
        if radius is None:
            r = _default_reparam_radius(poly, piece.R)
        elif isinstance(radius, Real):
            r = float(radius)
        else:
            r = float(radius[piece.circle_id])
        hi, lo = float(poly(r)), float(poly(-r))
        if not (0 < hi <= piece.R and -piece.R <= lo < 0):
            raise InvalidPolynomial(f"P does not map [-{r:g}, {r:g}] into the collar")
        n = _THETA_NODES
        bulk += _collar_band_integral(piece, np.full(n, lo), np.full(n, hi))
        collars.append(CollarPiece(piece.circle_id, r, piece.k, new.reconstruct(), piece.orientation))
    return f.replace_collars(collars, bulk)


def as_residue_vector(values: Sequence[float]) -> ResidueVector:
    return ResidueVector(tuple(values))
