"""Top-degree b^k-forms on model surfaces.

A form is described near each circle of Z by its collar density: on
``Z_r x [-R, R]`` it reads ``(A(y, theta) / y^k) dy ^ dtheta``.  Away from the
collars only the total integral (``bulk_integral``) is kept.  The Laurent
normal form ``sum_i dy/y^i ^ alpha_{-i} dtheta + beta dy ^ dtheta`` is always
computed from ``A``, never stored.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import DegenerateOnZ, InsufficientOrder
from .series_ring import CircleFunction, CollarSeries

_COLLAR_GRID = (129, 256)
_COLLAR_GRID_MAX = (1025, 2048)


@dataclass(frozen=True)
class CollarPiece:
    """Collar datum ``omega = (A / y^k) dy ^ dtheta`` on ``Z_r x [-R, R]``.

    ``orientation`` is +1 when ``dy ^ dtheta`` agrees with the surface
    orientation and -1 otherwise.
    """

    circle_id: str
    R: float
    k: int
    A: CollarSeries
    orientation: int = 1

    def __post_init__(self):
        if not self.R > 0:
            raise ValueError(f"collar {self.circle_id!r}: half-width R must be positive")
        if self.k < 1:
            raise ValueError(f"collar {self.circle_id!r}: pole order k must be >= 1")
        if self.orientation not in (1, -1):
            raise ValueError(f"collar {self.circle_id!r}: orientation must be +1 or -1")

    def check_order(self) -> None:
        if self.A.order < self.k:
            raise InsufficientOrder(
                f"collar {self.circle_id!r}: density known to order {self.A.order} < k = {self.k}"
            )


@dataclass(frozen=True)
class BkSurfaceForm:
    k: int
    collars: tuple[CollarPiece, ...] = ()
    bulk_integral: float = 0.0
    descriptor: str = ""

    def __post_init__(self):
        object.__setattr__(self, "collars", tuple(self.collars))
        ids = [c.circle_id for c in self.collars]
        if len(set(ids)) != len(ids):
            raise ValueError("circle ids must be unique")
        for c in self.collars:
            if c.k != self.k:
                raise ValueError(
                    f"collar {c.circle_id!r} has pole order {c.k}, form has k = {self.k}"
                )

    def collar(self, circle_id: str) -> CollarPiece:
        for c in self.collars:
            if c.circle_id == circle_id:
                return c
        raise KeyError(circle_id)

    @property
    def circle_ids(self) -> tuple[str, ...]:
        return tuple(c.circle_id for c in self.collars)

    def replace_collars(self, collars, bulk_integral: float | None = None) -> BkSurfaceForm:
        return BkSurfaceForm(
            self.k,
            tuple(collars),
            self.bulk_integral if bulk_integral is None else bulk_integral,
            self.descriptor,
        )


@dataclass(frozen=True)
class BkCollarOneForm:
    """``mu = h dy / y^k + g dtheta`` supported in the collar of one circle."""

    circle_id: str
    k: int
    h: CollarSeries
    g: CollarSeries
    R: float = 1.0
    compact_support: bool = True

    def __post_init__(self):
        if self.h.order < self.k:
            raise InsufficientOrder(f"h must be known to order >= k = {self.k}")
        if self.compact_support:
            for name, s in (("h", self.h), ("g", self.g)):
                scale = max(1.0, s.sup_bound(self.R))
                for edge in (self.R, -self.R):
                    if not s.at_y(edge).is_zero(1e-9 * scale):
                        raise ValueError(f"{name} does not vanish at y = {edge:g}")


@dataclass(frozen=True)
class CircleLaurentData:
    """Normal-form data on one circle.

    ``alphas[i - 1]`` is the density of ``alpha_{-i}`` (i = 1..k) and ``beta``
    the density of the smooth remainder.
    """

    circle_id: str
    alphas: tuple[CircleFunction, ...]
    beta: CollarSeries
    orientation: int = 1

    def alpha(self, i: int) -> CircleFunction:
        return self.alphas[i - 1]

    def reconstruct(self) -> CollarSeries:
        k = len(self.alphas)
        coeffs = [self.alphas[k - 1 - j] for j in range(k)]
        head = CollarSeries(coeffs, self.beta.order + k)
        return head + self.beta.shift(k)


@dataclass(frozen=True)
class LaurentNormalForm:
    k: int
    circles: tuple[CircleLaurentData, ...] = field(default_factory=tuple)

    def circle(self, circle_id: str) -> CircleLaurentData:
        for c in self.circles:
            if c.circle_id == circle_id:
                return c
        raise KeyError(circle_id)


def collar_normal_form(piece: CollarPiece) -> CircleLaurentData:
    piece.check_order()
    k = piece.k
    A = piece.A
    alphas = tuple(A.coeff(k - i) for i in range(1, k + 1))
    head = CollarSeries([A.coeff(j) for j in range(k)], A.order)
    beta = (A - head).divide_by_y(k)
    return CircleLaurentData(piece.circle_id, alphas, beta, piece.orientation)


def laurent_normal_form(f: BkSurfaceForm) -> LaurentNormalForm:
    """Split every collar density into its pole coefficients and smooth remainder.

    ``alpha_{-i}`` is the coefficient of ``y^(k-i)`` in A and
    ``beta = (A - sum_{j<k} y^j A_j) / y^k``.

    Raises:
        InsufficientOrder: if some A is known to order < k.
    """
    return LaurentNormalForm(f.k, tuple(collar_normal_form(c) for c in f.collars))


def iota_L(f: BkSurfaceForm) -> dict[str, CircleFunction]:
    """Leading pole coefficient ``alpha_{-k}`` on each circle (density of a 1-form on Z)."""
    out = {}
    for c in f.collars:
        c.check_order()
        out[c.circle_id] = c.A.coeff(0)
    return out


def d_collar(mu: BkCollarOneForm) -> CollarPiece:
    """Exterior derivative of a collar one-form.

    For ``mu = h dy/y^k + g dtheta``,
    ``d mu = (y^k dg/dy - dh/dtheta) / y^k  dy ^ dtheta``.
    """
    k = mu.k
    # h and g are exact polynomials; keep every term of both pieces
    n = max(mu.h.order, mu.g.order - 1 + k, k)
    from_g = mu.g.with_order(n - k + 1).derivative_y().shift(k)
    A = from_g - mu.h.with_order(n).derivative_theta()
    return CollarPiece(mu.circle_id, mu.R, k, A)


def is_positively_oriented(f: BkSurfaceForm) -> bool:
    """True iff ``orientation * A(0, theta) > 0`` on every circle.

    Raises:
        DegenerateOnZ: if A(0, theta) has a zero on some circle.
    """
    result = True
    for c in f.collars:
        s = c.A.coeff(0).sign()
        if s == 0:
            raise DegenerateOnZ(f"density vanishes on circle {c.circle_id!r}")
        if s * c.orientation < 0:
            result = False
    return result


@dataclass(frozen=True)
class SymplecticCheck:
    ok: bool
    witness: tuple[str, float, float] | None = None

    def __bool__(self) -> bool:
        return self.ok


def collar_sign(A: CollarSeries, R: float) -> tuple[int, tuple[float, float] | None]:
    """Certified sign of A on ``[-R, R] x S^1``.

    Returns ``(sign, None)`` when A is certified nonvanishing, otherwise
    ``(0, (y, theta))`` with the sample of smallest |A| as witness.
    """
    ly = A.y_derivative_bound(R)
    lt = A.theta_derivative_bound(R)
    ny, nt = _COLLAR_GRID
    while True:
        ys = np.linspace(-R, R, ny)
        ts = np.arange(nt) / nt
        vals = A.grid(ys, ts)
        i, j = np.unravel_index(np.argmin(np.abs(vals)), vals.shape)
        witness = (float(ys[i]), float(ts[j]))
        lo, hi = vals.min(), vals.max()
        if lo <= 0.0 <= hi:
            return 0, witness
        margin = ly * (R / (ny - 1)) + lt / (2.0 * nt)
        if np.abs(vals[i, j]) > margin:
            return (1 if lo > 0 else -1), None
        if ny >= _COLLAR_GRID_MAX[0]:
            return 0, witness
        ny, nt = 2 * ny - 1, 2 * nt


def is_bk_symplectic(f: BkSurfaceForm) -> SymplecticCheck:
    """Check that every collar density is nonvanishing on its whole collar.

    In top degree on a surface a b^k 2-form has maximal rank exactly where its
    density is nonzero, and closedness is automatic.
    """
    for c in f.collars:
        s, w = collar_sign(c.A, c.R)
        if s == 0:
            return SymplecticCheck(False, (c.circle_id, *w))
    return SymplecticCheck(True)
