"""Random and fixture b^k-forms for tests, benchmarks and the CLI."""

from __future__ import annotations

import numpy as np

from .bk_forms import BkCollarOneForm, BkSurfaceForm, CollarPiece
from .normalize import JetChange, ResidueVector
from .series_ring import CircleFunction, CollarSeries, RealPolynomial


def _rng(seed_or_rng) -> np.random.Generator:
    if isinstance(seed_or_rng, np.random.Generator):
        return seed_or_rng
    return np.random.default_rng(seed_or_rng)


def random_circle_function(
    rng, max_frequency: int = 8, scale: float = 1.0, n_modes: int = 3, zero_mean: bool = False
) -> CircleFunction:
    rng = _rng(rng)
    constant = 0.0 if zero_mean else scale * rng.normal()
    if max_frequency <= 0:
        return CircleFunction(constant)
    n = int(rng.integers(0, n_modes + 1))
    freqs = rng.choice(np.arange(1, max_frequency + 1), size=min(n, max_frequency), replace=False)
    cos = [(int(m), scale * rng.normal()) for m in freqs if rng.random() < 0.7]
    sin = [(int(m), scale * rng.normal()) for m in freqs if rng.random() < 0.7]
    return CircleFunction(constant, cos, sin)


def random_collar_series(
    rng, order: int, max_frequency: int = 8, scale: float = 1.0, zero_mean: bool = False
) -> CollarSeries:
    rng = _rng(rng)
    coeffs = [random_circle_function(rng, max_frequency, scale, zero_mean=zero_mean) for _ in range(order + 1)]
    return CollarSeries(coeffs, order)


def _positive_density(rng, order: int, max_frequency: int, R: float) -> CollarSeries:
    """Density bounded below by half its constant part on ``[-R, R] x S^1``."""
    base = float(rng.uniform(0.5, 2.0))
    pert = random_collar_series(rng, order, max_frequency)
    bound = pert.sup_bound(R)
    if bound > 0:
        pert = pert * (0.5 * base * float(rng.uniform(0.1, 1.0)) / bound)
    return pert + base


def random_form(
    rng=None,
    k: int | None = None,
    k_max: int = 5,
    n_circles: int | None = None,
    max_frequency: int = 8,
    order: int | None = None,
    symplectic: bool = False,
    positive: bool = True,
    R: float | None = None,
) -> BkSurfaceForm:
    """Random form with polynomial collar densities.

    With ``symplectic`` the density keeps a fixed sign on each collar; with
    ``positive`` as well that sign agrees with the collar orientation.
    """
    rng = _rng(rng)
    k = int(rng.integers(1, k_max + 1)) if k is None else k
    n_circles = int(rng.integers(1, 3)) if n_circles is None else n_circles
    collars = []
    for r in range(n_circles):
        n = k + int(rng.integers(0, 6)) if order is None else order
        radius = float(rng.uniform(0.5, 2.0)) if R is None else R
        orientation = int(rng.choice([1, -1]))
        if symplectic:
            A = _positive_density(rng, n, max_frequency, radius)
            sign = orientation if positive else int(rng.choice([1, -1]))
            A = A * sign
        else:
            A = random_collar_series(rng, n, max_frequency)
        collars.append(CollarPiece(f"Z{r + 1}", radius, k, A, orientation))
    bulk = float(rng.normal() * 3.0)
    return BkSurfaceForm(k, tuple(collars), bulk, "random")


def invariant_partner(f: BkSurfaceForm, rng=None, strength: float = 0.3) -> BkSurfaceForm:
    """A different form with the same Liouville volume and residue integrals.

    Adds zero-mean theta modes to every collar density (kept small enough not
    to change its sign) and trades a constant in beta against the bulk
    integral.
    """
    rng = _rng(rng)
    collars = []
    bulk = f.bulk_integral
    for c in f.collars:
        n = c.A.order
        pert = random_collar_series(rng, n, max(1, c.A.max_frequency), zero_mean=True)
        floor = _min_abs(c.A, c.R)
        bound = pert.sup_bound(c.R)
        if bound > 0:
            pert = pert * (strength * floor / bound)
        A = c.A + pert
        # move mass between the collar and the bulk: + delta * y^k in A
        if n >= c.k and floor > 0:
            delta = strength * floor * float(rng.uniform(-1, 1)) / (2 * max(1.0, c.R ** c.k))
            A = A + CollarSeries.monomial(c.k, n, delta)
            bulk -= c.orientation * delta * 2 * c.R
        collars.append(CollarPiece(c.circle_id, c.R, c.k, A, c.orientation))
    return f.replace_collars(collars, bulk)


def _min_abs(A: CollarSeries, R: float) -> float:
    ys = np.linspace(-R, R, 65)
    ts = np.arange(128) / 128
    return float(np.min(np.abs(A.grid(ys, ts))))


def constant_form(k: int, A: float = 1.0, R: float = 1.0, bulk: float = 0.0, order: int | None = None) -> BkSurfaceForm:
    n = k if order is None else order
    piece = CollarPiece("Z1", R, k, CollarSeries.constant(A, n))
    return BkSurfaceForm(k, (piece,), bulk, f"k={k}, A={A:g}, R={R:g}")


def torus_fixture(
    k: int = 1,
    densities: tuple | None = None,
    R: float = 0.25,
    bulk: float = 0.0,
    order: int | None = None,
) -> BkSurfaceForm:
    """Torus with Z the union of two parallel circles Z1 and Z2.

    A global defining function such as ``sin(2 pi x)`` increases across Z1
    and decreases across Z2, so the second collar has orientation -1.
    ``densities`` holds one CollarSeries (or number) per circle.
    """
    n = k if order is None else order
    if densities is None:
        densities = (1.0, -1.0)
    collars = []
    for idx, (dens, orientation) in enumerate(zip(densities, (1, -1))):
        A = dens if isinstance(dens, CollarSeries) else CollarSeries.constant(float(dens), n)
        collars.append(CollarPiece(f"Z{idx + 1}", R, k, A, orientation))
    return BkSurfaceForm(k, tuple(collars), bulk, "torus with two circles")


def random_reparam_polynomial(rng=None, max_degree: int = 6, scale: float = 0.5) -> RealPolynomial:
    """``P(0) = 0``, ``P'(0) > 0``."""
    rng = _rng(rng)
    d = int(rng.integers(1, max_degree + 1))
    coeffs = [0.0, float(rng.uniform(0.5, 2.0))]
    coeffs += [float(scale * rng.normal()) for _ in range(d - 1)]
    return RealPolynomial(coeffs)


def random_residue_vector(rng=None, k_max: int = 6, k: int | None = None) -> ResidueVector:
    rng = _rng(rng)
    k = int(rng.integers(1, k_max + 1)) if k is None else k
    vals = list(rng.normal(size=k))
    vals[-1] = float(rng.uniform(0.25, 4.0))
    return ResidueVector(tuple(vals))


def random_jet_change(rng, k: int, degree: int = 2, max_frequency: int = 1, scale: float = 0.1) -> JetChange:
    """Small change ``y2 = y (1 + g y^(k-1))``.

    For k = 1 the constant term of g is theta-independent so that dy2/dy is a
    positive constant along Z.
    """
    rng = _rng(rng)
    coeffs = [random_circle_function(rng, max_frequency, scale) for _ in range(degree + 1)]
    if k == 1:
        coeffs[0] = CircleFunction(coeffs[0].constant)
    return JetChange(CollarSeries(coeffs, degree), k)


def random_compact_one_form(
    rng, k: int, R: float = 1.0, order: int = 8, max_frequency: int = 4, circle_id: str = "Z1"
) -> BkCollarOneForm:
    """``h dy/y^k + g dtheta`` with h and g divisible by ``R^2 - y^2``."""
    rng = _rng(rng)
    order = max(order, k + 2)
    bump = CollarSeries([CircleFunction(R * R), CircleFunction(0.0), CircleFunction(-1.0)], order)
    h = bump * random_collar_series(rng, order - 2, max_frequency).with_order(order)
    g = bump * random_collar_series(rng, order - 2, max_frequency).with_order(order)
    return BkCollarOneForm(circle_id, k, h, g, R)
