from __future__ import annotations

import numpy as np
import pytest

from bkforms.bk_forms import BkSurfaceForm, CollarPiece
from bkforms.classify import (
    PoissonVerdict,
    bk_symplectomorphic,
    ll_decomposition,
    modular_periods,
    poisson_isomorphic_bk_type,
)
from bkforms.errors import (
    IncompatibleStructures,
    NotPositivelyOriented,
    NotSymplectic,
    PathDegenerate,
    WrongPoleOrder,
)
from bkforms.generators import (
    constant_form,
    invariant_partner,
    random_form,
    random_reparam_polynomial,
    torus_fixture,
)
from bkforms.normalize import reparam_form
from bkforms.series_ring import CircleFunction, CollarSeries, RealPolynomial


def with_density(f, A):
    c = f.collars[0]
    return f.replace_collars([CollarPiece(c.circle_id, c.R, c.k, A, c.orientation)])


def test_ll_examples():
    ll = ll_decomposition(constant_form(2, 1.0, R=1.0))
    assert ll.liouville_volume == -2.0
    assert ll.residues == ((0.0, 1.0),)
    ll = ll_decomposition(constant_form(1, 3.0, bulk=0.25))
    assert (ll.liouville_volume, ll.residues) == (0.25, ((3.0,),))


def test_ll_of_smooth_form():
    f = BkSurfaceForm(2, (), 4.0)
    ll = ll_decomposition(f)
    assert ll.liouville_volume == 4.0 and ll.residues == ()


def test_ll_rejects_degenerate():
    f = with_density(constant_form(2, 1.0), CollarSeries([1.0, 0.0, 0.0, 3.0], 3))
    with pytest.raises(NotSymplectic):
        ll_decomposition(f)


def test_torus_fixture_residues_positive():
    ll = ll_decomposition(torus_fixture(2, (1.0, -2.0)))
    assert [row[-1] for row in ll.residues] == [1.0, 2.0]


@pytest.mark.parametrize("c, period", [(2.0, 0.5), (1.0, 1.0), (0.25, 4.0)])
def test_modular_periods(c, period):
    assert modular_periods(constant_form(1, c)).periods == (period,)


def test_modular_period_uses_mean():
    f = with_density(constant_form(1, 1.0), CollarSeries([CircleFunction(2.0, [(1, 1.0)])], 1))
    assert modular_periods(f).periods == (0.5,)


def test_modular_period_errors():
    with pytest.raises(WrongPoleOrder):
        modular_periods(constant_form(2, 1.0))
    with pytest.raises(NotPositivelyOriented):
        modular_periods(constant_form(1, -1.0))


def test_self_equivalence():
    f = random_form(np.random.default_rng(0), symplectic=True)
    assert bk_symplectomorphic(f, f)
    assert poisson_isomorphic_bk_type(f, f) is PoissonVerdict.ISOMORPHIC


def test_invariant_sharing_perturbation():
    f = constant_form(2, 1.0, R=1.0, order=4)
    # 1 + y^3 rho cos(2 pi theta): zero theta-mean, so every invariant is unchanged
    A = CollarSeries([1.0, 0.0, 0.0, CircleFunction(0.0, [(1, 0.2)]), CircleFunction(0.0, [(1, -0.1)])], 4)
    assert bk_symplectomorphic(f, with_density(f, A))


@pytest.mark.parametrize("seed", range(5))
def test_partner_is_equivalent(seed):
    rng = np.random.default_rng(seed)
    f = random_form(rng, symplectic=True)
    g = invariant_partner(f, rng)
    assert g != f
    assert bk_symplectomorphic(f, g) and bk_symplectomorphic(g, f)


def test_transitivity_on_triples():
    rng = np.random.default_rng(3)
    f = random_form(rng, symplectic=True)
    g = invariant_partner(f, rng)
    h = invariant_partner(g, rng)
    assert bk_symplectomorphic(f, g) and bk_symplectomorphic(g, h) and bk_symplectomorphic(f, h)


def test_scaling_pair_is_not_symplectomorphic_but_poisson_isomorphic():
    f = constant_form(2, 1.0, R=1.0)
    g = reparam_form(f, RealPolynomial([0.0, 2.0]))
    assert bk_symplectomorphic(f, g) is False
    assert poisson_isomorphic_bk_type(f, g) is PoissonVerdict.ISOMORPHIC


def test_poisson_unknown_when_first_residue_differs():
    f = constant_form(2, 1.0, R=0.5)
    g = with_density(f, CollarSeries([1.0, 1.0], 2))
    assert poisson_isomorphic_bk_type(f, g) is PoissonVerdict.UNKNOWN


@pytest.mark.parametrize("seed", range(5))
def test_poisson_accepts_reparam_pairs(seed):
    rng = np.random.default_rng(seed)
    f = random_form(rng, symplectic=True)
    g = reparam_form(f, random_reparam_polynomial(rng))
    assert poisson_isomorphic_bk_type(f, g) is PoissonVerdict.ISOMORPHIC


def test_sign_flip_is_path_degenerate():
    f = constant_form(2, 1.0)
    g = with_density(f, CollarSeries.constant(-1.0, 2))
    with pytest.raises(PathDegenerate):
        bk_symplectomorphic(f, g)


def test_incompatible_structures():
    with pytest.raises(IncompatibleStructures):
        bk_symplectomorphic(constant_form(2, 1.0), constant_form(3, 1.0))
    with pytest.raises(IncompatibleStructures):
        bk_symplectomorphic(constant_form(1, 1.0), torus_fixture(1))


def test_poisson_requires_positive_orientation():
    with pytest.raises(NotPositivelyOriented):
        poisson_isomorphic_bk_type(constant_form(2, 1.0), constant_form(2, -1.0))


@pytest.mark.parametrize("seed", range(10))
def test_k1_matches_radko_data(seed):
    rng = np.random.default_rng(seed)
    f = random_form(rng, k=1, symplectic=True)
    g = invariant_partner(f, rng) if seed % 2 else random_form(rng, k=1, n_circles=len(f.collars), symplectic=True)
    g = g.replace_collars(
        [CollarPiece(c0.circle_id, c1.R, 1, c1.A * (c0.orientation * c1.orientation), c0.orientation)
         for c0, c1 in zip(f.collars, g.collars)],
        g.bulk_integral,
    )
    ll_f, ll_g = ll_decomposition(f), ll_decomposition(g)
    radko = abs(ll_f.liouville_volume - ll_g.liouville_volume) < 1e-8 and np.allclose(
        modular_periods(f).periods, modular_periods(g).periods, rtol=0, atol=1e-8
    )
    assert bk_symplectomorphic(f, g) == radko
