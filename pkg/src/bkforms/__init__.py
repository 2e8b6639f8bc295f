"""Differential forms with order-k poles along circles in a surface.

Series arithmetic over trigonometric polynomials, Laurent normal forms,
volume polynomials and Liouville volumes, polynomial normalization of pole
data, and the invariants that classify symplectic b^k-forms.
"""

from __future__ import annotations

__version__ = "0.1.0"

from .bk_forms import (
    BkCollarOneForm,
    BkSurfaceForm,
    CircleLaurentData,
    CollarPiece,
    LaurentNormalForm,
    SymplecticCheck,
    d_collar,
    iota_L,
    is_bk_symplectic,
    is_positively_oriented,
    laurent_normal_form,
)
from .classify import (
    LLDecomposition,
    ModularPeriods,
    PoissonVerdict,
    bk_symplectomorphic,
    ll_decomposition,
    modular_periods,
    poisson_isomorphic_bk_type,
)
from .errors import *  # noqa: F401,F403
from .kernels import BACKEND
from .normalize import (
    JetChange,
    ResidueVector,
    jet_change,
    jet_equivalence_defect,
    poly_pick,
    reparam_decomposition,
    reparam_form,
)
from .series_ring import (
    CircleFunction,
    CollarSeries,
    LaurentSeries,
    RealPolynomial,
    expand_dP_over_Pk,
    integrate_over_circle,
    residue,
    series_add,
    series_derivative,
    series_mul,
    series_reciprocal,
)
from .volume import (
    VolumePolynomial,
    asymptotic_gap,
    liouville_volume,
    smooth_part_integral,
    vol_cutoff,
    volume_polynomial,
)
