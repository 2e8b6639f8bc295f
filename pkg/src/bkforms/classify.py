"""Classification invariants and equivalence tests for symplectic b^k-forms."""

from __future__ import annotations

import enum
from dataclasses import dataclass

import numpy as np

from .bk_forms import (
    BkSurfaceForm,
    collar_sign,
    is_bk_symplectic,
    is_positively_oriented,
    laurent_normal_form,
)
from .errors import (
    IncompatibleStructures,
    NotPositivelyOriented,
    NotSymplectic,
    PathDegenerate,
    WrongPoleOrder,
)
from .volume import liouville_volume

DEFAULT_TOL = 1e-8


@dataclass(frozen=True)
class LLDecomposition:
    """Liouville volume and the circle integrals of ``alpha_{-1}, ..., alpha_{-k}``.

    ``residues[r][i - 1]`` is the integral of ``alpha_{-i}`` over circle r,
    taken with the surface orientation.
    """

    liouville_volume: float
    residues: tuple[tuple[float, ...], ...]
    circle_ids: tuple[str, ...] = ()

    @property
    def k(self) -> int:
        return len(self.residues[0]) if self.residues else 0

    def as_array(self) -> np.ndarray:
        return np.array(self.residues, dtype=float).reshape(len(self.residues), -1)


@dataclass(frozen=True)
class ModularPeriods:
    periods: tuple[float, ...]
    circle_ids: tuple[str, ...] = ()


class PoissonVerdict(enum.Enum):
    """Sufficient-condition test: a mismatch only yields ``UNKNOWN``."""

    ISOMORPHIC = "Isomorphic"
    UNKNOWN = "Unknown"


def ll_decomposition(f: BkSurfaceForm, check: bool = True) -> LLDecomposition:
    """Liouville-Laurent invariants of a symplectic b^k-form.

    Raises:
        NotSymplectic: when some collar density vanishes (``check=True``).
    """
    if check:
        verdict = is_bk_symplectic(f)
        if not verdict:
            cid, y, t = verdict.witness
            raise NotSymplectic(f"density vanishes near (y, theta) = ({y:g}, {t:g}) on circle {cid!r}")
    lnf = laurent_normal_form(f)
    # "+ 0.0" turns an orientation-flipped -0.0 into 0.0
    residues = tuple(
        tuple(data.orientation * data.alpha(i).mean() + 0.0 for i in range(1, f.k + 1))
        for data in lnf.circles
    )
    return LLDecomposition(liouville_volume(f), residues, f.circle_ids)


def modular_periods(f: BkSurfaceForm) -> ModularPeriods:
    """Periods of the modular vector field on each circle (k = 1).

    Raises:
        WrongPoleOrder: if k != 1.
        NotPositivelyOriented: if the form is not positively oriented.
    """
    if f.k != 1:
        raise WrongPoleOrder(f"modular periods need k = 1, got k = {f.k}")
    if not is_positively_oriented(f):
        raise NotPositivelyOriented("form is not positively oriented")
    ll = ll_decomposition(f)
    return ModularPeriods(tuple(1.0 / row[0] for row in ll.residues), f.circle_ids)


def _check_compatible(f0: BkSurfaceForm, f1: BkSurfaceForm) -> None:
    if f0.k != f1.k:
        raise IncompatibleStructures(f"pole orders differ: {f0.k} vs {f1.k}")
    if f0.circle_ids != f1.circle_ids:
        raise IncompatibleStructures(f"circles differ: {f0.circle_ids} vs {f1.circle_ids}")
    for c0, c1 in zip(f0.collars, f1.collars):
        if c0.orientation != c1.orientation:
            raise IncompatibleStructures(f"orientation differs on circle {c0.circle_id!r}")


def _check_path(f0: BkSurfaceForm, f1: BkSurfaceForm) -> None:
    """The segment ``(1 - t) A0 + t A1`` stays nonvanishing iff both ends share a sign."""
    for c0, c1 in zip(f0.collars, f1.collars):
        s0, _ = collar_sign(c0.A, c0.R)
        R = min(c0.R, c1.R)
        s1, _ = collar_sign(c1.A, R)
        if s0 != s1 or s0 == 0:
            raise PathDegenerate(
                f"densities on circle {c0.circle_id!r} have different signs; "
                "the straight-line path leaves the symplectic forms"
            )


def invariants_agree(a: LLDecomposition, b: LLDecomposition, tol: float = DEFAULT_TOL, columns=None) -> bool:
    if abs(a.liouville_volume - b.liouville_volume) >= tol:
        return False
    ra, rb = a.as_array(), b.as_array()
    if columns is not None:
        ra, rb = ra[:, columns], rb[:, columns]
    return bool(np.all(np.abs(ra - rb) < tol))


def bk_symplectomorphic(f0: BkSurfaceForm, f1: BkSurfaceForm, tol: float = DEFAULT_TOL) -> bool:
    """Decide whether two symplectic b^k-forms on the same model are symplectomorphic.

    Equal Liouville volumes and residue integrals are equivalent to a
    symplectomorphism provided the linear path between the forms stays
    symplectic, which is checked first.

    Raises:
        IncompatibleStructures: different k, circles or orientations.
        NotSymplectic: either form degenerates somewhere.
        PathDegenerate: the densities disagree in sign on some circle.
    """
    _check_compatible(f0, f1)
    ll0 = ll_decomposition(f0)
    ll1 = ll_decomposition(f1)
    _check_path(f0, f1)
    return invariants_agree(ll0, ll1, tol)


def poisson_isomorphic_bk_type(f0: BkSurfaceForm, f1: BkSurfaceForm, tol: float = DEFAULT_TOL) -> PoissonVerdict:
    """Sufficient test for isomorphism of the dual Poisson structures.

    Matching Liouville volumes and circle integrals of ``alpha_{-1}`` give an
    isomorphism; any other outcome is ``UNKNOWN`` since no converse is known.

    Raises:
        IncompatibleStructures: different k or circles.
        NotPositivelyOriented: either form is not positively oriented.
    """
    if f0.k != f1.k:
        raise IncompatibleStructures(f"pole orders differ: {f0.k} vs {f1.k}")
    if f0.circle_ids != f1.circle_ids:
        raise IncompatibleStructures(f"circles differ: {f0.circle_ids} vs {f1.circle_ids}")
    for f in (f0, f1):
        if not is_positively_oriented(f):
            raise NotPositivelyOriented(f"form {f.descriptor or '?'} is not positively oriented")
    ll0 = ll_decomposition(f0)
    ll1 = ll_decomposition(f1)
    if invariants_agree(ll0, ll1, tol, columns=[0]):
        return PoissonVerdict.ISOMORPHIC
    return PoissonVerdict.UNKNOWN
