"""Randomized invariant suites shared by ``bkforms selftest`` and the test suite.

Each ``check_*`` function returns a :class:`CheckResult`; none of them raise
on a failed property, so callers can report every suite.
"""

from __future__ import annotations

import functools
import inspect
import io
import os
import tempfile
import time
from contextlib import redirect_stdout
from dataclasses import dataclass, field

import numpy as np

from .bk_forms import BkSurfaceForm, d_collar, laurent_normal_form
from .classify import (
    PoissonVerdict,
    bk_symplectomorphic,
    ll_decomposition,
    modular_periods,
    poisson_isomorphic_bk_type,
)
from .errors import PathDegenerate
from .generators import (
    constant_form,
    invariant_partner,
    random_compact_one_form,
    random_form,
    random_jet_change,
    random_reparam_polynomial,
    random_residue_vector,
)
from .normalize import (
    ResidueVector,
    jet_change,
    jet_equivalence_defect,
    poly_pick,
    reparam_form,
    residue_expansion,
)
from .series_ring import RealPolynomial, expand_dP_over_Pk
from .volume import DEFAULT_EPS_GRID, asymptotic_gap, volume_polynomial


@dataclass
class CheckResult:
    name: str
    passed: bool
    detail: str
    seconds: float = 0.0
    failures: list = field(default_factory=list)

    def line(self) -> str:
        return f"[{'PASS' if self.passed else 'FAIL'}] {self.name}: {self.detail} ({self.seconds:.2f}s)"


def _timed(fn):
    @functools.wraps(fn)
    def wrapper(*args, **kwargs):
        start = time.perf_counter()
        result = fn(*args, **kwargs)
        result.seconds = time.perf_counter() - start
        return result

    return wrapper


@_timed
def check_residues(n: int = 500, seed: int = 1, tol: float = 1e-10) -> CheckResult:
    """``P'/P`` has residue 1 and ``P'/P^i`` (i = 2..6) residue 0."""
    rng = np.random.default_rng(seed)
    worst = 0.0
    failures = []
    for _ in range(n):
        P = random_reparam_polynomial(rng, max_degree=6)
        for i in range(1, 7):
            res = expand_dP_over_Pk(P, i, order=0).residue()
            err = abs(res - (1.0 if i == 1 else 0.0))
            worst = max(worst, err)
            if err >= tol:
                failures.append((P.coefficients, i, res))
    return CheckResult("residue identities", not failures, f"{n} polynomials x i=1..6, max error {worst:.2e}", failures=failures)


@_timed
def check_poly_pick(n: int = 1000, seed: int = 2, tol: float = 1e-10) -> CheckResult:
    """Expansion of ``sum a_{-i} P'/P^i`` has the normal shape."""
    rng = np.random.default_rng(seed)
    vectors = [ResidueVector((0.0, 1.0, 1.0))] + [random_residue_vector(rng, 6) for _ in range(n)]
    worst = 0.0
    failures = []
    for a in vectors:
        k = a.k
        P = poly_pick(a)
        e = residue_expansion(a, P)
        want = {d: 0.0 for d in range(-k, 0)}
        want[-k] = 1.0 if k > 1 else a[1]
        want[-1] = a[1]
        err = max(abs(e.coefficient(d) - w) for d, w in want.items())
        worst = max(worst, err)
        if err >= tol:
            failures.append((a.values, P.coefficients, err))
    fixture = poly_pick(ResidueVector((0.0, 1.0, 1.0)))
    fixture_ok = np.allclose(np.asarray(fixture.coefficients, dtype=float), [0.0, 1.0, 1.0], atol=1e-12, rtol=0)
    if not fixture_ok:
        failures.append(("fixture (0, 1, 1)", fixture.coefficients))
    return CheckResult(
        "poly_pick contract",
        not failures,
        f"{len(vectors)} residue vectors, max error {worst:.2e}; (0,1,1) -> {fixture.coefficients}",
        failures=failures,
    )


@_timed
def check_volume_asymptotics(n: int = 200, seed: int = 3, tol: float = 1e-6) -> CheckResult:
    """Gap ``|P(1/eps) - vol_cutoff(eps)|`` below ``tol`` at eps = 1e-4 and nonincreasing."""
    rng = np.random.default_rng(seed)
    small_fail = 0
    mono_fail = 0
    worst = 0.0
    failures = []
    for _ in range(n):
        f = random_form(rng, k_max=5, max_frequency=8)
        gaps = [g for _, g in asymptotic_gap(f, DEFAULT_EPS_GRID)]
        worst = max(worst, gaps[-1])
        small = gaps[-1] < tol
        mono = all(b <= a for a, b in zip(gaps, gaps[1:]))
        small_fail += not small
        mono_fail += not mono
        if not (small and mono):
            failures.append((f, gaps))
    return CheckResult(
        "volume-polynomial asymptotics",
        not failures,
        f"{n} forms; gap(1e-4) >= {tol:g} in {small_fail}, not monotone in {mono_fail}; max gap(1e-4) {worst:.2e}",
        failures=failures,
    )


@_timed
def check_jet_independence(n: int = 200, seed: int = 4, tol: float = 1e-8) -> CheckResult:
    """Jet changes keep the volume polynomial and have pole-free defect."""
    rng = np.random.default_rng(seed)
    worst = 0.0
    failures = []
    for _ in range(n):
        f = random_form(rng, k_max=5, max_frequency=8)
        change = random_jet_change(rng, f.k)
        defect = jet_equivalence_defect(f.k, change, order=4)
        if not defect.has_zero_principal_part(atol=0.0):
            failures.append(("defect", change))
        g = jet_change(f, change)
        p0 = np.array(volume_polynomial(f).coefficients)
        p1 = np.array(volume_polynomial(g).coefficients)
        err = float(np.max(np.abs(p0 - p1)))
        worst = max(worst, err)
        if err >= tol:
            failures.append(("volume", f, change, err))
    return CheckResult("jet independence", not failures, f"{n} pairs, max coefficient change {worst:.2e}", failures=failures)


@_timed
def check_exactness(n: int = 100, seed: int = 5, tol: float = 1e-10) -> CheckResult:
    """``d`` of a compactly supported collar one-form has no volume and no residues."""
    rng = np.random.default_rng(seed)
    worst = 0.0
    failures = []
    for _ in range(n):
        k = int(rng.integers(1, 6))
        R = float(rng.uniform(0.5, 2.0))
        mu = random_compact_one_form(rng, k, R, order=int(rng.integers(k + 2, k + 8)))
        f = BkSurfaceForm(k, (d_collar(mu),), 0.0)
        coeffs = volume_polynomial(f).coefficients
        res = [data.alpha(i).mean() for data in laurent_normal_form(f).circles for i in range(1, k + 1)]
        err = max(max(abs(c) for c in coeffs), max(abs(r) for r in res))
        worst = max(worst, err)
        if err >= tol:
            failures.append((mu, coeffs, res))
    return CheckResult("exact forms", not failures, f"{n} one-forms, max |coefficient| {worst:.2e}", failures=failures)


@_timed
def check_reparam_invariance(n: int = 200, seed: int = 6, tol: float = 1e-8) -> CheckResult:
    """Pullback by ``(P(y), theta)`` keeps Liouville volume and residues of alpha_{-1}."""
    rng = np.random.default_rng(seed)
    worst = 0.0
    changed = 0
    failures = []
    for _ in range(n):
        f = random_form(rng, k_max=5, max_frequency=8)
        P = random_reparam_polynomial(rng)
        g = reparam_form(f, P)
        l0 = laurent_normal_form(f)
        l1 = laurent_normal_form(g)
        err = abs(volume_polynomial(f).constant_term - volume_polynomial(g).constant_term)
        for c0, c1 in zip(l0.circles, l1.circles):
            err = max(err, abs(c0.alpha(1).mean() - c1.alpha(1).mean()))
            if f.k >= 2 and abs(c0.alpha(2).mean() - c1.alpha(2).mean()) > 1e-6:
                changed += 1
        worst = max(worst, err)
        if err >= tol:
            failures.append((f, P, err))
    ok = not failures and changed > 0
    return CheckResult(
        "reparameterization invariance",
        ok,
        f"{n} pairs, max change {worst:.2e}; alpha_-2 integral changed on {changed} circles",
        failures=failures,
    )


@_timed
def check_radko(n: int = 20, seed: int = 7) -> CheckResult:
    """For ``A = c``, ``bulk = b`` (k = 1): LL data ``(b, [[c]])`` and period ``1/c``."""
    rng = np.random.default_rng(seed)
    failures = []
    for _ in range(n):
        b = float(rng.normal() * 5)
        c = float(rng.uniform(0.1, 5.0))
        f = constant_form(1, c, R=float(rng.uniform(0.5, 2.0)), bulk=b)
        ll = ll_decomposition(f)
        period = modular_periods(f).periods[0]
        if ll.liouville_volume != b or ll.residues != ((c,),) or period != 1.0 / c:
            failures.append((b, c, ll, period))
    return CheckResult("k = 1 Radko triangle", not failures, f"{n} (b, c) values, exact equality", failures=failures)


@_timed
def check_classification(n: int = 20, seed: int = 8) -> CheckResult:
    """Shared invariants -> equivalent; A = 1 vs its P = 2y pullback -> not;
    sign flip -> PathDegenerate; Poisson mode accepts every pullback pair."""
    rng = np.random.default_rng(seed)
    failures = []
    for _ in range(n):
        f = random_form(rng, k_max=5, max_frequency=8, symplectic=True)
        g = invariant_partner(f, rng)
        if not bk_symplectomorphic(f, g):
            failures.append(("partner", f))
        if not bk_symplectomorphic(f, f):
            failures.append(("reflexive", f))
        P = random_reparam_polynomial(rng)
        if poisson_isomorphic_bk_type(f, reparam_form(f, P)) is not PoissonVerdict.ISOMORPHIC:
            failures.append(("poisson", f, P))
    base = constant_form(2, 1.0, R=1.0)
    scaled = reparam_form(base, RealPolynomial([0.0, 2.0]))
    if bk_symplectomorphic(base, scaled) is not False:
        failures.append(("P = 2y", scaled))
    if poisson_isomorphic_bk_type(base, scaled) is not PoissonVerdict.ISOMORPHIC:
        failures.append(("P = 2y poisson", scaled))
    flipped = base.replace_collars([type(c)(c.circle_id, c.R, c.k, -c.A, c.orientation) for c in base.collars])
    try:
        bk_symplectomorphic(base, flipped)
        failures.append(("sign flip", flipped))
    except PathDegenerate:
        pass
    return CheckResult(
        "classification coherence",
        not failures,
        f"{n} invariant-sharing pairs, {n} pullback pairs, P = 2y pair, sign-flipped pair",
        failures=failures,
    )


@_timed
def check_fixture_cli() -> CheckResult:
    """``bkforms volume`` on the k = 2, A = 1, R = 1 fixture."""
    from .cli import main
    from .serialize import dumps_form

    with tempfile.TemporaryDirectory() as tmp:
        path = os.path.join(tmp, "k2_constant.json")
        with open(path, "w") as fh:
            fh.write(dumps_form(constant_form(2, 1.0, R=1.0, bulk=0.0)))
        buf = io.StringIO()
        with redirect_stdout(buf):
            code = main(["volume", path, "--format", "text"])
    out = buf.getvalue()
    ok = code == 0 and "P(t) = -2 + 2t" in out and "Liouville volume: -2\n" in out
    first = " | ".join(out.splitlines()[:2])
    return CheckResult("fixture reproduction", ok, f"exit {code}; {first}")


CHECKS = (
    ("1", check_residues),
    ("2", check_poly_pick),
    ("3", check_volume_asymptotics),
    ("4", check_jet_independence),
    ("5", check_exactness),
    ("6", check_reparam_invariance),
    ("7", check_radko),
    ("8", check_classification),
    ("9", check_fixture_cli),
)


def run_all(scale: float = 1.0) -> list[CheckResult]:
    """Run every suite; ``scale`` shrinks the randomized sample sizes."""
    results = []
    for _, fn in CHECKS:
        params = inspect.signature(fn).parameters
        if scale != 1.0 and "n" in params:
            results.append(fn(n=max(1, int(params["n"].default * scale))))
        else:
            results.append(fn())
    return results
