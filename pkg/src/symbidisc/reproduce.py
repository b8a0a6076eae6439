"""Reproduction suite: the package's documented example facts as checks.

Each check re-derives a known exact outcome (auxiliary extremals of the
named families, class-table cells, royal-node locations, the
condition-separating counterexample) and compares at an explicit tolerance.
The suite doubles as the CLI's self-test; failures report the observed
values, never silently pass.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import counterexample, families as fam
from .cnu import auxiliary_extremal, dense_constant_scan, x_norm
from .eclass import classify, in_Enuk, phi_compose
from .errors import SymbidiscError
from .gamma import (GammaMap, kobayashi_defect, royal_nodes,
                    structural_form, verify_gamma_inner)
from .ratfun import BlaschkeProduct, Poly, RationalFn, poly_allclose

_NODES3 = (0.2, -0.3 + 0.25j, 0.45j)


@dataclass(frozen=True)
class CheckResult:
    id: str
    ok: bool
    detail: str


def _aux_royal_scaled(tol):
    """Scaled royal lift (2r lam, lam^2): every constant is an auxiliary
    extremal and yields a valid degree-2 solution."""
    h = fam.scale_s(fam.royal_lift(BlaschkeProduct(0.0, [0.0])), 0.5)
    data = fam.sample_data(h, _NODES3)
    worst = 0.0
    for k in range(20):
        m = BlaschkeProduct.constant(np.exp(2j * np.pi * k / 20))
        xn = x_norm(m, data)
        worst = max(worst, abs(xn - 1.0))
        if abs(xn - 1.0) > tol:
            return False, f"constant {k}: ||X|| = {xn}"
        _, q = auxiliary_extremal(data, 0, m, band=max(tol, 1e-9))
        if q.degree != 2:
            return False, f"constant {k}: q degree {q.degree} != 2"
    return True, f"20 constants extremal, max deviation {worst:.2e}"


def _aux_flat_all_deg1(tol):
    """Flat map (r(1+lam), lam): every degree-1 product is an auxiliary
    extremal with solution degree d(m) + 1."""
    h = fam.flat_geodesic(0.5)     # beta = r = 0.5 gives s = r(1 + lam)
    data = fam.sample_data(h, _NODES3)
    rng = np.random.default_rng(11)
    for k in range(10):
        deg = int(rng.integers(0, 2))
        zeros = [rng.uniform(0, 0.8) * np.exp(2j * np.pi * rng.uniform())] * deg
        m = BlaschkeProduct(rng.uniform(0, 2 * np.pi), zeros)
        xn = x_norm(m, data)
        if abs(xn - 1.0) > tol:
            return False, f"sample {k}: ||X|| = {xn}"
        _, q = auxiliary_extremal(data, 1, m, band=max(tol, 1e-9))
        if q.degree != m.degree + 1:
            return False, f"sample {k}: d(q) = {q.degree} != d(m)+1 = {m.degree + 1}"
    return True, "10 degree-<=1 witnesses extremal with d(q) = d(m) + 1"


def _aux_hnu1(tol):
    """h_nu at nu=1: m = -lam is extremal with q = -lam^2, and no constant
    comes within tolerance of extremality."""
    h = fam.h_nu(1, 0.5)
    data = fam.sample_data(h, _NODES3)
    m = BlaschkeProduct(math.pi, [0.0])
    xn = x_norm(m, data)
    if abs(xn - 1.0) > tol:
        return False, f"||X(-lam)|| = {xn}"
    _, q = auxiliary_extremal(data, 1, m, band=max(tol, 1e-9))
    err = max(abs(q(z) + z * z) for z in (0.3, -0.4j, 0.2 + 0.5j))
    if err > 1e-9:
        return False, f"q differs from -lam^2 by {err:.2e}"
    scan = dense_constant_scan(data, grid=1024)
    if scan.max_xnorm >= 1.0 - max(tol, 1e-9):
        return False, f"a constant reaches {scan.max_xnorm}"
    return True, (f"-lam extremal, q = -lam^2; constant scan max "
                  f"{scan.max_xnorm:.6f} stays below 1")


def _aux_royal_lift(tol):
    """Royal lift (2f, f^2): the auxiliary solution is -f for every witness."""
    f = BlaschkeProduct(0.0, [0.3])
    h = fam.royal_lift(f)
    data = fam.sample_data(h, _NODES3)
    rng = np.random.default_rng(5)
    for k in range(6):
        deg = int(rng.integers(0, 2))
        zeros = [rng.uniform(0, 0.8) * np.exp(2j * np.pi * rng.uniform())] * deg
        m = BlaschkeProduct(rng.uniform(0, 2 * np.pi), zeros)
        xn = x_norm(m, data)
        if abs(xn - 1.0) > tol:
            return False, f"sample {k}: ||X|| = {xn}"
        _, q = auxiliary_extremal(data, 1, m, band=max(tol, 1e-9))
        err = max(abs(q(z) + f(z)) for z in (0.25, -0.3j, 0.1 + 0.6j))
        if err > 1e-9:
            return False, f"sample {k}: q is not -f (error {err:.2e})"
    return True, "6 witnesses all produce q = -f"


def _composition_identity(tol):
    """Phi(-lam^nu, h_nu) = -lam^{nu+1} with 2 nu + 1 cancellations."""
    for nu in (1, 2, 3, 4):
        for r in (0.3, 0.5, 0.9):
            h = fam.h_nu(nu, r)
            m = BlaschkeProduct(math.pi, [0.0] * nu)
            f, count = phi_compose(m, h)
            target = Poly([0.0] * (nu + 1) + [-1.0])
            if not (poly_allclose(f.num, target, max(tol, 1e-10))
                    and poly_allclose(f.den, Poly([1.0]), max(tol, 1e-10))):
                return False, f"nu={nu} r={r}: composition is {f}"
            if count != 2 * nu + 1:
                return False, f"nu={nu} r={r}: {count} cancellations"
    return True, "identity holds for nu <= 4, r in {0.3, 0.5, 0.9}"


def _match_sets(got, want):
    """Max distance under optimal (greedy nearest) matching of two point sets."""
    if len(got) != len(want):
        return math.inf
    remaining = list(want)
    worst = 0.0
    for g in got:
        dists = [abs(g - w) for w in remaining]
        k = int(np.argmin(dists))
        worst = max(worst, dists[k])
        remaining.pop(k)
    return worst


def _royal_node_locations(tol):
    """Royal nodes: odd roots of -1 for the h_nu family, odd roots of 1 for
    the h_j family."""
    t = max(tol, 1e-8)
    for nu in (1, 2):
        nodes = royal_nodes(fam.h_nu(nu, 0.5)).nodes
        want = np.exp(1j * np.pi * (2 * np.arange(2 * nu + 1) + 1) / (2 * nu + 1))
        err = _match_sets([nd.zeta for nd in nodes], list(want))
        if err > t:
            return False, f"h_nu nu={nu}: node error {err:.2e}"
    for j in (1, 2):
        nodes = royal_nodes(fam.h_j(j)).nodes
        want = np.exp(2j * np.pi * np.arange(2 * j + 1) / (2 * j + 1))
        err = _match_sets([nd.zeta for nd in nodes], list(want))
        if err > t:
            return False, f"h_j j={j}: node error {err:.2e}"
    return True, "both families place their royal nodes at the odd roots"


def _eclass_hnu(tol):
    for nu in (1, 2):
        h = fam.h_nu(nu, 0.5)
        a = in_Enuk(h, nu, nu + 2)
        b = in_Enuk(h, nu - 1, nu + 2)
        if not (a.in_class and a.exact):
            return False, f"nu={nu}: membership failed ({a.note})"
        if b.in_class or not b.exact:
            return False, f"nu={nu}: exclusion failed ({b.note})"
    return True, "h_nu separates adjacent witness degrees for nu = 1, 2"


def _eclass_hpsi(tol):
    h = fam.h_psi(BlaschkeProduct(0.0, [0.0] * 3))
    a = in_Enuk(h, 1, 5)
    b = in_Enuk(h, 1, 4)
    if not (a.in_class and a.exact and not b.in_class and b.exact):
        return False, f"got in(1,5)={a.in_class}, in(1,4)={b.in_class}"
    return True, "cubed-psi lift sits in (1,5) but not (1,4); cyclic-order obstruction"


def _eclass_hj(tol):
    for j in (1, 2):
        h = fam.h_j(j)
        a = in_Enuk(h, 1, 2 * j + 4)
        b = in_Enuk(h, 0, 2 * j + 4)
        if not (a.in_class and a.exact and not b.in_class and b.exact):
            return False, f"j={j}: in(1)={a.in_class} in(0)={b.in_class}"
        if j == 1:
            if a.witness_m.degree != 1 or abs(a.witness_m(0.37) - 0.37) > 1e-7:
                return False, "j=1 witness is not the identity"
            if a.q is None or a.q.degree != 5:
                return False, f"j=1 solution degree {a.q and a.q.degree}"
            want = RationalFn(Poly([0, 0, -1, 0, 0, -2]), Poly([2, 0, 0, 1]))
            err = max(abs(a.q(z) - want(z)) for z in (0.3, -0.2 + 0.4j, 0.7j))
            if err > max(tol, 1e-9):
                return False, f"j=1 solution differs by {err:.2e}"
    return True, "h_j in (1, 2j+4) only; j=1 witness is the identity, degree-5 q"


def _eclass_zero_p(tol):
    for d in (1, 2, 3, 4):
        h = GammaMap(RationalFn(Poly([0.0])), RationalFn(Poly([0.0] * d + [1.0])))
        for nu in (0, 1, 2):
            a = in_Enuk(h, nu, d + 1)
            b = in_Enuk(h, nu, d)
            if not (a.in_class and a.exact and not b.in_class and b.exact):
                return False, f"(0, lam^{d}) at nu={nu}"
    return True, "(0, lam^d): no cancellations, split at k = d + 1 for every nu"


def _flat_geodesic_checks(tol):
    h = fam.flat_geodesic(0.5)
    rep = classify(h, nu_max=1, k_max=3)
    if rep.superficial is not None:
        return False, "flat map reported boundary-valued"
    if not rep.geodesic:
        return False, "flat map not recognized as a geodesic"
    if not any(c.k == 2 for c in rep.k_extremal):
        return False, "missing 2-extremal certificate"
    worst = 0.0
    rng = np.random.default_rng(23)
    for _ in range(5):
        a, b = rng.uniform(-0.6, 0.6, 2) + 1j * rng.uniform(-0.6, 0.6, 2)
        if abs(a - b) < 0.1:
            continue
        worst = max(worst, abs(kobayashi_defect(h, a, b)))
    if worst > max(tol, 1e-6):
        return False, f"distance defect {worst:.2e}"
    return True, f"geodesic with 2-extremal certificate; max defect {worst:.2e}"


def _surprise_structure(tol):
    h = fam.surprise(0.5, 0.5)
    chk = verify_gamma_inner(h)
    if not chk.ok:
        return False, "surprise map failed boundary certification"
    st = structural_form(h)
    if not (st.ell == 1 and st.k == 1 and st.n == 1 and st.symmetric):
        return False, f"structural form ell={st.ell} k={st.k} n={st.n}"
    if h.p.num.degree <= h.p.den.degree:
        return False, "p should have its extra pole at infinity"
    if h.s.num.degree > h.s.den.degree:
        return False, "s should stay bounded at infinity"
    return True, "inner with a p-pole (at infinity) that s lacks; palindromic form"


def _counterexample_nu1(tol):
    rep = counterexample.generate(1, 0.5)
    if rep.violation.eigenvalue > -1e-6:
        return False, f"violation {rep.violation.eigenvalue:.2e} too weak"
    scan = rep.weaker_evidence
    if scan.min_eigenvalue < -1e-9 * scan.scale:
        return False, f"degree-0 sweep dips to {scan.min_eigenvalue:.2e}"
    if not counterexample.verify(rep):
        return False, "independent recheck failed"
    return True, (f"eps = {rep.eps:.3e}: degree-1 violation "
                  f"{rep.violation.eigenvalue:.2e}, degree-0 margin "
                  f"{scan.min_eigenvalue:.2e}")


_CHECKS = {
    "aux-royal-scaled-constants": _aux_royal_scaled,
    "aux-flat-all-degree1": _aux_flat_all_deg1,
    "aux-hnu1-degree1-only": _aux_hnu1,
    "aux-royal-lift-minus-f": _aux_royal_lift,
    "composition-hnu-identity": _composition_identity,
    "royal-node-locations": _royal_node_locations,
    "eclass-hnu-separation": _eclass_hnu,
    "eclass-hpsi-cubed": _eclass_hpsi,
    "eclass-hj-families": _eclass_hj,
    "eclass-zero-p-pattern": _eclass_zero_p,
    "geodesic-flat-certificates": _flat_geodesic_checks,
    "surprise-pole-structure": _surprise_structure,
    "counterexample-nu1": _counterexample_nu1,
}


def available_ids():
    return sorted(_CHECKS)


def run_suite(ids=None, substring=None, tol=1e-6):
    """Run checks by id or substring filter; returns CheckResult list."""
    selected = available_ids()
    if ids:
        unknown = set(ids) - set(selected)
        if unknown:
            raise SymbidiscError(f"unknown check ids: {sorted(unknown)}")
        selected = [i for i in selected if i in set(ids)]
    if substring:
        selected = [i for i in selected if substring in i]
    out = []
    for cid in selected:
        try:
            ok, detail = _CHECKS[cid](tol)
        except SymbidiscError as exc:
            ok, detail = False, f"error: {exc}"
        out.append(CheckResult(id=cid, ok=bool(ok), detail=detail))
    return out
