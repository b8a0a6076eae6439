"""Classification of rational inner maps by auxiliary/target degree classes.

A map h = (s, p) belongs to class (nu, k) when some Blaschke product m of
degree at most nu makes Phi(m, h) = (2mp - s)/(2 - ms) a Blaschke product
of degree at most k - 1. Since Phi(m, h) always has degree
d(m) + d(p) - (number of cancellations), and cancellations occur exactly at
circle royal nodes zeta where m(zeta) = conj(s(zeta))/2 (at most once per
node), membership is a boundary interpolation problem: how many royal-node
constraints can a degree-d product satisfy?

Decisions are exact wherever that interpolation problem is finite:

* constants: exhaust the finite set of node targets;
* degree 1: a product through 3 boundary constraints is determined by the
  cross ratio, so enumerate node triples (the cyclic-order obstruction
  appears here); two constraints are swept along the one-parameter pencil
  of automorphisms through the point pairs;
* degree >= 2: searched numerically; positives are verified exactly through
  the reduction, negatives are labelled non-exact unless a counting bound
  or an all-node-witness certificate applies.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from typing import Optional

import numpy as np
from scipy.optimize import least_squares, minimize

from .errors import ValidationError
from .gamma import RoyalNode, is_superficial, royal_nodes
from .ratfun import (BlaschkeProduct, Poly, RationalFn, _cluster_means,
                     classify_inner, mobius_from_boundary_triple,
                     reduce_rational)

_TARGET_TOL = 1e-7


@dataclass(frozen=True)
class CancellationRecord:
    node: RoyalNode
    satisfied: bool
    upsilon_value: complex


def phi_compose(upsilon, h, pairing_tol=1e-8):
    """Reduced Phi(upsilon, h) and its cancellation count.

    Cancellations happen only at circle royal nodes where upsilon hits the
    node target, so they are removed by synthetic deflation at the (known,
    accurate) nodes rather than by re-pairing recomputed roots; repeated
    factors in the result then cost no precision. Consistency-checks the
    degree arithmetic (degree = d(upsilon p) minus cancellations) and that
    the result is a Blaschke product; violations raise, since they indicate
    the input is not inner or the reduction failed.
    """
    ns, npol, d = h.common_denominator()
    ur = upsilon.to_rational()
    num = 2.0 * (ur.num * npol) - ur.den * ns
    den = 2.0 * (ur.den * d) - ur.num * ns
    count = 0
    rep = royal_nodes(h)
    if not rep.is_royal_map:
        for node in rep.nodes:
            if abs(complex(upsilon(node.zeta)) - node.target) < _TARGET_TOL:
                num = num.deflate(node.zeta)
                den = den.deflate(node.zeta)
                count += 1
    f, extra = reduce_rational(RationalFn(num, den), pairing_tol)
    count += extra
    dp = max(h.p.num.degree, h.p.den.degree)
    expected = upsilon.degree + dp - count
    if f.degree != expected:
        raise ValidationError(
            f"degree bookkeeping failed: got {f.degree}, expected {expected}")
    if classify_inner(f) is None:
        raise ValidationError("composition did not reduce to a Blaschke product")
    return f, count


def cancellation_points(upsilon, h, tol=1e-8):
    """One record per circle royal node; satisfied iff upsilon hits the
    node's target value there. Empty for maps with no circle royal nodes."""
    rep = royal_nodes(h)
    if rep.is_royal_map:
        return []
    out = []
    for node in rep.nodes:
        val = complex(upsilon(node.zeta))
        out.append(CancellationRecord(node=node,
                                      satisfied=abs(val - node.target) < tol,
                                      upsilon_value=val))
    return out


def _automorphism_through_pair(z1, t1, z2, t2, sweep=4096):
    """An automorphism with m(z1) = t1, m(z2) = t2, or None.

    With the phase pinned by the first constraint, the second becomes a
    single phase-matching equation along zero positions in the disc; the
    solution set is a curve, located by a sign-change sweep and bisection.
    """
    if abs(t1 - t2) < 1e-12 or abs(z1 - z2) < 1e-12:
        return None

    def mismatch(a):
        b1 = (z1 - a) / (1.0 - np.conj(a) * z1)
        b2 = (z2 - a) / (1.0 - np.conj(a) * z2)
        val = t1 * b2 / (b1 * t2)
        return math.atan2(val.imag, val.real)

    nr = max(16, int(math.sqrt(sweep / 4)))
    na = 4 * nr
    prev_col = None
    for ia in range(na + 1):
        ang = 2.0 * math.pi * ia / na
        col = []
        for ir in range(nr):
            a = (ir / nr) * 0.985 * np.exp(1j * ang)
            col.append((a, mismatch(a)))
        if prev_col is not None:
            for (a0, d0), (a1, d1) in zip(prev_col, col):
                if abs(d0) < math.pi / 2 and abs(d1) < math.pi / 2 and d0 * d1 <= 0:
                    lo, hi, flo = a0, a1, d0
                    for _ in range(60):
                        mid = 0.5 * (lo + hi)
                        fm = mismatch(mid)
                        if flo * fm <= 0:
                            hi = mid
                        else:
                            lo, flo = mid, fm
                    a = 0.5 * (lo + hi)
                    if abs(a) < 1.0 - 1e-9:
                        phase = t1 * (1.0 - np.conj(a) * z1) / (z1 - a)
                        m = BlaschkeProduct(math.atan2(phase.imag, phase.real), [a])
                        if abs(m(z1) - t1) < 1e-8 and abs(m(z2) - t2) < 1e-8:
                            return m
        prev_col = col
    return None


class _RoyalContext:
    """Cached royal-node interpolation data for one map."""

    def __init__(self, h, seed=0):
        self.h = h
        self.seed = seed
        self.dp = max(h.p.num.degree, h.p.den.degree)
        rep = royal_nodes(h)
        self.is_royal_map = rep.is_royal_map
        self.nodes = list(rep.nodes)
        self.m_count = len(self.nodes)
        self.zeta = np.array([nd.zeta for nd in self.nodes], dtype=complex)
        self.targets = np.array([nd.target for nd in self.nodes], dtype=complex)
        self._deg_cache = {}
        self.all_node_witness = None      # Blaschke with cancellation at every node
        if self.is_royal_map:
            # s is stored coprime, so f = s/2 needs no reduction
            self.royal_factor = classify_inner(RationalFn(h.s.num * 0.5, h.s.den))
            if self.royal_factor is None:
                raise ValidationError("royal map whose half-s is not inner")

    # ---- achievable cancellation counts per exact witness degree ----

    def const_classes(self):
        """Target equality classes: list of (count, omega), largest first."""
        groups = []
        for t in self.targets:
            for g in groups:
                if abs(t - g[1]) < _TARGET_TOL:
                    g[0] += 1
                    break
            else:
                groups.append([1, t])
        groups.sort(key=lambda g: (-g[0], math.atan2(g[1].imag, g[1].real)))
        return [(g[0], complex(g[1])) for g in groups]

    def satisfied_count(self, m):
        vals = m(self.zeta)
        return int(np.sum(np.abs(vals - self.targets) < _TARGET_TOL))

    def witnesses_deg0(self):
        return [(cnt, BlaschkeProduct.constant(om)) for cnt, om in self.const_classes()]

    def witnesses_deg1(self):
        out = []
        best3 = None
        for triple in itertools.combinations(range(self.m_count), 3):
            src = [self.zeta[i] for i in triple]
            dst = [self.targets[i] for i in triple]
            try:
                m = mobius_from_boundary_triple(src, dst)
            except ValidationError:
                continue
            if m is None:
                continue
            cnt = self.satisfied_count(m)
            if best3 is None or cnt > best3[0]:
                best3 = (cnt, m)
        if best3 is not None:
            out.append(best3)
        if best3 is None or best3[0] < 2:
            for i, j in itertools.combinations(range(self.m_count), 2):
                m = _automorphism_through_pair(self.zeta[i], self.targets[i],
                                               self.zeta[j], self.targets[j])
                if m is not None:
                    out.append((self.satisfied_count(m), m))
                    break
        if self.m_count:
            # rotation through a single node is always available
            c = self.targets[0] * np.conj(self.zeta[0])
            out.append((1, BlaschkeProduct(math.atan2(c.imag, c.real), [0.0])))
        return out

    def witnesses_high(self, d, max_subsets=120, starts=8):
        """Verified witnesses of exact degree d >= 2 (numeric search).

        Primary seeding interpolates subsets of royal-node targets directly:
        a degree-d product is e^{i t} P / P~ with P~ the circle reflection
        of P, so each boundary constraint is one real-linear condition on
        the coefficients of P. Sweeping the phase t and extracting null
        vectors yields candidates whose roots need only land inside the
        disc. Power products and local refinement fill in the rest.
        """
        out = []
        power = self._power_seed(d)
        if power is not None:
            out.append(power)
        rng = np.random.default_rng(self.seed + 7919 * d)
        found_counts = {cnt for cnt, _ in out}
        for size in range(min(self.m_count, 2 * d + 1), 0, -1):
            if size <= max((c for c in found_counts), default=0):
                break
            subsets = list(itertools.combinations(range(self.m_count), size))
            hit = None
            for sub in subsets[:max_subsets]:
                hit = self._interp_subset(sub, d) or self._fit_subset(sub, d, rng, starts)
                if hit is not None:
                    cnt = self.satisfied_count(hit)
                    if cnt >= size:
                        out.append((cnt, hit))
                        found_counts.add(cnt)
                        break
                    hit = None
        return out

    def _interp_subset(self, sub, d, theta_grid=48):
        zs = self.zeta[list(sub)]
        ts = self.targets[list(sub)]
        k = len(sub)
        powers = zs[:, None] ** np.arange(d + 1)[None, :]
        base = ts * zs ** d
        for j in range(theta_grid):
            theta = 2.0 * math.pi * j / theta_grid
            beta = 0.5 * (np.angle(base) - theta)
            rot = np.exp(-1j * beta)[:, None] * powers
            # Im(rot @ c) = 0 with c = a + i b: real-linear in (a, b)
            sys = np.hstack([rot.imag, rot.real])
            _, sv, vt = np.linalg.svd(sys)
            null_dim = 2 * (d + 1) - k
            for row in vt[-max(null_dim, 1):]:
                coeffs = row[: d + 1] + 1j * row[d + 1:]
                p = Poly(coeffs)
                if p.degree != d:
                    continue
                roots = p.roots()
                if len(roots) and np.max(np.abs(roots)) >= 1.0 - 1e-9:
                    continue
                phase = (theta + 2.0 * np.angle(p.coeffs[-1])) % (2.0 * math.pi)
                m = BlaschkeProduct(phase, roots)
                if np.max(np.abs(m(zs) - ts)) < 1e-8:
                    return m
        return None

    def _power_seed(self, d):
        # c * lam^d with the unimodular c matched to one node often hits all
        # of them for rotationally symmetric node sets
        best = None
        for i in range(self.m_count):
            c = self.targets[i] * np.conj(self.zeta[i] ** d)
            m = BlaschkeProduct(math.atan2(c.imag, c.real), [0.0] * d)
            cnt = self.satisfied_count(m)
            if cnt and (best is None or cnt > best[0]):
                best = (cnt, m)
        return best

    def _fit_subset(self, sub, d, rng, starts):
        zs = self.zeta[list(sub)]
        ts = self.targets[list(sub)]

        def residual(params):
            phase = params[0]
            zeros = []
            for k in range(d):
                z = complex(params[1 + 2 * k], params[2 + 2 * k])
                r = abs(z)
                if r >= 0.999999:
                    z *= 0.999999 / r
                zeros.append(z)
            vals = BlaschkeProduct(phase % (2 * math.pi), zeros)(zs) \
                if all(abs(z) < 1 - 1e-10 for z in zeros) else None
            if vals is None:
                return 1e6
            return float(np.sum(np.abs(vals - ts) ** 2))

        for _ in range(starts):
            x0 = np.concatenate([[rng.uniform(0, 2 * math.pi)],
                                 rng.uniform(-0.6, 0.6, 2 * d)])
            res = minimize(residual, x0, method="Nelder-Mead",
                           options={"maxiter": 400 * (2 * d + 1),
                                    "xatol": 1e-12, "fatol": 1e-16})
            if res.fun < 1e-18:
                phase = res.x[0] % (2 * math.pi)
                zeros = [complex(res.x[1 + 2 * k], res.x[2 + 2 * k]) for k in range(d)]
                if all(abs(z) < 1 - 1e-9 for z in zeros):
                    return BlaschkeProduct(phase, zeros)
        return None

    def polish_witness(self, m, loose_tol=1e-6):
        """Sharpen an approximate witness onto the node constraints it
        nearly satisfies (least squares on phase and zero positions).

        Near-coincident witness zeros are coalesced first: repeated zeros
        split by root-finding noise would otherwise smear the zeros of the
        verified composition beyond recognition.
        """
        vals = m(self.zeta)
        idx = [i for i in range(self.m_count)
               if abs(vals[i] - self.targets[i]) < loose_tol]
        if not idx or not m.degree:
            return m
        zs = self.zeta[idx]
        ts = self.targets[idx]
        seed_zeros = _cluster_means(np.asarray(m.zeros, dtype=complex))
        x0 = np.concatenate([[m.phase],
                             np.array([[z.real, z.imag] for z in seed_zeros]).ravel()])

        def residual(params):
            zeros = [complex(params[1 + 2 * k], params[2 + 2 * k])
                     for k in range(m.degree)]
            if any(abs(z) >= 1 - 1e-10 for z in zeros):
                return np.full(2 * len(idx), 1e3)
            diff = BlaschkeProduct(params[0] % (2 * math.pi), zeros)(zs) - ts
            return np.concatenate([diff.real, diff.imag])

        method = "lm" if 2 * len(idx) >= len(x0) else "trf"
        sol = least_squares(residual, x0, method=method, xtol=1e-15, ftol=1e-15)
        zeros = [complex(sol.x[1 + 2 * k], sol.x[2 + 2 * k])
                 for k in range(m.degree)]
        if any(abs(z) >= 1 - 1e-10 for z in zeros):
            return m
        cand = BlaschkeProduct(sol.x[0] % (2 * math.pi), zeros)
        old = float(np.max(np.abs(m(zs) - ts)))
        new = float(np.max(np.abs(cand(zs) - ts)))
        # prefer the canonical (coalesced) form whenever it interpolates
        # essentially as well
        return cand if new <= max(old, 1e-10) else m

    def witnesses(self, d):
        if d not in self._deg_cache:
            if d == 0:
                ws = self.witnesses_deg0()
            elif d == 1:
                ws = self.witnesses_deg1()
            else:
                ws = [(cnt, self.polish_witness(m))
                      for cnt, m in self.witnesses_high(d)]
            ws.sort(key=lambda cw: -cw[0])
            self._deg_cache[d] = ws
            for cnt, m in ws:
                if (cnt == self.m_count and 2 * m.degree <= self.m_count
                        and (self.all_node_witness is None
                             or m.degree < self.all_node_witness.degree)):
                    self.all_node_witness = m
        return self._deg_cache[d]

    def exclusion_is_exact(self, d, needed):
        """Is 'no degree-d witness with >= needed cancellations' a theorem?"""
        if needed > self.m_count:
            return True
        if d <= 1:
            return True
        w = self.all_node_witness
        if w is not None and d <= w.degree - 1 and needed > w.degree + d:
            # an all-node witness of low degree bounds every lower-degree
            # product to at most d(w) + d cancellations
            return True
        return False


@dataclass(frozen=True)
class MembershipCell:
    nu: int
    k: int
    in_class: bool
    exact: bool
    witness_m: Optional[BlaschkeProduct] = None
    q: Optional[BlaschkeProduct] = None
    note: str = ""


def _verify_witness(h, m, k):
    f, count = phi_compose(m, h)
    if f.degree > k - 1:
        return None
    q = classify_inner(f)
    return (q, count) if q is not None else None


def in_Enuk(h, nu, k, seed=0, _ctx=None):
    """Decide class membership at (nu, k) for a validated inner map."""
    if nu < 0 or k < 1:
        raise ValidationError("need nu >= 0 and k >= 1")
    ctx = _ctx or _RoyalContext(h, seed=seed)
    if ctx.is_royal_map:
        df = ctx.royal_factor.degree
        inside = df <= k - 1
        witness = BlaschkeProduct.constant(1.0) if inside else None
        q = None
        if inside:
            ver = _verify_witness(h, witness, k)
            q = ver[0] if ver else None
        return MembershipCell(nu, k, inside, True, witness, q,
                              note="royal map: composition is -f for every m")
    # trivial: no cancellations required
    if ctx.dp <= k - 1:
        witness = BlaschkeProduct.constant(1.0)
        ver = _verify_witness(h, witness, k)
        if ver is not None:
            return MembershipCell(nu, k, True, True, witness, ver[0],
                                  note="degree bound needs no cancellation")
    if ctx.m_count == 0:
        # no circle royal nodes: no cancellations ever, so the composition
        # degree is d(m) + d(p) >= d(p) > k - 1
        return MembershipCell(nu, k, False, True,
                              note="not full: cancellations impossible")
    exact_exclusion = True
    for d in range(nu + 1):
        needed = d + ctx.dp - (k - 1)
        if needed <= 0:
            # handled by the trivial branch unless verification failed there
            needed = 1
        if needed <= ctx.m_count:
            for cnt, m in ctx.witnesses(d):
                if cnt >= needed:
                    ver = _verify_witness(h, m, k)
                    if ver is not None:
                        return MembershipCell(nu, k, True, True, m, ver[0],
                                              note=f"{cnt} cancellations at degree {d}")
        if not ctx.exclusion_is_exact(d, needed):
            exact_exclusion = False
    return MembershipCell(nu, k, False, exact_exclusion,
                          note="" if exact_exclusion else
                          "negative from budgeted search only")


@dataclass(frozen=True)
class KExtremalCertificate:
    k: int
    nu: int
    witness_m: BlaschkeProduct
    q_degree: int


@dataclass(frozen=True)
class EClassReport:
    dp: int
    nu_max: int
    k_max: int
    cells: dict
    superficial: Optional[complex]
    geodesic: bool
    k_extremal: tuple
    inconsistencies: tuple


def classify(h, nu_max=2, k_max=6, seed=0):
    """Fill the membership table and derive the structural flags.

    Cross-checks the column theorems: column 1 admits only boundary-valued
    (superficial) maps, and column 2 only those plus distance-realizing
    discs; violations are reported, not silently dropped.
    """
    ctx = _RoyalContext(h, seed=seed)
    cells = {}
    for nu in range(nu_max + 1):
        for k in range(1, k_max + 1):
            prev_nu = cells.get((nu - 1, k))
            prev_k = cells.get((nu, k - 1))
            inherited = None
            if prev_nu is not None and prev_nu.in_class and prev_nu.exact:
                inherited = prev_nu
            elif prev_k is not None and prev_k.in_class and prev_k.exact:
                inherited = prev_k
            if inherited is not None and inherited.witness_m is not None:
                cells[(nu, k)] = MembershipCell(nu, k, True, True,
                                                inherited.witness_m, inherited.q,
                                                note="inherited (monotone)")
                continue
            cells[(nu, k)] = in_Enuk(h, nu, k, seed=seed, _ctx=ctx)
    omega = is_superficial(h)
    in02 = cells.get((0, 2))
    geodesic = bool(in02 and in02.in_class and omega is None)
    certs = []
    problems = []
    for k in range(2, k_max + 1):
        for nu in range(nu_max + 1):
            cell = cells[(nu, k)]
            if cell.in_class and omega is None:
                certs.append(KExtremalCertificate(
                    k=k, nu=nu, witness_m=cell.witness_m,
                    q_degree=cell.q.degree if cell.q else -1))
                break
    for nu in range(nu_max + 1):
        c1 = cells[(nu, 1)]
        if c1.in_class and omega is None:
            problems.append(f"non-boundary map reported in column 1 at nu={nu}")
        c2 = cells[(nu, 2)]
        if c2.in_class and omega is None and not geodesic:
            problems.append(f"column-2 member neither boundary-valued nor "
                            f"distance-realizing at nu={nu}")
    return EClassReport(dp=ctx.dp, nu_max=nu_max, k_max=k_max, cells=cells,
                        superficial=omega, geodesic=geodesic,
                        k_extremal=tuple(certs), inconsistencies=tuple(problems))


def degree_bound_check(h, n):
    """Established membership in column n forces d(p) <= 2n - 2."""
    dp = max(h.p.num.degree, h.p.den.degree)
    return dp <= 2 * n - 2
