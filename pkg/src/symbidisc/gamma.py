"""Geometry and function theory of the symmetrised bidisc.

Points are coordinatized as (s, p) = (z + w, zw) with z, w in the closed
disc. The magic functions Phi_omega(s, p) = (2*omega*p - s)/(2 - omega*s),
omega on the circle, drive everything: membership tests, the Caratheodory
distance, and the pencil conditions built on top in ``cnu``.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from typing import Optional

import numpy as np

from .errors import PolePointError, ValidationError
from .ratfun import (Poly, RationalFn, classify_inner, poly_allclose,
                     reduce_rational)

_DEFAULT_TOL = 1e-9
_INNER_SAMPLES = 256
_INNER_TOL = 1e-8


@dataclass(frozen=True)
class GammaPoint:
    s: complex
    p: complex

    def as_pair(self):
        return complex(self.s), complex(self.p)


def _coerce_point(pt):
    if isinstance(pt, GammaPoint):
        return pt.as_pair()
    s, p = pt
    return complex(s), complex(p)


def phi(z, pt):
    """The magic function Phi(z, s, p) = (2zp - s)/(2 - zs)."""
    s, p = _coerce_point(pt)
    z = complex(z)
    den = 2.0 - z * s
    if abs(den) < 1e-12:
        raise PolePointError(f"Phi undefined at z={z}, (s,p)=({s},{p})")
    return (2.0 * z * p - s) / den


@dataclass(frozen=True)
class Membership:
    """Region flags for one point; several can hold at once."""
    open_g: bool
    closed_gamma: bool
    boundary: bool              # topological boundary of Gamma
    distinguished_boundary: bool
    outside: bool
    defect: float               # 1 - |p|^2 - |s - conj(s) p|
    s_modulus: float
    p_modulus: float

    def region(self):
        if self.open_g:
            return "openG"
        if self.distinguished_boundary:
            return "distinguishedBoundary"
        if self.boundary:
            return "boundaryTopological"
        if self.closed_gamma:
            return "closedGammaOnly"
        return "outside"


def membership(pt, tol=_DEFAULT_TOL):
    """Classify a point against G, Gamma, the topological boundary and the
    distinguished boundary; equalities are banded by tol."""
    s, p = _coerce_point(pt)
    defect = 1.0 - abs(p) ** 2 - abs(s - s.conjugate() * p)
    s_ok = abs(s) <= 2.0 + tol
    open_g = defect > tol
    closed = s_ok and defect >= -tol
    boundary = s_ok and abs(defect) <= tol
    dist = (s_ok and abs(abs(p) - 1.0) <= tol
            and abs(s - s.conjugate() * p) <= tol)
    return Membership(open_g=bool(open_g), closed_gamma=bool(closed),
                      boundary=bool(boundary), distinguished_boundary=bool(dist),
                      outside=not bool(closed), defect=float(defect),
                      s_modulus=float(abs(s)), p_modulus=float(abs(p)))


def pseudohyperbolic(a, b):
    a, b = complex(a), complex(b)
    if a == b:
        return 0.0
    den = 1.0 - np.conj(b) * a
    if abs(den) < 1e-15:
        return 1.0
    return abs((a - b) / den)


class GammaMap:
    """Pair (s, p) of rational functions, a candidate Gamma-inner map.

    Construction reduces both coordinates and builds the shared-denominator
    representation s = Ns/D, p = Np/D; maps whose s has a pole that p lacks
    are rejected (they cannot be Gamma-inner).
    """

    def __init__(self, s, p, pairing_tol=1e-8):
        self.s = s if isinstance(s, RationalFn) else RationalFn(s)
        self.p = p if isinstance(p, RationalFn) else RationalFn(p)
        self.s, _ = reduce_rational(self.s, pairing_tol)
        self.p, _ = reduce_rational(self.p, pairing_tol)
        self._common = None

    @classmethod
    def from_pair(cls, s_num, s_den, p_num, p_den):
        return cls(RationalFn(Poly(s_num), Poly(s_den)),
                   RationalFn(Poly(p_num), Poly(p_den)))

    def __call__(self, lam):
        return self.s(lam), self.p(lam)

    def point(self, lam):
        return GammaPoint(complex(self.s(lam)), complex(self.p(lam)))

    def common_denominator(self):
        """(Ns, Np, D) with s = Ns/D and p = Np/D, D = denominator of p."""
        if self._common is not None:
            return self._common
        d = self.p.den
        q, r = d.divmod(self.s.den)
        scale = max(np.max(np.abs(d.coeffs)), 1.0)
        if not r.is_zero and np.max(np.abs(r.coeffs)) > 1e-8 * scale:
            raise ValidationError(
                "pole of s is not a pole of p; map cannot be Gamma-inner")
        self._common = (self.s.num * q, self.p.num, d)
        return self._common

    @property
    def degree(self):
        return max(self.s.degree, self.p.degree)

    def __repr__(self):
        return f"GammaMap(s={self.s!r}, p={self.p!r})"


@dataclass(frozen=True)
class InnerCheck:
    ok: bool
    max_p_deviation: float
    max_s_modulus: float
    max_symmetry_error: float
    min_pole_modulus: float
    reason: str = ""


def verify_gamma_inner(h, samples=_INNER_SAMPLES, tol=_INNER_TOL):
    """Certify that h maps the circle into the distinguished boundary.

    Checks that all poles lie outside the closed disc and that on circle
    samples |p| = 1, |s| <= 2 and s = conj(s)*p; a map analytic on the
    closed disc with boundary values there maps the disc into Gamma.
    """
    try:
        h.common_denominator()
    except ValidationError as exc:
        return InnerCheck(False, math.inf, math.inf, math.inf, 0.0, str(exc))
    poles = np.concatenate([h.p.poles(), h.s.poles()]) if h.s.den.degree else h.p.poles()
    min_pole = float(np.min(np.abs(poles))) if len(poles) else math.inf
    if min_pole <= 1.0 + 1e-10:
        return InnerCheck(False, math.inf, math.inf, math.inf, min_pole,
                          "pole in the closed disc")
    pts = np.exp(2j * np.pi * np.arange(samples) / samples)
    sv = h.s(pts)
    pv = h.p(pts)
    p_dev = float(np.max(np.abs(np.abs(pv) - 1.0)))
    s_max = float(np.max(np.abs(sv)))
    sym = float(np.max(np.abs(sv - np.conj(sv) * pv)))
    ok = p_dev <= tol and s_max <= 2.0 + tol and sym <= tol
    reason = "" if ok else "boundary values leave the distinguished boundary"
    return InnerCheck(ok, p_dev, s_max, sym, min_pole, reason)


@dataclass(frozen=True)
class RoyalNode:
    """Circle point where the map meets the variety {(2z, z^2)}."""
    zeta: complex
    omega: complex     # h(zeta) = (2*conj(omega), conj(omega)^2)

    @property
    def target(self):
        # value a Blaschke parameter must take at zeta to cancel there
        return self.omega


@dataclass(frozen=True)
class RoyalReport:
    is_royal_map: bool       # s^2 - 4p vanishes identically
    nodes: tuple = ()


def _discriminant_numerator(h):
    ns, npoly, d = h.common_denominator()
    a = ns * ns
    b = 4.0 * (npoly * d)
    r = a - b
    # cancellation down to rounding noise means the map lies in the variety
    scale = max(np.max(np.abs(a.coeffs)), np.max(np.abs(b.coeffs)), 1.0)
    if np.max(np.abs(r.coeffs)) <= 1e-12 * scale:
        return Poly([0.0])
    return r


def royal_nodes(h, circle_tol=1e-6, s_tol=1e-6):
    """Unit-circle royal nodes of a Gamma-inner map.

    Nodes are located as clustered roots of the numerator of s^2 - 4p
    (they are double roots there, so the computed pair straddles the true
    node and splits by up to ~1e-6 at the degrees handled here), polished
    on the circle, and validated against |s| = 2, which characterizes
    royal points of inner maps on the circle.
    """
    r = _discriminant_numerator(h)
    if r.is_zero:
        return RoyalReport(is_royal_map=True)
    roots = r.roots()
    near = [z for z in roots if abs(abs(z) - 1.0) < circle_tol]
    clusters = []
    for z in sorted(near, key=lambda w: cmath.phase(w)):
        for cl in clusters:
            if abs(z - cl[0]) < 1e-5:
                cl.append(z)
                break
        else:
            clusters.append([z])
    rprime = r.derivative()
    rsecond = rprime.derivative()
    nodes = []
    for cl in clusters:
        zeta = np.mean(cl)
        zeta = zeta / abs(zeta)
        if len(cl) >= 2:
            # a double root of the discriminant is a simple root of its
            # derivative: Newton there restores machine precision
            zeta = _newton_to_circle(rprime, rsecond, zeta)
        zeta = _polish_royal(h, zeta)
        sval = complex(h.s(zeta))
        if abs(abs(sval) - 2.0) > s_tol:
            continue        # near-circle root that is not a royal node
        omega = np.conj(sval) / 2.0
        omega = omega / abs(omega)
        nodes.append(RoyalNode(zeta=complex(zeta), omega=complex(omega)))
    nodes.sort(key=lambda nd: cmath.phase(nd.zeta))
    return RoyalReport(is_royal_map=False, nodes=tuple(nodes))


def _newton_to_circle(p, dp, z, steps=4):
    best = z
    for _ in range(steps):
        dv = dp(z)
        if abs(dv) < 1e-300:
            break
        step = p(z) / dv
        if abs(step) > 1e-3:
            break
        z = z - step
        if abs(p(z)) < abs(p(best)):
            best = z
    return best / abs(best)


def _polish_royal(h, zeta, step=1e-5):
    # one Newton step for the critical point of |s|^2 along the circle;
    # kept only if it improves |s| = 2 (cluster means of the double roots
    # are already second-order accurate, so the step can only help for
    # poorly separated clusters)
    theta = cmath.phase(zeta)

    def f(t):
        return abs(h.s(cmath.exp(1j * t))) ** 2

    d1 = (f(theta + step) - f(theta - step)) / (2 * step)
    d2 = (f(theta + step) - 2 * f(theta) + f(theta - step)) / step ** 2
    if abs(d2) > 1e-8:
        new = theta - d1 / d2
        if abs(new - theta) < 1e-3 and abs(f(new) - 4.0) < abs(f(theta) - 4.0):
            theta = new
    return cmath.exp(1j * theta)


def is_full(h):
    """True when the map attains |s| = 2 somewhere on the circle."""
    rep = royal_nodes(h)
    if rep.is_royal_map:
        return h.p.num.degree > 0 or h.p.den.degree > 0
    return len(rep.nodes) > 0


def is_superficial(h, tol=1e-8):
    """Detect s = omega*p + conj(omega) identically; returns omega or None."""
    ns, npoly, d = h.common_denominator()
    if npoly.degree == 0 and d.degree == 0:
        # constant p; a Gamma-inner map with constant p is a constant in the
        # distinguished boundary, where omega solves a quadratic
        pval = npoly.coeffs[0] / d.coeffs[0]
        if ns.degree > 0:
            return None
        sval = ns.coeffs[0] / d.coeffs[0]
        if abs(pval) < 1e-12:
            return None
        disc = cmath.sqrt(sval * sval - 4.0 * pval)
        for root in ((sval + disc) / (2 * pval), (sval - disc) / (2 * pval)):
            if abs(abs(root) - 1.0) < tol:
                omega = root / abs(root)
                if abs(omega * pval + np.conj(omega) - sval) < 1e-7:
                    return complex(omega)
        return None
    m = max(ns.degree, npoly.degree, d.degree) + 1
    a = np.zeros((m, 2), dtype=complex)
    a[: len(npoly.coeffs), 0] = npoly.coeffs
    a[: len(d.coeffs), 1] = d.coeffs
    b = np.zeros(m, dtype=complex)
    b[: len(ns.coeffs)] = ns.coeffs
    sol, *_ = np.linalg.lstsq(a, b, rcond=None)
    u, v = sol
    scale = max(np.max(np.abs(b)), 1.0)
    resid = np.max(np.abs(a @ sol - b))
    if resid > tol * scale or abs(abs(u) - 1.0) > 1e-6 or abs(v - np.conj(u)) > 1e-6:
        return None
    return complex(u / abs(u))


def _paired_roots(roots, tol=1e-5):
    """Greedy pairing of equal roots; returns (means, leftovers)."""
    left = list(roots)
    means, unpaired = [], []
    while left:
        z = left.pop()
        if not left:
            unpaired.append(z)
            break
        dists = [abs(z - w) for w in left]
        j = int(np.argmin(dists))
        if dists[j] < tol * max(1.0, abs(z)):
            means.append((z + left.pop(j)) / 2.0)
        else:
            unpaired.append(z)
    return means, unpaired


def is_symmetrization(h, tol=1e-8):
    """Split h as (f + g, f*g) for inner f, g when possible.

    Exists precisely when s^2 - 4p has an analytic square root on the disc,
    i.e. when every root of its numerator inside the disc has even
    multiplicity; for genuine Gamma-inner maps the circle reflection pairs
    the remaining roots, so the square root is rational.
    """
    ns, npoly, d = h.common_denominator()
    r = _discriminant_numerator(h)
    if r.is_zero:
        half = RationalFn(ns * 0.5, d)
        half, _ = reduce_rational(half)
        f = classify_inner(half)
        if f is None:
            return None
        return (f, f)
    roots = r.roots()
    means, leftovers = _paired_roots(roots)
    if leftovers:
        if any(abs(z) < 1.0 - 1e-7 for z in leftovers):
            return None      # odd-order zero inside the disc
        return None          # no rational square root realizable
    lead = r.coeffs[-1]
    pts = np.exp(2j * np.pi * (np.arange(24) + 0.37) / 24) * 0.77
    sv = h.s(pts)
    pv = h.p(pts)
    for sqrtc in (cmath.sqrt(lead), -cmath.sqrt(lead)):
        g = Poly.from_roots(means, lead=sqrtc)
        # the reconstructed square root carries the clustered-root noise, so
        # the reduction tolerance is looser; the value checks below make a
        # false cancellation impossible
        f1, _ = reduce_rational(RationalFn((ns - g) * 0.5, d), pairing_tol=1e-6)
        f2, _ = reduce_rational(RationalFn((ns + g) * 0.5, d), pairing_tol=1e-6)
        b1 = classify_inner(f1, tol=1e-6)
        b2 = classify_inner(f2, tol=1e-6)
        if b1 is None or b2 is None:
            continue
        sum_err = np.max(np.abs(b1(pts) + b2(pts) - sv))
        prod_err = np.max(np.abs(b1(pts) * b2(pts) - pv))
        if max(sum_err, prod_err) > 1e-6:
            continue
        return tuple(sorted((b1, b2), key=lambda bb: (bb.degree, bb.phase)))
    return None


@dataclass(frozen=True)
class StructuralForm:
    """Shared-denominator normal form of a Gamma-inner map.

    p = c lam^k Drefl/D with D(0) = 1, and s = lam^ell N / D where N has
    the palindromic symmetry b_j = c * conj(b_{n+k-2*ell-j}).
    """
    ell: Optional[int]
    n_s: Optional[Poly]
    d_p: Poly
    c: complex
    k: int
    n: int
    symmetric: bool
    symmetry_error: float
    degenerate_zero_s: bool = False


def structural_form(h, tol=1e-8):
    ns, npoly, d = h.common_denominator()
    d0 = complex(d(0.0))
    if abs(d0) < 1e-14:
        raise ValidationError("denominator vanishes at 0; map not analytic")
    dp = d * (1.0 / d0)
    n = dp.degree
    num0 = npoly * (1.0 / d0)
    scale = max(np.max(np.abs(num0.coeffs)), 1.0)
    k = 0
    while k < len(num0.coeffs) and abs(num0.coeffs[k]) <= 1e-10 * scale:
        k += 1
    if k >= len(num0.coeffs):
        raise ValidationError("p vanishes identically")
    drefl = dp.conj_reflect(n)
    c = num0.coeffs[k] / drefl.coeffs[0]
    recon = Poly.monomial(k, c) * drefl
    if not poly_allclose(recon, num0, 1e-7):
        raise ValidationError("p is not inner: reflection form fails")
    if ns.is_zero:
        return StructuralForm(ell=None, n_s=None, d_p=dp, c=complex(c), k=k,
                              n=n, symmetric=True, symmetry_error=0.0,
                              degenerate_zero_s=True)
    sn = ns * (1.0 / d0)
    sscale = max(np.max(np.abs(sn.coeffs)), 1.0)
    ell = 0
    while ell < len(sn.coeffs) and abs(sn.coeffs[ell]) <= 1e-10 * sscale:
        ell += 1
    nsp = Poly(sn.coeffs[ell:])
    err = 0.0
    deg_target = n + k - 2 * ell
    ok = 2 * ell <= n + k and nsp.degree == deg_target
    if ok:
        b = np.zeros(deg_target + 1, dtype=complex)
        b[: len(nsp.coeffs)] = nsp.coeffs
        bmax = max(np.max(np.abs(b)), 1.0)
        err = float(np.max(np.abs(b - c * np.conj(b[::-1])))) / bmax
        ok = err <= tol
    return StructuralForm(ell=ell, n_s=nsp, d_p=dp, c=complex(c), k=k, n=n,
                          symmetric=bool(ok), symmetry_error=float(err))


def _phi_safe(omega, s, p):
    den = 2.0 - omega * s
    if abs(den) < 1e-12:
        return None
    return (2.0 * omega * p - s) / den


def caratheodory_distance(a, b, angles=512, angle_tol=1e-10, tol=_DEFAULT_TOL):
    """sup over unimodular omega of rho(Phi_omega(a), Phi_omega(b)).

    The magic functions form a universal Caratheodory family for the domain,
    so the grid maximum plus golden-section refinement computes the distance.
    """
    sa, pa = _coerce_point(a)
    sb, pb = _coerce_point(b)
    for s, p in ((sa, pa), (sb, pb)):
        if not membership((s, p), tol=1e-7).closed_gamma:
            raise ValidationError(f"point ({s}, {p}) outside the closed domain")
    if sa == sb and pa == pb:
        return 0.0

    def value(theta):
        om = cmath.exp(1j * theta)
        fa = _phi_safe(om, sa, pa)
        fb = _phi_safe(om, sb, pb)
        if fa is None or fb is None:
            return -1.0
        return pseudohyperbolic(fa, fb)

    thetas = np.linspace(0.0, 2.0 * np.pi, angles, endpoint=False)
    vals = np.array([value(t) for t in thetas])
    kbest = int(np.argmax(vals))
    h = 2.0 * np.pi / angles
    lo, hi = thetas[kbest] - h, thetas[kbest] + h
    invphi = (math.sqrt(5.0) - 1.0) / 2.0
    x1 = hi - invphi * (hi - lo)
    x2 = lo + invphi * (hi - lo)
    f1, f2 = value(x1), value(x2)
    while hi - lo > angle_tol:
        if f1 < f2:
            lo, x1, f1 = x1, x2, f2
            x2 = lo + invphi * (hi - lo)
            f2 = value(x2)
        else:
            hi, x2, f2 = x2, x1, f1
            x1 = hi - invphi * (hi - lo)
            f1 = value(x1)
    return float(max(vals[kbest], f1, f2))


def kobayashi_defect(h, lam1, lam2, **kwargs):
    """rho(lam1, lam2) minus the Caratheodory distance of the image pair.

    Zero (within tolerance) certifies that h, restricted to this pair, is a
    distance-realizing disc; strictly positive means the pair is interior.
    """
    lam1, lam2 = complex(lam1), complex(lam2)
    if abs(lam1 - lam2) < 1e-12:
        raise ValidationError("node pair must be distinct")
    if abs(lam1) >= 1 or abs(lam2) >= 1:
        raise ValidationError("nodes must lie in the open disc")
    c = caratheodory_distance(h.point(lam1), h.point(lam2), **kwargs)
    return pseudohyperbolic(lam1, lam2) - c
