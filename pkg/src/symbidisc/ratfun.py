"""Complex polynomials, rational functions and finite Blaschke products.

Everything downstream (pencil matrices, inner-class decisions, the
counterexample generator) reduces to arithmetic in this module, so the
conventions are fixed here once:

* polynomial coefficients are stored ascending, trailing (high-order)
  zeros trimmed;
* rational functions keep a monic denominator and are reduced by root
  pairing;
* a finite Blaschke product is a phase plus a list of zeros of modulus
  strictly less than 1.
"""

from __future__ import annotations

import cmath
import math

import numpy as np

from . import _kernels
from .errors import RootFindingError, ValidationError

_TRIM_REL = 1e-12
_CIRCLE_GUARD = 1e-10  # Blaschke zeros must stay this far inside the circle
_INNER_SAMPLES = 64
_INNER_TOL = 1e-8


def _unit_samples(n):
    return np.exp(2j * np.pi * np.arange(n) / n)


class Poly:
    """Polynomial with complex coefficients, ascending powers."""

    __slots__ = ("coeffs",)

    def __init__(self, coeffs=(0,)):
        c = np.atleast_1d(np.asarray(coeffs, dtype=complex)).ravel()
        scale = np.max(np.abs(c)) if c.size else 0.0
        if scale > 0.0:
            keep = np.abs(c) > _TRIM_REL * scale
            last = int(np.max(np.nonzero(keep)[0])) if keep.any() else -1
        else:
            last = -1
        self.coeffs = c[: last + 1].copy() if last >= 0 else np.zeros(1, dtype=complex)
        if last < 0:
            self.coeffs = np.zeros(1, dtype=complex)

    @classmethod
    def one(cls):
        return cls([1.0])

    @classmethod
    def monomial(cls, k, c=1.0):
        coeffs = np.zeros(k + 1, dtype=complex)
        coeffs[k] = c
        return cls(coeffs)

    @classmethod
    def from_roots(cls, roots, lead=1.0):
        c = np.array([lead], dtype=complex)
        for r in roots:
            c = np.convolve(c, np.array([-r, 1.0], dtype=complex))
        return cls(c)

    @property
    def degree(self):
        return len(self.coeffs) - 1

    @property
    def is_zero(self):
        return self.degree == 0 and self.coeffs[0] == 0

    def __call__(self, z):
        z = np.asarray(z, dtype=complex)
        out = np.zeros_like(z)
        for c in self.coeffs[::-1]:
            out = out * z + c
        return out if out.shape else complex(out)

    def __add__(self, other):
        other = other if isinstance(other, Poly) else Poly([other])
        n = max(len(self.coeffs), len(other.coeffs))
        a = np.zeros(n, dtype=complex)
        a[: len(self.coeffs)] = self.coeffs
        a[: len(other.coeffs)] += other.coeffs
        return Poly(a)

    def __sub__(self, other):
        other = other if isinstance(other, Poly) else Poly([other])
        return self + (other * (-1.0))

    def __mul__(self, other):
        if isinstance(other, Poly):
            if self.is_zero or other.is_zero:
                return Poly([0.0])
            return Poly(np.convolve(self.coeffs, other.coeffs))
        return Poly(self.coeffs * complex(other))

    __rmul__ = __mul__

    def derivative(self):
        if self.degree == 0:
            return Poly([0.0])
        k = np.arange(1, len(self.coeffs))
        return Poly(self.coeffs[1:] * k)

    def conj_reflect(self, n=None):
        """lambda^n * conj-coefficients reversed: the circle reflection.

        With n = degree this is the polynomial whose roots are the unit-circle
        reflections 1/conj(r) of the roots of self.
        """
        if n is None:
            n = self.degree
        if n < self.degree:
            raise ValidationError("reflection order below degree")
        out = np.zeros(n + 1, dtype=complex)
        out[n - self.degree:] = np.conj(self.coeffs[::-1])
        return Poly(out)

    def roots(self):
        """All roots, via companion-matrix eigenvalues plus two Newton steps."""
        if self.degree == 0:
            return np.empty(0, dtype=complex)
        c = self.coeffs / self.coeffs[-1]
        n = self.degree
        comp = np.zeros((n, n), dtype=complex)
        comp[1:, :-1] = np.eye(n - 1)
        comp[:, -1] = -c[:-1]
        try:
            r = np.linalg.eigvals(comp)
        except np.linalg.LinAlgError as exc:  # pragma: no cover
            raise RootFindingError(str(exc)) from exc
        d = self.derivative()
        for _ in range(2):
            pv = self(r)
            dv = d(r)
            safe = np.abs(dv) > 1e-300
            step = np.zeros_like(r)
            step[safe] = pv[safe] / dv[safe]
            # reject divergent corrections (multiple roots)
            step[np.abs(step) > 1e-2 * (1.0 + np.abs(r))] = 0.0
            r = r - step
        return r

    def deflate(self, root, rel_tol=1e-6):
        """Synthetic division by (z - root); the remainder must be
        negligible relative to the coefficient scale."""
        if self.degree == 0:
            raise ValidationError("cannot deflate a constant polynomial")
        scale = float(np.max(np.abs(self.coeffs)))
        if abs(self(root)) > rel_tol * max(scale, 1.0):
            raise ValidationError(f"{root} is not a root within tolerance")
        out = np.empty(self.degree, dtype=complex)
        acc = 0.0 + 0.0j
        for k in range(self.degree, 0, -1):
            acc = self.coeffs[k] + root * acc
            out[k - 1] = acc
        return Poly(out)

    def divmod(self, other):
        """Long division; returns (quotient, remainder)."""
        if other.is_zero:
            raise ZeroDivisionError("polynomial division by zero")
        rem = self.coeffs.astype(complex).copy()
        dlead = other.coeffs[-1]
        dd = other.degree
        q = np.zeros(max(len(rem) - dd, 1), dtype=complex)
        for k in range(len(rem) - 1, dd - 1, -1):
            f = rem[k] / dlead
            q[k - dd] = f
            rem[k - dd: k + 1] -= f * other.coeffs
        return Poly(q), Poly(rem[:dd] if dd else [0.0])

    def __repr__(self):
        return f"Poly({np.round(self.coeffs, 12).tolist()})"


def poly_allclose(a, b, tol=1e-10):
    n = max(len(a.coeffs), len(b.coeffs))
    ca = np.zeros(n, dtype=complex)
    cb = np.zeros(n, dtype=complex)
    ca[: len(a.coeffs)] = a.coeffs
    cb[: len(b.coeffs)] = b.coeffs
    scale = max(np.max(np.abs(ca)), np.max(np.abs(cb)), 1.0)
    return bool(np.max(np.abs(ca - cb)) <= tol * scale)


class RationalFn:
    """Ratio of two polynomials; denominator kept monic."""

    __slots__ = ("num", "den")

    def __init__(self, num, den=None):
        num = num if isinstance(num, Poly) else Poly(num)
        den = Poly([1.0]) if den is None else (den if isinstance(den, Poly) else Poly(den))
        if den.is_zero:
            raise ValidationError("zero denominator")
        lead = den.coeffs[-1]
        self.num = num * (1.0 / lead)
        self.den = den * (1.0 / lead)

    @property
    def degree(self):
        return max(self.num.degree, self.den.degree)

    def __call__(self, z):
        return self.num(z) / self.den(z)

    def __mul__(self, other):
        if isinstance(other, RationalFn):
            return RationalFn(self.num * other.num, self.den * other.den)
        return RationalFn(self.num * other, self.den)

    __rmul__ = __mul__

    def __add__(self, other):
        if not isinstance(other, RationalFn):
            other = RationalFn(Poly([complex(other)]))
        return RationalFn(self.num * other.den + other.num * self.den,
                          self.den * other.den)

    def __sub__(self, other):
        if not isinstance(other, RationalFn):
            other = RationalFn(Poly([complex(other)]))
        return self + (other * (-1.0))

    def compose(self, inner):
        """self(inner(z)) as a rational function (homogenized substitution)."""
        inner = inner if isinstance(inner, RationalFn) else inner.to_rational()
        k = max(self.num.degree, self.den.degree)
        gn_pows = [Poly.one()]
        gd_pows = [Poly.one()]
        for _ in range(k):
            gn_pows.append(gn_pows[-1] * inner.num)
            gd_pows.append(gd_pows[-1] * inner.den)

        def subst(poly):
            acc = Poly([0.0])
            for deg, c in enumerate(poly.coeffs):
                if c != 0:
                    acc = acc + (gn_pows[deg] * gd_pows[k - deg]) * c
            return acc

        return RationalFn(subst(self.num), subst(self.den))

    def poles(self):
        return self.den.roots()

    def zeros(self):
        return self.num.roots()

    def derivative(self):
        n = self.num.derivative() * self.den - self.num * self.den.derivative()
        return RationalFn(n, self.den * self.den)

    def __repr__(self):
        return f"RationalFn({self.num!r} / {self.den!r})"


def _pair_roots(rn, rd, tol):
    """Greedy matching of numerator and denominator roots within tol."""
    keep_n = list(range(len(rn)))
    keep_d = list(range(len(rd)))
    pairs = 0
    for i in list(keep_n):
        best, best_dist = -1, np.inf
        for j in keep_d:
            dist = abs(rn[i] - rd[j])
            if dist < best_dist:
                best, best_dist = j, dist
        if best >= 0 and best_dist <= tol * max(1.0, abs(rn[i]), abs(rd[best])):
            keep_n.remove(i)
            keep_d.remove(best)
            pairs += 1
    return keep_n, keep_d, pairs


def _polish(poly, roots, deriv=None):
    """Guarded Newton steps; a step is kept only if it shrinks |poly|."""
    if not len(roots):
        return roots
    deriv = deriv or poly.derivative()
    r = np.asarray(roots, dtype=complex).copy()
    for _ in range(3):
        pv = poly(np.atleast_1d(r))
        dv = deriv(np.atleast_1d(r))
        safe = np.abs(dv) > 1e-300
        cand = r.copy()
        cand[safe] = r[safe] - pv[safe] / dv[safe]
        better = np.abs(poly(np.atleast_1d(cand))) < np.abs(pv)
        r[better] = cand[better]
    return r


def reduce_rational(f, pairing_tol=1e-8):
    """Cancel common root pairs; returns (reduced, number of cancellations)."""
    if f.num.is_zero:
        return RationalFn(Poly([0.0])), 0
    rn = f.num.roots()
    rd = f.den.roots()
    keep_n, keep_d, pairs = _pair_roots(rn, rd, pairing_tol)
    if pairs == 0:
        return RationalFn(f.num, f.den), 0
    lead_ratio = f.num.coeffs[-1] / f.den.coeffs[-1]
    num = Poly.from_roots(_polish(f.num, rn[keep_n]), lead=lead_ratio)
    den = Poly.from_roots(_polish(f.den, rd[keep_d]), lead=1.0)
    return RationalFn(num, den), pairs


class BlaschkeProduct:
    """Finite Blaschke product: phase angle and zeros inside the disc."""

    __slots__ = ("phase", "zeros")

    def __init__(self, phase=0.0, zeros=()):
        self.phase = float(phase) % (2.0 * math.pi)
        zs = tuple(complex(z) for z in zeros)
        for z in zs:
            if abs(z) >= 1.0 - _CIRCLE_GUARD:
                raise ValidationError(
                    f"Blaschke zero {z} within {_CIRCLE_GUARD} of the unit circle")
        self.zeros = zs

    @classmethod
    def constant(cls, omega):
        omega = complex(omega)
        if abs(abs(omega) - 1.0) > 1e-12:
            raise ValidationError("constant Blaschke product must be unimodular")
        return cls(cmath.phase(omega), ())

    @property
    def degree(self):
        return len(self.zeros)

    def __call__(self, z):
        scalar = np.ndim(z) == 0
        vals = _kernels.blaschke_values(self.phase, np.asarray(self.zeros, dtype=complex),
                                        np.atleast_1d(np.asarray(z, dtype=complex)))
        return complex(vals[0]) if scalar else vals

    def __mul__(self, other):
        return BlaschkeProduct(self.phase + other.phase, self.zeros + other.zeros)

    def to_rational(self):
        num = Poly.from_roots(self.zeros, lead=np.exp(1j * self.phase))
        den = Poly([1.0])
        for a in self.zeros:
            den = den * Poly([1.0, -np.conj(a)])
        return RationalFn(num, den)

    def __repr__(self):
        return f"BlaschkeProduct(phase={self.phase:.12g}, zeros={list(self.zeros)})"


def _cluster_means(points, radius=1e-4):
    """Replace groups of nearby points by their mean, with multiplicity.

    Computed copies of a k-fold polynomial root spread like eps^(1/k), but
    their mean recovers the root to near machine precision.
    """
    groups = []
    for z in sorted(points, key=lambda w: (w.real, w.imag)):
        for g in groups:
            if abs(z - g[0]) < radius * max(1.0, abs(z)):
                g.append(z)
                break
        else:
            groups.append([z])
    out = []
    for g in groups:
        mean = sum(g) / len(g)
        out.extend([mean] * len(g))
    return np.asarray(out, dtype=complex)


def classify_inner(f, samples=_INNER_SAMPLES, tol=_INNER_TOL):
    """Recognize a reduced rational function as a finite Blaschke product.

    The tests, in order: all poles outside the closed disc; unimodular on
    circle samples within tol; the denominator proportional to the circle
    reflection of the numerator (a coefficient-level identity for inner
    functions, robust to clustered roots); zeros strictly inside. Repeated
    zeros are recovered by cluster averaging, and the rebuilt product must
    track f on the samples.
    """
    if f.num.is_zero:
        return None
    poles = f.poles()
    if len(poles) and np.min(np.abs(poles)) <= 1.0 + _CIRCLE_GUARD:
        return None
    pts = _unit_samples(samples)
    vals = f(pts)
    if np.max(np.abs(np.abs(vals) - 1.0)) > tol:
        return None
    refl = f.num.conj_reflect(f.num.degree)
    width = max(len(refl.coeffs), len(f.den.coeffs))
    a = np.zeros(width, dtype=complex)
    b = np.zeros(width, dtype=complex)
    a[: len(refl.coeffs)] = refl.coeffs
    b[: len(f.den.coeffs)] = f.den.coeffs
    c = np.vdot(a, b) / np.vdot(a, a)
    if np.max(np.abs(c * a - b)) > 1e-6 * max(1.0, np.max(np.abs(b))):
        return None
    zs_raw = f.zeros()
    if len(zs_raw) and np.max(np.abs(zs_raw)) >= 1.0 - _CIRCLE_GUARD:
        return None
    bound = max(100 * tol, 1e-6) * max(1.0, float(np.max(np.abs(vals))))
    for zs in (zs_raw, _cluster_means(zs_raw)):
        try:
            cand = BlaschkeProduct(0.0, zs)
        except ValidationError:
            return None
        ratio = vals[0] / cand(pts[0])
        if abs(abs(ratio) - 1.0) > tol:
            return None
        out = BlaschkeProduct(cmath.phase(ratio), zs)
        if np.max(np.abs(out(pts) - vals)) <= bound:
            return out
        if not len(zs_raw):
            break
    return None


def phasar_derivative(b, lam):
    """Rate of change of arg b(e^{i t}) with respect to t at lam on the circle.

    For a Blaschke product this is sum_a (1-|a|^2)/|1-conj(a) lam|^2; the
    phase factor contributes nothing.
    """
    lam = complex(lam)
    if abs(abs(lam) - 1.0) > 1e-8:
        raise ValidationError("phasar derivative needs |lam| = 1")
    total = 0.0
    for a in b.zeros:
        total += (1.0 - abs(a) ** 2) / abs(1.0 - np.conj(a) * lam) ** 2
    return total


def same_cyclic_order(a, b):
    """True iff the two triples of circle points have the same orientation."""
    a = [complex(x) for x in a]
    b = [complex(x) for x in b]
    for t in (a, b):
        if min(abs(t[0] - t[1]), abs(t[0] - t[2]), abs(t[1] - t[2])) < 1e-12:
            raise ValidationError("cyclic order of a degenerate triple")

    def orient(t):
        return ((t[1] - t[0]).conjugate() * (t[2] - t[0])).imag

    return bool(orient(a) * orient(b) > 0)


def _mobius_matrix_to_001inf(z1, z2, z3):
    # maps (z1, z2, z3) -> (0, 1, inf)
    return np.array([[z2 - z3, -z1 * (z2 - z3)],
                     [z2 - z1, -z3 * (z2 - z1)]], dtype=complex)


def mobius_from_boundary_triple(src, dst, tol=1e-9):
    """Disc automorphism through three boundary point pairs, if one exists.

    The unique Mobius map with m(src_k) = dst_k is built through the cross
    ratio; it is returned only when it is a disc automorphism (equivalently,
    when the two triples have the same cyclic order). Degenerate dst triples
    (not pairwise distinct) admit no Mobius map at all.
    """
    src = [complex(x) for x in src]
    dst = [complex(x) for x in dst]
    if min(abs(src[0] - src[1]), abs(src[0] - src[2]), abs(src[1] - src[2])) < 1e-12:
        raise ValidationError("source triple not pairwise distinct")
    if min(abs(dst[0] - dst[1]), abs(dst[0] - dst[2]), abs(dst[1] - dst[2])) < 1e-12:
        return None
    ms = _mobius_matrix_to_001inf(*src)
    md = _mobius_matrix_to_001inf(*dst)
    md_inv = np.array([[md[1, 1], -md[0, 1]], [-md[1, 0], md[0, 0]]], dtype=complex)
    mat = md_inv @ ms
    if abs(np.linalg.det(mat)) < 1e-14 * max(1.0, np.max(np.abs(mat)) ** 2):
        return None
    f = RationalFn(Poly([mat[0, 1], mat[0, 0]]), Poly([mat[1, 1], mat[1, 0]]))
    out = classify_inner(f, tol=max(tol, 1e-9))
    if out is None or out.degree != 1:
        return None
    # confirm interpolation (guards against borderline classification)
    err = max(abs(out(sk) - dk) for sk, dk in zip(src, dst))
    if err > 1e-7:
        return None
    return out
