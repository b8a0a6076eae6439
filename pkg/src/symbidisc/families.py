"""Constructors for the explicit rational inner families of the domain.

Every constructor returns a validated ``GammaMap`` (construction raises if
the boundary certification fails). The named families:

* ``symmetrize(f, g)`` -- (f + g, f g) for inner f, g;
* ``royalLift(v)`` -- (2v, v^2), image inside the variety {(2z, z^2)};
* ``semigroupProduct`` -- (s t / 2, p q) of two maps;
* ``scaleS(h, r)`` -- (r s, p), r within the sampled admissible bound;
* ``composeInner(h, f)`` -- h after an inner function;
* ``superficialOf(omega, p)`` -- (omega p + conj(omega), p), boundary-valued;
* ``flatGeodesic(beta)`` -- (beta lam + conj(beta), lam);
* ``hNu(nu, r)`` -- the degree-(2 nu + 2) family whose circle royal nodes
  are the (2 nu + 1)-th roots of -1; separates adjacent pencil conditions;
* ``hPsi(psi)`` -- (lam + lam psi, lam^2 psi);
* ``hJ(j)`` -- (lam^2 + lam^{2j+3}, lam^{2j+5});
* ``surprise(a, c)`` -- (c lam, lam (lam - a)) / (1 - conj(a) lam); its p
  has a pole (at infinity) that s lacks.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .cnu import GammaData
from .errors import ValidationError
from .gamma import GammaMap, membership, verify_gamma_inner
from .ratfun import BlaschkeProduct, Poly, RationalFn

FAMILY_NAMES = ("symmetrize", "royalLift", "semigroupProduct", "scaleS",
                "composeInner", "superficialOf", "flatGeodesic", "hNu",
                "hPsi", "hJ", "surprise")


@dataclass(frozen=True)
class FamilySpec:
    name: str
    params: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.name not in FAMILY_NAMES:
            raise ValidationError(f"unknown family {self.name!r}")


def _validated(h, what):
    chk = verify_gamma_inner(h)
    if not chk.ok:
        raise ValidationError(f"{what}: boundary certification failed ({chk.reason}; "
                              f"p dev {chk.max_p_deviation:.2e}, sym {chk.max_symmetry_error:.2e})")
    return h


def _as_rational(f):
    if isinstance(f, BlaschkeProduct):
        return f.to_rational()
    if isinstance(f, RationalFn):
        return f
    raise ValidationError("expected a Blaschke product or rational function")


def symmetrize(f, g):
    rf, rg = _as_rational(f), _as_rational(g)
    return _validated(GammaMap(rf + rg, rf * rg), "symmetrize")


def royal_lift(v):
    rv = _as_rational(v)
    return _validated(GammaMap(2.0 * rv, rv * rv), "royalLift")


def semigroup_product(h1, h2):
    return _validated(GammaMap(0.5 * (h1.s * h2.s), h1.p * h2.p),
                      "semigroupProduct")


def scale_s_bound(h, circle_samples=512, radii=32, angles=64):
    """Sampled admissible scaling bound min(2/max|s|, inf (1-|p|^2)/|s - conj(s) p|).

    The infimum runs over interior disc samples; on the boundary both
    numerator and denominator vanish for an inner map.
    """
    pts_circle = np.exp(2j * np.pi * np.arange(circle_samples) / circle_samples)
    smax = float(np.max(np.abs(h.s(pts_circle))))
    bound = np.inf if smax == 0.0 else 2.0 / smax
    for k in range(radii):
        r = (k + 0.5) / radii
        pts = r * np.exp(2j * np.pi * np.arange(angles) / angles)
        sv = h.s(pts)
        pv = h.p(pts)
        den = np.abs(sv - np.conj(sv) * pv)
        num = 1.0 - np.abs(pv) ** 2
        mask = den > 1e-14
        if mask.any():
            bound = min(bound, float(np.min(num[mask] / den[mask])))
    return float(bound)


def scale_s(h, r, margin=1e-6):
    if r < 0:
        raise ValidationError("scaling factor must be nonnegative")
    if r > scale_s_bound(h) - margin:
        raise ValidationError(f"scaling r={r} exceeds the sampled bound")
    return _validated(GammaMap(r * h.s, h.p), "scaleS")


def compose_inner(h, f):
    rf = _as_rational(f)
    return _validated(GammaMap(h.s.compose(rf), h.p.compose(rf)), "composeInner")


def superficial_of(omega, p):
    omega = complex(omega)
    if abs(abs(omega) - 1.0) > 1e-12:
        raise ValidationError("omega must be unimodular")
    rp = _as_rational(p)
    return _validated(GammaMap(omega * rp + RationalFn(Poly([np.conj(omega)])), rp),
                      "superficialOf")


def flat_geodesic(beta):
    beta = complex(beta)
    if abs(beta) >= 1.0:
        raise ValidationError("|beta| < 1 required")
    return _validated(GammaMap(RationalFn(Poly([np.conj(beta), beta])),
                               RationalFn(Poly([0.0, 1.0]))), "flatGeodesic")


def h_nu(nu, r):
    """The adjacent-condition separating family.

    s = 2(1-r) lam^{nu+1} / (1 + r lam^{2nu+1}),
    p = lam (lam^{2nu+1} + r) / (1 + r lam^{2nu+1}); nu >= 1, 0 < r < 1.
    """
    if nu < 1 or not (0.0 < r < 1.0):
        raise ValidationError("hNu needs nu >= 1 and 0 < r < 1")
    den = np.zeros(2 * nu + 2, dtype=complex)
    den[0] = 1.0
    den[2 * nu + 1] = r
    s_num = np.zeros(nu + 2, dtype=complex)
    s_num[nu + 1] = 2.0 * (1.0 - r)
    p_num = np.zeros(2 * nu + 3, dtype=complex)
    p_num[1] = r
    p_num[2 * nu + 2] = 1.0
    return _validated(GammaMap(RationalFn(Poly(s_num), Poly(den)),
                               RationalFn(Poly(p_num), Poly(den))), "hNu")


def h_psi(psi):
    """(lam (1 + psi), lam^2 psi) for an inner psi; circle royal nodes are
    the solutions of psi = 1."""
    rp = _as_rational(psi)
    if max(rp.num.degree, rp.den.degree) > 20:
        raise ValidationError("hPsi degree cap is 20")
    lam = RationalFn(Poly([0.0, 1.0]))
    return _validated(GammaMap(lam + lam * rp, lam * lam * rp), "hPsi")


def h_j(j):
    """(lam^2 + lam^{2j+3}, lam^{2j+5}); circle royal nodes are the
    (2j+1)-th roots of 1."""
    if j < 1:
        raise ValidationError("hJ needs j >= 1")
    s = np.zeros(2 * j + 4, dtype=complex)
    s[2] = 1.0
    s[2 * j + 3] = 1.0
    p = np.zeros(2 * j + 6, dtype=complex)
    p[2 * j + 5] = 1.0
    return _validated(GammaMap(RationalFn(Poly(s)), RationalFn(Poly(p))), "hJ")


def surprise(a, c):
    a = complex(a)
    if not 0.0 < abs(a) < 1.0:
        raise ValidationError("surprise needs a in the punctured open disc")
    if abs(complex(c).imag) > 1e-12:
        raise ValidationError("surprise needs real c")
    c = float(complex(c).real)
    if abs(c) > 2.0 * (1.0 - abs(a)) + 1e-12:
        raise ValidationError("|c| <= 2(1-|a|) violated")
    den = Poly([1.0, -np.conj(a)])
    return _validated(GammaMap(RationalFn(Poly([0.0, c]), den),
                               RationalFn(Poly([0.0, -a, 1.0]), den)), "surprise")


_BUILDERS = {
    "symmetrize": lambda p: symmetrize(p["f"], p["g"]),
    "royalLift": lambda p: royal_lift(p["v"]),
    "semigroupProduct": lambda p: semigroup_product(p["h1"], p["h2"]),
    "scaleS": lambda p: scale_s(p["h"], p["r"]),
    "composeInner": lambda p: compose_inner(p["h"], p["f"]),
    "superficialOf": lambda p: superficial_of(p["omega"], p["p"]),
    "flatGeodesic": lambda p: flat_geodesic(p["beta"]),
    "hNu": lambda p: h_nu(int(p["nu"]), float(p["r"])),
    "hPsi": lambda p: h_psi(p["psi"]),
    "hJ": lambda p: h_j(int(p["j"])),
    "surprise": lambda p: surprise(p["a"], p["c"]),
}


def build(spec):
    """Construct and validate the map described by a FamilySpec."""
    return _BUILDERS[spec.name](spec.params)


def sample_data(h, nodes):
    """Evaluate the map at disc nodes and package interpolation data.

    The openness flag is set from the sampled targets; a target outside the
    closed domain indicates an invalid map and raises.
    """
    nodes = tuple(complex(z) for z in nodes)
    if any(abs(z) >= 1.0 for z in nodes):
        raise ValidationError("nodes must lie in the open disc")
    targets = [h.point(z) for z in nodes]
    flags = [membership(t) for t in targets]
    if not all(f.closed_gamma for f in flags):
        raise ValidationError("map value escapes the closed domain")
    all_open = all(f.open_g for f in flags)
    return GammaData(nodes, tuple(targets), require_open=all_open)
