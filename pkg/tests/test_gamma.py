import numpy as np
import pytest

from symbidisc import families as fam
from symbidisc.errors import PolePointError, ValidationError
from symbidisc.gamma import (GammaMap, caratheodory_distance,
                             is_full, is_superficial, is_symmetrization,
                             kobayashi_defect, membership, phi,
                             pseudohyperbolic, royal_nodes, structural_form,
                             verify_gamma_inner)
from symbidisc.ratfun import BlaschkeProduct, Poly, RationalFn, classify_inner, reduce_rational


def zero_s_map(d):
    return GammaMap(RationalFn(Poly([0.0])), RationalFn(Poly([0.0] * d + [1.0])))


class TestPhi:
    def test_at_zero(self):
        assert abs(phi(0.0, (1.2, 0.3)) + 0.6) < 1e-15

    def test_royal_identity(self):
        # on the variety (2w, w^2) the value is -w wherever defined
        for z, w in ((0.3, 0.5), (0.2j, -0.7), (0.5, 0.9j)):
            assert abs(phi(z, (2 * w, w * w)) + w) < 1e-13

    def test_excluded_point(self):
        w = np.exp(0.4j)
        with pytest.raises(PolePointError):
            phi(w, (2 * np.conj(w), np.conj(w) ** 2))


class TestMembership:
    def test_interior_point(self):
        assert membership((0.3 - 0.5, 0.3 * -0.5)).region() == "openG"

    def test_distinguished_corner(self):
        m = membership((2.0, 1.0))
        assert m.region() == "distinguishedBoundary"
        assert m.boundary and m.closed_gamma and not m.open_g

    def test_topological_but_not_distinguished(self):
        m = membership((1.0, 0.0))
        assert m.region() == "boundaryTopological"
        assert not m.distinguished_boundary

    def test_outside(self):
        assert membership((3.0, 0.2)).outside

    def test_random_symmetrized_points(self):
        rng = np.random.default_rng(1)
        for _ in range(1000):
            z = rng.uniform(0, 0.98) * np.exp(2j * np.pi * rng.uniform())
            w = rng.uniform(0, 0.98) * np.exp(2j * np.pi * rng.uniform())
            assert membership((z + w, z * w)).open_g
        for _ in range(200):
            z = np.exp(2j * np.pi * rng.uniform())
            w = rng.uniform(0, 0.9) * np.exp(2j * np.pi * rng.uniform())
            m = membership((z + w, z * w))
            assert m.boundary and not m.distinguished_boundary
            w = np.exp(2j * np.pi * rng.uniform())
            m = membership((z + w, z * w))
            assert m.distinguished_boundary

    def test_modulus_one_criterion(self):
        # |Phi_omega| = 1 exactly when omega aligns s - conj(s) p with 1 - |p|^2
        rng = np.random.default_rng(2)
        for _ in range(200):
            z = np.exp(2j * np.pi * rng.uniform())
            w = rng.uniform(0, 0.95) * np.exp(2j * np.pi * rng.uniform())
            s, p = z + w, z * w
            d = s - np.conj(s) * p
            if abs(d) < 1e-12:
                continue
            omega_star = (1 - abs(p) ** 2) / d
            assert abs(abs(phi(omega_star, (s, p))) - 1.0) < 1e-8
            omega_off = omega_star * np.exp(0.5j)
            assert abs(phi(omega_off, (s, p))) < 1.0 - 1e-6


class TestInnerVerification:
    def test_surprise_map(self):
        assert verify_gamma_inner(fam.surprise(0.5, 1.0)).ok

    def test_royal_square(self):
        h = GammaMap(RationalFn(Poly([0, 2])), RationalFn(Poly([0, 0, 1])))
        assert verify_gamma_inner(h).ok

    def test_oversized_s(self):
        h = GammaMap(RationalFn(Poly([0, 3])), RationalFn(Poly([0, 0, 1])))
        chk = verify_gamma_inner(h)
        assert not chk.ok and chk.max_s_modulus > 2.5

    def test_pole_mismatch_detected(self):
        # s with a pole that p lacks cannot be a valid map
        h = GammaMap(RationalFn(Poly([0, 1]), Poly([1, -0.5])),
                     RationalFn(Poly([0, 1])))
        assert not verify_gamma_inner(h).ok


class TestRoyalNodes:
    def test_h_nu_odd_roots_of_minus_one(self):
        for nu, r in ((1, 0.3), (1, 0.9), (2, 0.5)):
            rep = royal_nodes(fam.h_nu(nu, r))
            n = 2 * nu + 1
            assert not rep.is_royal_map and len(rep.nodes) == n
            for nd in rep.nodes:
                assert abs(nd.zeta ** n + 1.0) < 1e-8
                assert abs(abs(nd.zeta) - 1.0) < 1e-12
                # target omega satisfies h(zeta) = (2 conj(omega), conj(omega)^2)
                sv = complex(fam.h_nu(nu, r).s(nd.zeta))
                assert abs(sv - 2 * np.conj(nd.omega)) < 1e-8

    def test_h_j_roots_of_one(self):
        for j in (1, 2):
            rep = royal_nodes(fam.h_j(j))
            n = 2 * j + 1
            assert len(rep.nodes) == n
            for nd in rep.nodes:
                assert abs(nd.zeta ** n - 1.0) < 1e-8

    def test_royal_map_flag(self):
        rep = royal_nodes(fam.royal_lift(BlaschkeProduct(0.0, [0.0])))
        assert rep.is_royal_map

    def test_h_psi_nodes_solve_psi_equals_one(self):
        # circle royal nodes of (lam(1+psi), lam^2 psi) solve psi = 1
        for psi in (BlaschkeProduct(0.0, [0.3]),
                    BlaschkeProduct(0.4, [0.2, -0.3j])):
            h = fam.h_psi(psi)
            nodes = royal_nodes(h).nodes
            assert len(nodes) == psi.degree
            for nd in nodes:
                assert abs(psi(nd.zeta) - 1.0) < 1e-7


class TestStructure:
    def test_full(self):
        assert is_full(fam.h_nu(1, 0.5))
        assert not is_full(zero_s_map(3))
        assert not is_full(fam.flat_geodesic(0.5))

    def test_superficial(self):
        lam = RationalFn(Poly([0, 1]))
        h = GammaMap(lam + RationalFn(Poly([1.0])), lam)
        assert abs(is_superficial(h) - 1.0) < 1e-9
        assert is_superficial(fam.flat_geodesic(0.5)) is None
        assert is_superficial(GammaMap(RationalFn(Poly([0.0])), lam)) is None

    def test_superficial_random_omegas(self):
        rng = np.random.default_rng(3)
        for _ in range(10):
            om = np.exp(2j * np.pi * rng.uniform())
            p = BlaschkeProduct(rng.uniform(0, 2 * np.pi),
                                rng.uniform(0, 0.8, 2) * np.exp(2j * np.pi * rng.uniform(size=2)))
            h = fam.superficial_of(om, p)
            got = is_superficial(h)
            assert got is not None and abs(got - om) < 1e-8

    def test_symmetrization(self):
        pair = is_symmetrization(fam.royal_lift(BlaschkeProduct(0.0, [0.0])))
        assert pair is not None
        assert pair[0].degree == 1 and pair[1].degree == 1
        assert is_symmetrization(fam.flat_geodesic(0.3)) is None
        h = fam.symmetrize(BlaschkeProduct(0.0, [0.0]), BlaschkeProduct(0.0, [0.0, 0.0]))
        pair = is_symmetrization(h)
        assert pair is not None
        assert pair[0].degree == 1 and pair[1].degree == 2

    def test_symmetrization_random(self):
        rng = np.random.default_rng(5)
        for _ in range(10):
            f = BlaschkeProduct(rng.uniform(0, 2 * np.pi),
                                rng.uniform(0, 0.7, 1) * np.exp(2j * np.pi * rng.uniform(size=1)))
            g = BlaschkeProduct(rng.uniform(0, 2 * np.pi),
                                rng.uniform(0, 0.7, 2) * np.exp(2j * np.pi * rng.uniform(size=2)))
            pair = is_symmetrization(fam.symmetrize(f, g))
            assert pair is not None
            lam = 0.37 - 0.21j
            want = sorted((f(lam), g(lam)), key=lambda z: (z.real, z.imag))
            got = sorted((pair[0](lam), pair[1](lam)), key=lambda z: (z.real, z.imag))
            assert max(abs(a - b) for a, b in zip(got, want)) < 1e-6

    def test_structural_form_surprise(self):
        st = structural_form(fam.surprise(0.5, 0.5))
        assert st.ell == 1 and st.k == 1 and st.n == 1
        assert abs(st.c - 1.0) < 1e-10
        assert st.n_s.degree == 0 and abs(st.n_s.coeffs[0] - 0.5) < 1e-12
        assert st.symmetric

    def test_structural_form_royal_square(self):
        h = GammaMap(RationalFn(Poly([0, 2])), RationalFn(Poly([0, 0, 1])))
        st = structural_form(h)
        assert st.ell == 1 and st.k == 2 and st.n == 0
        assert 2 * st.ell <= st.n + st.k
        assert st.n_s.degree == 0 and abs(st.n_s.coeffs[0] - 2.0) < 1e-12

    def test_structural_form_zero_s(self):
        st = structural_form(zero_s_map(3))
        assert st.degenerate_zero_s and st.ell is None

    def test_structural_form_h_nu(self):
        for nu, r in ((1, 0.5), (2, 0.3)):
            st = structural_form(fam.h_nu(nu, r))
            assert st.k == 1 and st.n == 2 * nu + 1
            assert st.ell == nu + 1
            assert st.n_s.degree == 0
            assert abs(st.n_s.coeffs[0] - 2 * (1 - r)) < 1e-12
            assert st.symmetric and abs(st.c - 1.0) < 1e-12

    def test_structural_form_flags_broken_symmetry(self):
        # palindrome fails when the s-numerator is not reflection-symmetric
        h = GammaMap(RationalFn(Poly([0.0, 0.3, 0.5])),
                     RationalFn(Poly([0.0, 0.0, 1.0])))
        st = structural_form(h)
        assert not st.symmetric

    def test_poles_of_s_within_poles_of_p(self):
        for h in (fam.h_nu(1, 0.5), fam.h_nu(2, 0.3), fam.surprise(0.4, 0.3),
                  fam.h_psi(BlaschkeProduct(0.2, [0.3])),
                  fam.compose_inner(fam.surprise(0.5, 1.0), BlaschkeProduct(0.0, [0.2]))):
            ns, npol, d = h.common_denominator()   # construction is the check
            assert d.degree >= h.s.den.degree


class TestSemigroup:
    def test_product_closure(self):
        rng = np.random.default_rng(8)
        maps = [fam.h_nu(1, 0.5), fam.flat_geodesic(0.4),
                fam.surprise(0.3, 0.5),
                fam.royal_lift(BlaschkeProduct(0.1, [0.2]))]
        for _ in range(6):
            i, j = rng.integers(0, len(maps), 2)
            prod = fam.semigroup_product(maps[i], maps[j])
            assert verify_gamma_inner(prod).ok

    def test_magic_composition_is_blaschke(self):
        rng = np.random.default_rng(9)
        for h in (fam.h_nu(1, 0.5), fam.surprise(0.5, 1.0),
                  fam.h_psi(BlaschkeProduct(0.0, [0.0]))):
            ns, npol, d = h.common_denominator()
            for _ in range(5):
                om = np.exp(2j * np.pi * rng.uniform())
                num = 2.0 * om * npol - ns
                den = 2.0 * d - om * ns
                f, _ = reduce_rational(RationalFn(num, den))
                assert classify_inner(f) is not None


class TestDistances:
    def test_axis_pair(self):
        for p in (0.2, 0.5, 0.8):
            assert abs(caratheodory_distance((0, 0), (0, p)) - p) < 1e-9

    def test_coincident(self):
        assert caratheodory_distance((0.5, 0.1), (0.5, 0.1)) == 0.0

    def test_flat_geodesic_realizes_disc_distance(self):
        h = fam.flat_geodesic(0.3)
        d = caratheodory_distance(h.point(0.0), h.point(0.5))
        assert abs(d - 0.5) < 1e-9

    def test_outside_rejected(self):
        with pytest.raises(ValidationError):
            caratheodory_distance((3.0, 0.0), (0.0, 0.0))

    def test_symmetry_and_triangle(self):
        rng = np.random.default_rng(12)
        for _ in range(15):
            pts = []
            while len(pts) < 3:
                z = rng.uniform(0, 0.9) * np.exp(2j * np.pi * rng.uniform())
                w = rng.uniform(0, 0.9) * np.exp(2j * np.pi * rng.uniform())
                pts.append((z + w, z * w))
            a, b, c = pts
            dab = caratheodory_distance(a, b)
            dba = caratheodory_distance(b, a)
            dac = caratheodory_distance(a, c)
            dcb = caratheodory_distance(c, b)
            assert abs(dab - dba) < 1e-8
            assert dab <= dac + dcb + 1e-8

    def test_kobayashi_defect_flat(self):
        h = fam.flat_geodesic(0.5)
        assert abs(kobayashi_defect(h, 0.0, 0.4)) < 1e-6

    def test_kobayashi_defect_interior_pair(self):
        assert kobayashi_defect(zero_s_map(2), 0.2, 0.6) > 0.1

    def test_kobayashi_equal_nodes_rejected(self):
        with pytest.raises(ValidationError):
            kobayashi_defect(fam.flat_geodesic(0.5), 0.3, 0.3)

    def test_pseudohyperbolic(self):
        assert abs(pseudohyperbolic(0, 0.9) - 0.9) < 1e-15
        assert pseudohyperbolic(0.3 + 0.1j, 0.3 + 0.1j) == 0.0
