import numpy as np

from symbidisc import families as fam
from symbidisc.eclass import (cancellation_points, classify, degree_bound_check,
                              in_Enuk, phi_compose)
from symbidisc.gamma import GammaMap, royal_nodes
from symbidisc.ratfun import BlaschkeProduct, Poly, RationalFn, poly_allclose

H1 = fam.h_nu(1, 0.5)
MINUS_LAM = BlaschkeProduct(np.pi, [0.0])
CONST_ONE = BlaschkeProduct.constant(1.0)


def zero_s_map(d):
    return GammaMap(RationalFn(Poly([0.0])), RationalFn(Poly([0.0] * d + [1.0])))


class TestPhiCompose:
    def test_minus_lam_on_h1(self):
        f, count = phi_compose(MINUS_LAM, H1)
        assert count == 3
        assert poly_allclose(f.num, Poly([0, 0, -1]), 1e-12)
        assert poly_allclose(f.den, Poly([1]), 1e-12)

    def test_identity_on_hj1(self):
        f, count = phi_compose(BlaschkeProduct(0.0, [0.0]), fam.h_j(1))
        assert count == 3 and f.degree == 5
        for z in (0.4, -0.3j):
            want = -z ** 2 * (2 * z ** 3 + 1) / (z ** 3 + 2)
            assert abs(f(z) - want) < 1e-10

    def test_constant_one_on_h1(self):
        f, count = phi_compose(CONST_ONE, H1)
        assert count == 1 and f.degree == 3

    def test_degree_formula_random(self):
        rng = np.random.default_rng(13)
        maps = [H1, fam.h_j(1), fam.surprise(0.5, 1.0), fam.flat_geodesic(0.4)]
        for h in maps:
            dp = max(h.p.num.degree, h.p.den.degree)
            for _ in range(4):
                deg = int(rng.integers(0, 2))
                zeros = rng.uniform(0, 0.8, deg) * np.exp(2j * np.pi * rng.uniform(size=deg))
                ups = BlaschkeProduct(rng.uniform(0, 2 * np.pi), zeros)
                f, count = phi_compose(ups, h)
                assert f.degree == ups.degree + dp - count


class TestCancellationPoints:
    def test_not_full_empty(self):
        assert cancellation_points(MINUS_LAM, zero_s_map(3)) == []
        assert cancellation_points(CONST_ONE, fam.flat_geodesic(0.5)) == []

    def test_minus_lam_all_satisfied(self):
        recs = cancellation_points(MINUS_LAM, H1)
        assert len(recs) == 3 and all(r.satisfied for r in recs)

    def test_constant_one_only_at_minus_one(self):
        recs = cancellation_points(CONST_ONE, H1)
        sat = [r for r in recs if r.satisfied]
        assert len(sat) == 1 and abs(sat[0].node.zeta + 1.0) < 1e-8

    def test_count_matches_reduction(self):
        rng = np.random.default_rng(19)
        maps = [H1, fam.h_nu(2, 0.3), fam.h_j(1),
                fam.h_psi(BlaschkeProduct(0.0, [0.0, 0.0]))]
        checked = 0
        for h in maps:
            for _ in range(6):
                deg = int(rng.integers(0, 2))
                zeros = rng.uniform(0, 0.8, deg) * np.exp(2j * np.pi * rng.uniform(size=deg))
                ups = BlaschkeProduct(rng.uniform(0, 2 * np.pi), zeros)
                _, count = phi_compose(ups, h)
                sat = sum(r.satisfied for r in cancellation_points(ups, h))
                assert count == sat
                checked += 1
        assert checked >= 20

    def test_single_cancellation_order(self):
        # after cancelling, the reduced numerator must not vanish again at
        # the royal node (cancellations are simple)
        f, _ = phi_compose(MINUS_LAM, H1)
        for nd in royal_nodes(H1).nodes:
            assert abs(f.num(nd.zeta)) > 1e-3


class TestMembership:
    def test_zero_p_pattern(self):
        for d in (1, 2, 3, 4):
            h = zero_s_map(d)
            for nu in (0, 1, 2):
                inside = in_Enuk(h, nu, d + 1)
                outside = in_Enuk(h, nu, d)
                assert inside.in_class and inside.exact
                assert not outside.in_class and outside.exact

    def test_h_nu_separation(self):
        for nu in (1, 2):
            h = fam.h_nu(nu, 0.5)
            a = in_Enuk(h, nu, nu + 2)
            b = in_Enuk(h, nu - 1, nu + 2)
            assert a.in_class and a.exact and a.witness_m.degree == nu
            assert not b.in_class and b.exact

    def test_h_psi_cubed(self):
        h = fam.h_psi(BlaschkeProduct(0.0, [0.0] * 3))
        assert in_Enuk(h, 1, 5).in_class
        cell = in_Enuk(h, 1, 4)
        assert not cell.in_class and cell.exact

    def test_h_j(self):
        for j in (1, 2):
            h = fam.h_j(j)
            a = in_Enuk(h, 1, 2 * j + 4)
            b = in_Enuk(h, 0, 2 * j + 4)
            assert a.in_class and a.exact
            assert not b.in_class and b.exact

    def test_composed_separating_family(self):
        # conjugating by a disc automorphism transports witnesses: the
        # degree-2 witness for the composed map is no longer a power
        # product, so this exercises the boundary-interpolation seeding
        a = 0.35 - 0.2j
        h = fam.compose_inner(fam.h_nu(2, 0.5), BlaschkeProduct(0.0, [a]))
        assert len(royal_nodes(h).nodes) == 5
        cell = in_Enuk(h, 2, 4)
        assert cell.in_class and cell.exact
        assert cell.witness_m.degree == 2 and cell.q.degree == 3
        qwant = BlaschkeProduct(np.pi, [a, a, a])
        assert max(abs(cell.q(z) - qwant(z)) for z in (0.3, -0.2 + 0.4j)) < 1e-6
        excl = in_Enuk(h, 1, 4)
        assert not excl.in_class and excl.exact

    def test_royal_map_special_case(self):
        f = BlaschkeProduct(0.0, [0.3, -0.4])
        h = fam.royal_lift(f)
        assert not in_Enuk(h, 1, 2).in_class
        cell = in_Enuk(h, 0, 3)
        assert cell.in_class and cell.exact
        # the auxiliary solution is -f regardless of witness
        assert abs(cell.q(0.5) + f(0.5)) < 1e-9

    def test_monotone_table(self):
        rep = classify(H1, nu_max=2, k_max=5)
        for (nu, k), cell in rep.cells.items():
            if cell.in_class:
                if (nu + 1, k) in rep.cells:
                    assert rep.cells[(nu + 1, k)].in_class
                if (nu, k + 1) in rep.cells:
                    assert rep.cells[(nu, k + 1)].in_class

    def test_witnessed_cells_verify(self):
        rep = classify(fam.h_j(1), nu_max=1, k_max=8)
        for cell in rep.cells.values():
            if cell.in_class:
                assert cell.witness_m is not None
                f, _ = phi_compose(cell.witness_m, fam.h_j(1))
                assert f.degree <= cell.k - 1


class TestClassify:
    def test_flat_geodesic(self):
        rep = classify(fam.flat_geodesic(0.5), nu_max=1, k_max=3)
        assert rep.superficial is None
        assert rep.geodesic
        assert any(c.k == 2 for c in rep.k_extremal)
        assert not rep.inconsistencies

    def test_superficial_in_every_cell(self):
        h = fam.superficial_of(1.0, BlaschkeProduct(0.0, [0.0]))
        rep = classify(h, nu_max=1, k_max=3)
        assert abs(rep.superficial - 1.0) < 1e-8
        assert all(c.in_class for c in rep.cells.values())
        assert not rep.k_extremal      # certificates only for non-boundary maps
        assert not rep.inconsistencies

    def test_royal_geodesic(self):
        h = fam.royal_lift(BlaschkeProduct(0.0, [0.3]))
        rep = classify(h, nu_max=1, k_max=3)
        assert rep.geodesic and rep.superficial is None
        assert not rep.inconsistencies

    def test_column_theorems_across_families(self):
        maps = [H1, fam.flat_geodesic(0.3), fam.surprise(0.5, 0.5),
                fam.royal_lift(BlaschkeProduct(0.1, [0.2])),
                fam.symmetrize(BlaschkeProduct(0.0, [0.1]),
                               BlaschkeProduct(0.0, [0.5])),
                zero_s_map(2)]
        for h in maps:
            rep = classify(h, nu_max=1, k_max=3)
            assert not rep.inconsistencies
            for nu in (0, 1):
                if rep.cells[(nu, 1)].in_class:
                    assert rep.superficial is not None
                if rep.cells[(nu, 2)].in_class:
                    assert rep.superficial is not None or rep.geodesic


class TestDegreeBound:
    def test_h1_sharp(self):
        assert max(H1.p.num.degree, H1.p.den.degree) == 4
        assert degree_bound_check(H1, 3)

    def test_zero_p(self):
        assert degree_bound_check(zero_s_map(2), 3)

    def test_geodesics(self):
        assert degree_bound_check(fam.flat_geodesic(0.5), 2)
        assert degree_bound_check(fam.royal_lift(BlaschkeProduct(0.0, [0.3])), 2)
