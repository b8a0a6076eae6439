import numpy as np
import pytest

from symbidisc import _kernels, families as fam
from symbidisc.cnu import (FAILS, HOLDS_EXTREMAL, HOLDS_STRICT, INCONCLUSIVE,
                           GammaData, auxiliary_extremal, check_cnu,
                           dense_constant_scan, flat_case_decision,
                           pencil_matrix, transformed_np_data, x_norm)
from symbidisc.config import RunConfig
from symbidisc.errors import NotExtremalError, PolePointError, ValidationError
from symbidisc.gamma import GammaPoint, phi
from symbidisc.pick import pick_matrix
from symbidisc.ratfun import BlaschkeProduct

NODES3 = (0.2, -0.3 + 0.25j, 0.45j)


def random_open_data(rng, n=None):
    n = n if n is not None else int(rng.integers(1, 5))
    while True:
        nodes = rng.uniform(0.05, 0.8, n) * np.exp(2j * np.pi * rng.uniform(size=n))
        if n == 1 or min(abs(nodes[i] - nodes[j])
                         for i in range(n) for j in range(i + 1, n)) > 1e-2:
            break
    z = rng.uniform(0, 0.95, n) * np.exp(2j * np.pi * rng.uniform(size=n))
    w = rng.uniform(0, 0.95, n) * np.exp(2j * np.pi * rng.uniform(size=n))
    targets = tuple(GammaPoint(a + b, a * b) for a, b in zip(z, w))
    return GammaData(tuple(nodes), targets)


def random_blaschke(rng, max_degree=2):
    deg = int(rng.integers(0, max_degree + 1))
    zeros = rng.uniform(0, 0.9, deg) * np.exp(2j * np.pi * rng.uniform(size=deg))
    return BlaschkeProduct(rng.uniform(0, 2 * np.pi), zeros)


class TestPencil:
    def test_constant_zero_reduces_to_half_s_pick(self):
        rng = np.random.default_rng(1)
        data = random_open_data(rng, 3)
        ups = BlaschkeProduct(0.0, ())
        # at v = 0 the transformed targets are -s/2
        got = _kernels.pencil_matrix_values(np.zeros(3, dtype=complex),
                                            np.asarray(data.nodes),
                                            np.array([t.s for t in data.targets]),
                                            np.array([t.p for t in data.targets]))
        from symbidisc.pick import NPData
        want = pick_matrix(NPData(data.nodes,
                                  tuple(-t.s / 2 for t in data.targets)))
        assert np.max(np.abs(got - want)) < 1e-12

    def test_single_interior_node_positive(self):
        rng = np.random.default_rng(2)
        for _ in range(20):
            data = random_open_data(rng, 1)
            ups = random_blaschke(rng)
            mat = pencil_matrix(ups, data)
            assert mat.shape == (1, 1) and mat[0, 0].real > 0

    def test_h1_data_singular_at_minus_lam(self):
        data = fam.sample_data(fam.h_nu(1, 0.5), NODES3)
        mat = pencil_matrix(BlaschkeProduct(np.pi, [0.0]), data)
        eigs = np.linalg.eigvalsh(mat)
        assert abs(eigs[0]) < 1e-10 and eigs[1] > 1e-3

    def test_congruence_identity(self):
        rng = np.random.default_rng(3)
        for _ in range(30):
            data = random_open_data(rng)
            ups = random_blaschke(rng)
            mat = pencil_matrix(ups, data)
            uv = np.array([ups(z) for z in data.nodes])
            s = np.array([t.s for t in data.targets])
            dd = np.diag(2.0 - uv * s)
            want = 0.25 * dd @ pick_matrix(transformed_np_data(data, ups)) @ dd.conj().T
            assert np.max(np.abs(mat - want)) < 1e-10

    def test_pole_point_rejected(self):
        data = GammaData((0.1,), (GammaPoint(2.0, 1.0),), require_open=False)
        with pytest.raises(PolePointError):
            pencil_matrix(BlaschkeProduct(0.0, ()), data)
        with pytest.raises(PolePointError):
            x_norm(BlaschkeProduct(0.0, ()), data)


class TestXNorm:
    def test_single_node_is_phi_modulus(self):
        rng = np.random.default_rng(4)
        for _ in range(20):
            data = random_open_data(rng, 1)
            ups = random_blaschke(rng)
            want = abs(phi(ups(data.nodes[0]), data.targets[0]))
            assert abs(x_norm(ups, data) - want) < 1e-12

    def test_h1_extremal_value(self):
        data = fam.sample_data(fam.h_nu(1, 0.5), NODES3)
        assert abs(x_norm(BlaschkeProduct(np.pi, [0.0]), data) - 1.0) < 1e-8

    def test_schwarz_pick_violation(self):
        # Phi(0, .) sends (-0.8, 0) to 0.4, too far from 0 for nodes 0, 0.1
        data = GammaData((0.0, 0.1),
                         (GammaPoint(0.0, 0.0), GammaPoint(-0.8, 0.0)))
        assert x_norm(BlaschkeProduct(0.0, ()), data) > 1.0 + 1e-3

    def test_oracle_equivalence(self):
        rng = np.random.default_rng(5)
        for _ in range(150):
            data = random_open_data(rng)
            ups = random_blaschke(rng)
            mat = pencil_matrix(ups, data)
            mn = float(np.linalg.eigvalsh(mat)[0])
            xn = x_norm(ups, data)
            if mn > 1e-7:
                assert xn < 1.0 + 1e-7
            elif mn < -1e-7:
                assert xn > 1.0 - 1e-7


class TestCheckCnu:
    def test_family_data_never_fails(self):
        # data sampled from an actual map into the domain satisfies every
        # degree of the condition; the search must never report a failure
        rng = np.random.default_rng(6)
        maps = [fam.h_nu(1, 0.5), fam.flat_geodesic(0.4),
                fam.surprise(0.5, 1.0),
                fam.symmetrize(BlaschkeProduct(0.2, [0.1]),
                               BlaschkeProduct(0.0, [0.4])),
                fam.royal_lift(BlaschkeProduct(0.0, [0.3]))]
        for hi, h in enumerate(maps):
            for _ in range(4):
                n = int(rng.integers(2, 5))
                nodes = rng.uniform(0.1, 0.7, n) * np.exp(2j * np.pi * rng.uniform(size=n))
                if min(abs(nodes[i] - nodes[j]) for i in range(n)
                       for j in range(i + 1, n)) < 5e-2:
                    continue
                data = fam.sample_data(h, tuple(nodes))
                degrees = (0, 1, 2) if hi < 2 else (0, 1)
                for nu in degrees:
                    rep = check_cnu(data, nu)
                    assert rep.status != FAILS, (h, nu, rep.sup_norm)

    def test_h1_extremal_with_witness(self):
        data = fam.sample_data(fam.h_nu(1, 0.5), NODES3)
        rep = check_cnu(data, 1)
        assert rep.status == HOLDS_EXTREMAL
        assert abs(rep.sup_norm - 1.0) < 1e-6
        m = rep.witness_m
        assert m.degree == 1 and abs(m(0.3) + 0.3) < 1e-5
        q = rep.witness_q
        assert q is not None and q.degree == 2
        for lam, t in zip(data.nodes, data.targets):
            assert abs(phi(m(lam), t) - q(lam)) < 1e-8

    def test_h1_constants_strictly_below(self):
        data = fam.sample_data(fam.h_nu(1, 0.5), NODES3)
        rep = check_cnu(data, 0)
        assert rep.status == HOLDS_STRICT
        assert rep.sup_norm < 0.99

    def test_failing_data_certificate(self):
        data = GammaData((0.0, 0.1),
                         (GammaPoint(0.0, 0.0), GammaPoint(0.0, 0.9)))
        rep = check_cnu(data, 0)
        assert rep.status == FAILS
        cert = rep.violation
        assert cert is not None and cert.eigenvalue < -1e-6
        mat = pencil_matrix(cert.upsilon, data)
        vec = np.array(cert.eigenvector)
        # certificate is a genuine negative direction of the pencil
        quad = float(np.real(vec.conj() @ mat @ vec))
        assert quad < -1e-8

    def test_sup_norm_monotone_in_nu(self):
        rng = np.random.default_rng(7)
        data = random_open_data(rng, 3)
        sups = [check_cnu(data, nu).sup_norm for nu in (0, 1, 2)]
        assert sups[0] <= sups[1] + 1e-12 and sups[1] <= sups[2] + 1e-12

    def test_budget_exhaustion_is_inconclusive(self):
        data = fam.sample_data(fam.h_nu(1, 0.5), NODES3)
        rep = check_cnu(data, 1, RunConfig(max_evaluations=50))
        assert rep.status == INCONCLUSIVE

    def test_deterministic_reports(self):
        from symbidisc.jsonio import cnu_report_to_json, dumps
        data = fam.sample_data(fam.surprise(0.5, 1.0), NODES3)
        a = dumps(cnu_report_to_json(check_cnu(data, 1), verbose=True))
        b = dumps(cnu_report_to_json(check_cnu(data, 1), verbose=True))
        assert a == b


class TestAuxiliaryExtremal:
    def test_royal_scaled_constants(self):
        h = fam.scale_s(fam.royal_lift(BlaschkeProduct(0.0, [0.0])), 0.5)
        data = fam.sample_data(h, NODES3)
        for k in range(5):
            m = BlaschkeProduct.constant(np.exp(2j * np.pi * k / 5))
            _, q = auxiliary_extremal(data, 0, m)
            assert q.degree == 2

    def test_flat_all_degree_one(self):
        data = fam.sample_data(fam.flat_geodesic(0.5), NODES3)
        rng = np.random.default_rng(8)
        for _ in range(5):
            m = random_blaschke(rng, 1)
            _, q = auxiliary_extremal(data, 1, m)
            assert q.degree == m.degree + 1

    def test_h1_witness_pair(self):
        data = fam.sample_data(fam.h_nu(1, 0.5), NODES3)
        m = BlaschkeProduct(np.pi, [0.0])
        _, q = auxiliary_extremal(data, 1, m)
        for z in (0.3, -0.2 + 0.4j):
            assert abs(q(z) + z * z) < 1e-9

    def test_requires_norm_one(self):
        data = fam.sample_data(fam.h_nu(1, 0.5), NODES3)
        with pytest.raises(NotExtremalError):
            auxiliary_extremal(data, 0, BlaschkeProduct.constant(1.0))

    def test_degree_cap(self):
        data = fam.sample_data(fam.h_nu(1, 0.5), NODES3)
        with pytest.raises(ValidationError):
            auxiliary_extremal(data, 0, BlaschkeProduct(np.pi, [0.0]))


class TestFlatCase:
    def test_flat_geodesic_certified(self):
        data = fam.sample_data(fam.flat_geodesic(0.3), (0.0, 0.5))
        cert = flat_case_decision(data)
        assert cert is not None
        assert cert.p_status_kind == "extremallySolvable"

    def test_strict_p_problem_absent(self):
        data = GammaData((0.0, 0.5),
                         (GammaPoint(0.0, 0.0), GammaPoint(0.1, 0.1)))
        assert flat_case_decision(data) is None

    def test_failing_screen_absent(self):
        data = GammaData((0.0, 0.1),
                         (GammaPoint(0.0, 0.0), GammaPoint(0.0, 0.9)))
        assert flat_case_decision(data) is None
        assert check_cnu(data, 0).status == FAILS


class TestDenseScan:
    def test_matches_degree_zero_search(self):
        data = fam.sample_data(fam.h_nu(1, 0.5), NODES3)
        scan = dense_constant_scan(data, grid=1024)
        rep = check_cnu(data, 0)
        assert abs(scan.max_xnorm - rep.sup_norm) < 1e-6
        assert scan.min_eigenvalue > 0
