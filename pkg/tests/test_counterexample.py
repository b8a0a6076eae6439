from dataclasses import replace

import numpy as np
import pytest

from symbidisc.cnu import FAILS, GammaData, check_cnu, pencil_matrix
from symbidisc.counterexample import generate, verify
from symbidisc.errors import ValidationError
from symbidisc.gamma import GammaPoint, membership
from symbidisc.jsonio import counterexample_from_json, counterexample_to_json, dumps
from symbidisc.pick import NPData, UNSOLVABLE, np_status
from symbidisc.ratfun import BlaschkeProduct


@pytest.fixture(scope="module")
def report_nu1():
    return generate(1, 0.5)


class TestGenerate:
    def test_certificate_strength(self, report_nu1):
        assert report_nu1.violation.eigenvalue <= -1e-6
        assert report_nu1.eps > 0

    def test_weaker_condition_margin(self, report_nu1):
        scan = report_nu1.weaker_evidence
        assert scan.grid >= 4096
        assert scan.min_eigenvalue >= -1e-9 * scan.scale

    def test_targets_in_open_domain(self, report_nu1):
        assert all(membership(t).open_g for t in report_nu1.perturbed.targets)

    def test_full_search_detects_failure(self, report_nu1):
        rep = check_cnu(report_nu1.perturbed, 1)
        assert rep.status == FAILS

    def test_monotone_in_inflation(self, report_nu1):
        base, pert = report_nu1.base, report_nu1.perturbed
        m = report_nu1.m
        v1 = float(np.linalg.eigvalsh(pencil_matrix(m, pert))[0])
        # doubling the inflation strictly worsens the violation
        q = np.array([-(z ** 2) for z in base.nodes])
        p = np.array([t.p for t in base.targets])
        mv = np.array([m(z) for z in base.nodes])
        w = (1 + 2 * report_nu1.eps) * q
        s2 = 2.0 * (mv * p - w) / (1 - w * mv)
        targets = tuple(GammaPoint(a, b) for a, b in zip(s2, p))
        data2 = GammaData(base.nodes, targets, require_open=False)
        v2 = float(np.linalg.eigvalsh(pencil_matrix(m, data2))[0])
        assert v2 < v1 <= -1e-6

    def test_determinism(self, report_nu1):
        again = generate(1, 0.5)
        assert dumps(counterexample_to_json(again)) == \
            dumps(counterexample_to_json(report_nu1))

    def test_seed_changes_nodes(self, report_nu1):
        other = generate(1, 0.5, seed=3)
        assert other.base.nodes != report_nu1.base.nodes

    def test_annihilating_user_node_rejected(self):
        with pytest.raises(ValidationError):
            generate(1, 0.5, nodes=(0.0, 0.3, -0.3))

    def test_radial_inflation_invariant(self, report_nu1):
        # scalar reduction of the base data is extremal; inflating by 1e-4
        # already makes it unsolvable
        base = report_nu1.base
        q = np.array([-(z ** 2) for z in base.nodes])
        data = NPData(base.nodes, tuple((1 + 1e-4) * w for w in q))
        assert np_status(data).kind == UNSOLVABLE


class TestGenerateNu2:
    def test_structure(self):
        rep = generate(2, 0.5)
        assert rep.perturbed.n == 4
        assert rep.violation.eigenvalue <= -1e-6
        assert rep.weaker_evidence.status != FAILS
        assert rep.weaker_evidence.evaluations >= 2000
        assert verify(rep)


class TestVerify:
    def test_roundtrip(self, report_nu1):
        assert verify(report_nu1)

    def test_json_roundtrip_verifies(self, report_nu1):
        payload = counterexample_to_json(report_nu1)
        again = counterexample_from_json(payload)
        assert verify(again)

    def test_weaker_witness_rejected(self, report_nu1):
        tampered = replace(report_nu1, m=BlaschkeProduct.constant(-1.0))
        assert not verify(tampered)

    def test_boundary_target_rejected(self, report_nu1):
        targets = list(report_nu1.perturbed.targets)
        targets[0] = GammaPoint(2.0, 1.0)
        bad = GammaData(report_nu1.perturbed.nodes, tuple(targets),
                        require_open=False)
        assert not verify(replace(report_nu1, perturbed=bad))
