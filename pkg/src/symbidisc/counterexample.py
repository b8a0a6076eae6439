"""Constructive separation of consecutive pencil conditions.

The extremal family h_nu supplies data whose transformed scalar problem at
m = -lam^nu is extremally solvable (boundary of the solvable set), solved
uniquely by q = -lam^{nu+1}. Inflating the scalar targets radially pushes
them outside the solvable set; inverting the per-coordinate Mobius map
F_j(sigma) = Phi(m(lam_j), sigma, p_j) in closed form turns that into
perturbed interpolation data. Small inflation therefore violates the
degree-nu condition with an explicit negative pencil eigenvalue while the
degree-(nu-1) condition retains its strict margin; the inflation size is
bisected to the smallest certified violation.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from . import _kernels
from .cnu import (FAILS, GammaData, ViolationCertificate, check_cnu,
                  dense_constant_scan, pencil_matrix, x_norm)
from .config import DEFAULT
from .errors import SearchBudgetError, ValidationError
from .families import h_nu, sample_data
from .gamma import GammaPoint, membership
from .ratfun import BlaschkeProduct

_VIOLATION_BAR = 1e-6        # certified negative eigenvalue at acceptance
_SAFE_MARGIN_SCALE = 1e-9    # allowed pencil dip for the weaker condition
_EPS_MAX = 0.2
_BISECT_STEPS = 40


@dataclass(frozen=True)
class CounterexampleReport:
    nu: int
    r: float
    seed: int
    base: GammaData
    perturbed: GammaData
    eps: float
    m: BlaschkeProduct
    q: BlaschkeProduct
    violation: ViolationCertificate
    weaker_evidence: object            # ConstantScan for nu=1, CnuReport above
    evidence_grade: str
    trace: dict = field(default_factory=dict)


def _default_nodes(nu, seed):
    n = nu + 2
    offset = 2.0 * math.pi * (seed % 997) / (997.0 * n)
    return tuple(0.4 * np.exp(1j * (2.0 * math.pi * j / n + offset))
                 for j in range(n))


def _perturbed_s(p_arr, m_vals, q_vals, eps):
    w = (1.0 + eps) * q_vals
    return 2.0 * (m_vals * p_arr - w) / (1.0 - w * m_vals)


def _all_open(targets):
    return all(membership(t).open_g for t in targets)


def generate(nu, r, nodes=None, seed=0, cfg=None):
    """Produce data satisfying the degree-(nu-1) condition but not degree nu.

    The violation predicate is monotone along the inflation ray (the pencil
    at m decreases in the Loewner order), so bisection to the smallest
    certified inflation is rigorous. The weaker condition's evidence is a
    dense exhaustive angle scan for nu = 1, a budgeted search above.
    """
    if nu < 1 or not (0.0 < r < 1.0):
        raise ValidationError("need nu >= 1 and 0 < r < 1")
    cfg = cfg or DEFAULT
    h = h_nu(nu, r)
    user_nodes = nodes is not None
    attempt_seed = seed
    for _ in range(8):
        node_tuple = tuple(complex(z) for z in nodes) if user_nodes \
            else _default_nodes(nu, attempt_seed)
        if len(node_tuple) != nu + 2:
            raise ValidationError(f"need exactly {nu + 2} nodes")
        q_vals = np.array([-(z ** (nu + 1)) for z in node_tuple], dtype=complex)
        if np.min(np.abs(q_vals)) > 1e-3:
            break
        if user_nodes:
            raise ValidationError(
                "a node annihilates the extremal target; choose other nodes")
        attempt_seed += 1   # re-seed: rotate the default ring
    else:
        raise ValidationError("could not find nodes keeping targets nonzero")

    base = sample_data(h, node_tuple)
    m = BlaschkeProduct(math.pi, [0.0] * nu)
    q = BlaschkeProduct(math.pi, [0.0] * (nu + 1))
    lam_arr = np.asarray(node_tuple, dtype=complex)
    p_arr = np.array([t.p for t in base.targets], dtype=complex)
    m_vals = m(lam_arr)
    m_zeros = np.zeros(nu, dtype=complex)
    # internal consistency: the base transformed data is extremal at m
    xn = x_norm(m, base)
    if abs(xn - 1.0) > 1e-8:
        raise ValidationError(f"base data not extremal at m: ||X(m)|| = {xn}")

    def violation_at(eps):
        s_t = _perturbed_s(p_arr, m_vals, q_vals, eps)
        return float(_kernels.pencil_min_eig(math.pi, m_zeros, lam_arr, s_t, p_arr))

    viol_hi = violation_at(_EPS_MAX)
    if viol_hi > -_VIOLATION_BAR:
        raise SearchBudgetError("no certified violation within the inflation cap")
    lo, hi = 0.0, _EPS_MAX
    for _ in range(_BISECT_STEPS):
        mid = 0.5 * (lo + hi)
        if violation_at(mid) <= -_VIOLATION_BAR:
            hi = mid
        else:
            lo = mid
    eps = hi
    targets = tuple(GammaPoint(complex(sv), complex(pv)) for sv, pv in
                    zip(_perturbed_s(p_arr, m_vals, q_vals, eps), p_arr))
    if not _all_open(targets):
        raise SearchBudgetError("perturbed targets left the open domain")
    perturbed = GammaData(node_tuple, targets, require_open=True)

    mat = pencil_matrix(m, perturbed)
    eig, vec = _kernels.hermitian_min_pair(mat)
    cert = ViolationCertificate(upsilon=m, eigenvalue=float(eig),
                                eigenvector=tuple(complex(v) for v in vec))

    if nu == 1:
        scan = dense_constant_scan(perturbed, grid=4096)
        ok = scan.min_eigenvalue >= -_SAFE_MARGIN_SCALE * scan.scale
        grade = "exhaustive-1d-scan"
        weaker = scan
    else:
        weaker = check_cnu(perturbed, nu - 1, cfg)
        ok = weaker.status != FAILS and weaker.evaluations >= 2000
        grade = "budgeted-search"
    if not ok:
        raise SearchBudgetError(
            "weaker condition lost its margin at the certified inflation")

    trace = {"eps_max": _EPS_MAX, "bisect_steps": _BISECT_STEPS,
             "violation_bar": _VIOLATION_BAR, "x_norm_at_m_base": float(xn),
             "violation_at_eps_max": float(viol_hi)}
    return CounterexampleReport(nu=nu, r=float(r), seed=seed, base=base,
                                perturbed=perturbed, eps=float(eps), m=m, q=q,
                                violation=cert, weaker_evidence=weaker,
                                evidence_grade=grade, trace=trace)


def verify(report, cfg=None):
    """Independent recheck of a report: the certificate eigenvalue at m, a
    doubled-resolution sweep of the weaker condition, and domain membership.
    """
    cfg = cfg or DEFAULT
    try:
        mat = pencil_matrix(report.m, report.perturbed)
    except ValidationError:
        return False
    eig = float(_kernels.hermitian_eigvals(mat)[0])
    if eig > -_VIOLATION_BAR:
        return False
    if not _all_open(report.perturbed.targets):
        return False
    if report.nu == 1:
        scan = dense_constant_scan(report.perturbed, grid=8192)
        if scan.min_eigenvalue < -_SAFE_MARGIN_SCALE * scan.scale:
            return False
    else:
        rep = check_cnu(report.perturbed, report.nu - 1,
                        cfg.with_(seeds_high=2 * cfg.seeds_high))
        if rep.status == FAILS:
            return False
    return True
