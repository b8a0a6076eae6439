"""The pencil conditions: screening interpolation data over Blaschke classes.

For data lam_j -> (s_j, p_j) and a Blaschke product v, the transformed
scalar data lam_j -> Phi(v(lam_j), (s_j, p_j)) must be classically solvable
whenever the original data is solvable in the domain. Condition ``C_nu``
requires this for every v of degree at most nu; it is checked here by
maximizing the norm of the diagonal kernel operator X(v) over the
(2*nu+1)-real-parameter family, with a coarse grid followed by
derivative-free refinement.

A reported failure is a certificate (explicit negative pencil eigenvalue
with its eigenvector); a reported "holds" is banded numerical evidence,
exhaustive only for the one-dimensional degree-0 scan.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Optional

import numpy as np
from scipy.optimize import minimize
from scipy.stats import qmc

from . import _kernels
from .config import DEFAULT
from .errors import NotExtremalError, PolePointError, SearchBudgetError, ValidationError
from .gamma import GammaPoint, membership, phi
from .pick import EXTREMAL, NPData, np_status, solve_extremal
from .ratfun import BlaschkeProduct

_ZERO_CLAMP = 1.0 - 1e-9

HOLDS_STRICT = "holdsStrictly"
HOLDS_EXTREMAL = "holdsExtremally"
FAILS = "fails"
INCONCLUSIVE = "inconclusive"


@dataclass(frozen=True)
class GammaData:
    """Interpolation data: distinct disc nodes with (s, p) targets."""
    nodes: tuple
    targets: tuple
    require_open: bool = True

    def __post_init__(self):
        nodes = tuple(complex(z) for z in self.nodes)
        targets = tuple(t if isinstance(t, GammaPoint) else GammaPoint(*t)
                        for t in self.targets)
        if len(nodes) != len(targets) or not nodes:
            raise ValidationError("need equally many nodes and targets")
        if max(abs(z) for z in nodes) >= 1.0:
            raise ValidationError("nodes must lie in the open disc")
        for i in range(len(nodes)):
            for j in range(i + 1, len(nodes)):
                if abs(nodes[i] - nodes[j]) <= 1e-10:
                    raise ValidationError("coincident nodes")
        for t in targets:
            m = membership(t)
            if self.require_open and not m.open_g:
                raise ValidationError(f"target {t} not in the open domain")
            if not m.closed_gamma:
                raise ValidationError(f"target {t} outside the closed domain")
        object.__setattr__(self, "nodes", nodes)
        object.__setattr__(self, "targets", targets)

    @property
    def n(self):
        return len(self.nodes)


class _Workspace:
    """Per-data precomputation shared by all search evaluations."""

    def __init__(self, data):
        self.data = data
        self.lam = np.asarray(data.nodes, dtype=complex)
        self.s = np.array([t.s for t in data.targets], dtype=complex)
        self.p = np.array([t.p for t in data.targets], dtype=complex)
        gram = 1.0 / (1.0 - np.outer(self.lam, np.conj(self.lam)))
        chol = np.linalg.cholesky(gram)
        self.lh = np.ascontiguousarray(chol.conj().T)
        self.linvh = np.ascontiguousarray(np.linalg.inv(self.lh))
        # with open targets |v*s| < 2 always, so Phi has no pole to dodge
        self.pole_safe = bool(np.max(np.abs(self.s)) < 2.0 - 1e-9)

    def xnorm(self, phase, zeros):
        if not self.pole_safe:
            u = _kernels.blaschke_values(phase, np.asarray(zeros, dtype=complex),
                                         self.lam)
            if np.min(np.abs(2.0 - u * self.s)) < 1e-9:
                return -math.inf
        return _kernels.xnorm_eval(phase, np.asarray(zeros, dtype=complex),
                                   self.lam, self.s, self.p, self.lh, self.linvh)

    def pencil_min(self, phase, zeros):
        return _kernels.pencil_min_eig(phase, np.asarray(zeros, dtype=complex),
                                       self.lam, self.s, self.p)

    def pencil(self, upsilon):
        u = upsilon(self.lam)
        return _kernels.pencil_matrix_values(np.asarray(u, dtype=complex),
                                             self.lam, self.s, self.p)


def _check_poles(upsilon, data):
    for lam, t in zip(data.nodes, data.targets):
        if abs(2.0 - upsilon(lam) * t.s) < 1e-12:
            raise PolePointError(f"pencil pole: v({lam}) * s = 2")


def pencil_matrix(upsilon, data):
    """The n x n Hermitian pencil matrix at one Blaschke product.

    Congruent (by diag(2 - v(lam_i) s_i) / 2) to the Pick matrix of the
    transformed scalar data, so positivity decides their solvability.
    """
    _check_poles(upsilon, data)
    return _Workspace(data).pencil(upsilon)


def x_norm(upsilon, data):
    """Operator norm of X(v): largest generalized singular value of the
    diagonal of transformed target values against the node Gram matrix."""
    _check_poles(upsilon, data)
    ws = _Workspace(data)
    return ws.xnorm(upsilon.phase, np.asarray(upsilon.zeros, dtype=complex))


@dataclass(frozen=True)
class ViolationCertificate:
    upsilon: BlaschkeProduct
    eigenvalue: float
    eigenvector: tuple


@dataclass(frozen=True)
class CnuReport:
    nu: int
    status: str
    sup_norm: float
    witness_m: Optional[BlaschkeProduct] = None
    witness_q: Optional[BlaschkeProduct] = None
    violation: Optional[ViolationCertificate] = None
    evaluations: int = 0
    evidence_grade: str = "budgeted-search"
    search_log: dict = field(default_factory=dict)


def _params_to_blaschke(params):
    phase = float(params[0]) % (2.0 * math.pi)
    zeros = []
    for k in range(1, len(params), 2):
        z = complex(params[k], params[k + 1])
        r = abs(z)
        if r >= _ZERO_CLAMP:
            z *= _ZERO_CLAMP / r
        zeros.append(z)
    return phase, np.asarray(zeros, dtype=complex)


class _Search:
    def __init__(self, ws, cfg):
        self.ws = ws
        self.cfg = cfg
        self.evaluations = 0
        self.best_val = -math.inf
        self.best_params = None

    def _value(self, params):
        self.evaluations += 1
        phase, zeros = _params_to_blaschke(params)
        return self.ws.xnorm(phase, zeros)

    def _consider(self, params, val):
        if val > self.best_val:
            self.best_val = val
            self.best_params = np.asarray(params, dtype=float).copy()

    def _bulk(self, param_list):
        if self.cfg.threads > 1 and len(param_list) > 64:
            chunk = max(16, len(param_list) // (4 * self.cfg.threads))
            blocks = [param_list[i:i + chunk] for i in range(0, len(param_list), chunk)]
            with ThreadPoolExecutor(max_workers=self.cfg.threads) as pool:
                results = list(pool.map(lambda blk: [self._eval_only(p) for p in blk],
                                        blocks))
            vals = [v for blk in results for v in blk]
            self.evaluations += len(param_list)
        else:
            vals = [self._value(p) for p in param_list]
        for p, v in zip(param_list, vals):
            self._consider(p, v)
        return vals

    def _eval_only(self, params):
        phase, zeros = _params_to_blaschke(params)
        return self.ws.xnorm(phase, zeros)

    def _budget_ok(self):
        return not self.cfg.max_evaluations or self.evaluations < self.cfg.max_evaluations

    def seed_degree(self, d):
        cfg = self.cfg
        if d == 0:
            n = cfg.grid0 if cfg.grid0 else 1024
            thetas = np.linspace(0.0, 2.0 * math.pi, n, endpoint=False)
            vals = self._bulk([[t] for t in thetas])
            k = int(np.argmax(vals))
            self._golden_angle(thetas[k], 2.0 * math.pi / n)
            return []
        if d == 1:
            params = []
            grid = np.linspace(-0.95, 0.95, cfg.grid1_disc)
            thetas = np.linspace(0.0, 2.0 * math.pi, cfg.grid1_angles, endpoint=False)
            for t in thetas:
                for x in grid:
                    for y in grid:
                        if x * x + y * y < 0.95:
                            params.append([t, x, y])
            vals = self._bulk(params)
            order = np.argsort(vals)[::-1]
            return [params[i] for i in order[: cfg.refine1]]
        sob = qmc.Sobol(d=2 * d + 1, scramble=True, seed=cfg.seed + d)
        raw = sob.random(cfg.seeds_high)
        params = []
        for row in raw:
            p = [row[0] * 2.0 * math.pi]
            for k in range(d):
                r = math.sqrt(row[1 + 2 * k]) * 0.97
                ang = row[2 + 2 * k] * 2.0 * math.pi
                p.extend([r * math.cos(ang), r * math.sin(ang)])
            params.append(p)
        vals = self._bulk(params)
        order = np.argsort(vals)[::-1]
        return [params[i] for i in order[: cfg.refine_high]]

    def _golden_angle(self, center, width):
        inv = (math.sqrt(5.0) - 1.0) / 2.0
        lo, hi = center - width, center + width
        x1 = hi - inv * (hi - lo)
        x2 = lo + inv * (hi - lo)
        f1, f2 = self._value([x1]), self._value([x2])
        self._consider([x1], f1)
        self._consider([x2], f2)
        while hi - lo > self.cfg.angle_tol and self._budget_ok():
            if f1 < f2:
                lo, x1, f1 = x1, x2, f2
                x2 = lo + inv * (hi - lo)
                f2 = self._value([x2])
                self._consider([x2], f2)
            else:
                hi, x2, f2 = x2, x1, f1
                x1 = hi - inv * (hi - lo)
                f1 = self._value([x1])
                self._consider([x1], f1)

    def refine(self, start):
        res = minimize(lambda v: -self._value(v), np.asarray(start, dtype=float),
                       method="Nelder-Mead",
                       options={"maxiter": self.cfg.max_refine_iter,
                                "xatol": 1e-10, "fatol": 1e-13})
        self._consider(res.x, -res.fun)

    def run(self, nu):
        for d in range(nu + 1):
            if not self._budget_ok():
                raise SearchBudgetError("seeding budget exhausted")
            starts = self.seed_degree(d)
            for st in starts:
                if not self._budget_ok():
                    raise SearchBudgetError("refinement budget exhausted")
                self.refine(st)
        return self.best_val, self.best_params


def check_cnu(data, nu, cfg=None):
    """Decide condition C_nu on the data by semi-infinite maximization.

    Returns a report whose ``fails`` status carries a rigorous certificate
    (negative pencil eigenvalue and eigenvector at an explicit parameter);
    ``holdsStrictly``/``holdsExtremally`` are claims within the configured
    tolerance band. On an extremal report the auxiliary pair (m, q) is
    attached when the scalar reduction is solvable.
    """
    cfg = cfg or DEFAULT
    ws = _Workspace(data)
    search = _Search(ws, cfg)
    log = {"nu": nu, "config": cfg.to_dict()}
    try:
        sup, params = search.run(nu)
    except SearchBudgetError as exc:
        return CnuReport(nu=nu, status=INCONCLUSIVE, sup_norm=search.best_val,
                         evaluations=search.evaluations,
                         evidence_grade="budget-exhausted",
                         search_log={**log, "error": str(exc)})
    phase, zeros = _params_to_blaschke(params)
    best = BlaschkeProduct(phase, zeros)
    log["best_params"] = [float(v) for v in params]
    log["best_value"] = float(sup)
    grade = "exhaustive-1d" if nu == 0 else "budgeted-search"
    if sup > 1.0 + cfg.tol:
        eig, vec = _kernels.hermitian_min_pair(ws.pencil(best))
        cert = ViolationCertificate(upsilon=best, eigenvalue=float(eig),
                                    eigenvector=tuple(complex(v) for v in vec))
        return CnuReport(nu=nu, status=FAILS, sup_norm=float(sup),
                         violation=cert, evaluations=search.evaluations,
                         evidence_grade=grade, search_log=log)
    if sup >= 1.0 - cfg.extremal_band:
        witness_q = None
        try:
            _, witness_q = auxiliary_extremal(data, nu, best, band=10 * cfg.extremal_band)
        except (NotExtremalError, ValidationError) as exc:
            log["witness_error"] = str(exc)
        return CnuReport(nu=nu, status=HOLDS_EXTREMAL, sup_norm=float(sup),
                         witness_m=best, witness_q=witness_q,
                         evaluations=search.evaluations,
                         evidence_grade=grade, search_log=log)
    return CnuReport(nu=nu, status=HOLDS_STRICT, sup_norm=float(sup),
                     evaluations=search.evaluations,
                     evidence_grade=grade, search_log=log)


def transformed_np_data(data, m):
    """Scalar data lam_j -> Phi(m(lam_j), target_j)."""
    targets = tuple(phi(m(lam), t) for lam, t in zip(data.nodes, data.targets))
    return NPData(data.nodes, targets)


def auxiliary_extremal(data, nu, m, band=1e-6):
    """The auxiliary pair at m: requires ||X(m)|| = 1 within band; recovers
    the unique Blaschke solution q (degree at most n-1) of the transformed
    scalar data."""
    if m.degree > nu:
        raise ValidationError(f"witness degree {m.degree} exceeds nu={nu}")
    xn = x_norm(m, data)
    if abs(xn - 1.0) > band:
        raise NotExtremalError(f"||X(m)|| = {xn:.9f}, not within {band} of 1")
    npd = transformed_np_data(data, m)
    st = np_status(npd)
    if st.kind != EXTREMAL:
        raise NotExtremalError(f"transformed data is {st.kind}")
    q = solve_extremal(npd)
    if q.degree > data.n - 1:
        raise NotExtremalError("auxiliary solution degree exceeds n-1")
    return m, q


@dataclass(frozen=True)
class FlatCertificate:
    """Solvability certificate for the flat special case: degree-0 screening
    holds and the p-coordinate scalar problem is extremally solvable."""
    c0_report: CnuReport
    p_status_kind: str
    p_rank: int


def flat_case_decision(data, cfg=None):
    cfg = cfg or DEFAULT
    rep = check_cnu(data, 0, cfg)
    if rep.status == FAILS:
        return None
    pst = np_status(NPData(data.nodes, tuple(t.p for t in data.targets)))
    if pst.kind != EXTREMAL:
        return None
    return FlatCertificate(c0_report=rep, p_status_kind=pst.kind, p_rank=pst.rank)


@dataclass(frozen=True)
class ConstantScan:
    """Dense degree-0 sweep: extremes of the pencil spectrum over the angle."""
    min_eigenvalue: float
    argmin_theta: float
    max_xnorm: float
    argmax_theta: float
    scale: float
    grid: int


def dense_constant_scan(data, grid=4096, refine_tol=1e-10):
    """Exhaustive-in-practice one-dimensional scan over unimodular constants,
    tracking both the smallest pencil eigenvalue and the largest X-norm."""
    ws = _Workspace(data)
    thetas = np.linspace(0.0, 2.0 * math.pi, grid, endpoint=False)
    empty = np.empty(0, dtype=complex)
    eigs = np.array([ws.pencil_min(t, empty) for t in thetas])
    xs = np.array([ws.xnorm(t, empty) for t in thetas])
    kmin = int(np.argmin(eigs))
    kmax = int(np.argmax(xs))
    h = 2.0 * math.pi / grid

    def golden(center, f, maximize):
        inv = (math.sqrt(5.0) - 1.0) / 2.0
        sign = -1.0 if maximize else 1.0
        lo, hi = center - h, center + h
        x1 = hi - inv * (hi - lo)
        x2 = lo + inv * (hi - lo)
        f1, f2 = sign * f(x1), sign * f(x2)
        while hi - lo > refine_tol:
            if f1 > f2:
                lo, x1, f1 = x1, x2, f2
                x2 = lo + inv * (hi - lo)
                f2 = sign * f(x2)
            else:
                hi, x2, f2 = x2, x1, f1
                x1 = hi - inv * (hi - lo)
                f1 = sign * f(x1)
        return sign * min(f1, f2), 0.5 * (lo + hi)

    emin, tmin = golden(thetas[kmin], lambda t: ws.pencil_min(t, empty), False)
    xmax, tmax = golden(thetas[kmax], lambda t: ws.xnorm(t, empty), True)
    mat = ws.pencil(BlaschkeProduct(tmin, ()))
    scale = max(float(np.trace(mat).real), 1.0)
    return ConstantScan(min_eigenvalue=float(min(emin, eigs[kmin])),
                        argmin_theta=float(tmin),
                        max_xnorm=float(max(xmax, xs[kmax])),
                        argmax_theta=float(tmax), scale=scale, grid=grid)
