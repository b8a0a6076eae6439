"""Reduction of the 2x2 spectral interpolation problem.

A 2x2 analytic interpolation problem with spectral-radius bound 1 reduces
to interpolation into the symmetrised bidisc through (trace, determinant),
faithfully for non-scalar targets. The screening here applies the pencil
condition to the reduced data; a failed screen certifies the matrix problem
unsolvable.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .cnu import GammaData, check_cnu
from .config import DEFAULT
from .errors import ScalarMatrixError, SpectralRadiusError, ValidationError
from .gamma import GammaPoint, membership

_SCALAR_TOL = 1e-10


@dataclass(frozen=True)
class SpectralNPProblem:
    nodes: tuple
    matrices: tuple       # 2x2 complex matrices, one per node

    def __post_init__(self):
        nodes = tuple(complex(z) for z in self.nodes)
        mats = tuple(np.asarray(m, dtype=complex).reshape(2, 2) for m in self.matrices)
        if len(nodes) != len(mats) or not nodes:
            raise ValidationError("need equally many nodes and matrices")
        object.__setattr__(self, "nodes", nodes)
        object.__setattr__(self, "matrices", mats)

    @property
    def n(self):
        return len(self.nodes)


def companion(pt):
    """2x2 companion matrix with trace s and determinant p."""
    s, p = (pt.s, pt.p) if isinstance(pt, GammaPoint) else pt
    return np.array([[0.0, 1.0], [-complex(p), complex(s)]], dtype=complex)


def to_gamma_data(prob):
    """Map targets through (trace, determinant) and validate membership.

    Scalar matrices are refused: for W = cI the reduction is not equivalent
    to the matrix problem. A target outside the closed domain means the
    spectral radius exceeds 1, which no screening can repair.
    """
    targets = []
    for lam, w in zip(prob.nodes, prob.matrices):
        half_trace = np.trace(w) / 2.0
        if np.linalg.norm(w - half_trace * np.eye(2)) <= _SCALAR_TOL:
            raise ScalarMatrixError(
                f"target at node {lam} is a scalar matrix; reduction refused")
        # direct 2x2 determinant keeps the companion round trip exact
        det = w[0, 0] * w[1, 1] - w[0, 1] * w[1, 0]
        t = GammaPoint(complex(np.trace(w)), complex(det))
        if not membership(t).closed_gamma:
            raise SpectralRadiusError(
                f"target at node {lam} has spectral radius above 1")
        targets.append(t)
    require_open = all(membership(t).open_g for t in targets)
    return GammaData(prob.nodes, tuple(targets), require_open=require_open)


def screen(prob, nu=None, cfg=None):
    """Pencil screening of the reduced data; default degree is n - 2."""
    cfg = cfg or DEFAULT
    data = to_gamma_data(prob)
    if nu is None:
        nu = max(prob.n - 2, 0)
    return check_cnu(data, nu, cfg)
