"""Classical scalar Nevanlinna-Pick interpolation.

Solvability is decided by the Pick matrix; extremal problems (singular
positive Pick matrix) have a unique solution, a Blaschke product whose
degree equals the matrix rank. That solution is recovered here by the
Schur recursion, reducing one node per step and back-substituting through
the inverted linear-fractional steps.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import _kernels
from .errors import NotExtremalError, ValidationError
from .ratfun import Poly, RationalFn, classify_inner, reduce_rational

_MIN_NODE_SEP = 1e-10

STRICT = "strictlySolvable"
EXTREMAL = "extremallySolvable"
UNSOLVABLE = "unsolvable"


@dataclass(frozen=True)
class NPData:
    nodes: tuple
    targets: tuple

    def __post_init__(self):
        nodes = tuple(complex(z) for z in self.nodes)
        targets = tuple(complex(w) for w in self.targets)
        if len(nodes) != len(targets) or not nodes:
            raise ValidationError("need equally many nodes and targets")
        if max(abs(z) for z in nodes) >= 1.0:
            raise ValidationError("interpolation nodes must lie in the open disc")
        for i in range(len(nodes)):
            for j in range(i + 1, len(nodes)):
                if abs(nodes[i] - nodes[j]) <= _MIN_NODE_SEP:
                    raise ValidationError("coincident interpolation nodes")
        object.__setattr__(self, "nodes", nodes)
        object.__setattr__(self, "targets", targets)

    @property
    def n(self):
        return len(self.nodes)


@dataclass(frozen=True)
class NPStatus:
    kind: str
    min_eigenvalue: float
    rank: int
    scale: float


def pick_matrix(data):
    """P[i, j] = (1 - w_i conj(w_j)) / (1 - lam_i conj(lam_j))."""
    lam = np.asarray(data.nodes, dtype=complex)
    w = np.asarray(data.targets, dtype=complex)
    return (1.0 - np.outer(w, np.conj(w))) / (1.0 - np.outer(lam, np.conj(lam)))


def np_status(data, tol=None):
    """Solvability status from the Pick matrix spectrum.

    The default tolerance band is scale-aware: 1e-8 times the trace (with a
    floor of 1), since extremality is an exact-zero condition approximated
    in floating point.
    """
    p = pick_matrix(data)
    scale = max(float(np.trace(p).real), 1.0)
    if tol is None:
        tol = 1e-8 * scale
    eigs = _kernels.hermitian_eigvals(p)
    mn = float(eigs[0])
    rank = int(np.sum(eigs > tol))
    if mn > tol:
        kind = STRICT
    elif mn >= -tol:
        kind = EXTREMAL
    else:
        kind = UNSOLVABLE
    return NPStatus(kind=kind, min_eigenvalue=mn, rank=rank, scale=scale)


def schur_reduce(data):
    """One Schur reduction step at the first node; |w_1| < 1 required."""
    lam1, w1 = data.nodes[0], data.targets[0]
    if abs(w1) >= 1.0:
        raise ValidationError("cannot Schur-reduce at a unimodular target")
    if data.n < 2:
        raise ValidationError("need at least two nodes to reduce")
    new_nodes = data.nodes[1:]
    new_targets = tuple(
        (1.0 - np.conj(lam1) * l) / (l - lam1) * (w - w1) / (1.0 - np.conj(w1) * w)
        for l, w in zip(new_nodes, data.targets[1:]))
    return NPData(new_nodes, new_targets)


def _back_substitute(steps, const):
    """Invert the recorded Schur steps starting from a unimodular constant."""
    num = Poly([const])
    den = Poly([1.0])
    for lam1, w1 in reversed(steps):
        bn = Poly([-lam1, 1.0])
        bd = Poly([1.0, -np.conj(lam1)])
        gn, gd = num, den
        num = w1 * (bd * gd) + bn * gn
        den = bd * gd + np.conj(w1) * (bn * gn)
    return RationalFn(num, den)


def solve_extremal(data, tol=1e-8):
    """Unique Blaschke-product solution of extremally solvable data.

    Pivots at the smallest-modulus target each step, which postpones the
    unimodular-target termination and keeps the reductions well conditioned.
    The recovered product is verified at every node to 1e-9.
    """
    status = np_status(data)
    if status.kind != EXTREMAL:
        raise NotExtremalError(f"data is {status.kind}; extremal required")
    nodes = list(data.nodes)
    targets = list(data.targets)
    steps = []
    while True:
        mods = [abs(w) for w in targets]
        top = max(mods)
        if top >= 1.0 - tol:
            k = int(np.argmax(mods))
            const = targets[k] / abs(targets[k])
            for w in targets:
                if abs(w - const) > 1e-6:
                    raise NotExtremalError(
                        "unimodular target inconsistent with remaining data")
            break
        if len(nodes) == 1:
            raise NotExtremalError("reduction exhausted nodes; data not extremal")
        k = int(np.argmin(mods))
        lam1, w1 = nodes.pop(k), targets.pop(k)
        steps.append((lam1, w1))
        targets = [
            (1.0 - np.conj(lam1) * l) / (l - lam1) * (w - w1) / (1.0 - np.conj(w1) * w)
            for l, w in zip(nodes, targets)]
    f = _back_substitute(steps, const)
    f, _ = reduce_rational(f)
    q = classify_inner(f)
    if q is None:
        raise NotExtremalError("recovered solution is not a Blaschke product")
    err = max(abs(q(z) - w) for z, w in zip(data.nodes, data.targets))
    if err > 1e-9:
        raise NotExtremalError(f"verification failed: max node error {err:.3e}")
    return q
