"""Reference implementations of the hot kernels (NumPy only).

These are the functions evaluated inside the pencil-condition search loops.
The compiled extension in ``_core.pyx`` mirrors this module exactly; either
backend may be active, selected in ``symbidisc._kernels``.
"""

import numpy as np

BACKEND = "python"


def blaschke_values(phase, zeros, pts):
    """Evaluate exp(i*phase) * prod (z - a)/(1 - conj(a) z) at 1-d pts."""
    pts = np.atleast_1d(np.asarray(pts, dtype=np.complex128))
    out = np.full(pts.shape, np.exp(1j * phase), dtype=np.complex128)
    for a in zeros:
        out *= (pts - a) / (1.0 - np.conj(a) * pts)
    return out


def hermitian_eigvals(a):
    return np.linalg.eigvalsh(a)


def hermitian_min_eig(a):
    return float(np.linalg.eigvalsh(a)[0])


def hermitian_min_pair(a):
    vals, vecs = np.linalg.eigh(a)
    return float(vals[0]), vecs[:, 0].copy()


def _phi_values(u, s, p):
    return (2.0 * u * p - s) / (2.0 - u * s)


def xnorm_eval(phase, zeros, lam, s, p, lh, linvh):
    """Norm of the diagonal kernel operator at one Blaschke parameter point.

    lh is the conjugate-transposed Cholesky factor of the Szego Gram matrix
    of the nodes, linvh its inverse; both are precomputed per data set.
    """
    u = blaschke_values(phase, zeros, lam)
    w = _phi_values(u, s, p)
    k = (lh * np.conj(w)[np.newaxis, :]) @ linvh
    b = k.conj().T @ k
    return float(np.sqrt(max(np.linalg.eigvalsh(b)[-1], 0.0)))


def pencil_matrix_values(u, lam, s, p):
    """Hermitian pencil matrix at precomputed Blaschke values u."""
    ui = u[:, np.newaxis]
    uj = np.conj(u)[np.newaxis, :]
    si = s[:, np.newaxis]
    sj = np.conj(s)[np.newaxis, :]
    pi = p[:, np.newaxis]
    pj = np.conj(p)[np.newaxis, :]
    num = (1.0 - ui * pi * pj * uj
           - 0.5 * ui * (si - pi * sj)
           - 0.5 * (sj - pj * si) * uj
           - 0.25 * (1.0 - ui * uj) * si * sj)
    return num / (1.0 - np.outer(lam, np.conj(lam)))


def pencil_min_eig(phase, zeros, lam, s, p):
    u = blaschke_values(phase, zeros, lam)
    return float(np.linalg.eigvalsh(pencil_matrix_values(u, lam, s, p))[0])
