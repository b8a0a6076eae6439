# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled hot kernels: Blaschke evaluation, complex Jacobi eigensolver,
and the fused objective evaluations used by the pencil-condition search.

Mirrors ``_pyref`` function-for-function; matrices here are small (n <= 16)
so a cyclic Jacobi sweep beats LAPACK call overhead by a wide margin.
"""

import numpy as np

cimport numpy as cnp
from libc.math cimport fabs, sqrt

cnp.import_array()

BACKEND = "compiled"

ctypedef double complex cplx

cdef double _JACOBI_OFF_TOL = 1e-13
cdef int _MAX_SWEEPS = 60


cdef inline double _cabs(cplx z) nogil:
    return sqrt(z.real * z.real + z.imag * z.imag)


cdef int _jacobi(cplx[:, ::1] a, cplx[:, ::1] v, int n, bint want_v) nogil:
    """In-place cyclic Jacobi on Hermitian a; accumulates rotations in v."""
    cdef int p, q, k, sweep
    cdef double app, aqq, absa, theta, t, c, s, off, scale
    cdef cplx alpha, eph, tmp_p, tmp_q

    scale = 0.0
    for p in range(n):
        for q in range(n):
            scale += _cabs(a[p, q]) ** 2
    scale = sqrt(scale)
    if scale < 1.0:
        scale = 1.0

    for sweep in range(_MAX_SWEEPS):
        off = 0.0
        for p in range(n - 1):
            for q in range(p + 1, n):
                off += _cabs(a[p, q]) ** 2
        off = sqrt(2.0 * off)
        if off <= _JACOBI_OFF_TOL * scale:
            return sweep
        for p in range(n - 1):
            for q in range(p + 1, n):
                alpha = a[p, q]
                absa = _cabs(alpha)
                if absa <= 1e-300:
                    continue
                eph = alpha / absa
                app = a[p, p].real
                aqq = a[q, q].real
                # zero A'[p,q] for J below: t solves t^2 - 2*theta*t - 1 = 0
                theta = (aqq - app) / (2.0 * absa)
                if theta >= 0.0:
                    t = -1.0 / (theta + sqrt(1.0 + theta * theta))
                else:
                    t = 1.0 / (-theta + sqrt(1.0 + theta * theta))
                c = 1.0 / sqrt(1.0 + t * t)
                s = t * c
                # A <- A J with J = [[c, -s*eph], [s*conj(eph), c]] on (p,q)
                for k in range(n):
                    tmp_p = a[k, p]
                    tmp_q = a[k, q]
                    a[k, p] = c * tmp_p + s * eph.conjugate() * tmp_q
                    a[k, q] = -s * eph * tmp_p + c * tmp_q
                # A <- J^H A
                for k in range(n):
                    tmp_p = a[p, k]
                    tmp_q = a[q, k]
                    a[p, k] = c * tmp_p + s * eph * tmp_q
                    a[q, k] = -s * eph.conjugate() * tmp_p + c * tmp_q
                if want_v:
                    for k in range(n):
                        tmp_p = v[k, p]
                        tmp_q = v[k, q]
                        v[k, p] = c * tmp_p + s * eph.conjugate() * tmp_q
                        v[k, q] = -s * eph * tmp_p + c * tmp_q
    return _MAX_SWEEPS


def hermitian_eigvals(a):
    cdef cnp.ndarray[cplx, ndim=2] work = np.array(a, dtype=np.complex128, order="C")
    cdef int n = work.shape[0]
    cdef cplx[:, ::1] wv = work
    _jacobi(wv, wv, n, False)
    cdef cnp.ndarray[double, ndim=1] vals = np.empty(n, dtype=np.float64)
    cdef int i
    for i in range(n):
        vals[i] = wv[i, i].real
    vals.sort()
    return vals


def hermitian_min_eig(a):
    return float(hermitian_eigvals(a)[0])


def hermitian_min_pair(a):
    cdef cnp.ndarray[cplx, ndim=2] work = np.array(a, dtype=np.complex128, order="C")
    cdef int n = work.shape[0]
    cdef cnp.ndarray[cplx, ndim=2] vecs = np.eye(n, dtype=np.complex128)
    cdef cplx[:, ::1] wv = work
    cdef cplx[:, ::1] vv = vecs
    _jacobi(wv, vv, n, True)
    cdef int i, best = 0
    for i in range(1, n):
        if wv[i, i].real < wv[best, best].real:
            best = i
    return float(work[best, best].real), vecs[:, best].copy()


cdef extern from "math.h":
    double cos(double) nogil
    double sin(double) nogil


cdef void _blaschke_into(double phase, cplx[::1] zeros, cplx[::1] pts,
                         cplx[::1] out, int npts, int nz) nogil:
    cdef int i, k
    cdef cplx ph, z, a
    ph.real = cos(phase)
    ph.imag = sin(phase)
    for i in range(npts):
        z = ph
        for k in range(nz):
            a = zeros[k]
            z = z * (pts[i] - a) / (1.0 - a.conjugate() * pts[i])
        out[i] = z


def blaschke_values(double phase, zeros, pts):
    cdef cnp.ndarray[cplx, ndim=1] zarr = np.ascontiguousarray(zeros, dtype=np.complex128)
    cdef cnp.ndarray[cplx, ndim=1] parr = np.ascontiguousarray(
        np.atleast_1d(np.asarray(pts, dtype=np.complex128)))
    cdef cnp.ndarray[cplx, ndim=1] out = np.empty(parr.shape[0], dtype=np.complex128)
    _blaschke_into(phase, zarr, parr, out, parr.shape[0], zarr.shape[0])
    return out


def xnorm_eval(double phase, zeros, lam, s, p, lh, linvh):
    cdef cnp.ndarray[cplx, ndim=1] zarr = np.ascontiguousarray(zeros, dtype=np.complex128)
    cdef cnp.ndarray[cplx, ndim=1] lam_ = np.ascontiguousarray(lam, dtype=np.complex128)
    cdef cnp.ndarray[cplx, ndim=1] s_ = np.ascontiguousarray(s, dtype=np.complex128)
    cdef cnp.ndarray[cplx, ndim=1] p_ = np.ascontiguousarray(p, dtype=np.complex128)
    cdef cnp.ndarray[cplx, ndim=2] lh_ = np.ascontiguousarray(lh, dtype=np.complex128)
    cdef cnp.ndarray[cplx, ndim=2] linvh_ = np.ascontiguousarray(linvh, dtype=np.complex128)
    cdef int n = lam_.shape[0]
    cdef cnp.ndarray[cplx, ndim=1] u = np.empty(n, dtype=np.complex128)
    cdef cnp.ndarray[cplx, ndim=2] k = np.empty((n, n), dtype=np.complex128)
    cdef cnp.ndarray[cplx, ndim=2] b = np.empty((n, n), dtype=np.complex128)
    cdef cplx[::1] uv = u
    cdef cplx[:, ::1] kv = k
    cdef cplx[:, ::1] bv = b
    cdef cplx[:, ::1] lhv = lh_
    cdef cplx[:, ::1] liv = linvh_
    cdef int i, j, m
    cdef cplx w, acc

    _blaschke_into(phase, zarr, lam_, uv, n, zarr.shape[0])
    with nogil:
        # K = (LH * conj(w) per column) @ LinvH, w_j = Phi(u_j, s_j, p_j)
        for j in range(n):
            w = (2.0 * uv[j] * p_[j] - s_[j]) / (2.0 - uv[j] * s_[j])
            uv[j] = w.conjugate()
        for i in range(n):
            for j in range(n):
                acc = 0.0
                for m in range(n):
                    acc += lhv[i, m] * uv[m] * liv[m, j]
                kv[i, j] = acc
        for i in range(n):
            for j in range(n):
                acc = 0.0
                for m in range(n):
                    acc += kv[m, i].conjugate() * kv[m, j]
                bv[i, j] = acc
        _jacobi(bv, bv, n, False)
    cdef double best = 0.0
    for i in range(n):
        if bv[i, i].real > best:
            best = bv[i, i].real
    return sqrt(best)


def pencil_matrix_values(u, lam, s, p):
    cdef cnp.ndarray[cplx, ndim=1] u_ = np.ascontiguousarray(u, dtype=np.complex128)
    cdef cnp.ndarray[cplx, ndim=1] lam_ = np.ascontiguousarray(lam, dtype=np.complex128)
    cdef cnp.ndarray[cplx, ndim=1] s_ = np.ascontiguousarray(s, dtype=np.complex128)
    cdef cnp.ndarray[cplx, ndim=1] p_ = np.ascontiguousarray(p, dtype=np.complex128)
    cdef int n = lam_.shape[0]
    cdef cnp.ndarray[cplx, ndim=2] out = np.empty((n, n), dtype=np.complex128)
    _pencil_into(u_, lam_, s_, p_, out, n)
    return out


cdef void _pencil_into(cplx[::1] u, cplx[::1] lam, cplx[::1] s, cplx[::1] p,
                       cplx[:, ::1] out, int n) nogil:
    cdef int i, j
    cdef cplx ui, uj, si, sj, pi, pj, num
    for i in range(n):
        for j in range(n):
            ui = u[i]
            uj = u[j].conjugate()
            si = s[i]
            sj = s[j].conjugate()
            pi = p[i]
            pj = p[j].conjugate()
            num = (1.0 - ui * pi * pj * uj
                   - 0.5 * ui * (si - pi * sj)
                   - 0.5 * (sj - pj * si) * uj
                   - 0.25 * (1.0 - ui * uj) * si * sj)
            out[i, j] = num / (1.0 - lam[i] * lam[j].conjugate())


def pencil_min_eig(double phase, zeros, lam, s, p):
    cdef cnp.ndarray[cplx, ndim=1] zarr = np.ascontiguousarray(zeros, dtype=np.complex128)
    cdef cnp.ndarray[cplx, ndim=1] lam_ = np.ascontiguousarray(lam, dtype=np.complex128)
    cdef cnp.ndarray[cplx, ndim=1] s_ = np.ascontiguousarray(s, dtype=np.complex128)
    cdef cnp.ndarray[cplx, ndim=1] p_ = np.ascontiguousarray(p, dtype=np.complex128)
    cdef int n = lam_.shape[0]
    cdef cnp.ndarray[cplx, ndim=1] u = np.empty(n, dtype=np.complex128)
    cdef cnp.ndarray[cplx, ndim=2] mat = np.empty((n, n), dtype=np.complex128)
    cdef cplx[::1] uv = u
    cdef cplx[:, ::1] mv = mat
    # views must be built while holding the GIL
    cdef cplx[::1] lamv = lam_
    cdef cplx[::1] sv = s_
    cdef cplx[::1] pv = p_
    cdef double best
    cdef int i
    _blaschke_into(phase, zarr, lamv, uv, n, zarr.shape[0])
    with nogil:
        _pencil_into(uv, lamv, sv, pv, mv, n)
        _jacobi(mv, mv, n, False)
    best = mv[0, 0].real
    for i in range(1, n):
        if mv[i, i].real < best:
            best = mv[i, i].real
    return best
