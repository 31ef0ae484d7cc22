# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True, initializedcheck=False
"""Compiled versions of the kernels in ``_kernels_py``; same signatures and results."""
import numpy as np

from libc.math cimport exp, log, log1p, sqrt, fabs

FORM_ONE_PLUS_ABS = 0
FORM_ONE_PLUS_SQ_HALF = 1


def thomas_batched(lower, diag, upper, rhs):
    cdef double[:, ::1] a = np.ascontiguousarray(lower, dtype=np.float64)
    cdef double[:, ::1] b = np.ascontiguousarray(diag, dtype=np.float64)
    cdef double[:, ::1] c = np.ascontiguousarray(upper, dtype=np.float64)
    cdef double[:, ::1] d = np.ascontiguousarray(rhs, dtype=np.float64)
    cdef Py_ssize_t m = d.shape[0], n = d.shape[1], k, i
    out = np.empty((m, n))
    cdef double[:, ::1] x = out
    cdef double[::1] cp = np.empty(n)
    cdef double denom
    for k in range(m):
        cp[0] = c[k, 0] / b[k, 0]
        x[k, 0] = d[k, 0] / b[k, 0]
        for i in range(1, n):
            denom = b[k, i] - a[k, i] * cp[i - 1]
            cp[i] = c[k, i] / denom
            x[k, i] = (d[k, i] - a[k, i] * x[k, i - 1]) / denom
        for i in range(n - 2, -1, -1):
            x[k, i] = x[k, i] - cp[i] * x[k, i + 1]
    return out


def log_mean_powers(centers, halves, int n_per_axis, double gamma, int form, exponents):
    cdef double[:, ::1] cen = np.ascontiguousarray(centers, dtype=np.float64)
    cdef double[::1] hal = np.ascontiguousarray(halves, dtype=np.float64)
    cdef double[::1] ex = np.ascontiguousarray(exponents, dtype=np.float64)
    cdef Py_ssize_t m = cen.shape[0], dim = cen.shape[1], ne = ex.shape[0]
    cdef Py_ssize_t ns = n_per_axis ** dim
    out = np.empty((m, ne))
    cdef double[:, ::1] res = out
    cdef double[::1] g = (np.arange(n_per_axis) + 0.5) / n_per_axis * 2.0 - 1.0
    cdef double[::1] lb = np.empty(ns)
    cdef Py_ssize_t leaf, s, e, rem, ax
    cdef double rho2, coord, top, acc, v, scale
    for leaf in range(m):
        for s in range(ns):
            rem = s
            rho2 = 0.0
            for ax in range(dim):
                coord = cen[leaf, ax] + hal[leaf] * g[rem % n_per_axis]
                rem = rem // n_per_axis
                rho2 += coord * coord
            if form == 0:
                lb[s] = log1p(sqrt(rho2))
            else:
                lb[s] = 0.5 * log1p(rho2)
        for e in range(ne):
            scale = -gamma * ex[e]
            top = scale * lb[0]
            for s in range(1, ns):
                v = scale * lb[s]
                if v > top:
                    top = v
            acc = 0.0
            for s in range(ns):
                acc += exp(scale * lb[s] - top)
            res[leaf, e] = top + log(acc / ns)
    return out


cdef inline double _minmod(double a, double b) nogil:
    if a * b <= 0.0:
        return 0.0
    return a if fabs(a) < fabs(b) else b


def muscl_tendency(eta, flux_r, flux_z, r_c, double dr, double dz):
    cdef double[:, ::1] q = np.ascontiguousarray(eta, dtype=np.float64)
    cdef double[:, ::1] fr = np.ascontiguousarray(flux_r, dtype=np.float64)
    cdef double[:, ::1] fz = np.ascontiguousarray(flux_z, dtype=np.float64)
    cdef double[::1] rc = np.ascontiguousarray(r_c, dtype=np.float64)
    cdef Py_ssize_t nr = q.shape[0], nz = q.shape[1], i, j, jm, jp, jpp
    out = np.zeros((nr, nz))
    cdef double[:, ::1] o = out
    cdef double[:, ::1] rflux = np.zeros((nr + 1, nz))
    cdef double[:, ::1] zflux = np.empty((nr, nz))
    cdef double qm2, qm1, q0, q1, sl_l, sl_r, left, right, face, f
    for j in range(nz):
        # radial faces 1..nr-1; face 0 is the axis, face nr carries eta = 0
        for i in range(1, nr):
            f = fr[i, j]
            q0 = q[i - 1, j]
            q1 = q[i, j]
            if f > 0.0:
                qm1 = q[i - 2, j] if i >= 2 else q[0, j]
                left = q0 + 0.5 * _minmod(q0 - qm1, q1 - q0)
                face = left
            else:
                qm2 = q[i + 1, j] if i + 1 < nr else -q[nr - 1, j]
                right = q1 - 0.5 * _minmod(q1 - q0, qm2 - q1)
                face = right
            rflux[i, j] = f * face
    for i in range(nr):
        for j in range(nz):
            jm = j - 1 if j > 0 else nz - 1
            jp = j + 1 if j + 1 < nz else 0
            jpp = jp + 1 if jp + 1 < nz else 0
            f = fz[i, j]
            if f > 0.0:
                zflux[i, j] = f * (q[i, j] + 0.5 * _minmod(q[i, j] - q[i, jm], q[i, jp] - q[i, j]))
            else:
                zflux[i, j] = f * (q[i, jp] - 0.5 * _minmod(q[i, jp] - q[i, j], q[i, jpp] - q[i, jp]))
    for i in range(nr):
        for j in range(nz):
            jm = j - 1 if j > 0 else nz - 1
            o[i, j] = -((rflux[i + 1, j] - rflux[i, j]) / (rc[i] * dr)
                        + (zflux[i, j] - zflux[i, jm]) / dz)
    return out
