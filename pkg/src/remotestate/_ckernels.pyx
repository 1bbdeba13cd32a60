# cython: boundscheck=False, wraparound=False, cdivision=True, initializedcheck=False
"""Compiled kernels; same contract as ``remotestate._kernels``."""
import numpy as np
cimport numpy as cnp
from libc.math cimport acos, atan2, cos, sin, sqrt, M_PI

cnp.import_array()

cdef double MIXED_TOL = 1e-9
cdef double DIAGONAL_TOL = 1e-12
# generator of each SU(4) factor: 0 marks gamma_3, otherwise the basis index paired with |00>
cdef int[12] PARTNER = [0, 1, 0, 2, 0, 3, 0, 1, 0, 2, 0, 1]


def su2_first_columns(phi1, phi2):
    cdef const double[::1] p1 = np.ascontiguousarray(phi1, dtype=np.float64).ravel()
    cdef const double[::1] p2 = np.ascontiguousarray(np.broadcast_to(phi2, np.shape(phi1)), dtype=np.float64).ravel()
    cdef Py_ssize_t n = p1.shape[0], k
    out = np.empty((n, 2), dtype=np.complex128)
    cdef double complex[:, ::1] o = out
    cdef double h
    for k in range(n):
        h = M_PI * p1[k] / 2
        o[k, 0] = cos(h)
        o[k, 1] = (cos(2 * M_PI * p2[k]) + 1j * sin(2 * M_PI * p2[k])) * sin(h)
    return out.reshape(np.shape(phi1) + (2,))


def su4_first_columns(phis):
    cdef const double[:, ::1] p = np.ascontiguousarray(phis, dtype=np.float64)
    cdef Py_ssize_t n = p.shape[0], k
    cdef int f, j
    out = np.empty((n, 4), dtype=np.complex128)
    cdef double complex[:, ::1] o = out
    cdef double complex v[4]
    cdef double complex e, a, b
    cdef double c, s, ang
    for k in range(n):
        v[0] = 1.0
        v[1] = 0.0
        v[2] = 0.0
        v[3] = 0.0
        for f in range(11, -1, -1):
            j = PARTNER[f]
            if j == 0:
                ang = M_PI * p[k, f]
                e = cos(ang) + 1j * sin(ang)
                v[0] = v[0] * e
                v[1] = v[1] * e.conjugate()
            else:
                ang = M_PI * p[k, f] / 2
                c = cos(ang)
                s = sin(ang)
                a = v[0]
                b = v[j]
                v[0] = c * a + s * b
                v[j] = c * b - s * a
        o[k, 0] = v[0]
        o[k, 1] = v[1]
        o[k, 2] = v[2]
        o[k, 3] = v[3]
    return out


cdef inline void _params(double r11, double r22, double complex r21,
                         double* lam, double* b1, double* b2) noexcept nogil:
    cdef double diff = r11 - r22
    cdef double off = sqrt(r21.real * r21.real + r21.imag * r21.imag)
    cdef double radius = sqrt(diff * diff / 4 + off * off)
    cdef double x
    if radius <= MIXED_TOL:
        lam[0] = 0.5
        b1[0] = 0.0
        b2[0] = 0.0
        return
    lam[0] = 0.5 + radius
    if off <= DIAGONAL_TOL:
        b1[0] = 0.0 if diff >= 0 else 1.0
        b2[0] = 0.0
        return
    x = diff / (2 * radius)
    if x > 1.0:
        x = 1.0
    elif x < -1.0:
        x = -1.0
    b1[0] = acos(x) / M_PI
    if b1[0] == 0.0 or b1[0] == 1.0:
        b2[0] = 0.0
        return
    x = atan2(r21.imag, r21.real) / (2 * M_PI)
    if x < 0:
        x = x + 1.0
    if x >= 1.0:
        x = 0.0
    b2[0] = x


def receiver_params_grid(psi, transfer):
    cdef const double complex[:, ::1] ps = np.ascontiguousarray(psi, dtype=np.complex128)
    cdef const double complex[:, :, :, :, ::1] m = np.ascontiguousarray(transfer, dtype=np.complex128)
    cdef Py_ssize_t n = ps.shape[0], da = ps.shape[1], nt = m.shape[0]
    cdef Py_ssize_t it, k, a, b, idx
    lam_arr = np.empty(nt * n)
    b1_arr = np.empty(nt * n)
    b2_arr = np.empty(nt * n)
    cdef double[::1] lam = lam_arr
    cdef double[::1] b1 = b1_arr
    cdef double[::1] b2 = b2_arr
    cdef double r11, r22
    cdef double complex r21, w
    with nogil:
        for it in range(nt):
            for k in range(n):
                r11 = 0.0
                r22 = 0.0
                r21 = 0.0
                for a in range(da):
                    for b in range(da):
                        w = ps[k, a] * ps[k, b].conjugate()
                        r11 = r11 + (m[it, a, b, 0, 0] * w).real
                        r22 = r22 + (m[it, a, b, 1, 1] * w).real
                        r21 = r21 + m[it, a, b, 1, 0] * w
                idx = it * n + k
                _params(r11, r22, r21, &lam[idx], &b1[idx], &b2[idx])
    return lam_arr, b1_arr, b2_arr
