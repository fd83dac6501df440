# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled hot kernels; same contracts as ``kickosc._fallback``."""

import numpy as np

from libc.math cimport cos, sin, log, sqrt, INFINITY

cdef double RESCALE_AT = 1e200
# The rotating-frame phase e^{2 i n theta} is advanced by multiplication and
# re-evaluated exactly every RESYNC kicks, so its modulus error stays below
# about RESYNC ulps instead of growing with n.
cdef long RESYNC = 8


def u_recurrence(long n, double x):
    cdef double prev = 0.0, cur = 1.0, nxt
    cdef double two_x = 2.0 * x
    cdef long i
    if n < 0:
        return 0.0
    with nogil:
        for i in range(n):
            nxt = two_x * cur - prev
            prev = cur
            cur = nxt
    return cur


def direct_product(double kr, double theta, long n):
    cdef double complex e = cos(theta) + 1j * sin(theta)
    cdef double complex ei = e.conjugate()
    cdef double complex ik = 1j * kr
    cdef double complex s11 = (1 - ik) * e, s12 = -ik * ei
    cdef double complex s21 = ik * e, s22 = (1 + ik) * ei
    cdef double complex p11 = s11, p12 = s12, p21 = s21, p22 = s22
    cdef double complex q11, q12, q21, q22
    cdef long i
    with nogil:
        for i in range(n - 1):
            q11 = s11 * p11 + s12 * p21
            q12 = s11 * p12 + s12 * p22
            q21 = s21 * p11 + s22 * p21
            q22 = s21 * p12 + s22 * p22
            p11 = q11
            p12 = q12
            p21 = q21
            p22 = q22
        for i in range(n - 1):
            p11 = ei * p11
            p12 = ei * p12
            p21 = e * p21
            p22 = e * p22
    return complex(p11), complex(p12), complex(p21), complex(p22)


cdef inline double _norm2(double complex a, double complex b) noexcept nogil:
    return a.real * a.real + a.imag * a.imag + b.real * b.real + b.imag * b.imag


def log_energy_trajectory(double kr, double theta, long n_max):
    # rotating frame, see the fallback docstring
    out = np.empty(n_max + 1)
    cdef double[::1] o = out
    cdef double complex ik = 1j * kr
    cdef double complex a = 1.0, b = 0.0, q = 1.0, ta
    cdef double complex step = cos(2.0 * theta) + 1j * sin(2.0 * theta)
    cdef double w, f, ang, log_scale = 0.0
    cdef long n
    o[0] = 0.0
    with nogil:
        for n in range(1, n_max + 1):
            if n % RESYNC == 0:
                ang = 2.0 * n * theta
                q = cos(ang) + 1j * sin(ang)
            else:
                q = q * step
            ta = a
            a = (1 - ik) * a - ik * q.conjugate() * b
            b = ik * q * ta + (1 + ik) * b
            w = _norm2(a, b)
            if w > RESCALE_AT:
                f = 1.0 / sqrt(w)
                a = a * f
                b = b * f
                log_scale += log(w)
                w = _norm2(a, b)
            o[n] = log_scale + log(w)
    return out


def probe_summary(kr, theta, long n_probe, long n_measure):
    cdef double[::1] k = np.ascontiguousarray(kr, dtype=float).ravel()
    cdef double[::1] th = np.ascontiguousarray(theta, dtype=float).ravel()
    cdef Py_ssize_t m = k.shape[0], j
    out = np.full((m, 5), np.nan)
    cdef double[:, ::1] o = out
    cdef double complex ik, a, b, q, ta, step
    cdef double w, f, ang, lw, log_scale, log_max
    cdef long n
    with nogil:
        for j in range(m):
            ik = 1j * k[j]
            step = cos(2.0 * th[j]) + 1j * sin(2.0 * th[j])
            q = 1.0
            a = 1.0
            b = 0.0
            log_scale = 0.0
            log_max = -INFINITY
            for n in range(1, n_probe + 1):
                if n % RESYNC == 0:
                    ang = 2.0 * n * th[j]
                    q = cos(ang) + 1j * sin(ang)
                else:
                    q = q * step
                ta = a
                a = (1 - ik) * a - ik * q.conjugate() * b
                b = ik * q * ta + (1 + ik) * b
                w = _norm2(a, b)
                if w > RESCALE_AT:
                    f = 1.0 / sqrt(w)
                    a = a * f
                    b = b * f
                    log_scale += log(w)
                    w = _norm2(a, b)
                lw = log_scale + log(w)
                if lw > log_max:
                    log_max = lw
                if n == 1:
                    o[j, 0] = lw
                if n == n_measure - 1:
                    o[j, 2] = lw
                if n == n_measure:
                    o[j, 3] = lw
                if n == n_probe:
                    o[j, 4] = lw
            if n_probe >= 1:
                o[j, 1] = log_max
    return out
