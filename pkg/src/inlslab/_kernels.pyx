# cython: boundscheck=False, wraparound=False, cdivision=True, initializedcheck=False
"""Compiled hot loops.

Every function here has a numpy twin with the same signature in
``_kernels_py``; ``inlslab.kernels`` picks one at import time.
"""
import numpy as np
cimport cython
from libc.math cimport sin, cos, pow, sqrt


cdef inline long long _iabs(long long a) nogil:
    return -a if a < 0 else a


def classify_configs(const long long[:, ::1] cfg, long long denom, int dim=3):
    """Classify integer-encoded exponent tuples.

    Each row holds ``(iq, ir, iqt, irt, ig, igt)``, the numerators of
    ``1/q, 1/r, 1/q~, 1/r~, gamma, gamma~`` over the common denominator
    ``denom``.

    Returns:
        ``(admissible, necessary)`` uint8 arrays. ``admissible`` is the
        three-dimensional inhomogeneous admissibility test (strict form),
        ``necessary`` the dimension-``dim`` necessary conditions.
    """
    cdef Py_ssize_t n = cfg.shape[0]
    adm_arr = np.zeros(n, dtype=np.uint8)
    nec_arr = np.zeros(n, dtype=np.uint8)
    cdef unsigned char[::1] adm = adm_arr
    cdef unsigned char[::1] nec = nec_arr
    cdef Py_ssize_t i
    cdef long long D = denom, nd = dim
    cdef long long iq, ir, iqt, irt, ig, igt, G, X, Xt, s1
    cdef bint ok
    with nogil:
        for i in range(n):
            iq = cfg[i, 0]; ir = cfg[i, 1]; iqt = cfg[i, 2]
            irt = cfg[i, 3]; ig = cfg[i, 4]; igt = cfg[i, 5]

            # admissibility in dimension three
            ok = (0 < ig) and (ig < D) and (0 < igt) and (igt < D)
            ok = ok and (2 * (iq + iqt) == 3 * (D - ir - irt) + ig + igt)
            s1 = 3 * D - 6 * ir + 2 * ig - 4 * iq
            ok = ok and (-D < s1) and (s1 < D)
            ok = ok and (0 <= iq) and (iq <= D) and (ig < 3 * ir)
            ok = ok and (6 * ir < 3 * D + 2 * ig)
            ok = ok and (2 * iq < 3 * D - 6 * ir + 2 * ig)
            ok = ok and (0 <= iqt) and (iqt <= D) and (igt < 3 * irt)
            ok = ok and (6 * irt < 3 * D + 2 * igt)
            ok = ok and (2 * iqt < 3 * D - 6 * irt + 2 * igt)
            ok = ok and (iq + iqt < D)
            X = 3 * ir - ig
            Xt = 3 * irt - igt
            ok = ok and (_iabs(Xt - X) < D)
            if ok:
                G = ig + igt
                if X == Xt:
                    ok = (D + 2 * ig < 6 * ir) and (6 * ir <= 3 * D - igt + ig)
                elif X < Xt:
                    ok = (G * X + (2 * D - G) * Xt <= (3 * D - G) * D)
                    ok = ok and (2 * iq < 3 * D + 2 * (X - Xt)) and (2 * igt < D)
                else:
                    ok = (G * Xt + (2 * D - G) * X <= (3 * D - G) * D)
                    ok = ok and (2 * iqt < 3 * D + 2 * (Xt - X)) and (2 * ig < D)
            adm[i] = ok

            # necessary conditions in dimension nd
            ok = (2 * (iq + iqt) == nd * (D - ir - irt) + ig + igt)
            ok = ok and (ig < nd * ir) and (2 * nd * ir < nd * D + 2 * ig)
            ok = ok and (igt < nd * irt) and (2 * nd * irt < nd * D + 2 * igt)
            ok = ok and (iq + iqt <= D)
            ok = ok and (2 * iq < nd * D - 2 * nd * ir + 2 * ig)
            ok = ok and (2 * iqt < nd * D - 2 * nd * irt + 2 * igt)
            ok = ok and (_iabs((nd * ir - ig) - (nd * irt - igt)) <= D)
            nec[i] = ok
    return adm_arr, nec_arr


def expsum(const double complex[::1] amp, const double[::1] base,
           const double[::1] coef, const double[::1] p):
    """``out[j] = sum_m amp[m] * exp(i * (base[m] + p[j] * coef[m]))``."""
    cdef Py_ssize_t nm = amp.shape[0], nj = p.shape[0], j, m
    out_arr = np.empty(nj, dtype=np.complex128)
    cdef double complex[::1] out = out_arr
    cdef double re, im, ph, c, s, pj
    with nogil:
        for j in range(nj):
            re = 0.0
            im = 0.0
            pj = p[j]
            for m in range(nm):
                ph = base[m] + pj * coef[m]
                c = cos(ph)
                s = sin(ph)
                re = re + amp[m].real * c - amp[m].imag * s
                im = im + amp[m].real * s + amp[m].imag * c
            out[j] = re + 1j * im
    return out_arr


def kernel_sum(const double[:, ::1] nodes, const double complex[::1] weights,
               const double[:, ::1] targets, double inv4t):
    """``out[k] = sum_m weights[m] * exp(i * inv4t * |targets[k] - nodes[m]|^2)``."""
    cdef Py_ssize_t nm = nodes.shape[0], nk = targets.shape[0], k, m
    out_arr = np.empty(nk, dtype=np.complex128)
    cdef double complex[::1] out = out_arr
    cdef double re, im, ph, c, s, dx, dy, dz
    with nogil:
        for k in range(nk):
            re = 0.0
            im = 0.0
            for m in range(nm):
                dx = targets[k, 0] - nodes[m, 0]
                dy = targets[k, 1] - nodes[m, 1]
                dz = targets[k, 2] - nodes[m, 2]
                ph = inv4t * (dx * dx + dy * dy + dz * dz)
                c = cos(ph)
                s = sin(ph)
                re = re + weights[m].real * c - weights[m].imag * s
                im = im + weights[m].real * s + weights[m].imag * c
            out[k] = re + 1j * im
    return out_arr


def nonlinear_phase(double complex[::1] u, const double[::1] weight,
                    double beta, double factor):
    """In place ``u *= exp(-i * factor * weight * |u|**beta)``."""
    cdef Py_ssize_t n = u.shape[0], i
    cdef double m2, ph, c, s, re, im, half = 0.5 * beta
    cdef double *v = <double *> &u[0]
    with nogil:
        for i in range(n):
            re = v[2 * i]
            im = v[2 * i + 1]
            m2 = re * re + im * im
            if beta == 1.0:
                ph = sqrt(m2)
            elif beta == 2.0:
                ph = m2
            else:
                ph = pow(m2, half)
            ph = -factor * weight[i] * ph
            c = cos(ph)
            s = sin(ph)
            v[2 * i] = re * c - im * s
            v[2 * i + 1] = re * s + im * c
