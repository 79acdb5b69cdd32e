# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled theta kernel: Fincke-Pohst enumeration fused with phase summation.

Mirrors _kernel_py.theta_sum / enum_ellipsoid.  The summation walk never
materializes the point set, so memory stays O(n).
"""

import numpy as np

cimport cython
from libc.math cimport ceil, cos, exp, floor, sin, sqrt

BACKEND = "c"

cdef double TWO_PI = 6.283185307179586476925286766559

DEF MAXDIM = 16


@cython.cdivision(True)
cdef long _walk(double[:, ::1] R, double[::1] center, double rad2,
                double[:, ::1] tre, double[:, ::1] tim,
                double[::1] mp, double[::1] wre, double[::1] wim,
                bint summing, double* out_re, double* out_im,
                int[:, ::1] pts_buf) except -1:
    """Iterative depth-first walk over lattice points in the ellipsoid.

    summing: accumulate exp(2 pi i (y tau y^T / 2 + y w^T)) with y = x + mp;
    otherwise write the points into pts_buf (must be large enough).
    Returns the number of points visited.
    """
    cdef int n = R.shape[0]
    cdef long count = 0
    cdef int k, j, i
    cdef double s, halfw, mid, contrib
    cdef double qre, qim, lre, lim, ph_re, ph_im, mag, yi, yj
    cdef long[MAXDIM] x
    cdef double[MAXDIM] residual
    cdef double[MAXDIM] sval
    cdef long[MAXDIM] hi_a

    if n > MAXDIM:
        raise ValueError("dimension too large for the compiled kernel")

    k = n - 1
    residual[k] = rad2
    while True:
        # entering level k with residual[k] set: compute bounds
        s = 0.0
        for j in range(k + 1, n):
            s += R[k, j] * (x[j] - center[j])
        sval[k] = s
        halfw = sqrt(residual[k]) / R[k, k]
        mid = center[k] - s / R[k, k]
        x[k] = <long>ceil(mid - halfw) - 1
        hi_a[k] = <long>floor(mid + halfw)
        while True:
            x[k] += 1
            if x[k] > hi_a[k]:
                k += 1
                if k >= n:
                    return count
                continue
            contrib = R[k, k] * (x[k] - center[k]) + sval[k]
            contrib = contrib * contrib
            if contrib > residual[k]:
                continue
            if k == 0:
                if summing:
                    qre = 0.0
                    qim = 0.0
                    lre = 0.0
                    lim = 0.0
                    for i in range(n):
                        yi = x[i] + mp[i]
                        lre += yi * wre[i]
                        lim += yi * wim[i]
                        for j in range(n):
                            yj = x[j] + mp[j]
                            qre += yi * tre[i, j] * yj
                            qim += yi * tim[i, j] * yj
                    ph_re = TWO_PI * (0.5 * qre + lre)
                    ph_im = TWO_PI * (0.5 * qim + lim)
                    mag = exp(-ph_im)
                    out_re[0] += mag * cos(ph_re)
                    out_im[0] += mag * sin(ph_re)
                else:
                    for i in range(n):
                        pts_buf[count, i] = <int>x[i]
                count += 1
                continue
            residual[k - 1] = residual[k] - contrib
            k -= 1
            break


def theta_sum(tau, mp, mpp, z, rad2):
    """Truncated theta sum; same contract as _kernel_py.theta_sum."""
    tau = np.ascontiguousarray(np.asarray(tau, dtype=complex))
    cdef double[:, ::1] tre = np.ascontiguousarray(tau.real)
    cdef double[:, ::1] tim = np.ascontiguousarray(tau.imag)
    mp_a = np.ascontiguousarray(np.asarray(mp, dtype=np.float64))
    mpp_a = np.asarray(mpp, dtype=np.float64)
    z_a = np.asarray(z, dtype=complex)
    w = z_a + mpp_a
    cdef double[::1] wre = np.ascontiguousarray(w.real)
    cdef double[::1] wim = np.ascontiguousarray(w.imag)
    Y = tau.imag
    center = np.ascontiguousarray(-np.linalg.solve(Y, z_a.imag) - mp_a)
    R = np.ascontiguousarray(np.linalg.cholesky(Y).T)
    cdef double[:, ::1] Rv = R
    cdef double[::1] cv = center
    cdef double[::1] mpv = mp_a
    cdef double out_re = 0.0
    cdef double out_im = 0.0
    cdef int[:, ::1] dummy = np.zeros((1, tau.shape[0]), dtype=np.int32)
    n = _walk(Rv, cv, float(rad2), tre, tim, mpv, wre, wim,
              True, &out_re, &out_im, dummy)
    return complex(out_re, out_im), int(n)


def enum_ellipsoid(Y, center, rad2):
    """Integer points in the ellipsoid; same contract as the fallback."""
    Y = np.asarray(Y, dtype=np.float64)
    n = Y.shape[0]
    center_a = np.ascontiguousarray(np.asarray(center, dtype=np.float64))
    R = np.ascontiguousarray(np.linalg.cholesky(Y).T)
    cdef double[:, ::1] Rv = R
    cdef double[::1] cv = center_a
    zmat = np.zeros((n, n), dtype=np.float64)
    zvec = np.zeros(n, dtype=np.float64)
    cdef double[:, ::1] zm = zmat
    cdef double[::1] zv = zvec
    cdef double out_re = 0.0
    cdef double out_im = 0.0
    cdef long cnt = _count_only(Rv, cv, float(rad2))
    buf = np.zeros((max(cnt, 1), n), dtype=np.int32)
    cdef int[:, ::1] bufv = buf
    got = _walk(Rv, cv, float(rad2), zm, zm, zv, zv, zv,
                False, &out_re, &out_im, bufv)
    return buf[:got].astype(np.float64)


@cython.cdivision(True)
cdef long _count_only(double[:, ::1] R, double[::1] center, double rad2) except -1:
    cdef int n = R.shape[0]
    cdef long count = 0
    cdef int k, j
    cdef double s, halfw, mid, contrib
    cdef long[MAXDIM] x
    cdef double[MAXDIM] residual
    cdef double[MAXDIM] sval
    cdef long[MAXDIM] hi_a

    k = n - 1
    residual[k] = rad2
    while True:
        s = 0.0
        for j in range(k + 1, n):
            s += R[k, j] * (x[j] - center[j])
        sval[k] = s
        halfw = sqrt(residual[k]) / R[k, k]
        mid = center[k] - s / R[k, k]
        x[k] = <long>ceil(mid - halfw) - 1
        hi_a[k] = <long>floor(mid + halfw)
        while True:
            x[k] += 1
            if x[k] > hi_a[k]:
                k += 1
                if k >= n:
                    return count
                continue
            contrib = R[k, k] * (x[k] - center[k]) + sval[k]
            contrib = contrib * contrib
            if contrib > residual[k]:
                continue
            if k == 0:
                count += 1
                continue
            residual[k - 1] = residual[k] - contrib
            k -= 1
            break
