"""Pure-Python/numpy theta kernel: ellipsoid enumeration + phase summation.

Same contract as the compiled kernel in _kernel.pyx; used as the fallback
when the extension is not built.  The enumeration is a depth-first
Fincke-Pohst walk with Cholesky bounds; the summation is vectorized.
"""

from array import array

import numpy as np

BACKEND = "python"


def enum_ellipsoid(Y, center, rad2):
    """Integer points x with (x - center) Y (x - center)^T <= rad2.

    Returns an (n_points, n) float array.
    """
    Y = np.asarray(Y, dtype=np.float64)
    center = np.asarray(center, dtype=np.float64)
    n = Y.shape[0]
    R = np.linalg.cholesky(Y).T
    buf = array("i")
    x = [0] * n

    def rec(k, resid):
        s = 0.0
        for j in range(k + 1, n):
            s += R[k, j] * (x[j] - center[j])
        half = np.sqrt(resid) / R[k, k]
        mid = center[k] - s / R[k, k]
        lo = int(np.ceil(mid - half))
        hi = int(np.floor(mid + half))
        for v in range(lo, hi + 1):
            contrib = (R[k, k] * (v - center[k]) + s) ** 2
            if contrib > resid:
                continue
            x[k] = v
            if k == 0:
                buf.extend(x)
            else:
                rec(k - 1, resid - contrib)

    rec(n - 1, rad2)
    if not len(buf):
        return np.zeros((0, n))
    return np.frombuffer(buf, dtype=np.int32).reshape(-1, n).astype(np.float64)


def theta_sum(tau, mp, mpp, z, rad2):
    """Truncated sum of e(1/2 (xi+mp) tau (xi+mp)^T + (z+mpp)(xi+mp)^T).

    Returns (value, n_points).  The enumeration region is the ellipsoid of
    squared radius rad2 around the maximizing center of the summand.
    """
    tau = np.asarray(tau, dtype=complex)
    mp = np.asarray(mp, dtype=np.float64)
    mpp = np.asarray(mpp, dtype=np.float64)
    z = np.asarray(z, dtype=complex)
    Y = tau.imag
    cy = -np.linalg.solve(Y, z.imag)
    xi = enum_ellipsoid(Y, cy - mp, rad2)
    if xi.shape[0] == 0:
        return 0.0 + 0.0j, 0
    y = xi + mp
    quad = np.einsum("ij,jk,ik->i", y, tau, y)
    lin = y @ (z + mpp)
    return np.exp(2j * np.pi * (0.5 * quad + lin)).sum(), xi.shape[0]
