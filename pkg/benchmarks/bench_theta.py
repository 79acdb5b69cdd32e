"""Benchmark the compiled theta kernel against the pure-Python fallback.

Usage: python benchmarks/bench_theta.py [repeats]
"""

import sys
import time

import numpy as np

from prymtheta import _kernel_py
from prymtheta.lattice import SIGMA1
from prymtheta.periods import BranchConfig, normalized_tau, period_matrix

try:
    from prymtheta import _kernel
except ImportError:
    _kernel = None


def bench(kernel, tau, rad2, repeats):
    mp_ = np.array([0.5, 0.5, 0, 0, 0.5, 0.5])
    mpp = np.array([0.5, 0.5, 0, 0, 0.5, 0.5])
    z = np.zeros(6, dtype=complex)
    val, n = kernel.theta_sum(tau, mp_, mpp, z, rad2)
    t0 = time.perf_counter()
    for _ in range(repeats):
        kernel.theta_sum(tau, mp_, mpp, z, rad2)
    dt = (time.perf_counter() - t0) / repeats
    return val, n, dt


def main():
    repeats = int(sys.argv[1]) if len(sys.argv) > 1 else 3
    cfg = BranchConfig(tuple(range(1, 9)))
    tau = normalized_tau(period_matrix(cfg), SIGMA1, label="Sigma1").tau
    for rad2 in (12.0, 20.0, 30.0):
        v_py, n, t_py = bench(_kernel_py, tau, rad2, repeats)
        line = f"rad2={rad2:5.1f}  points={n:8d}  python={t_py * 1e3:9.2f} ms"
        if _kernel is not None:
            v_c, n_c, t_c = bench(_kernel, tau, rad2, repeats)
            assert n_c == n and abs(v_c - v_py) < 1e-10 * max(1, abs(v_py))
            line += f"  compiled={t_c * 1e3:8.2f} ms  speedup={t_py / t_c:6.1f}x"
        else:
            line += "  (compiled kernel not built)"
        print(line)


if __name__ == "__main__":
    main()
