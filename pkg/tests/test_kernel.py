import time

import numpy as np
import pytest

from prymtheta import _kernel_py
from prymtheta import theta as theta_mod

try:
    from prymtheta import _kernel
    HAVE_C = True
except ImportError:
    HAVE_C = False

RNG = np.random.default_rng(21)


def random_tau():
    a = RNG.normal(size=(6, 6))
    y = a @ a.T + 2.0 * np.eye(6)
    x = RNG.normal(size=(6, 6))
    x = 0.5 * (x + x.T)
    return x + 1j * y


@pytest.mark.skipif(not HAVE_C, reason="compiled kernel not built")
def test_backends_agree_on_sum():
    tau = random_tau()
    for _ in range(4):
        mp_ = RNG.integers(0, 2, 6) / 2
        mpp = RNG.integers(0, 2, 6) / 2
        z = RNG.normal(size=6) * 0.2 + 1j * RNG.normal(size=6) * 0.2
        vc, nc = _kernel.theta_sum(tau, mp_, mpp, z, 14.0)
        vp, np_ = _kernel_py.theta_sum(tau, mp_, mpp, z, 14.0)
        assert nc == np_
        assert abs(vc - vp) < 1e-12 * max(1.0, abs(vp))


@pytest.mark.skipif(not HAVE_C, reason="compiled kernel not built")
def test_backends_agree_on_enumeration():
    tau = random_tau()
    center = RNG.normal(size=6) * 0.4
    pc = _kernel.enum_ellipsoid(tau.imag, center, 9.0)
    pp = _kernel_py.enum_ellipsoid(tau.imag, center, 9.0)
    assert sorted(map(tuple, pc.astype(int))) == \
        sorted(map(tuple, pp.astype(int)))


def test_selected_backend_reported():
    assert theta_mod.backend_name() in ("c", "python")


@pytest.mark.skipif(not HAVE_C, reason="compiled kernel not built")
def test_compiled_kernel_is_faster_smoke():
    tau = random_tau()
    mp_ = np.zeros(6)
    z = np.zeros(6, dtype=complex)
    t0 = time.perf_counter()
    _kernel.theta_sum(tau, mp_, mp_, z, 18.0)
    tc = time.perf_counter() - t0
    t0 = time.perf_counter()
    _kernel_py.theta_sum(tau, mp_, mp_, z, 18.0)
    tp = time.perf_counter() - t0
    # smoke only: the compiled walk should never be dramatically slower
    assert tc < max(tp * 2.0, 0.5)
