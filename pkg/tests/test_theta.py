from fractions import Fraction

import numpy as np
import pytest

from prymtheta import _kernel_py
from prymtheta.lattice import SIGMA1, U0_VEC, U_MAT
from prymtheta.periods import BranchConfig, normalized_tau, period_matrix
from prymtheta.theta import (Characteristic, GENERIC_Z, SIGMA_U,
                             ThetaEvaluator, admissible_binary_vectors,
                             c_constant, c_constant_auto, c_ratio_formula,
                             product_cancellation_residual, e_frac,
                             quadratic_relation_sides,
                             quadratic_relation_sides_binary, tau_shift_u,
                             theta, theta_series_1d,
                             transform_characteristic)

CFG = BranchConfig(tuple(range(1, 9)))
CFG2 = BranchConfig((0.5, 1.7, 2.3, 4.1, 5.9, 7.2, 8.8, 10.1))


def tau_of(cfg):
    return normalized_tau(period_matrix(cfg), SIGMA1, label="Sigma1").tau


TAU1 = tau_of(CFG)
TAU2 = tau_of(CFG2)
EV1 = ThetaEvaluator(TAU1)
EV2 = ThetaEvaluator(TAU2)
U = np.array(U_MAT, dtype=float)
U0 = np.array(U0_VEC, dtype=float)


def sharp_evaluator(tau):
    return ThetaEvaluator(U @ np.linalg.inv(-U @ tau + np.eye(6)))


def test_synthetic_identity_matrix():
    ev = ThetaEvaluator(1j * np.eye(6), tol=1e-13)
    got = ev.constant(Characteristic.zero())
    oracle = theta_series_1d(1.0) ** 6
    assert abs(got - oracle) < 1e-10


def test_invalid_tau_rejected():
    with pytest.raises(ValueError):
        ThetaEvaluator(np.eye(6))          # real tau
    with pytest.raises(ValueError):
        ThetaEvaluator(np.ones((6, 6)) * 1j + np.triu(np.ones((6, 6))))


def test_backend_agreement_with_fallback():
    ch = Characteristic.make([0, Fraction(1, 2), 0, 0, Fraction(1, 2), 0],
                             [Fraction(1, 2), 0, 0, Fraction(1, 2), 0, 0])
    z = GENERIC_Z
    mp_, mpp = ch.floats()
    v_py, n_py = _kernel_py.theta_sum(TAU1, mp_, mpp, z, EV1.rad2)
    v_cur = EV1.raw(mp_, mpp, z)[0]
    assert abs(v_py - v_cur) < 1e-12 * max(1.0, abs(v_py))


def test_enumeration_against_box_scan():
    rng = np.random.default_rng(0)
    a = rng.normal(size=(6, 6))
    Y = a @ a.T + 1.5 * np.eye(6)
    center = rng.normal(size=6) * 0.3
    rad2 = 6.5
    pts = _kernel_py.enum_ellipsoid(Y, center, rad2)
    box = []
    rngs = [np.arange(-4, 5)] * 6
    grid = np.stack(np.meshgrid(*rngs, indexing="ij"), axis=-1).reshape(-1, 6)
    d = grid - center
    q = np.einsum("ij,jk,ik->i", d, Y, d)
    box = grid[q <= rad2]
    assert sorted(map(tuple, pts.astype(int))) == sorted(map(tuple, box))


def test_truncation_soundness():
    loose = ThetaEvaluator(TAU1, tol=1e-6)
    tight = ThetaEvaluator(TAU1, tol=1e-12)
    ch = Characteristic.from_mu((1, 1, 0, 0, 1, 1))
    a = loose.value(ch)
    b = tight.value(ch)
    # the change is controlled by the reported tail bound plus float noise
    assert abs(a.value - b.value) <= a.tail_bound + 1e-12
    assert b.tail_bound < a.tail_bound


def test_quasi_periodicity():
    rng = np.random.default_rng(4)
    ch = Characteristic.make([0, Fraction(1, 2), 0, Fraction(1, 2), 0, 0],
                             [Fraction(1, 2), 0, 0, 0, Fraction(1, 2), 0])
    mp_, mpp = ch.floats()
    for _ in range(3):
        z = rng.normal(size=6) * 0.3 + 1j * rng.normal(size=6) * 0.3
        r = rng.integers(-2, 3, 6).astype(float)
        s = rng.integers(-2, 3, 6).astype(float)
        lhs = EV1.value(ch, z + r @ TAU1 + s).value
        phase = np.exp(2j * np.pi * (-0.5 * r @ TAU1 @ r - r @ z
                                     + mp_ @ s - mpp @ r))
        rhs = phase * EV1.value(ch, z).value
        assert abs(lhs - rhs) < 1e-8 * max(abs(lhs), abs(rhs))


def test_characteristic_periodicity():
    ch = Characteristic.from_mu((0, 0, 1, 1, 1, 1))
    k2 = (1, -1, 0, 2, 0, 1)
    shifted = ch.shift([0] * 6, k2)
    phase = e_frac(sum(a * b for a, b in zip(ch.m1, k2)))
    assert abs(EV1.constant(shifted) - phase * EV1.constant(ch)) < 1e-10
    # integer shift of m' is free
    shifted1 = ch.shift((2, 0, -1, 0, 0, 3), [0] * 6)
    assert abs(EV1.constant(shifted1) - EV1.constant(ch)) < 1e-10


def test_parity():
    for mu in ((0,) * 6, (0, 0, 1, 1, 1, 1), (1, 1, 0, 0, 1, 1),
               (1, 1, 1, 1, 0, 0)):
        assert Characteristic.from_mu(mu).parity() == 0


def test_reduced():
    ch = Characteristic.make([Fraction(-1, 2), 0, Fraction(3, 2), 0, 0, 0],
                             [0, Fraction(-3, 4), 0, 0, 1, 0])
    red = ch.reduced()
    assert all(0 <= x < 1 for x in red.m1 + red.m2)


def test_tau_shift_u():
    shifted0, phase0 = tau_shift_u(Characteristic.zero())
    assert phase0 == 0
    assert shifted0.m2 == tuple(Fraction(v, 2) for v in U0_VEC)
    rng = np.random.default_rng(9)
    evU = ThetaEvaluator(TAU1 + U)
    for _ in range(4):
        ch = Characteristic.make(rng.integers(0, 2, 6) / 2,
                                 rng.integers(0, 2, 6) / 2)
        shifted, phase = tau_shift_u(ch)
        lhs = evU.constant(ch)
        rhs = e_frac(phase) * EV1.constant(shifted)
        assert abs(lhs - rhs) < 1e-8 * max(1.0, abs(lhs))


def test_transform_characteristic_identity():
    from prymtheta.exact import identity
    ch = Characteristic.make([0, Fraction(1, 2), 0, 0, 0, 0],
                             [Fraction(1, 2), 0, 0, Fraction(1, 2), 0, 0])
    out = transform_characteristic(identity(12), ch)
    assert out == ch


def test_transform_characteristic_sigma_u_examples():
    half = Fraction(1, 2)
    rng = np.random.default_rng(1)
    for _ in range(5):
        app = tuple(Fraction(int(b), 2) for b in rng.integers(0, 2, 6))
        appU = tuple(sum(app[i] * U_MAT[i][j] for i in range(6))
                     for j in range(6))
        m = Characteristic.make([-x for x in appU], app)
        out = transform_characteristic([list(r) for r in SIGMA_U], m)
        assert out.m1 == tuple(-half * v for v in U0_VEC)
        assert out.m2 == app
    v1 = tuple(Fraction(int(b)) for b in (1, 0, 1, 1, 0, 1))
    app = tuple(Fraction(int(b), 2) for b in (0, 1, 1, 0, 0, 1))
    u0h = tuple(Fraction(v, 2) for v in U0_VEC)
    first = tuple(-sum((app[i] + u0h[i]) * U_MAT[i][j] for i in range(6))
                  for j in range(6))
    v1U = tuple(sum(v1[i] * U_MAT[i][j] for i in range(6)) for j in range(6))
    second = tuple(v1U[j] + app[j] + u0h[j] for j in range(6))
    m = Characteristic.make(first, second)
    out = transform_characteristic([list(r) for r in SIGMA_U], m)
    assert out.m1 == tuple(v1[j] - u0h[j] for j in range(6))
    assert out.m2 == tuple(u0h[j] + app[j] for j in range(6))


def test_transform_characteristic_rejects_non_symplectic():
    bad = [[2 if i == j else 0 for j in range(12)] for i in range(12)]
    with pytest.raises(ValueError):
        transform_characteristic(bad, Characteristic.zero())


def test_c_constants():
    evs = sharp_evaluator(TAU1)
    z6 = [0] * 6
    c00 = c_constant(z6, z6, EV1, evs)
    assert abs(c00 ** 2 - 1) < 1e-6
    # the constant is independent of z once the Gaussian cocycle is included
    c00z = c_constant(z6, z6, EV1, evs, z=GENERIC_Z)
    assert abs(c00 - c00z) < 1e-8
    rng = np.random.default_rng(7)
    for _ in range(50):
        a = rng.integers(0, 2, 6) / 2
        b = rng.integers(0, 2, 6) / 2
        got = c_constant_auto(a, b, EV1, evs) / c00
        want = e_frac(c_ratio_formula(a, b))
        assert abs(got - want) < 1e-6


def test_c00_independent_of_tau():
    evs1 = sharp_evaluator(TAU1)
    evs2 = sharp_evaluator(TAU2)
    c1 = c_constant([0] * 6, [0] * 6, EV1, evs1)
    c2 = c_constant([0] * 6, [0] * 6, EV2, evs2)
    assert abs(c1 - c2) < 1e-6


def test_quadratic_relation_integer_vectors():
    rng = np.random.default_rng(13)
    scale = abs(EV1.constant(Characteristic.zero())) ** 2
    tested_nonzero = 0
    for _ in range(6):
        v1 = rng.integers(-3, 4, 6)
        lhs, rhs = quadratic_relation_sides(EV1, v1)
        assert abs(lhs - rhs) < 1e-6 * max(scale, abs(lhs), abs(rhs))
        if abs(lhs) > 1e-3 * scale:
            tested_nonzero += 1
    lhs, rhs = quadratic_relation_sides(EV1, (-2, -1, -1, -1, 0, -3))
    assert abs(lhs) > 1e-3 * scale and abs(lhs - rhs) < 1e-6 * abs(lhs)


def test_quadratic_relation_binary_vectors():
    scale = abs(EV1.constant(Characteristic.zero())) ** 2
    vecs = [tuple((bits >> i) & 1 for i in range(6))
            for bits in range(0, 64, 5)]
    vecs.append(U0_VEC)       # degenerate for the pairing identity, but the
    for v1 in vecs:           # two-sided relation itself still holds there
        lhs, rhs = quadratic_relation_sides_binary(EV1, v1)
        assert abs(lhs - rhs) < 1e-6 * max(scale, abs(lhs), abs(rhs))
    with pytest.raises(ValueError):
        quadratic_relation_sides_binary(EV1, (2, 0, 0, 0, 0, 0))


def test_product_cancellation_all_admissible():
    adm = admissible_binary_vectors()
    assert len(adm) == 10
    assert U0_VEC not in adm
    for ev in (EV1, EV2):
        for v1 in adm:
            assert product_cancellation_residual(ev, v1) < 1e-6


def test_product_cancellation_degenerates_at_u0():
    # for v1 = U0 the pairing identity reads 2 theta_0 theta_{U0/2,U0/2} = 0,
    # which fails: theta_{U0/2,U0/2} does not vanish on the period locus.
    # This pins the exclusion in admissible_binary_vectors.
    assert product_cancellation_residual(EV1, U0_VEC) > 1e-3


def test_theta_convenience_and_extended_backend():
    ch = Characteristic.zero()
    v_double = theta(ch, 1j * np.eye(6), tol=1e-12).value
    v_ext = theta(ch, 1j * np.eye(6), tol=1e-12, precision="extended").value
    assert abs(v_double - v_ext) < 1e-10
    oracle = theta_series_1d(1.0) ** 6
    assert abs(v_ext - oracle) < 1e-12
