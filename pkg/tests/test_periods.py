import mpmath
import numpy as np
import pytest

from prymtheta.lattice import SIGMA1, U_MAT
from prymtheta.periods import (BranchConfig, alpha_integral,
                               alpha_integral_refined, ball_point,
                               branch_phase, branch_phase_continued,
                               cycle_relation_residuals,
                               lattice_vs_direct_residual, normalized_tau,
                               period_matrix, random_configs, sum_A_periods,
                               tau_u_residual, export_json)

CFG = BranchConfig(tuple(range(1, 9)))


def test_config_validation():
    with pytest.raises(ValueError):
        BranchConfig((1, 2, 3, 4, 5, 6, 7))
    with pytest.raises(ValueError):
        BranchConfig((1, 2, 3, 4, 5, 6, 8, 7))
    with pytest.raises(ValueError):
        BranchConfig((1, 1 + 1e-9, 3, 4, 5, 6, 7, 8))


def test_quadrature_convergence():
    for j, row in ((1, 0), (4, 3), (8, 5), (8, 2)):
        v1 = alpha_integral(CFG, j, row, nodes=64)
        v2 = alpha_integral(CFG, j, row, nodes=128)
        assert abs(v2 - v1) < 1e-10 * max(abs(v2), 1.0)


def test_quadrature_error_decreases():
    # geometric convergence on an analytic integrand: coarse node counts
    # show the decay before the double-precision floor is reached
    errs = [alpha_integral_refined(CFG, 8, 4, nodes=n)[1] for n in (4, 8, 16)]
    floor = 1e-15
    assert max(errs[1], floor) < errs[0]
    assert max(errs[2], floor) <= max(errs[1], floor)
    assert alpha_integral_refined(CFG, 3, 1, nodes=64)[1] < 1e-12


def test_alpha8_against_adaptive_oracle():
    # independent high-precision evaluation: substitute u = u1 + w^4 (resp.
    # u2 - w^4) so the -s/4 endpoint singularities cancel symbolically and
    # tanh-sinh integrates a regular function
    x = [mpmath.mpf(v) for v in CFG.x]
    c = (x[3] + x[4]) / 2
    u1, u2 = 1 / (x[0] - c), 1 / (x[7] - c)
    for row, (k, s) in ((0, (0, 3)), (5, (0, 1)), (4, (4, 3))):
        e = mpmath.mpf(-s) / 4

        def base(u, skip):
            out = (c + 1 / u) ** k * u ** (2 * s - 2)
            for m in range(8):
                if m != skip:
                    out *= (1 - (x[m] - c) * u) ** e
            return out

        with mpmath.workdps(40):
            # (w^4)^e * 4 w^3 = 4 w^{3-s} after the substitution
            left = mpmath.quad(
                lambda w: 4 * mpmath.mpf(w) ** (3 - s)
                * base(u1 + mpmath.mpf(w) ** 4, 0) * (c - x[0]) ** e,
                [0, (-u1) ** mpmath.mpf("0.25")])
            right = mpmath.quad(
                lambda w: 4 * mpmath.mpf(w) ** (3 - s)
                * base(u2 - mpmath.mpf(w) ** 4, 7) * (x[7] - c) ** e,
                [0, u2 ** mpmath.mpf("0.25")])
            oracle = left + right
        got = alpha_integral(CFG, 8, row)
        assert abs(got - float(oracle)) < 1e-8 * max(1.0, abs(got))


def test_symmetric_config_reality():
    cfg = BranchConfig((-4, -3, -2, -1, 1, 2, 3, 4))
    val = alpha_integral(cfg, 4, 5)   # dz/w over the middle interval
    # z -> -z symmetry makes the modulus integral even; the phase is
    # e^{i pi 4 / 4} = -1, so the value is real negative (frozen sign).
    assert abs(val.imag) < 1e-12 * abs(val)
    assert val.real < 0


def test_cycle_relations():
    rs, rw = cycle_relation_residuals(CFG)
    assert max(rs) < 1e-8
    assert max(rw) < 1e-8


def test_lattice_vs_direct_a7_a8():
    per = period_matrix(CFG)
    assert lattice_vs_direct_residual(per, CFG) < 1e-8


def test_branch_phase_continuation_matches_closed_form():
    for cfg in (CFG, BranchConfig((-2.3, -1.1, -0.2, 0.7, 1.9, 2.4, 3.8, 5.1))):
        for j in range(1, 9):
            got = branch_phase_continued(cfg, j)
            want = np.exp(-1j * np.pi * j / 4.0)
            assert abs(got - want) < 1e-9


def test_tau_properties():
    per = period_matrix(CFG)
    nt = normalized_tau(per, SIGMA1, label="Sigma1")
    assert nt.symmetry_residual < 1e-8
    assert nt.min_imag_eigenvalue > 0
    assert tau_u_residual(nt) < 1e-7
    U = np.array(U_MAT, dtype=float)
    det = np.linalg.det(-U @ nt.tau + np.eye(6))
    assert abs(det - (-8.0)) < 1e-6 * 8.0


def test_non_principal_basis_rejected():
    per = period_matrix(CFG)
    from prymtheta.lattice import SIGMA
    with pytest.raises(ValueError):
        normalized_tau(per, SIGMA, label="Sigma")


def test_sum_of_A_periods():
    for total, scale in sum_A_periods(CFG):
        assert abs(total) < 1e-8 * scale


def test_ball_point_and_invariance():
    per = period_matrix(CFG)
    f, norm = ball_point(per)
    assert norm < 0
    # affine map x -> 2x + 1 rescales the functional by one complex scalar
    per2 = period_matrix(CFG.affine(2.0, 1.0))
    f2, norm2 = ball_point(per2)
    ratios = f2 / f
    assert np.abs(ratios - ratios[0]).max() < 1e-9 * abs(ratios[0])
    assert norm2 < 0
    # sign stable under quadrature refinement
    per3 = period_matrix(CFG, nodes=160)
    _, norm3 = ball_point(per3)
    assert norm3 < 0 and abs(norm3 - norm) < 1e-8 * abs(norm)


def test_ball_point_random_configs():
    for cfg in random_configs(20, seed=20240801):
        per = period_matrix(cfg, refine=False)
        _, norm = ball_point(per)
        assert norm < 0


def test_parallel_workers_match():
    a = period_matrix(CFG, workers=1, refine=False)
    b = period_matrix(CFG, workers=4, refine=False)
    assert np.abs(a.Pi - b.Pi).max() == 0.0


def test_period_matrix_to_tol():
    from prymtheta.periods import period_matrix_to_tol
    per = period_matrix_to_tol(CFG, tol=1e-10)
    assert per.error <= 1e-10 * max(1.0, float(np.abs(per.Pi).max()))


def test_export_json():
    per = period_matrix(CFG)
    nt = normalized_tau(per, SIGMA1, label="Sigma1")
    doc = export_json(per, nt)
    assert len(doc["columns"]) == 12
    assert doc["tau"]["basis"] == "Sigma1"
    assert doc["error_estimate"] < 1e-8
