"""Numerical period integrals of the six anti-invariant differentials.

The curve w^4 = prod (z - x_j) is cut along downward rays below each branch
point; on the base sheet the branch of w is real positive on (-inf, x_1).
The base cycles are the intervals alpha_j = [x_j, x_{j+1}] (alpha_8 runs
from x_8 through infinity back to x_1) and the lattice cycles are
A_j = (1 - rho^2) alpha_j, B_j = rho A_j.

Row k of the period matrix integrates z^k dz / w^3 for k = 0..4 and
dz / w for the last row; the rho-eigenvalues are i and -i respectively.

All endpoint singularities are algebraic of exponent -3/4 (or -1/4) and are
absorbed exactly by Gauss-Jacobi nodes, so the quadrature converges
geometrically in the node count.
"""

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from functools import lru_cache

import numpy as np
from scipy.special import roots_jacobi

from . import exact
from .lattice import J_ST, P_MAT, Q_MAT, U_MAT, cycle_A, gram

ROW_POWERS = (0, 1, 2, 3, 4, 0)     # z-power per row
ROW_WEXP = (3, 3, 3, 3, 3, 1)       # w-exponent per row
ROW_EIGEN = (1j, 1j, 1j, 1j, 1j, -1j)

DEFAULT_NODES = 96


@dataclass(frozen=True)
class BranchConfig:
    """Eight strictly increasing real branch points."""

    x: tuple

    def __init__(self, x, min_gap_ratio=1e-4):
        x = tuple(float(v) for v in x)
        if len(x) != 8:
            raise ValueError("need exactly 8 branch points")
        span = x[-1] - x[0]
        if span <= 0 or any(b - a <= 0 for a, b in zip(x, x[1:])):
            raise ValueError("branch points must be strictly increasing")
        if min(b - a for a, b in zip(x, x[1:])) < min_gap_ratio * span:
            raise ValueError("near-collision configuration rejected")
        object.__setattr__(self, "x", x)

    def affine(self, a, b):
        if a <= 0:
            raise ValueError("need an orientation-preserving map")
        return BranchConfig(tuple(a * v + b for v in self.x))


@lru_cache(maxsize=64)
def _jacobi(nodes, a):
    t, w = roots_jacobi(nodes, a, a)
    return t, w


def branch_phase(j, s):
    """Phase of 1/w^s on alpha_j: w = |w| e^{-i j pi / 4} on that interval."""
    return np.exp(1j * np.pi * j * s / 4.0)


def branch_phase_continued(cfg, j, steps_per_arc=64):
    """Phase of w at the midpoint of alpha_j by stepwise continuation.

    Follows the real axis from left of x_1, passing above each branch point
    on a small semicircle, tracking the nearest fourth root at each step.
    Used to validate the closed-form branch_phase.
    """
    x = np.asarray(cfg.x)
    gaps = np.diff(x)
    r = gaps.min() / 3.0
    z0 = x[0] - (x[-1] - x[0]) * 0.5 - 1.0
    target = 0.5 * (x[j - 1] + x[j]) if j < 8 else x[-1] + 1.0

    def f(z):
        return np.prod(z - x)

    w = f(z0) ** 0.25
    assert abs(w.imag) < 1e-12 and w.real > 0
    path = [z0]
    for m in range(8):
        if x[m] >= target:
            break
        seg_end = x[m] - r
        path.extend(np.linspace(path[-1], seg_end, 32)[1:])
        path.extend(x[m] + r * np.exp(1j * np.linspace(np.pi, 0.0, steps_per_arc))[1:])
    path.extend(np.linspace(path[-1], target, 32)[1:])
    for z in path[1:]:
        principal = f(z) ** 0.25
        cands = [principal * 1j ** k for k in range(4)]
        w = min(cands, key=lambda c: abs(c - w))
    return w / abs(w)


def alpha_integral(cfg, j, row, nodes=DEFAULT_NODES):
    """Integral of the row-th differential over alpha_j on the base sheet."""
    if not 1 <= j <= 8:
        raise ValueError("j out of range")
    if not 0 <= row <= 5:
        raise ValueError("row out of range")
    x = np.asarray(cfg.x)
    k, s = ROW_POWERS[row], ROW_WEXP[row]
    a = -s / 4.0
    t, wgt = _jacobi(nodes, a)
    if j < 8:
        lo, hi = x[j - 1], x[j]
        h = (hi - lo) / 2.0
        z = (hi + lo) / 2.0 + h * t
        g = z ** k
        for m in range(8):
            if m not in (j - 1, j):
                g = g * np.abs(z - x[m]) ** a
        val = h ** (2 * a + 1) * float(wgt @ g)
        return branch_phase(j, s) * val
    # alpha_8 via u = 1/(z - c) with c in the middle of the configuration;
    # the integrand is analytic across u = 0 (the two points over infinity
    # are unramified) and w is real positive on both rays.
    c = 0.5 * (x[3] + x[4])
    u1, u2 = 1.0 / (x[0] - c), 1.0 / (x[7] - c)
    h = (u2 - u1) / 2.0
    u = (u2 + u1) / 2.0 + h * t
    g = (c + 1.0 / u) ** k * u ** (2 * s - 2)
    for m in range(1, 7):
        g = g * np.abs(1.0 - (x[m] - c) * u) ** a
    g = g * (c - x[0]) ** a * (x[7] - c) ** a
    return h ** (2 * a + 1) * float(wgt @ g)


def alpha_integral_refined(cfg, j, row, nodes=DEFAULT_NODES):
    """(value, error estimate) from one node-count doubling."""
    v1 = alpha_integral(cfg, j, row, nodes)
    v2 = alpha_integral(cfg, j, row, 2 * nodes)
    return v2, abs(v2 - v1)


@dataclass(frozen=True)
class PeriodMatrix:
    """6 x 12 matrix of periods over (A_1..A_6, B_1..B_6)."""

    Pi: np.ndarray
    error: float
    x: tuple

    def periods_of(self, vector):
        """Periods of an integer/rational combination of (A, B) cycles."""
        return self.Pi @ np.array([float(c) for c in vector])


def period_matrix(cfg, nodes=DEFAULT_NODES, workers=1, refine=True):
    """Assemble the period matrix; A-periods are twice the alpha integrals
    and B-periods are the rho-eigenvalue multiples of the A-periods."""
    jobs = [(j, row) for row in range(6) for j in range(1, 7)]

    def compute(args):
        j, row = args
        if refine:
            return alpha_integral_refined(cfg, j, row, nodes)
        return alpha_integral(cfg, j, row, nodes), 0.0

    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(compute, jobs))
    else:
        results = [compute(a) for a in jobs]
    Pi = np.zeros((6, 12), dtype=complex)
    err = 0.0
    for (j, row), (val, e) in zip(jobs, results):
        Pi[row, j - 1] = 2.0 * val
        Pi[row, 6 + j - 1] = ROW_EIGEN[row] * 2.0 * val
        err = max(err, 2.0 * e)
    return PeriodMatrix(Pi, err, cfg.x)


def period_matrix_to_tol(cfg, tol=1e-10, nodes=DEFAULT_NODES, workers=1):
    """Period matrix with node doubling until the relative error estimate
    meets tol.  Node counts are capped: beyond a few hundred nodes the
    quadrature rule's own node accuracy (about 1e-11 relative for the
    -3/4 weight) dominates and more nodes stop helping."""
    per = period_matrix(cfg, nodes=nodes, workers=workers)
    while per.error > tol * max(1.0, float(np.abs(per.Pi).max())) \
            and 2 * nodes <= 384:
        nodes *= 2
        per = period_matrix(cfg, nodes=nodes, workers=workers)
    return per


def cycle_relation_residuals(cfg, nodes=DEFAULT_NODES):
    """Relative residuals of the two homology relations among the A_j.

    Computes the alpha_7, alpha_8 integrals directly, so this exercises the
    branch and orientation conventions end to end.
    """
    res_sum, res_weighted = [], []
    for row in range(6):
        vals = [2.0 * alpha_integral(cfg, j, row, nodes) for j in range(1, 9)]
        scale = max(abs(v) for v in vals)
        res_sum.append(abs(sum(vals)) / scale)
        lam = ROW_EIGEN[row]
        tot = sum(sum(lam ** m for m in range(j)) * vals[j - 1]
                  for j in range(1, 8))
        res_weighted.append(abs(tot) / scale)
    return res_sum, res_weighted


@dataclass(frozen=True)
class NormalizedTau:
    tau: np.ndarray
    basis_label: str
    symmetry_residual: float
    min_imag_eigenvalue: float


def normalized_tau(periods, basis, label="", require_principal=True):
    """Normalized period matrix for a principal symplectic basis.

    basis: 12 vectors (a_1..a_6, b_1..b_6) in (A, B) coordinates with Gram
    J_ST under the half pairing.  The normalized differentials satisfy
    int_{b_j} omega_k = delta_{jk} and tau_{jk} = int_{a_j} omega_k.
    """
    if require_principal:
        g = gram(basis)
        if [list(r) for r in g] != [list(r) for r in J_ST]:
            raise ValueError("basis is not principal with the reference Gram")
    cols = np.array([[float(c) for c in v] for v in basis]).T
    per = periods.Pi @ cols
    pa, pb = per[:, :6], per[:, 6:]
    tau = np.linalg.solve(pb, pa).T
    sym = float(np.linalg.norm(tau - tau.T) / np.linalg.norm(tau))
    lam = float(np.linalg.eigvalsh(tau.imag).min())
    if sym > 1e-6:
        raise ValueError(f"tau fails symmetry ({sym:.2e})")
    if lam <= 0:
        raise ValueError("Im tau is not positive definite")
    return NormalizedTau(0.5 * (tau + tau.T), label, sym, lam)


def tau_u_residual(ntau):
    """|| (tau U)^2 + I ||_F for the good-basis involution identity."""
    U = np.array(U_MAT, dtype=float)
    m = ntau.tau @ U
    return float(np.linalg.norm(m @ m + np.eye(6)))


def hermitian_gram():
    """H = (Q - iP)/2 on the A-cycle coordinates."""
    return 0.5 * (np.array(Q_MAT, dtype=complex) - 1j * np.array(P_MAT, dtype=complex))


def ball_point(periods):
    """The period functional of dz/w as (f, h(v, v)).

    f_j = int_{A_j} dz/w; v solves h(v, .) = f against the hermitian Gram;
    h(v, v) < 0 characterizes the complex ball.
    """
    f = periods.Pi[5, :6].copy()
    H = hermitian_gram()
    cbar = np.linalg.solve(H.T, f)          # row vector: cbar H = f
    norm = complex(f @ np.linalg.solve(H, np.conj(f)))
    norm2 = complex(cbar @ H @ np.conj(cbar))
    assert abs(norm - norm2) < 1e-8 * max(abs(norm), 1.0)
    if abs(norm.imag) > 1e-6 * abs(norm.real):
        raise ValueError("ball norm is not real; convention violated")
    return f, norm.real


def sum_A_periods(cfg, nodes=DEFAULT_NODES):
    """Direct check data: per-row values of sum over all 8 A-cycles."""
    out = []
    for row in range(6):
        vals = [2.0 * alpha_integral(cfg, j, row, nodes) for j in range(1, 9)]
        out.append((sum(vals), max(abs(v) for v in vals)))
    return out


def lattice_vs_direct_residual(periods, cfg, nodes=DEFAULT_NODES):
    """Compare direct alpha_7 / alpha_8 integrals with the homology
    expressions of A_7, A_8 through the basis cycles."""
    worst = 0.0
    for j in (7, 8):
        coords = cycle_A(j)
        for row in range(6):
            direct = 2.0 * alpha_integral(cfg, j, row, nodes)
            via = periods.periods_of(coords)[row]
            scale = max(abs(direct), abs(via), 1e-30)
            worst = max(worst, abs(direct - via) / scale)
    return worst


def export_json(periods, ntau=None):
    out = {
        "x": list(periods.x),
        "error_estimate": periods.error,
        "rows": ["z^0 dz/w^3", "z^1 dz/w^3", "z^2 dz/w^3",
                 "z^3 dz/w^3", "z^4 dz/w^3", "dz/w"],
        "columns": [f"A{j}" for j in range(1, 7)] + [f"B{j}" for j in range(1, 7)],
        "Pi_re": periods.Pi.real.tolist(),
        "Pi_im": periods.Pi.imag.tolist(),
    }
    if ntau is not None:
        out["tau"] = {
            "basis": ntau.basis_label,
            "re": ntau.tau.real.tolist(),
            "im": ntau.tau.imag.tolist(),
            "symmetry_residual": ntau.symmetry_residual,
            "min_imag_eigenvalue": ntau.min_imag_eigenvalue,
        }
    return out


def random_configs(count, seed, low=-5.0, high=5.0):
    """Seeded strictly-increasing configurations with a healthy gap."""
    rng = np.random.default_rng(seed)
    out = []
    while len(out) < count:
        pts = np.sort(rng.uniform(low, high, 8))
        span = pts[-1] - pts[0]
        if np.diff(pts).min() > 0.02 * span:
            out.append(BranchConfig(tuple(pts)))
    return out
