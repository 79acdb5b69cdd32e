"""The 105 squared theta-constant forms and the partition-polynomial map.

For each coset representative g the form is

    T_g = det(gamma tau + delta)^{-1} theta_{m1}(tau#_g) theta_{m3}(tau#_g),

with (alpha beta; gamma delta) the change of basis from g(Sigma1) to Sigma1
and tau#_g the normalized period matrix of g(Sigma1).  The squared forms
are compared against the partition polynomials

    P_sigma = prod_k (x_{(2k-1) sigma} - x_{(2k) sigma}),

through the projectively invariant identity

    T_g^2 / T_1^2 = sgn(pi(g)) P_{pi(g)} / P_1.

With the period normalization used here (Im tau > 0 for the reference
symplectic basis) the stabilizer character of T^2 is trivial, so T_g^2
depends only on the partition and the right-hand side above is the
canonical signed partition polynomial; see the README conventions section.
"""

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import product as iproduct

import numpy as np

from . import exact, f2, lattice
from .lattice import (SIGMA1, SIGMA_B, U_MAT, basis_change, coset_table,
                      element_f2_rows, identity_element, reflection_pair,
                      transform_basis, translation_vector)
from .periods import NormalizedTau, normalized_tau, period_matrix
from .theta import Characteristic, ThetaEvaluator, e_frac

MU_LIST = (
    (0, 0, 0, 0, 0, 0),
    (0, 0, 1, 1, 1, 1),
    (1, 1, 0, 0, 1, 1),
    (1, 1, 1, 1, 0, 0),
    (1, 1, 1, 1, 1, 1),
    (1, 1, 0, 0, 0, 0),
    (0, 0, 1, 1, 0, 0),
    (0, 0, 0, 0, 1, 1),
)

#: 1-based indices of the mu's with mu U mu^T in 4Z -- the characteristics
#: whose theta constants do not vanish identically on the period locus.
#: (The other four vanish there; verified numerically in the tests.)
EV_INDICES = (1, 2, 3, 4)

#: Row/column order of the reference 4x4 transformation matrix.
EV_ORDER = (1, 4, 3, 2)


def mu_u(mu):
    return tuple(sum(mu[i] * U_MAT[i][j] for i in range(6)) for j in range(6))


def mu_characteristic(j):
    """m_j = (mu_j/2, mu_j U/2) for 1-based j."""
    return Characteristic.from_mu(MU_LIST[j - 1])


def ev_indices_by_criterion():
    out = []
    for j, mu in enumerate(MU_LIST, start=1):
        muU = mu_u(mu)
        if sum(a * b for a, b in zip(mu, muU)) % 4 == 0:
            out.append(j)
    return tuple(out)


def s1_characteristics():
    return [mu_characteristic(j) for j in range(1, 9)]


# ---------------------------------------------------------------------------
# partition polynomials

def perm_polynomial(sigma, x):
    """P_sigma = prod (x_{(2k-1)sigma} - x_{(2k)sigma}), right action."""
    out = 1.0
    for k in range(4):
        out *= x[sigma[2 * k] - 1] - x[sigma[2 * k + 1] - 1]
    return out


def partition_polynomial(partition, x):
    """Sorted-pair convention: prod over pairs (a < b) of (x_a - x_b)."""
    out = 1.0
    for a, b in partition:
        out *= x[a - 1] - x[b - 1]
    return out


def sorted_permutation(partition):
    """Permutation sending (1..8) to the concatenated sorted pairs."""
    flat = [i for blk in partition for i in blk]
    return tuple(flat)


def perm_sign(sigma):
    seen = [False] * 8
    sign = 1
    for i in range(8):
        if seen[i]:
            continue
        j, clen = i, 0
        while not seen[j]:
            seen[j] = True
            j = sigma[j] - 1
            clen += 1
        if clen % 2 == 0:
            sign = -sign
    return sign


def signed_partition_polynomial(partition, x):
    """sgn(sigma_sorted) * P_sorted: the coset-invariant polynomial.

    For any permutation sigma with r1.sigma = partition,
    sgn(sigma) P_sigma is independent of the choice of sigma and equals
    this value.
    """
    sigma = sorted_permutation(partition)
    return perm_sign(sigma) * partition_polynomial(partition, x)


@dataclass
class FormVector:
    """Projective 105-vector keyed by partition."""

    values: dict
    reference: tuple = f2.PARTITION_R1

    def normalized(self):
        ref = self.values[self.reference]
        largest_key = max(self.values, key=lambda k: abs(self.values[k]))
        if abs(ref) < 1e-9 * abs(self.values[largest_key]):
            ref_key = largest_key
        else:
            ref_key = self.reference
        ref = self.values[ref_key]
        return {k: v / ref for k, v in self.values.items()}, ref_key


def polynomial_map(cfg):
    """All 105 sorted-pair partition polynomials."""
    values = {p: partition_polynomial(p, cfg.x)
              for p in f2.enumerate_partitions("2222")}
    return FormVector(values)


def signed_polynomial_map(cfg):
    values = {p: signed_partition_polynomial(p, cfg.x)
              for p in f2.enumerate_partitions("2222")}
    return FormVector(values)


# ---------------------------------------------------------------------------
# evaluation context

def apply_symplectic(sigma_rows, tau):
    """(A tau + B)(C tau + D)^{-1} and det(C tau + D) for rational sigma."""
    s = np.array([[float(x) for x in row] for row in sigma_rows])
    A, B = s[:6, :6], s[:6, 6:]
    C, D = s[6:, :6], s[6:, 6:]
    cd = C @ tau + D
    return (A @ tau + B) @ np.linalg.inv(cd), complex(np.linalg.det(cd))


@dataclass
class FormsContext:
    """Shared state for form evaluation at one branch configuration."""

    cfg: object
    periods: object
    tau1: NormalizedTau
    theta_tol: float = 1e-12
    precision: str = "double"
    nodes: int = None
    _evaluators: dict = field(default_factory=dict)

    @classmethod
    def build(cls, cfg, nodes=None, theta_tol=1e-12, quad_tol=None,
              precision="double", workers=1):
        if quad_tol is not None:
            from .periods import period_matrix_to_tol

            per = period_matrix_to_tol(cfg, tol=quad_tol,
                                       nodes=nodes or 96, workers=workers)
        else:
            kw = {} if nodes is None else {"nodes": nodes}
            per = period_matrix(cfg, workers=workers, **kw)
        tau1 = normalized_tau(per, SIGMA1, label="Sigma1")
        return cls(cfg=cfg, periods=per, tau1=tau1, theta_tol=theta_tol,
                   precision=precision, nodes=nodes)

    def evaluator(self, tau, tol=None):
        key = (tau.tobytes(), tol)
        ev = self._evaluators.get(key)
        if ev is None:
            ev = ThetaEvaluator(tau, tol=tol or self.theta_tol,
                                precision=self.precision)
            self._evaluators[key] = ev
        return ev

    def evaluator_sigma1(self):
        return self.evaluator(self.tau1.tau)


def theta_quadruple(ev):
    """(theta_1, theta_2, theta_3, theta_4) at the given evaluator's tau."""
    return tuple(ev.constant(mu_characteristic(j)) for j in range(1, 5))


def quadruple_identity_residuals(th):
    """Relative residuals of theta1 theta3 = theta2 theta4 and the
    companion (t2 - i t3)(t1 + i t4) = (t2 + i t3)(t1 - i t4)."""
    t1, t2, t3, t4 = th
    scale = max(abs(t1 * t3), abs(t2 * t4))
    r1 = abs(t1 * t3 - t2 * t4) / scale
    lhs = (t2 - 1j * t3) * (t1 + 1j * t4)
    rhs = (t2 + 1j * t3) * (t1 - 1j * t4)
    r2 = abs(lhs - rhs) / max(abs(lhs), abs(rhs), scale)
    return r1, r2


def cross_ratio_check(ctx):
    """Relative residual of the theta-constant cross-ratio identity."""
    x = ctx.cfg.x
    t1, t2, t3, t4 = theta_quadruple(ctx.evaluator_sigma1())
    lhs = (t2 + 1j * t3) ** 2 * (t1 - 1j * t4) ** 2 / (4 * t1 ** 2 * t3 ** 2)
    rhs = (x[0] - x[4]) * (x[1] - x[5]) / ((x[0] - x[1]) * (x[4] - x[5]))
    return abs(lhs - rhs) / max(abs(rhs), 1.0)


def vanishing_table(ctx):
    """|theta_{m_k}(tau1, iota(p_j))| normalized by the translation-invariant
    magnitude scale, for k = 1..4 and j = 1..8."""
    ev = ctx.evaluator_sigma1()
    tau = ctx.tau1.tau
    U = np.array(U_MAT, dtype=float)
    out = {}
    for k in range(1, 5):
        ch = mu_characteristic(k)
        for j in range(1, 9):
            xi = np.array(lattice.XI_TABLE[j], dtype=float)
            z = 0.5 * xi @ (tau + U)
            tv = ev.value(ch, z)
            u = np.linalg.solve(tau.imag, z.imag)
            scale = float(np.exp(np.pi * z.imag @ u))
            out[(k, j)] = abs(tv.value) / scale
    return out


# ---------------------------------------------------------------------------
# the squared forms

@dataclass(frozen=True)
class SquaredForm:
    value: complex            # T_g^2
    tau_sharp: np.ndarray
    tau_agreement: float      # direct vs fractional-linear transport
    det_cd: complex


def squared_form(ctx, element, check_direct=True):
    """T_g^2 with both tau#_g transports compared."""
    basis_g = transform_basis(element)
    sigma_rel = basis_change(basis_g, SIGMA1)
    tau_flt, det_cd = apply_symplectic(sigma_rel, ctx.tau1.tau)
    agreement = 0.0
    if check_direct:
        # the transported basis is principal by construction (the element
        # preserves the pairing), so skip the exact Gram recheck
        direct = normalized_tau(ctx.periods, basis_g, label="Sigma_g",
                                require_principal=False)
        agreement = float(np.abs(direct.tau - tau_flt).max())
        if agreement > 1e-6:
            raise ArithmeticError(
                f"tau transports disagree by {agreement:.2e}")
    ev = ctx.evaluator(tau_flt)
    t = ev.constant(mu_characteristic(1)) * ev.constant(mu_characteristic(3))
    val = (t / det_cd) ** 2
    return SquaredForm(val, tau_flt, agreement, det_cd)


def theta_map(ctx, check_direct=True, progress=None):
    """All 105 squared forms plus the polynomial comparison report."""
    table = coset_table()
    x = ctx.cfg.x
    p1 = partition_polynomial(f2.PARTITION_R1, x)
    t1sq = squared_form(ctx, identity_element(), check_direct=False)
    values, report = {}, []
    worst = 0.0
    worst_tau = 0.0
    for part in sorted(table):
        rec = table[part]
        if rec["word"] == ():
            form = t1sq
        else:
            form = squared_form(ctx, rec["element"], check_direct=check_direct)
        values[part] = form.value
        ratio = form.value / t1sq.value
        signed = signed_partition_polynomial(part, x) / p1
        sorted_ratio = partition_polynomial(part, x) / p1
        resid = abs(ratio - signed) / max(1.0, abs(signed))
        worst = max(worst, resid)
        worst_tau = max(worst_tau, form.tau_agreement)
        report.append({
            "partition": f2.partition_key(part),
            "word": list(rec["word"]),
            "theta_ratio_re": ratio.real,
            "theta_ratio_im": ratio.imag,
            "poly_ratio_signed": signed,
            "poly_ratio_sorted": sorted_ratio,
            "residual": resid,
            "tau_agreement": form.tau_agreement,
        })
        if progress:
            progress(part, resid)
    return {
        "form_vector": FormVector(values),
        "records": report,
        "max_residual": worst,
        "max_tau_agreement": worst_tau,
    }


# ---------------------------------------------------------------------------
# Sigma-trace machinery and the transformation matrices

_HALF = Fraction(1, 2)


def _dot(a, b):
    return sum(x * y for x, y in zip(a, b))


def _vecmat(v, m):
    return [sum(v[k] * m[k][j] for k in range(12)) for j in range(12)]


def _f2_reduce(v, basis):
    changed = True
    while changed:
        changed = False
        for b in basis:
            if v ^ b < v:
                v ^= b
                changed = True
    return v


def _pack_bits(ints):
    out = 0
    for i, b in enumerate(ints):
        out |= (b & 1) << i
    return out


def trace_coset_reps(basis_g):
    """8 representatives of Z^12 / {(p, q) : (p,q) . basis_g in (1-rho)H}.

    Membership depends only on the coordinates mod 2, so this is an F2
    quotient computation.
    """
    rows = []
    for v in lattice.STD_BASIS:
        w = tuple(a - b for a, b in zip(v, lattice.rho(v)))
        coords = lattice.coords_in(basis_g, w)
        if not exact.is_integral(coords):
            raise ValueError("(1-rho)H not contained in the lattice")
        rows.append(_pack_bits([int(c) % 2 for c in coords]))
    basis = []
    for r in rows:
        w = _f2_reduce(r, basis)
        if w:
            basis.append(w)
    if len(basis) != 9:
        raise AssertionError("unexpected quotient rank")
    free = []
    for j in range(12):
        w = _f2_reduce(1 << j, basis + free)
        if w:
            free.append(w)
        if len(free) == 3:
            break
    reps = []
    for eps in iproduct((0, 1), repeat=3):
        v = 0
        for t, b in zip(eps, free):
            if t:
                v ^= b
        reps.append(tuple(Fraction((v >> i) & 1) for i in range(12)))
    return reps


def sigma_trace_coefficient(n, pq, sigma_rows, m_g):
    """Exact phase exponent of the trace coefficient c_{(p0,q0),(p,q)}.

    n = (p0, q0) and pq = (p, q) in Sigma_g coordinates; sigma_rows is the
    change of basis to Sigma_B; m_g the chosen trace characteristic.
    Returns a Fraction t with coefficient e(t).
    """
    p0, q0 = n[:6], n[6:]
    p, q = pq[:6], pq[6:]
    rs = _vecmat(list(pq), sigma_rows)
    r, s = rs[:6], rs[6:]
    r0s0 = _vecmat(list(n), sigma_rows)
    r0, s0 = r0s0[:6], r0s0[6:]
    mgpp = m_g[6:]
    return (-_HALF * _dot(q, p) - _HALF * _dot(s, r) - _dot(r, mgpp)
            + _HALF * _dot(p0, q0) - _HALF * _dot(r0, s0)
            - _dot(r0, mgpp) - _dot(r0, s))


@dataclass
class TraceContext:
    """Shared data for the base-change matrices D^(g,B)."""

    ctx: FormsContext
    sigma_id: list
    columns: list            # the 8 column characteristics over Sigma_B
    tau_b: np.ndarray
    theta_b: np.ndarray      # their theta constants

    @classmethod
    def build(cls, ctx, tol=1e-11):
        sigma_id = basis_change(SIGMA1, SIGMA_B)
        delta = translation_vector(sigma_id)
        m0 = [-Fraction(x) / 2 for x in delta]
        cols = []
        for t in iproduct((Fraction(0), _HALF), repeat=3):
            cols.append(tuple(m0[:6]) +
                        (m0[6] + t[0], m0[7] + t[1], m0[8] + t[2]) +
                        tuple(m0[9:]))
        ntau = normalized_tau(ctx.periods, SIGMA_B, label="Sigma_B",
                              require_principal=False)
        ev = ctx.evaluator(ntau.tau, tol=tol)
        vals = np.array([ev.constant(Characteristic.make(c[:6], c[6:]))
                         for c in cols])
        return cls(ctx=ctx, sigma_id=sigma_id, columns=cols,
                   tau_b=ntau.tau, theta_b=vals)


def _terms_for_row(tc, sigma_rows, reps, m_g, n):
    """(phase exponent, column index) per trace summand for row n."""
    out = []
    for pq in reps:
        total = tuple(a + b for a, b in zip(pq, n))
        rs = _vecmat(list(total), sigma_rows)
        newm = [a + b for a, b in zip(m_g, rs)]
        idx = None
        for i, m in enumerate(tc.columns):
            k = [a - b for a, b in zip(newm, m)]
            if all(Fraction(x).denominator == 1 for x in k):
                idx = i
                extra = sum(m[j] * k[6 + j] for j in range(6))
                break
        if idx is None:
            raise AssertionError("translated characteristic misses all columns")
        ph = sigma_trace_coefficient(n, pq, sigma_rows, m_g) + extra
        out.append((ph, idx))
    return out


def trace_matrix(tc, element):
    """D^(g,B): rows over the 8 reference characteristics, columns over the
    shared Sigma_B set.  Entries are exact sums of roots of unity."""
    basis_g = transform_basis(element)
    sigma_rows = basis_change(basis_g, SIGMA_B)
    delta = translation_vector(sigma_rows)
    if not lattice.delta_in_expected_lattice(delta):
        raise AssertionError("translation vector outside 2Z^3+Z^3+Z^6")
    reps = trace_coset_reps(basis_g)
    mg0 = [-Fraction(x) / 2 for x in delta]
    cands = []
    for t in iproduct((Fraction(0), _HALF), repeat=3):
        cands.append(tuple(mg0[:6]) +
                     (mg0[6] + t[0], mg0[7] + t[1], mg0[8] + t[2]) +
                     tuple(mg0[9:]))
    zero_row = tuple(Fraction(0) for _ in range(12))
    m_g = None
    scale = np.abs(tc.theta_b).max()
    for cand in cands:
        terms = _terms_for_row(tc, sigma_rows, reps, cand, zero_row)
        val = sum(complex(e_frac(ph)) * tc.theta_b[i] for ph, i in terms)
        if abs(val) > 1e-6 * scale:
            m_g = cand
            break
    if m_g is None:
        raise ArithmeticError("no nonzero Sigma-trace among candidates")
    rows = [tuple(ch.as_row()) for ch in s1_characteristics()]
    D = np.zeros((8, 8), dtype=complex)
    for r, n in enumerate(rows):
        for ph, idx in _terms_for_row(tc, sigma_rows, reps, m_g, n):
            D[r, idx] += complex(e_frac(ph))
    return D


D_EV_M25_REFERENCE = np.array([
    [0.5 - 0.5j, -0.5 - 0.5j, 0, 0],
    [-0.5 - 0.5j, 0.5 - 0.5j, 0, 0],
    [0, 0, 0.5 - 0.5j, -0.5 - 0.5j],
    [0, 0, -0.5 - 0.5j, 0.5 - 0.5j],
])


def stabilizes_delta_bar(element):
    rows = element_f2_rows(element)
    return f2.apply_map(lattice.DELTA_BAR_CLASS, rows) == lattice.DELTA_BAR_CLASS


def transform_matrix_d_ev(tc, element):
    """D^(g)_ev = (D^(g,B) (D^(id,B))^{-1}) restricted to the quadruple
    (m1, m4, m3, m2); requires the Delta-bar stabilizer condition."""
    if not stabilizes_delta_bar(element):
        raise ValueError("element does not stabilize the Delta class")
    d_g = trace_matrix(tc, element)
    d_id = trace_matrix(tc, identity_element())
    full = d_g @ np.linalg.inv(d_id)
    idx = [j - 1 for j in EV_ORDER]
    return full[np.ix_(idx, idx)], full


def matches_up_to_scalar(computed, target, tol=1e-5):
    """True if computed = s * target entrywise for a single scalar s."""
    mask = np.abs(target) > 1e-9
    if np.abs(computed[~mask]).max(initial=0.0) > tol * np.abs(computed).max():
        return False, None
    ratios = computed[mask] / target[mask]
    s = ratios.flat[0]
    ok = np.abs(ratios - s).max() <= tol * abs(s)
    return ok, s


def dev_consistency_residual(tc, element, d_ev):
    """Residual of theta_n(Sigma_g) = c sum_m d_{n,m} theta_m(Sigma1) over
    the nonvanishing quadruple, as max deviation of the per-row constant."""
    ctx = tc.ctx
    basis_g = transform_basis(element)
    sigma_rel = basis_change(basis_g, SIGMA1)
    tau_g, _ = apply_symplectic(sigma_rel, ctx.tau1.tau)
    ev_g = ctx.evaluator(tau_g)
    ev_1 = ctx.evaluator_sigma1()
    lhs = np.array([ev_g.constant(mu_characteristic(j)) for j in EV_ORDER])
    rhs = d_ev @ np.array([ev_1.constant(mu_characteristic(j))
                           for j in EV_ORDER])
    ratios = lhs / rhs
    return float(np.abs(ratios - ratios[0]).max() / abs(ratios[0]))


def m25_element():
    return reflection_pair(2, 5)


def equivariance_ratio_residual(ctx, g, h):
    """Residual of (T_g^2 / T_1^2)(h . tau) = T_{gh}^2 / T_h^2 (tau).

    This is the ratio form of the transformation rule, free of the
    automorphy cocycle that the raw statement picks up.
    """
    tau = ctx.tau1.tau

    def t_at(elem, base_tau):
        sig = basis_change(transform_basis(elem), SIGMA1)
        tg, det = apply_symplectic(sig, base_tau)
        ev = ctx.evaluator(tg)
        return ev.constant(mu_characteristic(1)) \
            * ev.constant(mu_characteristic(3)) / det

    sig_h = basis_change(transform_basis(h), SIGMA1)
    tau_h, _ = apply_symplectic(sig_h, tau)
    lhs = (t_at(g, tau_h) / t_at(identity_element(), tau_h)) ** 2
    rhs = (t_at(lattice.mul(g, h), tau) / t_at(h, tau)) ** 2
    return abs(lhs - rhs) / max(abs(rhs), 1e-30)
