"""Exact arithmetic on the rank-12 anti-invariant homology lattice.

Everything is expressed in the cycle basis (A1..A6, B1..B6).  Vectors are
12-tuples of ints (or Fractions for rational combinations); group elements
are 12x12 integer matrices stored as tuples of row tuples, acting on the
right of row vectors (rows = images of the basis vectors).

Two pairings are first class citizens:

* ``pair_full``  -- the intersection form, with Gram matrix (P Q; -Q P);
* ``pair_half``  -- half of it, the polarization used for sub-lattices.

The distinguished bases:

* ``SIGMA``    -- symplectic of type diag(2,2,2,1,1,1) for the full pairing;
* ``SIGMA1``   -- the reference principal basis; Gram (0 -I; I 0) for
  ``pair_half`` and rho acting as (0 -U; U 0);
* ``SIGMA_B``  -- a second principal basis of the same sublattice, obtained
  from SIGMA by doubling the three generators that do not lie in
  (1-rho)H and matching SIGMA1's symplectic sign.  All positional claims
  about coordinate denominators are made (and verified) in this ordering.
"""

from fractions import Fraction
from functools import lru_cache

from . import exact, f2

# ---------------------------------------------------------------------------
# pairing data

P_MAT = (
    (0, 1, 0, 0, 0, 0),
    (-1, 0, 1, 0, 0, 0),
    (0, -1, 0, 1, 0, 0),
    (0, 0, -1, 0, 1, 0),
    (0, 0, 0, -1, 0, 1),
    (0, 0, 0, 0, -1, 0),
)
Q_MAT = (
    (2, -1, 0, 0, 0, 0),
    (-1, 2, -1, 0, 0, 0),
    (0, -1, 2, -1, 0, 0),
    (0, 0, -1, 2, -1, 0),
    (0, 0, 0, -1, 2, -1),
    (0, 0, 0, 0, -1, 2),
)

FULL_GRAM = tuple(
    tuple(P_MAT[i][j] for j in range(6)) + tuple(Q_MAT[i][j] for j in range(6))
    for i in range(6)
) + tuple(
    tuple(-Q_MAT[i][j] for j in range(6)) + tuple(P_MAT[i][j] for j in range(6))
    for i in range(6)
)

U_MAT = (
    (1, 0, 0, 0, 0, 0),
    (0, 1, 0, 0, 0, 0),
    (0, 0, 0, -1, 0, 0),
    (0, 0, -1, 0, 0, 0),
    (0, 0, 0, 0, 1, 0),
    (0, 0, 0, 0, 0, 1),
)
U0_VEC = (1, 1, 0, 0, 1, 1)     # diagonal of U_MAT

E_TYPE = (2, 2, 2, 1, 1, 1)     # polarization type of SIGMA / denominators


_FULL_NONZERO = tuple((i, j, FULL_GRAM[i][j])
                      for i in range(12) for j in range(12) if FULL_GRAM[i][j])


def pair_full(x, y):
    return sum(x[i] * v * y[j] for i, j, v in _FULL_NONZERO)


def pair_half(x, y):
    return Fraction(pair_full(x, y), 2)


def rho(v):
    """rho(A_j) = B_j, rho(B_j) = -A_j on coordinates."""
    return tuple(-x for x in v[6:]) + tuple(v[:6])


def hermitian(x, y):
    """h(x, y) = <x, rho y> - <x, y> i as a (real, imag) Fraction pair.

    Antilinear in x, linear in y for the complex structure rho = -i.
    """
    return pair_half(x, rho(y)), -pair_half(x, y)


def basis_vector(name):
    names = {f"A{j + 1}": j for j in range(6)}
    names.update({f"B{j + 1}": j + 6 for j in range(6)})
    v = [0] * 12
    v[names[name]] = 1
    return tuple(v)


def combo(**coeffs):
    v = [0] * 12
    for name, c in coeffs.items():
        w = basis_vector(name)
        v = [a + c * b for a, b in zip(v, w)]
    return tuple(v)


STD_BASIS = tuple(basis_vector(f"A{j}") for j in range(1, 7)) + \
            tuple(basis_vector(f"B{j}") for j in range(1, 7))

# A7, A8 expressed through the homology relations
#   sum_{j<=7} (1 + rho + ... + rho^{j-1}) A_j = 0  and  sum_{j<=8} A_j = 0.
A7_VEC = combo(A2=-1, A3=-1, A6=-1, B1=1, B2=1, B5=1, B6=1)
A8_VEC = combo(A1=-1, A4=-1, A5=-1, B1=-1, B2=-1, B5=-1, B6=-1)


def cycle_A(j):
    """Coordinates of the cycle A_j for j = 1..8."""
    if 1 <= j <= 6:
        return basis_vector(f"A{j}")
    if j == 7:
        return A7_VEC
    if j == 8:
        return A8_VEC
    raise ValueError("j out of range")


# ---------------------------------------------------------------------------
# distinguished bases

def _sigma_vectors():
    ap = {
        1: combo(A1=2, A3=2, A4=1, B4=1),
        2: combo(A1=2, A2=1, A5=2, A6=2, B2=1, B4=-2, B5=-2),
        3: combo(A1=1, A2=2, A3=1, A5=1, A6=2, B1=-1, B3=1, B5=-1),
        4: combo(A1=1),
        5: combo(A1=1, A3=1),
        6: combo(A1=-1, A3=-1, B5=1),
    }
    bp = {
        1: combo(A1=2, A3=2, A5=1, A6=2, B5=-1),
        2: combo(A1=-1, A2=-2, A5=-2, A6=-2, B1=1, B4=2, B5=2),
        3: combo(A4=1, A6=-1, B4=1, B5=2, B6=1),
        4: combo(A2=1),
        5: combo(A4=1),
        6: combo(A6=1),
    }
    return ap, bp


def _sigma1_vectors():
    a = {
        1: combo(A1=1),
        2: combo(A1=1, A2=1, B2=1),
        3: combo(A1=1, A2=1, B2=1, B3=1),
        4: combo(A1=1, A2=1, A4=-1, B2=1, B3=1, B4=1),
        5: combo(A1=1, A2=1, A5=1, B2=1, B3=1),
        6: combo(A1=1, A2=1, A5=1, A6=1, B2=1, B3=1, B6=1),
    }
    b = {
        1: combo(B1=-1),
        2: combo(A2=1, B1=-1, B2=-1),
        3: combo(A2=-1, A3=-1, A4=-1, B1=1, B2=1, B4=-1),
        4: combo(A2=-1, A3=-1, B1=1, B2=1),
        5: combo(A2=1, A3=1, B1=-1, B2=-1, B5=-1),
        6: combo(A2=1, A3=1, A6=1, B1=-1, B2=-1, B5=-1, B6=-1),
    }
    return a, b


def _scaled(c, v):
    return tuple(c * x for x in v)


SIGMA = None
SIGMA1 = None
SIGMA_B = None

# Gram of SIGMA1 under pair_half: the symplectic reference form J_st.
J_ST = tuple(
    tuple(Fraction(0) if j < 6 else Fraction(-1 if j - 6 == i else 0)
          for j in range(12)) for i in range(6)
) + tuple(
    tuple(Fraction(1 if j == i - 6 else 0) if j < 6 else Fraction(0)
          for j in range(12)) for i in range(6, 12)
)


def gram(basis, pairing=pair_half):
    return [[pairing(x, y) for y in basis] for x in basis]


def _validate_bases():
    ap, bp = _sigma_vectors()
    sigma = tuple(ap[j] for j in range(1, 7)) + tuple(bp[j] for j in range(1, 7))
    g = gram(sigma, pair_full)
    for i in range(6):
        for j in range(12):
            want = E_TYPE[i] if j == i + 6 else 0
            if g[i][j] != want or g[i + 6][j] != (-E_TYPE[i] if j == i else 0):
                raise AssertionError("Sigma Gram mismatch with diag(2,2,2,1,1,1)")

    a, b = _sigma1_vectors()
    sigma1 = tuple(a[j] for j in range(1, 7)) + tuple(b[j] for j in range(1, 7))
    if [list(r) for r in gram(sigma1)] != [list(r) for r in J_ST]:
        raise AssertionError("Sigma1 Gram mismatch with (0 -I; I 0)")
    for i in range(6):
        want_a = tuple(sum(-U_MAT[i][k] * b[k + 1][t] for k in range(6))
                       for t in range(12))
        want_b = tuple(sum(U_MAT[i][k] * a[k + 1][t] for k in range(6))
                       for t in range(12))
        if rho(a[i + 1]) != want_a or rho(b[i + 1]) != want_b:
            raise AssertionError("rho does not act as (0 -U; U 0) on Sigma1")

    # Sigma_B: block-reorder Sigma so the generators outside (1-rho)H come
    # first, double those beta's, and negate the beta part so the Gram
    # matches Sigma1's (this is the unique doubling pattern that yields a
    # principal Gram; checked here).
    alpha_b = (ap[4], ap[5], ap[6], ap[1], ap[2], ap[3])
    beta_b = (_scaled(-2, bp[4]), _scaled(-2, bp[5]), _scaled(-2, bp[6]),
              _scaled(-1, bp[1]), _scaled(-1, bp[2]), _scaled(-1, bp[3]))
    sigma_b = alpha_b + beta_b
    if [list(r) for r in gram(sigma_b)] != [list(r) for r in J_ST]:
        raise AssertionError("Sigma_B Gram mismatch with (0 -I; I 0)")
    return sigma, sigma1, sigma_b


SIGMA, SIGMA1, SIGMA_B = _validate_bases()


# ---------------------------------------------------------------------------
# membership tests

def in_one_minus_rho_h(v):
    """v in (1-rho)H  iff  A-part == B-part mod 2."""
    return all((v[i] - v[i + 6]) % 2 == 0 for i in range(6))


_SOLVER_CACHE = {}


def coords_in(basis, v):
    """Coordinates of v in the given basis; caches the basis inverse."""
    key = tuple(tuple(row) for row in basis)
    inv = _SOLVER_CACHE.get(key)
    if inv is None:
        cols = [[Fraction(basis[j][i]) for j in range(12)] for i in range(12)]
        inv = exact.inverse(cols)
        if len(_SOLVER_CACHE) > 16:
            _SOLVER_CACHE.clear()
        _SOLVER_CACHE[key] = inv
    return exact.matvec(inv, [Fraction(x) for x in v])


def in_lattice(basis, v):
    try:
        return exact.is_integral(coords_in(basis, v))
    except ValueError:
        return False


def v_class(v):
    """Class of an integer vector in V = H/(1-rho)H as packed f2 coords."""
    c = 0
    for j in range(6):
        if (v[j] + v[j + 6]) % 2:
            c |= 1 << j
    return c


# ---------------------------------------------------------------------------
# group elements

def identity_element():
    return tuple(tuple(1 if i == j else 0 for j in range(12)) for i in range(12))


def apply_element(m, v):
    """Image of the row vector v under the element m (v @ m row-wise)."""
    out = [0] * 12
    for i, c in enumerate(v):
        if c:
            row = m[i]
            for j in range(12):
                out[j] += c * row[j]
    return tuple(out)


def mul(m1, m2):
    """Element doing m1 first, then m2."""
    return tuple(apply_element(m2, row) for row in m1)


def element_inverse(m):
    inv = exact.inverse([list(r) for r in m])
    out = tuple(tuple(int(x) for x in row) for row in inv)
    return out


def is_group_element(m):
    """Integer matrix preserving the pairing and commuting with rho."""
    for i in range(12):
        for j in range(i + 1, 12):
            if pair_half(m[i], m[j]) != pair_half(STD_BASIS[i], STD_BASIS[j]):
                return False
    for v in STD_BASIS:
        if apply_element(m, rho(v)) != rho(apply_element(m, v)):
            return False
    return True


def element_f2_rows(m):
    """Induced orthogonal map on V as packed basis-row images."""
    return tuple(v_class(m[i]) for i in range(6))


def element_perm(m):
    """The permutation in S8 induced by a group element."""
    return f2.orthogonal_to_perm(element_f2_rows(m))


# ---------------------------------------------------------------------------
# complex reflections

def _scal_gauss(re, im, r):
    """(re + im*i) . r with the scalar i acting as -rho."""
    rr = rho(r)
    return tuple(re * a - im * b for a, b in zip(r, rr))


def reflection_from_root(root):
    """Reflection with eigenvalue -rho on the root line, identity on its
    hermitian orthogonal complement.  Requires h(root, root) = 1."""
    hre, him = hermitian(root, root)
    if (hre, him) != (1, 0):
        raise ValueError(f"root norm is {hre}+{him}i, need 1")
    rows = []
    for v in STD_BASIS:
        re, im = hermitian(root, v)
        # (1 - i)(re + im i) = (re + im) + (im - re) i
        w = _scal_gauss(re + im, im - re, root)
        img = tuple(a - b for a, b in zip(v, w))
        if not all(Fraction(x).denominator == 1 for x in img):
            raise AssertionError("reflection image not integral")
        rows.append(tuple(int(x) for x in img))
    m = tuple(rows)
    if not is_group_element(m):
        raise AssertionError("reflection fails group-element checks")
    return m


@lru_cache(maxsize=None)
def chain_root(j, k):
    """Root A_j + A_{j+1} + ... + A_{k-1} joining branch points j < k."""
    v = [0] * 12
    for t in range(j, k):
        v = [a + b for a, b in zip(v, cycle_A(t))]
    return tuple(v)


@lru_cache(maxsize=None)
def reflection(p):
    """The monodromy reflection swapping the branch points p, p+1."""
    if not 1 <= p <= 7:
        raise ValueError("p out of range")
    return reflection_from_root(cycle_A(p))


@lru_cache(maxsize=None)
def reflection_pair(j, k):
    """Reflection with S8 image the transposition (j, k), j < k <= 7."""
    return reflection_from_root(chain_root(j, k))


# ---------------------------------------------------------------------------
# coset representatives

@lru_cache(maxsize=1)
def _bfs_words():
    """Shortest lexicographically-least reflection word per permutation."""
    gens = {p: tuple(p + 1 if j == p else (p if j == p + 1 else j)
                     for j in range(1, 9)) for p in range(1, 8)}
    start = tuple(range(1, 9))
    words = {start: ()}
    frontier = [start]
    while frontier:
        nxt = []
        for sigma in frontier:
            w = words[sigma]
            for p in range(1, 8):
                t = gens[p]
                new = tuple(t[sigma[j] - 1] for j in range(8))
                if new not in words:
                    words[new] = w + (p,)
                    nxt.append(new)
        frontier = nxt
    return words


@lru_cache(maxsize=1)
def coset_table():
    """One record per (2,2,2,2)-partition.

    Returns a dict partition -> dict with keys ``word`` (tuple of p's),
    ``perm`` (the S8 image) and ``element`` (the 12x12 matrix).  The
    representative is the shortest, lexicographically least reflection word
    whose image lies in the coset.
    """
    words = _bfs_words()
    order = sorted(words.items(), key=lambda kv: (len(kv[1]), kv[1]))
    table = {}
    for sigma, word in order:
        part = f2.act_partition(f2.PARTITION_R1, sigma)
        if part in table:
            continue
        m = identity_element()
        for p in word:
            m = mul(m, reflection(p))
        assert element_perm(m) == sigma
        table[part] = {"word": word, "perm": sigma, "element": m}
        if len(table) == 105:
            break
    assert len(table) == 105
    return table


def coset_representatives():
    """The 105 group elements, ordered by partition key."""
    table = coset_table()
    return [table[p]["element"] for p in sorted(table)]


# ---------------------------------------------------------------------------
# basis change, translation vector, torsion

def basis_change(from_basis, to_basis):
    """Matrix sigma with rows the coordinates of from_basis in to_basis.

    For two bases with equal symplectic Gram, sigma satisfies
    sigma J sigma^T = J for J = J_ST.
    """
    return [coords_in(to_basis, v) for v in from_basis]


def is_symplectic(m):
    g = exact.matmul(exact.matmul(m, [list(r) for r in J_ST]),
                     exact.transpose(m))
    return all(g[i][j] == J_ST[i][j] for i in range(12) for j in range(12))


def transform_basis(element, basis=None):
    """Image basis (g applied to SIGMA1 by default)."""
    basis = SIGMA1 if basis is None else basis
    return tuple(apply_element(element, v) for v in basis)


def translation_vector(sigma):
    """delta = ((C^T A)_0, (e D^T B e)_0 e^{-1}) for sigma = (A B; C D).

    sigma expresses a good basis in SIGMA_B coordinates.
    """
    A, B, C, D = exact.blocks(sigma)
    dp = exact.diag_vec(exact.matmul(exact.transpose(C), A))
    e = [[Fraction(E_TYPE[i] if i == j else 0) for j in range(6)]
         for i in range(6)]
    einv = [[Fraction(1, E_TYPE[i]) if i == j else Fraction(0) for j in range(6)]
            for i in range(6)]
    inner = exact.matmul(exact.matmul(e, exact.transpose(D)),
                         exact.matmul(B, e))
    dpp = exact.matvec(einv, exact.diag_vec(inner))
    return list(dp) + list(dpp)


def delta_in_expected_lattice(delta):
    """delta' in 2Z^3 + Z^3 and delta'' in Z^6."""
    dp, dpp = delta[:6], delta[6:]
    return (all(Fraction(x).denominator == 1 for x in delta)
            and all(int(x) % 2 == 0 for x in dp[:3]))


DELTA_BAR_CLASS = f2.class_coords(f2.eclass(1, 2, 5, 6))


def delta_class_offset(element, delta):
    """class(delta/2 . Sigma_B) - DELTA_BAR . g, an element of V."""
    w = [Fraction(0)] * 12
    for c, vec in zip(delta, SIGMA_B):
        for j in range(12):
            w[j] += Fraction(c, 2) * vec[j]
    # (1-rho)w has coordinates (a+b, b-a) where w = (a, b)
    u = tuple(w[j] + w[j + 6] for j in range(6)) + \
        tuple(w[j + 6] - w[j] for j in range(6))
    if not exact.is_integral(u):
        raise AssertionError("(1-rho) delta/2 is not integral")
    cls = 0
    for j in range(6):
        if (int(u[j]) + int(u[j + 6])) % 2:
            cls |= 1 << j
    moved = f2.apply_map(DELTA_BAR_CLASS, element_f2_rows(element))
    return cls ^ moved


XI_TABLE = {
    1: (0, 0, 0, 0, 0, 0), 2: (0, 0, 0, 0, 0, 0),
    3: (1, 1, 0, 0, 0, 0), 4: (1, 1, 0, 0, 0, 0),
    5: (1, 1, 1, 1, 0, 0), 6: (1, 1, 1, 1, 0, 0),
    7: (1, 1, 1, 1, 1, 1), 8: (1, 1, 1, 1, 1, 1),
}


def torsion_point(k):
    """Characteristic (xi_k/2, xi_k U /2) of the k-th ramification image."""
    if k not in XI_TABLE:
        raise ValueError("k out of range")
    xi = XI_TABLE[k]
    xiU = tuple(sum(xi[i] * U_MAT[i][j] for i in range(6)) for j in range(6))
    return tuple(Fraction(x, 2) for x in xi) + tuple(Fraction(x, 2) for x in xiU)


def audit_records():
    """JSON-ready list of (partition, word, perm, sigma_g, delta_g) records."""
    table = coset_table()
    out = []
    for part in sorted(table):
        rec = table[part]
        sig = basis_change(transform_basis(rec["element"]), SIGMA_B)
        delta = translation_vector(sig)
        out.append({
            "partition": f2.partition_key(part),
            "word": list(rec["word"]),
            "perm": list(rec["perm"]),
            "sigma_g": [[str(x) for x in row] for row in sig],
            "delta_g": [str(x) for x in delta],
        })
    return out
