from fractions import Fraction

import numpy as np
import pytest

from prymtheta import exact, f2, lattice
from prymtheta.lattice import (E_TYPE, FULL_GRAM, J_ST, SIGMA, SIGMA1,
                               SIGMA_B, STD_BASIS, U_MAT, basis_change,
                               basis_vector, coset_table, cycle_A,
                               delta_class_offset, delta_in_expected_lattice,
                               element_perm, hermitian, identity_element,
                               in_lattice, in_one_minus_rho_h,
                               is_group_element, is_symplectic, mul,
                               pair_full, pair_half, reflection,
                               reflection_pair, rho, torsion_point,
                               transform_basis, translation_vector)

RNG = np.random.default_rng(5)


def rand_vec():
    return tuple(int(v) for v in RNG.integers(-4, 5, 12))


def test_full_gram_det():
    assert exact.det(exact.mat([list(r) for r in FULL_GRAM])) == 2 ** 6


def test_pairing_examples():
    assert pair_half(basis_vector("A1"), basis_vector("A2")) == Fraction(1, 2)
    assert pair_half(basis_vector("A1"), basis_vector("B1")) == 1
    for _ in range(10):
        v = rand_vec()
        assert pair_full(v, v) == 0


def test_sigma_gram_full_form():
    g = lattice.gram(SIGMA, pair_full)
    for i in range(6):
        for j in range(12):
            assert g[i][j] == (E_TYPE[i] if j == i + 6 else 0)
            assert g[i + 6][j] == (-E_TYPE[i] if j == i else 0)


def test_sigma1_and_sigma_b_gram():
    for basis in (SIGMA1, SIGMA_B):
        assert [list(r) for r in lattice.gram(basis)] == \
            [list(r) for r in J_ST]


def test_rho():
    assert rho(basis_vector("A3")) == basis_vector("B3")
    for _ in range(10):
        v = rand_vec()
        assert rho(rho(v)) == tuple(-x for x in v)
        w = rand_vec()
        assert pair_half(rho(v), rho(w)) == pair_half(v, w)


def test_hermitian():
    assert hermitian(basis_vector("A1"), basis_vector("A1")) == (1, 0)
    for _ in range(10):
        v = rand_vec()
        re, im = hermitian(v, v)
        assert im == 0
    H = 0.5 * (np.array(lattice.Q_MAT) - 1j * np.array(lattice.P_MAT))
    evs = np.linalg.eigvalsh(H)
    assert (evs > 0).sum() == 5 and (evs < 0).sum() == 1


def test_cycle_relations_exact():
    # sum of all eight A_j vanishes in homology
    total = [0] * 12
    for j in range(1, 9):
        total = [a + b for a, b in zip(total, cycle_A(j))]
    assert all(t == 0 for t in total)


def test_reflections_are_group_elements():
    for p in range(1, 8):
        m = reflection(p)
        assert is_group_element(m)
        expected = tuple(p + 1 if j == p else (p if j == p + 1 else j)
                         for j in range(1, 9))
        assert element_perm(m) == expected
        # defining property on the root
        root = cycle_A(p)
        img = lattice.apply_element(m, root)
        assert img == tuple(-x for x in rho(root))
    # fixes a pairing-orthogonal vector: (A3, A1) = 0
    m = reflection(1)
    assert lattice.apply_element(m, basis_vector("A3")) == basis_vector("A3")


def test_reflection_square_trivial_image_nontrivial_element():
    for p in (1, 4, 7):
        m2 = mul(reflection(p), reflection(p))
        assert element_perm(m2) == tuple(range(1, 9))
        assert m2 != identity_element()


def test_reflection_pair_images():
    assert element_perm(reflection_pair(2, 5)) == (1, 5, 3, 4, 2, 6, 7, 8)
    assert element_perm(reflection_pair(2, 6)) == (1, 6, 3, 4, 5, 2, 7, 8)


def test_bad_root_rejected():
    with pytest.raises(ValueError):
        lattice.reflection_from_root(tuple([2] + [0] * 11))


def test_bfs_covers_s8():
    words = lattice._bfs_words()
    assert len(words) == 40320


def test_coset_table():
    table = coset_table()
    assert len(table) == 105
    assert set(table) == set(f2.enumerate_partitions("2222"))
    assert table[f2.PARTITION_R1]["word"] == ()
    rec = table[((1, 6), (2, 5), (3, 4), (7, 8))]
    assert f2.act_partition(f2.PARTITION_R1, rec["perm"]) == \
        ((1, 6), (2, 5), (3, 4), (7, 8))


def test_lattices_contain_one_minus_rho_and_have_index_8():
    one_minus_rho = [tuple(a - b for a, b in zip(v, rho(v)))
                     for v in STD_BASIS]
    table = coset_table()
    for part in sorted(table)[::7]:  # subsample for speed; full run in verify
        basis = transform_basis(table[part]["element"])
        for w in one_minus_rho:
            assert in_lattice(basis, w)
        d = exact.det(exact.mat([list(v) for v in basis]))
        assert abs(d) == 8


def test_in_one_minus_rho_parity():
    for v in STD_BASIS:
        w = tuple(a - b for a, b in zip(v, rho(v)))
        assert in_one_minus_rho_h(w)
    assert not in_one_minus_rho_h(basis_vector("A1"))


def test_sigma_g_symplectic_and_good():
    table = coset_table()
    for part in sorted(table)[::11]:
        el = table[part]["element"]
        basis = transform_basis(el)
        sig = basis_change(basis, SIGMA_B)
        assert is_symplectic(sig)
        assert [list(r) for r in lattice.gram(basis)] == \
            [list(r) for r in J_ST]
        # rho acts by (0 -U; U 0) on the transported basis as well
        a, b = basis[:6], basis[6:]
        for i in range(6):
            want = tuple(sum(-U_MAT[i][k] * b[k][t] for k in range(6))
                         for t in range(12))
            assert rho(a[i]) == want


def test_u0_is_diagonal_of_u():
    assert lattice.U0_VEC == tuple(U_MAT[i][i] for i in range(6))


def test_basis_change_identity_and_integrality():
    ident = basis_change(SIGMA1, SIGMA1)
    assert ident == [[Fraction(1 if i == j else 0) for j in range(12)]
                     for i in range(12)]
    # all entries of e B^T and e D^T are integers for Sigma1 over Sigma_B
    sig = basis_change(SIGMA1, SIGMA_B)
    _, B, _, D = exact.blocks(sig)
    for i in range(6):
        for j in range(6):
            assert (E_TYPE[j] * B[i][j]).denominator == 1
            assert (E_TYPE[j] * D[i][j]).denominator == 1


def test_translation_vectors():
    table = coset_table()
    offset = None
    for part in sorted(table):
        el = table[part]["element"]
        sig = basis_change(transform_basis(el), SIGMA_B)
        delta = translation_vector(sig)
        assert delta_in_expected_lattice(delta)
        off = delta_class_offset(el, delta)
        if offset is None:
            offset = off
        assert off == offset
    assert f2.qform_coords(lattice.DELTA_BAR_CLASS) == 0
    assert lattice.DELTA_BAR_CLASS != 0


def test_torsion_points():
    assert torsion_point(1) == tuple(Fraction(0) for _ in range(12))
    t5 = torsion_point(5)
    assert t5[:6] == tuple(Fraction(x, 2) for x in (1, 1, 1, 1, 0, 0))
    t7 = torsion_point(7)
    assert t7[:6] == tuple(Fraction(1, 2) for _ in range(6))
    with pytest.raises(ValueError):
        torsion_point(9)


def test_group_element_homomorphism_to_s8():
    rng = np.random.default_rng(2)
    gens = [reflection(p) for p in range(1, 8)]
    for _ in range(25):
        a, b = gens[rng.integers(0, 7)], gens[rng.integers(0, 7)]
        pa, pb = element_perm(a), element_perm(b)
        pab = tuple(pb[pa[j] - 1] for j in range(8))
        assert element_perm(mul(a, b)) == pab


def test_audit_records():
    recs = lattice.audit_records()
    assert len(recs) == 105
    assert recs[0]["partition"] == "12.34.56.78"
    assert recs[0]["word"] == []
