"""Exact rational linear algebra on small matrices.

Matrices are lists of lists of Fractions (or ints); vectors are lists.
Everything here is exact -- no floats. Sizes are tiny (12x12), so plain
Gaussian elimination with Fraction pivots is fast enough.
"""

from fractions import Fraction


def mat(rows):
    return [[Fraction(x) for x in row] for row in rows]


def identity(n):
    return [[Fraction(1 if i == j else 0) for j in range(n)] for i in range(n)]


def zeros(n, m=None):
    m = n if m is None else m
    return [[Fraction(0)] * m for _ in range(n)]


def matmul(A, B):
    n, k, m = len(A), len(B), len(B[0])
    Bt = list(zip(*B))
    return [[sum(A[i][t] * Bt[j][t] for t in range(k)) for j in range(m)]
            for i in range(n)]


def matvec(A, v):
    return [sum(A[i][j] * v[j] for j in range(len(v))) for i in range(len(A))]


def vecmat(v, A):
    return [sum(v[i] * A[i][j] for i in range(len(v))) for j in range(len(A[0]))]


def transpose(A):
    return [list(row) for row in zip(*A)]


def add(A, B):
    return [[a + b for a, b in zip(ra, rb)] for ra, rb in zip(A, B)]


def neg(A):
    return [[-a for a in row] for row in A]


def scale(c, A):
    c = Fraction(c)
    return [[c * a for a in row] for row in A]


def solve(A, b):
    """Solve A x = b for the column vector x; raises ValueError if singular."""
    n = len(A)
    M = [[Fraction(A[i][j]) for j in range(n)] + [Fraction(b[i])] for i in range(n)]
    for col in range(n):
        piv = next((r for r in range(col, n) if M[r][col] != 0), None)
        if piv is None:
            raise ValueError("singular matrix")
        M[col], M[piv] = M[piv], M[col]
        pv = M[col][col]
        M[col] = [x / pv for x in M[col]]
        for r in range(n):
            if r != col and M[r][col] != 0:
                f = M[r][col]
                M[r] = [x - f * y for x, y in zip(M[r], M[col])]
    return [M[i][n] for i in range(n)]


def inverse(A):
    n = len(A)
    M = [[Fraction(A[i][j]) for j in range(n)] +
         [Fraction(1 if i == j else 0) for j in range(n)] for i in range(n)]
    for col in range(n):
        piv = next((r for r in range(col, n) if M[r][col] != 0), None)
        if piv is None:
            raise ValueError("singular matrix")
        M[col], M[piv] = M[piv], M[col]
        pv = M[col][col]
        M[col] = [x / pv for x in M[col]]
        for r in range(n):
            if r != col and M[r][col] != 0:
                f = M[r][col]
                M[r] = [x - f * y for x, y in zip(M[r], M[col])]
    return [row[n:] for row in M]


def det(A):
    n = len(A)
    M = [[Fraction(x) for x in row] for row in A]
    d = Fraction(1)
    for col in range(n):
        piv = next((r for r in range(col, n) if M[r][col] != 0), None)
        if piv is None:
            return Fraction(0)
        if piv != col:
            M[col], M[piv] = M[piv], M[col]
            d = -d
        d *= M[col][col]
        inv = 1 / M[col][col]
        for r in range(col + 1, n):
            if M[r][col] != 0:
                f = M[r][col] * inv
                M[r] = [x - f * y for x, y in zip(M[r], M[col])]
    return d


def coords_in_basis(basis, v):
    """Coordinates c with sum_i c[i] * basis[i] = v; basis = list of row vectors."""
    n = len(v)
    A = [[Fraction(basis[j][i]) for j in range(len(basis))] for i in range(n)]
    return solve(A, v)


def is_integral(v):
    return all(Fraction(x).denominator == 1 for x in v)


def blocks(M):
    """Split a 2n x 2n matrix into (A, B, C, D) n x n blocks."""
    n = len(M) // 2
    A = [row[:n] for row in M[:n]]
    B = [row[n:] for row in M[:n]]
    C = [row[:n] for row in M[n:]]
    D = [row[n:] for row in M[n:]]
    return A, B, C, D


def from_blocks(A, B, C, D):
    n = len(A)
    return [list(A[i]) + list(B[i]) for i in range(n)] + \
           [list(C[i]) + list(D[i]) for i in range(n)]


def diag_vec(A):
    return [A[i][i] for i in range(len(A))]
