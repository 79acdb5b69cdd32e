"""Combinatorics of the F2 quadratic space attached to 8 marked points.

V is the space of even-weight vectors in F2^8 modulo the all-ones vector,
a 6-dimensional F2 space.  The quadratic form q is half the Hamming weight
mod 2.  S8 acts on coordinates from the right and this action identifies
S8 with the orthogonal group of (V, q).

Vectors in F2^8 are stored as 8-bit ints (bit j-1 = coordinate j); classes
canonically as the representative with bit 1 (i.e. bit index 0) equal to 0.
Coordinates on V use the basis f_j = class(e_j + e_{j+1}), j = 1..6, packed
into 6-bit ints.  A map V -> V is a tuple of 6 row images (rows = images of
the basis vectors), packed into a single 36-bit int when used as a dict key.
"""

from itertools import combinations, permutations

ALL_ONES = 0xFF


def weight(x):
    return bin(x).count("1")


def f2class(x):
    """Canonical representative of x mod (1,...,1): lowest bit cleared."""
    if weight(x) % 2:
        raise ValueError("vector has odd Hamming weight")
    return x ^ ALL_ONES if x & 1 else x


def qform(x):
    """Half the Hamming weight mod 2, on the class of x."""
    return (weight(f2class(x)) // 2) % 2


def eclass(*indices):
    """Class of e_{i1} + e_{i2} + ... for 1-based indices."""
    x = 0
    for i in indices:
        x ^= 1 << (i - 1)
    return f2class(x)


def class_coords(x):
    """Coordinates of class(x) in the basis f_j = class(e_j + e_{j+1}).

    Uses the representative with bit 8 clear; coordinate j is the prefix
    parity of the first j bits.
    """
    x = f2class(x)
    if x & 0x80:
        x ^= ALL_ONES
    c, s = 0, 0
    for j in range(6):
        s ^= (x >> j) & 1
        c |= s << j
    return c


def coords_to_class(c):
    """Inverse of class_coords."""
    x = 0
    prev = 0
    for j in range(6):
        bit = (c >> j) & 1
        if bit ^ prev:
            x ^= 1 << j
        prev = bit
    if prev:
        x ^= 1 << 6
    # bit 7 of the representative: parity fix so total weight is even
    if weight(x) % 2:
        x ^= 1 << 7
    return f2class(x)


def qform_coords(c):
    return qform(coords_to_class(c))


def apply_map(c, rows):
    """Apply the linear map with given basis-row images to coords c."""
    out = 0
    for j in range(6):
        if (c >> j) & 1:
            out ^= rows[j]
    return out


def pack(rows):
    m = 0
    for j, r in enumerate(rows):
        m |= r << (6 * j)
    return m


def unpack(m):
    return tuple((m >> (6 * j)) & 0x3F for j in range(6))


def compose(rows_a, rows_b):
    """Map doing rows_a first, then rows_b (right-action composition)."""
    return tuple(apply_map(r, rows_b) for r in rows_a)


def preserves_q(rows):
    return all(qform_coords(apply_map(c, rows)) == qform_coords(c)
               for c in range(64))


_PAIR_COORDS = {}
for _a in range(1, 9):
    for _b in range(1, 9):
        if _a != _b:
            _PAIR_COORDS[(_a, _b)] = class_coords(eclass(_a, _b))


def perm_to_orthogonal(sigma):
    """Row images of the action e_j -> e_{j sigma} on V.

    sigma is a tuple of images (sigma[j-1] = j.sigma, 1-based values).
    """
    return tuple(_PAIR_COORDS[(sigma[j], sigma[j + 1])] for j in range(6))


class _PermTable:
    """Lazy bijection between S8 and the 40320 orthogonal maps."""

    def __init__(self):
        self._by_matrix = None

    @property
    def by_matrix(self):
        if self._by_matrix is None:
            table = {}
            for sigma in permutations(range(1, 9)):
                table[pack(perm_to_orthogonal(sigma))] = sigma
            self._by_matrix = table
        return self._by_matrix

    def perm_of(self, rows):
        return self.by_matrix[pack(rows)]


PERM_TABLE = _PermTable()


def orthogonal_to_perm(rows):
    """The unique permutation inducing the given orthogonal map."""
    return PERM_TABLE.perm_of(rows)


def enumerate_partitions(shape):
    """All (2,2,2,2)- or (4,4)-partitions of {1..8}, canonically ordered.

    shape: "2222" or "44".  Pairs/halves are sorted tuples; the partition is
    the tuple of its blocks sorted by first element.
    """
    if shape == "2222":
        out = []

        def rec(rest, acc):
            if not rest:
                out.append(tuple(acc))
                return
            a = rest[0]
            for b in rest[1:]:
                rec(tuple(x for x in rest if x not in (a, b)), acc + [(a, b)])

        rec(tuple(range(1, 9)), [])
        return sorted(out)
    if shape == "44":
        halves = []
        for comb in combinations(range(2, 9), 3):
            first = (1,) + comb
            second = tuple(x for x in range(1, 9) if x not in first)
            halves.append((first, second))
        return sorted(halves)
    raise ValueError(f"unknown shape {shape!r}")


PARTITION_R1 = ((1, 2), (3, 4), (5, 6), (7, 8))


def partition_key(partition):
    """Serialization like "12.34.56.78" used in CLI output."""
    return ".".join("".join(str(i) for i in blk) for blk in partition)


def act_partition(partition, sigma):
    """Right action of sigma on a (2,2,2,2)-partition."""
    blocks = [tuple(sorted((sigma[a - 1], sigma[b - 1]))) for a, b in partition]
    return tuple(sorted(blocks))


def _reduce(v, basis):
    changed = True
    while changed:
        changed = False
        for b in basis:
            if v ^ b < v:
                v ^= b
                changed = True
    return v


def partition_subspace(partition):
    """Coordinate basis of V_I = <class(e_a + e_b) : (a,b) in I>, dim 3."""
    gens = [class_coords(eclass(a, b)) for a, b in partition]
    basis = []
    for g in gens:
        v = _reduce(g, basis)
        if v:
            basis.append(v)
            basis.sort(reverse=True)
    return sorted(basis)


def span_f2(vectors):
    """All elements of the F2 span of packed coordinate vectors."""
    basis = []
    for v in vectors:
        w = _reduce(v, basis)
        if w:
            basis.append(w)
    out = set()
    for bits in range(1 << len(basis)):
        x = 0
        for i, b in enumerate(basis):
            if (bits >> i) & 1:
                x ^= b
        out.add(x)
    return out


def singular_vectors():
    """Nonzero classes with q = 0; there are 35 of them."""
    return [c for c in range(1, 64) if qform_coords(c) == 0]


def split_to_vector(half_partition):
    """P(4,4) -> V, s = {A, B} -> class(sum of e in A)."""
    first, _ = half_partition
    return class_coords(eclass(*first))
