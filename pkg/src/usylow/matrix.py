"""Square matrices over F_{q^2}: flip-transpose and form predicates.

The skew-diagonal of a square matrix runs from bottom-left to
top-right; reflecting in it gives the flip-transpose B^F = Q B^T Q
where Q is the all-ones skew-diagonal matrix.  A matrix is
persymmetric if B^F = B, skew-persymmetric if B^F = -B, and
conjugate-skew-persymmetric if conj(B)^F = -B.  The alpha variant asks
P + conj(P)^F = -Q conj(alpha)^T alpha for a row vector alpha.
"""

from __future__ import annotations


class MatError(ValueError):
    pass


class Mat:
    """Immutable dim x dim matrix; entries are field element indices
    in row-major order."""

    __slots__ = ("field", "dim", "entries")

    def __init__(self, field, dim, entries):
        entries = tuple(entries)
        if len(entries) != dim * dim:
            raise MatError(f"need {dim * dim} entries, got {len(entries)}")
        s = field.s
        if any(not (0 <= e < s) for e in entries):
            raise MatError("entry out of field range")
        object.__setattr__(self, "field", field)
        object.__setattr__(self, "dim", dim)
        object.__setattr__(self, "entries", entries)

    def __setattr__(self, *a):
        raise AttributeError("Mat is immutable")

    def __getitem__(self, ij):
        i, j = ij
        return self.entries[i * self.dim + j]

    def __eq__(self, other):
        return (
            isinstance(other, Mat)
            and self.dim == other.dim
            and self.entries == other.entries
            and self.field == other.field
        )

    def __hash__(self):
        return hash((self.dim, self.entries))

    def __repr__(self):
        rows = [
            list(self.entries[i * self.dim : (i + 1) * self.dim])
            for i in range(self.dim)
        ]
        return f"Mat({rows})"

    def __mul__(self, other):
        return mat_mul(self, other)


def identity(field, dim):
    e = [0] * (dim * dim)
    for i in range(dim):
        e[i * dim + i] = 1
    return Mat(field, dim, e)


def zero(field, dim):
    return Mat(field, dim, [0] * (dim * dim))


def skew_identity(field, dim):
    """Q: ones on the skew-diagonal, zero elsewhere."""
    e = [0] * (dim * dim)
    for i in range(dim):
        e[i * dim + (dim - 1 - i)] = 1
    return Mat(field, dim, e)


def mat_from_rows(field, rows):
    dim = len(rows)
    flat = []
    for r in rows:
        if len(r) != dim:
            raise MatError("ragged rows")
        flat.extend(r)
    return Mat(field, dim, flat)


# ----------------------------------------------------------------------
# Arithmetic
# ----------------------------------------------------------------------

def mat_add(a, b):
    _check_same(a, b)
    F = a.field
    return Mat(F, a.dim, [F.add(x, y) for x, y in zip(a.entries, b.entries)])


def mat_neg(a):
    F = a.field
    return Mat(F, a.dim, [F.neg(x) for x in a.entries])


def mat_sub(a, b):
    return mat_add(a, mat_neg(b))


def mat_mul(a, b):
    _check_same(a, b)
    F, n = a.field, a.dim
    ae, be = a.entries, b.entries
    out = [0] * (n * n)
    for i in range(n):
        for j in range(n):
            acc = 0
            for k in range(n):
                acc = F.add(acc, F.mul(ae[i * n + k], be[k * n + j]))
            out[i * n + j] = acc
    return Mat(F, n, out)


def mat_scale(a, c):
    F = a.field
    return Mat(F, a.dim, [F.mul(c, x) for x in a.entries])


def transpose(a):
    n = a.dim
    return Mat(a.field, n, [a.entries[j * n + i] for i in range(n) for j in range(n)])


def conj_mat(a):
    F = a.field
    return Mat(F, a.dim, [F.conj(x) for x in a.entries])


def flip_transpose(a):
    """B^F = Q B^T Q: entry (i, j) of B^F is entry (j', i') of B with
    i' = dim - 1 - i."""
    n = a.dim
    e = a.entries
    return Mat(
        a.field,
        n,
        [e[(n - 1 - j) * n + (n - 1 - i)] for i in range(n) for j in range(n)],
    )


def is_lower_unitriangular(a):
    n = a.dim
    for i in range(n):
        for j in range(n):
            v = a.entries[i * n + j]
            if i == j and v != 1:
                return False
            if j > i and v != 0:
                return False
    return True


def is_strictly_lower(a):
    n = a.dim
    return all(a.entries[i * n + j] == 0 for i in range(n) for j in range(n) if j >= i)


def mat_inverse(a):
    """Gaussian elimination; fast forward-substitution path for lower
    unitriangular input."""
    F, n = a.field, a.dim
    if is_lower_unitriangular(a):
        return _unitri_inverse(a)
    # augmented elimination
    rows = [
        [a.entries[i * n + j] for j in range(n)]
        + [1 if j == i else 0 for j in range(n)]
        for i in range(n)
    ]
    for col in range(n):
        piv = next((r for r in range(col, n) if rows[r][col] != 0), None)
        if piv is None:
            raise MatError("matrix is singular")
        rows[col], rows[piv] = rows[piv], rows[col]
        pinv = F.inv(rows[col][col])
        rows[col] = [F.mul(pinv, x) for x in rows[col]]
        for r in range(n):
            if r != col and rows[r][col] != 0:
                c = rows[r][col]
                rows[r] = [
                    F.sub(x, F.mul(c, y)) for x, y in zip(rows[r], rows[col])
                ]
    flat = []
    for i in range(n):
        flat.extend(rows[i][n:])
    return Mat(F, n, flat)


def _unitri_inverse(a):
    F, n = a.field, a.dim
    inv = [[1 if i == j else 0 for j in range(n)] for i in range(n)]
    # column by column forward substitution: inv[i][j] for i > j
    for j in range(n):
        for i in range(j + 1, n):
            acc = 0
            for k in range(j, i):
                acc = F.add(acc, F.mul(a.entries[i * n + k], inv[k][j]))
            inv[i][j] = F.neg(acc)
    return Mat(F, n, [x for row in inv for x in row])


# ----------------------------------------------------------------------
# Form predicates
# ----------------------------------------------------------------------

def is_persymmetric(a):
    return flip_transpose(a) == a


def is_skew_persymmetric(a):
    return flip_transpose(a) == mat_neg(a)


def is_conj_skew_persymmetric(a):
    return flip_transpose(conj_mat(a)) == mat_neg(a)


def is_alpha_csp(a, alpha):
    """P + conj(P)^F = -Q conj(alpha)^T alpha."""
    if len(alpha) != a.dim:
        raise MatError("alpha length must equal matrix dimension")
    rhs = mat_neg(alpha_gram(a.field, a.dim, alpha))
    return mat_add(a, flip_transpose(conj_mat(a))) == rhs


def alpha_gram(field, dim, alpha):
    """Q conj(alpha)^T alpha as a dim x dim matrix."""
    F = field
    col = [F.conj(x) for x in alpha]  # conj(alpha)^T entries
    # (conj(alpha)^T alpha)_{ij} = conj(alpha_i) alpha_j; Q reverses rows
    flat = []
    for i in range(dim):
        src = dim - 1 - i
        for j in range(dim):
            flat.append(F.mul(col[src], alpha[j]))
    return Mat(field, dim, flat)


def form_predicate(a, kind, alpha=None):
    """Dispatch on form name: persymmetric, skew_persymmetric,
    conj_skew_persymmetric, alpha_csp."""
    if kind == "persymmetric":
        return is_persymmetric(a)
    if kind == "skew_persymmetric":
        return is_skew_persymmetric(a)
    if kind == "conj_skew_persymmetric":
        return is_conj_skew_persymmetric(a)
    if kind == "alpha_csp":
        if alpha is None:
            raise MatError("alpha_csp needs an alpha vector")
        return is_alpha_csp(a, alpha)
    raise MatError(f"unknown form kind {kind!r}")


def is_symmetric(a):
    return transpose(a) == a


def is_skew_symmetric(a):
    return transpose(a) == mat_neg(a)


# ----------------------------------------------------------------------
# Random sampling (seeded, for identity checks)
# ----------------------------------------------------------------------

def random_mat(field, dim, rng):
    """rng is a stdlib random.Random (seeded by the caller)."""
    return Mat(field, dim, [rng.randrange(field.s) for _ in range(dim * dim)])


def random_invertible(field, dim, rng):
    while True:
        m = random_mat(field, dim, rng)
        try:
            mat_inverse(m)
            return m
        except MatError:
            continue


def random_lower_unitriangular(field, dim, rng):
    e = [0] * (dim * dim)
    for i in range(dim):
        e[i * dim + i] = 1
        for j in range(i):
            e[i * dim + j] = rng.randrange(field.s)
    return Mat(field, dim, e)


def _check_same(a, b):
    if a.dim != b.dim or a.field != b.field:
        raise MatError("dimension or field mismatch")
