"""Sylow p-subgroups of U_n(F_q) in defining characteristic.

U_n(F_q) is taken with the skew-diagonal form: A in GL_n(F_{q^2}) with
conj(A)^T Q_n A = Q_n.  The Sylow p-subgroup S (q a power of p) is the
group of lower unitriangular members, parametrized as

    n = 2m   : X_{D,P}       = [[(conj(D)^F)^-1, 0], [DP, D]]
    n = 2m+1 : X_{D,P,alpha} = [[(conj(D)^F)^-1, 0, 0],
                                [alpha, 1, 0],
                                [DP, -D Q conj(alpha)^T, D]]

with D lower unitriangular, P conjugate-skew-persymmetric (even) or
alpha-conjugate-skew-persymmetric (odd).  This module provides the
parametrization with its closed product/inverse/commutator formulas,
full enumeration, the distinguished subgroups A, A0, D-part and N~_ij,
and streaming scans for instances too large to materialise.
"""

from __future__ import annotations

import itertools

import numpy as np

from . import kernels
from .field import FieldSpec, _is_prime
from .matrix import (
    Mat,
    conj_mat,
    flip_transpose,
    identity,
    is_alpha_csp,
    is_conj_skew_persymmetric,
    is_lower_unitriangular,
    mat_add,
    mat_inverse,
    mat_mul,
    mat_neg,
    skew_identity,
    transpose,
    zero,
)

DEFAULT_BUDGET = 2 ** 24


class UnitaryError(ValueError):
    pass


class BudgetError(RuntimeError):
    def __init__(self, required, budget):
        self.required = required
        self.budget = budget
        super().__init__(
            f"enumeration needs an element budget >= {required} (configured {budget})"
        )


class UnitaryParams:
    """Instance parameters (p, q = p^k, n); the Sylow constructors
    require p >= 5, where the structure results used for verification
    apply."""

    def __init__(self, p, k, n, field=None):
        if not _is_prime(p):
            raise UnitaryError(f"p={p} is not prime")
        if p < 5:
            raise UnitaryError(f"p={p} < 5: Sylow constructors require p >= 5")
        if n < 2:
            raise UnitaryError("n must be >= 2")
        self.p = p
        self.k = k
        self.q = p ** k
        self.n = n
        self.m = n // 2
        self.parity = "even" if n % 2 == 0 else "odd"
        self.field = field if field is not None else FieldSpec(p, k)
        if self.field.p != p or self.field.k != k:
            raise UnitaryError("field does not match (p, k)")

    @property
    def is_even(self):
        return self.parity == "even"

    def __repr__(self):
        return f"UnitaryParams(p={self.p}, q={self.q}, n={self.n})"


def sylow_order(params):
    return params.q ** (params.n * (params.n - 1) // 2)


# ----------------------------------------------------------------------
# The unitary group itself
# ----------------------------------------------------------------------

def is_unitary(A):
    """conj(A)^T Q_n A = Q_n, exactly."""
    Q = skew_identity(A.field, A.dim)
    return mat_mul(mat_mul(transpose(conj_mat(A)), Q), A) == Q


def unitary_group_order(q, n):
    """q^(n(n-1)/2) * prod_{i=1..n} (q^i - (-1)^i)."""
    order = q ** (n * (n - 1) // 2)
    for i in range(1, n + 1):
        order *= q ** i - (-1) ** i
    return order


def count_unitary_exhaustive(field, n, limit=5_000_000):
    """Count n x n matrices over F_{q^2} satisfying the form equation,
    by scanning every matrix (tiny instances only)."""
    total = field.s ** (n * n)
    if total > limit:
        raise BudgetError(total, limit)
    count = 0
    for entries in itertools.product(range(field.s), repeat=n * n):
        A = Mat(field, n, entries)
        if is_unitary(A):
            count += 1
    return count


# ----------------------------------------------------------------------
# SylowElem and the closed formulas
# ----------------------------------------------------------------------

def cross_gram(field, m, u, v):
    """Q conj(u)^T v: entry (i, j) = conj(u_{m-1-i}) * v_j."""
    F = field
    flat = []
    for i in range(m):
        cu = F.conj(u[m - 1 - i])
        for j in range(m):
            flat.append(F.mul(cu, v[j]))
    return Mat(field, m, flat)


class SylowElem:
    """Parametrized Sylow element: (D, P) for n = 2m, (D, P, alpha) for
    n = 2m+1 (alpha is the empty tuple in the even case)."""

    __slots__ = ("params", "D", "P", "alpha")

    def __init__(self, params, D, P, alpha=(), validate=True):
        self.params = params
        self.D = D
        self.P = P
        self.alpha = tuple(alpha)
        if validate:
            m = params.m
            if D.dim != m or P.dim != m:
                raise UnitaryError("block size mismatch")
            if not is_lower_unitriangular(D):
                raise UnitaryError("D must be lower unitriangular")
            if params.is_even:
                if self.alpha:
                    raise UnitaryError("even parity has no alpha part")
                if not is_conj_skew_persymmetric(P):
                    raise UnitaryError("P must be conjugate-skew-persymmetric")
            else:
                if len(self.alpha) != m:
                    raise UnitaryError("alpha must have length m")
                if not is_alpha_csp(P, self.alpha):
                    raise UnitaryError("P must be alpha-conjugate-skew-persymmetric")

    def __eq__(self, other):
        return (
            isinstance(other, SylowElem)
            and self.D == other.D
            and self.P == other.P
            and self.alpha == other.alpha
        )

    def __hash__(self):
        return hash((self.D, self.P, self.alpha))

    def __repr__(self):
        if self.params.is_even:
            return f"SylowElem(D={self.D}, P={self.P})"
        return f"SylowElem(D={self.D}, P={self.P}, alpha={self.alpha})"


def sylow_identity(params):
    m = params.m
    F = params.field
    alpha = () if params.is_even else (0,) * m
    return SylowElem(params, identity(F, m), zero(F, m), alpha, validate=False)


def embed(e):
    """The n x n matrix of a Sylow element."""
    params = e.params
    F, m, n = params.field, params.m, params.n
    Binv = mat_inverse(flip_transpose(conj_mat(e.D)))
    DP = mat_mul(e.D, e.P)
    flat = [0] * (n * n)
    for i in range(m):
        for j in range(m):
            flat[i * n + j] = Binv[i, j]
    if params.is_even:
        for i in range(m):
            for j in range(m):
                flat[(m + i) * n + j] = DP[i, j]
                flat[(m + i) * n + (m + j)] = e.D[i, j]
    else:
        for j in range(m):
            flat[m * n + j] = e.alpha[j]
        flat[m * n + m] = 1
        beta = _beta_column(params, e.D, e.alpha)
        for i in range(m):
            flat[(m + 1 + i) * n + m] = beta[i]
            for j in range(m):
                flat[(m + 1 + i) * n + j] = DP[i, j]
                flat[(m + 1 + i) * n + (m + 1 + j)] = e.D[i, j]
    return Mat(F, n, flat)


def _beta_column(params, D, alpha):
    """-D Q conj(alpha)^T as a length-m column."""
    F, m = params.field, params.m
    beta = []
    for i in range(m):
        acc = 0
        for j in range(m):
            acc = F.add(acc, F.mul(D[i, j], F.conj(alpha[m - 1 - j])))
        beta.append(F.neg(acc))
    return beta


def decompose(params, A):
    """Inverse of `embed` on lower unitriangular unitary matrices."""
    F, m, n = params.field, params.m, params.n
    if A.dim != n:
        raise UnitaryError("matrix size mismatch")
    if not is_lower_unitriangular(A):
        raise UnitaryError("matrix is not lower unitriangular")
    if not is_unitary(A):
        raise UnitaryError("matrix is not unitary")
    off = m if params.is_even else m + 1
    D = Mat(F, m, [A[off + i, off + j] for i in range(m) for j in range(m)])
    C = Mat(F, m, [A[off + i, j] for i in range(m) for j in range(m)])
    P = mat_mul(mat_inverse(D), C)
    alpha = () if params.is_even else tuple(A[m, j] for j in range(m))
    e = SylowElem(params, D, P, alpha)
    # cross-check the determined blocks
    Binv = mat_inverse(flip_transpose(conj_mat(D)))
    for i in range(m):
        for j in range(m):
            if A[i, j] != Binv[i, j]:
                raise UnitaryError("B block is not (conj(D)^F)^-1")
    if not params.is_even:
        beta = _beta_column(params, D, alpha)
        for i in range(m):
            if A[m + 1 + i, m] != beta[i]:
                raise UnitaryError("beta column is not -D Q conj(alpha)^T")
    return e


def mul_formula(x, y):
    """X_{D,P} X_{D',P'} = X_{DD', D'^-1 P (conj(D')^F)^-1 + P'}
    (even parity)."""
    params = _same_params(x, y)
    if not params.is_even:
        raise UnitaryError("closed product formula is even-parity only")
    Dp = y.D
    Dn = mat_mul(x.D, Dp)
    middle = mat_mul(
        mat_mul(mat_inverse(Dp), x.P),
        mat_inverse(flip_transpose(conj_mat(Dp))),
    )
    return SylowElem(params, Dn, mat_add(middle, y.P), validate=False)


def inverse_formula(x):
    """X_{D,P}^-1 = X_{D^-1, -D P conj(D)^F} (even parity)."""
    params = x.params
    if not params.is_even:
        raise UnitaryError("closed inverse formula is even-parity only")
    Pn = mat_neg(mat_mul(mat_mul(x.D, x.P), flip_transpose(conj_mat(x.D))))
    return SylowElem(params, mat_inverse(x.D), Pn, validate=False)


def comm_formula(x, y):
    """Closed commutator [x, y] = x^-1 y^-1 x y for the shapes that have
    one:

    even: x = X_{1,P}             -> X_{1, D^-1 P (conj(D)^F)^-1 - P}
    odd:  x = X_{1,P,0}           -> X_{1, -P + D^-1 P (conj(D)^F)^-1, 0}
    odd:  x = X_{1,P,a}, y = X_{1,P',a'}
                                  -> X_{1, Q conj(a')^T a - Q conj(a)^T a', 0}
    """
    params = _same_params(x, y)
    F, m = params.field, params.m
    ident = identity(F, m)
    if x.D != ident:
        raise UnitaryError("commutator formula needs x with identity D block")
    D = y.D
    if params.is_even:
        middle = mat_mul(
            mat_mul(mat_inverse(D), x.P),
            mat_inverse(flip_transpose(conj_mat(D))),
        )
        return SylowElem(params, ident, mat_add(middle, mat_neg(x.P)), validate=False)
    if all(a == 0 for a in x.alpha):
        middle = mat_mul(
            mat_mul(mat_inverse(D), x.P),
            mat_inverse(flip_transpose(conj_mat(D))),
        )
        Pn = mat_add(mat_neg(x.P), middle)
        return SylowElem(params, ident, Pn, (0,) * m, validate=False)
    if D == ident:
        Pn = mat_add(
            cross_gram(F, m, y.alpha, x.alpha),
            mat_neg(cross_gram(F, m, x.alpha, y.alpha)),
        )
        return SylowElem(params, ident, Pn, (0,) * m, validate=False)
    raise UnitaryError("no closed commutator formula for this shape")


def mul_general(x, y):
    """Product via embed -> matrix multiply -> decompose (any parity)."""
    params = _same_params(x, y)
    return decompose(params, mat_mul(embed(x), embed(y)))


def inverse_general(x):
    return decompose(x.params, mat_inverse(embed(x)))


def comm_oracle(x, y):
    """[x, y] computed directly as x^-1 y^-1 x y on embedded matrices."""
    params = _same_params(x, y)
    X, Y = embed(x), embed(y)
    M = mat_mul(mat_mul(mat_mul(mat_inverse(X), mat_inverse(Y)), X), Y)
    return decompose(params, M)


def centralizer_condition(U, P):
    """U P + P conj(U)^F + U P conj(U)^F = 0; with D = 1 + U this is
    exactly 'X_{D,P'} centralizes X_{1,P}'."""
    UF = flip_transpose(conj_mat(U))
    UP = mat_mul(U, P)
    total = mat_add(mat_add(UP, mat_mul(P, UF)), mat_mul(UP, UF))
    return total == zero(P.field, P.dim)


def _same_params(x, y):
    if x.params.n != y.params.n or x.params.field != y.params.field:
        raise UnitaryError("mismatched Sylow parameters")
    return x.params


# ----------------------------------------------------------------------
# Enumeration of the parameter blocks
# ----------------------------------------------------------------------

def lower_unitriangular_mats(field, m, positions=None):
    """All lower unitriangular m x m matrices, free entries restricted
    to `positions` (default: all subdiagonal positions), in canonical
    lexicographic order."""
    if positions is None:
        positions = [(i, j) for i in range(m) for j in range(i)]
    out = []
    base = identity(field, m).entries
    for vals in itertools.product(range(field.s), repeat=len(positions)):
        flat = list(base)
        for (i, j), v in zip(positions, vals):
            flat[i * m + j] = v
        out.append(Mat(field, m, flat))
    return out


def nij_positions(m, i, j):
    """Free positions of N_ij (1-based indices, 1 <= j < i <= m): entry
    (a, b), a > b, is free iff a >= i and b <= j."""
    if not (1 <= j < i <= m):
        raise UnitaryError(f"need 1 <= j < i <= m, got i={i}, j={j}, m={m}")
    return [
        (a, b)
        for a in range(m)
        for b in range(a)
        if a + 1 >= i and b + 1 <= j
    ]


def csp_positions(m):
    """(below, diag): positions strictly below the skew-diagonal, and on
    it.  Entries above it are forced to -conj of their mirror."""
    below = [(i, j) for i in range(m) for j in range(m) if i + j > m - 1]
    diag = [(i, m - 1 - i) for i in range(m)]
    return below, diag


def trace_kernel_basis(field):
    """F_p-basis of {x : x + conj(x) = 0}."""
    basis = []
    span = {0}
    for x in field.trace_kernel():
        if x in span:
            continue
        basis.append(x)
        span = {
            field.add(y, field.mul(x, c)) for y in span for c in range(field.p)
        }
    return basis


def _csp_from_free(field, m, below, diag, below_vals, diag_vals):
    flat = [0] * (m * m)
    for (i, j), v in zip(below, below_vals):
        flat[i * m + j] = v
        flat[(m - 1 - j) * m + (m - 1 - i)] = field.neg(field.conj(v))
    for (i, j), v in zip(diag, diag_vals):
        flat[i * m + j] = v
    return Mat(field, m, flat)


def csp_matrices(field, m):
    """All conjugate-skew-persymmetric m x m matrices, canonical order;
    there are (q^2)^(m(m-1)/2) * q^m of them."""
    below, diag = csp_positions(m)
    kernel = field.trace_kernel()
    out = []
    for below_vals in itertools.product(range(field.s), repeat=len(below)):
        for diag_vals in itertools.product(kernel, repeat=m):
            out.append(_csp_from_free(field, m, below, diag, below_vals, diag_vals))
    return out


def csp_basis(field, m):
    """F_p-basis of the conjugate-skew-persymmetric space."""
    below, diag = csp_positions(m)
    basis = []
    monomials = [field.p ** t for t in range(field.deg)]
    for pos_idx in range(len(below)):
        for b in monomials:
            below_vals = [0] * len(below)
            below_vals[pos_idx] = b
            basis.append(_csp_from_free(field, m, below, diag, below_vals, [0] * m))
    kbasis = trace_kernel_basis(field)
    for pos_idx in range(m):
        for b in kbasis:
            diag_vals = [0] * m
            diag_vals[pos_idx] = b
            basis.append(_csp_from_free(field, m, below, diag, [0] * len(below), diag_vals))
    return basis


def alpha_particular(field, m, alpha):
    """One P with P + conj(P)^F = -Q conj(alpha)^T alpha."""
    M = mat_neg(cross_gram(field, m, alpha, alpha))
    if flip_transpose(conj_mat(M)) != M:
        raise UnitaryError("gram matrix lost its flip-conjugate symmetry")
    below, diag = csp_positions(m)
    flat = [0] * (m * m)
    for i, j in below:
        flat[i * m + j] = M[i, j]
    for i, j in diag:
        flat[i * m + j] = field.trace_solution(M[i, j])
    return Mat(field, m, flat)


def iter_sylow_elems(params):
    """All Sylow elements in canonical parametrization order."""
    F, m = params.field, params.m
    Dlist = lower_unitriangular_mats(F, m)
    csp = csp_matrices(F, m)
    if params.is_even:
        for D in Dlist:
            for P in csp:
                yield SylowElem(params, D, P, validate=False)
    else:
        for D in Dlist:
            for alpha in itertools.product(range(F.s), repeat=m):
                P0 = alpha_particular(F, m, alpha)
                for V in csp:
                    yield SylowElem(params, D, mat_add(P0, V), alpha, validate=False)


def sylow_generators(params):
    """Generator witness for S: subdiagonal elementary D's over an
    F_p-basis of the field, an F_p-basis of the csp space, and (odd)
    coordinate alpha vectors over a field basis."""
    F, m = params.field, params.m
    monomials = [F.p ** t for t in range(F.deg)]
    zero_alpha = () if params.is_even else (0,) * m
    gens = []
    Z = zero(F, m)
    for r in range(1, m):
        for b in monomials:
            flat = list(identity(F, m).entries)
            flat[r * m + (r - 1)] = b
            gens.append(SylowElem(params, Mat(F, m, flat), Z, zero_alpha, validate=False))
    for B in csp_basis(F, m):
        gens.append(SylowElem(params, identity(F, m), B, zero_alpha, validate=False))
    if not params.is_even:
        for j in range(m):
            for b in monomials:
                alpha = tuple(b if t == j else 0 for t in range(m))
                P0 = alpha_particular(F, m, alpha)
                gens.append(SylowElem(params, identity(F, m), P0, alpha, validate=False))
    return gens


# ----------------------------------------------------------------------
# Flat embedding and streaming enumeration
# ----------------------------------------------------------------------

def embed_flat(e):
    return np.array(embed(e).entries, dtype=np.uint16)


def embed_key(e):
    return embed_flat(e).tobytes()


def stream_sylow_batches(params):
    """Yield flat (chunk, n^2) uint16 batches covering S exactly once.
    Chunks group the csp part for fixed (D[, alpha]), so generation is a
    handful of vectorised table lookups per chunk."""
    F, m, n = params.field, params.m, params.n
    s = F.s
    csp = csp_matrices(F, m)
    add2d = F.add_table.reshape(s, s)
    Dlist = lower_unitriangular_mats(F, m)
    if params.is_even:
        dp_pos = [(m + i) * n + j for i in range(m) for j in range(m)]
    else:
        dp_pos = [(m + 1 + i) * n + j for i in range(m) for j in range(m)]
    dp_pos = np.array(dp_pos, dtype=np.intp)

    for D in Dlist:
        Binv = mat_inverse(flip_transpose(conj_mat(D)))
        DV = np.array(
            [mat_mul(D, V).entries for V in csp], dtype=np.uint16
        )  # (C, m*m)
        template = np.zeros(n * n, dtype=np.uint16)
        for i in range(n):
            template[i * n + i] = 1
        for i in range(m):
            for j in range(m):
                template[i * n + j] = Binv[i, j]
        if params.is_even:
            for i in range(m):
                for j in range(m):
                    template[(m + i) * n + (m + j)] = D[i, j]
            batch = np.tile(template, (len(csp), 1))
            batch[:, dp_pos] = DV
            yield batch
        else:
            for i in range(m):
                for j in range(m):
                    template[(m + 1 + i) * n + (m + 1 + j)] = D[i, j]
            for alpha in itertools.product(range(s), repeat=m):
                P0 = alpha_particular(F, m, alpha)
                DP0 = np.array(mat_mul(D, P0).entries, dtype=np.uint16)
                beta = _beta_column(params, D, alpha)
                t = template.copy()
                for j in range(m):
                    t[m * n + j] = alpha[j]
                for i in range(m):
                    t[(m + 1 + i) * n + m] = beta[i]
                batch = np.tile(t, (len(csp), 1))
                batch[:, dp_pos] = add2d[DP0[None, :], DV]
                yield batch


def streaming_centralizer_scan(params, gen_flats, budget=DEFAULT_BUDGET):
    """Keys of every Sylow element commuting with all rows of
    `gen_flats`, by exhaustive scan over the parametrization (early
    exit per element on the first failing generator)."""
    size = sylow_order(params)
    if size > budget:
        raise BudgetError(size, budget)
    F = params.field
    gens = np.ascontiguousarray(gen_flats, dtype=np.uint16)
    found = []
    for batch in stream_sylow_batches(params):
        mask = kernels.scan_commuting(
            batch, gens, params.n, F.mul_table, F.add_table, F.s
        )
        idx = np.nonzero(mask)[0]
        if idx.size:
            found.extend(kernels.keys_from_batch(batch[idx]))
    return found


def streaming_exponent_check(params, e, budget=DEFAULT_BUDGET):
    """True iff x^e = 1 for every element of S (exhaustive scan)."""
    size = sylow_order(params)
    if size > budget:
        raise BudgetError(size, budget)
    F = params.field
    for batch in stream_sylow_batches(params):
        mask = kernels.scan_power_identity(
            batch, e, params.n, F.mul_table, F.add_table, F.s
        )
        if not mask.all():
            return False
    return True


def sylow_group(params, budget=DEFAULT_BUDGET, materialise=True):
    """The Sylow subgroup as a Group: materialised when its order fits
    the budget (default 2^24 elements), else virtual with a
    decomposition-based membership predicate."""
    from .groups import Group, MatrixOps

    size = sylow_order(params)
    ops = MatrixOps(params.field, params.n)
    gen_keys = [embed_key(e) for e in sylow_generators(params)]
    name = f"S(p={params.p},q={params.q},n={params.n})"
    if materialise:
        if size > budget:
            raise BudgetError(size, budget)
        keys = []
        for batch in stream_sylow_batches(params):
            keys.extend(kernels.keys_from_batch(batch))
        return Group(ops, elements=keys, generators=gen_keys, name=name)

    def membership(key):
        try:
            elem_from_key(params, key)
            return True
        except (UnitaryError, ValueError):
            return False

    return Group(
        ops, elements=None, generators=gen_keys, name=name, order=size,
        membership=membership,
    )


def distinguished_subgroup(G, params, tag, ij=None):
    """The tagged subgroup as a Subgroup of G (G from sylow_group on the
    same params; G may be virtual)."""
    from .groups import Subgroup

    if tag == "full":
        return G.full_subgroup()
    members, gens = subgroup_elems(params, tag, ij)
    keys = frozenset(embed_key(e) for e in members)
    witness = tuple(embed_key(e) for e in gens)
    return Subgroup(G, keys, witness)


# ----------------------------------------------------------------------
# Membership predicates on embedded matrices (used by streaming checks)
# ----------------------------------------------------------------------

def elem_from_key(params, key):
    flat = np.frombuffer(key, dtype=np.uint16)
    return decompose(params, Mat(params.field, params.n, [int(x) for x in flat]))


def in_A(params, e):
    """e lies in A = {X_{1,P[,alpha]}}."""
    return e.D == identity(params.field, params.m)


def in_A0(params, e):
    """e lies in A0 = {X_{1,P,0}} (odd; in the even case A0 = A)."""
    if params.is_even:
        return in_A(params, e)
    return in_A(params, e) and all(a == 0 for a in e.alpha)


# ----------------------------------------------------------------------
# Distinguished subgroup data (members + generator witnesses)
# ----------------------------------------------------------------------

def subgroup_elems(params, tag, ij=None):
    """(members, generators) as SylowElem lists for tag in
    {'A', 'A0', 'Dpart', 'Ntilde', 'full'}; Ntilde takes ij = (i, j)
    with 1 <= j < i <= m."""
    F, m = params.field, params.m
    csp = csp_matrices(F, m)
    ident = identity(F, m)
    zero_alpha = () if params.is_even else (0,) * m

    def a_members():
        if params.is_even:
            return [SylowElem(params, ident, P, validate=False) for P in csp]
        out = []
        for alpha in itertools.product(range(F.s), repeat=m):
            P0 = alpha_particular(F, m, alpha)
            for V in csp:
                out.append(
                    SylowElem(params, ident, mat_add(P0, V), alpha, validate=False)
                )
        return out

    def a0_gens():
        return [
            SylowElem(params, ident, B, zero_alpha, validate=False)
            for B in csp_basis(F, m)
        ]

    def alpha_gens():
        out = []
        for j in range(m):
            for b in [F.p ** t for t in range(F.deg)]:
                alpha = tuple(b if t == j else 0 for t in range(m))
                P0 = alpha_particular(F, m, alpha)
                out.append(SylowElem(params, ident, P0, alpha, validate=False))
        return out

    if tag == "A":
        gens = a0_gens() if params.is_even else a0_gens() + alpha_gens()
        return a_members(), gens
    if tag == "A0":
        if params.is_even:
            raise UnitaryError("A0 is defined for odd parity only")
        members = [SylowElem(params, ident, V, zero_alpha, validate=False) for V in csp]
        return members, a0_gens()
    if tag == "Dpart":
        members = [
            SylowElem(params, D, zero(F, m), zero_alpha, validate=False)
            for D in lower_unitriangular_mats(F, m)
        ]
        gens = [
            e
            for e in sylow_generators(params)
            if e.P == zero(F, m) and all(a == 0 for a in e.alpha)
        ]
        return members, gens
    if tag == "Ntilde":
        if ij is None:
            raise UnitaryError("Ntilde needs ij=(i, j)")
        i, j = ij
        positions = nij_positions(m, i, j)
        Dlist = lower_unitriangular_mats(F, m, positions)
        members = []
        if params.is_even:
            for D in Dlist:
                for P in csp:
                    members.append(SylowElem(params, D, P, validate=False))
        else:
            for D in Dlist:
                for alpha in itertools.product(range(F.s), repeat=m):
                    P0 = alpha_particular(F, m, alpha)
                    for V in csp:
                        members.append(
                            SylowElem(
                                params, D, mat_add(P0, V), alpha, validate=False
                            )
                        )
        dgens = []
        for a, b in positions:
            for c in [F.p ** t for t in range(F.deg)]:
                flat = list(ident.entries)
                flat[a * m + b] = c
                dgens.append(
                    SylowElem(params, Mat(F, m, flat), zero(F, m), zero_alpha,
                              validate=False)
                )
        _, agens = subgroup_elems(params, "A")
        return members, dgens + agens
    if tag == "full":
        return list(iter_sylow_elems(params)), sylow_generators(params)
    raise UnitaryError(f"unknown subgroup tag {tag!r}")
