"""Generic finite p-group engine over enumerated groups.

Elements are hashable, totally ordered canonical keys (bytes for matrix
groups, nested int tuples for structured groups); the group operation
lives in an ops object.  Provides generated subgroups, centralizers,
normal closures, Omega_1, iterated commutators, elementary abelian
rank search and the Thompson subgroup J.
"""

from __future__ import annotations

import itertools

import numpy as np

from . import kernels


class GroupError(ValueError):
    pass


# ----------------------------------------------------------------------
# Operation oracles
# ----------------------------------------------------------------------

class GenericOps:
    """Group operations on hashable keys via user-supplied callables."""

    def __init__(self, identity, mul, inv):
        self.identity = identity
        self._mul = mul
        self._inv = inv

    def mul(self, a, b):
        return self._mul(a, b)

    def inv(self, a):
        return self._inv(a)

    def conj(self, h, g):
        return self.mul(self.mul(self.inv(g), h), g)

    def comm(self, a, b):
        return self.mul(self.mul(self.inv(a), self.inv(b)), self.mul(a, b))

    def commutes(self, a, b):
        return self.mul(a, b) == self.mul(b, a)

    def power(self, a, e):
        acc = self.identity
        for _ in range(e):
            acc = self.mul(acc, a)
        return acc

    # batch hooks; subclasses may vectorise
    def mul_many(self, keys, g, left=False):
        if left:
            return [self.mul(g, x) for x in keys]
        return [self.mul(x, g) for x in keys]

    def conj_many(self, keys, g):
        ginv = self.inv(g)
        return [self.mul(self.mul(ginv, x), g) for x in keys]

    def comm_many(self, keys, g):
        """[x, g] for each x."""
        return [self.comm(x, g) for x in keys]

    def commuting_filter(self, keys, targets):
        """Subset of keys commuting with every target."""
        return [
            x for x in keys if all(self.commutes(x, t) for t in targets)
        ]

    def power_filter(self, keys, e):
        """Subset of keys with x^e = identity."""
        ident = self.identity
        return [x for x in keys if self.power(x, e) == ident]


class MatrixOps(GenericOps):
    """Matrix groups over a FieldSpec; keys are little-endian uint16
    bytes of the flat matrix, hot paths go through the kernel backend."""

    fast_batches = True

    def __init__(self, field, dim):
        self.field = field
        self.dim = dim
        self._mt = field.mul_table
        self._at = field.add_table
        self._nt = field.neg_table
        self._s = field.s
        if self._mt is None:
            raise GroupError("field too large for full tables")
        ident = np.zeros(dim * dim, dtype=np.uint16)
        for i in range(dim):
            ident[i * dim + i] = 1
        self.identity = ident.tobytes()

    def _arr(self, key):
        return np.frombuffer(key, dtype=np.uint16)

    def mul(self, a, b):
        return kernels.mat_mul(
            self._arr(a), self._arr(b), self.dim, self._mt, self._at, self._s
        ).tobytes()

    def inv(self, a):
        batch = self._arr(a).reshape(1, -1)
        out = kernels.inverse_batch_unitri(
            np.ascontiguousarray(batch), self.dim, self._mt, self._at,
            self._nt, self._s
        )
        return out[0].tobytes()

    def commutes(self, a, b):
        return bool(
            kernels.commutes(
                self._arr(a), self._arr(b), self.dim, self._mt, self._at, self._s
            )
        )

    def _batch(self, keys):
        return kernels.batch_from_keys(list(keys), self.dim * self.dim)

    def mul_many(self, keys, g, left=False):
        keys = list(keys)
        if not keys:
            return []
        out = kernels.mul_batch(
            self._batch(keys), self._arr(g), 1 if left else 0, self.dim,
            self._mt, self._at, self._s
        )
        return kernels.keys_from_batch(out)

    def conj_many(self, keys, g):
        keys = list(keys)
        if not keys:
            return []
        out = kernels.conjugate_batch(
            self._batch(keys), self._arr(self.inv(g)), self._arr(g), self.dim,
            self._mt, self._at, self._s
        )
        return kernels.keys_from_batch(out)

    def comm_many(self, keys, g):
        keys = list(keys)
        if not keys:
            return []
        batch = self._batch(keys)
        batch_inv = kernels.inverse_batch_unitri(
            batch, self.dim, self._mt, self._at, self._nt, self._s
        )
        out = kernels.commutators_with(
            batch, batch_inv, self._arr(g), self._arr(self.inv(g)), self.dim,
            self._mt, self._at, self._s
        )
        return kernels.keys_from_batch(out)

    def commuting_filter(self, keys, targets):
        keys = list(keys)
        if not keys:
            return []
        gens = self._batch(list(targets))
        mask = kernels.scan_commuting(
            self._batch(keys), gens, self.dim, self._mt, self._at, self._s
        )
        return [k for k, ok in zip(keys, mask) if ok]

    def power_filter(self, keys, e):
        keys = list(keys)
        if not keys:
            return []
        mask = kernels.scan_power_identity(
            self._batch(keys), e, self.dim, self._mt, self._at, self._s
        )
        return [k for k, ok in zip(keys, mask) if ok]


# ----------------------------------------------------------------------
# Group and Subgroup
# ----------------------------------------------------------------------

class Group:
    """A finite group of canonical keys.  Either fully materialised
    (`elements` given) or virtual (`elements=None`, with a membership
    predicate and a known order); virtual groups support every
    operation that does not scan the full element set."""

    def __init__(self, ops, elements=None, generators=(), name="",
                 order=None, membership=None):
        self.ops = ops
        self.name = name
        self.generators = tuple(generators)
        if elements is not None:
            self.elements = sorted(elements)
            self.members = frozenset(self.elements)
            if len(self.members) != len(self.elements):
                raise GroupError("duplicate elements")
            self._order = len(self.elements)
            self._membership = None
            if ops.identity not in self.members:
                raise GroupError("identity missing from element set")
        else:
            if order is None or membership is None:
                raise GroupError("virtual group needs order and membership")
            self.elements = None
            self.members = None
            self._order = order
            self._membership = membership
        self._order_cache = {}
        self.p = _prime_base(self._order)

    @property
    def order(self):
        return self._order

    def contains(self, key):
        if self.members is not None:
            return key in self.members
        return self._membership(key)

    def index_of(self, key):
        if self.elements is None:
            raise GroupError("virtual group has no index space")
        import bisect

        i = bisect.bisect_left(self.elements, key)
        if i == len(self.elements) or self.elements[i] != key:
            raise GroupError("element not in group")
        return i

    def element_order(self, key):
        if key in self._order_cache:
            return self._order_cache[key]
        ops = self.ops
        order = 1
        acc = key
        while acc != ops.identity:
            acc = ops.mul(acc, key)
            order += 1
            if order > self._order:
                raise GroupError("element order exceeds group order")
        self._order_cache[key] = order
        return order

    def full_subgroup(self):
        gens = self.generators if self.generators else (
            tuple(self.elements) if self.elements is not None else ()
        )
        return Subgroup(self, self.members, gens, full=True)

    def trivial_subgroup(self):
        return Subgroup(self, frozenset([self.ops.identity]), ())

    def __repr__(self):
        kind = "virtual" if self.elements is None else "materialised"
        return f"Group({self.name or 'unnamed'}, order={self._order}, {kind})"


def _prime_base(order):
    if order == 1:
        return None
    for p in range(2, order + 1):
        if order % p == 0:
            n = order
            while n % p == 0:
                n //= p
            if n != 1:
                raise GroupError(f"order {order} is not a prime power")
            return p
    return None


class Subgroup:
    """Subset of a Group closed under the operation, with a generator
    witness.  `members=None` together with full=True denotes the whole
    (possibly virtual) parent group."""

    def __init__(self, group, members, witness, full=False):
        self.group = group
        self.full = full or (
            members is not None and len(members) == group.order
        )
        self.members = None if (members is None and full) else frozenset(members)
        self.witness = tuple(witness)

    @property
    def order(self):
        if self.members is None:
            return self.group.order
        return len(self.members)

    def contains(self, key):
        if self.members is None:
            return self.group.contains(key)
        return key in self.members

    def member_list(self):
        if self.members is None:
            if self.group.elements is None:
                raise GroupError("virtual full subgroup has no member list")
            return list(self.group.elements)
        return sorted(self.members)

    def member_indices(self):
        return [self.group.index_of(k) for k in self.member_list()]

    def is_subset_of(self, other):
        if other.members is None:
            return True
        if self.members is None:
            return other.order == self.group.order
        return self.members <= other.members

    def same_members(self, other):
        if self.members is None or other.members is None:
            return self.order == other.order and self.is_subset_of(other) \
                and other.is_subset_of(self)
        return self.members == other.members

    def __repr__(self):
        return f"Subgroup(order={self.order} of {self.group!r})"


# ----------------------------------------------------------------------
# Closure and generated subgroups
# ----------------------------------------------------------------------

def _closure_add_gen(ops, members, used_gens, g):
    """Extend the subgroup member set `members` = <used_gens> by one new
    generator g, in place.  Only the old members times g need scanning
    (the old set is already closed under the old generators); the new
    elements are then closed under all generators."""
    gens = used_gens + [g]
    frontier = []
    for y in ops.mul_many(sorted(members), g, left=False):
        if y not in members:
            members.add(y)
            frontier.append(y)
    while frontier:
        new = []
        for h in gens:
            for y in ops.mul_many(frontier, h, left=False):
                if y not in members:
                    members.add(y)
                    new.append(y)
        frontier = new
    return members


def generated_subgroup(G, gens):
    """Smallest subgroup of G containing gens.  Generators already
    inside the running closure are skipped, so the recorded witness is a
    (typically much smaller) generating sublist."""
    ops = G.ops
    gens = [g for g in dict.fromkeys(gens) if g != ops.identity]
    for g in gens:
        if not G.contains(g):
            raise GroupError("generator not in group")
    members = {ops.identity}
    used = []
    for g in gens:
        if g in members:
            continue
        _closure_add_gen(ops, members, used, g)
        used.append(g)
    return Subgroup(G, frozenset(members), tuple(used))


def extend_subgroup(G, sub, new_gens):
    """<sub, new_gens>, reusing sub's members as the closure seed."""
    new_gens = [
        g for g in dict.fromkeys(new_gens)
        if g != G.ops.identity and not sub.contains(g)
    ]
    if not new_gens:
        return sub
    members = set(sub.member_list())
    members.add(G.ops.identity)
    used = list(sub.witness)
    for g in new_gens:
        if g in members:
            continue
        _closure_add_gen(G.ops, members, used, g)
        used.append(g)
    return Subgroup(G, frozenset(members), tuple(used))


def normal_closure(G, gens):
    """Smallest normal subgroup of G containing gens: close the
    generator set under conjugation by G's generators, regenerating as
    new conjugates appear.  Single-element closures <g^G> are cached on
    the group."""
    if not G.generators:
        raise GroupError("normal closure needs group generators")
    ops = G.ops
    gens = [g for g in dict.fromkeys(gens) if g != ops.identity]
    cache = G.__dict__.setdefault("_normal_closure_cache", {})
    if len(gens) == 1 and gens[0] in cache:
        members, witness = cache[gens[0]]
        return Subgroup(G, members, witness)
    H = generated_subgroup(G, gens)
    queue = list(gens)
    while queue:
        h = queue.pop()
        for g in G.generators:
            c = ops.conj(h, g)
            if not H.contains(c):
                queue.append(c)
                H = extend_subgroup(G, H, [c])
    if len(gens) == 1:
        cache[gens[0]] = (H.members, H.witness)
    return H


def product_subgroup(G, H, K):
    """<H union K>; when both are normal this equals the product set HK
    (checked when both member sets are materialised and small)."""
    gens = tuple(H.witness) + tuple(K.witness)
    J = extend_subgroup(G, H, K.witness) if H.order >= K.order else \
        extend_subgroup(G, K, H.witness)
    J = Subgroup(G, J.members, gens, full=J.full)
    if (
        H.members is not None and K.members is not None
        and H.order * K.order <= 1_000_000
        and is_normal(G, H) and is_normal(G, K)
    ):
        prod = set()
        for h in H.member_list():
            prod.update(G.ops.mul_many(K.member_list(), h, left=True))
        if prod != set(J.member_list()):
            raise GroupError("normal product set differs from generated join")
    return J


# ----------------------------------------------------------------------
# Centralizers, center, Omega_1
# ----------------------------------------------------------------------

def centralizer(G, H, scan_members=False):
    """{g in G : gh = hg for all h in H}.  Scans G against H's witness
    (centralising the generators centralises the subgroup); with
    scan_members=True the definition-based scan over all of H is used
    instead (oracle for the witness shortcut)."""
    if G.elements is None:
        raise GroupError("centralizer scan needs a materialised group")
    targets = list(H.member_list()) if scan_members else list(H.witness)
    targets = [t for t in targets if t != G.ops.identity]
    if not targets:
        return G.full_subgroup()
    keys = G.ops.commuting_filter(G.elements, targets)
    return Subgroup(G, frozenset(keys), tuple(keys))


def center(G):
    gens = G.generators if G.generators else tuple(G.elements)
    return centralizer(G, Subgroup(G, frozenset(), gens))


def omega1(G, H=None):
    """Subgroup generated by the elements of order dividing p in H
    (default: in G)."""
    p = G.p
    if p is None:
        return G.trivial_subgroup()
    if H is None:
        H = G.full_subgroup()
    if H.members is None:
        # full virtual subgroup: exponent check must come from the caller
        raise GroupError("omega1 over a virtual full subgroup needs member data")
    keys = G.ops.power_filter(H.member_list(), p)
    # the reduced witness from the closure generates the same subgroup
    # and keeps downstream witness-based scans (centralizers,
    # commutators) proportional to the generator count, not |Omega_1|
    return generated_subgroup(G, keys)


# ----------------------------------------------------------------------
# Predicates
# ----------------------------------------------------------------------

def is_normal(G, sub):
    """Conjugates of the witness by the group generators stay inside."""
    if sub.members is None:
        return True
    gens = G.generators if G.generators else tuple(G.elements)
    for g in gens:
        for c in G.ops.conj_many(list(sub.witness), g):
            if c not in sub.members:
                return False
    return True


def is_abelian(sub):
    ops = sub.group.ops
    ws = list(sub.witness)
    for i, a in enumerate(ws):
        for b in ws[i + 1:]:
            if not ops.commutes(a, b):
                return False
    return True


def is_elementary_abelian(sub):
    p = sub.group.p
    if sub.order == 1:
        return True
    if not is_abelian(sub):
        return False
    return all(sub.group.element_order(w) in (1, p) for w in sub.witness)


def elementary_rank(sub):
    """log_p of the order of an elementary abelian subgroup."""
    if not is_elementary_abelian(sub):
        raise GroupError("subgroup is not elementary abelian")
    if sub.order == 1:
        return 0
    p = sub.group.p
    r = 0
    n = sub.order
    while n > 1:
        n //= p
        r += 1
    return r


def is_generated_by_abelian_normal(G, reps=None):
    """G is generated by its abelian normal subgroups; tested by joining
    the abelian normal closures <g^G> over cyclic representatives."""
    if reps is None:
        reps = _cyclic_reps(G, G.elements)
    gens = []
    for g in reps:
        N = normal_closure(G, [g])
        if is_abelian(N):
            gens.extend(N.witness)
    return generated_subgroup(G, gens).order == G.order


# ----------------------------------------------------------------------
# Iterated commutators
# ----------------------------------------------------------------------

def commutator_subgroup(G, A, B, method="auto", pair_budget=2_000_000):
    """[A, B] = <[a, b] : a in A, b in B>.

    method 'pairs': commutators over the full member sets (the literal
    definition; the generated set is automatically normalised by A and
    B, so no closure step is needed beyond subgroup generation).
    method 'witness': [A, B] as the normal closure, inside <A, B>, of
    the commutators of the two generator witnesses — the standard exact
    identity, usable when member sets are too large or unavailable.
    """
    ops = G.ops
    if method == "auto":
        # the pair budget is calibrated for batch-kernel-backed ops;
        # element-at-a-time ops pay ~100x more per commutator
        budget = pair_budget if getattr(ops, "fast_batches", False) \
            else pair_budget // 100
        if (
            A.members is not None and B.members is not None
            and A.order * B.order <= budget
        ):
            method = "pairs"
        else:
            method = "witness"
    if method == "pairs":
        seeds = set()
        amembers = A.member_list()
        for b in B.member_list():
            seeds.update(ops.comm_many(amembers, b))
        seeds.discard(ops.identity)
        return generated_subgroup(G, sorted(seeds))
    if method != "witness":
        raise GroupError(f"unknown commutator method {method!r}")
    awit = [w for w in A.witness if w != ops.identity]
    bwit = [w for w in B.witness if w != ops.identity]
    seeds = set()
    for b in bwit:
        seeds.update(ops.comm_many(awit, b))
    seeds.discard(ops.identity)
    H = generated_subgroup(G, sorted(seeds))
    conj_gens = list(dict.fromkeys(awit + bwit))
    queue = sorted(seeds)
    while queue:
        h = queue.pop()
        for g in conj_gens:
            c = ops.conj(h, g)
            if not H.contains(c):
                queue.append(c)
                H = extend_subgroup(G, H, [c])
    return H


def iterated_commutator(G, A, B, t, method="auto"):
    """[A, B; 1] = [A, B]; [A, B; t] = [[A, B; t-1], B]."""
    if t < 1:
        raise GroupError("t must be >= 1")
    X = A
    for _ in range(t):
        if X.order == 1:
            return X
        X = commutator_subgroup(G, X, B, method=method)
    return X


def elementwise_iterated_trivial(G, A, B, t, rng=None, samples=None):
    """Check [..[[a, b1], b2].., bt] = 1 for a in A, b_i in B; exhaustive
    when the tuple count is small, else on seeded random samples."""
    ops = G.ops
    amembers = A.member_list()
    bmembers = B.member_list()
    total = len(amembers) * len(bmembers) ** t
    if samples is None and total <= 200_000:
        for a in amembers:
            for bs in itertools.product(bmembers, repeat=t):
                x = a
                for b in bs:
                    x = ops.comm(x, b)
                if x != ops.identity:
                    return False, (a, bs)
        return True, None
    if rng is None:
        raise GroupError("sampled elementwise check needs an rng")
    for _ in range(samples or 1000):
        a = rng.choice(amembers)
        bs = [rng.choice(bmembers) for _ in range(t)]
        x = a
        for b in bs:
            x = ops.comm(x, b)
        if x != ops.identity:
            return False, (a, tuple(bs))
    return True, None


# ----------------------------------------------------------------------
# Elementary abelian rank search and the Thompson subgroup
# ----------------------------------------------------------------------

def _cyclic_reps(G, keys):
    """One canonical representative (minimal key) per cyclic subgroup
    <g> of prime order among the given order-p elements."""
    p = G.p
    ops = G.ops
    reps = []
    seen = set()
    for g in sorted(keys):
        if g == ops.identity or g in seen:
            continue
        powers = []
        acc = g
        while acc != ops.identity:
            powers.append(acc)
            acc = ops.mul(acc, g)
        if len(powers) != p - 1:
            continue
        rep = min(powers)
        if rep not in seen:
            reps.append(rep)
        seen.update(powers)
    return sorted(reps)


def _max_cliques(neighbors):
    """All maximum cliques of the graph given by bitset adjacency, via
    branch and bound with pivoting."""
    n = len(neighbors)
    best_size = 0
    best = []

    def popcount(x):
        return bin(x).count("1")

    def expand(R, rsize, P, X):
        nonlocal best_size, best
        if P == 0 and X == 0:
            if rsize > best_size:
                best_size = rsize
                best = [R]
            elif rsize == best_size:
                best.append(R)
            return
        if rsize + popcount(P) < best_size:
            return
        # pivot: vertex of P|X with most neighbours in P
        pux = P | X
        pivot = -1
        pivot_deg = -1
        t = pux
        while t:
            b = t & -t
            v = b.bit_length() - 1
            d = popcount(P & neighbors[v])
            if d > pivot_deg:
                pivot_deg = d
                pivot = v
            t ^= b
        cand = P & ~neighbors[pivot]
        while cand:
            b = cand & -cand
            v = b.bit_length() - 1
            expand(R | b, rsize + 1, P & neighbors[v], X & neighbors[v])
            P &= ~b
            X |= b
            cand ^= b

    expand(0, 0, (1 << n) - 1, 0)
    return best_size, best


def maximal_elementary_abelian(G):
    """(rank, list of member frozensets): all elementary abelian
    subgroups of maximal rank, via maximum cliques in the commuting
    graph of cyclic-subgroup representatives of order-p elements."""
    if G.elements is None:
        raise GroupError("rank search needs a materialised group")
    p = G.p
    if p is None:
        return 0, [frozenset([G.ops.identity])]
    ops = G.ops
    order_p = ops.power_filter(G.elements, p)
    reps = _cyclic_reps(G, order_p)
    n = len(reps)
    neighbors = [0] * n
    for i in range(n):
        mask = ops.commuting_filter(reps[i + 1:], [reps[i]])
        ok = set(mask)
        for j in range(i + 1, n):
            if reps[j] in ok:
                neighbors[i] |= 1 << j
                neighbors[j] |= 1 << i
    best_size, cliques = _max_cliques(neighbors)
    subgroups = []
    seen = set()
    for R in cliques:
        gens = [reps[j] for j in range(n) if R >> j & 1]
        sub = generated_subgroup(G, gens)
        if sub.members in seen:
            continue
        seen.add(sub.members)
        if not is_elementary_abelian(sub):
            raise GroupError("commuting clique generated a non-elementary group")
        subgroups.append(sub)
    if not subgroups:
        return 0, [G.trivial_subgroup()]
    rank = elementary_rank(subgroups[0])
    for sub in subgroups:
        if elementary_rank(sub) != rank:
            raise GroupError("maximum cliques gave inconsistent ranks")
    return rank, subgroups


def thompson_J(G):
    """(J(G), report): J = subgroup generated by all elementary abelian
    subgroups of maximal rank."""
    rank, subs = maximal_elementary_abelian(G)
    gens = []
    for sub in subs:
        gens.extend(sub.witness)
    J = generated_subgroup(G, gens)
    report = {
        "rank": rank,
        "count_maximal": len(subs),
        "subgroup_orders": sorted(s.order for s in subs),
        "J_order": J.order,
    }
    return J, report
