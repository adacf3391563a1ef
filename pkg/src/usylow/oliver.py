"""Q-series certificates, the Oliver subgroup X(S), and the conjecture
verdict J(S) <= X(S).

A Q-series for a p-group S is an ascending chain of normal subgroups
1 = Q_0 <= ... <= Q_n with [Omega_1(C_S(Q_{i-1})), Q_i; p-1] = 1 at
every step; X(S) is the unique largest normal subgroup reachable by
such a chain.
"""

from __future__ import annotations

import math

from .groups import (
    GroupError,
    Subgroup,
    centralizer,
    commutator_subgroup,
    extend_subgroup,
    generated_subgroup,
    is_normal,
    iterated_commutator,
    normal_closure,
    omega1,
    product_subgroup,
    thompson_J,
)


class OliverError(ValueError):
    pass


# ----------------------------------------------------------------------
# Q-series
# ----------------------------------------------------------------------

class QSeries:
    """A chain with its per-step verification report."""

    def __init__(self, chain, steps):
        self.chain = list(chain)
        self.steps = list(steps)

    @property
    def passed(self):
        return all(s["passed"] for s in self.steps)

    def __repr__(self):
        orders = [q.order for q in self.chain]
        return f"QSeries(orders={orders}, passed={self.passed})"


def _omega1_centralizer(S, Q, centralizer_fn=None):
    """Omega_1(C_S(Q))."""
    if Q.order == 1:
        C = S.full_subgroup()
    elif centralizer_fn is not None:
        C = centralizer_fn(S, Q)
    else:
        C = centralizer(S, Q)
    if C.members is None:
        # the whole (possibly virtual) group: usable only when its
        # exponent is known to be p (recorded on the Group by whoever
        # verified it)
        if getattr(S, "exponent", None) == S.p:
            return C
        if S.elements is not None:
            return omega1(S)
        raise GroupError(
            "Omega_1 of a virtual full group needs a verified exponent"
        )
    return omega1(S, C)


def verify_qseries(S, chain, centralizer_fn=None, method="auto"):
    """Evaluate the chain against the Q-series conditions with
    t = p - 1: starts at 1, ascending, each entry normal in S, and the
    iterated commutator [Omega_1(C_S(Q_{i-1})), Q_i; p-1] trivial."""
    if not chain:
        raise OliverError("empty chain")
    if chain[0].order != 1:
        raise OliverError("chain must start at the trivial subgroup")
    t = S.p - 1 if S.p is not None else 1
    steps = []
    for i in range(1, len(chain)):
        prev, cur = chain[i - 1], chain[i]
        ascending = prev.is_subset_of(cur)
        normal = is_normal(S, cur)
        C = _omega1_centralizer(S, prev, centralizer_fn)
        K = iterated_commutator(S, C, cur, t, method=method)
        steps.append({
            "index": i,
            "Q_order": cur.order,
            "C_order": C.order,
            "commutator_order": K.order,
            "ascending": ascending,
            "normal": normal,
            "passed": ascending and normal and K.order == 1,
        })
    return QSeries(chain, steps)


def concat_qseries(S, c1, c2, centralizer_fn=None, method="auto"):
    """Chain 1 <= Q_1 <= ... <= K <= K*R_1 <= ... <= K*L built from two
    passing chains (K = top of c1, R_i from c2), then re-verified."""
    if not (c1.passed and c2.passed):
        raise OliverError("concatenation needs two passing chains")
    K = c1.chain[-1]
    chain = list(c1.chain)
    for R in c2.chain[1:]:
        top = product_subgroup(S, chain[-1], R)
        if not top.same_members(chain[-1]):
            chain.append(top)
    return verify_qseries(S, chain, centralizer_fn=centralizer_fn, method=method)


# ----------------------------------------------------------------------
# The Oliver subgroup: greedy computation with certificate
# ----------------------------------------------------------------------

class OliverResult:
    def __init__(self, subgroup, certificate, maximality_evidence,
                 oracle_agreement=None):
        self.subgroup = subgroup
        self.certificate = certificate
        self.maximality_evidence = maximality_evidence
        self.oracle_agreement = oracle_agreement

    def __repr__(self):
        return (
            f"OliverResult(order={self.subgroup.order}, "
            f"certificate={self.certificate!r})"
        )


def _cyclic_reps_all(G):
    """One representative per cyclic subgroup of G (any order),
    canonical (minimal-key) choice."""
    ops = G.ops
    reps = []
    assigned = {}
    for g in G.elements:
        if g == ops.identity or g in assigned:
            continue
        powers = [g]
        acc = ops.mul(g, g)
        while acc != ops.identity:
            powers.append(acc)
            acc = ops.mul(acc, g)
        # generators of <g>: powers with exponent coprime to the order
        # (non-generator powers span smaller cyclic subgroups and must
        # keep their own representatives)
        order = len(powers) + 1
        gens = [powers[e - 1] for e in range(1, order) if math.gcd(e, order) == 1]
        rep = min(gens)
        for h in gens:
            assigned.setdefault(h, rep)
    out = sorted(set(assigned.values()))
    return out, assigned


def _skip_equivalent(S, X, g, skip):
    """Mark every candidate with the same extension <X, h^S> = <X, g^S>:
    the elements x * g^e with x in X and e coprime to the order of g."""
    ops = S.ops
    powers = [g]
    acc = ops.mul(g, g)
    while acc != ops.identity:
        powers.append(acc)
        acc = ops.mul(acc, g)
    order = len(powers) + 1
    for e in range(1, order):
        if math.gcd(e, order) != 1:
            continue
        h = powers[e - 1]
        skip.update(ops.mul_many(X.member_list(), h, left=False))


def compute_oliver(S, rng=None, centralizer_fn=None, method="auto"):
    """Greedy fixed point: starting at X = 1, repeatedly extend X by the
    normal closure of the first candidate g (canonical order, or
    shuffled when rng is given) with [Omega_1(C_S(X)), <X, g^S>; p-1]
    trivial; stops when no candidate extends X.  The rejected final
    round is returned as maximality evidence."""
    if S.elements is None:
        raise OliverError("compute_oliver needs a materialised group")
    t = S.p - 1 if S.p is not None else 1
    reps, _ = _cyclic_reps_all(S)
    X = S.trivial_subgroup()
    chain = [X]
    rejected = []
    while True:
        C = _omega1_centralizer(S, X, centralizer_fn)
        candidates = list(reps)
        if rng is not None:
            rng.shuffle(candidates)
        extended = False
        rejected = []
        skip = set()
        for g in candidates:
            if g in skip or X.contains(g):
                continue
            Ng = normal_closure(S, [g])
            N = extend_subgroup(S, X, Ng.witness)
            K = iterated_commutator(S, C, N, t, method=method)
            if K.order == 1:
                X = N
                chain.append(X)
                extended = True
                break
            rejected.append({
                "candidate": g,
                "extension_order": N.order,
                "commutator_order": K.order,
            })
            _skip_equivalent(S, X, g, skip)
        if not extended:
            break
    certificate = verify_qseries(
        S, chain, centralizer_fn=centralizer_fn, method=method
    )
    if not certificate.passed:
        raise OliverError("greedy chain failed re-verification")
    return OliverResult(X, certificate, rejected)


# ----------------------------------------------------------------------
# Brute-force oracle (small groups)
# ----------------------------------------------------------------------

def all_subgroups(S, limit=625):
    """Every subgroup of S, by bottom-up closure of cyclic extensions.
    Returns a dict members-frozenset -> witness tuple."""
    if S.order > limit:
        raise OliverError(f"subgroup enumeration limited to order <= {limit}")
    reps, _ = _cyclic_reps_all(S)
    trivial = S.trivial_subgroup()
    found = {trivial.members: trivial}
    worklist = [trivial]
    while worklist:
        H = worklist.pop()
        for g in reps:
            if H.contains(g):
                continue
            K = extend_subgroup(S, H, [g])
            if K.members not in found:
                found[K.members] = K
                worklist.append(K)
    return found


def oliver_bruteforce(S, limit=625):
    """X(S) by definition: enumerate all normal subgroups, mark those
    reachable by a passing chain (dynamic programming over inclusion),
    return the largest; the maximum is checked to be unique."""
    subs = all_subgroups(S, limit=limit)
    normal = [H for H in subs.values() if is_normal(S, H)]
    t = S.p - 1 if S.p is not None else 1
    omega_cache = {}

    def omega_of(H):
        if H.members not in omega_cache:
            omega_cache[H.members] = _omega1_centralizer(S, H)
        return omega_cache[H.members]

    reachable = {frozenset([S.ops.identity])}
    changed = True
    while changed:
        changed = False
        for N in normal:
            if N.members in reachable:
                continue
            for M in normal:
                if M.members not in reachable or not M.members < N.members:
                    continue
                K = iterated_commutator(S, omega_of(M), N, t)
                if K.order == 1:
                    reachable.add(N.members)
                    changed = True
                    break
    best = max(reachable, key=len)
    ties = [m for m in reachable if len(m) == len(best)]
    if len(ties) > 1:
        raise OliverError("maximum reachable normal subgroup is not unique")
    for m in reachable:
        if not m <= best:
            raise OliverError("reachable set has no unique maximum")
    return subs[best]


# ----------------------------------------------------------------------
# Lemma checks and the conjecture verdict
# ----------------------------------------------------------------------

def lemma_checks(S, X, centralizer_fn=None, method="auto"):
    """(a) C_S(X) = Z(X); (b) every single-generator normal closure Q
    with [Omega_1(Z(X)), Q; p-1] = 1 satisfies Q <= X (independent
    maximality certificate for the greedy computation)."""
    t = S.p - 1 if S.p is not None else 1
    if centralizer_fn is not None:
        CX = centralizer_fn(S, X)
    else:
        CX = centralizer(S, X)
    # Z(X) = members of X centralising all of X
    ZX_keys = [k for k in CX.member_list() if X.contains(k)]
    ZX = Subgroup(S, frozenset(ZX_keys), tuple(ZX_keys))
    lemma_a = CX.members is not None and CX.members == ZX.members
    report = {
        "centralizer_order": CX.order,
        "center_order": ZX.order,
        "centralizer_equals_center": lemma_a,
    }
    if X.members is None or X.order == S.order:
        report["containment_scan"] = {
            "qualifying": None,
            "all_contained": True,
            "note": "X is the full group; every normal subgroup is contained",
        }
        report["pass"] = lemma_a
        return report
    OZ = omega1(S, ZX)
    reps, _ = _cyclic_reps_all(S)
    qualifying = 0
    violations = []
    skip = set()
    for g in reps:
        if g in skip:
            continue
        Q = normal_closure(S, [g])
        K = iterated_commutator(S, OZ, Q, t, method=method)
        if K.order == 1:
            qualifying += 1
            if not Q.is_subset_of(X):
                violations.append(g)
        _skip_equivalent(S, X, g, skip)
    report["containment_scan"] = {
        "qualifying": qualifying,
        "all_contained": not violations,
        "violations": violations,
    }
    report["pass"] = lemma_a and not violations
    return report


def check_conjecture(S, rng=None, centralizer_fn=None, method="auto"):
    """J(S) <= X(S), with both subgroups and certificates."""
    J, J_report = thompson_J(S)
    result = compute_oliver(
        S, rng=rng, centralizer_fn=centralizer_fn, method=method
    )
    X = result.subgroup
    holds = J.is_subset_of(X)
    return {
        "J": J,
        "J_report": J_report,
        "X": X,
        "oliver": result,
        "holds": holds,
    }
