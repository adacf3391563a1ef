"""Iterated wreath products C_{p^r} wr C_p wr ... wr C_p as enumerable
groups (the coprime-characteristic Sylow subgroups), and the structure
checks for their Thompson subgroup.

Elements are nested tuples: at height 0 an exponent in C_{p^r}; at
height h >= 1 a pair (base, t) with base a p-tuple of height-(h-1)
elements and t the top C_p exponent.  Composition: (b, t)(b', t') =
(b * shift_t(b'), t + t') where shift_t moves coordinate i to i + t.
"""

from __future__ import annotations

import itertools

from .field import _is_prime
from .groups import GenericOps, Group, GroupError, Subgroup, generated_subgroup

DEFAULT_BUDGET = 2 ** 24


class WreathError(ValueError):
    pass


class WreathSpec:
    def __init__(self, p, r, height, budget=DEFAULT_BUDGET):
        if not _is_prime(p) or p < 5:
            raise WreathError(f"p={p} must be a prime >= 5")
        if r < 1 or height < 0:
            raise WreathError("need r >= 1 and height >= 0")
        self.p = p
        self.r = r
        self.height = height
        self.order = wreath_order(p, r, height)
        if self.order > budget:
            from .unitary import BudgetError

            raise BudgetError(self.order, budget)

    def lower(self):
        """Spec of the group one wreath layer down."""
        if self.height == 0:
            raise WreathError("height-0 spec has no lower layer")
        return WreathSpec(self.p, self.r, self.height - 1)

    def __repr__(self):
        return f"WreathSpec(p={self.p}, r={self.r}, height={self.height})"


def wreath_order(p, r, height):
    """p^(r * p^h) * p^((p^h - 1)/(p - 1)) for h = height."""
    return p ** (r * p ** height + (p ** height - 1) // (p - 1))


def _identity(p, r, height):
    if height == 0:
        return 0
    lower = _identity(p, r, height - 1)
    return ((lower,) * p, 0)


def _mul(p, r, height, x, y):
    if height == 0:
        return (x + y) % p ** r
    (b, t), (b2, t2) = x, y
    shifted = tuple(b2[(i - t) % p] for i in range(p))
    base = tuple(
        _mul(p, r, height - 1, b[i], shifted[i]) for i in range(p)
    )
    return (base, (t + t2) % p)


def _inv(p, r, height, x):
    if height == 0:
        return (-x) % p ** r
    b, t = x
    inv_b = tuple(_inv(p, r, height - 1, c) for c in b)
    shifted = tuple(inv_b[(i + t) % p] for i in range(p))
    return (shifted, (-t) % p)


def _enumerate(p, r, height):
    if height == 0:
        return list(range(p ** r))
    lower = _enumerate(p, r, height - 1)
    out = []
    for base in itertools.product(lower, repeat=p):
        for t in range(p):
            out.append((base, t))
    return out


def _generators(p, r, height):
    """Bottom generator embedded in coordinate 0 of every layer, plus
    one top shift per layer."""
    if height == 0:
        return [1 % p ** r] if p ** r > 1 else []
    lower_id = _identity(p, r, height - 1)
    gens = []
    for g in _generators(p, r, height - 1):
        base = tuple(g if i == 0 else lower_id for i in range(p))
        gens.append((base, 0))
    gens.append(((lower_id,) * p, 1))
    return gens


def build_wreath(spec):
    p, r, h = spec.p, spec.r, spec.height
    ops = GenericOps(
        _identity(p, r, h),
        lambda a, b: _mul(p, r, h, a, b),
        lambda a: _inv(p, r, h, a),
    )
    elements = _enumerate(p, r, h)
    if len(elements) != spec.order:
        raise WreathError("enumerated size disagrees with the order formula")
    gens = _generators(p, r, h)
    G = Group(
        ops, elements=elements, generators=gens,
        name=f"C{p ** r}" + f" wr C{p}" * h,
    )
    if generated_subgroup(G, gens).order != G.order:
        raise WreathError("generators do not generate the wreath product")
    return G


def base_subgroup(spec, G):
    """The base P^p inside P wr C_p (top exponent 0), as a Subgroup."""
    if spec.height == 0:
        raise WreathError("height-0 group has no base subgroup")
    members = frozenset(x for x in G.elements if x[1] == 0)
    p, r, h = spec.p, spec.r, spec.height
    lower_id = _identity(p, r, h - 1)
    gens = []
    for g in _generators(p, r, h - 1):
        for i in range(p):
            base = tuple(g if j == i else lower_id for j in range(p))
            gens.append((base, 0))
    sub = Subgroup(G, members, tuple(gens))
    if generated_subgroup(G, gens).members != members:
        raise WreathError("base witness does not generate the base subgroup")
    return sub


def embed_base_power(spec, G, lower_members):
    """{(x_0, ..., x_{p-1}, t=0) : x_i in lower_members} as a member
    set of G — the copy of H^p in the base, for H <= the lower group."""
    p = spec.p
    return frozenset(
        (base, 0) for base in itertools.product(sorted(lower_members), repeat=p)
    )


def verify_thm26(spec):
    """J(P wr C_p) against the structure statement: when P != 1, it is
    the copy of J(P)^p in the base subgroup, and it is elementary
    abelian whenever J(P) is."""
    from .groups import is_elementary_abelian, thompson_J

    if spec.height == 0:
        return {"skipped": True, "reason": "no wreath layer (P wr C_p needs height >= 1)"}
    lower_spec = spec.lower()
    P = build_wreath(lower_spec)
    W = build_wreath(spec)
    JP, rep_p = thompson_J(P)
    JW, rep_w = thompson_J(W)
    predicted = embed_base_power(spec, W, JP.member_list())
    report = {
        "skipped": False,
        "lower_order": P.order,
        "wreath_order": W.order,
        "J_lower_order": JP.order,
        "J_wreath_order": JW.order,
        "J_lower_elementary_abelian": is_elementary_abelian(JP),
        "J_wreath_elementary_abelian": is_elementary_abelian(JW),
        "J_equals_base_copy": JW.members == predicted,
        "rank_lower": rep_p["rank"],
        "rank_wreath": rep_w["rank"],
    }
    report["pass"] = (
        report["J_equals_base_copy"]
        and (
            not report["J_lower_elementary_abelian"]
            or report["J_wreath_elementary_abelian"]
        )
    )
    return report


def coprime_conjecture_check(spec, rng=None):
    """check_conjecture on the wreath group, plus the mechanism used in
    the coprime branch: J elementary abelian and normal, and J <= X."""
    from .groups import is_elementary_abelian, is_normal
    from .oliver import check_conjecture

    G = build_wreath(spec)
    verdict = check_conjecture(G, rng=rng)
    J = verdict["J"]
    report = {
        "wreath_order": G.order,
        "J_order": J.order,
        "X_order": verdict["X"].order,
        "J_elementary_abelian": is_elementary_abelian(J),
        "J_normal": is_normal(G, J),
        "conjecture_holds": verdict["holds"],
    }
    report["pass"] = (
        report["conjecture_holds"]
        and report["J_elementary_abelian"]
        and report["J_normal"]
    )
    return report
