"""Small reference corpus of p-groups (order <= 5^4) used for oracle
cross-checks: abelian products, the matrix Sylow instances that fit,
and optionally the wreath product C_5 wr C_5."""

from __future__ import annotations

import itertools

from .groups import GenericOps, Group


def abelian_group(component_orders):
    """Direct product of cyclic groups; elements are exponent tuples."""
    orders = tuple(component_orders)

    def mul(a, b):
        return tuple((x + y) % n for x, y, n in zip(a, b, orders))

    def inv(a):
        return tuple((-x) % n for x, n in zip(a, orders))

    ident = (0,) * len(orders)
    elements = list(itertools.product(*(range(n) for n in orders)))
    gens = [
        tuple(1 if j == i else 0 for j in range(len(orders)))
        for i in range(len(orders))
    ]
    name = "x".join(f"C{n}" for n in orders)
    return Group(GenericOps(ident, mul, inv), elements=elements,
                 generators=gens, name=name)


def build_corpus(budget_order=625):
    """(name, Group) pairs, all of order <= budget_order."""
    from .unitary import UnitaryParams, sylow_group

    groups = [
        ("C5", abelian_group((5,))),
        ("C25", abelian_group((25,))),
        ("C125", abelian_group((125,))),
        ("C625", abelian_group((625,))),
        ("C5xC5", abelian_group((5, 5))),
        ("C5xC25", abelian_group((5, 25))),
        ("C5xC125", abelian_group((5, 125))),
        ("C5xC5xC5", abelian_group((5, 5, 5))),
        ("S(p=5,q=5,n=2)", sylow_group(UnitaryParams(5, 1, 2))),
        ("S(p=5,q=25,n=2)", sylow_group(UnitaryParams(5, 2, 2))),
        ("S(p=5,q=5,n=3)", sylow_group(UnitaryParams(5, 1, 3))),
    ]
    return [(name, g) for name, g in groups if g.order <= budget_order]
