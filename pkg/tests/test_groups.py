"""Generic finite-group engine: closures, centralizers, commutator
series, elementary abelian structure, Thompson subgroup."""

import random

import pytest

from usylow.corpus import abelian_group
from usylow.groups import (
    GroupError,
    Subgroup,
    center,
    centralizer,
    commutator_subgroup,
    elementary_rank,
    elementwise_iterated_trivial,
    extend_subgroup,
    generated_subgroup,
    is_abelian,
    is_elementary_abelian,
    is_generated_by_abelian_normal,
    is_normal,
    iterated_commutator,
    maximal_elementary_abelian,
    normal_closure,
    omega1,
    product_subgroup,
    thompson_J,
)
from usylow.unitary import UnitaryParams, distinguished_subgroup, sylow_group


def _sylow(n, k=1):
    params = UnitaryParams(5, k, n)
    return params, sylow_group(params)


# ----------------------------------------------------------------------
# closures
# ----------------------------------------------------------------------

def test_generated_subgroup_cyclic():
    G = abelian_group((25,))
    H = generated_subgroup(G, [(5,)])
    assert H.order == 5
    assert generated_subgroup(G, [(1,)]).order == 25
    assert generated_subgroup(G, []).order == 1


def test_generated_subgroup_satisfies_lagrange():
    params, G = _sylow(3)
    rng = random.Random(5)
    for _ in range(10):
        gens = [G.elements[rng.randrange(G.order)] for _ in range(2)]
        H = generated_subgroup(G, gens)
        assert G.order % H.order == 0
        # closure: verify by direct pairwise multiplication
        members = H.member_list()
        for a in members:
            for b in members:
                assert G.ops.mul(a, b) in H.members


def test_extend_subgroup_matches_fresh_closure():
    params, G = _sylow(3)
    rng = random.Random(7)
    gens = [G.elements[rng.randrange(G.order)] for _ in range(3)]
    H1 = generated_subgroup(G, gens[:1])
    H2 = extend_subgroup(G, H1, gens[1:])
    assert H2.same_members(generated_subgroup(G, gens))


def test_normal_closure_is_normal():
    params, G = _sylow(3)
    rng = random.Random(11)
    for _ in range(5):
        g = G.elements[rng.randrange(G.order)]
        N = normal_closure(G, [g])
        assert is_normal(G, N)
        assert N.contains(g)
        # minimality: any normal subgroup containing g contains N
        # (spot check against the subgroup generated by all conjugates)
        conjugates = [G.ops.conj(g, x) for x in G.elements]
        assert generated_subgroup(G, conjugates).same_members(N)


def test_product_subgroup():
    G = abelian_group((5, 5))
    H = generated_subgroup(G, [(1, 0)])
    K = generated_subgroup(G, [(0, 1)])
    HK = product_subgroup(G, H, K)
    assert HK.order == 25


# ----------------------------------------------------------------------
# centralizers and center
# ----------------------------------------------------------------------

def test_centralizer_of_trivial_is_whole_group():
    params, G = _sylow(3)
    assert centralizer(G, G.trivial_subgroup()).order == G.order


def test_centralizer_witness_matches_member_scan():
    params, G = _sylow(3)
    A = distinguished_subgroup(G, params, "A")
    c1 = centralizer(G, A)
    c2 = centralizer(G, A, scan_members=True)
    assert c1.same_members(c2)


def test_center_of_abelian_group_is_everything():
    G = abelian_group((5, 25))
    assert center(G).order == 125


def test_center_of_sylow():
    params, G = _sylow(3)
    Z = center(G)
    assert Z.order == 5
    for z in Z.member_list():
        assert all(G.ops.commutes(z, g) for g in G.generators)


# ----------------------------------------------------------------------
# omega_1 and elementary abelian structure
# ----------------------------------------------------------------------

def test_omega1_of_cyclic():
    G = abelian_group((25,))
    W = omega1(G)
    assert W.order == 5
    assert is_elementary_abelian(W)


def test_omega1_of_mixed_abelian():
    G = abelian_group((5, 25))
    W = omega1(G)
    assert W.order == 25
    assert elementary_rank(W) == 2


def test_omega1_restricted_to_subgroup():
    G = abelian_group((25, 5))
    H = generated_subgroup(G, [(1, 0)])
    W = omega1(G, H)
    assert W.order == 5


def test_elementary_rank_errors_on_non_elementary():
    G = abelian_group((25,))
    with pytest.raises(GroupError):
        elementary_rank(G.full_subgroup())


def test_is_abelian_flags():
    params, G = _sylow(3)
    assert not is_abelian(G.full_subgroup())
    A0 = distinguished_subgroup(G, params, "A0")
    assert is_abelian(A0)
    assert is_elementary_abelian(A0)


# ----------------------------------------------------------------------
# commutator machinery
# ----------------------------------------------------------------------

def test_commutator_of_abelian_is_trivial():
    G = abelian_group((5, 5, 5))
    F = G.full_subgroup()
    assert commutator_subgroup(G, F, F).order == 1


def test_commutator_methods_agree():
    params, G = _sylow(3)
    F = G.full_subgroup()
    A = distinguished_subgroup(G, params, "A")
    for X, Y in ((F, F), (A, F), (A, A)):
        cp = commutator_subgroup(G, X, Y, method="pairs")
        cw = commutator_subgroup(G, X, Y, method="witness")
        assert cp.same_members(cw)


def test_lower_central_series_terminates():
    params, G = _sylow(3)
    F = G.full_subgroup()
    assert iterated_commutator(G, F, F, 1).order > 1
    assert iterated_commutator(G, F, F, 2).order == 1  # class 2 group


def test_elementwise_iterated_trivial():
    params, G = _sylow(3)
    F = G.full_subgroup()
    rng = random.Random(13)
    ok, witness = elementwise_iterated_trivial(G, F, F, 2, rng=rng, samples=50)
    assert ok and witness is None
    ok, witness = elementwise_iterated_trivial(G, F, F, 1, rng=rng, samples=200)
    assert not ok and witness is not None


def test_generated_by_abelian_normal():
    assert is_generated_by_abelian_normal(abelian_group((5, 5)))
    params, G = _sylow(3)
    # extraspecial of order 125: every <g^G> contains the center and
    # the abelian ones generate everything
    assert is_generated_by_abelian_normal(G)


# ----------------------------------------------------------------------
# Thompson subgroup
# ----------------------------------------------------------------------

def test_thompson_of_elementary_abelian_is_itself():
    G = abelian_group((5, 5))
    J, rep = thompson_J(G)
    assert J.order == 25
    assert rep["rank"] == 2
    assert rep["count_maximal"] == 1


def test_thompson_of_cyclic():
    G = abelian_group((25,))
    J, rep = thompson_J(G)
    assert J.order == 5
    assert rep["rank"] == 1


def test_maximal_elementary_abelian_extraspecial():
    params, G = _sylow(3)
    rank, maxes = maximal_elementary_abelian(G)
    assert rank == 2
    for M in maxes:
        assert is_elementary_abelian(M)
        assert elementary_rank(M) == 2
    J, rep = thompson_J(G)
    assert rep["rank"] == 2
    # the rank-2 elementary abelian subgroups generate all of G here
    assert J.order == G.order


def test_subgroup_api():
    G = abelian_group((5, 5))
    H = generated_subgroup(G, [(1, 0)])
    assert H.contains((2, 0))
    assert not H.contains((0, 1))
    assert H.is_subset_of(G.full_subgroup())
    assert not G.full_subgroup().is_subset_of(H)
    assert Subgroup(G, None, G.generators, full=True).order == 25
