"""Acceptance gate: ten criteria, each printing a single pass/fail line
and enforcing its runtime bound.  All arithmetic is exact; every check
is an equality, a count, or an exhaustive/streamed scan."""

import random
import time

import numpy as np
import pytest

from usylow import kernels
from usylow.cli import SUITES, main as cli_main, qseries_large_instance
from usylow.corpus import build_corpus
from usylow.field import field_create
from usylow.groups import (
    centralizer,
    elementary_rank,
    elementwise_iterated_trivial,
    generated_subgroup,
    is_elementary_abelian,
    is_normal,
    iterated_commutator,
    omega1,
)
from usylow.matrix import (
    flip_transpose,
    identity,
    is_persymmetric,
    is_symmetric,
    mat_inverse,
    mat_mul,
    random_invertible,
    random_mat,
    skew_identity,
    transpose,
)
from usylow.oliver import (
    check_conjecture,
    compute_oliver,
    concat_qseries,
    lemma_checks,
    oliver_bruteforce,
    verify_qseries,
)
from usylow.unitary import (
    UnitaryParams,
    comm_formula,
    comm_oracle,
    count_unitary_exhaustive,
    distinguished_subgroup,
    embed_key,
    inverse_formula,
    inverse_general,
    iter_sylow_elems,
    mul_formula,
    mul_general,
    streaming_centralizer_scan,
    subgroup_elems,
    sylow_group,
    sylow_order,
    unitary_group_order,
)
from usylow.wreath import WreathSpec, coprime_conjecture_check


def _verdict(num, label, ok):
    print(f"criterion {num} ({label}): {'PASS' if ok else 'FAIL'}")
    assert ok, f"criterion {num} ({label}) failed"


def _within(num, label, elapsed, bound):
    print(f"criterion {num} ({label}): runtime {elapsed:.1f}s (bound {bound}s)")
    assert elapsed < bound, f"criterion {num} exceeded {bound}s ({elapsed:.1f}s)"


# ----------------------------------------------------------------------
# shared constructions
# ----------------------------------------------------------------------

INSTANCE_KEYS = ((5, 2), (5, 3), (5, 4), (25, 2), (25, 3))
EXPECTED_ORDERS = {(5, 2): 5, (5, 3): 125, (5, 4): 15625,
                   (25, 2): 25, (25, 3): 15625}


@pytest.fixture(scope="module")
def instances():
    built = {}
    for q, n in INSTANCE_KEYS:
        k = 1 if q == 5 else 2
        params = UnitaryParams(5, k, n)
        built[(q, n)] = (params, sylow_group(params))
    return built


@pytest.fixture(scope="module")
def large_scan_555():
    """One streaming centralizer scan of the 9.77M-element (5,5,5)
    instance against the generators of A; returns (elapsed, keys)."""
    params = UnitaryParams(5, 1, 5)
    _, agens = subgroup_elems(params, "A")
    gen_flats = np.stack([
        np.frombuffer(embed_key(e), dtype=np.uint16) for e in agens
    ])
    t0 = time.monotonic()
    found = streaming_centralizer_scan(params, gen_flats)
    return time.monotonic() - t0, found


# ----------------------------------------------------------------------
# criterion 1: flip-transpose identities
# ----------------------------------------------------------------------

def test_criterion_01_flip_transpose_identities():
    t0 = time.monotonic()
    rng = random.Random(31001)
    samples = 1000
    ok = True
    for k, m_range in ((1, (1, 2, 3, 4)), (2, (1, 2))):
        F = field_create(5, k)
        for m in m_range:
            Q = skew_identity(F, m)
            ok &= mat_mul(Q, Q) == identity(F, m)
            for _ in range(samples):
                B = random_mat(F, m, rng)
                C = random_mat(F, m, rng)
                persym = is_persymmetric(B)
                ok &= persym == is_symmetric(mat_mul(Q, B))
                ok &= persym == is_symmetric(mat_mul(B, Q))
                ok &= flip_transpose(B) == mat_mul(mat_mul(Q, transpose(B)), Q)
                ok &= flip_transpose(mat_mul(B, C)) == mat_mul(
                    flip_transpose(C), flip_transpose(B))
            for _ in range(samples):
                B = random_invertible(F, m, rng)
                ok &= mat_inverse(flip_transpose(B)) == \
                    flip_transpose(mat_inverse(B))
            if not ok:
                break
    elapsed = time.monotonic() - t0
    _verdict(1, "five flip-transpose identities, 1000 samples per (q,m)", ok)
    _within(1, "flip-transpose identities", elapsed, 10)


# ----------------------------------------------------------------------
# criterion 2: Sylow orders by exhaustive construction + closure
# ----------------------------------------------------------------------

def test_criterion_02_sylow_counts_and_closure(instances):
    t0 = time.monotonic()
    ok = True
    for (q, n), (params, G) in instances.items():
        expected = EXPECTED_ORDERS[(q, n)]
        ok &= G.order == expected == sylow_order(params)
        ok &= len(set(G.elements)) == expected
        # exhaustive closure for every instance (all are <= 15625)
        F = params.field
        batch = kernels.batch_from_keys(G.elements, n * n)
        keys = np.sort(kernels.subdiag_keys(batch, n, F.s))
        ok &= kernels.closure_check_unitri(
            batch, keys, n, F.mul_table, F.add_table, F.s) == -1
    elapsed = time.monotonic() - t0
    _verdict(2, "|S| = q^(n(n-1)/2) with exhaustive closure", ok)
    _within(2, "Sylow counts", elapsed, 60)


# ----------------------------------------------------------------------
# criterion 3: full unitary group orders by exhaustive predicate count
# ----------------------------------------------------------------------

def test_criterion_03_unitary_group_orders():
    t0 = time.monotonic()
    c2 = count_unitary_exhaustive(field_create(2, 1), 2)
    c3 = count_unitary_exhaustive(field_create(3, 1), 2)
    ok = (c2 == 18 == unitary_group_order(2, 2)
          and c3 == 96 == unitary_group_order(3, 2))
    elapsed = time.monotonic() - t0
    _verdict(3, "|U_2(F_2)| = 18 and |U_2(F_3)| = 96 by exhaustive count", ok)
    _within(3, "unitary group orders", elapsed, 10)


# ----------------------------------------------------------------------
# criterion 4: closed formulas vs direct matrix arithmetic
# ----------------------------------------------------------------------

def test_criterion_04_formula_oracle_agreement(instances):
    t0 = time.monotonic()
    samples = 1000
    rng = random.Random(31004)
    ok = True
    for (q, n), (params, G) in instances.items():
        elems = list(iter_sylow_elems(params))
        pick = lambda: elems[rng.randrange(len(elems))]
        F, m = params.field, params.m
        ident = identity(F, m)
        if params.is_even:
            for _ in range(samples):
                x, y = pick(), pick()
                ok &= mul_formula(x, y) == mul_general(x, y)
                ok &= inverse_formula(x) == inverse_general(x)
            ax = [e for e in elems if e.D == ident]
            for _ in range(samples):
                x = ax[rng.randrange(len(ax))]
                y = pick()
                ok &= comm_formula(x, y) == comm_oracle(x, y)
        else:
            a0 = [e for e in elems
                  if e.D == ident and all(a == 0 for a in e.alpha)]
            ax = [e for e in elems if e.D == ident]
            for _ in range(samples):
                x = a0[rng.randrange(len(a0))]
                y = pick()
                ok &= comm_formula(x, y) == comm_oracle(x, y)
                u = ax[rng.randrange(len(ax))]
                v = ax[rng.randrange(len(ax))]
                ok &= comm_formula(u, v) == comm_oracle(u, v)
        if not ok:
            break
    elapsed = time.monotonic() - t0
    _verdict(4, "product/inverse/commutator formulas vs matrix arithmetic", ok)
    _within(4, "formula agreement", elapsed, 10)


# ----------------------------------------------------------------------
# criterion 5: centralizer of A
# ----------------------------------------------------------------------

def test_criterion_05_centralizers(instances, large_scan_555):
    # exhaustive at (5,5,4): C_S(A) = A
    t0 = time.monotonic()
    params4, G4 = instances[(5, 4)]
    A4 = distinguished_subgroup(G4, params4, "A")
    C4 = centralizer(G4, A4)
    ok_small = C4.same_members(A4)
    elapsed_small = time.monotonic() - t0
    # streaming at (5,5,5): C_S(A) = A0 over all 9.77M elements
    scan_elapsed, found = large_scan_555
    params5 = UnitaryParams(5, 1, 5)
    members0, _ = subgroup_elems(params5, "A0")
    ok_large = set(found) == {embed_key(e) for e in members0}
    _verdict(5, "C_S(A) = A at (5,5,4); C_S(A) = A0 at (5,5,5)",
             ok_small and ok_large)
    _within(5, "exhaustive centralizer (5,5,4)", elapsed_small, 10)
    _within(5, "streaming centralizer (5,5,5)", scan_elapsed, 600)


# ----------------------------------------------------------------------
# criterion 6: triple-commutator vanishing
# ----------------------------------------------------------------------

def test_criterion_06_triple_commutators(instances, large_scan_555):
    t0 = time.monotonic()
    params4, G4 = instances[(5, 4)]
    A4 = distinguished_subgroup(G4, params4, "A")
    N21 = distinguished_subgroup(G4, params4, "Ntilde", (2, 1))
    K = iterated_commutator(G4, A4, N21, 3)
    ok4 = K.order == 1
    # elementwise spot check of the same statement
    ew, _ = elementwise_iterated_trivial(
        G4, A4, N21, 3, rng=random.Random(31006), samples=500)
    ok4 &= ew

    # (5,5,5): Omega_1(C_S(A)) from the streaming scan; N~_21 = S there
    _, found = large_scan_555
    params5 = UnitaryParams(5, 1, 5)
    S5 = sylow_group(params5, materialise=False)
    ok5 = all(S5.element_order(key) in (1, 5) for key in found)
    O = generated_subgroup(S5, found)
    K5 = iterated_commutator(S5, O, S5.full_subgroup(), 3, method="witness")
    ok5 &= K5.order == 1
    elapsed = time.monotonic() - t0
    _verdict(6, "[A, N~21; 3] = 1 at (5,5,4) and "
                "[Omega_1(C_S(A)), N~21; 3] = 1 at (5,5,5)", ok4 and ok5)
    _within(6, "triple commutators", elapsed, 300)


# ----------------------------------------------------------------------
# criterion 7: Q-series certificates and concatenation
# ----------------------------------------------------------------------

def test_criterion_07_qseries(instances):
    t0 = time.monotonic()
    params4, G4 = instances[(5, 4)]
    A4 = distinguished_subgroup(G4, params4, "A")
    N21 = distinguished_subgroup(G4, params4, "Ntilde", (2, 1))
    cert4 = verify_qseries(G4, [G4.trivial_subgroup(), A4, N21])
    ok = cert4.passed and G4.p - 1 == 4

    cert5 = qseries_large_instance(UnitaryParams(5, 1, 5))
    ok &= cert5.passed

    # concatenation property over all chain pairs in the corpus
    from usylow.cli import _corpus_chains

    pairs = 0
    for name, G in build_corpus():
        chains = _corpus_chains(G)
        for c1 in chains:
            for c2 in chains:
                pairs += 1
                ok &= concat_qseries(G, c1, c2).passed
    elapsed = time.monotonic() - t0
    _verdict(7, f"Q-series 1 <= A <= N~21 at (5,5,4)/(5,5,5) with t = 4; "
                f"concatenation on {pairs} corpus chain pairs", ok)
    _within(7, "Q-series", elapsed, 600)


# ----------------------------------------------------------------------
# criterion 8: the Oliver subgroup
# ----------------------------------------------------------------------

def test_criterion_08_oliver_subgroup(instances):
    t0 = time.monotonic()
    ok = True
    # full group at (5,5,2), (5,5,3), (5,5,4), with lemma checks
    for n in (2, 3, 4):
        params, G = instances[(5, n)]
        res = compute_oliver(G)
        ok &= res.subgroup.order == G.order
        ok &= res.certificate.passed
        lc = lemma_checks(G, res.subgroup)
        ok &= lc["pass"]
    # greedy matches the brute-force oracle on every corpus group
    for name, G in build_corpus():
        greedy = compute_oliver(G)
        ok &= greedy.subgroup.same_members(oliver_bruteforce(G))
        lc = lemma_checks(G, greedy.subgroup)
        ok &= lc["pass"]
    elapsed = time.monotonic() - t0
    _verdict(8, "X(S) = S at (5,5,2..4); greedy = brute force on corpus; "
                "centralizer/maximality scans", ok)
    _within(8, "Oliver subgroup", elapsed, 600)


# ----------------------------------------------------------------------
# criterion 9: conjecture verdicts
# ----------------------------------------------------------------------

def test_criterion_09_conjecture_verdicts(instances):
    t0 = time.monotonic()
    ok = True
    for (q, n), (params, G) in instances.items():
        verdict = check_conjecture(G)
        ok &= verdict["holds"]
    wrep = coprime_conjecture_check(WreathSpec(5, 1, 1))
    ok &= wrep["pass"]
    ok &= wrep["J_order"] == 3125
    ok &= wrep["J_elementary_abelian"]
    # J(C5 wr C5) is exactly the base subgroup C_5^5
    from usylow.groups import thompson_J
    from usylow.wreath import base_subgroup, build_wreath

    spec = WreathSpec(5, 1, 1)
    W = build_wreath(spec)
    J, _ = thompson_J(W)
    B = base_subgroup(spec, W)
    ok &= J.same_members(B)
    ok &= elementary_rank(J) == 5
    elapsed = time.monotonic() - t0
    _verdict(9, "J(S) <= X(S) on all instances and C5 wr C5; "
                "J(C5 wr C5) = base C5^5", ok)
    _within(9, "conjecture verdicts", elapsed, 300)


# ----------------------------------------------------------------------
# criterion 10: determinism
# ----------------------------------------------------------------------

def _run_cli_capture(argv, capsys):
    code = cli_main(argv)
    out = capsys.readouterr().out
    return code, out


def test_criterion_10_determinism(capsys):
    t0 = time.monotonic()
    ok = True
    suite_args = {
        "prop31": ["--p", "5", "--k", "1", "--m", "3", "--samples", "200"],
        "sylow": ["--p", "5", "--k", "1", "--n", "3"],
        "formulas": ["--p", "5", "--k", "1", "--n", "3", "--samples", "200"],
        "centralizer": ["--p", "5", "--k", "1", "--n", "3"],
        "qseries": ["--p", "5", "--k", "1", "--n", "4"],
        "thm26": ["--p", "5", "--r", "1", "--height", "1"],
    }
    assert set(suite_args) == set(SUITES)
    for suite, extra in suite_args.items():
        argv = ["verify", "--suite", suite, "--seed", "99"] + extra
        code1, out1 = _run_cli_capture(argv, capsys)
        code2, out2 = _run_cli_capture(argv, capsys)
        ok &= code1 == 0 and code2 == 0
        ok &= out1 == out2
        if not ok:
            break

    # compute_oliver under shuffled candidate order: identical subgroups
    for name, G in build_corpus():
        base = compute_oliver(G).subgroup
        for seed in (0, 1, 2):
            shuffled = compute_oliver(G, rng=random.Random(seed)).subgroup
            ok &= shuffled.same_members(base)
    elapsed = time.monotonic() - t0
    _verdict(10, "byte-identical suite re-runs; shuffle-invariant X(S)", ok)
    print(f"criterion 10 (determinism): runtime {elapsed:.1f}s")
