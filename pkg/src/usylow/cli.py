"""Command-line front end: construct/cache groups, run verification
suites, compute invariants, and emit deterministic reports.

Exit codes: 0 all checks pass, 1 check failure, 2 usage error,
3 element budget exceeded, 4 I/O or cache error.
"""

from __future__ import annotations

import argparse
import os
import random
import sys
import time

import numpy as np

from . import __version__, kernels
from .cache import CacheError, header_matches, load_group, read_header, save_group
from .field import FieldError, FieldSpec
from .groups import (
    GroupError,
    centralizer,
    is_abelian,
    is_elementary_abelian,
    is_normal,
    omega1,
    thompson_J,
)
from .matrix import (
    Mat,
    flip_transpose,
    conj_mat,
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
from .oliver import (
    OliverError,
    compute_oliver,
    concat_qseries,
    lemma_checks,
    verify_qseries,
)
from .report import Report
from .unitary import (
    BudgetError,
    DEFAULT_BUDGET,
    UnitaryError,
    UnitaryParams,
    distinguished_subgroup,
    streaming_centralizer_scan,
    streaming_exponent_check,
    subgroup_elems,
    embed_key,
    sylow_group,
    sylow_order,
)
from .wreath import WreathError, WreathSpec, build_wreath, verify_thm26

EXIT_PASS = 0
EXIT_CHECK_FAILURE = 1
EXIT_USAGE = 2
EXIT_BUDGET = 3
EXIT_IO = 4


def _log(msg):
    print(msg, file=sys.stderr)


# ----------------------------------------------------------------------
# Parameter and cache plumbing
# ----------------------------------------------------------------------

def _k_from_args(args):
    if args.k is not None:
        return args.k
    if args.q is not None:
        q, k = args.q, 0
        while q > 1 and q % args.p == 0:
            q //= args.p
            k += 1
        if q != 1:
            raise UnitaryError(f"q={args.q} is not a power of p={args.p}")
        return k
    raise UnitaryError("need --k or --q")


def _unitary_params(args):
    return UnitaryParams(args.p, _k_from_args(args), args.n)


def _cache_path(cache_dir, meta):
    if isinstance(meta, UnitaryParams):
        name = f"S_p{meta.p}_q{meta.q}_n{meta.n}.grp"
    else:
        name = f"W_p{meta.p}_r{meta.r}_h{meta.height}.grp"
    return os.path.join(cache_dir, name)


def _load_or_build(meta, cache_dir, budget):
    """Group from cache when a header-compatible file exists, else
    freshly built (and cached when a cache dir is configured)."""
    path = _cache_path(cache_dir, meta) if cache_dir else None
    if path and os.path.exists(path):
        header = read_header(path)
        if not header_matches(header, meta):
            raise CacheError(f"cache file {path} does not match the request")
        G, _ = load_group(path)
        _log(f"cache hit: {path}")
        return G, True
    if isinstance(meta, UnitaryParams):
        G = sylow_group(meta, budget=budget)
    else:
        G = build_wreath(meta)
    if path:
        os.makedirs(cache_dir, exist_ok=True)
        save_group(path, G, meta)
        _log(f"cached: {path}")
    return G, False


# ----------------------------------------------------------------------
# Verification suites
# ----------------------------------------------------------------------

def _suite_prop31(report, args, rng):
    field = FieldSpec(args.p, _k_from_args(args))
    m = args.m if args.m is not None else 3
    n_samples = args.samples
    Q = skew_identity(field, m)

    ok = all(
        mat_mul(skew_identity(field, d), skew_identity(field, d))
        == identity(field, d)
        for d in range(1, 7)
    )
    report.add("skew_identity_involution", "Q*Q = 1 for 1 <= m <= 6", ok,
               m_range="1..6")

    ok = True
    for _ in range(n_samples):
        B = random_mat(field, m, rng)
        persym = is_persymmetric(B)
        if persym != is_symmetric(mat_mul(Q, B)) or \
                persym != is_symmetric(mat_mul(B, Q)):
            ok = False
            break
    report.add(
        "persymmetry_equivalence",
        "B = B^F iff QB symmetric iff BQ symmetric", ok,
        samples=n_samples, m=m,
    )

    ok = all(
        flip_transpose(B) == mat_mul(mat_mul(Q, transpose(B)), Q)
        for B in (random_mat(field, m, rng) for _ in range(n_samples))
    )
    report.add("flip_transpose_conjugation", "B^F = Q * B^T * Q", ok,
               samples=n_samples, m=m)

    ok = True
    for _ in range(n_samples):
        B = random_mat(field, m, rng)
        C = random_mat(field, m, rng)
        if flip_transpose(mat_mul(B, C)) != \
                mat_mul(flip_transpose(C), flip_transpose(B)):
            ok = False
            break
    report.add("flip_transpose_antihomomorphism", "(BC)^F = C^F * B^F", ok,
               samples=n_samples, m=m)

    ok = all(
        mat_inverse(flip_transpose(B)) == flip_transpose(mat_inverse(B))
        for B in (random_invertible(field, m, rng) for _ in range(n_samples))
    )
    report.add("flip_transpose_inverse", "(B^F)^-1 = (B^-1)^F", ok,
               samples=n_samples, m=m)


def _all_unitary(params, keys):
    """Exhaustive conj(A)^T Q A = Q check over key batches."""
    F, n = params.field, params.n
    batch = kernels.batch_from_keys(list(keys), n * n)
    conj = F.conj_table[batch]
    tr = np.arange(n * n).reshape(n, n).T.reshape(-1)
    ct = np.ascontiguousarray(conj[:, tr])
    Q = np.array(skew_identity(F, n).entries, dtype=np.uint16)
    for i in range(ct.shape[0]):
        left = kernels.mat_mul(ct[i], Q, n, F.mul_table, F.add_table, F.s)
        prod = kernels.mat_mul(left, batch[i], n, F.mul_table, F.add_table, F.s)
        if not np.array_equal(prod, Q):
            return False
    return True


def _suite_sylow(report, args, rng):
    params = _unitary_params(args)
    G, _ = _load_or_build(params, args.cache_dir, args.budget)
    expected = sylow_order(params)
    report.add(
        "sylow_count",
        f"|S| = q^(n(n-1)/2) = {expected} for q={params.q}, n={params.n}",
        G.order == expected, count=G.order, expected=expected,
    )
    report.add(
        "sylow_all_unitary",
        "every enumerated element A satisfies conj(A)^T Q A = Q",
        _all_unitary(params, G.elements), count=G.order,
    )
    if G.order <= 15625:
        F = params.field
        batch = kernels.batch_from_keys(G.elements, params.n ** 2)
        keys = np.sort(kernels.subdiag_keys(batch, params.n, F.s))
        fail = kernels.closure_check_unitri(
            batch, keys, params.n, F.mul_table, F.add_table, F.s
        )
        report.add(
            "sylow_closure_exhaustive",
            "x*y stays in S for all pairs (x, y) in S x S",
            fail == -1, pairs=G.order * G.order,
        )
    else:
        sample = 100_000
        ok = True
        members = G.members
        for _ in range(sample):
            x = G.elements[rng.randrange(G.order)]
            y = G.elements[rng.randrange(G.order)]
            if G.ops.mul(x, y) not in members:
                ok = False
                break
        report.add(
            "sylow_closure_sampled",
            "x*y stays in S on seeded random pairs",
            ok, pairs=sample,
        )


def _suite_formulas(report, args, rng):
    from . import unitary as un

    params = _unitary_params(args)
    n_samples = args.samples
    elems = list(un.iter_sylow_elems(params))
    pick = lambda: elems[rng.randrange(len(elems))]

    ok = all(
        un.mul_general(x, y)
        == un.decompose(params, mat_mul(un.embed(x), un.embed(y)))
        for x, y in ((pick(), pick()) for _ in range(n_samples))
    )
    report.add(
        "product_via_embedding",
        "embed(x*y) = embed(x) * embed(y)", ok, samples=n_samples,
    )

    if params.is_even:
        ok = all(
            un.mul_formula(x, y) == un.mul_general(x, y)
            for x, y in ((pick(), pick()) for _ in range(n_samples))
        )
        report.add(
            "product_formula",
            "X_{D,P} X_{D',P'} = X_{DD', D'^-1 P (conj(D')^F)^-1 + P'}",
            ok, samples=n_samples,
        )
        ok = all(
            un.inverse_formula(x) == un.inverse_general(x)
            for x in (pick() for _ in range(n_samples))
        )
        report.add(
            "inverse_formula",
            "X_{D,P}^-1 = X_{D^-1, -D P conj(D)^F}", ok, samples=n_samples,
        )

    F, m = params.field, params.m
    ident = identity(F, m)
    if params.is_even:
        ax = [e for e in elems if e.D == ident]
        ok = all(
            un.comm_formula(x, y) == un.comm_oracle(x, y)
            for x, y in (
                (ax[rng.randrange(len(ax))], pick()) for _ in range(n_samples)
            )
        )
        report.add(
            "commutator_formula_identity_block",
            "[X_{1,P}, X_{D,P'}] = X_{1, D^-1 P (conj(D)^F)^-1 - P}",
            ok, samples=n_samples,
        )
    else:
        a0 = [e for e in elems if e.D == ident and all(a == 0 for a in e.alpha)]
        ax = [e for e in elems if e.D == ident]
        ok = all(
            un.comm_formula(x, y) == un.comm_oracle(x, y)
            for x, y in (
                (a0[rng.randrange(len(a0))], pick()) for _ in range(n_samples)
            )
        )
        report.add(
            "commutator_formula_zero_alpha",
            "[X_{1,P,0}, X_{D,P',a}] = X_{1, -P + D^-1 P (conj(D)^F)^-1, 0}",
            ok, samples=n_samples,
        )
        ok = all(
            un.comm_formula(x, y) == un.comm_oracle(x, y)
            for x, y in (
                (ax[rng.randrange(len(ax))], ax[rng.randrange(len(ax))])
                for _ in range(n_samples)
            )
        )
        report.add(
            "commutator_formula_identity_D",
            "[X_{1,P,a}, X_{1,P',a'}] = "
            "X_{1, Q conj(a')^T a - Q conj(a)^T a', 0}",
            ok, samples=n_samples,
        )


def _suite_centralizer(report, args, rng):
    params = _unitary_params(args)
    size = sylow_order(params)
    tag = "A0" if not params.is_even and params.m >= 1 else "A"
    if size <= 15625:
        G, _ = _load_or_build(params, args.cache_dir, args.budget)
        A = distinguished_subgroup(G, params, "A")
        C = centralizer(G, A)
        if params.is_even:
            expected = A
            stmt = "C_S(A) = A (A abelian and self-centralising)"
        else:
            expected = distinguished_subgroup(G, params, "A0")
            stmt = "C_S(A) = A0 (the zero-alpha part of A)"
        report.add(
            "centralizer_of_A", stmt, C.same_members(expected),
            centralizer_order=C.order, expected_order=expected.order,
        )
        C_oracle = centralizer(G, A, scan_members=True)
        report.add(
            "centralizer_witness_vs_definition",
            "scanning against the generator witness of A equals the "
            "definition-based scan over all of A",
            C_oracle.same_members(C), order=C.order,
        )
    else:
        _, agens = subgroup_elems(params, "A")
        gen_flats = np.stack([
            np.frombuffer(embed_key(e), dtype=np.uint16) for e in agens
        ])
        found = streaming_centralizer_scan(params, gen_flats, budget=args.budget)
        members0, _ = subgroup_elems(params, "A0")
        expected_keys = set(embed_key(e) for e in members0)
        report.add(
            "centralizer_of_A_streaming",
            "C_S(A) = A0, by exhaustive scan of the full parametrized "
            "enumeration against the generators of A",
            set(found) == expected_keys,
            scanned=size, found=len(found), expected=len(expected_keys),
        )


def _corpus_chains(G):
    """A few passing chains per corpus group for the concatenation
    property."""
    chains = []
    triv = G.trivial_subgroup()
    res = compute_oliver(G)
    chains.append(res.certificate)
    Z = centralizer(G, G.full_subgroup())
    qs = verify_qseries(G, [triv, Z])
    if qs.passed:
        chains.append(qs)
    OZ = omega1(G, Z)
    if OZ.order not in (1, Z.order):
        qs = verify_qseries(G, [triv, OZ, Z])
        if qs.passed:
            chains.append(qs)
    return chains


def _suite_qseries(report, args, rng):
    params = _unitary_params(args)
    size = sylow_order(params)
    if params.m >= 2:
        if size <= 15625:
            G, _ = _load_or_build(params, args.cache_dir, args.budget)
            A = distinguished_subgroup(G, params, "A")
            N21 = distinguished_subgroup(G, params, "Ntilde", (2, 1))
            qs = verify_qseries(G, [G.trivial_subgroup(), A, N21])
            report.add(
                "qseries_A_N21",
                "1 <= A <= N~_21 is a Q-series with t = p-1 = "
                f"{G.p - 1}",
                qs.passed,
                orders=",".join(str(q.order) for q in qs.chain),
            )
        else:
            _verify_qseries_streaming(report, params, args)
    from .corpus import build_corpus

    pair_checks = 0
    all_ok = True
    for name, G in build_corpus():
        chains = _corpus_chains(G)
        for c1 in chains:
            for c2 in chains:
                cc = concat_qseries(G, c1, c2)
                pair_checks += 1
                if not cc.passed:
                    all_ok = False
    report.add(
        "qseries_concatenation",
        "the join-wise concatenation of two passing chains passes "
        "(checked over all chain pairs of the small-group corpus)",
        all_ok, pairs=pair_checks,
    )


def _verify_qseries_streaming(report, params, args):
    """The chain 1 <= A <= N~_21 on the instance too large to
    materialise: N~_21 is the full group there (m = 2), the exponent of
    S is verified by exhaustive streaming scan, and C_S(A) by the
    streaming centralizer scan."""
    qs = qseries_large_instance(params, budget=args.budget)
    report.add(
        "qseries_A_N21_streaming",
        "1 <= A <= N~_21 is a Q-series with t = p-1 = "
        f"{params.p - 1} (N~_21 = S at m = 2; exponent and centralizer "
        "established by exhaustive streaming scans)",
        qs.passed,
        orders=",".join(str(q.order) for q in qs.chain),
    )


def qseries_large_instance(params, budget=DEFAULT_BUDGET):
    """verify_qseries(1 <= A <= S) over the virtual (non-materialised)
    Sylow group; reused by the acceptance tests."""
    if params.m != 2:
        raise UnitaryError("the large streaming instance has m = 2")
    S = sylow_group(params, materialise=False)
    if not streaming_exponent_check(params, params.p, budget=budget):
        raise UnitaryError("exponent scan failed: some x^p != 1")
    S.exponent = params.p
    A = distinguished_subgroup(S, params, "A")

    def centralizer_fn(S_, Q):
        gen_flats = np.stack([
            np.frombuffer(k, dtype=np.uint16) for k in Q.witness
        ])
        keys = streaming_centralizer_scan(params, gen_flats, budget=budget)
        return type(Q)(S_, frozenset(keys), tuple(keys))

    chain = [S.trivial_subgroup(), A, S.full_subgroup()]
    return verify_qseries(S, chain, centralizer_fn=centralizer_fn,
                          method="witness")


def _suite_thm26(report, args, rng):
    spec = WreathSpec(args.p, args.r, args.height, budget=args.budget)
    rep = verify_thm26(spec)
    if rep.get("skipped"):
        report.add(
            "wreath_J_structure",
            "J(P wr C_p) structure check skipped: " + rep["reason"], True,
            skipped=True,
        )
        return
    report.add(
        "wreath_J_structure",
        "J(P wr C_p) is the copy of J(P)^p in the base subgroup, and is "
        "elementary abelian when J(P) is",
        rep["pass"],
        J_lower_order=rep["J_lower_order"],
        J_wreath_order=rep["J_wreath_order"],
        elementary_abelian=rep["J_wreath_elementary_abelian"],
    )


SUITES = {
    "prop31": _suite_prop31,
    "sylow": _suite_sylow,
    "formulas": _suite_formulas,
    "centralizer": _suite_centralizer,
    "qseries": _suite_qseries,
    "thm26": _suite_thm26,
}


# ----------------------------------------------------------------------
# Commands
# ----------------------------------------------------------------------

def _cmd_construct(args, report, rng):
    if args.n is not None:
        meta = _unitary_params(args)
    else:
        meta = WreathSpec(args.p, args.r, args.height, budget=args.budget)
    cache_dir = args.cache_dir or (os.path.dirname(args.out) or "."
                                   if args.out else None)
    if args.out:
        path = args.out
        hit = False
        if os.path.exists(path):
            header = read_header(path)
            if not header_matches(header, meta):
                raise CacheError(f"{path} holds a different construction")
            G, _ = load_group(path)
            hit = True
        else:
            if isinstance(meta, UnitaryParams):
                G = sylow_group(meta, budget=args.budget)
            else:
                G = build_wreath(meta)
            save_group(path, G, meta)
    else:
        G, hit = _load_or_build(meta, cache_dir, args.budget)
    report.add(
        "construct",
        f"enumerated group of order {G.order} with "
        f"{len(G.generators)} generators",
        True, order=G.order, cache_hit=hit,
    )


def _cmd_verify(args, report, rng):
    SUITES[args.suite](report, args, rng)


def _cmd_compute(args, report, rng):
    if args.n is not None:
        meta = _unitary_params(args)
    else:
        meta = WreathSpec(args.p, args.r, args.height, budget=args.budget)
    G, _ = _load_or_build(meta, args.cache_dir, args.budget)
    J, J_rep = thompson_J(G)
    res = compute_oliver(G, rng=rng if args.shuffle else None)
    X = res.subgroup
    Z = centralizer(G, G.full_subgroup())
    report.add(
        "invariants",
        "J(S), X(S), Z(S) and Omega_1(S) computed exactly",
        True,
        group_order=G.order, J_order=J.order, J_rank=J_rep["rank"],
        X_order=X.order, Z_order=Z.order, Omega1_order=omega1(G).order,
    )
    lc = lemma_checks(G, X)
    report.add(
        "oliver_lemma_checks",
        "C_S(X) = Z(X), and every single-generator normal closure Q "
        "with [Omega_1(Z(X)), Q; p-1] = 1 lies in X",
        lc["pass"],
        centralizer_order=lc["centralizer_order"],
        center_order=lc["center_order"],
    )


def _cmd_conjecture(args, report, rng):
    from .oliver import check_conjecture

    if args.n is not None:
        meta = _unitary_params(args)
    else:
        meta = WreathSpec(args.p, args.r, args.height, budget=args.budget)
    G, _ = _load_or_build(meta, args.cache_dir, args.budget)
    verdict = check_conjecture(G, rng=rng if args.shuffle else None)
    report.add(
        "conjecture",
        "J(S) <= X(S)",
        verdict["holds"],
        group_order=G.order,
        J_order=verdict["J"].order,
        X_order=verdict["X"].order,
        J_elementary_abelian=is_elementary_abelian(verdict["J"]),
    )


# ----------------------------------------------------------------------
# Entry point
# ----------------------------------------------------------------------

def _build_parser():
    parser = argparse.ArgumentParser(
        prog="usylow",
        description="Exact verification toolkit for Sylow subgroups of "
                    "unitary groups, Thompson and Oliver subgroups.",
    )
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)

    def common(sp, wreath_ok=True):
        sp.add_argument("--p", type=int, required=True, help="prime p")
        sp.add_argument("--k", type=int, help="extension degree (q = p^k)")
        sp.add_argument("--q", type=int, help="q as a power of p")
        sp.add_argument("--n", type=int, help="matrix size of U_n")
        sp.add_argument("--m", type=int, help="block size for matrix suites")
        if wreath_ok:
            sp.add_argument("--r", type=int, default=1,
                            help="wreath bottom exponent (C_{p^r})")
            sp.add_argument("--height", type=int,
                            help="number of wreath layers")
        sp.add_argument("--budget", type=int, default=DEFAULT_BUDGET,
                        help="element budget")
        sp.add_argument("--samples", type=int, default=1000,
                        help="sample count for randomized checks")
        sp.add_argument("--seed", type=int, default=0, help="random seed")
        sp.add_argument("--out", help="report/cache output path")
        sp.add_argument("--cache-dir",
                        default=os.environ.get("USYLOW_CACHE_DIR"),
                        help="group cache directory")
        sp.add_argument("--shuffle", action="store_true",
                        help="shuffle candidate order in the Oliver search")

    sp = sub.add_parser("construct", help="enumerate and cache a group")
    common(sp)
    sp = sub.add_parser("verify", help="run a verification suite")
    sp.add_argument("--suite", choices=sorted(SUITES), required=True)
    common(sp)
    sp = sub.add_parser("compute", help="compute J, X, Z, Omega_1")
    common(sp)
    sp = sub.add_parser("conjecture", help="check J(S) <= X(S)")
    common(sp)
    return parser


def main(argv=None):
    parser = _build_parser()
    args = parser.parse_args(argv)
    config = {
        k: v for k, v in sorted(vars(args).items())
        if v is not None and k != "out"
    }
    config["backend"] = kernels.BACKEND
    report = Report(__version__, config)
    rng = random.Random(args.seed)
    start = time.monotonic()
    try:
        if args.command == "construct":
            _cmd_construct(args, report, rng)
        elif args.command == "verify":
            _cmd_verify(args, report, rng)
        elif args.command == "compute":
            _cmd_compute(args, report, rng)
        elif args.command == "conjecture":
            _cmd_conjecture(args, report, rng)
        else:  # pragma: no cover - argparse enforces the choices
            parser.error(f"unknown command {args.command}")
    except BudgetError as exc:
        _log(f"budget error: {exc}")
        return EXIT_BUDGET
    except (CacheError, OSError) as exc:
        _log(f"I/O error: {exc}")
        return EXIT_IO
    except (UnitaryError, WreathError, FieldError, GroupError,
            OliverError) as exc:
        _log(f"usage error: {exc}")
        return EXIT_USAGE
    _log(f"elapsed: {time.monotonic() - start:.2f}s")
    text = report.render()
    if args.command != "construct" and args.out:
        try:
            report.write(args.out)
        except OSError as exc:
            _log(f"I/O error: {exc}")
            return EXIT_IO
    sys.stdout.write(text)
    return EXIT_PASS if report.all_passed else EXIT_CHECK_FAILURE


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
