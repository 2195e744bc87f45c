"""Acceptance gate: the headline capabilities, one pass/fail line each.

Run with ``pytest tests/test_acceptance.py -v -s`` to see the lines.
Every criterion is seeded, self-contained, and budgeted; a FAIL line is
always accompanied by an assertion failure.
"""

import time
from itertools import combinations
from math import gcd

from gentorsion.catalog import (
    FreeAbelExtInput,
    build_casolo_gamma,
    build_dihedral_infinite,
    build_free_abelianized_extension,
    build_K_group,
    build_klein_bottle,
    build_promislow,
    build_wreath,
    central_nontorsion_check,
    trivial_z_spec,
)
from gentorsion.extgroup import ExtElement, ExtensionGroup
from gentorsion.gentor import (
    DirectProductGroup,
    ExponentBounds,
    SplitMix64,
    gen_exponent_bounds,
    gen_order_lower_bound,
    gen_order_search,
    is_generalized_torsion,
    positive_identity_witnesses,
    random_word_element,
    verify_identity_sampled,
    verify_identity_universal,
    witness_construct,
)
from gentorsion.intlin import IntMatrix, hermite_normal_form, smith_normal_form

SEED = 20406


def finish(num, label, ok, t0, budget):
    elapsed = time.monotonic() - t0
    status = "PASS" if (ok and elapsed < budget) else "FAIL"
    print(f"ACCEPTANCE {num} {label}: {status}")
    assert ok, f"criterion {num} ({label}) failed"
    assert elapsed < budget, f"criterion {num} took {elapsed:.2f}s, budget {budget}s"


def test_acceptance_1_promislow_invariants():
    t0 = time.monotonic()
    G = ExtensionGroup(build_promislow(), name="promislow")
    ab = G.abelianization()
    ok = (
        ab.describe() == "C4 x C4"
        and G.translation_index() == 4
        and G.is_torsion_free()
        and G.center_rank() == 0
        and gen_exponent_bounds(G) == ExponentBounds(4, 4, True)
    )
    finish(1, "promislow-invariants", ok, t0, 1.0)


def test_acceptance_2_metab_exponents():
    t0 = time.monotonic()
    expected = {(2, 1, 1): 4, (3, 1, 1): 9, (2, 1, 2): 8, (2, 2, 1): 8, (5, 1, 1): 25}
    ok = True
    for (p, n, m), e in expected.items():
        G = build_K_group(p, n, m)
        b = gen_exponent_bounds(G)
        ok = ok and (b.lower, b.upper, b.exact) == (e, e, True)
        ok = ok and G.abelianization().describe() == f"C{e} x C{e}"
    finish(2, "metab-exponents", ok, t0, 30.0)


def test_acceptance_3_positive_identities():
    t0 = time.monotonic()
    P = ExtensionGroup(build_promislow(), name="promislow")
    k, conj = positive_identity_witnesses(P)
    ok = k * len(conj) == 8 and verify_identity_universal(P, k, conj)
    for p, n, m in [(2, 1, 1), (3, 1, 1)]:
        K = build_K_group(p, n, m)
        kk, cc = positive_identity_witnesses(K)
        ok = ok and kk * len(cc) == p**3
        ok = ok and verify_identity_sampled(K, kk, cc, samples=1000, seed=SEED)
    finish(3, "positive-identities", ok, t0, 20.0)


def test_acceptance_4_decision_procedures():
    t0 = time.monotonic()
    ok = True

    klein = ExtensionGroup(build_klein_bottle(), name="klein")
    kx, ky = (dict(klein.generators)[n] for n in ("x", "y"))
    ok = ok and is_generalized_torsion(klein, kx)
    ok = ok and not is_generalized_torsion(klein, ky)
    for k in range(-3, 4):
        for j in range(-3, 4):
            g = klein.mul(klein.pow(kx, k), klein.pow(ky, j))
            ok = ok and is_generalized_torsion(klein, g) == (j == 0)

    dinf = ExtensionGroup(build_dihedral_infinite(), name="dinf")
    rng = SplitMix64(SEED)
    for _ in range(50):
        g = random_word_element(dinf, rng)
        ok = ok and is_generalized_torsion(dinf, g)

    wr = ExtensionGroup(build_wreath([[0, 1], [1, 0]]), name="wreath")
    for _ in range(500):
        g = random_word_element(wr, rng)
        ok = ok and is_generalized_torsion(wr, g) == (sum(g.a) == 0)

    spec = build_free_abelianized_extension(FreeAbelExtInput.build(2, [[0, 1], [1, 0]], [1, 1]))
    F = ExtensionGroup(spec, name="f2c2")
    fab = F.abelianization()
    for _ in range(50):
        g, h = random_word_element(F, rng), random_word_element(F, rng)
        comm = F.mul(F.inv(F.mul(h, g)), F.mul(g, h))
        ok = ok and is_generalized_torsion(F, comm)
    for _ in range(50):
        g = random_word_element(F, rng)
        if fab.canonical(F.ab_vector(g)) != (0, 0):
            ok = ok and not is_generalized_torsion(F, g)
    finish(4, "decision-procedures", ok, t0, 10.0)


def test_acceptance_5_witness_certificates():
    t0 = time.monotonic()
    G = ExtensionGroup(build_promislow(), name="promislow")
    rng = SplitMix64(SEED)
    ok = True
    for _ in range(100):
        g = random_word_element(G, rng)
        cert = witness_construct(G, g)
        ok = ok and cert.verified and cert.length == G.translation_index()
        ok = ok and cert.length % gen_order_lower_bound(G, g) == 0
        prod = G.identity()
        for x in cert.conjugators:
            prod = G.mul(prod, G.conj(g, x))
        ok = ok and prod == G.identity()
    finish(5, "witness-certificates", ok, t0, 10.0)


def test_acceptance_6_bounded_search():
    t0 = time.monotonic()
    G = ExtensionGroup(build_promislow(), name="promislow")
    x = dict(G.generators)["x"]
    c1 = gen_order_search(G, x, max_k=8, radius=3)
    c2 = gen_order_search(G, G.pow(x, 2), max_k=8, radius=3)
    ok = (
        c1 is not None and c1.length == 4 and c1.verified
        and c2 is not None and c2.length == 2 and c2.verified
    )
    finish(6, "bounded-search", ok, t0, 20.0)


def test_acceptance_7_product_exponent():
    t0 = time.monotonic()
    P = ExtensionGroup(build_promislow(), name="promislow")
    K = build_K_group(3, 1, 1)
    G = DirectProductGroup(P, K)
    b = gen_exponent_bounds(G)
    ok = (b.lower, b.upper, b.exact) == (36, 36, True)
    ok = ok and G.abelianization().describe() == "C36 x C36"
    finish(7, "product-exponent", ok, t0, 5.0)


def test_acceptance_8_group_ring_identity():
    t0 = time.monotonic()
    gamma = build_casolo_gamma()
    ok = True
    for sigma in gamma.sigma_candidates():
        conj = gamma.identity_conjugators(sigma)
        ok = ok and len(conj) == 16
        rng = SplitMix64(SEED)
        for _ in range(1000):
            u = random_word_element(gamma, rng, max_length=8)
            prod = gamma.identity()
            for c in conj:
                prod = gamma.mul(prod, gamma.conj(u, c))
            ok = ok and prod == gamma.identity()
    rng = SplitMix64(SEED + 1)
    checked = 0
    while checked < 100:
        u = random_word_element(gamma, rng, max_length=6)
        if u == gamma.identity():
            continue
        checked += 1
        for k in range(1, 13):
            ok = ok and gamma.pow(u, k) != gamma.identity()
    finish(8, "group-ring-identity", ok, t0, 20.0)


def _minor_gcd(m, k):
    g = 0
    for rows in combinations(range(m.rows), k):
        for cols in combinations(range(m.cols), k):
            g = gcd(g, m.submatrix(rows, cols).det())
    return g


def test_acceptance_9_exact_linear_algebra_and_laws():
    t0 = time.monotonic()
    ok = True

    rng = SplitMix64(SEED)
    for _ in range(100):
        rows = 1 + rng.randrange(6)
        cols = 1 + rng.randrange(6)
        m = IntMatrix(
            [[rng.randrange(41) - 20 for _ in range(cols)] for _ in range(rows)], cols=cols
        )
        h, u = hermite_normal_form(m)
        ok = ok and u @ m == h and abs(u.det()) == 1
        snf = smith_normal_form(m)
        ok = ok and snf.satisfies(m)
        diag = snf.diagonal()
        prod = 1
        for k in range(1, min(rows, cols) + 1):
            prod *= diag[k - 1]
            ok = ok and prod == _minor_gcd(m, k)

    backends = [
        ExtensionGroup(build_promislow(), name="promislow"),
        build_K_group(2, 1, 1),
        ExtensionGroup(build_wreath([[0, 1], [1, 0]]), name="wreath"),
        build_casolo_gamma(),
    ]
    for G in backends:
        brng = SplitMix64(SEED)
        for _ in range(1000):
            g = random_word_element(G, brng, max_length=6)
            h = random_word_element(G, brng, max_length=6)
            k = random_word_element(G, brng, max_length=6)
            ok = ok and G.mul(G.mul(g, h), k) == G.mul(g, G.mul(h, k))
            ok = ok and G.mul(g, G.inv(g)) == G.identity()

    for G in backends[:3]:
        ab = G.abelianization()
        prng = SplitMix64(SEED + 2)
        for _ in range(200):
            g = random_word_element(G, prng)
            h = random_word_element(G, prng)
            lhs = ab.canonical(G.ab_vector(G.mul(g, h)))
            rhs = ab.canonical(tuple(a + b for a, b in zip(G.ab_vector(g), G.ab_vector(h))))
            ok = ok and lhs == rhs

    Z = ExtensionGroup(trivial_z_spec(), name="z")
    P = ExtensionGroup(build_promislow(), name="promislow")
    D = ExtensionGroup(build_dihedral_infinite(), name="dinf")
    ok = ok and central_nontorsion_check(DirectProductGroup(P, Z))
    ok = ok and central_nontorsion_check(DirectProductGroup(D, Z))
    finish(9, "exact-linear-algebra-and-laws", ok, t0, 15.0)
