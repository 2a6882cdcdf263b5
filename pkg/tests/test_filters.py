import pytest

import oracles
from conftest import CORPUS, raw
from invsg import generate
from invsg.bits import bits, mask_of
from invsg.coverages import builtin_coverage
from invsg.errors import NotDistributive, DifferentParents
from invsg.filters import (all_filters, filters_by_search, filter_mul, filter_inv, filter_d,
                           filter_r, is_ultrafilter, ultra_by_closure, is_consistent,
                           maximal_consistent_supersets, is_prime,
                           is_tight, tight_witness, filters_of_class, filter_groupoid, principal)

# name: (filter count, ultra mins, prime mins or None, tight mins), frozen from
# the brute-force enumeration in oracles.py
FROZEN = {
    "chain:2": (1, [1], [1], [1]),
    "chain:3": (2, [1], [1, 2], [1]),
    "chain:4": (3, [1], [1, 2, 3], [1]),
    "chain:5": (4, [1], [1, 2, 3, 4], [1]),
    "boolean:1": (1, [1], [1], [1]),
    "boolean:2": (3, [1, 2], [1, 2], [1, 2]),
    "boolean:3": (7, [1, 2, 3], [1, 2, 3], [1, 2, 3]),
    "brandt:2": (4, [1, 2, 3, 4], None, [1, 2, 3, 4]),
    "brandt:3": (9, list(range(1, 10)), None, list(range(1, 10))),
    "sym_inv:2": (6, [1, 2, 4, 5], [1, 2, 4, 5], [1, 2, 4, 5]),
    "group0:Z2": (2, [1, 2], [1, 2], [1, 2]),
    "group0:Z3": (3, [1, 2, 3], [1, 2, 3], [1, 2, 3]),
    "semilattice:V3": (2, [1, 2], None, [1, 2]),
    "semilattice:M3": (4, [1, 2, 3], None, [1, 2, 3]),
    "semilattice:N5": (4, [1, 3], None, [1, 3]),
}


def mins(fs):
    return [F.min for F in fs]


@pytest.mark.parametrize("name", sorted(FROZEN))
def test_frozen_classification(name):
    S = CORPUS[name]
    count, ultra, prime, tight = FROZEN[name]
    assert len(all_filters(S)) == count
    assert mins(filters_of_class(S, "ultra")) == ultra
    assert mins(filters_of_class(S, "tight")) == tight
    assert mins(filters_of_class(S, "dense")) == tight
    if prime is None:
        assert not S.is_distributive
        with pytest.raises(NotDistributive):
            filters_of_class(S, "prime")
    else:
        assert mins(filters_of_class(S, "prime")) == prime
        assert mins(filters_of_class(S, "completely_prime")) == prime


def test_filters_match_oracle(any_sg):
    S = any_sg
    T = raw(S)
    expect = sorted(mask_of(A) for A in oracles.filters(T))
    assert sorted(F.carrier for F in all_filters(S)) == expect
    assert sorted(filters_by_search(S)) == expect
    assert sorted(F.carrier for F in filters_of_class(S, "ultra")) == \
        sorted(mask_of(A) for A in oracles.ultrafilters(T))
    assert sorted(F.carrier for F in filters_of_class(S, "tight")) == \
        sorted(mask_of(A) for A in oracles.tight_filters(T))
    if S.is_distributive:
        assert sorted(F.carrier for F in filters_of_class(S, "prime")) == \
            sorted(mask_of(A) for A in oracles.prime_filters(T))


def test_ch3_examples(ch3):
    one, a = principal(ch3, 2), principal(ch3, 1)
    assert one.carrier == 0b100 and a.carrier == 0b110
    assert is_ultrafilter(a) and not is_ultrafilter(one)
    assert is_prime(one) and is_prime(a)
    tight = builtin_coverage(ch3, "tight")
    assert is_tight(a, tight) and not is_tight(one, tight)
    assert tight_witness(one, tight) == (2, 0b010)
    assert filter_mul(a, one) is None


def test_b2_products(b2):
    e12, e21 = principal(b2, 3), principal(b2, 4)
    assert filter_mul(e12, e21).min == 1
    assert filter_inv(e12).min == 4
    assert filter_d(e12).min == 2 and filter_r(e12).min == 1
    for a in range(1, 5):
        assert is_ultrafilter(principal(b2, a))


def test_ba4_primes(ba4):
    assert not is_prime(principal(ba4, 3))
    p = principal(ba4, 1)
    assert is_prime(p) and is_ultrafilter(p)


def test_idempotent_filters_are_units(any_sg):
    S = any_sg
    for F in all_filters(S):
        if F.is_idempotent():
            assert filter_mul(F, F) == F


def test_different_parents():
    with pytest.raises(DifferentParents):
        filter_mul(principal(generate("chain:3"), 1), principal(generate("chain:3"), 1))


def test_product_matches_set_product(any_sg):
    # (AB)↑ computed on carriers agrees with the min-element product
    S = any_sg
    T = raw(S)
    for F in all_filters(S):
        for G in all_filters(S):
            H = filter_mul(F, G)
            if S.d(F.min) != S.r(G.min):
                assert H is None
                continue
            A, B = set(bits(F.carrier)), set(bits(G.carrier))
            assert H.carrier == mask_of(oracles.up_closure(T, oracles.set_product(T, A, B)))


def test_minimal_elements_give_ultrafilters(any_sg):
    S = any_sg
    for a in bits(S.minimal_elements(S.nonzero(S.all))):
        assert is_ultrafilter(principal(S, a))


def test_consistency_examples(ch3, b2):
    assert is_consistent(ch3, 0b110)
    assert not is_consistent(ch3, 0b011)
    assert not is_consistent(b2, 0b110)


def test_maximal_consistent_are_ultrafilters(any_sg):
    S = any_sg
    T = raw(S)
    ultra = sorted(F.carrier for F in filters_of_class(S, "ultra"))
    maximal = set()
    for A in oracles.all_subsets(range(S.n)):
        A = mask_of(A)
        maximal.update(maximal_consistent_supersets(S, A))
        assert is_consistent(S, A) == (A != 0 and any(
            x != S.zero and all(oracles.leq(T, x, a) for a in bits(A)) for x in range(S.n)))
    assert sorted(maximal) == ultra


def test_ultra_closure_condition(any_sg):
    for F in all_filters(any_sg):
        assert ultra_by_closure(F) == is_ultrafilter(F, check=False)


def test_ultra_is_prime_on_semilattices():
    for S in CORPUS.values():
        if S.idempotents != S.all or not S.is_distributive:
            continue
        ultra = set(mins(filters_of_class(S, "ultra")))
        prime = set(mins(filters_of_class(S, "prime")))
        assert ultra <= prime
        assert (ultra == prime) == S.is_boolean


def test_chain_prime_strictly_bigger(ch3):
    assert set(mins(filters_of_class(ch3, "ultra"))) < set(mins(filters_of_class(ch3, "prime")))


def test_ultra_prime_coincide_iff_weakly_boolean(dist_sg):
    S = dist_sg
    ultra = mins(filters_of_class(S, "ultra"))
    prime = mins(filters_of_class(S, "prime"))
    assert set(ultra) <= set(prime)
    assert (ultra == prime) == S.is_weakly_boolean


def test_domain_filter_keeps_class(any_sg):
    # F is tight (ultra) exactly when its domain filter is
    S = any_sg
    cov = builtin_coverage(S, "tight")
    for F in all_filters(S):
        D = filter_d(F)
        assert is_tight(F, cov) == is_tight(D, cov)
        assert is_ultrafilter(F) == is_ultrafilter(D)


def test_idempotent_tight_filter_vs_semilattice(any_sg):
    # for idempotent F: tight in S iff its idempotent part is tight in E(S)
    S = any_sg
    E, emb = S.idempotent_semilattice()
    pos = {e: i for i, e in enumerate(emb)}
    cs, ce = builtin_coverage(S, "tight"), builtin_coverage(E, "tight")
    for F in all_filters(S):
        if F.is_idempotent():
            assert is_tight(F, cs) == is_tight(principal(E, pos[F.min]), ce)


def test_ultrafilters_are_tight(any_sg):
    S = any_sg
    cov = builtin_coverage(S, "tight")
    for F in filters_of_class(S, "ultra"):
        assert is_tight(F, cov)


def test_primes_containing_only_idempotents(dist_sg):
    # if every prime filter through s is idempotent then s is idempotent
    S = dist_sg
    primes = filters_of_class(S, "prime")
    for s in range(S.n):
        if s == S.zero:
            continue
        if all(F.is_idempotent() for F in primes if s in F):
            assert S.is_idem[s]


def test_groupoid_axioms_and_closure(any_sg):
    S = any_sg
    classes = ["all", "ultra", "tight", "dense"]
    if S.is_distributive:
        classes += ["prime", "completely_prime"]
    for cls in classes:
        G = filter_groupoid(S, cls)
        assert G.check_axioms() is None
        fs, d, r, mul = oracles.filter_groupoid(raw(S), [frozenset(bits(F.carrier)) for F in G.filters])
        assert d == G.d and r == G.r
        for (i, j), k in mul.items():
            assert G.product(i, j) == k
        assert sum(v >= 0 for row in G.mul for v in row) == len(mul)


def test_groupoid_examples(b2, ch3, i2):
    G = filter_groupoid(b2, "ultra")
    assert G.m == 4 and len(G.objects()) == 2
    H = filter_groupoid(ch3, "ultra")
    assert H.m == 1 and H.objects() == [0]
    assert filter_groupoid(i2, "all").m == 6


def test_groupoid_export(b2):
    G = filter_groupoid(b2, "ultra")
    d = G.to_dict()
    assert d["objects"] == [0, 1] and len(d["arrows"]) == 4
    dot = G.to_dot()
    assert dot.startswith("digraph") and dot.count("->") == 4
