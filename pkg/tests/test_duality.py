import pytest

import oracles
from conftest import CORPUS
from invsg import generate
from invsg.completions import tight_completion, schein_completion, closed_completion, cover_closure
from invsg.coverages import builtin_coverage
from invsg.errors import (NotBoolean, PreimageNotFilter, NotCallitic, NotSurjective,
                          NotIdempotentPure, NotWeaklyBoolean, FlavorMismatch)
from invsg.filters import filter_groupoid
from invsg.groupoids import (basic_topology, discrete, pair_groupoid, group_groupoid,
                             disjoint_union, is_sober)
from invsg.morphisms import Morphism, identity, find_isomorphism, homomorphisms
from invsg.duality import (epsilon, is_spatial, spatial_report, separation_witnesses, eta,
                           coherent_roundtrip, boolean_duality_roundtrip, groupoid_roundtrip,
                           roundtrip_report, first_booleanization, second_booleanization,
                           morphism_predicates, pullback_functor, adjunction_check,
                           nucleus_from_morphism, default_class)

# |B(S)|, matching the oracle count of bisections of the discrete filter groupoid
BOOLEANIZATION = {"chain:2": 2, "chain:3": 4, "chain:4": 8, "chain:5": 16, "boolean:1": 2,
                  "boolean:2": 8, "boolean:3": 128, "brandt:2": 7, "brandt:3": 34,
                  "sym_inv:2": 21, "group0:Z2": 3, "group0:Z3": 4, "semilattice:V3": 4,
                  "semilattice:M3": 16, "semilattice:N5": 16}


def test_epsilon_on_ba4(ba4):
    e = epsilon(ba4)
    assert e.top.m == 2
    iso = coherent_roundtrip(ba4)
    assert iso.map == e.map and e.target.n == 4
    assert e.bisections.sets[e.map[0]] == 0


def test_epsilon_on_b2(b2):
    e = epsilon(b2)
    assert default_class(b2) == "all"
    assert e.is_injective() and not e.is_surjective()
    assert (b2.n, e.target.n) == (5, 7)


def test_spatial(any_sg):
    rep = spatial_report(any_sg)
    assert rep["spatial"] and rep["missing"] == []
    assert is_spatial(any_sg)


def test_separation_witness_ch3(ch3):
    wit, missing = separation_witnesses(ch3)
    assert wit[(2, 1)] == 2 and missing == []
    assert spatial_report(ch3)["separations"]["2/1"] == "2"


@pytest.mark.parametrize("k", [1, 2, 3, 4])
def test_eta_pair_groupoids(k):
    T = discrete(pair_groupoid(k))
    f = groupoid_roundtrip(T)
    assert f.is_bijective() and f.is_homeomorphism()
    assert f.bisections.n == oracles.count_discrete_bisections(T.G.d, T.G.r)
    assert f.bisections.semigroup.is_boolean


def test_eta_group_groupoids():
    for table in ([[0, 1], [1, 0]], [[0, 1, 2], [1, 2, 0], [2, 0, 1]]):
        T = discrete(group_groupoid(table))
        assert groupoid_roundtrip(T).is_isomorphism()
    H = disjoint_union(pair_groupoid(2), group_groupoid([[0, 1], [1, 0]]))
    assert groupoid_roundtrip(discrete(H)).is_isomorphism()


def test_eta_one_point():
    f = groupoid_roundtrip(discrete(pair_groupoid(1)))
    assert f.map == [0]


def test_eta_on_ch3_basic(ch3):
    T = basic_topology(ch3)
    f = eta(T)
    assert f.is_isomorphism() == is_sober(T) is True


def test_coherent_roundtrip(dist_sg):
    iso = coherent_roundtrip(dist_sg)
    assert iso.inverse.hom_failure() is None


def test_boolean_roundtrip(ba4, i2):
    for S in (ba4, i2, generate("boolean:3"), generate("group0:Z3")):
        iso = boolean_duality_roundtrip(S)
        assert sorted(iso.map) == list(range(S.n))
    rep = roundtrip_report(i2)
    assert rep["points"] == 4
    # I2 against the bisections of the pair groupoid
    B = groupoid_roundtrip(discrete(pair_groupoid(2))).bisections.semigroup
    assert find_isomorphism(boolean_duality_roundtrip(i2).target, B) is not None


def test_not_boolean(b2, ch3):
    with pytest.raises(NotBoolean):
        boolean_duality_roundtrip(b2)
    with pytest.raises(NotBoolean):
        boolean_duality_roundtrip(ch3)


@pytest.mark.parametrize("name", sorted(BOOLEANIZATION))
def test_first_booleanization(name):
    S = CORPUS[name]
    Bz = first_booleanization(S)
    assert Bz.n == BOOLEANIZATION[name]
    assert Morphism(S, Bz.semigroup, Bz.iota).hom_failure() is None
    assert Bz.semigroup.is_weakly_boolean
    G = filter_groupoid(S)
    assert Bz.n == oracles.count_discrete_bisections(G.d, G.r)


def test_booleanization_examples(b2, ch3):
    assert find_isomorphism(first_booleanization(b2).semigroup, generate("sym_inv:2"))
    assert find_isomorphism(first_booleanization(ch3).semigroup, generate("boolean:2"))


def test_second_booleanization_identity(small_sg):
    if small_sg.n > 6:
        pytest.skip("size")
    Bz = first_booleanization(small_sg)
    K = Bz.semigroup
    bar = second_booleanization(small_sg, K, Bz.iota, uniqueness=K.n <= 12)
    assert bar.map == list(range(K.n))


def test_second_booleanization_b2_into_i2(b2, i2):
    theta = next(homomorphisms(b2, i2, injective=True))
    bar = second_booleanization(b2, i2, theta)
    assert sorted(bar.map) == list(range(7))
    assert bar.report["unique"]


def test_second_booleanization_unique_triples():
    targets = [T for T in CORPUS.values() if T.is_weakly_boolean and T.n <= 12]
    found = []
    for name in ["chain:2", "chain:3", "brandt:2", "group0:Z2"]:
        S = CORPUS[name]
        for T in targets:
            for theta in homomorphisms(S, T):
                try:
                    bar = second_booleanization(S, T, theta)
                except PreimageNotFilter:
                    continue
                assert bar.report["unique"] and bar.report["extensions"] == 1
                found.append((name, theta))
                break
    assert len(found) >= 3


def test_preimage_not_filter():
    S, T = generate("group0:Z2"), generate("chain:2")
    with pytest.raises(PreimageNotFilter) as exc:
        second_booleanization(S, T, [0, 1, 1])
    assert exc.value.witness == {"prime": 1, "preimage": [1, 2]}
    with pytest.raises(NotWeaklyBoolean):
        second_booleanization(T, generate("chain:3"), [0, 2])


CHAIN_TIGHT = {"is_tight_map", "is_dense_map"}


def test_identity_predicates(dist_sg):
    p = morphism_predicates(identity(dist_sg))
    false = {k for k, v in p.items() if v is False}
    S = dist_sg
    chain = all(S.leq(a, b) or S.leq(b, a) for a in range(S.n) for b in range(S.n))
    if chain and S.n > 2:
        assert false == CHAIN_TIGHT
    else:
        assert false == set()
    assert p["is_cover_to_join"] is None


def test_delta_is_tight(ch3):
    D = tight_completion(ch3)
    p = morphism_predicates(Morphism(ch3, D.semigroup, D.iota))
    assert p["is_tight_map"] and p["is_dense_map"]
    cov = builtin_coverage(ch3, "tight")
    assert morphism_predicates(Morphism(ch3, D.semigroup, D.iota), cov)["is_cover_to_join"]


def test_zero_map_not_callitic(ch3):
    p = morphism_predicates(Morphism(ch3, ch3, [0, 0, 0]))
    assert not p["is_callitic"]
    with pytest.raises(NotCallitic):
        pullback_functor(Morphism(ch3, ch3, [0, 0, 0]))


def test_predicates_need_distributive_target(b2):
    with pytest.raises(FlavorMismatch):
        morphism_predicates(identity(b2))


def test_predicate_implications_on_small_maps():
    # morphism_predicates raises if any implication fails
    names = ["chain:2", "chain:3", "boolean:2", "group0:Z2"]
    seen = 0
    for a in names:
        for b in names:
            S, T = CORPUS[a], CORPUS[b]
            for f in homomorphisms(S, T):
                morphism_predicates(Morphism(S, T, f))
                seen += 1
    assert seen > 20


def test_pullback_identity(dist_sg):
    g = pullback_functor(identity(dist_sg))
    assert g.map == list(range(len(g.map)))


ADJUNCTION = [
    ("chain:2", pair_groupoid(1), 1),
    ("chain:3", pair_groupoid(1), 2),
    ("boolean:2", pair_groupoid(1), 2),
    ("group0:Z2", pair_groupoid(1), 0),
    ("chain:2", pair_groupoid(2), 0),
    ("group0:Z2", pair_groupoid(2), 1),
    ("group0:Z2", group_groupoid([[0, 1], [1, 0]]), 1),
]


@pytest.mark.parametrize("name,G,count", ADJUNCTION)
def test_adjunction(name, G, count):
    rep = adjunction_check(CORPUS[name], discrete(G))
    assert rep == {"functors": count, "callitic": count}


def test_adjunction_non_discrete(ch3):
    assert adjunction_check(ch3, basic_topology(ch3)) == {"functors": 3, "callitic": 3}


def test_nucleus_identity(dist_sg):
    if not dist_sg.is_pseudogroup:
        pytest.skip("needs a monoid")
    nu, iso = nucleus_from_morphism(identity(dist_sg))
    assert nu == list(range(dist_sg.n))
    assert iso.map == list(range(dist_sg.n))


def test_nucleus_of_closure_projection(ch3):
    cov = builtin_coverage(ch3, "tight")
    C = schein_completion(ch3)
    P = closed_completion(ch3, cov)
    proj = [P.index[cover_closure(cov, A)] for A in C.carriers]
    nu, iso = nucleus_from_morphism(Morphism(C.semigroup, P.semigroup, proj))
    assert [C.carriers[v] for v in nu] == [cover_closure(cov, A) for A in C.carriers]


def test_nucleus_errors():
    Z2, C2, C3 = generate("group0:Z2"), generate("chain:2"), generate("chain:3")
    with pytest.raises(NotIdempotentPure):
        nucleus_from_morphism(Morphism(Z2, C2, [0, 1, 1]))
    with pytest.raises(NotSurjective):
        nucleus_from_morphism(Morphism(C2, C3, [0, 2]))
