import json
import random

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

import oracles
from jordangroups.algebra import F3, F5, Mat, Perm
from jordangroups.constructors import build
from jordangroups.errors import CapExceeded, InconsistentElement, NotAbelian, NotNormal
from jordangroups.kernel import (
    GroupMap, GroupTable, Indeterminate, SubSet, abelian_invariants, abelianization, automorphisms,
    build_from_concrete, center, centralizer, commutator_subgroup, conjugacy_classes, derived_series,
    is_isomorphic, is_normal, join, normal_closure, normalizer, perfect_core, quotient, subgroup_closure,
    table_from_function, verify_table,
)

SMALL = ["C(1)", "C(6)", "D(4)", "Q8", "S(3)", "A(4)", "SL(2,3)", "GL(2,3)", "Dic(12)", "C(2) x S(3)"]


@pytest.fixture(scope="module", params=SMALL)
def small(request):
    return build(request.param)


def test_identity_at_zero_and_table_valid(small):
    verify_table(small)
    assert small.elt_order[0] == 1
    for g in range(small.order):
        assert small.mul[g, small.inv[g]] == 0


def test_element_orders_match_powers(small):
    for g in range(small.order):
        k = int(small.elt_order[g])
        assert small.power(g, k) == 0
        assert all(small.power(g, d) != 0 for d in range(1, k))


def test_closure_matches_oracle(small):
    m = oracles.table(small)
    rng = random.Random(1)
    for _ in range(20):
        seed = rng.sample(range(small.order), min(2, small.order))
        assert set(subgroup_closure(small, seed).elements.tolist()) == oracles.closure(m, seed)


def test_center_centralizer_normalizer_brute(small):
    m = oracles.table(small)
    n = small.order
    Z = {z for z in range(n) if all(m[z][g] == m[g][z] for g in range(n))}
    assert set(center(small).elements.tolist()) == Z
    inv = oracles.inverses(m)
    for S in list(oracles.all_subgroups(m))[:10]:
        sub = SubSet(small, sorted(S))
        C = {g for g in range(n) if all(m[g][s] == m[s][g] for s in S)}
        N = {g for g in range(n) if frozenset(m[m[g][s]][inv[g]] for s in S) == S}
        assert set(centralizer(small, sub).elements.tolist()) == C
        assert set(normalizer(small, sub).elements.tolist()) == N
        assert is_normal(small, sub) == (len(N) == n)


def test_conjugacy_classes_brute(small):
    m = oracles.table(small)
    inv = oracles.inverses(m)
    n = small.order
    cls = conjugacy_classes(small)
    assert sum(cls.sizes) == n
    for x in range(n):
        orbit = {m[m[g][x]][inv[g]] for g in range(n)}
        assert set(cls.members(cls.class_of[x]).tolist()) == orbit


def test_build_from_concrete_errors():
    a = Mat.from_rows(F5, [[1, 1], [0, 1]])
    b = Mat.from_rows(F3, [[1, 1], [0, 1]])
    with pytest.raises(InconsistentElement):
        build_from_concrete([a, b])
    with pytest.raises(CapExceeded):
        build_from_concrete([Perm.from_cycles(6, (0, 1)), Perm.from_cycles(6, tuple(range(6)))], cap=100)


def test_table_from_function_and_json_roundtrip():
    G = table_from_function(7, lambda a, b: (a + b) % 7, "C7")
    H = GroupTable.from_json(G.to_json())
    assert np.array_equal(G.mul, H.mul)
    bad = json.loads(G.to_json())
    bad["mul"][8] = bad["mul"][9]
    with pytest.raises(Exception):
        GroupTable.from_json(json.dumps(bad))


def test_quotient_and_projection():
    G = build("SL(2,3)")
    Z = center(G)
    Q, proj = quotient(G, Z)
    assert Q.order == 12
    assert proj.is_homomorphism()
    assert proj.kernel() == Z
    assert abelian_invariants(center(Q)) == ()
    H = SubSet(G, sorted(oracles.closure(oracles.table(G), [int(np.flatnonzero(G.elt_order == 3)[0])])))
    with pytest.raises(NotNormal):
        quotient(G, H)


@pytest.mark.parametrize(
    "expr,inv",
    [("C(1)", ()), ("C(6)", (6,)), ("C(2) x C(4)", (2, 4)), ("C(6) x C(6)", (6, 6)),
     ("C(2) x C(2) x C(2)", (2, 2, 2)), ("C(4) x C(6)", (2, 12)), ("C(12) x C(18)", (6, 36))],
)
def test_abelian_invariants(expr, inv):
    assert abelian_invariants(build(expr)) == inv


def test_abelian_invariants_rejects_nonabelian():
    with pytest.raises(NotAbelian):
        abelian_invariants(build("S(3)"))


@pytest.mark.parametrize(
    "expr,ab", [("S(4)", (2,)), ("A(4)", (3,)), ("Q8", (2, 2)), ("GL(2,3)", (2,)), ("Istar", ())]
)
def test_abelianization(expr, ab):
    assert abelianization(build(expr)) == ab


def test_derived_series_and_perfect_core():
    G = build("GL(2,3)")
    assert [S.size for S in derived_series(G)] == [48, 24, 8, 2, 1]
    assert perfect_core(G).size == 1
    assert perfect_core(build("Istar")).size == 120


def test_join_and_normal_closure():
    G = build("S(4)")
    m = oracles.table(G)
    t = [g for g in range(G.order) if G.elt_order[g] == 2]
    A, B = subgroup_closure(G, [t[0]]), subgroup_closure(G, [t[-1]])
    assert set(join(G, A, B).elements.tolist()) == oracles.closure(m, [t[0], t[-1]])
    N = normal_closure(G, [t[0]])
    assert is_normal(G, N) and t[0] in N


@pytest.mark.parametrize(
    "expr,count", [("C(2) x C(2)", 6), ("C(12)", 4), ("S(3)", 6), ("D(4)", 8), ("Q8", 24), ("Tstar", 24),
                   ("S(4)", 24), ("C(2) x C(4)", 8)]
)
def test_automorphism_counts(expr, count):
    G = build(expr)
    auts = automorphisms(G)
    assert len(auts) == count
    m = oracles.table(G)
    for a in auts[:8]:
        assert oracles.is_homomorphism(m, m, a.image.tolist())
        assert a.is_bijective()


def test_isomorphism_witness_and_rejection():
    A, B = build("semi(C(12), C(2), pow(5))"), build("C(4) x S(3)")
    f = is_isomorphic(A, B)
    assert isinstance(f, GroupMap) and f.is_homomorphism() and f.is_bijective()
    assert oracles.is_homomorphism(oracles.table(A), oracles.table(B), f.image.tolist())
    assert is_isomorphic(build("D(4)"), build("Q8")) is None
    assert is_isomorphic(build("Tstar"), build("SL(2,3)"))
    assert is_isomorphic(build("Tstar"), build("S(4)")) is None


def test_isomorphism_above_cap_is_indeterminate():
    G = build("SL(2,9)")
    assert is_isomorphic(G, G) is Indeterminate
    assert is_isomorphic(G, build("S(6)")) is None


def test_commutator_subgroup_small():
    assert commutator_subgroup(build("S(4)")).size == 12
    assert commutator_subgroup(build("C(6)")).size == 1


@settings(max_examples=40, deadline=None)
@given(st.integers(1, 30), st.integers(1, 30))
def test_direct_product_of_cyclics_invariants(a, b):
    from math import gcd
    G = build(f"C({a}) x C({b})")
    g, l = gcd(a, b), a * b // gcd(a, b)
    assert abelian_invariants(G) == tuple(x for x in (g, l) if x > 1)


# ---------------------------------------------------------------- stated examples and invariants

from jordangroups.suite import load_corpus  # noqa: E402

CORPUS = sorted({e.expr for e in load_corpus()})


@pytest.mark.parametrize("expr", CORPUS)
def test_corpus_tables_are_groups(expr):
    G = build(expr)
    verify_table(G, samples=10_000, seed=2)
    assert G.order % center(G).size == 0


def test_closure_examples():
    G, _, _ = build_from_concrete([Perm.identity(4)])
    assert G.order == 1
    S3 = build("S(3)")
    assert subgroup_closure(S3, []).size == 1 and subgroup_closure(S3, [0]).size == 1
    t = int(np.flatnonzero(S3.elt_order == 3)[0])
    assert subgroup_closure(S3, [t]).size == 3
    SL = build("SL(2,3)")
    fours = np.flatnonzero(SL.elt_order == 4).tolist()
    a = fours[0]
    b = next(x for x in fours if x != a and x != SL.inv[a])
    assert subgroup_closure(SL, [a, b]).size == 8


def test_center_examples():
    assert center(build("C(2) x C(6)")).size == 12
    assert center(build("Q8")).size == 2
    assert center(build("SL(2,9)")).size == 2


def test_class_examples():
    assert sorted(conjugacy_classes(build("S(3)")).sizes) == [1, 2, 3]
    assert len(conjugacy_classes(build("Tstar"))) == 7
    assert len(conjugacy_classes(build("C(10)"))) == 10


def test_quotient_examples():
    Q8 = build("Q8")
    Q, _ = quotient(Q8, Q8.whole)
    assert Q.order == 1
    Q, _ = quotient(Q8, center(Q8))
    assert abelian_invariants(Q) == (2, 2)
    G = build("ES1920")
    Q, proj = quotient(G, G.meta["extraspecial"])
    assert Q.order == 60
    from jordangroups.jordan import normal_subgroups
    assert [N.size for N in normal_subgroups(Q)] == [1, 60]
    assert proj.kernel() == G.meta["extraspecial"]


def test_derived_series_examples():
    assert [S.size for S in derived_series(build("C(6)"))] == [6, 1]
    assert perfect_core(build("SL(2,5)")).size == 120


def test_aut_examples_and_group_law():
    assert len(automorphisms(build("C(6)"))) == 2
    E = build("ES32minus")
    auts = automorphisms(E)
    assert len(auts) == 1920
    keys = {a.image.tobytes() for a in auts}
    assert np.arange(32).tobytes() in keys
    rng = random.Random(9)
    for _ in range(100):
        a, b = rng.choice(auts), rng.choice(auts)
        assert a.compose(b).image.tobytes() in keys
        assert a.inverse().image.tobytes() in keys
    with pytest.raises(CapExceeded):
        automorphisms(build("SL(2,9)"))


def test_isomorphism_examples():
    assert is_isomorphic(build("C(4)"), build("C(2) x C(2)")) is None


SMALL_CORPUS = [e for e in CORPUS if build(e).order <= 512]


@pytest.mark.parametrize("expr", SMALL_CORPUS)
def test_isomorphism_reflexive_and_symmetric(expr):
    G = build(expr)
    assert is_isomorphic(G, G)
    for other in SMALL_CORPUS:
        H = build(other)
        if H.order == G.order:
            assert bool(is_isomorphic(G, H)) == bool(is_isomorphic(H, G))


def test_invariants_of_normal_subgroup_of_wreath():
    from jordangroups.jordan import normal_abelian_profile
    G = build("swap2(Dic(12))")
    (S,) = [S for S, inv in normal_abelian_profile(G) if S.size == 18]
    assert abelian_invariants(S) == (3, 6)
