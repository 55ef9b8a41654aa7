import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

import oracles
from jordangroups.constructors import (
    Certificate, CentralProduct, CyclicExt, Direct, Named, Semidirect, Swap2, action_array, build,
    central_product, check_certificate, clear_cache, cyclic, cyclic_extension, direct, expected_order,
    index_two_subgroup, outer_candidates, parse_expr, projections, render, semidirect,
)
from jordangroups.errors import (
    CertificateFailed, InconsistentExtension, NotAbelian, NotAHomomorphism, NotCentral, NotIsomorphicCenters,
    ParseError,
)
from jordangroups.kernel import abelian_invariants, center, is_isomorphic, is_normal, SubSet
from jordangroups.suite import load_corpus

# ---------------------------------------------------------------- parser

leaf = st.one_of(
    st.builds(lambda n: Named("C", (n,)), st.integers(1, 12)),
    st.builds(lambda n: Named("D", (n,)), st.integers(1, 12)),
    st.builds(lambda n: Named("Dic", (4 * n,)), st.integers(2, 6)),
    st.sampled_from([Named("Q8"), Named("Tstar"), Named("Ostar"), Named("SL", (2, 3)), Named("ES1920")]),
)
exprs = st.recursive(
    leaf,
    lambda sub: st.one_of(
        st.builds(Direct, sub, sub),
        st.builds(Swap2, sub),
        st.builds(Semidirect, sub, sub, st.sampled_from(["invert", "swap", "outer2", "pow(5)"])),
        st.builds(CentralProduct, sub, sub),
        st.builds(CyclicExt, sub, st.sampled_from(["outer2", "id"]), st.integers(1, 6),
                  st.sampled_from(["id", "zcenter"])),
    ),
    max_leaves=6,
)


@given(exprs)
def test_render_parse_roundtrip(e):
    assert parse_expr(render(e)) == e
    assert parse_expr(render(e).replace(" ", "")) == e


def test_parse_examples():
    assert parse_expr("TstarxTstar") == Direct(Named("Tstar"), Named("Tstar"))
    assert parse_expr("C(2) x C(3) x C(4)") == Direct(Direct(Named("C", (2,)), Named("C", (3,))), Named("C", (4,)))
    assert parse_expr("Dic(12)") == Named("Dic", (12,))
    assert parse_expr("SL25dot2") == Named("SL25dot2")
    assert parse_expr(" semi( C(12) ,C(2), pow(5) ) ") == Semidirect(Named("C", (12,)), Named("C", (2,)), "pow(5)")


@pytest.mark.parametrize("text", ["", "C", "C()", "C(2", "C(2) x", "Foo(2)", "SL(2)", "C(2,3)", "semi(C(3), C(2), bogus)",
                                  "C(2) C(3)", "cext(C(4), outer2, two, id)"])
def test_parse_errors(text):
    with pytest.raises(ParseError):
        parse_expr(text)


def test_parse_error_position():
    with pytest.raises(ParseError) as exc:
        parse_expr("C(2) x Foo")
    assert exc.value.position == 7


# ---------------------------------------------------------------- named groups


@pytest.mark.parametrize(
    "expr,order,census",
    [
        ("Q8", 8, {1: 1, 2: 1, 4: 6}),
        ("Tstar", 24, {1: 1, 2: 1, 3: 8, 4: 6, 6: 8}),
        ("Ostar", 48, {1: 1, 2: 1, 3: 8, 4: 18, 6: 8, 8: 12}),
        ("Istar", 120, {1: 1, 2: 1, 3: 20, 4: 30, 5: 24, 6: 20, 10: 24}),
        ("ES32minus", 32, {1: 1, 2: 11, 4: 20}),
        ("D(5)", 10, {1: 1, 2: 5, 5: 4}),
        ("Dic(20)", 20, {1: 1, 2: 1, 4: 10, 5: 4, 10: 4}),
        ("S(4)", 24, {1: 1, 2: 9, 3: 8, 4: 6}),
        ("A(5)", 60, {1: 1, 2: 15, 3: 20, 5: 24}),
    ],
)
def test_named_orders_and_census(expr, order, census):
    G = build(expr)
    assert G.order == order
    assert G.order_census() == census


def test_binary_groups_match_classical():
    assert is_isomorphic(build("Tstar"), build("SL(2,3)"))
    assert is_isomorphic(build("Istar"), build("SL(2,5)"))
    assert is_isomorphic(build("Ostar"), build("GL(2,3)")) is None


@pytest.mark.parametrize("bad", ["Dic(10)", "Dic(4)", "D(0)", "SL(3,3)", "GL(2,7)", "C(0)"])
def test_named_parameter_errors(bad):
    with pytest.raises((ValueError, CertificateFailed)):
        build(bad)


def test_memo_returns_identical_object():
    assert build("GL(2,3)") is build("GL(2,3)")
    assert build("C(2) x C(3)") is build(parse_expr("C(2)xC(3)"))


# ---------------------------------------------------------------- combinators


def test_direct_projections_are_homomorphisms():
    G, H = build("S(3)"), build("C(4)")
    D = direct(G, H)
    p1, p2 = projections(D)
    assert p1.is_homomorphism() and p2.is_homomorphism()
    assert p1.kernel().size == 4 and p2.kernel().size == 6


@pytest.mark.parametrize("m", [3, 4, 5, 8, 9])
def test_semidirect_invert_is_dihedral(m):
    G = build(f"semi(C({m}), C(2), invert)")
    assert is_isomorphic(G, build(f"D({m})"))
    N = SubSet(G, range(m))
    assert is_normal(G, N)


def test_semidirect_rejects_bad_action():
    N, H = cyclic(5), cyclic(3)
    with pytest.raises(NotAHomomorphism):
        action_array(N, H, np.array([0, 4, 3, 2, 1]))  # inversion has order 2, not dividing 3
    with pytest.raises(NotAHomomorphism):
        semidirect(N, cyclic(2), np.array([[0, 1, 2, 3, 4], [0, 2, 2, 3, 4]]))


def test_pow_requires_abelian_and_bijective():
    with pytest.raises(NotAbelian):
        build("semi(S(3), C(2), pow(2))")
    with pytest.raises(NotAHomomorphism):
        build("semi(C(6), C(2), pow(2))")


def test_swap_requires_square():
    with pytest.raises(NotAHomomorphism):
        build("semi(C(2) x C(3), C(2), swap)")
    with pytest.raises(NotAHomomorphism):
        build("semi(C(6), C(2), swap)")


def test_swap2_is_wreath_product():
    G = build("swap2(C(2))")
    assert is_isomorphic(G, build("D(4)"))
    assert build("swap2(S(3))").order == 72


def test_noncyclic_acting_group_uses_index_two_subgroup():
    H = build("C(2) x C(2)")
    K = index_two_subgroup(H)
    assert K.size == 2
    G = build("semi(C(3), C(2) x C(2), invert)")
    assert is_isomorphic(G, build("D(6)"))


def test_outer2_without_candidates():
    with pytest.raises(CertificateFailed):
        build("semi(S(3), C(2), outer2)")


def test_outer_candidates_tstar():
    N = build("Tstar")
    cands = outer_candidates(N, 4)
    assert cands
    G = build("semi(Tstar, C(4), outer2)")
    assert G.order == 96


def test_cyclic_extension_checks():
    C = cyclic(4)
    inv = np.array([0, 3, 2, 1])
    with pytest.raises(InconsistentExtension):
        cyclic_extension(C, inv, 3, 0)  # inversion cubed is not trivial
    with pytest.raises(InconsistentExtension):
        cyclic_extension(C, inv, 2, 1)  # inversion moves 1
    with pytest.raises(InconsistentExtension):
        cyclic_extension(build("S(3)"), np.arange(6), 2, 1)  # 1 is not central
    Q = cyclic_extension(C, inv, 2, 2)
    assert is_isomorphic(Q, build("Q8"))


def test_cext_identity_gives_direct_or_cyclic():
    assert is_isomorphic(build("cext(C(3), id, 2, id)"), build("C(6)"))
    assert is_isomorphic(build("cext(C(2), id, 2, zcenter)"), build("C(4)"))


def test_central_product_extraspecial():
    G = build("cprod(Q8, D(4))")
    assert G.order == 32
    assert len(G.involutions()) == 11
    assert is_isomorphic(G, build("ES32minus"))
    plus = build("cprod(D(4), D(4))")
    assert len(plus.involutions()) == 19


def test_central_product_errors():
    with pytest.raises(NotIsomorphicCenters):
        central_product(build("Q8"), build("C(3)"))
    with pytest.raises(NotCentral):
        central_product(build("Q8"), build("D(4)"), za=2, zb=1)


def test_sl25_extensions_differ():
    a, b = build("SL25dot2"), build("SL25colon2")
    assert a.order == b.order == 240
    assert len(a.involutions()) == 1
    assert len(b.involutions()) > 1
    assert is_isomorphic(a, b) is not True


# ---------------------------------------------------------------- certificates


def test_certificate_failure_reports_check():
    G = build("S(3)")
    with pytest.raises(CertificateFailed) as exc:
        check_certificate(G, Certificate(order=6, center=(2,)))
    assert exc.value.check == "center"
    check_certificate(G, Certificate(order=6, center=(), abelianization=(2,), iso_ref="D(3)"))
    with pytest.raises(CertificateFailed):
        check_certificate(G, Certificate(iso_ref="C(6)"))


def test_certificate_selects_outer_candidate():
    cert = Certificate(order=72, iso_ref="semi(C(6) x C(6), C(2), swap)")
    G = build("semi(Dic(12), C(6), outer2)", cert)
    assert G.meta["selection"]["passing"] >= 1


@pytest.mark.parametrize("entry", [e for e in load_corpus() if e.order <= 1200], ids=lambda e: e.label)
def test_expected_order_matches_corpus(entry):
    assert expected_order(parse_expr(entry.expr)) == entry.order
    assert build(entry.expr).order == entry.order


def test_es1920_structure():
    G = build("ES1920")
    assert G.order == 1920
    E = G.meta["extraspecial"]
    assert E.size == 32 and is_normal(G, E)
    assert abelian_invariants(center(G)) == (2,)


# ---------------------------------------------------------------- stated examples and invariants

from jordangroups.algebra import F5, Mat  # noqa: E402
from jordangroups.jordan import max_normal_abelian  # noqa: E402
from jordangroups.kernel import build_from_concrete  # noqa: E402


def test_named_order_formulas():
    for n in (1, 5, 9):
        assert build(f"C({n})").order == n and build(f"D({n})").order == 2 * n
    for n in (3, 4, 5):
        assert build(f"S({n})").order == [1, 1, 2, 6, 24, 120][n]
        assert build(f"A({n})").order == [1, 1, 2, 6, 24, 120][n] // 2


def test_dicyclic_maximal_normal_abelian_is_cyclic():
    G = build("Dic(12)")
    A = max_normal_abelian(G)
    assert A.size == 6 and abelian_invariants(A) == (6,)


def test_direct_examples():
    assert abelian_invariants(build("C(2) x C(4)")) == (2, 4)
    assert build("Tstar x Tstar").order == 576
    assert build("SL(2,3) x S(3)").order == 144


def test_semidirect_s3():
    assert is_isomorphic(build("semi(C(3), C(2), invert)"), build("S(3)"))


def test_swap2_conjugates_coordinates():
    inner = build("S(3)")
    G = build("swap2(S(3))")
    n = inner.order
    t = n * n  # the swap involution sits first in the second coset
    for a in range(n):
        for b in range(n):
            x = a * n + b
            assert G.mul[G.mul[t, x], G.inv[t]] == b * n + a


def test_cyclic_extension_examples():
    assert is_isomorphic(build("cext(C(3), outer2, 2, id)"), build("S(3)"))
    O = build("cext(Tstar, outer2, 2, zcenter)")
    assert O.order == 48 and len(O.involutions()) == 1
    assert is_isomorphic(O, build("Ostar"))
    assert is_isomorphic(build("cext(Tstar, outer2, 2, id)"), build("GL(2,3)"))


@pytest.mark.parametrize(
    "expr,n,m", [("cext(Tstar, outer2, 2, id)", 24, 2), ("SL25colon2", 120, 2), ("cext(C(5), id, 3, id)", 5, 3)]
)
def test_split_extension_has_complement(expr, n, m):
    G = build(expr)
    t = n  # the element (identity, t^1)
    assert G.elt_order[t] == m
    powers = {0}
    x = t
    while x != 0:
        powers.add(int(x))
        x = G.mul[x, t]
    assert len(powers) == m and powers & set(range(n)) == {0}


def test_determinant_pm1_subgroup_is_not_sl25_colon2():
    # over F5 the scalar 2I has determinant -1, so this subgroup has center C4
    gens = [Mat(F5, 2, (1, 1, 0, 1)), Mat(F5, 2, (0, 4, 1, 0)), Mat.diag(F5, (1, 4))]
    H, _, _ = build_from_concrete(gens)
    assert H.order == 240
    assert abelian_invariants(center(H)) == (4,)
    A, B = build("C(4)"), build("SL(2,5)")
    zb = int(center(B).elements[1])
    assert is_isomorphic(H, central_product(A, B, za=2, zb=zb))
    assert is_isomorphic(build("SL25colon2"), H) is None
    assert is_isomorphic(build("SL25dot2"), H) is None


def test_central_product_degenerate_and_order_formula():
    assert build("cprod(C(2), C(2))").order == 2
    for a, b in [("Q8", "D(4)"), ("Tstar", "Dic(12)"), ("Dic(12)", "Q8")]:
        A, B = build(a), build(b)
        assert build(f"cprod({a}, {b})").order == A.order * B.order // center(A).size


def test_build_is_deterministic_across_cache_clears():
    first = build("semi(Tstar, C(4), outer2)").mul.copy()
    es = build("ES1920").mul.copy()
    clear_cache()
    assert np.array_equal(build("semi(Tstar, C(4), outer2)").mul, first)
    assert np.array_equal(build("ES1920").mul, es)


def test_parse_spec_examples():
    e = parse_expr("Tstar x Tstar")
    assert e == Direct(Named("Tstar"), Named("Tstar")) and build(e).order == 576
    assert build("swap2(Dic(12))").order == 288
    assert build("C(7)").order == 7


def test_es1920_certificate_checks_listed():
    from jordangroups.constructors import es1920_certificate

    names = [n for n, _ in es1920_certificate().checks]
    assert "quotient acts irreducibly on E/Z" in names
    check_certificate(build("ES1920"), es1920_certificate())
