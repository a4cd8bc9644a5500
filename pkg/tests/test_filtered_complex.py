import math

import pytest
from hypothesis import given, settings, strategies as st

from polyih.errors import EmptyRegularPart, NonClosedFiltration, UnknownStratum, ValidationError
from polyih.filtered_complex import (
    build_complex,
    cone_complex,
    disjoint_union,
    dual_perversity,
    faces,
    parse_perversity,
    preset,
    product_with_interval,
    Perversity,
)


def strata_summary(X):
    return sorted((st.dim, st.regular, len(st.simplexes)) for st in X.strata)


def test_unfiltered_simplex_has_one_regular_stratum():
    X = build_complex([["a", "b", "c"]], None, 2)
    assert len(X.simplexes) == 7
    assert [st.regular for st in X.strata] == [True]
    assert X.singular_strata() == []
    assert X.is_unfiltered()


def test_cone_over_two_points():
    X = build_complex([["v", "a"], ["v", "b"]], {"v": 0}, 1, mode="vertex")
    assert strata_summary(X) == [(0, False, 1), (1, True, 2), (1, True, 2)]
    (sing,) = X.singular_strata()
    assert sing.id == "S0[v]" and sing.codim == 1


def test_non_closed_filtration_is_rejected():
    with pytest.raises(NonClosedFiltration):
        build_complex([["a", "b"]], {("a", "b"): 0, ("a",): 1}, 1)


def test_empty_regular_part_is_rejected():
    with pytest.raises(EmptyRegularPart):
        build_complex([["a", "b"]], {("a", "b"): 0}, 1)


def test_formal_dim_below_geometric_dim_is_rejected():
    with pytest.raises(ValidationError):
        build_complex([["a", "b", "c"]], None, 1)


def test_filtration_value_out_of_range():
    with pytest.raises(ValidationError):
        build_complex([["a", "b"]], {"a": 5}, 1, mode="vertex")


def test_pinched_torus_strata(corpus):
    X = corpus["pinched_torus"].complex()
    assert [st.id for st in X.singular_strata()] == ["S0[v]"]
    assert sum(st.regular for st in X.strata) == 1


def test_disjoint_singular_vertices_give_two_strata():
    X = build_complex([["a", "b"], ["c", "d"]], {"a": 0, "c": 0}, 1, mode="vertex")
    assert len(X.singular_strata()) == 2


def test_suspension_of_two_point_pairs(corpus):
    X = corpus["suspension_points"].complex()
    assert len(X.singular_strata()) == 2
    assert sum(st.regular for st in X.strata) == 4


def test_cone_over_point_and_circle():
    P = build_complex([["a"]], None, 0)
    cP = cone_complex(P)
    assert cP.formal_dim == 1 and cP.filtration[("v",)] == 0 and cP.dim == 1
    C = build_complex([["a", "b"], ["b", "c"], ["a", "c"]], None, 1)
    cC = cone_complex(C)
    assert [st.id for st in cC.singular_strata()] == ["S0[v]"]
    assert cC.dim == 2
    ccP = cone_complex(cP)
    apex = [st for st in ccP.singular_strata() if st.dim == 0]
    assert len(apex) == 1 and apex[0].codim == 2


def test_cone_apex_name_is_fresh():
    X = build_complex([["v", "w"]], None, 1)
    assert "v1" in cone_complex(X).vertices


def test_cone_strata_correspond_to_base_strata(corpus):
    X = corpus["pinched_torus"].complex()
    cX = cone_complex(X)
    non_apex = [st for st in cX.strata if st.dim > 0]
    assert len(non_apex) == len(X.strata)
    assert sorted(st.codim for st in non_apex) == sorted(st.codim for st in X.strata)


def test_product_with_interval_shifts_filtration():
    X = build_complex([["v", "a"], ["v", "b"]], {"v": 0}, 1, mode="vertex")
    P, proj = product_with_interval(X)
    assert P.formal_dim == 2
    assert len(P.of_dim(2)) == 4
    assert {st.dim for st in P.singular_strata()} == {1}


def test_disjoint_union_keeps_both_parts():
    X = build_complex([["a", "b"]], None, 1)
    U = disjoint_union(X, X)
    assert len(U.strata) == 2


def test_presets_and_dual():
    X = cone_complex(cone_complex(build_complex([["a", "b"], ["b", "c"], ["a", "c"]], None, 1)))
    codims = sorted(st.codim for st in X.singular_strata())
    assert codims == [2, 3]
    t = preset(X, "t")
    assert sorted(t(st) for st in X.singular_strata()) == [0, 1]
    zero = preset(X, "0")
    assert dual_perversity(t, X).values == zero.values
    d0 = dual_perversity(zero, X)
    assert {st.codim: d0(st) for st in X.singular_strata()} == {2: 0, 3: 1}


def test_infinite_values_dualize_with_saturation():
    X = cone_complex(cone_complex(build_complex([["a", "b"], ["b", "c"], ["a", "c"]], None, 1)))
    apex = next(st for st in X.singular_strata() if st.codim == 3)
    p = parse_perversity(X, f"S[{next(iter(apex.simplexes))[0]}]=inf")
    assert dual_perversity(p, X)(apex) == -math.inf
    q = parse_perversity(X, "c3:-inf")
    assert dual_perversity(q, X)(apex) == math.inf


def test_regular_strata_have_value_zero(corpus):
    X = corpus["pinched_torus"].complex()
    p = parse_perversity(X, "k:5")
    assert all(p(st) == 0 for st in X.strata if st.regular)


def test_gm_condition_is_checked():
    X = cone_complex(build_complex([["a", "b"], ["b", "c"], ["a", "c"]], None, 1))
    assert preset(X, "m").tag == "gm"
    with pytest.raises(ValidationError):
        from polyih.filtered_complex import codimensional
        codimensional(X, {2: 1}, tag="gm")


def test_perversity_parse_errors(corpus):
    X = corpus["pinched_torus"].complex()
    with pytest.raises(UnknownStratum):
        parse_perversity(X, "S[nope]=1")
    with pytest.raises(UnknownStratum):
        parse_perversity(X, "S[a0]=1")
    with pytest.raises(ValidationError):
        parse_perversity(X, "c2:banana")
    with pytest.raises(ValidationError):
        parse_perversity(X, "whatever")


@st.composite
def random_complexes(draw):
    n = draw(st.integers(3, 6))
    verts = [f"x{i}" for i in range(n)]
    tops = draw(st.lists(st.lists(st.sampled_from(verts), min_size=1, max_size=3, unique=True), min_size=1, max_size=6))
    dim = max(len(t) for t in tops) - 1
    formal = dim + draw(st.integers(0, 1))
    low = draw(st.lists(st.sampled_from(verts), max_size=2, unique=True))
    used = {v for t in tops for v in t}
    values = {v: draw(st.integers(0, formal - 1)) for v in low if v in used} if formal > 0 else {}
    return tops, values, formal


@settings(max_examples=60, deadline=None)
@given(random_complexes())
def test_strata_partition_and_closed_skeleta(data):
    tops, values, formal = data
    try:
        X = build_complex(tops, values, formal, mode="vertex")
    except EmptyRegularPart:
        return
    members = [s for S in X.strata for s in S.simplexes]
    assert sorted(members) == sorted(X.simplexes)
    for S in X.strata:
        assert all(X.filtration[s] == S.dim for s in S.simplexes)
        assert S.regular == (S.dim == formal)
    for i in range(formal + 1):
        Xi = {s for s in X.simplexes if X.filtration[s] <= i}
        assert all(f in Xi for s in Xi for f in faces(s))


@settings(max_examples=40, deadline=None)
@given(st.lists(st.integers(-3, 3), min_size=2, max_size=2))
def test_dual_is_an_involution(vals):
    X = cone_complex(cone_complex(build_complex([["a", "b"], ["b", "c"], ["a", "c"]], None, 1)))
    sing = X.singular_strata()
    p = Perversity({**{st.id: 0 for st in X.strata}, **{st.id: v for st, v in zip(sing, vals)}})
    assert dual_perversity(dual_perversity(p, X), X).values == p.values
