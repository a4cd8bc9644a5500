import math
import random
from fractions import Fraction as F

import pytest
from hypothesis import given, settings, strategies as st

from polyih.allowability import (
    Allowability,
    Realization,
    build_envelope,
    chain_boundary,
    envelopes,
    is_allowable,
    is_intersection_chain,
    preimage_dim_polyhedral,
    preimage_dim_skeleton,
)
from polyih.errors import NotInRealization
from polyih.exact_geometry import GeoSimplex, general_position
from polyih.filtered_complex import build_complex, parse_perversity
from polyih.homology_engine import Pipeline


def P(*xs):
    return tuple(F(x) for x in xs)


def motivating(corpus):
    doc = corpus["motivating_example"]
    real = Realization(doc.complex())
    ids = tuple(real.add_point(doc.working[0][n]) for n in "ABC")
    return real, ids


def test_barycentre_preimage_separates_the_notions(corpus):
    real, ids = motivating(corpus)
    sigma = real.simplex(ids)
    assert preimage_dim_polyhedral(sigma, "S0[v]") == 0
    assert preimage_dim_skeleton(sigma, "S0[v]") == 2
    t = parse_perversity(real.X, "t")
    assert is_allowable(sigma, t, "poly")
    assert not is_allowable(sigma, t, "gm")


def test_missing_the_stratum_gives_minus_infinity(corpus):
    real, ids = motivating(corpus)
    edge = real.simplex(ids[:2])
    assert preimage_dim_polyhedral(edge, "S0[v]") == -math.inf
    assert build_envelope(edge, "S0[v]").pieces == []
    assert is_allowable(edge, parse_perversity(real.X, "t"), "gm")


def test_segment_through_singular_point_needs_empty_preimage(corpus):
    real, ids = motivating(corpus)
    v = real.vertex_ids["v"]
    a = real.vertex_ids["a"]
    far = real.add_point(P(F(3, 2), F(3, 2)))
    seg = (a, far)
    # the segment a -> (3/2, 3/2) passes through v = (1, 1)
    assert preimage_dim_polyhedral(real.simplex(seg), "S0[v]") == 0
    assert not is_allowable(real.simplex(seg), parse_perversity(real.X, "t"), "poly")
    assert is_allowable(real.simplex((v, a)), parse_perversity(real.X, "k:+inf"), "poly")


def square_with_singular_diagonal():
    X = build_complex(
        [["a", "b", "c"], ["a", "c", "d"]],
        {("a", "c"): 1},
        2,
        coords={"a": P(0, 0), "b": P(2, 0), "c": P(2, 2), "d": P(0, 2)},
    )
    return Realization(X)


def test_transversal_crossing_of_a_singular_edge():
    real = square_with_singular_diagonal()
    sid = real.X.stratum_of(("a", "c")).id
    ids = tuple(real.add_point(p) for p in (P(F(1, 2), 0), P(2, 1), P(1, 2)))
    sigma = real.simplex(ids)
    assert preimage_dim_polyhedral(sigma, sid) == 1
    assert preimage_dim_skeleton(sigma, sid) == 2


def test_skeleton_dimension_of_vertex_and_edge_preimages():
    real = square_with_singular_diagonal()
    sid = real.X.stratum_of(("a", "c")).id
    a, b = real.vertex_ids["a"], real.vertex_ids["b"]
    m = real.add_point(P(1, 1))
    assert preimage_dim_skeleton(real.simplex((a, b, real.add_point(P(2, 1)))), sid) == 0
    tri = real.simplex((a, m, real.add_point(P(2, 1))))
    assert preimage_dim_skeleton(tri, sid) == 1
    assert preimage_dim_polyhedral(tri, sid) == 1


def test_points_outside_the_realization_are_rejected():
    real = square_with_singular_diagonal()
    with pytest.raises(NotInRealization):
        real.add_point(P(3, 3))


def two_tetrahedra():
    X = build_complex(
        [["a", "b", "c", "d"], ["a", "b", "c", "e"]],
        {("a", "b", "c"): 2},
        3,
        coords={"a": P(0, 0, 0), "b": P(4, 0, 0), "c": P(0, 4, 0), "d": P(1, 1, 4), "e": P(1, 1, -4)},
    )
    return Realization(X)


def test_quadrilateral_piece_is_triangulated():
    real = two_tetrahedra()
    sid = real.X.stratum_of(("a", "b", "c")).id
    pts = [P(1, F(1, 2), 1), P(F(1, 2), 1, 1), P(1, F(1, 2), -1), P(F(1, 4), F(1, 4), -1)]
    sigma = real.simplex(tuple(real.add_point(p) for p in pts))
    env = build_envelope(sigma, sid)
    assert env.max_dim == 2 == preimage_dim_polyhedral(sigma, sid)
    assert len(env.pieces) == 2
    assert [e.stratum_id for e in envelopes(sigma)] == [sid]


def test_point_envelope(corpus):
    real, ids = motivating(corpus)
    env = build_envelope(real.simplex(ids), "S0[v]")
    assert len(env.pieces) == 1 and env.max_dim == 0


def test_intersection_chains(corpus):
    real, ids = motivating(corpus)
    allow = Allowability(real, parse_perversity(real.X, "t"))
    assert is_intersection_chain({}, allow)
    eta = {ids: 1}
    assert is_intersection_chain(chain_boundary(eta), allow)
    # the triangle is allowable, its boundary edges too, in the polyhedral notion
    assert is_intersection_chain(eta, allow, "poly")
    assert not is_intersection_chain(eta, allow, "gm")


def test_non_cancelling_bad_face_breaks_chain(corpus):
    real, _ = motivating(corpus)
    v, a, b = (real.vertex_ids[x] for x in "vab")
    allow = Allowability(real, parse_perversity(real.X, "t"))
    tri = (v, a, b)
    assert allow.allowable(tri)
    assert not allow.allowable((v, a))
    assert not is_intersection_chain({tri: 1}, allow)


@pytest.mark.parametrize("name", ["pinched_torus", "cone_two_circles", "motivating_example", "cone_simplex2"])
def test_gm_allowable_implies_poly_allowable(corpus, name):
    doc = corpus[name]
    pipe = Pipeline(Realization(doc.complex()), "pseudo", 0, doc.working)
    level = pipe.level(1)
    for spec in ("0", "m", "t", "k:1"):
        allow = Allowability(pipe.real, parse_perversity(pipe.real.X, spec))
        for s in level.all():
            if allow.allowable(s, "gm"):
                assert allow.allowable(s, "poly")


def test_single_cell_and_general_pieces_agree(corpus):
    rng = random.Random(5)
    real = Realization(corpus["cone_two_circles"].complex())
    tops = [s for s in real.X.simplexes if len(s) == 3]
    for _ in range(40):
        cell = rng.choice(tops)
        pts = []
        for _ in range(3):
            w = [F(rng.randint(0, 3)) for _ in cell]
            if not sum(w):
                w[0] = F(1)
            pts.append(real.combine([real.vertex_ids[v] for v in cell], [x / sum(w) for x in w]))
        if len(set(pts)) < 3:
            continue
        ids = tuple(pts)
        fast = {(pc.cell, pc.dim, pc.skeleton_dim) for pc in real._pieces_single(ids, real.common_cell(ids)) if pc.open_met}
        slow = {(pc.cell, pc.dim, pc.skeleton_dim) for pc in real._pieces_general(ids) if pc.open_met}
        assert fast == slow


@settings(max_examples=40, deadline=None)
@given(st.lists(st.integers(0, 6), min_size=9, max_size=9), st.sampled_from([2, 3]))
def test_restriction_in_general_position_stays_allowable(ws, k):
    """A sub-simplex in general position with every envelope piece of an
    allowable simplex is allowable."""
    real = square_with_singular_diagonal()
    p = parse_perversity(real.X, "k:0")
    sigma_ids = tuple(real.add_point(x) for x in (P(F(1, 2), 0), P(2, 1), P(1, 2)))
    allow = Allowability(real, p)
    assert allow.allowable(sigma_ids)
    sigma = real.simplex(sigma_ids)
    pieces = [T for env in envelopes(sigma) for T in env.pieces]
    domain = GeoSimplex(tuple(tuple(F(int(i == j)) for j in range(3)) for i in range(3)))
    rows = [ws[0:3], ws[3:6], ws[6:9]][:k]
    if any(sum(r) == 0 for r in rows):
        return
    sub = [tuple(F(x, sum(r)) for x in r) for r in rows]
    nabla = GeoSimplex(tuple(sub))
    if not nabla.is_nondegenerate():
        return
    if not all(general_position(T, nabla, domain) for T in pieces):
        return
    ids = tuple(real.combine(sigma_ids, w) for w in sub)
    assert allow.allowable(ids)
