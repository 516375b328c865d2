from __future__ import annotations

import itertools
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from burau_pong.building import (
    Chamber,
    ChamberAtInfinity,
    Vertex,
    apartment_membership,
    canon_coords,
    chamber_eq,
    chambers_at_infinity_opposite,
    comparison_cosine,
    coord_sqdist,
    sector_membership,
    vertex_eq,
    vertex_sqdist,
    vertex_type,
    vertices_adjacent,
)
from burau_pong.exactfield import RatFunc
from burau_pong.matlin import Mat

from conftest import sample_matrices

T = RatFunc.t()
PI = RatFunc.pi()
BOX4 = list(itertools.product(range(-4, 5), repeat=3))
coords = st.tuples(*[st.integers(min_value=-5, max_value=5)] * 3)


def test_vertex_equality_examples(data):
    v = data.v
    assert vertex_eq(v.act(data.s), v)
    M = data.b[(1, 1)]
    assert vertex_eq(Vertex(M), Vertex(M.scale(PI)))
    assert not vertex_eq(v.act(data.f), v)


def test_vertex_type_examples(data):
    assert vertex_type(data.v) == 0
    assert vertex_type(Vertex.standard((0, 0, 1))) == 1
    assert vertex_type(data.v.act(data.f)) == 0


def test_sqdist_examples(data):
    v, fv, kv = data.v, data.v_plus["f"], data.v_plus["k"]
    assert vertex_sqdist(v, v) == 0
    assert vertex_sqdist(v, fv) == 2
    assert vertex_sqdist(fv, kv) == 6
    assert vertex_sqdist(fv, data.v_minus["f"]) == 8


def test_adjacency_examples(data):
    v = data.v
    assert vertices_adjacent(v, Vertex.standard((0, 0, 1)))
    assert vertices_adjacent(v, Vertex.standard((0, 1, 1)))
    assert not vertices_adjacent(v, data.v_plus["f"])


def test_apartment_membership_examples(data):
    Ff, Fk = data.frame("f"), data.frame("k")
    assert apartment_membership(Ff, data.v) == (0, 0, 0)
    assert apartment_membership(Fk, data.v) == (0, 0, 0)
    F = data.frames[(1, 1)]
    for n in range(-6, 7):
        c = apartment_membership(F, data.v.act(data.f**n))
        if n > 0:
            assert c == canon_coords((-n, 0, n))
        else:
            assert c is None


def test_sector_membership_examples(data):
    S, T_ = data.S["f"], data.T["f"]
    for n in range(0, 6):
        assert sector_membership(S, data.v.act(data.f**n))
    assert sector_membership(S, data.v)
    assert not sector_membership(T_, data.v)
    assert sector_membership(T_, data.v_plus["f"])


def test_chamber_equality_examples(data):
    C = data.G["f"]
    u = Mat([[1, 2 + PI, 3], [PI, 1, PI], [PI**2, PI, 1]])
    assert chamber_eq(C, Chamber(C.rep @ u))
    assert not chamber_eq(C, Chamber(C.rep @ Mat.elementary(1, 0, 1)))
    assert chamber_eq(C, Chamber(C.rep.scale(PI)))
    assert not chamber_eq(data.G["f"], data.C["f"])


def test_opposition_examples(data):
    xi = data.xi
    e = ChamberAtInfinity.from_basis(Mat.identity())
    se = ChamberAtInfinity.from_basis(data.s)
    assert not chambers_at_infinity_opposite(e, e)
    assert chambers_at_infinity_opposite(e, se)
    for a, b in itertools.combinations(sorted(xi), 2):
        assert chambers_at_infinity_opposite(xi[a], xi[b]), (a, b)


def test_comparison_cosine_examples(data):
    v, fv, kv = data.v, data.v_plus["f"], data.v_plus["k"]
    assert comparison_cosine(v, fv, kv) == Fraction(-1, 2)
    assert comparison_cosine(v, fv, fv) == 1
    assert comparison_cosine(v, fv, data.v_minus["f"]) == -1
    with pytest.raises(ValueError):
        comparison_cosine(v, fv, Vertex.standard((0, 0, 1)))


# properties -----------------------------------------------------------------


def test_vertex_eq_is_an_equivalence(data):
    reps = sample_matrices(60, seed=31)
    units = sample_matrices(120, seed=32, iwahori=True)
    rng = np.random.default_rng(33)
    for idx, g in enumerate(reps):
        V = Vertex(g)
        # same class through a GL3(O) change of basis and a scalar
        W = Vertex(g @ units[2 * idx].scale(PI ** int(rng.integers(-3, 4))))
        X = Vertex(g @ units[2 * idx + 1])
        assert vertex_eq(V, V)
        assert vertex_eq(V, W) and vertex_eq(W, V)
        assert vertex_eq(W, X) and vertex_eq(V, X)
        assert V.key() == W.key() == X.key()
        other = Vertex(reps[(idx + 1) % len(reps)])
        assert vertex_eq(V, other) == vertex_eq(other, V)
        assert vertex_eq(V, other) == (V.key() == other.key())


def test_frame_membership_bijective_on_box(data):
    for F in (data.frame("f"), data.frames[(1, -1)]):
        seen = {}
        for c in BOX4:
            got = apartment_membership(F, F.vertex(c))
            assert got == canon_coords(c)
            seen.setdefault(got, set()).add(canon_coords(c))
        assert all(len(v) == 1 for v in seen.values())


def test_sqdist_matches_flat_metric_in_box(data):
    # every class in the box against a few anchors, in a frame through both axes
    F = data.frames[(1, 1)]
    pts = sorted({canon_coords(c) for c in BOX4})
    for anchor in [(0, 0, 0), (1, -2, 1), (0, 1, 1), (-3, 0, 4)]:
        A = F.vertex(anchor)
        for c in pts:
            assert vertex_sqdist(A, F.vertex(c)) == coord_sqdist(anchor, c)


@given(coords, coords)
def test_coord_sqdist_against_monomial_exponents(p, q):
    d = [a - b for a, b in zip(p, q)]
    m = Fraction(sum(d), 3)
    assert coord_sqdist(p, q) == sum((x - m) ** 2 for x in d)
    assert vertex_sqdist(Vertex.standard(p), Vertex.standard(q)) == coord_sqdist(p, q)


def test_chamber_vertices_adjacent_with_all_types():
    for g in sample_matrices(100, seed=34):
        vs = Chamber(g).vertices()
        assert sorted(vertex_type(x) for x in vs) == [0, 1, 2]
        for a, b in itertools.combinations(vs, 2):
            assert vertices_adjacent(a, b)


def test_sigma_k_is_s_sigma_f(data):
    Ff, Fk = data.frame("f"), data.frame("k")
    s_adj = data.s.adjugate()
    for g in sample_matrices(80, seed=35) + [Ff.vertex(c).rep for c in BOX4[::7]]:
        V = Vertex(g)
        assert apartment_membership(Fk, V) == apartment_membership(Ff, V.act(s_adj))
    for c in BOX4[::5]:
        W = Ff.vertex(c).act(data.s)
        assert apartment_membership(Fk, W) == canon_coords(c)


def test_vertex_hash_dedupes(data):
    F = data.frame("f")
    reps = [F.vertex(c) for c in [(0, 0, 0), (1, 1, 1), (-2, -2, -2), (1, 0, 0)]]
    assert len(set(reps)) == 2
