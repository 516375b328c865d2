from __future__ import annotations

from fractions import Fraction
from math import ceil, floor

import numpy as np
import pytest

from burau_pong.building import (
    Chamber,
    Vertex,
    apartment_membership,
    chamber_eq,
    vertex_sqdist,
)
from burau_pong.exactfield import RatFunc
from burau_pong.matlin import AffineWeylElt, Mat, all_permutations, simple_reflections
from burau_pong.retractions import (
    PreconditionError,
    Retraction,
    common_apartment,
    metric_project_to_axis,
    project_to_vertex,
    retract_chamber,
    retract_vertex,
    weyl_distance,
)

from conftest import FIELDS, sample_matrices

T = RatFunc.t()


def _pairs(count, seed, field=FIELDS[0]):
    ms = sample_matrices(2 * count, field, seed=seed)
    return [(Chamber(ms[2 * i]), Chamber(ms[2 * i + 1])) for i in range(count)]


def test_weyl_distance_examples(data):
    C = data.G["f"]
    assert weyl_distance(C, C) == AffineWeylElt.identity()
    w = weyl_distance(data.G["f"], data.C["f"])
    assert w == AffineWeylElt.translation((-1, 0, 1)) and w.length() == 4
    for s in simple_reflections():
        assert weyl_distance(C, Chamber(C.rep @ s.matrix())) == s


def test_weyl_distance_inverse():
    for C, D in _pairs(60, 41):
        assert weyl_distance(D, C) == weyl_distance(C, D).inverse()


def test_common_apartment_examples(data):
    for C, D in [(data.G["f"], data.G["f"]), (data.G["f"], data.C["f"]), (data.G["f"], data.G["k"])]:
        F = common_apartment(C, D)
        for X in (C, D):
            assert all(apartment_membership(F, V) is not None for V in X.vertices())


def test_retraction_fixes_its_apartment(data):
    F, C = data.frame("f"), data.G["f"]
    rho = Retraction(F, C)
    assert chamber_eq(rho.chamber(data.C["f"]), data.C["f"])
    assert chamber_eq(rho.chamber(C), C)
    for c in [(0, 0, 0), (3, -1, 2), (-2, 5, 0)]:
        assert rho.vertex(F.vertex(c)) == apartment_membership(F, F.vertex(c))


def test_retraction_precondition(data):
    with pytest.raises(PreconditionError):
        Retraction(data.frame("f"), data.G["k"])


@pytest.mark.parametrize("char", [0, 3])
def test_retraction_contracts(char):
    field = FIELDS[char]
    ws = sample_matrices(120, field, seed=43)
    for idx, (C, D) in enumerate(_pairs(120, 42, field)):
        F = common_apartment(C, D) if idx % 2 else common_apartment(C, Chamber(ws[idx]))
        rho = Retraction(F, C)
        img = rho.chamber(D)
        assert weyl_distance(C, img) == weyl_distance(C, D)
        # vertexwise and chamberwise retractions agree
        assert [rho.vertex(V) for V in D.vertices()] == [apartment_membership(F, V) for V in img.vertices()]
        V, W = D.vertices()[idx % 3], Vertex(ws[idx])
        rv, rw = F.vertex(rho.vertex(V)), F.vertex(rho.vertex(W))
        for X in C.vertices():
            assert vertex_sqdist(rv, X) == vertex_sqdist(V, X)
        assert vertex_sqdist(rv, rw) <= vertex_sqdist(V, W)


def test_retract_helpers_match_class(data):
    C, D = _pairs(1, 44)[0]
    F = common_apartment(C, D)
    assert chamber_eq(retract_chamber(F, C, D), Retraction(F, C).chamber(D))
    V = D.vertices()[0]
    assert retract_vertex(F, C, V) == Retraction(F, C).vertex(V)


def test_gate_examples(data):
    D = data.C["f"]
    for V in D.vertices():
        assert chamber_eq(project_to_vertex(V, D), D)
    assert chamber_eq(project_to_vertex(data.v_plus["f"], data.C["f"].act(data.f**2)), data.C["f"])


def test_gate_is_length_minimal():
    for C, D in _pairs(60, 45):
        V = C.vertices()[0]
        gate = project_to_vertex(V, D)
        assert V in gate.vertices()
        F = common_apartment(Chamber(V.rep), D)
        c = apartment_membership(F, V)
        best = weyl_distance(gate, D).length()
        for perm in all_permutations(3):
            E = Chamber(F.basis @ Mat.pi_diag(c, F.basis.field) @ Mat.monomial(perm, (0, 0, 0), F.basis.field))
            if not chamber_eq(E, gate):
                assert weyl_distance(E, D).length() > best


def test_gate_is_independent_of_apartment():
    # the same gate from a different starting representative of V
    for C, D in _pairs(40, 46):
        V = C.vertices()[1]
        V2 = Vertex(V.rep @ Mat.elementary(0, 2, 1 + T**-1))
        assert V2 == V
        assert chamber_eq(project_to_vertex(V, D), project_to_vertex(V2, D))


def test_axis_projection_examples(data):
    for g in ("f", "k"):
        P = data.projector(g)
        gm = data.matrix(g)
        for n in range(-10, 11):
            assert P.project(data.v.act(gm**n)).param == n
    assert data.projector("f").project(data.v_plus["k"].act(data.f**3)).param == 3
    assert data.projector("f").project(data.v_plus["k"]).param == 0
    assert data.projector("f").project(Vertex(Mat.elementary(1, 0, T))).param == Fraction(-1, 2)


def test_metric_project_entry_point(data):
    V = data.v_plus["k"].act(data.f**3)
    assert metric_project_to_axis("f", V).param == 3
    assert metric_project_to_axis("k", V, s=data.s, method="scan") == data.projector("k").project(V)


def test_walk_equals_scan_and_nearest_vertex(data):
    for idx, g in enumerate(sample_matrices(80, seed=47)):
        V = Vertex(g)
        for gen in ("f", "k"):
            P = data.projector(gen)
            p = P.project(V).param
            assert P.project(V, method="scan").param == p
            assert P.project(V, hint=p + 3).param == p
            # the nearest axis vertex sits next to the projection
            gm = data.matrix(gen)
            dists = {n: vertex_sqdist(V, data.v.act(gm**n)) for n in range(floor(p) - 3, ceil(p) + 4)}
            best = min(dists.values())
            assert {n for n, d in dists.items() if d == best} <= {floor(p), ceil(p)}


def test_projection_equivariance(data):
    rng = np.random.default_rng(48)
    for g in sample_matrices(200, seed=48):
        V = Vertex(g)
        for gen in ("f", "k"):
            P = data.projector(gen)
            e = int(rng.choice([-1, 1]))
            moved = V.act(data.power(gen, e))
            assert P.project(moved).param == P.project(V).param + e
