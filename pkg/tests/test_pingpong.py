from __future__ import annotations

import json

import pytest

from burau_pong.building import Vertex, chamber_eq
from burau_pong.exactfield import RatFunc
from burau_pong.matlin import Mat
from burau_pong.pingpong import (
    EXHAUSTIVE,
    SAMPLED,
    Certificate,
    SampleSpec,
    _premise_chamber,
    free_word_check,
    in_X_metric,
    in_X_simplicial,
    intersection_suite,
    minset_scan,
    random_matrix,
    remark_vertices,
    run_disjointness,
    run_pong,
)
from burau_pong.retractions import project_to_vertex

T = RatFunc.t()


def test_metric_membership_examples(data):
    assert not in_X_metric(data, "f", data.v)
    assert not in_X_metric(data, "k", data.v)
    assert not in_X_metric(data, "f", data.v_plus["f"])
    assert in_X_metric(data, "f", data.v.act(data.f**2))
    assert in_X_metric(data, "f", data.v_plus["k"].act(data.f**3))


def test_simplicial_membership_examples(data):
    assert in_X_simplicial(data, "f", data.C["f"])
    assert in_X_simplicial(data, "f", data.C["f^-1"])
    assert not in_X_simplicial(data, "f", data.G["f"])
    assert not in_X_simplicial(data, "k", data.G["k"])


def test_premise_chambers_land_in_X(data):
    spec = SampleSpec(5, 20)
    for i in range(20):
        D = _premise_chamber(data, "k", spec, 99, i)
        assert in_X_simplicial(data, "k", D)
        pushed = D.act(data.f**3)
        assert in_X_simplicial(data, "f", pushed)
        # all minimal galleries from pushed chambers to f v pass through C_f
        assert chamber_eq(project_to_vertex(data.v_plus["f"], pushed), data.C["f"])


def test_closed_ray_vertices(data):
    xs = remark_vertices(data)
    pf, pk = data.projector("f"), data.projector("k")
    # the literal reading is k v itself
    assert xs["literal"] == data.v_plus["k"]
    assert (pf.project(xs["literal"]).param, pk.project(xs["literal"]).param) == (0, 1)
    w = xs["witness"]
    assert (pf.project(w).param, pk.project(w).param) == (1, 1)
    assert not in_X_metric(data, "f", w) and not in_X_metric(data, "k", w)


def test_sample_spec_is_deterministic(data):
    spec = SampleSpec(17, 10)
    a = [random_matrix(spec.rng(1, i), data.field) for i in range(10)]
    b = [random_matrix(spec.rng(1, i), data.field) for i in range(10)]
    assert a == b
    assert a != [random_matrix(SampleSpec(18, 10).rng(1, i), data.field) for i in range(10)]
    with pytest.raises(ValueError):
        SampleSpec(-1, 3)
    with pytest.raises(ValueError):
        SampleSpec(1, 0)


@pytest.mark.parametrize("mode", ["metric", "simplicial"])
def test_disjointness_campaign(mode):
    cert = run_disjointness(mode, SampleSpec(1, 60))
    assert cert.passed, cert.failures()
    assert cert.params["evidence"] == SAMPLED


@pytest.mark.parametrize("mode", ["metric", "simplicial"])
@pytest.mark.parametrize("m, n", [(3, 3), (3, 5)])
def test_pong_campaign(mode, m, n):
    cert = run_pong(m, n, mode, SampleSpec(1, 15))
    assert cert.passed, cert.failures()
    assert not any(c["status"] == "info" and "maps" in c["name"] for c in cert.checks)


def test_metric_and_simplicial_agree():
    a = run_pong(4, 3, "metric", SampleSpec(2, 10))
    b = run_pong(4, 3, "simplicial", SampleSpec(2, 10))
    assert a.summary == b.summary == "pass"


def test_small_powers_only_report():
    cert = run_pong(1, 1, "simplicial", SampleSpec(1, 5))
    assert all(c["status"] != "fail" for c in cert.checks)
    cert = free_word_check(1, 1, 4)
    assert {c["status"] for c in cert.checks} == {"info"}
    assert cert.passed


def test_free_words_small():
    cert = free_word_check(3, 3, 5)
    assert cert.passed
    assert "484 words" in cert.checks[-1]["name"]
    assert cert.params["evidence"] == EXHAUSTIVE


@pytest.mark.parametrize("char", [2, 3])
def test_free_words_mod_p(char):
    assert free_word_check(3, 3, 5, char).passed


def test_deterministic_suites():
    assert intersection_suite(3).passed
    assert minset_scan(2, perturbations=1).passed


def test_certificate_json_is_byte_identical(tmp_path):
    one = run_disjointness("simplicial", SampleSpec(3, 20)).to_json(timing=False)
    two = run_disjointness("simplicial", SampleSpec(3, 20)).to_json(timing=False)
    assert one == two
    body = json.loads(one)
    assert list(body) == ["campaign", "params", "char", "seed", "checks", "summary", "elapsed_ms"]
    assert body["elapsed_ms"] == 0


def test_certificate_write_and_status(tmp_path):
    cert = Certificate("demo", {"x": 1}, 0, 5)
    cert.add("good", True)
    cert.add("note", None)
    assert cert.summary == "pass"
    cert.add("bad", False, "witness text")
    assert cert.summary == "fail" and len(cert.failures()) == 1
    path = cert.write(str(tmp_path), timing=False)
    assert path.endswith("demo_char0_seed5.json")
    body = json.loads(open(path).read())
    assert body["checks"][2] == {"name": "bad", "status": "fail", "witness": "witness text"}
    assert "witness" not in body["checks"][0]


def test_minset_example(data):
    from burau_pong.pingpong import _displacement

    assert _displacement(Mat.identity(), data.f) == 2
    assert _displacement((data.f**5), data.f) == 2
    assert _displacement(Mat.elementary(1, 0, T), data.f) > 2
    assert Vertex(Mat.elementary(1, 0, T)) != data.v
