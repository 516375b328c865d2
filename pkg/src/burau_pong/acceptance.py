"""End-to-end acceptance checks, one function per criterion.

Each check returns an :class:`Outcome`; :func:`run` times it.  Criteria 1-11
take the field characteristic so that criterion 12 can rerun them over F_p.
"""

from __future__ import annotations

import time
from dataclasses import dataclass
from typing import Callable

from .building import Chamber, Vertex, apartment_membership, vertex_sqdist
from .burau import builtin
from .matlin import (
    Mat,
    invariant_exponents,
    iwahori_cartan_factorize,
    iwahori_factorize,
    is_in_GL3O,
    is_in_iwahori,
    weyl_length,
    weyl_length_bfs,
)
from .pingpong import (
    SampleSpec,
    angles_suite,
    check_builtin,
    free_word_check,
    intersection_suite,
    minset_scan,
    opposition_suite,
    push_suite,
    random_matrix,
    remark_vertices,
    run_disjointness,
    run_pong,
)
from .retractions import Retraction, common_apartment, weyl_distance

__all__ = ["Outcome", "CRITERIA", "run", "run_all"]


@dataclass
class Outcome:
    ok: bool
    detail: str
    seconds: float = 0.0


def _cert_outcome(*certs) -> Outcome:
    bad = [f"{c.campaign}: {x['name']}" for c in certs for x in c.failures()]
    n = sum(len(c.checks) for c in certs)
    return Outcome(not bad, "; ".join(bad) if bad else f"{n} checks passed")


def c01_constants(char: int) -> Outcome:
    return _cert_outcome(check_builtin(char))


def c02_intersection(char: int) -> Outcome:
    return _cert_outcome(intersection_suite(8, char))


def c03_opposition(char: int) -> Outcome:
    return _cert_outcome(opposition_suite(char))


def c04_push(char: int) -> Outcome:
    return _cert_outcome(push_suite(15, char))


def c05_angles(char: int) -> Outcome:
    return _cert_outcome(angles_suite(char))


def c06_minset(char: int) -> Outcome:
    return _cert_outcome(minset_scan(4, char))


def c07_remark(char: int) -> Outcome:
    """The closed-ray example, read literally from its printed formula."""
    data = builtin(char)
    xs = remark_vertices(data)
    x = xs["literal"]
    pf = data.projector("f").project(x).param
    pk = data.projector("k").project(x).param
    w = xs["witness"]
    wf = data.projector("f").project(w).param
    wk = data.projector("k").project(w).param
    is_kv = vertex_sqdist(x, data.v_plus["k"]) == 0
    detail = (f"literal x: params ({pf}, {pk}){' and x = k v' if is_kv else ''}; "
              f"vertex (0,1,-1) of Sigma_(f,k): params ({wf}, {wk})")
    return Outcome(pf == 1 and pk == 1, detail)


def c07_remark_witness(char: int) -> Outcome:
    """The closed-ray phenomenon itself, on the vertex three edges from k v."""
    data = builtin(char)
    w = remark_vertices(data)["witness"]
    wf = data.projector("f").project(w).param
    wk = data.projector("k").project(w).param
    d2 = vertex_sqdist(w, data.v_plus["k"])
    ok = wf == 1 and wk == 1 and d2 == 6
    return Outcome(ok, f"params ({wf}, {wk}); d^2 to k v = {d2}")


def c08_factorization(char: int, count: int = 1000) -> Outcome:
    field = builtin(char).field
    spec = SampleSpec(8, count)
    bad = 0
    for i in range(count):
        g = random_matrix(spec.rng(80, i), field)
        fac = iwahori_factorize(g)
        if not (is_in_iwahori(fac.i1) and is_in_iwahori(fac.i2) and fac.i1 @ fac.w_hat @ fac.i2 == g):
            bad += 1
        i1, lam, m = iwahori_cartan_factorize(g)
        if not (is_in_iwahori(i1) and is_in_GL3O(m) and i1 @ Mat.pi_diag(lam, field) @ m == g):
            bad += 1
        if tuple(sorted(lam)) != invariant_exponents(g):
            bad += 1
    table = weyl_length_bfs(6)
    length_bad = sum(weyl_length(w) != d for w, d in table.items())
    ok = bad == 0 and length_bad == 0
    return Outcome(ok, f"{count} matrices, {bad} reconstruction failures; "
                       f"{len(table)} Weyl elements of length <= 6, {length_bad} length mismatches")


def c09_retractions(char: int, count: int = 500) -> Outcome:
    field = builtin(char).field
    spec = SampleSpec(9, count)
    bad = {"delta": 0, "base": 0, "coherence": 0, "lipschitz": 0}
    for i in range(count):
        rng = spec.rng(90, i)
        C = Chamber(random_matrix(rng, field))
        D = Chamber(random_matrix(rng, field))
        W = Vertex(random_matrix(rng, field))
        F = common_apartment(C, D)
        rho = Retraction(F, C)
        img = rho.chamber(D)
        bad["delta"] += weyl_distance(C, img) != weyl_distance(C, D)
        vc = [rho.vertex(x) for x in D.vertices()]
        bad["coherence"] += vc != [apartment_membership(F, x) for x in img.vertices()]
        V = D.vertices()[0]
        rv = F.vertex(vc[0])
        bad["base"] += any(vertex_sqdist(rv, X) != vertex_sqdist(V, X) for X in C.vertices())
        rw = F.vertex(rho.vertex(W))
        bad["lipschitz"] += vertex_sqdist(rv, rw) > vertex_sqdist(V, W)
    ok = not any(bad.values())
    return Outcome(ok, f"{count} samples; violations {bad}")


def c10_pingpong(char: int, count: int = 500, per_direction: int = 200) -> Outcome:
    spec = SampleSpec(1, count)
    pong = SampleSpec(1, per_direction)
    certs = [run_disjointness("metric", spec, char), run_disjointness("simplicial", spec, char)]
    for m, n in ((3, 3), (4, 3)):
        for mode in ("metric", "simplicial"):
            certs.append(run_pong(m, n, mode, pong, char))
    out = _cert_outcome(*certs)
    fig = [x["name"] for c in certs for x in c.checks if x["name"].startswith("delta(")]
    out.detail += "; " + "; ".join(fig)
    return out


def c11_free(char: int) -> Outcome:
    a = free_word_check(3, 3, 8, char)
    b = free_word_check(4, 3, 6, char)
    out = _cert_outcome(a, b)
    total = a.checks[-1]["name"].split()[0]
    out.detail = f"{total} words for (3,3); " + out.detail
    return out


CRITERIA: dict = {
    1: ("constants and apartment frames", 1.0, c01_constants),
    2: ("intersection of Sigma_f and Sigma_k", 5.0, c02_intersection),
    3: ("opposition of the four ends", 1.0, c03_opposition),
    4: ("g^n v in Sigma_(g,h) iff n >= 1", 2.0, c04_push),
    5: ("comparison angles at v", 1.0, c05_angles),
    6: ("min-set scan", 10.0, c06_minset),
    7: ("closed-ray example", 1.0, c07_remark),
    8: ("factorization soundness", 30.0, c08_factorization),
    9: ("retraction contracts", 60.0, c09_retractions),
    10: ("ping-pong campaigns", 120.0, c10_pingpong),
    11: ("free words", 60.0, c11_free),
}


def run(fn: Callable[[int], Outcome], char: int = 0) -> Outcome:
    t0 = time.perf_counter()
    out = fn(char)
    out.seconds = time.perf_counter() - t0
    return out


def warm_up() -> None:
    """Compile the numba kernel and parse constants outside any timed region."""
    from .kernels import LaurentMatrix

    for char in (0, 2, 3):
        data = builtin(char)
        q = char or 1_000_003
        a = LaurentMatrix.from_mat(data.f, q)
        a @ a


def run_all(chars=(0,)) -> dict:
    warm_up()
    results = {}
    for char in chars:
        for n, (_, _, fn) in CRITERIA.items():
            results[(n, char)] = run(fn, char)
    return results
