"""Ping-pong sets, sampled campaigns, exhaustive suites and certificates.

Two constructions of ping-pong sets are implemented.  The metric sets use the
exact projection onto the axes: X_g holds the vertices whose projection lies
strictly beyond g^{+-1} v.  The simplicial sets use retractions: X_g holds the
chambers that rho_g or rho_{g^-1} sends into the translated sector T_g or
T_{g^-1}.

Campaigns return a :class:`Certificate`.  Sampled campaigns cannot prove the
universally quantified statements, so their certificates say so.
"""

from __future__ import annotations

import json
import os
import time
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Optional

import numpy as np

from .building import (
    Chamber,
    Vertex,
    apartment_membership,
    canon_coords,
    chamber_eq,
    chambers_at_infinity_opposite,
    comparison_cosine,
    coords_membership,
    vertex_sqdist,
)
from .burau import SYMBOLS, NamedData, builtin
from .exactfield import RatFunc
from .kernels import DEFAULT_MODULUS, LaurentMatrix, backend_name
from .matlin import Mat, invariant_exponents
from .retractions import (
    AxisPoint,
    chamber_coords,
    project_to_vertex,
    weyl_distance,
)

__all__ = [
    "SampleSpec",
    "Certificate",
    "random_matrix",
    "random_iwahori",
    "in_X_metric",
    "in_X_simplicial",
    "run_disjointness",
    "run_pong",
    "free_word_check",
    "minset_scan",
    "intersection_suite",
    "opposition_suite",
    "push_suite",
    "angles_suite",
    "check_builtin",
    "remark_vertices",
    "SAMPLED",
    "EXHAUSTIVE",
]

SAMPLED = "sampled evidence; theorem-backed"
EXHAUSTIVE = "exhaustive at scale"

_INVERSE = {"f": "f^-1", "k": "k^-1", "f^-1": "f", "k^-1": "k"}
_OTHER = {"f": "k", "k": "f"}


# ---------------------------------------------------------------------------
# sampling


@dataclass(frozen=True)
class SampleSpec:
    seed: int
    count: int
    generator_complexity: int = 6
    max_entry_degree: int = 3

    def __post_init__(self):
        if not 0 <= self.seed < 2**64:
            raise ValueError("seed must be a 64-bit unsigned integer")
        if self.count < 1 or self.generator_complexity < 1 or self.max_entry_degree < 0:
            raise ValueError("count and complexity must be positive")

    def rng(self, stream: int, index: int) -> np.random.Generator:
        # counter mode: sample i never depends on how samples are scheduled
        return np.random.default_rng([self.seed, stream, index])

    def as_dict(self) -> dict:
        return {"seed": self.seed, "count": self.count,
                "generator_complexity": self.generator_complexity,
                "max_entry_degree": self.max_entry_degree}


def _coeff(rng, field) -> RatFunc:
    if field.char:
        return RatFunc.const(int(rng.integers(1, field.char)), field)
    return RatFunc.const(int(rng.choice([1, -1, 2, -2])), field)


def random_matrix(rng, field, complexity: int = 6, max_deg: int = 3) -> Mat:
    """Product of up to ``complexity`` elementary and monomial factors."""
    M = Mat.identity(3, field)
    for _ in range(int(rng.integers(1, complexity + 1))):
        if rng.random() < 0.75:
            i, j = (int(x) for x in rng.choice(3, size=2, replace=False))
            d = int(rng.integers(-max_deg, max_deg + 1))
            M = M @ Mat.elementary(i, j, _coeff(rng, field) * RatFunc.t(field, d), 3, field)
        else:
            perm = tuple(int(x) for x in rng.permutation(3))
            exps = tuple(int(x) for x in rng.integers(-2, 3, size=3))
            M = M @ Mat.monomial(perm, exps, field)
    return M


def random_iwahori(rng, field, complexity: int = 6, max_deg: int = 3) -> Mat:
    """A non-identity product of elementary matrices lying in I."""
    while True:
        M = Mat.identity(3, field)
        for _ in range(int(rng.integers(1, complexity + 1))):
            i, j = (int(x) for x in rng.choice(3, size=2, replace=False))
            d = int(rng.integers(1 if i > j else 0, max(max_deg, 1) + 1))
            M = M @ Mat.elementary(i, j, _coeff(rng, field) * RatFunc.pi(field, d), 3, field)
        if M != Mat.identity(3, field):
            return M


# ---------------------------------------------------------------------------
# membership


def in_X_metric(data: NamedData, gen: str, V: Vertex, hint=None) -> bool:
    return abs(data.projector(gen).project(V, hint=hint).param) > 1


def simplicial_witness(data: NamedData, gen: str, D: Chamber) -> Optional[str]:
    """The symbol g or g^-1 whose retraction sends D into T, or None."""
    for sym in (gen, _INVERSE[gen]):
        T = data.T[sym]
        if all(T.contains_coords(c) for c in data.rho(sym).chamber_vertex_coords(D)):
            return sym
    return None


def in_X_simplicial(data: NamedData, gen: str, D: Chamber) -> bool:
    return simplicial_witness(data, gen, D) is not None


# ---------------------------------------------------------------------------
# certificates


@dataclass
class Certificate:
    campaign: str
    params: dict
    char: int
    seed: int
    checks: list = field(default_factory=list)
    elapsed_ms: int = 0

    def add(self, name: str, ok: Optional[bool], witness: Optional[str] = None):
        """Record a verdict; ``ok=None`` records an informational entry."""
        status = "info" if ok is None else ("pass" if ok else "fail")
        entry = {"name": name, "status": status}
        if witness is not None:
            entry["witness"] = witness
        self.checks.append(entry)

    @property
    def summary(self) -> str:
        return "fail" if any(c["status"] == "fail" for c in self.checks) else "pass"

    @property
    def passed(self) -> bool:
        return self.summary == "pass"

    def failures(self) -> list:
        return [c for c in self.checks if c["status"] == "fail"]

    def to_dict(self, timing: bool = True) -> dict:
        return {
            "campaign": self.campaign,
            "params": self.params,
            "char": self.char,
            "seed": self.seed,
            "checks": self.checks,
            "summary": self.summary,
            "elapsed_ms": self.elapsed_ms if timing else 0,
        }

    def to_json(self, timing: bool = True) -> str:
        return json.dumps(self.to_dict(timing), indent=2) + "\n"

    def filename(self) -> str:
        return f"{self.campaign}_char{self.char}_seed{self.seed}.json"

    def write(self, directory: str, timing: bool = True) -> str:
        os.makedirs(directory, exist_ok=True)
        path = os.path.join(directory, self.filename())
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(self.to_json(timing))
        return path


def _timed(fn: Callable) -> Callable:
    def wrapper(*args, **kwargs):
        t0 = time.perf_counter()
        cert = fn(*args, **kwargs)
        cert.elapsed_ms = int(round(1000 * (time.perf_counter() - t0)))
        return cert

    wrapper.__name__ = fn.__name__
    wrapper.__doc__ = fn.__doc__
    wrapper.__wrapped__ = fn
    return wrapper


class _Tally:
    """Counts outcomes and keeps the first few failing witnesses."""

    def __init__(self, keep: int = 5):
        self.total = 0
        self.bad = []
        self.nbad = 0
        self.keep = keep

    def record(self, ok: bool, witness: Callable[[], str]):
        self.total += 1
        if not ok:
            self.nbad += 1
            if len(self.bad) < self.keep:
                self.bad.append(witness())

    def emit(self, cert: Certificate, name: str, info: bool = False):
        ok = None if info else self.nbad == 0
        w = "; ".join(self.bad) if self.bad else None
        cert.add(f"{name} [{self.total - self.nbad}/{self.total}]", ok, w)


def _data(char: int) -> NamedData:
    return builtin(char)


# ---------------------------------------------------------------------------
# the closed-ray example


def remark_vertices(data: NamedData) -> dict:
    """The closed-ray example in Sigma_{f,k}, literal and three edges from k v.

    ``literal`` is [[O b1 + pi^-2 O b2 + pi^-1 O b3]] read with the frame
    vectors of F_{f,k} in tabulated order; ``witness`` is the vertex with
    F_{f,k} coordinates (0, 1, -1), three straight edges from k v.
    """
    F = data.frames[(1, 1)]
    return {"literal": F.vertex((0, -2, -1)), "witness": F.vertex((0, 1, -1))}


# ---------------------------------------------------------------------------
# sampled campaigns

def _sample_matrix(data: NamedData, spec: SampleSpec, rng, i: int) -> Mat:
    # odd indices are moved by s so that both apartments get explored
    M = random_matrix(rng, data.field, spec.generator_complexity, spec.max_entry_degree)
    return data.s @ M if i % 2 else M


_PUSHES = (None, ("f", 3), ("f", -3), ("k", 3), ("k", -3))


def _pushed(data: NamedData, M: Mat, index: int) -> tuple:
    push = _PUSHES[index % len(_PUSHES)]
    if push is None:
        return M, "raw"
    return data.power(*push) @ M, f"{push[0]}^{push[1]}"


@_timed
def run_disjointness(mode: str, spec: SampleSpec, char: int = 0) -> Certificate:
    """Sample vertices (metric) or chambers (simplicial); none may lie in X_f and X_k."""
    if mode not in ("metric", "simplicial"):
        raise ValueError(f"unknown mode {mode!r}")
    data = _data(char)
    cert = Certificate(f"disjointness_{mode}", {"mode": mode, "spec": spec.as_dict(),
                                                "evidence": SAMPLED, "backend": "exact"},
                       char, spec.seed)
    both = _Tally()
    gate = _Tally()
    counts = {"f": 0, "k": 0}
    stream = 1 if mode == "metric" else 2
    for i in range(spec.count):
        rng = spec.rng(stream, i)
        M = _sample_matrix(data, spec, rng, i // len(_PUSHES))
        M, how = _pushed(data, M, i)
        if mode == "metric":
            V = Vertex(M)
            inf, ink = in_X_metric(data, "f", V), in_X_metric(data, "k", V)
        else:
            D = Chamber(M)
            wf, wk = simplicial_witness(data, "f", D), simplicial_witness(data, "k", D)
            inf, ink = wf is not None, wk is not None
            if inf or ink:
                E = project_to_vertex(data.v, D)
                allowed = ("f", "f^-1") if inf else ("k", "k^-1")
                ok = any(chamber_eq(E, data.G[g]) for g in allowed)
                gate.record(ok, lambda: f"sample {i} ({how}): gate at v is not G_{allowed[0]}")
        counts["f"] += inf
        counts["k"] += ink
        both.record(not (inf and ink), lambda: f"sample {i} ({how}): {M}")
    both.emit(cert, f"no sample lies in X_f and X_k ({counts['f']} in X_f, {counts['k']} in X_k)")
    if mode == "simplicial":
        gate.emit(cert, "gate at v of every member is G_g or G_g^-1")
        distinct = all(not chamber_eq(data.G[a], data.G[b])
                       for i, a in enumerate(SYMBOLS) for b in SYMBOLS[i + 1:])
        cert.add("G_f, G_f^-1, G_k, G_k^-1 are pairwise distinct", distinct)
    else:
        # the closed-ray variant is not disjoint
        x = remark_vertices(data)["witness"]
        pf = data.projector("f").project(x).param
        pk = data.projector("k").project(x).param
        cert.add("closed-ray variant: x has p_f(x) = v_f^+ and p_k(x) = v_k^+",
                 pf == 1 and pk == 1, f"x = {x.rep}; params ({pf}, {pk})")
    return cert


def _random_sector_chamber(data: NamedData, sym: str, rng, box: int = 4) -> Chamber:
    """A chamber of the apartment of T_sym lying in T_sym."""
    T = data.T[sym]
    while True:
        perm = tuple(int(x) for x in rng.permutation(3))
        shift = [int(x) for x in rng.integers(-box, box + 1, size=3)]
        shift = [a + b for a, b in zip(shift, T.tip)]
        if all(T.contains_coords(c) for c in chamber_coords(perm, shift)):
            return Chamber(T.frame.basis @ Mat.monomial(perm, shift, data.field))


def _premise_chamber(data: NamedData, letter: str, spec: SampleSpec, stream: int, i: int) -> Chamber:
    """A chamber built to lie in X_letter: a stabilizer of C_g applied to a chamber of T_g."""
    rng = spec.rng(stream, i)
    sym = letter if i % 2 == 0 else _INVERSE[letter]
    E = _random_sector_chamber(data, sym, rng)
    u = random_iwahori(rng, data.field, spec.generator_complexity, spec.max_entry_degree)
    c = data.C[sym].rep
    return Chamber(c @ u @ c.adjugate() @ E.rep)


@_timed
def run_pong(m: int, n: int, mode: str, spec: SampleSpec, char: int = 0) -> Certificate:
    """Containment checks g^{+-p} (X \\ X_g) in X_g (metric) or g^{+-p} X_h in X_g (simplicial)."""
    if mode not in ("metric", "simplicial"):
        raise ValueError(f"unknown mode {mode!r}")
    data = _data(char)
    asserting = m >= 3 and n >= 3
    cert = Certificate(f"pong_{mode}_m{m}_n{n}", {"m": m, "n": n, "mode": mode, "spec": spec.as_dict(),
                                                  "evidence": SAMPLED}, char, spec.seed)
    powers = {"f": m, "k": n}
    for letter in ("f", "k"):
        p = powers[letter]
        for sign in (1, -1):
            e = sign * p
            g = data.power(letter, e)
            tally = _Tally()
            stream = 10 + 2 * (letter == "k") + (sign < 0)
            if mode == "metric":
                proj = data.projector(letter)
                vacuous = 0
                i = 0
                while tally.total < spec.count and i < 4 * spec.count:
                    rng = spec.rng(stream, i)
                    V = Vertex(_sample_matrix(data, spec, rng, i))
                    i += 1
                    x = proj.project(V).param
                    if abs(x) > 1:
                        vacuous += 1
                        continue
                    y = proj.project(V.act(g), hint=x + e).param
                    tally.record(abs(y) > 1, lambda: f"{V.rep} -> param {y}")
                tally.emit(cert, f"{letter}^{e} maps vertices outside X_{letter} into X_{letter}",
                           info=not asserting)
                cert.add(f"{letter}^{e}: {vacuous} sampled vertices already in X_{letter} skipped", None)
            else:
                other = _OTHER[letter]
                fig = _Tally()
                for i in range(spec.count):
                    D = _premise_chamber(data, other, spec, stream, i)
                    if not in_X_simplicial(data, other, D):
                        tally.record(False, lambda: f"premise chamber {i} not in X_{other}: {D.rep}")
                        continue
                    tally.record(in_X_simplicial(data, letter, D.act(g)),
                                 lambda: f"{D.rep} -> {letter}^{e} D not in X_{letter}")
                    if letter == "f" and sign > 0:
                        _figure_identity(data, D, m, fig)
                tally.emit(cert, f"{letter}^{e} maps X_{other} into X_{letter}", info=not asserting)
                if letter == "f" and sign > 0:
                    fig.emit(cert, f"delta(f^-{m} C_f, rho_k(D)) = delta(f^-{m} C_f, D) when rho_k(D) in T_k",
                             info=not asserting)
    return cert


def _figure_identity(data: NamedData, D: Chamber, m: int, tally: _Tally):
    rho = data.rho("k")
    coords = rho.chamber_vertex_coords(D)
    if not all(data.T["k"].contains_coords(c) for c in coords):
        return
    A = data.C["f"].act(data.power("f", -m))
    R = rho.chamber(D)
    lhs, rhs = weyl_distance(A, R), weyl_distance(A, D)
    tally.record(lhs == rhs, lambda: f"{D.rep}: {lhs} vs {rhs}")


# ---------------------------------------------------------------------------
# free words


@_timed
def free_word_check(m: int, n: int, maxlen: int, char: int = 0) -> Certificate:
    """Every reduced word of length <= maxlen in f^m, k^n and inverses is nontrivial."""
    data = _data(char)
    asserting = m >= 3 and n >= 3
    q = char if char else DEFAULT_MODULUS
    cert = Certificate(f"free_m{m}_n{n}_len{maxlen}",
                       {"m": m, "n": n, "maxlen": maxlen, "evidence": EXHAUSTIVE,
                        "modulus": q, "backend": backend_name()}, char, 0)
    letters = [("f", m), ("f", -m), ("k", n), ("k", -n)]
    dense = [LaurentMatrix.from_mat(data.power(a, e), q) for a, e in letters]
    inverse_of = [1, 0, 3, 2]
    per_len = [0] * (maxlen + 1)
    bad = [[] for _ in range(maxlen + 1)]
    exact_checks = 0

    def word_text(idx):
        return " ".join(f"{letters[j][0]}^{letters[j][1]}" for j in idx)

    stack = [([j], dense[j]) for j in reversed(range(4))]
    while stack:
        idx, M = stack.pop()
        L = len(idx)
        per_len[L] += 1
        if M.is_identity():
            exact_checks += 1
            if char or _exact_identity(data, [letters[j] for j in idx]):
                bad[L].append(word_text(idx))
        if L < maxlen:
            last = idx[-1]
            for j in reversed(range(4)):
                if j != inverse_of[last]:
                    stack.append((idx + [j], M @ dense[j]))
    for L in range(1, maxlen + 1):
        expected = 4 * 3 ** (L - 1)
        ok = per_len[L] == expected and not bad[L]
        w = "; ".join(bad[L][:5]) if bad[L] else None
        cert.add(f"length {L}: {per_len[L]} reduced words, {len(bad[L])} equal to the identity",
                 ok if asserting else None, w)
    cert.add(f"{sum(per_len)} words in total; {exact_checks} needed exact re-evaluation", None)
    return cert


def _exact_identity(data: NamedData, blocks) -> bool:
    M = Mat.identity(3, data.field)
    for a, e in blocks:
        M = M @ data.power(a, e)
    return M == Mat.identity(3, data.field)


# ---------------------------------------------------------------------------
# deterministic suites


def _box(radius: int):
    """Canonical coordinate triples with every entry in [-radius, radius]."""
    out = []
    r = radius
    for a in range(-r, r + 1):
        for b in range(-r, r + 1):
            for c in range(-r, r + 1):
                if 0 <= a + b + c <= 2:
                    out.append((a, b, c))
    return out


@_timed
def intersection_suite(radius: int = 8, char: int = 0) -> Certificate:
    """Only v lies in both Sigma_f and Sigma_k, over a box of Sigma_k vertices."""
    data = _data(char)
    cert = Certificate("verify_intersection", {"radius": radius, "evidence": EXHAUSTIVE}, char, 0)
    Fk = data.frame("k")
    Ff = data.frame("f")
    shared = []
    pts = _box(radius)
    for c in pts:
        V = Fk.vertex(c)
        if apartment_membership(Ff, V) is not None:
            shared.append(c)
    cert.add(f"{len(pts)} vertices of Sigma_k scanned", len(pts) >= 200 or radius < 8)
    ok = shared == [(0, 0, 0)] and apartment_membership(Ff, Fk.vertex((0, 0, 0))) == (0, 0, 0)
    cert.add("exactly one vertex also lies in Sigma_f, and it is v", ok,
             None if ok else f"shared coordinates {shared}")
    return cert


@_timed
def opposition_suite(char: int = 0) -> Certificate:
    data = _data(char)
    cert = Certificate("verify_opposition", {"evidence": EXHAUSTIVE}, char, 0)
    for i, a in enumerate(SYMBOLS):
        for b in SYMBOLS[i + 1:]:
            cert.add(f"xi_{a} and xi_{b} are opposite",
                     chambers_at_infinity_opposite(data.xi[a], data.xi[b]))
    return cert


@_timed
def push_suite(nmax: int = 15, char: int = 0) -> Certificate:
    """g^n v lies in Sigma_{g,h} exactly for n >= 1, for all four apartments."""
    data = _data(char)
    cert = Certificate("verify_push", {"nmax": nmax, "evidence": EXHAUSTIVE}, char, 0)
    for pair, F in data.frames.items():
        name = "Sigma_{" + ("f" if pair[0] > 0 else "f^-1") + "," + ("k" if pair[1] > 0 else "k^-1") + "}"
        for letter, sign in (("f", pair[0]), ("k", pair[1])):
            tally = _Tally()
            for n in range(-nmax, nmax + 1):
                V = Vertex(data.power(letter, sign * n)) if n else data.v
                c = apartment_membership(F, V)
                ok = (c is not None) == (n >= 1)
                if ok and letter == "f" and pair == (1, 1) and n >= 1:
                    ok = c == canon_coords((-n, 0, n))
                tally.record(ok, lambda: f"n = {n}: coordinates {c}")
            g = letter if sign > 0 else letter + "^-1"
            tally.emit(cert, f"{g}^n v in {name} iff n >= 1, n in [-{nmax}, {nmax}]")
    return cert


@_timed
def angles_suite(char: int = 0) -> Certificate:
    data = _data(char)
    cert = Certificate("verify_angles", {"evidence": EXHAUSTIVE}, char, 0)
    v = data.v
    pts = {"f": data.v_plus["f"], "f^-1": data.v_minus["f"],
           "k": data.v_plus["k"], "k^-1": data.v_minus["k"]}
    cases = [("f", "k", Fraction(-1, 2)), ("f", "k^-1", Fraction(-1, 2)),
             ("f^-1", "k", Fraction(-1, 2)), ("f^-1", "k^-1", Fraction(-1, 2)),
             ("f", "f^-1", Fraction(-1))]
    for a, b, want in cases:
        got = comparison_cosine(v, pts[a], pts[b])
        d2 = vertex_sqdist(pts[a], pts[b])
        cert.add(f"cos angle({a} v, v, {b} v) = {got} (d^2 = {d2})", got == want,
                 None if got == want else f"expected {want}")
    return cert


@_timed
def minset_scan(radius: int = 4, char: int = 0, seed: int = 0, perturbations: int = 2) -> Certificate:
    """d^2(V, f V) = 2 exactly on Sigma_f and > 2 off it, near v."""
    data = _data(char)
    cert = Certificate("minset", {"radius": radius, "perturbations": perturbations,
                                  "evidence": EXHAUSTIVE}, char, seed)
    spec = SampleSpec(seed, 1, 4, 3)
    f = data.f
    on, off = _Tally(), _Tally()
    pts = _box(radius)
    for idx, c in enumerate(pts):
        base = Mat.pi_diag(c, data.field)
        reps = [base]
        rng = spec.rng(30, idx)
        for _ in range(perturbations):
            reps.append(random_iwahori(rng, data.field, 4, 3) @ base)
        for rep in reps:
            d2 = _displacement(rep, f)
            member = coords_membership(data.frame("f"), rep) is not None
            if member:
                on.record(d2 == 2, lambda: f"{rep}: d^2 = {d2}")
            else:
                off.record(d2 > 2, lambda: f"{rep}: d^2 = {d2}")
    on.emit(cert, "d^2(V, f V) = 2 on Sigma_f vertices")
    off.emit(cert, "d^2(V, f V) > 2 off Sigma_f")
    return cert


def _displacement(rep: Mat, g: Mat) -> Fraction:
    e = invariant_exponents(rep.adjugate() @ g @ rep)
    s = sum(e)
    return Fraction(3 * sum(x * x for x in e) - s * s, 3)


@_timed
def check_builtin(char: int = 0, constants_text: Optional[str] = None) -> Certificate:
    """Re-run every construction check of the named constants."""
    from .burau import load_constants

    data = builtin(char) if constants_text is None else load_constants(constants_text, char)
    cert = Certificate("check", {"source": "builtin" if constants_text is None else "file",
                                 "evidence": EXHAUSTIVE}, char, 0)
    for entry, message, ok in data.checks:
        cert.add(f"{entry}: {message}", ok)
    return cert
