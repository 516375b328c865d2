"""Weyl distances, common apartments, retractions and projections.

Retractions are computed by moving the base chamber to standard position with
a monomial change of frame and reading the affine Weyl part of an Iwahori
factorization.  The metric projection onto an axis is exact: inside a chamber
the retraction based there is an isometry, so the squared distance to axis
points is an explicit quadratic with rational coefficients.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import floor, isqrt
from typing import Sequence

from .building import (
    STANDARD_MU,
    Chamber,
    Frame,
    Vertex,
    apartment_membership,
    canon_coords,
    chamber_eq,
    coord_sqdist,
    coords_membership,
)
from .matlin import (
    AffineWeylElt,
    Mat,
    all_permutations,
    cartan_exponents,
    invariant_exponents,
    iwahori_factorize,
    weyl_class,
)

__all__ = [
    "PreconditionError",
    "AxisPoint",
    "Retraction",
    "weyl_distance",
    "common_apartment",
    "retract_chamber",
    "retract_vertex",
    "project_to_vertex",
    "AxisProjector",
    "metric_project_to_axis",
    "chamber_coords",
]


class PreconditionError(ValueError):
    """An operation was called outside its documented domain."""


def weyl_distance(C: Chamber, D: Chamber) -> AffineWeylElt:
    return weyl_class(C.rep.adjugate() @ D.rep)


def common_apartment(C: Chamber, D: Chamber) -> Frame:
    """A frame whose apartment contains both chambers, certified by membership."""
    fac = iwahori_factorize(C.rep.adjugate() @ D.rep)
    F = Frame(C.rep @ fac.i1)
    for X in (C, D):
        for V in X.vertices():
            if apartment_membership(F, V) is None:
                raise ArithmeticError("common apartment failed its membership postcondition")
    return F


def _perm_act(perm: Sequence[int], mu: Sequence[int]) -> list:
    out = [0] * len(mu)
    for j, x in enumerate(mu):
        out[perm[j]] = x
    return out


def chamber_coords(perm: Sequence[int], shift: Sequence[int]) -> list:
    """Frame coordinates of the three vertices of B diag(pi^shift) P_perm I."""
    return [canon_coords([u + x for u, x in zip(shift, _perm_act(perm, mu))]) for mu in STANDARD_MU]


def _standard_position(F: Frame, C: Chamber):
    """(perm, shift) with C = B diag(pi^shift) P_perm I for the frame basis B."""
    cs = []
    for V in C.vertices():
        c = apartment_membership(F, V)
        if c is None:
            raise PreconditionError("base chamber does not lie in the apartment")
        cs.append(c)

    def unit_index(a, b):
        d = [y - x for x, y in zip(a, b)]
        for r in range(3):
            e = [d[i] - (1 if i == r else 0) for i in range(3)]
            if e[0] == e[1] == e[2]:
                return r
        raise PreconditionError("chamber vertices are not a chamber of the apartment")

    r2 = unit_index(cs[0], cs[1])
    r1 = unit_index(cs[1], cs[2])
    r0 = ({0, 1, 2} - {r1, r2}).pop()
    perm = (r0, r1, r2)
    shift = tuple(cs[0])
    return perm, shift


class Retraction:
    """The retraction onto the apartment of ``F`` based at ``C``.

    Precomputes the standard-position data once so repeated calls only pay
    for one elimination each.
    """

    def __init__(self, F: Frame, C: Chamber):
        self.frame = F
        self.base = C
        perm, shift = _standard_position(F, C)
        self.perm = perm
        self.shift = shift
        self.h = F.basis @ Mat.monomial(perm, shift, F.basis.field)
        if not chamber_eq(Chamber(self.h), C):
            raise ArithmeticError("standard position does not reproduce the base chamber")
        self.h_adj = self.h.adjugate()

    def weyl(self, D: Chamber) -> AffineWeylElt:
        """delta(C, D)."""
        return weyl_class(self.h_adj @ D.rep)

    def _image(self, w: AffineWeylElt):
        # h w_hat = B diag(pi^shift) P diag(pi^w.shift) P_w.perm
        perm = tuple(self.perm[w.perm[j]] for j in range(3))
        moved = _perm_act(self.perm, w.shift)
        shift = tuple(a + b for a, b in zip(self.shift, moved))
        return perm, shift

    def chamber(self, D: Chamber) -> Chamber:
        perm, shift = self._image(self.weyl(D))
        return Chamber(self.frame.basis @ Mat.monomial(perm, shift, self.frame.basis.field))

    def chamber_vertex_coords(self, D: Chamber) -> list:
        """Frame coordinates of the three vertices of rho(D)."""
        return chamber_coords(*self._image(self.weyl(D)))

    def vertex_coords_of(self, rep: Mat) -> tuple:
        lam = cartan_exponents(self.h_adj @ rep)
        return canon_coords([u + x for u, x in zip(self.shift, _perm_act(self.perm, lam))])

    def vertex(self, V: Vertex) -> tuple:
        return self.vertex_coords_of(V.rep)


def retract_chamber(F: Frame, C: Chamber, D: Chamber) -> Chamber:
    return Retraction(F, C).chamber(D)


def retract_vertex(F: Frame, C: Chamber, V: Vertex) -> tuple:
    return Retraction(F, C).vertex(V)


def project_to_vertex(V: Vertex, D: Chamber) -> Chamber:
    """The gate of D at V: the chamber through V nearest to D in gallery distance."""
    E0 = Chamber(V.rep)
    F = common_apartment(E0, D)
    c = apartment_membership(F, V)
    best = None
    lengths = []
    for perm in all_permutations(3):
        # the six chambers through the vertex B diag(pi^c) in the apartment
        E = Chamber(F.basis @ Mat.pi_diag(c, F.basis.field) @ Mat.monomial(perm, (0, 0, 0), F.basis.field))
        ln = weyl_distance(E, D).length()
        lengths.append(ln)
        if best is None or ln < best[0]:
            best = (ln, E)
    if lengths.count(best[0]) != 1:
        raise ArithmeticError("gate is not unique")
    return best[1]


# ---------------------------------------------------------------------------
# metric projection onto the axis of f (k is handled by conjugating with s)


@dataclass(frozen=True)
class AxisPoint:
    """A point of the axis through v: param n is g^n v."""

    generator: str
    param: Fraction

    def __str__(self):
        return f"{self.generator}:{self.param}"


_AXIS = (-1, 0, 1)


def _segment_quadratic(r: Sequence[int]):
    """(c0, x_star) with |r - x * axis|^2 = c0 - 2 x (r3 - r1) + 2 x^2."""
    c0 = coord_sqdist(r, (0, 0, 0))
    return c0, Fraction(r[2] - r[0], 2)


class AxisProjector:
    """Exact metric projection onto the axis of the translation f in the standard frame.

    Segment ``j`` is ``[j/2, (j+1)/2]``; it lies in the chamber ``f^n I`` for
    ``j = 2n`` and ``f^n s0 I`` for ``j = 2n + 1``.  ``frame_change`` maps the
    input vertex into that frame (for k, the adjugate of s).
    """

    def __init__(self, field, frame_change: Mat | None = None, generator: str = "f"):
        self.field = field
        self.generator = generator
        self.frame_change = frame_change

    def _rep(self, V: Vertex) -> Mat:
        return V.rep if self.frame_change is None else self.frame_change @ V.rep

    @staticmethod
    def _chamber_data(j: int):
        n = j // 2
        if j % 2 == 0:
            return (0, 1, 2), (-n, 0, n)
        return (2, 1, 0), (-n - 1, 0, n + 1)

    def _monomial_adj(self, perm, shift) -> Mat:
        # inverse of diag(pi^shift) P_perm, up to scalar
        inv = [0] * 3
        for j in range(3):
            inv[perm[j]] = j
        return Mat.monomial(inv, [-shift[perm[j]] for j in range(3)], self.field)

    def segment(self, rep: Mat, j: int):
        """(value at best point, best x, x_star) restricted to segment j."""
        perm, shift = self._chamber_data(j)
        lam = cartan_exponents(self._monomial_adj(perm, shift) @ rep)
        r = [u + x for u, x in zip(shift, _perm_act(perm, lam))]
        c0, xs = _segment_quadratic(r)
        lo, hi = Fraction(j, 2), Fraction(j + 1, 2)
        x = min(max(xs, lo), hi)
        return c0 - 4 * x * xs + 2 * x * x, x, xs

    def project(self, V: Vertex, method: str = "walk", hint=None) -> AxisPoint:
        rep = self._rep(V)
        if method == "walk":
            x = self._walk(rep, hint)
        elif method == "scan":
            x = self._scan(rep)
        else:
            raise ValueError(f"unknown projection method {method!r}")
        return AxisPoint(self.generator, x)

    def _walk(self, rep: Mat, hint) -> Fraction:
        # phi(x) = d^2(V, axis(x)) is convex and equals the segment quadratic on
        # each segment, so a local minimum found by walking is global
        if hint is None:
            _, _, xs = self.segment(rep, 0)
            hint = xs
        j = floor(2 * Fraction(hint))
        direction = 0
        while True:
            _, x, xs = self.segment(rep, j)
            lo, hi = Fraction(j, 2), Fraction(j + 1, 2)
            if xs > hi:
                if direction == -1:
                    return hi
                direction = 1
                j += 1
            elif xs < lo:
                if direction == 1:
                    return lo
                direction = -1
                j -= 1
            else:
                return x

    def _scan(self, rep: Mat) -> Fraction:
        d2 = coord_sqdist(invariant_exponents(rep), (0, 0, 0))
        # axis unit has length sqrt(2); widen by one chamber
        window = isqrt(int(d2) // 2 + 1) + 2
        best = None
        for j in range(-2 * window, 2 * window):
            val, x, _ = self.segment(rep, j)
            if best is None or val < best[0]:
                best = (val, x)
        ties = set()
        for j in range(-2 * window, 2 * window):
            val, x, _ = self.segment(rep, j)
            if val == best[0]:
                ties.add(x)
        if len(ties) != 1:
            raise ArithmeticError("metric projection is not unique")
        return best[1]


def metric_project_to_axis(g: str, V: Vertex, s: Mat | None = None, method: str = "walk") -> AxisPoint:
    """Closest point of A_g to V, for g in {'f', 'k'}.

    For ``g = 'k'`` the conjugating matrix ``s`` must be given (the burau
    module supplies it); A_k = s A_f.
    """
    if g == "f":
        return AxisProjector(V.rep.field).project(V, method)
    if g == "k":
        if s is None:
            raise PreconditionError("projection onto A_k needs the conjugator s")
        return AxisProjector(V.rep.field, s.adjugate(), "k").project(V, method)
    raise PreconditionError(f"unknown generator {g!r}")
