"""Vertices, chambers, frames and sectors of the A~2 building of SL_3(K).

A vertex is a homothety class of O-lattices, stored as a matrix whose columns
span a representative.  Matrices act on the left.  Every predicate here is
invariant under scaling a representative, which lets callers use the adjugate
in place of the inverse and stay with Laurent-polynomial entries.

Apartment coordinates ``(a, b, c)`` in a frame with basis ``B`` name the
vertex ``[[B diag(pi^a, pi^b, pi^c) O^3]]``; they are defined modulo
``(1, 1, 1)`` and kept canonical with ``a + b + c`` in ``{0, 1, 2}``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional, Sequence

from .exactfield import INFINITY, Field, RatFunc
from .matlin import Mat, invariant_exponents

__all__ = [
    "Vertex",
    "Chamber",
    "Frame",
    "SectorSpec",
    "ChamberAtInfinity",
    "canon_coords",
    "vertex_eq",
    "vertex_type",
    "vertex_sqdist",
    "vertices_adjacent",
    "apartment_membership",
    "coords_membership",
    "sector_membership",
    "chamber_eq",
    "chambers_at_infinity_opposite",
    "comparison_cosine",
    "coord_sqdist",
    "STANDARD_MU",
]

# vertices of the standard chamber: diag(pi^mu) O^3
STANDARD_MU = ((0, 0, 0), (0, 0, 1), (0, 1, 1))


def canon_coords(c: Sequence[int]) -> tuple:
    n = len(c)
    s = sum(c)
    k = (s - s % n) // n
    return tuple(x - k for x in c)


def coord_sqdist(p: Sequence[int], q: Sequence[int]) -> Fraction:
    """Euclidean quotient metric: sum (d_i - mean d)^2 for d = p - q."""
    d = [a - b for a, b in zip(p, q)]
    s = sum(d)
    return Fraction(sum(x * x for x in d) * len(d) - s * s, len(d))


class Vertex:
    """Homothety class ``[[rep O^n]]``; ``==`` is lattice-class equality."""

    __slots__ = ("rep", "_key")

    def __init__(self, rep: Mat):
        self.rep = rep
        self._key = None

    @classmethod
    def standard(cls, coords: Sequence[int] = (0, 0, 0), field: Field | None = None) -> "Vertex":
        from .exactfield import QQ

        return cls(Mat.pi_diag(list(coords), field or QQ))

    def act(self, g: Mat) -> "Vertex":
        return Vertex(g @ self.rep)

    def __rmatmul__(self, g: Mat) -> "Vertex":
        return self.act(g)

    def __eq__(self, other):
        if not isinstance(other, Vertex):
            return NotImplemented
        return vertex_eq(self, other)

    def __hash__(self):
        return hash(self.key())

    def key(self) -> tuple:
        """Canonical invariant of the class (column Hermite form over O)."""
        if self._key is None:
            self._key = _hermite_key(self.rep)
        return self._key

    def __repr__(self):
        return f"Vertex({self.rep})"


class Chamber:
    """A chamber ``rep * I`` modulo scalars.

    The representative is normalized so that ``nu(det rep)`` is divisible by 3,
    by right multiplication with a power of the element that rotates the
    standard chamber.  That keeps the vertex labelling type-correct, so
    ``chamber_eq`` is equality of simplices.
    """

    __slots__ = ("rep",)

    def __init__(self, rep: Mat):
        d = rep.det().valuation()
        if d is INFINITY:
            raise ValueError("chamber representative must be invertible")
        r = d % 3
        if r:
            rep = rep @ _rotation_power(-r, rep.field)
        self.rep = rep

    def act(self, g: Mat) -> "Chamber":
        return Chamber(g @ self.rep)

    def vertices(self) -> list:
        f = self.rep.field
        return [Vertex(self.rep @ Mat.pi_diag(mu, f)) for mu in STANDARD_MU]

    def __eq__(self, other):
        if not isinstance(other, Chamber):
            return NotImplemented
        return chamber_eq(self, other)

    def __hash__(self):
        return hash(frozenset(v.key() for v in self.vertices()))

    def __repr__(self):
        return f"Chamber({self.rep})"


def _rotation_power(k: int, field: Field) -> Mat:
    # omega e1 = pi e3, omega e2 = e1, omega e3 = e2; omega^3 = pi
    k %= 3
    if k == 0:
        return Mat.identity(3, field)
    if k == 1:
        return Mat.monomial((2, 0, 1), (0, 0, 1), field)
    return Mat.monomial((1, 2, 0), (0, 1, 1), field)


@dataclass(frozen=True)
class Frame:
    """Three lines of K^3 given by the columns of ``basis``."""

    basis: Mat
    name: str = field(default="", compare=False)

    def __post_init__(self):
        if self.basis.det().is_zero():
            raise ValueError("frame basis must be invertible")

    def same_apartment(self, other: "Frame") -> bool:
        return (self.basis.adjugate() @ other.basis).is_monomial()

    def vertex(self, coords: Sequence[int]) -> Vertex:
        return Vertex(self.basis @ Mat.pi_diag(list(coords), self.basis.field))

    def chamber(self, perm: Sequence[int], shift: Sequence[int]) -> Chamber:
        return Chamber(self.basis @ Mat.monomial(perm, shift, self.basis.field))

    def contains_flag(self, flag: "ChamberAtInfinity") -> bool:
        """Whether the chamber at infinity lies in this apartment's boundary."""
        cols = [self.basis.column(j) for j in range(3)]
        line_ok = any(_rank([flag.line, c]) == 1 for c in cols)
        plane_ok = any(
            _rank([flag.plane[0], flag.plane[1], cols[a], cols[b]]) == 2
            for a in range(3) for b in range(a + 1, 3)
        )
        return line_ok and plane_ok


@dataclass(frozen=True)
class SectorSpec:
    """``{x : (x - tip)[order[0]] <= (x - tip)[order[1]] <= (x - tip)[order[2]]}`` in a frame."""

    frame: Frame
    tip: tuple
    order: tuple
    name: str = field(default="", compare=False)

    def contains_coords(self, c: Sequence[int]) -> bool:
        d = [a - b for a, b in zip(c, self.tip)]
        o = self.order
        return d[o[0]] <= d[o[1]] <= d[o[2]]

    def translate(self, shift: Sequence[int]) -> "SectorSpec":
        return SectorSpec(self.frame, canon_coords([a + b for a, b in zip(self.tip, shift)]),
                          self.order, self.name)


@dataclass(frozen=True)
class ChamberAtInfinity:
    """A complete flag ``line < plane`` of K^3."""

    line: tuple
    plane: tuple

    def __post_init__(self):
        if all(x.is_zero() for x in self.line):
            raise ValueError("line must be nonzero")
        if _rank(list(self.plane)) != 2:
            raise ValueError("plane must have rank 2")
        if _rank([self.plane[0], self.plane[1], self.line]) != 2:
            raise ValueError("line must lie in the plane")

    @classmethod
    def from_basis(cls, g: Mat, order: Sequence[int] = (0, 1, 2)) -> "ChamberAtInfinity":
        """The flag ``[g e_a] < [g e_a, g e_b]`` for ``order = (a, b, c)``."""
        a, b = order[0], order[1]
        return cls(g.column(a), (g.column(a), g.column(b)))

    def act(self, g: Mat) -> "ChamberAtInfinity":
        return ChamberAtInfinity(_apply(g, self.line), (_apply(g, self.plane[0]), _apply(g, self.plane[1])))


def _apply(g: Mat, v):
    return tuple(sum((g[i, j] * v[j] for j in range(1, 3)), g[i, 0] * v[0]) for i in range(3))


def _rank(vectors) -> int:
    """Rank of a list of vectors in K^n, by exact elimination."""
    rows = [list(v) for v in vectors]
    if not rows:
        return 0
    n = len(rows[0])
    rank = 0
    col = 0
    while rank < len(rows) and col < n:
        piv = next((r for r in range(rank, len(rows)) if not rows[r][col].is_zero()), None)
        if piv is None:
            col += 1
            continue
        rows[rank], rows[piv] = rows[piv], rows[rank]
        inv = rows[rank][col].inverse()
        for r in range(len(rows)):
            if r != rank and not rows[r][col].is_zero():
                c = rows[r][col] * inv
                rows[r] = [x - c * y for x, y in zip(rows[r], rows[rank])]
        rank += 1
        col += 1
    return rank


# ---------------------------------------------------------------------------
# vertex predicates


def _rel(V: Vertex, W: Vertex) -> Mat:
    # adj(V) W is a scalar multiple of V^-1 W; all callers are scale invariant
    return V.rep.adjugate() @ W.rep


def vertex_eq(V: Vertex, W: Vertex) -> bool:
    A = _rel(V, W)
    return 3 * A.min_valuation() == A.det().valuation()


def vertex_type(V: Vertex) -> int:
    return V.rep.det().valuation() % 3


def vertex_sqdist(V: Vertex, W: Vertex) -> Fraction:
    e = invariant_exponents(_rel(V, W))
    return coord_sqdist(e, (0, 0, 0))


def vertices_adjacent(V: Vertex, W: Vertex) -> bool:
    e = invariant_exponents(_rel(V, W))
    e = tuple(x - e[0] for x in e)
    return e in ((0, 0, 1), (0, 1, 1))


def coords_membership(F: Frame, rep: Mat) -> Optional[tuple]:
    """Frame coordinates of ``[[rep O^3]]`` or None; uses adj(rep)."""
    C = rep.adjugate() @ F.basis
    n = C.n
    u = []
    for j in range(n):
        u.append(min(C[i, j].valuation() for i in range(n)))
    if C.det().valuation() != sum(u):
        return None
    return canon_coords([-x for x in u])


def apartment_membership(F: Frame, V: Vertex) -> Optional[tuple]:
    return coords_membership(F, V.rep)


def sector_membership(S: SectorSpec, V: Vertex) -> bool:
    c = apartment_membership(S.frame, V)
    return c is not None and S.contains_coords(c)


def chamber_eq(C: Chamber, D: Chamber) -> bool:
    A = C.rep.adjugate() @ D.rep
    dv = A.det().valuation()
    if dv % 3:
        return False
    c = dv // 3
    # pi^-c A in I: entries nu >= c, strictly below diagonal nu >= c + 1
    for i in range(3):
        for j in range(3):
            v = A[i, j].valuation()
            if v < c or (i > j and v < c + 1):
                return False
    return True


def chambers_at_infinity_opposite(C1: ChamberAtInfinity, C2: ChamberAtInfinity) -> bool:
    return (_rank([C2.plane[0], C2.plane[1], C1.line]) == 3
            and _rank([C1.plane[0], C1.plane[1], C2.line]) == 3)


def comparison_cosine(p: Vertex, x: Vertex, y: Vertex) -> Fraction:
    """Cosine of the euclidean comparison angle at p, for equal legs |px| = |py|."""
    a = vertex_sqdist(p, x)
    b = vertex_sqdist(p, y)
    if a != b or a == 0:
        raise ValueError(f"comparison_cosine needs equal positive legs, got {a} and {b}")
    c = vertex_sqdist(x, y)
    return (2 * a - c) / (2 * a)


# ---------------------------------------------------------------------------
# canonical forms for hashing


def _hermite_key(rep: Mat) -> tuple:
    """Column Hermite form over O of the lattice, normalized by homothety.

    Lower triangular with diagonal pi^a_i; the entry below a pivot is reduced
    to its pi-adic expansion below pi^a_i.  Only used for deduplication.
    """
    n = rep.n
    cols = [list(rep.column(j)) for j in range(n)]
    diag = []
    for i in range(n):
        # pivot: minimal valuation in row i among columns i..n-1
        best = min(range(i, n), key=lambda j: (cols[j][i].valuation(), j))
        cols[i], cols[best] = cols[best], cols[i]
        piv = cols[i][i]
        a = piv.valuation()
        # scale column so the pivot is exactly pi^a (unit in O)
        unit = piv * RatFunc.pi(piv.field, -a)
        uinv = unit.inverse()
        cols[i] = [x * uinv for x in cols[i]]
        for j in range(i + 1, n):
            x = cols[j][i]
            if not x.is_zero():
                c = x * RatFunc.pi(piv.field, a).inverse()
                cols[j] = [y - c * z for y, z in zip(cols[j], cols[i])]
        diag.append(a)
    for j in range(n):
        for i in range(j + 1, n):
            x = cols[j][i]
            if x.is_zero():
                continue
            # subtract the part of x with valuation >= a_i using column i
            head = x.truncate(diag[i])
            c = (x - head) * RatFunc.pi(x.field, diag[i]).inverse()
            if not c.is_zero():
                cols[j] = [y - c * z for y, z in zip(cols[j], cols[i])]
    shift = diag[0]
    out = [tuple(a - shift for a in diag)]
    for j in range(n):
        for i in range(j + 1, n):
            x = cols[j][i]
            x = x * RatFunc.pi(x.field, -shift)
            out.append(tuple(sorted(x.pi_expansion(diag[i] - shift))))
    return tuple(out)
