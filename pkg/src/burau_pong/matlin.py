"""Exact square matrices over K, elementary divisors over O, Iwahori factorizations
and the affine Weyl group of type A~_{n-1} (GL_n modulo the center).

Conventions
-----------
* ``O`` is the valuation ring at infinity, ``pi = 1/t``.
* The Iwahori subgroup ``I`` consists of matrices in ``GL_n(O)`` whose strictly
  sub-diagonal entries lie in ``pi*O`` (upper triangular mod pi).
* An affine Weyl element ``(perm, shift)`` stands for the monomial matrix
  ``diag(pi^shift) * P_perm`` with ``P_perm e_j = e_perm[j]`` (0-based).
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from itertools import combinations, permutations
from typing import Sequence

from .exactfield import (
    INFINITY,
    QQ,
    DivisionByZero,
    Field,
    RatFunc,
    _ONE,
    _pmul,
    format_matrix,
    truncated_quotient,
)

__all__ = [
    "Mat",
    "SingularMatrixError",
    "AffineWeylElt",
    "IwahoriFactorization",
    "mat_arith",
    "invariant_exponents",
    "is_in_GL3O",
    "is_in_iwahori",
    "iwahori_factorize",
    "iwahori_cartan_factorize",
    "weyl_class",
    "weyl_length",
    "weyl_length_bfs",
    "simple_reflections",
]


class SingularMatrixError(DivisionByZero):
    pass


class Mat:
    """Immutable n x n matrix of :class:`RatFunc`."""

    __slots__ = ("_r", "n", "_p", "_hash")

    def __init__(self, rows, field: Field | None = None):
        rows = [list(r) for r in rows]
        n = len(rows)
        if any(len(r) != n for r in rows):
            raise ValueError("matrix must be square")
        if field is None:
            field = next((x.field for r in rows for x in r if isinstance(x, RatFunc)), QQ)
        conv = []
        for r in rows:
            conv.append(tuple(x if isinstance(x, RatFunc) else RatFunc.const(x, field) for x in r))
        self._r = tuple(conv)
        self.n = n
        self._p = field.char
        self._hash = None
        for r in self._r:
            for x in r:
                if x._p != self._p:
                    raise ValueError("entries from different fields")

    @classmethod
    def _make(cls, rows: tuple, p: int) -> "Mat":
        m = object.__new__(cls)
        m._r = rows
        m.n = len(rows)
        m._p = p
        m._hash = None
        return m

    # constructors --------------------------------------------------------

    @classmethod
    def identity(cls, n: int = 3, field: Field = QQ) -> "Mat":
        one, zero = RatFunc.one(field), RatFunc.zero(field)
        return cls._make(tuple(tuple(one if i == j else zero for j in range(n)) for i in range(n)),
                         field.char)

    @classmethod
    def diag(cls, entries: Sequence, field: Field = QQ) -> "Mat":
        n = len(entries)
        zero = RatFunc.zero(field)
        ents = [x if isinstance(x, RatFunc) else RatFunc.const(x, field) for x in entries]
        return cls._make(tuple(tuple(ents[i] if i == j else zero for j in range(n)) for i in range(n)),
                         field.char)

    @classmethod
    def pi_diag(cls, exps: Sequence[int], field: Field = QQ) -> "Mat":
        return cls.diag([RatFunc.pi(field, e) for e in exps], field)

    @classmethod
    def elementary(cls, i: int, j: int, c, n: int = 3, field: Field = QQ) -> "Mat":
        """Identity plus ``c`` at position (i, j), 0-based, i != j."""
        if i == j:
            raise ValueError("elementary matrix needs i != j")
        rows = [list(r) for r in cls.identity(n, field)._r]
        rows[i][j] = c if isinstance(c, RatFunc) else RatFunc.const(c, field)
        return cls._make(tuple(tuple(r) for r in rows), field.char)

    @classmethod
    def monomial(cls, perm: Sequence[int], exps: Sequence[int], field: Field = QQ) -> "Mat":
        """``diag(pi^exps) * P_perm``."""
        n = len(perm)
        zero = RatFunc.zero(field)
        rows = [[zero] * n for _ in range(n)]
        for j in range(n):
            i = perm[j]
            rows[i][j] = RatFunc.pi(field, exps[i])
        return cls._make(tuple(tuple(r) for r in rows), field.char)

    # access --------------------------------------------------------------

    @property
    def field(self) -> Field:
        return QQ if self._p == 0 else _field_of(self._p)

    @property
    def char(self) -> int:
        return self._p

    def rows(self):
        return self._r

    def __getitem__(self, ij):
        i, j = ij
        return self._r[i][j]

    def column(self, j: int):
        return tuple(r[j] for r in self._r)

    def transpose(self) -> "Mat":
        return Mat._make(tuple(zip(*self._r)), self._p)

    def __iter__(self):
        return iter(self._r)

    # arithmetic ----------------------------------------------------------

    def __matmul__(self, other: "Mat") -> "Mat":
        if not isinstance(other, Mat):
            return NotImplemented
        if other._p != self._p:
            raise ValueError("mixed characteristics")
        n = self.n
        cols = tuple(zip(*other._r))
        p = self._p
        out = []
        for row in self._r:
            new = []
            lau_row = all(len(x._den) == 1 for x in row)
            for col in cols:
                if lau_row and all(len(y._den) == 1 for y in col):
                    acc: dict = {}
                    for a, b in zip(row, col):
                        if a._lau and b._lau:
                            for e, c in _pmul(a._lau, b._lau, p).items():
                                v = acc.get(e, 0) + c
                                if p:
                                    v %= p
                                if v:
                                    acc[e] = v
                                else:
                                    acc.pop(e, None)
                    new.append(RatFunc._make(acc, _ONE, p))
                else:
                    s = row[0] * col[0]
                    for k in range(1, n):
                        s = s + row[k] * col[k]
                    new.append(s)
            out.append(tuple(new))
        return Mat._make(tuple(out), p)

    def scale(self, c) -> "Mat":
        return Mat._make(tuple(tuple(x * c for x in r) for r in self._r), self._p)

    def __neg__(self):
        return Mat._make(tuple(tuple(-x for x in r) for r in self._r), self._p)

    def __add__(self, other: "Mat") -> "Mat":
        return Mat._make(tuple(tuple(a + b for a, b in zip(r, s)) for r, s in zip(self._r, other._r)),
                         self._p)

    def __sub__(self, other: "Mat") -> "Mat":
        return Mat._make(tuple(tuple(a - b for a, b in zip(r, s)) for r, s in zip(self._r, other._r)),
                         self._p)

    def __pow__(self, k: int) -> "Mat":
        if k < 0:
            return self.inverse() ** (-k)
        result = Mat.identity(self.n, self.field)
        base = self
        while k:
            if k & 1:
                result = result @ base
            base = base @ base
            k >>= 1
        return result

    def __eq__(self, other):
        if not isinstance(other, Mat):
            return NotImplemented
        return self._p == other._p and self._r == other._r

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self._p, self._r))
        return self._hash

    def __reduce__(self):
        return (Mat._make, (self._r, self._p))

    def det(self) -> RatFunc:
        return _det(self._r)

    def minors(self, k: int) -> list:
        """All k x k minors, rows and columns in lexicographic order."""
        n = self.n
        out = []
        for rs in combinations(range(n), k):
            for cs in combinations(range(n), k):
                out.append(_det([[self._r[i][j] for j in cs] for i in rs]))
        return out

    def adjugate(self) -> "Mat":
        n = self.n
        if n == 1:
            return Mat.identity(1, self.field)
        rows = []
        for i in range(n):
            row = []
            for j in range(n):
                sub = [[self._r[a][b] for b in range(n) if b != i] for a in range(n) if a != j]
                c = _det(sub)
                row.append(-c if (i + j) % 2 else c)
            rows.append(tuple(row))
        return Mat._make(tuple(rows), self._p)

    def inverse(self) -> "Mat":
        d = self.det()
        if d.is_zero():
            raise SingularMatrixError("singular matrix has no inverse")
        adj = self.adjugate()
        dinv = d.inverse()
        return Mat._make(tuple(tuple(x * dinv for x in r) for r in adj._r), self._p)

    def valuations(self):
        return [[x.valuation() for x in r] for r in self._r]

    def min_valuation(self):
        return min(x.valuation() for r in self._r for x in r)

    def is_laurent(self) -> bool:
        return all(len(x._den) == 1 for r in self._r for x in r)

    def reduce_mod(self, p: int) -> "Mat":
        return Mat._make(tuple(tuple(x.reduce_mod(p) for x in r) for r in self._r), p)

    def is_monomial(self) -> bool:
        n = self.n
        for r in self._r:
            if sum(1 for x in r if not x.is_zero()) != 1:
                return False
        return all(sum(1 for i in range(n) if not self._r[i][j].is_zero()) == 1 for j in range(n))

    def __str__(self):
        return format_matrix(self)

    def __repr__(self):
        return f"Mat({self})"


def _field_of(p: int):
    from .exactfield import GF

    return GF(p)


def _det(rows) -> RatFunc:
    n = len(rows)
    if n == 1:
        return rows[0][0]
    if n == 2:
        return rows[0][0] * rows[1][1] - rows[0][1] * rows[1][0]
    if n == 3:
        (a, b, c), (d, e, f), (g, h, i) = rows
        return a * (e * i - f * h) - b * (d * i - f * g) + c * (d * h - e * g)
    total = None
    for j in range(n):
        if rows[0][j].is_zero():
            continue
        sub = [r[:j] + r[j + 1:] for r in rows[1:]]
        term = rows[0][j] * _det(sub)
        if j % 2:
            term = -term
        total = term if total is None else total + term
    return total if total is not None else rows[0][0] * 0


def mat_arith(A: Mat, B: Mat | None, op: str):
    if op == "mul":
        return A @ B
    if op == "inverse":
        return A.inverse()
    if op == "det":
        return A.det()
    if op == "minors":
        return [m for k in range(1, A.n + 1) for m in A.minors(k)]
    raise ValueError(f"unknown operation {op!r}")


# ---------------------------------------------------------------------------
# elementary divisors and subgroup membership


def invariant_exponents(g: Mat) -> tuple:
    """Elementary-divisor exponents e_1 <= ... <= e_n of g over O."""
    n = g.n
    d_prev = 0
    out = []
    for k in range(1, n + 1):
        dk = min(m.valuation() for m in g.minors(k))
        if dk is INFINITY:
            raise SingularMatrixError("invariant exponents of a singular matrix")
        out.append(dk - d_prev)
        d_prev = dk
    return tuple(out)


def is_in_GL3O(g: Mat) -> bool:
    for r in g._r:
        for x in r:
            if x.valuation() < 0:
                return False
    return g.det().valuation() == 0


def is_in_iwahori(g: Mat) -> bool:
    for i, r in enumerate(g._r):
        for j, x in enumerate(r):
            v = x.valuation()
            if v < 0 or (i > j and v < 1):
                return False
    return g.det().valuation() == 0


# ---------------------------------------------------------------------------
# affine Weyl group


@dataclass(frozen=True)
class AffineWeylElt:
    """``diag(pi^shift) * P_perm`` modulo scalars; shift sum kept in {0, .., n-1}."""

    perm: tuple
    shift: tuple

    def __post_init__(self):
        n = len(self.perm)
        if sorted(self.perm) != list(range(n)) or len(self.shift) != n:
            raise ValueError("bad affine Weyl data")
        s = sum(self.shift)
        k = (s - s % n) // n
        if k:
            object.__setattr__(self, "shift", tuple(u - k for u in self.shift))
        object.__setattr__(self, "perm", tuple(self.perm))
        object.__setattr__(self, "shift", tuple(self.shift))

    @classmethod
    def identity(cls, n: int = 3) -> "AffineWeylElt":
        return cls(tuple(range(n)), (0,) * n)

    @classmethod
    def translation(cls, shift) -> "AffineWeylElt":
        return cls(tuple(range(len(shift))), tuple(shift))

    @property
    def n(self) -> int:
        return len(self.perm)

    def __mul__(self, other: "AffineWeylElt") -> "AffineWeylElt":
        n = self.n
        moved = [0] * n
        for j in range(n):
            moved[self.perm[j]] = other.shift[j]
        shift = tuple(self.shift[i] + moved[i] for i in range(n))
        perm = tuple(self.perm[other.perm[j]] for j in range(n))
        return AffineWeylElt(perm, shift)

    def inverse(self) -> "AffineWeylElt":
        n = self.n
        inv = [0] * n
        for j in range(n):
            inv[self.perm[j]] = j
        shift = tuple(-self.shift[self.perm[j]] for j in range(n))
        return AffineWeylElt(tuple(inv), shift)

    def matrix(self, field: Field = QQ) -> Mat:
        return Mat.monomial(self.perm, self.shift, field)

    def length(self) -> int:
        return weyl_length(self)

    def is_translation(self) -> bool:
        return self.perm == tuple(range(self.n))

    def __str__(self):
        return f"(perm {self.perm}, shift {self.shift})"


def simple_reflections(n: int = 3) -> list:
    """[s_0, s_1, ..., s_{n-1}]; s_0 is the affine one, diag(pi^-1, 1.., pi) * P_(1 n)."""
    out = []
    perm = list(range(n))
    perm[0], perm[n - 1] = perm[n - 1], perm[0]
    shift = [0] * n
    shift[0], shift[n - 1] = -1, 1
    out.append(AffineWeylElt(tuple(perm), tuple(shift)))
    for i in range(n - 1):
        perm = list(range(n))
        perm[i], perm[i + 1] = perm[i + 1], perm[i]
        out.append(AffineWeylElt(tuple(perm), (0,) * n))
    return out


def weyl_length(w: AffineWeylElt) -> int:
    """Sum over positive roots e_i - e_j of |u_i - u_j + [perm^-1 inverts (i, j)]|."""
    n = w.n
    inv = [0] * n
    for j in range(n):
        inv[w.perm[j]] = j
    u = w.shift
    total = 0
    for i in range(n):
        for j in range(i + 1, n):
            total += abs(u[i] - u[j] + (1 if inv[i] > inv[j] else 0))
    return total


def weyl_length_bfs(max_length: int, n: int = 3) -> dict:
    """Gallery distance from the identity chamber for every w with length <= max_length."""
    gens = simple_reflections(n)
    start = AffineWeylElt.identity(n)
    dist = {start: 0}
    queue = deque([start])
    while queue:
        w = queue.popleft()
        d = dist[w]
        if d == max_length:
            continue
        for s in gens:
            x = w * s
            if x not in dist:
                dist[x] = d + 1
                queue.append(x)
    return dist


# ---------------------------------------------------------------------------
# factorizations


@dataclass(frozen=True)
class IwahoriFactorization:
    i1: Mat
    w: AffineWeylElt
    w_hat: Mat
    i2: Mat


def _weight_iwahori(v, i, j):
    return 3 * v + j - i


def _weight_cartan(v, i, j):
    return 3 * v - i


def _eliminate(g: Mat, weight, flanks: bool, extra_precision: int = 0):
    """Row-reduce g by left Iwahori operations around weight-minimal pivots.

    Returns ``(pivots, M, Linv)`` where ``pivots[j] = (row, valuation)`` for each
    column j, ``M = L g`` and ``Linv = L^-1`` (None unless ``flanks``).  Only
    the rows still unprocessed are cleared; entries left in processed rows are
    absorbed by the right-hand flank.
    """
    n = g.n
    p = g._p
    M = [list(r) for r in g._r]
    vals = [[x.valuation() for x in r] for r in M]
    minv = min(v for r in vals for v in r)
    if minv is INFINITY:
        raise SingularMatrixError("factorization of the zero matrix")
    dv = g.det().valuation()
    if dv is INFINITY:
        raise SingularMatrixError("factorization of a singular matrix")
    # no pivot has valuation above this bound; truncation errors are kept beyond it
    target = dv - (n - 1) * minv + 2 + extra_precision
    Linv = [list(r) for r in Mat.identity(n, g.field)._r] if flanks else None
    rows_left = list(range(n))
    cols_left = list(range(n))
    pivots = [None] * n
    for _ in range(n):
        best = None
        for i in rows_left:
            vi = vals[i]
            for j in cols_left:
                v = vi[j]
                if v is INFINITY:
                    continue
                key = (weight(v, i, j), i, j)
                if best is None or key < best:
                    best = key
        if best is None:
            raise SingularMatrixError("no pivot available; matrix is singular")
        _, r, j = best
        piv = M[r][j]
        pv = vals[r][j]
        pivots[j] = (r, pv)
        rows_left.remove(r)
        cols_left.remove(j)
        # columns that still matter when updating a row
        upd_cols = range(n) if flanks else cols_left
        exact = len(piv._lau) == 1 and len(piv._den) == 1
        row_r = M[r]
        if not flanks:
            rmin = min((vals[r][c] for c in upd_cols), default=INFINITY)
        else:
            rmin = min(vals[r])
        for i in rows_left:
            a = M[i][j]
            if a.is_zero():
                continue
            if exact and len(a._den) == 1:
                c = -(a * piv.inverse())
            else:
                # residual valuation >= target + 1 in every updated entry
                need = target + 1 - (rmin if rmin is not INFINITY else 0)
                rel = need - (vals[i][j] - pv)
                c = -truncated_quotient(a, piv, max(rel, 1))
            if c.is_zero():
                continue
            row_i = M[i]
            for col in upd_cols:
                if col == j:
                    x = row_i[j] + c * piv
                else:
                    b = row_r[col]
                    if b.is_zero():
                        continue
                    x = row_i[col] + c * b
                row_i[col] = x
                vals[i][col] = x.valuation()
            if not flanks:
                row_i[j] = RatFunc.zero(g.field)
                vals[i][j] = INFINITY
            else:
                # Linv <- Linv * E_{i r}(-c): col_r += (-c) * col_i
                negc = -c
                for row in Linv:
                    if not row[i].is_zero():
                        row[r] = row[r] + negc * row[i]
    return pivots, M, Linv


def _w_from_pivots(pivots) -> AffineWeylElt:
    n = len(pivots)
    perm = [0] * n
    shift = [0] * n
    for j, (r, v) in enumerate(pivots):
        perm[j] = r
        shift[r] = v
    return AffineWeylElt(tuple(perm), tuple(shift))


def weyl_class(g: Mat) -> AffineWeylElt:
    """The I-double coset of g, as an affine Weyl element (no flanks computed)."""
    pivots, _, _ = _eliminate(g, _weight_iwahori, flanks=False)
    return _w_from_pivots(pivots)


def iwahori_factorize(g: Mat) -> IwahoriFactorization:
    """``g = i1 * w_hat * i2`` with i1, i2 in I and w_hat = diag(pi^u) P_perm monomial.

    The reconstruction is exact (no scalar is needed in GL_n); the flanks are
    verified to lie in I before returning.
    """
    for extra in (0, 8, 32):
        pivots, M, Linv = _eliminate(g, _weight_iwahori, flanks=True, extra_precision=extra)
        n = g.n
        perm = [r for r, _ in pivots]
        shift = [0] * n
        for r, v in pivots:
            shift[r] = v
        w_hat = Mat.monomial(perm, shift, g.field)
        w_inv = _monomial_inverse(perm, shift, g.field)
        i1 = Mat._make(tuple(tuple(r) for r in Linv), g._p)
        i2 = w_inv @ Mat._make(tuple(tuple(r) for r in M), g._p)
        if is_in_iwahori(i1) and is_in_iwahori(i2):
            return IwahoriFactorization(i1, AffineWeylElt(tuple(perm), tuple(shift)), w_hat, i2)
    raise ArithmeticError("Iwahori factorization failed to certify its flanks")


def iwahori_cartan_factorize(g: Mat):
    """``g = i * diag(pi^lam) * m`` with i in I and m in GL_n(O); returns (i, lam, m)."""
    for extra in (0, 8, 32):
        pivots, M, Linv = _eliminate(g, _weight_cartan, flanks=True, extra_precision=extra)
        n = g.n
        lam = [0] * n
        for r, v in pivots:
            lam[r] = v
        i = Mat._make(tuple(tuple(r) for r in Linv), g._p)
        m = Mat.pi_diag([-x for x in lam], g.field) @ Mat._make(tuple(tuple(r) for r in M), g._p)
        if is_in_iwahori(i) and is_in_GL3O(m):
            return i, tuple(lam), m
    raise ArithmeticError("Iwahori-Cartan factorization failed to certify its factors")


def cartan_exponents(g: Mat) -> tuple:
    """The lambda of :func:`iwahori_cartan_factorize`, without computing the flanks."""
    pivots, _, _ = _eliminate(g, _weight_cartan, flanks=False)
    lam = [0] * g.n
    for r, v in pivots:
        lam[r] = v
    return tuple(lam)


def _monomial_inverse(perm, shift, field) -> Mat:
    n = len(perm)
    inv = [0] * n
    for j in range(n):
        inv[perm[j]] = j
    return Mat.monomial(inv, [-shift[perm[j]] for j in range(n)], field)


def all_permutations(n: int = 3):
    return list(permutations(range(n)))
