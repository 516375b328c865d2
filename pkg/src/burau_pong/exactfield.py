"""Exact arithmetic in K = k0(t) with the valuation at infinity.

Elements are stored as ``L / q`` where ``L`` is a Laurent polynomial in ``t``
and ``q`` is a monic polynomial with ``q(0) != 0`` and ``gcd(L, q) = 1``.
This is a canonical form, so equality and hashing are structural.  Laurent
polynomials (``q = 1``) never touch a gcd, which keeps the building code on a
cheap path: almost every matrix it handles has Laurent entries.

The uniformizer is ``pi = 1/t`` and ``nu(x) = deg(den) - deg(num)``.
"""

from __future__ import annotations

import re
from fractions import Fraction

from gmpy2 import mpq
from functools import lru_cache
from typing import Iterable

__all__ = [
    "Field",
    "QQ",
    "GF",
    "INFINITY",
    "RatFunc",
    "FieldError",
    "DivisionByZero",
    "ParseError",
    "CoefficientError",
    "field_arith",
    "val_infinity",
    "pi_expansion",
    "parse_expr",
    "format_matrix",
]


class FieldError(ArithmeticError):
    """Base class for arithmetic failures in the function field."""


class DivisionByZero(FieldError, ZeroDivisionError):
    pass


class ParseError(ValueError):
    def __init__(self, message: str, position: int):
        super().__init__(f"{message} at position {position}")
        self.position = position


class CoefficientError(ParseError):
    """A literal coefficient has no image in the configured field (e.g. 1/2 in F_2)."""


# ---------------------------------------------------------------------------
# valuation values


class _Infinity:
    """The valuation of zero.  Absorbs addition and exceeds every integer."""

    _inst = None

    def __new__(cls):
        if cls._inst is None:
            cls._inst = super().__new__(cls)
        return cls._inst

    def __add__(self, other):
        return self

    __radd__ = __add__

    def __lt__(self, other):
        return False

    def __le__(self, other):
        return other is self

    def __gt__(self, other):
        return other is not self

    def __ge__(self, other):
        return True

    def __eq__(self, other):
        return other is self

    def __hash__(self):
        return hash("+oo")

    def __repr__(self):
        return "+oo"


INFINITY = _Infinity()


# ---------------------------------------------------------------------------
# coefficient fields


def _is_prime(n: int) -> bool:
    if n < 2:
        return False
    i = 2
    while i * i <= n:
        if n % i == 0:
            return False
        i += 1
    return True


class Field:
    """The coefficient field k0: the rationals (``char == 0``) or F_p."""

    __slots__ = ("char",)

    def __init__(self, char: int):
        if char != 0 and not _is_prime(char):
            raise ValueError(f"characteristic must be 0 or a prime, got {char}")
        self.char = char

    def __repr__(self):
        return "QQ" if self.char == 0 else f"GF({self.char})"

    def __eq__(self, other):
        return isinstance(other, Field) and other.char == self.char

    def __hash__(self):
        return hash(("Field", self.char))

    def __reduce__(self):
        return (GF if self.char else _qq, (self.char,) if self.char else ())

    def coerce(self, x):
        p = self.char
        if isinstance(x, _RATIONAL):
            num, den = int(x.numerator), int(x.denominator)
            if p == 0:
                return num if den == 1 else mpq(num, den)
            if den % p == 0:
                raise FieldError(f"{x} has no image in GF({p})")
            return num * pow(den, -1, p) % p
        if isinstance(x, int):
            return x % p if p else x
        raise TypeError(f"cannot coerce {type(x).__name__} into {self!r}")

    def inv(self, x):
        p = self.char
        if p:
            if x % p == 0:
                raise DivisionByZero("inverse of zero coefficient")
            return pow(x, -1, p)
        if x == 0:
            raise DivisionByZero("inverse of zero coefficient")
        return _qdiv(1, x)

    def div(self, a, b):
        p = self.char
        if p:
            return a * self.inv(b) % p
        if b == 0:
            raise DivisionByZero("division of coefficients by zero")
        return _qdiv(a, b)


# rational coefficients are gmpy2 mpq; Fraction is accepted on input
_MPQ = type(mpq(1, 2))
_RATIONAL = (Fraction, _MPQ)
_SCALARS = (int, Fraction, _MPQ)


def _qdiv(a, b):
    if isinstance(a, int) and isinstance(b, int):
        if a % b == 0:
            return a // b
        return mpq(a, b)
    r = mpq(a) / b
    return int(r) if r.denominator == 1 else r


def _qq():
    return QQ


QQ = Field(0)


@lru_cache(maxsize=None)
def GF(p: int) -> Field:
    return Field(p)


def _field(p: int) -> Field:
    return QQ if p == 0 else GF(p)


# ---------------------------------------------------------------------------
# sparse polynomial kernels; dicts exponent -> nonzero coefficient

_ONE = {0: 1}


def _padd(a: dict, b: dict, p: int) -> dict:
    if len(a) < len(b):
        a, b = b, a
    r = dict(a)
    if p:
        for e, c in b.items():
            v = (r.get(e, 0) + c) % p
            if v:
                r[e] = v
            else:
                r.pop(e, None)
    else:
        for e, c in b.items():
            v = r.get(e, 0) + c
            if v:
                r[e] = v
            else:
                r.pop(e, None)
    return r


def _psub(a: dict, b: dict, p: int) -> dict:
    r = dict(a)
    if p:
        for e, c in b.items():
            v = (r.get(e, 0) - c) % p
            if v:
                r[e] = v
            else:
                r.pop(e, None)
    else:
        for e, c in b.items():
            v = r.get(e, 0) - c
            if v:
                r[e] = v
            else:
                r.pop(e, None)
    return r


def _pmul(a: dict, b: dict, p: int) -> dict:
    if not a or not b:
        return {}
    if len(a) == 1:
        (ea, ca), = a.items()
        if ca == 1:
            return {e + ea: c for e, c in b.items()}
        if p:
            return {e + ea: c * ca % p for e, c in b.items()}
        return {e + ea: c * ca for e, c in b.items()}
    if len(b) == 1:
        return _pmul(b, a, p)
    r: dict = {}
    get = r.get
    for ea, ca in a.items():
        for eb, cb in b.items():
            e = ea + eb
            r[e] = get(e, 0) + ca * cb
    if p:
        return {e: c % p for e, c in r.items() if c % p}
    return {e: c for e, c in r.items() if c}


def _pscale(a: dict, c, p: int) -> dict:
    if c == 0:
        return {}
    if p:
        return {e: v * c % p for e, v in a.items()}
    return {e: v * c for e, v in a.items()}


def _pshift(a: dict, k: int) -> dict:
    if k == 0:
        return a
    return {e + k: c for e, c in a.items()}


def _pneg(a: dict, p: int) -> dict:
    if p:
        return {e: (-c) % p for e, c in a.items()}
    return {e: -c for e, c in a.items()}


def _pdivmod(a: dict, b: dict, p: int):
    """Polynomial division over the field (exponents >= 0)."""
    fld = _field(p)
    db = max(b)
    lb_inv = fld.inv(b[db])
    q: dict = {}
    r = dict(a)
    while r:
        dr = max(r)
        if dr < db:
            break
        c = r[dr] * lb_inv
        if p:
            c %= p
        elif isinstance(c, _MPQ) and c.denominator == 1:
            c = int(c)
        k = dr - db
        q[k] = c
        r = _psub(r, {e + k: v * c for e, v in b.items()}, p)
    return q, r


def _pmonic(a: dict, p: int) -> dict:
    lead = a[max(a)]
    if lead == 1:
        return a
    inv = _field(p).inv(lead)
    return {e: _norm(c * inv, p) for e, c in a.items()}


def _norm(c, p):
    if p:
        return c % p
    if isinstance(c, _MPQ) and c.denominator == 1:
        return int(c)
    return c


def _pgcd(a: dict, b: dict, p: int) -> dict:
    while b:
        _, r = _pdivmod(a, b, p)
        a, b = b, r
    return _pmonic(a, p) if a else {}


def _strip_t(a: dict):
    """Split a nonzero Laurent dict as t^m * P with P(0) != 0."""
    m = min(a)
    return m, (_pshift(a, -m) if m else a)


# ---------------------------------------------------------------------------
# the field elements


class RatFunc:
    """An element of k0(t), held in canonical form ``lau / den``."""

    __slots__ = ("_lau", "_den", "_p", "_hash")

    def __init__(self, num, den=None, field: Field = QQ):
        """Build ``num / den`` from polynomials given as dicts or coefficient lists.

        Dict keys may be negative (Laurent numerators).  Coefficient lists are
        ascending: ``[1, 0, 2]`` is ``1 + 2t^2``.
        """
        p = field.char
        num = _as_dict(num, field)
        den = _ONE if den is None else _as_dict(den, field)
        if not den:
            raise DivisionByZero("zero denominator")
        lau, q = _canonical(num, den, p)
        self._lau = lau
        self._den = q
        self._p = p
        self._hash = None

    @classmethod
    def _make(cls, lau: dict, den: dict, p: int) -> "RatFunc":
        x = object.__new__(cls)
        x._lau = lau
        x._den = den
        x._p = p
        x._hash = None
        return x

    # constructors -------------------------------------------------------

    @classmethod
    def const(cls, c, field: Field = QQ) -> "RatFunc":
        c = field.coerce(c)
        return cls._make({0: c} if c else {}, _ONE, field.char)

    @classmethod
    def zero(cls, field: Field = QQ) -> "RatFunc":
        return cls._make({}, _ONE, field.char)

    @classmethod
    def one(cls, field: Field = QQ) -> "RatFunc":
        return cls._make({0: 1}, _ONE, field.char)

    @classmethod
    def t(cls, field: Field = QQ, power: int = 1) -> "RatFunc":
        return cls._make({power: 1}, _ONE, field.char)

    @classmethod
    def pi(cls, field: Field = QQ, power: int = 1) -> "RatFunc":
        return cls._make({-power: 1}, _ONE, field.char)

    @classmethod
    def laurent(cls, coeffs: dict, field: Field = QQ) -> "RatFunc":
        p = field.char
        lau = {e: field.coerce(c) for e, c in coeffs.items()}
        return cls._make({e: c for e, c in lau.items() if c}, _ONE, p)

    # accessors ----------------------------------------------------------

    @property
    def field(self) -> Field:
        return _field(self._p)

    @property
    def char(self) -> int:
        return self._p

    @property
    def num(self) -> dict:
        """Numerator as a polynomial in t (exponents >= 0), paired with :attr:`den`."""
        if not self._lau:
            return {}
        m = min(self._lau)
        return _pshift(self._lau, -m) if m < 0 else dict(self._lau)

    @property
    def den(self) -> dict:
        """Monic denominator as a polynomial in t; ``gcd(num, den) = 1``."""
        if not self._lau:
            return dict(_ONE)
        m = min(self._lau)
        return _pshift(self._den, -m) if m < 0 else dict(self._den)

    def laurent_coeffs(self) -> dict:
        if self._den is not _ONE and self._den != _ONE:
            raise FieldError("not a Laurent polynomial")
        return dict(self._lau)

    def is_zero(self) -> bool:
        return not self._lau

    def is_one(self) -> bool:
        return self._den == _ONE and self._lau == _ONE

    def is_laurent(self) -> bool:
        return len(self._den) == 1

    def valuation(self):
        if not self._lau:
            return INFINITY
        return max(self._den) - max(self._lau)

    def leading_pi_coeff(self):
        """Coefficient of pi^nu(x) in the pi-adic expansion."""
        if not self._lau:
            return 0
        # den is monic, so the leading coefficient in pi is the t-leading one of lau
        return self._lau[max(self._lau)]

    # arithmetic ---------------------------------------------------------

    def _coerce_other(self, other) -> "RatFunc":
        if isinstance(other, RatFunc):
            if other._p != self._p:
                raise FieldError(f"mixed characteristics {self._p} and {other._p}")
            return other
        if isinstance(other, _SCALARS):
            return RatFunc.const(other, _field(self._p))
        return NotImplemented

    def __add__(self, other):
        other = self._coerce_other(other)
        if other is NotImplemented:
            return other
        p = self._p
        if not other._lau:
            return self
        if not self._lau:
            return other
        if len(self._den) == 1 and len(other._den) == 1:
            return RatFunc._make(_padd(self._lau, other._lau, p), _ONE, p)
        if self._den == other._den:
            lau, den = _canonical(_padd(self._lau, other._lau, p), self._den, p)
            return RatFunc._make(lau, den, p)
        num = _padd(_pmul(self._lau, other._den, p), _pmul(other._lau, self._den, p), p)
        lau, den = _canonical(num, _pmul(self._den, other._den, p), p)
        return RatFunc._make(lau, den, p)

    __radd__ = __add__

    def __neg__(self):
        return RatFunc._make(_pneg(self._lau, self._p), self._den, self._p)

    def __sub__(self, other):
        other = self._coerce_other(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        other = self._coerce_other(other)
        if other is NotImplemented:
            return other
        return other + (-self)

    def __mul__(self, other):
        other = self._coerce_other(other)
        if other is NotImplemented:
            return other
        p = self._p
        if not self._lau or not other._lau:
            return RatFunc._make({}, _ONE, p)
        if len(self._den) == 1 and len(other._den) == 1:
            return RatFunc._make(_pmul(self._lau, other._lau, p), _ONE, p)
        num = _pmul(self._lau, other._lau, p)
        lau, den = _canonical(num, _pmul(self._den, other._den, p), p)
        return RatFunc._make(lau, den, p)

    __rmul__ = __mul__

    def inverse(self) -> "RatFunc":
        if not self._lau:
            raise DivisionByZero("inverse of zero")
        p = self._p
        if len(self._lau) == 1 and len(self._den) == 1:
            (e, c), = self._lau.items()
            return RatFunc._make({-e: _field(p).inv(c)}, _ONE, p)
        lau, den = _canonical(self._den, self._lau, p)
        return RatFunc._make(lau, den, p)

    def __truediv__(self, other):
        other = self._coerce_other(other)
        if other is NotImplemented:
            return other
        return self * other.inverse()

    def __rtruediv__(self, other):
        other = self._coerce_other(other)
        if other is NotImplemented:
            return other
        return other * self.inverse()

    def __pow__(self, n: int):
        if n < 0:
            return self.inverse() ** (-n)
        result = RatFunc.one(_field(self._p))
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def __eq__(self, other):
        if isinstance(other, _SCALARS):
            other = RatFunc.const(other, _field(self._p))
        if not isinstance(other, RatFunc):
            return NotImplemented
        return self._p == other._p and self._lau == other._lau and self._den == other._den

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self._p, frozenset(self._lau.items()), frozenset(self._den.items())))
        return self._hash

    def __bool__(self):
        return bool(self._lau)

    def __reduce__(self):
        return (RatFunc._make, (self._lau, self._den, self._p))

    # expansions and reduction -------------------------------------------

    def pi_expansion(self, order: int) -> list:
        """Coefficients ``(e, c)`` of pi^e for ``nu(x) <= e < order``, zeros omitted."""
        if not self._lau:
            return []
        num_pi = {-e: c for e, c in self._lau.items()}
        d = max(self._den)
        den_pi = {d - e: c for e, c in self._den.items()}  # constant term 1
        return _series_div(num_pi, den_pi, order - d, self._p, shift=d)

    def truncate(self, order: int) -> "RatFunc":
        """The pi-adic truncation sum_{e < order} c_e pi^e, a Laurent polynomial."""
        return RatFunc._make({-e: c for e, c in self.pi_expansion(order)}, _ONE, self._p)

    def reduce_mod(self, p: int) -> "RatFunc":
        """Reduce integer coefficients mod p.  Requires characteristic 0 input."""
        if self._p != 0:
            raise FieldError("reduction mod p needs a characteristic-0 element")
        fld = GF(p)
        num = {}
        for e, c in self._lau.items():
            num[e] = fld.coerce(c)
        den = {e: fld.coerce(c) for e, c in self._den.items()}
        den = {e: c for e, c in den.items() if c}
        if not den:
            raise DivisionByZero(f"denominator vanishes mod {p}")
        return RatFunc({e: c for e, c in num.items() if c}, den, fld)

    # text --------------------------------------------------------------

    def __str__(self):
        if self._den == _ONE:
            return _format_laurent(self._lau)
        return f"({_format_laurent(self._lau)})/({_format_laurent(self._den)})"

    def __repr__(self):
        return f"RatFunc({self}, char={self._p})"


def _as_dict(x, field: Field) -> dict:
    if isinstance(x, dict):
        items = x.items()
    elif isinstance(x, (list, tuple)):
        items = enumerate(x)
    else:
        items = [(0, x)]
    out = {}
    for e, c in items:
        c = field.coerce(c)
        if c:
            out[e] = c
    return out


def _canonical(num: dict, den: dict, p: int):
    """Reduce ``num / den`` (num Laurent, den a Laurent dict) to (lau, monic q)."""
    if not num:
        return {}, _ONE
    m, q = _strip_t(den)
    if m:
        num = _pshift(num, -m)
    if len(q) == 1:
        c = q[0]
        if c != 1:
            inv = _field(p).inv(c)
            num = {e: _norm(v * inv, p) for e, v in num.items()}
        return num, _ONE
    k, P = _strip_t(num)
    g = _pgcd(q, P, p)
    if len(g) > 1:
        P, r = _pdivmod(P, g, p)
        assert not r
        q, r = _pdivmod(q, g, p)
        assert not r
    lead = q[max(q)]
    if lead != 1:
        inv = _field(p).inv(lead)
        P = {e: _norm(v * inv, p) for e, v in P.items()}
        q = {e: _norm(v * inv, p) for e, v in q.items()}
    if len(q) == 1:
        q = _ONE
    return _pshift(P, k), q


def _series_div(a: dict, b: dict, upto: int, p: int, shift: int = 0) -> list:
    """Expand a/b as a pi-series, where b has constant term 1 and exponents >= 0.

    ``a`` may have negative exponents.  Returns ``[(e + shift, c)]`` for
    exponents ``e < upto``.
    """
    lo = min(a)
    out = []
    s: dict = {}
    bitems = [(i, c) for i, c in b.items() if i > 0]
    for e in range(lo, upto):
        v = a.get(e, 0)
        for i, c in bitems:
            w = s.get(e - i)
            if w:
                v -= c * w
        if p:
            v %= p
        elif isinstance(v, _MPQ) and v.denominator == 1:
            v = int(v)
        if v:
            s[e] = v
            out.append((e + shift, v))
    return out


def truncated_quotient(a: RatFunc, b: RatFunc, rel_order: int) -> RatFunc:
    """Laurent polynomial agreeing with a/b to pi-adic precision nu(a/b) + rel_order.

    No gcd is taken; this is the elimination multiplier used by the
    factorizations.
    """
    if not b._lau:
        raise DivisionByZero("truncated quotient by zero")
    p = a._p
    if not a._lau:
        return a
    num = _pmul(a._lau, b._den, p)
    den = _pmul(b._lau, a._den, p)
    num_pi = {-e: c for e, c in num.items()}
    den_pi = {-e: c for e, c in den.items()}
    m = min(den_pi)
    lead = den_pi[m]
    fld = _field(p)
    inv = fld.inv(lead)
    den_pi = {e - m: _norm(c * inv, p) for e, c in den_pi.items()}
    num_pi = {e: _norm(c * inv, p) for e, c in num_pi.items()}
    nu = min(num_pi) - m
    terms = _series_div(num_pi, den_pi, nu + m + rel_order, p, shift=-m)
    return RatFunc._make({-e: c for e, c in terms}, _ONE, p)


def _format_coeff(c) -> str:
    return str(c)


def _format_laurent(lau: dict) -> str:
    if not lau:
        return "0"
    parts = []
    for e in sorted(lau, reverse=True):
        c = lau[e]
        neg = c < 0
        a = -c if neg else c
        if e == 0:
            body = _format_coeff(a)
        else:
            mono = "t" if e == 1 else f"t^{e}"
            body = mono if a == 1 else f"{_format_coeff(a)}*{mono}"
        if not parts:
            parts.append(("-" if neg else "") + body)
        else:
            parts.append((" - " if neg else " + ") + body)
    return "".join(parts)


# ---------------------------------------------------------------------------
# spec-level operations


def field_arith(a: RatFunc, b: RatFunc, op: str) -> RatFunc:
    if op == "add":
        return a + b
    if op == "sub":
        return a - b
    if op == "mul":
        return a * b
    if op == "div":
        return a / b
    raise ValueError(f"unknown operation {op!r}")


def val_infinity(x: RatFunc):
    return x.valuation()


def pi_expansion(x: RatFunc, order: int) -> list:
    return x.pi_expansion(order)


# ---------------------------------------------------------------------------
# parser

_TOKEN = re.compile(r"\s*(?:(\d+)|(t)|(\^)|([-+*/(),;\[\]]))")


def _tokenize(text: str):
    pos = 0
    toks = []
    n = len(text)
    while pos < n:
        if text[pos].isspace():
            pos += 1
            continue
        m = _TOKEN.match(text, pos)
        if not m:
            raise ParseError(f"unexpected character {text[pos]!r}", pos)
        start = m.start(m.lastindex)
        toks.append((m.group(m.lastindex), start))
        pos = m.end()
    toks.append(("$", n))
    return toks


class _Parser:
    def __init__(self, text: str, field: Field):
        self.toks = _tokenize(text)
        self.i = 0
        self.field = field

    def peek(self):
        return self.toks[self.i][0]

    def pos(self):
        return self.toks[self.i][1]

    def take(self, expected=None):
        tok, pos = self.toks[self.i]
        if expected is not None and tok != expected:
            shown = "end of input" if tok == "$" else repr(tok)
            raise ParseError(f"expected {expected!r}, found {shown}", pos)
        self.i += 1
        return tok

    def expr(self) -> RatFunc:
        x = self.term()
        while self.peek() in ("+", "-"):
            op = self.take()
            y = self.term()
            x = x + y if op == "+" else x - y
        return x

    def term(self) -> RatFunc:
        x = self.factor()
        while self.peek() in ("*", "/"):
            op = self.take()
            pos = self.pos()
            y = self.factor()
            if op == "*":
                x = x * y
            else:
                if y.is_zero():
                    # a literal like 1/2 over F_2 lands here
                    if self.field.char:
                        raise CoefficientError(
                            f"divisor is zero in GF({self.field.char})", pos)
                    raise ParseError("division by zero", pos)
                x = x / y
        return x

    def factor(self) -> RatFunc:
        tok = self.peek()
        pos = self.pos()
        if tok == "-":
            self.take()
            return -self.factor()
        if tok == "(":
            self.take()
            x = self.expr()
            self.take(")")
            return x
        if tok == "t":
            self.take()
            e = 1
            if self.peek() == "^":
                self.take()
                sign = 1
                if self.peek() in ("-", "+"):
                    sign = -1 if self.take() == "-" else 1
                etok = self.peek()
                if not etok.isdigit():
                    raise ParseError("expected integer exponent", self.pos())
                self.take()
                e = sign * int(etok)
            return RatFunc.t(self.field, e)
        if tok.isdigit():
            self.take()
            return RatFunc.const(int(tok), self.field)
        shown = "end of input" if tok == "$" else repr(tok)
        raise ParseError(f"unexpected {shown}", pos)

    def matrix(self):
        self.take("[")
        rows = [self.row()]
        while self.peek() == ";":
            self.take()
            rows.append(self.row())
        self.take("]")
        width = len(rows[0])
        for r in rows:
            if len(r) != width:
                raise ParseError("ragged matrix rows", self.pos())
        return rows

    def row(self):
        out = [self.expr()]
        while self.peek() == ",":
            self.take()
            out.append(self.expr())
        return out


def parse_expr(text: str, field: Field = QQ):
    """Parse a field element or a bracketed matrix literal.

    Returns a :class:`RatFunc`, or a :class:`~burau_pong.matlin.Mat` for
    ``[a, b, c; d, e, f; g, h, i]``.
    """
    parser = _Parser(text, field)
    if parser.peek() == "[":
        from .matlin import Mat

        rows = parser.matrix()
        parser.take("$")
        return Mat(rows)
    x = parser.expr()
    parser.take("$")
    return x


def format_matrix(m) -> str:
    return "[" + "; ".join(", ".join(str(x) for x in row) for row in m.rows()) + "]"


def iter_coeffs(x: RatFunc) -> Iterable:
    return iter(x._lau.values())
