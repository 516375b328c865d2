"""The concrete matrices f, k, s, the frames F_{g,h}, and derived named objects.

Constants live here as text in the exactfield grammar and are parsed on
first use by :func:`builtin`.  Every structural relation between
them is re-checked on construction, so a transcription slip fails loudly.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache
from typing import Iterable, Mapping, Sequence

from .building import (
    Chamber,
    ChamberAtInfinity,
    Frame,
    SectorSpec,
    Vertex,
    chambers_at_infinity_opposite,
)
from .exactfield import QQ, Field, FieldError, GF, parse_expr
from .matlin import Mat
from .retractions import AxisProjector, Retraction

__all__ = [
    "CONSTANTS_TEXT",
    "BuiltinError",
    "NamedData",
    "GroupWord",
    "builtin",
    "load_constants",
    "parse_constants",
    "evaluate_word",
    "reduce_mod_p",
    "SYMBOLS",
]

CONSTANTS_TEXT = """\
# generators
f = [t, 0, 0; 0, 1, 0; 0, 0, t^-1]
k = [0, -1 - t, -t^-1 - 1 - t; 0, t^-1 + 1 + t, t^-2 + t^-1 + 1 + t; 1, 0, 0]
s = [1, 1, t^-1; -(t^-2 + 1), -(t^-1 + 1), -(t^-2 + 1); t^-1, 1, 1]

# change-of-basis matrices for the apartments through both axes
b_f_k = [1, t^-1 - 1, t; 0, 1 - t^-1, -(t^-1 + t); 0, 0, 1]
b_f_kinv = [1, 1 - t, t^-1; 0, 1 - t^-1, -(t^-2 + 1); 0, 0, 1]
b_finv_k = [1, 0, 0; -(t^-2 + 1), 1 - t^-1, 0; t^-1, 1 - t, 1]
b_finv_kinv = [1, 0, 0; -(t^-1 + t), 1 - t^-1, 0; t, t^-1 - 1, 1]

# frame lines, one column per line, in tabulated order
frame_f_k = [1, t^-1 - 1, t; 0, 1 - t^-1, -(t^-1 + t); 0, 0, 1]
frame_f_kinv = [1, 1 - t, t^-1; 0, 1 - t^-1, -(t^-2 + 1); 0, 0, 1]
frame_finv_k = [0, 0, 1; 0, 1 - t^-1, -(t^-2 + 1); 1, 1 - t, t^-1]
frame_finv_kinv = [0, 0, 1; 0, 1 - t^-1, -(t^-1 + t); 1, t^-1 - 1, t]
"""

REQUIRED = ("f", "k", "s", "b_f_k", "b_f_kinv", "b_finv_k", "b_finv_kinv",
            "frame_f_k", "frame_f_kinv", "frame_finv_k", "frame_finv_kinv")

SYMBOLS = ("f", "f^-1", "k", "k^-1")

_PAIR_NAMES = {(1, 1): "f_k", (1, -1): "f_kinv", (-1, 1): "finv_k", (-1, -1): "finv_kinv"}


class BuiltinError(RuntimeError):
    """A named constant failed one of its consistency checks."""

    def __init__(self, entry: str, message: str):
        super().__init__(f"{entry}: {message}")
        self.entry = entry


def parse_constants(text: str, field: Field = QQ) -> dict:
    """Parse ``name = matrix`` lines; '#' starts a comment."""
    out = {}
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise BuiltinError(f"line {lineno}", "expected 'name = [matrix]'")
        name, expr = (x.strip() for x in line.split("=", 1))
        try:
            value = parse_expr(expr, field)
        except (ValueError, FieldError) as exc:
            raise BuiltinError(name, f"does not parse: {exc}") from exc
        if not isinstance(value, Mat) or value.n != 3:
            raise BuiltinError(name, "expected a 3x3 matrix")
        out[name] = value
    missing = [n for n in REQUIRED if n not in out]
    if missing:
        raise BuiltinError(missing[0], "missing entry")
    return out


def reduce_mod_p(M: Mat, p: int) -> Mat:
    return M.reduce_mod(p)


@dataclass(frozen=True)
class GroupWord:
    """A reduced word: blocks (letter, exponent) with alternating letters."""

    blocks: tuple = ()

    def __post_init__(self):
        blocks = tuple((str(a), int(e)) for a, e in self.blocks)
        for i, (a, e) in enumerate(blocks):
            if a not in ("f", "k"):
                raise ValueError(f"unknown letter {a!r}")
            if e == 0:
                raise ValueError("block exponents must be nonzero")
            if i and blocks[i - 1][0] == a:
                raise ValueError("consecutive blocks must use distinct letters")
        object.__setattr__(self, "blocks", blocks)

    def __str__(self):
        return " ".join(f"{a}^{e}" for a, e in self.blocks) or "1"


def evaluate_word(w: GroupWord, data: "NamedData | None" = None) -> Mat:
    data = data or builtin()
    out = Mat.identity(3, data.field)
    for a, e in w.blocks:
        out = out @ data.power(a, e)
    return out


@dataclass
class NamedData:
    """The named matrices and every building object derived from them."""

    field: Field
    f: Mat
    k: Mat
    s: Mat
    b: Mapping
    frames: Mapping
    table_frames: Mapping
    v: Vertex
    v_plus: Mapping
    v_minus: Mapping
    G: Mapping
    C: Mapping
    S: Mapping
    T: Mapping
    xi: Mapping
    checks: list = field(default_factory=list)
    _cache: dict = field(default_factory=dict, repr=False)

    @property
    def char(self) -> int:
        return self.field.char

    def matrix(self, symbol: str) -> Mat:
        key = ("mat", symbol)
        if key not in self._cache:
            base = {"f": self.f, "k": self.k}[symbol[0]]
            self._cache[key] = base if len(symbol) == 1 else base.adjugate()
        return self._cache[key]

    def power(self, letter: str, e: int) -> Mat:
        key = ("pow", letter, e)
        if key not in self._cache:
            g = self.matrix(letter if e > 0 else letter + "^-1")
            self._cache[key] = g ** abs(e)
        return self._cache[key]

    def frame(self, letter: str) -> Frame:
        return self.S[letter].frame

    def rho(self, symbol: str) -> Retraction:
        """The retraction onto Sigma_g based at C_g."""
        key = ("rho", symbol)
        if key not in self._cache:
            self._cache[key] = Retraction(self.S[symbol].frame, self.C[symbol])
        return self._cache[key]

    def projector(self, letter: str) -> AxisProjector:
        key = ("proj", letter)
        if key not in self._cache:
            if letter == "f":
                self._cache[key] = AxisProjector(self.field, None, "f")
            else:
                self._cache[key] = AxisProjector(self.field, self.s.adjugate(), "k")
        return self._cache[key]


def _flag(g: Mat, order: Sequence[int]) -> ChamberAtInfinity:
    return ChamberAtInfinity.from_basis(g, order)


def _check(checks: list, entry: str, ok: bool, message: str):
    checks.append((entry, message, ok))
    if not ok:
        raise BuiltinError(entry, message)


def build_named_data(mats: Mapping, field: Field = QQ) -> NamedData:
    """Assemble and verify :class:`NamedData` from parsed matrices."""
    checks: list = []
    f, k, s = mats["f"], mats["k"], mats["s"]
    one = Mat.identity(3, field)

    _check(checks, "f", f.det() == one[0, 0], "det f = 1")
    _check(checks, "k", k.det() == one[0, 0], "det k = 1")
    _check(checks, "s", not s.det().is_zero(), "s is invertible")
    _check(checks, "k", k @ s == s @ f, "k = s f s^-1")
    for name in ("f", "k"):
        g = mats[name]
        _check(checks, name, all(x.is_laurent() for r in g for x in r) and _integral(g),
               f"{name} has Laurent polynomial entries with integer coefficients")

    xi = {
        "f": _flag(one, (0, 1, 2)),
        "f^-1": _flag(one, (2, 1, 0)),
        "k": _flag(s, (0, 1, 2)),
        "k^-1": _flag(s, (2, 1, 0)),
    }
    for i, a in enumerate(SYMBOLS):
        for b in SYMBOLS[i + 1:]:
            _check(checks, f"xi_{a}/xi_{b}", chambers_at_infinity_opposite(xi[a], xi[b]),
                   f"ends xi_{a} and xi_{b} are opposite")

    b = {}
    frames = {}
    table_frames = {}
    for pair, tag in _PAIR_NAMES.items():
        bm = mats["b_" + tag]
        tm = mats["frame_" + tag]
        F = Frame(bm, "F_" + tag)
        TF = Frame(tm, "table_" + tag)
        _check(checks, "frame_" + tag, F.same_apartment(TF),
               f"b_{tag} columns span the tabulated lines of F_{tag}")
        g = "f" if pair[0] > 0 else "f^-1"
        h = "k" if pair[1] > 0 else "k^-1"
        _check(checks, "frame_" + tag, TF.contains_flag(xi[g]) and TF.contains_flag(xi[h]),
               f"F_{tag} bounds both xi_{g} and xi_{h}")
        b[pair] = bm
        frames[pair] = F
        table_frames[pair] = TF

    Ff = Frame(one, "F_f")
    Fk = Frame(s, "F_k")
    w0 = Mat.monomial((2, 1, 0), (0, 0, 0), field)
    fi, ki = f.adjugate(), k.adjugate()
    G = {"f": Chamber(one), "f^-1": Chamber(w0), "k": Chamber(s), "k^-1": Chamber(s @ w0)}
    gens = {"f": f, "f^-1": fi, "k": k, "k^-1": ki}
    C = {g: G[g].act(gens[g]) for g in SYMBOLS}
    up, down = (0, 1, 2), (2, 1, 0)
    S = {
        "f": SectorSpec(Ff, (0, 0, 0), up, "S_f"),
        "f^-1": SectorSpec(Ff, (0, 0, 0), down, "S_f^-1"),
        "k": SectorSpec(Fk, (0, 0, 0), up, "S_k"),
        "k^-1": SectorSpec(Fk, (0, 0, 0), down, "S_k^-1"),
    }
    T = {
        "f": S["f"].translate((-1, 0, 1)),
        "f^-1": S["f^-1"].translate((1, 0, -1)),
        "k": S["k"].translate((-1, 0, 1)),
        "k^-1": S["k^-1"].translate((1, 0, -1)),
    }
    T = {g: SectorSpec(T[g].frame, T[g].tip, T[g].order, "T_" + g) for g in SYMBOLS}
    v = Vertex(one)
    v_plus = {"f": v.act(f), "k": v.act(k)}
    v_minus = {"f": v.act(fi), "k": v.act(ki)}
    return NamedData(field, f, k, s, b, frames, table_frames, v, v_plus, v_minus,
                     G, C, S, T, xi, checks)


def _integral(g: Mat) -> bool:
    if g.char:
        return True
    for r in g:
        for x in r:
            for c in x.laurent_coeffs().values():
                if getattr(c, "denominator", 1) != 1:
                    return False
    return True


def load_constants(text: str, char: int = 0) -> NamedData:
    """Parse constants text over Q, optionally reduce mod p, and verify."""
    mats = parse_constants(text, QQ)
    field = QQ
    if char:
        field = GF(char)
        try:
            mats = {name: reduce_mod_p(m, char) for name, m in mats.items()}
        except FieldError as exc:
            raise BuiltinError("reduction", str(exc)) from exc
    return build_named_data(mats, field)


@lru_cache(maxsize=None)
def builtin(char: int = 0) -> NamedData:
    """The verified named data over Q(t) (char 0) or F_p(t)."""
    return load_constants(CONSTANTS_TEXT, char)


def words(max_blocks: int, letters: Iterable = ("f", "k"), exps: Sequence[int] = (1, -1)):
    """All reduced words with block exponents from ``exps`` up to ``max_blocks`` blocks."""
    letters = tuple(letters)
    out = []

    def extend(prefix):
        if prefix:
            out.append(GroupWord(tuple(prefix)))
        if len(prefix) == max_blocks:
            return
        for a in letters:
            if prefix and prefix[-1][0] == a:
                continue
            for e in exps:
                prefix.append((a, e))
                extend(prefix)
                prefix.pop()

    extend([])
    return out
