from __future__ import annotations

from fractions import Fraction

import pytest

from burau_pong.building import apartment_membership, canon_coords, sector_membership, vertex_sqdist
from burau_pong.burau import (
    CONSTANTS_TEXT,
    BuiltinError,
    GroupWord,
    builtin,
    evaluate_word,
    load_constants,
    parse_constants,
    reduce_mod_p,
    words,
)
from burau_pong.exactfield import GF, RatFunc
from burau_pong.matlin import Mat

T = RatFunc.t()
PAIRS = [(1, 1), (1, -1), (-1, 1), (-1, -1)]


def at(M: Mat, x: Fraction):
    """Numeric matrix from the stored numerator/denominator dicts."""
    def ev(r):
        num = sum(Fraction(c) * x**e for e, c in r.num.items())
        den = sum(Fraction(c) * x**e for e, c in r.den.items())
        return num / den

    return [[ev(M[i, j]) for j in range(3)] for i in range(3)]


def mul(A, B):
    return [[sum(A[i][l] * B[l][j] for l in range(3)) for j in range(3)] for i in range(3)]


def test_conjugacy_numerically(data):
    # k s = s f, checked at rational points without the Mat arithmetic
    for x in (Fraction(2), Fraction(-3, 5), Fraction(7)):
        assert mul(at(data.k, x), at(data.s, x)) == mul(at(data.s, x), at(data.f, x))


def test_constant_examples(data):
    assert data.s @ data.f @ data.s.inverse() == data.k
    assert data.b[(1, 1)].column(2) == (T, -(T**-1 + T), RatFunc.one())
    assert data.v_plus["f"] == data.v.act(data.f)
    assert apartment_membership(data.frame("f"), data.v_plus["f"]) == (-1, 0, 1)
    assert data.f.det().is_one() and data.k.det().is_one()


def test_named_objects(data):
    assert data.G["f"].rep == Mat.identity()
    for sym in ("f", "f^-1", "k", "k^-1"):
        assert data.C[sym] == data.G[sym].act(data.matrix(sym))
    assert all(ok for _, _, ok in data.checks)
    assert len(data.checks) == 20


def test_each_pair_frame_contains_positive_powers_only(data):
    for pair in PAIRS:
        F = data.frames[pair]
        g = data.matrix("f" if pair[0] > 0 else "f^-1")
        h = data.matrix("k" if pair[1] > 0 else "k^-1")
        assert apartment_membership(F, data.v) is None
        for n in range(1, 21):
            assert apartment_membership(F, data.v.act(g**n)) is not None
            assert apartment_membership(F, data.v.act(h**n)) is not None


def test_axis_translation_on_box(data):
    F = data.frame("f")
    for a in range(-4, 5):
        for b in range(-4, 5):
            for c in range(-4, 5):
                V = F.vertex((a, b, c)).act(data.f)
                assert apartment_membership(F, V) == canon_coords((a - 1, b, c + 1))


def test_sector_orders(data):
    assert sector_membership(data.S["f^-1"], data.v.act(data.f**-4))
    assert not sector_membership(data.S["f^-1"], data.v.act(data.f**2))
    assert sector_membership(data.T["k"], data.v.act(data.k**3))


def test_reduce_mod_p(data):
    f2 = reduce_mod_p(data.f, 2)
    assert f2 == Mat.diag([RatFunc.t(GF(2)), 1, RatFunc.pi(GF(2))], GF(2))
    d3 = builtin(3)
    assert d3.s @ d3.f @ d3.s.adjugate() == d3.k.scale(d3.s.det())
    assert reduce_mod_p(Mat.identity(), 7) == Mat.identity(field=GF(7))


def test_words():
    assert evaluate_word(GroupWord(())) == Mat.identity()
    assert evaluate_word(GroupWord((("f", 1), ("k", 1), ("f", -1), ("k", -1)))) != Mat.identity()
    assert evaluate_word(GroupWord((("f", 3), ("k", 3), ("f", -3), ("k", -3)))) != Mat.identity()
    with pytest.raises(ValueError):
        GroupWord((("f", 1), ("f", 2)))
    with pytest.raises(ValueError):
        GroupWord((("k", 0),))
    # blocks alternate letters, so there are 4 * 2^(L-1) words with L blocks of exponent +-1
    assert len(words(4)) == 4 + 8 + 16 + 32
    assert len(set(words(4))) == 60


def test_word_inverse_cancels(data):
    w = GroupWord((("f", 2), ("k", -1), ("f", 1)))
    inv = GroupWord(tuple((a, -e) for a, e in reversed(w.blocks)))
    assert evaluate_word(w) @ evaluate_word(inv) == Mat.identity()


def test_builtin_over_prime_fields(any_data):
    assert all(ok for _, _, ok in any_data.checks)
    assert vertex_sqdist(any_data.v_plus["f"], any_data.v_plus["k"]) == 6


@pytest.mark.parametrize("old, new, entry", [
    ("f = [t, 0, 0", "f = [t^2, 0, 0", "f"),
    ("-(t^-1 + t); 0, 0, 1]\nb_f_kinv", "-(t^-1 - t); 0, 0, 1]\nb_f_kinv", "b_f_k"),
    ("s = [1, 1, t^-1", "s = [1, 1, t^-2", "s"),
])
def test_corrupted_constants_fail_loudly(old, new, entry):
    text = CONSTANTS_TEXT.replace(old, new, 1)
    assert text != CONSTANTS_TEXT
    with pytest.raises(BuiltinError) as err:
        load_constants(text)
    assert err.value.entry.startswith(entry) or entry in str(err.value)


def test_missing_and_malformed_entries():
    with pytest.raises(BuiltinError) as err:
        parse_constants("f = [t, 0, 0; 0, 1, 0; 0, 0, t^-1]")
    assert err.value.entry == "k"
    with pytest.raises(BuiltinError) as err:
        parse_constants(CONSTANTS_TEXT.replace("f = [t, 0, 0", "f = [t, 0,, 0", 1))
    assert err.value.entry == "f"
