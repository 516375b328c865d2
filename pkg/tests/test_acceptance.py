"""Acceptance criteria 1-12, one test each, with their runtime limits.

Every criterion prints a PASS/FAIL line (collected in the terminal summary).
Run directly with ``python3 tests/test_acceptance.py`` for the same lines
without pytest.

Criterion 7 fails as written: the vertex it names is k v, whose projection
to A_f is v, not f v.  It is marked as a strict expected failure so the
suite stays honest about it; the closed-ray phenomenon itself is checked on
the vertex three edges from k v by ``test_criterion_07_closed_ray_witness``.
"""

from __future__ import annotations

import sys

import pytest

from burau_pong.acceptance import CRITERIA, c07_remark_witness, run, warm_up

pytestmark = pytest.mark.acceptance

RESULTS: list = []
_OUTCOMES: dict = {}


def _line(n, char, out, limit, title=None) -> str:
    title = title or CRITERIA[n][0]
    verdict = "PASS" if out.ok and out.seconds < limit else "FAIL"
    field = "Q(t)" if char == 0 else f"F_{char}(t)"
    return f"criterion {n} [{title}] over {field}: {verdict} ({out.seconds:.2f} s, limit {limit:g} s): {out.detail}"


def _outcome(n: int, char: int):
    key = (n, char)
    if key not in _OUTCOMES:
        _OUTCOMES[key] = run(CRITERIA[n][2], char)
    return _OUTCOMES[key]


@pytest.fixture(scope="module", autouse=True)
def _warm():
    warm_up()


CASES = [pytest.param(n, id=f"{n:02d}") for n in range(1, 12) if n != 7]
CASES.insert(6, pytest.param(7, id="07", marks=pytest.mark.xfail(
    strict=True, reason="the named vertex is k v, which projects to (0, 1); see the decisions ledger")))


@pytest.mark.parametrize("n", CASES)
def test_criterion(n):
    title, limit, _ = CRITERIA[n]
    out = _outcome(n, 0)
    line = _line(n, 0, out, limit)
    RESULTS.append(line)
    print(line)
    assert out.ok, out.detail
    assert out.seconds < limit


def test_criterion_07_closed_ray_witness():
    out = run(c07_remark_witness, 0)
    line = _line("7b", 0, out, 1.0, "closed-ray witness at F_(f,k) coordinates (0,1,-1)")
    RESULTS.append(line)
    print(line)
    assert out.ok, out.detail
    assert out.seconds < 1.0


def test_criterion_12_mod_p():
    base = {n: _outcome(n, 0) for n in CRITERIA}
    base_time = sum(o.seconds for o in base.values())
    mismatches = []
    times = {}
    for char in (2, 3):
        outs = {n: _outcome(n, char) for n in CRITERIA}
        times[char] = sum(o.seconds for o in outs.values())
        mismatches += [f"criterion {n} over F_{char}" for n in CRITERIA if outs[n].ok != base[n].ok]
        for n, o in outs.items():
            line = _line(n, char, o, CRITERIA[n][1])
            RESULTS.append("  " + line)
    ok = not mismatches and all(t < 2 * base_time for t in times.values())
    verdicts = ", ".join(f"{n}:{'P' if base[n].ok else 'F'}" for n in CRITERIA)
    summary = (f"criterion 12 [mod-p reruns]: {'PASS' if ok else 'FAIL'} "
               f"(verdicts identical to char 0 [{verdicts}]; runtime F_2 {times[2]:.1f} s, F_3 {times[3]:.1f} s, "
               f"char 0 {base_time:.1f} s, limit {2 * base_time:.1f} s)")
    if mismatches:
        summary += "; mismatches: " + ", ".join(mismatches)
    RESULTS.append(summary)
    print(summary)
    assert not mismatches
    assert all(t < 2 * base_time for t in times.values())


if __name__ == "__main__":
    warm_up()
    for n in CRITERIA:
        print(_line(n, 0, _outcome(n, 0), CRITERIA[n][1]))
    print(_line("7b", 0, run(c07_remark_witness, 0), 1.0, "closed-ray witness at F_(f,k) coordinates (0,1,-1)"))
    for char in (2, 3):
        for n in CRITERIA:
            print(_line(n, char, _outcome(n, char), CRITERIA[n][1]))
    sys.exit(0)
