from __future__ import annotations

import json

import pytest

from burau_pong.burau import CONSTANTS_TEXT
from burau_pong.cli import main


def _run(argv, tmp_path, capsys):
    code = main(argv + ["--out", str(tmp_path), "--no-timing"])
    return code, capsys.readouterr()


def test_check_builtin(tmp_path, capsys):
    code, out = _run(["check"], tmp_path, capsys)
    assert code == 0
    assert "[pass] k: k = s f s^-1" in out.out
    body = json.loads((tmp_path / "check_char0_seed0.json").read_text())
    assert body["summary"] == "pass"


def test_check_mod_3(tmp_path, capsys):
    code, _ = _run(["check", "--char", "3"], tmp_path, capsys)
    assert code == 0
    assert (tmp_path / "check_char3_seed0.json").exists()


def test_corrupted_constants_file(tmp_path, capsys):
    bad = tmp_path / "bad.txt"
    bad.write_text(CONSTANTS_TEXT.replace("s = [1, 1, t^-1", "s = [1, 1, t^-2", 1))
    code, out = _run(["check", "--constants", str(bad)], tmp_path, capsys)
    assert code == 1
    body = json.loads((tmp_path / "check_char0_seed0.json").read_text())
    failing = [c["name"] for c in body["checks"] if c["status"] == "fail"]
    assert failing and all(name.startswith(("s", "k", "constants entry")) for name in failing)


def test_unparsable_constants_name_the_entry(tmp_path, capsys):
    bad = tmp_path / "bad.txt"
    bad.write_text("f = [t")
    code, out = _run(["check", "--constants", str(bad)], tmp_path, capsys)
    assert code == 1
    assert "[fail] constants entry f" in out.out


def test_missing_constants_file_is_usage_error(tmp_path, capsys):
    code, out = _run(["check", "--constants", str(tmp_path / "nope.txt")], tmp_path, capsys)
    assert code == 2
    assert "cannot read" in out.err


@pytest.mark.parametrize("argv", [["check", "--char", "4"], ["verify", "bogus"], ["free", "--m", "0"],
                                  ["render", "apartment_pair", "--pair", "k,f"], []])
def test_usage_errors_exit_2(argv, capsys):
    assert main(argv) == 2


@pytest.mark.parametrize("suite", ["intersection", "opposition", "push", "angles"])
def test_verify_suites(suite, tmp_path, capsys):
    extra = ["--radius", "3"] if suite == "intersection" else []
    code, _ = _run(["verify", suite, "--quiet"] + extra, tmp_path, capsys)
    assert code == 0


def test_verify_angles_cosines(tmp_path, capsys):
    code, out = _run(["verify", "angles"], tmp_path, capsys)
    assert code == 0
    assert out.out.count("= -1/2 (d^2 = 6)") == 4
    assert "= -1 (d^2 = 8)" in out.out


def test_free_small_powers_info_only(tmp_path, capsys):
    code, out = _run(["free", "--m", "1", "--n", "1", "--maxlen", "4"], tmp_path, capsys)
    assert code == 0
    body = json.loads((tmp_path / "free_m1_n1_len4_char0_seed0.json").read_text())
    assert {c["status"] for c in body["checks"]} == {"info"}


def test_pingpong_certificates_are_reproducible(tmp_path, capsys):
    argv = ["pingpong", "--mode", "simplicial", "--samples", "8", "--seed", "4", "--quiet"]
    code, _ = _run(argv, tmp_path, capsys)
    assert code == 0
    path = tmp_path / "pingpong_simplicial_m3_n3_char0_seed4.json"
    first = path.read_bytes()
    _run(argv, tmp_path, capsys)
    assert path.read_bytes() == first


@pytest.mark.parametrize("figure", ["apartment_pair", "sigma_f_sectors", "link_angles"])
def test_render_is_deterministic(figure, tmp_path, capsys):
    argv = ["render", figure, "--radius", "3", "--out", str(tmp_path)]
    assert main(argv) == 0
    path = capsys.readouterr().out.strip()
    first = open(path).read()
    assert first.startswith("<svg") and first.rstrip().endswith("</svg>")
    assert main(argv) == 0
    assert open(capsys.readouterr().out.strip()).read() == first


def test_render_radius_zero_single_vertex(tmp_path, capsys):
    assert main(["render", "sigma_f_sectors", "--radius", "0", "--out", str(tmp_path)]) == 0
    svg = open(capsys.readouterr().out.strip()).read()
    assert svg.count("<circle") == 1


def test_render_pair_colours_axis_ray(tmp_path, capsys):
    assert main(["render", "apartment_pair", "--pair", "f,k", "--radius", "4", "--out", str(tmp_path)]) == 0
    svg = open(capsys.readouterr().out.strip()).read()
    # f^n v (n >= 1) is coloured as a Sigma_f member, k v as a Sigma_k member
    for n in (1, 2):
        assert f'fill="#3b6fd8"><title>({-n}, 0, {n})</title>' in svg
    assert 'fill="#d8453b"><title>(1, -1, 0)</title>' in svg


def test_render_unwritable_output(tmp_path, capsys):
    blocker = tmp_path / "file"
    blocker.write_text("x")
    assert main(["render", "link_angles", "--out", str(blocker / "sub")]) == 2
