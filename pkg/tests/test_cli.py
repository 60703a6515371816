import json

import pytest

from steiner_sieve.cli import main


def run(argv, capsys):
    code = main(argv)
    out = capsys.readouterr()
    return code, out.out, out.err


def test_xgcd_cert_g2(capsys):
    code, out, _ = run(["xgcd-cert", "--candidate", "G2-parabolic"], capsys)
    assert code == 0
    assert "r1          160*q" in out or "160" in out.split("r1", 1)[1].splitlines()[0]
    assert "gcd(|T_alpha|(q), (v-1)(v-2)(q)) divides r1(q)" in out
    assert "checked: True" in out


def test_xgcd_cert_2b2(capsys):
    code, out, _ = run(["xgcd-cert", "--candidate", "2b2-parabolic"], capsys)
    assert code == 0 and "deg |T_alpha|" in out


def test_unknown_candidate(capsys):
    code, _, err = run(["xgcd-cert", "--candidate", "nope"], capsys)
    assert code == 2 and "unknown candidate" in err
    assert run(["sieve", "--candidate", "nope"], capsys)[0] == 2


def test_usage_errors(capsys):
    assert run([], capsys)[0] == 2
    assert run(["sieve", "--candidate", "all", "--qcap", "1"], capsys)[0] == 2
    assert run(["sieve", "--candidate", "all", "--workers", "0"], capsys)[0] == 2
    assert run(["build-plane", "--e", "4"], capsys)[0] == 2
    assert run(["build-plane", "--e", "5"], capsys)[0] == 2  # needs --long


def test_sieve_sporadic(tmp_path, capsys):
    out = tmp_path / "r.json"
    code, stdout, _ = run(["sieve", "--candidate", "2b2-5:4-q8", "--out", str(out)], capsys)
    assert code == 0
    rep = json.loads(out.read_text())["reports"][0]
    assert all(not v.get("surviving_ks") and "error" not in v for v in rep["verdicts"])
    assert "catalog_checksum" in rep


def test_sieve_2b2_qcap(tmp_path, capsys):
    out = tmp_path / "r.json"
    code, _, _ = run(["sieve", "--candidate", "2b2-parabolic", "--qcap", "128", "--out", str(out)], capsys)
    rep = json.loads(out.read_text())["reports"][0]
    surv = {v["q"]: [s["k"] for s in v["surviving_ks"]] for v in rep["verdicts"] if v.get("surviving_ks")}
    assert surv == {8: [5, 9], 32: [33], 128: [129]}
    # k = q+1 is the known family and (8, 5) is resolved by the orbit test
    assert code == 0 and rep["unexpected_survivors"] == []


def test_sieve_g2_su3(tmp_path, capsys):
    out = tmp_path / "r.json"
    code, _, _ = run(["sieve", "--candidate", "G2-SU3", "--qcap", "1000", "--out", str(out)], capsys)
    rep = json.loads(out.read_text())["reports"][0]
    assert code == 0
    assert all(not v.get("surviving_ks") and "error" not in v for v in rep["verdicts"])


def test_sieve_stdout_is_json(capsys):
    code, out, err = run(["sieve", "--candidate", "2b2-5:4-q8"], capsys)
    assert code == 0
    assert json.loads(out)["reports"][0]["candidate"]
    assert "survivors" in err


def test_sieve_byte_identical(tmp_path, capsys):
    a, b = tmp_path / "a.json", tmp_path / "b.json"
    run(["sieve", "--candidate", "all", "--seed", "7", "--out", str(a)], capsys)
    run(["sieve", "--candidate", "all", "--seed", "7", "--workers", "2", "--out", str(b)], capsys)
    assert a.read_bytes() == b.read_bytes()


@pytest.fixture(scope="module")
def plane_files(tmp_path_factory):
    d = tmp_path_factory.mktemp("plane")
    plane, grp = d / "plane.txt", d / "sz8.txt"
    assert main(["build-plane", "--e", "3", "--out", str(plane), "--emit-group", str(grp)]) == 0
    return plane, grp


def test_build_plane(plane_files, capsys):
    plane, grp = plane_files
    assert plane.read_text().splitlines()[0] == "65 9 520"
    assert grp.read_text().startswith("degree 65")


def test_build_plane_summary(tmp_path, capsys):
    code, out, _ = run(["build-plane", "--e", "3", "--out", str(tmp_path / "p.txt")], capsys)
    assert code == 0
    assert "block-transitive: true" in out and "flag-transitive: false" in out
    assert "lambda1 = 72, lambda2 = 9" in out


def test_verify_plane(plane_files, capsys):
    plane, grp = plane_files
    code, out, _ = run(["verify", str(plane), "--group", str(grp)], capsys)
    assert code == 0
    assert "steiner 3-design: pass" in out and "group order = 29120" in out


def test_verify_mutated(plane_files, tmp_path, capsys):
    plane, _ = plane_files
    lines = plane.read_text().splitlines()
    blk = lines[1].split()
    blk[-1] = "64" if blk[-1] != "64" else "63"
    lines[1] = " ".join(blk)
    bad = tmp_path / "bad.txt"
    bad.write_text("\n".join(lines) + "\n")
    code, out, _ = run(["verify", str(bad)], capsys)
    assert code == 1 and "FAIL, triple" in out


def test_verify_parse_error(plane_files, tmp_path, capsys):
    plane, _ = plane_files
    lines = plane.read_text().splitlines()
    bad = tmp_path / "short.txt"
    bad.write_text("\n".join(lines[:-1]) + "\n")
    code, _, err = run(["verify", str(bad)], capsys)
    assert code == 2 and "520 blocks" in err
    bad.write_text("65 9 520\n0 1 2\n")
    code, _, err = run(["verify", str(bad)], capsys)
    assert code == 2 and "line 2" in err


def test_verify_missing_file(capsys):
    assert run(["verify", "/nonexistent/plane.txt"], capsys)[0] == 2


def test_catalog_env_override(tmp_path, monkeypatch, capsys):
    monkeypatch.setenv("STEINER_SIEVE_CATALOG", str(tmp_path / "missing.toml"))
    assert run(["sieve", "--candidate", "all"], capsys)[0] == 2
