import json

import numpy as np
import pytest

from braidforge import repfile
from braidforge.cli import main, parse_complex
from braidforge.errors import ParseError
from braidforge.reps import SemidirectRep, restrict_to_pure, scalar_seed
from braidforge.suites import tower_suite

T = np.exp(1j * np.pi / 3)


@pytest.fixture
def seed_file(tmp_path):
    path = tmp_path / "seed.json"
    repfile.write(path, scalar_seed(2, T, 1.0))
    return path


def test_round_trip_is_bit_identical(tmp_path):
    for obj in (tower_suite(1)[0].rep, restrict_to_pure(tower_suite(1)[0].rep),
                repfile.MatrixBundle({"H": np.diag([1.0, -1e-300, 0.1])}, {"note": "x"})):
        text = repfile.dumps(obj, {"source": "test"})
        again, meta = repfile.loads(text)
        assert repfile.dumps(again, meta) == text


def test_repfile_preserves_values_exactly():
    rep = tower_suite(1)[0].rep
    back, _ = repfile.loads(repfile.dumps(rep))
    assert all(np.array_equal(a, b) for a, b in zip(rep.g, back.g))
    assert np.array_equal(rep.H, back.H)


@pytest.mark.parametrize("text", ["{", "[]", '{"schema_version": "9", "kind": "semidirect"}',
                                  '{"schema_version": "1", "kind": "other"}',
                                  '{"schema_version": "1", "kind": "semidirect", "n": 1, "N": 1, "g": [[[1]]]}'])
def test_repfile_parse_errors(text):
    with pytest.raises(ParseError):
        repfile.loads(text)


def test_parse_complex():
    assert parse_complex("1,0") == 1
    assert parse_complex("0.5,-2") == complex(0.5, -2)
    with pytest.raises(ParseError):
        parse_complex("1+2j")


def test_build_tlm_first_row(seed_file, tmp_path):
    out = tmp_path / "tlm.json"
    assert main(["build", "--construction", "tlm", "--input", str(seed_file), "--lambda", "1,0",
                 "--out", str(out)]) == 0
    rep, meta = repfile.read(out)
    assert np.allclose(rep.g[0][0], [T, T - 1])
    assert meta["construction"] == "tlm"


@pytest.mark.parametrize("construction", ["lm", "dr", "wada", "klm", "haraoka", "basisP"])
def test_build_constructions_succeed(construction, seed_file, tmp_path):
    out = tmp_path / "out.json"
    args = ["build", "--construction", construction, "--input", str(seed_file), "--lambda", "0.6,0.8",
            "--out", str(out)]
    if construction == "wada":
        args += ["--k", "2"]
    assert main(args) == 0
    repfile.read(out)


def test_build_b0j(tmp_path):
    src = tmp_path / "a.json"
    repfile.write(src, repfile.MatrixBundle({"A1": [[1.0]], "A2": [[2.0]]}))
    out = tmp_path / "b.json"
    assert main(["build", "--construction", "b0j", "--input", str(src), "--lambda", "0.5,0",
                 "--out", str(out)]) == 0
    bundle, _ = repfile.read(out)
    assert np.allclose(bundle["B2"], [[0, 0], [1, 2.5]])


def test_build_klm_degenerate_warns(tmp_path, capsys):
    src = tmp_path / "trivial.json"
    repfile.write(src, scalar_seed(3, 1.0, 1.0))
    out = tmp_path / "k.json"
    assert main(["build", "--construction", "klm", "--input", str(src), "--lambda", "1,0", "--out", str(out)]) == 0
    assert "zero-dimensional" in capsys.readouterr().err
    _, meta = repfile.read(out)
    assert meta["degenerate"] is True


def test_build_exit_codes(seed_file, tmp_path, capsys):
    out = str(tmp_path / "x.json")
    assert main(["build", "--construction", "tlm", "--input", str(tmp_path / "missing.json"),
                 "--lambda", "1,0", "--out", out]) == 3
    assert main(["build", "--construction", "tlm", "--input", str(seed_file), "--lambda", "oops",
                 "--out", out]) == 3
    assert main(["build", "--construction", "tlm", "--input", str(seed_file), "--out", out]) == 2
    assert "needs --lambda" in capsys.readouterr().err


def test_haraoka_then_verify_against_tlm(tmp_path):
    src = tmp_path / "tower.json"
    case = tower_suite(1, ns=(3,))[0]
    repfile.write(src, case.rep)
    out = tmp_path / "n.json"
    lam = f"{case.lam.real!r},{case.lam.imag!r}"
    assert main(["build", "--construction", "haraoka", "--input", str(src), "--lambda", lam,
                 "--out", str(out)]) == 0
    assert main(["verify", "--suite", "correspondence", "--input", str(src), "--lambda", lam]) == 0


def test_verify_generated_suites(capsys):
    assert main(["verify", "--suite", "relations", "--generate", "scalar"]) == 0
    assert capsys.readouterr().out.strip().endswith("PASS")
    assert main(["verify", "--suite", "correspondence", "--generate", "tower", "--seed", "7", "--json"]) == 0
    report = json.loads(capsys.readouterr().out)
    assert report["pass"] and max(r["value"] for r in report["checks"]) <= 1e-9
    assert main(["verify", "--suite", "signature", "--generate", "tower"]) == 0
    assert "signature fallbacks: 0" in capsys.readouterr().out
    assert main(["verify", "--suite", "all", "--generate", "random", "--count", "4"]) == 0


def test_verify_is_deterministic(capsys):
    main(["verify", "--suite", "all", "--generate", "tower", "--seed", "3", "--json"])
    first = capsys.readouterr().out
    main(["verify", "--suite", "all", "--generate", "tower", "--seed", "3", "--json"])
    assert capsys.readouterr().out == first


def test_env_tolerance_override(monkeypatch, capsys):
    monkeypatch.setenv("BRAIDFORGE_TOL", "1e-30")
    # the tightened tolerance reaches the input precondition checks too
    assert main(["verify", "--suite", "relations", "--generate", "scalar", "--count", "2"]) == 2
    assert "compatibility" in capsys.readouterr().err
    monkeypatch.setenv("BRAIDFORGE_TOL", "1e-3")
    assert main(["verify", "--suite", "relations", "--generate", "scalar", "--count", "2"]) == 0
    assert "1.000e-03" in capsys.readouterr().out
    monkeypatch.setenv("BRAIDFORGE_TOL", "abc")
    assert main(["verify", "--suite", "relations", "--generate", "scalar"]) == 3


def test_signature_command(tmp_path, capsys):
    diag = tmp_path / "diag.json"
    repfile.write(diag, repfile.MatrixBundle({"H": np.diag([2.0, -3.0, 0.0])}))
    assert main(["signature", "--input", str(diag), "--algorithm", "oracle"]) == 0
    assert capsys.readouterr().out.strip() == "p=1 q=1 z=1"
    rep_file = tmp_path / "rep.json"
    repfile.write(rep_file, tower_suite(1, ns=(3,))[0].rep)
    assert main(["signature", "--input", str(rep_file), "--lambda", "0.6,0.8"]) == 0
    assert capsys.readouterr().out.strip().endswith("MATCH")
    ident = tmp_path / "id.json"
    repfile.write(ident, repfile.MatrixBundle({"H": np.eye(4)}))
    assert main(["signature", "--input", str(ident), "--algorithm", "recursive"]) == 0
    assert capsys.readouterr().out.strip() == "p=4 q=0 z=0"
    bad = tmp_path / "bad.json"
    repfile.write(bad, repfile.MatrixBundle({"H": [[0.0, 1.0], [0.0, 0.0]]}))
    assert main(["signature", "--input", str(bad)]) == 2


def test_tower_command(tmp_path, capsys):
    out_dir = tmp_path / "levels"
    assert main(["tower", "--depth", "2", "--lambdas", "0.6,0.8;0,1", "--n", "3",
                 "--emit-levels", str(out_dir)]) == 0
    summary = json.loads(capsys.readouterr().out)
    assert [lv["dim"] for lv in summary["levels"]] == [1, 3, 3]
    assert (out_dir / "summary.json").exists() and (out_dir / "level_2.json").exists()


def test_tower_depth_one_matches_build_klm(tmp_path, seed_file, capsys):
    out = tmp_path / "klm.json"
    main(["build", "--construction", "klm", "--input", str(seed_file), "--lambda", "0.6,0.8", "--out", str(out)])
    built, _ = repfile.read(out)
    capsys.readouterr()
    levels = tmp_path / "lv"
    assert main(["tower", "--depth", "1", "--lambdas", "0.6,0.8", "--seed-rep", str(seed_file),
                 "--emit-levels", str(levels)]) == 0
    towered, _ = repfile.read(levels / "level_1.json")
    assert all(np.array_equal(a, b) for a, b in zip(built.g, towered.g))


def test_tower_degenerate_and_guard(capsys):
    assert main(["tower", "--depth", "2", "--lambdas", "1,0", "--n", "3", "--t", "1,0"]) == 0
    assert "zero-dimensional" in capsys.readouterr().err
    assert main(["tower", "--depth", "3", "--lambdas", "0.6,0.8", "--n", "4", "--mode", "tlm",
                 "--max-dim", "20"]) == 4
    assert main(["tower", "--depth", "0", "--lambdas", "0.6,0.8"]) == 2


def test_verify_reports_failed_check(tmp_path, capsys):
    # compatible scalar data whose sigma images violate the braid relation
    t = np.array([[T]])
    rep = SemidirectRep(3, 1, (t, t, t), {1: np.array([[1.0]]), 2: np.array([[2.0]])})
    src = tmp_path / "bad_braid.json"
    repfile.write(src, rep)
    assert main(["verify", "--suite", "relations", "--input", str(src), "--lambda", "0.6,0.8"]) == 1
    out = capsys.readouterr().out
    assert "FAIL" in out.splitlines()[-1]
