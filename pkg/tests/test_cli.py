import json

import pytest

from mutower import cli
from mutower.chainring import RingBase
from mutower.compare import TowerSeries
from mutower.errors import InvalidInput
from mutower.groupring import GroupSpec
from mutower.modfile import (
    load_presentation,
    load_tower_csv,
    presentation_from_dict,
    presentation_to_dict,
    save_presentation,
    save_tower_csv,
)
from mutower.synth import Garnish, GroundTruth, make_module

AB1 = GroupSpec.abelian(3, 1)
BASE3 = RingBase(3, 1, 1)


def write_module(path, gt, spec=AB1, base=BASE3):
    P = make_module(gt, spec, base)
    save_presentation(P, str(path))
    return P


def test_module_file_roundtrip(tmp_path):
    P = make_module(GroundTruth(0, (1, 2), seed=4), AB1, BASE3)
    d = presentation_to_dict(P)
    Q = presentation_from_dict(d)
    assert Q == P
    path = tmp_path / "m.json"
    save_presentation(P, str(path))
    assert load_presentation(str(path)) == P
    # coefficients serialized as decimal strings
    raw = json.loads(path.read_text())
    term = next(t for row in raw["matrix"] for e in row for t in e)
    assert isinstance(term["c"][0], str)


def test_module_file_parse_error_reports_location(tmp_path):
    path = tmp_path / "bad.json"
    path.write_text('{"ring": {"p": 3,\n  "e": }\n}')
    with pytest.raises(InvalidInput) as err:
        load_presentation(str(path))
    assert "line" in str(err.value)


def test_tower_csv_roundtrip(tmp_path):
    series = TowerSeries(r=1, p=3, data={(1, 0): 2, (1, 1): 6, (2, 0): 3, (2, 1): 9})
    path = tmp_path / "t.csv"
    save_tower_csv(series, str(path))
    loaded = load_tower_csv(str(path), 3, 1)
    assert loaded.data == series.data


def test_tower_csv_rejects_bad_header(tmp_path):
    path = tmp_path / "t.csv"
    path.write_text("a,b,c\n1,2,3\n")
    with pytest.raises(InvalidInput):
        load_tower_csv(str(path), 3, 1)


def test_invariants_command(tmp_path, capsys):
    path = tmp_path / "m.json"
    write_module(path, GroundTruth(0, (1, 3), seed=2))
    code = cli.main(["invariants", str(path)])
    out = capsys.readouterr().out
    assert code == 0
    report = json.loads(out)
    assert report["representation"]["theta"] == 3
    assert report["representation"]["mu_total"] == 4
    assert report["mu_profile"]["1"] == 2
    assert report["config"]["command"] == "invariants"


def test_invariants_inconclusive_exit_code(tmp_path):
    path = tmp_path / "m.json"
    write_module(
        path,
        GroundTruth(0, (2,), (Garnish(1),), seed=1),
        spec=GroupSpec.abelian(2, 2),
        base=RingBase(2, 1, 1),
    )
    # default r=2 levels cannot round the garnish residual at p=2
    code = cli.main(["invariants", str(path), "--out", str(tmp_path / "r.json")])
    assert code == 2


def test_invariants_parse_error_exit_code(tmp_path):
    path = tmp_path / "m.json"
    path.write_text("{broken")
    assert cli.main(["invariants", str(path)]) == 1


def test_compare_command_exit_codes(tmp_path):
    a = tmp_path / "a.json"
    b = tmp_path / "b.json"
    c = tmp_path / "c.json"
    write_module(a, GroundTruth(0, (1, 3), seed=1))
    write_module(b, GroundTruth(0, (1, 3), seed=2))
    write_module(c, GroundTruth(0, (2, 2), seed=3))
    assert cli.main(["compare", str(a), str(b), "--out", str(tmp_path / "r1.json")]) == 0
    assert cli.main(["compare", str(a), str(c), "--out", str(tmp_path / "r2.json")]) == 3
    verdict = json.loads((tmp_path / "r2.json").read_text())["verdict"]
    assert verdict["kind"] == "unequal"
    assert verdict["witness_n"] == 2


def test_tower_command(tmp_path):
    a = tmp_path / "a.csv"
    b = tmp_path / "b.csv"
    eq = tmp_path / "eq.csv"
    A = TowerSeries(r=1, p=3, data={(n, m): mu * 3 ** m for n, mu in [(1, 2), (2, 3), (3, 4)] for m in range(3)})
    B = TowerSeries(r=1, p=3, data={(n, m): mu * 3 ** m for n, mu in [(1, 2), (2, 4), (3, 5)] for m in range(3)})
    save_tower_csv(A, str(a))
    save_tower_csv(B, str(b))
    save_tower_csv(A, str(eq))
    assert cli.main(["tower", str(a), str(eq), "--dim", "1", "--ring", "3,1,1", "--out", str(tmp_path / "r.json")]) == 0
    assert cli.main(["tower", str(a), str(b), "--dim", "1", "--ring", "3,1,1", "--out", str(tmp_path / "r.json")]) == 3
    # grid mismatch is an input error
    C = TowerSeries(r=1, p=3, data={(1, m): 2 * 3 ** m for m in range(2)})
    cpath = tmp_path / "c.csv"
    save_tower_csv(C, str(cpath))
    assert cli.main(["tower", str(a), str(cpath), "--dim", "1", "--ring", "3,1,1"]) == 1


def test_reports_are_byte_identical(tmp_path):
    path = tmp_path / "m.json"
    write_module(path, GroundTruth(1, (2,), seed=9))
    out1 = tmp_path / "r1.json"
    out2 = tmp_path / "r2.json"
    assert cli.main(["invariants", str(path), "--out", str(out1)]) == 0
    assert cli.main(["invariants", str(path), "--out", str(out2)]) == 0
    assert out1.read_bytes() == out2.read_bytes()


def test_synth_command_emits_loadable_corpus(tmp_path):
    out_dir = tmp_path / "corpus"
    assert (
        cli.main(
            ["synth", "--out-dir", str(out_dir), "--count", "3", "--seed", "5", "--ring", "3,1,1", "--out", str(tmp_path / "m.json")]
        )
        == 0
    )
    manifest = json.loads((out_dir / "manifest.json").read_text())
    assert len(manifest["modules"]) == 3
    for entry in manifest["modules"]:
        P = load_presentation(str(out_dir / entry["file"]))
        assert P.gens >= 0


def test_selftest_command(tmp_path, capsys):
    assert cli.main(["selftest", "--cases", "3", "--oracle-cases", "10", "--seed", "2"]) == 0
    capsys.readouterr()
    assert cli.main(["selftest", "--cases", "0"]) == 0
    out = capsys.readouterr().out
    assert "vacuous" in out


def test_selftest_detects_injected_corruption(capsys):
    code = cli.main(
        ["selftest", "--cases", "3", "--oracle-cases", "5", "--seed", "2", "--inject-corruption"]
    )
    out = capsys.readouterr().out
    assert code == 1
    assert "FAIL" in out and "obfuscation-soundness" in out


def test_text_format(tmp_path, capsys):
    path = tmp_path / "m.json"
    write_module(path, GroundTruth(0, (2,), seed=1))
    assert cli.main(["invariants", str(path), "--format", "text"]) == 0
    out = capsys.readouterr().out
    assert "mu_profile" in out and "theta: 2" in out
