import json
import struct
import subprocess
import sys

import pytest

from linpp.cli import main, parse_poly
from linpp.field_tower import build_tower
from linpp.polyring import Poly


def run(tmp_path, name, *argv):
    out = tmp_path / name
    code = main([*argv, "--out", str(out)])
    return code, out


def test_factor(tmp_path):
    code, out = run(tmp_path, "f.json", "factor", "--p", "2", "--k", "1", "--n", "3")
    assert code == 0
    obj = json.loads(out.read_text())
    assert [f["coeffs"] for f in obj["factors"]] == [[[1], [1]], [[1], [1], [1]]]


def test_tower(tmp_path):
    code, out = run(tmp_path, "t.json", "tower", "--p", "2", "--k", "1", "--n", "2")
    obj = json.loads(out.read_text())
    assert code == 0 and obj["mod_qn"] == [[1], [1], [1]] and obj["size"] == 4


def test_construct_verify_invert_table(tmp_path):
    code, spec = run(tmp_path, "s.json", "construct", "--p", "2", "--k", "1", "--n", "2",
                     "--b", "0,1", "--h", "0,1", "--kpoly", "1", "--seed", "7")
    assert code == 0
    code, rep = run(tmp_path, "v.json", "verify", "--spec", str(spec))
    assert code == 0 and json.loads(rep.read_text())["agree"]
    code, inv = run(tmp_path, "i.json", "invert", "--spec", str(spec))
    assert code == 0
    code, tab = run(tmp_path, "t.json", "table", "--spec", str(spec), "--then", str(inv))
    assert json.loads(tab.read_text()) == [0, 1, 2, 3]


def test_identity_and_frobenius_tables(tmp_path):
    code, spec = run(tmp_path, "id.json", "construct", "--p", "2", "--n", "2",
                     "--b", "0,1", "--h", "1")
    _, tab = run(tmp_path, "id.tab", "table", "--spec", str(spec))
    assert json.loads(tab.read_text()) == [0, 1, 2, 3]
    _, spec = run(tmp_path, "fr.json", "construct", "--p", "2", "--n", "2", "--b", "0,1", "--h", "0,1")
    _, tab = run(tmp_path, "fr.tab", "table", "--spec", str(spec))
    values = json.loads(tab.read_text())
    assert sorted(values) == [0, 1, 2, 3] and values[:2] == [0, 1] and values[2:] == [3, 2]
    _, csv = run(tmp_path, "fr.csv", "table", "--spec", str(spec), "--format", "csv")
    lines = csv.read_text().splitlines()
    assert lines[0] == "index,output_index" and len(lines) == 4 + 1
    _, binf = run(tmp_path, "fr.bin", "table", "--spec", str(spec), "--format", "bin")
    assert list(struct.unpack("<4Q", binf.read_bytes())) == values


def test_variant_and_cpp(tmp_path):
    code, spec = run(tmp_path, "v.json", "construct-variant", "--p", "3", "--n", "2", "--a", "2",
                     "--b", "0,1", "--h", "1", "--seed", "2")
    assert code == 0
    code, rep = run(tmp_path, "v.rep", "verify", "--spec", str(spec))
    assert code == 0 and json.loads(rep.read_text())["criterion"] == "variant"
    code, inv = run(tmp_path, "vi.json", "invert", "--spec", str(spec))
    _, tab = run(tmp_path, "v.tab", "table", "--spec", str(inv), "--then", str(spec))
    assert json.loads(tab.read_text()) == list(range(9))
    code, spec = run(tmp_path, "c.json", "construct-cpp", "--p", "5", "--n", "2",
                     "--b", "0,2", "--h", "2", "--seed", "1")
    assert code == 0
    code, rep = run(tmp_path, "c.rep", "verify", "--cpp", "--spec", str(spec))
    assert code == 0 and json.loads(rep.read_text())["oracle_verdict"]


def test_compact_coordinate_syntax(tmp_path):
    t = build_tower(2, 2, 2)
    # over F_4, "0/1" is the F_2-digit vector of the generator (code 2)
    assert parse_poly("0/1,1", t, "Fq") == Poly(t.fq, [2, 1])
    # over F_16, "0/1" is the generator over F_4, code 0 + 1 * 4
    assert parse_poly("0/1,3/2", t, "Fqn") == Poly(t.fqn, [4, 3 + 2 * 4])
    assert parse_poly("[1, 0, 2]", t, "Fq") == Poly(t.fq, [1, 0, 2])
    code, spec = run(tmp_path, "s.json", "construct", "--p", "2", "--k", "2", "--n", "2",
                     "--b", "0/1,1", "--h", "1")
    assert code == 0
    code, _ = run(tmp_path, "v.json", "verify", "--spec", str(spec))
    assert code == 0


def test_iterate_and_sweep(tmp_path):
    code, out = run(tmp_path, "it.json", "iterate", "--p", "2", "--n", "2", "--b", "0,1",
                    "--h", "0,1", "--seed", "5")
    levels = json.loads(out.read_text())["levels"]
    assert code == 0 and [lv["size"] for lv in levels] == [4, 16]
    assert all(lv["oracle_verdict"] for lv in levels)
    code, out = run(tmp_path, "sw.json", "sweep", "--p", "2", "--n", "3", "--trials", "40",
                    "--seed", "3")
    rep = json.loads(out.read_text())
    assert code == 0 and rep["agreements"] == 40 and rep["disagreements"] == []


def test_domain_errors(tmp_path, capsys):
    code, _ = run(tmp_path, "x", "construct", "--p", "3", "--n", "2", "--b", "0,0,1", "--h", "1")
    assert code == 1
    err = json.loads(capsys.readouterr().err.strip().splitlines()[-1])
    assert err["error"] == "BaseNotPP"
    code, _ = run(tmp_path, "x", "factor", "--p", "4", "--n", "2")
    assert code == 1 and json.loads(capsys.readouterr().err)["error"] == "NonPrime"
    # h shares a factor with the trace associate, so the PP is not a permutation
    (tmp_path / "bad.json").write_text(json.dumps({
        "kind": "PPSpec",
        "tower": {"p": 3, "k": 1, "n": 2, "mod_q": [0, 1], "mod_qn": [[1], [0], [1]]},
        "f": {"level": "Fqn", "coeffs": []}, "g": {"level": "Fq", "coeffs": [[1], [1]]},
        "h": {"level": "Fq", "coeffs": [[1], [1]]}, "k": {"level": "Fq", "coeffs": [[1]]}}))
    code, _ = run(tmp_path, "x", "verify", "--spec", str(tmp_path / "bad.json"))
    assert code == 1 and json.loads(capsys.readouterr().err)["error"] == "NotAPP"
    code, _ = run(tmp_path, "x", "invert", "--spec", str(tmp_path / "bad.json"))
    assert code == 1


@pytest.mark.parametrize("argv", [
    ["bogus"],
    ["construct", "--p", "2", "--n", "2"],
    ["construct", "--p", "2", "--n", "2", "--b", "0,9", "--h", "1"],
    ["construct", "--p", "2", "--n", "2", "--b", "x", "--h", "1"],
    ["table", "--spec", "/nonexistent.json"],
    ["factor", "--n", "2"],
])
def test_usage_errors(argv, capsys):
    assert main(argv) == 2


def test_determinism_subprocess(tmp_path):
    argv = [sys.executable, "-m", "linpp", "construct", "--p", "3", "--n", "2", "--b", "1,2",
            "--h", "0,1", "--kpoly", "1", "--seed", "11"]
    a = subprocess.run(argv, capture_output=True, check=True).stdout
    b = subprocess.run(argv, capture_output=True, check=True).stdout
    assert a == b and json.loads(a)["kind"] == "PPSpec"
