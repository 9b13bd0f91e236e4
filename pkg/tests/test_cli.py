import io
import json
import subprocess
import sys
from pathlib import Path

import pytest

from hodgecyclic.cli import (ResultTable, SpecParseError, emit, parse_element, parse_json,
                             parse_range, parse_spec, run)

FIX = Path(__file__).resolve().parent.parent / "fixtures"
SPECS = sorted(p.name for p in FIX.glob("*.spec"))


def call(*argv):
    out, err = io.StringIO(), io.StringIO()
    code = run([str(a) for a in argv], stdout=out, stderr=err)
    return code, out.getvalue(), err.getvalue()


@pytest.mark.parametrize("name", SPECS)
def test_every_fixture_validates(name):
    code, out, _ = call("validate", FIX / name)
    assert code == 0
    assert "all axioms checked" in out


def test_bracket_of_cubes():
    code, out, _ = call("bracket", FIX / "necklace.spec", "--a", "[v,v,v]", "--b", "[w,w,w]")
    assert code == 0
    assert out.strip().endswith("9·[v,v,w,w]")


def test_kassel_check():
    code, out, _ = call("kassel-check", FIX / "sl2.spec", "--p", "1", "--max-degree", "3")
    assert code == 0 and "all equal" in out


def test_polynomial_ring_cyclic_csv():
    code, out, _ = call("hodge-hc", FIX / "abelian1.spec", "--p", "1-3", "--max-degree", "0",
                        "--format", "csv")
    assert code == 0
    lines = out.strip().splitlines()
    assert lines[0] == "p,degree,dim,safe"
    assert [ln.split(",")[2] for ln in lines[1:]] == ["1", "1", "1"]


def test_json_is_deterministic_up_to_timestamp():
    args = ("hodge-hh", FIX / "abelian2.spec", "--p", "0-2", "--max-degree", "2", "--format", "json")
    a, b = json.loads(call(*args)[1]), json.loads(call(*args)[1])
    assert a["digest"] == b["digest"]
    a.pop("timestamp"), b.pop("timestamp")
    assert a == b


def test_json_round_trip():
    code, out, _ = call("connes", FIX / "abelian2.spec", "--p", "1", "--max-degree", "2",
                        "--format", "json")
    assert code == 0
    doc = json.loads(out)
    table = parse_json(out)
    assert table.digest == doc["digest"]
    assert parse_json(emit(table, "json", timestamp=0)).payload() == table.payload()


def test_empty_table():
    t = ResultTable("noop", {}, [])
    doc = json.loads(emit(t, "json", timestamp=1.5))
    assert doc["rows"] == [] and doc["timestamp"] == 1.5
    assert emit(t, "csv") == b"\n"


def test_output_file(tmp_path):
    target = tmp_path / "out.csv"
    code, out, _ = call("hodge-hh", FIX / "abelian1.spec", "--p", "0", "--max-degree", "1",
                        "--format", "csv", "--output", target)
    assert code == 0 and out == ""
    assert target.read_text().startswith("p,degree,dim,safe")


def test_parse_error_has_line_and_field(tmp_path):
    bad = tmp_path / "bad.spec"
    bad.write_text("kind lie-algebra\nname bad\n[basis]\ne 0\nf 0\n[bracket]\n[e,f] = 1/0 e\n")
    code, _, err = call("validate", bad)
    assert code == 2
    assert "bad.spec:7:" in err


def test_jacobi_failure_is_a_parse_error():
    text = ("kind lie-algebra\nname broken\n[basis]\na 0\nb 0\nc 0\n[bracket]\n"
            "[a,b] = c\n[b,c] = a\n[c,a] = c\n")
    with pytest.raises(SpecParseError):
        parse_spec(text)


def test_unknown_flag_exits_two():
    with pytest.raises(SystemExit) as e:
        run(["validate", str(FIX / "sl2.spec"), "--frobnicate"])
    assert e.value.code == 2


def test_missing_file():
    code, _, err = call("validate", FIX / "nope.spec")
    assert code == 2 and "nope.spec" in err


def test_parse_range():
    assert parse_range("2") == [2]
    assert parse_range("1-3") == [1, 2, 3]
    assert parse_range("0,2") == [0, 2]


def test_parse_element(necklace):
    t = parse_element("[v,v,w] - 1/2 [w]", necklace)
    assert len(t.terms) == 2


def test_module_entry_point():
    proc = subprocess.run([sys.executable, "-m", "hodgecyclic", "adams-check",
                           str(FIX / "abelian2.spec")], capture_output=True, text=True)
    assert proc.returncode == 0, proc.stderr
