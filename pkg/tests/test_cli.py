import csv
import io
import json
import subprocess
import sys

import pytest

from modunits.cli import CACHE_ENV, main
from modunits.curve import level_new
from modunits.eta import eta_divisor, label
from modunits.serialize import divisor_from_json, vector_from_json
from modunits.units import check_theorem1


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def write(tmp_path, name, obj):
    p = tmp_path / name
    p.write_text(json.dumps(obj))
    return str(p)


def test_cusps(capsys):
    code, out, _ = run(capsys, "cusps", "--level", "11")
    assert code == 0 and "2 cusps" in out
    code, out, _ = run(capsys, "cusps", "--level", "9", "--json")
    data = json.loads(out)
    assert [(x["c"], x["a"]) for x in data["cusps"]] == [(1, 1), (3, 1), (3, 2), (9, 1)]


def test_class_group_output(capsys):
    code, out, _ = run(capsys, "class-group", "--level", "11")
    assert code == 0
    assert json.loads(out) == {"level": 11, "C": [5], "C_Q": [5], "C_fixed": [5], "equal": True}


def test_invalid_level(capsys):
    code, _, err = run(capsys, "class-group", "--level", "25")
    assert code == 2 and "25" in err


def test_eta_divisor_round_trip(capsys):
    code, out, _ = run(capsys, "eta-divisor", "--level", "48", "--m", "3", "--k", "1")
    L = level_new(48)
    assert code == 0 and divisor_from_json(json.loads(out)) == eta_divisor(L, label(L, 3, 1))
    code, _, _ = run(capsys, "eta-divisor", "--level", "48", "--m", "5")
    assert code == 2


def test_q_expansion(capsys):
    code, out, _ = run(capsys, "q-expansion", "--level", "11", "--m", "1", "--terms", "5")
    data = json.loads(out)
    assert code == 0 and data["offset"] == "1/24"
    assert [c[0] for c in data["coefficients"]] == [1, -1, -1, 0, 0, 1]
    assert run(capsys, "q-expansion", "--level", "11", "--m", "1", "--terms", "0")[0] == 2


def test_check_unit(capsys, tmp_path):
    good = write(tmp_path, "good.json", {"level": 4, "entries": [{"m": 1, "k": 0, "e": 8}, {"m": 4, "k": 0, "e": -8}]})
    bad = write(tmp_path, "bad.json", {"level": 11, "entries": [{"m": 1, "k": 0, "e": 1}, {"m": 11, "k": 0, "e": -1}]})
    assert run(capsys, "check-unit", "--level", "4", "--in", good)[:2] == (0, "pass\n")
    assert run(capsys, "check-unit", "--level", "11", "--in", bad)[:2] == (1, "fail (b)\n")
    assert run(capsys, "check-unit", "--level", "11", "--in", good)[0] == 2
    broken = tmp_path / "broken.json"
    broken.write_text("[1, 2")
    assert run(capsys, "check-unit", "--level", "11", "--in", str(broken))[0] == 2
    assert run(capsys, "check-unit", "--level", "11", "--in", str(tmp_path / "missing.json"))[0] == 2


@pytest.mark.parametrize("extra", [[], ["--rational"]])
def test_unit_basis_round_trip(capsys, extra):
    code, out, _ = run(capsys, "unit-basis", "--level", "36", *extra)
    data = json.loads(out)
    assert code == 0 and data["rational"] == bool(extra)
    if not extra:
        assert len(data["basis"]) == 11
    for obj in data["basis"]:
        assert check_theorem1(vector_from_json(obj))[0]


def test_rationalize(capsys, tmp_path):
    from modunits.cuspgroup import class_group, fixed_generator_divisors
    from modunits.curve import is_rational_divisor
    from modunits.serialize import divisor_to_json

    L = level_new(36)
    D = fixed_generator_divisors(L)[0]
    src = write(tmp_path, "d.json", divisor_to_json(D))
    dst = tmp_path / "out" / "r.json"
    code, out, err = run(capsys, "rationalize", "--level", "36", "--in", src, "--out", str(dst))
    assert code == 0 and out == "" and "order" in err
    assert is_rational_divisor(divisor_from_json(json.loads(dst.read_text())))
    moving = write(tmp_path, "m.json", divisor_to_json(class_group(L).divisor((1, 0))))
    assert run(capsys, "rationalize", "--level", "36", "--in", moving)[0] == 1
    frac = write(tmp_path, "f.json", {"level": 36, "entries": [{"c": 1, "a": 1, "mult": "1/2"}]})
    assert run(capsys, "rationalize", "--level", "36", "--in", frac)[0] == 2


def test_oracle_check(capsys, tmp_path):
    good = write(tmp_path, "g.json", {"level": 11, "entries": [{"m": 1, "k": 0, "e": 24}, {"m": 11, "k": 0, "e": -24}]})
    heavy = write(tmp_path, "h.json", {"level": 11, "entries": [{"m": 1, "k": 0, "e": 1}]})
    code, out, _ = run(capsys, "oracle-check", "--level", "11", "--in", good, "--seed", "3")
    assert code == 0 and out.startswith("numeric pass")
    assert run(capsys, "oracle-check", "--level", "11", "--in", heavy)[0] == 2
    a = run(capsys, "oracle-check", "--level", "11", "--in", good, "--seed", "5", "--trials", "10")
    b = run(capsys, "oracle-check", "--level", "11", "--in", good, "--seed", "5", "--trials", "10")
    assert a == b


def _csv_without_seconds(path):
    rows = list(csv.DictReader(io.StringIO(path.read_text())))
    for r in rows:
        r.pop("seconds")
    return rows


def test_sweep_cache_is_transparent(capsys, tmp_path, monkeypatch):
    monkeypatch.delenv(CACHE_ENV, raising=False)
    plain = tmp_path / "plain.csv"
    code, out_plain, _ = run(capsys, "verify-thm3", "--max-level", "40", "--report", str(plain))
    assert code == 0 and out_plain.strip().endswith("0 with C_Q != C(Q)")
    cache = tmp_path / "cache"
    cold, warm = tmp_path / "cold.csv", tmp_path / "warm.csv"
    out_cold = run(capsys, "verify-thm3", "--max-level", "40", "--cache", str(cache), "--report", str(cold))[1]
    out_warm = run(capsys, "verify-thm3", "--max-level", "40", "--cache", str(cache), "--report", str(warm))[1]
    assert out_plain == out_cold == out_warm
    assert _csv_without_seconds(plain) == _csv_without_seconds(cold) == _csv_without_seconds(warm)
    # the warm run reads the stored rows, wall times included
    assert warm.read_text() == cold.read_text()
    monkeypatch.setenv(CACHE_ENV, str(cache))
    assert run(capsys, "verify-thm3", "--max-level", "40")[1] == out_plain


def test_sweep_jobs_and_include(capsys, tmp_path):
    a = run(capsys, "verify-thm3", "--max-level", "30", "--include", "144")[1]
    b = run(capsys, "verify-thm3", "--max-level", "30", "--include", "144", "--jobs", "2")[1]
    assert a == b and "N=144 n=12" in a
    assert run(capsys, "verify-thm3", "--max-level", "10", "--include", "25")[0] == 2


def test_stale_cache_entries_are_recomputed(capsys, tmp_path):
    cache = tmp_path / "c"
    cache.mkdir()
    (cache / "level-11.json").write_text(json.dumps({"schema": "old", "record": {"N": 11, "equal": False}}))
    (cache / "level-9.json").write_text("garbage")
    code, out, _ = run(capsys, "verify-thm3", "--max-level", "11", "--cache", str(cache))
    assert code == 0 and "N=11 n=1 C=5" in out


def test_module_entry_point():
    proc = subprocess.run([sys.executable, "-m", "modunits", "cusps", "--level", "11"], capture_output=True, text=True)
    assert proc.returncode == 0 and "2 cusps" in proc.stdout
    proc = subprocess.run([sys.executable, "-m", "modunits", "cusps"], capture_output=True, text=True)
    assert proc.returncode == 2
