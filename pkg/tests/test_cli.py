import json
import subprocess
import sys

import lrmesa.flags as flags_mod
from lrmesa.cli import main, run
from lrmesa.flags import Flag
from lrmesa.measure import exit_profile, measure_from_dict, measure_to_dict, tripod, validate

T134 = '{"n":4,"I":[1,3,4],"J":[1,3,4],"K":[1,3,4]}'
T145 = '{"n":5,"I":[1,4,5],"J":[1,4,5],"K":[1,4,5]}'
TAU = '{"n":6,"I":[2,4,6],"J":[2,4,6],"K":[2,4,6]}'


def test_lr(capsys):
    assert main(["lr", "--triple", T134, "--r", "3"]) == 0
    assert capsys.readouterr().out == "1\n"
    assert main(["lr", "--triple", TAU, "--oracle"]) == 0
    assert capsys.readouterr().out == "2\n"


def test_exit_codes(capsys):
    assert run(["frobnicate"]) == 64
    assert run(["lr"]) == 64
    assert main(["lr", "--triple", "not json"]) == 64
    assert main(["lr", "--triple", T134, "--r", "2"]) == 64
    assert main(["lr", "--triple", '{"n":4,"I":[1,2,3],"J":[1,3,4],"K":[1,3,4]}']) == 2
    assert main(["solve", "--triple", TAU]) == 2  # not rigid
    capsys.readouterr()


def test_genericity_exit_code(monkeypatch, capsys):
    def degenerate(n, seed=None, bound=None, rng=None, retries=20):
        E = Flag.from_columns([[int(i == j) for j in range(n)] for i in range(n)])
        return E, E, E

    monkeypatch.setattr(flags_mod, "random_flags", degenerate)
    assert main(["solve", "--triple", T145, "--retries", "2"]) == 3
    assert "genericity" in capsys.readouterr().err


def test_enumerate_round_trip(tmp_path):
    out = tmp_path / "ms.json"
    assert main(["enumerate", "--triple", TAU, "--output", str(out)]) == 0
    first = out.read_bytes()
    d = json.loads(first)
    assert d["format"] == 1 and d["count"] == 2
    for md in d["measures"]:
        m = measure_from_dict(md)
        assert validate(m).ok and exit_profile(m).to_dict() == d["profile"]
    assert main(["enumerate", "--profile", json.dumps(d["profile"]), "--output", str(out)]) == 0
    assert out.read_bytes() == first


def test_sigma(capsys, tmp_path):
    w = exit_profile(tripod(3, 1, 1, 1)).to_dict()
    path = tmp_path / "w.json"
    path.write_text(json.dumps(w))
    assert main(["sigma", "--witness", f"@{path}", "--triple", T145]) == 0
    assert capsys.readouterr().out == "-2\n"
    assert main(["sigma", "--witness", json.dumps(w), "--target", json.dumps(w)]) == 0
    assert capsys.readouterr().out == "-1\n"
    assert main(["sigma", "--witness", json.dumps(w)]) == 64


def test_catalog(tmp_path):
    out = tmp_path / "cat.json"
    assert main(["catalog", "--r", "3", "--output", str(out)]) == 0
    d = json.loads(out.read_text())
    assert d["format"] == 1 and len(d["entries"]) == 11
    assert all(e["rigid"] and e["sigma_self"] == -1 for e in d["entries"])
    assert run(["catalog", "--r", "9"]) == 2


def test_reduce_and_solve_are_byte_stable(tmp_path):
    a, b = tmp_path / "a.json", tmp_path / "b.json"
    assert main(["reduce", "--triple", T145, "--verify", "full", "--output", str(a)]) == 0
    d = json.loads(a.read_text())
    assert d["terminal_trivial"] and d["steps"][0]["p"] == 2 and d["steps"][0]["verification"] == "verified"
    assert main(["solve", "--triple", T145, "--r", "3", "--seed", "7", "--output", str(a)]) == 0
    assert main(["solve", "--triple", T145, "--r", "3", "--seed", "7", "--output", str(b)]) == 0
    assert a.read_bytes() == b.read_bytes()
    assert json.loads(a.read_text())["verified"] is True


def test_inflate_and_render(tmp_path):
    m = tmp_path / "m.json"
    m.write_text(json.dumps(measure_to_dict(tripod(3, 1, 1, 1))))
    js, svg = tmp_path / "p.json", tmp_path / "p.svg"
    assert main(["inflate", "--measure", f"@{m}", "--output", str(js), "--svg", str(svg)]) == 0
    d = json.loads(js.read_text())
    assert d["tiling_ok"] and d["boundary_ok"] and len(d["white"]) == 3
    assert svg.read_text().startswith("<?xml")
    out = tmp_path / "m.svg"
    assert main(["render", "--measure", f"@{m}", "--output", str(out)]) == 0
    assert out.read_text().count("<line") == 6
    bad = tmp_path / "bad.json"
    bad.write_text(json.dumps({"format": 1, "r": 3, "edges": [{"a": 2, "b": 1, "dir": "U", "d": 1}]}))
    assert main(["render", "--measure", f"@{bad}"]) == 2


def test_module_entry_point():
    proc = subprocess.run([sys.executable, "-m", "lrmesa", "lr", "--triple", T134], capture_output=True, text=True)
    assert proc.returncode == 0 and proc.stdout == "1\n"
    proc = subprocess.run([sys.executable, "-m", "lrmesa", "nope"], capture_output=True, text=True)
    assert proc.returncode == 64
