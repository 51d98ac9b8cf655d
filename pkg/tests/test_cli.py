import io
import json
import shutil
import subprocess
import sys
from pathlib import Path

import pytest

from torsionlab import serialize as ser
from torsionlab.cli import main

FIX = Path(__file__).parent / "fixtures"


def call(*argv):
    out = io.StringIO()
    code = main([str(a) for a in argv], out=out)
    return code, out.getvalue()


def report(text):
    return json.loads(text)


def test_verify_identity_cone():
    code, text = call("verify", FIX / "identity_cone.json")
    assert code == 0
    rep = report(text)
    assert rep["verdict"] == "verified" and len(rep["inputs"]) == 1


def test_verify_truncated():
    code, text = call("verify", FIX / "truncated.json")
    assert code == 3
    assert "line" in report(text)["error"]


def test_verify_bad_slide():
    code, text = call("verify", FIX / "bad_slide.json")
    assert code == 1
    assert report(text)["failing_move"] == 1


def test_verify_missing_file(tmp_path):
    code, _ = call("verify", tmp_path / "nope.json")
    assert code == 3


def test_decide_examples():
    assert call("decide", FIX / "expansion.json")[0] == 0
    code, text = call("decide", FIX / "not_acyclic.json")
    assert code == 3 and "not acyclic" in report(text)["error"]
    code, text = call("decide", FIX / "cyclotomic_unit.json")
    rep = report(text)
    assert code == 1 and rep["verdict"] == "nontrivial"
    assert rep["witness"]["character"] in range(1, 5)


def test_decide_trivial_ships_replayable_script(tmp_path):
    code, text = call("decide", FIX / "expansion.json")
    script = ser.script_from_json(report(text)["witness"]["script"])
    from torsionlab.moves import verify_trivial

    assert verify_trivial(script)


def test_decide_invalid_complex(tmp_path):
    bad = tmp_path / "bad.json"
    bad.write_text(json.dumps({
        "group": {"kind": "trivial"},
        "generators": [{"label": "a", "degree": 0}, {"label": "b", "degree": 2}],
        "d": [{"from": "a", "to": "b", "coeff": "1"}],
    }))
    assert call("decide", bad)[0] == 3


def test_reduce_emits_script(tmp_path):
    src = tmp_path / "c.json"
    script = ser.script_from_json(ser.loads((FIX / "identity_cone.json").read_text()))
    src.write_text(ser.dumps(ser.complex_to_json(script.initial)))
    out = tmp_path / "s.json"
    code, text = call("reduce", src, "--emit-script", out)
    assert code == 0 and report(text)["outcome"] == "emptied"
    emitted = out.read_text()
    assert ser.dumps(ser.script_to_json(ser.script_from_json(ser.loads(emitted)))) == emitted
    assert call("verify", out)[0] == 0


def test_reduce_two_term():
    code, text = call("reduce", FIX / "cyclotomic_unit.json")
    assert code == 2 and report(text)["outcome"] == "two_term"


def test_cone(tmp_path):
    out = tmp_path / "cone.json"
    code, text = call("cone", FIX / "mult_by_t.json", "--output", out)
    rep = report(text)
    assert code == 0
    assert rep["cone"]["d"] == [{"coeff": "t", "from": "C:x", "to": "D:y"}]
    assert max(abs(x) for x in rep["torsion"]["logabs"]) < 1e-12
    assert call("decide", out)[0] == 0


def test_lens_classify():
    code, text = call("lens", "classify", 7, 1, 2)
    rep = report(text)
    assert code == 0 and rep["homotopy"] is True and rep["simple"] is False
    code, text = call("lens", "classify", 7, 1, 1)
    rep = report(text)
    assert rep["homotopy"] is True and rep["simple"] is True
    assert call("lens", "classify", 7, 1, 0)[0] == 3


def test_lens_table():
    code, text = call("lens", "table", 8)
    lines = text.strip().split("\n")
    assert code == 0
    assert lines[0].split("\t") == ["n", "q1", "q2", "homotopy", "simple", "oracle_simple"]
    assert "7\t1\t2\ttrue\tfalse\tfalse" in lines


def test_bad_arguments():
    assert call("frobnicate")[0] == 3
    assert call("lens", "classify", "seven", 1, 2)[0] == 3


def test_reports_are_canonical():
    _, a = call("lens", "classify", 5, 1, 4)
    data = report(a)
    data.pop("wall_time_s")
    assert list(data) == sorted(data)


@pytest.mark.skipif(shutil.which("torsionlab") is None, reason="console script not installed")
def test_console_script():
    r = subprocess.run(["torsionlab", "verify", str(FIX / "identity_cone.json")], capture_output=True, text=True)
    assert r.returncode == 0


def test_module_entry():
    r = subprocess.run([sys.executable, "-m", "torsionlab.cli", "lens", "classify", "5", "1", "2"], capture_output=True, text=True)
    assert r.returncode == 0 and '"homotopy": false' in r.stdout


def test_selftest_quick():
    code, text = call("selftest", "--scale", "0.02")
    assert code == 0
    assert text.count("[PASS]") == 9
