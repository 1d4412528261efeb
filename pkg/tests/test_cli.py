import json
import subprocess
import sys

import pytest

from symrig.cli import main, xvalidate


def run(capsys, argv):
    code = main(argv)
    out = capsys.readouterr().out
    return code, (json.loads(out) if out.strip() else None)


@pytest.fixture
def write(tmp_path):
    def _write(obj, name="g.json"):
        p = tmp_path / name
        p.write_text(json.dumps(obj))
        return str(p)
    return _write


LOOP = {"group": {"kind": "rotation", "order": 2}, "n": 1,
        "edges": [{"tail": 0, "head": 0, "color": 1}]}
REFL = {"group": {"kind": "reflection", "order": 2}, "n": 2,
        "edges": [{"tail": 0, "head": 1, "color": 0}, {"tail": 0, "head": 0, "color": 1},
                  {"tail": 1, "head": 1, "color": 1}]}


def test_check(capsys, write):
    code, out = run(capsys, ["check", write(LOOP), "--class", "cone-laman"])
    assert code == 0 and out["member"] is True and out["class"] == "cone-laman"
    code, out = run(capsys, ["check", write(LOOP), "--class", "laman-23"])
    assert code == 1 and out["witness"]["type"] == "violation"


def test_rank(capsys, write):
    code, out = run(capsys, ["rank", write(LOOP), "--kind", "rigidity"])
    assert code == 0 and out["rank"] == 1 and out["gap"] is None


def test_realize_and_svg(capsys, write, tmp_path):
    svg = tmp_path / "r.svg"
    code, out = run(capsys, ["realize", write(REFL), "--construct", "special-pair",
                             "--svg", str(svg)])
    assert code == 0 and out["classification"] in ("faithful", "strongly-faithful")
    assert svg.read_text().startswith("<?xml")
    code, out = run(capsys, ["realize", write(REFL), "--construct", "collapse"])
    assert code == 0 and out["classification"] == "collapsed"


def test_decompose(capsys, write):
    code, out = run(capsys, ["decompose", write(REFL)])
    assert code == 0 and len(out["tree_edges"]) == 1
    code, out = run(capsys, ["decompose", write(dict(LOOP, edges=LOOP["edges"] * 2)),
                             "--class", "cone-22"])
    assert code == 0 and "overlap" in out


def test_reduce_and_lift(capsys, write):
    hub = {"group": {"kind": "rotation", "order": 4}, "n": 5, "action": [0, 2, 3, 4, 1],
           "edges": [[0, 1], [0, 2], [0, 3], [0, 4]]}
    code, out = run(capsys, ["reduce", write(hub)])
    assert code == 0 and out == {"group": {"kind": "rotation", "order": 4}, "n": 1,
                                 "edges": [{"tail": 0, "head": 0, "color": 1}]}
    code, out = run(capsys, ["lift", write(LOOP)])
    assert code == 0 and out["n"] == 2 and out["action"] == [1, 0]
    code, out = run(capsys, ["reduce", write(REFL)])
    assert code == 0 and out["n"] == 2


def test_special_pair_exit_codes(capsys, write):
    code, out = run(capsys, ["special-pair", write(REFL)])
    assert code == 0 and out["expected_nullity"] == 3
    bad = dict(REFL, edges=REFL["edges"][:1])
    code, out = run(capsys, ["special-pair", write(bad)])
    assert code == 1 and out["member"] is False
    code, _ = run(capsys, ["special-pair", write(LOOP)])
    assert code == 2


def test_rigid(capsys, write):
    code, out = run(capsys, ["rigid", write(LOOP)])
    assert code == 0 and out["verdict"] == "minimally-rigid"


def test_errors(capsys, write, tmp_path):
    bad = dict(LOOP, edges=[{"tail": 0, "head": 3, "color": 1}])
    assert main(["check", write(bad), "--class", "cone-laman"]) == 2
    assert main(["check", str(tmp_path / "missing.json"), "--class", "cone-laman"]) == 2
    assert main(["xvalidate", "--exhaustive", "--n-max", "5"]) == 2
    assert main(["xvalidate", "--samples", "3", "--n-max", "7"]) == 2


def test_xvalidate():
    rep = xvalidate("rotation", [2, 3], 2, True, 0, 0)
    assert rep["disagreements"] == [] and rep["instances"] > 0
    assert all(a == b for a, b in (key.split("|") for key in rep["agreement"]))
    rep = xvalidate("reflection", [2], 3, False, 10, 1)
    assert rep["instances"] == 10 and rep["mode"] == "random"


def test_console_entry_point(write):
    out = subprocess.run([sys.executable, "-m", "symrig.cli", "check", write(LOOP),
                          "--class", "laman-23"], capture_output=True, text=True)
    assert out.returncode == 1 and json.loads(out.stdout)["class"] == "laman-23"
