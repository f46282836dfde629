import csv
import io
import json
import subprocess
import sys

import numpy as np
import pytest
from hypothesis import given, strategies as st

from asakit import cli
from asakit.asa import compute_asa
from asakit.convex_body import Ball, Ellipsoid, Polytope, Transformed
from asakit.errors import BodySpecError
from asakit.io import SCHEMA, body_from_spec, dumps, format_float, load_body, spec_hash, table_text

ELL = {"dim": 3, "kind": "ellipsoid", "semi_axes": [1, 2, 3]}
CUBE = {"dim": 3, "kind": "polytope", "vertices": [[x, y, z] for x in (-0.5, 0.5) for y in (-0.5, 0.5) for z in (-0.5, 0.5)]}


def write(tmp_path, spec, name="body.json"):
    p = tmp_path / name
    p.write_text(json.dumps(spec) if not isinstance(spec, str) else spec)
    return str(p)


# ------------------------------------------------------------------ specs


def test_spec_kinds():
    assert isinstance(body_from_spec({"dim": 2, "kind": "ball", "radius": 2}), Ball)
    assert isinstance(body_from_spec(ELL), Ellipsoid)
    assert isinstance(body_from_spec(CUBE), Polytope)
    t = body_from_spec({"dim": 3, "kind": "transform", "linear": [2, 0, 0, 0, 1, 0, 0, 0, 1], "translation": [0, 0, 1], "base": ELL})
    assert isinstance(t, Transformed)
    assert t.support(np.array([1.0, 0, 0])) == pytest.approx(2.0)
    nested = body_from_spec({"dim": 3, "kind": "transform", "linear": [[2, 0, 0], [0, 1, 0], [0, 0, 1]], "base": ELL})
    assert nested.support(np.array([0, 0, 1.0])) == pytest.approx(3.0)


@pytest.mark.parametrize(
    "spec",
    [
        [],
        {"kind": "ball", "radius": 1},
        {"dim": 3, "kind": "blob"},
        {"dim": 3, "kind": "ball", "radius": 1, "colour": "red"},
        {"dim": 3, "kind": "ball", "radius": -1},
        {"dim": 3, "kind": "ball", "radius": True},
        {"dim": 1, "kind": "ball", "radius": 1},
        {"dim": 3, "kind": "ellipsoid", "semi_axes": [1, 2]},
        {"dim": 3, "kind": "ellipsoid", "semi_axes": [1, 2, "x"]},
        {"dim": 3, "kind": "ellipsoid", "semi_axes": [1, 2, 3], "rotation": [[1, 1, 0], [0, 1, 0], [0, 0, 1]]},
        {"dim": 3, "kind": "polytope", "vertices": [[0, 0, 0], [1, 0, 0], [0, 1, 0]]},
        {"dim": 3, "kind": "polytope", "vertices": [[0, 0], [1, 0], [0, 1]]},
        {"dim": 3, "kind": "transform", "linear": [1, 0, 0, 0, 1, 0, 0, 0, 0], "base": ELL},
        {"dim": 2, "kind": "transform", "linear": [1, 0, 0, 1], "base": ELL},
    ],
)
def test_bad_specs(spec):
    with pytest.raises(BodySpecError):
        body_from_spec(spec)


def test_spec_hash_is_canonical(tmp_path):
    a = {"dim": 3, "kind": "ellipsoid", "semi_axes": [1, 2, 3]}
    b = {"semi_axes": [1, 2, 3], "kind": "ellipsoid", "dim": 3}
    assert spec_hash(a) == spec_hash(b)
    assert len(spec_hash(a)) == 64
    body, spec, h = load_body(write(tmp_path, b))
    assert h == spec_hash(a) and spec == b


def test_load_errors(tmp_path):
    with pytest.raises(BodySpecError):
        load_body(str(tmp_path / "missing.json"))
    with pytest.raises(BodySpecError):
        load_body(write(tmp_path, "{not json"))


# ---------------------------------------------------------------- writers


@given(st.floats(allow_nan=False, allow_infinity=False))
def test_format_float_round_trips(x):
    text = format_float(x)
    assert float(text) == x
    assert isinstance(json.loads(text), float)


def test_format_float_specials():
    assert format_float(float("nan")) == "NaN"
    assert format_float(float("-inf")) == "-Infinity"
    assert format_float(2.0) == "2.0"
    assert format_float(0.1) == "0.10000000000000001"


def test_dumps_is_valid_json():
    doc = {"a": [1, 2.5, True, None], "b": {"c": np.float64(1.0), "d": np.arange(3)}, "e": [{"x": 1}], "f": [], "g": {}}
    assert json.loads(dumps(doc)) == {"a": [1, 2.5, True, None], "b": {"c": 1.0, "d": [0, 1, 2]}, "e": [{"x": 1}], "f": [], "g": {}}
    with pytest.raises(TypeError):
        dumps(object())


def test_table_text():
    text = table_text(["a", "b"], [[1.0, True], ["x", 3]], "\t")
    assert text == "a\tb\n1.0\ttrue\nx\t3\n"


# -------------------------------------------------------------------- cli


def run(argv):
    out, err = io.StringIO(), io.StringIO()
    parser = cli.build_parser()
    args = parser.parse_args(argv)
    cfg = cli.RunConfig(args.command, args.body, args.p, args.resolution, args.seed, dict(args.tolerance), args.out, args.format, getattr(args, "trace", None))
    return cli.run(cfg, out, err), out.getvalue(), err.getvalue()


def test_compute_json(tmp_path):
    code, out, _ = run(["compute", "--body", write(tmp_path, ELL), "--p", "2", "--resolution", "4"])
    doc = json.loads(out)
    assert code == 0
    assert doc["schema"] == SCHEMA and doc["command"] == "compute" and doc["pass"] is True
    assert doc["body_sha256"] == spec_hash(ELL)
    assert doc["resolution"] == 4 and doc["seed"] == 0 and doc["p"] == 2.0
    assert doc["report"]["value_sphere"] == pytest.approx(4 * np.pi * 6 ** (1 / 5), rel=1e-3)


def test_compute_trace_and_formats(tmp_path):
    trace = tmp_path / "trace.csv"
    code, out, _ = run(["compute", "--body", write(tmp_path, CUBE), "--format", "csv", "--trace", str(trace)])
    assert code == 0
    rows = list(csv.reader(io.StringIO(out)))
    assert rows[0] == ["representation", "value"] and rows[1] == ["boundary", "0.0"]
    t = list(csv.reader(trace.open()))
    assert t[0] == ["iteration", "value"]
    vals = [float(r[1]) for r in t[1:]]
    assert vals[-1] < 0.05 and all(b <= a for a, b in zip(vals, vals[1:]))
    code, out, _ = run(["verify", "--body", write(tmp_path, ELL), "--format", "tsv", "--resolution", "4"])
    assert code == 0 and out.splitlines()[0].split("\t")[0] == "name"


def test_tolerance_override_can_fail_a_check(tmp_path):
    code, out, _ = run(["compute", "--body", write(tmp_path, ELL), "--tolerance", "agreement=1e-12"])
    assert code == 1 and json.loads(out)["pass"] is False


@pytest.mark.parametrize(
    "argv",
    [
        ["compute", "--p", "0"],
        ["compute", "--p", "-1"],
        ["compute", "--tolerance", "bogus=1"],
        ["compute", "--resolution", "0"],
        ["coarea"],
        ["demo-usc"],
    ],
)
def test_input_errors_exit_2(tmp_path, argv, capsys):
    body = write(tmp_path, CUBE if argv[0] in ("coarea", "demo-usc") else ELL)
    assert cli.main([*argv, "--body", body]) == 2
    assert "asa-kit" in capsys.readouterr().err


def test_bad_spec_and_flags_exit_2(tmp_path):
    assert cli.main(["compute", "--body", write(tmp_path, {"dim": 3, "kind": "ball", "radius": 1, "x": 0})]) == 2
    assert cli.main(["compute", "--body", write(tmp_path, ELL), "--format", "xml"]) == 2
    assert cli.main(["compute", "--body", write(tmp_path, ELL), "--tolerance", "novalue"]) == 2
    assert cli.main(["frobnicate", "--body", "x"]) == 2
    assert cli.main(["compute", "--body", write(tmp_path, {"dim": 3, "kind": "ball", "radius": 1, "center": [5, 0, 0]}), "--p", "2"]) == 2


def test_numerical_failure_exit_3(tmp_path, monkeypatch):
    def stalled(*a, **k):
        rep = compute_asa(*a, **k)
        rep.cm_converged = False
        return rep

    monkeypatch.setattr(cli, "compute_asa", stalled)
    assert cli.main(["compute", "--body", write(tmp_path, ELL), "--resolution", "3"]) == 3


def test_non_convex_oracle_spec_is_numerical(tmp_path, monkeypatch):
    from asakit.verify import quartic_body

    monkeypatch.setattr(cli, "load_body", lambda path: (quartic_body(3, eps=-2.0), {}, "0" * 64))
    assert cli.main(["compute", "--body", "unused"]) == 3


def test_sweep_and_demo(tmp_path):
    code, out, _ = run(["sweep", "--body", write(tmp_path, ELL), "--resolution", "3"])
    doc = json.loads(out)
    assert code == 0 and doc["report"]["ladder"] == [3, 4, 5]
    assert all(doc["report"]["cauchy"].values())
    assert cli.sweep_ladder(2, 256) == [256, 512, 1024]
    code, out, _ = run(["demo-usc", "--body", write(tmp_path, ELL), "--format", "csv", "--resolution", "4"])
    assert code == 0 and out.splitlines()[0] == "m,d_m,omega_P,omega_K"


def test_module_entry_point(tmp_path):
    out = tmp_path / "r.json"
    res = subprocess.run(
        [sys.executable, "-m", "asakit", "compute", "--body", write(tmp_path, ELL), "--resolution", "3", "--out", str(out)],
        capture_output=True,
        text=True,
    )
    assert res.returncode == 0 and res.stdout == ""
    assert json.loads(out.read_text())["pass"] is True
    ver = subprocess.run([sys.executable, "-m", "asakit", "--version"], capture_output=True, text=True)
    assert ver.returncode == 0 and "0.1.0" in ver.stdout
