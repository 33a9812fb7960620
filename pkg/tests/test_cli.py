import csv
import json
from pathlib import Path

import pytest

from minkcurve.cli import main
from minkcurve.curvedoc import curve_spec_from_dict, load_curve_spec
from minkcurve.errors import (BadParams, FileError, ParseError, SpecValidationError,
                              UnknownFamily)
from minkcurve.runner import FRAME_COLUMNS, PROFILE_COLUMNS, fmt, run_analyze, run_verify

DATA = Path(__file__).resolve().parent.parent / "data" / "curves"
W_EXPR = ["sinh(t)", "cosh(t)", "sqrt(2)*cos(t)", "sqrt(2)*sin(t)"]


def _spec(name):
    return str(DATA / f"{name}.json")


def _kv(text):
    return dict(line.split(" = ", 1) for line in text.splitlines() if " = " in line)


def test_catalog_lists_six_families(capsys):
    assert main(["catalog"]) == 0
    lines = capsys.readouterr().out.splitlines()
    assert len(lines) == 6
    assert lines[0].startswith("spacelike_w: ")


def test_frame_prints_w_curvatures(capsys):
    assert main(["frame", _spec("spacelike_w"), "--at", "0.0"]) == 0
    kv = _kv(capsys.readouterr().out)
    assert [round(float(kv[k]), 7) for k in ("k1", "k2", "k3")] == [1.7320508, 1.6329932, 0.5773503]
    assert kv["case"] == "SpacelikeN_TimelikeB1"
    assert float(kv["EK1"]) == pytest.approx(0.0, abs=1e-12)


def test_frame_on_planar_point_exits_2(capsys):
    assert main(["frame", _spec("planar_circle"), "--at", "1.0"]) == 2
    captured = capsys.readouterr()
    assert "k1 = 1" in captured.out
    assert "DegenerateTorsion" in captured.err


@pytest.mark.parametrize("argv", [
    ["analyze", "missing.json"],
    ["frame", "missing.json", "--at", "0"],
    ["bogus"],
    [],
    ["verify", _spec("spacelike_w"), "--lambda", "-2"],
    ["frame", _spec("spacelike_w")],
    ["frame", _spec("spacelike_w"), "--at", "100"],
    ["--tol", "zero", "catalog"],
])
def test_input_errors_exit_1(argv, capsys):
    assert main(argv) == 1


def test_analyze_writes_outputs(tmp_path, capsys):
    out = tmp_path / "w"
    assert main(["analyze", _spec("spacelike_w"), "--out", str(out)]) == 0
    assert "verdicts: GeneralHelix, WCurve" in capsys.readouterr().out
    with (out / "profile.csv").open() as fh:
        rows = list(csv.reader(fh))
    assert tuple(rows[0]) == PROFILE_COLUMNS and len(rows) == 101
    with (out / "frame.csv").open() as fh:
        frame = list(csv.reader(fh))
    assert tuple(frame[0]) == FRAME_COLUMNS and len(frame[1]) == 17
    report = json.loads((out / "report.json").read_text())
    assert report["verdicts"] == ["GeneralHelix", "WCurve"]
    assert report["tolerances"]["tol"] == 1e-6 and report["tolerances"]["eps_null"] == 1e-10


def test_analyze_is_deterministic(tmp_path):
    a, b = tmp_path / "a", tmp_path / "b"
    for d in (a, b):
        assert main(["analyze", _spec("nonhelix_control"), "--out", str(d)]) == 0
    for f in ("profile.csv", "frame.csv", "report.json"):
        assert (a / f).read_bytes() == (b / f).read_bytes()


def test_analyze_json_format(tmp_path):
    out = tmp_path / "j"
    assert main(["analyze", _spec("planar_circle"), "--out", str(out), "--format", "json"]) == 0
    rows = json.loads((out / "profile.json").read_text())
    assert len(rows) == 100 and set(rows[0]) == set(PROFILE_COLUMNS)
    assert rows[0]["case"] == "Planar"
    report = json.loads((out / "report.json").read_text())
    assert "Planar2D" in report["verdicts"]


def test_row_count_drops_degenerate_samples(tmp_path):
    spec = curve_spec_from_dict({"kind": "expression", "components": ["0", "t", "t^3/3", "t^4/4"],
                                 "domain": [-1, 1], "samples": 21})
    report = run_analyze(spec, tmp_path)
    with (tmp_path / "profile.csv").open() as fh:
        n = sum(1 for _ in fh) - 1
    assert n == 21 - len(report.profile.dropped) == 20


def test_straight_line_exits_2(tmp_path, capsys):
    assert main(["analyze", _spec("straight_line"), "--out", str(tmp_path)]) == 2
    assert "DegenerateCurvature" in capsys.readouterr().err


def test_global_flags_either_side(capsys):
    assert main(["--tol", "1e-4", "frame", _spec("spacelike_w"), "--at", "0.5"]) == 0
    assert main(["frame", _spec("spacelike_w"), "--at", "0.5", "--tol", "1e-4"]) == 0


@pytest.mark.parametrize("name, lambdas", [("spacelike_w", [2.0]), ("timelike_w", [0.5, 2.0])])
def test_verify_passes(name, lambdas):
    report = run_verify(load_curve_spec(_spec(name)), lambdas)
    assert report.passed
    assert report.suites["helix_identity"].note == "identity holds"


def test_verify_nonhelix_reports_not_a_helix(capsys):
    assert main(["verify", _spec("nonhelix_control")]) == 0
    out = capsys.readouterr().out
    assert "helix_identity" in out and "not a helix" in out


def test_verify_fails_at_impossible_tolerance(capsys):
    assert main(["verify", _spec("spacelike_w"), "--tol", "1e-20"]) == 2


def test_fmt_round_trips():
    assert fmt(-0.0) == "0" and float(fmt(0.1)) == 0.1 and fmt(1 / 3) == "0.33333333333333331"


# curve description documents

def test_expression_spec_valid():
    spec = curve_spec_from_dict({"kind": "expression", "components": W_EXPR, "domain": [0, 2]})
    assert spec.samples == 100 and spec.components == tuple(W_EXPR)


def test_builtin_spec_with_top_level_params():
    doc = {"kind": "builtin", "family": "spacelike_w", "a": 1, "m": 1, "b": 1.41421356, "n": 1}
    spec = curve_spec_from_dict(doc)
    assert spec.params["b"] == 1.41421356


@pytest.mark.parametrize("doc, err, field", [
    ({"kind": "expression", "components": W_EXPR[:3], "domain": [0, 2]}, SpecValidationError,
     "components"),
    ({"kind": "expression", "components": W_EXPR}, SpecValidationError, "domain"),
    ({"kind": "expression", "components": W_EXPR, "domain": [2, 0]}, SpecValidationError, "domain"),
    ({"kind": "expression", "components": W_EXPR, "domain": [0, 2], "samples": 10},
     SpecValidationError, "samples"),
    ({"kind": "expression", "components": W_EXPR, "domain": [0, 2], "tolerances": {"foo": 1}},
     SpecValidationError, "tolerances.foo"),
    ({"kind": "builtin", "family": "spacelike_w", "data": "x.csv"}, SpecValidationError, "data"),
    ({"kind": "curve"}, SpecValidationError, "kind"),
    ({"kind": "samples"}, SpecValidationError, "data"),
])
def test_spec_validation_errors(doc, err, field):
    with pytest.raises(err) as info:
        curve_spec_from_dict(doc)
    assert info.value.field == field


def test_spec_forwards_parse_error_with_component():
    doc = {"kind": "expression", "components": ["t", "t", "sin(", "0"], "domain": [0, 1]}
    with pytest.raises(ParseError) as info:
        curve_spec_from_dict(doc)
    assert info.value.component == 2 and info.value.position == 4


@pytest.mark.parametrize("doc, err", [
    ({"kind": "builtin", "family": "torus"}, UnknownFamily),
    ({"kind": "builtin", "family": "timelike_w", "params": {"a": 3}}, BadParams),
])
def test_spec_family_errors(doc, err):
    with pytest.raises(err):
        curve_spec_from_dict(doc)


def test_load_errors(tmp_path):
    with pytest.raises(FileError):
        load_curve_spec(tmp_path / "none.json")
    bad = tmp_path / "bad.json"
    bad.write_text("{kind: ")
    with pytest.raises(SpecValidationError):
        load_curve_spec(bad)


def test_samples_spec_resolves_relative_path():
    spec = load_curve_spec(_spec("equiform_helix"))
    assert spec.data == DATA / "equiform_helix.csv"
    assert spec.build_source().t.size > 11
