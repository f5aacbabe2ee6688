import csv
import io
import json
import subprocess
import sys

import pytest

from spheretwist.cli import EXIT_FAILED, EXIT_INVALID, EXIT_OK, RunReport, main
from spheretwist.sphere import SpherePoint
from spheretwist.tower import TowerScalar

N1 = {"sources": [{"x": "1", "y": "0", "z": "0"}], "targets": [{"x": "0", "y": "1", "z": "0"}]}
N2 = {
    "sources": [{"u": "1/2", "v": "3"}, {"u": "-2", "v": "1/3"}],
    "targets": [{"u": "0", "v": "1"}, {"u": "5/7", "v": "-1"}],
    "fixed": [{"x": "0", "y": "0", "z": "1"}],
}


def write(tmp_path, name, doc):
    path = tmp_path / name
    path.write_text(doc if isinstance(doc, str) else json.dumps(doc))
    return str(path)


def run(args, capsys):
    status = main(args)
    out, err = capsys.readouterr()
    return status, out, err


def solve_report(tmp_path, capsys, doc=N1, extra=()):
    status, out, _ = run(["solve", "--input", write(tmp_path, "inst.json", doc), *extra], capsys)
    assert status == EXIT_OK
    return json.loads(out)


def all_scalar_strings(obj):
    if isinstance(obj, dict):
        for k, v in obj.items():
            if k in {"x", "y", "z"} and isinstance(v, str):
                yield v
            else:
                yield from all_scalar_strings(v)
    elif isinstance(obj, list):
        for v in obj:
            yield from all_scalar_strings(v)


def test_solve_single_point(tmp_path, capsys):
    report = solve_report(tmp_path, capsys)
    rows = report["result"]["certificate"]
    assert len(rows) == 1 and rows[0]["ok"]
    assert rows[0]["image"] == {"x": "0", "y": "1", "z": "0"}
    assert RunReport.from_json(report).to_json() == report


def test_solve_rejects_off_sphere_point(tmp_path, capsys):
    doc = {"sources": [{"x": "1", "y": "0", "z": "1"}], "targets": [{"x": "1", "y": "0", "z": "0"}]}
    status, out, err = run(["solve", "--input", write(tmp_path, "bad.json", doc)], capsys)
    assert status == EXIT_INVALID
    assert "not on S^2" in err and "sources[0]" in err and out == ""


@pytest.mark.parametrize(
    "doc",
    [
        "{not json",
        {"sources": [{"x": "1", "y": "0", "z": "0"}] * 2, "targets": [{"u": "0", "v": "0"}, {"u": "1", "v": "1"}]},
        {"sources": [{"x": "1", "y": "0", "z": "0"}], "targets": []},
        {"sources": [{"x": "one"}], "targets": [{"u": "0", "v": "0"}]},
    ],
)
def test_solve_validation_errors(tmp_path, capsys, doc):
    status, _, err = run(["solve", "--input", write(tmp_path, "bad.json", doc)], capsys)
    assert status == EXIT_INVALID and err.startswith("error:")


def test_solve_empty_tuples(tmp_path, capsys):
    report = solve_report(tmp_path, capsys, {"sources": [], "targets": []})
    assert report["result"]["certificate"] == []
    assert report["result"]["plan"]["steps"] == []


def test_solve_is_deterministic(tmp_path, capsys):
    a = solve_report(tmp_path, capsys, N2)
    b = solve_report(tmp_path, capsys, N2)
    a.pop("timing"), b.pop("timing")
    assert json.dumps(a, sort_keys=True) == json.dumps(b, sort_keys=True)


def test_report_values_reparse(tmp_path, capsys):
    report = solve_report(tmp_path, capsys, N2)
    strings = list(all_scalar_strings(report))
    assert strings
    for s in strings:
        x = TowerScalar.parse(s)
        assert str(x) == s
    for row in report["result"]["certificate"]:
        assert SpherePoint.from_json(row["image"]) == SpherePoint.from_json(row["target"])


def test_solve_flatten(tmp_path, capsys):
    report = solve_report(tmp_path, capsys, N1, ["--flatten"])
    degrees = report["result"]["degrees"]
    assert degrees["max_degree"] >= 1
    assert len(report["result"]["flattened"]["components"]) == 3


def test_verify_replay_and_tamper(tmp_path, capsys):
    report = solve_report(tmp_path, capsys, N2)
    plan_path = write(tmp_path, "report.json", report)
    inst_path = write(tmp_path, "inst.json", N2)
    status, out, _ = run(["verify", "--plan", plan_path, "--input", inst_path], capsys)
    assert status == EXIT_OK and json.loads(out)["result"]["failed"] == 0

    tampered = dict(N2, targets=[N2["targets"][0], {"u": "5/7", "v": "-2"}])
    status, out, _ = run(["verify", "--plan", plan_path, "--input", write(tmp_path, "t.json", tampered)], capsys)
    result = json.loads(out)["result"]
    assert status == EXIT_FAILED
    assert [r["ok"] for r in result["rows"]] == [True, True, False]


def test_verify_identity_plan(tmp_path, capsys):
    plan_path = write(tmp_path, "id.json", {"steps": []})
    pts = {"points": [{"u": "3", "v": "-1/2"}]}
    status, out, _ = run(["verify", "--plan", plan_path, "--input", write(tmp_path, "p.json", pts)], capsys)
    (row,) = json.loads(out)["result"]["rows"]
    assert status == EXIT_OK and row["image"] == row["source"]


def test_verify_random_round_trips(tmp_path, capsys):
    plan_path = write(tmp_path, "report.json", solve_report(tmp_path, capsys))
    status, out, _ = run(["verify", "--plan", plan_path, "--samples", "3", "--seed", "4"], capsys)
    result = json.loads(out)["result"]
    assert status == EXIT_OK and result["passed"] == 4


def read_csv(text):
    return list(csv.DictReader(io.StringIO(text)))


def test_trace_identity_echoes_samples(tmp_path, capsys):
    status, out, _ = run(["trace", "--plan", write(tmp_path, "id.json", {"steps": []}), "--samples", "5"], capsys)
    rows = read_csv(out)
    assert status == EXIT_OK and len(rows) == 5
    assert [r["u"] for r in rows] == ["-2", "-1", "0", "1", "2"]
    assert rows[3]["x"] == "1" and rows[3]["z"] == "0"


def test_trace_boost_example(tmp_path, capsys):
    plan = write(tmp_path, "b.json", {"steps": [{"kind": "boost", "lambda": "2"}]})
    status, out, _ = run(["trace", "--plan", plan, "--samples", "5"], capsys)
    rows = [r for r in read_csv(out) if r["u"] == "1" and r["step"] == "1"]
    (row,) = rows
    assert (row["x"], row["y"], row["z"]) == ("4/5", "0", "3/5")
    assert row["x_approx"] == "0.8" and row["kind"] == "boost"


def test_trace_twist_plan_stays_on_sphere(tmp_path, capsys):
    plan_path = write(tmp_path, "report.json", solve_report(tmp_path, capsys, N2))
    status, out, _ = run(["trace", "--plan", plan_path, "--samples", "3"], capsys)
    rows = read_csv(out)
    assert status == EXIT_OK and any(r["kind"] == "twist" for r in rows)
    for r in rows:
        SpherePoint(*(TowerScalar.parse(r[c]) for c in "xyz"))
        assert abs(float(r["x_approx"]) - float(TowerScalar.parse(r["x"]))) < 1e-9


def test_forest_reduce(tmp_path, capsys):
    doc = {
        "nodes": [
            {"id": "R1", "tag": "center", "parent": None},
            {"id": "R2", "tag": "center", "parent": "R1"},
            {"id": "P", "tag": "marked", "parent": "R2"},
        ]
    }
    status, out, _ = run(["forest-reduce", "--input", write(tmp_path, "f.json", doc), "--pretty"], capsys)
    result = json.loads(out)["result"]
    assert status == EXIT_OK
    assert result["steps"] == result["initial_total_height"] == 2
    assert result["heights"] == [2, 1, 0] and result["normal_form"]
    assert result["pretty"]["initial"].splitlines()[1] == "  * R2"


def test_forest_reduce_invalid(tmp_path, capsys):
    doc = {"nodes": [{"id": "P", "tag": "marked"}, {"id": "Q", "tag": "marked", "parent": "P"}]}
    status, _, err = run(["forest-reduce", "--input", write(tmp_path, "f.json", doc)], capsys)
    assert status == EXIT_INVALID and "marked point" in err


def test_classify(tmp_path, capsys):
    pts = lambda *uv: [{"u": u, "v": v} for u, v in uv]  # noqa: E731
    doc = {
        "X": {"kind": "sphere_blowup", "points": pts(("0", "1"), ("2", "1/2"))},
        "Y": {"kind": "sphere_blowup", "points": pts(("1", "1"), ("-3", "0"))},
    }
    status, out, _ = run(["classify", "--input", write(tmp_path, "c.json", doc)], capsys)
    result = json.loads(out)["result"]
    assert status == EXIT_OK and result["isomorphic"] and result["witness_verified"]

    doc["Y"] = {"kind": "torus"}
    _, out, _ = run(["classify", "--input", write(tmp_path, "c.json", doc)], capsys)
    result = json.loads(out)["result"]
    assert not result["isomorphic"] and "witness" not in result


def test_output_flag(tmp_path, capsys):
    target = tmp_path / "out.json"
    status, out, _ = run(["solve", "--input", write(tmp_path, "i.json", N1), "--output", str(target)], capsys)
    assert status == EXIT_OK and out == ""
    assert json.loads(target.read_text())["command"]["name"] == "solve"


def test_module_entry_point(tmp_path):
    proc = subprocess.run(
        [sys.executable, "-m", "spheretwist", "solve", "--input", write(tmp_path, "i.json", N1)],
        capture_output=True,
        text=True,
        check=False,
    )
    assert proc.returncode == 0
    assert json.loads(proc.stdout)["result"]["verified"] is True
