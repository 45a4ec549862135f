import json

import pytest

from cifc.channel import canonical_channel, save_channel
from cifc.cli import main
from cifc.probability import joint_to_json
from cifc.polytope import polytope_from_json

from helpers import square_assignment


@pytest.fixture()
def orth_channel(tmp_path):
    path = tmp_path / "orth.json"
    save_channel(canonical_channel("orthogonal_noiseless"), path)
    return path


@pytest.fixture()
def square_dist(tmp_path):
    from cifc.probability import marginalize

    d = square_assignment()
    pre = marginalize(d, ("U1c", "U2c", "U1pb", "U2pb", "X1", "X2"))
    path = tmp_path / "square.json"
    path.write_text(json.dumps(joint_to_json(pre)))
    return path


def test_validate_ok(orth_channel):
    assert main(["validate", "--channel", str(orth_channel)]) == 0


def test_validate_malformed_exits_2(tmp_path, capsys):
    bad = tmp_path / "bad.json"
    bad.write_text('{"x1":2,"x2":2,"y1":2,"y2":2,"p":[0.5,0.5]}')
    assert main(["validate", "--channel", str(bad)]) == 2
    assert "p" in capsys.readouterr().err


def test_validate_missing_file_exits_2(tmp_path):
    assert main(["validate", "--channel", str(tmp_path / "nope.json")]) == 2


def test_project_square(tmp_path, orth_channel, square_dist):
    out = tmp_path / "poly.json"
    rc = main([
        "project", "--schema", "RTD", "--channel", str(orth_channel),
        "--dist", str(square_dist), "--out", str(out),
    ])
    assert rc == 0
    poly = polytope_from_json(json.loads(out.read_text()))
    assert any(abs(x - 1) < 1e-9 and abs(y - 1) < 1e-9 for x, y in poly.vertices)
    csv_lines = (tmp_path / "poly.csv").read_text().strip().splitlines()
    assert csv_lines[0] == "R1,R2" and len(csv_lines) == 5


def test_project_artifacts_roundtrip_and_deterministic(tmp_path, orth_channel, square_dist):
    out1, out2 = tmp_path / "a.json", tmp_path / "b.json"
    for out in (out1, out2):
        main([
            "project", "--schema", "RTD", "--channel", str(orth_channel),
            "--dist", str(square_dist), "--out", str(out),
        ])
    assert out1.read_bytes() == out2.read_bytes()


def test_frontier_writes_csv(tmp_path, orth_channel):
    out = tmp_path / "front.csv"
    rc = main([
        "frontier", "--schema", "RTD", "--channel", str(orth_channel),
        "--seed", "2", "--samples", "40", "--grid", "3", "--out", str(out),
    ])
    assert rc == 0
    lines = out.read_text().strip().splitlines()
    assert lines[0] == "lambda,R1,R2,seed"
    assert len(lines) >= 2


def test_frontier_deterministic(tmp_path, orth_channel):
    outs = []
    for name in ("f1.csv", "f2.csv"):
        out = tmp_path / name
        main([
            "frontier", "--schema", "RTD", "--channel", str(orth_channel),
            "--seed", "5", "--samples", "30", "--grid", "2", "--out", str(out),
        ])
        outs.append(out.read_bytes())
    assert outs[0] == outs[1]


def test_verify_suite_ok(tmp_path):
    out = tmp_path / "report.json"
    rc = main(["verify", "--suite", "maric", "--samples", "6", "--seed", "1",
               "--out", str(out)])
    assert rc == 0
    report = json.loads(out.read_text())
    assert report["ok"] is True
    check = report["suites"][0]["checks"][0]
    assert {"id", "seeds_run", "max_abs_violation", "worst_seed"} <= set(check)


def test_verify_reports_violation_with_exit_1(tmp_path):
    # an absurd tolerance turns roundoff into reported violations
    rc = main(["verify", "--suite", "maric", "--samples", "6", "--seed", "1",
               "--tol-mi", "1e-30", "--out", str(tmp_path / "r.json")])
    assert rc == 1
    report = json.loads((tmp_path / "r.json").read_text())
    assert report["ok"] is False


def test_verify_deterministic_bytes(tmp_path):
    outs = []
    for name in ("r1.json", "r2.json"):
        out = tmp_path / name
        main(["verify", "--suite", "devroye", "--samples", "5", "--seed", "3",
              "--out", str(out)])
        outs.append(out.read_bytes())
    assert outs[0] == outs[1]


def test_manifest_full_catalog(tmp_path):
    out = tmp_path / "manifest.json"
    assert main(["manifest", "--out", str(out)]) == 0
    man = json.loads(out.read_text())
    assert set(man) == {
        "RTD", "RTD_IN", "DMT_OUT", "CC", "CCP", "RTD_CC", "JIANG", "RTD_JIANG", "MARIC"
    }
    assert [c["label"] for c in man["RTD"]["constraints"]][:3] == ["1a", "1b", "1c"]


def test_manifest_single_schema(tmp_path):
    out = tmp_path / "rtd.json"
    assert main(["manifest", "--schema", "RTD", "--out", str(out)]) == 0
    man = json.loads(out.read_text())
    assert man["id"] == "RTD"
