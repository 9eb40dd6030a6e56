import json
import re
import subprocess
import sys

import numpy as np
import pytest

import framescale as fs
from framescale.cli import main
from framescale.fileio import load_report
from helpers import r3_fixture, tilted_pair_frame


@pytest.fixture()
def workdir(tmp_path):
    fs.save_frame(tilted_pair_frame(0.1), tmp_path / "pair.csv")
    fs.save_frame(r3_fixture(), tmp_path / "triple.csv")
    fs.save_frame(fs.Frame(np.eye(2)), tmp_path / "onb2.csv")
    (tmp_path / "proj.csv").write_text("1,0\n0,0\n")
    return tmp_path


def run_cli(args, capsys):
    code = main([str(a) for a in args])
    captured = capsys.readouterr()
    report = json.loads(captured.out) if captured.out else None
    return code, report, captured.err


def test_analyze(workdir, capsys):
    code, report, _ = run_cli(["analyze", workdir / "onb2.csv"], capsys)
    assert code == 0
    assert report["verdict"] == "spanning"
    assert report["bounds"]["lower"] == 1.0 and report["bounds"]["upper"] == 1.0
    assert report["version"] == fs.__version__


def test_scale_feasible_and_infeasible(workdir, capsys):
    code, report, _ = run_cli(["scale", workdir / "onb2.csv"], capsys)
    assert code == 0 and report["verdict"] == "feasible"
    assert report["scaling"]["c"] == [1, 1]

    quad = workdir / "quad.csv"
    quad.write_text("0.7071067811865476,0.7071067811865476\n0.8944271909999159,0.4472135954999579\n0.4472135954999579,0.8944271909999159\n")
    code, report, _ = run_cli(["scale", quad], capsys)
    assert code == 0
    assert report["verdict"] == "infeasible" and report["certificate"] == "open-quadrant"


def test_piecewise_split_and_verify_round_trip(workdir, capsys):
    out = workdir / "split.json"
    code, _, _ = run_cli(
        [
            "piecewise",
            workdir / "pair.csv",
            "--construct",
            "split",
            "--projection",
            workdir / "proj.csv",
            "--p-indices",
            "0",
            "--q-indices",
            "1",
            "--out",
            out,
        ],
        capsys,
    )
    assert code == 0
    report = load_report(out)
    assert report["verdict"] == "found"
    assert abs(report["scaling"]["a"][0] - 10.0) <= 1e-12
    assert abs(report["scaling"]["b"][1] - np.sqrt(2.0)) <= 1e-15

    code, verify_report, _ = run_cli(["verify", out], capsys)
    assert code == 0
    assert verify_report["verdict"] == "pass"
    assert verify_report["residuals"]["max_drift_from_recorded"] <= 1e-12


def test_verify_standard_scale_report(workdir, capsys):
    out = workdir / "scale.json"
    code, _, _ = run_cli(["scale", workdir / "onb2.csv", "--out", out], capsys)
    assert code == 0
    code, report, _ = run_cli(["verify", out], capsys)
    assert code == 0 and report["verdict"] == "pass"
    assert report["residuals"]["max_drift_from_recorded"] == 0


def test_piecewise_r3_and_search(workdir, capsys):
    code, report, _ = run_cli(
        ["piecewise", workdir / "triple.csv", "--construct", "r3", "--seed", "0"], capsys
    )
    assert code == 0 and report["verdict"] == "found"
    assert report["residuals"]["direct"] <= 1e-10

    code, report, _ = run_cli(["piecewise", workdir / "triple.csv", "--rank", "1,2"], capsys)
    assert code == 0 and report["verdict"] == "found"


def test_piecewise_search_miss_is_exit_zero(workdir, capsys):
    rng = np.random.default_rng(0)
    center = rng.standard_normal(4)
    center /= np.linalg.norm(center)
    X = center + 0.02 * rng.standard_normal((6, 4))
    X /= np.linalg.norm(X, axis=1, keepdims=True)
    fs.save_frame(fs.Frame(X), workdir / "clustered.csv")
    code, report, _ = run_cli(
        ["piecewise", workdir / "clustered.csv", "--rank", "2", "--budget", "50"], capsys
    )
    assert code == 0
    assert report["verdict"] == "not-found"
    assert "not a proof" in report["note"]


def test_obstruct(workdir, capsys):
    rng = np.random.default_rng(1)
    center = rng.standard_normal(4)
    center /= np.linalg.norm(center)
    X = center + 0.02 * rng.standard_normal((6, 4))
    X /= np.linalg.norm(X, axis=1, keepdims=True)
    fs.save_frame(fs.Frame(X), workdir / "clustered.csv")
    code, report, _ = run_cli(["obstruct", workdir / "clustered.csv"], capsys)
    assert code == 0
    assert report["verdict"] == "cor-4.4" and report["certificate"] == "cor-4.4"
    assert report["applicable_ranks"] == [2]
    assert report["epsilon"] < 0.125


def test_transport_unitary_and_canonical(workdir, capsys):
    out = workdir / "r3.json"
    code, _, _ = run_cli(
        ["piecewise", workdir / "triple.csv", "--construct", "r3", "--out", out], capsys
    )
    assert code == 0

    rot = np.linalg.qr(np.random.default_rng(2).standard_normal((3, 3)))[0]
    upath = workdir / "rot.csv"
    upath.write_text("\n".join(",".join(f"{x:.17g}" for x in row) for row in rot) + "\n")
    moved = workdir / "moved.json"
    code, report, _ = run_cli(["transport", out, "--unitary", upath, "--out", moved], capsys)
    assert code == 0
    assert report is None
    report = load_report(moved)
    assert report["verdict"] == "transported"
    assert report["residuals"]["direct"] <= 1e-10
    assert "frame" in report

    code, verify_report, _ = run_cli(["verify", moved], capsys)
    assert code == 0 and verify_report["verdict"] == "pass"

    code, canon, _ = run_cli(["transport", moved, "--to-canonical"], capsys)
    assert code == 0
    proj = np.array(canon["scaling"]["projection"])
    assert np.array_equal(proj, np.diag([1.0, 0.0, 0.0]))


def test_canonical_parseval_command(workdir, capsys):
    out_frame = workdir / "tight.csv"
    code, report, _ = run_cli(
        ["canonical-parseval", workdir / "pair.csv", "--out-frame", out_frame], capsys
    )
    assert code == 0
    assert report["verdict"] == "converted"
    assert report["residuals"]["parseval_defect"] <= 1e-12
    tightened = fs.load_frame(out_frame)
    assert fs.verify_parseval(tightened.vectors).passed


def test_exit_codes(workdir, capsys):
    bad = workdir / "ragged.csv"
    bad.write_text("1,0\n0,1,0\n")
    code, _, err = run_cli(["analyze", bad], capsys)
    assert code == 2 and "line 2" in err

    code, _, err = run_cli(
        ["piecewise", workdir / "pair.csv", "--construct", "r4special"], capsys
    )
    assert code == 1 and "--indices" in err

    notproj = workdir / "notproj.csv"
    notproj.write_text("1,0.4\n0.4,0.2\n")
    code, _, err = run_cli(
        [
            "piecewise",
            workdir / "pair.csv",
            "--construct",
            "split",
            "--projection",
            notproj,
            "--p-indices",
            "0",
            "--q-indices",
            "1",
        ],
        capsys,
    )
    assert code == 2 and "projection" in err

    code, _, _ = run_cli(["analyze", workdir / "does-not-exist.csv"], capsys)
    assert code == 2


def test_report_determinism(workdir, capsys):
    from framescale.fileio import dumps_json

    def stripped(args):
        code, report, _ = run_cli(args, capsys)
        assert code == 0
        return re.sub(r'"timestamp": "[^"]*"', '"timestamp": null', dumps_json(report))

    args = ["piecewise", workdir / "triple.csv", "--construct", "r3", "--seed", "3"]
    assert stripped(args) == stripped(args)


def test_json_frame_input(workdir, capsys):
    jframe = workdir / "frame.json"
    jframe.write_text('{"dim": 2, "vectors": [[1, 0], [0, 1]], "labels": ["u", "v"]}')
    code, report, _ = run_cli(["analyze", jframe], capsys)
    assert code == 0 and report["verdict"] == "spanning"
    assert report["frame_operator"] == [[1, 0], [0, 1]]


def test_internal_inconsistency_exit_code(workdir, capsys, monkeypatch):
    import framescale.cli as cli_module

    def boom(*args, **kwargs):
        raise fs.InternalInconsistencyError("simulated two-route disagreement")

    monkeypatch.setattr(cli_module, "verify_piecewise", boom)
    code, _, err = run_cli(
        ["piecewise", workdir / "triple.csv", "--construct", "r3"], capsys
    )
    assert code == 3 and "internal inconsistency" in err


def test_subprocess_entry_point(workdir):
    result = subprocess.run(
        [sys.executable, "-m", "framescale", "analyze", str(workdir / "onb2.csv")],
        capture_output=True,
        text=True,
    )
    assert result.returncode == 0
    report = json.loads(result.stdout)
    assert report["command"] == "analyze"
