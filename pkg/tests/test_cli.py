import json

import pytest

import drill
from drill import EXIT_FLAG_FAILURE, EXIT_INPUT_ERROR, EXIT_NUMERICAL_FAILURE, EXIT_OK, main
from utils.errors import QuadratureError


def run(capsys, argv):
    code = main(argv)
    captured = capsys.readouterr()
    return code, captured.out, captured.err


def test_constants(capsys):
    code, out, _ = run(capsys, ["constants"])
    payload = json.loads(out)
    assert code == EXIT_OK
    assert payload["eta"] == pytest.approx(0.31783724519578227)
    assert payload["bending_length_constant"] == pytest.approx(0.152958, abs=1e-3)
    assert payload["L0"] == 0.9
    assert len(payload["f_table"]) == len(payload["g_table"])


def test_drill_bound_with_reference_constant(capsys):
    code, out, err = run(capsys, ["drill-bound", "--length", "0.01", "--reference-smooth-nehari"])
    report = json.loads(out)
    assert code == EXIT_OK
    assert report["final_bound"] == pytest.approx(0.36507, abs=1e-4)
    assert report["banner"].startswith("SMOOTH-CASE REFERENCE ONLY")
    assert "SMOOTH-CASE" in err


def test_drill_bound_flags_long_axis(capsys):
    code, out, _ = run(capsys, ["drill-bound", "--length", "6.0", "--K", "1.5"])
    report = json.loads(out)
    assert code == EXIT_FLAG_FAILURE
    assert not report["flags"]["length_threshold"]
    assert report["final_bound"] > 0


def test_drill_bound_requires_K(capsys):
    code, out, err = run(capsys, ["drill-bound", "--length", "0.01"])
    assert code == EXIT_INPUT_ERROR
    assert out == ""
    assert "K" in err


@pytest.mark.parametrize(
    "argv",
    [
        ["drill-bound", "--spec", "no_such_spec.json", "--K", "1.5"],
        ["drill-bound", "--length", "0.01", "--length", "0.02", "--angle", "3.0", "--K", "1.5"],
        ["drill-bound", "--length", "0.01", "--K", "-1.0"],
        ["drill-bound", "--length", "0.01", "--K", "1.5", "--L0", "1.2"],
    ],
)
def test_drill_bound_input_errors(capsys, argv):
    code, _, _ = run(capsys, argv)
    assert code == EXIT_INPUT_ERROR


def test_drill_bound_default_spec_file(capsys, data_dir, monkeypatch):
    monkeypatch.chdir(data_dir.parent)
    code, out, _ = run(capsys, ["drill-bound", "--K", "2.0"])
    report = json.loads(out)
    assert code == EXIT_OK
    assert report["total_length"] == pytest.approx(0.014)
    assert report["banner"] is None


def test_bending_norm(capsys, data_dir):
    path = str(data_dir / "laminations" / "fence_three.txt")
    code, out, _ = run(capsys, ["bending-norm", "--lamination", path])
    payload = json.loads(out)
    assert code == EXIT_OK
    assert payload["norm"] == pytest.approx(3.0)
    assert payload["lower_bound"] is True
    assert "directions" in payload["disclosure"]


def test_bending_norm_missing_file(capsys, tmp_path):
    code, _, _ = run(capsys, ["bending-norm", "--lamination", str(tmp_path / "absent.txt")])
    assert code == EXIT_INPUT_ERROR


def test_end_energy(capsys, data_dir):
    path = str(data_dir / "frames" / "fuchsian_linear.json")
    code, out, _ = run(capsys, ["end-energy", "--frame", path, "--t", "0.3"])
    payload = json.loads(out)
    assert code == EXIT_OK
    assert payload["lower_bound_holds"]
    assert payload["energy"] == pytest.approx(payload["lower_bound"], rel=1e-6)
    assert payload["first_principles_energy"] == pytest.approx(payload["energy"] / 4.0)


def test_output_file(capsys, tmp_path):
    target = tmp_path / "out" / "constants.json"
    code, out, err = run(capsys, ["--output", str(target), "constants"])
    assert code == EXIT_OK
    assert out == ""
    assert str(target) in err
    assert json.loads(target.read_text(encoding="utf-8"))["L0"] == 0.9


def test_subcommand_required():
    with pytest.raises(SystemExit):
        main([])


def test_quadrature_failure_has_its_own_exit_code(capsys, data_dir, monkeypatch):
    def diverging(*args, **kwargs):
        raise QuadratureError("end energy at t=0.1 did not converge")

    monkeypatch.setattr(drill, "end_energy", diverging)
    frame = str(data_dir / "frames" / "polynomial_shape.json")
    code, out, err = run(capsys, ["end-energy", "--frame", frame, "--t", "0.1"])
    assert code == EXIT_NUMERICAL_FAILURE
    assert code != EXIT_INPUT_ERROR
    assert out == ""
    assert "未收敛" in err
