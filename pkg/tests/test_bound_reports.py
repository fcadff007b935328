import json
import math

import numpy as np
import pytest
from pydantic import ValidationError

from config import SMOOTH_NEHARI_K
from reports.bound_reports import (
    REFERENCE_BANNER,
    ConeLocusSpec,
    assemble_report,
    c_drill,
    eta,
    hodge_energy_cap,
    hodge_energy_cap_at,
    interpolated_length,
    load_frame_file,
    load_spec,
    report_to_json,
)
from utils.errors import ConvexityError, DomainError


def make_spec(lengths, K=SMOOTH_NEHARI_K, **kwargs) -> ConeLocusSpec:
    return ConeLocusSpec(components=[{"length": L} for L in lengths], K=K, **kwargs)


def test_eta():
    assert eta() == pytest.approx(math.exp(-math.asinh(math.sqrt(2.0))), rel=1e-15)
    assert eta() == pytest.approx(0.31783724519578227, rel=1e-15)


def test_c_drill_reference_value():
    assert c_drill(1.5) == pytest.approx(0.581035, abs=1e-5)
    assert c_drill(2.0) > c_drill(1.5)
    with pytest.raises(DomainError):
        c_drill(0.0)


def test_final_bound_example():
    report = assemble_report(make_spec([0.01]))
    assert report.final_bound == pytest.approx(0.36507, abs=1e-4)
    assert report.tube_radii == pytest.approx([1.730713], abs=1e-6)
    assert report.hypotheses_hold


def test_pipeline_identity():
    for K in (0.5, 1.5, 4.0):
        report = assemble_report(make_spec([0.01, 0.03], K=K))
        chain = report.chain
        assert chain.per_angle_norm == pytest.approx(c_drill(K) * math.sqrt(0.04), rel=1e-12)
        assert chain.limit_bound_squared == pytest.approx(chain.energy_cap / (8.0 * eta() ** 2))
        assert chain.rescaled_squared == pytest.approx((1.0 + 2.0 * K) * chain.limit_bound_squared)


def test_integrated_bound_matches_closed_form():
    report = assemble_report(make_spec([0.01, 0.004]))
    assert report.chain.integrated_bound == pytest.approx(report.final_bound, rel=1e-10)


def test_bound_scales_with_root_total_length():
    small = assemble_report(make_spec([0.01])).final_bound
    large = assemble_report(make_spec([0.02, 0.02])).final_bound
    assert large == pytest.approx(2.0 * small)


def test_energy_cap_is_constant_in_angle():
    spec = make_spec([0.01, 0.004])
    angles = np.linspace(0.1, 2.0 * math.pi, 5)
    assert hodge_energy_cap_at(spec, angles) == pytest.approx(np.full(5, hodge_energy_cap(spec)))


def test_interpolated_length():
    assert interpolated_length(0.02, math.pi) == pytest.approx(0.02)
    with pytest.raises(DomainError):
        interpolated_length(0.02, 0.0)
    with pytest.raises(DomainError):
        interpolated_length(0.02, 7.0)


def test_long_axis_fails_hypotheses():
    report = assemble_report(make_spec([6.0]))
    assert not report.flags.length_threshold
    assert not report.flags.tube_radius
    assert not report.hypotheses_hold
    assert report.flags.tube_disjointness == "assumed"


def test_constant_discrepancy_flag():
    flags = assemble_report(make_spec([0.01])).flags
    assert not flags.printed_constant_is_conservative
    assert flags.constant_discrepancy["exact"] == pytest.approx(24.1755, abs=1e-3)


def test_reference_banner():
    assert assemble_report(make_spec([0.01], reference_K=True)).banner == REFERENCE_BANNER
    assert assemble_report(make_spec([0.01], K=2.0)).banner is None


@pytest.mark.parametrize(
    "payload",
    [
        {"components": [{"length": 0.01}], "K": 0.0},
        {"components": [{"length": -0.01}], "K": 1.5},
        {"components": [{"length": 0.01, "angle": 7.0}], "K": 1.5},
        {"components": [{"length": 0.01}], "K": 1.5, "L0": 1.0},
        {"components": [{"length": 0.01}], "K": 2.0, "reference_K": True},
        {"components": [{"length": 0.01}]},
    ],
)
def test_spec_validation(payload):
    with pytest.raises(ValidationError):
        ConeLocusSpec.model_validate(payload)


def test_report_json_is_deterministic():
    spec = make_spec([0.01, 0.004])
    first = report_to_json(assemble_report(spec))
    second = report_to_json(assemble_report(spec))
    assert first == second
    payload = json.loads(first)
    assert payload["provenance"]["inputs"]["K"] == SMOOTH_NEHARI_K
    assert "generated" not in first


def test_load_spec(data_dir):
    spec = load_spec(str(data_dir / "drill_spec.json"))
    assert spec.total_length == pytest.approx(0.014)
    assert spec.reference_K
    assert spec.components[1].angle == pytest.approx(math.pi)


def test_load_spec_missing(tmp_path):
    with pytest.raises(FileNotFoundError):
        load_spec(str(tmp_path / "absent.json"))


def test_load_frame_files(data_dir):
    quad_diff, frame = load_frame_file(str(data_dir / "frames" / "polynomial_shape.json"))
    assert quad_diff(0j) == pytest.approx(1.0)
    assert frame.shape_matrix(0j) == pytest.approx(np.array([[0.3, 0.1], [0.1, 0.5]]))

    quad_diff, frame = load_frame_file(str(data_dir / "frames" / "fuchsian_linear.json"))
    assert quad_diff(1.0) == pytest.approx(1.5 - 0.25j)
    assert frame.shape_matrix(0.2j) == pytest.approx(np.zeros((2, 2)))


def test_frame_file_validation(tmp_path):
    bad_pair = tmp_path / "bad_pair.json"
    bad_pair.write_text(json.dumps({"phi": [[1.0]]}), encoding="utf-8")
    with pytest.raises(ValidationError):
        load_frame_file(str(bad_pair))

    concave = tmp_path / "concave.json"
    concave.write_text(json.dumps({"phi": [[1.0, 0.0]], "shape": {"xx": [[-3.0]]}}), encoding="utf-8")
    with pytest.raises(ConvexityError):
        load_frame_file(str(concave))

    with pytest.raises(FileNotFoundError):
        load_frame_file(str(tmp_path / "absent.json"))
