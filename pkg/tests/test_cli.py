import json

from zonotopal.cli import main

PLANE_AXES_DOC = {
    "n": 2,
    "X": [[1, 0], [0, 1]],
    "assignment": [
        {"subset": [], "value": 1},
        {"subset": [0], "value": 1},
        {"subset": [1], "value": 1},
        {"subset": [0, 1], "value": 2},
    ],
    "seed": 0,
}

WIDE_GAP_DOC = {
    "n": 2,
    "X": [[1, 0], [0, 1]],
    "assignment": [
        {"subset": [], "value": 0},
        {"subset": [0], "value": 1},
        {"subset": [1], "value": 1},
        {"subset": [0, 1], "value": 4},
    ],
    "seed": 0,
}


def write_doc(tmp_path, doc, name="problem.json"):
    path = tmp_path / name
    path.write_text(json.dumps(doc))
    return str(path)


def run(capsys, *argv):
    code = main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


def test_certify_plane_axes(tmp_path, capsys):
    path = write_doc(tmp_path, PLANE_AXES_DOC)
    code, out, err = run(capsys, "certify", path)
    assert code == 0, err
    report = json.loads(out)
    assert report["matroid"]["external_count_formula"] == 8
    assert report["dspace"]["dim"] == 8
    assert report["dspace"]["coherence"]["status"] == "pass"
    assert report["duality"]["status"] == "pass"
    assert report["lagrange"]["status"] == "pass"
    assert report["split_tree"]["leaf_count"] == 8
    assert all(c["status"] != "fail" for c in report["certificates"])
    assert "timings" not in report


def test_reports_are_byte_identical(tmp_path, capsys):
    path = write_doc(tmp_path, PLANE_AXES_DOC)
    _, first, _ = run(capsys, "certify", path)
    _, second, _ = run(capsys, "certify", path)
    assert first == second


def test_seed_override_changes_configuration(tmp_path, capsys):
    path = write_doc(tmp_path, PLANE_AXES_DOC)
    code, out, _ = run(capsys, "certify", path, "--seed", "9")
    assert code == 0
    report = json.loads(out)
    base = json.loads(run(capsys, "certify", path)[1])
    assert report["configuration"] != base["configuration"]
    assert report["dspace"]["dim"] == 8  # certificates hold for any valid seed


def test_validate_fragment(tmp_path, capsys):
    path = write_doc(tmp_path, PLANE_AXES_DOC)
    code, out, _ = run(capsys, "validate", path)
    assert code == 0
    report = json.loads(out)
    assert report["validation"]["assignment"]["solid"]
    assert report["validation"]["assignment"]["incremental"]
    assert report["validation"]["required_y_size"] == 3
    assert "matroid" not in report


def test_enumerate_fragment(tmp_path, capsys):
    path = write_doc(tmp_path, PLANE_AXES_DOC)
    code, out, _ = run(capsys, "enumerate", path)
    assert code == 0
    report = json.loads(out)
    groups = {tuple(g["independent"]): g for g in report["matroid"]["extension_groups"]}
    assert groups[()]["extensions"] == [[2, 3], [2, 4], [3, 4]]
    assert groups[(0,)]["prefix_length"] == 2
    assert "pspace" not in report and "dspace" not in report


def test_pspace_fragment(tmp_path, capsys):
    path = write_doc(tmp_path, PLANE_AXES_DOC)
    code, out, _ = run(capsys, "pspace", path)
    assert code == 0
    report = json.loads(out)
    assert report["pspace"]["dim"] == 8
    assert report["pspace"]["hilbert_direct"] == report["pspace"]["hilbert_formula"]
    assert len(report["pspace"]["homogeneous_basis"]) == 8
    assert len(report["pspace"]["inhomogeneous_basis"]) == 8
    assert len(report["pspace"]["lagrange_basis"]) == 8


def test_dspace_fragment(tmp_path, capsys):
    path = write_doc(tmp_path, PLANE_AXES_DOC)
    code, out, _ = run(capsys, "dspace", path)
    assert code == 0
    report = json.loads(out)
    assert len(report["dspace"]["vertices"]) == 8
    assert report["dspace"]["annihilation"] == "pass"
    assert report["dspace"]["generator_count"] >= 2


def test_wide_gap_reports_no_duality(tmp_path, capsys):
    path = write_doc(tmp_path, WIDE_GAP_DOC)
    code, out, _ = run(capsys, "certify", path)
    assert code == 0
    report = json.loads(out)
    assert not report["validation"]["assignment"]["incremental"]
    assert report["pspace"]["dim"] == 15
    assert report["matroid"]["external_count_formula"] == 6
    assert report["pspace"]["hilbert_formula"] is None
    assert report["duality"]["status"] == "not-applicable"
    assert "dimension mismatch" in report["duality"]["reason"]
    assert report["dspace"]["coherence"]["status"] == "pass"


def test_parse_error_bad_json(tmp_path, capsys):
    path = tmp_path / "bad.json"
    path.write_text("{not json")
    code, _, err = run(capsys, "certify", str(path))
    assert code == 2
    assert "parse error" in err


def test_parse_error_float_entry(tmp_path, capsys):
    doc = dict(PLANE_AXES_DOC, X=[[1.5, 0], [0, 1]])
    path = write_doc(tmp_path, doc)
    code, _, err = run(capsys, "certify", path)
    assert code == 2
    assert "X[0][0]" in err


def test_parse_error_unknown_field(tmp_path, capsys):
    doc = dict(PLANE_AXES_DOC, extra=1)
    path = write_doc(tmp_path, doc)
    code, _, err = run(capsys, "certify", path)
    assert code == 2


def test_parse_error_missing_file(capsys):
    code, _, err = run(capsys, "certify", "/nonexistent/problem.json")
    assert code == 2


def test_validation_error_missing_flat(tmp_path, capsys):
    doc = dict(PLANE_AXES_DOC)
    doc["assignment"] = doc["assignment"][:-1]
    path = write_doc(tmp_path, doc)
    code, _, err = run(capsys, "certify", path)
    assert code == 3
    assert "missing flat" in err


def test_validation_error_bad_y(tmp_path, capsys):
    doc = dict(PLANE_AXES_DOC, Y=[[1, 0], [1, 1], [1, 2]])
    path = write_doc(tmp_path, doc)
    code, _, err = run(capsys, "certify", path)
    assert code == 3
    assert "general position" in err


def test_lambda_requires_y(tmp_path, capsys):
    doc = dict(PLANE_AXES_DOC)
    doc["lambda"] = [0, 0]
    path = write_doc(tmp_path, doc)
    code, _, err = run(capsys, "certify", path)
    assert code == 2
    assert "explicit Y" in err


def test_explicit_y_and_offsets_roundtrip(tmp_path, capsys):
    doc = {
        "n": 1,
        "X": [[1]],
        "assignment": [{"subset": [], "value": 0}, {"subset": [0], "value": 0}],
        "Y": [[1]],
        "lambda": [0, 1],
    }
    path = write_doc(tmp_path, doc)
    code, out, err = run(capsys, "certify", path)
    assert code == 0, err
    report = json.loads(out)
    assert report["configuration"]["y_generated"] is False
    assert report["configuration"]["offsets_generated"] is False
    assert report["matroid"]["external_count_formula"] == 2
    assert report["dspace"]["dim"] == 2


def test_custom_order_roundtrip(tmp_path, capsys):
    doc = {
        "n": 2,
        "X": [[1, 0], [0, 1], [0, 1]],
        "assignment": [
            {"subset": [], "value": 1},
            {"subset": [0], "value": 1},
            {"subset": [1], "value": 2},
            {"subset": [0, 1], "value": 2},
        ],
        "order": [1, 2, 0],
        "seed": 0,
    }
    path = write_doc(tmp_path, doc)
    code, out, _ = run(capsys, "certify", path)
    assert code == 0
    report = json.loads(out)
    assert report["problem"]["x_order"] == [1, 2, 0]
    assert report["pspace"]["dim"] == 13


def test_text_format_and_report_file(tmp_path, capsys):
    path = write_doc(tmp_path, PLANE_AXES_DOC)
    target = tmp_path / "report.txt"
    code, out, _ = run(
        capsys, "certify", path, "--format", "text", "--report", str(target)
    )
    assert code == 0
    assert out == ""
    text = target.read_text()
    assert "[certificates]" in text
    assert "external_count_formula: 8" in text


def test_timings_flag(tmp_path, capsys):
    path = write_doc(tmp_path, PLANE_AXES_DOC)
    code, out, _ = run(capsys, "certify", path, "--timings")
    assert code == 0
    assert "timings" in json.loads(out)


def test_stdin_input(tmp_path, capsys, monkeypatch):
    import io

    monkeypatch.setattr("sys.stdin", io.StringIO(json.dumps(PLANE_AXES_DOC)))
    code, out, _ = run(capsys, "enumerate", "-")
    assert code == 0
    assert json.loads(out)["matroid"]["external_count_enumerated"] == 8


def test_transversal_cap_flag(tmp_path, capsys):
    path = write_doc(tmp_path, PLANE_AXES_DOC)
    code, _, err = run(capsys, "dspace", path, "--transversal-cap", "1")
    assert code == 3
    assert "cap too small" in err


def test_degree_cap_flag_is_inert_when_generous(tmp_path, capsys):
    path = write_doc(tmp_path, PLANE_AXES_DOC)
    _, base, _ = run(capsys, "pspace", path)
    code, widened, _ = run(capsys, "pspace", path, "--degree-cap", "9")
    assert code == 0
    assert widened == base
