import json

import pytest

from latgate.cli import main


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def run_json(capsys, *argv):
    code, out, err = run(capsys, *argv)
    assert code == 0, err
    return json.loads(out)


def test_info_e8_root(capsys):
    payload = run_json(capsys, "info", "--lattice", "e8-root")
    assert payload["even"] is True
    assert payload["unimodular"] is True
    assert payload["min"] == "2"
    assert payload["kissing"] == 240
    assert payload["dimension"] == 8


def test_info_d12plus(capsys):
    payload = run_json(capsys, "info", "--lattice", "d12plus")
    assert payload["unimodular"] is True
    assert payload["even"] is False


def test_enum_z2(capsys):
    payload = run_json(capsys, "enum", "--lattice", "zn", "--n", "2", "--bound", "2")
    assert payload == {"bound": "2", "count": 8, "by_norm": {"1": 4, "2": 4}}


def test_aut_zn4(capsys):
    payload = run_json(capsys, "aut", "--lattice", "zn", "--n", "4")
    assert payload["order"] == "384"


def test_aut_d4_with_emit_and_verify_roundtrip(capsys, tmp_path):
    emit = tmp_path / "d4-gens.json"
    payload = run_json(capsys, "aut", "--lattice", "d4", "--emit", str(emit))
    assert payload["order"] == "1152"
    code, out, _ = run(capsys, "verify", "--lattice", "d4", "--gates-file", str(emit),
                       "--claimed-order", "1152")
    assert code == 0
    report = json.loads(out)
    assert report["order_check"] is True
    assert all(item["automorphism"] for item in report["generators"])


def test_aut_budget_exceeded_exit_code(capsys):
    code, out, _ = run(capsys, "aut", "--lattice", "e8-root", "--budget-nodes", "2")
    assert code == 4
    assert json.loads(out)["order_unverified"] is True


def test_analyze_eq6(capsys):
    payload = run_json(capsys, "analyze", "--fixture", "eq6", "--shape", "2,2,2")
    row = payload["rows"][0]
    assert abs(row["tau3"] - 0.25) < 1e-9
    assert abs(row["tau_ab"] - 0.25) < 1e-9
    assert abs(row["tau_ac"] - 0.25) < 1e-9
    assert abs(row["tau_bc"]) < 1e-9


def test_analyze_eq14_measures(capsys):
    payload = run_json(capsys, "analyze", "--fixture", "eq14", "--shape", "3,2,2",
                       "--measures", "schmidt,tangle2,ppt")
    row = payload["rows"][0]
    assert row["schmidt"] == {"a|bc": 3, "b|ac": 2, "c|ab": 2}
    assert abs(row["tau_bc"] - 4 / 9) < 1e-9
    assert row["tau3"] is None  # not requested
    assert row["ppt"]["ab"]["entangled"] is True
    assert any(ev < 0 for ev in row["ppt"]["ab"]["eigenvalues"])


def test_analyze_eq15(capsys):
    payload = run_json(capsys, "analyze", "--fixture", "eq15", "--shape", "6,2,2")
    row = payload["rows"][0]
    assert abs(row["tau_bc"] - 0.00536) < 1e-4


def test_analyze_eq14_footnote_reading(capsys):
    payload = run_json(capsys, "analyze", "--fixture", "eq14", "--shape", "2,2,3")
    row = payload["rows"][0]
    assert abs(row["tau_ab"] - 4 / 81) < 1e-9


def test_analyze_gate_fixture_rows(capsys):
    payload = run_json(capsys, "analyze", "--fixture", "e8a", "--shape", "2,2,2",
                       "--gate-index", "1")
    assert len(payload["rows"]) == 8
    for row in payload["rows"]:
        assert abs(row["tau3"] - 0.25) < 1e-9


def test_verify_fixture_eq3(capsys):
    code, out, _ = run(capsys, "verify", "--fixture", "eq3", "--claimed-order", "384")
    assert code == 0
    report = json.loads(out)
    assert report["order_check"] is True


def test_verify_corrupted_generator(capsys, tmp_path):
    # flip one sign in an otherwise valid integral generator
    from latgate import catalog, automorphism_group

    lat = catalog("d4")
    obj = automorphism_group(lat).to_json(lat)
    obj["generators_natural"] = None
    gen = obj["generators_integral"][0]
    gen["num"][0][0] += 1
    path = tmp_path / "bad.json"
    path.write_text(json.dumps(obj))
    code, out, _ = run(capsys, "verify", "--lattice", "d4", "--gates-file", str(path),
                       "--claimed-order", "1152")
    assert code == 3
    report = json.loads(out)
    assert report["generators"][0]["automorphism"] is False
    assert report["generators"][0]["detail"] == "Gram not preserved"


def test_verify_order_mismatch_exit_code(capsys, tmp_path):
    from latgate import catalog, automorphism_group

    lat = catalog("d4")
    obj = automorphism_group(lat).to_json(lat)
    path = tmp_path / "gens.json"
    path.write_text(json.dumps(obj))
    code, out, _ = run(capsys, "verify", "--lattice", "d4", "--gates-file", str(path),
                       "--claimed-order", "1153")
    assert code == 3
    assert json.loads(out)["order_check"] is False


def test_byte_identical_output(capsys):
    _, out1, _ = run(capsys, "analyze", "--fixture", "eq14", "--shape", "3,2,2")
    _, out2, _ = run(capsys, "analyze", "--fixture", "eq14", "--shape", "3,2,2")
    assert out1 == out2


def test_threads_flag_identical_output(capsys):
    _, out1, _ = run(capsys, "enum", "--lattice", "d12plus", "--bound", "3", "--threads", "1")
    _, out2, _ = run(capsys, "enum", "--lattice", "d12plus", "--bound", "3", "--threads", "2")
    assert out1 == out2


def test_csv_projection(capsys):
    code, out, _ = run(capsys, "analyze", "--fixture", "eq6", "--shape", "2,2,2",
                       "--format", "csv")
    assert code == 0
    lines = out.strip().splitlines()
    assert lines[0].startswith("row,tau3,tau_ab")
    assert len(lines) == 2


def test_unknown_lattice_is_invariant_violation(capsys):
    code, _, err = run(capsys, "info", "--lattice", "zn")  # missing --n
    assert code == 3


def test_parse_error_exit_code(capsys):
    code, _, err = run(capsys, "enum", "--lattice", "zn", "--n", "2", "--bound", "xyz")
    assert code == 2


def test_bad_flag_usage_error():
    with pytest.raises(SystemExit) as info:
        main(["info", "--no-such-flag"])
    assert info.value.code == 2


def test_basis_file_input(capsys, tmp_path):
    from latgate import catalog

    path = tmp_path / "lat.json"
    path.write_text(json.dumps(catalog("d4").to_json()))
    payload = run_json(capsys, "info", "--basis-file", str(path))
    assert payload["kissing"] == 24


def test_code_file_input(capsys, tmp_path):
    from latgate.lattices import extended_hamming_code

    path = tmp_path / "code.json"
    path.write_text(json.dumps(extended_hamming_code().to_json()))
    payload = run_json(capsys, "info", "--code-file", str(path), "--construction", "a")
    assert payload["even"] is True and payload["unimodular"] is True
    payload_b = run_json(capsys, "enum", "--code-file", str(path), "--construction", "b",
                         "--bound", "2")
    assert payload_b["count"] > 0


def test_out_file(capsys, tmp_path):
    target = tmp_path / "report.json"
    code, out, _ = run(capsys, "info", "--lattice", "d4", "--out", str(target))
    assert code == 0 and out == ""
    assert json.loads(target.read_text())["kissing"] == 24


def test_text_format(capsys):
    code, out, _ = run(capsys, "info", "--lattice", "d4", "--format", "text")
    assert code == 0
    assert "kissing: 24" in out
