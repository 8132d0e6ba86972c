import csv
import io
import json

import jsonschema
import pytest

from faultq import cli


@pytest.fixture(scope="module")
def schema():
    return json.loads(cli.schema_path().read_text())


def run(argv):
    buf = io.StringIO()
    code = cli.main(argv, stream=buf)
    return code, buf.getvalue()


QUICK = ["--level", "2", "--iterations", "20", "--restarts", "2", "--seed", "3"]


def test_diagnose_writes_valid_outputs(tmp_path, schema):
    out, hist = tmp_path / "r.json", tmp_path / "h.csv"
    code, text = run(["diagnose", "--alarms", "test3", "--simplified", *QUICK,
                      "--output", str(out), "--histogram", str(hist)])
    assert code == 0 and "verdict" in text
    doc = json.loads(out.read_text())
    jsonschema.validate(doc, schema)
    assert doc["schema_version"] == cli.SCHEMA_VERSION
    assert doc["exact"]["optimal"] == ["0110"]
    rows = list(csv.DictReader(hist.open()))
    assert len(rows) == 16
    assert abs(sum(float(r["probability"]) for r in rows) - 1) <= 1e-9


def test_diagnose_is_bit_reproducible(tmp_path):
    files = []
    for i in range(2):
        out, hist = tmp_path / f"r{i}.json", tmp_path / f"h{i}.csv"
        run(["diagnose", "--alarms", "case1", *QUICK, "--output", str(out), "--histogram", str(hist)])
        files.append((out.read_bytes(), hist.read_bytes()))
    assert files[0] == files[1]


def test_exact_only(tmp_path, schema):
    out, hist = tmp_path / "r.json", tmp_path / "h.csv"
    code, _ = run(["diagnose", "--alarms", "case1", "--solver", "exact", "--output", str(out),
                   "--histogram", str(hist)])
    doc = json.loads(out.read_text())
    jsonschema.validate(doc, schema)
    assert code == 0 and "qaoa" not in doc and doc["model"]["num_qubits"] == 9
    rows = list(csv.DictReader(hist.open()))
    assert abs(sum(float(r["probability"]) for r in rows) - 1) <= 1e-9


def test_no_spec_width(tmp_path):
    out = tmp_path / "r.json"
    run(["diagnose", "--alarms", "case1", "--no-spec", "--solver", "exact", "--output", str(out)])
    assert json.loads(out.read_text())["model"]["num_qubits"] == 13


def test_no_outage_evidence(tmp_path, capsys):
    a = tmp_path / "a.json"
    a.write_text(json.dumps({"operated_relays": [], "tripped_breakers": []}))
    code, _ = run(["diagnose", "--alarms", str(a)])
    assert code == 2 and "no outage evidence" in capsys.readouterr().err


def test_width_cap_message(monkeypatch, capsys):
    monkeypatch.setenv("FAULTQ_MAX_QUBITS", "8")
    code, _ = run(["diagnose", "--alarms", "case1", "--solver", "exact"])
    assert code == 2 and "simplified" in capsys.readouterr().err


def test_bad_json(tmp_path, capsys):
    a = tmp_path / "a.json"
    a.write_text("{\n  \"operated_relays\": [,]\n}")
    assert run(["diagnose", "--alarms", str(a)])[0] == 2
    assert "line 2" in capsys.readouterr().err


def test_weights_flag(tmp_path):
    out = tmp_path / "r.json"
    run(["diagnose", "--alarms", "case1", "--solver", "exact", "--weights", "1,1,1,100", "--output", str(out)])
    assert json.loads(out.read_text())["model"]["weights"] == ["1", "1", "1", "100"]
    with pytest.raises(SystemExit):
        cli.main(["diagnose", "--alarms", "case1", "--weights", "1,2"])


def test_circuit_stats(schema):
    code, text = run(["circuit-stats", "--alarms", "test3", "--simplified", "--level", "10"])
    doc = json.loads(text)
    jsonschema.validate(doc, schema)
    assert code == 0 and doc["stats"]["qubits"] == 4
    assert doc["stats"]["gates"] - doc["stats"]["gates_without_h"] == 4
    _, text0 = run(["circuit-stats", "--alarms", "test3", "--simplified", "--level", "0"])
    assert json.loads(text0)["stats"]["depth"] == 1


def test_time_estimate(schema):
    code, text = run(["time-estimate", "--depth", "59"])
    doc = json.loads(text)
    jsonschema.validate(doc, schema)
    est = doc["estimate"]
    assert code == 0
    assert est["single_repetition_s"] == pytest.approx(1.59e-6, rel=1e-12)
    assert est["total_s"] == pytest.approx(1.59, rel=1e-12)
    _, t0 = run(["time-estimate", "--depth", "0"])
    assert json.loads(t0)["estimate"]["single_repetition_s"] == 1e-6
    _, t2 = run(["time-estimate", "--depth", "59", "--shots", "20000"])
    assert json.loads(t2)["estimate"]["total_s"] == 2 * est["total_s"]


def test_time_estimate_rejects_non_positive():
    assert run(["time-estimate", "--depth", "5", "--shots", "0"])[0] == 2
    assert run(["time-estimate", "--depth", "5", "--t-gate", "-1"])[0] == 2


def test_benchmark_rows(tmp_path):
    out = tmp_path / "b.csv"
    code, text = run(["benchmark", "--sizes", "2,4,5", "--level", "2", "--output", str(out)])
    rows = list(csv.DictReader(io.StringIO(text)))
    assert code == 0 and out.read_text() == text
    for solver in ("exact", "qaoa_estimate"):
        assert sum(r["solver"] == solver for r in rows) == 15
    est = {}
    for r in rows:
        if r["solver"] == "qaoa_estimate":
            est.setdefault(int(r["qubits"]), set()).add((int(r["depth"]), float(r["seconds"])))
    for pairs in est.values():
        for d, sec in pairs:
            assert sec == pytest.approx(100 * 10000 * (1e-6 + d * 1e-8), rel=1e-12)
