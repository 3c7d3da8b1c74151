import json

import pytest

from dioexp.cli import main


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_exponent_sigma_phi(capsys):
    code, out, err = run(capsys, "exponent", "sigma", "--vector", "phi", "--Q", "100000", "--json")
    rep = json.loads(out)
    assert code == 0 and abs(rep["value"] - 1) <= 0.05
    assert "manifest_sha256" in rep and "tolerance_context" in rep
    assert err.startswith("[dioexp]")


def test_exponent_rational_flags_infinity(capsys):
    code, out, _ = run(capsys, "exponent", "sigma", "--vector", "1/3,2/7", "--Q", "100", "--json")
    assert code == 0 and json.loads(out)["infinite"] is True


def test_exponent_omega_matrix_floor(capsys):
    code, out, _ = run(capsys, "exponent", "omega", "--matrix", "sqrt:2,sqrt:3", "--Q", "200", "--json")
    assert code == 0 and json.loads(out)["value"] >= 2 - 0.3


def test_parse_error_exit_2(capsys):
    code, _, err = run(capsys, "exponent", "sigma", "--vector", "banana")
    assert code == 2 and "banana" in err


def test_budget_exit_3(capsys):
    code, _, err = run(capsys, "exponent", "omega", "--vector", "sqrt:2,sqrt:3,sqrt:5,sqrt:7", "--Q", "1000000")
    assert code == 3 and "budget" in err


def test_flow_zero_vector(capsys, tmp_path):
    code, _, _ = run(capsys, "flow", "--vector", "0", "--T", "20", "--step", "1", "--out", str(tmp_path))
    assert code == 0
    rows = (tmp_path / "trace.csv").read_text().splitlines()[1:]
    for row in rows:
        t, d = map(float, row.split(",")[:2])
        assert d == pytest.approx(t, abs=1e-9)
    assert (tmp_path / "trace.png").stat().st_size > 0


def test_flow_phi_bounded(capsys):
    code, out, _ = run(capsys, "flow", "--vector", "phi", "--T", "40", "--json")
    assert code == 0 and json.loads(out)["gamma_hat"] <= 0.1


def test_cusp_profile(capsys, tmp_path):
    code, out, _ = run(capsys, "flow", "--curve-dim", "2", "--T", "5", "--samples", "500",
                       "--eps", "1/2,1/4,1/8", "--json", "--out", str(tmp_path))
    rep = json.loads(out)
    assert code == 0 and len(rep["measure"]) == 3
    assert {"cusp.csv", "cusp.png", "report.json", "manifest.json"} <= {p.name for p in tmp_path.iterdir()}


def test_subspace_rational_line(capsys):
    code, out, _ = run(capsys, "subspace", "--line", "1/3,2/7", "--H", "50", "--json")
    rep = json.loads(out)
    assert code == 0 and rep["sigma_L"] == "inf"


def test_subspace_generic_matrix(capsys):
    code, out, _ = run(capsys, "subspace", "--matrix", "sqrt:2;sqrt:3", "--n", "2", "--s", "1",
                       "--H", "100", "--json")
    assert code == 0 and json.loads(out)["sigma_L"] == 0.5


def test_subspace_needs_spec(capsys):
    assert run(capsys, "subspace")[0] == 2


@pytest.mark.parametrize("kind,payload,value", [
    ("hyperplane", {"omega": "4", "n": 2}, "2/3"),
    ("sigma-L", {"sigmas": [0, "2/3"], "n": 2}, "2/3"),
    ("line", {"sigma": "1/2", "omega": "2"}, "1/3"),
    ("check-pair", {"omega": "4", "sigma": "2/3", "n": 2}, True),
    ("bounds", {"sigma": "inf", "n": 3, "s": 1}, False),
    ("abequi", {"a": "1/2", "b": "1", "v": "1"}, "1/4"),
    ("transference", {"omega": "10", "n": 2}, ["5/6", "9/2"]),
])
def test_formulas(capsys, kind, payload, value):
    code, out, _ = run(capsys, "formulas", kind, json.dumps(payload))
    assert code == 0 and json.loads(out)["value"] == value


def test_formulas_inconsistent_pair_fails(capsys):
    code, _, err = run(capsys, "formulas", "line", json.dumps({"sigma": "1/2", "omega": "10"}))
    assert code == 1 and "InconsistentPair" in err


def test_formulas_bad_json(capsys):
    assert run(capsys, "formulas", "hyperplane", "{nope")[0] == 2
    assert run(capsys, "formulas", "hyperplane", "{}")[0] == 2


def test_verify_single_criterion(capsys):
    code, out, _ = run(capsys, "verify", "--only", "1,11")
    assert code == 0 and out.count("[PASS]") == 2


def test_verify_fault_injection(capsys):
    code, out, _ = run(capsys, "verify", "--only", "1", "--inject-fault", "contraction_sign", "--json")
    rep = json.loads(out)
    assert code == 1 and rep["passed"] == 0


def test_verify_reduced_scale_does_not_crash(capsys):
    code, out, _ = run(capsys, "verify", "--only", "3,4,5", "--scale", "0.01", "--json")
    rep = json.loads(out)
    assert code in (0, 1) and rep["total"] == 3


def test_outputs_are_deterministic(capsys, tmp_path):
    a, b = tmp_path / "a", tmp_path / "b"
    for d in (a, b):
        assert run(capsys, "exponent", "sigma", "--vector", "liouville:10:3", "--Q", "10000", "--out", str(d))[0] == 0
    names = sorted(p.name for p in a.iterdir())
    assert names == ["manifest.json", "report.json", "witnesses.csv", "witnesses.png"]
    for name in names:
        assert (a / name).read_bytes() == (b / name).read_bytes()
    rep = json.loads((a / "report.json").read_text())
    man = json.loads((a / "manifest.json").read_text())
    assert rep["manifest_sha256"] == man["sha256"]
