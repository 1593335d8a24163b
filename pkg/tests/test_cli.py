import csv
import io
import json
import math

import pytest

from intcheb.cli import main


def run(argv, tmp_path, name="out.json"):
    out = tmp_path / name
    code = main(argv + ["--output", str(out)])
    return code, (out.read_text() if out.exists() else None)


def test_equilibrium(tmp_path):
    code, text = run(["equilibrium", "--alpha1", "0.25", "--alpha2", "0"], tmp_path)
    res = json.loads(text)["result"]
    assert code == 0
    assert res["a"] == pytest.approx(0.0625) and res["b"] == 0.25
    assert res["F_w"] == pytest.approx(math.log(4096 / 27), rel=1e-8)


def test_summary_on_stdout(tmp_path, capsys):
    run(["lemniscate", "--poly", "0,1", "--r", "0.5"], tmp_path)
    assert capsys.readouterr().out.strip() == "lemniscate: value = 0.5"


def test_lemniscate_exact(tmp_path):
    _, text = run(["lemniscate", "--poly", "0,1", "--r", "0.5"], tmp_path)
    res = json.loads(text)["result"]
    assert res["kind"] == "exact" and res["value"] == 0.5


def test_region_csv_box(tmp_path):
    code, text = run(["region", "--factors", "z:*,4z-1:*", "--m", "0.179335", "--step", "0.0005"], tmp_path, "r.csv")
    assert code == 0
    rows = list(csv.DictReader(io.StringIO(text)))
    feas = [r for r in rows if r["feasible"] == "1"]
    a1 = [float(r["alpha1"]) for r in feas]
    a2 = [float(r["alpha2"]) for r in feas]
    for got, want in ((min(a1), 0.2961), (max(a1), 0.3634), (min(a2), 0.0952), (max(a2), 0.1767)):
        assert abs(got - want) <= 0.0005 + 1e-9


def test_sweep_lower(tmp_path):
    code, text = run(["sweep", "--factors", "z:*,4z-1:*", "--step", "0.002"], tmp_path)
    res = json.loads(text)["result"]
    assert code == 0 and res["mode"] == "closedForm"
    assert res["value"] == pytest.approx(0.176056, abs=5e-4)


def test_exact(tmp_path):
    _, text = run(["exact", "--degree", "2"], tmp_path)
    res = json.loads(text)["result"]
    assert res["norm"] == 0.25 and res["symmetry"]["parity"] == "even"


def test_bound_upper_closed_form(tmp_path):
    _, text = run(["bound", "upper", "--weight", "z:0.580894,4z-1:0.09", "--mode", "closedForm"], tmp_path)
    assert json.loads(text)["result"]["value"] == pytest.approx(0.18043338, abs=1e-7)


def test_construct(tmp_path):
    code, text = run(["construct", "--degree", "4"], tmp_path)
    res = json.loads(text)["result"]
    assert code == 0 and res["certified_bound"] >= 0.0625


def test_bad_poly_prints_grammar(tmp_path, capsys):
    code, _ = run(["lemniscate", "--poly", "1,x", "--r", "0.5"], tmp_path)
    err = capsys.readouterr().err
    assert code == 2 and "--poly" in err and "ascending integer coefficients" in err


def test_validation_exit_code(tmp_path):
    code, text = run(["lemniscate", "--poly", "0,1", "--r", "1.5"], tmp_path)
    assert code == 2 and text is None


def test_outside_triangle(tmp_path):
    assert run(["equilibrium", "--alpha1", "0.4", "--alpha2", "0.3"], tmp_path)[0] == 2


def test_numerical_failure_exit_code(tmp_path, capsys):
    # 0.15 lies inside the Leja cluster hull of this weight
    argv = ["leja", "--weight", "z:0.6,4z-1:0.1", "--n", "200", "--grid-density", "20000", "--zetas", "3/20"]
    code, _ = run(argv, tmp_path)
    assert code == 3 and "PointInSupport" in capsys.readouterr().err


def test_config_roundtrip(tmp_path):
    cfg = tmp_path / "cfg.json"
    cfg.write_text(json.dumps({"command": "equilibrium", "alpha1": 0.3, "alpha2": 0.12}))
    _, first = run(["--config", str(cfg)], tmp_path, "a.json")
    embedded = json.loads(first)["config"]
    assert embedded["alpha1"] == 0.3 and embedded["command"] == "equilibrium"
    cfg.write_text(json.dumps(embedded))
    _, second = run(["--config", str(cfg)], tmp_path, "b.json")
    assert first == second


def test_flags_override_config(tmp_path):
    cfg = tmp_path / "cfg.json"
    cfg.write_text(json.dumps({"alpha1": 0.3, "alpha2": 0.12}))
    _, text = run(["equilibrium", "--config", str(cfg), "--alpha2", "0.1"], tmp_path)
    assert json.loads(text)["config"]["alpha2"] == 0.1


def test_unknown_config_key(tmp_path):
    cfg = tmp_path / "cfg.json"
    cfg.write_text(json.dumps({"command": "equilibrium", "alpha3": 1}))
    assert main(["--config", str(cfg)]) == 2


def test_deterministic_output(tmp_path):
    argv = ["leja", "--weight", "z:0.6,4z-1:0.1", "--n", "100", "--grid-density", "20000"]
    _, a = run(argv, tmp_path, "a.json")
    _, b = run(argv, tmp_path, "b.json")
    assert a == b


def test_nine_significant_digits(tmp_path):
    _, text = run(["equilibrium", "--alpha1", "0.3", "--alpha2", "0.12"], tmp_path)
    F = json.loads(text)["result"]["F_w"]
    assert len(repr(F).replace(".", "").lstrip("0")) <= 9
