import json

import pytest

from giantscope.cli import main


def run(tmp_path, *args):
    return main(list(args) + ["--out", str(tmp_path)])


def read_csv(path):
    lines = path.read_text().splitlines()
    meta = [l for l in lines if l.startswith("#")]
    body = [l.split(",") for l in lines if not l.startswith("#")]
    return meta, body[0], body[1:]


def test_simulate_outputs_and_determinism(tmp_path):
    assert run(tmp_path, "simulate", "--n", "6", "--p", "0.5", "--reps", "500", "--seed", "3") == 0
    first = (tmp_path / "spectra.csv").read_bytes()
    meta, cols, rows = read_csv(tmp_path / "spectra.csv")
    assert cols == ["replication", "rank", "size", "excess"]
    assert any(m.startswith("# version:") for m in meta)
    doc = json.loads((tmp_path / "simulate.json").read_text())
    assert doc["tv_to_exact"] < 0.1
    assert run(tmp_path, "simulate", "--n", "6", "--p", "0.5", "--reps", "500", "--seed", "3") == 0
    assert (tmp_path / "spectra.csv").read_bytes() == first


def test_simulate_validation(tmp_path):
    assert run(tmp_path, "simulate", "--n", "6", "--p", "0.5") == 2  # no seed
    assert run(tmp_path, "simulate", "--n", "6", "--p", "0.5", "--seedless") == 2
    assert run(tmp_path, "simulate", "--n", "6", "--c", "1", "--p", "0.5", "--seed", "1") == 2
    assert run(tmp_path, "simulate", "--n", "0", "--c", "1", "--seed", "1") == 2
    assert run(tmp_path, "simulate", "--n", "6", "--c", "1", "--seed", "1", "--method", "dfs") == 2


def test_exact(tmp_path):
    assert run(tmp_path, "exact", "--n", "4", "--p", "0.2") == 0
    doc = json.loads((tmp_path / "exact_n4.json").read_text())
    assert doc["meta"]["command"] == "exact"
    assert run(tmp_path, "exact", "--n", "9", "--p", "0.2") == 2


def test_rates_grid_and_domain(tmp_path):
    assert run(tmp_path, "rates", "--fn", "i_beta", "--c", "3", "--grid", "0:1:0.25") == 0
    _, cols, rows = read_csv(tmp_path / "rates_i_beta.csv")
    assert cols == ["u", "value"] and len(rows) == 5
    assert run(tmp_path, "rates", "--fn", "i_beta", "--c", "3", "--grid", "0:2:0.5") == 2
    assert run(tmp_path, "rates", "--fn", "nope", "--c", "3", "--grid", "0:1:0.5") == 2
    assert run(tmp_path, "rates", "--fn", "i_beta", "--c", "3", "--grid", "1:0:0.5") == 2
    assert run(tmp_path, "rates", "--fn", "breve_i_beta", "--theta", "2", "--grid", "0:5:0.5") == 0
    assert run(tmp_path, "rates", "--fn", "i_UR", "--c", "2", "--u", "0.5,0.2", "--r", "0.1") == 0
    assert run(tmp_path, "rates", "--fn", "i_UR", "--c", "2", "--u", "0.2,0.5") == 2


def test_infinite_rates_are_written_as_inf(tmp_path):
    assert run(tmp_path, "rates", "--fn", "i_beta_gamma", "--c", "2", "--r", "0.1", "--grid", "0:0.5:0.5") == 0
    _, _, rows = read_csv(tmp_path / "rates_i_beta_gamma.csv")
    assert rows[0][1] == "inf"


def test_phase_and_svg(tmp_path):
    assert run(tmp_path, "phase", "--c", "1.5,3", "--svg") == 0
    doc = json.loads((tmp_path / "phase_c3.json").read_text())
    assert 0.5 < doc["a_hat"] < doc["a_star"]
    svg = (tmp_path / "count_rate.svg").read_text()
    assert svg.startswith("<svg") and "polyline" in svg and "command" in svg


def test_traj_report(tmp_path):
    assert run(tmp_path, "traj", "--c", "2", "--N", "2001") == 0
    rep = json.loads((tmp_path / "traj_report.json").read_text())["checks"]
    assert rep["excursion"]["gap"] < 1e-4
    assert run(tmp_path, "traj", "--c", "2", "--N", "2001", "--tol", "1e-15") == 1
    assert run(tmp_path, "traj", "--c", "2", "--w", "5") == 2


def test_beta_ldp(tmp_path):
    assert run(tmp_path, "beta-ldp", "--c", "3", "--grid", "0:1:0.01", "--svg") == 0
    _, cols, rows = read_csv(tmp_path / "beta_ldp.csv")
    assert cols == ["u", "i_beta", "block_form"] and len(rows) == 101
    assert (tmp_path / "beta_ldp.svg").exists()


def test_critical_small(tmp_path):
    assert run(tmp_path, "critical", "--theta", "1", "--reps", "20", "--seed", "1", "--dt", "0.01", "--svg") == 0
    doc = json.loads((tmp_path / "critical_summary.json").read_text())
    assert doc["rate_at_typical_size"] == 0.0
    assert run(tmp_path, "critical", "--theta", "1", "--reps", "20", "--seedless") == 2


def test_clt_check_small(tmp_path):
    assert run(tmp_path, "clt-check", "--n", "2000", "--reps", "50", "--seed", "2") == 0
    doc = json.loads((tmp_path / "clt_check.json").read_text())
    assert set(doc["statistics"]) == {"alpha", "beta", "gamma"}


def test_config_file_and_precedence(tmp_path):
    cfg = tmp_path / "run.cfg"
    cfg.write_text("# comment\nfn = i_beta\nc = 2\ngrid = 0:1:0.5\n")
    assert run(tmp_path, "rates", "--config", str(cfg), "--c", "3") == 0
    meta, _, _ = read_csv(tmp_path / "rates_i_beta.csv")
    assert "# c: [3.0]" in meta
    cfg.write_text("fn = i_beta\nbogus = 1\n")
    assert run(tmp_path, "rates", "--config", str(cfg)) == 2
    cfg.write_text("fn = i_beta\nreps = 5\n")  # not a key of this subcommand
    assert run(tmp_path, "rates", "--config", str(cfg)) == 2
    assert run(tmp_path, "rates", "--config", str(tmp_path / "missing.cfg")) == 2


def test_unknown_flag_and_no_command(tmp_path, capsys):
    assert main(["rates", "--reps", "3"]) == 2
    assert main([]) == 2
