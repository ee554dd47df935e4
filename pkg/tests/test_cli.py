"""CLI surface: exit codes, JSON shapes, experiment CSV, reproducibility."""

import json
import os

import pytest

from lowrankdisc import fixtures, random_dense
from lowrankdisc.cli import main
from lowrankdisc.experiment import CSV_HEADER, ExperimentConfig, render_csv, run_experiment


def write_matrix(tmp_path, M, name="m.txt"):
    path = tmp_path / name
    path.write_text(M.to_text())
    return str(path)


def run_cli(args, capsys):
    code = main(args)
    captured = capsys.readouterr()
    return code, captured.out, captured.err


# -- disc ---------------------------------------------------------------------

def test_disc_identity4(tmp_path, capsys):
    path = write_matrix(tmp_path, fixtures("identity(4)"))
    code, out, _ = run_cli(["disc", path], capsys)
    assert code == 0
    obj = json.loads(out)
    assert obj["disc_plus"] == "1/1"
    assert obj["disc_minus"] == "1/1"
    assert obj["plus"]["value_num"] == 1 and obj["plus"]["value_den"] == 1
    assert not obj["heuristic"]


def test_disc_all_zeros(tmp_path, capsys):
    path = write_matrix(tmp_path, fixtures("all_zeros(3,3)"))
    code, out, _ = run_cli(["disc", path], capsys)
    assert code == 0
    obj = json.loads(out)
    assert obj["disc_plus"] == "0/1" and obj["disc_minus"] == "0/1"


def test_disc_capacity_exit_3(tmp_path, capsys):
    path = write_matrix(tmp_path, random_dense(30, 30, "1/2", seed=1))
    code, _, err = run_cli(["disc", path], capsys)
    assert code == 3
    assert "26" in err  # names the oracle limit


def test_disc_heuristic_above_limit(tmp_path, capsys):
    path = write_matrix(tmp_path, random_dense(30, 30, "1/2", seed=1))
    code, out, _ = run_cli(["disc", path, "--heuristic"], capsys)
    assert code == 0
    obj = json.loads(out)
    assert obj["heuristic"] is True


def test_disc_parse_error_exit_2(tmp_path, capsys):
    path = tmp_path / "bad.txt"
    path.write_text("2 3\n101\n10\n")
    code, _, err = run_cli(["disc", str(path)], capsys)
    assert code == 2


def test_disc_from_genspec_flags(capsys):
    code, out, _ = run_cli(["disc", "--gen-kind", "identity", "--gen-n", "4"],
                           capsys)
    assert code == 0
    assert json.loads(out)["disc_plus"] == "1/1"


# -- bound ---------------------------------------------------------------------

def test_bound_identity8(tmp_path, capsys):
    path = write_matrix(tmp_path, fixtures("identity(8)"))
    code, out, _ = run_cli(["bound", path], capsys)
    assert code == 0
    obj = json.loads(out)
    assert obj["bound"] >= 7 * (1 - 1e-6)
    assert set(obj) == {"bound", "disc_value", "diag_max", "lambda_head",
                        "residual", "matrix_hash"}


def test_bound_all_ones_regime_exit_4(tmp_path, capsys):
    path = write_matrix(tmp_path, fixtures("all_ones(6,6)"))
    code, _, err = run_cli(["bound", path], capsys)
    assert code == 4


def test_bound_tightness_formula(tmp_path, capsys):
    import math
    from lowrankdisc import rank, tightness_matrix

    # seed 380 is the first whose (complemented) blow-up is degree-regular
    # enough for the closed-form bound; other seeds would be skipped
    M = tightness_matrix(4, "1/2", 32, 32, seed=380)
    if M.density() > 0.5:
        from lowrankdisc import complement
        M = complement(M)
    d = float(M.avg_degree())
    if M.max_degree() > 1.1 * d:
        pytest.skip("seed violates the max-degree condition")
    path = write_matrix(tmp_path, M)
    code, out, _ = run_cli(["bound", path], capsys)
    assert code == 0
    bound = json.loads(out)["disc_value"]
    assert bound >= math.sqrt(d) * 32 ** 1.5 / (7 * math.sqrt(rank(M))) - 1e-6


def test_bound_rectangular_autosquares(tmp_path, capsys):
    path = write_matrix(tmp_path, fixtures("identity(4)").transpose())
    # 4x4 already square; use a genuinely rectangular low-rank matrix
    from lowrankdisc import blow_up, fixtures as fx
    path = write_matrix(tmp_path, blow_up(fx("identity(2)"), 2, 4), "r.txt")
    code, out, _ = run_cli(["bound", path], capsys)
    assert code == 0
    assert json.loads(out)["disc_value"] > 0


# -- mono ---------------------------------------------------------------------

def test_mono_all_zeros(tmp_path, capsys):
    path = write_matrix(tmp_path, fixtures("all_zeros(8,8)"))
    code, out, _ = run_cli(["mono", path], capsys)
    assert code == 0
    last = json.loads(out.strip().split("\n")[-1])
    assert last["color"] == 0 and last["dims"] == [8, 8]


def test_mono_identity16_dims(tmp_path, capsys):
    path = write_matrix(tmp_path, fixtures("identity(16)"))
    code, out, _ = run_cli(["mono", path, "--seed", "0"], capsys)
    assert code == 0
    last = json.loads(out.strip().split("\n")[-1])
    assert min(last["dims"]) >= 4


def test_mono_trace_lines_are_json(tmp_path, capsys):
    from lowrankdisc import blow_up, random_binary
    M = blow_up(random_binary(4, "1/2", 3), 16, 16)
    path = write_matrix(tmp_path, M)
    code, out, _ = run_cli(["mono", path, "--seed", "1"], capsys)
    assert code == 0
    lines = out.strip().split("\n")
    for line in lines[:-1]:
        obj = json.loads(line)
        assert obj["n_i"] >= 2
        assert obj["p_den"] > 0


# -- experiment ------------------------------------------------------------------

def exp_config(tmp_path, timing=False, seeds=(1,), ops=("disc_exact",)):
    cfg = {
        "gens": [{"kind": "identity", "n": 8},
                 {"kind": "blowup_random", "r": 2, "p": "1/2",
                  "m": 16, "n": 16}],
        "ops": list(ops),
        "seeds": list(seeds),
        "timing": timing,
    }
    path = tmp_path / "config.json"
    path.write_text(json.dumps(cfg))
    return str(path)


def test_experiment_single_row_csv(tmp_path, capsys):
    cfg = {
        "gens": [{"kind": "identity", "n": 4}],
        "ops": ["disc_exact"],
        "seeds": [1],
        "timing": False,
    }
    path = tmp_path / "c.json"
    path.write_text(json.dumps(cfg))
    code, out, _ = run_cli(["experiment", str(path)], capsys)
    assert code == 0
    lines = out.strip().split("\n")
    assert lines[0] == CSV_HEADER
    assert len(lines) == 2
    assert lines[1].endswith(",ok")


def test_experiment_all_ops(tmp_path, capsys):
    path = exp_config(tmp_path, ops=("disc_exact", "disc0", "bound", "mono"))
    out_file = tmp_path / "report.csv"
    code, _, _ = run_cli(["experiment", path, "--out", str(out_file)], capsys)
    assert code == 0
    lines = out_file.read_text().strip().split("\n")
    assert lines[0] == CSV_HEADER
    assert len(lines) == 1 + 2 * 1 * 4  # gens x seeds x ops


def test_experiment_rows_in_config_order(tmp_path):
    config = ExperimentConfig.from_file(exp_config(tmp_path, seeds=(1, 2)))
    rows = run_experiment(config, threads=1)
    ids = [r.matrix_id for r in rows]
    assert ids == sorted(ids, key=lambda s: ids.index(s))  # stable
    assert ids[0].startswith("identity(n=8)|seed=1")
    assert ids[1].startswith("identity(n=8)|seed=2")
    assert ids[2].startswith("blowup_random")


def test_experiment_byte_identical_across_threads(tmp_path):
    config = ExperimentConfig.from_file(
        exp_config(tmp_path, ops=("disc_exact", "bound", "mono"), seeds=(1, 2)))
    a = render_csv(run_experiment(config, threads=1))
    b = render_csv(run_experiment(config, threads=8))
    assert a == b


def test_experiment_invalid_config(tmp_path, capsys):
    path = tmp_path / "c.json"
    path.write_text(json.dumps({"gens": [], "ops": ["disc_exact"], "seeds": [1]}))
    code, _, err = run_cli(["experiment", str(path)], capsys)
    assert code == 1


def test_experiment_capacity_rows_marked(tmp_path, capsys):
    cfg = {
        "gens": [{"kind": "random_dense", "m": 30, "n": 30, "p": "1/2"}],
        "ops": ["disc_exact"],
        "seeds": [1],
        "timing": False,
    }
    path = tmp_path / "c.json"
    path.write_text(json.dumps(cfg))
    code, out, _ = run_cli(["experiment", str(path)], capsys)
    # all rows failed -> exit 1, but the row itself records the error
    assert code == 1
    assert "error:CapacityError" in out


# -- golden bytes ------------------------------------------------------------------

GOLDEN_DIR = os.path.join(os.path.dirname(__file__), "data")


def test_mono_trace_golden_bytes():
    from lowrankdisc import blow_up, find_mono, random_binary
    M = blow_up(random_binary(4, "1/2", 3), 16, 16)
    _, trace = find_mono(M, seed=1)
    got = trace.to_json_lines()
    with open(os.path.join(GOLDEN_DIR, "mono_trace_seed1.jsonl")) as fh:
        assert got == fh.read()


def test_mono_trace_golden_bytes_n256():
    import math
    from lowrankdisc import blow_up, find_mono, random_binary, rank
    M = blow_up(random_binary(4, "1/2", 3), 64, 64)
    res, trace = find_mono(M, seed=1)
    assert min(res.dims) >= 16
    assert trace.iterations <= 40
    with open(os.path.join(GOLDEN_DIR, "mono_trace_n256_seed1.jsonl")) as fh:
        assert trace.to_json_lines() == fh.read()


def test_experiment_csv_golden_bytes(tmp_path):
    path = exp_config(tmp_path, ops=("disc_exact", "bound", "mono"),
                      seeds=(1,))
    config = ExperimentConfig.from_file(path)
    got = render_csv(run_experiment(config, threads=2))
    with open(os.path.join(GOLDEN_DIR, "experiment_golden.csv")) as fh:
        assert got == fh.read()


def test_experiment_sandwich_check_fires(tmp_path, monkeypatch):
    # a certificate claiming more than 24 K disc+ must be flagged
    import lowrankdisc.experiment as exp

    real = exp.lower_bound_disc

    def inflated(M, r=None, cfg=None):
        cert = real(M, r=r, cfg=cfg or exp.DEFAULT)
        cert.disc_value = 1e9
        return cert

    monkeypatch.setattr(exp, "lower_bound_disc", inflated)
    config = ExperimentConfig.from_json_obj({
        "gens": [{"kind": "identity", "n": 8}],
        "ops": ["disc_exact", "bound"],
        "seeds": [1],
        "timing": False,
    })
    rows = run_experiment(config, threads=1)
    bound_rows = [r for r in rows if r.matrix_id.endswith("|bound")]
    assert bound_rows[0].status == "sandwich_violation"


def test_experiment_disc0_op(tmp_path):
    config = ExperimentConfig.from_json_obj({
        "gens": [{"kind": "identity", "n": 2}],
        "ops": ["disc0"],
        "seeds": [1],
        "timing": False,
    })
    rows = run_experiment(config, threads=1)
    assert rows[0].disc == 2  # exact relaxation optimum for identity(2)


def test_experiment_bound_autosquares_rectangular(tmp_path):
    config = ExperimentConfig.from_json_obj({
        "gens": [{"kind": "random_dense", "m": 4, "n": 6, "p": "1/4"}],
        "ops": ["bound", "disc_exact"],
        "seeds": [3],
        "timing": False,
    })
    rows = run_experiment(config, threads=1)
    by_op = {r.matrix_id.rsplit("|", 1)[1]: r for r in rows}
    assert by_op["bound"].status == "ok"
    assert by_op["bound"].bound is not None


def test_console_script_entrypoint(tmp_path):
    import subprocess
    import sys

    path = write_matrix(tmp_path, fixtures("identity(4)"))
    proc = subprocess.run(
        [sys.executable, "-m", "lowrankdisc.cli", "disc", path],
        capture_output=True, text=True)
    assert proc.returncode == 0
    assert json.loads(proc.stdout)["disc_plus"] == "1/1"


def test_stdin_input():
    import io
    import sys as _sys

    from lowrankdisc.cli import main as cli_main

    text = fixtures("identity(4)").to_text()
    old = _sys.stdin
    _sys.stdin = io.StringIO(text)
    try:
        code = cli_main(["disc", "-"])
    finally:
        _sys.stdin = old
    assert code == 0


def test_mono_tiny_inputs(tmp_path, capsys):
    for name in ("all_ones(1,1)", "all_zeros(1,1)", "all_ones(2,3)"):
        path = write_matrix(tmp_path, fixtures(name), f"{name[:4]}.txt")
        code, out, _ = run_cli(["mono", path], capsys)
        assert code == 0
        last = json.loads(out.strip().split("\n")[-1])
        assert last["dims"][0] >= 1 and last["dims"][1] >= 1
