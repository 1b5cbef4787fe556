import json
import math

import numpy as np
import pytest

from qentropy import (
    Distribution,
    ValidationError,
    analytic_query_total,
    classical_baseline,
    high_entropy_distribution,
    lower_bound_demo,
    query_scaling_sweep,
    random_distribution,
    shannon_entropy,
    total_query_bound,
)
from qentropy.cli import main


def test_analytic_total_grows_with_n():
    vals = [analytic_query_total(2 ** k, 2.0, 0.1) for k in (6, 8, 10, 12)]
    assert all(a < b for a, b in zip(vals, vals[1:]))
    assert all(v <= total_query_bound(2 ** k, 2.0, 0.1)
               for v, k in zip(vals, (6, 8, 10, 12)))


def test_sweep_short_range_fields():
    res = query_scaling_sweep([2 ** k for k in range(6, 12)], 2.0, 0.1)
    assert res.target == pytest.approx(1.0 / 8.0)
    assert len(res.rows) == 6
    assert all(r.within_bound for r in res.rows)
    lines = res.to_csv().splitlines()
    assert lines[0] == "n,queries,bound,within_bound"
    assert lines[1].startswith("64,")
    assert lines[-1].startswith("passed,")


def test_sweep_quantum_target():
    res = query_scaling_sweep([2 ** k for k in range(6, 12)], 2.0, 0.1,
                              quantum=True)
    assert res.target == pytest.approx(0.5 + 1.0 / 8.0)


def test_classical_baseline_sane():
    p = Distribution.uniform(256)
    rep = classical_baseline(p, 2.0, seed=0)
    assert rep.samples == math.ceil(256 ** 0.25)
    assert rep.h_true == 8.0
    assert 0.0 <= rep.h_hat <= 2.0 * 8.0 + 1.0


def test_lower_bound_demo_all_kinds():
    for kind in ("near_deterministic", "two_point_vs_spread", "collision"):
        demo = lower_bound_demo(kind, 64, 0.1 if kind != "collision" else 1.5)
        assert demo.passed, kind
    with pytest.raises(ValidationError):
        lower_bound_demo("nope", 64, 0.1)


def test_collision_demo_chain_ordering():
    demo = lower_bound_demo("collision", 64, 1.5)
    ch = demo.chain
    assert ch is not None
    vals = list(ch.values())
    assert all(a <= b + 1e-9 for a, b in zip(vals, vals[1:]))


def test_random_distribution_seeded():
    a = random_distribution(50, 3)
    b = random_distribution(50, 3)
    assert np.array_equal(a.probs, b.probs)


def test_high_entropy_distribution_hits_target():
    for n in (64, 1024):
        for seed in range(5):
            target = 0.9 * math.log2(n)
            d = high_entropy_distribution(n, target, seed)
            assert shannon_entropy(d) >= target - 1e-9
    # targets above the cap are clipped rather than rejected
    d = high_entropy_distribution(64, 100.0, 0)
    assert shannon_entropy(d) >= 0.98 * 6.0 - 1e-9


def run_cli(args):
    return main(args)


def test_cli_estimate_jsonl(tmp_path, capsys):
    out = tmp_path / "trials.jsonl"
    code = run_cli(["estimate", "--gen", "uniform:n=64", "--gamma", "2.0",
                    "--seeds", "3", "--out", str(out)])
    assert code == 0
    lines = out.read_text().strip().splitlines()
    assert len(lines) == 3
    rec = json.loads(lines[0])
    assert rec["n"] == 64
    assert list(rec.keys()) == sorted(rec.keys())


def test_cli_estimate_check_pass_and_fail(tmp_path):
    assert run_cli(["estimate", "--gen", "uniform:n=64", "--gamma", "2.0",
                    "--check", "--out", str(tmp_path / "a.jsonl")]) == 0


def test_cli_invalid_args_exit_2(tmp_path):
    assert run_cli(["estimate", "--gen", "uniform:n=64", "--gamma", "0.5",
                    "--out", str(tmp_path / "x.jsonl")]) == 2
    assert run_cli(["estimate", "--gen", "nosuch:n=64", "--gamma", "2.0",
                    "--out", str(tmp_path / "y.jsonl")]) == 2


def test_cli_input_file_round_trip(tmp_path):
    d = Distribution.zipf(32)
    inp = tmp_path / "d.json"
    inp.write_text(d.to_json())
    out = tmp_path / "o.jsonl"
    assert run_cli(["estimate", "--input", str(inp), "--gamma", "1.5",
                    "--out", str(out)]) == 0
    rec = json.loads(out.read_text().splitlines()[0])
    assert abs(rec["h_true"] - shannon_entropy(d)) < 1e-9


def test_cli_additive_and_threshold(tmp_path):
    assert run_cli(["additive", "--gen", "uniform:n=64", "--eps-add", "0.5",
                    "--out", str(tmp_path / "a.jsonl"), "--check"]) == 0
    t_out = tmp_path / "t.jsonl"
    assert run_cli(["threshold", "--gen", "uniform:n=256", "--high", "6",
                    "--low", "3", "--out", str(t_out)]) == 0
    rec = json.loads(t_out.read_text().splitlines()[0])
    assert rec["high"] is True


def test_cli_sweep_csv(tmp_path):
    out = tmp_path / "sweep.csv"
    ns = ",".join(str(2 ** k) for k in range(6, 12))
    code = run_cli(["sweep", "--gamma", "2.0", "--n-list", ns,
                    "--out", str(out)])
    assert code == 0
    lines = out.read_text().strip().splitlines()
    assert lines[0] == "n,queries,bound,within_bound"
    assert lines[1].startswith("64,")


def test_cli_lowerbound_and_baseline(tmp_path):
    assert run_cli(["lowerbound", "--kind", "collision", "--n", "64",
                    "--param", "1.5", "--out", str(tmp_path / "lb.jsonl"),
                    "--check"]) == 0
    assert run_cli(["baseline", "--gen", "zipf:n=128", "--gamma", "2.0",
                    "--out", str(tmp_path / "b.jsonl")]) == 0


def test_cli_config_file(tmp_path):
    cfg = tmp_path / "cfg.txt"
    cfg.write_text("gamma = 2.0\nseeds = 2\n")
    out = tmp_path / "o.jsonl"
    assert run_cli(["estimate", "--gen", "uniform:n=64", "--config",
                    str(cfg), "--out", str(out)]) == 0
    assert len(out.read_text().strip().splitlines()) == 2
