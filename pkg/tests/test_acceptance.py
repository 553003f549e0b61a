"""Acceptance suite at the reference configuration.

n = 2e5, eps = 0.1, alpha = 1, master seed 2024. Heavy runs are module
fixtures shared between criteria. A verdict line per criterion is printed
in the terminal summary by ``conftest.py``.
"""

import math

import numpy as np
import pytest

from rainbowgiant.harness import ExperimentConfig, loss_scaling, run_experiment, theory_summary
from rainbowgiant.verify import verify_borel_tail, verify_mu, verify_oracle, verify_pgw_gof

N = 200_000
EPS = 0.1
ALPHA = 1.0
SEED = 2024
TRIALS = 20
FREQ_TRIALS = 100

acceptance = pytest.mark.acceptance


def _cfg(generator, trials=TRIALS, **kw):
    return ExperimentConfig(n=N, epsilon=EPS, alpha=ALPHA, trials=trials, master_seed=SEED,
                            generator=generator, **kw)


@pytest.fixture(scope="module")
def gnp_report():
    return run_experiment(_cfg("gnp"))


@pytest.fixture(scope="module")
def gnm_report():
    return run_experiment(_cfg("gnm"))


@pytest.fixture(scope="module")
def dlp_report():
    return run_experiment(_cfg("dlp", trials=FREQ_TRIALS))


@pytest.fixture(scope="module")
def scaling():
    return loss_scaling(N, [0.05, 0.1, 0.2], alpha=ALPHA, trials=TRIALS, master_seed=SEED)


@pytest.fixture(scope="module")
def oracle_result():
    return verify_oracle(seed=SEED, instances=200, runs=20, n=10, m=12)


def _ok(report):
    return [r for r in report.trials if "error" not in r]


@acceptance(1, "mu solver residual and first-order expansion")
def test_c01_mu_solver():
    res = verify_mu()
    assert res["passed"], res


@acceptance(2, "gnm giant size within 5% of (1 - mu/(1+eps))n")
def test_c02_giant_size(gnm_report):
    mean = gnm_report.aggregate["giant_size"]["mean"]
    target = gnm_report.theory["giant_predicted"]
    assert gnm_report.checks["no_failed_trials"]
    assert abs(mean - target) <= 0.05 * target, (mean, target)


@acceptance(3, "core |V| and |E| within 15% of 2 eps^2 n (gnp and DLP)")
def test_c03_core_size(gnp_report, dlp_report):
    target = 2 * EPS**2 * N
    dlp_first = _ok(dlp_report)[:TRIALS]
    means = {
        "gnp_vertices": gnp_report.aggregate["core_vertices"]["mean"],
        "gnp_edges": gnp_report.aggregate["core_edges"]["mean"],
        "dlp_vertices": float(np.mean([r["core_vertices"] for r in dlp_first])),
        "dlp_edges": float(np.mean([r["core_edges"] for r in dlp_first])),
    }
    off = {k: (v - target) / target for k, v in means.items()}
    assert len(dlp_first) == TRIALS
    assert all(abs(x) <= 0.15 for x in off.values()), off


@acceptance(4, "Borel tail below 1/(sqrt(j) mu), zero violations")
def test_c04_borel_tail():
    res = verify_borel_tail()
    assert sum(r["violations"] for r in res["rows"]) == 0, res
    assert len(res["rows"]) == 5


@acceptance(5, "PGW tree sizes fit Borel(0.9) at significance 1e-3")
def test_c05_pgw_gof():
    res = verify_pgw_gof(seed=SEED, mu=0.9, samples=10**5, alpha=1e-3)
    assert res["pvalue"] > 1e-3, res


@acceptance(6, "D_j <= 3 eps n / sqrt(j) on the whole grid in >= 95 of 100 DLP trials")
def test_c06_dj_bound(dlp_report):
    ok = _ok(dlp_report)
    good = sum(all(d["ok"] for d in r["dj"]) for r in ok)
    assert len(ok) == FREQ_TRIALS
    assert dlp_report.config["j_grid"] == [1, 4, 16, 64, 256]
    assert good >= 95, good


@acceptance(7, "no desc-ordering violations in >= 95 of 100 trials")
def test_c07_desc_bound(dlp_report):
    ok = _ok(dlp_report)
    clean = sum(r["desc_bound_violations"] == 0 for r in ok)
    assert len(ok) == FREQ_TRIALS
    assert clean >= 95, clean


@acceptance(8, "retained colors distinct in every process run")
def test_c08_rainbow(gnp_report, gnm_report, dlp_report, scaling, oracle_result):
    runs = [r for rep in (gnp_report, gnm_report, dlp_report) for r in _ok(rep)]
    assert len(runs) == 2 * TRIALS + FREQ_TRIALS
    assert all(r["rainbow_ok"] and not r["problems"] for r in runs)
    assert all(row["rainbow_all"] and row["trials_ok"] == TRIALS for row in scaling["rows"])
    # the oracle harness recomputes rainbowness independently
    assert oracle_result["violations"] == 0


@acceptance(9, "S within 37 eps^2 log(1/eps) n / alpha; ratio stable within 2x over eps")
def test_c09_loss_scaling(scaling):
    rows = scaling["rows"]
    assert all(row["within_budget_all"] for row in rows), rows
    ratios = {row["epsilon"]: round(row["ratio_mean"], 3) for row in rows}
    assert scaling["spread"] <= 2.0, (
        f"ratio by eps {ratios}, spread {scaling['spread']:.2f}, affine fit {scaling['affine_fit']}"
    )


@acceptance(10, "leaf count within 15% of 2 eps n / e; leaf deletions within 25% of oracle")
def test_c10_leaves(gnp_report):
    leaves = gnp_report.aggregate["leaf_count"]["mean"]
    dels = gnp_report.aggregate["leaf_deletions"]["mean"]
    expected = gnp_report.aggregate["leaf_expected_deletions"]["mean"]
    target = 2 * EPS * N / math.e
    assert abs(leaves - target) <= 0.15 * target, (leaves, target)
    assert abs(dels - expected) <= 0.25 * expected, (dels, expected)
    # order-of-magnitude agreement with 2 eps^2 n / (e^2 alpha)
    lower = gnp_report.derived["leaf_deletions_lower_bound"]
    assert 0.5 * lower <= dels <= 2 * lower, (dels, lower)


@acceptance(11, "process never beats the brute-force maximum; trees attain it")
def test_c11_oracle(oracle_result):
    assert oracle_result["runs"] == 2 * 200 * 20
    assert oracle_result["violations"] == 0, oracle_result
    assert oracle_result["tree_instances_without_equality"] == 0, oracle_result


@acceptance(12, "byte-identical reports across executions and worker counts {1, 8}")
def test_c12_determinism(gnp_report):
    cfg = _cfg("gnp")
    again = run_experiment(cfg, workers=1).to_json()
    parallel = run_experiment(cfg, workers=8).to_json()
    assert gnp_report.to_json() == again
    assert again == parallel


def test_reference_theory_values():
    ts = theory_summary(N, EPS, ALPHA)
    assert ts.core_predicted == pytest.approx(4000)
    assert ts.leaf_predicted == pytest.approx(4e4 / math.e)
    assert ts.prefix == 10_000
