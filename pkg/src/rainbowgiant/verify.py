"""Self-contained verification suites shared by the CLI and the test-suite.

Each function returns a dict with a boolean ``passed`` plus the numbers it
was decided on.
"""

from __future__ import annotations

import numpy as np
from scipy import stats

from .distributions import RngStream, borel_pmf, borel_tail, borel_tail_bound, sample_borel, solve_mu
from .oracle import ColoredGraphSmall, process_vs_oracle, random_small_graph, random_small_tree

MU_GRID = (0.5, 0.8, 0.9, 0.95, 0.99)


def verify_mu(epsilons=(0.01, 0.05, 0.1, 0.2)) -> dict:
    rows = []
    for eps in epsilons:
        sol = solve_mu(eps)
        row = {"epsilon": eps, "mu": sol.mu, "residual": sol.residual, "residual_ok": sol.residual < 1e-12}
        if eps <= 0.05:
            row["expansion_ok"] = abs(sol.mu - (1.0 - eps)) <= 2.0 * eps * eps
        rows.append(row)
    passed = all(r["residual_ok"] and r.get("expansion_ok", True) for r in rows)
    return {"rows": rows, "passed": passed}


def verify_borel_tail(mus=MU_GRID, jmax: int = 10_000) -> dict:
    j = np.arange(1, jmax + 1)
    rows = []
    for mu in mus:
        tail = borel_tail(mu, j)
        bound = borel_tail_bound(mu, j)
        bad = int((tail >= bound).sum())
        rows.append({"mu": mu, "violations": bad, "min_slack": float((bound - tail).min())})
    return {"rows": rows, "passed": all(r["violations"] == 0 for r in rows)}


def borel_gof(sizes: np.ndarray, mu: float, min_expected: float = 5.0) -> tuple[float, float, int]:
    """Chi-square test of integer sizes against Borel(mu).

    Cells are ``k = 1..K`` individually, with ``K`` the last k whose expected
    count reaches ``min_expected``, plus one cell for ``k > K``.  Returns
    ``(statistic, p-value, degrees of freedom)``.
    """
    sizes = np.asarray(sizes)
    N = sizes.size
    k = 1
    while N * borel_pmf(mu, k + 1) >= min_expected and N * borel_tail(mu, k + 1) >= min_expected:
        k += 1
    K = k
    expected = np.append(N * borel_pmf(mu, np.arange(1, K + 1)), N * borel_tail(mu, K))
    observed = np.append(np.bincount(np.minimum(sizes, K + 1), minlength=K + 2)[1:K + 1],
                         (sizes > K).sum())
    expected *= N / expected.sum()
    res = stats.chisquare(observed, expected)
    return float(res.statistic), float(res.pvalue), len(observed) - 1


def verify_pgw_gof(seed: int = 7, mu: float = 0.9, samples: int = 100_000, alpha: float = 1e-3) -> dict:
    sizes = sample_borel(mu, samples, RngStream(seed, 0))
    stat, p, dof = borel_gof(sizes, mu)
    return {"mu": mu, "samples": samples, "statistic": stat, "dof": dof, "pvalue": p,
            "significance": alpha, "passed": p > alpha}


def verify_distributions(seed: int = 7) -> dict:
    out = {"mu": verify_mu(), "borel_tail": verify_borel_tail(), "pgw_gof": verify_pgw_gof(seed)}
    out["passed"] = all(v["passed"] for v in out.values())
    return out


def verify_oracle(seed: int = 0, instances: int = 200, runs: int = 20,
                  n: int = 10, m: int = 12, c: int = 8) -> dict:
    """Process never beats the exhaustive maximum; on rainbow-colorable trees
    with ample colors some run keeps the whole tree."""
    gen = RngStream(seed, 0).gen
    violations = 0
    total = 0
    for _ in range(instances):
        g = random_small_graph(n, m, gen)
        cg = ColoredGraphSmall(g, gen.integers(0, c, size=g.m), c)
        rep = process_vs_oracle(cg, runs, gen)
        violations += rep["violations"]
        total += len(rep["runs"])

    tree_misses = 0
    for _ in range(instances):
        t = random_small_tree(n, gen)
        colors_tree = 10 * t.m  # c >= |E|
        cg = ColoredGraphSmall(t, gen.permutation(colors_tree)[:t.m], colors_tree)
        rep = process_vs_oracle(cg, runs, gen)
        violations += rep["violations"]
        total += len(rep["runs"])
        if rep["equalities"] == 0:
            tree_misses += 1
    return {"runs": total, "violations": violations, "tree_instances_without_equality": tree_misses,
            "passed": violations == 0 and tree_misses == 0}
