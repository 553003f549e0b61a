"""Seeded Monte Carlo experiments and their reports.

Trial ``t`` of a configuration draws every random quantity from
``RngStream(master_seed, t)``, so the report depends only on the
configuration: not on worker count, completion order or wall clock.
"""

from __future__ import annotations

import csv
import io
import json
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field

import numpy as np

from .distributions import DomainError, RngStream, solve_mu
from .generators import dlp_generate, gnm_supercritical, gnp_supercritical
from .graph import connected_components, core_mantle_decompose
from .process import (
    check_trace,
    color_count,
    disconnection_accounting,
    expected_collisions,
    leaf_loss_experiment,
    mantle_cut_sizes,
    measure_desc_bound,
    measure_dj,
    order_edges,
    ordering_is_monotone,
    prefix_length,
    rainbow_giant,
    rainbow_spanning_tree,
    run_process,
)

GENERATORS = ("gnp", "gnm", "dlp")
DEFAULT_J_GRID = (1, 4, 16, 64, 256)
EXACT_ACCOUNTING_MAX_N = 10_000
_HARMONIC_EXACT_MAX = 10**7


def harmonic(k: int) -> float:
    """``H_k = sum_{j<=k} 1/j``; exact summation up to 10^7 terms."""
    k = int(k)
    if k <= 0:
        return 0.0
    if k <= _HARMONIC_EXACT_MAX:
        # reverse order keeps the small terms from being swamped
        return float(np.sum(1.0 / np.arange(k, 0, -1, dtype=np.float64)))
    return math.log(k) + np.euler_gamma + 1.0 / (2 * k) - 1.0 / (12 * k * k)


@dataclass(frozen=True)
class TheorySummary:
    n: int
    epsilon: float
    alpha: float
    mu: float
    giant_predicted: float
    giant_first_order: float
    core_predicted: float
    leaf_predicted: float
    loss_budget: float
    expected_loss_bound: float
    edge_count: float
    prefix: int
    colors: int
    core_vertices_limit: float
    core_edges_limit: float
    leaf_limit: float


def theory_summary(n: int, epsilon: float, alpha: float, observed_edge_count: int | None = None) -> TheorySummary:
    """Model predictions for one parameter setting.

    Besides the first-order values (``2 eps n``, ``2 eps^2 n``,
    ``2 eps n / e``) the ``*_limit`` fields give the exact n -> infinity
    densities of G(n, (1+eps)/n) at this eps, useful for judging how far the
    first-order values are off at moderate eps.
    """
    if not 0.0 < epsilon < 1.0:
        raise DomainError(f"epsilon must lie in (0, 1), got {epsilon}")
    if alpha <= 0 or n < 1:
        raise DomainError("need alpha > 0 and n >= 1")
    mu = solve_mu(epsilon).mu
    c = 1.0 + epsilon
    edges = float(observed_edge_count) if observed_edge_count is not None else c * n / 2.0
    prefix = prefix_length(epsilon, n)
    harm = harmonic(int(edges)) - harmonic(prefix)
    lam = c - mu  # mean degree into the giant: c * (1 - mu/c)
    return TheorySummary(
        n=int(n),
        epsilon=float(epsilon),
        alpha=float(alpha),
        mu=mu,
        giant_predicted=(1.0 - mu / c) * n,
        giant_first_order=2.0 * epsilon * n,
        core_predicted=2.0 * epsilon**2 * n,
        leaf_predicted=2.0 * epsilon * n / math.e,
        loss_budget=37.0 * epsilon**2 * math.log(1.0 / epsilon) * n / alpha,
        expected_loss_bound=36.0 * epsilon**2 * n / alpha * harm,
        edge_count=edges,
        prefix=prefix,
        colors=color_count(alpha, n),
        core_vertices_limit=(1.0 - math.exp(-lam) * (1.0 + lam)) * n,
        core_edges_limit=lam * lam / (2.0 * c) * n,
        leaf_limit=lam * math.exp(-c) * n,
    )


@dataclass(frozen=True)
class ExperimentConfig:
    n: int
    epsilon: float
    alpha: float = 1.0
    trials: int = 20
    master_seed: int = 0
    generator: str = "gnp"
    j_grid: tuple[int, ...] = DEFAULT_J_GRID
    out: str | None = None
    format: str = "json"

    def __post_init__(self):
        if self.trials < 1:
            raise DomainError("trials must be >= 1")
        if not 0.0 < self.epsilon < 0.5:
            raise DomainError("epsilon must lie in (0, 0.5)")
        if self.alpha <= 0:
            raise DomainError("alpha must be > 0")
        if self.generator not in GENERATORS:
            raise DomainError(f"generator must be one of {GENERATORS}")
        if self.format not in ("json", "csv"):
            raise DomainError("format must be json or csv")
        if any(j < 1 for j in self.j_grid):
            raise DomainError("j values must be >= 1")
        if self.n < 1:
            raise DomainError("n must be >= 1")
        object.__setattr__(self, "j_grid", tuple(int(j) for j in self.j_grid))

    def echo(self) -> dict:
        d = asdict(self)
        d["j_grid"] = list(self.j_grid)
        return d


def _generate(cfg: ExperimentConfig, gen):
    if cfg.generator == "gnp":
        return gnp_supercritical(cfg.n, cfg.epsilon, gen)
    if cfg.generator == "gnm":
        return gnm_supercritical(cfg.n, cfg.epsilon, gen)
    return dlp_generate(cfg.n, cfg.epsilon, gen).graph


def run_trial(cfg: ExperimentConfig, t: int) -> dict:
    """One complete pass: generate, decompose, order, color, measure."""
    gen = RngStream(cfg.master_seed, t).gen
    n, eps = cfg.n, cfg.epsilon
    g = _generate(cfg, gen)
    comp = connected_components(g)
    cm = core_mantle_decompose(g, comp, comp.giant)
    ordering = order_edges(g, cm)
    c = color_count(cfg.alpha, n)
    prefix = prefix_length(eps, n)
    coloring, trace = run_process(g, cm, ordering, c, gen, prefix=prefix)
    rg_vertices, rg_size = rainbow_giant(g, coloring)
    tree = rainbow_spanning_tree(g, rg_vertices, coloring.retained_edges)
    tree_colors = coloring.colors[np.asarray(tree, dtype=np.int64)]
    leaves, leaf_del = leaf_loss_experiment(g, cm, cfg.alpha, gen, n=n)
    violations = measure_desc_bound(cm, ordering, eps, n)

    dj = []
    for j in cfg.j_grid:
        d, bound, ok = measure_dj(cm, j, eps, n)
        dj.append({"j": j, "d_j": d, "bound": bound, "ok": ok})

    problems = check_trace(trace, coloring)
    if not ordering_is_monotone(cm, ordering):
        problems.append("ordering not core-first / desc non-increasing")
    if len(tree) != rg_size - 1 or len(np.unique(tree_colors)) != len(tree):
        problems.append("spanning tree not rainbow")
    record = {
        "trial": t,
        "graph_vertices": g.n,
        "graph_edges": g.m,
        "giant_size": int(comp.sizes[comp.giant]),
        "giant_edges": cm.edge_count,
        "core_vertices": int(len(cm.core_vertices)),
        "core_edges": int(len(cm.core_edges)),
        "mantle_edges": int(len(cm.mantle_edges)),
        "colors": c,
        "prefix": prefix,
        "deletions": trace.deletions,
        "rainbow_giant_size": rg_size,
        "rainbow_ok": coloring.is_rainbow(),
        "s": trace.s,
        "leaf_count": leaves,
        "leaf_deletions": leaf_del,
        "leaf_expected_deletions": expected_collisions(leaves, c),
        "desc_bound_violations": len(violations),
        "first_violation": violations[0] if violations else None,
        "dj": dj,
    }
    if n <= EXACT_ACCOUNTING_MAX_N:
        acc = disconnection_accounting(g, cm, coloring, trace)
        cut, desc_sum = mantle_cut_sizes(g, cm, coloring)
        if not acc["ok"]:
            problems.append("loss exceeds sum X_i + core loss")
        if cut > desc_sum:
            problems.append("mantle deletions cut more than their desc")
        record["accounting"] = acc
    record["problems"] = problems
    return record


def _safe_trial(args) -> dict:
    cfg, t = args
    try:
        return run_trial(cfg, t)
    except Exception as exc:  # recorded, batch continues
        return {"trial": t, "error": f"{type(exc).__name__}: {exc}"}


def _within(value, target, rel):
    return abs(value - target) <= rel * target


def _summarise(cfg: ExperimentConfig, trials: list[dict], theory: TheorySummary) -> tuple[dict, dict, dict]:
    ok = [r for r in trials if "error" not in r]
    scalar = [
        "giant_size", "giant_edges", "core_vertices", "core_edges", "mantle_edges",
        "rainbow_giant_size", "deletions", "s", "leaf_count", "leaf_deletions",
        "leaf_expected_deletions", "desc_bound_violations",
    ]
    agg = {}
    for key in scalar:
        vals = np.array([r[key] for r in ok], dtype=np.float64)
        agg[key] = {
            "mean": float(vals.mean()) if vals.size else None,
            "std": float(vals.std(ddof=1)) if vals.size > 1 else 0.0,
        }
    n, eps, alpha = cfg.n, cfg.epsilon, cfg.alpha
    unit = eps**2 * math.log(1.0 / eps) * n / alpha
    ratios = [r["s"] / unit for r in ok]
    derived = {
        "loss_unit": unit,
        "loss_ratio_mean": float(np.mean(ratios)) if ratios else None,
        "rainbow_fraction_mean": float(np.mean([r["rainbow_giant_size"] / r["giant_size"] for r in ok])) if ok else None,
        "leaf_deletions_lower_bound": 2.0 * eps**2 * n / (math.e**2 * alpha),
    }

    def mean(key):
        return agg[key]["mean"]

    checks = {}
    checks["no_failed_trials"] = len(ok) == len(trials)
    if ok:
        if cfg.generator == "dlp":
            checks["giant_within_15pct_of_2en"] = _within(mean("giant_size"), theory.giant_first_order, 0.15)
        else:
            checks["giant_within_5pct"] = _within(mean("giant_size"), theory.giant_predicted, 0.05)
        checks["core_vertices_within_15pct"] = _within(mean("core_vertices"), theory.core_predicted, 0.15)
        checks["core_edges_within_15pct"] = _within(mean("core_edges"), theory.core_predicted, 0.15)
        for idx, j in enumerate(cfg.j_grid):
            freq = np.mean([r["dj"][idx]["ok"] for r in ok])
            checks[f"dj_{j}_freq_ge_95pct"] = bool(freq >= 0.95)
        checks["desc_bound_freq_ge_95pct"] = bool(np.mean([r["desc_bound_violations"] == 0 for r in ok]) >= 0.95)
        checks["rainbow_all_trials"] = all(r["rainbow_ok"] for r in ok)
        checks["loss_within_budget_all_trials"] = all(r["s"] <= theory.loss_budget for r in ok)
        checks["leaf_count_within_15pct"] = _within(mean("leaf_count"), theory.leaf_predicted, 0.15)
        checks["leaf_deletions_within_25pct"] = _within(mean("leaf_deletions"), mean("leaf_expected_deletions"), 0.25)
        checks["invariants_all_trials"] = all(not r["problems"] for r in ok)
    return agg, derived, {k: bool(v) for k, v in checks.items()}


@dataclass
class ExperimentReport:
    config: dict
    theory: dict
    trials: list[dict]
    aggregate: dict
    derived: dict
    checks: dict
    passed: bool = field(init=False)

    def __post_init__(self):
        self.passed = all(self.checks.values())

    def to_dict(self) -> dict:
        return {
            "config": self.config,
            "theory": self.theory,
            "trials": self.trials,
            "aggregate": self.aggregate,
            "derived": self.derived,
            "checks": self.checks,
            "passed": self.passed,
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2) + "\n"

    def to_csv(self) -> str:
        buf = io.StringIO()
        cols = [
            "trial", "graph_vertices", "graph_edges", "giant_size", "giant_edges",
            "core_vertices", "core_edges", "mantle_edges", "colors", "prefix",
            "deletions", "rainbow_giant_size", "rainbow_ok", "s", "leaf_count",
            "leaf_deletions", "leaf_expected_deletions", "desc_bound_violations",
        ]
        j_grid = self.config["j_grid"]
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(cols + [f"D_{j}" for j in j_grid] + ["error"])
        for r in self.trials:
            if "error" in r:
                w.writerow([r["trial"]] + [""] * (len(cols) - 1 + len(j_grid)) + [r["error"]])
                continue
            w.writerow([r[k] for k in cols] + [d["d_j"] for d in r["dj"]] + [""])
        return buf.getvalue()

    def render(self, fmt: str) -> str:
        return self.to_json() if fmt == "json" else self.to_csv()


def run_experiment(cfg: ExperimentConfig, workers: int = 1) -> ExperimentReport:
    """Run ``cfg.trials`` independent trials and aggregate them in trial order."""
    jobs = [(cfg, t) for t in range(cfg.trials)]
    if workers <= 1:
        trials = [_safe_trial(j) for j in jobs]
    else:
        with ProcessPoolExecutor(max_workers=workers) as ex:
            trials = list(ex.map(_safe_trial, jobs))
    first = next((r for r in trials if "error" not in r), None)
    theory = theory_summary(
        cfg.n, cfg.epsilon, cfg.alpha,
        None if first is None else int(np.mean([r["giant_edges"] for r in trials if "error" not in r])),
    )
    agg, derived, checks = _summarise(cfg, trials, theory)
    return ExperimentReport(cfg.echo(), asdict(theory), trials, agg, derived, checks)


def loss_scaling(n: int, epsilons, alpha: float = 1.0, trials: int = 20, master_seed: int = 0,
                 generator: str = "gnp", workers: int = 1, band: float = 2.0) -> dict:
    """Mean of ``S / (eps^2 log(1/eps) n / alpha)`` per eps and whether all
    means lie within a factor ``band`` of each other."""
    rows = []
    for eps in epsilons:
        cfg = ExperimentConfig(n=n, epsilon=eps, alpha=alpha, trials=trials,
                               master_seed=master_seed, generator=generator)
        rep = run_experiment(cfg, workers)
        budget = rep.theory["loss_budget"]
        ok = [r for r in rep.trials if "error" not in r]
        rows.append({
            "epsilon": eps,
            "ratio_mean": rep.derived["loss_ratio_mean"],
            "s_mean": rep.aggregate["s"]["mean"],
            "budget": budget,
            "within_budget_all": all(r["s"] <= budget for r in ok) and len(ok) == len(rep.trials),
            "rainbow_all": all(r["rainbow_ok"] for r in ok),
            "trials_ok": len(ok),
        })
    ratios = [r["ratio_mean"] for r in rows]
    spread = max(ratios) / min(ratios) if min(ratios) > 0 else math.inf
    # S / (eps^2 n / alpha) against log(1/eps): slope and offset of the loss
    logs = np.log(1.0 / np.asarray(epsilons, dtype=np.float64))
    fit = None
    if len(rows) >= 2:
        slope, intercept = np.polyfit(logs, np.asarray(ratios) * logs, 1)
        fit = {"slope": float(slope), "intercept": float(intercept)}
    return {"rows": rows, "spread": spread, "band": band, "stable": spread <= band, "affine_fit": fit}


REPORT_SCHEMA = {
    "type": "object",
    "required": ["config", "theory", "trials", "aggregate", "derived", "checks", "passed"],
    "properties": {
        "config": {
            "type": "object",
            "required": ["n", "epsilon", "alpha", "trials", "master_seed", "generator", "j_grid"],
            "properties": {
                "n": {"type": "integer", "minimum": 1},
                "epsilon": {"type": "number", "exclusiveMinimum": 0, "exclusiveMaximum": 0.5},
                "alpha": {"type": "number", "exclusiveMinimum": 0},
                "trials": {"type": "integer", "minimum": 1},
                "master_seed": {"type": "integer"},
                "generator": {"enum": list(GENERATORS)},
                "j_grid": {"type": "array", "items": {"type": "integer", "minimum": 1}},
            },
        },
        "theory": {
            "type": "object",
            "required": ["mu", "giant_predicted", "core_predicted", "leaf_predicted",
                         "loss_budget", "expected_loss_bound"],
        },
        "trials": {
            "type": "array",
            "items": {
                "type": "object",
                "required": ["trial"],
                "oneOf": [
                    {"required": ["error"]},
                    {"required": ["giant_size", "core_vertices", "core_edges", "rainbow_giant_size",
                                  "s", "deletions", "leaf_count", "leaf_deletions", "dj",
                                  "desc_bound_violations", "rainbow_ok", "problems"]},
                ],
            },
        },
        "aggregate": {"type": "object"},
        "derived": {"type": "object"},
        "checks": {"type": "object", "additionalProperties": {"type": "boolean"}},
        "passed": {"type": "boolean"},
    },
}
