"""
A seeded Monte Carlo experiment
===============================

Run a batch of trials, read the aggregate and the per-check verdicts, and
look at how the loss ratio moves with eps.
"""

from rainbowgiant.harness import ExperimentConfig, loss_scaling, run_experiment

cfg = ExperimentConfig(n=50_000, epsilon=0.15, trials=5, master_seed=1)
rep = run_experiment(cfg)
for key in ("giant_size", "core_vertices", "rainbow_giant_size", "s"):
    a = rep.aggregate[key]
    print(f"{key:<20} {a['mean']:>10.1f} +/- {a['std']:.1f}")
for name, ok in rep.checks.items():
    print(f"{'PASS' if ok else 'FAIL'} {name}")

###############################################################################
# S / (eps^2 log(1/eps) n / alpha) for a few eps
res = loss_scaling(50_000, [0.05, 0.1, 0.2], trials=3, master_seed=1)
for row in res["rows"]:
    print(f"eps={row['epsilon']}  ratio={row['ratio_mean']:.3f}")
print(f"spread {res['spread']:.2f}, affine fit {res['affine_fit']}")
