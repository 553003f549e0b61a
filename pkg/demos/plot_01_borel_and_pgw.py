"""
Borel sizes of Poisson Galton-Watson trees
==========================================

The dual parameter mu, the Borel law and its tail bound, and a check that
sampled tree sizes follow the Borel pmf.
"""

import numpy as np

from rainbowgiant import RngStream, borel_pmf, borel_tail, borel_tail_bound, sample_borel, solve_mu
from rainbowgiant.verify import borel_gof

# mu is the subcritical dual of 1 + eps
for eps in (0.01, 0.05, 0.1, 0.2):
    sol = solve_mu(eps)
    print(f"eps={eps:<5} mu={sol.mu:.12f} 1-eps={1 - eps:.3f} residual={sol.residual:.1e}")

###############################################################################
# The tail P(X > j) against 1/(sqrt(j) mu)
mu = 0.9
j = np.array([1, 10, 100, 1000, 10_000])
for jj, t, b in zip(j, borel_tail(mu, j), borel_tail_bound(mu, j)):
    print(f"j={jj:>6} tail={t:.3e} bound={b:.3e}")

###############################################################################
# Sample 10^5 tree sizes and compare with the pmf
sizes = sample_borel(mu, 100_000, RngStream(7))
for k in range(1, 6):
    print(f"k={k} empirical={np.mean(sizes == k):.4f} pmf={borel_pmf(mu, k):.4f}")
stat, p, dof = borel_gof(sizes, mu)
print(f"chi-square {stat:.1f} on {dof} dof, p = {p:.3f}")
