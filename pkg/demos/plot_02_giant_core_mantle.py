"""
Giant component, 2-core and mantle of G(n, p)
=============================================

Sample a supercritical random graph, split its largest component into the
2-core and the hanging trees, and compare with the predicted sizes.
"""

import numpy as np

from rainbowgiant import RngStream, connected_components, core_mantle_decompose, gnp_supercritical
from rainbowgiant.harness import theory_summary

n, eps = 100_000, 0.1
g = gnp_supercritical(n, eps, RngStream(1))
comp = connected_components(g)
cm = core_mantle_decompose(g, comp, comp.giant)
ts = theory_summary(n, eps, 1.0)

print(f"{g.m} edges, {comp.count} components")
print(f"giant   {comp.sizes[comp.giant]:>7}   predicted {ts.giant_predicted:.0f}")
print(f"core V  {len(cm.core_vertices):>7}   first order {ts.core_predicted:.0f}, limit {ts.core_vertices_limit:.0f}")
print(f"core E  {len(cm.core_edges):>7}   first order {ts.core_predicted:.0f}, limit {ts.core_edges_limit:.0f}")

###############################################################################
# desc(e) counts the vertices cut off from the core when e is removed
desc = cm.desc[cm.mantle_edges]
print("largest desc values:", np.sort(desc)[-5:])
for j in (1, 4, 16, 64):
    print(f"edges with desc >= {j:>2}: {int(np.sum(desc >= j))}")
