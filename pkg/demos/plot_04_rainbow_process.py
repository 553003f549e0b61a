"""
Coloring the giant and keeping a rainbow subgraph
=================================================

Order the giant's edges core first and then by decreasing desc, color them
one at a time, and delete any edge whose color was already used.
"""

import io

from rainbowgiant import RngStream, connected_components, core_mantle_decompose, gnp_supercritical
from rainbowgiant.process import (
    color_count,
    order_edges,
    prefix_length,
    rainbow_giant,
    rainbow_spanning_tree,
    run_process,
    write_trace_csv,
)

n, eps, alpha = 100_000, 0.1, 1.0
rng = RngStream(4)
g = gnp_supercritical(n, eps, rng)
comp = connected_components(g)
cm = core_mantle_decompose(g, comp, comp.giant)

ordering = order_edges(g, cm)
c, prefix = color_count(alpha, n), prefix_length(eps, n)
coloring, trace = run_process(g, cm, ordering, c, rng, prefix=prefix)
verts, size = rainbow_giant(g, coloring)
tree = rainbow_spanning_tree(g, verts, coloring.retained_edges)

print(f"{c} colors, {trace.steps} steps, {trace.deletions} deletions")
print(f"giant {comp.sizes[comp.giant]} -> rainbow giant {size}")
print(f"S after the first {prefix} edges: {trace.s}")
print(f"spanning tree of {len(tree)} edges, distinct colors: {len(set(coloring.colors[tree])) == len(tree)}")

###############################################################################
# The trace is a plain CSV, one row per processed edge
buf = io.StringIO()
write_trace_csv(trace, buf)
print("".join(buf.getvalue().splitlines(keepends=True)[:4]))
