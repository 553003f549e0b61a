"""
Small graphs against the exhaustive maximum
===========================================

On graphs with at most 16 vertices the largest rainbow tree can be found by
search. The process can never do better.
"""

from rainbowgiant import RngStream
from rainbowgiant.oracle import ColoredGraphSmall, max_rainbow_tree, process_vs_oracle, random_small_graph

gen = RngStream(5).gen
g = random_small_graph(10, 12, gen)
cg = ColoredGraphSmall(g, gen.integers(0, 6, size=g.m), 6)
size, witness = max_rainbow_tree(cg)
print(f"maximum rainbow tree: {size} vertices via edges {witness}")

rep = process_vs_oracle(cg, 20, gen)
for r in rep["runs"][:5]:
    print(f"process {r['process']}  oracle {r['oracle']}")
print(f"violations {rep['violations']}, equalities {rep['equalities']} of {len(rep['runs'])}")
