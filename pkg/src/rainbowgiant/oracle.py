"""Exhaustive maximum rainbow tree on tiny colored graphs.

Used as ground truth for the coloring process: whatever component the
process keeps is spanned by a rainbow tree, so its size can never exceed the
exhaustive maximum for the same coloring.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .distributions import as_generator
from .graph import EmptyCore, Graph, connected_components, core_mantle_decompose
from .process import edge_id_ordering, order_edges, rainbow_giant, run_process

MAX_VERTICES = 16
MAX_EDGES = 20


class TooLarge(ValueError):
    pass


@dataclass(frozen=True, eq=False)
class ColoredGraphSmall:
    graph: Graph
    colors: np.ndarray
    c: int

    def __post_init__(self):
        g = self.graph
        if g.n > MAX_VERTICES or g.m > MAX_EDGES:
            raise TooLarge(f"{g.n} vertices / {g.m} edges exceeds {MAX_VERTICES}/{MAX_EDGES}")
        col = np.asarray(self.colors, dtype=np.int64)
        if col.shape != (g.m,):
            raise ValueError("need exactly one color per edge")
        object.__setattr__(self, "colors", col)

    @classmethod
    def from_colors(cls, graph: Graph, colors) -> "ColoredGraphSmall":
        col = np.asarray(colors, dtype=np.int64)
        return cls(graph, col, int(col.max()) + 1 if col.size else 1)


class _RollbackDSU:
    """Union by size without path compression, so unions can be undone."""

    def __init__(self, n):
        self.parent = list(range(n))
        self.size = [1] * n
        self.history = []

    def find(self, x):
        while self.parent[x] != x:
            x = self.parent[x]
        return x

    def union(self, a, b):
        ra, rb = self.find(a), self.find(b)
        if ra == rb:
            return None
        if self.size[ra] < self.size[rb]:
            ra, rb = rb, ra
        self.parent[rb] = ra
        self.size[ra] += self.size[rb]
        self.history.append((ra, rb))
        return self.size[ra]

    def undo(self):
        ra, rb = self.history.pop()
        self.parent[rb] = rb
        self.size[ra] -= self.size[rb]


def max_rainbow_tree(cg: ColoredGraphSmall) -> tuple[int, list[int]]:
    """Largest rainbow tree, as ``(vertex count, edge ids)``.

    Depth-first include/exclude over the edges, keeping the chosen set acyclic
    (rollback union-find) and color-injective.  A tree inside a rainbow forest
    is itself a rainbow tree, so tracking the largest forest component is
    enough.  Branches that cannot beat the incumbent even if every remaining
    edge of an unused color joined one tree are cut.
    """
    g = cg.graph
    if g.n == 0:
        return 0, []
    edges = [(int(a), int(b)) for a, b in g.edges]
    cols = [int(x) for x in cg.colors]
    m = len(edges)
    # suffix_colors[i] = colors available among edges i..m-1
    suffix = [frozenset()] * (m + 1)
    for i in range(m - 1, -1, -1):
        suffix[i] = suffix[i + 1] | {cols[i]}

    dsu = _RollbackDSU(g.n)
    used: set[int] = set()
    chosen: list[int] = []
    best = [1, []]

    def record():
        sizes = {}
        for v in range(g.n):
            r = dsu.find(v)
            sizes[r] = sizes.get(r, 0) + 1
        top = max(sizes, key=lambda r: (sizes[r], -r))
        best[0] = sizes[top]
        best[1] = [e for e in chosen if dsu.find(edges[e][0]) == top]

    def dfs(i, largest):
        if largest > best[0]:
            record()
        if i == m or best[0] >= g.n:
            return
        avail = len(suffix[i] - used)
        if len(chosen) + 1 + avail <= best[0]:
            return
        a, b = edges[i]
        if cols[i] not in used and a != b:
            merged = dsu.union(a, b)
            if merged is not None:
                used.add(cols[i])
                chosen.append(i)
                dfs(i + 1, max(largest, merged))
                chosen.pop()
                used.discard(cols[i])
                dsu.undo()
        dfs(i + 1, largest)

    dfs(0, 1)
    return best[0], sorted(best[1])


def is_rainbow_tree(g: Graph, colors, edge_ids) -> bool:
    """Independent check: edges are color-distinct, acyclic and connected."""
    edge_ids = list(edge_ids)
    if not edge_ids:
        return True
    col = [int(colors[e]) for e in edge_ids]
    if len(set(col)) != len(col):
        return False
    verts = {int(x) for e in edge_ids for x in g.edges[e]}
    if len(verts) != len(edge_ids) + 1:
        return False
    sub = Graph(g.n, g.edges[edge_ids])
    comp = connected_components(sub)
    return len({int(comp.labels[v]) for v in verts}) == 1


def _component_ordering(g: Graph):
    comp = connected_components(g)
    try:
        cm = core_mantle_decompose(g, comp, comp.giant)
        return cm, order_edges(g, cm)
    except EmptyCore:
        return None, edge_id_ordering(comp.edge_ids(g, comp.giant))


def process_vs_oracle(cg: ColoredGraphSmall, trials: int, rng) -> dict:
    """Run the process repeatedly and compare with the exhaustive maximum.

    Run 0 uses ``cg``'s own colors as the draws; later runs draw fresh colors
    from ``[cg.c]``.  Each run is compared with the oracle evaluated on the
    giant component's edges under that run's drawn colors.
    """
    g = cg.graph
    gen = as_generator(rng)
    cm, ordering = _component_ordering(g)
    order = ordering.edge_ids
    sub_ids = np.sort(order)
    runs = []
    for t in range(trials):
        draws = cg.colors[order] if t == 0 else gen.integers(0, cg.c, size=len(order))
        coloring, _ = run_process(g, cm, ordering, cg.c, colors=draws)
        _, size = rainbow_giant(g, coloring)
        sub = Graph(g.n, g.edges[sub_ids])
        best, witness = max_rainbow_tree(ColoredGraphSmall(sub, coloring.colors[sub_ids], cg.c))
        runs.append({"process": size, "oracle": best, "all_kept": bool(coloring.kept[order].all())})
    gaps = [r["oracle"] - r["process"] for r in runs]
    return {
        "runs": runs,
        "violations": sum(1 for x in gaps if x < 0),
        "equalities": sum(1 for x in gaps if x == 0),
        "gaps": gaps,
    }


def random_small_graph(n: int, m: int, rng) -> Graph:
    """Simple graph with ``n`` vertices and ``m`` distinct random edges."""
    gen = as_generator(rng)
    pairs = [(a, b) for b in range(n) for a in range(b)]
    pick = gen.choice(len(pairs), size=min(m, len(pairs)), replace=False)
    return Graph(n, np.array([pairs[i] for i in sorted(pick)], dtype=np.int64).reshape(-1, 2))


def random_small_tree(n: int, rng) -> Graph:
    """Random recursive tree: vertex v attaches to a uniform earlier vertex."""
    gen = as_generator(rng)
    parents = [int(gen.integers(0, v)) for v in range(1, n)]
    return Graph(n, np.array([(p, v) for v, p in enumerate(parents, start=1)], dtype=np.int64).reshape(-1, 2))
