"""Sequential rainbow coloring of a giant component.

Edges are visited core first, then mantle edges by decreasing ``desc``.  Each
edge draws a uniform color from ``[c]`` and is deleted if an earlier kept edge
already carries that color, so the kept edges are rainbow by construction.
"""

from __future__ import annotations

import math
from collections import deque
from dataclasses import dataclass
from typing import TextIO

import numpy as np

from .distributions import as_generator
from .graph import CoreMantle, Graph, connected_components


class NotConnected(ValueError):
    pass


def color_count(alpha: float, n: int) -> int:
    """``ceil(alpha * n)``; the ceiling is kept, not dropped."""
    if alpha <= 0:
        raise ValueError("alpha must be positive")
    return max(1, math.ceil(alpha * n - 1e-9))


def prefix_length(epsilon: float, n: int) -> int:
    """``floor(5 eps^2 n)``: steps before this are excluded from the loss sum."""
    return int(math.floor(5.0 * epsilon * epsilon * n + 1e-9))


@dataclass(frozen=True, eq=False)
class EdgeOrdering:
    edge_ids: np.ndarray
    n_core: int

    def __len__(self):
        return int(self.edge_ids.shape[0])


def order_edges(g: Graph, cm: CoreMantle) -> EdgeOrdering:
    """Core edges by ``(min end, max end, id)``, then mantle edges by ``(-desc, id)``."""
    ce = np.asarray(cm.core_edges)
    lo = np.minimum(g.edges[ce, 0], g.edges[ce, 1])
    hi = np.maximum(g.edges[ce, 0], g.edges[ce, 1])
    core_sorted = ce[np.lexsort((ce, hi, lo))]
    me = np.asarray(cm.mantle_edges)
    mantle_sorted = me[np.lexsort((me, -cm.desc[me]))]
    return EdgeOrdering(np.concatenate([core_sorted, mantle_sorted]), len(ce))


def edge_id_ordering(edge_ids) -> EdgeOrdering:
    """Plain id order; used when there is no core to order by."""
    return EdgeOrdering(np.sort(np.asarray(edge_ids, dtype=np.int64)), 0)


@dataclass(frozen=True, eq=False)
class EdgeColoring:
    """Drawn color per edge id (``-1`` if unprocessed) and the kept mask.

    Deleted edges still remember the color they drew.
    """

    colors: np.ndarray
    kept: np.ndarray
    processed: np.ndarray
    c: int

    @property
    def retained_edges(self) -> np.ndarray:
        return np.flatnonzero(self.kept)

    @property
    def deleted_edges(self) -> np.ndarray:
        return np.flatnonzero(self.processed & ~self.kept)

    def is_rainbow(self) -> bool:
        col = self.colors[self.kept]
        return len(np.unique(col)) == len(col)

    def output_colors(self) -> np.ndarray:
        """Per edge: its color if kept, else -1 (the colored edge-list convention)."""
        return np.where(self.kept, self.colors, -1)


@dataclass(frozen=True, eq=False)
class ProcessTrace:
    """Step-by-step record; arrays are indexed by step ``i - 1``.

    ``desc`` is the original-graph descendant count of the edge (0 for core
    edges) and ``x[i] = desc`` if the edge was deleted, else 0.  ``s`` sums
    ``x`` over steps strictly after ``prefix``.
    """

    edge_id: np.ndarray
    color: np.ndarray
    kept: np.ndarray
    desc: np.ndarray
    x: np.ndarray
    cum_deleted: np.ndarray
    cum_x: np.ndarray
    prefix: int
    s: int

    @property
    def steps(self) -> int:
        return int(self.edge_id.shape[0])

    @property
    def deletions(self) -> int:
        return int(self.steps - self.kept.sum())


def first_occurrence(colors: np.ndarray) -> np.ndarray:
    """Mask of entries whose value does not appear earlier in the sequence."""
    kept = np.zeros(colors.shape[0], dtype=bool)
    if colors.size:
        _, idx = np.unique(colors, return_index=True)
        kept[idx] = True
    return kept


def run_process(
    g: Graph,
    cm: CoreMantle | None,
    ordering: EdgeOrdering,
    c: int,
    rng=None,
    *,
    prefix: int = 0,
    colors=None,
) -> tuple[EdgeColoring, ProcessTrace]:
    """Color the edges of ``ordering`` one by one, deleting repeated colors.

    A color is "used" once some earlier edge kept it.  Since a deleted edge
    only ever draws an already-used color, an edge is kept exactly when its
    color is the first occurrence in the drawn sequence.

    Parameters
    ----------
    cm : decomposition supplying ``desc``; may be None for core-less graphs.
    c : number of colors.
    prefix : steps ``1..prefix`` are excluded from ``s``.
    colors : optional pre-drawn colors, one per step (replaces ``rng``).
    """
    if c < 1:
        raise ValueError("need at least one color")
    order = ordering.edge_ids
    if colors is None:
        drawn = as_generator(rng).integers(0, c, size=len(order))
    else:
        drawn = np.asarray(colors, dtype=np.int64)
        if drawn.shape != order.shape or (drawn.size and (drawn.min() < 0 or drawn.max() >= c)):
            raise ValueError("pre-drawn colors must be one per step, in [0, c)")
    kept_step = first_occurrence(drawn)
    desc = cm.desc[order] if cm is not None else np.zeros(len(order), dtype=np.int64)
    x = np.where(kept_step, 0, desc)
    cum_x = np.cumsum(x)
    s = int(x[prefix:].sum())

    col = np.full(g.m, -1, dtype=np.int64)
    col[order] = drawn
    kept = np.zeros(g.m, dtype=bool)
    kept[order[kept_step]] = True
    processed = np.zeros(g.m, dtype=bool)
    processed[order] = True

    coloring = EdgeColoring(col, kept, processed, int(c))
    trace = ProcessTrace(
        edge_id=order,
        color=drawn,
        kept=kept_step,
        desc=desc,
        x=x,
        cum_deleted=np.cumsum(~kept_step),
        cum_x=cum_x,
        prefix=int(prefix),
        s=s,
    )
    return coloring, trace


def rainbow_giant(g: Graph, coloring: EdgeColoring) -> tuple[np.ndarray, int]:
    """Largest component of the kept edges (ties: smallest vertex)."""
    comp = connected_components(g, coloring.retained_edges)
    verts = comp.vertices(comp.giant)
    return verts, int(verts.size)


def rainbow_spanning_tree(g: Graph, vertices, retained_edges) -> list[int]:
    """BFS spanning tree of ``vertices`` using only ``retained_edges``.

    Raises
    ------
    NotConnected
        If the retained edges do not connect ``vertices``.
    """
    vertices = np.asarray(vertices, dtype=np.int64)
    if vertices.size == 0:
        return []
    inside = np.zeros(g.n, dtype=bool)
    inside[vertices] = True
    adj: dict[int, list[tuple[int, int]]] = {}
    for e in np.asarray(retained_edges, dtype=np.int64):
        a, b = (int(x) for x in g.edges[e])
        if inside[a] and inside[b] and a != b:
            adj.setdefault(a, []).append((b, int(e)))
            adj.setdefault(b, []).append((a, int(e)))
    seen = {int(vertices[0])}
    tree = []
    queue = deque([int(vertices[0])])
    while queue:
        v = queue.popleft()
        for w, e in adj.get(v, ()):
            if w not in seen:
                seen.add(w)
                tree.append(e)
                queue.append(w)
    if len(seen) != vertices.size:
        raise NotConnected(f"retained edges reach {len(seen)} of {vertices.size} vertices")
    return tree


# -- measurements ------------------------------------------------------------

def desc_bound(epsilon: float, n: int, i) -> np.ndarray:
    """``36 (eps n / i)^2``."""
    return 36.0 * (epsilon * n / np.asarray(i, dtype=np.float64)) ** 2


def measure_desc_bound(cm: CoreMantle, ordering: EdgeOrdering, epsilon: float, n: int) -> list[dict]:
    """Steps ``i >= 5 eps^2 n`` (1-indexed) where ``e_i`` is a core edge or
    ``desc(e_i) > 36 (eps n / i)^2``.

    ``n`` is the ambient vertex count of the random graph model.
    """
    first = max(1, math.ceil(5.0 * epsilon * epsilon * n - 1e-9))
    order = ordering.edge_ids
    if first > len(order):
        return []
    steps = np.arange(first, len(order) + 1)
    eids = order[first - 1:]
    mantle = cm.child[eids] >= 0
    d = cm.desc[eids]
    bound = desc_bound(epsilon, n, steps)
    bad = ~mantle | (d > bound)
    return [
        {"i": int(i), "edge_id": int(e), "in_mantle": bool(m), "desc": int(dd), "bound": float(b)}
        for i, e, m, dd, b in zip(steps[bad], eids[bad], mantle[bad], d[bad], bound[bad])
    ]


def measure_dj(cm: CoreMantle, j: int, epsilon: float, n: int) -> tuple[int, float, bool]:
    """``D_j``, the number of mantle edges with ``desc > j``, against ``3 eps n / sqrt(j)``."""
    if j < 1:
        raise ValueError("j must be >= 1")
    dj = int((cm.desc[cm.mantle_edges] > j).sum())
    bound = 3.0 * epsilon * n / math.sqrt(j)
    return dj, bound, dj <= bound


def leaf_edges(g: Graph, cm: CoreMantle) -> np.ndarray:
    """Edges incident to a degree-1 vertex of the component."""
    deg = g.degrees(np.concatenate([cm.core_edges, cm.mantle_edges]))
    me = cm.mantle_edges
    return np.sort(me[deg[cm.child[me]] == 1])


def expected_collisions(L: int, c: int) -> float:
    """Expected deletions when coloring ``L`` edges in sequence with ``c`` colors.

    Dynamic programme on the expected number of kept edges: step ``i`` is kept
    with probability ``1 - kept/c`` and the recursion is linear in ``kept``.
    """
    kept = 0.0
    for _ in range(int(L)):
        kept += 1.0 - kept / c
    return L - kept


def leaf_loss_experiment(g: Graph, cm: CoreMantle, alpha: float, rng, n: int | None = None) -> tuple[int, int]:
    """Color the component's leaf edges in random order with ``ceil(alpha n)``
    colors and count collisions.  Returns ``(leaf count, deletions)``."""
    n = g.n if n is None else n
    leaves = leaf_edges(g, cm)
    gen = as_generator(rng)
    order = leaves[gen.permutation(leaves.size)]
    drawn = gen.integers(0, color_count(alpha, n), size=order.size)
    return int(leaves.size), int((~first_occurrence(drawn)).sum())


# -- invariant checks --------------------------------------------------------

def check_trace(trace: ProcessTrace, coloring: EdgeColoring) -> list[str]:
    """Exact per-run invariants; returns a list of failure messages."""
    bad = []
    if not coloring.is_rainbow():
        bad.append("retained colors repeat")
    if np.any(trace.x[trace.kept] != 0):
        bad.append("X_i nonzero on a kept edge")
    if np.any(trace.x > trace.desc):
        bad.append("X_i exceeds desc")
    if int(trace.x[trace.prefix:].sum()) != trace.s:
        bad.append("S does not match the trace")
    steps = np.arange(1, trace.steps + 1)
    if np.any(trace.cum_deleted + np.cumsum(trace.kept) != steps):
        bad.append("kept + deleted != processed")
    if int(coloring.processed.sum()) != trace.steps:
        bad.append("processed count mismatch")
    return bad


def ordering_is_monotone(cm: CoreMantle, ordering: EdgeOrdering) -> bool:
    order = ordering.edge_ids
    head, tail = order[:ordering.n_core], order[ordering.n_core:]
    if np.any(cm.child[head] >= 0) or np.any(cm.child[tail] < 0):
        return False
    return bool(np.all(np.diff(cm.desc[tail]) <= 0))


def disconnection_accounting(g: Graph, cm: CoreMantle, coloring: EdgeColoring, trace: ProcessTrace) -> dict:
    """Exact loss decomposition for one run.

    ``core_loss`` is what deleting only the core edges costs; the rainbow
    giant must then be at least the remaining giant minus ``sum X_i``.
    """
    comp_edges = np.concatenate([cm.core_edges, cm.mantle_edges])
    deleted = coloring.deleted_edges
    is_core = np.zeros(g.m, dtype=bool)
    is_core[cm.core_edges] = True
    del_core = deleted[is_core[deleted]]
    keep_mask = np.ones(g.m, dtype=bool)
    keep_mask[del_core] = False
    after_core = comp_edges[keep_mask[comp_edges]]
    part = connected_components(g, after_core)
    core_loss = int(cm.n_component - part.sizes[part.giant])
    _, rg = rainbow_giant(g, coloring)
    lost = int(cm.n_component - rg)
    total_x = int(trace.x.sum())
    return {
        "lost": lost,
        "core_loss": core_loss,
        "sum_x": total_x,
        "ok": lost <= total_x + core_loss,
    }


def mantle_cut_sizes(g: Graph, cm: CoreMantle, coloring: EdgeColoring) -> tuple[int, int]:
    """Vertices cut from the core by the deleted mantle edges, and the sum
    of their ``desc`` (the first never exceeds the second)."""
    is_mantle = cm.child >= 0
    deleted = coloring.deleted_edges
    dm = deleted[is_mantle[deleted]]
    keep = np.ones(g.m, dtype=bool)
    keep[dm] = False
    comp_edges = np.concatenate([cm.core_edges, cm.mantle_edges])
    part = connected_components(g, comp_edges[keep[comp_edges]])
    core_labels = np.unique(part.labels[cm.core_vertices])
    comp_v = np.flatnonzero(cm.root >= 0)
    cut = int((~np.isin(part.labels[comp_v], core_labels)).sum())
    return cut, int(cm.desc[dm].sum())


# -- text formats --------------------------------------------------------------

def write_trace_csv(trace: ProcessTrace, fh: TextIO) -> None:
    fh.write("step,edge_id,color,kept,desc,X_i\n")
    for i in range(trace.steps):
        fh.write(
            f"{i + 1},{trace.edge_id[i]},{trace.color[i]},{int(trace.kept[i])},"
            f"{trace.desc[i]},{trace.x[i]}\n"
        )


def read_trace_csv(fh: TextIO) -> list[dict]:
    import csv

    return [{k: int(v) for k, v in row.items()} for row in csv.DictReader(fh)]
