"""Multigraphs, connected components, 2-core peeling and core/mantle decomposition.

A :class:`Graph` is a vertex count plus an ``(m, 2)`` integer array of
endpoints.  The row index of an edge is its id and is never reindexed, so
every derived object (cores, mantle forests, colorings, traces) can refer to
edges by id alone.  Self-loops and parallel edges are allowed.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from typing import Iterable, TextIO

import numpy as np
from scipy.sparse import coo_matrix
from scipy.sparse.csgraph import connected_components as _cc


class EmptyCore(ValueError):
    """Raised when a decomposition is requested for a component without a 2-core."""


def _frozen(a, dtype=np.int64) -> np.ndarray:
    a = np.array(a, dtype=dtype, copy=True)
    a.setflags(write=False)
    return a


@dataclass(frozen=True, eq=False)
class Graph:
    """Undirected multigraph on vertices ``0..n-1``.

    ``edges[e]`` holds the endpoints of edge ``e``.
    """

    n: int
    edges: np.ndarray

    def __post_init__(self):
        e = np.asarray(self.edges, dtype=np.int64).reshape(-1, 2)
        if e.size and (e.min() < 0 or e.max() >= self.n):
            raise ValueError("edge endpoint outside [0, n)")
        object.__setattr__(self, "edges", _frozen(e))

    @property
    def m(self) -> int:
        return int(self.edges.shape[0])

    def degrees(self, edge_ids=None) -> np.ndarray:
        """Degree of each vertex; a self-loop counts twice."""
        e = self.edges if edge_ids is None else self.edges[np.asarray(edge_ids, dtype=np.int64)]
        return np.bincount(e.ravel(), minlength=self.n)

    def incidence(self) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
        """CSR-style incidence lists ``(indptr, neighbor, edge_id)``.

        A self-loop appears twice in the list of its vertex.
        """
        m = self.m
        src = np.concatenate([self.edges[:, 0], self.edges[:, 1]])
        dst = np.concatenate([self.edges[:, 1], self.edges[:, 0]])
        eid = np.concatenate([np.arange(m), np.arange(m)])
        order = np.lexsort((eid, src))
        indptr = np.zeros(self.n + 1, dtype=np.int64)
        np.cumsum(np.bincount(src, minlength=self.n), out=indptr[1:])
        return indptr, dst[order], eid[order]

    def subgraph_edges(self, edge_ids) -> "Graph":
        """Same vertex set, only the given edges (ids are renumbered)."""
        return Graph(self.n, self.edges[np.asarray(edge_ids, dtype=np.int64)])


@dataclass(frozen=True, eq=False)
class ComponentPartition:
    """Component label per vertex.

    Components are numbered in order of their smallest vertex, so the
    labelling depends only on the graph.  ``giant`` is the largest component,
    ties going to the one with the smallest vertex.
    """

    labels: np.ndarray
    sizes: np.ndarray
    giant: int

    @property
    def count(self) -> int:
        return int(self.sizes.shape[0])

    def vertices(self, cid: int) -> np.ndarray:
        return np.flatnonzero(self.labels == cid)

    def edge_ids(self, g: Graph, cid: int) -> np.ndarray:
        return np.flatnonzero(self.labels[g.edges[:, 0]] == cid)


def connected_components(g: Graph, edge_ids=None) -> ComponentPartition:
    """Connected components of ``g``, optionally using only ``edge_ids``."""
    e = g.edges if edge_ids is None else g.edges[np.asarray(edge_ids, dtype=np.int64)]
    if g.n == 0:
        return ComponentPartition(_frozen([]), _frozen([]), -1)
    adj = coo_matrix(
        (np.ones(len(e), dtype=np.int8), (e[:, 0], e[:, 1])), shape=(g.n, g.n)
    ).tocsr()
    _, raw = _cc(adj, directed=True, connection="weak")
    # relabel by first appearance so ids follow smallest vertex
    _, first = np.unique(raw, return_index=True)
    rank = np.empty(len(first), dtype=np.int64)
    rank[np.argsort(first, kind="stable")] = np.arange(len(first))
    labels = rank[raw]
    sizes = np.bincount(labels)
    return ComponentPartition(_frozen(labels), _frozen(sizes), int(np.argmax(sizes)))


def _peel(g: Graph, vertices: np.ndarray, edge_ids: np.ndarray):
    """Queue-based removal of degree <= 1 vertices from the given subgraph."""
    alive_e = np.zeros(g.m, dtype=bool)
    alive_e[edge_ids] = True
    deg = g.degrees(edge_ids)
    indptr, _, inc = g.incidence()
    alive_v = np.zeros(g.n, dtype=bool)
    alive_v[vertices] = True

    queue = deque(int(v) for v in vertices if deg[v] <= 1)
    while queue:
        v = queue.popleft()
        if not alive_v[v]:
            continue
        alive_v[v] = False
        for e in inc[indptr[v]:indptr[v + 1]]:
            if not alive_e[e]:
                continue
            alive_e[e] = False
            a, b = g.edges[e]
            deg[a] -= 1
            deg[b] -= 1
            w = b if a == v else a
            if alive_v[w] and deg[w] <= 1:
                queue.append(int(w))
    core_v = np.flatnonzero(alive_v)
    core_e = np.flatnonzero(alive_e)
    return core_v, core_e


def two_core(g: Graph, comp: ComponentPartition, cid: int) -> tuple[np.ndarray, np.ndarray]:
    """2-core of component ``cid`` as sorted ``(vertex ids, edge ids)``.

    Empty arrays are returned when the component is a tree.
    """
    if not 0 <= cid < comp.count:
        raise ValueError(f"invalid component id {cid}")
    return _peel(g, comp.vertices(cid), comp.edge_ids(g, cid))


def two_core_of_graph(g: Graph) -> tuple[np.ndarray, np.ndarray]:
    """2-core of the whole graph (union over components)."""
    return _peel(g, np.arange(g.n), np.arange(g.m))


@dataclass(frozen=True, eq=False)
class CoreMantle:
    """Core/mantle split of one component.

    Arrays indexed by vertex (``parent_edge``, ``root``) or by edge
    (``desc``, ``child``) cover the whole graph; entries outside the mantle
    are ``-1`` (``desc`` uses ``0``).

    Attributes
    ----------
    parent_edge : per mantle vertex, the edge leading one step toward the core.
    root : per mantle vertex, the core vertex its tree hangs from; a core
        vertex is its own root.
    desc : per mantle edge, number of vertices cut from the core by removing it.
    child : per mantle edge, its endpoint farther from the core.
    """

    component: int
    n_component: int
    core_vertices: np.ndarray
    core_edges: np.ndarray
    mantle_edges: np.ndarray
    parent_edge: np.ndarray
    root: np.ndarray
    desc: np.ndarray
    child: np.ndarray
    bfs_order: np.ndarray = field(repr=False)

    @property
    def edge_count(self) -> int:
        return int(len(self.core_edges) + len(self.mantle_edges))

    def is_mantle(self, e: int) -> bool:
        return bool(self.child[e] >= 0)


def core_mantle_decompose(g: Graph, comp: ComponentPartition, cid: int) -> CoreMantle:
    """Split component ``cid`` into its 2-core and the forest hanging off it.

    Each mantle tree is rooted at its unique core vertex and ``desc(e)`` is
    the size of the subtree below ``e``.

    Raises
    ------
    EmptyCore
        If the component is a tree.
    """
    core_v, core_e = two_core(g, comp, cid)
    if len(core_v) == 0:
        raise EmptyCore(f"component {cid} is a tree")
    comp_e = comp.edge_ids(g, cid)
    is_core_e = np.zeros(g.m, dtype=bool)
    is_core_e[core_e] = True
    mantle_e = comp_e[~is_core_e[comp_e]]

    indptr, nbr, inc = g.incidence()
    parent_edge = np.full(g.n, -1, dtype=np.int64)
    root = np.full(g.n, -1, dtype=np.int64)
    child = np.full(g.m, -1, dtype=np.int64)
    root[core_v] = core_v

    order = []
    queue = deque(int(v) for v in core_v)
    while queue:
        v = queue.popleft()
        for k in range(indptr[v], indptr[v + 1]):
            e = inc[k]
            if is_core_e[e] or child[e] >= 0 or parent_edge[v] == e:
                continue
            w = int(nbr[k])
            parent_edge[w] = e
            root[w] = root[v]
            child[e] = w
            order.append(w)
            queue.append(w)

    order = np.asarray(order, dtype=np.int64)
    if len(order) != len(mantle_e):
        raise AssertionError("mantle edges do not form a forest rooted in the core")

    sub = np.ones(g.n, dtype=np.int64)
    desc = np.zeros(g.m, dtype=np.int64)
    pe = parent_edge
    ed = g.edges
    for w in order[::-1]:
        e = pe[w]
        desc[e] = sub[w]
        a, b = ed[e]
        sub[a if b == w else b] += sub[w]

    return CoreMantle(
        component=cid,
        n_component=int(comp.sizes[cid]),
        core_vertices=_frozen(core_v),
        core_edges=_frozen(core_e),
        mantle_edges=_frozen(np.sort(mantle_e)),
        parent_edge=_frozen(parent_edge),
        root=_frozen(root),
        desc=_frozen(desc),
        child=_frozen(child),
        bfs_order=_frozen(order),
    )


def giant_decomposition(g: Graph) -> tuple[ComponentPartition, CoreMantle]:
    """Components of ``g`` and the core/mantle split of its largest component."""
    comp = connected_components(g)
    return comp, core_mantle_decompose(g, comp, comp.giant)


# -- edge-list text format -------------------------------------------------

def write_edge_list(g: Graph, fh: TextIO, colors: Iterable[int] | None = None) -> None:
    """Write ``n <count>`` then one ``u v`` (or ``u v color``) line per edge."""
    fh.write(f"n {g.n}\n")
    if colors is None:
        for u, v in g.edges:
            fh.write(f"{u} {v}\n")
    else:
        for (u, v), c in zip(g.edges, colors):
            fh.write(f"{u} {v} {int(c)}\n")


def read_edge_list(fh: TextIO) -> tuple[Graph, np.ndarray | None]:
    """Parse the edge-list format; returns the graph and colors if present."""
    lines = [ln.split() for ln in fh if ln.strip() and not ln.lstrip().startswith("#")]
    if not lines or lines[0][0] != "n" or len(lines[0]) != 2:
        raise ValueError("edge list must start with 'n <count>'")
    n = int(lines[0][1])
    rows = lines[1:]
    width = {len(r) for r in rows}
    if width - {2, 3} or len(width) > 1:
        raise ValueError("edge lines must all be 'u v' or all 'u v color'")
    arr = np.array(rows, dtype=np.int64).reshape(-1, width.pop() if width else 2)
    colors = arr[:, 2].copy() if arr.shape[1] == 3 else None
    return Graph(n, arr[:, :2]), colors
