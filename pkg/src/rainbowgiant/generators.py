"""Random graph models: G(n, p), G(n, m) and the kernel/core/mantle giant model.

The kernel model builds the giant component of G(n, (1+eps)/n) bottom-up:
a random multigraph of minimum degree 3, each edge subdivided into a path,
and a Poisson(mu) Galton-Watson tree hung from every vertex of the result.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import TextIO

import numpy as np

from .distributions import DomainError, as_generator, sample_pgw_forest, solve_mu
from .graph import Graph


class KernelEmpty(RuntimeError):
    """No vertex drew degree >= 3, so the kernel multigraph has no vertices."""


def _pair_from_index(k: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Inverse of ``k = v*(v-1)/2 + u`` for ``0 <= u < v``."""
    v = np.floor((1.0 + np.sqrt(1.0 + 8.0 * k.astype(np.float64))) / 2.0).astype(np.int64)
    # float sqrt can be off by one for very large k
    v -= (v * (v - 1) // 2) > k
    v += ((v + 1) * v // 2) <= k
    u = k - v * (v - 1) // 2
    return u, v


def gnp(n: int, p: float, rng) -> Graph:
    """Erdos-Renyi G(n, p) by geometric skipping over the C(n, 2) pair indices.

    Expected time is O(n + m) rather than O(n^2).
    """
    if n < 1:
        raise DomainError("n must be >= 1")
    if not 0.0 <= p <= 1.0:
        raise DomainError(f"p must lie in [0, 1], got {p}")
    total = n * (n - 1) // 2
    if p == 0.0 or total == 0:
        return Graph(n, np.empty((0, 2), dtype=np.int64))
    gen = as_generator(rng)
    chunks = []
    pos = -1
    batch = int(total * p + 6.0 * math.sqrt(total * p) + 64)
    while True:
        skips = gen.geometric(p, size=batch)
        idx = pos + np.cumsum(skips)
        chunks.append(idx[idx < total])
        if idx[-1] >= total:
            break
        pos = int(idx[-1])
        batch = max(64, int((total - pos) * p * 1.1) + 64)
    k = np.concatenate(chunks)
    u, v = _pair_from_index(k)
    return Graph(n, np.column_stack([u, v]))


def gnm(n: int, m: int, rng) -> Graph:
    """Uniform G(n, m): partial Fisher-Yates over the pair indices.

    The swap table is kept sparse so memory is O(m), not O(n^2).
    """
    total = n * (n - 1) // 2
    if m < 0 or m > total:
        raise DomainError(f"m must lie in [0, {total}], got {m}")
    gen = as_generator(rng)
    draws = gen.integers(np.arange(m, dtype=np.int64), total) if m else np.empty(0, np.int64)
    swapped: dict[int, int] = {}
    picked = np.empty(m, dtype=np.int64)
    for i in range(m):
        j = int(draws[i])
        picked[i] = swapped.get(j, j)
        swapped[j] = swapped.get(i, i)
    u, v = _pair_from_index(picked)
    return Graph(n, np.column_stack([u, v]))


def gnp_supercritical(n: int, epsilon: float, rng) -> Graph:
    return gnp(n, (1.0 + epsilon) / n, rng)


def gnm_supercritical(n: int, epsilon: float, rng) -> Graph:
    return gnm(n, int(round((1.0 + epsilon) * n / 2.0)), rng)


@dataclass(frozen=True, eq=False)
class DlpGraph:
    """Output of :func:`dlp_generate` with its ground-truth structure.

    Vertex ids are laid out as kernel vertices, then path-subdivision
    vertices, then tree vertices; core edges precede tree edges.

    Attributes
    ----------
    kernel_vertices, core_vertices, core_edges : sorted id arrays.
    tree_root : per vertex, the core vertex whose tree it belongs to
        (core vertices are their own roots).
    kernel_edges : endpoints of the kernel multigraph (kernel vertex ids).
    path_lengths : subdivided length of each kernel edge.
    lambda_drawn : realised Gaussian rate.
    degrees_drawn : the accepted Poisson degree vector, one entry per u in [n].
    """

    graph: Graph
    n: int
    epsilon: float
    mu: float
    lambda_drawn: float
    degrees_drawn: np.ndarray
    kernel_vertices: np.ndarray
    kernel_edges: np.ndarray
    path_lengths: np.ndarray
    core_vertices: np.ndarray
    core_edges: np.ndarray
    tree_root: np.ndarray

    def roles(self) -> np.ndarray:
        r = np.full(self.graph.n, "mantle", dtype=object)
        r[self.core_vertices] = "core"
        r[self.kernel_vertices] = "kernel"
        return r


def _draw_degrees(n: int, lam_mean: float, gen: np.random.Generator):
    sd = 1.0 / math.sqrt(n)
    while True:
        lam = gen.normal(lam_mean, sd)
        if lam > 0.0:
            break
    while True:
        d = gen.poisson(lam, size=n)
        if d[d >= 3].sum() % 2 == 0:
            return lam, d


def _subdivide(kernel_edges: np.ndarray, lengths: np.ndarray, first_new: int):
    """Replace kernel edge i by a path with ``lengths[i]`` edges.

    Returns the core edge array and the number of new vertices used.
    """
    k = len(kernel_edges)
    slots = lengths + 1
    starts = np.concatenate([[0], np.cumsum(slots)[:-1]])
    total = int(slots.sum())
    nodes = np.empty(total, dtype=np.int64)
    interior = np.ones(total, dtype=bool)
    interior[starts] = False
    interior[starts + lengths] = False
    n_new = int(interior.sum())
    nodes[interior] = np.arange(first_new, first_new + n_new)
    nodes[starts] = kernel_edges[:, 0]
    nodes[starts + lengths] = kernel_edges[:, 1]
    # consecutive slot pairs within one path
    keep = np.ones(total - 1, dtype=bool) if total else np.zeros(0, dtype=bool)
    if k:
        keep[(starts + lengths)[:-1]] = False
    edges = np.column_stack([nodes[:-1][keep], nodes[1:][keep]])
    return edges, n_new


def dlp_generate(n: int, epsilon: float, rng) -> DlpGraph:
    """Sample the kernel/path/tree model of the supercritical giant.

    1. Draw a rate ``Lambda ~ Normal(1+eps-mu, variance 1/n)`` (redrawn while
       non-positive) and degrees ``D_u ~ Poisson(Lambda)`` for u in [n],
       redrawing the whole vector until the degree-3+ total is even.  Pair
       the half-edges of vertices with ``D_u >= 3`` uniformly at random.
    2. Replace each kernel edge by a path of Geometric(1-mu) length (>= 1).
    3. Hang an independent Poisson(mu) Galton-Watson tree from each core vertex.

    Only the giant-component surrogate is produced; the ambient small
    components of G(n, p) are not.
    """
    if n < 1000:
        raise DomainError("n must be >= 1000 for the kernel to be non-trivial")
    if not 0.0 < epsilon < 0.5:
        raise DomainError(f"epsilon must lie in (0, 0.5), got {epsilon}")
    gen = as_generator(rng)
    mu = solve_mu(epsilon).mu

    lam, d = _draw_degrees(n, 1.0 + epsilon - mu, gen)
    kernel_u = np.flatnonzero(d >= 3)
    if kernel_u.size == 0:
        raise KernelEmpty(f"no vertex of degree >= 3 (n={n}, eps={epsilon})")
    kdeg = d[kernel_u]
    n_kernel = kernel_u.size
    stubs = np.repeat(np.arange(n_kernel, dtype=np.int64), kdeg)
    stubs = stubs[gen.permutation(stubs.size)]
    kernel_edges = stubs.reshape(-1, 2)

    lengths = gen.geometric(1.0 - mu, size=len(kernel_edges)).astype(np.int64)
    core_edges_uv, n_sub = _subdivide(kernel_edges, lengths, n_kernel)
    n_core = n_kernel + n_sub

    forest = sample_pgw_forest(mu, n_core, gen)
    n_total = forest.parent.size
    child = np.arange(n_core, n_total, dtype=np.int64)
    tree_edges = np.column_stack([forest.parent[n_core:], child])

    edges = np.concatenate([core_edges_uv, tree_edges]) if len(tree_edges) else core_edges_uv
    g = Graph(n_total, edges)
    return DlpGraph(
        graph=g,
        n=n,
        epsilon=float(epsilon),
        mu=mu,
        lambda_drawn=float(lam),
        degrees_drawn=d,
        kernel_vertices=np.arange(n_kernel, dtype=np.int64),
        kernel_edges=kernel_edges,
        path_lengths=lengths,
        core_vertices=np.arange(n_core, dtype=np.int64),
        core_edges=np.arange(len(core_edges_uv), dtype=np.int64),
        tree_root=forest.tree,
    )


def write_labels(dg: DlpGraph, fh: TextIO) -> None:
    """Sidecar with one ``vertex role`` line per vertex."""
    for v, role in enumerate(dg.roles()):
        fh.write(f"{v} {role}\n")


def read_labels(fh: TextIO) -> dict[int, str]:
    out = {}
    for ln in fh:
        if ln.strip():
            v, role = ln.split()
            if role not in ("kernel", "core", "mantle"):
                raise ValueError(f"unknown role {role!r}")
            out[int(v)] = role
    return out
