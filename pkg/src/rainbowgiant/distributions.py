"""Branching-process distributions and seeded random streams.

Contents: the supercritical/subcritical dual parameter ``mu`` solving
``mu*exp(-mu) = (1+eps)*exp(-(1+eps))``, the Borel law of Poisson
Galton-Watson total progeny, and samplers for Poisson, geometric and PGW
trees.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.special import gammaln


class DomainError(ValueError):
    pass


class InvalidMu(RuntimeError):
    """A PGW tree exceeded the vertex guard; ``mu`` is almost surely >= 1."""


PGW_VERTEX_GUARD = 10**8


class RngStream:
    """Deterministic random stream identified by ``(seed, index)``.

    Streams with different indices are statistically independent; the same
    pair always yields the same sequence (PCG64 is platform independent).
    """

    def __init__(self, seed: int, index: int = 0):
        self.seed = int(seed)
        self.index = int(index)
        ss = np.random.SeedSequence(self.seed, spawn_key=(self.index,))
        self.gen = np.random.Generator(np.random.PCG64(ss))

    def __repr__(self):
        return f"RngStream(seed={self.seed}, index={self.index})"


def as_generator(rng) -> np.random.Generator:
    if isinstance(rng, RngStream):
        return rng.gen
    if isinstance(rng, np.random.Generator):
        return rng
    raise TypeError(f"expected RngStream or numpy Generator, got {type(rng).__name__}")


# -- the mu equation ---------------------------------------------------------

@dataclass(frozen=True)
class MuSolution:
    epsilon: float
    mu: float
    residual: float


def _mu_equation(mu: float, eps: float) -> float:
    c = 1.0 + eps
    return mu * math.exp(-mu) - c * math.exp(-c)


def solve_mu(epsilon: float) -> MuSolution:
    """Root in (0, 1) of ``mu*exp(-mu) = (1+eps)*exp(-(1+eps))`` by bisection.

    ``mu*exp(-mu)`` is strictly increasing on (0, 1), so the bracket always
    holds a single sign change.
    """
    if not 0.0 < epsilon < 1.0:
        raise DomainError(f"epsilon must lie in (0, 1), got {epsilon}")
    lo, hi = 0.0, 1.0
    for _ in range(200):
        mid = 0.5 * (lo + hi)
        if mid in (lo, hi):
            break
        if _mu_equation(mid, epsilon) < 0.0:
            lo = mid
        else:
            hi = mid
    # pick the endpoint with the smaller residual
    mu = min((lo, hi), key=lambda x: abs(_mu_equation(x, epsilon)))
    if mu <= 0.0 or mu >= 1.0:
        mu = lo if 0.0 < lo < 1.0 else hi
    return MuSolution(float(epsilon), mu, abs(_mu_equation(mu, epsilon)))


# -- Borel law ---------------------------------------------------------------

def _check_mu(mu):
    if not 0.0 < mu < 1.0:
        raise DomainError(f"mu must lie in (0, 1), got {mu}")


def borel_logpmf(mu: float, k):
    _check_mu(mu)
    k = np.asarray(k)
    if np.any(k < 1):
        raise DomainError("Borel support is k >= 1")
    kf = k.astype(np.float64)
    out = -mu * kf + (kf - 1.0) * np.log(mu * kf) - gammaln(kf + 1.0)
    return out if out.ndim else float(out)


def borel_pmf(mu: float, k):
    """``exp(-mu*k) * (mu*k)**(k-1) / k!``, evaluated in log space."""
    out = np.exp(borel_logpmf(mu, k))
    return out if np.ndim(out) else float(out)


def _borel_pmf_table(mu: float, kmin: int, tol: float = 1e-300):
    """pmf on [1, K] with K large enough that the neglected mass is below tol
    (relative to the smallest tail we will need), plus a bound on that mass."""
    r = mu * math.exp(1.0 - mu)  # pmf(k+1)/pmf(k) < r for every k
    K = max(2 * kmin, 1024)
    while True:
        ks = np.arange(1, K + 1)
        p = borel_pmf(mu, ks)
        rest = p[-1] * r / (1.0 - r)
        if rest <= tol or rest <= 1e-17 * p[kmin:].sum():
            return p, rest
        K *= 2


def borel_tail(mu: float, j):
    """``P(X > j)`` for ``X ~ Borel(mu)``.

    Summed forward from ``j+1`` (not as ``1 - cdf``) so deep tails keep their
    relative precision.  The truncated remainder is bounded geometrically and
    added, so the value never underestimates the true tail by more than
    rounding.
    """
    _check_mu(mu)
    j_arr = np.asarray(j)
    if np.any(j_arr < 1):
        raise DomainError("j must be a positive integer")
    jmax = int(j_arr.max())
    p, rest = _borel_pmf_table(mu, jmax)
    # tails[t] = sum_{k > t} p_k for t = 0..K
    tails = np.concatenate([np.cumsum(p[::-1])[::-1], [0.0]]) + rest
    out = tails[j_arr]
    return out if out.ndim else float(out)


def borel_tail_bound(mu: float, j):
    """``1 / (sqrt(j) * mu)``, the square-root tail bound."""
    return 1.0 / (np.sqrt(np.asarray(j, dtype=np.float64)) * mu)


def borel_mean(mu: float) -> float:
    return 1.0 / (1.0 - mu)


# -- elementary samplers -----------------------------------------------------

def sample_poisson(lam: float, rng, size=None):
    if not lam >= 0.0:
        raise DomainError(f"Poisson rate must be >= 0, got {lam}")
    return as_generator(rng).poisson(lam, size=size)


def sample_geometric(p_success: float, rng, size=None):
    """Trials until first success; support {1, 2, ...}, mean ``1/p_success``."""
    if not 0.0 < p_success <= 1.0:
        raise DomainError(f"success probability must lie in (0, 1], got {p_success}")
    return as_generator(rng).geometric(p_success, size=size)


# -- Poisson Galton-Watson trees ---------------------------------------------

@dataclass(frozen=True, eq=False)
class PgwTree:
    """Parent array (root is 0 with parent -1) and level of every vertex."""

    parent: np.ndarray
    level: np.ndarray

    @property
    def size(self) -> int:
        return int(self.parent.shape[0])


@dataclass(frozen=True, eq=False)
class PgwForest:
    """Independent PGW trees grown together.

    Vertices ``0..roots-1`` are the roots; ``tree[v]`` is the root of ``v``.
    """

    parent: np.ndarray
    level: np.ndarray
    tree: np.ndarray
    roots: int

    def sizes(self) -> np.ndarray:
        return np.bincount(self.tree, minlength=self.roots)


def sample_pgw_forest(mu: float, roots: int, rng, max_vertices: int = PGW_VERTEX_GUARD) -> PgwForest:
    """Grow ``roots`` independent Poisson(mu) Galton-Watson trees level by level.

    Each vertex of the current level independently receives Poisson(mu)
    children on the next level; growth stops at the first empty level.
    """
    if mu < 0.0:
        raise DomainError(f"mu must be >= 0, got {mu}")
    gen = as_generator(rng)
    parents = [np.full(roots, -1, dtype=np.int64)]
    levels = [np.zeros(roots, dtype=np.int64)]
    trees = [np.arange(roots, dtype=np.int64)]
    frontier = np.arange(roots, dtype=np.int64)
    frontier_tree = frontier
    total, depth = roots, 0
    while frontier.size:
        kids = gen.poisson(mu, size=frontier.size)
        n_new = int(kids.sum())
        if total + n_new > max_vertices:
            raise InvalidMu(f"PGW growth passed {max_vertices} vertices (mu={mu})")
        par = np.repeat(frontier, kids)
        depth += 1
        parents.append(par)
        levels.append(np.full(n_new, depth, dtype=np.int64))
        frontier_tree = np.repeat(frontier_tree, kids)
        trees.append(frontier_tree)
        frontier = np.arange(total, total + n_new, dtype=np.int64)
        total += n_new
    return PgwForest(
        parent=np.concatenate(parents),
        level=np.concatenate(levels),
        tree=np.concatenate(trees),
        roots=roots,
    )


def sample_pgw_tree(mu: float, rng, max_vertices: int = PGW_VERTEX_GUARD) -> PgwTree:
    """A single mu-PGW tree; its vertex count is Borel(mu) distributed."""
    f = sample_pgw_forest(mu, 1, rng, max_vertices)
    return PgwTree(parent=f.parent, level=f.level)


def sample_borel(mu: float, size: int, rng) -> np.ndarray:
    """Borel(mu) variates as total progeny of simulated PGW trees."""
    return sample_pgw_forest(mu, size, rng).sizes()
