"""Static Thorup-Zwick bunches, clusters and hub-label queries."""
from __future__ import annotations

from dataclasses import dataclass
from typing import Dict, List, Optional, Tuple

import numpy as np

from . import kernels
from .errors import HierarchyResampleExhausted, OutOfRangeVertex
from .graph import DynamicGraph
from .kernels import INF_KEY

MAX_RESAMPLES = 32


@dataclass(frozen=True)
class Hierarchy:
    """Nested samples ``A_0 = V ⊇ A_1 ⊇ ... ⊇ A_k = ∅``."""

    n: int
    k: int
    levels: Tuple[frozenset, ...]
    seed: int
    attempts: int = 1

    def __post_init__(self):
        lv = [0] * self.n
        for i in range(1, self.k):
            for v in self.levels[i]:
                lv[v] = i
        object.__setattr__(self, "level_of", tuple(lv))


def _draw_levels(n: int, k: int, rng: np.random.Generator) -> List[frozenset]:
    levels = [frozenset(range(n))]
    p = n ** (-1.0 / k) if n > 0 else 1.0
    current = list(range(n))
    for _ in range(1, k):
        draws = rng.random(len(current))
        current = [v for v, x in zip(current, draws) if x < p]
        levels.append(frozenset(current))
    levels.append(frozenset())
    return levels


def sample_hierarchy(n: int, k: int, seed: int = 0) -> Hierarchy:
    """Sample each level by keeping members of the previous one with probability ``n^(-1/k)``.

    Attempt ``j`` draws from ``np.random.default_rng([seed, j])``; a hierarchy with an
    empty level below ``k`` is rejected and redrawn, at most ``MAX_RESAMPLES`` times.
    """
    if k < 1 or n < 1:
        raise ValueError("need k >= 1 and n >= 1")
    for attempt in range(MAX_RESAMPLES + 1):
        levels = _draw_levels(n, k, np.random.default_rng([seed, attempt]))
        if all(levels[i] for i in range(k)):
            return Hierarchy(n, k, tuple(levels), seed, attempt + 1)
    raise HierarchyResampleExhausted(
        f"no hierarchy with non-empty levels for n={n}, k={k} after {MAX_RESAMPLES} retries")


@dataclass
class HubLabeling:
    """Per-vertex hub sets with distance estimates.

    ``hubs[v]`` maps each hub ``u ∈ S(v)`` to ``δ(v, u)``. Missing hubs read as
    ``sentinel``. ``pivots[i][v]`` / ``pivot_dist[i][v]`` are ``-1`` / ``sentinel``
    when undefined.
    """

    n: int
    k: int
    sentinel: int
    hubs: List[Dict[int, int]]
    pivots: Optional[List[List[int]]] = None
    pivot_dist: Optional[List[List[int]]] = None

    def estimate(self, v: int, u: int) -> int:
        return self.hubs[v].get(u, self.sentinel)

    def size(self, v: int) -> int:
        return len(self.hubs[v])


class ClusterIndex:
    """Inverted bunches: ``clusters[u] = {v: dist(v, u)}`` for ``v ∈ C(u)``."""

    def __init__(self, clusters: List[Dict[int, int]]):
        self.clusters = clusters

    def __getitem__(self, u):
        return self.clusters[u]

    def members(self, u) -> set:
        return set(self.clusters[u])


def pivot_keys(csr, n: int, h: Hierarchy, limit: int) -> List[np.ndarray]:
    """Keyed distances to each level: ``keys[i][v] = dist(v, A_i) * n + p_i(v)``."""
    ip, ix, wt = csr
    keys = [np.arange(n, dtype=np.int64)]
    for i in range(1, h.k):
        keys.append(kernels.multi_source_keys(ip, ix, wt, sorted(h.levels[i]), limit, INF_KEY))
    keys.append(np.full(n, INF_KEY, dtype=np.int64))
    return keys


def thresholds(key: np.ndarray, n: int) -> np.ndarray:
    """Distance part of a key array, with ``INF_KEY`` kept for unreachable entries."""
    return np.where(key == INF_KEY, INF_KEY, key // max(n, 1))


def build_clusters(csr, n: int, h: Hierarchy, keys, limit: int) -> List[Dict[int, int]]:
    ip, ix, wt = csr
    thr = np.stack([thresholds(k, n) for k in keys])
    levels = np.asarray(h.level_of, dtype=np.int64)
    return kernels.clusters_all(ip, ix, wt, levels, limit, thr)


def assemble_labels(n: int, k: int, clusters, keys, with_pivots: bool):
    """Hub sets from clusters (inverted) plus, optionally, the pivots."""
    hubs: List[Dict[int, int]] = [dict() for _ in range(n)]
    for u, members in enumerate(clusters):
        for v, d in members.items():
            hubs[v][u] = d
    if with_pivots:
        for i in range(k):
            key = keys[i]
            for v in range(n):
                kv = int(key[v])
                if kv != INF_KEY:
                    hubs[v][kv % n] = kv // n
    return hubs


def build_labeling(g: DynamicGraph, h: Hierarchy, with_pivots: bool = True,
                   limit: int | None = None) -> Tuple[HubLabeling, ClusterIndex]:
    """Exact TZ labeling of ``g``; ``limit`` restricts every distance to ``<= limit``."""
    n = g.n
    if h.n != n:
        raise ValueError("hierarchy vertex count does not match the graph")
    lim = g.sentinel - 1 if limit is None else limit
    csr = g.csr()
    keys = pivot_keys(csr, n, h, lim)
    clusters = build_clusters(csr, n, h, keys, lim)
    hubs = assemble_labels(n, h.k, clusters, keys, with_pivots)
    sent = g.sentinel
    pivots = [[-1 if kv == INF_KEY else kv % n for kv in keys[i].tolist()] for i in range(h.k)]
    pdist = [[sent if kv == INF_KEY else kv // n for kv in keys[i].tolist()] for i in range(h.k)]
    return (HubLabeling(n, h.k, sent, hubs, pivots, pdist), ClusterIndex(clusters))


def label_query(hubs: List[Dict[int, int]], s: int, t: int, inf: int) -> int:
    """``min over common hubs x of δ(s,x) + δ(t,x)``, or ``inf`` without a common hub."""
    a, b = hubs[s], hubs[t]
    if len(a) > len(b):
        a, b = b, a
    best = inf
    for x, dx in a.items():
        dy = b.get(x)
        if dy is not None and dx + dy < best:
            best = dx + dy
    return best


def hub_query(L: HubLabeling, s: int, t: int) -> int:
    if not (0 <= s < L.n and 0 <= t < L.n):
        raise OutOfRangeVertex(f"query ({s}, {t}) outside [0, {L.n})")
    return min(label_query(L.hubs, s, t, L.sentinel), L.sentinel)


def dump_labels(L: HubLabeling) -> str:
    """Debug dump, one line per vertex: ``v | u1:d1 u2:d2 ...``."""
    lines = []
    for v in range(L.n):
        items = " ".join(f"{u}:{d}" for u, d in sorted(L.hubs[v].items()))
        lines.append(f"{v} | {items}".rstrip())
    return "\n".join(lines) + "\n"


class StaticTZOracle:
    """Rebuilds the static labeling on the first query after any update."""

    def __init__(self, n, max_weight, k, seed=0, with_pivots=True):
        self.graph = DynamicGraph(n, max_weight)
        self.k = k
        self.hierarchy = sample_hierarchy(n, k, seed)
        self.with_pivots = with_pivots
        self.stretch = float(2 * k - 1)
        self.declared_stretch = self.stretch
        self._labels = None

    @property
    def sentinel(self):
        return self.graph.sentinel

    def insert(self, u, v, w):
        self.graph.insert(u, v, w)
        self._labels = None

    def delete(self, u, v):
        self.graph.delete(u, v)
        self._labels = None

    def query(self, s, t):
        if self._labels is None:
            self._labels, _ = build_labeling(self.graph, self.hierarchy, self.with_pivots)
        return hub_query(self._labels, s, t)

    def metrics(self):
        return {"phases": 0, "h_edges_max": 0, "recourse_total": 0}
