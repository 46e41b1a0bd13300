"""Exact shortest paths: verification oracle and the stretch-1 base oracle."""
from __future__ import annotations

import numpy as np

from . import kernels
from .graph import Delete, DynamicGraph, Insert


def sssp(g: DynamicGraph, source: int) -> np.ndarray:
    """Distances from ``source``; unreachable vertices get ``g.sentinel``."""
    g.check_vertex(source)
    ip, ix, wt = g.csr()
    inf = g.sentinel
    return kernels.sssp(ip, ix, wt, source, inf - 1, inf)


def apsp(g: DynamicGraph) -> np.ndarray:
    ip, ix, wt = g.csr()
    return kernels.apsp(ip, ix, wt, g.sentinel)


class ExactOracle:
    """Fully dynamic oracle with stretch 1.

    Recomputes all pairs lazily: updates only mark the matrix stale, the next
    query rebuilds it.
    """

    stretch = 1.0
    declared_stretch = 1.0

    def __init__(self, n: int, max_weight: int | None = None, seed: int = 0):
        self.graph = DynamicGraph(n, max_weight)
        self._matrix = None
        self.updates = 0
        self.rebuilds = 0

    @property
    def n(self):
        return self.graph.n

    @property
    def sentinel(self):
        return self.graph.sentinel

    def insert(self, u, v, w):
        self.graph.insert(u, v, w)
        self._matrix = None
        self.updates += 1

    def delete(self, u, v):
        self.graph.delete(u, v)
        self._matrix = None
        self.updates += 1

    def query(self, s, t):
        self.graph.check_vertex(s)
        self.graph.check_vertex(t)
        if s == t:
            return 0
        if self._matrix is None:
            self._matrix = apsp(self.graph)
            self.rebuilds += 1
        return int(self._matrix[s, t])

    def metrics(self):
        return {"phases": 0, "h_edges_max": 0, "recourse_total": 0}


def b0_update(state: ExactOracle, e) -> None:
    if isinstance(e, Insert):
        state.insert(e.u, e.v, e.w)
    elif isinstance(e, Delete):
        state.delete(e.u, e.v)


def b0_query(state: ExactOracle, s: int, t: int) -> int:
    return state.query(s, t)


def b0_factory(n, max_weight, seed=0):
    return ExactOracle(n, max_weight, seed)
