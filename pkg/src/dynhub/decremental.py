"""Decremental approximate hub labeling with explicit change reporting.

A :class:`BoundedTZ` keeps Thorup-Zwick pivots and clusters of one graph
restricted to distances ``<= limit``. Pivot distances per level live in a
keyed shortest-path forest repaired in place after each deletion (vertices
that lose every tight parent are re-settled from the rest of the forest).
A cluster is rebuilt when the deleted edge was tight inside it, or when a
raised pivot distance next to one of its members may let new vertices in;
every other cluster is provably unchanged.

:class:`DecrementalHubLabeling` stacks one such instance per weight scale
(or a single unscaled one in plain mode) and exposes the union of their hub
sets, with the minimum rescaled estimate per hub.
"""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from typing import Dict, Iterable, List, Optional, Tuple

from . import kernels
from .errors import HubCapExceeded, MissingDelete, OutOfRangeVertex, UnsupportedUpdate
from .graph import DynamicGraph
from .kernels import INF_KEY
from .tz import Hierarchy, build_clusters, label_query, pivot_keys, sample_hierarchy, thresholds


@dataclass(frozen=True)
class DecrementalConfig:
    k: int = 2
    d: Optional[int] = None
    epsilon: float = 0.25
    seed: int = 0
    scaled_mode: bool = True
    hop_budget: Optional[int] = None
    with_pivots: bool = True
    hub_cap: Optional[int] = None

    def validate(self):
        if self.k < 1:
            raise ValueError("k must be >= 1")
        if not (0.0 < self.epsilon < 0.5):
            raise ValueError("epsilon must lie in (0, 1/2)")
        if not self.scaled_mode and (self.d is None or self.d < 1):
            raise ValueError("plain mode needs a distance bound d >= 1")
        if self.hop_budget is not None and self.hop_budget < 1:
            raise ValueError("hop_budget must be >= 1")

    @property
    def stretch(self) -> float:
        if self.scaled_mode:
            return (2 * self.k - 1) * (1 + self.epsilon)
        return float(2 * self.k - 1)


class ChangeKind(str, enum.Enum):
    UPDATED = "Updated"
    LEFT = "Left"
    ENTERED = "Entered"


@dataclass(frozen=True)
class ChangeRecord:
    vertex: int
    hub: int
    kind: ChangeKind
    new_estimate: int
    time: int

    def line(self) -> str:
        return f"{self.time} {self.vertex} {self.hub} {self.kind.value} {self.new_estimate}"


class RecourseLog:
    """Running change counts ``X(v)``."""

    def __init__(self, n: int):
        self.per_vertex = [0] * n
        self.total = 0

    def add(self, records: Iterable[ChangeRecord]):
        for r in records:
            self.per_vertex[r.vertex] += 1
            self.total += 1

    def max(self) -> int:
        return max(self.per_vertex, default=0)

    def mean(self) -> float:
        return self.total / len(self.per_vertex) if self.per_vertex else 0.0


def dump_changes(records: Iterable[ChangeRecord]) -> str:
    return "".join(r.line() + "\n" for r in records)


def apply_changes(labels: List[Dict[int, int]], records: Iterable[ChangeRecord]):
    """Replay change records onto a copy of ``labels``."""
    out = [dict(x) for x in labels]
    for r in records:
        if r.kind is ChangeKind.LEFT:
            del out[r.vertex][r.hub]
        else:
            out[r.vertex][r.hub] = r.new_estimate
    return out


class BoundedTZ:
    """Decremental TZ pivots and clusters of one graph, up to distance ``limit``."""

    def __init__(self, g: DynamicGraph, h: Hierarchy, limit: int):
        self.graph = g
        self.h = h
        self.n = g.n
        self.limit = limit
        csr = g.csr()
        self.keys = pivot_keys(csr, self.n, h, limit)
        self.clusters = build_clusters(csr, self.n, h, self.keys, limit)
        self.bunch: List[Dict[int, int]] = [dict() for _ in range(self.n)]
        for u, members in enumerate(self.clusters):
            for v, d in members.items():
                self.bunch[v][u] = d

    def label(self, v: int, with_pivots: bool = True) -> Dict[int, int]:
        out = dict(self.bunch[v])
        if with_pivots:
            n = self.n
            for i in range(self.h.k):
                kv = int(self.keys[i][v])
                if kv != INF_KEY:
                    out[kv % n] = kv // n
        return out

    def delete(self, a: int, b: int) -> set:
        """Remove ``{a, b}``; return the vertices whose bunch or pivots changed."""
        n, k, lv = self.n, self.h.k, self.h.level_of
        w = self.graph.delete(a, b)
        ip, ix, wt = self.graph.csr()
        limit_key = self.limit * n + n - 1
        touched = set()
        raised: Dict[int, List[int]] = {}
        for i in range(1, k):
            key = self.keys[i]
            before = key.copy()
            changed = kernels.delete_repair(ip, ix, wt, key, a, b, w, n, limit_key, INF_KEY)
            touched.update(changed)
            up = [z for z in changed
                  if key[z] == INF_KEY or before[z] == INF_KEY or key[z] // n > before[z] // n]
            if up:
                raised[i] = up

        affected = set()
        ba, bb = self.bunch[a], self.bunch[b]
        for u in (ba.keys() & bb.keys()):
            if abs(ba[u] - bb[u]) == w:
                affected.add(u)
        adj = self.graph.adj
        for i, zs in raised.items():
            level = i - 1
            for z in zs:
                for x in (z, *adj[z]):
                    for u in self.bunch[x]:
                        if lv[u] == level:
                            affected.add(u)

        thr_cache = {}
        for u in sorted(affected):
            i = lv[u]
            if i + 1 not in thr_cache:
                thr_cache[i + 1] = thresholds(self.keys[i + 1], n)
            new = kernels.cluster(ip, ix, wt, u, self.limit, thr_cache[i + 1])
            old = self.clusters[u]
            if new == old:
                continue
            for v in old.keys() | new.keys():
                dv = new.get(v)
                if old.get(v) != dv:
                    if dv is None:
                        del self.bunch[v][u]
                    else:
                        self.bunch[v][u] = dv
                    touched.add(v)
            self.clusters[u] = new
        return touched


def scale_plan(n: int, max_weight: int, k: int, epsilon: float, hop_budget: int):
    """``[(unit, limit), ...]``: integer rounding unit and depth bound per distance scale.

    Scale ``r`` serves distances in ``[2^r, 2^(r+1))``. Rounding every weight up to a
    multiple of ``unit <= eps * 2^r / (2 * hop_budget)`` adds at most ``eps/2`` relative
    error on paths of at most ``hop_budget`` edges; the depth bound leaves room for the
    ``k``-fold pivot detours of the TZ query. Scales sharing a unit keep the largest bound.
    """
    top = max(1, n * max_weight)
    plan: Dict[int, int] = {}
    for r in range(top.bit_length()):
        unit = max(1, math.floor(epsilon * (1 << r) / (2 * hop_budget)))
        limit = k * (-(-(1 << (r + 1)) // unit) + hop_budget)
        plan[unit] = max(plan.get(unit, 0), limit)
    return sorted(plan.items())


def rescaled(g: DynamicGraph, unit: int) -> DynamicGraph:
    if unit == 1:
        return g.copy()
    out = DynamicGraph(g.n, None)
    out.adj = [{v: -(-w // unit) for v, w in a.items()} for a in g.adj]
    out.m = g.m
    return out


class DecrementalHubLabeling:
    """Hub labeling maintained under edge deletions (``init_decremental`` and friends)."""

    def __init__(self, g: DynamicGraph, cfg: DecrementalConfig,
                 hierarchy: Optional[Hierarchy] = None):
        cfg.validate()
        self.cfg = cfg
        self.n = n = g.n
        self.graph = g.copy()
        w_bound = g.max_weight or max((w for _, _, w in g.edges()), default=1)
        self.max_weight = w_bound
        self.sentinel = n * w_bound + 1
        self.ceiling = n * w_bound
        self.hierarchy = hierarchy or sample_hierarchy(max(n, 1), cfg.k, cfg.seed)
        if cfg.scaled_mode:
            beta = cfg.hop_budget or max(1, n - 1)
            self.plan = scale_plan(n, w_bound, cfg.k, cfg.epsilon, beta)
        else:
            self.plan = [(1, cfg.d)]
        self.instances = [(unit, BoundedTZ(rescaled(self.graph, unit), self.hierarchy, limit))
                          for unit, limit in self.plan]
        self.labels = [self._compose(v) for v in range(n)]
        self.t = 0
        self.log = RecourseLog(n)
        self.max_hub_size = max((len(x) for x in self.labels), default=0)
        self._check_cap(range(n))

    @property
    def stretch(self) -> float:
        return self.cfg.stretch

    def _compose(self, v: int) -> Dict[int, int]:
        if len(self.instances) == 1 and self.instances[0][0] == 1:
            return self.instances[0][1].label(v, self.cfg.with_pivots)
        out: Dict[int, int] = {}
        ceiling = self.ceiling
        for unit, inst in self.instances:
            for u, d in inst.label(v, self.cfg.with_pivots).items():
                e = min(d * unit, ceiling)
                if e < out.get(u, e + 1):
                    out[u] = e
        return out

    def _check_cap(self, vertices):
        cap = self.cfg.hub_cap
        if cap is None:
            return
        for v in vertices:
            if len(self.labels[v]) > cap:
                raise HubCapExceeded(f"|S({v})| = {len(self.labels[v])} exceeds cap {cap}")

    def delete(self, u: int, v: int) -> List[ChangeRecord]:
        if not (0 <= u < self.n and 0 <= v < self.n):
            raise OutOfRangeVertex(f"edge ({u}, {v}) outside [0, {self.n})")
        if not self.graph.has_edge(u, v):
            raise MissingDelete(f"edge ({u}, {v}) not in the decremental view")
        self.graph.delete(u, v)
        self.t += 1
        touched = set()
        for _, inst in self.instances:
            touched |= inst.delete(u, v)
        records = []
        for x in sorted(touched):
            old, new = self.labels[x], self._compose(x)
            if old == new:
                continue
            for hub in sorted(old.keys() | new.keys()):
                o, e = old.get(hub), new.get(hub)
                if o == e:
                    continue
                if o is None:
                    kind = ChangeKind.ENTERED
                elif e is None:
                    kind = ChangeKind.LEFT
                else:
                    kind = ChangeKind.UPDATED
                records.append(ChangeRecord(x, hub, kind, self.sentinel if e is None else e, self.t))
            self.labels[x] = new
            if len(new) > self.max_hub_size:
                self.max_hub_size = len(new)
        self._check_cap(touched)
        self.log.add(records)
        return records

    def query(self, s: int, t: int) -> int:
        if not (0 <= s < self.n and 0 <= t < self.n):
            raise OutOfRangeVertex(f"query ({s}, {t}) outside [0, {self.n})")
        return min(label_query(self.labels, s, t, self.sentinel), self.sentinel)

    def estimate(self, v: int, u: int) -> int:
        return self.labels[v].get(u, self.sentinel)

    def hub_set(self, v: int) -> Tuple[set, Dict[int, int]]:
        if not (0 <= v < self.n):
            raise OutOfRangeVertex(f"vertex {v} outside [0, {self.n})")
        return set(self.labels[v]), dict(self.labels[v])

    def recourse(self, v: int) -> int:
        if not (0 <= v < self.n):
            raise OutOfRangeVertex(f"vertex {v} outside [0, {self.n})")
        return self.log.per_vertex[v]


def init_decremental(g: DynamicGraph, cfg: DecrementalConfig) -> DecrementalHubLabeling:
    return DecrementalHubLabeling(g, cfg)


def decr_delete(state: DecrementalHubLabeling, u: int, v: int) -> List[ChangeRecord]:
    return state.delete(u, v)


def decr_query(state: DecrementalHubLabeling, s: int, t: int) -> int:
    return state.query(s, t)


def current_hub_set(state: DecrementalHubLabeling, v: int):
    return state.hub_set(v)


def recourse(state: DecrementalHubLabeling, v: int) -> int:
    return state.recourse(v)


class DecrementalOracle:
    """Oracle front for deletion-only workloads.

    Inserts are buffered until the first delete or query, which builds the
    labeling; later inserts raise :class:`UnsupportedUpdate`.
    """

    def __init__(self, n, max_weight, cfg: DecrementalConfig):
        self.pending = DynamicGraph(n, max_weight)
        self.cfg = cfg
        self.state: Optional[DecrementalHubLabeling] = None
        self.stretch = cfg.stretch
        self.declared_stretch = cfg.stretch

    @property
    def sentinel(self):
        return self.pending.sentinel

    def _ready(self):
        if self.state is None:
            self.state = DecrementalHubLabeling(self.pending, self.cfg)
        return self.state

    def insert(self, u, v, w):
        if self.state is not None:
            raise UnsupportedUpdate("decremental oracle cannot insert after the first delete/query")
        self.pending.insert(u, v, w)

    def delete(self, u, v):
        self._ready().delete(u, v)

    def query(self, s, t):
        return self._ready().query(s, t)

    def metrics(self):
        total = self.state.log.total if self.state else 0
        return {"phases": 0, "h_edges_max": 0, "recourse_total": total}
