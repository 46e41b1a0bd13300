"""Fully dynamic oracle from a decremental hub labeling and an inner fully dynamic oracle.

Updates are grouped into phases of ``ell`` updates. The first phase feeds the
inner oracle ``B`` with ``G`` itself. Every later phase starts by building the
decremental labeling ``A`` on the current graph and a fresh ``B`` on an empty
sketch graph ``H``. ``H`` holds the edges inserted during the phase plus, for
each of their endpoints, an edge to every hub of that endpoint. Deletions of
phase-start edges go to ``A``, and each change ``A`` reports is mirrored onto
``H``. Queries combine ``A``'s own estimate with detours through ``H``.

Inner oracles (``B``) need ``insert(u, v, w)``, ``delete(u, v)``, ``query(s, t)``,
a ``sentinel`` attribute meaning "unreachable", and ``metrics()``. Both
:class:`dynhub.exact.ExactOracle` and :class:`ComposedOracle` qualify.
"""
from __future__ import annotations

import heapq
from collections import Counter
from dataclasses import dataclass
from typing import Callable, Dict, Optional, Tuple

from .decremental import DecrementalConfig, DecrementalHubLabeling
from .errors import MissingDelete, SlotPoolExhausted
from .graph import DynamicGraph, derive_seed, edge_key


@dataclass(frozen=True)
class ReductionParams:
    """Phase length and the hub-size / recourse caps of ``A``.

    ``gamma`` and ``zeta`` may be left unset; the slot pool then falls back to
    ``n`` slots and the cardinality bounds are checked against measured values.
    """

    ell: int
    gamma: Optional[int] = None
    zeta: Optional[int] = None
    alpha: float = 1.0
    beta: float = 1.0

    def __post_init__(self):
        if self.ell < 1:
            raise ValueError("phase length ell must be >= 1")
        for name in ("gamma", "zeta"):
            val = getattr(self, name)
            if val is not None and val < 0:
                raise ValueError(f"{name} must be non-negative")

    @property
    def mu(self) -> Optional[int]:
        if self.gamma is None or self.zeta is None:
            return None
        return self.gamma + self.zeta

    @property
    def stretch(self) -> float:
        return self.alpha * self.beta

    @property
    def slot_pool_size(self) -> Optional[int]:
        mu = self.mu
        return None if mu is None else self.ell * (2 + 2 * mu)

    def h_edge_bound(self, mu: int) -> int:
        return self.ell * (1 + 2 * mu)

    def b_update_bound(self, mu: int) -> int:
        return self.ell * (2 + 4 * mu)


@dataclass
class PhaseStats:
    index: int
    updates: int = 0
    b_updates: int = 0
    h_edges_max: int = 0
    slots_max: int = 0
    hub_max: int = 0
    recourse_max: int = 0
    recourse_total: int = 0
    a_deletions: int = 0

    @property
    def measured_mu(self) -> int:
        return self.hub_max + self.recourse_max


AFactory = Callable[[DynamicGraph, int], DecrementalHubLabeling]
BFactory = Callable[[int, int, int], object]


def scaled_a_factory(k: int = 2, epsilon: float = 0.25, hop_budget: Optional[int] = None,
                     hub_cap: Optional[int] = None) -> AFactory:
    def make(g: DynamicGraph, seed: int) -> DecrementalHubLabeling:
        cfg = DecrementalConfig(k=k, epsilon=epsilon, seed=seed, scaled_mode=True,
                                hop_budget=hop_budget, hub_cap=hub_cap)
        return DecrementalHubLabeling(g, cfg)
    make.stretch = (2 * k - 1) * (1 + epsilon)
    return make


class ComposedOracle:
    """Fully dynamic distance oracle of stretch ``alpha * beta``.

    ``check=True`` re-derives the phase sets and the sketch graph from their
    definitions after every update and raises ``AssertionError`` on mismatch.
    """

    def __init__(self, n: int, max_weight: int, params: ReductionParams,
                 a_factory: AFactory, b_factory: BFactory, seed: int = 0,
                 check: bool = False):
        self.graph = DynamicGraph(n, max_weight)
        self.params = params
        self.a_factory = a_factory
        self.b_factory = b_factory
        self.seed = seed
        self.check = check
        self.h_weight = max(1, n * max_weight)
        self.stretch = params.stretch
        self.declared_stretch = params.stretch
        self.phase = 0
        self.history = []
        self.recourse_carry = 0
        self.h_edges_max = 0
        self._start_phase()

    # -- bookkeeping -----------------------------------------------------------

    @property
    def n(self):
        return self.graph.n

    @property
    def sentinel(self):
        return self.graph.sentinel

    @property
    def capacity(self) -> int:
        if self.phase == 1:
            return min(2 * self.params.ell, self.n)
        pool = self.params.slot_pool_size
        return self.n if pool is None else min(pool, self.n)

    def _start_phase(self):
        if self.phase:
            self._close_phase()
        self.phase += 1
        self.counter = 0
        self.F = set()
        self.D = set()
        self.I = set()
        self.U: Counter = Counter()
        self.H: Dict[Tuple[int, int], int] = {}
        self.slot: Dict[int, int] = {}
        self.hdeg: Counter = Counter()
        self.stats = PhaseStats(self.phase)
        if self.phase == 1:
            self.A = None
        else:
            self.F = self.graph.edge_set()
            self.A = self.a_factory(self.graph, derive_seed(self.seed, self.phase, 0))
        cap = self.capacity
        self.free = list(range(cap))
        self.B = self.b_factory(cap, self.h_weight, derive_seed(self.seed, self.phase, 1))
        if self.A is not None:
            self.stats.hub_max = self.A.max_hub_size

    def _close_phase(self):
        st = self.stats
        if self.A is not None:
            st.hub_max = max(st.hub_max, self.A.max_hub_size)
            st.recourse_max = self.A.log.max()
            st.recourse_total = self.A.log.total
            st.a_deletions = self.A.t
        self.recourse_carry += st.recourse_total + self.B.metrics()["recourse_total"]
        self.history.append(st)

    def phase_stats(self):
        """Closed phases followed by a snapshot of the current one."""
        cur = PhaseStats(**vars(self.stats))
        if self.A is not None:
            cur.hub_max = max(cur.hub_max, self.A.max_hub_size)
            cur.recourse_max = self.A.log.max()
            cur.recourse_total = self.A.log.total
            cur.a_deletions = self.A.t
        return list(self.history) + [cur]

    def metrics(self):
        live = self.A.log.total if self.A is not None else 0
        return {
            "phases": self.phase,
            "h_edges_max": self.h_edges_max,
            "recourse_total": self.recourse_carry + live + self.B.metrics()["recourse_total"],
        }

    def bound_violations(self):
        """Phases whose ``|E(H)|`` or ``B``-update count exceed the bounds for their ``mu``.

        ``mu`` is the configured ``gamma + zeta`` when set, else the measured
        maximum hub size plus maximum recourse of that phase.
        """
        bad = []
        ell = self.params.ell
        for st in self.phase_stats():
            if st.index == 1:
                if st.h_edges_max > ell or st.b_updates > ell:
                    bad.append(st)
                continue
            mu = self.params.mu if self.params.mu is not None else st.measured_mu
            if st.h_edges_max > self.params.h_edge_bound(mu) or \
                    st.b_updates > self.params.b_update_bound(mu):
                bad.append(st)
        return bad

    # -- sketch graph maintenance ----------------------------------------------

    def _alloc(self, v: int) -> int:
        s = self.slot.get(v)
        if s is None:
            if not self.free:
                raise SlotPoolExhausted(
                    f"sketch graph needs more than {self.capacity} vertices in phase {self.phase}")
            s = heapq.heappop(self.free)
            if self.check:
                g = getattr(self.B, "graph", None)
                assert g is None or g.degree(s) == 0, f"reused slot {s} still has edges"
            self.slot[v] = s
        return s

    def _release(self, v: int):
        if self.hdeg[v] == 0:
            del self.hdeg[v]
            heapq.heappush(self.free, self.slot.pop(v))

    def _set_h(self, e: Tuple[int, int], w: Optional[int]):
        cur = self.H.get(e)
        if cur == w:
            return
        x, y = e
        if cur is not None:
            self.B.delete(self.slot[x], self.slot[y])
            self.stats.b_updates += 1
            del self.H[e]
            self.hdeg[x] -= 1
            self.hdeg[y] -= 1
        if w is not None:
            sx, sy = self._alloc(x), self._alloc(y)
            self.B.insert(sx, sy, w)
            self.stats.b_updates += 1
            self.H[e] = w
            self.hdeg[x] += 1
            self.hdeg[y] += 1
        for z in e:
            self._release(z)
        if len(self.H) > self.stats.h_edges_max:
            self.stats.h_edges_max = len(self.H)
            self.h_edges_max = max(self.h_edges_max, len(self.H))
        if len(self.slot) > self.stats.slots_max:
            self.stats.slots_max = len(self.slot)

    def _target(self, x: int, y: int) -> Optional[int]:
        """Weight of pair ``{x, y}`` in ``H`` by definition, ``None`` if absent."""
        labels = self.A.labels
        lx, ly = labels[x], labels[y]
        if not (edge_key(x, y) in self.I or (x in self.U and y in lx) or (y in self.U and x in ly)):
            return None
        best = None
        for c in (self.graph.weight(x, y), lx.get(y), ly.get(x)):
            if c is not None and (best is None or c < best):
                best = c
        return best

    def _sync(self, x: int, y: int):
        if x != y:
            self._set_h(edge_key(x, y), self._target(x, y))

    # -- updates ---------------------------------------------------------------

    def _roll(self):
        if self.counter >= self.params.ell:
            self._start_phase()
        self.counter += 1
        self.stats.updates += 1

    def insert(self, u: int, v: int, w: int):
        g = self.graph
        g.validate_insert(u, v, w)
        self._roll()
        g.insert(u, v, w)
        e = edge_key(u, v)
        if self.phase == 1:
            self._set_h(e, w)
        else:
            self.I.add(e)
            self.U[u] += 1
            self.U[v] += 1
            self._sync(u, v)
            labels = self.A.labels
            for x in (u, v):
                for p in sorted(labels[x]):
                    self._sync(x, p)
        if self.check:
            self.verify()

    def delete(self, u: int, v: int):
        g = self.graph
        g.check_vertex(u)
        g.check_vertex(v)
        if not g.has_edge(u, v):
            raise MissingDelete(f"edge ({u}, {v}) not present")
        self._roll()
        g.delete(u, v)
        e = edge_key(u, v)
        if self.phase == 1:
            self._set_h(e, None)
        elif e in self.I:
            self.I.discard(e)
            self.D.add(e)
            left = []
            for x in (u, v):
                self.U[x] -= 1
                if self.U[x] == 0:
                    del self.U[x]
                    left.append(x)
            self._sync(u, v)
            labels = self.A.labels
            for x in left:
                for p in sorted(labels[x]):
                    self._sync(x, p)
        else:
            self.D.add(e)
            records = self.A.delete(u, v)
            self._sync(u, v)
            for r in records:
                self._sync(r.vertex, r.hub)
            hub_max = self.A.max_hub_size
            if hub_max > self.stats.hub_max:
                self.stats.hub_max = hub_max
        if self.check:
            self.verify()

    # -- queries -----------------------------------------------------------------

    def _b_dist(self, p: int, q: int) -> Optional[int]:
        if p == q:
            return 0
        sp, sq = self.slot.get(p), self.slot.get(q)
        if sp is None or sq is None:
            return None
        d = self.B.query(sp, sq)
        return None if d >= self.B.sentinel else d

    def query(self, s: int, t: int) -> int:
        self.graph.check_vertex(s)
        self.graph.check_vertex(t)
        if s == t:
            return 0
        inf = self.sentinel
        if self.phase == 1:
            d = self._b_dist(s, t)
            return inf if d is None else min(d, inf)
        best = self.A.query(s, t)
        labels = self.A.labels
        slot = self.slot
        ps = [(slot[p], dp) for p, dp in labels[s].items() if p in slot]
        if ps:
            qs = [(slot[q], dq) for q, dq in labels[t].items() if q in slot]
            b, bsent = self.B, self.B.sentinel
            for sp, dp in ps:
                for sq, dq in qs:
                    if dp + dq >= best:
                        continue
                    d = 0 if sp == sq else b.query(sp, sq)
                    if d < bsent and dp + d + dq < best:
                        best = dp + d + dq
        return min(best, inf)

    # -- test mode ---------------------------------------------------------------

    def definitional_h(self) -> Dict[Tuple[int, int], int]:
        if self.phase == 1:
            return {(u, v): w for u, v, w in self.graph.edges()}
        pairs = set(self.I)
        labels = self.A.labels
        for u in self.U:
            for p in labels[u]:
                if p != u:
                    pairs.add(edge_key(u, p))
        return {e: self._target(*e) for e in pairs}

    def verify(self):
        E = self.graph.edge_set()
        if self.phase > 1:
            assert self.I == E - (self.F - self.D), "I != E \\ (F \\ D)"
            assert not (self.I & (self.F - self.D)), "I meets F \\ D"
            ends = Counter()
            for a, b in self.I:
                ends[a] += 1
                ends[b] += 1
            assert ends == self.U, "U is not the endpoint set of I"
            assert set(self.A.graph.edge_set()) == self.F - self.D, "A's view is not F \\ D"
        assert self.counter <= self.params.ell
        want = self.definitional_h()
        assert want == self.H, "sketch graph differs from its definition"
        touched = {x for e in want for x in e}
        assert touched == set(self.slot), "V(H) differs from the mapped vertices"
        assert len(set(self.slot.values())) == len(self.slot)
        g = getattr(self.B, "graph", None)
        if g is not None:
            mapped = {edge_key(self.slot[a], self.slot[b]): w for (a, b), w in self.H.items()}
            assert mapped == {(a, b): w for a, b, w in g.edges()}, "B's graph differs from H"
        assert len(self.slot) <= self.capacity


def new_composed(a_factory: AFactory, b_factory: BFactory, params: ReductionParams,
                 n: int, max_weight: int, seed: int = 0, check: bool = False) -> ComposedOracle:
    return ComposedOracle(n, max_weight, params, a_factory, b_factory, seed, check)
