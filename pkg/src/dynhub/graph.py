"""Dynamic weighted undirected graphs, update events and traces."""
from __future__ import annotations

import random
from dataclasses import dataclass, field
from typing import Iterable, Iterator, List, Optional, Tuple, Union

import numpy as np

from .errors import (
    DuplicateInsert,
    InfeasibleConfig,
    InvalidWeight,
    MissingDelete,
    OutOfRangeVertex,
    TraceSyntaxError,
)


def edge_key(u: int, v: int) -> Tuple[int, int]:
    return (u, v) if u < v else (v, u)


class DynamicGraph:
    """Simple undirected graph on vertices ``0..n-1`` with integer weights in ``[1, W]``.

    ``max_weight=None`` disables the upper weight check (weights must still be
    positive integers).
    """

    def __init__(self, n: int, max_weight: Optional[int] = None):
        if n < 0:
            raise ValueError("vertex count must be non-negative")
        self._n = n
        self.max_weight = max_weight
        self.adj: List[dict] = [dict() for _ in range(n)]
        self.m = 0
        self._csr = None

    @property
    def n(self) -> int:
        return self._n

    @property
    def sentinel(self) -> int:
        """Stand-in for an infinite distance."""
        return self._n * (self.max_weight or 1) + 1

    def copy(self) -> "DynamicGraph":
        g = DynamicGraph(self._n, self.max_weight)
        g.adj = [dict(a) for a in self.adj]
        g.m = self.m
        return g

    def check_vertex(self, v: int) -> None:
        if not (0 <= v < self._n):
            raise OutOfRangeVertex(f"vertex {v} outside [0, {self._n})")

    def has_edge(self, u: int, v: int) -> bool:
        return 0 <= u < self._n and v in self.adj[u]

    def weight(self, u: int, v: int) -> Optional[int]:
        return self.adj[u].get(v)

    def edges(self) -> Iterator[Tuple[int, int, int]]:
        """Yield ``(u, v, w)`` with ``u < v`` in ascending order of ``(u, v)``."""
        for u in range(self._n):
            for v in sorted(self.adj[u]):
                if u < v:
                    yield u, v, self.adj[u][v]

    def edge_set(self) -> set:
        return {(u, v) for u, v, _ in self.edges()}

    def degree(self, v: int) -> int:
        return len(self.adj[v])

    def validate_insert(self, u: int, v: int, w: int) -> None:
        """Raise the error ``insert(u, v, w)`` would raise, without changing anything."""
        self.check_vertex(u)
        self.check_vertex(v)
        if u == v:
            raise InvalidWeight(f"self-loop at {u}")
        if not isinstance(w, (int, np.integer)) or w < 1:
            raise InvalidWeight(f"weight {w!r} is not a positive integer")
        if self.max_weight is not None and w > self.max_weight:
            raise InvalidWeight(f"weight {w} exceeds bound {self.max_weight}")
        if v in self.adj[u]:
            raise DuplicateInsert(f"edge ({u}, {v}) already present")

    def insert(self, u: int, v: int, w: int) -> None:
        self.validate_insert(u, v, w)
        w = int(w)
        self.adj[u][v] = w
        self.adj[v][u] = w
        self.m += 1
        self._csr = None

    def delete(self, u: int, v: int) -> int:
        """Remove edge ``{u, v}`` and return its weight."""
        self.check_vertex(u)
        self.check_vertex(v)
        if v not in self.adj[u]:
            raise MissingDelete(f"edge ({u}, {v}) not present")
        w = self.adj[u].pop(v)
        del self.adj[v][u]
        self.m -= 1
        self._csr = None
        return w

    def csr(self):
        """Cached ``(indptr, indices, weights)`` int64 arrays of the adjacency."""
        if self._csr is None:
            adj = self.adj
            indptr = np.zeros(self._n + 1, dtype=np.int64)
            np.cumsum([len(a) for a in adj], out=indptr[1:])
            indices = np.array([v for a in adj for v in a], dtype=np.int64)
            weights = np.array([w for a in adj for w in a.values()], dtype=np.int64)
            self._csr = (indptr, indices, weights)
        return self._csr

    def __eq__(self, other):
        if not isinstance(other, DynamicGraph):
            return NotImplemented
        return self._n == other._n and self.adj == other.adj

    def __repr__(self):
        return f"DynamicGraph(n={self._n}, m={self.m}, W={self.max_weight})"


@dataclass(frozen=True)
class Insert:
    u: int
    v: int
    w: int
    t: int = field(default=0, compare=False)


@dataclass(frozen=True)
class Delete:
    u: int
    v: int
    t: int = field(default=0, compare=False)


@dataclass(frozen=True)
class Query:
    s: int
    t_vertex: int
    t: int = field(default=0, compare=False)


UpdateEvent = Union[Insert, Delete, Query]


def apply_update(g: DynamicGraph, e: UpdateEvent) -> DynamicGraph:
    if isinstance(e, Insert):
        g.insert(e.u, e.v, e.w)
    elif isinstance(e, Delete):
        g.delete(e.u, e.v)
    elif isinstance(e, Query):
        g.check_vertex(e.s)
        g.check_vertex(e.t_vertex)
    else:
        raise TypeError(f"not an update event: {e!r}")
    return g


# --- trace text format -----------------------------------------------------

def parse_trace(text: str) -> List[UpdateEvent]:
    events: List[UpdateEvent] = []
    arity = {"i": 3, "d": 2, "q": 2}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        parts = line.split()
        op = parts[0]
        if op not in arity:
            raise TraceSyntaxError(f"unknown event kind {op!r}", lineno)
        if len(parts) - 1 != arity[op]:
            raise TraceSyntaxError(
                f"{op!r} takes {arity[op]} integers, got {len(parts) - 1}", lineno)
        try:
            args = [int(p) for p in parts[1:]]
        except ValueError:
            raise TraceSyntaxError(f"non-integer field in {line!r}", lineno) from None
        t = len(events)
        if op == "i":
            events.append(Insert(args[0], args[1], args[2], t))
        elif op == "d":
            events.append(Delete(args[0], args[1], t))
        else:
            events.append(Query(args[0], args[1], t))
    return events


def serialize_trace(events: Iterable[UpdateEvent], n: Optional[int] = None,
                    max_weight: Optional[int] = None) -> str:
    lines = []
    if n is not None:
        lines.append(f"# n {n} W {max_weight if max_weight is not None else 0}")
    for e in events:
        if isinstance(e, Insert):
            lines.append(f"i {e.u} {e.v} {e.w}")
        elif isinstance(e, Delete):
            lines.append(f"d {e.u} {e.v}")
        else:
            lines.append(f"q {e.s} {e.t_vertex}")
    return "\n".join(lines) + "\n"


def trace_header(text: str) -> Tuple[Optional[int], Optional[int]]:
    """Read the optional ``# n N W W`` header comment written by :func:`serialize_trace`."""
    for raw in text.splitlines():
        parts = raw.split()
        if len(parts) == 5 and parts[0] == "#" and parts[1] == "n" and parts[3] == "W":
            try:
                return int(parts[2]), int(parts[4]) or None
            except ValueError:
                return None, None
        if raw.strip() and not raw.lstrip().startswith("#"):
            break
    return None, None


def infer_dimensions(events: List[UpdateEvent]) -> Tuple[int, int]:
    """Smallest ``(n, W)`` consistent with ``events``."""
    n, w = 0, 1
    for e in events:
        if isinstance(e, Insert):
            n = max(n, e.u + 1, e.v + 1)
            w = max(w, e.w)
        elif isinstance(e, Delete):
            n = max(n, e.u + 1, e.v + 1)
        else:
            n = max(n, e.s + 1, e.t_vertex + 1)
    return n, w


# --- snapshot format ---------------------------------------------------------

def write_snapshot(g: DynamicGraph) -> str:
    rows = [f"{g.n} {g.m} {g.max_weight or 0}"]
    rows.extend(f"{u} {v} {w}" for u, v, w in g.edges())
    return "\n".join(rows) + "\n"


def read_snapshot(text: str) -> DynamicGraph:
    lines = [ln for ln in text.splitlines() if ln.strip() and not ln.lstrip().startswith("#")]
    if not lines:
        raise TraceSyntaxError("empty snapshot", 1)
    try:
        n, m, w = (int(x) for x in lines[0].split())
    except ValueError:
        raise TraceSyntaxError("header must be 'n m W'", 1) from None
    g = DynamicGraph(n, w or None)
    if len(lines) - 1 != m:
        raise TraceSyntaxError(f"expected {m} edge lines, found {len(lines) - 1}", 1)
    for i, ln in enumerate(lines[1:], start=2):
        try:
            u, v, wt = (int(x) for x in ln.split())
        except ValueError:
            raise TraceSyntaxError(f"bad edge line {ln!r}", i) from None
        g.insert(u, v, wt)
    return g


# --- trace generation ---------------------------------------------------------

@dataclass(frozen=True)
class TraceConfig:
    n: int
    initial_edge_count: int = 0
    update_count: int = 0
    insert_fraction: float = 0.5
    query_fraction: float = 0.0
    max_weight: int = 100
    min_weight: int = 1
    rng_seed: int = 0

    def validate(self) -> None:
        if self.n < 0 or self.initial_edge_count < 0 or self.update_count < 0:
            raise InfeasibleConfig("counts must be non-negative")
        if not (0.0 <= self.insert_fraction <= 1.0 and 0.0 <= self.query_fraction <= 1.0):
            raise InfeasibleConfig("fractions must lie in [0, 1]")
        if self.insert_fraction + self.query_fraction > 1.0 + 1e-12:
            raise InfeasibleConfig("insert_fraction + query_fraction exceeds 1")
        if not (1 <= self.min_weight <= self.max_weight):
            raise InfeasibleConfig("weight range must satisfy 1 <= min_weight <= max_weight")
        pairs = self.n * (self.n - 1) // 2
        if self.initial_edge_count > pairs:
            raise InfeasibleConfig(f"{self.initial_edge_count} edges do not fit on {self.n} vertices")
        delete_fraction = 1.0 - self.insert_fraction - self.query_fraction
        if self.update_count and delete_fraction > 1e-12 and self.insert_fraction == 0 \
                and self.initial_edge_count == 0:
            raise InfeasibleConfig("deletions requested but no edge can ever exist")
        if self.update_count and pairs == 0 and self.query_fraction < 1.0:
            raise InfeasibleConfig("graph has no vertex pairs to update")
        if self.query_fraction > 0 and self.n < 1:
            raise InfeasibleConfig("queries need at least one vertex")


class _EdgePool:
    """Edge set with O(1) uniform sampling and deterministic ordering."""

    def __init__(self):
        self.items: List[Tuple[int, int]] = []
        self.pos: dict = {}

    def __len__(self):
        return len(self.items)

    def __contains__(self, e):
        return e in self.pos

    def add(self, e):
        self.pos[e] = len(self.items)
        self.items.append(e)

    def remove(self, e):
        i = self.pos.pop(e)
        last = self.items.pop()
        if i < len(self.items):
            self.items[i] = last
            self.pos[last] = i


def _random_non_edge(rng: random.Random, n: int, pool: _EdgePool) -> Tuple[int, int]:
    for _ in range(64):
        u, v = rng.randrange(n), rng.randrange(n)
        if u != v and edge_key(u, v) not in pool:
            return edge_key(u, v)
    free = [(u, v) for u in range(n) for v in range(u + 1, n) if (u, v) not in pool]
    return free[rng.randrange(len(free))]


def generate_trace(cfg: TraceConfig) -> List[UpdateEvent]:
    """Oblivious random trace: initial inserts, then a mix of insert/delete/query."""
    cfg.validate()
    rng = random.Random(cfg.rng_seed)
    n = cfg.n
    pairs = n * (n - 1) // 2
    pool = _EdgePool()
    events: List[UpdateEvent] = []

    def insert():
        u, v = _random_non_edge(rng, n, pool)
        pool.add((u, v))
        events.append(Insert(u, v, rng.randint(cfg.min_weight, cfg.max_weight), len(events)))

    def delete():
        u, v = pool.items[rng.randrange(len(pool))]
        pool.remove((u, v))
        events.append(Delete(u, v, len(events)))

    for _ in range(cfg.initial_edge_count):
        insert()
    for _ in range(cfg.update_count):
        x = rng.random()
        if x < cfg.query_fraction:
            events.append(Query(rng.randrange(n), rng.randrange(n), len(events)))
            continue
        want_insert = x < cfg.query_fraction + cfg.insert_fraction
        if want_insert and len(pool) == pairs:
            if cfg.insert_fraction >= 1.0:
                raise InfeasibleConfig("graph became complete under an insert-only trace")
            want_insert = False
        if not want_insert and len(pool) == 0:
            if cfg.insert_fraction == 0.0:
                raise InfeasibleConfig("ran out of edges to delete")
            want_insert = True
        insert() if want_insert else delete()
    return events


def derive_seed(*parts: int) -> int:
    """Deterministic 63-bit seed from a path of integers (e.g. ``seed, level, phase``)."""
    state = np.random.SeedSequence([int(p) for p in parts]).generate_state(2, dtype=np.uint32)
    return (int(state[0]) << 31) ^ int(state[1])
