import pytest

from dynhub.errors import DuplicateInsert, MissingDelete, OutOfRangeVertex, SlotPoolExhausted
from dynhub.exact import ExactOracle, b0_factory
from dynhub.graph import Delete, Insert, Query
from dynhub.reduction import ComposedOracle, ReductionParams, new_composed, scaled_a_factory

from oracles import dist_matrix, mixed_trace, sandwich_ok

A = scaled_a_factory(2, 0.25)


def composed(n=12, w=10, ell=4, check=True, **kw):
    return new_composed(A, b0_factory, ReductionParams(ell, **kw), n, w, seed=1, check=check)


def test_params():
    p = ReductionParams(5, gamma=3, zeta=5, alpha=3.75, beta=2.0)
    assert p.mu == 8 and p.slot_pool_size == 18 * 5 and p.stretch == 7.5
    assert p.h_edge_bound(8) == 5 * 17 and p.b_update_bound(8) == 5 * 34
    assert ReductionParams(3).mu is None
    with pytest.raises(ValueError):
        ReductionParams(0)


def test_fresh_oracle():
    c = composed()
    assert c.query(0, 1) == c.sentinel and c.query(3, 3) == 0
    assert c.A is None and c.phase == 1
    with pytest.raises(OutOfRangeVertex):
        c.query(0, 12)


def test_first_phase_then_rollover():
    c = composed(ell=4)
    for i in range(4):
        c.insert(i, i + 1, 2)
        assert c.phase == 1 and c.A is None
    assert c.query(0, 4) == 8
    c.insert(5, 6, 1)
    assert c.phase == 2 and c.A is not None
    # A was built on the graph as it stood before the fifth update
    assert c.A.graph.edge_set() == {(0, 1), (1, 2), (2, 3), (3, 4)}
    assert c.I == {(5, 6)}


def test_errors_leave_state_alone():
    c = composed()
    c.insert(0, 1, 3)
    with pytest.raises(DuplicateInsert):
        c.insert(1, 0, 3)
    with pytest.raises(MissingDelete):
        c.delete(2, 3)
    assert c.counter == 1


def _to_phase_two(c, edges):
    for u, v, w in edges:
        c.insert(u, v, w)
    while c.phase == 1:
        u, v, w = edges[0]
        c.delete(u, v)
        c.insert(u, v, w)


def test_insert_touches_at_most_star_sizes():
    c = composed(n=16, ell=6)
    _to_phase_two(c, [(i, i + 1, 1 + i % 3) for i in range(15)])
    labels = c.A.labels
    for u, v in [(0, 9), (3, 12)]:
        before, keys = c.stats.b_updates, set(c.H)
        c.insert(u, v, 4)
        star = 1 + len(labels[u]) + len(labels[v])
        assert len(set(c.H) - keys) <= star
        assert c.stats.b_updates - before <= 2 * star


def test_deleting_inserted_edge_keeps_hub_edge():
    c = composed(n=16, ell=50)
    _to_phase_two(c, [(i, i + 1, 2) for i in range(15)])
    labels = c.A.labels
    # u keeps another inserted edge, v is one of u's hubs but not a neighbour
    u = 5
    v = next(p for p in sorted(labels[u]) if p != u and not c.graph.has_edge(u, p))
    x = next(y for y in range(16) if y not in (u, v) and not c.graph.has_edge(u, y)
             and y not in labels[u])
    c.insert(u, v, 1)
    c.insert(u, x, 1)
    assert c.H[(min(u, v), max(u, v))] == 1
    c.delete(u, v)
    want = min(labels[u].get(v, c.sentinel), labels[v].get(u, c.sentinel))
    assert c.H[(min(u, v), max(u, v))] == want


def test_deletes_only_phase_equals_a():
    edges = [(i, (i + 1) % 14, 1 + i % 4) for i in range(14)] + [(0, 7, 2), (3, 10, 5)]
    c = composed(n=14, ell=len(edges))
    for e in edges:
        c.insert(*e)
    for u, v in [(0, 1), (5, 6), (3, 10)]:
        c.delete(u, v)
    assert c.phase == 2 and not c.I and not c.H
    for s in range(14):
        for t in range(14):
            assert c.query(s, t) == min(c.A.query(s, t), c.sentinel)


def test_slot_pool_exhaustion():
    c = composed(n=30, ell=2, gamma=0, zeta=0)
    with pytest.raises(SlotPoolExhausted):
        for i in range(29):
            c.insert(i, i + 1, 1)


@pytest.mark.parametrize("ell", [2, 8, 32])
@pytest.mark.parametrize("seed", range(3))
def test_sandwich_against_exact(seed, ell):
    n = 40
    events = mixed_trace(n, 250, 60, 30, seed)
    c = new_composed(A, b0_factory, ReductionParams(ell, alpha=3.75), n, 30, seed=seed, check=True)
    x = ExactOracle(n, 30)
    for e in events:
        if isinstance(e, Insert):
            c.insert(e.u, e.v, e.w)
            x.insert(e.u, e.v, e.w)
        elif isinstance(e, Delete):
            c.delete(e.u, e.v)
            x.delete(e.u, e.v)
        else:
            assert sandwich_ok(c.query(e.s, e.t_vertex), x.query(e.s, e.t_vertex), 3.75,
                               x.sentinel, c.sentinel)
    assert c.bound_violations() == []
    assert c.metrics()["phases"] == c.phase


def test_all_pairs_at_phase_ends():
    n = 24
    events = [e for e in mixed_trace(n, 120, 0, 9, 5)]
    c = new_composed(A, b0_factory, ReductionParams(7, alpha=3.75), n, 9, seed=5, check=True)
    for i, e in enumerate(events):
        if isinstance(e, Insert):
            c.insert(e.u, e.v, e.w)
        else:
            c.delete(e.u, e.v)
        if i % 7 in (0, 3):
            ref = dist_matrix(c.graph)
            for s in range(n):
                for t in range(n):
                    assert sandwich_ok(c.query(s, t), ref[s][t], 3.75, c.sentinel, c.sentinel)


def test_phase_stats_and_counter_bound():
    c = composed(n=20, ell=5, check=False)
    for e in mixed_trace(20, 60, 0, 7, 3):
        if isinstance(e, Insert):
            c.insert(e.u, e.v, e.w)
        else:
            c.delete(e.u, e.v)
    stats = c.phase_stats()
    assert [s.index for s in stats] == list(range(1, c.phase + 1))
    assert sum(s.updates for s in stats) == 60
    assert all(s.updates <= 5 for s in stats)
    c.verify()


def test_composed_as_inner_oracle():
    def inner(n, w, seed):
        return ComposedOracle(n, w, ReductionParams(3, alpha=3.75), A, b0_factory, seed=seed)
    n = 20
    c = ComposedOracle(n, 8, ReductionParams(4, alpha=3.75, beta=3.75), A, inner, seed=2, check=True)
    x = ExactOracle(n, 8)
    for e in mixed_trace(n, 80, 40, 8, 9):
        if isinstance(e, Query):
            assert sandwich_ok(c.query(e.s, e.t_vertex), x.query(e.s, e.t_vertex), 3.75 ** 2,
                               x.sentinel, c.sentinel)
        elif isinstance(e, Insert):
            c.insert(e.u, e.v, e.w)
            x.insert(e.u, e.v, e.w)
        else:
            c.delete(e.u, e.v)
            x.delete(e.u, e.v)
