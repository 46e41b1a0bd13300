import pytest

from dynhub.decremental import (ChangeKind, DecrementalConfig, DecrementalHubLabeling,
                                DecrementalOracle, apply_changes, current_hub_set, decr_delete,
                                decr_query, dump_changes, init_decremental, recourse, scale_plan)
from dynhub.errors import HubCapExceeded, MissingDelete, OutOfRangeVertex, UnsupportedUpdate
from dynhub.graph import DynamicGraph

from oracles import deletion_order, dist_matrix, path_graph, random_graph, tz_reference

PLAIN = dict(scaled_mode=False)


def test_empty_graph():
    st = init_decremental(DynamicGraph(6, 5), DecrementalConfig(k=2, seed=1))
    h = st.hierarchy
    for v in range(6):
        hubs, est = current_hub_set(st, v)
        assert v in hubs and est[v] == 0
        # nothing is reachable, so only v itself can be a hub
        assert hubs == {v}
        assert recourse(st, v) == 0
    assert st.query(0, 1) == st.sentinel
    assert h.n == 6


def test_plain_path_bound():
    st = init_decremental(path_graph(4), DecrementalConfig(k=1, d=2, **PLAIN))
    hubs, _ = current_hub_set(st, 0)
    assert {0, 1, 2} <= hubs and 3 not in hubs


def test_k2_single_edge():
    g = DynamicGraph(2, 5)
    g.insert(0, 1, 3)
    st = init_decremental(g, DecrementalConfig(k=1, d=10, **PLAIN))
    old = [dict(x) for x in st.labels]
    recs = decr_delete(st, 0, 1)
    assert {(r.vertex, r.hub, r.kind) for r in recs} == {(0, 1, ChangeKind.LEFT), (1, 0, ChangeKind.LEFT)}
    assert all(r.new_estimate == st.sentinel for r in recs)
    assert apply_changes(old, recs) == st.labels
    assert decr_query(st, 0, 1) == st.sentinel


def test_path_deletion_replay():
    st = init_decremental(path_graph(3), DecrementalConfig(k=2, d=5, seed=2, **PLAIN))
    old = [dict(x) for x in st.labels]
    recs = decr_delete(st, 1, 2)
    assert recs
    assert apply_changes(old, recs) == st.labels
    assert dump_changes(recs).splitlines()[0].split()[0] == "1"


def test_errors():
    st = init_decremental(path_graph(3), DecrementalConfig(k=2, seed=0))
    with pytest.raises(MissingDelete):
        st.delete(0, 2)
    with pytest.raises(OutOfRangeVertex):
        st.query(0, 7)
    with pytest.raises(OutOfRangeVertex):
        recourse(st, -1)
    with pytest.raises(ValueError):
        DecrementalConfig(epsilon=0.5).validate()
    with pytest.raises(ValueError):
        DecrementalConfig(scaled_mode=False).validate()


def test_hub_cap():
    g = random_graph(20, 60, 5, 0)
    with pytest.raises(HubCapExceeded):
        init_decremental(g, DecrementalConfig(k=2, seed=0, hub_cap=1))


def test_scale_plan_rules():
    n, w, k, eps, beta = 30, 50, 2, 0.25, 29
    plan = scale_plan(n, w, k, eps, beta)
    units = [u for u, _ in plan]
    assert units == sorted(set(units)) and units[0] == 1
    for r in range((n * w).bit_length()):
        want = max(1, int(eps * 2 ** r / (2 * beta)))
        assert want in units


def _kinds_ok(old, new, recs):
    for r in recs:
        a, b = r.hub in old[r.vertex], r.hub in new[r.vertex]
        assert (a, b) == {ChangeKind.UPDATED: (True, True), ChangeKind.LEFT: (True, False),
                          ChangeKind.ENTERED: (False, True)}[r.kind]


@pytest.mark.parametrize("cfg", [
    DecrementalConfig(k=2, d=40, seed=3, scaled_mode=False),
    DecrementalConfig(k=3, d=25, seed=4, scaled_mode=False),
    DecrementalConfig(k=2, seed=5),
    DecrementalConfig(k=3, seed=6, hop_budget=6),
], ids=["plain-k2", "plain-k3", "scaled-k2", "scaled-k3-beta6"])
def test_matches_rebuild_and_replay(cfg):
    g = random_graph(32, 80, 12, cfg.seed)
    st = init_decremental(g, cfg)
    for u, v in deletion_order(g, 50, cfg.seed):
        old = [dict(x) for x in st.labels]
        recs = decr_delete(st, u, v)
        fresh = DecrementalHubLabeling(st.graph, cfg, hierarchy=st.hierarchy)
        assert st.labels == fresh.labels
        assert apply_changes(old, recs) == st.labels
        _kinds_ok(old, st.labels, recs)
        order = [(r.vertex, r.hub) for r in recs]
        assert order == sorted(order)
    assert sum(recourse(st, v) for v in range(32)) == st.log.total


def test_plain_labels_follow_bounded_definition():
    cfg = DecrementalConfig(k=2, d=15, seed=9, scaled_mode=False)
    g = random_graph(28, 60, 8, 9)
    st = init_decremental(g, cfg)
    h = st.hierarchy
    for u, v in deletion_order(g, 20, 9):
        st.delete(u, v)
        ref = dist_matrix(st.graph)
        pivot, pdist, bunch = tz_reference(ref, 28, h.levels, 2, st.graph.sentinel, limit=15)
        for x in range(28):
            want = dict(bunch[x])
            for i in range(2):
                if pivot[i][x] >= 0:
                    want[pivot[i][x]] = pdist[i][x]
            assert st.labels[x] == want


def test_plain_monotone_and_never_under():
    cfg = DecrementalConfig(k=2, d=30, seed=1, scaled_mode=False)
    g = random_graph(30, 70, 10, 1)
    st = init_decremental(g, cfg)
    for u, v in deletion_order(g, 40, 1):
        old = [dict(x) for x in st.labels]
        st.delete(u, v)
        ref = dist_matrix(st.graph)
        for x in range(30):
            for hub, d in st.labels[x].items():
                assert d >= ref[x][hub]
                if hub in old[x]:
                    assert d >= old[x][hub]


def test_scaled_monotone_per_scale():
    cfg = DecrementalConfig(k=2, seed=2)
    g = random_graph(30, 70, 20, 2)
    st = init_decremental(g, cfg)
    for u, v in deletion_order(g, 30, 2):
        before = [[inst.label(x) for x in range(30)] for _, inst in st.instances]
        st.delete(u, v)
        ref = dist_matrix(st.graph)
        for (unit, inst), old in zip(st.instances, before):
            for x in range(30):
                for hub, d in inst.label(x).items():
                    if hub in old[x]:
                        assert d >= old[x][hub]
                    assert d * unit >= ref[x][hub]


def test_k1_plain_exact_under_deletions():
    g = random_graph(20, 45, 6, 4)
    cfg = DecrementalConfig(k=1, d=20 * 6, seed=0, scaled_mode=False)
    st = init_decremental(g, cfg)
    for u, v in deletion_order(g, 25, 4):
        st.delete(u, v)
        ref = dist_matrix(st.graph)
        assert all(st.query(s, t) == ref[s][t] for s in range(20) for t in range(20))


def test_scaled_sandwich_short_trace():
    g = random_graph(32, 90, 40, 12)
    st = init_decremental(g, DecrementalConfig(k=2, epsilon=0.25, seed=12))
    for e in [None] + deletion_order(g, 40, 12):
        if e is not None:
            st.delete(*e)
        ref = dist_matrix(st.graph)
        for s in range(32):
            for t in range(32):
                d, a = ref[s][t], st.query(s, t)
                if d >= st.sentinel:
                    assert a == st.sentinel
                else:
                    assert d <= a <= 3.75 * d


def test_oracle_front():
    o = DecrementalOracle(4, 5, DecrementalConfig(k=2, seed=0))
    o.insert(0, 1, 2)
    o.insert(1, 2, 2)
    assert o.query(0, 2) >= 4
    o.delete(1, 2)
    with pytest.raises(UnsupportedUpdate):
        o.insert(2, 3, 1)
    assert o.metrics()["recourse_total"] == o.state.log.total


@pytest.mark.parametrize("k", [2, 3])
def test_plain_stretch_inside_bound(k):
    d = 60
    g = random_graph(30, 75, 6, 20 + k)
    st = init_decremental(g, DecrementalConfig(k=k, d=d, seed=k, scaled_mode=False))
    for e in [None] + deletion_order(g, 30, 20 + k):
        if e is not None:
            st.delete(*e)
        ref = dist_matrix(st.graph)
        for s in range(30):
            for t in range(30):
                x = ref[s][t]
                if (2 * k - 1) * x <= d:
                    assert x <= st.query(s, t) <= (2 * k - 1) * x
