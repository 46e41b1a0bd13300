"""Pure-Python shortest-path kernels.

Reference implementation of the compiled module ``_ckernels``; both expose the
same functions with the same semantics. Graphs are passed as CSR triples of
int64 arrays ``(indptr, indices, weights)``.

Keyed searches store ``dist * mult + origin`` in a single integer so that
lexicographic ``(dist, origin)`` order becomes plain integer order.
"""
from heapq import heappop, heappush

import numpy as np


def _lists(indptr, indices, weights):
    return indptr.tolist(), indices.tolist(), weights.tolist()


def _run(ip, ix, wt, key, heap, mult, limit_key):
    while heap:
        k, u = heappop(heap)
        if k != key[u]:
            continue
        for j in range(ip[u], ip[u + 1]):
            v = ix[j]
            nk = k + wt[j] * mult
            if nk <= limit_key and nk < key[v]:
                key[v] = nk
                heappush(heap, (nk, v))


def sssp(indptr, indices, weights, source, limit, inf):
    """Exact distances from ``source``; entries beyond ``limit`` become ``inf``."""
    n = len(indptr) - 1
    ip, ix, wt = _lists(indptr, indices, weights)
    dist = [inf] * n
    dist[source] = 0
    _run(ip, ix, wt, dist, [(0, source)], 1, limit)
    return np.array(dist, dtype=np.int64)


def multi_source_keys(indptr, indices, weights, sources, limit, inf_key):
    """Keys ``dist(v, S) * n + p(v)`` with ``p(v)`` the smallest-id closest source."""
    n = len(indptr) - 1
    ip, ix, wt = _lists(indptr, indices, weights)
    key = [inf_key] * n
    heap = []
    for s in sources:
        key[s] = s
        heap.append((s, s))
    heap.sort()
    _run(ip, ix, wt, key, heap, n, limit * n + n - 1)
    return np.array(key, dtype=np.int64)


def apsp(indptr, indices, weights, inf):
    n = len(indptr) - 1
    ip, ix, wt = _lists(indptr, indices, weights)
    out = np.empty((n, n), dtype=np.int64)
    for s in range(n):
        dist = [inf] * n
        dist[s] = 0
        _run(ip, ix, wt, dist, [(0, s)], 1, inf - 1)
        out[s] = dist
    return out


def cluster(indptr, indices, weights, center, limit, threshold):
    """Restricted search from ``center``: ``v`` is admitted iff ``d <= limit`` and ``d < threshold[v]``.

    Returns ``{v: d}`` for admitted vertices.
    """
    ip, ix, wt = _lists(indptr, indices, weights)
    thr = threshold.tolist()
    dist = {center: 0}
    done = set()
    heap = [(0, center)]
    while heap:
        d, u = heappop(heap)
        if u in done:
            continue
        done.add(u)
        for j in range(ip[u], ip[u + 1]):
            v = ix[j]
            nd = d + wt[j]
            if nd <= limit and nd < thr[v] and nd < dist.get(v, nd + 1):
                dist[v] = nd
                heappush(heap, (nd, v))
    return dist


def clusters_all(indptr, indices, weights, levels, limit, thresholds):
    """``cluster`` for every vertex ``u``, bounded by ``thresholds[levels[u] + 1]``."""
    ip, ix, wt = _lists(indptr, indices, weights)
    thr = [row.tolist() for row in thresholds]
    out = []
    for u, lv in enumerate(levels.tolist()):
        t = thr[lv + 1]
        dist = {u: 0}
        done = set()
        heap = [(0, u)]
        while heap:
            d, x = heappop(heap)
            if x in done:
                continue
            done.add(x)
            for j in range(ip[x], ip[x + 1]):
                v = ix[j]
                nd = d + wt[j]
                if nd <= limit and nd < t[v] and nd < dist.get(v, nd + 1):
                    dist[v] = nd
                    heappush(heap, (nd, v))
        out.append(dist)
    return out


def delete_repair(indptr, indices, weights, key, a, b, w, mult, limit_key, inf_key):
    """Repair a keyed shortest-path forest after edge ``{a, b}`` of weight ``w`` was removed.

    ``indptr/indices/weights`` describe the graph *without* the edge. Vertices with
    dist part 0 are roots. Returns the sorted list of vertices whose key changed.
    """
    ip, ix, wt = _lists(indptr, indices, weights)
    k = key.tolist()
    cand = []
    for x, y in ((a, b), (b, a)):
        if k[x] < inf_key and k[y] < inf_key and k[x] == k[y] + w * mult:
            heappush(cand, (k[x], x))
    if not cand:
        return []
    suspect = set()
    queued = {x for _, x in cand}
    while cand:
        kx, x = heappop(cand)
        if kx < mult:
            continue
        supported = False
        for j in range(ip[x], ip[x + 1]):
            y = ix[j]
            if y not in suspect and k[y] < inf_key and k[y] + wt[j] * mult == kx:
                supported = True
                break
        if supported:
            continue
        suspect.add(x)
        for j in range(ip[x], ip[x + 1]):
            y = ix[j]
            if y not in queued and k[y] < inf_key and k[y] == kx + wt[j] * mult:
                queued.add(y)
                heappush(cand, (k[y], y))
    if not suspect:
        return []
    old = {x: k[x] for x in suspect}
    for x in suspect:
        k[x] = inf_key
    heap = []
    for x in suspect:
        best = inf_key
        for j in range(ip[x], ip[x + 1]):
            y = ix[j]
            if y not in suspect and k[y] < inf_key:
                nk = k[y] + wt[j] * mult
                if nk < best:
                    best = nk
        if best <= limit_key:
            k[x] = best
            heap.append((best, x))
    heap.sort()
    _run(ip, ix, wt, k, heap, mult, limit_key)
    changed = sorted(x for x in suspect if k[x] != old[x])
    for x in changed:
        key[x] = k[x]
    return changed
