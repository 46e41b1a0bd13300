# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled shortest-path kernels; mirror of ``dynhub._pykernels``."""
import numpy as np
cimport numpy as cnp

ctypedef cnp.int64_t i64

cnp.import_array()


cdef struct Heap:
    i64 *key
    i64 *item
    Py_ssize_t size


cdef inline void heap_push(Heap *h, i64 k, i64 v) noexcept nogil:
    cdef Py_ssize_t i = h.size
    cdef Py_ssize_t p
    h.size += 1
    while i > 0:
        p = (i - 1) >> 1
        if h.key[p] < k or (h.key[p] == k and h.item[p] <= v):
            break
        h.key[i] = h.key[p]
        h.item[i] = h.item[p]
        i = p
    h.key[i] = k
    h.item[i] = v


cdef inline void heap_pop(Heap *h, i64 *k, i64 *v) noexcept nogil:
    cdef Py_ssize_t i = 0, c
    cdef i64 lk, lv
    k[0] = h.key[0]
    v[0] = h.item[0]
    h.size -= 1
    if h.size == 0:
        return
    lk = h.key[h.size]
    lv = h.item[h.size]
    while True:
        c = 2 * i + 1
        if c >= h.size:
            break
        if c + 1 < h.size and (h.key[c + 1] < h.key[c] or
                               (h.key[c + 1] == h.key[c] and h.item[c + 1] < h.item[c])):
            c += 1
        if lk < h.key[c] or (lk == h.key[c] and lv <= h.item[c]):
            break
        h.key[i] = h.key[c]
        h.item[i] = h.item[c]
        i = c
    h.key[i] = lk
    h.item[i] = lv


cdef void run(const i64[:] ip, const i64[:] ix, const i64[:] wt, i64[:] key,
              Heap *h, i64 mult, i64 limit_key) noexcept nogil:
    cdef i64 k, u, v, nk
    cdef Py_ssize_t j
    while h.size > 0:
        heap_pop(h, &k, &u)
        if k != key[u]:
            continue
        for j in range(ip[u], ip[u + 1]):
            v = ix[j]
            nk = k + wt[j] * mult
            if nk <= limit_key and nk < key[v]:
                key[v] = nk
                heap_push(h, nk, v)


cdef class _HeapBuf:
    cdef object keys
    cdef object items
    cdef Heap h

    def __cinit__(self, Py_ssize_t cap):
        self.keys = np.empty(cap + 1, dtype=np.int64)
        self.items = np.empty(cap + 1, dtype=np.int64)
        cdef i64[:] kk = self.keys
        cdef i64[:] vv = self.items
        self.h.key = &kk[0]
        self.h.item = &vv[0]
        self.h.size = 0


def sssp(const i64[:] indptr, const i64[:] indices, const i64[:] weights,
         i64 source, i64 limit, i64 inf):
    cdef Py_ssize_t n = indptr.shape[0] - 1
    out = np.full(n, inf, dtype=np.int64)
    cdef i64[:] dist = out
    cdef _HeapBuf buf = _HeapBuf(indices.shape[0] + n)
    dist[source] = 0
    heap_push(&buf.h, 0, source)
    run(indptr, indices, weights, dist, &buf.h, 1, limit)
    return out


def multi_source_keys(const i64[:] indptr, const i64[:] indices, const i64[:] weights,
                      sources, i64 limit, i64 inf_key):
    cdef Py_ssize_t n = indptr.shape[0] - 1
    out = np.full(n, inf_key, dtype=np.int64)
    cdef i64[:] key = out
    cdef _HeapBuf buf = _HeapBuf(indices.shape[0] + n)
    cdef i64 s
    for s in sources:
        key[s] = s
        heap_push(&buf.h, s, s)
    run(indptr, indices, weights, key, &buf.h, n, limit * n + n - 1)
    return out


def apsp(const i64[:] indptr, const i64[:] indices, const i64[:] weights, i64 inf):
    cdef Py_ssize_t n = indptr.shape[0] - 1
    out = np.full((n, n), inf, dtype=np.int64)
    cdef i64[:, :] m = out
    cdef _HeapBuf buf = _HeapBuf(indices.shape[0] + n)
    cdef Py_ssize_t s
    for s in range(n):
        m[s, s] = 0
        buf.h.size = 0
        heap_push(&buf.h, 0, s)
        run(indptr, indices, weights, m[s], &buf.h, 1, inf - 1)
    return out


def cluster(const i64[:] indptr, const i64[:] indices, const i64[:] weights,
            i64 center, i64 limit, const i64[:] threshold):
    cdef Py_ssize_t n = indptr.shape[0] - 1
    cdef i64 big = limit + 1
    scratch = np.full(n, big, dtype=np.int64)
    cdef i64[:] dist = scratch
    cdef _HeapBuf buf = _HeapBuf(indices.shape[0] + n)
    cdef i64 d, u, v, nd
    cdef Py_ssize_t j
    reached = []
    dist[center] = 0
    heap_push(&buf.h, 0, center)
    while buf.h.size > 0:
        heap_pop(&buf.h, &d, &u)
        if d != dist[u]:
            continue
        reached.append(u)
        for j in range(indptr[u], indptr[u + 1]):
            v = indices[j]
            nd = d + weights[j]
            if nd <= limit and nd < threshold[v] and nd < dist[v]:
                dist[v] = nd
                heap_push(&buf.h, nd, v)
    return {int(x): int(dist[x]) for x in reached}


def clusters_all(const i64[:] indptr, const i64[:] indices, const i64[:] weights,
                 const i64[:] levels, i64 limit, const i64[:, :] thresholds):
    cdef Py_ssize_t n = indptr.shape[0] - 1
    cdef i64 big = limit + 1
    scratch = np.full(n, big, dtype=np.int64)
    cdef i64[:] dist = scratch
    order_arr = np.empty(n, dtype=np.int64)
    cdef i64[:] order = order_arr
    cdef _HeapBuf buf = _HeapBuf(indices.shape[0] + n)
    cdef i64 d, u, v, nd, c
    cdef Py_ssize_t j, cnt, r
    cdef const i64[:] thr
    out = []
    for c in range(n):
        thr = thresholds[levels[c] + 1]
        cnt = 0
        dist[c] = 0
        heap_push(&buf.h, 0, c)
        while buf.h.size > 0:
            heap_pop(&buf.h, &d, &u)
            if d != dist[u]:
                continue
            order[cnt] = u
            cnt += 1
            for j in range(indptr[u], indptr[u + 1]):
                v = indices[j]
                nd = d + weights[j]
                if nd <= limit and nd < thr[v] and nd < dist[v]:
                    dist[v] = nd
                    heap_push(&buf.h, nd, v)
        res = {}
        for r in range(cnt):
            u = order[r]
            res[u] = dist[u]
        # reset every vertex that was relaxed, settled or not
        for r in range(cnt):
            u = order[r]
            dist[u] = big
            for j in range(indptr[u], indptr[u + 1]):
                dist[indices[j]] = big
        out.append(res)
    return out


def delete_repair(const i64[:] indptr, const i64[:] indices, const i64[:] weights,
                  i64[:] key, i64 a, i64 b, i64 w, i64 mult, i64 limit_key, i64 inf_key):
    cdef Py_ssize_t n = indptr.shape[0] - 1
    cdef _HeapBuf buf = _HeapBuf(indices.shape[0] + n)
    flags_arr = np.zeros(n, dtype=np.int8)  # 1 queued, 2 suspect
    cdef cnp.int8_t[:] flags = flags_arr
    cdef i64 kx, x, y, best, nk
    cdef Py_ssize_t j
    cdef bint supported
    if key[a] < inf_key and key[b] < inf_key and key[a] == key[b] + w * mult:
        heap_push(&buf.h, key[a], a)
        flags[a] = 1
    if key[a] < inf_key and key[b] < inf_key and key[b] == key[a] + w * mult:
        heap_push(&buf.h, key[b], b)
        flags[b] = 1
    if buf.h.size == 0:
        return []
    suspects = []
    while buf.h.size > 0:
        heap_pop(&buf.h, &kx, &x)
        if kx < mult:
            continue
        supported = False
        for j in range(indptr[x], indptr[x + 1]):
            y = indices[j]
            if flags[y] != 2 and key[y] < inf_key and key[y] + weights[j] * mult == kx:
                supported = True
                break
        if supported:
            continue
        flags[x] = 2
        suspects.append(x)
        for j in range(indptr[x], indptr[x + 1]):
            y = indices[j]
            if flags[y] == 0 and key[y] < inf_key and key[y] == kx + weights[j] * mult:
                flags[y] = 1
                heap_push(&buf.h, key[y], y)
    if not suspects:
        return []
    old = {s: key[s] for s in suspects}
    for x in suspects:
        key[x] = inf_key
    buf.h.size = 0
    for x in suspects:
        best = inf_key
        for j in range(indptr[x], indptr[x + 1]):
            y = indices[j]
            if flags[y] != 2 and key[y] < inf_key:
                nk = key[y] + weights[j] * mult
                if nk < best:
                    best = nk
        if best <= limit_key:
            key[x] = best
            heap_push(&buf.h, best, x)
    run(indptr, indices, weights, key, &buf.h, mult, limit_key)
    return sorted(int(s) for s in suspects if key[s] != old[s])
