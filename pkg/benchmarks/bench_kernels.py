"""Time the compiled kernels against the pure-Python fallback.

    python benchmarks/bench_kernels.py [--n 400] [--degree 8] [--repeat 3]

Prints one line per kernel with both timings and the speedup. Results of
the two backends are compared on every call; a mismatch aborts.
"""
import argparse
import random
import sys
import time

import numpy as np

from dynhub import _pykernels
from dynhub.graph import DynamicGraph
from dynhub.kernels import INF_KEY, compiled
from dynhub.tz import pivot_keys, sample_hierarchy, thresholds


def random_graph(n, degree, max_weight, seed):
    rng = random.Random(seed)
    g = DynamicGraph(n, max_weight)
    target = min(n * degree // 2, n * (n - 1) // 2)
    while g.m < target:
        u, v = rng.randrange(n), rng.randrange(n)
        if u != v and not g.has_edge(u, v):
            g.insert(u, v, rng.randint(1, max_weight))
    return g


def best_of(fn, repeat):
    best, out = float("inf"), None
    for _ in range(repeat):
        t0 = time.perf_counter()
        out = fn()
        best = min(best, time.perf_counter() - t0)
    return best, out


def same(a, b):
    if isinstance(a, np.ndarray):
        return np.array_equal(a, b)
    return a == b


def cases(g, k, seed):
    n = g.n
    ip, ix, wt = g.csr()
    inf = g.sentinel
    h = sample_hierarchy(n, k, seed)
    keys = pivot_keys((ip, ix, wt), n, h, inf - 1)
    thr = np.stack([thresholds(x, n) for x in keys])
    levels = np.asarray(h.level_of, dtype=np.int64)
    sources = sorted(h.levels[1])
    yield "sssp", lambda m: m.sssp(ip, ix, wt, 0, inf - 1, inf)
    yield "multi_source_keys", lambda m: m.multi_source_keys(ip, ix, wt, sources, inf - 1, INF_KEY)
    yield "clusters_all", lambda m: m.clusters_all(ip, ix, wt, levels, inf - 1, thr)
    if n <= 600:
        yield "apsp", lambda m: m.apsp(ip, ix, wt, inf)

    # repair after cutting an edge at one of the level-1 sources
    a = sources[0]
    b = next(iter(g.adj[a])) if g.adj[a] else None
    if b is not None:
        g2 = g.copy()
        w = g2.delete(a, b)
        csr2 = g2.csr()
        lim = (inf - 1) * n + n - 1

        def rep(m):
            key = keys[1].copy()
            return m.delete_repair(*csr2, key, a, b, w, n, lim, INF_KEY), key
        yield "delete_repair", rep


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--n", type=int, default=400)
    ap.add_argument("--degree", type=int, default=8)
    ap.add_argument("--max-weight", type=int, default=100)
    ap.add_argument("--k", type=int, default=3)
    ap.add_argument("--repeat", type=int, default=3)
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args(argv)
    if compiled is None:
        print("compiled extension not built; nothing to compare", file=sys.stderr)
        return 1
    g = random_graph(args.n, args.degree, args.max_weight, args.seed)
    print(f"n={g.n} m={g.m} W={args.max_weight} k={args.k}")
    print(f"{'kernel':<20}{'python s':>12}{'compiled s':>12}{'speedup':>10}")
    for name, fn in cases(g, args.k, args.seed):
        tp, rp = best_of(lambda: fn(_pykernels), args.repeat)
        tc, rc = best_of(lambda: fn(compiled), args.repeat)
        ok = all(same(x, y) for x, y in zip(rp, rc)) if isinstance(rp, tuple) else same(rp, rc)
        if not ok:
            print(f"{name}: backends disagree", file=sys.stderr)
            return 2
        print(f"{name:<20}{tp:>12.5f}{tc:>12.5f}{tp / max(tc, 1e-9):>9.1f}x")
    return 0


if __name__ == "__main__":
    sys.exit(main())
