"""``dynhub`` command line: run traces through an oracle, generate traces, sweep specs."""
from __future__ import annotations

import argparse
import csv
import io
import sys
import time
from dataclasses import dataclass, field
from pathlib import Path
from typing import List, Optional

from .decremental import DecrementalConfig, DecrementalOracle
from .errors import DynHubError, OracleSpecError, VerificationFailure
from .exact import ExactOracle
from .graph import (Insert, Query, TraceConfig, generate_trace, infer_dimensions,
                    parse_trace, serialize_trace, trace_header)
from .tower import TowerConfig, build_tower, preset_constant_stretch, preset_loglog
from .tz import StaticTZOracle

CSV_HEADER = ["trace", "spec", "seed", "queries", "violations", "max_stretch", "mean_stretch",
              "updates", "phases", "h_edges_max", "recourse_total", "us_per_update", "us_per_query"]


# --- oracle specs -------------------------------------------------------------

_FIELDS = {
    "exact": [],
    "tz-static": ["k"],
    "decr": ["k", "d", "eps"],
    "composed": ["k", "eps", "ell"],
    "tower": ["depth", "k", "eps"],
    "preset": ["rho"],
}


def parse_spec(spec: str):
    """``name[:a,b,...]`` with positional or ``key=value`` arguments -> ``(name, {key: str})``."""
    name, _, rest = spec.strip().partition(":")
    if name not in _FIELDS:
        raise OracleSpecError(f"unknown oracle {name!r} (choose from {', '.join(_FIELDS)})")
    args = {}
    pos = list(_FIELDS[name])
    for i, tok in enumerate(x.strip() for x in rest.split(",") if x.strip()):
        if "=" in tok:
            key, val = (s.strip() for s in tok.split("=", 1))
        elif i < len(pos):
            key, val = pos[i], tok
        elif name == "tower":
            key, val = f"ell_{i - len(pos) + 1}", tok
        else:
            raise OracleSpecError(f"too many arguments for {name!r}: {spec!r}")
        args[key] = val
    return name, args


def _num(args, key, conv, default=None):
    if key not in args:
        if default is None:
            raise OracleSpecError(f"missing argument {key!r}")
        return default
    try:
        return conv(args.pop(key))
    except ValueError:
        raise OracleSpecError(f"bad value for {key!r}") from None


def _tower_ells(args, depth):
    ells = tuple(int(args.pop(f"ell_{j}")) for j in range(1, depth + 1) if f"ell_{j}" in args)
    if "ell" in args:
        ells = (int(args.pop("ell")),) * depth
    return ells


def make_oracle(spec: str, n: int, max_weight: int, seed: int = 0):
    name, args = parse_spec(spec)
    try:
        if name == "exact":
            o = ExactOracle(n, max_weight, seed)
        elif name == "tz-static":
            o = StaticTZOracle(n, max_weight, _num(args, "k", int), seed)
        elif name == "decr":
            k = _num(args, "k", int, 2)
            d = args.pop("d", "scaled")
            eps = _num(args, "eps", float, 0.25)
            if d in ("scaled", "-", ""):
                cfg = DecrementalConfig(k=k, epsilon=eps, seed=seed, scaled_mode=True)
            else:
                cfg = DecrementalConfig(k=k, d=int(d), seed=seed, scaled_mode=False)
            o = DecrementalOracle(n, max_weight, cfg)
        elif name in ("composed", "tower"):
            depth = 1 if name == "composed" else _num(args, "depth", int, 1)
            m = args.pop("m", None)
            cfg = TowerConfig(depth=depth, k=_num(args, "k", int, 2), epsilon=_num(args, "eps", float, 0.25),
                              ells=_tower_ells(args, depth), seed=seed,
                              m_hint=None if m is None else int(m))
            o = build_tower(cfg, n, max_weight)
        else:
            rho = args.pop("rho", None)
            if rho == "loglog":
                cfg = preset_loglog(n, _num(args, "i", int, 2), _num(args, "c", int, 1), seed=seed)
            else:
                cfg = preset_constant_stretch(float(rho) if rho is not None else 1.0, seed=seed)
            o = build_tower(cfg, n, max_weight)
    except (ValueError, TypeError) as exc:
        if isinstance(exc, OracleSpecError):
            raise
        raise OracleSpecError(f"{spec!r}: {exc}") from exc
    if args:
        raise OracleSpecError(f"unknown arguments for {name!r}: {sorted(args)}")
    return o


# --- run ----------------------------------------------------------------------

@dataclass
class QueryRow:
    t: int
    s: int
    t_vertex: int
    exact: Optional[int]
    answer: int
    stretch: Optional[float]


@dataclass
class RunReport:
    trace: str
    spec: str
    seed: int
    rows: List[QueryRow] = field(default_factory=list)
    violations: int = 0
    updates: int = 0
    phases: int = 0
    h_edges_max: int = 0
    recourse_total: int = 0
    update_seconds: float = 0.0
    query_seconds: float = 0.0
    error: Optional[str] = None

    @property
    def queries(self):
        return len(self.rows)

    def stretches(self):
        return [r.stretch for r in self.rows if r.stretch is not None]

    @property
    def max_stretch(self):
        s = self.stretches()
        return max(s) if s else None

    @property
    def mean_stretch(self):
        s = self.stretches()
        return sum(s) / len(s) if s else None

    def csv_row(self, timing: bool = True):
        def fmt(x):
            return "" if x is None else f"{x:.6f}"
        if self.error is not None:
            return [self.trace, self.spec, self.seed, "", -1] + [""] * (len(CSV_HEADER) - 5)
        per_u = 1e6 * self.update_seconds / self.updates if self.updates and timing else None
        per_q = 1e6 * self.query_seconds / self.queries if self.queries and timing else None
        return [self.trace, self.spec, self.seed, self.queries, self.violations,
                fmt(self.max_stretch), fmt(self.mean_stretch), self.updates, self.phases,
                self.h_edges_max, self.recourse_total,
                "" if per_u is None else f"{per_u:.3f}", "" if per_q is None else f"{per_q:.3f}"]


def _within(answer, exact, inf_exact, inf_answer, bound):
    if exact >= inf_exact:
        return answer >= inf_answer
    return exact <= answer <= bound * exact + 1e-9


def run(trace_path, oracle_spec: str, verify: bool = False, seed: int = 0) -> RunReport:
    path = Path(trace_path)
    text = path.read_text()
    events = parse_trace(text)
    n, w = trace_header(text)
    n0, w0 = infer_dimensions(events)
    n, w = max(n or 0, n0), max(w or 0, w0)
    oracle = make_oracle(oracle_spec, n, w, seed)
    ref = ExactOracle(n, w) if verify else None
    bound = getattr(oracle, "stretch", 1.0)
    rep = RunReport(path.name, oracle_spec, seed)
    clock = time.perf_counter
    for e in events:
        if isinstance(e, Query):
            t0 = clock()
            ans = oracle.query(e.s, e.t_vertex)
            rep.query_seconds += clock() - t0
            exact = st = None
            if ref is not None:
                exact = ref.query(e.s, e.t_vertex)
                if not _within(ans, exact, ref.sentinel, oracle.sentinel, bound):
                    rep.violations += 1
                if 0 < exact < ref.sentinel:
                    st = ans / exact
            rep.rows.append(QueryRow(e.t, e.s, e.t_vertex, exact, ans, st))
            continue
        t0 = clock()
        if isinstance(e, Insert):
            oracle.insert(e.u, e.v, e.w)
        else:
            oracle.delete(e.u, e.v)
        rep.update_seconds += clock() - t0
        rep.updates += 1
        if ref is not None:
            if isinstance(e, Insert):
                ref.insert(e.u, e.v, e.w)
            else:
                ref.delete(e.u, e.v)
    m = oracle.metrics()
    rep.phases, rep.h_edges_max, rep.recourse_total = m["phases"], m["h_edges_max"], m["recourse_total"]
    return rep


def write_csv(reports, out, timing: bool = True):
    w = csv.writer(out, lineterminator="\n")
    w.writerow(CSV_HEADER)
    for r in reports:
        w.writerow(r.csv_row(timing))


def _emit(reports, out_path, timing):
    buf = io.StringIO()
    write_csv(reports, buf, timing)
    if out_path:
        Path(out_path).write_text(buf.getvalue())
    else:
        sys.stdout.write(buf.getvalue())


def sweep(specs: List[str], trace_paths: List[Path], verify: bool = True, seed: int = 0) -> List[RunReport]:
    """One report per ``(spec, trace)``; a failing cell is recorded and the sweep continues."""
    out = []
    for spec in specs:
        for p in trace_paths:
            try:
                out.append(run(p, spec, verify, seed))
            except (DynHubError, ValueError, OSError) as exc:
                rep = RunReport(Path(p).name, spec, seed, error=f"{type(exc).__name__}: {exc}")
                out.append(rep)
    return out


def read_grid(path) -> List[str]:
    lines = Path(path).read_text().splitlines()
    return [ln.strip() for ln in lines if ln.strip() and not ln.lstrip().startswith("#")]


# --- entry point --------------------------------------------------------------

def build_parser():
    ap = argparse.ArgumentParser(prog="dynhub", description=__doc__)
    sub = ap.add_subparsers(dest="cmd", required=True)

    r = sub.add_parser("run", help="answer a trace's queries with one oracle")
    r.add_argument("--trace", required=True)
    r.add_argument("--oracle", required=True, help="e.g. exact, tz-static:2, decr:2, composed:2,0.25,8, tower:2,2")
    r.add_argument("--verify", action="store_true", help="check every answer against exact distances")
    r.add_argument("--seed", type=int, default=0)
    r.add_argument("--out", help="CSV path (default stdout)")
    r.add_argument("--rows", help="also write per-query rows to this CSV")
    r.add_argument("--no-timing", action="store_true", help="leave timing columns empty")

    g = sub.add_parser("gen", help="write a random trace")
    g.add_argument("--n", type=int, required=True)
    g.add_argument("--updates", type=int, required=True)
    g.add_argument("--seed", type=int, default=0)
    g.add_argument("--out", required=True)
    g.add_argument("--initial-edges", type=int, default=0)
    g.add_argument("--insert-fraction", type=float, default=0.5)
    g.add_argument("--query-fraction", type=float, default=0.2)
    g.add_argument("--max-weight", type=int, default=100)

    s = sub.add_parser("sweep", help="run every spec in a grid file over a directory of traces")
    s.add_argument("--grid", required=True)
    s.add_argument("--traces", required=True)
    s.add_argument("--out", help="CSV path (default stdout)")
    s.add_argument("--seed", type=int, default=0)
    s.add_argument("--no-verify", action="store_true")
    s.add_argument("--no-timing", action="store_true")
    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        if args.cmd == "gen":
            cfg = TraceConfig(n=args.n, initial_edge_count=args.initial_edges, update_count=args.updates,
                              insert_fraction=args.insert_fraction, query_fraction=args.query_fraction,
                              max_weight=args.max_weight, rng_seed=args.seed)
            Path(args.out).write_text(serialize_trace(generate_trace(cfg), args.n, args.max_weight))
            return 0
        if args.cmd == "run":
            rep = run(args.trace, args.oracle, args.verify, args.seed)
            _emit([rep], args.out, not args.no_timing)
            if args.rows:
                with open(args.rows, "w", newline="") as fh:
                    w = csv.writer(fh, lineterminator="\n")
                    w.writerow(["t", "s", "t_vertex", "exact", "answer", "stretch"])
                    for q in rep.rows:
                        w.writerow([q.t, q.s, q.t_vertex, "" if q.exact is None else q.exact, q.answer,
                                    "" if q.stretch is None else f"{q.stretch:.6f}"])
            if rep.violations:
                raise VerificationFailure(f"{rep.violations} of {rep.queries} answers out of bounds")
            return 0
        specs = read_grid(args.grid)
        traces = sorted(Path(args.traces).glob("*.trace"))
        reports = sweep(specs, traces, not args.no_verify, args.seed)
        _emit(reports, args.out, not args.no_timing)
        if any(r.violations > 0 for r in reports):
            return 1
        return 2 if any(r.error for r in reports) else 0
    except VerificationFailure as exc:
        print(f"dynhub: verification failed: {exc}", file=sys.stderr)
        return 1
    except (DynHubError, OSError, ValueError) as exc:
        print(f"dynhub: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
