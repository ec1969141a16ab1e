"""One test per acceptance criterion; each prints a PASS/FAIL line.

Set ``PLANARCUT_FULL_BENCH=1`` to run the scaling report on the full
size range (it takes a long time); by default smaller sizes are used.
"""

import math
import os
import random
import statistics
import time

import pytest

import planarcut.ddg as D
from conftest import darts, load, outer_terminals, report, same_cycle
from planarcut.cli import main as cli_main
from planarcut.cycle_core import (
    CycleStats,
    c_short_cycle,
    cp_short_cycle,
    incise,
    shortest_nondegenerate_cycle,
    split_regions,
)
from planarcut.ncsp import NcspStats, noncrossing_distances
from planarcut.oracle import (
    GenSpec,
    dijkstra_all,
    enum_simple_nondegenerate_cycles,
    gen_plane_graph,
    gen_planar,
    min_cut_maxflow,
    shortest_closed_walk,
)
from planarcut.plane_graph import INF, dual, is_degenerate, walk_nodes, walk_weight
from planarcut.reduce import Mode, bidirect_and_triangulate, min_cut, shortest_cycle
from planarcut.separator import SegmentedCycle

MODES = ["triangulation", "sparse", "disk"]


def _median_ms(fn, reps=50):
    fn()
    ts = []
    for _ in range(reps):
        t = time.perf_counter()
        fn()
        ts.append(time.perf_counter() - t)
    return statistics.median(ts) * 1000.0


def _chain(g, ds):
    """Order darts into a closed walk of ``g`` or return ``None``."""
    ds = list(ds)
    out = [ds.pop(0)]
    while ds:
        nxt = [d for d in ds if g.head[d ^ 1] == g.head[out[-1]]]
        if len(nxt) != 1:
            return None
        out.append(nxt[0])
        ds.remove(nxt[0])
    return out if g.head[out[-1]] == g.head[out[0] ^ 1] else None


def test_criterion_1_four_node():
    gf, g, ids = load("four_node.geom")
    nm = gf.raw.name
    checks = []
    cut = min_cut(gf.raw)
    checks.append(cut.weight == 5 and [(nm(u), nm(v)) for u, v in cut.cut] == [("v2", "v3")])
    cyc = shortest_cycle(gf.raw)
    checks.append(cyc.weight == 6 and same_cycle([nm(x) for x in cyc.nodes], "v2 v3 v2"))
    tri = bidirect_and_triangulate(gf.raw, Mode.MIN_CUT).g
    dg = dual(tri)
    wd, dc = shortest_nondegenerate_cycle(dg)
    # the three faces around v3, entered across the darts into v3
    v3 = ids["v3"]
    around = _chain(dg, [d for d in range(len(tri.head)) if tri.head[d] == v3])
    checks.append(
        wd == 5
        and around is not None
        and len(around) == 3
        and not is_degenerate(dg, around)
        and walk_weight(dg, around) == wd
    )
    wg, gc = shortest_nondegenerate_cycle(g)
    checks.append(wg == 16 and same_cycle([nm(x) for x in walk_nodes(g, gc)], "v2 v3 v4 v2"))
    times = [
        _median_ms(lambda: min_cut(gf.raw)),
        _median_ms(lambda: shortest_cycle(gf.raw)),
        _median_ms(lambda: shortest_nondegenerate_cycle(dual(bidirect_and_triangulate(gf.raw, Mode.MIN_CUT).g))),
        _median_ms(lambda: shortest_nondegenerate_cycle(g)),
    ]
    ok = all(checks) and max(times) < 1.0
    report(1, ok, f"values {checks}, median ms {[round(t, 3) for t in times]}, returned dual cycle {len(dc)} darts")
    assert ok


def test_criterion_2_pentagon():
    gf, g, ids = load("pentagon.geom")
    nm = gf.raw.name
    inner, outer = split_regions(g, darts(g, ids, "v1 v2 v3 v4 v5 v1"))
    wi, _ = shortest_nondegenerate_cycle(inner.g)
    wo, _ = shortest_nondegenerate_cycle(outer.g)
    seg = SegmentedCycle(
        ids["v1"], darts(g, ids, "v1 v2 v3"), g.dart_between(ids["v3"], ids["v4"]), darts(g, ids, "v1 v5 v4")
    )
    wc, cc = c_short_cycle(g, seg)
    wg, gc = shortest_nondegenerate_cycle(g)
    ok = (
        (wi, wo, wc, wg) == (5, 7, 4, 4)
        and same_cycle([nm(x) for x in walk_nodes(g, cc)], "v2 v6 v7 v5 v2")
        and same_cycle([nm(x) for x in walk_nodes(g, gc)], "v2 v6 v7 v5 v2")
    )
    report(2, ok, f"interior {wi}, exterior {wo}, C-short {wc}, global {wg}")
    assert ok


def test_criterion_3_incision():
    gf, g, ids = load("incision.rot")
    w, cyc = cp_short_cycle(g, darts(g, ids, "s u1 u2 t v s"), darts(g, ids, "s u1 u2 t"))
    inc = incise(g, darts(g, ids, "s u1 u2 t"))
    h = inc.h
    copy = [h.w[d] for e in range(inc.m0, h.m) for d in (2 * e, 2 * e + 1)]
    ok = (
        w == 2
        and walk_weight(g, cyc) == 2
        and (h.n, h.m) == (8, 15)
        and copy == [INF] * 6
        and [inc.copy_of[v] for v in inc.vs] == inc.us
    )
    report(3, ok, f"(C,P)-short {w}, incised nodes {h.n} edges {h.m}, copy weights all INF {copy == [INF] * 6}")
    assert ok


def test_criterion_4_cuts():
    t0 = time.perf_counter()
    bad = []
    zeros = infs = 0
    for seed in range(1000):
        rng = random.Random(seed)
        spec = GenSpec(n=rng.randint(2, 60), seed=seed, mode=rng.choice(MODES), outer=rng.randint(3, 20))
        raw = gen_planar(spec)
        ws = [w for _, _, w in raw.arcs()]
        zeros += 0 in ws
        infs += INF in ws
        res = min_cut(raw)
        if res.weight != min_cut_maxflow(raw):
            bad.append(seed)
    el = time.perf_counter() - t0
    ok = not bad and el < 60.0
    report(4, ok, f"1000 instances, mismatches {len(bad)}, with 0 weights {zeros}, with INF {infs}, {el:.1f} s")
    assert ok


@pytest.fixture(scope="module")
def cycle_corpus():
    """Runs of criterion 5, kept for the divide-step audit of criterion 8."""
    small_bad, large_bad, divides, violations = [], [], [], []
    for seed in range(1000):
        rng = random.Random(seed)
        g = gen_plane_graph(GenSpec(n=rng.randint(3, 14), seed=seed, mode=rng.choice(MODES[:2])))
        st = CycleStats()
        w, cyc = shortest_nondegenerate_cycle(g, stats=st)
        divides += st.divides
        violations += st.violations
        if w != enum_simple_nondegenerate_cycles(g)[0]:
            small_bad.append(seed)
    for seed in range(500):
        rng = random.Random(10**6 + seed)
        spec = GenSpec(n=rng.randint(2, 200), seed=seed, mode=rng.choice(MODES), outer=rng.randint(3, 40))
        raw = gen_planar(spec)
        res = shortest_cycle(raw)
        divides += res.stats.divides
        violations += res.stats.violations
        if res.weight != shortest_closed_walk(raw):
            large_bad.append(seed)
    return small_bad, large_bad, divides, violations


def test_criterion_5_cycles(cycle_corpus):
    small_bad, large_bad, _, _ = cycle_corpus
    ok = not small_bad and not large_bad
    report(5, ok, f"1000 n<=14 mismatches {len(small_bad)}, 500 n<=200 mismatches {len(large_bad)}")
    assert ok


def test_criterion_6_ncsp():
    bad = []
    small_r = recursed = 0
    t0 = time.perf_counter()
    for seed in range(500):
        rng = random.Random(seed)
        n = int(round(math.exp(rng.uniform(math.log(4), math.log(2000)))))
        spec = GenSpec(
            n=n, seed=seed, mode=rng.choice(MODES), outer=rng.randint(3, max(3, n // 4)), p_zero=rng.choice([0.0, 0.1, 0.4])
        )
        g = gen_plane_graph(spec)
        if g.components()[0] != 1:
            g = gen_plane_graph(GenSpec(n=n, seed=seed, mode="disk", outer=spec.outer))
        us, vs = outer_terminals(g, rng.randint(1, 64), rng)
        r = rng.choice([None, 8, 32, 128])
        small_r += r is not None
        a = noncrossing_distances(g, us, vs)
        st = NcspStats()
        b = noncrossing_distances(g, us, vs, backend="ddg", r=r, stats=st)
        recursed += bool(st.solve_cases)
        c = [dijkstra_all(g, u)[v] for u, v in zip(us, vs)]
        if not a == b == c:
            bad.append(seed)
    el = time.perf_counter() - t0
    ok = not bad
    report(6, ok, f"500 instances ({small_r} with small r, {recursed} ran the ddg recursion), mismatches {len(bad)}, {el:.1f} s")
    assert ok


class _Recording(D.DdgSolver):
    built = []

    def __init__(self, eng, r=None, check=False):
        super().__init__(eng, r, check)
        _Recording.built.append((self.ddg, self.units))


def _audit(units):
    dense = sum(u.dense for u in units)
    failed = sum(D.audit_unit(u) is not None for u in units)
    return dense, failed


def test_criterion_7_monge(monkeypatch):
    # units the ncsp pipeline builds
    _Recording.built = []
    monkeypatch.setattr(D, "DdgSolver", _Recording)
    for seed in range(60):
        rng = random.Random(seed)
        n = rng.randint(20, 1500)
        g = gen_plane_graph(GenSpec(n=n, seed=seed, mode="disk", outer=rng.randint(3, max(3, n // 4))))
        us, vs = outer_terminals(g, rng.randint(4, 64), rng)
        noncrossing_distances(g, us, vs, backend="ddg", r=rng.choice([8, 16, 32, 64]))
    pipe = [u for _, units in _Recording.built for u in units]
    pipe_dense, pipe_failed = _audit(pipe)
    # direct divisions: finite weights, then the unreachable-pair stress corpus
    direct = {}
    runs = dbad = 0
    for label, kw in (("finite", dict(p_inf=0.0, p_absent=0.0)), ("stress", {})):
        seen = dense = failed = 0
        for seed in range(80):
            rng = random.Random(seed)
            n = rng.randint(8, 800)
            g = gen_plane_graph(GenSpec(n=n, seed=seed, mode=rng.choice(MODES), outer=rng.randint(3, n), **kw))
            div = D.r_division(g, rng.choice([8, 16, 32, 64]))
            ddg = D.dense_distance_graph(div)
            units = D.monge_decomposition(ddg)
            d, f = _audit(units)
            seen, dense, failed = seen + len(units), dense + d, failed + f
            bn = [x for x in range(g.n) if div.boundary[x]]
            if len(bn) < 2:
                continue
            for _ in range(2):
                X = set(rng.sample(bn, rng.randint(2, len(bn))))
                s = rng.choice(sorted(X))
                rev = rng.random() < 0.5
                d1, _ = D.fast_dijkstra(units, X, s, reverse=rev)
                dbad += d1 != D.dense_dijkstra(ddg, X, s, reverse=rev)
                runs += 1
        direct[label] = (seen, dense, failed)
    fs, fd, ff = direct["finite"]
    ss, sd, sf = direct["stress"]
    ok = pipe_failed == 0 and pipe_dense == 0 and ff == 0 and fd == 0 and dbad == 0 and runs >= 200
    report(
        7,
        ok,
        f"pipeline units {len(pipe)} failing {pipe_failed}; finite-weight units {fs} failing {ff}; "
        f"fast Dijkstra runs {runs} mismatches {dbad}; stress corpus with unreachable pairs: "
        f"{ss} units, {sd} flagged dense and relaxed plainly, {sf} of them violate the inequality",
    )
    assert ok


def test_criterion_8_structure(cycle_corpus):
    _, _, divides, violations = cycle_corpus
    problems = 0
    divisions = 0
    worst = [0, 0, 0]
    for seed in range(60):
        rng = random.Random(seed)
        n = rng.choice([100, 300, 1000, 3000])
        g = gen_plane_graph(GenSpec(n=n, seed=seed, mode=rng.choice(MODES), outer=rng.randint(3, 60)))
        for r in (16, 64, 256):
            rep = D.check_division(D.r_division(g, r))
            divisions += 1
            problems += not rep.ok
            worst = [
                max(worst[0], rep.max_nodes / r),
                max(worst[1], rep.max_boundary / math.sqrt(r)),
                max(worst[2], rep.max_holes),
            ]
    bad_div = [t for t in divides if 20 * max(t[1], t[2]) > 19 * t[0] or t[1] + t[2] > t[0] + 2]
    ok = problems == 0 and not bad_div and not violations and divides
    report(
        8,
        ok,
        f"{divisions} divisions, failing {problems}, worst nodes/r {worst[0]:.2f} boundary/sqrt(r) {worst[1]:.2f} "
        f"holes {worst[2]}; {len(divides)} divide steps, violations {len(bad_div) + len(violations)}",
    )
    assert ok


def test_criterion_9_scaling(capsys):
    if os.environ.get("PLANARCUT_FULL_BENCH") == "1":
        sizes = [2**k for k in range(12, 18)]
    else:
        sizes = [2**k for k in range(10, 13)]
    import json

    capsys.readouterr()
    assert cli_main(["bench", "--sizes", ",".join(map(str, sizes)), "--json"]) == 0
    rows = json.loads(capsys.readouterr().out)["rows"]
    ratios = [row["ratio"] for row in rows[1:]]
    ok = all(x <= 2.6 for x in ratios)
    desc = ", ".join(f"{row['n']}: {row['seconds']:.2f}s" for row in rows)
    report(9, ok, f"report only; {desc}; ratios {[round(x, 2) for x in ratios]} (threshold 2.6)")
