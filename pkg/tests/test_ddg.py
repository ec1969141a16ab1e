import math
import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

import planarcut.ddg as D
from conftest import outer_terminals
from planarcut.ncsp import NcspStats, noncrossing_distances
from planarcut.oracle import GenSpec, dijkstra_all, gen_plane_graph
from planarcut.plane_graph import INF, walk_weight


def _graph(seed, nmax=150):
    rng = random.Random(seed)
    n = rng.randint(4, nmax)
    g = gen_plane_graph(
        GenSpec(n=n, seed=seed, mode=rng.choice(["disk", "sparse", "triangulation"]), outer=rng.randint(3, n))
    )
    return g, rng


def _setup(seed, nmax=150):
    g, rng = _graph(seed, nmax)
    div = D.r_division(g, rng.choice([4, 8, 16, 32, 64]))
    ddg = D.dense_distance_graph(div)
    st_ = {}
    units = D.monge_decomposition(ddg, st_)
    return g, rng, div, ddg, units


def test_choose_r():
    assert D.choose_r(1) == 1
    assert D.choose_r(10) == 10
    assert D.choose_r(100) == 100
    assert D.choose_r(10**6) == 10**6
    n = 2**40
    assert D.choose_r(n) == math.ceil(40**6)
    assert D.choose_r(40) == 40


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 10**6))
def test_division_constants(seed):
    g, rng = _graph(seed, 400)
    div = D.r_division(g, rng.choice([16, 64]))
    rep = D.check_division(div)
    assert rep.ok, rep.problems


def test_division_with_terminal_pairs():
    g = gen_plane_graph(GenSpec(n=120, seed=5, mode="disk", outer=30))
    us, vs = outer_terminals(g, 10, random.Random(1))
    div = D.r_division(g, 16, pairs=list(zip(us, vs)))
    assert D.check_division(div).ok
    for k in div.marked:
        assert div.boundary[us[k]] and div.boundary[vs[k]]


@pytest.mark.parametrize("seed", range(12))
def test_dense_distances_and_streams(seed):
    g, _, div, ddg, _ = _setup(seed)
    for cid, t in enumerate(ddg.tables):
        if t is None:
            continue
        lg = div.comps[cid].local
        for i, x in enumerate(t.bn):
            dist = dijkstra_all(lg.g, lg.node_new[x])
            for j, y in enumerate(t.bn):
                assert t.kd[i][j] == dist[lg.node_new[y]]
                if i == j or t.kd[i][j] is INF:
                    continue
                fwd = list(ddg.stream_forward(cid, x, y))
                bwd = list(ddg.stream_backward(cid, x, y))
                assert walk_weight(g, fwd) == t.kd[i][j]
                assert walk_weight(g, bwd) == t.kd[i][j]
                if fwd:
                    assert g.head[fwd[0] ^ 1] == x and g.head[fwd[-1]] == y


@pytest.mark.parametrize("seed", range(20))
def test_monge_units(seed):
    _, _, _, ddg, units = _setup(seed)
    for u in units:
        if u.dense:
            continue
        assert D.audit_unit(u) is None
        assert D.audit_matrix(u)
    for cid, t in enumerate(ddg.tables):
        if t is None:
            continue
        want = {(a, b) for a in t.bn for b in t.bn if a != b}
        got = set()
        for u in units:
            if u.comp == cid:
                got.update(u.pairs())
        assert want <= got


def test_single_hole_gives_type1():
    g = gen_plane_graph(GenSpec(n=60, seed=2, mode="triangulation"))
    div = D.r_division(g, 16)
    units = D.monge_decomposition(D.dense_distance_graph(div))
    one_hole = {cid for cid, c in enumerate(div.comps) if len(c.holes) == 1 and c.boundary}
    assert one_hole
    assert all(u.kind == 1 for u in units if u.comp in one_hole)


def test_audit_finds_violation():
    t = D.CompTables([0, 1, 2, 3], {k: k for k in range(4)}, [], [], [], [], [[0, 1, 9, 1], [1, 0, 1, 9], [9, 1, 0, 1], [1, 9, 1, 0]])
    u = D.MongeUnit(2, 0, [0, 1], [3, 2], t)
    # kd[0][3] + kd[1][2] = 2 while the crossing pair kd[0][2] + kd[1][3] = 18 must not be smaller
    assert D.audit_unit(u) is None
    bad = D.MongeUnit(2, 0, [0, 1], [2, 3], t)
    assert D.audit_unit(bad) is not None
    assert not D.audit_matrix(bad)


@pytest.mark.parametrize("seed", range(25))
def test_fast_dijkstra_matches_dense(seed):
    g, rng, div, ddg, units = _setup(seed, 300)
    bn = [x for x in range(g.n) if div.boundary[x]]
    if len(bn) < 2:
        return
    for _ in range(4):
        X = set(rng.sample(bn, max(2, len(bn) * 2 // 3)))
        s = rng.choice(sorted(X))
        for rev in (False, True):
            stats = D.FastDijkstraStats()
            d1, parent = D.fast_dijkstra(units, X, s, reverse=rev, stats=stats)
            assert d1 == D.dense_dijkstra(ddg, X, s, reverse=rev)
            for v, (u, _) in parent.items():
                w = ddg.weight(v, u) if rev else ddg.weight(u, v)
                assert d1[v] <= d1[u] + w


class _Checked(D.DdgSolver):
    def __init__(self, eng, r=None, check=False):
        super().__init__(eng, r, check=True)


def test_boundary_split_matches_flood(monkeypatch):
    monkeypatch.setattr(D, "DdgSolver", _Checked)
    splits = 0
    for seed in range(40):
        g, rng = _graph(seed, 200)
        if g.components()[0] != 1:
            continue
        us, vs = outer_terminals(g, rng.randint(4, 32), rng)
        stats = NcspStats()
        got = noncrossing_distances(g, us, vs, backend="ddg", r=rng.choice([4, 8, 16]), stats=stats)
        assert got == [dijkstra_all(g, u)[v] for u, v in zip(us, vs)]
        splits += sum(stats.solve_cases.values())
    assert splits > 0
