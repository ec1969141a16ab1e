import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from planarcut.oracle import GenSpec, enum_simple_nondegenerate_cycles, gen_plane_graph
from planarcut.plane_graph import (
    INF,
    InconsistentRotation,
    NegativeWeight,
    PlaneGraph,
    build_from_rotation,
    check_weight,
    dual,
    is_degenerate,
    is_simple,
    suppress_degree2,
    walk_weight,
    wsum,
)
from planarcut.separator import triangulate


def test_inf_saturates():
    assert INF + 3 is INF
    assert 3 + INF is INF
    assert INF > 10**30
    assert not INF < 5
    assert wsum([1, 2, INF]) is INF
    assert wsum([1, 2]) == 3
    assert sorted([INF, 2, 0]) == [0, 2, INF]


def test_check_weight():
    check_weight(0)
    check_weight(INF)
    with pytest.raises(NegativeWeight):
        check_weight(-1)
    with pytest.raises(TypeError):
        check_weight(1.5)


def test_single_node_is_valid():
    g = build_from_rotation(1, [], [[]])
    assert g.n == 1 and g.m == 0


def test_four_node_faces(four_node):
    _, g, ids = four_node
    assert g.n == 4 and len(g.head) == 10
    faces = g.faces
    assert g.n - g.m + len(faces) == 2
    seen = sorted(d for f in faces for d in f)
    assert seen == list(range(len(g.head)))


def test_rotation_must_match_edges():
    edges = [(0, 1, 1, 1), (1, 2, 1, 1)]
    with pytest.raises(InconsistentRotation):
        build_from_rotation(3, edges, [[0], [0], [1]])


def _graphs():
    return st.builds(
        lambda n, seed, mode: gen_plane_graph(GenSpec(n=n, seed=seed, mode=mode)),
        st.integers(4, 40),
        st.integers(0, 10**6),
        st.sampled_from(["triangulation", "sparse", "disk"]),
    )


@settings(max_examples=60, deadline=None)
@given(_graphs())
def test_faces_partition_darts(g):
    seen = [0] * len(g.head)
    for f in g.faces:
        for d in f:
            seen[d] += 1
            assert g.face_of[d] == g.face_of[f[0]]
    assert all(c == 1 for c in seen)
    k, _ = g.components()
    assert g.n - g.m + len(g.faces) == 1 + k


@settings(max_examples=40, deadline=None)
@given(_graphs())
def test_dual_keeps_weights_and_is_cubic(g):
    if g.components()[0] != 1:
        return
    t = triangulate(g).tri
    d = dual(t)
    assert sorted(x for x in d.w if x is not INF) == sorted(x for x in t.w if x is not INF)
    assert all(len(r) == 3 for r in d.rot)
    assert d.n == len(t.faces)


def test_suppress_formula():
    # path a - b - c, a and c not adjacent
    g = build_from_rotation(3, [(0, 1, 1, 4), (1, 2, 2, 3)], [[0], [0, 1], [1]])
    h, lift = suppress_degree2(g)
    assert h.n == 2 and h.m == 1
    a, c = lift.node_old.index(0), lift.node_old.index(2)
    d = h.dart_between(a, c)
    assert h.w[d] == 3 and h.w[d ^ 1] == 7
    assert walk_weight(g, lift.lift([d])) == 3


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 10**6))
def test_suppress_keeps_cycle_optimum(seed):
    rng = random.Random(seed)
    g = gen_plane_graph(GenSpec(n=rng.randint(4, 10), seed=seed, mode="sparse"))
    g = _subdivide(g, rng)
    if g.n > 14:
        return
    h, lift = suppress_degree2(g)
    w1, _ = enum_simple_nondegenerate_cycles(g)
    w2, c2 = enum_simple_nondegenerate_cycles(h)
    assert w1 == w2
    if c2 is not None:
        assert walk_weight(g, lift.lift(c2)) == w2


def _subdivide(g: PlaneGraph, rng) -> PlaneGraph:
    """Subdivide a few random edges with a new node."""
    head, w, rot = list(g.head), list(g.w), [list(r) for r in g.rot]
    n = g.n
    for e in rng.sample(range(g.m), min(3, g.m)):
        x = n
        n += 1
        f = len(head) >> 1
        u, v = head[2 * e + 1], head[2 * e]
        # e becomes u -> x, new edge f is x -> v
        head[2 * e] = x
        head.extend([v, x])
        a, b = w[2 * e], w[2 * e + 1]
        sa, sb = rng.randint(0, a if a is not INF else 5), rng.randint(0, b if b is not INF else 5)
        w[2 * e], w[2 * e + 1] = (INF if a is INF else sa), (INF if b is INF else sb)
        w.extend([INF if a is INF else a - sa, INF if b is INF else b - sb])
        r = rot[v]
        r[r.index(2 * e + 1)] = 2 * f + 1
        rot.append([2 * e + 1, 2 * f])
    return PlaneGraph(n, head, w, rot, g.outer_dart)


def test_cycle_predicates(four_node):
    _, g, ids = four_node
    v2, v3, v4 = ids["v2"], ids["v3"], ids["v4"]
    two = [g.dart_between(v2, v3), g.dart_between(v3, v2)]
    assert is_degenerate(g, two)
    tri = [g.dart_between(v2, v3), g.dart_between(v3, v4), g.dart_between(v4, v2)]
    assert not is_degenerate(g, tri) and is_simple(g, tri)
    assert walk_weight(g, tri) == 16


def test_subgraph_maps_back(rng):
    g = gen_plane_graph(GenSpec(n=30, seed=5))
    keep = [rng.random() < 0.5 for _ in range(g.m)]
    sub = g.subgraph(keep)
    for d in range(len(sub.g.head)):
        od = sub.dart_old(d)
        assert g.w[od] == sub.g.w[d]
        assert sub.node_old[sub.g.head[d]] == g.head[od]
