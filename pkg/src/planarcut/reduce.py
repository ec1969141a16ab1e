"""From user graphs to shortest non-degenerate cycles and back.

A global minimum cut of a directed plane graph is a shortest
non-degenerate cycle of the dual of its triangulated, bidirected
version (added darts weigh 0).  A shortest cycle is either a two-node
cycle or a shortest non-degenerate cycle of the bidirected graph (added
darts weigh ``INF``), computed after splitting high-degree nodes into
zero-weight paths so that every degree is small.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field

import numpy as np
from scipy.sparse import csr_matrix
from scipy.sparse.csgraph import connected_components

from .cycle_core import CycleStats, shortest_nondegenerate_cycle
from .plane_graph import INF, PlaneGraph, RawGraph, dual, wsum
from .separator import triangulate


class Mode(enum.Enum):
    MIN_CUT = "mincut"
    SHORTEST_CYCLE = "cycle"

    @property
    def filler(self):
        return 0 if self is Mode.MIN_CUT else INF


@dataclass
class Bidirected:
    """Triangulated bidirected graph built from a user graph.

    Edge ids below ``m_raw`` are the user's edges; ``original[d]`` tells
    whether dart ``d`` is an arc of the user graph.
    """

    g: PlaneGraph
    m_raw: int
    n_raw: int
    original: list[bool]


def _connect_components(n: int, head: list[int], w: list, rot: list[list[int]], outer: int, glue):
    """Join all components inside the outer face with ``glue`` edges.

    Returns the (possibly new) outer dart.
    """
    g = PlaneGraph(n, head, w, rot, outer, check=False)
    ncomp, comp = g.components()
    if ncomp <= 1:
        return outer
    base_node = head[outer ^ 1] if outer >= 0 else 0
    base_comp = comp[base_node]
    # one representative corner per other component: its lowest dart, else the node
    reps = {}
    for v in range(n):
        c = comp[v]
        if c == base_comp or c in reps:
            continue
        reps[c] = v
    for c in sorted(reps):
        b = reps[c]
        e = len(head) >> 1
        a = head[outer ^ 1] if outer >= 0 else base_node
        head.extend((b, a))
        w.extend((glue, glue))
        ab, ba = 2 * e, 2 * e + 1
        if outer >= 0:
            ra = rot[a]
            ra.insert(ra.index(outer) + 1, ab)
        else:
            rot[a].append(ab)
            outer = ab
        rb = rot[b]
        if rb:
            rb.insert(1, ba)
        else:
            rb.append(ba)
    return outer


def bidirect_and_triangulate(raw: RawGraph, mode: Mode) -> Bidirected:
    """Bidirected triangulation with at least four nodes.

    Missing directions and added edges get the mode's filler weight; the
    user's graph is first made connected and padded to four nodes with
    ``INF`` edges, which leave every cut and cycle value unchanged.
    """
    raw.validate()
    filler = mode.filler
    base = raw.plane_graph(filler)
    n = base.n
    head = list(base.head)
    w = list(base.w)
    rot = [list(r) for r in base.rot]
    outer = base.outer_dart if head else -1
    original = []
    for u, v, a, b in raw.edges:
        original.extend((a is not None, b is not None))
    outer = _connect_components(n, head, w, rot, outer, filler)
    while n < 4:
        # pad with a node tied to node 0 by infinite weights
        x = n
        n += 1
        rot.append([])
        e = len(head) >> 1
        head.extend((x, 0))
        w.extend((INF, INF))
        if outer >= 0:
            a = head[outer ^ 1]
            head[2 * e + 1] = a
            ra = rot[a]
            ra.insert(ra.index(outer) + 1, 2 * e)
        else:
            rot[0].append(2 * e)
            outer = 2 * e
        rot[x].append(2 * e + 1)
    original.extend([False] * (len(head) - len(original)))
    g = PlaneGraph(n, head, w, rot, outer, check=False)
    tri = triangulate(g, chord_weight=filler).tri
    original.extend([False] * (len(tri.head) - len(original)))
    tri.validate()
    return Bidirected(tri, len(raw.edges), raw.n, original)


@dataclass
class SplitMap:
    """Where each node went when high-degree nodes were split into paths.

    ``node_orig[x]`` is the source node of ``x``; edges from ``m0`` on are
    the zero-weight path edges.
    """

    node_orig: list[int]
    m0: int
    paths: dict = field(default_factory=dict)


def split_high_degree(g: PlaneGraph, limit: int = 4) -> tuple[PlaneGraph, SplitMap]:
    """Replace every node of degree at least ``limit`` by a zero-weight path.

    The ``i``-th neighbour (counterclockwise) of a split node ``v`` attaches
    to the ``i``-th path node with its original weights.
    """
    head = list(g.head)
    w = list(g.w)
    rot = [list(r) for r in g.rot]
    node_orig = list(range(g.n))
    paths = {}
    n = g.n
    m0 = g.m
    for v in range(g.n):
        r = g.rot[v]
        d = len(r)
        if d < limit:
            continue
        ids = [v] + list(range(n, n + d - 1))
        n += d - 1
        node_orig.extend([v] * (d - 1))
        rot.extend([] for _ in range(d - 1))
        path_darts = []
        for i in range(d - 1):
            e = len(head) >> 1
            head.extend((ids[i + 1], ids[i]))
            w.extend((0, 0))
            path_darts.append(2 * e)
        for i, dd in enumerate(r):
            x = ids[i]
            head[dd ^ 1] = x
            nr = [dd]
            if i + 1 < d:
                nr.append(path_darts[i])
            if i > 0:
                nr.append(path_darts[i - 1] ^ 1)
            rot[x] = nr
        paths[v] = ids
    out = PlaneGraph(n, head, w, rot, g.outer_dart, check=False)
    return out, SplitMap(node_orig, m0, paths)


def lift_split_cycle(cycle: list[int], m: SplitMap) -> list[int]:
    """Drop the zero path darts; what remains is a closed walk of the unsplit graph."""
    return [d for d in cycle if (d >> 1) < m.m0]


def shortest_degenerate_cycle(g: PlaneGraph):
    """Lightest two-node cycle ``u v u`` as ``(weight, darts)`` or ``(INF, None)``."""
    best = None
    w = g.w
    for e in range(g.m):
        t = wsum((w[2 * e], w[2 * e + 1]))
        if t is INF:
            continue
        if best is None or t < best[0]:
            best = (t, [2 * e, 2 * e + 1])
    return best if best is not None else (INF, None)


# results


@dataclass
class CutResult:
    weight: object
    cut: list  # (u, v) arcs of the user graph
    witness: "tuple[int, int] | None"
    dual_cycle: "list[int] | None" = None
    stats: "CycleStats | None" = None


@dataclass
class CycleResult:
    weight: object
    nodes: "list[int] | None"  # closed: first node repeated at the end
    arcs: "list[tuple[int, int]] | None"
    degenerate: bool = False
    stats: "CycleStats | None" = None


def separated_pair(n: int, arcs) -> "tuple[int, int] | None":
    """Some ``(s, t)`` with ``t`` unreachable from ``s``, or ``None``."""
    if n < 2:
        return None
    if arcs:
        rows = np.array([a for a, _ in arcs], dtype=np.int64)
        cols = np.array([b for _, b in arcs], dtype=np.int64)
    else:
        rows = cols = np.zeros(0, dtype=np.int64)
    mat = csr_matrix((np.ones(len(rows), dtype=np.int8), (rows, cols)), shape=(n, n))
    k, lab = connected_components(mat, directed=True, connection="strong")
    if k == 1:
        return None
    has_out = [False] * k
    for a, b in arcs:
        if lab[a] != lab[b]:
            has_out[lab[a]] = True
    sink = next(c for c in range(k) if not has_out[c])
    s = next(v for v in range(n) if lab[v] == sink)
    t = next(v for v in range(n) if lab[v] != sink)
    return s, t


def min_cut(raw: RawGraph, backend: str = "baseline", r: "int | None" = None) -> CutResult:
    """Global minimum cut: the lightest set of arcs whose removal leaves
    some node unable to reach another."""
    stats = CycleStats()
    if raw.n < 2:
        raw.validate()
        return CutResult(INF, [], None, None, stats)
    bd = bidirect_and_triangulate(raw, Mode.MIN_CUT)
    g = bd.g
    dg = dual(g)
    wt, cyc = shortest_nondegenerate_cycle(dg, backend=backend, r=r, stats=stats)
    if cyc is None:
        return CutResult(INF, [], None, None, stats)
    head = g.head
    cut = []
    for d in cyc:
        if bd.original[d]:
            cut.append((head[d ^ 1], head[d]))
    cut_set = set(cut)
    arcs = [(u, v) for u, v, _ in raw.arcs() if (u, v) not in cut_set]
    witness = separated_pair(raw.n, arcs)
    return CutResult(wt, sorted(cut), witness, cyc, stats)


def shortest_cycle(raw: RawGraph, backend: str = "baseline", r: "int | None" = None) -> CycleResult:
    """Lightest directed cycle of the user graph (``INF`` when acyclic)."""
    stats = CycleStats()
    if raw.n < 2 or not raw.edges:
        raw.validate()
        return CycleResult(INF, None, None, False, stats)
    bd = bidirect_and_triangulate(raw, Mode.SHORTEST_CYCLE)
    g = bd.g
    w2, c2 = shortest_degenerate_cycle(g)
    g2, sm = split_high_degree(g)
    w1, c1 = shortest_nondegenerate_cycle(g2, backend=backend, r=r, stats=stats)
    if c1 is not None:
        c1 = lift_split_cycle(c1, sm)
    best = None
    if c2 is not None:
        best = (w2, c2, True)
    if c1 is not None and (best is None or w1 < best[0]):
        best = (w1, c1, False)
    if best is None:
        return CycleResult(INF, None, None, False, stats)
    head = g.head
    darts = best[1]
    nodes = [head[darts[0] ^ 1]] + [head[d] for d in darts]
    arcs = [(head[d ^ 1], head[d]) for d in darts]
    return CycleResult(best[0], nodes, arcs, best[2], stats)
