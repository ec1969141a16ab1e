"""Shortest non-degenerate cycles by divide and conquer over faces.

A balanced fundamental cycle ``C`` of a shortest-path tree splits the
faces; the best cycle lies inside ``C``, outside ``C``, or crosses it.
Crossing cycles are found by cutting the graph open along one tree path
of ``C`` and measuring distances between the two copies of each node.
"""

from __future__ import annotations

import heapq
from dataclasses import dataclass, field

from .ncsp import noncrossing_distances
from .plane_graph import (
    INF,
    PlaneGraph,
    SubGraph,
    is_degenerate,
    suppress_degree2,
    walk_nodes,
)
from .separator import (
    assign_face_weights,
    balanced_fundamental_cycle,
    fundamental_sides,
    segmented_cycle_from_edge,
    shortest_path,
    sssp,
    triangulate,
)


@dataclass
class CycleStats:
    """Bookkeeping of one run: divide steps as ``(l, l1, l2)`` and any
    face-count inequality that failed."""

    divides: list = field(default_factory=list)
    violations: list = field(default_factory=list)
    base_cases: int = 0
    crossing_calls: int = 0


# small helpers


def _dijkstra_avoiding(g: PlaneGraph, s: int, t: int, skip_edge: int, bound):
    """Shortest ``s -> t`` path avoiding one edge; gives up at ``bound``."""
    head, w, rot = g.head, g.w, g.rot
    dist = {s: 0}
    par = {}
    done = set()
    heap = [(0, s)]
    pop, push = heapq.heappop, heapq.heappush
    while heap:
        d, x = pop(heap)
        if x in done:
            continue
        if bound is not None and d >= bound:
            return None
        if x == t:
            out = []
            v = t
            while v != s:
                e = par[v]
                out.append(e)
                v = head[e ^ 1]
            out.reverse()
            return d, out
        done.add(x)
        for e in rot[x]:
            if (e >> 1) == skip_edge:
                continue
            c = w[e]
            if c is INF:
                continue
            y = head[e]
            if y in done:
                continue
            nd = d + c
            if nd < dist.get(y, nd + 1):
                dist[y] = nd
                par[y] = e
                push(heap, (nd, y))
    return None


def cycles_through_darts(g: PlaneGraph, darts, best=None):
    """Best simple cycle made of a dart ``uv`` and a ``v -> u`` path avoiding edge ``uv``."""
    best_w = None if best is None else best[0]
    best_c = None if best is None else best[1]
    w = g.w
    head = g.head
    for d in sorted(set(darts)):
        c = w[d]
        if c is INF:
            continue
        bound = None if best_w is None else best_w - c
        if bound is not None and bound <= 0:
            continue
        r = _dijkstra_avoiding(g, head[d], head[d ^ 1], d >> 1, bound)
        if r is None:
            continue
        total = c + r[0]
        if best_w is None or total < best_w:
            best_w, best_c = total, [d] + r[1]
    if best_w is None:
        return None
    return best_w, best_c


def _weight(g: PlaneGraph, darts) -> int:
    w = g.w
    return sum(w[d] for d in darts)


# regions


@dataclass
class Region:
    """One side of a simple cycle as a compact subgraph of its parent."""

    sub: SubGraph
    side: str

    @property
    def g(self) -> PlaneGraph:
        return self.sub.g


def side_edges(g: PlaneGraph, cycle: list[int]) -> tuple[list[bool], list[bool]]:
    """Edges bounding the faces left of ``cycle`` and right of it."""
    left, right = fundamental_sides(g, cycle)
    faces = g.faces
    keep_l = [False] * g.m
    keep_r = [False] * g.m
    for f, flag in enumerate(left):
        if flag:
            for d in faces[f]:
                keep_l[d >> 1] = True
    for f, flag in enumerate(right):
        if flag:
            for d in faces[f]:
                keep_r[d >> 1] = True
    return keep_l, keep_r


def split_regions(g: PlaneGraph, cycle: list[int]) -> tuple[Region, Region]:
    """Interior and exterior of a simple cycle; the exterior holds the outer face."""
    left, right = fundamental_sides(g, cycle)
    keep_l, keep_r = side_edges(g, cycle)
    outer = g.outer_face
    if outer >= 0 and left[outer]:
        keep_l, keep_r = keep_r, keep_l
    return Region(g.subgraph(keep_l), "interior"), Region(g.subgraph(keep_r), "exterior")


# incision


@dataclass
class IncisedGraph:
    """The graph cut open along a path ``s u_1 .. u_l t``.

    Darts keep their ids (only tails on the cut side move to the copies
    ``v_i``); the copy path ``s v_1 .. v_l t`` uses the extra edges.
    """

    h: PlaneGraph
    us: list[int]
    vs: list[int]
    m0: int
    copy_of: dict


def incise(g: PlaneGraph, path: list[int]) -> IncisedGraph:
    """Cut ``g`` open along ``path``, moving the darts left of it to copies.

    The copy path gets ``INF`` weights in both directions.  The new outer
    face is the slit ``s, u_1..u_l, t, v_l..v_1``.
    """
    head = list(g.head)
    w = list(g.w)
    rot = [list(r) for r in g.rot]
    nodes = walk_nodes(g, path)
    l = len(nodes) - 2
    if l < 1:
        raise ValueError("the path has no internal nodes")
    n = g.n
    m0 = g.m
    copies = list(range(n, n + l))
    chain = [nodes[0]] + copies + [nodes[-1]]
    # copy path edges e_j: chain[j] -> chain[j+1]
    for j in range(l + 1):
        head.append(chain[j + 1])
        head.append(chain[j])
        w.append(INF)
        w.append(INF)
    pe = [2 * (m0 + j) for j in range(l + 1)]
    for i in range(1, l + 1):
        u = nodes[i]
        out_d = path[i]
        back_d = path[i - 1] ^ 1
        r = rot[u]
        k = r.index(out_d)
        left = []
        j = k + 1
        while r[j % len(r)] != back_d:
            left.append(r[j % len(r)])
            j += 1
        ls = set(left)
        rot[u] = [d for d in r if d not in ls]
        v = copies[i - 1]
        for d in left:
            head[d ^ 1] = v
        rot.append([pe[i]] + left + [pe[i - 1] ^ 1])
    s, t = nodes[0], nodes[-1]
    rs = rot[s]
    rs.insert(rs.index(path[0]) + 1, pe[0])
    rt = rot[t]
    rt.insert(rt.index(path[-1] ^ 1), pe[l] ^ 1)
    h = PlaneGraph(n + l, head, w, rot, path[0], check=False)
    copy_of = {copies[i]: nodes[i + 1] for i in range(l)}
    return IncisedGraph(h, nodes[1:-1], copies, m0, copy_of)


def _nondegenerate_part(g: PlaneGraph, cyc: list[int]):
    """A simple non-degenerate cycle inside a closed walk, if there is one."""
    if not is_degenerate(g, cyc) and len(set(walk_nodes(g, cyc)[:-1])) == len(cyc):
        return cyc
    head = g.head
    # split the closed walk at repeated nodes into simple cycles
    stack = []
    seen = {}
    found = []
    for d in cyc:
        x = head[d ^ 1]
        if x in seen:
            k = seen[x]
            piece = stack[k:]
            del stack[k:]
            for y in [head[e ^ 1] for e in piece]:
                seen.pop(y, None)
            found.append(piece)
        seen[x] = len(stack)
        stack.append(d)
    if stack:
        found.append(stack)
    good = [p for p in found if len(p) >= 3 and not is_degenerate(g, p)]
    if not good:
        return None
    return min(good, key=lambda p: _weight(g, p))


def cp_short_cycle(g: PlaneGraph, cycle: list[int], path: list[int], start: "int | None" = None,
                   backend: str = "baseline", r: "int | None" = None, stats: "CycleStats | None" = None):
    """A non-degenerate cycle at most as heavy as every cycle that follows
    ``path`` (a subpath of ``cycle``) and leaves it once, with its two
    deviating end edges on opposite sides of ``cycle``.

    Returns ``(weight, darts)`` or ``(INF, None)``.
    """
    head = g.head
    if path:
        s, t = head[path[0] ^ 1], head[path[-1]]
    else:
        s = t = start if start is not None else head[cycle[0] ^ 1]
    cand = []
    for x in {s, t}:
        for d in g.rot[x]:
            cand.append(d)
            cand.append(d ^ 1)
    best = cycles_through_darts(g, cand)
    if len(path) < 2:
        return best if best is not None else (INF, None)
    if stats is not None:
        stats.crossing_calls += 1
    inc = incise(g, path)
    h = inc.h
    d1 = noncrossing_distances(h, inc.us, inc.vs, backend=backend, r=r)
    d2 = noncrossing_distances(h.reversed(), inc.us, inc.vs, backend=backend, r=r)
    for dists, forward in ((d1, True), (d2, False)):
        i = None
        for k, d in enumerate(dists):
            if d is INF:
                continue
            if i is None or d < dists[i]:
                i = k
        if i is None:
            continue
        if best is not None and dists[i] >= best[0]:
            continue
        a, b = (inc.us[i], inc.vs[i]) if forward else (inc.vs[i], inc.us[i])
        dw, darts = shortest_path(h, a, b)
        if darts is None:
            continue
        cyc = _nondegenerate_part(g, darts)
        if cyc is None:
            continue
        wc = _weight(g, cyc)
        if best is None or wc < best[0]:
            best = (wc, cyc)
    return best if best is not None else (INF, None)


def c_short_cycle(g: PlaneGraph, seg, backend: str = "baseline", r=None, stats=None):
    """Crossing candidate for a segmented cycle: follows its first tree path."""
    return cp_short_cycle(g, seg.darts, seg.p1, start=seg.root, backend=backend, r=r, stats=stats)


# the divide and conquer driver


def _with_guard(h: PlaneGraph, tri, chord: int, guard: int) -> PlaneGraph:
    """``h`` plus the triangulation chord ``chord`` as a new edge of weight ``guard``."""
    m0 = h.m
    head = list(h.head) + [tri.head[2 * chord], tri.head[2 * chord + 1]]
    w = list(h.w) + [guard, guard]
    lo, hi = 2 * chord, 2 * chord + 1
    rot = []
    for r in tri.rot:
        rr = []
        for d in r:
            if d < 2 * m0:
                rr.append(d)
            elif d == lo:
                rr.append(2 * m0)
            elif d == hi:
                rr.append(2 * m0 + 1)
        rot.append(rr)
    return PlaneGraph(h.n, head, w, rot, h.outer_dart, check=False)


def _solve(g: PlaneGraph, stats: CycleStats, backend, r):
    h, lift = suppress_degree2(g, prune_leaves=True)
    if h.m < 3:
        return None
    ncomp, comp = h.components()
    if ncomp == 1:
        res = _solve_connected(h, stats, backend, r)
    else:
        res = None
        head = h.head
        for c in range(ncomp):
            keep = [comp[head[2 * e]] == c for e in range(h.m)]
            if sum(keep) < 3:
                continue
            sub = h.subgraph(keep)
            rc = _solve_connected(sub.g, stats, backend, r)
            if rc is not None and (res is None or rc[0] < res[0]):
                res = (rc[0], [sub.dart_old(d) for d in rc[1]])
    if res is None:
        return None
    return res[0], lift.lift(res[1])


def _solve_connected(h: PlaneGraph, stats: CycleStats, backend, r):
    ell = len(h.faces)
    if ell <= 4:
        stats.base_cases += 1
        return cycles_through_darts(h, range(2 * h.m))
    tree = sssp(h, 0)
    tr = triangulate(h)
    tri = tr.tri
    tree_edge = [False] * tri.m
    for v in range(h.n):
        if tree.parent[v] >= 0:
            tree_edge[tree.parent[v] >> 1] = True
    e = balanced_fundamental_cycle(tri, tree_edge, assign_face_weights(tr))
    guard_edge = -1
    if e < h.m:
        gs = h
        bridge = 2 * e
    else:
        guard = 1 + sum(h.w)
        gs = _with_guard(h, tri, e, guard)
        guard_edge = h.m
        bridge = 2 * h.m
    seg = segmented_cycle_from_edge(gs, tree, bridge)
    cyc = seg.darts
    best = None
    w3, c3 = c_short_cycle(gs, seg, backend=backend, r=r, stats=stats)
    if c3 is not None and all((d >> 1) != guard_edge for d in c3):
        best = (w3, c3)
    keep_l, keep_r = side_edges(gs, cyc)
    if guard_edge >= 0:
        keep_l[guard_edge] = False
        keep_r[guard_edge] = False
    counts = []
    for keep in (keep_l, keep_r):
        sub = gs.subgraph(keep)
        counts.append(len(sub.g.faces))
        rc = _solve(sub.g, stats, backend, r)
        if rc is not None and (best is None or rc[0] < best[0]):
            best = (rc[0], [sub.dart_old(d) for d in rc[1]])
    l1, l2 = counts
    stats.divides.append((ell, l1, l2))
    for li in (l1, l2):
        if 20 * li > 19 * ell or 4 * li > 3 * ell + 4:
            stats.violations.append((ell, l1, l2))
    if l1 + l2 > ell + 2:
        stats.violations.append((ell, l1, l2))
    return best


def shortest_nondegenerate_cycle(g: PlaneGraph, backend: str = "baseline", r: "int | None" = None,
                                 stats: "CycleStats | None" = None):
    """Lightest non-degenerate cycle of a simple bidirected plane graph.

    Returns ``(weight, darts)`` or ``(INF, None)`` when every
    non-degenerate cycle has infinite weight.
    """
    if stats is None:
        stats = CycleStats()
    big = 1 + g.total_finite_weight()
    work = g.finite(big)
    res = _solve(work, stats, backend, r)
    if res is None:
        return INF, None
    wt = _weight(g, res[1]) if all(g.w[d] is not INF for d in res[1]) else INF
    if wt is INF or res[0] >= big:
        return INF, None
    return wt, res[1]
