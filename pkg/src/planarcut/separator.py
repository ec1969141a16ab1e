"""Shortest-path trees, triangulation with face weights, and balanced
fundamental cycles used to split a plane graph in two."""

from __future__ import annotations

import heapq
from dataclasses import dataclass

from .plane_graph import INF, PlaneGraph


class NoBalancedEdge(ValueError):
    pass


class DegenerateSeparator(ValueError):
    pass


class TriangulationFailed(ValueError):
    pass


@dataclass
class SsspTree:
    """Shortest-path tree; ``parent[v]`` is the dart entering ``v`` (``-1`` at the root)."""

    root: int
    parent: list[int]
    dist: list

    def path_to(self, v: int) -> list[int]:
        out = []
        p = self.parent
        while p[v] >= 0:
            d = p[v]
            out.append(d)
            v = self._tail(d)
        out.reverse()
        return out

    _head: "list[int] | None" = None

    def _tail(self, d: int) -> int:
        return self._head[d ^ 1]


def dijkstra(g: PlaneGraph, source: int, reverse: bool = False, target: int = -1):
    """Dijkstra over darts; ``INF`` darts are skipped.  Equal keys pop lowest node first.

    Returns ``(dist, parent_dart)``.  With ``reverse`` distances are *to*
    ``source`` and ``parent_dart[v]`` is the dart leaving ``v`` towards it.
    """
    n = g.n
    dist = [INF] * n
    par = [-1] * n
    dist[source] = 0
    heap = [(0, source)]
    head, w, rot = g.head, g.w, g.rot
    done = [False] * n
    pop, push = heapq.heappop, heapq.heappush
    while heap:
        d, x = pop(heap)
        if done[x]:
            continue
        done[x] = True
        if x == target:
            break
        for e in rot[x]:
            if reverse:
                c = w[e ^ 1]
            else:
                c = w[e]
            if c is INF:
                continue
            y = head[e]
            if done[y]:
                continue
            nd = d + c
            dy = dist[y]
            if dy is INF or nd < dy:
                dist[y] = nd
                par[y] = e ^ 1 if reverse else e
                push(heap, (nd, y))
    return dist, par


def sssp(g: PlaneGraph, root: int) -> SsspTree:
    dist, par = dijkstra(g, root)
    t = SsspTree(root, par, dist)
    t._head = g.head
    return t


def path_from_parents(g: PlaneGraph, par: list[int], s: int, t: int) -> list[int]:
    """Darts of the tree path ``s -> t`` (forward tree)."""
    out = []
    head = g.head
    v = t
    while v != s:
        d = par[v]
        if d < 0:
            raise ValueError("target not reached")
        out.append(d)
        v = head[d ^ 1]
    out.reverse()
    return out


def path_to_root(g: PlaneGraph, par: list[int], s: int, t: int) -> list[int]:
    """Darts of the path ``s -> t`` in a reverse tree rooted at ``t``."""
    out = []
    head = g.head
    v = s
    while v != t:
        d = par[v]
        if d < 0:
            raise ValueError("source not connected")
        out.append(d)
        v = head[d]
    return out


def shortest_path(g: PlaneGraph, s: int, t: int):
    """``(distance, darts)`` of a shortest ``s -> t`` path, or ``(INF, None)``."""
    dist, par = dijkstra(g, s, target=t)
    if dist[t] is INF:
        return INF, None
    return dist[t], path_from_parents(g, par, s, t)


# triangulation


@dataclass
class Triangulation:
    """A triangulated copy of a plane graph.

    Edges ``0..m-1`` of ``tri`` are the edges of the source graph; later
    ids are chords.  ``origin[f]`` is the source face containing triangle ``f``
    and ``weighted[f]`` marks one triangle per source face.
    """

    tri: PlaneGraph
    m0: int
    origin: list[int]
    weighted: list[bool]


def triangulate(g: PlaneGraph, chord_weight=INF) -> Triangulation:
    """Triangulate every face by ear clipping without creating parallel edges."""
    head = list(g.head)
    w = list(g.w)
    rot = [list(r) for r in g.rot]
    adj = set()
    for d in range(len(head)):
        adj.add((head[d ^ 1], head[d]))
    marks = []  # (dart, source face, first-triangle flag)

    def add_chord(a, b, after_a, after_b):
        e = len(head) >> 1
        head.append(b)
        head.append(a)
        w.append(chord_weight)
        w.append(chord_weight)
        ra = rot[a]
        ra.insert(ra.index(after_a) + 1, 2 * e)
        rb = rot[b]
        rb.insert(rb.index(after_b) + 1, 2 * e + 1)
        adj.add((a, b))
        adj.add((b, a))
        return 2 * e

    for fid, walk in enumerate(g.faces):
        k = len(walk)
        if k <= 3:
            marks.append((walk[0], fid, True))
            continue
        corner = [head[d ^ 1] for d in walk]
        out = list(walk)
        nxt = list(range(1, k)) + [0]
        prv = [k - 1] + list(range(k - 1))
        size = k
        i = 0
        stall = 0
        first = True
        while size > 3:
            j = nxt[i]
            l = nxt[j]
            a, b = corner[i], corner[l]
            if a != b and (a, b) not in adj:
                c = add_chord(a, b, out[i], out[l])
                # triangle a, corner[j], b lies left of out[i]
                marks.append((out[i], fid, first))
                first = False
                out[i] = c
                nxt[i] = l
                prv[l] = i
                size -= 1
                stall = 0
            else:
                i = j
                stall += 1
                if stall > size:
                    raise TriangulationFailed(f"no valid ear in face {fid} of size {k}")
        marks.append((out[i], fid, first))
    tri = PlaneGraph(g.n, head, w, rot, g.outer_dart, check=False)
    nf = len(tri.faces)
    origin = [-1] * nf
    weighted = [False] * nf
    face_of = tri.face_of
    for d, fid, flag in marks:
        f = face_of[d]
        origin[f] = fid
        weighted[f] = flag
    for f in range(nf):
        if len(tri.faces[f]) != 3 or origin[f] < 0:
            raise TriangulationFailed("triangulation bookkeeping failed")
    return Triangulation(tri, g.m, origin, weighted)


def assign_face_weights(t: Triangulation) -> list[int]:
    """Integer face weights: one triangle per source face gets 1, the rest 0."""
    return [1 if x else 0 for x in t.weighted]


def balanced_fundamental_cycle(tri: PlaneGraph, tree_edge: list[bool], face_weight: list[int]) -> int:
    """A non-tree edge whose fundamental cycle leaves at most 3/4 of the
    face weight on each side.

    The non-tree edges form a spanning tree of the dual; cutting one of
    them splits the faces into a dual subtree and the rest, which are
    exactly the two sides of its fundamental cycle.
    """
    nf = len(tri.faces)
    total = sum(face_weight)
    face_of = tri.face_of
    # dual tree adjacency over non-tree edges
    adj = [[] for _ in range(nf)]
    for e in range(tri.m):
        if not tree_edge[e]:
            f, g = face_of[2 * e], face_of[2 * e + 1]
            adj[f].append((g, e))
            adj[g].append((f, e))
    order = []
    parent_edge = [-1] * nf
    seen = [False] * nf
    seen[0] = True
    stack = [0]
    while stack:
        f = stack.pop()
        order.append(f)
        for g, e in adj[f]:
            if not seen[g]:
                seen[g] = True
                parent_edge[g] = e
                stack.append(g)
    if len(order) != nf:
        raise NoBalancedEdge("non-tree edges do not span the dual")
    sub = list(face_weight)
    parent_face = [-1] * nf
    for f in order:
        e = parent_edge[f]
        if e >= 0:
            a, b = face_of[2 * e], face_of[2 * e + 1]
            parent_face[f] = b if a == f else a
    for f in reversed(order):
        p = parent_face[f]
        if p >= 0:
            sub[p] += sub[f]
    best = None
    for f in order:
        e = parent_edge[f]
        if e < 0:
            continue
        inside = sub[f]
        outside = total - inside
        if 4 * inside <= 3 * total and 4 * outside <= 3 * total:
            key = (max(inside, outside), e)
            if best is None or key < best:
                best = key
    if best is None:
        raise NoBalancedEdge("no fundamental cycle is balanced")
    return best[1]


def fundamental_sides(tri: PlaneGraph, cycle_darts: list[int]) -> tuple[list[bool], list[bool]]:
    """Faces left and right of a simple cycle, by flood fill (used for audits)."""
    nf = len(tri.faces)
    face_of = tri.face_of
    barrier = set(d >> 1 for d in cycle_darts)
    out = []
    for seeds in ([face_of[d] for d in cycle_darts], [face_of[d ^ 1] for d in cycle_darts]):
        mark = [False] * nf
        stack = []
        for f in seeds:
            if not mark[f]:
                mark[f] = True
                stack.append(f)
        while stack:
            f = stack.pop()
            for d in tri.faces[f]:
                if (d >> 1) in barrier:
                    continue
                g = face_of[d ^ 1]
                if not mark[g]:
                    mark[g] = True
                    stack.append(g)
        out.append(mark)
    return out[0], out[1]


@dataclass
class SegmentedCycle:
    """``P1`` (root to ``x``), the bridge dart ``x -> y``, then ``P2`` reversed."""

    root: int
    p1: list[int]
    bridge: int
    p2: list[int]

    @property
    def darts(self) -> list[int]:
        return list(self.p1) + [self.bridge] + [d ^ 1 for d in reversed(self.p2)]


def tree_lca(g: PlaneGraph, parent: list[int], x: int, y: int) -> int:
    head = g.head
    anc = set()
    v = x
    anc.add(v)
    while parent[v] >= 0:
        v = head[parent[v] ^ 1]
        anc.add(v)
    v = y
    while v not in anc:
        if parent[v] < 0:
            raise DegenerateSeparator("nodes lie in different trees")
        v = head[parent[v] ^ 1]
    return v


def segmented_cycle_from_edge(g: PlaneGraph, tree: SsspTree, bridge: int) -> SegmentedCycle:
    """Fundamental cycle of ``bridge`` in ``tree`` as root path, bridge, reversed root path.

    The paths run from the lowest common ancestor of the bridge endpoints;
    when one endpoint is an ancestor of the other its path is a single node.
    """
    head = g.head
    x, y = head[bridge ^ 1], head[bridge]
    if x == y:
        raise DegenerateSeparator("bridge is a loop")
    par = tree.parent
    if par[x] == bridge or par[y] == (bridge ^ 1):
        raise DegenerateSeparator("bridge is a tree edge")
    s = tree_lca(g, par, x, y)
    p1 = path_from_parents(g, par, s, x)
    p2 = path_from_parents(g, par, s, y)
    return SegmentedCycle(s, p1, bridge, p2)
