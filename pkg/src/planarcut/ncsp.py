"""Distances between paired terminals on the outer face.

Given nodes ``u_1..u_l, v_l..v_1`` appearing in this order around the
outer face, compute ``d(u_i, v_i)`` for every ``i``.  Shortest paths for
pairs nested inside each other can be chosen noncrossing, so every pair
is solved inside the region enclosed by the paths of two outer pairs,
halving the index range at each step.

Two backends share the driver: ``"baseline"`` runs Dijkstra inside each
region; ``"ddg"`` first searches a dense distance graph over an
r-division and only falls back to regions at the bottom of the recursion.
"""

from __future__ import annotations

import heapq
from dataclasses import dataclass, field

from .plane_graph import INF, GraphError, PlaneGraph


class TerminalsNotInOrder(GraphError):
    pass


class TwoPrelabeledNodes(ValueError):
    pass


# normalization


@dataclass
class Normalized:
    """A terminal instance rewritten so terminals are distinct leaves and
    no zero-weight cycle remains.

    ``us[i]`` and ``vs[i]`` are the new terminal nodes; distances of at
    least ``big`` stand for ``INF`` in the source graph.
    """

    g: PlaneGraph
    us: list[int]
    vs: list[int]
    big: int
    mirrored: bool
    node_map: list[int]


def _match_corners(walk_nodes: list[int], seq: list[int]):
    """Corner indices along a cyclic walk visiting ``seq`` in order, or ``None``."""
    L = len(walk_nodes)
    if not seq:
        return []
    where = {}
    for k, x in enumerate(walk_nodes):
        where.setdefault(x, []).append(k)
    for start in where.get(seq[0], []):
        out = [start]
        cur = start
        ok = True
        for x in seq[1:]:
            found = -1
            for k in range(cur, start + L):
                if walk_nodes[k % L] == x:
                    found = k
                    break
            if found < 0:
                ok = False
                break
            out.append(found)
            cur = found
        if ok:
            return [k % L for k in out], [k - start for k in out]
    return None


def _big_weights(g: PlaneGraph):
    big = 1 + g.total_finite_weight()
    return [big if x is INF else x for x in g.w], big


def _zero_components(n: int, head: list[int], w: list[int], rot: list[list[int]]) -> list[int]:
    """Strongly connected components of the zero-weight darts (component id per node).

    Iterative Tarjan over the zero darts only; most nodes have none and
    stay singletons, which keeps this cheap on the many small instances
    the cycle search produces.
    """
    zero_out = [[head[d] for d in r if w[d] == 0] for r in rot]
    comp = list(range(n))
    index = [-1] * n
    low = [0] * n
    on = [False] * n
    stack = []
    counter = 0
    for s in range(n):
        if index[s] >= 0 or not zero_out[s]:
            continue
        work = [(s, 0)]
        index[s] = low[s] = counter
        counter += 1
        stack.append(s)
        on[s] = True
        while work:
            x, i = work[-1]
            outs = zero_out[x]
            if i < len(outs):
                work[-1] = (x, i + 1)
                y = outs[i]
                if index[y] < 0:
                    index[y] = low[y] = counter
                    counter += 1
                    stack.append(y)
                    on[y] = True
                    work.append((y, 0))
                elif on[y] and index[y] < low[x]:
                    low[x] = index[y]
                continue
            work.pop()
            if work:
                p = work[-1][0]
                if low[x] < low[p]:
                    low[p] = low[x]
            if low[x] == index[x]:
                while True:
                    y = stack.pop()
                    on[y] = False
                    comp[y] = x
                    if y == x:
                        break
    return comp


def _contract_zero(n: int, head: list[int], w: list[int], rot: list[list[int]], outer_dart: int):
    """Contract strongly connected zero-weight subgraphs, drop loops and parallels."""
    comp = _zero_components(n, head, w, rot)
    members: dict[int, list[int]] = {}
    for v in range(n):
        if comp[v] != v or members.get(v) is not None:
            members.setdefault(comp[v], []).append(v)
    for c in list(members):
        if c not in members[c]:
            members[c].append(c)
        members[c].sort()
    if not members:
        return n, head, w, rot, outer_dart, list(range(n))
    in_group = [False] * n
    for vs in members.values():
        for v in vs:
            in_group[v] = True
    # spanning tree of each component through edges with a zero dart inside it
    tree = set()
    merged: dict[int, list[int]] = {}
    pos = {}
    for c, vs in members.items():
        root = vs[0]
        seen = {root}
        stack = [root]
        while stack:
            x = stack.pop()
            for d in rot[x]:
                y = head[d]
                if y in seen or comp[y] != c:
                    continue
                if w[d] != 0 and w[d ^ 1] != 0:
                    continue
                seen.add(y)
                tree.add(d)
                stack.append(y)
        if len(seen) != len(vs):
            raise GraphError("zero component is not connected by zero edges")
        for x in vs:
            for i, d in enumerate(rot[x]):
                pos[d] = i
        # walk around the tree counterclockwise collecting the other darts
        out = []
        frames = [(root, 0, len(rot[root]))]
        while frames:
            x, i, left = frames.pop()
            r = rot[x]
            while left > 0:
                d = r[i % len(r)]
                i += 1
                left -= 1
                if d in tree:
                    frames.append((x, i, left))
                    y = head[d]
                    frames.append((y, pos[d ^ 1] + 1, len(rot[y]) - 1))
                    break
                if (d ^ 1) not in tree:
                    out.append(d)
        merged[root] = out
    node_map = [0] * n
    new_rot_src = []
    k = 0
    for v in range(n):
        if in_group[v]:
            c = comp[v]
            vs = members[c]
            if vs[0] != v:
                node_map[v] = node_map[vs[0]]
                continue
            new_rot_src.append(merged[v])
        else:
            new_rot_src.append(rot[v])
        node_map[v] = k
        k += 1
    keep = {}
    edge_of = [-1] * (len(head) >> 1)
    nhead = []
    nw = []
    for e in range(len(head) >> 1):
        x, y = head[2 * e + 1], head[2 * e]
        a, b = node_map[x], node_map[y]
        if a == b:
            continue
        if in_group[x] or in_group[y]:
            key = (a, b) if a < b else (b, a)
            kk = keep.get(key)
            if kk is not None:
                if nhead[2 * kk] == b:
                    nw[2 * kk] = min(nw[2 * kk], w[2 * e])
                    nw[2 * kk + 1] = min(nw[2 * kk + 1], w[2 * e + 1])
                else:
                    nw[2 * kk] = min(nw[2 * kk], w[2 * e + 1])
                    nw[2 * kk + 1] = min(nw[2 * kk + 1], w[2 * e])
                continue
            keep[key] = len(nhead) >> 1
        else:
            key = (a, b) if a < b else (b, a)
            keep[key] = len(nhead) >> 1
        edge_of[e] = len(nhead) >> 1
        nhead.append(b)
        nhead.append(a)
        nw.append(w[2 * e])
        nw.append(w[2 * e + 1])
    nrot = []
    for src in new_rot_src:
        nr = []
        for d in src:
            kk = edge_of[d >> 1]
            if kk >= 0:
                nr.append(2 * kk + (d & 1))
        nrot.append(nr)
    od = -1
    if outer_dart >= 0 and edge_of[outer_dart >> 1] >= 0:
        od = 2 * edge_of[outer_dart >> 1] + (outer_dart & 1)
    return k, nhead, nw, nrot, od, node_map


def normalize(g: PlaneGraph, us: list[int], vs: list[int]) -> Normalized:
    """Make terminals distinct leaves in the outer face and remove zero cycles.

    Each ``u_i`` gets a leaf ``u'_i`` with ``w(u'_i u_i) = 0`` and a
    prohibitive weight back; each ``v_i`` a leaf ``v'_i`` with
    ``w(v_i v'_i) = 0``.  Zero-weight strongly connected subgraphs are then
    contracted, loops removed and parallel edges merged keeping the
    minimum weight per direction.
    """
    if len(us) != len(vs):
        raise ValueError("need as many u terminals as v terminals")
    for x in list(us) + list(vs):
        if not 0 <= x < g.n:
            raise GraphError(f"unknown terminal {x}")
    ncomp, _ = g.components()
    if ncomp != 1:
        raise GraphError("terminal distances need a connected graph")
    w, big = _big_weights(g)
    seq = list(us) + list(reversed(vs))
    base = g.with_weights(w)
    mirrored = False
    found = None
    if g.m == 0:
        found = ([0] * len(seq), [0] * len(seq))
        walk = []
    else:
        for attempt in (False, True):
            h = base.mirrored() if attempt else base
            walk = h.outer_walk()
            nodes = [h.head[d ^ 1] for d in walk]
            found = _match_corners(nodes, seq)
            if found is not None:
                mirrored = attempt
                base = h
                break
    if found is None:
        raise TerminalsNotInOrder("terminals are not in order around the outer face")
    corners, _ = found
    n = g.n
    head = list(base.head)
    ww = list(base.w)
    rot = [list(r) for r in base.rot]
    big2 = 1 + sum(ww)
    l = len(us)
    prime = []
    for idx, x in enumerate(seq):
        y = n + idx
        e = len(head) >> 1
        if idx < l:
            # leaf u' -> u with weight 0
            head.extend((x, y))
            ww.extend((0, big2))
            leaf_dart = 2 * e + 1  # x -> y
        else:
            head.extend((y, x))
            ww.extend((0, big2))
            leaf_dart = 2 * e  # x -> y
        rot.append([leaf_dart ^ 1])
        if walk:
            wk = walk[corners[idx]]
            r = rot[x]
            r.insert(r.index(wk) + 1, leaf_dart)
        else:
            rot[x].append(leaf_dart)
        prime.append((y, leaf_dart))
    n2 = n + len(seq)
    outer = prime[0][1] ^ 1 if prime else (base.outer_dart if walk else -1)
    nn, nhead, nw, nrot, od, node_map = _contract_zero(n2, head, ww, rot, outer)
    h = PlaneGraph(nn, nhead, nw, nrot, od if od >= 0 else 0, check=False)
    h.check_euler()
    new_us = [node_map[prime[i][0]] for i in range(l)]
    new_vs = [node_map[prime[len(seq) - 1 - i][0]] for i in range(l)]
    if l:
        wnodes = [h.head[d ^ 1] for d in h.outer_walk()]
        if _match_corners(wnodes, new_us + list(reversed(new_vs))) is None:
            raise TerminalsNotInOrder("terminal order changed during normalization")
    return Normalized(h, new_us, new_vs, big, mirrored, node_map[:n])


# labels


def label(path_nodes: list[int], path_weights: list[int], phi: dict) -> dict:
    """Potentials along a shortest path so that differences give segment weights.

    ``path_weights[k]`` is the weight of the dart between nodes ``k`` and
    ``k+1``.  At most one node may already carry a label; it is kept.
    """
    pre = [k for k, z in enumerate(path_nodes) if z in phi]
    if len(pre) > 1:
        raise TwoPrelabeledNodes("more than one node of the path is labeled")
    if pre:
        k0 = pre[0]
        base = phi[path_nodes[k0]]
    else:
        k0 = 0
        base = 0
        phi[path_nodes[0]] = 0
    acc = base
    for k in range(k0 - 1, -1, -1):
        acc -= path_weights[k]
        phi[path_nodes[k]] = acc
    acc = base
    for k in range(k0 + 1, len(path_nodes)):
        acc += path_weights[k - 1]
        phi[path_nodes[k]] = acc
    return phi


# paths


def path_nodes(g: PlaneGraph, darts: list[int], start: int) -> list[int]:
    head = g.head
    return [start] + [head[d] for d in darts]


def make_noncrossing(g: PlaneGraph, p1: list[int], p2: list[int]) -> list[int]:
    """Reroute ``p2`` along ``p1`` between its first and last contact with ``p1``.

    Both are dart lists of shortest paths; the result has the weight of
    ``p2`` and meets ``p1`` in one contiguous piece (or not at all).
    """
    if not p1 or not p2:
        return list(p2)
    head = g.head
    n1 = [head[p1[0] ^ 1]] + [head[d] for d in p1]
    pos1 = {x: k for k, x in enumerate(n1)}
    n2 = [head[p2[0] ^ 1]] + [head[d] for d in p2]
    first = last = -1
    for k, x in enumerate(n2):
        if x in pos1:
            if first < 0:
                first = k
            last = k
    if first < 0 or first == last:
        return list(p2)
    a, b = pos1[n2[first]], pos1[n2[last]]
    if a > b:
        raise AssertionError("paths meet in the wrong order for the terminal layout")
    return list(p2[:first]) + list(p1[a:b]) + list(p2[last:])


def _nodes_of(g: PlaneGraph, darts: list[int], start: int) -> set:
    s = {start}
    head = g.head
    for d in darts:
        s.add(head[d])
    return s


# the engine


@dataclass
class NcspStats:
    regions: int = 0
    region_nodes: int = 0
    via_calls: int = 0
    pinched_calls: int = 0
    solve_cases: dict = field(default_factory=dict)


class _Engine:
    """Shared state for one normalized instance."""

    def __init__(self, norm: Normalized):
        self.norm = norm
        g = norm.g
        self.g = g
        self.us = norm.us
        self.vs = norm.vs
        self.l = len(norm.us)
        self.dist: list = [None] * self.l
        self.stats = NcspStats()
        walk = g.outer_walk()
        self.walk = walk
        where = {}
        head = g.head
        for k, d in enumerate(walk):
            where.setdefault(head[d ^ 1], k)
        self.corner_u = [where[x] for x in self.us]
        self.corner_v = [where[x] for x in self.vs]
        self.outer = g.outer_face
        self.stamp = 0
        self.emark = [0] * g.m
        self.phi: dict = {}

    # regions

    def _bnd(self, c0: int, c1: int) -> list[int]:
        walk = self.walk
        L = len(walk)
        if c1 < c0:
            c1 += L
        return [walk[k % L] for k in range(c0, c1)]

    def region(self, a: int, b: int, pa: list[int], pb: list[int], drop=()) -> int:
        """Mark the edges of the region enclosed by ``pa``, ``pb`` and the
        outer face between their ends; returns the stamp identifying it."""
        g = self.g
        walk = (
            self._bnd(self.corner_u[a], self.corner_u[b])
            + list(pb)
            + self._bnd(self.corner_v[b], self.corner_v[a])
            + [d ^ 1 for d in reversed(pa)]
        )
        self.stamp += 1
        st = self.stamp
        em = self.emark
        wd = set(walk)
        for d in walk:
            em[d >> 1] = st
        face_of, faces = g.face_of, g.faces
        outer = self.outer
        seen = set()
        stack = []
        for d in walk:
            if (d ^ 1) in wd:
                continue
            f = face_of[d ^ 1]
            if f != outer and f not in seen:
                seen.add(f)
                stack.append(f)
        while stack:
            f = stack.pop()
            for d in faces[f]:
                e = d >> 1
                if em[e] != st:
                    em[e] = st
                if d in wd or (d ^ 1) in wd:
                    continue
                h = face_of[d ^ 1]
                if h != outer and h not in seen:
                    seen.add(h)
                    stack.append(h)
        for e in drop:
            em[e] = -1
        self.stats.regions += 1
        return st

    def dijkstra(self, src: int, st: int, reverse: bool = False, target: int = -1):
        """Dijkstra over the edges marked ``st`` (``st = 0`` means the whole graph)."""
        g = self.g
        head, w, rot = g.head, g.w, g.rot
        em = self.emark
        dist = {src: 0}
        par = {}
        done = set()
        heap = [(0, src)]
        pop, push = heapq.heappop, heapq.heappush
        while heap:
            d, x = pop(heap)
            if x in done:
                continue
            done.add(x)
            if x == target:
                break
            for e in rot[x]:
                if st and em[e >> 1] != st:
                    continue
                y = head[e]
                if y in done:
                    continue
                nd = d + (w[e ^ 1] if reverse else w[e])
                if nd < dist.get(y, nd + 1):
                    dist[y] = nd
                    par[y] = e
                    push(heap, (nd, y))
        self.stats.region_nodes += len(done)
        return dist, par

    def path(self, src: int, dst: int, st: int):
        dist, par = self.dijkstra(src, st, target=dst)
        out = []
        head = self.g.head
        v = dst
        while v != src:
            d = par[v]
            out.append(d)
            v = head[d ^ 1]
        out.reverse()
        return dist[dst], out

    def noncrossing(self, pi: list[int], *others) -> list[int]:
        for _ in range(4):
            before = pi
            for p in others:
                pi = make_noncrossing(self.g, p, pi)
            if pi == before:
                return pi
        return pi

    # statements for a range of indices strictly between a and b

    def via(self, a: int, b: int, st: int, zs) -> None:
        """Every pair strictly between ``a`` and ``b`` has a shortest path through ``zs``."""
        self.stats.via_calls += 1
        tables = []
        for z in zs:
            to_z, _ = self.dijkstra(z, st, reverse=True)
            from_z, _ = self.dijkstra(z, st)
            tables.append((to_z, from_z))
        for j in range(a + 1, b):
            best = None
            for to_z, from_z in tables:
                x = to_z.get(self.us[j])
                y = from_z.get(self.vs[j])
                if x is None or y is None:
                    continue
                if best is None or x + y < best:
                    best = x + y
            self.dist[j] = best

    def pinched(self, a: int, b: int, pa: list[int], pb: list[int], w_shared) -> None:
        """``pa`` and ``pb`` share a subpath of weight ``w_shared``; every pair
        strictly between them passes its ends."""
        self.stats.pinched_calls += 1
        g = self.g
        head = g.head
        na = [head[pa[0] ^ 1]] + [head[d] for d in pa]
        nb = _nodes_of(g, pb, head[pb[0] ^ 1])
        common = [k for k, x in enumerate(na) if x in nb]
        k1, k2 = common[0], common[-1]
        x1, x2 = na[k1], na[k2]
        shared = [pa[k] >> 1 for k in range(k1, k2)]
        st = self.region(a, b, pa, pb, drop=shared)
        to_x, _ = self.dijkstra(x1, st, reverse=True)
        from_x, _ = self.dijkstra(x2, st)
        for j in range(a + 1, b):
            x = to_x.get(self.us[j])
            y = from_x.get(self.vs[j])
            self.dist[j] = None if x is None or y is None else x + y + w_shared

    def measure(self, a: int, b: int, pa: list[int], pb: list[int]) -> None:
        """Pairs strictly between ``a`` and ``b`` given disjoint shortest paths for both."""
        if b - a < 2:
            return
        i = (a + b) // 2
        st = self.region(a, b, pa, pb)
        d, pi = self.path(self.us[i], self.vs[i], st)
        pi = self.noncrossing(pi, pa, pb)
        self.dist[i] = d
        self._recurse_measure(a, i, pa, pi, left=True)
        self._recurse_measure(i, b, pi, pb, left=False)

    def _recurse_measure(self, a, b, pa, pb, left):
        if b - a < 2:
            return
        head = self.g.head
        na = _nodes_of(self.g, pa, head[pa[0] ^ 1])
        common = [head[pb[0] ^ 1]] if head[pb[0] ^ 1] in na else []
        if not common:
            for d in pb:
                if head[d] in na:
                    common = [head[d]]
                    break
        if common:
            st = self.region(a, b, pa, pb)
            self.via(a, b, st, common)
        else:
            self.measure(a, b, pa, pb)


def _finish(norm: Normalized, dist: list) -> list:
    out = []
    for d in dist:
        if d is None or d >= norm.big:
            out.append(INF)
        else:
            out.append(d)
    return out


def noncrossing_distances(
    g: PlaneGraph,
    us: list[int],
    vs: list[int],
    backend: str = "baseline",
    r: "int | None" = None,
    stats: "NcspStats | None" = None,
) -> list:
    """``d(u_i, v_i)`` for terminals ordered ``u_1..u_l, v_l..v_1`` around the outer face.

    ``INF`` weights are treated as absent darts.  ``backend`` is
    ``"baseline"`` or ``"ddg"``; ``r`` overrides the piece size of the
    ddg backend.
    """
    if backend not in ("baseline", "ddg"):
        raise ValueError(f"unknown backend {backend!r}")
    l = len(us)
    if l == 0:
        return []
    norm = normalize(g, us, vs)
    eng = _Engine(norm)
    if stats is not None:
        eng.stats = stats
    d1, p1 = eng.path(norm.us[0], norm.vs[0], 0)
    eng.dist[0] = d1
    if l == 1:
        return _finish(norm, eng.dist)
    dl, pl = eng.path(norm.us[-1], norm.vs[-1], 0)
    pl = eng.noncrossing(pl, p1)
    eng.dist[l - 1] = dl
    head = norm.g.head
    n1 = _nodes_of(norm.g, p1, norm.us[0])
    shared = [x for x in [norm.us[-1]] + [head[d] for d in pl] if x in n1]
    if shared:
        eng.via(0, l - 1, 0, shared[:1])
        return _finish(norm, eng.dist)
    if backend == "baseline":
        eng.measure(0, l - 1, p1, pl)
    else:
        from .ddg import DdgSolver

        DdgSolver(eng, r).run(p1, pl)
    return _finish(norm, eng.dist)
