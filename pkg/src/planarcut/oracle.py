"""Brute-force references and random instance generation.

Everything here is deliberately simple and independent of the fast
pipeline, so that agreement between the two is meaningful.
"""

from __future__ import annotations

import heapq
import random
from collections import deque
from dataclasses import dataclass

from .plane_graph import INF, PlaneGraph, RawGraph, build_from_rotation


class TooLarge(ValueError):
    pass


@dataclass
class GenSpec:
    """Parameters of a random embedded graph.

    mode is ``"triangulation"`` (every face a triangle), ``"sparse"``
    (a triangulation with random edges deleted, staying connected) or
    ``"disk"`` (a triangulated disk whose outer face has ``outer`` nodes).
    """

    n: int
    seed: int = 0
    wmax: int = 20
    mode: str = "triangulation"
    keep: float = 0.6
    p_zero: float = 0.1
    p_inf: float = 0.03
    p_absent: float = 0.2
    outer: int = 3


def _grow(n: int, rng: random.Random, outer: int) -> list[list[int]]:
    """Neighbour rotations (counterclockwise) of a random triangulated disk."""
    k = max(3, min(outer, n))
    nbr: list[list[int]] = [[] for _ in range(n)]
    # outer cycle 0..k-1 counterclockwise, inner polygon fanned from node 0
    for i in range(k):
        nbr[i] = [(i + 1) % k, (i - 1) % k]
    faces = []
    for i in range(1, k - 1):
        faces.append((0, i, i + 1))
    if k > 3:
        nbr[0] = list(range(1, k))
        for i in range(2, k - 1):
            nbr[i] = [i + 1, 0, i - 1]
    for x in range(k, n):
        a, b, c = faces.pop(rng.randrange(len(faces)))
        ra, rb, rc = nbr[a], nbr[b], nbr[c]
        ra.insert(ra.index(b) + 1, x)
        rb.insert(rb.index(c) + 1, x)
        rc.insert(rc.index(a) + 1, x)
        nbr[x] = [a, b, c]
        faces.append((a, b, x))
        faces.append((b, c, x))
        faces.append((c, a, x))
    return nbr


def _weight(rng: random.Random, spec: GenSpec, allow_absent: bool):
    r = rng.random()
    if allow_absent and r < spec.p_absent:
        return None
    r = rng.random()
    if r < spec.p_zero:
        return 0
    if r < spec.p_zero + spec.p_inf:
        return INF
    return rng.randint(1, spec.wmax)


def gen_planar(spec: "GenSpec | int", seed: "int | None" = None, **kw) -> RawGraph:
    """Random embedded simple directed planar graph, deterministic per spec."""
    if isinstance(spec, int):
        spec = GenSpec(n=spec, seed=0 if seed is None else seed, **kw)
    n = spec.n
    rng = random.Random(spec.seed)
    if n <= 0:
        raise ValueError("need at least one node")
    if n == 1:
        return RawGraph(1, [], [[]])
    if n == 2:
        e = (0, 1, _weight(rng, spec, True), _weight(rng, spec, True))
        if e[2] is None and e[3] is None:
            e = (0, 1, rng.randint(0, spec.wmax), None)
        return RawGraph(2, [e], [[0], [0]])
    outer = spec.outer if spec.mode == "disk" else 3
    nbr = _grow(n, rng, outer)
    pairs = {}
    for x in range(n):
        for y in nbr[x]:
            if x < y:
                pairs[(x, y)] = True
    keep = set(pairs)
    if spec.mode == "sparse":
        keep = _thin(n, list(pairs), rng, spec.keep)
    eid = {}
    edges = []
    for x, y in sorted(keep):
        a = _weight(rng, spec, True)
        b = _weight(rng, spec, True)
        if a is None and b is None:
            a = rng.randint(0, spec.wmax)
        eid[(x, y)] = len(edges)
        edges.append((x, y, a, b))
    rot = []
    for x in range(n):
        rot.append([eid[(min(x, y), max(x, y))] for y in nbr[x] if (min(x, y), max(x, y)) in eid])
    outer_dart = (1, 0) if (0, 1) in eid else None
    return RawGraph(n, edges, rot, outer=outer_dart)


def _thin(n: int, pairs: list, rng: random.Random, keep_frac: float) -> set:
    """Random spanning tree plus a random fraction of the other edges."""
    rng.shuffle(pairs)
    parent = list(range(n))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    keep = set()
    rest = []
    for x, y in pairs:
        rx, ry = find(x), find(y)
        if rx != ry:
            parent[rx] = ry
            keep.add((x, y))
        else:
            rest.append((x, y))
    for p in rest:
        if rng.random() < keep_frac:
            keep.add(p)
    return keep


def gen_plane_graph(spec: "GenSpec | int", seed: "int | None" = None, filler=INF, **kw) -> PlaneGraph:
    """Random bidirected plane graph (absent arcs become ``filler``)."""
    return gen_planar(spec, seed, **kw).plane_graph(filler)


# shortest paths


def dijkstra_all(g: PlaneGraph, source: int, reverse: bool = False) -> list:
    """Textbook Dijkstra; ``INF`` darts are treated as absent."""
    dist = [INF] * g.n
    dist[source] = 0
    heap = [(0, source)]
    head, w = g.head, g.w
    while heap:
        d, x = heapq.heappop(heap)
        if d != dist[x]:
            continue
        for e in g.rot[x]:
            c = w[e ^ 1] if reverse else w[e]
            if c is INF:
                continue
            y = head[e]
            nd = d + c
            if dist[y] is INF or nd < dist[y]:
                dist[y] = nd
                heapq.heappush(heap, (nd, y))
    return dist


def pairwise_dijkstra(g: PlaneGraph, pairs) -> list:
    cache = {}
    out = []
    for s, t in pairs:
        if s not in cache:
            cache[s] = dijkstra_all(g, s)
        out.append(cache[s][t])
    return out


def bellman_ford(g: PlaneGraph, source: int) -> list:
    dist = [INF] * g.n
    dist[source] = 0
    darts = [(g.head[d ^ 1], g.head[d], g.w[d]) for d in range(len(g.head)) if g.w[d] is not INF]
    for _ in range(g.n):
        changed = False
        for x, y, c in darts:
            if dist[x] is not INF and (dist[y] is INF or dist[x] + c < dist[y]):
                dist[y] = dist[x] + c
                changed = True
        if not changed:
            break
    return dist


def shortest_closed_walk(raw: RawGraph):
    """min over arcs u->v of w(uv) + d(v, u); the shortest cycle weight."""
    n = raw.n
    out = [[] for _ in range(n)]
    for u, v, c in raw.arcs():
        if c is not INF:
            out[u].append((v, c))
    best = INF
    for s in range(n):
        dist = {s: 0}
        heap = [(0, s)]
        while heap:
            d, x = heapq.heappop(heap)
            if dist.get(x) != d:
                continue
            for y, c in out[x]:
                nd = d + c
                if y == s:
                    if best is INF or nd < best:
                        best = nd
                elif y not in dist or nd < dist[y]:
                    dist[y] = nd
                    heapq.heappush(heap, (nd, y))
    return best


# cycle enumeration


def enum_simple_nondegenerate_cycles(g: PlaneGraph, limit: int = 14):
    """Optimal simple cycle on at least three nodes, by exhaustive search.

    A non-degenerate closed walk splits into simple closed subwalks, each
    still non-degenerate, so the optimum over simple cycles of length at
    least three is the optimum over all non-degenerate cycles.  Returns
    ``(weight, darts)`` or ``(INF, None)``.
    """
    n = g.n
    if n > limit:
        raise TooLarge(f"{n} nodes exceeds the enumeration limit {limit}")
    head, w = g.head, g.w
    out = [[(d, head[d], w[d]) for d in g.rot[x] if w[d] is not INF] for x in range(n)]
    best = [INF, None]
    for s in range(n):
        # lower bound: distance back to s using nodes >= s only
        back = [INF] * n
        back[s] = 0
        heap = [(0, s)]
        while heap:
            d, x = heapq.heappop(heap)
            if d != back[x]:
                continue
            for e in g.rot[x]:
                c = w[e ^ 1]
                y = head[e]
                if c is INF or y < s:
                    continue
                if back[y] is INF or d + c < back[y]:
                    back[y] = d + c
                    heapq.heappush(heap, (d + c, y))
        on = [False] * n
        on[s] = True
        stack: list[int] = []

        def dfs(x: int, cur: int) -> None:
            for d, y, c in out[x]:
                nc = cur + c
                if best[0] is not INF and nc >= best[0]:
                    continue
                if y == s:
                    if len(stack) >= 2:
                        best[0] = nc
                        best[1] = stack + [d]
                    continue
                if y < s or on[y]:
                    continue
                b = back[y]
                if b is INF or (best[0] is not INF and nc + b >= best[0]):
                    continue
                on[y] = True
                stack.append(d)
                dfs(y, nc)
                stack.pop()
                on[y] = False

        dfs(s, 0)
    return best[0], best[1]


def all_simple_cycles(g: PlaneGraph, limit: int = 10):
    """Every simple cycle on at least three nodes as a dart list."""
    if g.n > limit:
        raise TooLarge(f"{g.n} nodes exceeds the listing limit {limit}")
    head = g.head
    found = []
    for s in range(g.n):
        on = [False] * g.n
        on[s] = True
        stack: list[int] = []

        def dfs(x):
            for d in g.rot[x]:
                y = head[d]
                if y == s and len(stack) >= 2:
                    found.append(stack + [d])
                elif y > s and not on[y]:
                    on[y] = True
                    stack.append(d)
                    dfs(y)
                    stack.pop()
                    on[y] = False

        dfs(s)
    return found


# max flow


def _max_flow_python(n: int, cap: dict, s: int, t: int) -> int:
    """BFS augmenting paths on a residual dict ``cap[(u, v)]``."""
    res = dict(cap)
    adj = [[] for _ in range(n)]
    for (u, v) in cap:
        adj[u].append(v)
        adj[v].append(u)
        res.setdefault((v, u), 0)
    flow = 0
    while True:
        prev = [-1] * n
        prev[s] = s
        q = deque([s])
        while q and prev[t] < 0:
            x = q.popleft()
            for y in adj[x]:
                if prev[y] < 0 and res[(x, y)] > 0:
                    prev[y] = x
                    q.append(y)
        if prev[t] < 0:
            return flow
        aug = None
        y = t
        while y != s:
            x = prev[y]
            c = res[(x, y)]
            aug = c if aug is None or c < aug else aug
            y = x
        y = t
        while y != s:
            x = prev[y]
            res[(x, y)] -= aug
            res[(y, x)] += aug
            y = x
        flow += aug


def min_cut_maxflow(raw: RawGraph, limit: int = 60, use_scipy: bool = True):
    """Global directed min cut as the least maximum st-flow.

    Infinite arcs get capacity ``1 + sum of finite weights``; a value that
    reaches it is reported as ``INF``.  With ``s0 = 0`` fixed, every cut
    separates ``s0`` from some ``t`` in one direction or the other, so
    ``2(n-1)`` flows cover all ordered pairs.
    """
    n = raw.n
    if n > limit:
        raise TooLarge(f"{n} nodes exceeds the max-flow oracle limit {limit}")
    if n < 2:
        return INF
    arcs = raw.arcs()
    sentinel = 1 + sum(c for _, _, c in arcs if c is not INF)
    cap: dict = {}
    for u, v, c in arcs:
        cap[(u, v)] = cap.get((u, v), 0) + (sentinel if c is INF else c)
    flows = []
    if use_scipy and sentinel < 2**31 // max(1, n):
        import numpy as np
        from scipy.sparse import csr_matrix
        from scipy.sparse.csgraph import maximum_flow

        rows = [u for u, v in cap]
        cols = [v for u, v in cap]
        vals = [cap[k] for k in cap]
        mat = csr_matrix((np.array(vals, dtype=np.int32), (rows, cols)), shape=(n, n))
        for t in range(1, n):
            flows.append(int(maximum_flow(mat, 0, t, method="edmonds_karp").flow_value))
            flows.append(int(maximum_flow(mat, t, 0, method="edmonds_karp").flow_value))
    else:
        for t in range(1, n):
            flows.append(_max_flow_python(n, cap, 0, t))
            flows.append(_max_flow_python(n, cap, t, 0))
    best = min(flows)
    return INF if best >= sentinel else best


def cut_value(raw: RawGraph, side) -> object:
    """Total weight of arcs leaving the node set ``side``."""
    s = set(side)
    total = 0
    for u, v, c in raw.arcs():
        if u in s and v not in s:
            total = total + c
    return total


def min_cut_bruteforce(raw: RawGraph, limit: int = 16):
    """Minimum over all nonempty proper node subsets (tiny graphs only)."""
    n = raw.n
    if n > limit:
        raise TooLarge("too many nodes for subset enumeration")
    if n < 2:
        return INF
    best = INF
    for mask in range(1, (1 << n) - 1):
        side = [x for x in range(n) if mask >> x & 1]
        c = cut_value(raw, side)
        if c < best:
            best = c
    return best


def reachable(n: int, arcs, s: int) -> list[bool]:
    out = [[] for _ in range(n)]
    for u, v in arcs:
        out[u].append(v)
    seen = [False] * n
    seen[s] = True
    stack = [s]
    while stack:
        x = stack.pop()
        for y in out[x]:
            if not seen[y]:
                seen[y] = True
                stack.append(y)
    return seen
