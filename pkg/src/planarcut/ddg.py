"""Piece decompositions of plane graphs and the distance machinery built
on their boundary nodes.

A division splits the edges of a graph into pieces; a node lying in two
or more pieces is a boundary node.  For every connected component of a
piece we keep shortest-path trees from and to each of its boundary
nodes.  The boundary-to-boundary distances of a component split into
Monge units (one per hole, a few per pair of holes), and a Dijkstra
variant runs over those units without scanning every dense edge.

``DdgSolver`` drives the divide-and-conquer over terminal pairs that uses
all of this to find noncrossing shortest paths.
"""

from __future__ import annotations

import heapq
import itertools
import math
import random
from bisect import bisect_left, bisect_right
from collections import deque
from dataclasses import dataclass, field

import numpy as np

from .ncsp import label
from .plane_graph import INF, PlaneGraph
from .separator import TriangulationFailed, dijkstra, sssp, triangulate


class FaceTooLarge(ValueError):
    pass


class MongeViolation(ValueError):
    pass


# Division constants.  Pieces come from splitting clusters of triangles
# until they hold at most ``r`` nodes, then splitting clusters with many
# boundary nodes or holes.  The bounds below are what ``check_division``
# enforces; they hold on the generator corpus used by the test suite.
R_FLOOR = 16
NODE_FACTOR = 1  # nodes per piece <= NODE_FACTOR * r
BOUNDARY_FACTOR = 6  # boundary nodes per piece <= BOUNDARY_FACTOR * sqrt(r) + BOUNDARY_SLACK
BOUNDARY_SLACK = 4
HOLE_LIMIT = 6  # holes per piece component
PIECE_FACTOR = 4  # pieces <= PIECE_FACTOR * ceil(n / r), terminal pieces excluded
SPLIT_BOUNDARY = 4  # split clusters with more than SPLIT_BOUNDARY * sqrt(r) shared corners
SPLIT_HOLES = 4
SPLIT_ROUNDS = 6


def choose_r(n: int) -> int:
    """``max(1, ceil(log2(n)^6))`` clamped to ``[16, n]``."""
    if n <= 1:
        return 1
    r = max(1, math.ceil(math.log2(n) ** 6))
    return max(1, min(max(r, R_FLOOR), n))


# local subgraphs


@dataclass
class LocalGraph:
    """Plane subgraph on an edge list of a parent graph, with id maps."""

    g: PlaneGraph
    node_old: list[int]
    node_new: dict
    edge_old: list[int]

    def dart_old(self, d: int) -> int:
        return 2 * self.edge_old[d >> 1] + (d & 1)


def local_graph(parent: PlaneGraph, edges) -> LocalGraph:
    head = parent.head
    node_new = {}
    node_old = []
    edge_new = {}
    nhead = []
    nw = []
    for e in edges:
        edge_new[e] = len(edge_new)
        for x in (head[2 * e], head[2 * e + 1]):
            if x not in node_new:
                node_new[x] = len(node_old)
                node_old.append(x)
        nhead.append(node_new[head[2 * e]])
        nhead.append(node_new[head[2 * e + 1]])
        nw.append(parent.w[2 * e])
        nw.append(parent.w[2 * e + 1])
    nrot = []
    for x in node_old:
        r = []
        for d in parent.rot[x]:
            k = edge_new.get(d >> 1)
            if k is not None:
                r.append(2 * k + (d & 1))
        nrot.append(r)
    g = PlaneGraph(len(node_old), nhead, nw, nrot, 0, check=False)
    return LocalGraph(g, node_old, node_new, list(edge_new))


# clusters of triangles


def _corners(t: PlaneGraph, faces) -> set:
    head, fl = t.head, t.faces
    out = set()
    for f in faces:
        for d in fl[f]:
            out.add(head[d])
    return out


def _hole_count(t: PlaneGraph, faces) -> int:
    """Faces of the cluster's subgraph that are not its triangles (per component)."""
    head, fl = t.head, t.faces
    edges = set()
    for f in faces:
        for d in fl[f]:
            edges.add(d >> 1)
    par = {}

    def find(x):
        while par[x] != x:
            par[x] = par[par[x]]
            x = par[x]
        return x

    for e in edges:
        a, b = head[2 * e], head[2 * e + 1]
        par.setdefault(a, a)
        par.setdefault(b, b)
        ra, rb = find(a), find(b)
        if ra != rb:
            par[ra] = rb
    comps = len({find(x) for x in par})
    return len(edges) - len(par) + 2 * comps - len(faces)


def _center(g: PlaneGraph) -> int:
    """Middle node of a long BFS path (double sweep)."""
    head, rot = g.head, g.rot

    def bfs(s):
        par = {s: -1}
        q = deque([s])
        last = s
        while q:
            x = q.popleft()
            last = x
            for d in rot[x]:
                y = head[d]
                if y not in par:
                    par[y] = x
                    q.append(y)
        return last, par

    a, _ = bfs(0)
    b, par = bfs(a)
    path = [b]
    while par[path[-1]] >= 0:
        path.append(par[path[-1]])
    return path[len(path) // 2]


def _split_cluster(t: PlaneGraph, faces: list[int], kind: str, shared=None):
    """Split a cluster of triangles of ``t`` in two along a fundamental cycle.

    ``kind`` picks what the cycle balances: ``"size"`` (triangles),
    ``"boundary"`` (corners in ``shared``) or ``"holes"``.  Disconnected
    clusters are split into their components instead.  Returns ``None``
    when no proper split exists.
    """
    head, fl = t.head, t.faces
    edges = sorted({d >> 1 for f in faces for d in fl[f]})
    lg = local_graph(t, edges)
    s = lg.g
    k, comp = s.components()
    if k > 1:
        groups = {}
        for f in faces:
            groups.setdefault(comp[lg.node_new[head[fl[f][0]]]], []).append(f)
        return list(groups.values())
    if len(faces) < 2:
        return None
    edge_new = {e: i for i, e in enumerate(lg.edge_old)}

    def to_local(d):
        return 2 * edge_new[d >> 1] + (d & 1)

    try:
        tr = triangulate(s)
    except TriangulationFailed:
        return None
    ts = tr.tri
    unit = ts.with_weights([1] * len(ts.head))
    tree = sssp(unit, _center(s))
    tree_edge = [False] * ts.m
    for p in tree.parent:
        if p >= 0:
            tree_edge[p >> 1] = True
    nf = len(ts.faces)
    count = [0] * nf
    tface = {}
    own = set()
    for f in faces:
        d = to_local(fl[f][0])
        tf = ts.face_of[d]
        count[tf] = 1
        tface[f] = tf
        own.add(s.face_of[d])
    if kind == "size":
        weight = count
    elif kind == "boundary":
        weight = [0] * nf
        seen = set()
        for f in faces:
            for d in fl[f]:
                x = head[d]
                if x in shared and x not in seen:
                    seen.add(x)
                    weight[tface[f]] += 1
    else:
        weight = [0] * nf
        for f in range(nf):
            if tr.weighted[f] and tr.origin[f] not in own:
                weight[f] = 1
    inside = _best_cut(ts, tree_edge, weight, count)
    if inside is None:
        return None
    a = [f for f in faces if tface[f] in inside]
    b = [f for f in faces if tface[f] not in inside]
    if not a or not b:
        return None
    return [a, b]


def _best_cut(tri: PlaneGraph, tree_edge: list[bool], weight: list[int], count: list[int]):
    """Faces on one side of the most balanced fundamental cycle that
    leaves cluster triangles on both sides."""
    nf = len(tri.faces)
    face_of = tri.face_of
    adj = [[] for _ in range(nf)]
    for e in range(tri.m):
        if not tree_edge[e]:
            f, g = face_of[2 * e], face_of[2 * e + 1]
            adj[f].append((g, e))
            adj[g].append((f, e))
    order = []
    parent = [-1] * nf
    seen = [False] * nf
    seen[0] = True
    stack = [0]
    while stack:
        f = stack.pop()
        order.append(f)
        for g, e in adj[f]:
            if not seen[g]:
                seen[g] = True
                parent[g] = f
                stack.append(g)
    if len(order) != nf:
        return None
    sw = list(weight)
    sc = list(count)
    for f in reversed(order):
        p = parent[f]
        if p >= 0:
            sw[p] += sw[f]
            sc[p] += sc[f]
    tw, tc = sw[0], sc[0]
    best = None
    for f in order:
        if parent[f] < 0 or sc[f] == 0 or sc[f] == tc:
            continue
        key = (max(sw[f], tw - sw[f]), max(sc[f], tc - sc[f]), f)
        if best is None or key < best:
            best = key
    if best is None:
        return None
    root = best[2]
    children = [[] for _ in range(nf)]
    for f in order:
        if parent[f] >= 0:
            children[parent[f]].append(f)
    out = set()
    stack = [root]
    while stack:
        f = stack.pop()
        out.add(f)
        stack.extend(children[f])
    return out


def _face_clusters(t: PlaneGraph, r: int) -> list[list[int]]:
    final = []
    work = [list(range(len(t.faces)))]
    while work:
        fs = work.pop()
        if len(_corners(t, fs)) <= r:
            final.append(fs)
            continue
        parts = _split_cluster(t, fs, "size")
        if not parts or len(parts) < 2:
            final.append(fs)
        else:
            work.extend(parts)
    limit_b = SPLIT_BOUNDARY * math.sqrt(r)
    for kind in ("boundary", "holes"):
        for _ in range(SPLIT_ROUNDS):
            mult = {}
            corners = [_corners(t, fs) for fs in final]
            for cs in corners:
                for x in cs:
                    mult[x] = mult.get(x, 0) + 1
            changed = False
            out = []
            for fs, cs in zip(final, corners):
                if len(fs) > 1:
                    if kind == "boundary":
                        shared = {x for x in cs if mult[x] > 1}
                        bad = len(shared) > limit_b
                    else:
                        shared = None
                        bad = _hole_count(t, fs) > SPLIT_HOLES
                    if bad:
                        parts = _split_cluster(t, fs, kind, shared)
                        if parts and len(parts) > 1:
                            out.extend(parts)
                            changed = True
                            continue
                out.append(fs)
            final = out
            if not changed:
                break
    return final


# divisions


@dataclass
class Hole:
    """A face of a piece component that is not a face of the graph (the
    component's external face always counts).  ``darts`` walk the face in
    graph dart ids; ``nodes[k]`` is the tail of ``darts[k]``."""

    darts: list[int]
    nodes: list[int]
    external: bool
    boundary: list[int] = field(default_factory=list)


@dataclass
class Component:
    piece: int
    local: LocalGraph
    holes: list[Hole]
    boundary: list[int] = field(default_factory=list)

    @property
    def nodes(self) -> list[int]:
        return self.local.node_old


@dataclass
class Division:
    """Edge-disjoint split of ``g`` into pieces.

    Pieces ``0..len(piece_edges) - extra - 1`` come from the clustering;
    the last ``extra`` pieces are edgeless and only make terminal nodes
    boundary nodes.  ``marked`` lists the terminal indices both of whose
    nodes are boundary nodes.
    """

    g: PlaneGraph
    r: int
    piece_edges: list[list[int]]
    piece_nodes: list[list[int]]
    extra: int
    mult: list[int]
    boundary: list[bool]
    comps: list[Component]
    node_comps: list[list[int]]
    marked: list[int] = field(default_factory=list)

    @property
    def pieces(self) -> int:
        return len(self.piece_edges)


def _dual_tree(g: PlaneGraph):
    """BFS tree of the dual rooted at the outer face: ``up[f]`` is the dart
    of ``f`` crossed towards the root."""
    faces, face_of = g.faces, g.face_of
    root = g.outer_face if g.outer_dart >= 0 else 0
    up = [-1] * len(faces)
    seen = [False] * len(faces)
    seen[root] = True
    q = deque([root])
    while q:
        f = q.popleft()
        for d in faces[f]:
            h = face_of[d ^ 1]
            if not seen[h]:
                seen[h] = True
                up[h] = d ^ 1
                q.append(h)
    return root, up


def _component_holes(g: PlaneGraph, lg: LocalGraph, root: int, up: list[int]) -> list[Hole]:
    s = lg.g
    gface = g.face_of
    gfaces = g.faces
    edge_set = set(lg.edge_old)
    # external face: last component edge crossed on the dual path to the outer face
    d0 = lg.dart_old(0)
    cur = gface[d0]
    last = -1
    while cur != root:
        d = up[cur]
        if (d >> 1) in edge_set:
            last = d ^ 1
        cur = gface[d ^ 1]
    ext = d0 if last < 0 else last
    edge_new = {e: i for i, e in enumerate(lg.edge_old)}
    ext_face = s.face_of[2 * edge_new[ext >> 1] + (ext & 1)]
    holes = []
    head = g.head
    for fid, walk in enumerate(s.faces):
        darts = [lg.dart_old(d) for d in walk]
        f0 = gface[darts[0]]
        is_face = len(darts) == len(gfaces[f0]) and all(gface[d] == f0 for d in darts)
        if fid == ext_face or not is_face:
            holes.append(Hole(darts, [head[d ^ 1] for d in darts], fid == ext_face))
    return holes


def r_division(g: PlaneGraph, r: int, pairs=None) -> Division:
    """Division of ``g`` into pieces of at most ``r`` nodes.

    ``g`` is triangulated first; chords steer the clustering and are then
    dropped.  ``pairs`` lists terminal pairs ``(u_i, v_i)``; the first and
    last pair and every pair with a boundary node get an extra edgeless
    piece so that both their nodes are boundary nodes.
    """
    if r < 1:
        raise ValueError("r must be positive")
    n = g.n
    pairs = list(pairs or [])
    if g.m == 0:
        t = g
    else:
        t = triangulate(g).tri
    for walk in t.faces:
        if len(walk) > 3:
            raise FaceTooLarge(f"face of size {len(walk)} after triangulation")
    clusters = _face_clusters(t, r) if t.m else []
    face_cluster = [0] * len(t.faces)
    for c, fs in enumerate(clusters):
        for f in fs:
            face_cluster[f] = c
    assigned = [[] for _ in clusters]
    for e in range(t.m):
        assigned[face_cluster[t.face_of[2 * e]]].append(e)
    piece_edges = []
    piece_nodes = []
    head = t.head
    for es in assigned:
        if not es:
            continue
        nodes = sorted({head[2 * e] for e in es} | {head[2 * e + 1] for e in es})
        piece_edges.append([e for e in es if e < g.m])
        piece_nodes.append(nodes)
    if not piece_nodes and n:
        piece_edges.append([])
        piece_nodes.append(list(range(n)))
    mult = [0] * n
    for nodes in piece_nodes:
        for x in nodes:
            mult[x] += 1
    marked = []
    for i, (u, v) in enumerate(pairs):
        if i == 0 or i == len(pairs) - 1 or mult[u] > 1 or mult[v] > 1:
            marked.append(i)
    extra_nodes = []
    for i in marked:
        for x in pairs[i]:
            if x not in extra_nodes:
                extra_nodes.append(x)
    size = max(1, math.isqrt(r))
    extra = 0
    for k in range(0, len(extra_nodes), size):
        chunk = extra_nodes[k : k + size]
        piece_edges.append([])
        piece_nodes.append(sorted(chunk))
        for x in chunk:
            mult[x] += 1
        extra += 1
    boundary = [c > 1 for c in mult]
    root, up = _dual_tree(g) if g.m else (0, [])
    comps = []
    node_comps = [[] for _ in range(n)]
    for p, es in enumerate(piece_edges):
        if not es:
            continue
        whole = local_graph(g, es)
        k, lab = whole.g.components()
        groups = [[] for _ in range(k)]
        for le, e in enumerate(whole.edge_old):
            groups[lab[whole.g.head[2 * le]]].append(e)
        for es2 in groups:
            lg = local_graph(g, es2) if k > 1 else whole
            holes = _component_holes(g, lg, root, up)
            cid = len(comps)
            bnd = [x for x in lg.node_old if boundary[x]]
            for h in holes:
                seen = set()
                for x in h.nodes:
                    if boundary[x] and x not in seen:
                        seen.add(x)
                        h.boundary.append(x)
            comps.append(Component(p, lg, holes, bnd))
            for x in lg.node_old:
                node_comps[x].append(cid)
    return Division(g, r, piece_edges, piece_nodes, extra, mult, boundary, comps, node_comps, marked)


@dataclass
class DivisionReport:
    pieces: int
    max_nodes: int
    max_boundary: int
    max_holes: int
    ok: bool
    problems: list[str]


def check_division(div: Division) -> DivisionReport:
    """Recount the division and compare with the documented constants."""
    g = div.g
    problems = []
    seen = [0] * g.m
    for es in div.piece_edges:
        for e in es:
            seen[e] += 1
    if any(c != 1 for c in seen):
        problems.append("pieces do not partition the edges")
    real = div.pieces - div.extra
    max_nodes = max((len(div.piece_nodes[p]) for p in range(real)), default=0)
    max_b = 0
    for p in range(div.pieces):
        b = sum(1 for x in div.piece_nodes[p] if div.boundary[x])
        max_b = max(max_b, b)
    max_h = max((len(c.holes) for c in div.comps), default=0)
    r = div.r
    if max_nodes > NODE_FACTOR * r:
        problems.append(f"piece with {max_nodes} nodes > {NODE_FACTOR * r}")
    lim_b = BOUNDARY_FACTOR * math.sqrt(r) + BOUNDARY_SLACK
    if max_b > lim_b:
        problems.append(f"piece with {max_b} boundary nodes > {lim_b:.1f}")
    if max_h > HOLE_LIMIT:
        problems.append(f"component with {max_h} holes > {HOLE_LIMIT}")
    lim_p = PIECE_FACTOR * math.ceil(g.n / r) if g.n else 1
    if real > lim_p:
        problems.append(f"{real} pieces > {lim_p}")
    return DivisionReport(real, max_nodes, max_b, max_h, not problems, problems)


# dense distance graph


@dataclass
class CompTables:
    """Shortest-path trees of one component, from and to each boundary node.

    Trees use the component's local ids; ``kd[i][j]`` is the distance from
    boundary node ``i`` to boundary node ``j``.
    """

    bn: list[int]
    bidx: dict
    dist_from: list[list]
    par_from: list[list[int]]
    dist_to: list[list]
    par_to: list[list[int]]
    kd: list[list]


@dataclass
class DenseDistanceGraph:
    div: Division
    tables: list  # per component, None without boundary nodes
    edges: dict  # (u, v) -> (weight, component)

    def weight(self, u: int, v: int):
        e = self.edges.get((u, v))
        return INF if e is None else e[0]

    def stream_forward(self, comp: int, x: int, y: int):
        """Darts of the stored in-component shortest path ``x -> y``, first to last."""
        t = self.tables[comp]
        lg = self.div.comps[comp].local
        cur = lg.node_new[x]
        end = lg.node_new[y]
        par = t.par_to[t.bidx[y]]
        head = lg.g.head
        while cur != end:
            d = par[cur]
            yield lg.dart_old(d)
            cur = head[d]

    def stream_backward(self, comp: int, x: int, y: int):
        """Darts of the stored in-component shortest path ``x -> y``, last to first."""
        t = self.tables[comp]
        lg = self.div.comps[comp].local
        cur = lg.node_new[y]
        end = lg.node_new[x]
        par = t.par_from[t.bidx[x]]
        head = lg.g.head
        while cur != end:
            d = par[cur]
            yield lg.dart_old(d)
            cur = head[d ^ 1]


def dense_distance_graph(div: Division) -> DenseDistanceGraph:
    """Boundary-to-boundary distances inside every piece component, with the
    trees that realise them."""
    tables = []
    edges = {}
    for cid, c in enumerate(div.comps):
        if not c.boundary:
            tables.append(None)
            continue
        s = c.local.g
        bn = list(c.boundary)
        bidx = {x: i for i, x in enumerate(bn)}
        loc = [c.local.node_new[x] for x in bn]
        df, pf, dt, pt = [], [], [], []
        for lx in loc:
            d, p = dijkstra(s, lx)
            df.append(d)
            pf.append(p)
            d, p = dijkstra(s, lx, reverse=True)
            dt.append(d)
            pt.append(p)
        kd = [[df[i][loc[j]] for j in range(len(bn))] for i in range(len(bn))]
        tables.append(CompTables(bn, bidx, df, pf, dt, pt, kd))
        for i, u in enumerate(bn):
            row = kd[i]
            for j, v in enumerate(bn):
                if i == j or row[j] is INF:
                    continue
                old = edges.get((u, v))
                if old is None or row[j] < old[0]:
                    edges[(u, v)] = (row[j], cid)
    return DenseDistanceGraph(div, tables, edges)


# Monge units


@dataclass
class MongeUnit:
    """Distances of one component between ordered node lists.

    ``kind == 1``: complete graph on ``rows`` in cyclic order.
    ``kind == 2``: from ``rows`` to ``cols``, each in linear order.
    ``dense`` units hold unreachable pairs; no Monge claim is made for
    them and searches relax them entry by entry.
    """

    kind: int
    comp: int
    rows: list[int]
    cols: list[int]
    table: CompTables = field(repr=False)
    dense: bool = False

    def weight(self, u: int, v: int):
        b = self.table.bidx
        return self.table.kd[b[u]][b[v]]

    @property
    def size(self) -> int:
        return len(self.rows) + len(self.cols)

    def pairs(self):
        if self.kind == 1:
            return [(u, v) for u in self.rows for v in self.rows if u != v]
        return [(u, v) for u in self.rows for v in self.cols if u != v]


def _le(a, b) -> bool:
    return a <= b


def _adjacent_violations(u: MongeUnit, stop_at: int = 1) -> int:
    """Failed adjacent 2x2 checks; for finite weights none means the unit
    satisfies the Monge inequality for every ordered quadruple."""
    w = u.weight
    bad = 0
    if u.kind == 2:
        rs, cs = u.rows, u.cols
        for i in range(len(rs) - 1):
            a, b = rs[i], rs[i + 1]
            for j in range(len(cs) - 1):
                c, d = cs[j], cs[j + 1]
                if len({a, b, c, d}) < 4:
                    continue
                if not _le(w(a, c) + w(b, d), w(a, d) + w(b, c)):
                    bad += 1
                    if bad >= stop_at:
                        return bad
        return bad
    L = u.rows
    k = len(L)
    if k < 4:
        return 0
    for i in range(k):
        a, b = L[i], L[(i + 1) % k]
        for c0 in range(k):
            if c0 in (i, (i + 1) % k, (i - 1) % k):
                continue
            c, d = L[c0], L[(c0 + 1) % k]
            # cyclic order a, b, c, d
            if not _le(w(a, d) + w(b, c), w(a, c) + w(b, d)):
                bad += 1
                if bad >= stop_at:
                    return bad
    return bad


def _has_inf(u: MongeUnit) -> bool:
    w = u.weight
    cols = u.rows if u.kind == 1 else u.cols
    return any(w(a, b) is INF for a in u.rows for b in cols if a != b)


def _refine(u: MongeUnit, stats: dict) -> list[MongeUnit]:
    if _has_inf(u):
        stats["dense"] = stats.get("dense", 0) + 1
        u.dense = True
        return [u]
    if _adjacent_violations(u) == 0:
        return [u]
    stats["refinements"] = stats.get("refinements", 0) + 1
    if u.kind == 1:
        out = []
        for a, b in _cyclic_blocks(u.rows):
            out.extend(_refine(MongeUnit(2, u.comp, a, b, u.table), stats))
        return out
    rs, cs = u.rows, u.cols
    if len(rs) >= len(cs):
        h = len(rs) // 2
        parts = [(rs[:h], cs), (rs[h:], cs)]
    else:
        h = len(cs) // 2
        parts = [(rs, cs[:h]), (rs, cs[h:])]
    out = []
    for a, b in parts:
        out.extend(_refine(MongeUnit(2, u.comp, a, b, u.table), stats))
    return out


def _cyclic_blocks(order: list[int]) -> list[tuple[list[int], list[int]]]:
    """Bipartite pieces of a cyclic order: each half to the other half
    reversed, then both halves recursively.  Every ordered pair of
    distinct nodes lands in exactly one piece."""
    out = []
    stack = [list(order)]
    while stack:
        L = stack.pop()
        if len(L) < 2:
            continue
        h = len(L) // 2
        a, b = L[:h], L[h:]
        out.append((a, b[::-1]))
        out.append((b, a[::-1]))
        stack.append(a)
        stack.append(b)
    return out


def _rotate_to(order: list[int], key) -> list[int]:
    if not order:
        return order
    k = min(range(len(order)), key=lambda i: (key(order[i]), i))
    return order[k:] + order[:k]


def monge_decomposition(ddg: DenseDistanceGraph, stats: "dict | None" = None) -> list[MongeUnit]:
    """Monge units whose pointwise minimum is the dense distance graph.

    One cyclic unit per hole; for each ordered pair of holes, a unit from
    the first hole's boundary nodes to the second's (nodes on both holes
    are covered by the cyclic units).  Each hole order is cut at the node
    nearest the other hole.  Units failing the adjacent Monge check are
    split until they pass.
    """
    if stats is None:
        stats = {}
    units = []
    for cid, c in enumerate(ddg.div.comps):
        t = ddg.tables[cid]
        if t is None or len(t.bn) < 2:
            continue
        kd, bidx = t.kd, t.bidx
        hb = [h.boundary for h in c.holes]
        for b in hb:
            if len(b) >= 2:
                units.extend(_refine(MongeUnit(1, cid, list(b), [], t), stats))
        for i, j in itertools.permutations(range(len(hb)), 2):
            rows = hb[i]
            rs = set(rows)
            cols = [v for v in hb[j] if v not in rs]
            if not rows or not cols:
                continue
            rows = _rotate_to(rows, lambda u: min(kd[bidx[u]][bidx[v]] for v in cols))
            cols = _rotate_to(cols, lambda v: min(kd[bidx[u]][bidx[v]] for u in rows))
            best = None
            for cand in (cols, cols[:1] + cols[1:][::-1]):
                u = MongeUnit(2, cid, rows, cand, t)
                bad = _adjacent_violations(u, stop_at=1 << 30)
                if best is None or bad < best[0]:
                    best = (bad, u)
            units.extend(_refine(best[1], stats))
    stats["units"] = len(units)
    return units


def audit_unit(u: MongeUnit, exhaustive_limit: int = 64, samples: int = 10000, seed: int = 0):
    """Check the Monge inequality quadruple by quadruple.

    Every quadruple is tried when the unit has at most ``exhaustive_limit``
    nodes, otherwise ``samples`` random ones.  Returns the first failing
    quadruple ``(u1, u2, v2, v1)`` or ``None``.
    """
    w = u.weight
    nodes = u.rows if u.kind == 1 else u.rows + u.cols
    exhaustive = len(set(nodes)) <= exhaustive_limit

    def bad(u1, u2, v2, v1):
        if len({u1, u2, v1, v2}) < 4:
            return False
        return not _le(w(u1, v1) + w(u2, v2), w(u1, v2) + w(u2, v1))

    rng = random.Random(seed)
    if u.kind == 1:
        L = u.rows
        k = len(L)
        if k < 4:
            return None
        if exhaustive:
            idx = itertools.combinations(range(k), 4)
        else:
            idx = (tuple(sorted(rng.sample(range(k), 4))) for _ in range(samples))
        for a, b, c, d in idx:
            q = (L[a], L[b], L[c], L[d])
            for s in range(4):
                x = q[s:] + q[:s]
                if bad(*x):
                    return x
        return None
    rs, cs = u.rows, u.cols
    if len(rs) < 2 or len(cs) < 2:
        return None
    if exhaustive:
        it = (
            (i, j, k, l)
            for i, j in itertools.combinations(range(len(rs)), 2)
            for k, l in itertools.combinations(range(len(cs)), 2)
        )
    else:
        it = (
            tuple(sorted(rng.sample(range(len(rs)), 2))) + tuple(sorted(rng.sample(range(len(cs)), 2)))
            for _ in range(samples)
        )
    for i, j, k, l in it:
        # rows i < j, columns k < l: w(i,k) + w(j,l) <= w(i,l) + w(j,k)
        if bad(rs[i], rs[j], cs[l], cs[k]):
            return (rs[i], rs[j], cs[l], cs[k])
    return None


def audit_matrix(u: MongeUnit) -> bool:
    """Vectorised exhaustive check for finite bipartite units."""
    if u.kind != 2 or len(u.rows) < 2 or len(u.cols) < 2:
        return audit_unit(u, exhaustive_limit=1 << 30) is None
    a = np.array([[u.weight(x, y) if x != y else 0 for y in u.cols] for x in u.rows], dtype=np.int64)
    rs = {x: i for i, x in enumerate(u.rows)}
    same = [(rs[y], j) for j, y in enumerate(u.cols) if y in rs]
    p, q = a.shape
    for i in range(p - 1):
        # all j > i, all column pairs k < l
        lhs = a[i, :, None] + a[i + 1 :, None, :]  # (p-i-1, q, q): a[i,k] + a[j,l]
        rhs = a[i, None, :] + a[i + 1 :, :, None]  # a[i,l] + a[j,k]
        viol = lhs > rhs
        viol &= np.triu(np.ones((q, q), dtype=bool), 1)[None, :, :]
        if same:
            for r0, c0 in same:
                if r0 == i:
                    viol[:, c0, :] = False
                    viol[:, :, c0] = False
                elif r0 > i:
                    viol[r0 - i - 1, c0, :] = False
                    viol[r0 - i - 1, :, c0] = False
        if viol.any():
            return False
    return True


# Dijkstra over Monge units


class _Block:
    """One bipartite Monge matrix during a Dijkstra run.

    Active rows (finalized nodes) form a lower envelope; by the Monge
    property each owns a contiguous run of columns, so a new row's run is
    found by two binary searches.  Each owner keeps the best unfinished
    column of its run as a candidate.
    """

    __slots__ = ("rows", "cols", "ri", "ci", "kd", "tr", "dense", "comp", "rv", "owners", "lo", "cand", "done")

    def __init__(self, rows, cols, table, comp, transposed, dense=False):
        self.rows = rows
        self.cols = cols
        b = table.bidx
        self.ri = [b[x] for x in rows]
        self.ci = [b[x] for x in cols]
        self.kd = table.kd
        self.tr = transposed
        self.dense = dense
        self.comp = comp
        self.rv = {}
        self.owners = []
        self.lo = []
        self.cand = {}
        self.done = [False] * len(cols)

    def value(self, i, j):
        if self.tr:
            return self.rv[i] + self.kd[self.ci[j]][self.ri[i]]
        return self.rv[i] + self.kd[self.ri[i]][self.ci[j]]

    def env(self, j):
        k = bisect_right(self.lo, j) - 1
        return self.value(self.owners[k], j)

    def insert(self, i, d) -> list[int]:
        """Activate row ``i`` at distance ``d``; returns owners whose runs changed."""
        self.rv[i] = d
        q = len(self.cols)
        owners, lo = self.owners, self.lo
        if not owners:
            owners.append(i)
            lo.append(0)
            return [i]
        k = bisect_left(owners, i)
        split = lo[k] if k < len(owners) else q
        a, b = 0, split
        while a < b:
            mid = (a + b) // 2
            if self.value(i, mid) < self.env(mid):
                b = mid
            else:
                a = mid + 1
        left = a
        a, b = split, q
        while a < b:
            mid = (a + b) // 2
            if self.value(i, mid) <= self.env(mid):
                a = mid + 1
            else:
                b = mid
        right = a - 1
        if left > right:
            return []
        runs = []
        for t, o in enumerate(owners):
            s = lo[t]
            e = lo[t + 1] - 1 if t + 1 < len(owners) else q - 1
            runs.append((o, s, e))
        new = []
        changed = [i]
        placed = False
        for o, s, e in runs:
            if e < left or s > right:
                if s > right and not placed:
                    new.append((i, left))
                    placed = True
                new.append((o, s))
                continue
            changed.append(o)
            if s < left:
                new.append((o, s))
            if not placed:
                new.append((i, left))
                placed = True
            if e > right:
                new.append((o, right + 1))
        if not placed:
            new.append((i, left))
        self.owners = [o for o, _ in new]
        self.lo = [s for _, s in new]
        live = set(self.owners)
        for o in changed:
            if o not in live:
                self.cand.pop(o, None)
        return [o for o in changed if o in live]

    def run_of(self, o):
        t = bisect_left(self.owners, o)
        s = self.lo[t]
        e = self.lo[t + 1] - 1 if t + 1 < len(self.owners) else len(self.cols) - 1
        return s, e

    def best(self, o):
        s, e = self.run_of(o)
        best = None
        done = self.done
        for j in range(s, e + 1):
            if done[j]:
                continue
            v = self.value(o, j)
            if v is INF:
                continue
            if best is None or v < best[0]:
                best = (v, j)
        self.cand[o] = best
        return best

    def owner_of(self, j):
        return self.owners[bisect_right(self.lo, j) - 1]


def _restricted_blocks(units, X: set, reverse: bool):
    blocks = []
    for u in units:
        if u.kind == 1:
            L = [x for x in u.rows if x in X]
            parts = _cyclic_blocks(L)
        else:
            rs = [x for x in u.rows if x in X]
            cs = [x for x in u.cols if x in X]
            parts = [(rs, cs)] if rs and cs else []
        for rs, cs in parts:
            if not rs or not cs:
                continue
            if reverse:
                blocks.append(_Block(cs, rs, u.table, u.comp, True, u.dense))
            else:
                blocks.append(_Block(rs, cs, u.table, u.comp, False, u.dense))
    return blocks


@dataclass
class FastDijkstraStats:
    blocks: int = 0
    block_size: int = 0
    evaluations: int = 0


def fast_dijkstra(units, X, source: int, reverse: bool = False, node_units=None, stats=None):
    """Shortest paths from ``source`` inside the dense graph induced by ``X``.

    Returns ``(dist, parent)``; ``parent[v] = (u, comp)`` names the previous
    node and the component realising the dense edge.  With ``reverse``
    distances run *to* ``source`` and ``parent[v]`` is the next node.
    ``node_units`` (node -> units) limits the work to units touching ``X``.
    """
    X = set(X)
    if node_units is not None:
        chosen = {}
        for x in X:
            for u in node_units.get(x, ()):
                chosen[id(u)] = u
        units = list(chosen.values())
    blocks = _restricted_blocks(units, X, reverse)
    as_row = {}
    as_col = {}
    for bi, b in enumerate(blocks):
        for i, x in enumerate(b.rows):
            as_row.setdefault(x, []).append((bi, i))
        for j, x in enumerate(b.cols):
            as_col.setdefault(x, []).append((bi, j))
    if stats is not None:
        stats.blocks += len(blocks)
        stats.block_size += sum(len(b.rows) + len(b.cols) for b in blocks)
    dist = {}
    parent = {}
    heap = []
    push = heapq.heappush

    def offer(bi, o):
        c = blocks[bi].best(o)
        if c is not None:
            push(heap, (c[0], blocks[bi].cols[c[1]], bi, o))

    def finalize(v, d):
        dist[v] = d
        for bi, j in as_col.get(v, ()):
            b = blocks[bi]
            b.done[j] = True
            if b.dense or not b.owners:
                continue
            o = b.owner_of(j)
            c = b.cand.get(o)
            if c is not None and c[1] == j:
                offer(bi, o)
        for bi, i in as_row.get(v, ()):
            b = blocks[bi]
            if b.dense:
                b.rv[i] = d
                for j, y in enumerate(b.cols):
                    if not b.done[j]:
                        val = b.value(i, j)
                        if val is not INF:
                            push(heap, (val, y, bi, i))
                continue
            for o in b.insert(i, d):
                offer(bi, o)

    finalize(source, 0)
    while heap:
        d, v, bi, o = heapq.heappop(heap)
        if v in dist:
            continue
        parent[v] = (blocks[bi].rows[o], blocks[bi].comp)
        finalize(v, d)
    return dist, parent


def dense_dijkstra(ddg: DenseDistanceGraph, X, source: int, reverse: bool = False) -> dict:
    """Plain Dijkstra over the dense graph induced by ``X`` (reference)."""
    X = set(X)
    adj = {}
    for (u, v), (w, _) in ddg.edges.items():
        if u in X and v in X:
            if reverse:
                u, v = v, u
            adj.setdefault(u, []).append((v, w))
    dist = {source: 0}
    done = set()
    heap = [(0, source)]
    while heap:
        d, x = heapq.heappop(heap)
        if x in done:
            continue
        done.add(x)
        for y, w in adj.get(x, ()):
            nd = d + w
            if y not in dist or nd < dist[y]:
                dist[y] = nd
                heapq.heappush(heap, (nd, y))
    return {x: dist[x] for x in done}


# boundary sets of regions


@dataclass
class HoleAccess:
    """Per hole: a path ``q_nodes``/``q_darts`` inside the component from the
    hole to its external face, and positions of nodes along hole and path."""

    comp: int
    hole: int
    q_nodes: list[int]
    q_darts: list[int]
    q_index: dict
    c_index: dict  # node -> first position on the hole walk


@dataclass
class BoundaryPartition:
    div: Division
    access: dict  # (comp, hole) -> HoleAccess
    external: list[int]  # per component: index of its external hole
    fallbacks: int = 0


def build_bd(div: Division) -> BoundaryPartition:
    access = {}
    external = []
    for cid, c in enumerate(div.comps):
        s = c.local.g
        ext = next(k for k, h in enumerate(c.holes) if h.external)
        external.append(ext)
        # BFS from the external face inside the component
        srcs = [c.local.node_new[x] for x in c.holes[ext].nodes]
        par = {x: -1 for x in srcs}
        q = deque(srcs)
        while q:
            x = q.popleft()
            for d in s.rot[x]:
                y = s.head[d]
                if y not in par:
                    par[y] = d ^ 1  # dart from y back towards the face
                    q.append(y)
        for k, h in enumerate(c.holes):
            cidx = {}
            for p, x in enumerate(h.nodes):
                cidx.setdefault(x, p)
            x = c.local.node_new[h.nodes[0]]
            qn = [h.nodes[0]]
            qd = []
            if k != ext:
                while par[x] >= 0:
                    d = par[x]
                    qd.append(c.local.dart_old(d))
                    x = s.head[d]
                    qn.append(c.local.node_old[x])
            access[(cid, k)] = HoleAccess(cid, k, qn, qd, {x: i for i, x in enumerate(qn)}, cidx)
    return BoundaryPartition(div, access, external)


def _right_side(g: PlaneGraph, din: int, dout: int, d: int) -> bool:
    """Whether dart ``d`` leaves the path node between ``din`` and ``dout``
    on the path's right."""
    k = len(g.rot[g.head[dout ^ 1]])
    a = g.pos[din ^ 1]
    return 0 < (g.pos[d] - a) % k < (g.pos[dout] - a) % k


def split_boundary_set(bd: BoundaryPartition, x13, p2: list[int]) -> tuple[set, set]:
    """Split the boundary nodes of a region by a path crossing it.

    ``x13`` holds the boundary nodes of the region between two disjoint
    paths; ``p2`` (darts) runs between them.  Returns the boundary nodes
    of the part right of ``p2`` and of the part left of it; nodes of
    ``p2`` belong to both.
    """
    div = bd.div
    g = div.g
    head = g.head
    s2 = [head[p2[0] ^ 1]] + [head[d] for d in p2]
    on = set(s2)
    inout = {}
    for k, d in enumerate(p2):
        u = head[d]
        if k + 1 < len(p2):
            inout[u] = (d, p2[k + 1])
    both = {x for x in x13 if x in on}
    rest = [x for x in x13 if x not in on]
    if not rest:
        return set(both), set(both)
    node_comps = div.node_comps
    touched = set()
    for u in s2:
        touched.update(node_comps[u])
    # group nodes through components the path does not touch
    par = {}

    def find(a):
        while par[a] != a:
            par[a] = par[par[a]]
            a = par[a]
        return a

    for x in rest:
        par.setdefault(x, x)
        for c in node_comps[x]:
            if c in touched:
                continue
            key = ("c", c)
            par.setdefault(key, key)
            ra, rb = find(x), find(key)
            if ra != rb:
                par[ra] = rb
    groups = {}
    for x in rest:
        groups.setdefault(find(x), []).append(x)
    cache = {}

    def side_of(u, v_dart):
        io = inout.get(u)
        if io is None:
            return None
        return _right_side(g, io[0], io[1], v_dart)

    def hits(cid, k):
        key = (cid, k)
        if key not in cache:
            h = div.comps[cid].holes[k]
            acc = bd.access[key]
            ps = []
            for u in s2:
                p = acc.c_index.get(u)
                if p is not None:
                    # every occurrence matters on non-simple walks
                    ps.extend(i for i, y in enumerate(h.nodes) if y == u) if h.nodes.count(u) > 1 else ps.append(p)
            ps.sort()
            qs = sorted(acc.q_index[u] for u in s2 if u in acc.q_index)
            cache[key] = (ps, qs)
        return cache[key]

    def along_hole(cid, k, p):
        """Side of the node before the first path node after position ``p``."""
        h = div.comps[cid].holes[k]
        ps, _ = hits(cid, k)
        if not ps:
            return None
        t = bisect_right(ps, p)
        pu = ps[t] if t < len(ps) else ps[0]
        dart = h.darts[pu - 1]  # from the previous node to the path node
        return side_of(head[dart], dart ^ 1)

    def classify(x, cid):
        c = div.comps[cid]
        for k, h in enumerate(c.holes):
            acc = bd.access[(cid, k)]
            p = acc.c_index.get(x)
            if p is None:
                continue
            ps, qs = hits(cid, k)
            if ps:
                return along_hole(cid, k, p)
            if qs:
                i = qs[0]
                dart = acc.q_darts[i - 1]
                return side_of(head[dart], dart ^ 1)
            ext = bd.external[cid]
            qn = acc.q_nodes[-1]
            pq = bd.access[(cid, ext)].c_index[qn]
            return along_hole(cid, ext, pq)
        return None

    def fallback(x):
        bd.fallbacks += 1
        seen = {x}
        q = deque([x])
        rot = g.rot
        while q:
            y = q.popleft()
            for d in rot[y]:
                z = head[d]
                if z in on:
                    s = side_of(z, d ^ 1)
                    if s is not None:
                        return s
                    continue
                if z not in seen:
                    seen.add(z)
                    q.append(z)
        raise AssertionError("node does not reach the path")

    right, left = set(both), set(both)
    for members in groups.values():
        s = None
        for x in members:
            for cid in node_comps[x]:
                if cid in touched:
                    s = classify(x, cid)
                    if s is not None:
                        break
            if s is not None:
                break
        if s is None:
            s = fallback(members[0])
        (right if s else left).update(members)
    return right, left


# the solver


class DdgSolver:
    """Noncrossing shortest paths for terminal pairs, steered by a division.

    Only pairs with boundary nodes are solved through the dense distance
    graph; runs of pairs between two such pairs are handed to the region
    recursion of the engine.
    """

    def __init__(self, eng, r: "int | None" = None, check: bool = False):
        self.eng = eng
        g = eng.g
        self.r = choose_r(g.n) if r is None else max(1, int(r))
        self.div = r_division(g, self.r, pairs=list(zip(eng.us, eng.vs)))
        self.marked = self.div.marked
        self.ddg = dense_distance_graph(self.div)
        self.mstats: dict = {}
        self.units = monge_decomposition(self.ddg, self.mstats)
        self.node_units = {}
        for u in self.units:
            for x in set(u.rows) | set(u.cols):
                self.node_units.setdefault(x, []).append(u)
        self.bd = build_bd(self.div)
        self.check = check
        self.fstats = FastDijkstraStats()

    def _case(self, name):
        c = self.eng.stats.solve_cases
        c[name] = c.get(name, 0) + 1

    def region_boundary(self, a, b, pa, pb) -> set:
        eng = self.eng
        st = eng.region(a, b, pa, pb)
        em = eng.emark
        head = eng.g.head
        bnd = self.div.boundary
        out = set()
        for e in range(eng.g.m):
            if em[e] == st:
                for x in (head[2 * e], head[2 * e + 1]):
                    if bnd[x]:
                        out.add(x)
        return out

    def _split(self, a, i, b, pa, pi, pb, X):
        xr, xl = split_boundary_set(self.bd, X, pi)
        if self.check:
            assert xr == self.region_boundary(a, i, pa, pi), "boundary split (left part) disagrees"
            assert xl == self.region_boundary(i, b, pi, pb), "boundary split (right part) disagrees"
        return xr, xl

    def run(self, p1: list[int], pl: list[int]) -> None:
        eng = self.eng
        g = eng.g
        head = g.head
        label([eng.us[0]] + [head[d] for d in p1], [g.w[d] for d in p1], eng.phi)
        label([eng.us[-1]] + [head[d] for d in pl], [g.w[d] for d in pl], eng.phi)
        X = self.region_boundary(0, eng.l - 1, p1, pl)
        self.solve(0, eng.l - 1, p1, pl, X)

    def _nodes(self, p, start):
        head = self.eng.g.head
        return [start] + [head[d] for d in p]

    def solve(self, a, b, pa, pb, X):
        eng = self.eng
        g = eng.g
        head, w = g.head, g.w
        lo = bisect_right(self.marked, a)
        hi = bisect_left(self.marked, b)
        inner = self.marked[lo:hi]
        if not inner:
            self._case("measure")
            eng.measure(a, b, pa, pb)
            return
        i = inner[(len(inner) - 1) // 2]
        ui, vi = eng.us[i], eng.vs[i]
        dist, par = fast_dijkstra(None, X, ui, node_units=self.node_units, stats=self.fstats)
        d = dist.get(vi)
        if d is None:
            raise AssertionError("terminal pair not connected in the dense graph")
        eng.dist[i] = d
        na = self._nodes(pa, eng.us[a])
        nb = self._nodes(pb, eng.us[b])
        posa = {x: k for k, x in enumerate(na)}
        posb = {x: k for k, x in enumerate(nb)}
        # dense path, then its underlying path until it meets pa or pb
        hops = []
        v = vi
        while v != ui:
            u, c = par[v]
            hops.append((u, v, c))
            v = u
        hops.reverse()
        p_darts = []
        x = None
        for u, v, c in hops:
            for dd in self.ddg.stream_forward(c, u, v):
                p_darts.append(dd)
                z = head[dd]
                if z in posa or z in posb:
                    x = z
                    break
            if x is not None:
                break
        if x is None:
            self._case("disjoint")
            pi = p_darts
            label(self._nodes(pi, ui), [w[dd] for dd in pi], eng.phi)
            xa, xb = self._split(a, i, b, pa, pi, pb, X)
            self.solve(a, i, pa, pi, xa)
            self.solve(i, b, pi, pb, xb)
            return
        pnodes = self._nodes(p_darts, ui)
        label(pnodes, [w[dd] for dd in p_darts], eng.phi)
        ppos = {z: k for k, z in enumerate(pnodes)}
        # the other shortest path, streamed from its end
        rdist, rpar = fast_dijkstra(None, X, vi, reverse=True, node_units=self.node_units, stats=self.fstats)
        hops = []
        v = ui
        while v != vi:
            nxt, c = rpar[v]
            hops.append((v, nxt, c))
            v = nxt
        tail = []
        y = None
        for u, v, c in reversed(hops):
            for dd in self.ddg.stream_backward(c, u, v):
                tail.append(dd)
                z = head[dd ^ 1]
                if z in ppos or z in posa or z in posb:
                    y = z
                    break
            if y is not None:
                break
        tail.reverse()
        label(self._nodes(tail, y), [w[dd] for dd in tail], eng.phi)
        if y in posa or y in posb:
            on_a = x in posa
            if (y in posa) != on_a:
                self._case("two-contacts")
                st = eng.region(a, b, pa, pb)
                eng.via(a, b, st, [x, y])
                return
            pj = pa if on_a else pb
            pos = posa if on_a else posb
            k1, k2 = pos[x], pos[y]
            if k1 > k2:
                raise AssertionError("contacts out of order along the bounding path")
            pi = p_darts + list(pj[k1:k2]) + tail
            shared = eng.phi[y] - eng.phi[x]
            if on_a:
                self._case("shared-a")
                eng.pinched(a, i, pa, pi, shared)
                _, xb = self._split(a, i, b, pa, pi, pb, X)
                self.solve(i, b, pi, pb, xb)
            else:
                self._case("shared-b")
                eng.pinched(i, b, pi, pb, shared)
                xa, _ = self._split(a, i, b, pa, pi, pb, X)
                self.solve(a, i, pa, pi, xa)
            return
        k = ppos[y]
        pi = p_darts[:k] + tail
        if x in posa:
            self._case("through-a")
            st = eng.region(a, i, pa, pi)
            eng.via(a, i, st, [x])
            _, xb = self._split(a, i, b, pa, pi, pb, X)
            self.solve(i, b, pi, pb, xb)
        else:
            self._case("through-b")
            st = eng.region(i, b, pi, pb)
            eng.via(i, b, st, [x])
            xa, _ = self._split(a, i, b, pa, pi, pb, X)
            self.solve(a, i, pa, pi, xa)
