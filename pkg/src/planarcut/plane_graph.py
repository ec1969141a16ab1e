"""Rotation-system plane graphs.

A plane graph is stored as a set of undirected edges, each with two darts.
Dart ``2*e`` runs from the first endpoint of edge ``e`` to the second and
dart ``2*e + 1`` runs back, so ``d ^ 1`` is always the twin of ``d``.  Every
node keeps its outgoing darts in counterclockwise order.  The face of a dart
is the face on its left; following ``next_in_face`` traces bounded faces
counterclockwise and the outer face clockwise.

Weights live on darts.  A weight is a nonnegative ``int`` or the singleton
``INF``; sums saturate at ``INF``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Sequence


class Infinite:
    """The infinite weight.  Compares above every finite value."""

    _instance: "Infinite | None" = None

    def __new__(cls) -> "Infinite":
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self) -> str:
        return "INF"

    def __reduce__(self):
        return (Infinite, ())

    def __hash__(self) -> int:
        return hash("planarcut.INF")

    def __eq__(self, other) -> bool:
        return other is self

    def __ne__(self, other) -> bool:
        return other is not self

    def __lt__(self, other) -> bool:
        return False

    def __le__(self, other) -> bool:
        return other is self

    def __gt__(self, other) -> bool:
        return other is not self

    def __ge__(self, other) -> bool:
        return True

    def __add__(self, other) -> "Infinite":
        return self

    __radd__ = __add__


INF = Infinite()


def is_inf(x) -> bool:
    return x is INF


def wsum(values: Iterable) -> "int | Infinite":
    total = 0
    for v in values:
        if v is INF:
            return INF
        total += v
    return total


def check_weight(x) -> None:
    if x is INF:
        return
    if not isinstance(x, int) or isinstance(x, bool):
        raise TypeError(f"weight must be int or INF, got {x!r}")
    if x < 0:
        raise NegativeWeight(f"negative weight {x}")


class GraphError(ValueError):
    """Base class for invalid graph input."""


class NotPlanarEmbedding(GraphError):
    pass


class NotSimple(GraphError):
    pass


class InconsistentRotation(GraphError):
    pass


class NotTriangulated(GraphError):
    pass


class NegativeWeight(GraphError):
    pass


class PlaneGraph:
    """A simple bidirected plane graph given by a rotation system.

    Args:
        n: number of nodes, labelled ``0..n-1``.
        head: head node of each dart; ``len(head)`` is twice the edge count.
        w: weight of each dart.
        rot: outgoing darts of each node in counterclockwise order.
        outer_dart: any dart whose left face is the outer face.
        check: validate simplicity, rotations and the Euler formula.
    """

    __slots__ = ("n", "head", "w", "rot", "pos", "outer_dart", "_faces", "_face_of", "_adj")

    def __init__(
        self,
        n: int,
        head: list[int],
        w: list,
        rot: list[list[int]],
        outer_dart: int = 0,
        check: bool = True,
    ):
        self.n = n
        self.head = head
        self.w = w
        self.rot = rot
        pos = [0] * len(head)
        for r in rot:
            for i, d in enumerate(r):
                pos[d] = i
        self.pos = pos
        self.outer_dart = outer_dart if head else -1
        self._faces = None
        self._face_of = None
        self._adj = None
        if check:
            self.validate()

    # basic accessors

    @property
    def m(self) -> int:
        return len(self.head) >> 1

    def tail(self, d: int) -> int:
        return self.head[d ^ 1]

    def degree(self, v: int) -> int:
        return len(self.rot[v])

    def next_in_face(self, d: int) -> int:
        t = d ^ 1
        r = self.rot[self.head[d]]
        return r[self.pos[t] - 1]

    def rot_next(self, d: int) -> int:
        r = self.rot[self.head[d ^ 1]]
        i = self.pos[d] + 1
        return r[i] if i < len(r) else r[0]

    def rot_prev(self, d: int) -> int:
        return self.rot[self.head[d ^ 1]][self.pos[d] - 1]

    def neighbors(self, v: int) -> list[int]:
        h = self.head
        return [h[d] for d in self.rot[v]]

    def dart_between(self, u: int, v: int) -> int:
        """Dart ``u -> v`` or ``-1`` if the nodes are not adjacent."""
        if self._adj is None:
            adj = {}
            h = self.head
            for d in range(len(h)):
                adj[(h[d ^ 1], h[d])] = d
            self._adj = adj
        return self._adj.get((u, v), -1)

    # faces

    def _trace(self) -> None:
        nd = len(self.head)
        face_of = [-1] * nd
        faces = []
        head, rot, pos = self.head, self.rot, self.pos
        for d0 in range(nd):
            if face_of[d0] >= 0:
                continue
            fid = len(faces)
            walk = []
            d = d0
            while face_of[d] < 0:
                face_of[d] = fid
                walk.append(d)
                t = d ^ 1
                d = rot[head[d]][pos[t] - 1]
            if d != d0:
                raise InconsistentRotation("face tracing did not close")
            faces.append(walk)
        self._faces = faces
        self._face_of = face_of

    @property
    def faces(self) -> list[list[int]]:
        if self._faces is None:
            self._trace()
        return self._faces

    @property
    def face_of(self) -> list[int]:
        if self._face_of is None:
            self._trace()
        return self._face_of

    @property
    def outer_face(self) -> int:
        if self.outer_dart < 0:
            return -1
        return self.face_of[self.outer_dart]

    def outer_walk(self) -> list[int]:
        """Darts of the outer face starting at ``outer_dart``."""
        if self.outer_dart < 0:
            return []
        walk = [self.outer_dart]
        d = self.next_in_face(self.outer_dart)
        while d != self.outer_dart:
            walk.append(d)
            d = self.next_in_face(d)
        return walk

    # validation

    def components(self) -> tuple[int, list[int]]:
        comp = [-1] * self.n
        c = 0
        head = self.head
        for s in range(self.n):
            if comp[s] >= 0:
                continue
            comp[s] = c
            stack = [s]
            while stack:
                x = stack.pop()
                for d in self.rot[x]:
                    y = head[d]
                    if comp[y] < 0:
                        comp[y] = c
                        stack.append(y)
            c += 1
        return c, comp

    def validate(self) -> None:
        n, head = self.n, self.head
        if len(head) % 2:
            raise InconsistentRotation("odd dart count")
        if len(self.rot) != n:
            raise InconsistentRotation("rotation list length differs from node count")
        seen = [False] * len(head)
        for v, r in enumerate(self.rot):
            for d in r:
                if not 0 <= d < len(head):
                    raise InconsistentRotation(f"unknown dart {d} at node {v}")
                if seen[d]:
                    raise InconsistentRotation(f"dart {d} listed twice")
                seen[d] = True
                if head[d ^ 1] != v:
                    raise InconsistentRotation(f"dart {d} listed at node {v} but leaves node {head[d ^ 1]}")
        if not all(seen):
            raise InconsistentRotation("some dart missing from the rotations")
        pairs = set()
        for e in range(self.m):
            u, v = head[2 * e + 1], head[2 * e]
            if u == v:
                raise NotSimple(f"self-loop at node {u}")
            key = (u, v) if u < v else (v, u)
            if key in pairs:
                raise NotSimple(f"parallel edges between {u} and {v}")
            pairs.add(key)
        for x in self.w:
            check_weight(x)
        if len(self.w) != len(head):
            raise GraphError("weight list length differs from dart count")
        self.check_euler()

    def check_euler(self) -> None:
        c, _ = self.components()
        isolated = sum(1 for r in self.rot if not r)
        f = len(self.faces)
        if self.n - self.m + f + isolated != 2 * c:
            raise NotPlanarEmbedding(
                f"Euler check failed: n={self.n} m={self.m} faces={f} components={c}"
            )

    # derived graphs

    def copy(self) -> "PlaneGraph":
        g = PlaneGraph(self.n, list(self.head), list(self.w), [list(r) for r in self.rot], self.outer_dart, check=False)
        return g

    def with_weights(self, w: list) -> "PlaneGraph":
        g = PlaneGraph.__new__(PlaneGraph)
        g.n, g.head, g.w, g.rot, g.pos = self.n, self.head, w, self.rot, self.pos
        g.outer_dart = self.outer_dart
        g._faces, g._face_of, g._adj = self._faces, self._face_of, self._adj
        return g

    def reversed(self) -> "PlaneGraph":
        """Same embedding with every dart weight moved to its twin."""
        w = self.w
        return self.with_weights([w[d ^ 1] for d in range(len(w))])

    def mirrored(self) -> "PlaneGraph":
        """Mirror image: all rotations reversed."""
        rot = [list(reversed(r)) for r in self.rot]
        g = PlaneGraph(self.n, self.head, self.w, rot, check=False)
        # the face left of d in the mirror is the face right of d here
        g.outer_dart = self.outer_dart ^ 1 if self.outer_dart >= 0 else -1
        return g

    def finite(self, big: int) -> "PlaneGraph":
        """Copy with every ``INF`` weight replaced by ``big``."""
        return self.with_weights([big if x is INF else x for x in self.w])

    def total_finite_weight(self) -> int:
        return sum(x for x in self.w if x is not INF)

    def subgraph(self, keep_edges: Sequence[bool], keep_isolated: Sequence[int] = ()) -> "SubGraph":
        """Compact plane subgraph on the kept edges and their endpoints.

        Nodes listed in ``keep_isolated`` are kept even without edges.
        """
        head = self.head
        node_new = [-1] * self.n
        node_old = []
        for e in range(self.m):
            if keep_edges[e]:
                for x in (head[2 * e], head[2 * e + 1]):
                    if node_new[x] < 0:
                        node_new[x] = len(node_old)
                        node_old.append(x)
        for x in keep_isolated:
            if node_new[x] < 0:
                node_new[x] = len(node_old)
                node_old.append(x)
        edge_new = [-1] * self.m
        edge_old = []
        nhead = []
        nw = []
        for e in range(self.m):
            if keep_edges[e]:
                edge_new[e] = len(edge_old)
                edge_old.append(e)
                nhead.append(node_new[head[2 * e]])
                nhead.append(node_new[head[2 * e + 1]])
                nw.append(self.w[2 * e])
                nw.append(self.w[2 * e + 1])
        nrot = []
        for x in node_old:
            nrot.append([2 * edge_new[d >> 1] + (d & 1) for d in self.rot[x] if keep_edges[d >> 1]])
        outer = self._sub_outer(keep_edges, edge_new)
        g = PlaneGraph(len(node_old), nhead, nw, nrot, outer, check=False)
        return SubGraph(g, node_old, edge_old, node_new, edge_new)

    def _sub_outer(self, keep_edges, edge_new) -> int:
        if self.outer_dart < 0:
            return 0
        for d in self.outer_walk():
            # the left wedge of a removed dart joins the wedge of the kept dart before it
            r = self.rot[self.head[d ^ 1]]
            i = self.pos[d]
            for k in range(len(r)):
                dd = r[i - k]
                if keep_edges[dd >> 1]:
                    return 2 * edge_new[dd >> 1] + (dd & 1)
        return 0


@dataclass
class SubGraph:
    """A compact subgraph and its maps back to (and from) the parent."""

    g: PlaneGraph
    node_old: list[int]
    edge_old: list[int]
    node_new: list[int]
    edge_new: list[int]

    def dart_old(self, d: int) -> int:
        return 2 * self.edge_old[d >> 1] + (d & 1)

    def dart_new(self, d: int) -> int:
        e = self.edge_new[d >> 1]
        return -1 if e < 0 else 2 * e + (d & 1)


def build_from_rotation(
    n: int,
    edges: Sequence[tuple],
    rotations: Sequence[Sequence[int]],
    outer: "tuple[int, int] | None" = None,
) -> PlaneGraph:
    """Build a plane graph from edges ``(u, v, w_uv, w_vu)`` and edge rotations.

    ``rotations[x]`` lists the ids of the edges at ``x`` counterclockwise.
    ``outer`` optionally names a dart ``(u, v)`` whose left face is the outer face.
    """
    head = []
    w = []
    for e, (u, v, wuv, wvu) in enumerate(edges):
        for x in (u, v):
            if not 0 <= x < n:
                raise GraphError(f"edge {e} has unknown endpoint {x}")
        head.append(v)
        head.append(u)
        w.append(wuv)
        w.append(wvu)
    if len(rotations) != n:
        raise InconsistentRotation("need one rotation per node")
    rot = []
    for x, r in enumerate(rotations):
        darts = []
        for e in r:
            if not 0 <= e < len(edges):
                raise InconsistentRotation(f"unknown edge {e} in rotation of node {x}")
            u, v = edges[e][0], edges[e][1]
            if u == v:
                raise NotSimple(f"self-loop at node {u}")
            if x == u:
                darts.append(2 * e)
            elif x == v:
                darts.append(2 * e + 1)
            else:
                raise InconsistentRotation(f"edge {e} is not incident to node {x}")
        rot.append(darts)
    outer_dart = 0
    g = PlaneGraph(n, head, w, rot, 0, check=False)
    if outer is not None:
        outer_dart = g.dart_between(*outer)
        if outer_dart < 0:
            raise GraphError(f"outer dart {outer} is not an edge")
    g.outer_dart = outer_dart if head else -1
    g.validate()
    return g


# walks


def walk_nodes(g: PlaneGraph, darts: Sequence[int]) -> list[int]:
    if not darts:
        return []
    head = g.head
    return [head[darts[0] ^ 1]] + [head[d] for d in darts]


def walk_weight(g: PlaneGraph, darts: Sequence[int]):
    return wsum(g.w[d] for d in darts)


def is_walk(g: PlaneGraph, darts: Sequence[int]) -> bool:
    head = g.head
    return all(head[darts[i]] == head[darts[i + 1] ^ 1] for i in range(len(darts) - 1))


def is_cycle(g: PlaneGraph, darts: Sequence[int]) -> bool:
    return bool(darts) and is_walk(g, darts) and g.head[darts[-1]] == g.head[darts[0] ^ 1]


def is_degenerate(g: PlaneGraph, darts: Sequence[int]) -> bool:
    """A single node, or a walk that uses both darts of some edge."""
    if not darts:
        return True
    edges = set()
    for d in darts:
        e = d >> 1
        if e in edges:
            if (d ^ 1) in darts:
                return True
        edges.add(e)
    return False


def is_simple(g: PlaneGraph, darts: Sequence[int]) -> bool:
    nodes = walk_nodes(g, darts)
    if is_cycle(g, darts):
        nodes = nodes[:-1]
    return len(set(nodes)) == len(nodes)


def rotate_cycle(darts: Sequence[int], start: int) -> list[int]:
    i = list(darts).index(start)
    return list(darts[i:]) + list(darts[:i])


# the dual


def dual(g: PlaneGraph, triangulated: bool = True) -> PlaneGraph:
    """Dual of a plane graph (by default required to be a triangulation).

    Dual dart ``d`` crosses primal dart ``d``.  It runs from the face on the
    left of ``d`` to the face on its right and carries ``w(d)``: seen
    clockwise around the tail of ``d``, the right face comes right after
    the left one.  Dual rotations list each face's darts in walk order.
    """
    faces = g.faces
    if triangulated:
        if g.n < 4:
            raise NotTriangulated("the dual needs at least four nodes")
        for f in faces:
            if len(f) != 3:
                raise NotTriangulated(f"face of size {len(f)}")
    face_of = g.face_of
    head = [face_of[d ^ 1] for d in range(len(g.head))]
    rot = [list(f) for f in faces]
    return PlaneGraph(len(faces), head, list(g.w), rot, 0, check=triangulated)


# suppressing degree-two nodes


@dataclass
class LiftMap:
    """Maps darts and nodes of a reduced graph back to the source graph."""

    darts: list[list[int]]
    node_old: list[int]
    node_new: list[int] = field(default_factory=list)

    def lift(self, walk: Sequence[int]) -> list[int]:
        out = []
        for d in walk:
            out.extend(self.darts[d])
        return out

    def compose(self, inner: "LiftMap") -> "LiftMap":
        """Map of ``inner`` (defined on our output) followed by this one."""
        darts = [self.lift(seq) for seq in inner.darts]
        return LiftMap(darts, [self.node_old[x] for x in inner.node_old])


def identity_lift(g: PlaneGraph) -> LiftMap:
    return LiftMap([[d] for d in range(len(g.head))], list(range(g.n)), list(range(g.n)))


def suppress_degree2(g: PlaneGraph, prune_leaves: bool = False) -> tuple[PlaneGraph, LiftMap]:
    """Replace every degree-2 node whose neighbours are non-adjacent by one edge.

    The new edge ``xz`` gets ``w(xy)+w(yz)`` and ``w(zy)+w(yx)``.  With
    ``prune_leaves`` nodes of degree at most one are deleted first, repeatedly;
    they lie on no non-degenerate cycle.
    """
    n = g.n
    head = list(g.head)
    w = list(g.w)
    rot = [list(r) for r in g.rot]
    alive_e = [True] * g.m
    alive_v = [True] * n
    chain = [[d] for d in range(len(head))]
    adj = {}
    for d in range(len(head)):
        adj[(head[d ^ 1], head[d])] = d
    deg = [len(r) for r in rot]

    def drop_edge(e):
        alive_e[e] = False
        for d in (2 * e, 2 * e + 1):
            x = head[d ^ 1]
            rot[x].remove(d)
            deg[x] -= 1
            adj.pop((x, head[d]), None)

    stack = list(range(n))
    while stack:
        y = stack.pop()
        if not alive_v[y]:
            continue
        if prune_leaves and deg[y] <= 1:
            if deg[y] == 1:
                d = rot[y][0]
                x = head[d]
                drop_edge(d >> 1)
                stack.append(x)
            alive_v[y] = False
            continue
        if deg[y] != 2:
            continue
        d1, d2 = rot[y]
        x, z = head[d1], head[d2]
        if (x, z) in adj:
            continue
        # new edge x -> z replaces the darts x->y and z->y in the rotations
        xy, zy = d1 ^ 1, d2 ^ 1
        e = len(head) >> 1
        xz, zx = 2 * e, 2 * e + 1
        head.extend((z, x))
        w.append(w[xy] + w[d2])
        w.append(w[zy] + w[d1])
        chain.append(chain[xy] + chain[d2])
        chain.append(chain[zy] + chain[d1])
        alive_e.append(True)
        rx = rot[x]
        rx[rx.index(xy)] = xz
        rz = rot[z]
        rz[rz.index(zy)] = zx
        alive_e[xy >> 1] = False
        alive_e[zy >> 1] = False
        adj.pop((x, y), None)
        adj.pop((y, x), None)
        adj.pop((z, y), None)
        adj.pop((y, z), None)
        adj[(x, z)] = xz
        adj[(z, x)] = zx
        rot[y] = []
        deg[y] = 0
        alive_v[y] = False
        stack.append(x)
        stack.append(z)

    keep_nodes = [v for v in range(n) if alive_v[v]]
    node_new = [-1] * n
    for i, v in enumerate(keep_nodes):
        node_new[v] = i
    keep_edges = [e for e in range(len(alive_e)) if alive_e[e]]
    edge_new = {}
    for i, e in enumerate(keep_edges):
        edge_new[e] = i
    nhead = []
    nw = []
    darts = []
    for e in keep_edges:
        for d in (2 * e, 2 * e + 1):
            nhead.append(node_new[head[d]])
            nw.append(w[d])
            darts.append(chain[d])
    nrot = [[2 * edge_new[d >> 1] + (d & 1) for d in rot[v]] for v in keep_nodes]
    out = PlaneGraph(len(keep_nodes), nhead, nw, nrot, 0, check=False)
    out.outer_dart = 0 if nhead else -1
    return out, LiftMap(darts, keep_nodes, node_new)


# user-level directed input


@dataclass
class RawGraph:
    """An embedded simple directed graph as supplied by a user.

    ``edges[e] = (u, v, w_uv, w_vu)`` where a direction weight of ``None``
    means that arc is absent.  ``rot[x]`` lists edge ids counterclockwise.
    """

    n: int
    edges: list[tuple]
    rot: list[list[int]]
    names: "list[str] | None" = None
    outer: "tuple[int, int] | None" = None

    def name(self, x: int) -> str:
        return self.names[x] if self.names else str(x)

    def arcs(self) -> list[tuple]:
        out = []
        for u, v, a, b in self.edges:
            if a is not None:
                out.append((u, v, a))
            if b is not None:
                out.append((v, u, b))
        return out

    def plane_graph(self, filler) -> PlaneGraph:
        """The bidirected plane graph with absent arcs set to ``filler``."""
        edges = [
            (u, v, filler if a is None else a, filler if b is None else b)
            for u, v, a, b in self.edges
        ]
        return build_from_rotation(self.n, edges, self.rot, self.outer)

    def validate(self) -> None:
        for u, v, a, b in self.edges:
            for x in (a, b):
                if x is not None:
                    check_weight(x)
        self.plane_graph(0)
