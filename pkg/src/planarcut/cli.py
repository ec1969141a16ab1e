"""Command line front end and the graph file formats.

Two text dialects describe an embedded directed graph::

    pgraph rot 1                      pgraph geom 1
    node a                            node a 0 0
    node b                            node b 1 0
    edge e0 a b 3 inf                 arc a b 3
    rot a e0                          arc b a 1.5
    rot b e0

In ``rot`` files each undirected edge carries both direction weights
(``inf`` for an arc of infinite weight, ``-`` for an absent arc) and
``rot`` lines list edge ids counterclockwise.  An optional
``outer <u> <v>`` line names a dart whose left face is the outer face.
In ``geom`` files rotations come from sorting neighbours by angle
counterclockwise (ties by distance, then node id) and reverse arcs that
are not listed are absent.  Weights are decimals with at most nine
fractional digits; a file is scaled by one power of ten so that every
weight becomes an integer.  Lines starting with ``#`` are comments.
"""

from __future__ import annotations

import argparse
import io
import json
import math
import os
import random
import sys
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from decimal import Decimal, InvalidOperation

from . import __version__
from .plane_graph import INF, GraphError, RawGraph

MAX_FRACTION = 9


class ParseError(ValueError):
    def __init__(self, msg: str, line: int = 0, col: int = 0):
        super().__init__(f"{line}:{col}: {msg}" if line else msg)
        self.msg = msg
        self.line = line
        self.col = col


class EmbeddingInvalid(ParseError):
    """The file parsed but does not describe a valid plane embedding."""


@dataclass
class GraphFile:
    raw: RawGraph
    dialect: str
    scale: int = 1
    edge_names: list = field(default_factory=list)
    coords: "list | None" = None

    def value(self, w):
        """A weight in file units (``"inf"`` for ``INF``)."""
        if w is INF:
            return "inf"
        v = Decimal(w) / self.scale
        return int(v) if v == v.to_integral_value() else float(v)

    def text(self, w) -> str:
        if w is INF:
            return "inf"
        return _decimal_text(Decimal(w) / self.scale)


def _decimal_text(v: Decimal) -> str:
    s = format(v, "f")
    if "." in s:
        s = s.rstrip("0").rstrip(".")
    return s


# parsing


def _tokens(text: str):
    for ln, line in enumerate(text.splitlines(), 1):
        body = line.split("#", 1)[0]
        toks = []
        col = 0
        for part in body.split():
            col = body.index(part, col)
            toks.append((part, col + 1))
            col += len(part)
        if toks:
            yield ln, toks


def _weight(tok: str, ln: int, col: int):
    """``(Decimal | INF | None, fraction digits)``; ``None`` means absent."""
    if tok == "inf":
        return INF, 0
    if tok == "-":
        return None, 0
    try:
        v = Decimal(tok)
    except InvalidOperation:
        raise ParseError(f"bad weight {tok!r}", ln, col) from None
    if not v.is_finite():
        raise ParseError(f"bad weight {tok!r}", ln, col)
    if v < 0:
        raise ParseError(f"negative weight {tok}", ln, col)
    exp = v.as_tuple().exponent
    frac = max(0, -exp)
    if frac > MAX_FRACTION:
        v2 = v.normalize()
        frac = max(0, -v2.as_tuple().exponent)
        if frac > MAX_FRACTION:
            raise ParseError(f"more than {MAX_FRACTION} fractional digits in {tok}", ln, col)
    return v, frac


def _scaled(weights, frac: int):
    scale = 10**frac
    out = []
    for v in weights:
        if v is None or v is INF:
            out.append(v)
        else:
            out.append(int(v * scale))
    return out, scale


def parse_graph(src) -> GraphFile:
    """Parse a graph file from a path, a text stream or a string of text."""
    if isinstance(src, (bytes, bytearray)):
        try:
            text = bytes(src).decode("utf-8")
        except UnicodeDecodeError as e:
            raise ParseError(f"not utf-8 text: {e.reason}") from None
    elif isinstance(src, str) and "\n" not in src and os.path.exists(src):
        with open(src, encoding="utf-8", errors="strict") as fh:
            try:
                text = fh.read()
            except UnicodeDecodeError as e:
                raise ParseError(f"not utf-8 text: {e.reason}") from None
    elif isinstance(src, str):
        text = src
    else:
        text = src.read()
        if isinstance(text, bytes):
            return parse_graph(text)
    lines = list(_tokens(text))
    if not lines:
        raise ParseError("empty file", 1, 1)
    ln, toks = lines[0]
    head = [t for t, _ in toks]
    if len(head) != 3 or head[0] != "pgraph" or head[2] != "1" or head[1] not in ("rot", "geom"):
        raise ParseError("expected header 'pgraph rot 1' or 'pgraph geom 1'", ln, toks[0][1])
    if head[1] == "rot":
        return _parse_rot(lines[1:])
    return _parse_geom(lines[1:])


def _need(toks, k, ln, what):
    if len(toks) != k:
        col = toks[min(len(toks), k) - 1][1] if toks else 1
        raise ParseError(f"{what} takes {k - 1} fields, got {len(toks) - 1}", ln, col)


def _parse_rot(lines) -> GraphFile:
    names, ids = [], {}
    edges, enames, eids = [], [], {}
    rots = {}
    outer = None
    frac = 0
    for ln, toks in lines:
        kw = toks[0][0]
        if kw == "node":
            _need(toks, 2, ln, "node")
            name, col = toks[1]
            if name in ids:
                raise ParseError(f"duplicate node {name}", ln, col)
            ids[name] = len(names)
            names.append(name)
        elif kw == "edge":
            _need(toks, 6, ln, "edge")
            name, col = toks[1]
            if name in eids:
                raise ParseError(f"duplicate edge {name}", ln, col)
            ends = []
            for t, c in toks[2:4]:
                if t not in ids:
                    raise ParseError(f"unknown node {t}", ln, c)
                ends.append(ids[t])
            ws = []
            for t, c in toks[4:6]:
                v, f = _weight(t, ln, c)
                frac = max(frac, f)
                ws.append(v)
            if ws[0] is None and ws[1] is None:
                raise ParseError("edge with both arcs absent", ln, toks[4][1])
            eids[name] = len(edges)
            enames.append(name)
            edges.append((ends[0], ends[1], ws[0], ws[1], ln, col))
        elif kw == "rot":
            if len(toks) < 2:
                raise ParseError("rot needs a node", ln, toks[0][1])
            name, col = toks[1]
            if name not in ids:
                raise ParseError(f"unknown node {name}", ln, col)
            x = ids[name]
            if x in rots:
                raise ParseError(f"second rotation for {name}", ln, col)
            r = []
            for t, c in toks[2:]:
                if t not in eids:
                    raise ParseError(f"unknown edge {t}", ln, c)
                r.append(eids[t])
            rots[x] = (r, ln, col)
        elif kw == "outer":
            _need(toks, 3, ln, "outer")
            ends = []
            for t, c in toks[1:3]:
                if t not in ids:
                    raise ParseError(f"unknown node {t}", ln, c)
                ends.append(ids[t])
            outer = (ends[0], ends[1], ln, toks[1][1])
        else:
            raise ParseError(f"unknown keyword {kw!r}", ln, toks[0][1])
    flat = [w for e in edges for w in e[2:4]]
    scaled, scale = _scaled(flat, frac)
    out_edges = [(e[0], e[1], scaled[2 * k], scaled[2 * k + 1]) for k, e in enumerate(edges)]
    for k, e in enumerate(out_edges):
        if e[0] == e[1]:
            raise EmbeddingInvalid("self-loop", edges[k][4], edges[k][5])
    rot = [rots[x][0] if x in rots else [] for x in range(len(names))]
    for x in range(len(names)):
        want = sorted(k for k, e in enumerate(out_edges) for y in e[:2] if y == x)
        if sorted(rot[x]) != want:
            ln, col = (rots[x][1], rots[x][2]) if x in rots else (0, 0)
            raise EmbeddingInvalid(f"rotation of {names[x]} does not list exactly its edges", ln, col)
    o = None
    if outer is not None:
        o = outer[:2]
        if not any(e[:2] == o or e[1::-1] == o for e in out_edges):
            raise EmbeddingInvalid("outer dart is not an edge", outer[2], outer[3])
    raw = RawGraph(len(names), out_edges, rot, names, o)
    gf = GraphFile(raw, "rot", scale, enames)
    _validate(gf)
    return gf


def _parse_geom(lines) -> GraphFile:
    names, ids, coords = [], {}, []
    arcs = {}
    order = []
    frac = 0
    for ln, toks in lines:
        kw = toks[0][0]
        if kw == "node":
            _need(toks, 4, ln, "node")
            name, col = toks[1]
            if name in ids:
                raise ParseError(f"duplicate node {name}", ln, col)
            xy = []
            for t, c in toks[2:4]:
                try:
                    v = Decimal(t)
                except InvalidOperation:
                    raise ParseError(f"bad coordinate {t!r}", ln, c) from None
                if not v.is_finite():
                    raise ParseError(f"bad coordinate {t!r}", ln, c)
                xy.append(v)
            ids[name] = len(names)
            names.append(name)
            coords.append(tuple(xy))
        elif kw == "arc":
            _need(toks, 4, ln, "arc")
            ends = []
            for t, c in toks[1:3]:
                if t not in ids:
                    raise ParseError(f"unknown node {t}", ln, c)
                ends.append(ids[t])
            u, v = ends
            if u == v:
                raise EmbeddingInvalid("self-loop", ln, toks[1][1])
            if (u, v) in arcs:
                raise ParseError("duplicate arc", ln, toks[1][1])
            w, f = _weight(toks[3][0], ln, toks[3][1])
            if w is None:
                raise ParseError("arc weight cannot be absent", ln, toks[3][1])
            frac = max(frac, f)
            arcs[(u, v)] = w
            if (v, u) not in arcs:
                order.append((u, v))
        else:
            raise ParseError(f"unknown keyword {kw!r}", ln, toks[0][1])
    if len(set(coords)) != len(coords):
        raise EmbeddingInvalid("two nodes share a position")
    flat = []
    for u, v in order:
        flat.append(arcs[(u, v)])
        flat.append(arcs.get((v, u)))
    scaled, scale = _scaled(flat, frac)
    edges = [(u, v, scaled[2 * k], scaled[2 * k + 1]) for k, (u, v) in enumerate(order)]
    n = len(names)
    inc = [[] for _ in range(n)]
    for k, (u, v, _, _) in enumerate(edges):
        inc[u].append((v, k))
        inc[v].append((u, k))
    fc = [(float(x), float(y)) for x, y in coords]

    def key(x, y, k):
        dx, dy = fc[y][0] - fc[x][0], fc[y][1] - fc[x][1]
        ang = math.atan2(dy, dx) % (2 * math.pi)
        return (ang, math.hypot(dx, dy), y)

    rot = []
    for x in range(n):
        rot.append([k for _, y, k in sorted((key(x, y, k), y, k) for y, k in inc[x])])
    outer = None
    live = [x for x in range(n) if inc[x]]
    if live:
        x0 = min(live, key=lambda x: (coords[x][0], coords[x][1], x))
        # the face left of the steepest dart contains the westward direction
        y, k = max(inc[x0], key=lambda t: (math.atan2(fc[t[0]][1] - fc[x0][1], fc[t[0]][0] - fc[x0][0]), t[0]))
        outer = (x0, y)
    _check_straight_line(coords, [(u, v) for u, v, _, _ in edges], [x for x in range(n) if not inc[x]], names)
    raw = RawGraph(n, edges, rot, names, outer)
    gf = GraphFile(raw, "geom", scale, [f"e{k}" for k in range(len(edges))], coords)
    _validate(gf)
    return gf


def _orient(a, b, c) -> int:
    v = (b[0] - a[0]) * (c[1] - a[1]) - (b[1] - a[1]) * (c[0] - a[0])
    return (v > 0) - (v < 0)


def _on_segment(a, b, c) -> bool:
    """``c`` lies on the closed segment ``ab`` (``a``, ``b``, ``c`` collinear)."""
    return min(a[0], b[0]) <= c[0] <= max(a[0], b[0]) and min(a[1], b[1]) <= c[1] <= max(a[1], b[1])


def _touch(a, b, c, d) -> bool:
    """Closed segments ``ab`` and ``cd`` share a point."""
    o1, o2, o3, o4 = _orient(a, b, c), _orient(a, b, d), _orient(c, d, a), _orient(c, d, b)
    if o1 != o2 and o3 != o4 and 0 not in (o1, o2, o3, o4):
        return True
    return (
        (o1 == 0 and _on_segment(a, b, c))
        or (o2 == 0 and _on_segment(a, b, d))
        or (o3 == 0 and _on_segment(c, d, a))
        or (o4 == 0 and _on_segment(c, d, b))
    )


def _check_straight_line(coords, segs, points, names) -> None:
    """Raise ``EmbeddingInvalid`` unless straight edges meet only at shared ends.

    A sweep over x skips pairs whose x ranges are disjoint; the tests are
    exact on the decimal coordinates.
    """
    items = [(coords[u], coords[v], (u, v)) for u, v in segs]
    items += [(coords[x], coords[x], (x,)) for x in points]
    items.sort(key=lambda t: min(t[0][0], t[1][0]))
    active = []
    for a, b, ends in items:
        lo = min(a[0], b[0])
        active = [t for t in active if max(t[0][0], t[1][0]) >= lo]
        for c, d, other in active:
            shared = set(ends) & set(other)
            if not shared:
                if _touch(a, b, c, d):
                    raise EmbeddingInvalid(f"straight edges {_pair(ends, names)} and {_pair(other, names)} meet")
                continue
            # a common end: the segments must not run along each other
            (x,) = shared
            p = coords[x]
            q = b if coords[ends[0]] == p else a
            r = d if coords[other[0]] == p else c
            if _orient(p, q, r) == 0 and (_on_segment(p, q, r) or _on_segment(p, r, q)):
                raise EmbeddingInvalid(f"straight edges {_pair(ends, names)} and {_pair(other, names)} overlap")
        active.append((a, b, ends))


def _pair(ends, names) -> str:
    return "-".join(names[x] for x in ends)


def _validate(gf: GraphFile) -> None:
    try:
        gf.raw.validate()
    except (GraphError, ValueError) as e:
        raise EmbeddingInvalid(str(e)) from None


# printing


def format_graph(gf: GraphFile) -> str:
    raw = gf.raw
    out = io.StringIO()
    nm = raw.name

    def wt(w):
        return "-" if w is None else gf.text(w)

    if gf.dialect == "rot":
        out.write("pgraph rot 1\n")
        for x in range(raw.n):
            out.write(f"node {nm(x)}\n")
        for k, (u, v, a, b) in enumerate(raw.edges):
            out.write(f"edge {gf.edge_names[k]} {nm(u)} {nm(v)} {wt(a)} {wt(b)}\n")
        for x in range(raw.n):
            out.write(" ".join(["rot", nm(x)] + [gf.edge_names[k] for k in raw.rot[x]]) + "\n")
        if raw.outer is not None:
            out.write(f"outer {nm(raw.outer[0])} {nm(raw.outer[1])}\n")
        return out.getvalue()
    out.write("pgraph geom 1\n")
    for x in range(raw.n):
        cx, cy = gf.coords[x]
        out.write(f"node {nm(x)} {_decimal_text(cx)} {_decimal_text(cy)}\n")
    for u, v, a, b in raw.edges:
        out.write(f"arc {nm(u)} {nm(v)} {wt(a)}\n")
        if b is not None:
            out.write(f"arc {nm(v)} {nm(u)} {wt(b)}\n")
    return out.getvalue()


# certificates


class CertificateError(RuntimeError):
    pass


def _arc_weight(raw: RawGraph):
    table = {}
    for u, v, c in raw.arcs():
        table[(u, v)] = c
    return table


def _sum(ws):
    total = 0
    for w in ws:
        if w is INF:
            return INF
        total += w
    return total


def check_cut(raw: RawGraph, res) -> None:
    from .oracle import reachable

    if res.weight is INF:
        return
    table = _arc_weight(raw)
    if any(a not in table for a in res.cut):
        raise CertificateError("cut names an arc that is not in the graph")
    if _sum(table[a] for a in res.cut) != res.weight:
        raise CertificateError("cut weight does not match its arcs")
    if res.witness is None:
        raise CertificateError("cut has no witness pair")
    s, t = res.witness
    drop = set(res.cut)
    left = [(u, v) for u, v, _ in raw.arcs() if (u, v) not in drop]
    if reachable(raw.n, left, s)[t]:
        raise CertificateError("cut does not separate its witness pair")


def check_cycle(raw: RawGraph, res) -> None:
    if res.weight is INF:
        return
    table = _arc_weight(raw)
    arcs = res.arcs
    if not arcs:
        raise CertificateError("finite cycle without arcs")
    for k, (u, v) in enumerate(arcs):
        if (u, v) not in table:
            raise CertificateError(f"cycle uses a missing arc {u}->{v}")
        if arcs[(k + 1) % len(arcs)][0] != v:
            raise CertificateError("cycle arcs do not chain")
    if len(arcs) > 2 and len({frozenset(a) for a in arcs}) < len(arcs):
        raise CertificateError("cycle uses an edge twice")
    if _sum(table[a] for a in arcs) != res.weight:
        raise CertificateError("cycle weight does not match its arcs")


# commands


def _env_threads() -> int:
    try:
        return max(1, int(os.environ.get("PLANARCUT_THREADS", "1")))
    except ValueError:
        return 1


def _emit(args, payload: dict, text: str) -> None:
    if args.json:
        print(json.dumps(payload, sort_keys=True))
    else:
        print(text)
        print(f"elapsed_ms {payload['elapsed_ms']:.3f}")


def _base(problem, gf, backend, weight, cert, t0):
    return {
        "problem": problem,
        "weight": gf.value(weight),
        "certificate": cert,
        "backend": backend,
        "n": gf.raw.n,
        "m": len(gf.raw.edges),
        "elapsed_ms": (time.perf_counter() - t0) * 1000.0,
    }


def cmd_mincut(args) -> int:
    from .reduce import min_cut

    gf = parse_graph(args.file)
    t0 = time.perf_counter()
    res = min_cut(gf.raw, backend=args.backend, r=args.r)
    check_cut(gf.raw, res)
    nm = gf.raw.name
    cert = [[nm(u), nm(v)] for u, v in res.cut]
    body = ", ".join(f"{a}->{b}" for a, b in cert)
    _emit(args, _base("mincut", gf, args.backend, res.weight, cert, t0), f"weight {gf.text(res.weight)}, cut: {body}")
    return 0


def cmd_cycle(args) -> int:
    from .reduce import shortest_cycle

    gf = parse_graph(args.file)
    t0 = time.perf_counter()
    res = shortest_cycle(gf.raw, backend=args.backend, r=args.r)
    check_cycle(gf.raw, res)
    nm = gf.raw.name
    cert = []
    if res.nodes:
        ring = res.nodes[:-1]
        k = ring.index(min(ring))
        ring = ring[k:] + ring[:k]
        cert = [nm(x) for x in ring + ring[:1]]
    _emit(
        args,
        _base("cycle", gf, args.backend, res.weight, cert, t0),
        f"weight {gf.text(res.weight)}, cycle: {' '.join(cert)}",
    )
    return 0


def _terminals(gf: GraphFile, spec: str):
    ids = {gf.raw.name(x): x for x in range(gf.raw.n)}
    us, vs = [], []
    for part in spec.split(","):
        part = part.strip()
        if not part:
            continue
        if ":" not in part:
            raise ParseError(f"terminal pair {part!r} is not u:v")
        a, b = part.split(":", 1)
        for t in (a, b):
            if t not in ids:
                raise ParseError(f"unknown terminal {t}")
        us.append(ids[a])
        vs.append(ids[b])
    return us, vs


def cmd_ncsp(args) -> int:
    from .ncsp import noncrossing_distances
    from .oracle import dijkstra_all

    gf = parse_graph(args.file)
    us, vs = _terminals(gf, args.pairs)
    g = gf.raw.plane_graph(INF)
    t0 = time.perf_counter()
    got = noncrossing_distances(g, us, vs, backend=args.backend, r=args.r)
    for u, v, d in zip(us, vs, got):
        if dijkstra_all(g, u)[v] != d:
            raise CertificateError(f"distance {gf.raw.name(u)} -> {gf.raw.name(v)} does not recheck")
    nm = gf.raw.name
    cert = [[nm(u), nm(v), gf.value(d)] for u, v, d in zip(us, vs, got)]
    text = "\n".join(f"{nm(u)} {nm(v)} {gf.text(d)}" for u, v, d in zip(us, vs, got))
    payload = _base("ncsp", gf, args.backend, 0, cert, t0)
    payload["weight"] = [gf.value(d) for d in got]
    _emit(args, payload, f"distances:\n{text}")
    return 0


# self check


def _check_cut(seed: int, backend: str):
    from .oracle import GenSpec, gen_planar, min_cut_maxflow
    from .reduce import min_cut

    rng = random.Random(seed)
    spec = GenSpec(
        n=rng.randint(2, 24),
        seed=seed,
        mode=rng.choice(["triangulation", "sparse", "disk"]),
        p_zero=0.15,
        p_inf=0.05,
    )
    raw = gen_planar(spec)
    res = min_cut(raw, backend=backend, r=8 if backend == "ddg" else None)
    check_cut(raw, res)
    return res.weight == min_cut_maxflow(raw), f"mincut seed {seed}"


def _check_cycle(seed: int, backend: str):
    from .cycle_core import shortest_nondegenerate_cycle
    from .oracle import GenSpec, enum_simple_nondegenerate_cycles, gen_plane_graph, gen_planar, shortest_closed_walk
    from .reduce import shortest_cycle

    rng = random.Random(seed)
    r = 8 if backend == "ddg" else None
    small = gen_plane_graph(GenSpec(n=rng.randint(3, 11), seed=seed, mode=rng.choice(["triangulation", "sparse"])))
    w1, _ = shortest_nondegenerate_cycle(small, backend=backend, r=r)
    w2, _ = enum_simple_nondegenerate_cycles(small)
    raw = gen_planar(GenSpec(n=rng.randint(2, 60), seed=seed, mode=rng.choice(["triangulation", "sparse", "disk"])))
    res = shortest_cycle(raw, backend=backend, r=r)
    check_cycle(raw, res)
    return w1 == w2 and res.weight == shortest_closed_walk(raw), f"cycle seed {seed}"


def _check_ncsp(seed: int, backend: str):
    from .ncsp import noncrossing_distances
    from .oracle import GenSpec, dijkstra_all, gen_plane_graph

    rng = random.Random(seed)
    n = rng.randint(4, 80)
    g = gen_plane_graph(GenSpec(n=n, seed=seed, mode="disk", outer=rng.randint(3, n), p_inf=0.0, p_absent=0.0))
    if g.components()[0] != 1:
        return True, f"ncsp seed {seed}"
    nodes = [g.head[d ^ 1] for d in g.outer_walk()]
    k = min(len(nodes), 2 * rng.randint(1, 16))
    k -= k % 2
    idx = sorted(rng.sample(range(len(nodes)), k))
    seq = [nodes[i] for i in idx]
    us, vs = seq[: k // 2], seq[k // 2 :][::-1]
    got = noncrossing_distances(g, us, vs, backend=backend, r=8 if backend == "ddg" else None)
    exp = [dijkstra_all(g, u)[v] for u, v in zip(us, vs)]
    return got == exp, f"ncsp seed {seed}"


def _check_one(job):
    kind, seed, backend = job
    fn = {"mincut": _check_cut, "cycle": _check_cycle, "ncsp": _check_ncsp}[kind]
    try:
        return fn(seed, backend)
    except Exception as e:  # a crash is a failed check
        return False, f"{kind} seed {seed}: {type(e).__name__}: {e}"


def _pool_map(fn, jobs):
    workers = _env_threads()
    if workers <= 1:
        return [fn(j) for j in jobs]
    with ProcessPoolExecutor(max_workers=workers) as ex:
        return list(ex.map(fn, jobs, chunksize=4))


def cmd_check(args) -> int:
    rng = random.Random(args.seed)
    jobs = []
    for kind in ("mincut", "cycle", "ncsp"):
        for _ in range(args.count):
            jobs.append((kind, rng.randrange(1 << 30), args.backend))
    t0 = time.perf_counter()
    results = _pool_map(_check_one, jobs)
    bad = [msg for ok, msg in results if not ok]
    payload = {
        "problem": "check",
        "weight": len(bad),
        "certificate": bad,
        "backend": args.backend,
        "n": len(jobs),
        "m": 0,
        "elapsed_ms": (time.perf_counter() - t0) * 1000.0,
    }
    if args.json:
        print(json.dumps(payload, sort_keys=True))
    else:
        for msg in bad:
            print("MISMATCH", msg)
        print(f"checked {len(jobs)} instances, {len(bad)} mismatches")
    return 1 if bad else 0


def _bench_one(job):
    from .oracle import GenSpec, gen_planar
    from .reduce import min_cut

    n, seed, backend = job
    raw = gen_planar(GenSpec(n=n, seed=seed, mode="triangulation", p_inf=0.0))
    t0 = time.perf_counter()
    min_cut(raw, backend=backend)
    return n, time.perf_counter() - t0


def cmd_bench(args) -> int:
    sizes = [int(s) for s in args.sizes.split(",") if s.strip()]
    jobs = [(n, args.seed + k, args.backend) for n in sizes for k in range(args.repeat)]
    times = {}
    for n, t in _pool_map(_bench_one, jobs):
        times.setdefault(n, []).append(t)
    rows = []
    prev = None
    for n in sizes:
        t = min(times[n])
        rows.append({"n": n, "seconds": t, "ratio": (t / prev) if prev else None})
        prev = t
    if args.json:
        print(json.dumps({"problem": "bench", "backend": args.backend, "rows": rows}, sort_keys=True))
    else:
        print(f"{'n':>8} {'seconds':>10} {'ratio':>7}")
        for row in rows:
            ratio = "" if row["ratio"] is None else f"{row['ratio']:.2f}"
            print(f"{row['n']:>8} {row['seconds']:>10.3f} {ratio:>7}")
    return 0


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="planarcut", description="Minimum cuts and shortest cycles in planar digraphs.")
    p.add_argument("--version", action="version", version=f"planarcut {__version__}")
    sub = p.add_subparsers(dest="cmd", required=True)

    def common(sp):
        sp.add_argument("--backend", choices=["baseline", "ddg"], default="baseline")
        sp.add_argument("--seed", type=int, default=0)
        sp.add_argument("--json", action="store_true")
        sp.add_argument("--r", type=int, default=None, help="piece size for the ddg backend")

    for name, fn, helptext in (
        ("mincut", cmd_mincut, "global minimum cut"),
        ("cycle", cmd_cycle, "shortest directed cycle"),
        ("ncsp", cmd_ncsp, "distances between terminal pairs on the outer face"),
    ):
        sp = sub.add_parser(name, help=helptext)
        sp.add_argument("file")
        common(sp)
        if name == "ncsp":
            sp.add_argument("--pairs", required=True, help="u1:v1,u2:v2,... in outer-face order")
        sp.set_defaults(fn=fn)
    sp = sub.add_parser("check", help="compare against brute-force oracles on generated instances")
    common(sp)
    sp.add_argument("--count", type=int, default=40, help="instances per problem")
    sp.set_defaults(fn=cmd_check)
    sp = sub.add_parser("bench", help="min-cut time on generated triangulations")
    common(sp)
    sp.add_argument("--sizes", default="4096,8192,16384")
    sp.add_argument("--repeat", type=int, default=1)
    sp.set_defaults(fn=cmd_bench)
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.fn(args)
    except EmbeddingInvalid as e:
        print(f"invalid embedding: {e}", file=sys.stderr)
        return 1
    except ParseError as e:
        print(f"parse error: {e}", file=sys.stderr)
        return 2
    except OSError as e:
        print(f"cannot read input: {e}", file=sys.stderr)
        return 2
    except (CertificateError, GraphError, ValueError) as e:
        print(f"error: {e}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
