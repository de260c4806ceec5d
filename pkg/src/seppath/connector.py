"""Path-forest completion: routing pair families through a vertex pool and
closing a core forest into one path by a components-then-length local search."""

import random
from collections import deque

from .graphs import Path, PathForest, canonical_edge

DEFAULT_MAX_LEN = 24
DEFAULT_RETRIES = 20
DEFAULT_MAX_MOVES = 10000


class ConnectionRequest:
    __slots__ = ("host", "through", "pairs", "max_len", "min_len", "seed", "retries")

    def __init__(self, host, through, pairs, max_len=DEFAULT_MAX_LEN, seed=0,
                 retries=DEFAULT_RETRIES, min_len=1):
        self.host = host
        self.through = frozenset(through)
        self.pairs = tuple(tuple(p) for p in pairs)
        ends = [v for p in self.pairs for v in p]
        if len(set(ends)) != len(ends):
            raise ValueError("pair endpoints must be pairwise distinct")
        if not (1 <= min_len <= max_len):
            raise ValueError("need 1 <= min_len <= max_len")
        self.max_len = max_len
        self.min_len = min_len
        self.seed = seed
        self.retries = retries


class CompletionProblem:
    __slots__ = ("host", "core", "forbidden_edges", "forbidden_vertices", "limits")

    def __init__(self, host, core, forbidden_edges=(), forbidden_vertices=(), limits=None):
        self.host = host
        self.core = core if isinstance(core, PathForest) else PathForest(core)
        self.forbidden_edges = frozenset(canonical_edge(*e) for e in forbidden_edges)
        self.forbidden_vertices = frozenset(forbidden_vertices)
        if self.forbidden_vertices & self.core.vertex_set():
            raise ValueError("forbidden vertices intersect the core")
        if self.forbidden_edges & self.core.edge_set():
            raise ValueError("forbidden edges intersect the core")
        self.limits = dict(limits or {})


def _bfs_path(G, a, b, blocked, max_len, min_len=1):
    """Shortest a-b path of length >= min_len whose interior avoids blocked, or None."""
    if a == b:
        return None
    prev = {a: None}
    queue = deque([(a, 0)])
    while queue:
        v, d = queue.popleft()
        if d >= max_len:
            continue
        for w in G.neighbors(v):
            if w == b:
                if d + 1 < min_len:
                    continue
                path = [b, v]
                while prev[v] is not None:
                    v = prev[v]
                    path.append(v)
                path.reverse()
                return path
            if w in prev or w in blocked:
                continue
            prev[w] = v
            queue.append((w, d + 1))
    return None


def _route_in_order(req, order):
    ends = {v for p in req.pairs for v in p}
    allowed_interior = req.through - ends
    blocked_base = set(req.host.live) - allowed_interior
    used = set()
    routed = {}
    for idx in order:
        x, y = req.pairs[idx]
        blocked = (blocked_base | used) - {y}
        p = _bfs_path(req.host, x, y, blocked, req.max_len, req.min_len)
        if p is None:
            return None
        routed[idx] = p
        used.update(p[1:-1])
    return [Path(routed[i]) for i in range(len(req.pairs))]


def connect_pairs_through(req):
    """
    Route every pair through the designated vertex pool with pairwise disjoint
    interiors: sequential shortest paths in random order with retries, then a
    deterministic fewest-alternatives-first pass. Returns None on failure.
    """
    r = len(req.pairs)
    if r == 0:
        return []
    for attempt in range(req.retries):
        rng = random.Random(req.seed * 1000003 + attempt)
        order = list(range(r))
        rng.shuffle(order)
        result = _route_in_order(req, order)
        if result is not None:
            return result
    # pairs with longer shortest routes have fewer alternatives; route them first
    ends = {v for p in req.pairs for v in p}
    blocked_base = set(req.host.live) - (req.through - ends)

    def solo_len(idx):
        x, y = req.pairs[idx]
        p = _bfs_path(req.host, x, y, blocked_base - {y}, req.max_len, req.min_len)
        return len(p) if p else req.host.n + 1

    order = sorted(range(r), key=lambda i: (-solo_len(i), i))
    return _route_in_order(req, order)


def check_connection(req, paths):
    """Independent validity check for a connect_pairs_through result."""
    if len(paths) != len(req.pairs):
        return False
    seen_interiors = set()
    ends = {v for p in req.pairs for v in p}
    for p, (x, y) in zip(paths, req.pairs):
        vs = p.vertices
        if {vs[0], vs[-1]} != {x, y} or not p.valid_in(req.host):
            return False
        if not (req.min_len <= len(p) <= req.max_len):
            return False
        interior = set(vs[1:-1])
        if not interior <= req.through:
            return False
        if interior & (seen_interiors | ends):
            return False
        seen_interiors |= interior
    return True


class _Chain:
    """Alternating core/connector segments forming one open path."""

    __slots__ = ("segments",)

    def __init__(self, segments):
        self.segments = segments

    def vertices(self):
        out = list(self.segments[0][1])
        for _, seg in self.segments[1:]:
            out.extend(seg[1:])
        return out

    def ends(self):
        vs = self.vertices()
        return vs[0], vs[-1]

    def oriented(self, end_last):
        vs = self.vertices()
        if vs[-1] == end_last:
            return self
        rev = [(kind, seg[::-1]) for kind, seg in reversed(self.segments)]
        return _Chain(rev)


def complete_to_path(prob, trace=None):
    """
    Close the core forest into one simple path avoiding the forbidden edges and
    vertices. Local search over (component count, total connector length):
    join two components by a shortest connector, or reroute a connector
    strictly shorter; the measure decreases lexicographically at every
    accepted move. Returns None when stuck with several components.
    """
    H = prob.host.without(vertices=prob.forbidden_vertices, edges=prob.forbidden_edges)
    chains = [_Chain([("core", list(p.vertices))]) for p in prob.core.paths]
    if not chains:
        return None
    max_len = prob.limits.get("max_connector_len", DEFAULT_MAX_LEN)
    max_moves = prob.limits.get("max_moves", DEFAULT_MAX_MOVES)

    def used_vertices():
        out = set()
        for c in chains:
            out.update(c.vertices())
        return out

    def measure():
        total = sum(len(seg) - 1 for c in chains
                    for kind, seg in c.segments if kind == "conn")
        return (len(chains), total)

    def try_join():
        used = used_vertices()
        options = []
        for i, ci in enumerate(chains):
            for j in range(i + 1, len(chains)):
                for a in ci.ends():
                    for b in chains[j].ends():
                        options.append((a, b, i, j))
        options.sort()
        for a, b, i, j in options:
            p = _bfs_path(H, a, b, used - {b}, max_len)
            if p is None:
                continue
            left = chains[i].oriented(a)
            right = chains[j].oriented(b).segments
            right = [(k, s[::-1]) for k, s in reversed(right)]
            segs = left.segments + [("conn", p)] + right
            merged = _Chain(segs)
            keep = [c for k, c in enumerate(chains) if k not in (i, j)]
            chains.clear()
            chains.extend(keep + [merged])
            return True
        return False

    def try_reroute():
        used = used_vertices()
        cand = []
        for ci, c in enumerate(chains):
            for si, (kind, seg) in enumerate(c.segments):
                if kind == "conn" and len(seg) > 2:
                    cand.append((min(seg[0], seg[-1]), ci, si))
        cand.sort()
        for _, ci, si in cand:
            seg = chains[ci].segments[si][1]
            a, b = seg[0], seg[-1]
            freed = set(seg[1:-1])
            blocked = (used - freed) - {b}
            p = _bfs_path(H, a, b, blocked, len(seg) - 2)
            if p is not None and len(p) < len(seg):
                chains[ci].segments[si] = ("conn", p)
                return True
        return False

    prev = measure()
    if trace is not None:
        trace.append(prev)
    moves = 0
    while len(chains) > 1 and moves < max_moves:
        if try_join() or try_reroute():
            cur = measure()
            if not cur < prev:
                raise AssertionError("completion move did not decrease the measure")
            prev = cur
            if trace is not None:
                trace.append(cur)
            moves += 1
        else:
            return None
    if len(chains) != 1:
        return None
    vs = chains[0].vertices()
    if len(set(vs)) != len(vs):
        raise AssertionError("completion produced a non-simple walk")
    return Path(vs)


def check_completion(prob, path):
    """Independent validity check for a complete_to_path result."""
    if not path.valid_in(prob.host):
        return False
    pe = set(path.edges())
    if not prob.core.edge_set() <= pe:
        return False
    if pe & prob.forbidden_edges:
        return False
    if set(path.vertices) & prob.forbidden_vertices:
        return False
    return True


def extend_matching_through_hubs(host, M, hubs):
    """
    Grow the matching into a path forest: scanning the edges in the given
    order, join a leaf with a leaf of another component whenever they share an
    unused hub neighbor, consuming the hub.
    """
    hubs = set(hubs)
    medges = [canonical_edge(*e) for e in M]
    mvertices = {v for e in medges for v in e}
    if hubs & mvertices:
        raise ValueError("hubs intersect the matching")
    if len(mvertices) != 2 * len(medges):
        raise ValueError("M is not a matching")
    chains = [list(e) for e in medges]
    chain_of = {}
    for i, c in enumerate(chains):
        for v in c:
            chain_of[v] = i
    unused = set(hubs)

    def leaf_ends():
        out = {}
        for i, c in enumerate(chains):
            if c is not None:
                out[c[0]] = i
                out[c[-1]] = i
        return out

    for e in medges:
        for v in e:
            ends = leaf_ends()
            if v not in ends:
                continue
            i = ends[v]
            joined = False
            for h in sorted(unused & set(host.neighbors(v))):
                for v2 in sorted(set(host.neighbors(h)) & set(ends)):
                    j = ends[v2]
                    if j == i:
                        continue
                    a = chains[i] if chains[i][-1] == v else chains[i][::-1]
                    b = chains[j] if chains[j][0] == v2 else chains[j][::-1]
                    chains[i] = a + [h] + b
                    chains[j] = None
                    unused.discard(h)
                    joined = True
                    break
                if joined:
                    break
    return PathForest([Path(c) for c in chains if c is not None])
