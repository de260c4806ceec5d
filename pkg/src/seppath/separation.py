"""Separating path systems: verification, exact small-instance oracle, baselines."""

from .decomp import decompose_into_paths
from .graphs import Graph, Path, canonical_edge

ORACLE_MAX_N = 7
ORACLE_MAX_E = 12


class PathSystem:
    """A collection of paths claimed to separate a target edge set of a host graph."""

    __slots__ = ("host", "paths", "target", "mode")

    def __init__(self, host, paths, target=None, mode="strong"):
        if mode not in ("strong", "weak"):
            raise ValueError("mode must be strong or weak")
        self.host = host
        self.paths = tuple(paths)
        self.target = frozenset(
            canonical_edge(*e) for e in (host.edges if target is None else target)
        )
        if not self.target <= host.edges:
            raise ValueError("target contains non-edges of the host")
        self.mode = mode

    def __len__(self):
        return len(self.paths)


class SeparationReport:
    __slots__ = ("ok", "witness", "covered")

    def __init__(self, ok, witness, covered):
        self.ok = ok
        self.witness = witness
        self.covered = covered

    def __repr__(self):
        return "SeparationReport(ok=%r, witness=%r, covered=%d)" % (
            self.ok, self.witness, self.covered)


def _signatures(system):
    """Per-target-edge bitmap of the paths containing it."""
    sig = {e: 0 for e in system.target}
    for i, p in enumerate(system.paths):
        if not p.valid_in(system.host):
            raise ValueError("path %r not valid in host graph" % (p,))
        bit = 1 << i
        for e in p.edges():
            if e in sig:
                sig[e] |= bit
    return sig


def verify_separation(system):
    """
    Check the separation property. Strong: every ordered pair (e, f) of
    distinct target edges has a path containing e but not f. Weak: every
    unordered pair has a path containing exactly one. Witness is the
    lexicographically least violating pair.
    """
    sig = _signatures(system)
    edges = sorted(system.target)
    covered = sum(1 for e in edges if sig[e])
    if len(edges) < 2:
        return SeparationReport(True, None, covered)
    if system.mode == "weak":
        by_sig = {}
        witness = None
        for e in edges:
            other = by_sig.get(sig[e])
            if other is not None:
                pair = (other, e)
                if witness is None or pair < witness:
                    witness = pair
            else:
                by_sig[sig[e]] = e
        return SeparationReport(witness is None, witness, covered)
    # strong: (e, f) violated iff every path containing e also contains f
    edge_list_of_path = [
        [e for e in p.edges() if e in sig] for p in system.paths
    ]
    for e in edges:
        se = sig[e]
        if se == 0:
            f = next(x for x in edges if x != e)
            return SeparationReport(False, (e, f), covered)
        first_path = (se & -se).bit_length() - 1
        best = None
        for f in edge_list_of_path[first_path]:
            if f != e and (se & ~sig[f]) == 0:
                if best is None or f < best:
                    best = f
        if best is not None:
            return SeparationReport(False, (e, best), covered)
    return SeparationReport(True, None, covered)


def all_simple_paths(G):
    """All simple paths of G, canonical orientation, longest first then lexicographic."""
    out = set()
    for start in G.vertices():
        stack = [[start]]
        while stack:
            path = stack.pop()
            tail = path[-1]
            for w in G.neighbors(tail):
                if w in path:
                    continue
                ext = path + [w]
                key = tuple(ext) if tuple(ext) < tuple(ext[::-1]) else tuple(ext[::-1])
                out.add(key)
                stack.append(ext)
    return [Path(vs) for vs in sorted(out, key=lambda vs: (-len(vs), vs))]


def _separates(p_edges, e, f, mode):
    if mode == "strong":
        return e in p_edges and f not in p_edges
    return (e in p_edges) != (f in p_edges)


def brute_force_min_system(G, mode="strong", cap=None):
    """
    Exact minimum separating path system by branch and bound over all simple
    paths. Intended for tiny instances only; larger inputs are rejected.
    """
    if len(G) > ORACLE_MAX_N or G.num_edges() > ORACLE_MAX_E:
        raise ValueError("instance too large for the exact search")
    edges = sorted(G.edges)
    if len(edges) == 1:
        # a lone edge still needs one path so the system identifies it
        return PathSystem(G, [Path(edges[0])], mode=mode)
    if mode == "strong":
        pairs = [(e, f) for e in edges for f in edges if e != f]
    else:
        pairs = [(e, f) for i, e in enumerate(edges) for f in edges[i + 1:]]
    universe = all_simple_paths(G)
    path_edges = [frozenset(p.edges()) for p in universe]
    separators = {
        pair: [i for i, pe in enumerate(path_edges) if _separates(pe, pair[0], pair[1], mode)]
        for pair in pairs
    }
    if any(not s for s in separators.values()):
        raise ValueError("instance is infeasible (some pair cannot be separated)")
    if cap is None:
        cap = len(edges) + 1

    def lower_bound(missing):
        # greedy antichain: pairs with pairwise disjoint separator sets
        blocked = set()
        count = 0
        for pair in missing:
            seps = separators[pair]
            if not any(i in blocked for i in seps):
                count += 1
                blocked.update(seps)
        return count

    best = {"size": cap + 1, "paths": None}

    def search(chosen, missing):
        if not missing:
            cand = sorted(tuple(universe[i].vertices) for i in chosen)
            if len(chosen) < best["size"] or (
                len(chosen) == best["size"] and (best["paths"] is None or cand < best["paths"])
            ):
                best["size"] = len(chosen)
                best["paths"] = cand
            return
        if len(chosen) + lower_bound(missing) >= best["size"]:
            return
        pair = min(missing)
        for i in separators[pair]:
            if i in chosen:
                continue
            nxt = chosen | {i}
            still = [q for q in missing
                     if not _separates(path_edges[i], q[0], q[1], mode)]
            search(nxt, still)

    search(frozenset(), pairs)
    if best["paths"] is None:
        raise ValueError("no separating system within cap %d" % cap)
    return PathSystem(G, [Path(vs) for vs in best["paths"]], mode=mode)


def singleton_baseline(G, target=None):
    """One single-edge path per target edge; always strongly separating."""
    edges = sorted(G.edges if target is None else target)
    return PathSystem(G, [Path(e) for e in edges], target=edges, mode="strong")


def baseline_nlogn(G):
    """
    Bit-code baseline: index the edges, and for each bit position take the
    bit-set and bit-unset subgraphs, decomposing each into paths.
    """
    edges = sorted(G.edges)
    m = len(edges)
    if m <= 1:
        return singleton_baseline(G)
    bits = max(1, (m - 1).bit_length())
    paths = []
    for b in range(bits):
        for want in (1, 0):
            sub = [e for i, e in enumerate(edges) if (i >> b) & 1 == want]
            H = Graph(G.n, sub, live=G.live)
            paths.extend(decompose_into_paths(H).paths)
    return PathSystem(G, paths, mode="strong")


def compose_separators(host, P_inner, Q_inner, P_decomp, Q_decomp):
    """
    Combine separators of an edge split E(host) = E1 + E2: inner systems
    separate within each side, the side decompositions separate across.
    """
    for name, system in (("P_inner", P_inner), ("Q_inner", Q_inner)):
        rep = verify_separation(system)
        if not rep.ok:
            raise ValueError("%s fails verification, witness %r" % (name, rep.witness))
    e1, e2 = set(P_inner.target), set(Q_inner.target)
    if e1 & e2 or (e1 | e2) != set(host.edges):
        raise ValueError("inner targets do not partition the host edges")
    if set(P_decomp.host.edges) != e1 or set(Q_decomp.host.edges) != e2:
        raise ValueError("decompositions do not match the split")
    paths = list(P_inner.paths) + list(Q_inner.paths)
    paths += list(P_decomp.paths) + list(Q_decomp.paths)
    return PathSystem(host, paths, mode="strong")
