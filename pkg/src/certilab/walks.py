"""Certificate walk-graphs for cycles, closed-walk spectra and numerical
semigroup representability.

A radius-1 cycle verifier induces a directed graph on certificate pairs with
an edge (a,b) -> (b,c) exactly when a degree-2 vertex with certificate b and
neighbors a, c accepts; cycles of length n admit an accepting assignment iff
this graph has a closed walk of length n.
"""

from __future__ import annotations

import json
import math
from collections import defaultdict
from dataclasses import dataclass, field
from typing import Optional

from .certify import LocalVerifier

MATRIX_POWER_CUTOFF = 4096
ELEMENTARY_CAP = 64


class WalkError(ValueError):
    pass


@dataclass
class CertWalkGraph:
    width: int
    adjacency: dict                     # pair -> tuple of successor pairs
    _scc_cache: Optional[list] = field(default=None, repr=False)
    _length_cache: dict = field(default_factory=dict, repr=False)

    @property
    def vertices(self):
        return list(self.adjacency)

    @property
    def n_vertices(self):
        return len(self.adjacency)

    def edge_triples(self):
        """Edges as (a, b, c): the pair (a,b) points to (b,c)."""
        out = []
        for (a, b), dsts in self.adjacency.items():
            for (_, c) in dsts:
                out.append((a, b, c))
        return sorted(out)

    def to_json(self):
        return json.dumps({"k": self.width, "edges": [list(t) for t in self.edge_triples()]})

    @staticmethod
    def from_json(text):
        doc = json.loads(text)
        adj = defaultdict(list)
        for a, b, c in doc["edges"]:
            adj[(a, b)].append((b, c))
            adj.setdefault((b, c), adj[(b, c)])
        return CertWalkGraph(doc["k"], {v: tuple(sorted(d)) for v, d in adj.items()})


def build_cert_graph(v: LocalVerifier, advice=None) -> CertWalkGraph:
    """Pairs of certificates with middle-acceptance edges."""
    if v.radius != 1:
        raise WalkError("the pair construction requires radius 1")
    adj = {}
    groups = defaultdict(list)
    for c in v.valid_certs(advice):
        groups[v.cert_group(c, advice) if v.cert_group is not None else 0].append(c)
    for group in groups.values():
        for a in group:
            for b in group:
                dsts = tuple(sorted((b, c) for c in v.middle_successors(a, b, advice)))
                adj[(a, b)] = dsts
    # make sure every mentioned pair is a key
    for dsts in list(adj.values()):
        for d in dsts:
            adj.setdefault(d, ())
    return CertWalkGraph(v.width, adj)


# -- strongly connected components ------------------------------------------------

def strongly_connected_components(adjacency):
    """Tarjan, iterative; returns components as lists of vertices."""
    index = {}
    low = {}
    on_stack = set()
    stack = []
    out = []
    counter = [0]

    for root in adjacency:
        if root in index:
            continue
        work = [(root, iter(adjacency[root]))]
        index[root] = low[root] = counter[0]
        counter[0] += 1
        stack.append(root)
        on_stack.add(root)
        while work:
            v, it = work[-1]
            advanced = False
            for w in it:
                if w not in index:
                    index[w] = low[w] = counter[0]
                    counter[0] += 1
                    stack.append(w)
                    on_stack.add(w)
                    work.append((w, iter(adjacency.get(w, ()))))
                    advanced = True
                    break
                elif w in on_stack:
                    low[v] = min(low[v], index[w])
            if advanced:
                continue
            work.pop()
            if work:
                pv = work[-1][0]
                low[pv] = min(low[pv], low[v])
            if low[v] == index[v]:
                comp = []
                while True:
                    w = stack.pop()
                    on_stack.discard(w)
                    comp.append(w)
                    if w == v:
                        break
                out.append(comp)
    return out


@dataclass
class SccInfo:
    scc_id: int
    vertices: tuple
    period: int        # gcd of all closed-walk lengths; 0 for edgeless components
    size: int
    has_edge: bool


@dataclass
class WalkSpectrum:
    sccs: list
    n_max: int
    lengths: frozenset   # closed-walk lengths up to n_max, whole graph

    def to_csv(self):
        lines = ["scc_id,size,period"]
        for s in self.sccs:
            lines.append(f"{s.scc_id},{s.size},{s.period}")
        return "\n".join(lines) + "\n"


def _scc_internal_adj(adjacency, comp):
    inside = set(comp)
    return {v: tuple(w for w in adjacency.get(v, ()) if w in inside) for v in comp}


def _scc_period(adj):
    """gcd of closed-walk lengths via BFS level differences over edges."""
    root = next(iter(adj))
    level = {root: 0}
    order = [root]
    from collections import deque
    q = deque([root])
    while q:
        u = q.popleft()
        for w in adj[u]:
            if w not in level:
                level[w] = level[u] + 1
                q.append(w)
    g = 0
    for u in adj:
        for w in adj[u]:
            g = math.gcd(g, level[u] + 1 - level[w])
    return g


def _sccs(graph: CertWalkGraph):
    if graph._scc_cache is None:
        comps = strongly_connected_components(graph.adjacency)
        infos = []
        for i, comp in enumerate(sorted(comps, key=lambda c: sorted(map(repr, c)))):
            adj = _scc_internal_adj(graph.adjacency, comp)
            has_edge = any(adj[v] for v in adj)
            period = _scc_period(adj) if has_edge else 0
            infos.append(SccInfo(i, tuple(comp), period, len(comp), has_edge))
        graph._scc_cache = infos
    return graph._scc_cache


def _scc_length_flags(graph: CertWalkGraph, info: SccInfo, n_max: int):
    """Boolean flags (index = length) for closed walks inside one component."""
    cached = graph._length_cache.get(info.scc_id)
    if cached is not None and len(cached) > n_max:
        return cached
    adj = _scc_internal_adj(graph.adjacency, info.vertices)
    flags = [False] * (n_max + 1)
    if info.has_edge:
        for anchor in info.vertices:
            reach = {anchor}
            for t in range(1, n_max + 1):
                reach = {w for u in reach for w in adj[u]}
                if anchor in reach:
                    flags[t] = True
                if not reach:
                    break
    graph._length_cache[info.scc_id] = flags
    return flags


def closed_walk_exists(graph: CertWalkGraph, n: int) -> bool:
    """Exact decision: some closed walk of length exactly n.

    Small n is answered by stepping (exact); beyond 2*size^2 within a
    component, a closed walk of length n exists iff the period divides n:
    a spanning closed walk of length <= size^2 plus the representability of
    n - that length as a combination of elementary cycle lengths (each at
    most size) cover every such multiple.
    """
    if n < 3:
        raise WalkError("cycles have length >= 3")
    for info in _sccs(graph):
        if not info.has_edge:
            continue
        bound = 2 * info.size * info.size
        if n >= bound and n >= MATRIX_POWER_CUTOFF:
            if info.period and n % info.period == 0:
                return True
        else:
            target = max(n, min(bound, MATRIX_POWER_CUTOFF))
            if _scc_length_flags(graph, info, target)[n]:
                return True
    return False


def scc_periods(graph: CertWalkGraph, n_max: int = 200) -> WalkSpectrum:
    infos = _sccs(graph)
    lengths = set()
    for info in infos:
        if not info.has_edge:
            continue
        flags = _scc_length_flags(graph, info, n_max)
        lengths.update(t for t in range(min(len(flags), n_max + 1)) if flags[t])
    return WalkSpectrum(infos, n_max, frozenset(lengths))


# -- elementary cycles ---------------------------------------------------------------

@dataclass
class ElementaryCycles:
    lengths: tuple       # multiset, sorted
    complete: bool       # False when the vertex cap stopped the enumeration


def scc_subgraph(graph: CertWalkGraph, scc_id: int):
    info = next(s for s in _sccs(graph) if s.scc_id == scc_id)
    return _scc_internal_adj(graph.adjacency, info.vertices)


class _EnumCap(Exception):
    pass


def elementary_cycle_lengths(adjacency, cap: int = ELEMENTARY_CAP,
                             count_cap: int = 200_000) -> ElementaryCycles:
    """Lengths of all cycles that repeat no vertex (Johnson-style search).

    Enumeration only runs for graphs with at most ``cap`` vertices and stops
    after ``count_cap`` cycles; a stopped enumeration is marked partial.
    """
    vertices = sorted(adjacency, key=repr)
    if len(vertices) > cap:
        return ElementaryCycles((), False)
    idx = {v: i for i, v in enumerate(vertices)}
    adj = {i: sorted(idx[w] for w in adjacency.get(v, ()) if w in idx)
           for v, i in idx.items()}
    lengths = []

    # enumerate cycles whose least vertex is s, for each s
    def run():
        for s in range(len(vertices)):
            path = [s]
            blocked = {s}

            def dfs(u):
                for w in adj[u]:
                    if w < s:
                        continue
                    if w == s:
                        lengths.append(len(path))
                        if len(lengths) > count_cap:
                            raise _EnumCap
                    elif w not in blocked:
                        blocked.add(w)
                        path.append(w)
                        dfs(w)
                        path.pop()
                        blocked.discard(w)

            dfs(s)

    try:
        run()
    except _EnumCap:
        return ElementaryCycles(tuple(sorted(lengths)), False)
    return ElementaryCycles(tuple(sorted(lengths)), True)


# -- numerical semigroup representability ----------------------------------------------

def representable(lengths, n: int) -> bool:
    """Is n a nonnegative integer combination of the given lengths?"""
    ls = sorted(set(int(x) for x in lengths))
    if not ls or any(x <= 0 for x in ls):
        raise WalkError("lengths must be positive")
    if n < 0:
        return False
    reachable = 1  # bitset over sums
    for x in ls:
        # saturate with multiples of x
        prev = 0
        while prev != reachable:
            prev = reachable
            reachable |= (reachable << x) & ((1 << (n + 1)) - 1)
    return bool((reachable >> n) & 1)


@dataclass
class BezoutReport:
    lengths: tuple
    gcd: int
    max_length: int
    window: tuple
    failures: tuple

    @property
    def ok(self):
        return not self.failures


def verify_bezout_window(lengths) -> BezoutReport:
    """Every multiple of gcd(lengths) in [m^2, 2 m^2] must be representable
    (m = max length)."""
    ls = sorted(set(int(x) for x in lengths))
    if not ls or ls[0] <= 0:
        raise WalkError("lengths must be positive")
    d = 0
    for x in ls:
        d = math.gcd(d, x)
    m = ls[-1]
    lo, hi = m * m, 2 * m * m
    # one bitset sweep up to hi
    reachable = 1
    mask = (1 << (hi + 1)) - 1
    for x in ls:
        prev = 0
        while prev != reachable:
            prev = reachable
            reachable |= (reachable << x) & mask
    failures = tuple(n for n in range(lo, hi + 1)
                     if n % d == 0 and not ((reachable >> n) & 1))
    return BezoutReport(tuple(ls), d, m, (lo, hi), failures)


@dataclass
class RealizabilityReport:
    scc_id: int
    size: int
    period: int
    window: tuple
    failures: tuple

    @property
    def ok(self):
        return not self.failures


def walk_realizability_check(graph: CertWalkGraph, scc_id: int) -> RealizabilityReport:
    """Desk analog of the long-walk lemma: inside a strongly connected
    component every multiple of the period d in [2 size^2, 6 size^2] has a
    closed walk."""
    info = next(s for s in _sccs(graph) if s.scc_id == scc_id)
    if not info.has_edge:
        raise WalkError("component has no edges")
    lo = 2 * info.size * info.size
    hi = 6 * info.size * info.size
    flags = _scc_length_flags(graph, info, hi)
    failures = tuple(n for n in range(lo, hi + 1)
                     if info.period and n % info.period == 0 and not flags[n])
    return RealizabilityReport(info.scc_id, info.size, info.period, (lo, hi), failures)
