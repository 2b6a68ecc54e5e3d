"""Immutable topologies (paths, cycles, trees, caterpillars) and radius-r views.

Vertices are dense indices 0..n-1.  Labels and identifiers are optional
layers on top; identifiers are never conflated with vertex indices, so the
anonymous model is the default.
"""

from __future__ import annotations

import json
from collections import deque
from dataclasses import dataclass, field
from typing import Iterable, Optional, Sequence

PATH = "path"
CYCLE = "cycle"
TREE = "tree"
CATERPILLAR = "caterpillar"

KINDS = (PATH, CYCLE, TREE, CATERPILLAR)

# a verifier promised class C must handle every topology whose kind is in
# COMPATIBLE[C]; paths are caterpillars are trees
COMPATIBLE = {
    PATH: {PATH},
    CYCLE: {CYCLE},
    CATERPILLAR: {CATERPILLAR, PATH},
    TREE: {TREE, CATERPILLAR, PATH},
}


class TopologyError(ValueError):
    pass


@dataclass(frozen=True)
class Topology:
    """A finite, simple, loopless, connected graph of one of the four kinds."""

    kind: str
    n: int
    edges: tuple  # tuple of (u, v) pairs with u < v, sorted
    labels: Optional[tuple] = None
    sigma: Optional[int] = None  # declared label alphabet size, labels in [0, sigma)
    ids: Optional[tuple] = None  # injective positive identifiers
    _adj: tuple = field(default=None, repr=False, compare=False)

    def __post_init__(self):
        if self.kind not in KINDS:
            raise TopologyError(f"unknown kind {self.kind!r}")
        if self.n < 1:
            raise TopologyError("need at least one vertex")
        adj = [[] for _ in range(self.n)]
        seen = set()
        for u, v in self.edges:
            if not (0 <= u < v < self.n):
                raise TopologyError(f"bad edge ({u},{v})")
            if (u, v) in seen:
                raise TopologyError(f"duplicate edge ({u},{v})")
            seen.add((u, v))
            adj[u].append(v)
            adj[v].append(u)
        object.__setattr__(self, "_adj", tuple(tuple(sorted(a)) for a in adj))
        self._check_connected()
        self._check_kind()
        if self.labels is not None:
            if len(self.labels) != self.n:
                raise TopologyError("labels length must equal n")
            sig = self.sigma if self.sigma is not None else max(self.labels) + 1
            object.__setattr__(self, "sigma", sig)
            if any(not (0 <= l < sig) for l in self.labels):
                raise TopologyError("label outside declared alphabet")
        if self.ids is not None:
            if len(self.ids) != self.n:
                raise TopologyError("ids length must equal n")
            if any(i < 1 for i in self.ids):
                raise TopologyError("ids must be positive")
            if len(set(self.ids)) != self.n:
                raise TopologyError("ids must be pairwise distinct")

    # -- structural checks ------------------------------------------------

    def _check_connected(self):
        seen = {0}
        stack = [0]
        while stack:
            u = stack.pop()
            for v in self._adj[u]:
                if v not in seen:
                    seen.add(v)
                    stack.append(v)
        if len(seen) != self.n:
            raise TopologyError("graph is not connected")

    def _check_kind(self):
        degs = [len(a) for a in self._adj]
        m = len(self.edges)
        if self.kind == PATH:
            if self.n == 1:
                ok = m == 0
            else:
                ok = m == self.n - 1 and sorted(degs)[-1] <= 2 and degs.count(1) == 2
            if not ok:
                raise TopologyError("not a path")
        elif self.kind == CYCLE:
            if self.n < 3 or any(d != 2 for d in degs):
                raise TopologyError("not a cycle (need n >= 3, all degrees 2)")
        elif self.kind in (TREE, CATERPILLAR):
            if m != self.n - 1:
                raise TopologyError("not a tree")
            if self.kind == CATERPILLAR and not self._is_caterpillar():
                raise TopologyError("not a caterpillar")

    def _is_caterpillar(self):
        # removing the degree-1 vertices must leave a path (possibly empty,
        # which covers the degenerate 1- and 2-vertex cases)
        spine = [u for u in range(self.n) if self.degree(u) >= 2]
        if len(spine) <= 1:
            return True
        cnt = {u: sum(1 for v in self._adj[u] if self.degree(v) >= 2) for u in spine}
        if any(c > 2 for c in cnt.values()):
            return False
        # the induced spine is a forest (subgraph of a tree); it is a path
        # exactly when it is connected, i.e. has len(spine)-1 induced edges
        induced = sum(cnt.values()) // 2
        return induced == len(spine) - 1 and sum(1 for c in cnt.values() if c == 1) == 2

    # -- accessors ---------------------------------------------------------

    def neighbors(self, v):
        return self._adj[v]

    def degree(self, v):
        return len(self._adj[v])

    def label(self, v):
        return None if self.labels is None else self.labels[v]

    def vertex_id(self, v):
        return None if self.ids is None else self.ids[v]

    def distances_from(self, source):
        """BFS distances from source; unreachable would be -1 (cannot happen)."""
        dist = [-1] * self.n
        dist[source] = 0
        q = deque([source])
        while q:
            u = q.popleft()
            for v in self._adj[u]:
                if dist[v] < 0:
                    dist[v] = dist[u] + 1
                    q.append(v)
        return dist

    @property
    def diameter(self):
        best = 0
        for s in range(self.n):
            best = max(best, max(self.distances_from(s)))
        return best

    def central_path(self):
        """Spine of a caterpillar: the vertices of degree >= 2, in path order.

        Raises for graphs whose degree->=2 vertices do not induce a path.
        """
        spine = [u for u in range(self.n) if self.degree(u) >= 2]
        if not spine:
            raise TopologyError("graph has no vertex of degree >= 2")
        sub = {u: [v for v in self._adj[u] if self.degree(v) >= 2] for u in spine}
        if any(len(vs) > 2 for vs in sub.values()):
            raise TopologyError("degree->=2 vertices do not induce a path")
        if len(spine) == 1:
            return spine
        ends = [u for u in spine if len(sub[u]) == 1]
        if len(ends) != 2:
            raise TopologyError("degree->=2 vertices do not induce a path")
        order = [min(ends)]
        prev = None
        while True:
            u = order[-1]
            nxt = [v for v in sub[u] if v != prev]
            if not nxt:
                break
            prev = u
            order.append(nxt[0])
        if len(order) != len(spine):
            raise TopologyError("degree->=2 vertices do not induce a path")
        return order

    def leaf_profile(self):
        """Pendant-leaf counts along the central path."""
        return [sum(1 for v in self.neighbors(u) if self.degree(v) == 1)
                for u in self.central_path()]

    def path_order(self):
        """Vertices of a path topology from one endpoint to the other."""
        if self.kind != PATH:
            raise TopologyError("path_order is only defined for paths")
        if self.n == 1:
            return [0]
        start = next(u for u in range(self.n) if self.degree(u) == 1)
        order = [start]
        prev = None
        while len(order) < self.n:
            u = order[-1]
            nxt = [v for v in self._adj[u] if v != prev]
            prev = u
            order.append(nxt[0])
        return order

    def permuted(self, perm: Sequence[int]) -> "Topology":
        """Relabel vertices: new index of old vertex v is perm[v]."""
        edges = tuple(sorted(tuple(sorted((perm[u], perm[v]))) for u, v in self.edges))
        inv = [0] * self.n
        for old, new in enumerate(perm):
            inv[new] = old
        labels = None if self.labels is None else tuple(self.labels[inv[i]] for i in range(self.n))
        ids = None if self.ids is None else tuple(self.ids[inv[i]] for i in range(self.n))
        return Topology(self.kind, self.n, edges, labels, self.sigma, ids)

    # -- serialization -----------------------------------------------------

    def to_json(self) -> str:
        doc = {"kind": self.kind, "n": self.n, "edges": [list(e) for e in self.edges]}
        if self.labels is not None:
            doc["labels"] = list(self.labels)
        if self.ids is not None:
            doc["ids"] = list(self.ids)
        return json.dumps(doc)

    @staticmethod
    def from_json(text: str) -> "Topology":
        doc = json.loads(text)
        return Topology(
            doc["kind"], doc["n"], tuple(tuple(e) for e in doc["edges"]),
            tuple(doc["labels"]) if "labels" in doc else None,
            None,
            tuple(doc["ids"]) if "ids" in doc else None,
        )


# -- builders ---------------------------------------------------------------

def _path_edges(n):
    return tuple((i, i + 1) for i in range(n - 1))


def build_path(n: int, labels: Optional[Iterable[int]] = None, sigma: Optional[int] = None,
               ids: Optional[Iterable[int]] = None) -> Topology:
    if n < 1:
        raise TopologyError("a path needs at least one vertex")
    labels = None if labels is None else tuple(labels)
    ids = None if ids is None else tuple(ids)
    return Topology(PATH, n, _path_edges(n), labels, sigma, ids)


def build_cycle(n: int) -> Topology:
    if n < 3:
        raise TopologyError("a cycle needs at least three vertices")
    edges = tuple(sorted(tuple(sorted((i, (i + 1) % n))) for i in range(n)))
    return Topology(CYCLE, n, edges)


def build_tree(edges: Iterable[tuple]) -> Topology:
    edges = tuple(sorted(tuple(sorted(e)) for e in edges))
    n = max(max(e) for e in edges) + 1 if edges else 1
    return Topology(TREE, n, edges)


def build_caterpillar(leaf_counts: Sequence[int]) -> Topology:
    """Spine vertex i carries leaf_counts[i] pendant leaves.

    Spine vertices come first (indices 0..len-1), then the leaves in spine
    order, which makes builders deterministic.
    """
    d = len(leaf_counts)
    if d < 1:
        raise TopologyError("empty spine")
    edges = [(i, i + 1) for i in range(d - 1)]
    nxt = d
    for i, c in enumerate(leaf_counts):
        for _ in range(c):
            edges.append((i, nxt))
            nxt += 1
    if nxt == 1:
        return Topology(CATERPILLAR, 1, ())
    return Topology(CATERPILLAR, nxt, tuple(sorted(tuple(sorted(e)) for e in edges)))
