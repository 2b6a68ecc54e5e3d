"""Tree parsing and gluing along a path, acceptance of tree verifiers by a
feasibility sweep, and the caterpillar <-> labeled-path encodings."""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from typing import Optional

from .certify import CertAssignment, CertificationError, LocalVerifier
from .topology import PATH, Topology, TopologyError, build_caterpillar, build_path, build_tree
from .views import star_view


class TreeError(ValueError):
    pass


class RootedTree:
    """Rooted tree with the children-sorted recursive canonical encoding:
    two rooted trees encode equally iff they are isomorphic as rooted trees."""

    __slots__ = ("children", "size", "encoding")

    def __init__(self, children=()):
        kids = sorted(children, key=lambda c: c.encoding)
        self.children = tuple(kids)
        self.size = 1 + sum(c.size for c in kids)
        self.encoding = "(" + "".join(c.encoding for c in kids) + ")"

    def __eq__(self, other):
        return isinstance(other, RootedTree) and self.encoding == other.encoding

    def __hash__(self):
        return hash(self.encoding)

    def __repr__(self):
        return f"RootedTree{self.encoding}"

    def materialize(self, edges, start):
        """Allocate vertex indices in preorder; returns the next free index.
        The root receives index ``start``."""
        nxt = start + 1
        for c in self.children:
            edges.append((start, nxt))
            nxt = c.materialize(edges, nxt)
        return nxt


def rooted_tree_at(t: Topology, root: int, banned_edges=frozenset()) -> RootedTree:
    def build(u, parent):
        kids = []
        for w in t.neighbors(u):
            if w == parent:
                continue
            if (min(u, w), max(u, w)) in banned_edges:
                continue
            kids.append(build(w, u))
        return RootedTree(kids)
    return build(root, None)


def tree_canonical(t: Topology) -> str:
    """Canonical string of an unrooted tree: root at the center, or hang the
    two center halves on either side of the central edge."""
    if t.n == 1:
        return "()"
    # strip leaves until 1 or 2 vertices remain
    deg = {u: t.degree(u) for u in range(t.n)}
    layer = [u for u in range(t.n) if deg[u] <= 1]
    alive = t.n
    removed = set()
    while alive > 2:
        nxt = []
        for u in layer:
            removed.add(u)
            alive -= 1
            for w in t.neighbors(u):
                if w not in removed:
                    deg[w] -= 1
                    if deg[w] == 1:
                        nxt.append(w)
        layer = nxt
    centers = [u for u in range(t.n) if u not in removed]
    if len(centers) == 1:
        return rooted_tree_at(t, centers[0]).encoding
    a, b = centers
    e = frozenset({(min(a, b), max(a, b))})
    ea = rooted_tree_at(t, a, e).encoding
    eb = rooted_tree_at(t, b, e).encoding
    lo, hi = sorted((ea, eb))
    return "[" + lo + hi + "]"


def trees_isomorphic(t1: Topology, t2: Topology) -> bool:
    return tree_canonical(t1) == tree_canonical(t2)


# -- parsing and gluing ----------------------------------------------------------

@dataclass(frozen=True)
class TreeParsing:
    trees: tuple  # RootedTree sequence along the connecting path

    def __len__(self):
        return len(self.trees)

    def to_json(self):
        import json
        return json.dumps([t.encoding for t in self.trees])


def tree_path(t: Topology, u: int, v: int):
    parent = {u: None}
    stack = [u]
    while stack:
        x = stack.pop()
        if x == v:
            break
        for w in t.neighbors(x):
            if w not in parent:
                parent[w] = x
                stack.append(w)
    path = [v]
    while path[-1] != u:
        path.append(parent[path[-1]])
    return path[::-1]


def parse(t: Topology, u: int, v: int) -> TreeParsing:
    """Split the tree along the u-v path: the i-th component, rooted at the
    i-th path vertex, after removing the path edges."""
    if not (0 <= u < t.n and 0 <= v < t.n):
        raise TreeError("endpoints must be vertices of the tree")
    path = tree_path(t, u, v)
    banned = frozenset((min(a, b), max(a, b)) for a, b in zip(path, path[1:]))
    return TreeParsing(tuple(rooted_tree_at(t, w, banned) for w in path))


def glue_with_roots(p: TreeParsing):
    if len(p.trees) < 1:
        raise TreeError("nothing to glue")
    edges = []
    roots = []
    nxt = 0
    for rt in p.trees:
        roots.append(nxt)
        nxt = rt.materialize(edges, nxt)
    for a, b in zip(roots, roots[1:]):
        edges.append((a, b))
    if not edges:
        return Topology("tree", 1, ()), roots
    return build_tree(edges), roots


def glue(p: TreeParsing) -> Topology:
    """Concatenate rooted trees by joining consecutive roots with edges."""
    return glue_with_roots(p)[0]


# -- acceptance of radius-1 tree verifiers ------------------------------------------

def tree_accepted(t: Topology, v: LocalVerifier, advice=None, witness=False,
                  state_cap=500_000):
    """Does some width-matching assignment make every vertex accept?

    Leaf-to-root sweep: for every vertex and own certificate, the set of
    child-certificate multisets realizable by fully accepting subtrees; a
    parent certificate is feasible when some multiset plus the parent makes
    the vertex accept.
    """
    if v.radius != 1:
        raise TreeError("the feasibility sweep requires radius 1")
    n = t.n
    root = 0
    parent = [None] * n
    order = [root]
    seen = {root}
    for u in order:
        for w in t.neighbors(u):
            if w not in seen:
                seen.add(w)
                parent[w] = u
                order.append(w)
    children = [[] for _ in range(n)]
    for u in order[1:]:
        children[parent[u]].append(u)

    decide_cache = {}

    def dec(gamma, nbrs):
        key = (gamma, nbrs)
        hit = decide_cache.get(key)
        if hit is None:
            hit = v.decide_view(star_view(gamma, nbrs, advice=advice))
            decide_cache[key] = hit
        return hit

    achievable = {}   # (vertex, own cert) -> {sorted child-cert tuple: per-child picks}
    feas_cache = {}   # (vertex, parent cert) -> tuple of feasible own certs
    states = 0

    def feasible_certs(w, gamma):
        key = (w, gamma)
        hit = feas_cache.get(key)
        if hit is None:
            hit = tuple(
                x for x in v.center_candidates(t.degree(w))
                if any(dec(x, tuple(sorted(m + (gamma,))))
                       for m in achievable.get((w, x), ()))
            )
            feas_cache[key] = hit
        return hit

    for u in reversed(order):
        for gamma in v.center_candidates(t.degree(u)):
            sets = {(): ()}
            for w in children[u]:
                fw = feasible_certs(w, gamma)
                if not fw:
                    sets = {}
                    break
                new = {}
                for m, picks in sets.items():
                    for x in fw:
                        m2 = tuple(sorted(m + (x,)))
                        if m2 not in new:
                            new[m2] = picks + (x,)
                sets = new
                states += len(sets)
                if states > state_cap:
                    raise TreeError("feasibility sweep state cap exceeded")
            if sets:
                achievable[(u, gamma)] = sets

    hit = None
    for gamma in v.center_candidates(t.degree(root)):
        for m in achievable.get((root, gamma), ()):
            if dec(gamma, m):
                hit = (gamma, m)
                break
        if hit:
            break
    if not witness:
        return hit is not None
    if hit is None:
        return False, None

    # rebuild one accepting assignment top-down
    assignment = [None] * n
    gamma, m = hit
    assignment[root] = gamma

    def realize(u, own, m):
        picks = achievable[(u, own)][m]
        for w, x in zip(children[u], picks):
            assignment[w] = x
            mw = next(mm for mm in achievable[(w, x)]
                      if dec(x, tuple(sorted(mm + (own,)))))
            realize(w, x, mw)

    realize(root, gamma, m)
    return True, CertAssignment(v.width, tuple(assignment))


# -- caterpillar <-> labeled path -----------------------------------------------------

def caterpillar_to_path(g: Topology) -> Topology:
    """Central path labeled by pendant-leaf counts."""
    try:
        spine = g.central_path()
    except TopologyError as e:
        raise TreeError(f"not reducible: {e}")
    labels = [sum(1 for w in g.neighbors(u) if g.degree(w) == 1) for u in spine]
    return build_path(len(labels), labels=labels, sigma=max(labels) + 1)


def path_to_caterpillar(p: Topology) -> Topology:
    """Attach label-many pendant leaves to every path vertex."""
    if p.kind != PATH or p.labels is None:
        raise TreeError("need a labeled path")
    order = p.path_order()
    return build_caterpillar([p.labels[u] for u in order])
