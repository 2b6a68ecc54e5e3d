"""Radius-r views and their canonical, isomorphism-invariant encodings.

A view contains the vertices at distance <= r from the center and the edges
with at least one endpoint at distance <= r-1.  The center sees its own
identifier; other identifiers are hidden unless the run sets show_ids.

Views arising in the four supported families are either acyclic (a BFS tree
rooted at the center) or wrap around a whole small cycle; both shapes get a
deterministic canonical encoding so verifier tables can key on views.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from typing import Optional

from .topology import Topology


class ViewError(ValueError):
    pass


@dataclass(frozen=True)
class View:
    """What one vertex sees: a local subgraph with certificates attached."""

    center: int
    radius: int
    vertices: tuple            # original vertex indices, BFS order from center
    edges: tuple               # pairs of original indices, sorted
    dist: dict                 # original index -> distance from center
    certs: dict                # original index -> certificate
    labels: Optional[dict] = None
    center_id: Optional[int] = None
    ids: Optional[dict] = None  # only populated when the run shows all ids
    advice: Optional[int] = None  # globally known value (e.g. n or its estimate)

    def degree(self, v):
        return sum(1 for e in self.edges if v in e)

    def neighbors(self, v):
        return [a if b == v else b for a, b in self.edges if v in (a, b)]

    def cert(self, v):
        return self.certs[v]

    def label(self, v):
        return None if self.labels is None else self.labels.get(v)

    # -- canonical encoding -------------------------------------------------

    def _annot(self, v):
        ann = [self.certs.get(v)]
        if self.labels is not None:
            ann.append(self.labels.get(v))
        if self.ids is not None:
            ann.append(self.ids.get(v))
        elif v == self.center and self.center_id is not None:
            ann.append(self.center_id)
        return tuple(ann)

    def canonical(self):
        """Hashable encoding equal across isomorphic views (center fixed)."""
        nbr = {v: [] for v in self.vertices}
        for a, b in self.edges:
            nbr[a].append(b)
            nbr[b].append(a)
        if len(self.edges) < len(self.vertices):
            # acyclic: BFS tree below the center; children sorted recursively
            def enc(v, parent):
                kids = sorted(enc(w, v) for w in nbr[v] if w != parent)
                return (self._annot(v), tuple(kids))
            body = ("t", enc(self.center, None))
        else:
            # the view wraps a whole cycle; rotation is fixed by the center,
            # reflection resolved by taking the smaller direction
            order = [self.center]
            prev = None
            while True:
                cands = [w for w in nbr[order[-1]] if w != prev]
                nxt = cands[0]
                if nxt == self.center:
                    break
                prev = order[-1]
                order.append(nxt)
            fwd = tuple(self._annot(v) for v in order)
            bwd = tuple(self._annot(v) for v in [order[0]] + order[:0:-1])
            body = ("c", min(fwd, bwd))
        return (body, self.advice)


def view_at(t: Topology, v: int, r: int, certs, *, show_ids: bool = False,
            advice: Optional[int] = None) -> View:
    """The §-defined view: vertices within distance r, edges with an endpoint
    within r-1, certificates/labels/ids restricted accordingly."""
    if not (0 <= v < t.n):
        raise ViewError(f"vertex {v} not in topology")
    if r < 1:
        raise ViewError("radius must be >= 1")
    dist = {v: 0}
    order = [v]
    q = deque([v])
    while q:
        u = q.popleft()
        if dist[u] == r:
            continue
        for w in t.neighbors(u):
            if w not in dist:
                dist[w] = dist[u] + 1
                order.append(w)
                q.append(w)
    vs = set(order)
    edges = tuple(sorted(
        (a, b) for a, b in t.edges
        if a in vs and b in vs and (dist[a] <= r - 1 or dist[b] <= r - 1)
    ))
    cert_of = certs if isinstance(certs, dict) else {u: certs[u] for u in order}
    return View(
        center=v,
        radius=r,
        vertices=tuple(order),
        edges=edges,
        dist=dist,
        certs={u: cert_of[u] for u in order},
        labels=None if t.labels is None else {u: t.labels[u] for u in order},
        center_id=t.vertex_id(v),
        ids=None if (not show_ids or t.ids is None) else {u: t.ids[u] for u in order},
        advice=advice,
    )


# -- synthetic views ---------------------------------------------------------
#
# The automata translations evaluate a verifier on all possible local
# configurations without materializing host topologies.  These builders
# produce View objects bit-identical (canonically) to what view_at would
# extract from an actual path or cycle.

def isolated_view(cert, label=None, advice=None):
    labels = None if label is None else {0: label}
    return View(0, 1, (0,), (), {0: 0}, {0: cert}, labels, None, None, advice)


def endpoint_view(cert, nbr_cert, label=None, nbr_label=None, advice=None):
    """Degree-1 vertex on a path: center 0 with single neighbor 1."""
    labels = None if label is None and nbr_label is None else {0: label, 1: nbr_label}
    return View(0, 1, (0, 1), ((0, 1),), {0: 0, 1: 1},
                {0: cert, 1: nbr_cert}, labels, None, None, advice)


def middle_view(left_cert, cert, right_cert, left_label=None, label=None,
                right_label=None, advice=None):
    """Degree-2 vertex at radius 1 (path interior or cycle vertex, n >= 3)."""
    if left_label is None and label is None and right_label is None:
        labels = None
    else:
        labels = {0: label, 1: left_label, 2: right_label}
    return View(0, 1, (0, 1, 2), ((0, 1), (0, 2)), {0: 0, 1: 1, 2: 1},
                {0: cert, 1: left_cert, 2: right_cert}, labels, None, None, advice)


def star_view(cert, nbr_certs, advice=None):
    """Radius-1 view of a vertex with the given neighbor certificates."""
    nbr_certs = tuple(nbr_certs)
    k = len(nbr_certs)
    certs = {0: cert}
    certs.update({i + 1: c for i, c in enumerate(nbr_certs)})
    return View(0, 1, tuple(range(k + 1)), tuple((0, i + 1) for i in range(k)),
                {0: 0, **{i + 1: 1 for i in range(k)}}, certs, None, None, None, advice)


def path_segment_view(certs, labels, pos, r, advice=None):
    """Radius-r view of position pos on a concrete path with these certs."""
    from .topology import build_path
    sigma = None
    if labels is not None:
        sigma = max(labels) + 1
    t = build_path(len(certs), labels=labels, sigma=sigma)
    return view_at(t, pos, r, list(certs), advice=advice)
