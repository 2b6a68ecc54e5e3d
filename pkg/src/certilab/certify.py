"""The certification model: certificate assignments, local verifiers, schemes.

A verifier of width k and radius r maps canonical radius-r views to
accept/reject.  Completeness asks for one all-accept assignment on every
correct instance; soundness asks that incorrect instances make some vertex
reject under every assignment of every width.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Callable, Optional

from .topology import CATERPILLAR, COMPATIBLE, CYCLE, PATH, TREE, Topology
from .views import View, endpoint_view, isolated_view, middle_view, view_at


class CertificationError(ValueError):
    pass


@dataclass(frozen=True)
class CertAssignment:
    """Per-vertex certificates in [0, 2^width)."""

    width: int
    values: tuple

    def __post_init__(self):
        if self.width < 0:
            raise CertificationError("width must be >= 0")
        cap = 1 << self.width
        for c in self.values:
            if not (0 <= c < cap):
                raise CertificationError(f"certificate {c} does not fit width {self.width}")

    @property
    def n(self):
        return len(self.values)

    def permuted(self, perm):
        inv = [0] * self.n
        for old, new in enumerate(perm):
            inv[new] = old
        return CertAssignment(self.width, tuple(self.values[inv[i]] for i in range(self.n)))


@dataclass(frozen=True)
class PathTables:
    """Compiled decision tables of a radius-1 verifier on unlabeled paths.

    Keys mirror the four local situations: isolated vertex, first endpoint,
    interior vertex (read left to right), last endpoint.  View-based
    verifiers always satisfy end[(a,b)] == begin[(b,a)] and a symmetric
    middle; raw tables may be oriented, in which case verification reads the
    path in its intrinsic endpoint-to-endpoint order.
    """

    width: int
    isolated: dict
    begin: dict    # (own cert, neighbor cert) -> bool
    middle: dict   # (left, own, right) -> bool
    end: dict      # (neighbor cert, own cert) -> bool

    def to_json(self):
        return json.dumps({
            "width": self.width,
            "radius": 1,
            "class": PATH,
            "accepted_views": {
                "isolated": sorted(c for c, ok in self.isolated.items() if ok),
                "begin": sorted(list(k) for k, ok in self.begin.items() if ok),
                "middle": sorted(list(k) for k, ok in self.middle.items() if ok),
                "end": sorted(list(k) for k, ok in self.end.items() if ok),
            },
        })


class LocalVerifier:
    """Finite decision procedure over radius-r views for one certificate width.

    Either ``decide`` (a total predicate on views of the promised class) or
    explicit ``tables`` must be given.  Optional hooks let wide structured
    verifiers stay tractable:

    - valid_certs: certificate values that can ever appear in an accepting
      view (everything else is rejected on sight),
    - cert_group: key such that vertices of an accepting view always share
      the group of their neighbors (splits automaton construction),
    - center_candidates(degree): plausible own-certs for a vertex of that
      degree (prunes the tree feasibility sweep),
    - exists_hook(topology): closed-form accepting-assignment decision,
    - bulk_path_decide(prev, cur, nxt, pos_mask): vectorized decisions on
      unlabeled paths.
    """

    def __init__(self, width, radius, klass, decide=None, tables=None, name="",
                 valid_certs=None, cert_group=None, center_candidates=None,
                 exists_hook=None, bulk_path_decide=None, middle_successors_fn=None,
                 valid_certs_advice_fn=None, advice_sensitive=False):
        if decide is None and tables is None:
            raise CertificationError("a verifier needs a decide predicate or tables")
        self.width = width
        self.radius = radius
        self.klass = klass
        self.decide = decide
        self.name = name
        self._tables = tables
        self._tables_cache = {}
        self._memo = {}
        self._valid_certs = valid_certs
        self.cert_group = cert_group
        self._center_candidates = center_candidates
        self.exists_hook = exists_hook
        self.bulk_path_decide = bulk_path_decide
        self.middle_successors_fn = middle_successors_fn
        self.valid_certs_advice_fn = valid_certs_advice_fn
        self.advice_sensitive = advice_sensitive

    # -- decisions -----------------------------------------------------------

    def decide_view(self, view: View) -> bool:
        if self.decide is None:
            return self._decide_from_tables(view)
        key = view.canonical()
        hit = self._memo.get(key)
        if hit is None:
            hit = bool(self.decide(view))
            self._memo[key] = hit
        return hit

    def _decide_from_tables(self, view):
        # oriented tables only cover path shapes; views do not carry an
        # orientation, so fall back to the symmetrized reading
        t = self._tables
        deg = view.degree(view.center)
        if deg == 0:
            return t.isolated.get(view.cert(view.center), False)
        if deg == 1:
            own = view.cert(view.center)
            nb = view.cert(view.neighbors(view.center)[0])
            return t.begin.get((own, nb), False) or t.end.get((nb, own), False)
        if deg == 2:
            own = view.cert(view.center)
            a, b = (view.cert(w) for w in view.neighbors(view.center))
            return t.middle.get((a, own, b), False) or t.middle.get((b, own, a), False)
        return False

    def valid_certs(self, advice=None):
        if self.valid_certs_advice_fn is not None and advice is not None:
            return list(self.valid_certs_advice_fn(advice))
        if self._valid_certs is not None:
            return list(self._valid_certs)
        return list(range(1 << self.width))

    def center_candidates(self, degree):
        if self._center_candidates is not None:
            return list(self._center_candidates(degree))
        return self.valid_certs()

    # -- compiled path tables -------------------------------------------------

    def path_tables(self, advice=None) -> PathTables:
        """Tables for radius-1 unlabeled path verification (lazily compiled)."""
        if self._tables is not None and not self.advice_sensitive:
            return self._tables
        key = advice
        cached = self._tables_cache.get(key)
        if cached is not None:
            return cached
        if self.radius != 1:
            raise CertificationError("path tables require radius 1")
        certs = self.valid_certs(advice)
        iso = {c: self.decide_view(isolated_view(c, advice=advice)) for c in certs}
        begin = {}
        end = {}
        for a in certs:
            for b in certs:
                d = self.decide_view(endpoint_view(a, b, advice=advice))
                begin[(a, b)] = d
                end[(b, a)] = d
        middle = {}
        for b in certs:
            for a in certs:
                for c in certs:
                    if (a, b, c) in middle:
                        continue
                    d = self.decide_view(middle_view(a, b, c, advice=advice))
                    middle[(a, b, c)] = d
                    middle[(c, b, a)] = d
        tables = PathTables(self.width, iso, begin, middle, end)
        self._tables_cache[key] = tables
        return tables

    # -- local decision accessors (used by the automata translations) ---------

    def isolated_accepts(self, c, advice=None):
        if self._tables is not None:
            return self._tables.isolated.get(c, False)
        return self.decide_view(isolated_view(c, advice=advice))

    def begin_accepts(self, own, nbr, advice=None):
        if self._tables is not None:
            return self._tables.begin.get((own, nbr), False)
        return self.decide_view(endpoint_view(own, nbr, advice=advice))

    def end_accepts(self, nbr, own, advice=None):
        if self._tables is not None:
            return self._tables.end.get((nbr, own), False)
        return self.decide_view(endpoint_view(own, nbr, advice=advice))

    def middle_accepts(self, a, b, c, advice=None):
        if self._tables is not None:
            return self._tables.middle.get((a, b, c), False)
        return self.decide_view(middle_view(a, b, c, advice=advice))

    def middle_successors(self, a, b, advice=None):
        """Certificates c such that a degree-2 vertex (a, b, c) accepts.

        Structured verifiers can supply middle_successors_fn to avoid the
        scan over all valid certificates.
        """
        if self.middle_successors_fn is not None:
            return list(self.middle_successors_fn(a, b, advice))
        group = None
        if self.cert_group is not None:
            group = self.cert_group(b, advice)
        out = []
        for c in self.valid_certs(advice):
            if group is not None and self.cert_group(c, advice) != group:
                continue
            if self.middle_accepts(a, b, c, advice):
                out.append(c)
        return out


def verifier_from_tables(tables: PathTables, name="") -> LocalVerifier:
    return LocalVerifier(tables.width, 1, PATH, tables=tables, name=name,
                         valid_certs=sorted(tables.isolated))


# -- running a verification ---------------------------------------------------

@dataclass(frozen=True)
class VerificationResult:
    globally_accepted: bool
    rejecting: tuple

    def __bool__(self):
        return self.globally_accepted


def run_verification(t: Topology, c: CertAssignment, v: LocalVerifier,
                     advice=None, show_ids=False) -> VerificationResult:
    """Evaluate every vertex; globally accepted iff nobody rejects."""
    if v.width != c.width:
        raise CertificationError(f"verifier width {v.width} != certificate width {c.width}")
    if t.kind not in COMPATIBLE[v.klass]:
        raise CertificationError(f"{t.kind} instance given to a {v.klass} verifier")
    if c.n != t.n:
        raise CertificationError("assignment size mismatch")

    if (v._tables is not None and v.radius == 1 and t.kind == PATH
            and t.labels is None and t.ids is None):
        return _run_path_tables(t, c, v.path_tables(advice))

    if (v.bulk_path_decide is not None and t.kind == PATH and t.labels is None
            and t.ids is None and v.radius == 1 and t.n >= 2):
        order = t.path_order()
        rejecting = v.bulk_path_decide([c.values[u] for u in order], advice)
        bad = tuple(order[i] for i in rejecting)
        return VerificationResult(not bad, bad)

    rejecting = []
    for u in range(t.n):
        view = view_at(t, u, v.radius, c.values, show_ids=show_ids, advice=advice)
        if not v.decide_view(view):
            rejecting.append(u)
    return VerificationResult(not rejecting, tuple(rejecting))


def _run_path_tables(t, c, tables):
    order = t.path_order()
    certs = [c.values[u] for u in order]
    n = len(certs)
    rejecting = []
    if n == 1:
        if not tables.isolated.get(certs[0], False):
            rejecting.append(order[0])
    else:
        if not tables.begin.get((certs[0], certs[1]), False):
            rejecting.append(order[0])
        for i in range(1, n - 1):
            if not tables.middle.get((certs[i - 1], certs[i], certs[i + 1]), False):
                rejecting.append(order[i])
        if not tables.end.get((certs[-2], certs[-1]), False):
            rejecting.append(order[-1])
    return VerificationResult(not rejecting, tuple(sorted(rejecting)))


# -- schemes -------------------------------------------------------------------

@dataclass
class Scheme:
    """A certification scheme: verifier family plus an honest prover.

    ``in_property`` is the ground-truth membership oracle, used by tests and
    sweeps only, never by the verifiers themselves.
    """

    name: str
    klass: str
    radius: int
    family: Callable[[int], LocalVerifier]
    prover: Callable
    in_property: Callable[[Topology], bool]
    declared_size_bound: str = ""
    id_mode: str = "anonymous"
    needs_advice: bool = False
    positives_gen: Optional[Callable] = None   # (rng, count) -> [(topology, advice)]
    negatives_gen: Optional[Callable] = None
    _family_cache: dict = field(default_factory=dict, repr=False)

    def verifier(self, k: int) -> LocalVerifier:
        if k not in self._family_cache:
            self._family_cache[k] = self.family(k)
        return self._family_cache[k]

    def prove(self, t: Topology, advice=None):
        if self.needs_advice:
            k, certs = self.prover(t, advice)
        else:
            k, certs = self.prover(t)
        if certs.width != k:
            raise CertificationError("prover output width mismatch")
        return k, certs


def check_completeness(s: Scheme, t: Topology, advice=None) -> bool:
    """Does the prover's assignment make every vertex accept?  The instance
    must satisfy the property."""
    if not s.in_property(t):
        raise CertificationError("checkCompleteness called on an out-of-property instance")
    k, certs = s.prove(t, advice)
    return bool(run_verification(t, certs, s.verifier(k), advice=advice))


def measured_width(s: Scheme, t: Topology, advice=None) -> int:
    k, _ = s.prove(t, advice)
    return k


# -- existence of accepting assignments ----------------------------------------

def exists_accepting_assignment(t: Topology, v: LocalVerifier, advice=None) -> bool:
    """Is there any width-matching assignment that every vertex accepts?

    Dispatch: paths go through the automaton translation, cycles through the
    certificate walk-graph, radius-1 trees through the feasibility sweep.
    Verifier-supplied closed forms (exists_hook) win when present; the
    pruned search remains available for cross-validation.
    """
    if v.exists_hook is not None:
        return bool(v.exists_hook(t))
    if t.kind == PATH and t.labels is None and v.radius == 1:
        from .automata import cert_to_nfa
        return cert_to_nfa(v, advice=advice).accepts_length(t.n)
    if t.kind == PATH and t.labels is not None:
        from .automata import cert_to_nfa_labeled
        word = tuple(t.labels[u] for u in t.path_order())
        if t.n >= 2 * v.radius:
            nfa = cert_to_nfa_labeled(v, t.sigma, v.radius, advice=advice)
            return nfa.accepts_word(word) or nfa.accepts_word(word[::-1])
        return exists_accepting_backtracking(t, v, advice=advice)
    if t.kind == CYCLE and v.radius == 1:
        from .walks import build_cert_graph, closed_walk_exists
        return closed_walk_exists(build_cert_graph(v, advice=advice), t.n)
    if t.kind in (TREE, CATERPILLAR) and v.radius == 1 and t.labels is None:
        from .trees import tree_accepted
        return tree_accepted(t, v, advice=advice)
    return exists_accepting_backtracking(t, v, advice=advice)


def exists_accepting_backtracking(t: Topology, v: LocalVerifier, advice=None,
                                  node_cap=5_000_000, witness=False):
    """Depth-first search over assignments, pruning on completed views.

    This is the independent oracle: it never touches the automaton or
    walk-graph machinery, only the verifier's local decisions.  Verifiers
    defined by oriented tables are read along the path's intrinsic order
    (existence is invariant under reversing that order).
    """
    if (v._tables is not None and t.kind == PATH and t.labels is None
            and v.radius == 1):
        return _oriented_path_search(t, v._tables, v.width, witness)
    n = t.n
    certs = v.valid_certs(advice)
    r = v.radius
    balls = []
    for u in range(n):
        dist = t.distances_from(u)
        balls.append([w for w in range(n) if dist[w] <= r])
    # vertex u's view is decidable once every vertex of its ball is assigned;
    # with assignment order 0..n-1 that happens at step max(ball)
    ready_at = [[] for _ in range(n)]
    for u in range(n):
        ready_at[max(balls[u])].append(u)

    assignment = [None] * n
    nodes = 0

    def decide(u):
        view = view_at(t, u, r, {w: assignment[w] for w in balls[u]}, advice=advice)
        return v.decide_view(view)

    def rec(j):
        nonlocal nodes
        if j == n:
            return True
        for cval in certs:
            nodes += 1
            if nodes > node_cap:
                raise CertificationError("backtracking node cap exceeded")
            assignment[j] = cval
            if all(decide(u) for u in ready_at[j]):
                if rec(j + 1):
                    return True
        assignment[j] = None
        return False

    found = rec(0)
    if witness:
        return (found, CertAssignment(v.width, tuple(assignment)) if found else None)
    return found


def _oriented_path_search(t, tables, width, witness):
    certs = sorted(tables.isolated)
    order = t.path_order()
    n = t.n
    if n == 1:
        hit = next((c for c in certs if tables.isolated.get(c, False)), None)
        found = hit is not None
        if witness:
            return (found, CertAssignment(width, (hit,)) if found else None)
        return found
    seq = [None] * n

    def rec(j):
        for c in certs:
            seq[j] = c
            if j >= 1:
                if j == 1:
                    if not tables.begin.get((seq[0], seq[1]), False):
                        continue
                elif not tables.middle.get((seq[j - 2], seq[j - 1], seq[j]), False):
                    continue
            if j == n - 1:
                if tables.end.get((seq[n - 2], seq[n - 1]), False):
                    return True
            elif rec(j + 1):
                return True
        seq[j] = None
        return False

    found = rec(0)
    if witness:
        if not found:
            return False, None
        values = [0] * n
        for pos, u in enumerate(order):
            values[u] = seq[pos]
        return True, CertAssignment(width, tuple(values))
    return found


# -- soundness sweeps ------------------------------------------------------------

@dataclass
class SweepRow:
    instance_id: str
    n: int
    k: int
    accepting_exists: bool


@dataclass
class SoundnessReport:
    k_max: int
    rows: list

    @property
    def violations(self):
        return [r for r in self.rows if r.accepting_exists]

    @property
    def sound(self):
        return not self.violations

    def to_csv(self):
        lines = ["instance_id,n,k,accepting_exists"]
        for r in self.rows:
            lines.append(f"{r.instance_id},{r.n},{r.k},{int(r.accepting_exists)}")
        lines.append(f"# soundness certified up to k_max={self.k_max} only")
        return "\n".join(lines) + "\n"


def soundness_sweep(s: Scheme, instances, k_max: int, advice_fn=None) -> SoundnessReport:
    """Check that no width <= k_max admits an accepting assignment on any of
    the given out-of-property instances.  The unbounded width quantifier of
    the model is certified only up to k_max; the report says so."""
    rows = []
    for idx, t in enumerate(instances):
        if s.in_property(t):
            raise CertificationError("soundnessSweep expects out-of-property instances")
        advice = advice_fn(t) if advice_fn is not None else None
        for k in range(k_max + 1):
            ok = exists_accepting_assignment(t, s.verifier(k), advice=advice)
            if ok:
                rows.append(SweepRow(f"inst{idx}", t.n, k, True))
    return SoundnessReport(k_max, rows)
