"""Certification <-> automata bridge for paths, plus eventually periodic sets.

A radius-1 verifier on unlabeled paths turns into a unary NFA whose states
are pairs of certificates plus a source i and a sink f; a path on t vertices
admits an all-accept assignment exactly when the NFA has an accepting run of
t transitions.  Unary acceptance sets are eventually periodic; the canonical
(preperiod, period, residues) form is extracted by subset construction,
since a deterministic unary automaton is a path feeding a single cycle.
"""

from __future__ import annotations

import json
from collections import defaultdict
from dataclasses import dataclass
from typing import Iterable, Optional

import numpy as np

from .certify import CertificationError, LocalVerifier, PathTables, verifier_from_tables

UNARY_LETTER = 0
SUBSET_CAP = 1 << 20


class AutomataError(ValueError):
    pass


class PathNFA:
    """Nondeterministic finite automaton; unary when the alphabet is (0,)."""

    def __init__(self, states, initials, finals, transitions, alphabet=(UNARY_LETTER,)):
        self.states = frozenset(states)
        self.initials = frozenset(initials)
        self.finals = frozenset(finals)
        self.alphabet = tuple(alphabet)
        self._delta = {}
        for src, letter, dst in transitions:
            self._delta.setdefault(src, {}).setdefault(letter, set()).add(dst)
        self.transitions = frozenset(
            (s, l, d) for s, by in self._delta.items() for l, ds in by.items() for d in ds
        )
        self._lasso = None

    @property
    def n_states(self):
        return len(self.states)

    @property
    def unary(self):
        return self.alphabet == (UNARY_LETTER,)

    def step(self, frontier, letter):
        out = set()
        for s in frontier:
            out.update(self._delta.get(s, {}).get(letter, ()))
        return frozenset(out)

    def accepts_word(self, word) -> bool:
        frontier = self.initials
        for letter in word:
            frontier = self.step(frontier, letter)
            if not frontier:
                return False
        return bool(frontier & self.finals)

    # -- unary helpers -------------------------------------------------------

    def accepts_length(self, n: int) -> bool:
        if not self.unary:
            raise AutomataError("accepts_length requires a unary automaton")
        if n <= 2048:
            frontier = self.initials
            for _ in range(n):
                frontier = self.step(frontier, UNARY_LETTER)
                if not frontier:
                    return False
            return bool(frontier & self.finals)
        pre, cyc = self.unary_lasso()
        if n < len(pre):
            return pre[n]
        return cyc[(n - len(pre)) % len(cyc)]

    def lengths_up_to(self, n_max: int):
        """Boolean list: index t says whether some accepting run has t steps."""
        if not self.unary:
            raise AutomataError("lengths_up_to requires a unary automaton")
        flags = []
        frontier = self.initials
        for _ in range(n_max + 1):
            flags.append(bool(frontier & self.finals))
            frontier = self.step(frontier, UNARY_LETTER)
        return flags

    def unary_lasso(self):
        """Acceptance flags as (preperiod list, cycle list) via the subset walk."""
        if self._lasso is not None:
            return self._lasso
        if not self.unary:
            raise AutomataError("unary_lasso requires a unary automaton")
        seen = {}
        flags = []
        frontier = self.initials
        t = 0
        while frontier not in seen:
            if t > SUBSET_CAP:
                raise AutomataError(f"subset walk exceeded {SUBSET_CAP} states")
            seen[frontier] = t
            flags.append(bool(frontier & self.finals))
            frontier = self.step(frontier, UNARY_LETTER)
            t += 1
        start = seen[frontier]
        self._lasso = (flags[:start], flags[start:])
        return self._lasso

    # -- serialization ---------------------------------------------------------

    def to_json(self):
        idx = {s: i for i, s in enumerate(sorted(self.states, key=repr))}
        return json.dumps({
            "states": [repr(s) for s in sorted(self.states, key=repr)],
            "initial": sorted(idx[s] for s in self.initials),
            "final": sorted(idx[s] for s in self.finals),
            "alphabet": list(self.alphabet),
            "transitions": sorted(
                [idx[s], l, idx[d]] for s, l, d in self.transitions
            ),
        })

    @staticmethod
    def from_json(text):
        doc = json.loads(text)
        n = len(doc["states"])
        return PathNFA(
            range(n), doc["initial"], doc["final"],
            [(s, l, d) for s, l, d in doc["transitions"]],
            tuple(doc["alphabet"]),
        )


# -- translation: verifier -> unary NFA ----------------------------------------

def _cert_groups(v: LocalVerifier, advice=None):
    groups = defaultdict(list)
    for c in v.valid_certs(advice):
        key = v.cert_group(c, advice) if v.cert_group is not None else 0
        groups[key].append(c)
    return groups


def cert_to_nfa(v: LocalVerifier, advice=None) -> PathNFA:
    """States are certificate pairs plus i and f; a path on t vertices is
    accepted with width-k certificates iff the NFA has an accepting run of
    length t.  Pairs across incompatible certificate groups carry no
    transitions and are dropped."""
    if v.radius != 1:
        raise AutomataError("the pair construction requires radius 1")
    trans = []
    states = {"i", "f"}
    for group in _cert_groups(v, advice).values():
        for a in group:
            for b in group:
                pair = (a, b)
                states.add(pair)
                if v.begin_accepts(a, b, advice):
                    trans.append(("i", UNARY_LETTER, pair))
                if v.end_accepts(a, b, advice):
                    trans.append((pair, UNARY_LETTER, "f"))
                for c in v.middle_successors(a, b, advice):
                    states.add((b, c))
                    trans.append((pair, UNARY_LETTER, (b, c)))
    for c in v.valid_certs(advice):
        if v.isolated_accepts(c, advice):
            trans.append(("i", UNARY_LETTER, "f"))
            break
    return PathNFA(states, {"i"}, {"f"}, trans)


def cert_to_nfa_labeled(v: LocalVerifier, sigma: int, r: Optional[int] = None,
                        advice=None) -> PathNFA:
    """Automaton over the label alphabet accepting exactly the labeled paths
    of length >= 2r that admit an all-accept assignment.

    States are 2r-tuples of (certificate, label) pairs plus i, f and the
    intermediary chains needed to spell out the first and last r letters.
    Words shorter than 2r are out of scope here and handled by direct search.
    """
    if r is None:
        r = v.radius
    if r != v.radius:
        raise AutomataError("translation radius must match the verifier radius")
    from .topology import build_path
    from .views import view_at

    letters = range(sigma)
    window = 2 * r + 1

    def accepts_at(cs, ls, pos):
        t = build_path(window, labels=ls, sigma=sigma)
        return v.decide_view(view_at(t, pos, r, list(cs), advice=advice))

    # decision of the window center only depends on the window itself; cache
    memo_mid = {}
    memo_head = {}
    memo_tail = {}

    def mid_ok(cs, ls):
        key = (cs, ls)
        if key not in memo_mid:
            memo_mid[key] = accepts_at(cs, ls, r)
        return memo_mid[key]

    def head_ok(cs, ls):
        # vertices 0..r-1 of the window all accept; their views only reach
        # position 2r-1, so this is a function of the leading 2r-tuple
        key = (cs[:2 * r], ls[:2 * r])
        if key not in memo_head:
            t = build_path(2 * r, labels=ls[:2 * r], sigma=sigma)
            memo_head[key] = all(
                v.decide_view(view_at(t, i, r, list(cs[:2 * r]), advice=advice))
                for i in range(r)
            )
        return memo_head[key]

    def tail_ok(cs, ls):
        key = (cs[-2 * r:], ls[-2 * r:])
        if key not in memo_tail:
            t = build_path(2 * r, labels=ls[-2 * r:], sigma=sigma)
            memo_tail[key] = all(
                v.decide_view(view_at(t, i, r, list(cs[-2 * r:]), advice=advice))
                for i in range(r, 2 * r)
            )
        return memo_tail[key]

    states = {"i", "f"}
    trans = []

    def tuple_state(cs, ls):
        return tuple(zip(cs, ls))

    import itertools

    # certificates of an accepting view always share their group, so windows
    # may be enumerated group by group
    cert_pools = [g for g in _cert_groups(v, advice).values()]

    for pool in cert_pools:
        for ls in itertools.product(letters, repeat=window):
            for cs in itertools.product(pool, repeat=window):
                if mid_ok(cs, ls):
                    src = tuple_state(cs[:-1], ls[:-1])
                    dst = tuple_state(cs[1:], ls[1:])
                    states.add(src)
                    states.add(dst)
                    trans.append((src, ls[r], dst))

        for ls in itertools.product(letters, repeat=2 * r):
            for cs in itertools.product(pool, repeat=2 * r):
                state = tuple_state(cs, ls)
                if head_ok(cs, ls):
                    states.add(state)
                    prev = "i"
                    for j in range(r - 1):
                        mid = ("p", state, j)
                        states.add(mid)
                        trans.append((prev, ls[j], mid))
                        prev = mid
                    trans.append((prev, ls[r - 1], state))
                if tail_ok(cs, ls):
                    states.add(state)
                    prev = state
                    for j in range(r - 1):
                        mid = ("q", state, j)
                        states.add(mid)
                        trans.append((prev, ls[r + j], mid))
                        prev = mid
                    trans.append((prev, ls[2 * r - 1], "f"))

    return PathNFA(states, {"i"}, {"f"}, trans, tuple(letters))


# -- closure operations ---------------------------------------------------------

def _require_same_alphabet(a: PathNFA, b: PathNFA):
    if a.alphabet != b.alphabet:
        raise AutomataError("alphabet mismatch")


def nfa_union(a: PathNFA, b: PathNFA) -> PathNFA:
    _require_same_alphabet(a, b)
    states = [("A", s) for s in a.states] + [("B", s) for s in b.states]
    trans = [(("A", s), l, ("A", d)) for s, l, d in a.transitions]
    trans += [(("B", s), l, ("B", d)) for s, l, d in b.transitions]
    initials = [("A", s) for s in a.initials] + [("B", s) for s in b.initials]
    finals = [("A", s) for s in a.finals] + [("B", s) for s in b.finals]
    return PathNFA(states, initials, finals, trans, a.alphabet)


def nfa_intersection(a: PathNFA, b: PathNFA) -> PathNFA:
    _require_same_alphabet(a, b)
    from collections import deque
    initials = {(s, t) for s in a.initials for t in b.initials}
    states = set(initials)
    trans = []
    q = deque(initials)
    while q:
        (s, t) = q.popleft()
        for letter in a.alphabet:
            da = a._delta.get(s, {}).get(letter, ())
            db = b._delta.get(t, {}).get(letter, ())
            for s2 in da:
                for t2 in db:
                    trans.append(((s, t), letter, (s2, t2)))
                    if (s2, t2) not in states:
                        states.add((s2, t2))
                        q.append((s2, t2))
    finals = {(s, t) for (s, t) in states if s in a.finals and t in b.finals}
    return PathNFA(states, initials, finals, trans, a.alphabet)


def determinize(a: PathNFA) -> PathNFA:
    """Subset construction (complete: the empty subset is the sink)."""
    from collections import deque
    start = a.initials
    states = {start}
    trans = []
    q = deque([start])
    while q:
        sub = q.popleft()
        for letter in a.alphabet:
            nxt = a.step(sub, letter)
            trans.append((sub, letter, nxt))
            if nxt not in states:
                if len(states) >= SUBSET_CAP:
                    raise AutomataError(f"determinization exceeded {SUBSET_CAP} states")
                states.add(nxt)
                q.append(nxt)
    finals = {s for s in states if s & a.finals}
    return PathNFA(states, {start}, finals, trans, a.alphabet)


def nfa_complement(a: PathNFA) -> PathNFA:
    d = determinize(a)
    finals = d.states - d.finals
    return PathNFA(d.states, d.initials, finals, d.transitions, d.alphabet)


# -- eventually periodic sets ----------------------------------------------------

@dataclass(frozen=True)
class EventuallyPeriodicSet:
    """Canonical form: minimal period p, then minimal preperiod T for it."""

    preperiod: int
    explicit: frozenset   # accepted values below the preperiod
    period: int
    residues: frozenset   # accepted residues mod period, from the preperiod on

    def __post_init__(self):
        if self.period < 1:
            raise AutomataError("period must be >= 1")
        if any(x >= self.preperiod or x < 0 for x in self.explicit):
            raise AutomataError("explicit values must lie below the preperiod")
        if any(not (0 <= r < self.period) for r in self.residues):
            raise AutomataError("residues must lie in [0, period)")

    def member(self, n: int) -> bool:
        if n < self.preperiod:
            return n in self.explicit
        return (n % self.period) in self.residues

    def to_json(self):
        return json.dumps({
            "T": self.preperiod,
            "explicit": sorted(self.explicit),
            "p": self.period,
            "residues": sorted(self.residues),
        })

    @staticmethod
    def from_json(text):
        doc = json.loads(text)
        return EventuallyPeriodicSet(doc["T"], frozenset(doc["explicit"]),
                                     doc["p"], frozenset(doc["residues"]))


def eps_from_lasso(pre_flags, cycle_flags) -> EventuallyPeriodicSet:
    L, C = len(pre_flags), len(cycle_flags)

    def flag(t):
        return pre_flags[t] if t < L else cycle_flags[(t - L) % C]

    period = next(d for d in range(1, C + 1)
                  if C % d == 0
                  and all(cycle_flags[i] == cycle_flags[(i + d) % C] for i in range(C)))
    T = L
    while T > 0 and flag(T - 1) == flag(T - 1 + period):
        T -= 1
    explicit = frozenset(t for t in range(T) if flag(t))
    base = max(T, L)
    residues = frozenset(
        r for r in range(period)
        if flag(base + ((r - base) % period))
    )
    return EventuallyPeriodicSet(T, explicit, period, residues)


def determinize_lasso(a: PathNFA) -> EventuallyPeriodicSet:
    """Canonical eventually periodic form of a unary automaton's length set."""
    pre, cyc = a.unary_lasso()
    return eps_from_lasso(pre, cyc)


def eps_membership(e: EventuallyPeriodicSet, n: int) -> bool:
    return e.member(n)


def eps_equal_on_window(e1, e2, n_max: int) -> bool:
    return all(e1.member(n) == e2.member(n) for n in range(n_max + 1))


def periodicity_falsifier(member_flags) -> Optional[tuple]:
    """Least (T, p), lexicographically, that is consistent with the window.

    A pair fits when T + 2p <= N, the window is p-periodic from T on, and at
    least one member survives beyond T (otherwise truncation would make any
    finite window look eventually periodic).  Returns None when no pair fits.
    """
    flags = np.asarray(member_flags, dtype=bool)
    n = len(flags) - 1
    if n < 1:
        raise AutomataError("window too small")
    # suffix_any[t]: some member at index >= t
    suffix_any = np.concatenate([np.logical_or.accumulate(flags[::-1])[::-1], [False]])
    t_star = None
    for p in range(1, n // 2 + 1):
        diff = flags[:-p] != flags[p:]
        nz = np.nonzero(diff)[0]
        t_min = int(nz[-1]) + 1 if nz.size else 0
        if t_min + 2 * p > n or not suffix_any[t_min]:
            continue
        if t_star is None or t_min < t_star:
            t_star = t_min
    if t_star is None:
        return None
    # smallest feasible preperiod first, then the smallest period valid there
    for p in range(1, (n - t_star) // 2 + 1):
        if not (flags[t_star:-p] != flags[t_star + p:]).any():
            return (t_star, p)
    raise AssertionError("unreachable: a valid period exists by construction")


# -- tiny-verifier enumeration ----------------------------------------------------

def tiny_verifier_from_code(code: int, k_bits: int) -> LocalVerifier:
    """Decode one verifier of the exhaustive width<=1 family.

    Layout for k=1 (18 bits): isolated(2) | begin(4) | middle(8) | end(4),
    each block in lexicographic key order.  For k=0 each block has one key.
    """
    certs = list(range(1 << k_bits))
    nc = len(certs)
    iso_bits, begin_bits, mid_bits = nc, nc * nc, nc ** 3
    iso = {c: bool((code >> c) & 1) for c in certs}
    off = iso_bits
    begin = {}
    for i, (a, b) in enumerate((a, b) for a in certs for b in certs):
        begin[(a, b)] = bool((code >> (off + i)) & 1)
    off += begin_bits
    middle = {}
    for i, (a, b, c) in enumerate((a, b, c) for a in certs for b in certs for c in certs):
        middle[(a, b, c)] = bool((code >> (off + i)) & 1)
    off += mid_bits
    end = {}
    for i, (a, b) in enumerate((a, b) for a in certs for b in certs):
        end[(a, b)] = bool((code >> (off + i)) & 1)
    return verifier_from_tables(PathTables(k_bits, iso, begin, middle, end),
                                name=f"tiny{k_bits}:{code}")


def tiny_code_count(k_bits: int) -> int:
    nc = 1 << k_bits
    return 1 << (nc + nc * nc + nc ** 3 + nc * nc)


def enumerate_tiny_verifiers(k_bits: int = 1):
    """All decision tables of width <= 1 radius-1 path verifiers, in code order."""
    if k_bits > 1:
        raise AutomataError("the exhaustive family is limited to k_bits <= 1")
    for code in range(tiny_code_count(k_bits)):
        yield tiny_verifier_from_code(code, k_bits)


def _tiny_lasso(code: int, k_bits: int):
    """Acceptance flags of the coded verifier as (pre, cycle) over run lengths.

    Pure bit twiddling on pair masks; used to keep the 2^18 sweep fast.
    """
    nc = 1 << k_bits
    npairs = nc * nc
    iso_bits, begin_bits, mid_bits = nc, npairs, nc ** 3
    iso_any = (code & ((1 << iso_bits) - 1)) != 0
    begin_mask = (code >> iso_bits) & ((1 << begin_bits) - 1)
    mid = (code >> (iso_bits + begin_bits)) & ((1 << mid_bits) - 1)
    end_mask = (code >> (iso_bits + begin_bits + mid_bits)) & ((1 << npairs) - 1)
    # pair (a,b) has index a*nc+b; successor pairs of (a,b) are (b,c)
    succ = [0] * npairs
    for a in range(nc):
        for b in range(nc):
            m = 0
            for c in range(nc):
                if (mid >> ((a * nc + b) * nc + c)) & 1:
                    m |= 1 << (b * nc + c)
            succ[a * nc + b] = m

    def step(mask):
        out = 0
        while mask:
            low = mask & -mask
            out |= succ[low.bit_length() - 1]
            mask ^= low
        return out

    # accept(1) = isolated; accept(t>=2) = some begin-pair reaches an end-pair
    # in t-2 middle steps
    seen = {}
    flags = [False, iso_any]
    frontier = begin_mask
    t = 0
    while frontier not in seen:
        seen[frontier] = t
        flags.append(bool(frontier & end_mask))
        frontier = step(frontier)
        t += 1
    start = seen[frontier] + 2
    return flags[:start], flags[start:]


def lower_bound_oracle(target_flags, k_bits: int = 1):
    """Search the full width<=k_bits family for a verifier whose accepted
    length set equals the target on the window; None after full enumeration.

    This enumeration is the desk-scale stand-in for a lower bound: no match
    means no verifier with that many certificates recognizes the window.
    """
    flags = list(bool(x) for x in target_flags)
    n = len(flags) - 1
    if n < 20:
        raise AutomataError("window too small to be conclusive (need N >= 20)")
    for code in range(tiny_code_count(k_bits)):
        pre, cyc = _tiny_lasso(code, k_bits)

        def flag(t, pre=pre, cyc=cyc):
            return pre[t] if t < len(pre) else cyc[(t - len(pre)) % len(cyc)]

        horizon = min(n, len(pre) + len(cyc))
        if all(flags[t] == flag(t) for t in range(horizon + 1)):
            if all(flags[t] == flag(t) for t in range(n + 1)):
                return tiny_verifier_from_code(code, k_bits)
    return None


def min_cert_size_for_length(scheme, n: int, k_max: int, advice=None) -> Optional[int]:
    """Least width k <= k_max whose family member accepts the n-path."""
    from .certify import exists_accepting_assignment
    from .topology import build_path
    t = build_path(n)
    for k in range(k_max + 1):
        if exists_accepting_assignment(t, scheme.verifier(k), advice=advice):
            return k
    return None
