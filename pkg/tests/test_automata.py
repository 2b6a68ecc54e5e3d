import itertools
import random

import pytest

from certilab.automata import (AutomataError, EventuallyPeriodicSet, PathNFA,
                               cert_to_nfa, cert_to_nfa_labeled, determinize,
                               determinize_lasso, enumerate_tiny_verifiers,
                               eps_equal_on_window, eps_from_lasso,
                               eps_membership, lower_bound_oracle,
                               min_cert_size_for_length, nfa_complement,
                               nfa_intersection, nfa_union,
                               periodicity_falsifier, tiny_code_count,
                               tiny_verifier_from_code, _tiny_lasso)
from certilab.certify import (LocalVerifier, exists_accepting_backtracking)
from certilab.schemes import mod_counter_scheme
from certilab.topology import build_path
from certilab import arith
from conftest import hashed_verifier, mod3_verifier

FIG1_TRANSITIONS = {
    ("i", (0, 1)), ("i", (2, 1)),
    ((0, 1), (1, 2)), ((1, 2), (2, 0)), ((2, 0), (0, 1)),
    ((2, 1), (1, 0)), ((1, 0), (0, 2)), ((0, 2), (2, 1)),
    ((1, 2), "f"), ((1, 0), "f"),
}


def test_fig1_transition_set():
    nfa = cert_to_nfa(mod3_verifier())
    assert {(s, d) for s, _, d in nfa.transitions} == FIG1_TRANSITIONS


def test_fig1_lasso():
    eps = determinize_lasso(cert_to_nfa(mod3_verifier()))
    assert eps.period == 3 and set(eps.residues) == {0}
    assert not eps.member(0)
    assert all(eps.member(n) == (n % 3 == 0 and n > 0) for n in range(1, 40))


def test_all_rejecting_empty_language():
    v = LocalVerifier(1, 1, "path", decide=lambda view: False)
    nfa = cert_to_nfa(v)
    assert not any(nfa.accepts_length(n) for n in range(30))


def test_translation_matches_backtracking_random(rng):
    for seed in range(15):
        v = hashed_verifier(seed, 1)
        nfa = cert_to_nfa(v)
        flags = nfa.lengths_up_to(20)
        for n in range(1, 21):
            assert flags[n] == exists_accepting_backtracking(build_path(n), v), \
                (seed, n)


def test_run_length_semantics():
    # a path on t vertices <-> an accepting run with t transitions
    v = mod3_verifier()
    nfa = cert_to_nfa(v)
    assert nfa.accepts_length(6) and not nfa.accepts_length(7)
    assert not nfa.accepts_length(0)


# -- closure --------------------------------------------------------------------

def _mod_nfa(m):
    return cert_to_nfa(mod_counter_scheme(0, m).verifier(4))


def test_union_language_and_size():
    a, b = _mod_nfa(2), _mod_nfa(3)
    u = nfa_union(a, b)
    assert u.n_states == a.n_states + b.n_states
    for n in range(61):
        want = (n >= 1 and (n % 2 == 0 or n % 3 == 0))
        assert u.accepts_length(n) == want, n


def test_union_lasso_residues():
    u = nfa_union(_mod_nfa(2), _mod_nfa(3))
    eps = determinize_lasso(u)
    assert eps.period == 6 and set(eps.residues) == {0, 2, 3, 4}


def test_intersection_with_complement_empty():
    a = _mod_nfa(3)
    inter = nfa_intersection(a, nfa_complement(a))
    assert not any(inter.accepts_length(n) for n in range(60))
    assert inter.n_states <= a.n_states * nfa_complement(a).n_states


def test_complement_of_empty():
    empty = PathNFA({"i", "f"}, {"i"}, {"f"}, [])
    comp = nfa_complement(empty)
    assert all(comp.accepts_length(n) for n in range(40))
    assert comp.n_states <= 2 ** empty.n_states


def test_closure_bounds_random(rng):
    # random small unary automata: state-count bounds of the closure ops
    def rand_nfa(seed):
        r = random.Random(seed)
        ns = r.randrange(2, 8)
        states = list(range(ns))
        trans = [(a, 0, b) for a in states for b in states if r.random() < 0.3]
        finals = {s for s in states if r.random() < 0.3}
        return PathNFA(states, {0}, finals, trans)

    for seed in range(25):
        a, b = rand_nfa(seed), rand_nfa(1000 + seed)
        u = nfa_union(a, b)
        i = nfa_intersection(a, b)
        c = nfa_complement(a)
        assert u.n_states <= a.n_states + b.n_states
        assert i.n_states <= a.n_states * b.n_states
        assert c.n_states <= 2 ** a.n_states
        for n in range(40):
            assert u.accepts_length(n) == (a.accepts_length(n) or b.accepts_length(n))
            assert i.accepts_length(n) == (a.accepts_length(n) and b.accepts_length(n))
            assert c.accepts_length(n) == (not a.accepts_length(n))


# -- eventually periodic sets ------------------------------------------------------

def test_eps_canonical_minimal():
    eps = eps_from_lasso([False, True], [True, False, True, False])
    # the cycle pattern has period 2
    assert eps.period == 2
    assert eps_membership(eps, 1) and not eps_membership(eps, 0)


def test_eps_window_membership_matches_lasso():
    for seed in range(20):
        r = random.Random(seed)
        pre = [r.random() < 0.5 for _ in range(r.randrange(0, 5))]
        cyc = [r.random() < 0.5 for _ in range(r.randrange(1, 6))]
        eps = eps_from_lasso(pre, cyc)

        def direct(n):
            return pre[n] if n < len(pre) else cyc[(n - len(pre)) % len(cyc)]

        horizon = eps.preperiod + 3 * eps.period + len(pre) + len(cyc)
        assert all(eps.member(n) == direct(n) for n in range(horizon))


def test_eps_json_roundtrip():
    eps = EventuallyPeriodicSet(2, frozenset({1}), 3, frozenset({0, 2}))
    assert EventuallyPeriodicSet.from_json(eps.to_json()) == eps


def test_eps_equal_on_window():
    e1 = EventuallyPeriodicSet(0, frozenset(), 5, frozenset({0}))
    e2 = EventuallyPeriodicSet(0, frozenset(), 10, frozenset({0, 5}))
    assert eps_equal_on_window(e1, e2, 200)


# -- periodicity falsifier ----------------------------------------------------------

def test_falsifier_multiples():
    flags = [n % 5 == 0 for n in range(201)]
    assert periodicity_falsifier(flags) == (0, 5)


def test_falsifier_squares_none():
    # at this window size every candidate pair hits a square-gap mismatch;
    # smaller windows can end on two lonely squares and genuinely fit
    n = 10_000
    flags = [False] * (n + 1)
    i = 0
    while i * i <= n:
        flags[i * i] = True
        i += 1
    assert periodicity_falsifier(flags) is None


def test_falsifier_primorials_none():
    n = 10_000
    flags = [False] * (n + 1)
    for a in arith.primorials_up_to(n):
        flags[a] = True
    assert periodicity_falsifier(flags) is None


def test_falsifier_shifted_class():
    flags = [n >= 7 and n % 4 == 1 for n in range(101)]
    t, p = periodicity_falsifier(flags)
    assert p == 4 and t <= 7
    # consistency of the returned pair on the window
    assert all(flags[x] == flags[x + p] for x in range(t, 101 - p))


# -- tiny enumeration ---------------------------------------------------------------

def test_tiny_count():
    assert tiny_code_count(1) == 1 << 18
    assert tiny_code_count(0) == 1 << 4


def test_tiny_lasso_matches_nfa(rng):
    for _ in range(300):
        code = rng.randrange(tiny_code_count(1))
        v = tiny_verifier_from_code(code, 1)
        nfa = cert_to_nfa(v)
        flags = nfa.lengths_up_to(40)
        pre, cyc = _tiny_lasso(code, 1)

        def flag(t):
            return pre[t] if t < len(pre) else cyc[(t - len(pre)) % len(cyc)]

        assert all(flags[n] == flag(n) for n in range(41)), code


def test_lower_bound_oracle_multiples_of_3():
    flags = [n % 3 == 0 and n > 0 for n in range(101)]
    v = lower_bound_oracle(flags, 1)
    assert v is not None
    nfa = cert_to_nfa(v)
    assert all(nfa.accepts_length(n) == flags[n] for n in range(101))


def test_lower_bound_oracle_all_lengths():
    # every length >= 1: no run of length zero exists in any translation
    flags = [n >= 1 for n in range(61)]
    v = lower_bound_oracle(flags, 1)
    assert v is not None


def test_lower_bound_oracle_rejects_small_window():
    with pytest.raises(AutomataError):
        lower_bound_oracle([True] * 10, 1)


def test_min_cert_size_for_length():
    s = mod_counter_scheme(0, 3)
    assert min_cert_size_for_length(s, 9, 8) == 2
    assert min_cert_size_for_length(s, 10, 8) is None


# -- labeled translation ---------------------------------------------------------------

def _labeled_backtracking(v, word, sigma):
    t = build_path(len(word), labels=list(word), sigma=sigma)
    return exists_accepting_backtracking(t, v)


def test_labeled_r1_matches_backtracking(rng):
    sigma = 2
    for seed in range(6):
        v = hashed_verifier(3000 + seed, 1)
        nfa = cert_to_nfa_labeled(v, sigma, 1)
        for n in range(2, 7):
            for word in itertools.product(range(sigma), repeat=n):
                got = nfa.accepts_word(word)
                want = _labeled_backtracking(v, word, sigma)
                assert got == want, (seed, word)


def test_labeled_r2_matches_backtracking(rng):
    sigma = 2
    for seed in range(3):
        v = hashed_verifier(4000 + seed, 1, radius=2)
        nfa = cert_to_nfa_labeled(v, sigma, 2)
        for n in range(4, 8):
            for word in itertools.product(range(sigma), repeat=n):
                got = nfa.accepts_word(word)
                want = _labeled_backtracking(v, word, sigma)
                assert got == want, (seed, word, n)


def test_labeled_unary_collapses_to_pair_construction():
    v = mod3_verifier()
    labeled = cert_to_nfa_labeled(v, 1, 1)
    plain = cert_to_nfa(v)
    for n in range(2, 30):
        assert labeled.accepts_word((0,) * n) == plain.accepts_length(n)


def test_labeled_state_bound():
    v = hashed_verifier(5, 1, radius=2)
    sigma = 2
    nfa = cert_to_nfa_labeled(v, sigma, 2)
    r, k = 2, 1
    assert nfa.n_states <= 2 * r * ((2 ** k) * sigma) ** (2 * r)
    assert nfa.n_states <= 1024


def test_nfa_json_roundtrip():
    nfa = cert_to_nfa(mod3_verifier())
    back = PathNFA.from_json(nfa.to_json())
    assert back.n_states == nfa.n_states
    for n in range(25):
        assert back.accepts_length(n) == nfa.accepts_length(n)
