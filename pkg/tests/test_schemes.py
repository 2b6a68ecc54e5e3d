import math
import random

import pytest

from certilab import arith
from certilab.automata import cert_to_nfa, min_cert_size_for_length
from certilab.certify import (check_completeness, exists_accepting_assignment,
                              exists_accepting_backtracking, measured_width,
                              run_verification, soundness_sweep)
from certilab.schemes import (SchemeError, approx_n_scheme, catalog,
                              caterpillar_growth_scheme,
                              caterpillar_radius2_scheme, cycle_not_pow2_scheme,
                              id_equality_scheme, mixed_profile_demo,
                              mod_counter_scheme, not_mod_scheme,
                              primorial_complement_scheme, pumping_demo,
                              primorial_middle_bulk, _primorial_bulk)
from certilab.topology import build_caterpillar, build_cycle, build_path
from certilab.walks import build_cert_graph, closed_walk_exists


# -- modulo counters ---------------------------------------------------------------

def test_mod_scheme_examples():
    s = mod_counter_scheme(0, 3)
    assert check_completeness(s, build_path(6))
    assert not s.in_property(build_path(7))
    assert min_cert_size_for_length(s, 9, 8) == 2
    assert check_completeness(mod_counter_scheme(1, 2), build_path(1))


def test_mod_scheme_rejects_bad_modulus():
    with pytest.raises(SchemeError):
        mod_counter_scheme(0, 1)


def test_not_mod_scheme_examples():
    s = not_mod_scheme(0, 3)
    assert check_completeness(s, build_path(7))
    assert not s.in_property(build_path(6))
    assert check_completeness(not_mod_scheme(0, 2), build_path(1))


def test_mod_scheme_acceptance_window():
    for t_res, m in [(0, 3), (1, 3), (2, 5), (1, 2), (0, 2), (3, 7)]:
        s = mod_counter_scheme(t_res, m)
        k, _ = s.prove(build_path(max(t_res, 1) + m))
        nfa = cert_to_nfa(s.verifier(k))
        for n in range(1, 50):
            assert nfa.accepts_length(n) == (n % m == t_res), (t_res, m, n)


def test_not_mod_acceptance_window():
    for t_res, m in [(0, 3), (1, 4), (0, 2)]:
        s = not_mod_scheme(t_res, m)
        k, _ = s.prove(build_path(m + 1 + t_res))
        nfa = cert_to_nfa(s.verifier(k))
        for n in range(1, 40):
            assert nfa.accepts_length(n) == (n % m != t_res), (t_res, m, n)


def test_mod_scheme_sound_within_family():
    s = mod_counter_scheme(0, 3)
    report = soundness_sweep(s, [build_path(5)], 2)
    assert report.sound


def test_mod2_orientation_soundness():
    # mod-2 counters need the orientation field; both-final attacks on odd
    # paths must fail
    s = mod_counter_scheme(0, 2)
    k = 3
    nfa = cert_to_nfa(s.verifier(k))
    for n in range(1, 30):
        assert nfa.accepts_length(n) == (n % 2 == 0), n


# -- primorial complement -----------------------------------------------------------

def test_primorial_scheme_completeness_examples():
    s = primorial_complement_scheme()
    for n in (7, 10, 12, 100, 2311):
        assert check_completeness(s, build_path(n)), n


def test_primorial_prover_rejects_members():
    s = primorial_complement_scheme()
    with pytest.raises(SchemeError):
        s.prove(build_path(30))


def test_primorial_soundness_small():
    s = primorial_complement_scheme()
    report = soundness_sweep(s, [build_path(a) for a in (2, 6, 30, 210)], 8)
    assert report.sound


def test_primorial_hook_matches_nfa():
    s = primorial_complement_scheme()
    for k in (4, 6, 8):
        v = s.verifier(k)
        hook = [n for n in range(1, 50) if v.exists_hook(build_path(n))]
        v.exists_hook = None
        nfa = cert_to_nfa(v)
        direct = [n for n in range(1, 50) if nfa.accepts_length(n)]
        assert hook == direct, k


def test_primorial_bulk_matches_scalar(rng):
    s = primorial_complement_scheme()
    v = s.verifier(24)
    # prover certificates pass, and the bulk path agrees with per-view checks
    for n in (2, 3, 9, 10, 12, 60):
        t = build_path(n)
        if s.in_property(t):
            k, certs = s.prove(t)
            vv = s.verifier(k)
            order = t.path_order()
            seq = [certs.values[u] for u in order]
            rej = _primorial_bulk(seq)
            assert rej == []
            # scalar route on the same instance
            vv2 = s.verifier(k)
            vv2.bulk_path_decide = None
            res = run_verification(t, certs, vv2)
            assert res.globally_accepted
    # corrupted certificates are caught identically by both routes
    for trial in range(60):
        n = rng.randrange(2, 12)
        t = build_path(n)
        if not s.in_property(t):
            continue
        k, certs = s.prove(t)
        vals = list(certs.values)
        pos = rng.randrange(n)
        vals[pos] = rng.randrange(1 << k)
        from certilab.certify import CertAssignment
        broken = CertAssignment(k, tuple(vals))
        vv = s.verifier(k)
        vv2 = s.verifier(k)
        vv2.bulk_path_decide = None
        fast = run_verification(t, broken, vv)
        slow = run_verification(t, broken, vv2)
        assert fast.globally_accepted == slow.globally_accepted, (n, pos)


def test_primorial_middle_bulk_matches_scalar(rng):
    s = primorial_complement_scheme()
    v = s.verifier(24)
    triples = []
    for n in (10, 12, 18):
        _, make, _ = s.cert_fn(n)
        for d in range(1, 8):
            triples.append((make(d - 1), make(d), make(d + 1)))
    for _ in range(40):
        triples.append(tuple(rng.randrange(1 << 20) for _ in range(3)))
    a, b, c = zip(*triples)
    got = primorial_middle_bulk(a, b, c)
    for i, (x, y, z) in enumerate(triples):
        assert got[i] == v.middle_accepts(x, y, z), (x, y, z)


def test_primorial_width_modest_at_small_n():
    s = primorial_complement_scheme()
    assert measured_width(s, build_path(7)) <= 5
    assert measured_width(s, build_path(10)) <= 22


# -- cycles ---------------------------------------------------------------------------

def test_cycle_scheme_completeness():
    s = cycle_not_pow2_scheme()
    for n in (3, 6, 12, 48, 96):
        assert check_completeness(s, build_cycle(n)), n


def test_cycle_scheme_prover_rejects_pow2():
    s = cycle_not_pow2_scheme()
    with pytest.raises(SchemeError):
        s.prove(build_cycle(8))


def test_cycle_walk_graph_structure():
    s = cycle_not_pow2_scheme()
    g = build_cert_graph(s.verifier(4))
    assert closed_walk_exists(g, 6) and closed_walk_exists(g, 3)
    assert not closed_walk_exists(g, 4)


def test_cycle_soundness_powers_of_two():
    s = cycle_not_pow2_scheme()
    negs = [build_cycle(1 << j) for j in range(2, 8)]
    assert soundness_sweep(s, negs, 6).sound


def test_cycle_acceptance_matches_divisor_criterion():
    s = cycle_not_pow2_scheme()
    for k in (4, 5, 6):
        g = build_cert_graph(s.verifier(k))
        half = k // 2
        usable = [d for d in range(3, 1 << (k - half), 2) if d < (1 << half)]
        for n in range(3, 80):
            want = any(n % d == 0 for d in usable)
            assert closed_walk_exists(g, n) == want, (k, n)


# -- caterpillar growth (radius 1) ------------------------------------------------------

def test_growth_scheme_completeness():
    s = caterpillar_growth_scheme(arith.half_log)
    for d in (3, 4, 5, 7, 10):
        inst = s.instance(d)
        if s.in_property(inst):
            assert check_completeness(s, inst), d


def test_growth_scheme_extra_leaf_rejected():
    s = caterpillar_growth_scheme(arith.half_log)
    inst = s.instance(5)
    prof = inst.leaf_profile()
    prof[1] += 1
    bad = build_caterpillar(prof)
    assert not s.in_property(bad)
    assert not any(exists_accepting_assignment(bad, s.verifier(k))
                   for k in range(7))


def test_growth_scheme_dp_matches_backtracking(rng):
    s = caterpillar_growth_scheme(arith.half_log)
    inst = s.instance(3)  # 6 vertices
    for k in (1, 2, 3):
        dp = exists_accepting_assignment(inst, s.verifier(k))
        bt = exists_accepting_backtracking(inst, s.verifier(k))
        assert dp == bt, k


def test_growth_scheme_width():
    s = caterpillar_growth_scheme(arith.half_log)
    inst = s.instance(5)
    k, _ = s.prove(inst)
    assert k == 3  # positions up to 5 need 3 bits


# -- caterpillar radius 2 ----------------------------------------------------------------

def test_r2_scheme_completeness():
    s = caterpillar_radius2_scheme(arith.half_log)
    for m in (2, 3, 4, 6):
        assert check_completeness(s, s.instance(m)), m


def test_r2_scheme_bare_path_rejected():
    s = caterpillar_radius2_scheme(arith.half_log)
    assert not s.in_property(build_path(6))
    assert not any(exists_accepting_assignment(build_path(6), s.verifier(k))
                   for k in range(7))


def test_r2_hook_matches_backtracking(rng):
    s = caterpillar_radius2_scheme(arith.half_log)
    tiny = [s.instance(2), build_caterpillar([1, 1, 2]), build_caterpillar([2, 1]),
            build_caterpillar([1, 2]), build_caterpillar([3, 1, 2])]
    for t in tiny:
        if t.n > 9:
            continue
        for k in (2, 3, 4):
            v = s.verifier(k)
            hook = exists_accepting_assignment(t, v)
            bare = type(v)(v.width, v.radius, v.klass, decide=v.decide,
                           valid_certs=v.valid_certs())
            bt = exists_accepting_backtracking(t, bare)
            assert hook == bt, (t.leaf_profile() if t.n > 2 else t.n, k)


def test_r2_soundness_mutants(rng):
    s = caterpillar_radius2_scheme(arith.half_log)
    negs = [t for t, _ in s.negatives_gen(rng, 12)]
    assert soundness_sweep(s, negs, 6).sound


# -- approx-n -----------------------------------------------------------------------------

def test_approx_scheme_accepts_with_estimate():
    s = approx_n_scheme(math.log2, arith.is_primorial, "primorial")
    assert check_completeness(s, build_path(30), advice=32)
    assert check_completeness(s, build_path(210), advice=205)


def test_approx_scheme_unique_pin():
    # only one value in the estimate interval matches the counter, so
    # an assignment can never sell a different length
    s = approx_n_scheme(math.log2, arith.is_primorial, "primorial")
    t = build_path(28)
    k, _ = s.prove(build_path(30), 30)
    for kk in range(k + 2):
        assert not exists_accepting_assignment(t, s.verifier(kk), advice=30)


def test_approx_scheme_degenerate_exact():
    s = approx_n_scheme(lambda n: 1.0, arith.is_primorial, "primorial")
    assert check_completeness(s, build_path(6), advice=6)
    assert not exists_accepting_assignment(build_path(7), s.verifier(4), advice=7)


# -- id equality -------------------------------------------------------------------------

F_BITS = staticmethod(lambda n: max(int(math.log2(n)), 0))


def _f_bits(n):
    return max(int(math.log2(n)), 0)


def test_id_equality_exact_n():
    s = id_equality_scheme(_f_bits, "exact_n")
    t = s.make_instance(20, [1, 0, 1, 1])
    assert s.in_property(t)
    assert check_completeness(s, t, advice=20)


def test_id_equality_mismatch_rejected():
    s = id_equality_scheme(_f_bits, "exact_n")
    rng = random.Random(3)
    for t, adv in s.negatives_gen(rng, 4):
        assert not s.in_property(t)
        assert not any(exists_accepting_assignment(t, s.verifier(k), advice=adv)
                       for k in range(9)), t.n


def test_id_equality_empty_string_trivial():
    s = id_equality_scheme(_f_bits, "exact_n")
    t = s.make_instance(1, [])
    assert s.in_property(t)
    assert check_completeness(s, t, advice=1)


def test_id_equality_with_ids():
    s = id_equality_scheme(_f_bits, "ids_in_range_n")
    rng = random.Random(5)
    t = s.make_instance(12, [1, 0, 1], rng)
    assert check_completeness(s, t)
    # a mismatched instance is rejected at small widths by direct search
    for t2, _ in s.negatives_gen(rng, 2):
        if t2.n <= 8:
            assert not exists_accepting_backtracking(t2, s.verifier(4))


# -- demos ---------------------------------------------------------------------------------

def test_pumping_demo_mechanics():
    d = pumping_demo(width=3, copies=2)
    assert d["scheme"].in_property(d["base"])
    assert not d["scheme"].in_property(d["pumped"])
    assert run_verification(d["base"], d["base_certs"], d["verifier"]).globally_accepted
    assert run_verification(d["pumped"], d["pumped_certs"], d["verifier"]).globally_accepted
    (a1, a2), (b1, b2) = d["colliding_pair"]
    spine = d["base"].central_path()
    c = d["base_certs"].values
    assert (c[spine[a1 - 1]], c[spine[a2 - 1]]) == (c[spine[b1 - 1]], c[spine[b2 - 1]])


def test_mixed_profile_demo_mechanics():
    d = mixed_profile_demo()
    g1, g2 = d["members"]
    assert d["scheme"].in_property(g1) and d["scheme"].in_property(g2)
    assert not d["scheme"].in_property(d["spliced"])
    assert run_verification(g1, d["member_certs"][0], d["verifier"]).globally_accepted
    assert run_verification(g2, d["member_certs"][1], d["verifier"]).globally_accepted
    assert run_verification(d["spliced"], d["spliced_certs"], d["verifier"]).globally_accepted


# -- catalog-wide --------------------------------------------------------------------------

def test_catalog_smoke(rng):
    for s in catalog():
        if s.positives_gen is None:
            continue
        for t, adv in s.positives_gen(rng, 4):
            assert s.in_property(t), s.name
            assert check_completeness(s, t, advice=adv), s.name
        if s.negatives_gen is not None:
            for t, adv in s.negatives_gen(rng, 2):
                assert not s.in_property(t), s.name
