import math
import random

import pytest

from certilab.certify import exists_accepting_backtracking
from certilab.schemes import cycle_not_pow2_scheme
from certilab.topology import build_cycle
from certilab.walks import (CertWalkGraph, WalkError, build_cert_graph,
                            closed_walk_exists, elementary_cycle_lengths,
                            representable, scc_periods, scc_subgraph,
                            strongly_connected_components,
                            verify_bezout_window, walk_realizability_check)
from conftest import hashed_verifier

# the worked directed graph on vertices A..G with elementary cycles of
# lengths 2, 3, 4, 6 and 7 (FAGF and CDEFABC among them)
FIG2 = {
    "A": ("B", "D", "G"), "B": ("C",), "C": ("D",), "D": ("E",),
    "E": ("D", "F"), "F": ("A",), "G": ("F", "B"),
}


def _double_3cycle():
    # the pair graph of a +-1 counter modulo 3: two disjoint directed 3-cycles
    adj = {}
    for i in range(3):
        adj[(i, (i + 1) % 3)] = (((i + 1) % 3, (i + 2) % 3),)
        adj[(i, (i - 1) % 3)] = (((i - 1) % 3, (i - 2) % 3),)
    return CertWalkGraph(2, adj)


def test_fig2_elementary_cycles():
    res = elementary_cycle_lengths(FIG2)
    assert res.complete
    assert 3 in res.lengths and 6 in res.lengths
    assert res.lengths == (2, 3, 4, 6, 7)


def test_fig2_period_one():
    g = CertWalkGraph(0, {k: tuple(v) for k, v in FIG2.items()})
    spec = scc_periods(g, 40)
    live = [s for s in spec.sccs if s.has_edge]
    assert len(live) == 1 and live[0].period == 1


def test_single_cycle_spectrum():
    adj = {i: ((i + 1) % 4,) for i in range(4)}
    g = CertWalkGraph(0, adj)
    spec = scc_periods(g, 30)
    live = [s for s in spec.sccs if s.has_edge]
    assert live[0].period == 4
    assert elementary_cycle_lengths(adj).lengths == (4,)
    assert sorted(spec.lengths) == [4, 8, 12, 16, 20, 24, 28]


def test_two_triangles_sharing_vertex():
    adj = {"x": ("a", "p"), "a": ("b",), "b": ("x",), "p": ("q",), "q": ("x",)}
    g = CertWalkGraph(0, adj)
    spec = scc_periods(g, 25)
    live = [s for s in spec.sccs if s.has_edge]
    assert live[0].period == 3
    assert elementary_cycle_lengths(adj).lengths == (3, 3)
    assert closed_walk_exists(g, 6) and closed_walk_exists(g, 9)
    assert not closed_walk_exists(g, 4)


def test_closed_walk_double_3cycle():
    g = _double_3cycle()
    assert closed_walk_exists(g, 6)
    assert not closed_walk_exists(g, 4)
    assert closed_walk_exists(g, 9)
    with pytest.raises(WalkError):
        closed_walk_exists(g, 2)


def test_edgeless_graph():
    g = CertWalkGraph(1, {(0, 0): (), (0, 1): ()})
    assert not closed_walk_exists(g, 5)


def test_build_cert_graph_all_accepting():
    v = hashed_verifier(0, 1, klass="cycle", accept_rate=3)
    g = build_cert_graph(v)
    assert g.n_vertices == 4
    assert len(g.edge_triples()) == 8


def test_build_cert_graph_not_pow2_restricted():
    s = cycle_not_pow2_scheme()
    g = build_cert_graph(s.verifier(4))  # width 4: only the divisor 3 fits
    live = [p for p in g.adjacency if g.adjacency[p]]
    assert len(live) == 6
    assert len(g.edge_triples()) == 6
    spec = scc_periods(g, 20)
    assert sorted(s.period for s in spec.sccs if s.has_edge) == [3, 3]


def test_cert_graph_equals_cycle_acceptance(rng):
    # Claim-setcycle both directions at desk scale
    for seed in range(6):
        v = hashed_verifier(600 + seed, 1, klass="cycle")
        g = build_cert_graph(v)
        for n in range(3, 11):
            walk = closed_walk_exists(g, n)
            search = exists_accepting_backtracking(build_cycle(n), v)
            assert walk == search, (seed, n)


def test_period_divides_walk_lengths(rng):
    for seed in range(10):
        r = random.Random(seed)
        nverts = r.randrange(3, 9)
        adj = {i: tuple(sorted({r.randrange(nverts) for _ in range(r.randrange(1, 3))}))
               for i in range(nverts)}
        g = CertWalkGraph(0, adj)
        spec = scc_periods(g, 200)
        for info in spec.sccs:
            if not info.has_edge:
                continue
            sub = scc_subgraph(g, info.scc_id)
            from certilab.walks import _scc_length_flags
            flags = _scc_length_flags(g, info, 200)
            for n, f in enumerate(flags):
                if f:
                    assert n % info.period == 0, (seed, info.scc_id, n)


def test_representable_examples():
    assert representable([3, 5], 7) is False
    assert representable([3, 5], 8) is True
    assert all(representable([3, 5], n) for n in range(8, 60))
    assert representable([1], 0) and representable([1], 17)
    assert representable([4, 6], 34) is True
    assert representable([4, 6], 35) is False


def test_bezout_window_examples():
    rep = verify_bezout_window([3, 5])
    assert rep.ok and rep.window == (25, 50)
    rep46 = verify_bezout_window([4, 6])
    assert rep46.ok and rep46.gcd == 2


def test_bezout_window_random(rng):
    for _ in range(200):
        t = rng.randrange(1, 5)
        lengths = [rng.randrange(1, 31) for _ in range(t)]
        assert verify_bezout_window(lengths).ok, lengths


def test_realizability_reports(rng):
    adj = {"x": ("a", "p"), "a": ("b",), "b": ("x",), "p": ("q",), "q": ("x",)}
    g = CertWalkGraph(0, adj)
    live = [s for s in scc_periods(g, 5).sccs if s.has_edge][0]
    rep = walk_realizability_check(g, live.scc_id)
    assert rep.ok and rep.period == 3


def test_realizability_chorded_cycle():
    # 4-cycle with a chord: elementary lengths {3, 4}, period 1
    adj = {0: (1,), 1: (2,), 2: (3, 0), 3: (0,)}
    g = CertWalkGraph(0, adj)
    live = [s for s in scc_periods(g, 5).sccs if s.has_edge][0]
    assert live.period == 1
    rep = walk_realizability_check(g, live.scc_id)
    assert rep.ok
    assert all(closed_walk_exists(g, n) for n in range(32, 60))


def test_walk_concatenation_pumping():
    # two closed walks of coprime lengths through a shared vertex realize
    # every nonnegative combination: a*3 + b*5 via explicit concatenation
    adj = {"x": ("a", "p"), "a": ("b",), "b": ("x",),
           "p": ("q",), "q": ("r",), "r": ("s",), "s": ("x",)}
    g = CertWalkGraph(0, adj)
    for a in range(4):
        for b in range(4):
            n = 3 * a + 5 * b
            if n >= 3:
                assert closed_walk_exists(g, n), (a, b)


def test_sccs_basic():
    comps = strongly_connected_components({0: (1,), 1: (0, 2), 2: ()})
    sets = sorted(tuple(sorted(c)) for c in comps)
    assert sets == [(0, 1), (2,)]


def test_cert_graph_json_roundtrip():
    g = _double_3cycle()
    back = CertWalkGraph.from_json(g.to_json())
    assert back.edge_triples() == g.edge_triples()
