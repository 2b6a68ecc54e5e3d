import random

import pytest

from certilab.topology import (Topology, TopologyError, build_caterpillar,
                               build_cycle, build_path, build_tree)
from certilab.views import view_at
from conftest import random_tree


def test_build_path_smallest():
    t = build_path(1)
    assert t.n == 1 and t.diameter == 0


def test_build_path_structure():
    t = build_path(6)
    degs = sorted(t.degree(u) for u in range(6))
    assert degs == [1, 1, 2, 2, 2, 2]
    assert t.diameter == 5


def test_build_path_labeled():
    t = build_path(3, labels=[0, 1, 0])
    assert t.sigma == 2
    assert [t.label(u) for u in t.path_order()] in ([0, 1, 0], [0, 1, 0])


def test_build_path_zero_rejected():
    with pytest.raises(TopologyError):
        build_path(0)


def test_build_cycle():
    t = build_cycle(3)
    assert all(t.degree(u) == 2 for u in range(3))
    t8 = build_cycle(8)
    assert t8.n == 8 and all(t8.degree(u) == 2 for u in range(8))
    with pytest.raises(TopologyError):
        build_cycle(2)


def test_build_caterpillar():
    t = build_caterpillar([1, 2, 4])
    assert t.n == 10
    assert t.leaf_profile() == [1, 2, 4]
    bare = build_caterpillar([0, 0])
    assert bare.n == 2 and len(bare.edges) == 1


def test_caterpillar_shape_profile():
    b = 3
    t = build_caterpillar([b, 1, 2, b])
    assert t.leaf_profile() == [b, 1, 2, b]


def test_caterpillar_roundtrip_leaf_counts(rng):
    for _ in range(50):
        counts = [rng.randrange(0, 4) for _ in range(rng.randrange(2, 7))]
        counts[0] = max(counts[0], 1)
        counts[-1] = max(counts[-1], 1)
        t = build_caterpillar(counts)
        # when every spine vertex keeps degree >= 2, the central path is the
        # spine and the profile round-trips
        assert t.leaf_profile() == counts


def test_ids_must_be_distinct():
    with pytest.raises(TopologyError):
        build_path(3, ids=[1, 1, 2])


def test_view_matches_bfs_oracle(rng):
    for _ in range(40):
        choice = rng.randrange(3)
        if choice == 0:
            t = build_path(rng.randrange(1, 10))
        elif choice == 1:
            t = build_cycle(rng.randrange(3, 10))
        else:
            t = random_tree(rng, rng.randrange(2, 10))
        certs = [rng.randrange(4) for _ in range(t.n)]
        v = rng.randrange(t.n)
        r = rng.randrange(1, 4)
        view = view_at(t, v, r, certs)
        dist = t.distances_from(v)
        assert set(view.vertices) == {u for u in range(t.n) if dist[u] <= r}
        expect_edges = {(a, b) for a, b in t.edges
                        if min(dist[a], dist[b]) <= r - 1
                        and dist[a] <= r and dist[b] <= r}
        assert set(view.edges) == expect_edges


def test_view_counting_examples():
    p6 = build_path(6)
    certs = list(range(6))
    end = p6.path_order()[0]
    v1 = view_at(p6, end, 1, certs)
    assert len(v1.vertices) == 2 and len(v1.edges) == 1
    mid = p6.path_order()[2]
    v2 = view_at(p6, mid, 2, certs)
    assert len(v2.vertices) == 5 and len(v2.edges) == 4
    c3 = build_cycle(3)
    v3 = view_at(c3, 0, 2, [0, 0, 0])
    assert len(v3.vertices) == 3 and len(v3.edges) == 3


def test_builders_deterministic():
    a = build_caterpillar([2, 1, 3])
    b = build_caterpillar([2, 1, 3])
    assert a.to_json() == b.to_json()
    assert build_cycle(9).to_json() == build_cycle(9).to_json()


def test_json_roundtrip():
    t = build_path(4, labels=[0, 1, 1, 0], ids=[4, 7, 2, 9])
    t2 = Topology.from_json(t.to_json())
    assert t2.edges == t.edges and t2.labels == t.labels and t2.ids == t.ids


def test_tree_builder_rejects_cycles():
    with pytest.raises(TopologyError):
        build_tree([(0, 1), (1, 2), (0, 2)])


def test_permuted_preserves_structure(rng):
    t = build_caterpillar([2, 0, 1])
    perm = list(range(t.n))
    rng.shuffle(perm)
    t2 = t.permuted(perm)
    assert sorted(t.degree(u) for u in range(t.n)) == \
        sorted(t2.degree(u) for u in range(t2.n))
