import hashlib
import random

import pytest

from certilab.certify import LocalVerifier
from certilab.topology import build_tree


def random_tree(rng, n):
    if n == 1:
        from certilab.topology import Topology
        return Topology("tree", 1, ())
    return build_tree([(rng.randrange(i), i) for i in range(1, n)])


def hashed_verifier(seed, width, klass="path", radius=1, accept_rate=2):
    """Deterministic pseudo-random view verifier: accepts when the hash of
    the canonical view, salted by seed, clears a threshold."""

    def decide(view):
        key = f"{seed}|{view.canonical()!r}"
        h = int(hashlib.sha256(key.encode()).hexdigest(), 16)
        return h % 3 < accept_rate

    return LocalVerifier(width, radius, klass, decide=decide,
                         name=f"hashed[{seed}]")


def mod3_verifier(klass="path"):
    """The divisible-by-3 verifier from the worked example: certificates
    0, 1, 2; an endpoint holds 0 or 2 next to a 1; an interior vertex sees
    all three values."""

    def decide(view):
        c = view.cert(view.center)
        nbrs = [view.cert(w) for w in view.neighbors(view.center)]
        if view.degree(view.center) == 1:
            return c in (0, 2) and nbrs[0] == 1
        if view.degree(view.center) == 2:
            return {c, *nbrs} == {0, 1, 2} and len(set(nbrs)) == 2
        return False

    return LocalVerifier(2, 1, klass, decide=decide, valid_certs=[0, 1, 2],
                         name="mod3")


@pytest.fixture
def rng():
    return random.Random(20240901)
