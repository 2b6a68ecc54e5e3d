"""Every concrete certification scheme as an executable (prover, verifier
family) pair, plus the fixed-width counterexample demonstrations."""

from __future__ import annotations

import math
from typing import Callable, Optional

import numpy as np

from . import arith
from .arith import (GrowthSequence, build_sequence_a, build_sequence_b,
                    classify_primorial, is_primorial, nth_prime, primorial)
from .certify import (CertAssignment, CertificationError, LocalVerifier, Scheme)
from .topology import (CATERPILLAR, CYCLE, PATH, Topology, build_caterpillar,
                       build_cycle, build_path)


class SchemeError(ValueError):
    pass


def all_reject_verifier(k, radius, klass):
    return LocalVerifier(k, radius, klass, decide=lambda view: False,
                         valid_certs=[], name=f"reject[{klass},k={k}]")


def _bits(x):
    return max(int(x).bit_length(), 1)


# ---------------------------------------------------------------------------
# counters with a 3-valued orientation field (the general modulus machinery)
# ---------------------------------------------------------------------------

def pack_oriented(o, counters, moduli):
    val = 0
    for c, m in zip(reversed(counters), reversed(moduli)):
        val = val * m + c
    return val * 3 + o


def unpack_oriented(val, moduli):
    o = val % 3
    q = val // 3
    counters = []
    for m in moduli:
        counters.append(q % m)
        q //= m
    if q:
        return None
    return o, tuple(counters)


def oriented_decide(view, decode, final_check, advice=None):
    """Shared verification logic for orientation + counter certificates.

    ``decode(cert)`` yields (params, o, counters, moduli) or None; vertices
    require equal params in the whole view, a consistent orientation, and
    counter increments along it; the beginning endpoint anchors counters at
    zero, the final endpoint additionally passes ``final_check``.
    """
    center = view.center
    me = decode(view.cert(center))
    if me is None:
        return False
    params, o, cnts, moduli = me
    nbrs = []
    for w in view.neighbors(center):
        d = decode(view.cert(w))
        if d is None or d[0] != params:
            return False
        nbrs.append(d)
    deg = len(nbrs)
    if deg == 0:
        return o == 0 and all(c == 0 for c in cnts) and final_check(params, cnts)
    if deg == 1:
        _, o2, c2, _ = nbrs[0]
        begin = o == 0 and o2 == 1 and all(c == 0 for c in cnts)
        final = (o2 == (o - 1) % 3
                 and all((a - b - 1) % m == 0 for a, b, m in zip(cnts, c2, moduli))
                 and final_check(params, cnts))
        return begin or final
    if deg == 2:
        (_, oa, ca, _), (_, ob, cb, _) = nbrs
        if oa == (o - 1) % 3 and ob == (o + 1) % 3:
            pred, succ = ca, cb
        elif ob == (o - 1) % 3 and oa == (o + 1) % 3:
            pred, succ = cb, ca
        else:
            return False
        return (all((a - b - 1) % m == 0 for a, b, m in zip(cnts, pred, moduli))
                and all((b - a - 1) % m == 0 for a, b, m in zip(cnts, succ, moduli)))
    return False


# ---------------------------------------------------------------------------
# paths: length congruent (or not congruent) to t modulo m
# ---------------------------------------------------------------------------

def _counter_decide(view, m, accept_final):
    """Single counter mod m >= 3; direction flips would need m <= 2."""
    x = view.cert(view.center)
    if x >= m:
        return False
    nbrs = [view.cert(w) for w in view.neighbors(view.center)]
    if any(y >= m for y in nbrs):
        return False
    deg = len(nbrs)
    if deg == 0:
        return accept_final(1)
    if deg == 1:
        y = nbrs[0]
        begin = x == 0 and y == 1 % m
        final = y == (x - 1) % m and accept_final((x + 1) % m)
        return begin or final
    if deg == 2:
        return sorted(nbrs) == sorted([(x - 1) % m, (x + 1) % m])
    return False


def _mod_scheme(t: int, m: int, negate: bool, name: str) -> Scheme:
    if m < 2:
        raise SchemeError("modulus must be >= 2")
    t = t % m

    def accept_final(n_mod_m):
        hit = n_mod_m == t
        return (not hit) if negate else hit

    if m >= 3:
        k_min = _bits(m - 1)

        def family(k):
            if k < k_min:
                return all_reject_verifier(k, 1, PATH)
            return LocalVerifier(
                k, 1, PATH,
                decide=lambda view: _counter_decide(view, m, accept_final),
                valid_certs=list(range(m)), name=f"{name}[k={k}]")

        def prover(topo):
            order = topo.path_order()
            values = [0] * topo.n
            for d, u in enumerate(order):
                values[u] = d % m
            return k_min, CertAssignment(k_min, tuple(values))
    else:
        # counters mod 2 need the explicit orientation field
        moduli = (2,)
        k_min = _bits(pack_oriented(2, (1,), moduli))

        def decode(val):
            dec = unpack_oriented(val, moduli)
            if dec is None:
                return None
            return ((), dec[0], dec[1], moduli)

        def final_check(params, cnts):
            return accept_final((cnts[0] + 1) % 2)

        def family(k):
            if k < k_min:
                return all_reject_verifier(k, 1, PATH)
            return LocalVerifier(
                k, 1, PATH,
                decide=lambda view: oriented_decide(view, decode, final_check),
                valid_certs=[pack_oriented(o, (x,), moduli)
                             for o in range(3) for x in range(2)],
                name=f"{name}[k={k}]")

        def prover(topo):
            order = topo.path_order()
            values = [0] * topo.n
            for d, u in enumerate(order):
                values[u] = pack_oriented(d % 3, (d % 2,), moduli)
            return k_min, CertAssignment(k_min, tuple(values))

    def in_property(topo):
        hit = topo.kind == PATH and topo.n % m == t
        return (topo.kind == PATH and topo.n % m != t) if negate else hit

    def positives(rng, count):
        out = []
        n = 1
        while len(out) < count:
            if (n % m == t) != negate:
                out.append((build_path(n), None))
            n += rng.randrange(1, 4)
        return out

    def negatives(rng, count):
        out = []
        n = 1
        while len(out) < count:
            if (n % m == t) == negate:
                out.append((build_path(n), None))
            n += rng.randrange(1, 4)
        return out

    return Scheme(name=name, klass=PATH, radius=1, family=family, prover=prover,
                  in_property=in_property, declared_size_bound="O(log m)",
                  positives_gen=positives, negatives_gen=negatives)


def mod_counter_scheme(t: int, m: int) -> Scheme:
    """Paths whose length is congruent to t modulo m."""
    return _mod_scheme(t, m, False, f"mod[{t} mod {m}]")


def not_mod_scheme(t: int, m: int) -> Scheme:
    """Paths whose length is NOT congruent to t modulo m."""
    return _mod_scheme(t, m, True, f"notmod[{t} mod {m}]")


# ---------------------------------------------------------------------------
# paths: length is not a product of the first consecutive primes
# ---------------------------------------------------------------------------

_PARAM_CAP = 64  # 6-bit parameter fields


def _primorial_decode(val):
    """(tag, params, o, counters, moduli) or None."""
    tag = val & 3
    if tag == 0:
        return None
    if tag == 1:
        dec = unpack_oriented(val >> 2, (2,))
        if dec is None:
            return None
        return ((1,), dec[0], dec[1], (2,))
    kf = (val >> 2) & 63
    sf = (val >> 8) & 63
    rest = val >> 14
    if tag == 2:
        if not (1 <= sf < kf):
            return None
        moduli = (nth_prime(sf), nth_prime(kf))
        dec = unpack_oriented(rest, moduli)
        if dec is None:
            return None
        return ((2, kf, sf), dec[0], dec[1], moduli)
    if not (1 <= kf and 2 <= sf):
        return None
    moduli = (nth_prime(kf), nth_prime(kf + 1), sf)
    dec = unpack_oriented(rest, moduli)
    if dec is None:
        return None
    return ((3, kf, sf), dec[0], dec[1], moduli)


def _primorial_final(params, cnts):
    tag = params[0]
    if tag == 1:
        return cnts[0] == 0                  # n odd
    if tag == 2:
        _, kf, lf = params
        return (cnts[1] == nth_prime(kf) - 1         # p_k divides n
                and cnts[0] != nth_prime(lf) - 1)    # p_l does not
    _, kf, mf = params
    return (cnts[0] == nth_prime(kf) - 1
            and cnts[1] != nth_prime(kf + 1) - 1
            and cnts[2] != (primorial(kf) - 1) % mf)  # n not congruent to a_k


def _primorial_max_cert(tag, params, n):
    """Largest certificate value the canonical assignment uses on an n-path."""
    if tag == 1:
        moduli = (2,)
        base = 1
        shift = 2
    elif tag == 2:
        kf, lf = params
        moduli = (nth_prime(lf), nth_prime(kf))
        base = 2 | (kf << 2) | (lf << 8)
        shift = 14
    else:
        kf, mf = params
        moduli = (nth_prime(kf), nth_prime(kf + 1), mf)
        base = 3 | (kf << 2) | (mf << 8)
        shift = 14
    span = 3
    for m in moduli:
        span = math.lcm(span, m)
    best = 0
    for d in range(min(n, span)):
        best = max(best, pack_oriented(d % 3, tuple(d % m for m in moduli), moduli))
    return base | (best << shift)


def _primorial_exists(n, k):
    """Closed form for accepting assignments of the width-k family member.

    The orientation forces a single direction with counters pinned to the
    distance, so acceptance reduces to: some decodable (tag, params) whose
    final congruences hold for n and whose certificates fit in k bits.
    Cross-validated against the automaton translation at small widths.
    """
    cap = 1 << k
    if n % 2 == 1 and _primorial_max_cert(1, (), n) < cap:
        return True
    if n == 1:
        return False
    factors = [j for j in range(1, _PARAM_CAP) if n % nth_prime(j) == 0]
    skipped = [j for j in range(1, _PARAM_CAP) if n % nth_prime(j) != 0]
    for kf in factors:
        for lf in (s for s in skipped if s < kf):
            if _primorial_max_cert(2, (kf, lf), n) < cap:
                return True
            break  # larger lf only grows the certificate
    for kf in factors:
        if n % nth_prime(kf + 1) == 0:
            continue
        a_k = primorial(kf)
        for mf in range(2, _PARAM_CAP):
            if n % mf != a_k % mf and _primorial_max_cert(3, (kf, mf), n) < cap:
                return True
    return False


def _primorial_valid_certs(k):
    cap = 1 << k
    out = []
    for pack in range(6):
        v = 1 | (pack << 2)
        if v < cap:
            out.append(v)
    if cap > (1 << 14):
        budget = 400_000
        for kf in range(1, _PARAM_CAP):
            for lf in range(1, kf):
                base = 2 | (kf << 2) | (lf << 8)
                span = 3 * nth_prime(lf) * nth_prime(kf)
                for pack in range(span):
                    v = base | (pack << 14)
                    if v >= cap:
                        break
                    out.append(v)
            for mf in range(2, _PARAM_CAP):
                base = 3 | (kf << 2) | (mf << 8)
                span = 3 * nth_prime(kf) * nth_prime(kf + 1) * mf
                for pack in range(span):
                    v = base | (pack << 14)
                    if v >= cap:
                        break
                    out.append(v)
            if len(out) > budget:
                raise CertificationError(
                    "certificate enumeration too large; use the closed-form route")
    return out


def _primorial_middle_successors(a, b, advice=None):
    da = _primorial_decode(a)
    db = _primorial_decode(b)
    if da is None or db is None or da[0] != db[0]:
        return []
    params, oa, ca, moduli = da
    _, ob, cb, _ = db
    if oa == (ob - 1) % 3:
        step = 1   # b follows a; c continues forward
    elif oa == (ob + 1) % 3:
        step = -1
    else:
        return []
    if any((y - x - step) % m != 0 for x, y, m in zip(ca, cb, moduli)):
        return []
    oc = (ob + step) % 3
    cc = tuple((y + step) % m for y, m in zip(cb, moduli))
    tag = params[0]
    if tag == 1:
        c = 1 | (pack_oriented(oc, cc, moduli) << 2)
    else:
        base = (tag | (params[1] << 2) | (params[2] << 8))
        c = base | (pack_oriented(oc, cc, moduli) << 14)
    return [c]


def _primorial_decode_arrays(c):
    """Vectorized field decode: (valid, params triple, o, cnt[3], mod[3])."""
    n = len(c)
    P = np.array([1] + [nth_prime(i) for i in range(1, _PARAM_CAP + 2)], dtype=np.int64)
    tag = c & 3
    kf = (c >> 2) & 63
    sf = (c >> 8) & 63
    t1 = tag == 1
    t2 = tag == 2
    t3 = tag == 3
    valid = tag != 0
    valid &= np.where(t2, (sf >= 1) & (sf < kf), True)
    valid &= np.where(t3, (kf >= 1) & (sf >= 2), True)
    rest = np.where(t1, c >> 2, c >> 14)
    o = rest % 3
    q = rest // 3
    mod = np.ones((3, n), dtype=np.int64)
    mod[0] = np.where(t1, 2, np.where(t2, P[np.where(t2, sf, 1)], P[np.where(t3, kf, 1)]))
    mod[1] = np.where(t2, P[np.where(t2, kf, 1)], np.where(t3, P[np.where(t3, kf + 1, 1)], 1))
    mod[2] = np.where(t3, np.maximum(sf, 1), 1)  # invalid rows are masked out
    cnt = np.zeros((3, n), dtype=np.int64)
    for j in range(3):
        cnt[j] = q % mod[j]
        q = q // mod[j]
    valid &= q == 0
    par1 = np.where(t1, 0, kf)
    par2 = np.where(t1, 0, sf)
    return valid, (tag, par1, par2), o, cnt, mod


def primorial_middle_bulk(a, b, c):
    """Vectorized interior-vertex decisions for triples of certificates."""
    arrays = [np.asarray(x, dtype=np.int64) for x in (a, b, c)]
    deco = [_primorial_decode_arrays(x) for x in arrays]
    (va, pa, oa, ca, _), (vb, pb, ob, cb, mb), (vc, pc, oc, cc, _) = deco
    ok = va & vb & vc
    for j in range(3):
        ok &= (pa[j] == pb[j]) & (pc[j] == pb[j])
    fwd = (oa == (ob - 1) % 3) & (oc == (ob + 1) % 3)
    bwd = (oc == (ob - 1) % 3) & (oa == (ob + 1) % 3)
    pred = np.where(fwd, ca, cc)
    succ = np.where(fwd, cc, ca)
    ok &= fwd | bwd
    for j in range(3):
        ok &= (cb[j] - pred[j] - 1) % mb[j] == 0
        ok &= (succ[j] - cb[j] - 1) % mb[j] == 0
    return ok


def _primorial_bulk(certs, advice=None):
    """Vectorized whole-path verification; returns rejecting positions."""
    c = np.asarray(certs, dtype=np.int64)
    n = len(c)
    if n == 1:
        dec = _primorial_decode(int(c[0]))
        ok = (dec is not None and dec[1] == 0 and all(x == 0 for x in dec[2])
              and _primorial_final(dec[0], dec[2]))
        return [] if ok else [0]

    valid, (tag, par1, par2), o, cnt, mod = _primorial_decode_arrays(c)

    e_params = (tag[:-1] == tag[1:]) & (par1[:-1] == par1[1:]) & (par2[:-1] == par2[1:])
    step_fwd = o[1:] == (o[:-1] + 1) % 3
    step_bwd = o[1:] == (o[:-1] - 1) % 3
    e_dir = np.where(step_fwd, 1, np.where(step_bwd, -1, 0))
    e_cnt = np.ones(n - 1, dtype=bool)
    for j in range(3):
        e_cnt &= (cnt[j][1:] - cnt[j][:-1] - e_dir) % mod[j][:-1] == 0
    edge_ok = e_params & (e_dir != 0) & e_cnt & valid[:-1] & valid[1:]

    accept = valid.copy()
    if n > 2:
        accept[1:-1] &= edge_ok[:-1] & edge_ok[1:] & (e_dir[:-1] == e_dir[1:])
    zeros = (cnt[:, 0] == 0).all() and o[0] == 0
    zeros_last = (cnt[:, -1] == 0).all() and o[-1] == 0

    def final_ok(i):
        dec = _primorial_decode(int(c[i]))
        return dec is not None and _primorial_final(dec[0], dec[2])

    first_ok = bool(valid[0] and valid[1]) and bool(e_params[0]) and (
        (e_dir[0] == 1 and zeros) or (e_dir[0] == -1 and bool(e_cnt[0]) and final_ok(0)))
    last_ok = bool(valid[-1] and valid[-2]) and bool(e_params[-1]) and (
        (e_dir[-1] == -1 and zeros_last) or (e_dir[-1] == 1 and bool(e_cnt[-1]) and final_ok(n - 1)))
    accept[0] = first_ok
    accept[-1] = last_ok
    return [int(i) for i in np.nonzero(~accept)[0]]


def primorial_complement_scheme() -> Scheme:
    """Paths whose length is not a product of the first consecutive primes.

    The prover picks the least witness: oddness, a skipped prime below a
    dividing one, or a separating modulus; vertices re-check the witness's
    congruences with oriented counters and never look at parameter bounds.
    """

    def decide(view):
        return oriented_decide(view, _primorial_decode, _primorial_final)

    def family(k):
        v = LocalVerifier(
            k, 1, PATH, decide=decide,
            valid_certs=_lazy_valid_certs(k),
            cert_group=lambda val, advice=None: (_primorial_decode(val) or ((),))[0],
            exists_hook=lambda topo: _primorial_exists(topo.n, k),
            bulk_path_decide=_primorial_bulk,
            middle_successors_fn=_primorial_middle_successors,
            name=f"primorial-complement[k={k}]")
        return v

    def cert_fn(n):
        """Width, per-distance certificate map and its period for an n-path."""
        cls = classify_primorial(n)
        if cls.in_set:
            raise SchemeError(f"{n} is a primorial; the property excludes it")
        if cls.condition == 1:
            moduli = (2,)
            make = lambda d: 1 | (pack_oriented(d % 3, (d % 2,), moduli) << 2)
            width = _bits(_primorial_max_cert(1, (), n))
        elif cls.condition == 2:
            ell, kk = cls.params
            moduli = (nth_prime(ell), nth_prime(kk))
            base = 2 | (kk << 2) | (ell << 8)
            make = lambda d: base | (pack_oriented(d % 3, tuple(d % m for m in moduli), moduli) << 14)
            width = _bits(_primorial_max_cert(2, (kk, ell), n))
        else:
            kk, mm = cls.params
            moduli = (nth_prime(kk), nth_prime(kk + 1), mm)
            base = 3 | (kk << 2) | (mm << 8)
            make = lambda d: base | (pack_oriented(d % 3, tuple(d % m for m in moduli), moduli) << 14)
            width = _bits(_primorial_max_cert(3, (kk, mm), n))
        period = 3
        for m in moduli:
            period = math.lcm(period, m)
        return width, make, period

    def prover(topo):
        n = topo.n
        width, make, _ = cert_fn(n)
        values = [0] * n
        for d, u in enumerate(topo.path_order()):
            values[u] = make(d)
        return width, CertAssignment(width, tuple(values))

    def cert_array(n, count):
        """The canonical certificates for distances 0..count-1, vectorized."""
        cls = classify_primorial(n)
        if cls.in_set:
            raise SchemeError(f"{n} is a primorial; the property excludes it")
        d = np.arange(count, dtype=np.int64)
        if cls.condition == 1:
            moduli, base, shift = (2,), 1, 2
        elif cls.condition == 2:
            ell, kk = cls.params
            moduli = (nth_prime(ell), nth_prime(kk))
            base, shift = 2 | (kk << 2) | (ell << 8), 14
        else:
            kk, mm = cls.params
            moduli = (nth_prime(kk), nth_prime(kk + 1), mm)
            base, shift = 3 | (kk << 2) | (mm << 8), 14
        pack = np.zeros(count, dtype=np.int64)
        scale = 1
        for m in moduli:
            pack += scale * (d % m)
            scale *= m
        pack = pack * 3 + d % 3
        return base | (pack << shift)

    def in_property(topo):
        return topo.kind == PATH and not is_primorial(topo.n)

    def positives(rng, count):
        out = []
        n = 1
        while len(out) < count:
            if not is_primorial(n):
                out.append((build_path(n), None))
            n += rng.randrange(1, 5)
        return out

    def negatives(rng, count):
        # only six primorials fit a desk-scale path (the next one has half a
        # million vertices); the corpus is capped there
        return [(build_path(primorial(k)), None) for k in range(1, min(count, 6) + 1)]

    s = Scheme(name="primorial-complement", klass=PATH, radius=1,
               family=family, prover=prover, in_property=in_property,
               declared_size_bound="O(log log n)",
               positives_gen=positives, negatives_gen=negatives)
    s.cert_fn = cert_fn
    s.cert_array = cert_array
    return s


def _lazy_valid_certs(k):
    class _Lazy:
        def __init__(self):
            self._v = None

        def __iter__(self):
            if self._v is None:
                self._v = _primorial_valid_certs(k)
            return iter(self._v)
    return _Lazy()


# ---------------------------------------------------------------------------
# cycles: length is not a power of two
# ---------------------------------------------------------------------------

def cycle_not_pow2_scheme() -> Scheme:
    """Cycles whose length has an odd divisor >= 3: the certificate carries
    that divisor and a position counter modulo it."""

    def decode(val, k):
        half = k // 2
        i = val & ((1 << half) - 1)
        d = val >> half
        if d < 3 or d % 2 == 0 or i >= d:
            return None
        return d, i

    def family(k):
        if k < 4:
            return all_reject_verifier(k, 1, CYCLE)
        half = k // 2

        def decide(view):
            dec = decode(view.cert(view.center), k)
            if dec is None or view.degree(view.center) != 2:
                return False
            d, i = dec
            nbrs = [decode(view.cert(w), k) for w in view.neighbors(view.center)]
            if any(x is None or x[0] != d for x in nbrs):
                return False
            return sorted(x[1] for x in nbrs) == sorted([(i - 1) % d, (i + 1) % d])

        def successors(a, b, advice=None):
            da, db = decode(a, k), decode(b, k)
            if da is None or db is None or da[0] != db[0]:
                return []
            d, ia = da
            _, ib = db
            if ia == (ib - 1) % d:
                return [(d << half) | ((ib + 1) % d)]
            if ia == (ib + 1) % d:
                return [(d << half) | ((ib - 1) % d)]
            return []

        return LocalVerifier(
            k, 1, CYCLE, decide=decide,
            valid_certs=[(d << half) | i
                         for d in range(3, 1 << (k - half), 2) for i in range(d)
                         if i < (1 << half)],
            cert_group=lambda val, advice=None: val >> half,
            middle_successors_fn=successors,
            name=f"not-pow2[k={k}]")

    def least_odd_divisor(n):
        d = n
        while d % 2 == 0:
            d //= 2
        if d < 3:
            return None
        for q in range(3, d + 1, 2):
            if d % q == 0:
                return q
        return None

    def prover(topo):
        n = topo.n
        d = least_odd_divisor(n)
        if d is None:
            raise SchemeError(f"{n} is a power of two; the property excludes it")
        half = _bits(d)
        k = 2 * half
        # walk around the cycle from vertex 0
        order = [0]
        prev = None
        while len(order) < n:
            u = order[-1]
            nxt = [w for w in topo.neighbors(u) if w != prev]
            prev = u
            order.append(nxt[0])
        values = [0] * n
        for pos, u in enumerate(order):
            values[u] = (d << half) | (pos % d)
        return k, CertAssignment(k, tuple(values))

    def in_property(topo):
        return topo.kind == CYCLE and least_odd_divisor(topo.n) is not None

    def positives(rng, count):
        out = []
        n = 3
        while len(out) < count:
            if least_odd_divisor(n) is not None:
                out.append((build_cycle(n), None))
            n += rng.randrange(1, 4)
        return out

    def negatives(rng, count):
        # powers of two; capped where closed-walk queries stay desk-scale
        return [(build_cycle(1 << j), None) for j in range(2, min(count + 2, 13))]

    return Scheme(name="cycle-not-pow2", klass=CYCLE, radius=1, family=family,
                  prover=prover, in_property=in_property,
                  declared_size_bound="O(log n)",
                  positives_gen=positives, negatives_gen=negatives)

# ---------------------------------------------------------------------------
# caterpillars, radius 1: spine vertex i carries a_i - 1 pendant leaves
# ---------------------------------------------------------------------------

LEAF_CERT = 0


def caterpillar_growth_scheme(f: Callable[[float], float], seq_cap: int = 4096) -> Scheme:
    """Radius-1 certification of the caterpillar family driven by the growth
    sequence of f: leaves carry a marker, spine vertices their position, and
    each position pins its pendant-leaf count."""
    seq = build_sequence_a(f, seq_cap)
    a = (None,) + seq.terms  # 1-based

    def target_profile(d):
        return [a[i] - 1 for i in range(1, d + 1)]

    def decide(view):
        c = view.cert(view.center)
        deg = view.degree(view.center)
        if deg <= 1:
            return c == LEAF_CERT and deg == 1
        if c == LEAF_CERT or c >= len(a):
            return False
        nbrs = [view.cert(w) for w in view.neighbors(view.center)]
        specials = sum(1 for x in nbrs if x == LEAF_CERT)
        others = sorted(x for x in nbrs if x != LEAF_CERT)
        if specials != a[c] - 1:
            return False
        if others == [c - 1, c + 1] and c >= 2:
            return True
        if others == [2] and c == 1:
            return True
        if others == [c - 1] and c >= 2:
            return True
        return False

    def family(k):
        return LocalVerifier(
            k, 1, CATERPILLAR, decide=decide,
            valid_certs=list(range(min(1 << k, len(a)))),
            center_candidates=lambda deg: (
                [LEAF_CERT] if deg <= 1 else
                [i for i in range(1, min(1 << k, len(a))) if a[i] - 1 <= deg]),
            name=f"caterpillar-growth[k={k}]")

    def instance_profile(topo):
        if topo.kind not in (CATERPILLAR, PATH):
            return None
        try:
            prof = topo.leaf_profile()
        except Exception:
            return None
        return prof

    def in_property(topo):
        prof = instance_profile(topo)
        if not prof:
            return False
        d = len(prof)
        if d >= len(a) or a[d] < 2:
            return False
        want = target_profile(d)
        return prof == want or prof == want[::-1]

    def prover(topo):
        prof = instance_profile(topo)
        d = len(prof)
        want = target_profile(d)
        spine = topo.central_path()
        if prof == want[::-1] and prof != want:
            spine = spine[::-1]
        k = _bits(d)
        values = [LEAF_CERT] * topo.n
        for i, u in enumerate(spine, start=1):
            values[u] = i
        return k, CertAssignment(k, tuple(values))

    def instance(d):
        return build_caterpillar([a[i] - 1 for i in range(1, d + 1)])

    good_d = [d for d in range(2, 200) if a[d] >= 2]

    def positives(rng, count):
        return [(instance(good_d[i % len(good_d)]), None) for i in range(count)]

    def negatives(rng, count):
        out = []
        while len(out) < count:
            d = good_d[rng.randrange(min(len(good_d), 12))]
            prof = target_profile(d)
            mode = rng.randrange(3)
            if mode == 0:
                prof[rng.randrange(d)] += 1
            elif mode == 1 and max(prof) > 0:
                j = max(range(d), key=lambda i: prof[i])
                prof[j] -= 1
            else:
                prof = [rng.randrange(0, 4) for _ in range(d)]
                prof[0] = max(prof[0], 1)
                prof[-1] = max(prof[-1], 1)
            try:
                t = build_caterpillar(prof)
            except Exception:
                continue
            if not in_property(t) and instance_profile(t) is not None:
                out.append((t, None))
        return out

    s = Scheme(name="caterpillar-growth", klass=CATERPILLAR, radius=1,
               family=family, prover=prover, in_property=in_property,
               declared_size_bound="O(log d) = O(f(n))",
               positives_gen=positives, negatives_gen=negatives)
    s.sequence = seq
    s.instance = instance
    return s


# ---------------------------------------------------------------------------
# caterpillars, radius 2: leaf counts grow 1, 2, ... with both ends pinned
# ---------------------------------------------------------------------------

def caterpillar_radius2_scheme(f: Callable[[float], float], seq_cap: int = 4096) -> Scheme:
    """Radius-2 certification of the second caterpillar family: the prover
    writes one integer m everywhere; vertices check the three leaf-count
    cases against b_m."""
    seq_b = build_sequence_b(f, seq_cap)
    b = (None,) + tuple(seq_b.terms)  # b[m], 1-based

    def g_profile(m):
        return [b[m]] + [i for i in range(1, b[m] + 1)]

    def decode(val):
        role = val & 1
        m = val >> 1
        if m < 2 or m >= len(b):
            return None
        return role, m

    def decide(view):
        center = view.center
        dec = decode(view.cert(center))
        if dec is None:
            return False
        role, m = dec
        deg = view.degree(center)
        if (role == 1) != (deg == 1):
            return False
        nbrs = view.neighbors(center)
        for w in nbrs:
            dw = decode(view.cert(w))
            if dw is None or dw[1] != m:
                return False
        if deg == 1:
            return True
        bm = b[m]
        deg1_nbrs = [w for w in nbrs if view.degree(w) == 1]
        spine_nbrs = [w for w in nbrs if view.degree(w) >= 2]
        d1 = len(deg1_nbrs)

        def special_count(w):
            cnt = 0
            for x in view.neighbors(w):
                dx = decode(view.cert(x))
                if dx is not None and dx[0] == 1:
                    cnt += 1
            return cnt

        hat = sorted(special_count(w) for w in spine_nbrs)
        if d1 == bm and len(spine_nbrs) == 1 and hat[0] in (1, bm - 1):
            return True
        if d1 == 1 and len(spine_nbrs) == 2 and hat == sorted([bm, 2]):
            return True
        if 2 <= d1 <= bm - 1 and len(spine_nbrs) == 2 and hat == [d1 - 1, d1 + 1]:
            return True
        return False

    def exists_hook_for(k):
        def hook(topo):
            try:
                prof = topo.leaf_profile()
            except Exception:
                return False
            for m in range(2, min(1 << max(k - 1, 0), len(b))):
                want = g_profile(m)
                if prof == want or prof == want[::-1]:
                    return True
            return False
        return hook

    def family(k):
        return LocalVerifier(
            k, 2, CATERPILLAR, decide=decide,
            valid_certs=[(m << 1) | r for m in range(2, min(1 << max(k - 1, 0), len(b)))
                         for r in (0, 1)],
            exists_hook=exists_hook_for(k),
            name=f"caterpillar-r2[k={k}]")

    def in_property(topo):
        if topo.kind not in (CATERPILLAR, PATH):
            return False
        try:
            prof = topo.leaf_profile()
        except Exception:
            return False
        for m in range(2, len(b)):
            if b[m] > len(prof):
                break
            want = g_profile(m)
            if prof == want or prof == want[::-1]:
                return True
        return False

    def prover(topo):
        prof = topo.leaf_profile()
        m = next(m for m in range(2, len(b))
                 if g_profile(m) in (prof, prof[::-1]))
        k = m.bit_length() + 1
        values = []
        for u in range(topo.n):
            role = 1 if topo.degree(u) == 1 else 0
            values.append((m << 1) | role)
        return k, CertAssignment(k, tuple(values))

    def instance(m):
        return build_caterpillar(g_profile(m))

    def positives(rng, count):
        return [(instance(2 + i % 10), None) for i in range(count)]

    def negatives(rng, count):
        out = []
        while len(out) < count:
            m = 2 + rng.randrange(8)
            prof = g_profile(m)
            mode = rng.randrange(3)
            if mode == 0:
                prof[rng.randrange(len(prof))] += 1
            elif mode == 1:
                j = max(range(len(prof)), key=lambda i: prof[i])
                prof[j] = max(prof[j] - 1, 0)
            else:
                prof = [rng.randrange(1, 5) for _ in range(len(prof))]
            try:
                t = build_caterpillar(prof)
            except Exception:
                continue
            if not in_property(t):
                out.append((t, None))
        return out

    s = Scheme(name="caterpillar-r2", klass=CATERPILLAR, radius=2,
               family=family, prover=prover, in_property=in_property,
               declared_size_bound="O(log m) = O(f(d))",
               positives_gen=positives, negatives_gen=negatives)
    s.sequence = seq_b
    s.instance = instance
    s.g_profile = g_profile
    return s


# ---------------------------------------------------------------------------
# paths with a sharp estimate of n
# ---------------------------------------------------------------------------

def approx_n_scheme(g: Callable[[float], float], member: Callable[[int], bool],
                    member_name: str = "primorial") -> Scheme:
    """Nodes receive an estimate advice with |advice - n| <= g(n); a counter
    modulo roughly 4 g pins n inside the estimate interval, so the final
    endpoint can decide membership exactly."""

    def modulus(nhat):
        G = max(int(math.ceil(g(nhat))), 1)
        if G >= 2 and nhat >= 16:
            return 4 * G, G
        return nhat + G + 2, G  # degenerate: pin n exactly

    def pinned_length(nhat, final_counter):
        """The unique candidate n in the estimate interval matching the
        counter, or None."""
        M, G = modulus(nhat)
        lo = max(1, nhat - G - 1)
        hi = nhat + G + 1
        hits = [n for n in range(lo, hi + 1) if n % M == (final_counter + 1) % M]
        if len(hits) != 1:
            return None
        return hits[0]

    def decide(view):
        nhat = view.advice
        if nhat is None:
            return False
        M, _ = modulus(nhat)
        x = view.cert(view.center)
        if x >= M:
            return False
        nbrs = [view.cert(w) for w in view.neighbors(view.center)]
        if any(y >= M for y in nbrs):
            return False
        deg = len(nbrs)

        def final_ok(cnt):
            n = pinned_length(nhat, cnt)
            return n is not None and member(n)

        if deg == 0:
            return x == 0 and final_ok(0)
        if deg == 1:
            y = nbrs[0]
            begin = x == 0 and y == 1 % M
            final = y == (x - 1) % M and final_ok(x)
            return begin or final
        if deg == 2:
            return sorted(nbrs) == sorted([(x - 1) % M, (x + 1) % M])
        return False

    def family(k):
        return LocalVerifier(
            k, 1, PATH, decide=decide,
            valid_certs=list(range(1 << k)),
            valid_certs_advice_fn=lambda nhat: range(min(1 << k, modulus(nhat)[0])),
            advice_sensitive=True,
            name=f"approx-n[{member_name},k={k}]")

    def prover(topo, advice):
        if advice is None:
            raise SchemeError("this scheme needs the length estimate")
        M, _ = modulus(advice)
        k = _bits(M - 1)
        order = topo.path_order()
        values = [0] * topo.n
        for d, u in enumerate(order):
            values[u] = d % M
        return k, CertAssignment(k, tuple(values))

    def in_property(topo):
        return topo.kind == PATH and member(topo.n)

    def advice_for(topo, rng=None):
        n = topo.n
        G = int(g(n))
        off = 0 if rng is None else rng.randint(-G, G)
        return max(1, n + off)

    def positives(rng, count):
        out = []
        n = 1
        while len(out) < count:
            if member(n):
                t = build_path(n)
                out.append((t, advice_for(t, rng)))
            n += 1
            if n > 40000:
                break
        return out

    def negatives(rng, count):
        out = []
        n = 16
        while len(out) < count:
            if not member(n):
                t = build_path(n)
                out.append((t, advice_for(t, rng)))
            n += rng.randrange(1, 4)
        return out

    s = Scheme(name=f"approx-n[{member_name}]", klass=PATH, radius=1,
               family=family, prover=prover, in_property=in_property,
               declared_size_bound="O(log g(n))", id_mode="approx_n",
               needs_advice=True, positives_gen=positives, negatives_gen=negatives)
    s.advice_for = advice_for
    s.modulus = modulus
    return s


# ---------------------------------------------------------------------------
# labeled paths whose two endpoint bit strings must be equal
# ---------------------------------------------------------------------------

EMPTY_LABEL = 2  # letters are 0, 1 and "no bit"


def _string_property(topo, L):
    if topo.kind != PATH or topo.labels is None or topo.n < 2 * L:
        return False
    order = topo.path_order()
    labs = [topo.labels[u] for u in order]
    n = len(labs)
    for p, x in enumerate(labs):
        near = min(p, n - 1 - p)
        if near < L:
            if x not in (0, 1):
                return False
        elif x != EMPTY_LABEL:
            return False
    return all(labs[j] == labs[n - 1 - j] for j in range(L))


def id_equality_scheme(f_bits: Callable[[int], int], id_mode: str = "exact_n") -> Scheme:
    """Labeled paths carrying one bit string at each end; the certification
    ships the shared string plus distances.  With exact knowledge of n the
    string length is computable; with identifiers in [1, n] a pointer to the
    largest-identifier vertex pins it."""
    if id_mode not in ("exact_n", "ids_in_range_n"):
        raise SchemeError("supported id modes: exact_n, ids_in_range_n")
    with_ids = id_mode == "ids_in_range_n"

    def decode(val, L):
        if with_ids:
            Lf = val & 63
            ptr = (val >> 6) & 3
            if ptr == 3 or Lf != L and L is not None:
                return None
            L2 = Lf
            rest = val >> 8
        else:
            ptr = None
            L2 = L
            rest = val
        s = rest & ((1 << L2) - 1)
        dist = rest >> L2
        if dist > L2:
            return None
        return s, dist, L2, ptr

    def decide(view):
        center = view.center
        if with_ids:
            if view.center_id is None:
                return False
            raw = decode(view.cert(center), None)
            if raw is None:
                return False
            L = raw[2]
        else:
            if view.advice is None:
                return False
            L = f_bits(view.advice)
        me = decode(view.cert(center), L)
        if me is None:
            return False
        s, dist, _, ptr = me
        nbrs = []
        for w in view.neighbors(view.center):
            d = decode(view.cert(w), L)
            if d is None or d[0] != s or d[2] != L:
                return False
            nbrs.append(d)
        deg = len(nbrs)
        lab = view.label(center)
        if with_ids:
            # pointer certifies a single anchor vertex; everyone bounds the
            # string length by f of its own identifier, the anchor pins it
            if f_bits(view.center_id) > L:
                return False
            nptrs = [d[3] for d in nbrs]
            if ptr == 0 and all(p == 1 for p in nptrs):
                if f_bits(view.center_id) != L:
                    return False
            else:
                if sum(1 for p in nptrs if p == (ptr - 1) % 3) != 1:
                    return False
                if any(p != (ptr + 1) % 3 and p != (ptr - 1) % 3 for p in nptrs):
                    return False
                if sum(1 for p in nptrs if p == (ptr + 1) % 3) != len(nptrs) - 1:
                    return False
        if lab == EMPTY_LABEL:
            return dist == L
        if dist >= L or ((s >> dist) & 1) != lab:
            return False
        if (dist == 0) != (deg == 1):
            return False
        if dist > 0 and not any(d[1] == dist - 1 for d in nbrs):
            return False
        if dist < L - 1 and not any(d[1] == dist + 1 for d in nbrs):
            return False
        return True

    def _decodable_for(k, L):
        cap = 1 << k
        rest_cap = cap >> 8 if with_ids else cap
        out = []
        for rest in range(min(rest_cap, (L + 1) << L)):
            dist = rest >> L
            if dist > L:
                continue
            if with_ids:
                for ptr in range(3):
                    val = L | (ptr << 6) | (rest << 8)
                    if val < cap:
                        out.append(val)
            else:
                out.append(rest)
        return out

    def _decodable_static(k):
        out = []
        for L in range(0, 64):
            out.extend(_decodable_for(k, L))
        return out

    def _group(val, advice=None):
        # certificates of one accepting view always share the string field
        if with_ids:
            L = val & 63
            return (L, (val >> 8) & ((1 << L) - 1))
        if advice is None:
            return 0
        return val & ((1 << f_bits(advice)) - 1)

    def family(k):
        return LocalVerifier(
            k, 1, PATH, decide=decide,
            valid_certs=_decodable_static(k) if with_ids else None,
            valid_certs_advice_fn=None if with_ids else (lambda n: _decodable_for(k, f_bits(n))),
            cert_group=_group,
            advice_sensitive=not with_ids,
            name=f"id-equality[{id_mode},k={k}]")

    def width_for(L):
        base = L + _bits(L)
        return base + 8 if with_ids else base

    def prover(topo, advice=None):
        n = topo.n
        L = f_bits(n)
        order = topo.path_order()
        labs = [topo.labels[u] for u in order]
        s = 0
        for j in range(L):
            s |= labs[j] << j
        k = width_for(L)
        values = [0] * n
        if with_ids:
            anchor = max(range(n), key=lambda u: topo.ids[u])
            dist_anchor = topo.distances_from(anchor)
        for p, u in enumerate(order):
            near = min(p, n - 1 - p)
            dist = near if near < L else L
            rest = s | (dist << L)
            if with_ids:
                values[u] = L | ((dist_anchor[u] % 3) << 6) | (rest << 8)
            else:
                values[u] = rest
        return k, CertAssignment(k, tuple(values))

    def in_property(topo):
        if topo.labels is None:
            return False
        return _string_property(topo, f_bits(topo.n))

    def make_instance(n, bits, rng=None):
        L = len(bits)
        labs = [EMPTY_LABEL] * n
        # both ends read the same string outward-in
        for j in range(L):
            labs[j] = bits[j]
            labs[n - 1 - j] = bits[j]
        ids = None
        if with_ids:
            perm = list(range(1, n + 1))
            if rng is not None:
                rng.shuffle(perm)
            ids = tuple(perm)
        return build_path(n, labels=labs, sigma=3, ids=ids)

    def positives(rng, count):
        out = []
        for i in range(count):
            n = rng.randrange(6, 24)
            L = f_bits(n)
            bits = [rng.randrange(2) for _ in range(L)]
            t = make_instance(n, bits, rng)
            out.append((t, n if not with_ids else None))
        return out

    def negatives(rng, count):
        out = []
        while len(out) < count:
            n = rng.randrange(6, 20)
            L = f_bits(n)
            if L == 0:
                continue
            bits = [rng.randrange(2) for _ in range(L)]
            t = make_instance(n, bits, rng)
            order = t.path_order()
            labs = [t.labels[u] for u in order]
            j = rng.randrange(L)
            labs[n - 1 - j] = 1 - labs[n - 1 - j]
            t2 = build_path(n, labels=labs, sigma=3, ids=t.ids)
            if not in_property(t2):
                out.append((t2, n if not with_ids else None))
        return out

    s = Scheme(name=f"id-equality[{id_mode}]", klass=PATH, radius=1,
               family=family, prover=prover, in_property=in_property,
               declared_size_bound="O(f(n))", id_mode=id_mode,
               needs_advice=not with_ids,
               positives_gen=positives, negatives_gen=negatives)
    s.make_instance = make_instance
    s.f_bits = f_bits
    return s

# ---------------------------------------------------------------------------
# fixed-width counterexample demonstrations
# ---------------------------------------------------------------------------

def _copy_segment_instance(profile, certs_spine, lo, hi, copies):
    """Repeat spine positions [lo, hi) ``copies`` extra times, duplicating
    leaf counts and spine certificates."""
    prof = profile[:lo] + profile[lo:hi] * (copies + 1) + profile[hi:]
    certs = certs_spine[:lo] + certs_spine[lo:hi] * (copies + 1) + certs_spine[hi:]
    return prof, certs


def pumping_demo(f: Callable[[float], float] = None, width: int = 3, copies: int = 2):
    """The repeated-segment counterexample for fixed-width caterpillar
    verifiers at radius 1.

    A verifier whose position counter lives in ``width`` bits accepts every
    instance of the growth family, because counters can only run modulo
    M = 2^width - 1.  Any instance long enough repeats a consecutive pair of
    certificates; copying the segment between the repeats (certificates
    included) replicates every view, so the verifier stays happy while the
    instance leaves the family.
    """
    f = f or arith.half_log
    scheme = caterpillar_growth_scheme(f)
    a = (None,) + scheme.sequence.terms
    M = (1 << width) - 1

    def counter(i):
        return (i - 1) % M + 1

    def decide(view):
        c = view.cert(view.center)
        deg = view.degree(view.center)
        if deg <= 1:
            return c == LEAF_CERT and deg == 1
        if not (1 <= c <= M):
            return False
        nbrs = [view.cert(w) for w in view.neighbors(view.center)]
        others = sorted(x for x in nbrs if x != LEAF_CERT)
        nxt, prv = counter(c + 1), counter(c + M - 1)
        if others == sorted({prv, nxt}) and len(others) == 2:
            return True
        if others == [nxt] and c == 1:
            return True
        if others == [prv]:
            return True
        return False

    verifier = LocalVerifier(width, 1, CATERPILLAR, decide=decide,
                             valid_certs=list(range(M + 1)),
                             name=f"narrow-counter[w={width}]")

    # base instance long enough to wrap the counter: positions k and k+M
    # carry equal certificates
    d = M + 3
    while a[d] < 2:
        d += 1
    profile = [a[i] - 1 for i in range(1, d + 1)]
    certs_spine = [counter(i) for i in range(1, d + 1)]
    base = build_caterpillar(profile)
    base_certs = _spread_spine_certs(base, certs_spine)

    lo, hi = 1, 1 + M  # segment between the colliding pairs (1-based pos 2..M+1)
    pumped_profile, pumped_spine = _copy_segment_instance(profile, certs_spine, lo, hi, copies)
    pumped = build_caterpillar(pumped_profile)
    pumped_certs = _spread_spine_certs(pumped, pumped_spine)

    return {
        "verifier": verifier,
        "scheme": scheme,
        "base": base,
        "base_certs": base_certs,
        "pumped": pumped,
        "pumped_certs": pumped_certs,
        "colliding_pair": ((lo, lo + 1), (hi, hi + 1)),
        "segment": (lo, hi),
    }


def _spread_spine_certs(topo, spine_certs):
    spine = topo.central_path()
    values = [LEAF_CERT] * topo.n
    for u, c in zip(spine, spine_certs):
        values[u] = c
    width = _bits(max(max(spine_certs), 1))
    return CertAssignment(width, tuple(values))


def mixed_profile_demo(f: Callable[[float], float] = None, m: int = 5, m2: int = 7):
    """The spliced-instance counterexample for fixed-width caterpillar
    verifiers at radius 2.

    A verifier that only checks the local leaf-count pattern (it cannot
    afford to store the family index) accepts every member; grafting the
    heavy end of one member onto the body of another replicates all views,
    so the splice is accepted although it belongs to no member.
    """
    f = f or arith.half_log
    scheme = caterpillar_radius2_scheme(f)
    b = (None,) + tuple(scheme.sequence.terms)

    def decide(view):
        center = view.center
        c = view.cert(center)
        deg = view.degree(center)
        if (c == 1) != (deg == 1):
            return False
        if deg == 1:
            return True
        nbrs = view.neighbors(center)
        d1 = sum(1 for w in nbrs if view.degree(w) == 1)
        spine_nbrs = [w for w in nbrs if view.degree(w) >= 2]

        def hat(w):
            return sum(1 for x in view.neighbors(w) if view.cert(x) == 1)

        def endpointish(w):
            return sum(1 for x in view.neighbors(w) if view.cert(x) != 1) == 1

        hats = sorted(hat(w) for w in spine_nbrs)
        if len(spine_nbrs) == 1 and d1 >= 1 and hats[0] in (1, d1 - 1):
            return True
        if len(spine_nbrs) == 2 and d1 == 1:
            ends = [w for w in spine_nbrs if endpointish(w)]
            rest = [hat(w) for w in spine_nbrs if not endpointish(w)]
            return (len(ends) == 1 and rest == [2]) or hats == [2, 2]
        if len(spine_nbrs) == 2 and 2 <= d1:
            return hats == [d1 - 1, d1 + 1]
        return False

    verifier = LocalVerifier(1, 2, CATERPILLAR, decide=decide,
                             valid_certs=[0, 1], name="narrow-pattern[r=2]")

    def certs_for(topo):
        return CertAssignment(1, tuple(1 if topo.degree(u) == 1 else 0
                                       for u in range(topo.n)))

    g_m = scheme.instance(m)
    g_m2 = scheme.instance(m2)
    spliced_profile = [b[m2]] + list(range(1, b[m] + 1))
    spliced = build_caterpillar(spliced_profile)

    return {
        "verifier": verifier,
        "scheme": scheme,
        "members": (g_m, g_m2),
        "member_certs": (certs_for(g_m), certs_for(g_m2)),
        "spliced": spliced,
        "spliced_certs": certs_for(spliced),
        "m_pair": (m, m2),
    }


# ---------------------------------------------------------------------------

def catalog():
    """Default instantiation of every scheme."""
    return [
        mod_counter_scheme(0, 3),
        not_mod_scheme(0, 3),
        primorial_complement_scheme(),
        cycle_not_pow2_scheme(),
        caterpillar_growth_scheme(arith.half_log),
        caterpillar_radius2_scheme(arith.half_log),
        approx_n_scheme(math.log2, is_primorial, "primorial"),
        id_equality_scheme(lambda n: max(int(math.log2(n)), 0), "exact_n"),
        id_equality_scheme(lambda n: max(int(math.log2(n)), 0), "ids_in_range_n"),
    ]
