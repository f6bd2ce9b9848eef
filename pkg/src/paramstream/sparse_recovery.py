"""M-sparse recovery over a universe ``[0, U)`` via power-sum syndromes.

The sketch keeps, over a prime field GF(p), the first ``2M`` power sums

    s_j = sum_x  c_x * (x + 1)**j        (j = 0 .. 2M-1)

of the net multiset ``{x: c_x}``.  Any two multisets with at most ``M``
distinct elements each have different syndromes (their difference has at
most ``2M`` terms and the Vandermonde matrix is non-singular), so recovery
below capacity is deterministic and exact: Berlekamp-Massey gives the
error-locator polynomial, its roots give the elements and a transposed
Vandermonde solve gives the multiplicities.

Above capacity the decoder may land on a wrong candidate.  Every candidate is
therefore checked against an exact net-count register and a random-evaluation
fingerprint ``sum c_x * r**(x+1) mod (2**127 - 1)``; a wrong candidate passes
with probability at most ``U / (2**127 - 1)``.  Multiplicities are exact while
their magnitude stays below ``p / 2`` (about 1e9 for the 31-bit field).
"""

from __future__ import annotations

import random
from collections import Counter
from typing import Iterable

import numpy as np

from .stream import SpaceLedger

P31 = (1 << 31) - 1
P61 = (1 << 61) - 1
FINGERPRINT_MOD = (1 << 127) - 1

# A vectorised scan costs about deg * U cheap numpy steps while
# Cantor-Zassenhaus costs about deg^2 * log p Python steps; measured break-even
# is near U = 6000 * deg, so scan below SCAN_PER_DEGREE * deg candidates.
SCAN_PER_DEGREE = 6000


class Overflow(Exception):
    """The sketch holds more distinct elements than it can recover."""


def _inv(a: int, p: int) -> int:
    return pow(a, p - 2, p)


def berlekamp_massey(seq: list[int], p: int) -> list[int]:
    """Shortest connection polynomial ``[1, c_1, ..., c_L]`` over GF(p).

    It satisfies ``seq[n] + c_1 seq[n-1] + ... + c_L seq[n-L] = 0`` for every
    ``L <= n < len(seq)``.
    """
    c = [1]
    b = [1]
    length = 0
    shift = 1
    last_disc = 1
    for n, value in enumerate(seq):
        d = value
        for i in range(1, min(length, len(c) - 1) + 1):
            d += c[i] * seq[n - i]
        d %= p
        if d == 0:
            shift += 1
            continue
        coef = d * _inv(last_disc, p) % p
        new_c = c + [0] * max(0, len(b) + shift - len(c))
        for i, bi in enumerate(b):
            new_c[i + shift] = (new_c[i + shift] - coef * bi) % p
        if 2 * length <= n:
            b = c
            length = n + 1 - length
            last_disc = d
            shift = 1
        else:
            shift += 1
        c = new_c
    del c[length + 1:]
    return c + [0] * (length + 1 - len(c))


# -- polynomials over GF(p), coefficient lists lowest degree first ------------

def _trim(f: list[int]) -> list[int]:
    while f and f[-1] == 0:
        f.pop()
    return f


def _polymod(f: list[int], g: list[int], p: int) -> list[int]:
    f = list(f)
    inv_lead = _inv(g[-1], p)
    dg = len(g) - 1
    for i in range(len(f) - 1, dg - 1, -1):
        q = f[i] * inv_lead % p
        if q:
            base = i - dg
            for j, gj in enumerate(g):
                f[base + j] = (f[base + j] - q * gj) % p
    return _trim(f[:dg])


def _polymulmod(a: list[int], b: list[int], g: list[int], p: int) -> list[int]:
    if not a or not b:
        return []
    out = [0] * (len(a) + len(b) - 1)
    for i, ai in enumerate(a):
        if ai:
            for j, bj in enumerate(b):
                out[i + j] += ai * bj
    return _polymod([x % p for x in out], g, p)


def _polypowmod(base: list[int], e: int, g: list[int], p: int) -> list[int]:
    result = [1]
    base = _polymod(base, g, p)
    while e:
        if e & 1:
            result = _polymulmod(result, base, g, p)
        base = _polymulmod(base, base, g, p)
        e >>= 1
    return result


def _polygcd(a: list[int], b: list[int], p: int) -> list[int]:
    a, b = _trim(list(a)), _trim(list(b))
    while b:
        a, b = b, _polymod(a, b, p)
    inv_lead = _inv(a[-1], p)
    return [x * inv_lead % p for x in a]


def _polydiv_exact(f: list[int], g: list[int], p: int) -> list[int]:
    f = list(f)
    dg = len(g) - 1
    inv_lead = _inv(g[-1], p)
    q = [0] * (len(f) - dg)
    for i in range(len(f) - 1, dg - 1, -1):
        c = f[i] * inv_lead % p
        q[i - dg] = c
        if c:
            for j, gj in enumerate(g):
                f[i - dg + j] = (f[i - dg + j] - c * gj) % p
    return q


def _split_roots(f: list[int], p: int, rng: random.Random) -> list[int]:
    """Roots of a monic ``f`` known to be a product of distinct linear factors."""
    if len(f) == 1:
        return []
    if len(f) == 2:
        return [(-f[0]) % p]
    while True:
        a = rng.randrange(p)
        h = list(_polypowmod([a, 1], (p - 1) // 2, f, p)) or [0]
        h[0] = (h[0] - 1) % p
        h = _trim(h)
        if not h:
            continue
        g = _polygcd(f, h, p)
        if 1 < len(g) < len(f):
            return _split_roots(g, p, rng) + _split_roots(_polydiv_exact(f, g, p), p, rng)


def field_roots(f: list[int], p: int, lo: int, hi: int, rng: random.Random) -> list[int] | None:
    """Distinct roots of monic ``f`` in ``[lo, hi]`` if ``f`` splits fully there.

    Returns ``None`` when ``f`` has a repeated root, an irreducible factor of
    degree above one, or a root outside the range.
    """
    deg = len(f) - 1
    if deg == 0:
        return []
    if p == P31 and hi - lo + 1 <= SCAN_PER_DEGREE * deg:
        roots: list[int] = []
        coeffs = [int(c) for c in reversed(f)]
        for start in range(lo, hi + 1, 1 << 16):
            ys = np.arange(start, min(hi, start + (1 << 16) - 1) + 1, dtype=np.int64)
            acc = np.zeros_like(ys)
            for c in coeffs:
                acc = (acc * ys + c) % p
            roots.extend(int(y) for y in ys[acc == 0])
            if len(roots) > deg:
                return None
        return roots if len(roots) == deg else None
    # f splits into distinct linear factors iff f divides x^p - x
    xp = _polypowmod([0, 1], p, f, p)
    xp = xp + [0] * (2 - len(xp))
    xp[1] = (xp[1] - 1) % p
    if _polymod(xp, f, p):
        return None
    roots = _split_roots(f, p, rng)
    if any(not lo <= r <= hi for r in roots):
        return None
    return sorted(roots)


class SparseRecoverySketch:
    """Recovers the net multiset exactly whenever it has at most ``capacity``
    distinct elements; otherwise :meth:`recover` raises :class:`Overflow`.

    ``word_bits`` sets the word size used for ledger charges (defaults to the
    bits of one universe element).  The charge is
    ``2M * ceil(field_bits / w) + 2 * ceil(127 / w) + 1`` words while alive,
    plus a transient ``(3M + 3) * ceil(field_bits / w)`` during decoding.
    """

    def __init__(
        self,
        capacity: int,
        universe: int,
        seed: int | None = None,
        ledger: SpaceLedger | None = None,
        word_bits: int | None = None,
    ):
        if capacity < 1:
            raise ValueError(f"capacity must be at least 1, got {capacity}")
        if universe < 1:
            raise ValueError(f"universe must be at least 1, got {universe}")
        if universe + 1 >= P61:
            raise ValueError("universe too large for the 61-bit field")
        self.capacity = capacity
        self.universe = universe
        self.p = P31 if universe + 1 < P31 else P61
        self._rng = random.Random(seed)
        self._r = self._rng.randrange(2, FINGERPRINT_MOD - 1)
        self._syndromes = [0] * (2 * capacity)
        self._fingerprint = 0
        self.net_count = 0
        self.ledger = ledger if ledger is not None else SpaceLedger()
        if word_bits is None:
            word_bits = max(1, (universe - 1).bit_length())
        self._elem_words = -(-self.p.bit_length() // word_bits)
        self._fp_words = -(-127 // word_bits)
        self.words = 2 * capacity * self._elem_words + 2 * self._fp_words + 1
        self.ledger.charge(self.words)

    def _update(self, x: int, delta: int) -> None:
        if not 0 <= x < self.universe:
            raise ValueError(f"element {x} outside universe [0, {self.universe})")
        p = self.p
        y = x + 1
        s = self._syndromes
        pw = delta % p
        for j in range(len(s)):
            s[j] = (s[j] + pw) % p
            pw = pw * y % p
        self._fingerprint = (self._fingerprint + delta * pow(self._r, y, FINGERPRINT_MOD)) % FINGERPRINT_MOD
        self.net_count += delta

    def insert(self, x: int) -> "SparseRecoverySketch":
        self._update(x, 1)
        return self

    def delete(self, x: int) -> "SparseRecoverySketch":
        self._update(x, -1)
        return self

    def update_many(self, items: Iterable[int], delta: int = 1) -> "SparseRecoverySketch":
        for x in items:
            self._update(x, delta)
        return self

    def recover(self) -> Counter:
        """The exact net multiset ``{element: multiplicity}``.

        Raises :class:`Overflow` when more than ``capacity`` distinct elements
        survive.  Multiplicities may be negative if more deletes than inserts
        were applied to an element.
        """
        scratch = (3 * self.capacity + 3) * self._elem_words
        self.ledger.charge(scratch)
        try:
            return self._decode()
        finally:
            self.ledger.release(scratch)

    def _decode(self) -> Counter:
        p = self.p
        s = self._syndromes
        conn = berlekamp_massey(s, p)
        length = len(conn) - 1
        if length > self.capacity:
            raise Overflow(f"locator degree {length} exceeds capacity {self.capacity}")
        locator = list(reversed(conn))  # monic, lowest degree first
        ys = field_roots(locator, p, 1, self.universe, self._rng)
        if ys is None:
            raise Overflow("locator does not split over the universe")
        counts = self._multiplicities(locator, ys)
        if any(c == 0 for c in counts):
            raise Overflow("zero multiplicity in candidate")
        fp = sum(c * pow(self._r, y, FINGERPRINT_MOD) for c, y in zip(counts, ys)) % FINGERPRINT_MOD
        if fp != self._fingerprint or sum(counts) != self.net_count:
            raise Overflow("candidate failed fingerprint verification")
        expected = [0] * len(s)
        for c, y in zip(counts, ys):
            pw = c % p
            for j in range(len(s)):
                expected[j] += pw
                pw = pw * y % p
        if any(e % p != sj for e, sj in zip(expected, s)):
            raise Overflow("candidate inconsistent with syndromes")
        return Counter({y - 1: c for y, c in zip(ys, counts)})

    def _multiplicities(self, locator: list[int], ys: list[int]) -> list[int]:
        # sum_k q_k s_k = c_i * q(y_i) for q = locator / (z - y_i)
        p = self.p
        s = self._syndromes
        half = p // 2
        out = []
        for y in ys:
            q = _polydiv_exact(locator, [(-y) % p, 1], p)
            num = sum(qk * s[k] for k, qk in enumerate(q)) % p
            den = 0
            for qk in reversed(q):
                den = (den * y + qk) % p
            c = num * _inv(den, p) % p
            out.append(c - p if c > half else c)
        return out

    def release(self) -> None:
        """Return the sketch's words to the ledger."""
        self.ledger.release(self.words)
        self.words = 0


def sketch_insert(s: SparseRecoverySketch, x: int) -> SparseRecoverySketch:
    return s.insert(x)


def sketch_delete(s: SparseRecoverySketch, x: int) -> SparseRecoverySketch:
    return s.delete(x)


def sketch_recover(s: SparseRecoverySketch) -> Counter:
    return s.recover()


def encode_edge(u: int, v: int, n: int) -> int:
    """Edge ``{u, v}`` as the universe element ``u * n + v`` with ``u < v``."""
    if u > v:
        u, v = v, u
    return u * n + v


def decode_edge(x: int, n: int) -> tuple[int, int]:
    return divmod(x, n)
