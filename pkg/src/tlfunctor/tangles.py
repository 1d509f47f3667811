"""The Temperley-Lieb category: planar tangles and their linear combinations.

Boundary numbering.  A tangle ``m -> m'`` has ``m`` bottom points and
``m'`` top points.  Bottom points are numbered ``0 .. m-1`` left to right;
top points continue ``m .. m+m'-1`` read right to left, so that walking
the numbers in order goes once around the boundary circle.  A tangle is a
perfect matching of these points which is non-crossing for that circular
order.  ``partner[i]`` is the point matched to ``i``.

Closed loops are removed during composition, each one contributing the
factor ``-[2]`` of the coefficient ring.
"""

from __future__ import annotations

import functools
import json
import re
from collections.abc import Iterable, Mapping

import flint
import numpy as np

from .errors import ParseError, RingMismatch, ShapeMismatch
from .scalars import (
    CyclotomicScalar,
    GenericScalar,
    RingTag,
    Scalar,
    _phi,
    scalar_from_json,
)

__all__ = [
    "TLMorphism",
    "Tangle",
    "catalan",
    "compose",
    "enumerate_tangles",
    "partial_trace_right",
    "rotate_pi",
    "tensor",
]


def catalan(n: int) -> int:
    out = 1
    for i in range(n):
        out = out * 2 * (2 * i + 1) // (i + 2)
    return out


# ---------------------------------------------------------------------------
# single tangles


def _is_noncrossing(partner: tuple[int, ...]) -> bool:
    stack = []
    for i, j in enumerate(partner):
        if j == i or partner[j] != i:
            return False
        if i < j:
            stack.append(j)
        elif not stack or stack.pop() != i:
            return False
    return not stack


class Tangle:
    """A crossingless planar tangle ``source -> target``."""

    __slots__ = ("_hash", "partner", "source", "target")

    def __init__(self, source: int, target: int, partner: Iterable[int]):
        partner = tuple(int(p) for p in partner)
        if source < 0 or target < 0:
            raise ShapeMismatch("negative number of boundary points")
        if len(partner) != source + target:
            raise ShapeMismatch(
                f"matching has {len(partner)} points, expected {source + target}"
            )
        if not _is_noncrossing(partner):
            raise ValueError(f"not a non-crossing perfect matching: {partner}")
        self.source = source
        self.target = target
        self.partner = partner
        self._hash = hash((source, target, partner))

    @classmethod
    def _trusted(cls, source, target, partner):
        obj = object.__new__(cls)
        obj.source, obj.target, obj.partner = source, target, partner
        obj._hash = hash((source, target, partner))
        return obj

    @classmethod
    def from_pairs(cls, source: int, target: int, pairs) -> Tangle:
        n = source + target
        partner = [-1] * n
        for a, b in pairs:
            a, b = int(a), int(b)
            if not (0 <= a < n and 0 <= b < n) or a == b:
                raise ValueError(f"bad pair ({a},{b}) for {source}->{target}")
            if partner[a] != -1 or partner[b] != -1:
                raise ValueError(f"point used twice in pair ({a},{b})")
            partner[a], partner[b] = b, a
        if -1 in partner:
            raise ValueError(f"unmatched point {partner.index(-1)}")
        return cls(source, target, partner)

    # -- standard tangles
    @classmethod
    def identity(cls, m: int) -> Tangle:
        return cls._trusted(m, m, _identity_partner(m))

    @classmethod
    def cup(cls) -> Tangle:
        return cls._trusted(0, 2, (1, 0))

    @classmethod
    def cap(cls) -> Tangle:
        return cls._trusted(2, 0, (1, 0))

    @classmethod
    def cup_at(cls, m: int, j: int) -> Tangle:
        """``m -> m+2``: a cup whose ends are top strands j and j+1 (1-based)."""
        if not 1 <= j <= m + 1:
            raise ValueError(f"cup position {j} out of range for {m} strands")
        return tensor_tangles(
            tensor_tangles(cls.identity(j - 1), cls.cup()), cls.identity(m - j + 1)
        )

    @classmethod
    def cap_at(cls, m: int, j: int) -> Tangle:
        """``m -> m-2``: a cap joining bottom strands j and j+1 (1-based)."""
        if not 1 <= j <= m - 1:
            raise ValueError(f"cap position {j} out of range for {m} strands")
        return tensor_tangles(
            tensor_tangles(cls.identity(j - 1), cls.cap()), cls.identity(m - j - 1)
        )

    @classmethod
    def e(cls, m: int, j: int) -> Tangle:
        """Temperley-Lieb generator U_j on m strands (cap then cup at j, j+1)."""
        return compose_tangles(cls.cup_at(m - 2, j), cls.cap_at(m, j))[0]

    @classmethod
    def cup_nest(cls, k: int) -> Tangle:
        """``0 -> 2k``: k nested cups."""
        n = 2 * k
        return cls._trusted(0, n, tuple(n - 1 - i for i in range(n)))

    @classmethod
    def cap_nest(cls, k: int) -> Tangle:
        """``2k -> 0``: k nested caps."""
        n = 2 * k
        return cls._trusted(n, 0, tuple(n - 1 - i for i in range(n)))

    # -- structure
    @property
    def pairs(self) -> list[tuple[int, int]]:
        return [(i, j) for i, j in enumerate(self.partner) if i < j]

    def top_position(self, index: int) -> int:
        """Left-to-right position of a top point given its index."""
        return self.source + self.target - 1 - index

    def top_index(self, position: int) -> int:
        return self.source + self.target - 1 - position

    def through_strands(self) -> int:
        return sum(1 for i in range(self.source) if self.partner[i] >= self.source)

    def code(self) -> int:
        """Dyck-word code: bit i set iff point i opens its arc."""
        out = 0
        for i, j in enumerate(self.partner):
            if j > i:
                out |= 1 << i
        return out

    def __eq__(self, other):
        return (
            isinstance(other, Tangle)
            and self.source == other.source
            and self.target == other.target
            and self.partner == other.partner
        )

    def __hash__(self):
        return self._hash

    def __lt__(self, other):
        return (self.source, self.target, self.partner) < (
            other.source,
            other.target,
            other.partner,
        )

    def __repr__(self):
        return f"Tangle({self.to_text()})"

    def to_text(self) -> str:
        inner = ",".join(f"({a},{b})" for a, b in self.pairs)
        return f"{self.source}->{self.target}:[{inner}]"

    @classmethod
    def from_text(cls, text: str) -> Tangle:
        m = _TANGLE_RE.fullmatch(text.strip())
        if not m:
            raise ParseError(f"cannot parse tangle literal {text!r}", 0)
        source, target = int(m.group(1)), int(m.group(2))
        pairs = [tuple(map(int, p)) for p in _PAIR_RE.findall(m.group(3))]
        return cls.from_pairs(source, target, pairs)

    def to_json(self) -> dict:
        return {"source": self.source, "target": self.target, "pairs": [list(p) for p in self.pairs]}

    @classmethod
    def from_json(cls, data) -> Tangle:
        return cls.from_pairs(int(data["source"]), int(data["target"]), data["pairs"])


_TANGLE_RE = re.compile(r"(\d+)\s*->\s*(\d+)\s*:\s*\[((?:\s*\(\s*\d+\s*,\s*\d+\s*\)\s*,?)*)\s*\]")
_PAIR_RE = re.compile(r"\(\s*(\d+)\s*,\s*(\d+)\s*\)")


@functools.cache
def _identity_partner(m: int) -> tuple[int, ...]:
    return tuple(2 * m - 1 - i for i in range(2 * m))


def _decode(code: int, n: int) -> tuple[int, ...]:
    partner = [0] * n
    stack = []
    for i in range(n):
        if code >> i & 1:
            stack.append(i)
        else:
            j = stack.pop()
            partner[i], partner[j] = j, i
    return tuple(partner)


def enumerate_tangles(m: int, mp: int) -> list[Tangle]:
    """All crossingless tangles ``m -> mp``; there are Catalan((m+mp)/2)."""
    return list(_basis(m, mp)[0])


@functools.cache
def _basis(m: int, mp: int) -> tuple[tuple[Tangle, ...], dict]:
    n = m + mp
    if n % 2:
        return (), {}
    out = []

    def walk(prefix, opened, closed):
        if len(prefix) == n:
            out.append(prefix)
            return
        if opened < n // 2:
            walk(prefix + "(", opened + 1, closed)
        if closed < opened:
            walk(prefix + ")", opened, closed + 1)

    walk("", 0, 0)
    tangles = []
    for word in out:
        code = sum(1 << i for i, ch in enumerate(word) if ch == "(")
        tangles.append(Tangle._trusted(m, mp, _decode(code, n)))
    index = {t.partner: i for i, t in enumerate(tangles)}
    return tuple(tangles), index


def compose_tangles(upper: Tangle, lower: Tangle) -> tuple[Tangle, int]:
    """Stack ``lower`` under ``upper``; return the tangle and the number of loops."""
    if lower.target != upper.source:
        raise ShapeMismatch(f"cannot compose {upper.source}->{upper.target} after {lower.source}->{lower.target}")
    partner, loops = _compose_partners(upper.partner, lower.partner, lower.source, lower.target, upper.target)
    return Tangle._trusted(lower.source, upper.target, partner), loops


@functools.lru_cache(maxsize=1 << 18)
def _compose_partners(up, lo, m, k, mp):
    n = m + mp
    res = [0] * n
    seen = [False] * k
    # lower top index of interface position p is m + (k-1-p)
    for start in range(n):
        if start < m:
            j = lo[start]
            while True:
                if j < m:
                    res[start] = j
                    break
                p = k - 1 - (j - m)
                seen[p] = True
                j2 = up[p]
                if j2 >= k:
                    res[start] = m + (j2 - k)
                    break
                seen[j2] = True
                j = lo[m + (k - 1 - j2)]
        else:
            j2 = up[k + (start - m)]
            while True:
                if j2 >= k:
                    res[start] = m + (j2 - k)
                    break
                seen[j2] = True
                j = lo[m + (k - 1 - j2)]
                if j < m:
                    res[start] = j
                    break
                p = k - 1 - (j - m)
                seen[p] = True
                j2 = up[p]
    loops = 0
    for p in range(k):
        if seen[p]:
            continue
        loops += 1
        q = p
        while True:
            seen[q] = True
            q = k - 1 - (lo[m + (k - 1 - q)] - m)
            seen[q] = True
            q = up[q]
            if q == p:
                break
    return tuple(res), loops


def tensor_tangles(left: Tangle, right: Tangle) -> Tangle:
    """Juxtapose ``right`` to the right of ``left``."""
    return Tangle._trusted(
        left.source + right.source,
        left.target + right.target,
        _tensor_partners(left.partner, right.partner, left.source, left.target, right.source, right.target),
    )


@functools.lru_cache(maxsize=1 << 16)
def _tensor_partners(a, b, m1, t1, m2, t2):
    src, tgt = m1 + m2, t1 + t2
    n = src + tgt

    def from_a(i):
        if i < m1:
            return i
        pos = m1 + t1 - 1 - i
        return n - 1 - pos

    def from_b(i):
        if i < m2:
            return m1 + i
        pos = t1 + (m2 + t2 - 1 - i)
        return n - 1 - pos

    res = [0] * n
    for i, j in enumerate(a):
        res[from_a(i)] = from_a(j)
    for i, j in enumerate(b):
        res[from_b(i)] = from_b(j)
    return tuple(res)


def rotate_tangle(t: Tangle) -> Tangle:
    """Half-turn: a cyclic relabelling of the boundary by ``target`` steps."""
    n = t.source + t.target
    shift = t.target
    res = [0] * n
    for i, j in enumerate(t.partner):
        res[(i + shift) % n] = (j + shift) % n
    return Tangle._trusted(t.target, t.source, tuple(res))


# ---------------------------------------------------------------------------
# cell decomposition: a tangle m -> m' is a bottom half on m points, a top half
# on m' points and t through strands joining their free points in order.
# A half is a tuple with the partner position or -1 for a free point.


@functools.cache
def half_diagrams(n: int, t: int) -> tuple[tuple, dict]:
    """Planar halves on ``n`` points with ``t`` free points, and their index."""
    out = []

    def walk(i, stack, free, cur):
        if i == n:
            if not stack and free == t:
                out.append(tuple(cur))
            return
        left = n - i
        if len(stack) + (t - free) > left:
            return
        if not stack and free < t:
            cur.append(-1)
            walk(i + 1, stack, free + 1, cur)
            cur.pop()
        cur.append(None)
        walk(i + 1, stack + (i,), free, cur)
        cur.pop()
        if stack:
            j = stack[-1]
            saved = cur[j]
            cur[j] = i
            cur.append(j)
            walk(i + 1, stack[:-1], free, cur)
            cur.pop()
            cur[j] = saved

    walk(0, (), 0, [])
    return tuple(out), {h: i for i, h in enumerate(out)}


@functools.lru_cache(maxsize=1 << 18)
def _split(partner, m, mp):
    last = m + mp - 1
    bottom = tuple(j if j < m else -1 for j in partner[:m])
    top = tuple(
        last - partner[last - p] if partner[last - p] >= m else -1 for p in range(mp)
    )
    return bottom.count(-1), bottom, top


def _assemble(bottom, top, m, mp):
    last = m + mp - 1
    res = [0] * (m + mp)
    for i, j in enumerate(bottom):
        if j >= 0:
            res[i] = j
    for p, q in enumerate(top):
        if q >= 0:
            res[last - p] = last - q
    fb = [i for i, j in enumerate(bottom) if j < 0]
    ft = [p for p, q in enumerate(top) if q < 0]
    for i, p in zip(fb, ft):
        res[i] = last - p
        res[last - p] = i
    return tuple(res)


@functools.lru_cache(maxsize=1 << 18)
def _pairing(top, bottom):
    """Glue the top half of a lower tangle to the bottom half of an upper one.

    Returns (loops, P, Q): P pairs up through strands of the lower tangle,
    Q those of the upper tangle; unpaired entries pass through.
    """
    k = len(top)
    ft = [p for p in range(k) if top[p] < 0]
    fb = [p for p in range(k) if bottom[p] < 0]
    it = {p: i for i, p in enumerate(ft)}
    ib = {p: i for i, p in enumerate(fb)}
    seen = [False] * k
    P = [-1] * len(ft)
    Q = [-1] * len(fb)
    for start, here, there, idx, out in (
        (ft, bottom, top, it, P),
        (fb, top, bottom, ib, Q),
    ):
        for i, p in enumerate(start):
            if seen[p]:
                continue
            seen[p] = True
            while True:
                q = here[p]
                if q < 0:
                    break
                seen[q] = True
                s = there[q]
                if s < 0:
                    out[i] = idx[q]
                    out[idx[q]] = i
                    break
                seen[s] = True
                p = s
    loops = 0
    for p in range(k):
        if not seen[p]:
            loops += 1
            while not seen[p]:
                seen[p] = True
                q = bottom[p]
                seen[q] = True
                p = top[q]
    return loops, tuple(P), tuple(Q)


@functools.lru_cache(maxsize=1 << 18)
def _collapse(half, pairs):
    free = [i for i, j in enumerate(half) if j < 0]
    res = list(half)
    for i, j in enumerate(pairs):
        if j >= 0:
            res[free[i]] = free[j]
    return tuple(res)


def _l1(p) -> int:
    return sum(abs(int(c)) for c in p.coeffs())


def _unpack(value: int, words: int, count: int, offset: int):
    """Balanced base 2**(64*words) digits of ``value``, low first."""
    raw = np.frombuffer((value + offset).to_bytes(8 * words * count, "little"), dtype=np.uint64)
    if words == 1:
        return (raw ^ np.uint64(1 << 63)).view(np.int64).tolist()
    half = 1 << (64 * words - 1)
    digits = []
    for i in range(count):
        d = 0
        for w in reversed(raw[i * words : (i + 1) * words].tolist()):
            d = (d << 64) | w
        digits.append(d - half)
    return digits


def _compose_cellular(g, f, be):
    """Compose via cell blocks; returns (nums, cmax) before loop shifts.

    Coefficients are Kronecker packed into integers so that each cell block
    reduces to a few integer matrix products.
    """
    m, k, mp = f.source, f.target, g.target
    lower = {}
    for key, p in f._nums.items():
        _, b, t = _split(key, m, k)
        lower.setdefault(t, []).append((b, p))
    upper = {}
    for key, p in g._nums.items():
        _, b, t = _split(key, k, mp)
        upper.setdefault(b, []).append((t, p))
    pairs = {}
    cmax = 0
    for top in lower:
        for bot in upper:
            c, P, Q = _pairing(top, bot)
            cmax = max(cmax, c)
            pairs[(top, bot)] = (c, P, Q)
    loop = {}
    for c in set(v[0] for v in pairs.values()):
        lp, _ = be.loop_factor(c)
        loop[c] = lp.left_shift(2 * (cmax - c)) if be.is_generic else lp

    ydeg = max(p.degree() for p in f._nums.values())
    xdeg = max(p.degree() for p in g._nums.values())
    ldeg = max(p.degree() for p in loop.values())
    count = xdeg + ydeg + ldeg + 1
    bound = (
        sum(_l1(p) for p in f._nums.values())
        * sum(_l1(p) for p in g._nums.values())
        * max(_l1(p) for p in loop.values())
    )
    words = (bound.bit_length() + 2 + 63) // 64
    bits = 64 * words
    base = 1 << bits
    offset = (base >> 1) * ((base**count - 1) // (base - 1))
    pk = {}

    def pack(p):
        v = pk.get(id(p))
        if v is None:
            v = pk[id(p)] = int(p(base))
        return v

    loop_packed = {c: int(p(base)) for c, p in loop.items()}

    by_t = {}
    for (top, bot), (c, P, Q) in pairs.items():
        t = P.count(-1)
        rows, cols, ents = by_t.setdefault(t, ({}, {}, []))
        r = rows.setdefault((top, P), len(rows))
        s = cols.setdefault((bot, Q), len(cols))
        ents.append((r, s, loop_packed[c]))

    nums = {}
    for t, (rows, cols, ents) in by_t.items():
        halves_m, index_m = half_diagrams(m, t)
        halves_mp, index_mp = half_diagrams(mp, t)
        dm, dmp, nr, nc = len(halves_m), len(halves_mp), len(rows), len(cols)
        left = [0] * (dm * nr)
        for (top, P), r in rows.items():
            for b, p in lower[top]:
                left[index_m[_collapse(b, P)] * nr + r] += pack(p)
        mid = [0] * (nr * nc)
        for r, s, v in ents:
            mid[r * nc + s] += v
        right = [0] * (nc * dmp)
        for (bot, Q), s in cols.items():
            for t2, p in upper[bot]:
                right[s * dmp + index_mp[_collapse(t2, Q)]] += pack(p)
        L = flint.fmpz_mat(dm, nr, left)
        M = flint.fmpz_mat(nr, nc, mid)
        R = flint.fmpz_mat(nc, dmp, right)
        if dm * nr * nc + dm * nc * dmp <= nr * nc * dmp + dm * nr * dmp:
            out = (L * M) * R
        else:
            out = L * (M * R)
        entries = out.entries()
        for i in range(dm):
            for j in range(dmp):
                v = int(entries[i * dmp + j])
                if v:
                    p = be.reduce(flint.fmpz_poly(_unpack(v, words, count, offset)))
                    if not p.is_zero():
                        nums[_assemble(halves_m[i], halves_mp[j], m, mp)] = p
    return nums, cmax


# ---------------------------------------------------------------------------
# coefficient backends


class _GenericBackend:
    """Numerators in Z[A] over a common denominator in Z[A], times A**shift."""

    is_generic = True

    def __init__(self):
        self.ring = RingTag.generic()
        self._loops = {}

    def reduce(self, p):
        return p

    def from_scalar(self, s: GenericScalar):
        return s.numerator, s.denominator, s.shift

    def to_scalar(self, num, den, shift) -> GenericScalar:
        return GenericScalar(num, den, shift)

    def loop_factor(self, c):
        """(-[2])**c as (numerator, shift): (-1)^c (1 + A^4)^c A^(-2c)."""
        if c not in self._loops:
            self._loops[c] = (flint.fmpz_poly([-1, 0, 0, 0, -1]) ** c, -2 * c)
        return self._loops[c]

    def one(self):
        return flint.fmpz_poly([1])

    def lcm_factors(self, d1, d2):
        g = d1.gcd(d2)
        if g.is_one():
            return d1 * d2, d2, d1
        return d1 * (d2 // g), d2 // g, d1 // g

    def normalize(self, nums, den, shift):
        if not nums:
            return {}, flint.fmpz_poly([1]), 0
        vals = min(_valuation(p) for p in nums.values())
        if vals:
            nums = {k: p.right_shift(vals) for k, p in nums.items()}
            shift += vals
        g = den
        for p in nums.values():
            if g.degree() == 0 and abs(int(g.coeffs()[0])) == 1:
                break
            g = g.gcd(p)
        if not (g.degree() == 0 and abs(int(g.coeffs()[0])) == 1):
            nums = {k: p // g for k, p in nums.items()}
            den = den // g
        if den.leading_coefficient() < 0:
            nums = {k: -p for k, p in nums.items()}
            den = -den
        return nums, den, shift

    def is_unit_den(self, den):
        return den.is_one()

    def den_key(self, den):
        return tuple(int(c) for c in den.coeffs())


class _RootBackend:
    """Numerators in Z[q] reduced mod Phi_r, over a common positive integer."""

    is_generic = False

    def __init__(self, r: int):
        self.ring = RingTag.root(r)
        self.r = r
        self.phi = _phi(r)
        self._loops = {}

    def reduce(self, p):
        if p.degree() < self.phi.degree():
            return p
        return p % self.phi

    def from_scalar(self, s: CyclotomicScalar):
        p = s.poly
        den = int(p.denom())
        num = flint.fmpz_poly([int(c * den) for c in p.coeffs()])
        return num, den, 0

    def to_scalar(self, num, den, shift) -> CyclotomicScalar:
        return CyclotomicScalar(self.r, flint.fmpq_poly(num) / den)

    def loop_factor(self, c):
        if c not in self._loops:
            two = flint.fmpz_poly([0, 1]) + flint.fmpz_poly([0] * (self.r - 1) + [1])
            self._loops[c] = (((-two) ** c) % self.phi, 0)
        return self._loops[c]

    def one(self):
        return flint.fmpz_poly([1])

    def lcm_factors(self, d1, d2):
        import math

        g = math.gcd(d1, d2)
        return d1 // g * d2, d2 // g, d1 // g

    def normalize(self, nums, den, shift):
        import math

        if not nums:
            return {}, 1, 0
        g = den
        for p in nums.values():
            if g == 1:
                break
            g = math.gcd(g, int(p.content()))
        if g != 1:
            nums = {k: flint.fmpz_poly([int(c) // g for c in p.coeffs()]) for k, p in nums.items()}
            den //= g
        return nums, den, 0

    def is_unit_den(self, den):
        return den == 1

    def den_key(self, den):
        return den


def _valuation(p):
    for i, c in enumerate(p.coeffs()):
        if c != 0:
            return i
    return 0


@functools.cache
def _backend(ring: RingTag):
    return _GenericBackend() if ring.is_generic else _RootBackend(ring.r)


# ---------------------------------------------------------------------------
# linear combinations


class TLMorphism:
    """A linear combination of tangles ``source -> target`` over one ring.

    Internally the coefficients share a denominator: the coefficient of
    tangle ``t`` is ``A**shift * nums[t] / den`` (generic ring) or
    ``nums[t] / den`` (root ring).  ``nums`` is keyed by the matching tuple.
    Values are treated as immutable.
    """

    __slots__ = ("_den", "_normal", "_nums", "_shift", "ring", "source", "target")

    def __init__(self, source: int, target: int, ring: RingTag, terms: Mapping | None = None):
        self.source, self.target, self.ring = source, target, ring
        be = _backend(ring)
        self._nums, self._den, self._shift, self._normal = {}, be.one() if be.is_generic else 1, 0, True
        if terms:
            acc = TLMorphism.zero(source, target, ring)
            for t, c in terms.items():
                if not isinstance(t, Tangle):
                    t = Tangle.from_text(t) if isinstance(t, str) else t
                if (t.source, t.target) != (source, target):
                    raise ShapeMismatch(f"tangle {t.to_text()} is not {source}->{target}")
                acc = acc + TLMorphism.from_tangle(t, ring, c)
            self._nums, self._den, self._shift = acc._nums, acc._den, acc._shift
            self._normal = acc._normal

    @classmethod
    def _make(cls, source, target, ring, nums, den, shift, normal=False):
        obj = object.__new__(cls)
        obj.source, obj.target, obj.ring = source, target, ring
        obj._nums, obj._den, obj._shift, obj._normal = nums, den, shift, normal
        return obj

    # -- constructors
    @classmethod
    def zero(cls, source: int, target: int, ring: RingTag) -> TLMorphism:
        be = _backend(ring)
        return cls._make(source, target, ring, {}, be.one() if be.is_generic else 1, 0, True)

    @classmethod
    def from_tangle(cls, t: Tangle, ring: RingTag, coeff=1) -> TLMorphism:
        be = _backend(ring)
        c = ring.coerce(coeff)
        if c.is_zero():
            return cls.zero(t.source, t.target, ring)
        num, den, shift = be.from_scalar(c)
        return cls._make(t.source, t.target, ring, {t.partner: num}, den, shift, True)

    @classmethod
    def identity(cls, m: int, ring: RingTag) -> TLMorphism:
        return cls.from_tangle(Tangle.identity(m), ring)

    @classmethod
    def cup(cls, ring: RingTag) -> TLMorphism:
        return cls.from_tangle(Tangle.cup(), ring)

    @classmethod
    def cap(cls, ring: RingTag) -> TLMorphism:
        return cls.from_tangle(Tangle.cap(), ring)

    # -- access
    @property
    def _be(self):
        return _backend(self.ring)

    def normalized(self) -> TLMorphism:
        if not self._normal:
            nums, den, shift = self._be.normalize(self._nums, self._den, self._shift)
            self._nums, self._den, self._shift, self._normal = nums, den, shift, True
        return self

    @property
    def terms(self) -> dict[Tangle, Scalar]:
        self.normalized()
        be = self._be
        return {
            Tangle._trusted(self.source, self.target, k): be.to_scalar(p, self._den, self._shift)
            for k, p in sorted(self._nums.items())
        }

    def coefficient(self, t: Tangle) -> Scalar:
        p = self._nums.get(t.partner)
        if p is None:
            return self.ring.zero()
        return self._be.to_scalar(p, self._den, self._shift)

    def __len__(self):
        return len(self._nums)

    def support(self) -> list[Tangle]:
        return [Tangle._trusted(self.source, self.target, k) for k in sorted(self._nums)]

    def is_zero(self) -> bool:
        return not self._nums

    # -- linear structure
    def _check(self, other: TLMorphism):
        if not isinstance(other, TLMorphism):
            raise TypeError(f"expected TLMorphism, got {type(other).__name__}")
        if other.ring != self.ring:
            raise RingMismatch(f"{self.ring} vs {other.ring}")

    def __add__(self, other: TLMorphism) -> TLMorphism:
        self._check(other)
        if (self.source, self.target) != (other.source, other.target):
            raise ShapeMismatch(
                f"cannot add {self.source}->{self.target} and {other.source}->{other.target}"
            )
        if not other._nums:
            return self
        if not self._nums:
            return other
        be = self._be
        den, fa, fb = be.lcm_factors(self._den, other._den)
        shift = min(self._shift, other._shift)
        if be.is_generic:
            fa = fa.left_shift(self._shift - shift)
            fb = fb.left_shift(other._shift - shift)
        nums = {}
        for k, p in self._nums.items():
            nums[k] = p * fa
        for k, p in other._nums.items():
            q = p * fb
            if k in nums:
                s = nums[k] + q
                if s.is_zero():
                    del nums[k]
                else:
                    nums[k] = s
            else:
                nums[k] = q
        return TLMorphism._make(self.source, self.target, self.ring, nums, den, shift)

    def __neg__(self):
        return TLMorphism._make(
            self.source, self.target, self.ring,
            {k: -p for k, p in self._nums.items()}, self._den, self._shift, self._normal,
        )

    def __sub__(self, other):
        return self + (-other)

    def scale(self, c) -> TLMorphism:
        c = self.ring.coerce(c)
        if c.is_zero() or not self._nums:
            return TLMorphism.zero(self.source, self.target, self.ring)
        be = self._be
        num, den, shift = be.from_scalar(c)
        nums = {k: be.reduce(p * num) for k, p in self._nums.items()}
        return TLMorphism._make(
            self.source, self.target, self.ring, nums, self._den * den, self._shift + shift
        )

    def __rmul__(self, c):
        return self.scale(c)

    def __mul__(self, c):
        if isinstance(c, TLMorphism):
            return NotImplemented
        return self.scale(c)

    def __matmul__(self, other: TLMorphism) -> TLMorphism:
        return compose(self, other)

    # -- comparison
    def __eq__(self, other):
        if not isinstance(other, TLMorphism):
            return NotImplemented
        if (self.source, self.target, self.ring) != (other.source, other.target, other.ring):
            return False
        a, b = self.normalized(), other.normalized()
        if set(a._nums) != set(b._nums):
            return False
        if not a._nums:
            return True
        be = self._be
        return (
            a._shift == b._shift
            and be.den_key(a._den) == be.den_key(b._den)
            and all(a._nums[k] == b._nums[k] for k in a._nums)
        )

    __hash__ = None

    # -- category operations (methods)
    def rotate_pi(self) -> TLMorphism:
        return rotate_pi(self)

    def partial_trace_right(self, k: int) -> TLMorphism:
        return partial_trace_right(self, k)

    def tensor(self, other: TLMorphism) -> TLMorphism:
        return tensor(self, other)

    def specialize(self, r: int) -> TLMorphism:
        """Termwise specialization A -> q^((r+1)/2) of a generic morphism."""
        from .scalars import specialize

        if not self.ring.is_generic:
            raise RingMismatch("only generic morphisms can be specialized")
        ring = RingTag.root(r)
        out = {}
        self.normalized()
        den = specialize(GenericScalar(self._den), r)
        if den.is_zero():
            from .errors import PoleAtRootOfUnity

            raise PoleAtRootOfUnity(f"common denominator vanishes at the root, r={r}")
        inv = den.inverse()
        for k, p in self._nums.items():
            c = specialize(GenericScalar(p, 1, self._shift), r) * inv
            if not c.is_zero():
                out[Tangle._trusted(self.source, self.target, k)] = c
        return TLMorphism(self.source, self.target, ring, out)

    # -- io
    def __repr__(self):
        return f"TLMorphism({self.source}->{self.target}, {len(self._nums)} terms, {self.ring})"

    def __str__(self):
        if not self._nums:
            return "0"
        return "\n".join(f"({c}) * {t.to_text()}" for t, c in self.terms.items())

    def to_json(self) -> dict:
        return {
            "source": self.source,
            "target": self.target,
            "ring": "generic" if self.ring.is_generic else {"root": self.ring.r},
            "terms": [
                {"tangle": t.to_json(), "coeff": c.to_json()} for t, c in self.terms.items()
            ],
        }

    @classmethod
    def from_json(cls, data) -> TLMorphism:
        ring_data = data["ring"]
        ring = RingTag.generic() if ring_data == "generic" else RingTag.root(int(ring_data["root"]))
        terms = {}
        for entry in data["terms"]:
            t = Tangle.from_json(entry["tangle"])
            terms[t] = scalar_from_json(entry["coeff"])
        return cls(int(data["source"]), int(data["target"]), ring, terms)

    def dumps(self) -> str:
        return json.dumps(self.to_json(), sort_keys=True)


# ---------------------------------------------------------------------------
# composition and tensor of linear combinations

_BULK_THRESHOLD = 2048


def compose(g: TLMorphism, f: TLMorphism) -> TLMorphism:
    """``g o f``: ``f`` below, ``g`` on top."""
    if not isinstance(g, TLMorphism) or not isinstance(f, TLMorphism):
        raise TypeError("compose expects TLMorphism arguments")
    if g.ring != f.ring:
        raise RingMismatch(f"{g.ring} vs {f.ring}")
    if f.target != g.source:
        raise ShapeMismatch(
            f"cannot compose {g.source}->{g.target} after {f.source}->{f.target}"
        )
    m, k, mp = f.source, f.target, g.target
    ring = f.ring
    if not f._nums or not g._nums:
        return TLMorphism.zero(m, mp, ring)
    be = _backend(ring)
    if len(g._nums) * len(f._nums) > _BULK_THRESHOLD:
        nums, cmax = _compose_cellular(g, f, be)
    else:
        acc: dict = {}
        for a, na in g._nums.items():
            for b, nb in f._nums.items():
                slot = _compose_partners(a, b, m, k, mp)
                prod = na * nb
                if slot in acc:
                    acc[slot] += prod
                else:
                    acc[slot] = prod
        nums = {}
        cmax = max(c for _, c in acc) if acc else 0
        for (key, c), p in acc.items():
            lp, _ = be.loop_factor(c)
            if c:
                p = p * lp
            if be.is_generic and cmax - c:
                p = p.left_shift(2 * (cmax - c))
            if key in nums:
                nums[key] += p
            else:
                nums[key] = p
        nums = {key: be.reduce(p) for key, p in nums.items()}
        nums = {key: p for key, p in nums.items() if not p.is_zero()}
    shift = g._shift + f._shift + (-2 * cmax if be.is_generic else 0)
    out = TLMorphism._make(m, mp, ring, nums, g._den * f._den, shift)
    return out.normalized()


def tensor(f: TLMorphism, g: TLMorphism) -> TLMorphism:
    """``f (x) g``: ``g`` placed to the right of ``f``."""
    if not isinstance(f, TLMorphism) or not isinstance(g, TLMorphism):
        raise TypeError("tensor expects TLMorphism arguments")
    if f.ring != g.ring:
        raise RingMismatch(f"{f.ring} vs {g.ring}")
    be = _backend(f.ring)
    nums = {}
    for a, pa in f._nums.items():
        for b, pb in g._nums.items():
            key = _tensor_partners(a, b, f.source, f.target, g.source, g.target)
            nums[key] = be.reduce(pa * pb)
    return TLMorphism._make(
        f.source + g.source, f.target + g.target, f.ring, nums,
        f._den * g._den, f._shift + g._shift,
    ).normalized()


def rotate_pi(f: TLMorphism) -> TLMorphism:
    nums = {}
    for k, p in f._nums.items():
        nums[rotate_tangle(Tangle._trusted(f.source, f.target, k)).partner] = p
    return TLMorphism._make(f.target, f.source, f.ring, nums, f._den, f._shift, f._normal)


def partial_trace_right(f: TLMorphism, k: int) -> TLMorphism:
    """Close the rightmost ``k`` strands of an endomorphism on the right."""
    if f.source != f.target:
        raise ShapeMismatch(f"partial trace needs an endomorphism, got {f.source}->{f.target}")
    m = f.source
    if not 0 <= k <= m:
        raise ShapeMismatch(f"cannot close {k} of {m} strands")
    ring = f.ring
    ident = TLMorphism.identity(m - k, ring)
    cups = tensor(ident, TLMorphism.from_tangle(Tangle.cup_nest(k), ring))
    caps = tensor(ident, TLMorphism.from_tangle(Tangle.cap_nest(k), ring))
    return compose(caps, compose(tensor(f, TLMorphism.identity(k, ring)), cups))


def tangle_morphism(t: Tangle, ring: RingTag) -> TLMorphism:
    return TLMorphism.from_tangle(t, ring)
