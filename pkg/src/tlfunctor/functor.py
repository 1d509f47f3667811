"""The functor from Temperley-Lieb diagrams to intertwiners of tensor powers of X.

A strand goes to X = span(a0, a1); m strands go to X^{⊗m} with the basis of
bit strings (last factor fastest).  Cups and caps go to

    c(1) = q a0⊗a1 - a1⊗a0,        e(a0⊗a1) = -1,  e(a1⊗a0) = q^-1,

and e vanishes on a0⊗a0 and a1⊗a1.  Because every arc of a planar matching
can be evaluated independently, the image of a tangle is a signed monomial
matrix with exactly 2^(number of arcs) nonzero entries; we build it from that
closed form and keep the slice-by-slice composition as a second route.

Large compositions are evaluated in "apply" mode: a morphism M acting on some
middle strands acts on a block of column vectors as I ⊗ M ⊗ I without ever
forming the big Kronecker product.
"""

from __future__ import annotations

import functools
import math
import random
from dataclasses import dataclass

import numpy as np

from . import jw
from .appendix import projector_simple, projector_top
from .cycmat import CycMatrix, _field, _times_q
from .errors import IndexOutOfRange, ShapeMismatch
from .report import Report, timed
from .scalars import CyclotomicScalar, RingTag, quantum_factorial, quantum_int
from .tangles import Tangle, TLMorphism, compose, enumerate_tangles, tensor
from .uq import (
    embed_projective,
    embed_simple,
    embed_top,
    independent_rows,
    named_morphism,
    tensor_power,
)

__all__ = [
    "FunctorContext",
    "Layer",
    "apply_at",
    "context",
    "slice_tangle",
    "suite_functor",
    "verify_c_d",
    "verify_idempotent_images",
    "verify_relations_well_defined",
]

# dense images are formed only up to this many matrix cells
DENSE_LIMIT = 1 << 18


# ---------------------------------------------------------------------------
# slicing


@dataclass(frozen=True)
class Layer:
    """One elementary slice: a cap or a cup at 1-based position j on ``strands`` inputs."""

    kind: str
    strands: int
    j: int

    @property
    def tangle(self) -> Tangle:
        if self.kind == "cap":
            return Tangle.cap_at(self.strands, self.j)
        return Tangle.cup_at(self.strands, self.j)

    def __str__(self):
        return f"{self.kind}@{self.j} on {self.strands}"


def slice_tangle(t: Tangle) -> list[Layer]:
    """Deterministic bottom-up slicing: caps first (leftmost innermost), then cups."""
    layers = []
    # bottom arcs, by left-to-right positions of the remaining bottom points
    bottom = list(range(t.source))
    while True:
        for k in range(len(bottom) - 1):
            if t.partner[bottom[k]] == bottom[k + 1]:
                layers.append(Layer("cap", len(bottom), k + 1))
                del bottom[k : k + 2]
                break
        else:
            break
    # top arcs are peeled from the top, so they are appended in reverse
    top = [t.top_index(p) for p in range(t.target)]
    cups = []
    while True:
        for k in range(len(top) - 1):
            if t.partner[top[k]] == top[k + 1]:
                cups.append(Layer("cup", len(top) - 2, k + 1))
                del top[k : k + 2]
                break
        else:
            break
    return layers + cups[::-1]


# ---------------------------------------------------------------------------
# closed-form tangle images


@functools.lru_cache(maxsize=4096)
def _monomials(t: Tangle):
    """(rows, cols, sign, power): the image of t is sum sign*q^power at (rows, cols)."""
    m, mp = t.source, t.target
    arcs = t.pairs
    n = len(arcs)
    states = (np.arange(1 << n, dtype=np.int64)[:, None] >> np.arange(n)) & 1
    rows = np.zeros(1 << n, dtype=np.int64)
    cols = np.zeros(1 << n, dtype=np.int64)
    minus = np.zeros(1 << n, dtype=np.int64)
    power = np.zeros(1 << n, dtype=np.int64)
    for k, (a, b) in enumerate(arcs):
        s = states[:, k]
        if b < m:  # cap joining bottom points a < b
            cols += np.where(s == 0, 1 << (m - 1 - b), 1 << (m - 1 - a))
            minus += 1 - s
            power -= s
        elif a >= m:  # cup joining top points; positions are reversed
            u, v = t.top_position(b), t.top_position(a)
            rows += np.where(s == 0, 1 << (mp - 1 - v), 1 << (mp - 1 - u))
            minus += s
            power += 1 - s
        else:  # through strand
            cols += s << (m - 1 - a)
            rows += s << (mp - 1 - t.top_position(b))
    sign = 1 - 2 * (minus & 1)
    return rows, cols, sign, power


def _cell_sum(r, shape, rows, cols, vals, den):
    """CycMatrix with the (d, n) value columns ``vals`` added at cells (rows, cols)."""
    d, _ = _field(r)
    R, C = shape
    lin = rows * C + cols
    out = [_bincount(lin, vals[a], R * C) for a in range(d)]
    dtype = object if any(o.dtype == object for o in out) else np.int64
    num = np.stack([o.astype(dtype) for o in out]).reshape(d, R, C)
    return CycMatrix(r, num, den)


def _bincount(lin, vals, size):
    bound = int(np.abs(vals).max()) * len(vals) if len(vals) else 0
    if bound < (1 << 53):
        return np.rint(np.bincount(lin, weights=vals.astype(np.float64), minlength=size)).astype(np.int64)
    out = np.zeros(size, dtype=object)
    np.add.at(out, lin, vals.astype(object))
    return out


def _q_table(coeffs: np.ndarray, r: int) -> np.ndarray:
    """(r, d) table of coordinates of q^k * c for k = 0..r-1."""
    return np.stack([_times_q(coeffs.reshape(-1, 1), k, r)[:, 0] for k in range(r)])


# ---------------------------------------------------------------------------
# apply mode


def apply_at(M: CycMatrix, left: int, right: int, V: CycMatrix) -> CycMatrix:
    """(I_{2^left} ⊗ M ⊗ I_{2^right}) @ V."""
    a, c = 1 << left, 1 << right
    d, k = V.d, V.cols
    n_in = M.cols
    if V.rows != a * n_in * c:
        raise ShapeMismatch(f"vector length {V.rows} does not match {a}*{n_in}*{c}")
    if a == 1 and c == 1:
        return M @ V
    W = V.num.reshape(d, a, n_in, c, k).transpose(0, 2, 1, 3, 4).reshape(d, n_in, a * c * k)
    out = M @ CycMatrix(V.r, W, V.den, normal=True)
    X = out.num.reshape(d, M.rows, a, c, k).transpose(0, 2, 1, 3, 4).reshape(d, a * M.rows * c, k)
    return CycMatrix(V.r, np.ascontiguousarray(X), out.den)


def _basis_kron(B: CycMatrix, left: int, right: int) -> CycMatrix:
    """Columns of I_{2^left} ⊗ B ⊗ I_{2^right}: a basis of the image of id ⊗ (proj) ⊗ id."""
    out = B
    if left:
        out = CycMatrix.identity(B.r, 1 << left).kron(out)
    if right:
        out = out.kron(CycMatrix.identity(B.r, 1 << right))
    return out


# ---------------------------------------------------------------------------


class FunctorContext:
    """Cached images and embedded bases at level r.  Treated as immutable."""

    def __init__(self, r: int):
        if r < 3 or r % 2 == 0:
            raise ValueError(f"level must be odd and at least 3, got {r}")
        self.r = r
        self.ring = RingTag.root(r)
        self.d, _ = _field(r)
        self._morph_cache: dict[int, tuple[TLMorphism, CycMatrix]] = {}
        self._f: dict[tuple[str, int], CycMatrix] = {}
        self._cap = CycMatrix.from_entries(r, 1, 4, [(0, 1, -1), (0, 2, CyclotomicScalar.q(r, -1))])
        self._cup = CycMatrix.from_entries(r, 4, 1, [(1, 0, CyclotomicScalar.q(r, 1)), (2, 0, -1)])

    # -- scalars
    def Q(self, k):
        return quantum_int(k, self.ring)

    def fact(self, k):
        return quantum_factorial(k, self.ring)

    # -- generators
    @property
    def cup(self) -> CycMatrix:
        return self._cup

    @property
    def cap(self) -> CycMatrix:
        return self._cap

    # -- tangles
    def tangle(self, t: Tangle) -> CycMatrix:
        """Image of a single tangle from the closed form."""
        return self._tangle_sum([(t, 1)], (1 << t.target, 1 << t.source))

    def tangle_by_layers(self, t: Tangle, trace: list | None = None) -> CycMatrix:
        """Image of a tangle as the product of its elementary slices."""
        V = CycMatrix.identity(self.r, 1 << t.source)
        return self.apply_tangle(t, 0, 0, V, trace)

    def apply_tangle(self, t: Tangle, left: int, right: int, V: CycMatrix, trace=None) -> CycMatrix:
        for layer in slice_tangle(t):
            if trace is not None:
                trace.append(layer)
            if layer.kind == "cap":
                V = apply_at(self._cap, left + layer.j - 1, right + layer.strands - layer.j - 1, V)
            else:
                V = apply_at(self._cup, left + layer.j - 1, right + layer.strands - layer.j + 1, V)
        return V

    def _tangle_sum(self, terms, shape) -> CycMatrix:
        """Sum of coefficient * image(tangle), coefficients in Q(q)."""
        r = self.r
        parts = []
        den = 1
        for t, c in terms:
            coeffs, dd = _parts(c, r)
            parts.append((t, coeffs, dd))
            den = den * dd // math.gcd(den, dd)
        cells = []
        for t, coeffs, dd in parts:
            rows, cols, sign, power = _monomials(t)
            table = _q_table(np.array(coeffs, dtype=object if _big(coeffs) else np.int64) * (den // dd), r)
            vals = table[power % r] * sign[:, None]
            cells.append((rows, cols, vals.T))
        if not cells:
            return CycMatrix.zeros(r, *shape)
        rows = np.concatenate([c[0] for c in cells])
        cols = np.concatenate([c[1] for c in cells])
        vals = np.concatenate([c[2] for c in cells], axis=1)
        return _cell_sum(r, shape, rows, cols, vals, den)

    # -- linear combinations
    def _root(self, f: TLMorphism) -> TLMorphism:
        if f.ring.is_generic:
            return f.specialize(self.r)
        if f.ring != self.ring:
            raise ShapeMismatch(f"morphism over {f.ring} used at level {self.r}")
        return f

    def morphism(self, f: TLMorphism) -> CycMatrix:
        """Dense image of a TL morphism (specialized first if generic)."""
        hit = self._morph_cache.get(id(f))
        if hit is not None and hit[0] is f:
            return hit[1]
        g = self._root(f)
        M = self._tangle_sum(list(g.terms.items()), (1 << g.target, 1 << g.source))
        self._morph_cache[id(f)] = (f, M)
        return M

    def apply_morphism(self, f: TLMorphism, left: int, right: int, V: CycMatrix) -> CycMatrix:
        if (1 << (f.source + f.target)) <= DENSE_LIMIT:
            return apply_at(self.morphism(f), left, right, V)
        g = self._root(f)
        total = None
        for t, c in g.terms.items():
            term = self.apply_tangle(t, left, right, V).scale(c)
            total = term if total is None else total + term
        if total is None:
            return CycMatrix.zeros(self.r, 1 << (left + f.target + right), V.cols)
        return total

    def image(self, x) -> CycMatrix:
        """Dense image of a Tangle, TLMorphism, or extended expression."""
        if isinstance(x, Tangle):
            return self.tangle(x)
        if isinstance(x, TLMorphism):
            return self.morphism(x)
        return x.image(self)

    # -- projectors
    def phi(self, m: int) -> CycMatrix:
        """F(f_m) for m <= r-1 or m = 2r-1."""
        if not (0 <= m <= self.r - 1 or m == 2 * self.r - 1):
            raise IndexOutOfRange(f"f_{m} does not exist at level {self.r}")
        key = ("f", m)
        if key not in self._f:
            self._f[key] = self.morphism(jw.build_f(m, self.ring))
        return self._f[key]

    def psi(self, m: int) -> CycMatrix:
        """F(g_m) for r <= m <= 2r-2."""
        if not self.r <= m <= 2 * self.r - 2:
            raise IndexOutOfRange(f"g_{m} does not exist at level {self.r}")
        key = ("g", m)
        if key not in self._f:
            self._f[key] = self.morphism(jw.build_g(m, self.ring))
        return self._f[key]

    def projector(self, tag: str, m: int) -> CycMatrix:
        return self.phi(m) if tag == "f" else self.psi(m)

    # -- embedded bases and coordinate maps
    def basis(self, kind: str, m: int) -> CycMatrix:
        if kind == "X":
            return embed_simple(m, self.r).vectors
        if kind == "P":
            return embed_projective(m, self.r).vectors
        if kind == "top":
            return embed_top(self.r).vectors
        B = embed_top(self.r)
        pre = "p" if kind == "top+" else "n"
        return B.vectors.take(cols=[B.labels.index(f"{pre}{j}") for j in range(self.r)])

    def image_basis(self, tag: str, m: int) -> CycMatrix:
        """Embedded basis of the image of F(f_m) or F(g_m)."""
        if tag == "f":
            return self.basis("top" if m == 2 * self.r - 1 else "X", m)
        return self.basis("P", m)

    @functools.cache
    def reader(self, kind: str, m: int) -> CycMatrix:
        """L with B @ L = projector: reads coordinates of the projected vector."""
        if kind == "X":
            B, proj = self.basis("X", m), self.phi(m)
        elif kind == "P":
            B, proj = self.basis("P", m), self.psi(m)
        elif kind == "top":
            B, proj = self.basis("top", m), self.phi(2 * self.r - 1)
        else:
            raise ValueError(kind)
        rows = independent_rows(B)
        L = B.take(rows=rows).inverse() @ proj.take(rows=rows)
        return L

    def hat(self, M: CycMatrix, source: tuple[str, int], target: tuple[str, int]) -> CycMatrix:
        """Transport an abstract module map to tensor-power coordinates."""
        return self.basis(*target) @ M @ self.reader(*source)

    # -- extended generators
    @functools.cached_property
    def generators(self) -> dict[str, CycMatrix]:
        """P+, P-, I+, I-: X^{⊗2r-1} <-> X^{⊗r-1}, by exact solves against embedded bases."""
        r = self.r
        top = embed_top(r)
        L_top = self.reader("top", 2 * r - 1)
        L_low = self.reader("X", r - 1)
        B_low = self.basis("X", r - 1)
        out = {}
        for sign, pre in (("+", "p"), ("-", "n")):
            idx = [top.labels.index(f"{pre}{j}") for j in range(r)]
            out["P" + sign] = B_low @ L_top.take(rows=idx)
            out["I" + sign] = top.vectors.take(cols=idx) @ L_low
        return out

    def P(self, sign: str) -> CycMatrix:
        return self.generators["P" + sign]

    def I(self, sign: str) -> CycMatrix:
        return self.generators["I" + sign]


def _big(coeffs) -> bool:
    return any(abs(int(c)) >= (1 << 40) for c in coeffs)


def _parts(c, r):
    from .cycmat import scalar_parts

    return scalar_parts(c, r)


@functools.cache
def context(r: int) -> FunctorContext:
    return FunctorContext(r)


# ---------------------------------------------------------------------------
# verification


def _sign(k):
    return -1 if k % 2 else 1


def _intertwines(M: CycMatrix, m: int, mp: int, r: int) -> bool:
    A, B = tensor_power(m, r), tensor_power(mp, r)
    return all(M @ A.act(g) == B.act(g) @ M for g in "EFK")


def verify_idempotent_images(r: int) -> Report:
    """Images of f_m, g_m, h_m, p_m, i_m."""
    rep = Report(f"functor images of idempotents r={r}")
    ctx = context(r)
    R = ctx.ring
    with timed(rep):
        for m in range(r):
            phi = ctx.phi(m)
            B = ctx.basis("X", m)
            ok = phi @ phi == phi and phi @ B == B and phi.rank() == m + 1
            rep.add(f"F(f_{m}) projects onto embedded X_{m}, rank {m + 1}", ok)
            rep.add(f"F(f_{m}) intertwines", _intertwines(phi, m, m, r))
            rep.add(f"F(f_{m}) equals the kernel-characterized projector", phi == projector_simple(m, r))
        top = 2 * r - 1
        phi = ctx.phi(top)
        B = ctx.basis("top", top)
        ok = phi @ phi == phi and phi @ B == B and phi.rank() == 2 * r
        rep.add(f"F(f_{top}) projects onto embedded X_{top}, rank {2 * r}", ok)
        rep.add(f"F(f_{top}) intertwines", _intertwines(phi, top, top, r))
        both = projector_top(r, "+") + projector_top(r, "-")
        rep.add(f"F(f_{top}) equals the sum of kernel-characterized projectors", phi == both)
        for s in "+-":
            ok = ctx.I(s) @ ctx.P(s) == projector_top(r, s)
            rep.add(f"I{s} P{s} equals the kernel-characterized projector onto X^{s}_(r-1)", ok)
        for m in range(r, 2 * r - 1):
            psi = ctx.psi(m)
            B = ctx.basis("P", m)
            ok = psi @ psi == psi and psi @ B == B and psi.rank() == 2 * r
            rep.add(f"F(g_{m}) projects onto embedded P_{m}, rank {2 * r}", ok)
            rep.add(f"F(g_{m}) intertwines", _intertwines(psi, m, m, r))
            k = 2 * r - m - 2
            eps = ctx.hat(named_morphism("eps", m, r).matrix, ("P", m), ("P", m))
            pi = ctx.hat(named_morphism("pi", m, r).matrix, ("P", m), ("X", k))
            iota = ctx.hat(named_morphism("iota", m, r).matrix, ("X", k), ("P", m))
            Fh = ctx.morphism(jw.build_h(m, R))
            Fp = ctx.morphism(jw.build_p(m, R))
            Fi = ctx.morphism(jw.build_i(m, R))
            rep.add(f"F(h_{m}) = -eps/[{m + 1}]", Fh == eps.scale(-1 / ctx.Q(m + 1)))
            c = _sign(m) * ctx.fact(m - r) / ctx.Q(m + 1)
            rep.add(f"F(p_{m}) = (-1)^m [m-r]!/[m+1] pi", Fp == pi.scale(c))
            rep.add(f"F(i_{m}) = iota/[m-r+1]!", Fi == iota.scale(1 / ctx.fact(m - r + 1)))
    return rep


def verify_generators(r: int) -> Report:
    rep = Report(f"extended generators r={r}")
    ctx = context(r)
    with timed(rep):
        top = 2 * r - 1
        F0 = ctx.phi(r - 1)
        for s in "+-":
            rep.add(f"P{s} intertwines", _intertwines(ctx.P(s), top, r - 1, r))
            rep.add(f"I{s} intertwines", _intertwines(ctx.I(s), r - 1, top, r))
            for t in "+-":
                want = F0 if s == t else CycMatrix.zeros(r, F0.rows, F0.cols)
                rep.add(f"P{s} I{t} = {'F(f_(r-1))' if s == t else '0'}", ctx.P(s) @ ctx.I(t) == want)
        total = ctx.I("+") @ ctx.P("+") + ctx.I("-") @ ctx.P("-")
        rep.add(f"I+ P+ + I- P- = F(f_{top})", total == ctx.phi(top))
        for s in "+-":
            abstract = named_morphism("pi2r-1", 0, r, s).matrix
            rep.add(f"P{s} transports pi^{s}", ctx.hat(abstract, ("top", top), ("X", r - 1)) == ctx.P(s))
            abstract = named_morphism("iota2r-1", 0, r, s).matrix
            rep.add(f"I{s} transports iota^{s}", ctx.hat(abstract, ("X", r - 1), ("top", top)) == ctx.I(s))
    return rep


def verify_basics(r: int, seed: int = 0) -> Report:
    rep = Report(f"functor basics r={r}")
    ctx = context(r)
    R = ctx.ring
    with timed(rep):
        cup = ctx.tangle(Tangle.cup())
        rep.add("image of cup is q a0a1 - a1a0", cup == ctx.cup)
        loop = ctx.tangle(Tangle.cap()) @ cup
        rep.add("image of cap after cup is -q - q^-1", loop == CycMatrix.scalar(r, -ctx.Q(2)))
        snake = compose(tensor(TLMorphism.identity(1, R), TLMorphism.cap(R)), tensor(TLMorphism.cup(R), TLMorphism.identity(1, R)))
        rep.add("image of the snake is the identity", ctx.morphism(snake) == CycMatrix.identity(r, 2))
        ok = all(
            ctx.tangle(t) == ctx.tangle_by_layers(t)
            for m in range(6)
            for mp in range(6)
            if (m + mp) % 2 == 0
            for t in enumerate_tangles(m, mp)
        )
        rep.add("closed form agrees with slice-by-slice composition (up to 5+5 points)", ok)
        ok = all(
            _intertwines(ctx.tangle(t), t.source, t.target, r)
            for m in range(5)
            for mp in range(5)
            if (m + mp) % 2 == 0
            for t in enumerate_tangles(m, mp)
        )
        rep.add("every tangle image intertwines (up to 4+4 points)", ok)
        rng = random.Random(seed)
        ok_c = ok_t = True
        for _ in range(40):
            a, b, c = rng.randrange(6), rng.randrange(6), rng.randrange(6)
            if (a + b) % 2 or (b + c) % 2:
                b = b + 1 if b < 5 else b - 1
                if (a + b) % 2 or (b + c) % 2:
                    continue
            s = rng.choice(enumerate_tangles(a, b))
            t = rng.choice(enumerate_tangles(b, c))
            S, T = TLMorphism.from_tangle(s, R), TLMorphism.from_tangle(t, R)
            ok_c &= ctx.morphism(compose(T, S)) == ctx.tangle(t) @ ctx.tangle(s)
            ok_t &= ctx.morphism(tensor(S, T)) == ctx.tangle(s).kron(ctx.tangle(t))
        rep.add("images respect composition (random pairs up to 5 points)", ok_c)
        rep.add("images respect tensor products (random pairs up to 5 points)", ok_t)
    return rep


def verify_relations_well_defined(r: int) -> Report:
    from .extended import relations_well_defined

    return relations_well_defined(r)


def verify_c_d(r: int) -> Report:
    from .extended import verify_c_d_images

    return verify_c_d_images(r)


def suite_functor(r: int) -> Report:
    rep = Report(f"functor r={r}")
    with timed(rep):
        for part in (verify_basics(r), verify_idempotent_images(r), verify_generators(r), verify_relations_well_defined(r), verify_c_d(r)):
            rep.merge(part)
    return rep
