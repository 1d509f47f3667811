"""Jones-Wenzl idempotents, simple and non-semisimple.

``f(m)`` is the usual Jones-Wenzl projector.  For a level ``r`` and
``r <= m <= 2r-2`` the non-semisimple projector is ``g(m) = f(m) + h(m)/[r]``
where ``h(m)`` is a multiple of two copies of ``f(r-1)`` joined by nested
arcs.  Over the generic ring everything is built from these definitions.
At a root of unity ``f(m)`` has a pole for ``r <= m <= 2r-2``, so ``g(m)``
and ``f(2r-1)`` are built from recursions whose coefficients specialize.

Shapes used throughout, with ``n = m-r+1`` and ``F = f(r-1)``:

* ``p(m) = (id ⊗ capnest(n)) (F ⊗ id_n)``, a morphism ``m -> 2r-m-2``;
* ``i(m) = (F ⊗ id_n) (id ⊗ cupnest(n))``, a morphism ``2r-m-2 -> m``;
* ``h(m) = (-1)^m [2r-m-1] i(m) p(m)``.
"""

from __future__ import annotations

import threading
from dataclasses import dataclass

from .errors import IndexOutOfRange, PoleAtRootOfUnity
from .scalars import RingTag, quantum_brace_prime, quantum_int
from .tangles import Tangle, TLMorphism, compose, tensor

__all__ = [
    "IdempotentHandle",
    "build_f",
    "build_g",
    "build_h",
    "build_i",
    "build_p",
    "export_idempotents",
    "f_top_recursion",
    "g_recursion",
]

_memo: dict = {}
_lock = threading.RLock()


def _memoized(key, build):
    with _lock:
        if key in _memo:
            return _memo[key]
    value = build()
    with _lock:
        return _memo.setdefault(key, value)


def clear_cache() -> None:
    with _lock:
        _memo.clear()


def _level(ring: RingTag, r: int | None) -> int:
    if ring.is_root:
        if r is not None and r != ring.r:
            raise ValueError(f"level {r} does not match ring {ring}")
        return ring.r
    if r is None:
        raise ValueError("the generic ring needs an explicit level r")
    if r < 3 or r % 2 == 0:
        raise ValueError(f"level must be an odd integer >= 3, got {r}")
    return r


def _check_middle(m: int, r: int) -> None:
    if not r <= m <= 2 * r - 2:
        raise IndexOutOfRange(f"index {m} outside [{r}, {2 * r - 2}] for level {r}")


def _id(m, ring):
    return TLMorphism.identity(m, ring)


def _U(m: int, j: int, ring) -> TLMorphism:
    """Cap then cup on strands j, j+1 (1-based) of m strands."""
    return TLMorphism.from_tangle(Tangle.e(m, j), ring)


def _q(a, b, ring):
    return quantum_int(a, ring) / quantum_int(b, ring)


# ---------------------------------------------------------------------------
# simple idempotents


def _wenzl(m: int, ring: RingTag) -> TLMorphism:
    if m <= 1:
        return _id(m, ring)
    prev = tensor(build_f(m - 1, ring), _id(1, ring))
    middle = compose(prev, compose(_U(m, m - 1, ring), prev))
    return prev + _q(m - 1, m, ring) * middle


def build_f(m: int, ring: RingTag) -> TLMorphism:
    """The m-th simple Jones-Wenzl idempotent."""
    if m < 0:
        raise IndexOutOfRange(f"negative index {m}")
    if ring.is_root:
        r = ring.r
        if r <= m <= 2 * r - 2 or m > 2 * r - 1:
            raise PoleAtRootOfUnity(f"f({m}) does not specialize at level {r}")
        if m == 2 * r - 1:
            return _memoized(("f", m, ring), lambda: _f_top(ring))
    return _memoized(("f", m, ring), lambda: _wenzl(m, ring))


def _f_top(ring: RingTag) -> TLMorphism:
    return f_top_recursion(ring, ring.r)


# ---------------------------------------------------------------------------
# nested-arc pieces


def build_p(m: int, ring: RingTag, r: int | None = None) -> TLMorphism:
    r = _level(ring, r)
    _check_middle(m, r)

    def build():
        n = m - r + 1
        caps = tensor(_id(2 * r - m - 2, ring), TLMorphism.from_tangle(Tangle.cap_nest(n), ring))
        return compose(caps, tensor(build_f(r - 1, ring), _id(n, ring)))

    return _memoized(("p", m, ring, r), build)


def build_i(m: int, ring: RingTag, r: int | None = None) -> TLMorphism:
    r = _level(ring, r)
    _check_middle(m, r)

    def build():
        n = m - r + 1
        cups = tensor(_id(2 * r - m - 2, ring), TLMorphism.from_tangle(Tangle.cup_nest(n), ring))
        return compose(tensor(build_f(r - 1, ring), _id(n, ring)), cups)

    return _memoized(("i", m, ring, r), build)


def build_h(m: int, ring: RingTag, r: int | None = None) -> TLMorphism:
    r = _level(ring, r)
    _check_middle(m, r)

    def build():
        sign = -1 if m % 2 else 1
        closed = compose(build_i(m, ring, r), build_p(m, ring, r))
        return (sign * quantum_int(2 * r - m - 1, ring)) * closed

    return _memoized(("h", m, ring, r), build)


# ---------------------------------------------------------------------------
# non-semisimple idempotents


def build_g(m: int, ring: RingTag, r: int | None = None) -> TLMorphism:
    """The m-th non-semisimple Jones-Wenzl idempotent at level r."""
    r = _level(ring, r)
    _check_middle(m, r)
    if ring.is_generic:
        def build():
            return build_f(m, ring) + (1 / quantum_int(r, ring)) * build_h(m, ring, r)
    else:
        def build():
            return g_recursion(m, ring, r)
    return _memoized(("g", m, ring, r), build)


# ---------------------------------------------------------------------------
# recursions that specialize; they hold over the generic ring as identities


def _closing_term(m: int, ring: RingTag, r: int) -> TLMorphism:
    """(h(m-1) ⊗ 1) U (h(m-1) ⊗ 1) / [r], written without dividing by [r].

    Equals (-1)^m [2r-m]^2/[2r-m+1] (i(m-1) ⊗ 1) f(2r-m) (p(m-1) ⊗ 1).
    """
    one = _id(1, ring)
    sign = -1 if m % 2 else 1
    coeff = sign * quantum_int(2 * r - m, ring) ** 2 / quantum_int(2 * r - m + 1, ring)
    inner = compose(build_f(2 * r - m, ring), tensor(build_p(m - 1, ring, r), one))
    return coeff * compose(tensor(build_i(m - 1, ring, r), one), inner)


def _wenzl_step(prev: TLMorphism, m: int, ring: RingTag) -> tuple[TLMorphism, TLMorphism]:
    """(prev ⊗ 1, (prev ⊗ 1) U_{m-1} (prev ⊗ 1))."""
    lifted = tensor(prev, _id(1, ring))
    return lifted, compose(lifted, compose(_U(m, m - 1, ring), lifted))


def g_recursion(m: int, ring: RingTag, r: int | None = None) -> TLMorphism:
    """g(m) from g(m-1) by recursions whose coefficients have no pole at the root."""
    r = _level(ring, r)
    _check_middle(m, r)
    if m == r:
        return tensor(build_f(r - 1, ring), build_f(1, ring))
    if m == r + 1:
        P = tensor(build_f(r - 1, ring), _id(2, ring))
        A = compose(P, compose(_U(m, r - 1, ring), P))
        U = _U(m, r, ring)
        AU = compose(A, U)
        UP = compose(U, P)
        side = compose(AU, P) + compose(P, compose(U, A))
        top = compose(AU, A)
        return (
            P
            + _q(r - 1, r + 1, ring) * side
            + (quantum_int(r - 1, ring) * quantum_int(2, ring) / quantum_int(r + 1, ring)) * top
            + _q(r, r + 1, ring) * compose(P, UP)
        )
    lifted, middle = _wenzl_step(build_g(m - 1, ring, r), m, ring)
    coeff = quantum_brace_prime(r, ring) / (quantum_int(2 * r - m, ring) * quantum_int(m, ring))
    return lifted + _q(m - 1, m, ring) * middle + coeff * _closing_term(m, ring, r)


def f_top_recursion(ring: RingTag, r: int | None = None) -> TLMorphism:
    """f(2r-1) from g(2r-2); the same shape as the g recursion with m = 2r-1."""
    r = _level(ring, r)
    m = 2 * r - 1
    lifted, middle = _wenzl_step(build_g(m - 1, ring, r), m, ring)
    one = _id(1, ring)
    closing = compose(tensor(build_i(m - 1, ring, r), one), tensor(build_p(m - 1, ring, r), one))
    coeff = -quantum_brace_prime(r, ring) / (quantum_int(m, ring) * quantum_int(2, ring))
    return lifted + _q(m - 1, m, ring) * middle + coeff * closing


# ---------------------------------------------------------------------------
# handles and export


_BUILDERS = {"f": None, "g": build_g, "h": build_h}


@dataclass(frozen=True)
class IdempotentHandle:
    """A named idempotent (or h) whose value is built on first access."""

    kind: str
    m: int
    ring: RingTag
    r: int | None = None

    def __post_init__(self):
        if self.kind not in _BUILDERS:
            raise ValueError(f"unknown kind {self.kind!r}")

    @property
    def key(self) -> str:
        return f"{self.kind}:{self.m}"

    @property
    def value(self) -> TLMorphism:
        if self.kind == "f":
            return build_f(self.m, self.ring)
        return _BUILDERS[self.kind](self.m, self.ring, self.r)


def export_idempotents(ring: RingTag, r: int | None = None) -> dict:
    """JSON-ready dict of every f, g, h that exists for this ring and level."""
    r = _level(ring, r)
    names = [("f", m) for m in range(r)]
    names += [(kind, m) for kind in "gh" for m in range(r, 2 * r - 1)]
    names.append(("f", 2 * r - 1))
    return {
        f"{kind}:{m}": IdempotentHandle(kind, m, ring, r).value.to_json() for kind, m in names
    }
