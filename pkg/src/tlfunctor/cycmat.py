"""Dense matrices over Q(q), q a primitive r-th root of unity.

A matrix is an integer array ``num`` of shape ``(d, rows, cols)`` holding the
coordinates in the power basis ``1, q, ..., q^(d-1)`` (d = phi(r)) together
with one positive integer denominator.  Products go through float64 BLAS
when every partial sum provably fits in 53 bits, through int64 when it fits
in 63 bits, and through flint otherwise, so every result is exact.

Rank and nullspace are computed over Q on the realified matrix, where each
entry becomes the d x d matrix of multiplication by that entry.
"""

from __future__ import annotations

import functools
import math
from fractions import Fraction

import flint
import numpy as np

from .errors import ShapeMismatch, SolverFailure
from .scalars import CyclotomicScalar, _phi

_F53 = 1 << 53
_I63 = 1 << 62


# ---------------------------------------------------------------------------
# field data


@functools.cache
def _field(r: int):
    """(d, shifts) where shifts[k] is the integer matrix of multiplication by q^k."""
    phi = _phi(r)
    d = phi.degree()
    shifts = []
    for k in range(r):
        m = np.zeros((d, d), dtype=np.int64)
        for b in range(d):
            p = flint.fmpz_poly([0] * (b + k) + [1]) % phi
            for a, c in enumerate(p.coeffs()):
                m[a, b] = int(c)
        shifts.append(m)
    return d, tuple(shifts)


def _maxabs(a: np.ndarray) -> int:
    if a.size == 0:
        return 0
    if a.dtype == object:
        return max(abs(int(x)) for x in a.flat)
    return int(np.abs(a).max())


def _tighten(a: np.ndarray) -> np.ndarray:
    if a.dtype == object and _maxabs(a) < _I63:
        return a.astype(np.int64)
    return a


def _widen(a: np.ndarray) -> np.ndarray:
    return a if a.dtype == object else a.astype(object)


def _int_matmul(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Exact integer product of two 2-d arrays."""
    if a.shape[1] == 0 or a.shape[0] == 0 or b.shape[1] == 0:
        return np.zeros((a.shape[0], b.shape[1]), dtype=np.int64)
    bound = _maxabs(a) * _maxabs(b) * a.shape[1]
    if bound < _F53:
        return np.rint(a.astype(np.float64) @ b.astype(np.float64)).astype(np.int64)
    if bound < _I63:
        return a.astype(np.int64) @ b.astype(np.int64)
    fa = flint.fmpz_mat(a.shape[0], a.shape[1], [int(x) for x in a.flat])
    fb = flint.fmpz_mat(b.shape[0], b.shape[1], [int(x) for x in b.flat])
    out = np.array([int(x) for x in (fa * fb).entries()], dtype=object)
    return _tighten(out.reshape(a.shape[0], b.shape[1]))


def _times_q(num: np.ndarray, k: int, r: int) -> np.ndarray:
    """Coordinates of q^k times the array (first axis is the coefficient axis)."""
    d, shifts = _field(r)
    k %= r
    if k == 0:
        return num
    m = shifts[k]
    flat = num.reshape(d, -1)
    if num.dtype == object:
        out = _widen(m) @ flat
    else:
        bound = _maxabs(flat) * int(np.abs(m).sum(axis=1).max())
        out = (m @ flat) if bound < _I63 else (_widen(m) @ _widen(flat))
    return out.reshape(num.shape)


def scalar_parts(c, r: int) -> tuple[list[int], int]:
    """Integer power-basis coordinates and denominator of a scalar."""
    d, _ = _field(r)
    if isinstance(c, CyclotomicScalar):
        if c.r != r:
            from .errors import RingMismatch

            raise RingMismatch(f"Root({c.r}) scalar used at level {r}")
        p = c.poly
        den = int(p.denom())
        coeffs = [int(x * den) for x in p.coeffs()]
    else:
        x = Fraction(c)
        den = x.denominator
        coeffs = [x.numerator]
    coeffs += [0] * (d - len(coeffs))
    return coeffs, den


# ---------------------------------------------------------------------------


class CycMatrix:
    """An exact matrix over Q(q).  Treated as immutable."""

    __slots__ = ("den", "num", "r")

    def __init__(self, r: int, num: np.ndarray, den: int = 1, *, normal: bool = False):
        self.r = r
        self.num = num
        self.den = int(den)
        if not normal:
            self._normalize()

    # -- constructors
    @classmethod
    def zeros(cls, r: int, rows: int, cols: int) -> CycMatrix:
        d, _ = _field(r)
        return cls(r, np.zeros((d, rows, cols), dtype=np.int64), 1, normal=True)

    @classmethod
    def identity(cls, r: int, n: int) -> CycMatrix:
        out = cls.zeros(r, n, n)
        out.num[0] = np.eye(n, dtype=np.int64)
        return out

    @classmethod
    def from_entries(cls, r: int, rows: int, cols: int, entries) -> CycMatrix:
        """Build from an iterable of ``(row, col, scalar)``; repeated cells add up."""
        d, _ = _field(r)
        parts = [(i, j, *scalar_parts(c, r)) for i, j, c in entries]
        den = 1
        for *_, dd in parts:
            den = den * dd // math.gcd(den, dd)
        num = np.zeros((d, rows, cols), dtype=object)
        for i, j, coeffs, dd in parts:
            f = den // dd
            for a, c in enumerate(coeffs):
                if c:
                    num[a, i, j] += c * f
        return cls(r, _tighten(num), den)

    @classmethod
    def from_rows(cls, r: int, rows) -> CycMatrix:
        rows = [list(row) for row in rows]
        n = len(rows)
        m = len(rows[0]) if rows else 0
        return cls.from_entries(
            r, n, m, ((i, j, c) for i, row in enumerate(rows) for j, c in enumerate(row) if c != 0)
        )

    @classmethod
    def scalar(cls, r: int, c, n: int = 1) -> CycMatrix:
        return c * cls.identity(r, n)

    # -- basic structure
    @property
    def d(self) -> int:
        return self.num.shape[0]

    @property
    def shape(self) -> tuple[int, int]:
        return self.num.shape[1], self.num.shape[2]

    @property
    def rows(self) -> int:
        return self.num.shape[1]

    @property
    def cols(self) -> int:
        return self.num.shape[2]

    def _normalize(self):
        num = _tighten(self.num)
        if self.den < 0:
            num, self.den = -num, -self.den
        if not num.any():
            self.num, self.den = np.zeros(num.shape, dtype=np.int64), 1
            return
        if self.den != 1:
            if num.dtype == object:
                g = self.den
                for x in num.flat:
                    if x:
                        g = math.gcd(g, int(x))
                        if g == 1:
                            break
            else:
                g = math.gcd(int(np.gcd.reduce(num.ravel())), self.den)
            if g != 1:
                num = num // g
                self.den //= g
        self.num = num

    def entry(self, i: int, j: int) -> CyclotomicScalar:
        coeffs = [Fraction(int(self.num[a, i, j]), self.den) for a in range(self.d)]
        return CyclotomicScalar(self.r, flint.fmpq_poly([flint.fmpq(c.numerator, c.denominator) for c in coeffs]))

    def nonzero(self) -> list[tuple[int, int]]:
        mask = np.any(self.num != 0, axis=0)
        return [(int(i), int(j)) for i, j in zip(*np.nonzero(mask))]

    def is_zero(self) -> bool:
        return not self.num.any()

    def __eq__(self, other):
        if not isinstance(other, CycMatrix):
            return NotImplemented
        if other.r != self.r or other.shape != self.shape:
            return False
        return self.den == other.den and np.array_equal(self.num, other.num)

    __hash__ = None

    def __repr__(self):
        return f"CycMatrix(r={self.r}, shape={self.shape}, den={self.den})"

    # -- arithmetic
    def _check(self, other: CycMatrix):
        if not isinstance(other, CycMatrix):
            raise TypeError(f"expected CycMatrix, got {type(other).__name__}")
        if other.r != self.r:
            from .errors import RingMismatch

            raise RingMismatch(f"level {self.r} vs {other.r}")

    def _aligned(self, other):
        g = math.gcd(self.den, other.den)
        fa, fb = other.den // g, self.den // g
        a, b = self.num, other.num
        if (_maxabs(a) * fa + _maxabs(b) * fb) >= _I63:
            a, b = _widen(a), _widen(b)
        return a * fa, b * fb, self.den * fa

    def __add__(self, other: CycMatrix) -> CycMatrix:
        self._check(other)
        if other.shape != self.shape:
            raise ShapeMismatch(f"{self.shape} + {other.shape}")
        a, b, den = self._aligned(other)
        return CycMatrix(self.r, a + b, den)

    def __sub__(self, other: CycMatrix) -> CycMatrix:
        self._check(other)
        if other.shape != self.shape:
            raise ShapeMismatch(f"{self.shape} - {other.shape}")
        a, b, den = self._aligned(other)
        return CycMatrix(self.r, a - b, den)

    def __neg__(self):
        return CycMatrix(self.r, -self.num, self.den, normal=True)

    def scale(self, c) -> CycMatrix:
        coeffs, den = scalar_parts(c, self.r)
        if not any(coeffs):
            return CycMatrix.zeros(self.r, *self.shape)
        terms = [(k, a) for k, a in enumerate(coeffs) if a]
        out = None
        for k, a in terms:
            shifted = _times_q(self.num, k, self.r)
            if _maxabs(shifted) * abs(a) * len(terms) >= _I63:
                shifted = _widen(shifted)
            part = shifted * a
            out = part if out is None else out + part
        return CycMatrix(self.r, out, self.den * den)

    def __rmul__(self, c):
        return self.scale(c)

    def __mul__(self, c):
        if isinstance(c, CycMatrix):
            raise TypeError("use @ for matrix products")
        return self.scale(c)

    def __matmul__(self, other: CycMatrix) -> CycMatrix:
        self._check(other)
        if self.cols != other.rows:
            raise ShapeMismatch(f"{self.shape} @ {other.shape}")
        d = self.d
        left = np.concatenate(list(self.num), axis=1) if d > 1 else self.num[0]
        blocks = [_times_q(other.num, i, self.r) for i in range(d)]
        if any(b.dtype == object for b in blocks):
            blocks = [_widen(b) for b in blocks]
        # right[(i, inner), (k, cols)] = coefficient k of q^i * other
        right = np.concatenate(
            [np.concatenate(list(b), axis=1) for b in blocks], axis=0
        ) if d > 1 else blocks[0][0]
        prod = _int_matmul(left, right)
        num = np.stack(np.split(prod, d, axis=1)) if d > 1 else prod[None]
        return CycMatrix(self.r, num, self.den * other.den)

    def kron(self, other: CycMatrix) -> CycMatrix:
        self._check(other)
        d = self.d
        out = None
        for i in range(d):
            if not self.num[i].any():
                continue
            shifted = _times_q(other.num, i, self.r)
            a = self.num[i]
            if _maxabs(a) * _maxabs(shifted) * d >= _I63:
                a, shifted = _widen(a), _widen(shifted)
            part = np.stack([np.kron(a, shifted[k]) for k in range(d)])
            out = part if out is None else out + part
        if out is None:
            return CycMatrix.zeros(self.r, self.rows * other.rows, self.cols * other.cols)
        return CycMatrix(self.r, out, self.den * other.den)

    @property
    def T(self) -> CycMatrix:
        return CycMatrix(self.r, self.num.transpose(0, 2, 1).copy(), self.den, normal=True)

    # -- slicing
    def take(self, rows=None, cols=None) -> CycMatrix:
        num = self.num
        if rows is not None:
            num = num[:, list(rows), :]
        if cols is not None:
            num = num[:, :, list(cols)]
        return CycMatrix(self.r, np.ascontiguousarray(num), self.den)

    def column(self, j: int) -> CycMatrix:
        return self.take(cols=[j])

    @staticmethod
    def hstack(mats) -> CycMatrix:
        mats = list(mats)
        return CycMatrix._stack(mats, axis=2)

    @staticmethod
    def vstack(mats) -> CycMatrix:
        mats = list(mats)
        return CycMatrix._stack(mats, axis=1)

    @staticmethod
    def _stack(mats, axis):
        r = mats[0].r
        den = 1
        for m in mats:
            den = den * m.den // math.gcd(den, m.den)
        parts = []
        wide = any(m.num.dtype == object or _maxabs(m.num) * (den // m.den) >= _I63 for m in mats)
        for m in mats:
            n = _widen(m.num) if wide else m.num
            parts.append(n * (den // m.den))
        return CycMatrix(r, np.concatenate(parts, axis=axis), den)

    # -- linear algebra over Q(q)
    def realify(self) -> np.ndarray:
        """Integer matrix (rows*d, cols*d) of the underlying Q-linear map (times den)."""
        d = self.d
        rows, cols = self.shape
        out = np.zeros((rows * d, cols * d), dtype=object if self.num.dtype == object else np.int64)
        for b in range(d):
            shifted = _times_q(self.num, b, self.r)
            if shifted.dtype == object and out.dtype != object:
                out = out.astype(object)
            for a in range(d):
                out[a::d, b::d] = shifted[a]
        return out

    @staticmethod
    def _fmpz(a: np.ndarray) -> flint.fmpz_mat:
        return flint.fmpz_mat(a.shape[0], a.shape[1], [int(x) for x in a.flat])

    def rank(self) -> int:
        if self.is_zero():
            return 0
        return self._fmpz(self.realify()).rank() // self.d

    def nullspace(self) -> CycMatrix:
        """Columns form a basis over Q(q) of the right kernel."""
        d = self.d
        cols = self.cols
        if self.rows == 0 or self.is_zero():
            return CycMatrix.identity(self.r, cols)
        R, den, _ = self._fmpz(self.realify()).rref()
        R = np.array([int(x) for x in R.entries()], dtype=object).reshape(self.rows * d, cols * d)
        pivots = []
        for row in R:
            nz = np.nonzero(row)[0]
            if len(nz) == 0:
                break
            pivots.append(int(nz[0]))
        pivot_set = set(pivots)
        free_blocks = [j for j in range(cols) if j * d not in pivot_set]
        basis = []
        for j in free_blocks:
            v = np.zeros(cols * d, dtype=object)
            v[j * d] = int(den)
            for row, p in zip(R, pivots):
                v[p] = -row[j * d]
            basis.append(v)
        if not basis:
            return CycMatrix.zeros(self.r, cols, 0)
        num = np.stack(basis, axis=1)  # (cols*d, k)
        num = np.stack([num[a::d, :] for a in range(d)])
        return CycMatrix(self.r, _tighten(num), 1)

    def inverse(self) -> CycMatrix:
        n = self.rows
        if self.cols != n:
            raise ShapeMismatch(f"cannot invert a {self.shape} matrix")
        real = flint.fmpq_mat(self._fmpz(self.realify()))
        try:
            inv = real.inv()
        except ZeroDivisionError as exc:
            raise SolverFailure("matrix is singular") from exc
        d = self.d
        entries = inv.entries()
        dens = 1
        for x in entries:
            dens = dens * int(x.q) // math.gcd(dens, int(x.q))
        full = np.array([int(x.p) * (dens // int(x.q)) for x in entries], dtype=object)
        full = full.reshape(n * d, n * d)
        # the inverse of a realified matrix is realified; read off column block b = 0
        num = np.stack([full[a::d, 0::d] for a in range(d)])
        return CycMatrix(self.r, _tighten(num), dens * 1) * self.den

    # -- export
    def to_triplets(self) -> list:
        out = []
        for i, j in self.nonzero():
            out.append([i, j, self.entry(i, j).to_json()])
        return out
