"""Exact scalars: rational functions in A, and the cyclotomic field Q(q).

Two coefficient rings are used throughout the package.

* ``RingTag.generic()`` is the field Q(A) of rational functions in an
  indeterminate A.  Elements are :class:`GenericScalar`, stored as
  ``A**shift * num(A) / den(A)`` with integer polynomials in lowest terms.
* ``RingTag.root(r)`` is Q(q) with q a primitive r-th root of unity, r odd.
  Elements are :class:`CyclotomicScalar`, stored as a polynomial in q of
  degree below phi(r), reduced modulo the cyclotomic polynomial.

The quantum numbers {k}, {k}', [k] and [k]! exist in both rings, and
:func:`specialize` is the ring map A -> q**((r+1)/2) (so A**2 -> q).
"""

from __future__ import annotations

import functools
from dataclasses import dataclass
from fractions import Fraction
from typing import Union

import flint

from .errors import PoleAtRootOfUnity

__all__ = [
    "CyclotomicScalar",
    "GenericScalar",
    "RingTag",
    "Scalar",
    "cyclotomic_polynomial",
    "quantum_brace",
    "quantum_brace_prime",
    "quantum_factorial",
    "quantum_int",
    "scalar_from_json",
    "specialize",
]


# ---------------------------------------------------------------------------
# cyclotomic polynomials


@functools.cache
def _phi(r: int) -> flint.fmpz_poly:
    if r < 1:
        raise ValueError(f"cyclotomic polynomial needs r >= 1, got {r}")
    poly = flint.fmpz_poly([-1] + [0] * (r - 1) + [1])
    for d in range(1, r):
        if r % d == 0:
            quo, rem = divmod(poly, _phi(d))
            if not rem.is_zero():
                raise ArithmeticError(f"x^{r}-1 not divisible by Phi_{d}")
            poly = quo
    return poly


def cyclotomic_polynomial(r: int) -> tuple[int, ...]:
    """Coefficients of Phi_r, constant term first.

    Computed by dividing x**r - 1 exactly by Phi_d for every proper divisor d.

    >>> cyclotomic_polynomial(3)
    (1, 1, 1)
    """
    return tuple(int(c) for c in _phi(r).coeffs())


def _totient(r: int) -> int:
    return _phi(r).degree()


# ---------------------------------------------------------------------------
# ring tags


@dataclass(frozen=True)
class RingTag:
    """Which coefficient ring a value lives in.

    ``r is None`` means Q(A); otherwise Q(q) at the odd level ``r``.
    """

    r: int | None = None

    def __post_init__(self):
        if self.r is not None:
            if isinstance(self.r, bool) or not isinstance(self.r, int):
                raise ValueError(f"level must be an integer, got {self.r!r}")
            if self.r < 3 or self.r % 2 == 0:
                raise ValueError(f"level r must be odd and >= 3, got {self.r}")

    @classmethod
    def generic(cls) -> RingTag:
        return cls(None)

    @classmethod
    def root(cls, r: int) -> RingTag:
        return cls(r)

    @property
    def is_generic(self) -> bool:
        return self.r is None

    @property
    def is_root(self) -> bool:
        return self.r is not None

    def __str__(self):
        return "Generic" if self.r is None else f"Root({self.r})"

    # constructors for elements of this ring
    def from_int(self, n) -> Scalar:
        if self.r is None:
            return GenericScalar.from_fraction(n)
        return CyclotomicScalar.from_fraction(self.r, n)

    def one(self) -> Scalar:
        return self.from_int(1)

    def zero(self) -> Scalar:
        return self.from_int(0)

    def coerce(self, x) -> Scalar:
        """Turn an int/Fraction into a ring element; check ring of scalars."""
        if isinstance(x, (int, Fraction)):
            return self.from_int(x)
        if self.r is None and isinstance(x, GenericScalar):
            return x
        if self.r is not None and isinstance(x, CyclotomicScalar) and x.r == self.r:
            return x
        from .errors import RingMismatch

        raise RingMismatch(f"{x!r} is not an element of {self}")


# ---------------------------------------------------------------------------
# helpers on integer polynomials


def _valuation(p: flint.fmpz_poly) -> int:
    for i, c in enumerate(p.coeffs()):
        if c != 0:
            return i
    return 0


def _laurent_terms(p: flint.fmpz_poly, shift: int) -> list[list[int]]:
    return [[i + shift, int(c)] for i, c in enumerate(p.coeffs()) if c != 0]


def _poly_from_terms(terms) -> tuple[flint.fmpz_poly, int]:
    """Laurent terms [[exp, coeff], ...] -> (poly, shift)."""
    terms = [(int(e), int(c)) for e, c in terms if int(c) != 0]
    if not terms:
        return flint.fmpz_poly(0), 0
    low = min(e for e, _ in terms)
    coeffs = [0] * (max(e for e, _ in terms) - low + 1)
    for e, c in terms:
        coeffs[e - low] += c
    return flint.fmpz_poly(coeffs), low


def _format_laurent(p: flint.fmpz_poly, shift: int, var: str) -> str:
    parts = []
    for e, c in reversed(_laurent_terms(p, shift)):
        if e == 0:
            mono = str(abs(c))
        else:
            power = var if e == 1 else f"{var}^{e}"
            mono = power if abs(c) == 1 else f"{abs(c)}*{power}"
        sign = "-" if c < 0 else "+"
        parts.append((sign, mono))
    if not parts:
        return "0"
    out = ("-" if parts[0][0] == "-" else "") + parts[0][1]
    for sign, mono in parts[1:]:
        out += f" {sign} {mono}"
    return out


# ---------------------------------------------------------------------------
# Q(A)


class GenericScalar:
    """An element of Q(A) in canonical form ``A**shift * num / den``.

    ``num`` and ``den`` are coprime in Z[A], neither is divisible by A,
    and the leading coefficient of ``den`` is positive.  Zero is
    ``(0, 0, 1)``.  Two scalars are equal iff their triples are equal.
    """

    __slots__ = ("_den", "_num", "_shift")

    def __init__(self, num=0, den=1, shift=0):
        num = num if isinstance(num, flint.fmpz_poly) else flint.fmpz_poly(num)
        den = den if isinstance(den, flint.fmpz_poly) else flint.fmpz_poly(den)
        if den.is_zero():
            raise ZeroDivisionError("zero denominator")
        self._shift, self._num, self._den = _canon_generic(shift, num, den)

    @classmethod
    def _raw(cls, shift, num, den):
        obj = object.__new__(cls)
        obj._shift, obj._num, obj._den = shift, num, den
        return obj

    @classmethod
    def from_fraction(cls, x) -> GenericScalar:
        x = Fraction(x)
        return cls(flint.fmpz_poly([x.numerator]), flint.fmpz_poly([x.denominator]))

    @classmethod
    def A(cls, power: int = 1) -> GenericScalar:
        return cls._raw(power, flint.fmpz_poly([1]), flint.fmpz_poly([1]))

    @classmethod
    def from_laurent(cls, num_terms, den_terms=((0, 1),)) -> GenericScalar:
        n, ns = _poly_from_terms(num_terms)
        d, ds = _poly_from_terms(den_terms)
        return cls(n, d, ns - ds)

    # -- accessors
    @property
    def ring(self) -> RingTag:
        return RingTag.generic()

    @property
    def shift(self) -> int:
        return self._shift

    @property
    def numerator(self) -> flint.fmpz_poly:
        return self._num

    @property
    def denominator(self) -> flint.fmpz_poly:
        return self._den

    def is_zero(self) -> bool:
        return self._num.is_zero()

    def is_polynomial(self) -> bool:
        return self._den.degree() == 0 and abs(int(self._den.coeffs()[0])) == 1

    # -- arithmetic
    def _lift(self, other):
        if isinstance(other, GenericScalar):
            return other
        if isinstance(other, (int, Fraction)):
            return GenericScalar.from_fraction(other)
        return NotImplemented

    def __add__(self, other):
        other = self._lift(other)
        if other is NotImplemented:
            return other
        if self.is_zero():
            return other
        if other.is_zero():
            return self
        s = min(self._shift, other._shift)
        a = (self._num * other._den).left_shift(self._shift - s)
        b = (other._num * self._den).left_shift(other._shift - s)
        return GenericScalar(a + b, self._den * other._den, s)

    __radd__ = __add__

    def __neg__(self):
        return GenericScalar._raw(self._shift, -self._num, self._den)

    def __sub__(self, other):
        other = self._lift(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        other = self._lift(other)
        if other is NotImplemented:
            return other
        return GenericScalar(
            self._num * other._num, self._den * other._den, self._shift + other._shift
        )

    __rmul__ = __mul__

    def inverse(self) -> GenericScalar:
        if self.is_zero():
            raise ZeroDivisionError("inverse of zero in Q(A)")
        return GenericScalar(self._den, self._num, -self._shift)

    def __truediv__(self, other):
        other = self._lift(other)
        if other is NotImplemented:
            return other
        return self * other.inverse()

    def __rtruediv__(self, other):
        return self.inverse() * other

    def __pow__(self, n: int):
        if n < 0:
            return self.inverse() ** (-n)
        return GenericScalar._raw(self._shift * n, self._num**n, self._den**n) if n else GenericScalar(1)

    # -- comparison
    def _key(self):
        return (self._shift, tuple(self._num.coeffs()), tuple(self._den.coeffs()))

    def __eq__(self, other):
        other = self._lift(other)
        if other is NotImplemented:
            return False
        return self._key() == other._key()

    def __hash__(self):
        return hash(("A", self._key()))

    # -- io
    def __repr__(self):
        return f"GenericScalar({self})"

    def __str__(self):
        num = _format_laurent(self._num, self._shift, "A")
        if self._den.is_one():
            return num
        den = _format_laurent(self._den, 0, "A")
        return f"({num})/({den})"

    def to_json(self) -> dict:
        return {
            "num": _laurent_terms(self._num, self._shift),
            "den": _laurent_terms(self._den, 0),
        }

    @classmethod
    def from_json(cls, data) -> GenericScalar:
        return cls.from_laurent(data["num"], data["den"])


def _canon_generic(shift, num, den):
    if num.is_zero():
        return 0, flint.fmpz_poly(0), flint.fmpz_poly(1)
    v = _valuation(num)
    if v:
        num = num.right_shift(v)
        shift += v
    v = _valuation(den)
    if v:
        den = den.right_shift(v)
        shift -= v
    g = num.gcd(den)
    if not g.is_one():
        num = num // g
        den = den // g
    if den.leading_coefficient() < 0:
        num, den = -num, -den
    return shift, num, den


# ---------------------------------------------------------------------------
# Q(q)


class CyclotomicScalar:
    """An element of Q(q), q a primitive r-th root of unity.

    Stored as a rational polynomial of degree < phi(r), reduced modulo Phi_r;
    that reduced representative is unique, so equality is structural.
    """

    __slots__ = ("_p", "r")

    def __init__(self, r: int, poly):
        self.r = r
        p = poly if isinstance(poly, flint.fmpq_poly) else flint.fmpq_poly(poly)
        self._p = p % _phi_q(r)

    @classmethod
    def from_fraction(cls, r: int, x) -> CyclotomicScalar:
        x = Fraction(x)
        return cls(r, flint.fmpq_poly([flint.fmpq(x.numerator, x.denominator)]))

    @classmethod
    def q(cls, r: int, power: int = 1) -> CyclotomicScalar:
        e = power % r
        return cls(r, flint.fmpq_poly([0] * e + [1]))

    @property
    def ring(self) -> RingTag:
        return RingTag.root(self.r)

    @property
    def coeffs(self) -> tuple[Fraction, ...]:
        n = _totient(self.r)
        out = [Fraction(0)] * n
        for i, c in enumerate(self._p.coeffs()):
            out[i] = Fraction(int(c.p), int(c.q))
        return tuple(out)

    @property
    def poly(self) -> flint.fmpq_poly:
        return self._p

    def is_zero(self) -> bool:
        return self._p.is_zero()

    def _lift(self, other):
        if isinstance(other, CyclotomicScalar):
            if other.r != self.r:
                from .errors import RingMismatch

                raise RingMismatch(f"Root({self.r}) vs Root({other.r})")
            return other
        if isinstance(other, (int, Fraction)):
            return CyclotomicScalar.from_fraction(self.r, other)
        return NotImplemented

    def __add__(self, other):
        other = self._lift(other)
        if other is NotImplemented:
            return other
        return CyclotomicScalar(self.r, self._p + other._p)

    __radd__ = __add__

    def __neg__(self):
        return CyclotomicScalar(self.r, -self._p)

    def __sub__(self, other):
        other = self._lift(other)
        if other is NotImplemented:
            return other
        return CyclotomicScalar(self.r, self._p - other._p)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        other = self._lift(other)
        if other is NotImplemented:
            return other
        return CyclotomicScalar(self.r, self._p * other._p)

    __rmul__ = __mul__

    def inverse(self) -> CyclotomicScalar:
        if self.is_zero():
            raise ZeroDivisionError(f"inverse of zero in Q(q), r={self.r}")
        g, s, _ = self._p.xgcd(_phi_q(self.r))
        return CyclotomicScalar(self.r, s / g)

    def __truediv__(self, other):
        other = self._lift(other)
        if other is NotImplemented:
            return other
        return self * other.inverse()

    def __rtruediv__(self, other):
        return self.inverse() * other

    def __pow__(self, n: int):
        if n < 0:
            return self.inverse() ** (-n)
        out = CyclotomicScalar.from_fraction(self.r, 1)
        base = self
        while n:
            if n & 1:
                out = out * base
            base = base * base
            n >>= 1
        return out

    def __eq__(self, other):
        try:
            other = self._lift(other)
        except Exception:
            return False
        if other is NotImplemented:
            return False
        return self._p == other._p

    def __hash__(self):
        return hash(("q", self.r, self.coeffs))

    def __repr__(self):
        return f"CyclotomicScalar(r={self.r}, {self})"

    def __str__(self):
        terms = []
        for i, c in enumerate(self.coeffs):
            if c == 0:
                continue
            mono = "" if i == 0 else ("q" if i == 1 else f"q^{i}")
            if not mono:
                terms.append(str(c))
            elif c == 1:
                terms.append(mono)
            elif c == -1:
                terms.append("-" + mono)
            else:
                terms.append(f"{c}*{mono}")
        if not terms:
            return "0"
        return " + ".join(terms).replace("+ -", "- ")

    def to_json(self) -> dict:
        return {"r": self.r, "coeffs": [f"{c.numerator}/{c.denominator}" for c in self.coeffs]}

    @classmethod
    def from_json(cls, data) -> CyclotomicScalar:
        r = int(data["r"])
        coeffs = [Fraction(c) for c in data["coeffs"]]
        return cls(r, flint.fmpq_poly([flint.fmpq(c.numerator, c.denominator) for c in coeffs]))


@functools.cache
def _phi_q(r: int) -> flint.fmpq_poly:
    return flint.fmpq_poly(_phi(r))


Scalar = Union[GenericScalar, CyclotomicScalar]


def scalar_from_json(data) -> Scalar:
    if "r" in data:
        return CyclotomicScalar.from_json(data)
    return GenericScalar.from_json(data)


# ---------------------------------------------------------------------------
# quantum numbers


def _q_power(ring: RingTag, e: int) -> Scalar:
    """A**(2e) in Q(A), q**e in Q(q)."""
    if ring.is_generic:
        return GenericScalar.A(2 * e)
    return CyclotomicScalar.q(ring.r, e)


def quantum_brace(k: int, ring: RingTag) -> Scalar:
    """{k} = q^k - q^-k (with q = A^2 in the generic ring)."""
    return _q_power(ring, k) - _q_power(ring, -k)


def quantum_brace_prime(k: int, ring: RingTag) -> Scalar:
    """{k}' = q^k + q^-k."""
    return _q_power(ring, k) + _q_power(ring, -k)


@functools.cache
def quantum_int(k: int, ring: RingTag) -> Scalar:
    """[k] = {k}/{1}, computed as the palindromic sum q^(1-k) + ... + q^(k-1)."""
    if k < 0:
        return -quantum_int(-k, ring)
    if ring.is_generic:
        if k == 0:
            return GenericScalar(0)
        coeffs = [0] * (4 * (k - 1) + 1)
        for i in range(k):
            coeffs[4 * i] = 1
        return GenericScalar._raw(-2 * (k - 1), flint.fmpz_poly(coeffs), flint.fmpz_poly([1]))
    r = ring.r
    coeffs = [0] * r
    for i in range(k):
        coeffs[(2 * i - (k - 1)) % r] += 1
    return CyclotomicScalar(r, flint.fmpq_poly(coeffs))


@functools.cache
def quantum_factorial(k: int, ring: RingTag) -> Scalar:
    """[k]! = [1][2]...[k]; [0]! = 1."""
    if k < 0:
        raise ValueError(f"quantum factorial of negative integer {k}")
    out = ring.one()
    for j in range(1, k + 1):
        out = out * quantum_int(j, ring)
    return out


# ---------------------------------------------------------------------------
# specialization A -> q^((r+1)/2)


def _eval_at_root(p: flint.fmpz_poly, shift: int, r: int) -> flint.fmpq_poly:
    half = (r + 1) // 2
    coeffs = [0] * r
    for i, c in enumerate(p.coeffs()):
        if c != 0:
            coeffs[((i + shift) * half) % r] += int(c)
    return flint.fmpq_poly(coeffs) % _phi_q(r)


def specialize(x, r: int) -> CyclotomicScalar:
    """Image of ``x`` under A -> q^((r+1)/2).

    Raises :class:`PoleAtRootOfUnity` when the (already reduced) denominator
    vanishes at that point.
    """
    RingTag.root(r)
    if isinstance(x, (int, Fraction)):
        return CyclotomicScalar.from_fraction(r, x)
    num = _eval_at_root(x.numerator, x.shift, r)
    den = _eval_at_root(x.denominator, 0, r)
    if den.is_zero():
        raise PoleAtRootOfUnity(f"denominator {_format_laurent(x.denominator, 0, 'A')} vanishes at A = q^{(r + 1) // 2}, r = {r}")
    return CyclotomicScalar(r, num) / CyclotomicScalar(r, den)
