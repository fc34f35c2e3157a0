"""Exact arithmetic in cyclotomic fields Q(zeta_n).

Elements are stored in the power basis 1, z, ..., z^(phi(n)-1) modulo the
n-th cyclotomic polynomial, as a tuple of integer numerators over one
positive common denominator.  Keeping a single denominator makes equality,
hashing and the numpy matrix kernels in :mod:`icosacurves.matrices` cheap;
:attr:`CyclotomicElement.coords` exposes the usual list of rationals.
"""

from __future__ import annotations

import math
from fractions import Fraction
from functools import lru_cache
from typing import Iterable, Sequence

import numpy as np

__all__ = [
    "CONDUCTOR_CAP",
    "ConductorTooLarge",
    "CyclotomicElement",
    "CyclotomicField",
    "FieldMismatch",
    "cyclotomic_polynomial",
    "embed",
    "field",
    "root_of_unity",
    "set_conductor_cap",
    "sqrt5",
]

#: Largest conductor :func:`field` will build unless raised explicitly.
CONDUCTOR_CAP = 120


class FieldMismatch(ValueError):
    """Operands live in different cyclotomic fields."""


class ConductorTooLarge(ValueError):
    pass


def set_conductor_cap(cap: int) -> int:
    """Set the conductor guard and return the previous value."""
    global CONDUCTOR_CAP
    if cap < 1:
        raise ValueError("conductor cap must be positive")
    old, CONDUCTOR_CAP = CONDUCTOR_CAP, int(cap)
    return old


# -- integer polynomials, coefficient lists low -> high ----------------------


def _trim(p: list) -> list:
    while p and p[-1] == 0:
        p.pop()
    return p


def _divexact(num: list[int], den: Sequence[int]) -> list[int]:
    """Exact division of integer polynomials, ``den`` monic."""
    num = list(num)
    dq = len(den) - 1
    out = [0] * (len(num) - dq)
    for k in range(len(num) - 1, dq - 1, -1):
        c = num[k]
        if c:
            out[k - dq] = c
            for i, d in enumerate(den):
                num[k - dq + i] -= c * d
    if any(num[:dq]):
        raise ArithmeticError("division is not exact")
    return out


@lru_cache(maxsize=None)
def cyclotomic_polynomial(n: int) -> tuple[int, ...]:
    """Coefficients (constant term first) of the n-th cyclotomic polynomial."""
    if n < 1:
        raise ValueError("n must be a positive integer")
    p = [-1] + [0] * (n - 1) + [1]
    for d in range(1, n):
        if n % d == 0:
            p = _divexact(p, cyclotomic_polynomial(d))
    return tuple(p)


def totient(n: int) -> int:
    return sum(1 for k in range(1, n + 1) if math.gcd(k, n) == 1)


# -- rational polynomials for inversion ---------------------------------------


def _poly_divmod(a: list[Fraction], b: list[Fraction]):
    a = list(a)
    q = [Fraction(0)] * max(len(a) - len(b) + 1, 1)
    lead = b[-1]
    while len(a) >= len(b) and a:
        c = a[-1] / lead
        shift = len(a) - len(b)
        q[shift] = c
        for i, bi in enumerate(b):
            a[shift + i] -= c * bi
        a.pop()
        _trim(a)
    return _trim(q), a


def _poly_sub(a, b):
    n = max(len(a), len(b))
    out = [(a[i] if i < len(a) else 0) - (b[i] if i < len(b) else 0) for i in range(n)]
    return _trim(out)


def _poly_mul(a, b):
    if not a or not b:
        return []
    out = [Fraction(0)] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] += x * y
    return _trim(out)


# -- fields -------------------------------------------------------------------


class CyclotomicField:
    """Q(zeta_n) realised as Q[x]/(Phi_n).

    Use :func:`field` to obtain instances; they are cached per conductor.
    """

    __slots__ = ("conductor", "modulus", "degree", "_powers", "_tensor", "_tensor_max")

    def __init__(self, conductor: int):
        if conductor < 1:
            raise ValueError("conductor must be positive")
        if conductor > CONDUCTOR_CAP:
            raise ConductorTooLarge(
                f"conductor {conductor} exceeds cap {CONDUCTOR_CAP}"
            )
        self.conductor = conductor
        self.modulus = cyclotomic_polynomial(conductor)
        self.degree = len(self.modulus) - 1
        self._powers: list[tuple[int, ...]] | None = None
        self._tensor = None
        self._tensor_max = 0

    def __repr__(self) -> str:
        return f"CyclotomicField({self.conductor})"

    def __eq__(self, other: object) -> bool:
        return isinstance(other, CyclotomicField) and other.conductor == self.conductor

    def __hash__(self) -> int:
        return hash(("CyclotomicField", self.conductor))

    def __reduce__(self):
        return (field, (self.conductor,))

    # reduction ------------------------------------------------------------

    def reduce(self, coeffs: list[int]) -> list[int]:
        """Reduce an integer polynomial modulo Phi_n (in place friendly)."""
        phi, mod = self.degree, self.modulus
        p = list(coeffs)
        for m in range(len(p) - 1, phi - 1, -1):
            c = p[m]
            if c:
                base = m - phi
                for k in range(phi):
                    mk = mod[k]
                    if mk:
                        p[base + k] -= c * mk
        p = p[:phi]
        if len(p) < phi:
            p.extend([0] * (phi - len(p)))
        return p

    def power(self, k: int) -> tuple[int, ...]:
        """Integer coordinates of zeta_n^k."""
        if self._powers is None:
            pw = []
            cur = [1] + [0] * (self.degree - 1)
            for _ in range(self.conductor):
                pw.append(tuple(cur))
                cur = self.reduce([0] + cur)
            self._powers = pw
        return self._powers[k % self.conductor]

    @property
    def mul_tensor(self) -> np.ndarray:
        """``T[a, b]`` = coordinates of x^(a+b) mod Phi_n, shape (phi, phi, phi)."""
        if self._tensor is None:
            phi = self.degree
            red = []
            for m in range(2 * phi - 1):
                v = [0] * (m + 1)
                v[m] = 1
                red.append(self.reduce(v))
            t = np.zeros((phi, phi, phi), dtype=np.int64)
            for a in range(phi):
                for b in range(phi):
                    t[a, b] = red[a + b]
            self._tensor = t
            self._tensor_max = int(np.abs(t).max())
        return self._tensor

    @property
    def mul_tensor_max(self) -> int:
        self.mul_tensor
        return self._tensor_max

    # constructors ---------------------------------------------------------

    def zero(self) -> CyclotomicElement:
        return CyclotomicElement._make(self, (0,) * self.degree, 1)

    def one(self) -> CyclotomicElement:
        return self.rational(1)

    def rational(self, q) -> CyclotomicElement:
        q = Fraction(q)
        return CyclotomicElement._make(
            self, (q.numerator,) + (0,) * (self.degree - 1), q.denominator
        )

    def zeta(self, k: int = 1) -> CyclotomicElement:
        return CyclotomicElement._make(self, self.power(k), 1)

    def __call__(self, x) -> CyclotomicElement:
        """Coerce an int, Fraction, element of a subfield, or power-basis coordinate list."""
        if isinstance(x, CyclotomicElement):
            return x.embed(self)
        if isinstance(x, (list, tuple)):
            return CyclotomicElement(self, x)
        return self.rational(x)


@lru_cache(maxsize=None)
def _field_cached(n: int) -> CyclotomicField:
    return CyclotomicField(n)


def field(n: int) -> CyclotomicField:
    """Cached :class:`CyclotomicField` of conductor ``n``."""
    if n > CONDUCTOR_CAP:
        raise ConductorTooLarge(f"conductor {n} exceeds cap {CONDUCTOR_CAP}")
    return _field_cached(n)


# -- elements -----------------------------------------------------------------


def _normalize(num: Iterable[int], den: int) -> tuple[tuple[int, ...], int]:
    num = tuple(num)
    if den < 0:
        num = tuple(-x for x in num)
        den = -den
    g = math.gcd(den, *num)
    if g > 1:
        num = tuple(x // g for x in num)
        den //= g
    if not any(num):
        den = 1
    return num, den


class CyclotomicElement:
    """An immutable element of Q(zeta_n)."""

    __slots__ = ("field", "num", "den", "_hash")

    def __init__(self, fld: CyclotomicField, coords: Sequence):
        coords = [Fraction(c) for c in coords]
        if len(coords) != fld.degree:
            raise ValueError(f"expected {fld.degree} coordinates, got {len(coords)}")
        den = math.lcm(*(c.denominator for c in coords)) if coords else 1
        num = [c.numerator * (den // c.denominator) for c in coords]
        self.field = fld
        self.num, self.den = _normalize(num, den)
        self._hash = None

    @classmethod
    def _make(cls, fld: CyclotomicField, num, den: int) -> CyclotomicElement:
        self = object.__new__(cls)
        self.field = fld
        self.num, self.den = _normalize(num, den)
        self._hash = None
        return self

    # views ----------------------------------------------------------------

    @property
    def coords(self) -> list[Fraction]:
        return [Fraction(x, self.den) for x in self.num]

    @property
    def conductor(self) -> int:
        return self.field.conductor

    def is_zero(self) -> bool:
        return not any(self.num)

    def is_rational(self) -> bool:
        return not any(self.num[1:])

    def to_fraction(self) -> Fraction:
        if not self.is_rational():
            raise ValueError(f"{self} is not rational")
        return Fraction(self.num[0], self.den)

    def __bool__(self) -> bool:
        return not self.is_zero()

    def __repr__(self) -> str:
        return f"CyclotomicElement({self.conductor}, {self})"

    def __str__(self) -> str:
        z = f"z{self.conductor}"
        parts = []
        for k, c in enumerate(self.num):
            if not c:
                continue
            mono = "" if k == 0 else (z if k == 1 else f"{z}^{k}")
            if mono:
                coef = "" if abs(c) == 1 else f"{abs(c)}*"
                parts.append(("-" if c < 0 else "+", coef + mono))
            else:
                parts.append(("-" if c < 0 else "+", str(abs(c))))
        if not parts:
            return "0"
        s = ("-" if parts[0][0] == "-" else "") + parts[0][1]
        for sign, body in parts[1:]:
            s += f" {sign} {body}"
        if self.den != 1:
            s = f"({s})/{self.den}" if len(parts) > 1 else f"{s}/{self.den}"
        return s

    # coercion -------------------------------------------------------------

    def _coerce(self, other) -> CyclotomicElement:
        if isinstance(other, CyclotomicElement):
            if other.field.conductor != self.field.conductor:
                raise FieldMismatch(
                    f"Q(zeta_{self.conductor}) vs Q(zeta_{other.conductor}); embed first"
                )
            return other
        if isinstance(other, (int, Fraction)):
            return self.field.rational(other)
        return NotImplemented

    # arithmetic -----------------------------------------------------------

    def __eq__(self, other) -> bool:
        if isinstance(other, CyclotomicElement):
            if other.field.conductor != self.field.conductor:
                raise FieldMismatch(
                    f"Q(zeta_{self.conductor}) vs Q(zeta_{other.conductor}); embed first"
                )
            return self.num == other.num and self.den == other.den
        if isinstance(other, (int, Fraction)):
            return self.is_rational() and Fraction(self.num[0], self.den) == other
        return NotImplemented

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash((self.field.conductor, self.num, self.den))
        return self._hash

    def __add__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        d1, d2 = self.den, o.den
        if d1 == d2:
            num = [a + b for a, b in zip(self.num, o.num)]
            return CyclotomicElement._make(self.field, num, d1)
        num = [a * d2 + b * d1 for a, b in zip(self.num, o.num)]
        return CyclotomicElement._make(self.field, num, d1 * d2)

    __radd__ = __add__

    def __neg__(self):
        return CyclotomicElement._make(self.field, [-a for a in self.num], self.den)

    def __sub__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return self + (-o)

    def __rsub__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return o + (-self)

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            q = Fraction(other)
            return CyclotomicElement._make(
                self.field, [a * q.numerator for a in self.num], self.den * q.denominator
            )
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        a, b = self.num, o.num
        if not any(a) or not any(b):
            return self.field.zero()
        prod = [0] * (2 * len(a) - 1)
        for i, x in enumerate(a):
            if x:
                for j, y in enumerate(b):
                    if y:
                        prod[i + j] += x * y
        return CyclotomicElement._make(self.field, self.field.reduce(prod), self.den * o.den)

    __rmul__ = __mul__

    def inv(self) -> CyclotomicElement:
        """Multiplicative inverse via extended Euclid against Phi_n."""
        if self.is_zero():
            raise ZeroDivisionError("inverse of zero in a cyclotomic field")
        num, den = _inverse(self.field.conductor, self.num, self.den)
        return CyclotomicElement._make(self.field, num, den)

    def __truediv__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return self * o.inv()

    def __rtruediv__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return o * self.inv()

    def __pow__(self, k: int):
        if k < 0:
            return self.inv() ** (-k)
        result = self.field.one()
        base = self
        while k:
            if k & 1:
                result = result * base
            k >>= 1
            if k:
                base = base * base
        return result

    # field maps -----------------------------------------------------------

    def embed(self, target: CyclotomicField) -> CyclotomicElement:
        return embed(self, target)

    def galois(self, k: int) -> CyclotomicElement:
        """Image under the automorphism zeta_n -> zeta_n^k, gcd(k, n) = 1."""
        n = self.conductor
        if math.gcd(k, n) != 1:
            raise ValueError(f"{k} is not a unit mod {n}")
        acc = [0] * self.field.degree
        for i, c in enumerate(self.num):
            if c:
                for j, p in enumerate(self.field.power(k * i)):
                    acc[j] += c * p
        return CyclotomicElement._make(self.field, acc, self.den)

    # serialisation --------------------------------------------------------

    def to_json(self) -> dict:
        return {
            "conductor": self.conductor,
            "coords": [[str(c.numerator), str(c.denominator)] for c in self.coords],
        }

    @classmethod
    def from_json(cls, data: dict) -> CyclotomicElement:
        fld = field(int(data["conductor"]))
        coords = [Fraction(int(p), int(q)) for p, q in data["coords"]]
        return cls(fld, coords)


@lru_cache(maxsize=1 << 16)
def _inverse(n: int, num: tuple[int, ...], den: int) -> tuple[list[int], int]:
    fld = field(n)
    m = [Fraction(c) for c in fld.modulus]
    a = _trim([Fraction(c) for c in num])
    r0, r1 = m, a
    s0, s1 = [], [Fraction(1)]
    while len(r1) > 1:
        q, r = _poly_divmod(r0, r1)
        r0, r1 = r1, r
        s0, s1 = s1, _poly_sub(s0, _poly_mul(q, s1))
    # r1 is the nonzero constant gcd; a * s1 == r1 (mod Phi_n)
    c = r1[0]
    inv = [x * den / c for x in s1]
    inv += [Fraction(0)] * (fld.degree - len(inv))
    d = math.lcm(*(x.denominator for x in inv))
    return [int(x * d) for x in inv], d


def embed(a: CyclotomicElement, target: CyclotomicField) -> CyclotomicElement:
    """Map ``a`` from Q(zeta_m) into Q(zeta_n) along zeta_m -> zeta_n^(n/m)."""
    m, n = a.conductor, target.conductor
    if m == n:
        return a
    if n % m:
        raise FieldMismatch(f"Q(zeta_{m}) does not embed in Q(zeta_{n})")
    step = n // m
    acc = [0] * target.degree
    for i, c in enumerate(a.num):
        if c:
            for j, p in enumerate(target.power(step * i)):
                if p:
                    acc[j] += c * p
    return CyclotomicElement._make(target, acc, a.den)


def root_of_unity(fld: CyclotomicField, k: int) -> CyclotomicElement:
    """zeta_n^k in the power basis of ``fld``."""
    return fld.zeta(k)


def sqrt5(fld: CyclotomicField, sign: int = 1) -> CyclotomicElement:
    """The Gauss sum z - z^2 - z^3 + z^4 (z = zeta_5), times ``sign``.

    Its square is 5; ``fld`` must have conductor divisible by 5.
    """
    if sign not in (1, -1):
        raise ValueError("sign must be +1 or -1")
    f5 = field(5)
    g = f5.zeta(1) - f5.zeta(2) - f5.zeta(3) + f5.zeta(4)
    return embed(g * sign, fld)
