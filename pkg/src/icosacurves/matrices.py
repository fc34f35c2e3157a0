"""Exact square matrices over cyclotomic fields and their projective classes.

A :class:`Matrix` stores integer numerators in an array of shape
``(dim, dim, phi(n))`` over one common denominator.  Products go through the
field's multiplication tensor with ``numpy.einsum``; int64 is used whenever
an a-priori bound shows no overflow is possible, object arrays otherwise.
"""

from __future__ import annotations

import math
from fractions import Fraction
from typing import Sequence

import numpy as np

from .cyclo import CyclotomicElement, CyclotomicField, FieldMismatch, field

__all__ = [
    "Matrix",
    "NotPBDShape",
    "ProjectiveMatrix",
    "SingularMatrix",
    "block_embed",
    "pbd_restrict",
    "projective_canonical",
]

_INT64_SAFE = 1 << 62


class SingularMatrix(ArithmeticError):
    pass


class NotPBDShape(ValueError):
    """Matrix is not block diagonal of shape 2+1."""


def _maxabs(a: np.ndarray) -> int:
    if a.size == 0:
        return 0
    if a.dtype == object:
        return max(abs(int(x)) for x in a.flat)
    return int(np.abs(a).max())


def _compact(a: np.ndarray) -> np.ndarray:
    if a.dtype == object and _maxabs(a) < _INT64_SAFE:
        return a.astype(np.int64)
    return a


def _widen(a: np.ndarray, b: np.ndarray, bound: int):
    if bound < _INT64_SAFE and a.dtype != object and b.dtype != object:
        return a, b
    return a.astype(object), b.astype(object)


def _gcd_all(a: np.ndarray) -> int:
    if a.dtype == object:
        return math.gcd(*(int(x) for x in a.flat))
    return int(np.gcd.reduce(a.ravel())) if a.size else 0


class Matrix:
    """Immutable ``dim x dim`` matrix with entries in one cyclotomic field."""

    __slots__ = ("field", "dim", "num", "den", "_key")

    def __init__(self, rows: Sequence[Sequence], fld: CyclotomicField | None = None):
        dim = len(rows)
        if any(len(r) != dim for r in rows):
            raise ValueError("matrix must be square")
        if fld is None:
            conds = {x.conductor for r in rows for x in r if isinstance(x, CyclotomicElement)}
            if len(conds) > 1:
                raise FieldMismatch(f"entries from several fields {sorted(conds)}; embed first")
            fld = field(conds.pop()) if conds else field(1)
        elems = [[fld(x) if not isinstance(x, CyclotomicElement) else x for x in r] for r in rows]
        for r in elems:
            for x in r:
                if x.conductor != fld.conductor:
                    raise FieldMismatch(f"entry over Q(zeta_{x.conductor}) in Q(zeta_{fld.conductor}) matrix")
        den = math.lcm(*(x.den for r in elems for x in r))
        num = np.empty((dim, dim, fld.degree), dtype=object)
        for i, r in enumerate(elems):
            for j, x in enumerate(r):
                s = den // x.den
                num[i, j] = [c * s for c in x.num]
        self._init(fld, num, den)

    def _init(self, fld, num, den):
        g = math.gcd(_gcd_all(num), den)
        if g > 1:
            num = num // g
            den //= g
        if not num.any():
            den = 1
        self.field = fld
        self.dim = num.shape[0]
        self.num = _compact(num)
        self.num.setflags(write=False)
        self.den = int(den)
        self._key = None

    @classmethod
    def _make(cls, fld: CyclotomicField, num: np.ndarray, den: int) -> Matrix:
        self = object.__new__(cls)
        self._init(fld, num, den)
        return self

    # constructors ---------------------------------------------------------

    @classmethod
    def identity(cls, dim: int, fld: CyclotomicField | None = None) -> Matrix:
        fld = fld or field(1)
        num = np.zeros((dim, dim, fld.degree), dtype=np.int64)
        for i in range(dim):
            num[i, i, 0] = 1
        return cls._make(fld, num, 1)

    @classmethod
    def diag(cls, entries: Sequence, fld: CyclotomicField | None = None) -> Matrix:
        dim = len(entries)
        rows = [[entries[i] if i == j else 0 for j in range(dim)] for i in range(dim)]
        return cls(rows, fld)

    @classmethod
    def scalar(cls, c, dim: int, fld: CyclotomicField | None = None) -> Matrix:
        return cls.diag([c] * dim, fld)

    # views ----------------------------------------------------------------

    @property
    def conductor(self) -> int:
        return self.field.conductor

    def entry(self, i: int, j: int) -> CyclotomicElement:
        return CyclotomicElement._make(self.field, (int(x) for x in self.num[i, j]), self.den)

    def rows(self) -> list[list[CyclotomicElement]]:
        return [[self.entry(i, j) for j in range(self.dim)] for i in range(self.dim)]

    def key(self):
        """Hashable exact identity of the matrix (field, shape, reduced coordinates)."""
        if self._key is None:
            n = self.num
            payload = n.tobytes() if n.dtype != object else tuple(int(x) for x in n.flat)
            self._key = (self.field.conductor, self.dim, self.den, payload)
        return self._key

    def __hash__(self) -> int:
        return hash(self.key())

    def __eq__(self, other) -> bool:
        if not isinstance(other, Matrix):
            return NotImplemented
        if other.field.conductor != self.field.conductor:
            raise FieldMismatch("matrices over different fields; embed first")
        if other.dim != self.dim or other.den != self.den:
            return False
        return bool(np.array_equal(self.num, other.num))

    def __repr__(self) -> str:
        body = "; ".join(", ".join(str(x) for x in r) for r in self.rows())
        return f"Matrix[{self.conductor}]({body})"

    def is_zero(self) -> bool:
        return not self.num.any()

    def is_scalar(self) -> bool:
        n = self.num
        d0 = n[0, 0]
        for i in range(self.dim):
            for j in range(self.dim):
                if i == j:
                    if not np.array_equal(n[i, j], d0):
                        return False
                elif n[i, j].any():
                    return False
        return True

    def is_identity(self) -> bool:
        return self.is_scalar() and self.den == 1 and self.num[0, 0, 0] == 1 and not self.num[0, 0, 1:].any()

    # arithmetic -----------------------------------------------------------

    def _check(self, other: Matrix):
        if other.field.conductor != self.field.conductor:
            raise FieldMismatch(
                f"Q(zeta_{self.conductor}) vs Q(zeta_{other.conductor}); embed first"
            )
        if other.dim != self.dim:
            raise ValueError("dimension mismatch")

    def __matmul__(self, other: Matrix) -> Matrix:
        if not isinstance(other, Matrix):
            return NotImplemented
        self._check(other)
        fld = self.field
        t = fld.mul_tensor
        bound = _maxabs(self.num) * _maxabs(other.num) * self.dim * fld.degree**2 * fld.mul_tensor_max
        a, b = _widen(self.num, other.num, bound)
        if a.dtype == object:
            t = t.astype(object)
        p = np.einsum("ija,jkb->ikab", a, b)
        c = np.tensordot(p, t, axes=([2, 3], [0, 1]))
        return Matrix._make(fld, c, self.den * other.den)

    __mul__ = __matmul__

    def scale(self, c) -> Matrix:
        """Multiply every entry by the scalar ``c``."""
        fld = self.field
        if not isinstance(c, CyclotomicElement):
            q = Fraction(c)
            return Matrix._make(fld, self.num * q.numerator, self.den * q.denominator)
        if c.conductor != fld.conductor:
            raise FieldMismatch("scalar from another field; embed first")
        cv = np.array(c.num, dtype=object)
        bound = _maxabs(self.num) * max(abs(x) for x in c.num) * fld.degree**2 * fld.mul_tensor_max
        t = fld.mul_tensor
        num = self.num
        if bound < _INT64_SAFE and num.dtype != object:
            cv = cv.astype(np.int64)
        else:
            num = num.astype(object)
            t = t.astype(object)
        p = np.einsum("ija,b->ijab", num, cv)
        out = np.tensordot(p, t, axes=([2, 3], [0, 1]))
        return Matrix._make(fld, out, self.den * c.den)

    def __neg__(self) -> Matrix:
        return Matrix._make(self.field, -self.num, self.den)

    def __add__(self, other: Matrix) -> Matrix:
        self._check(other)
        a = self.num.astype(object) * other.den + other.num.astype(object) * self.den
        return Matrix._make(self.field, a, self.den * other.den)

    def __sub__(self, other: Matrix) -> Matrix:
        return self + (-other)

    def det(self) -> CyclotomicElement:
        m = self.rows()
        if self.dim == 1:
            return m[0][0]
        if self.dim == 2:
            return m[0][0] * m[1][1] - m[0][1] * m[1][0]
        if self.dim == 3:
            return (
                m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1])
                - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0])
                + m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0])
            )
        raise NotImplementedError("det implemented for dim <= 3")

    def inv(self) -> Matrix:
        """Inverse via the adjugate."""
        d = self.det()
        if d.is_zero():
            raise SingularMatrix("matrix is singular")
        m = self.rows()
        if self.dim == 1:
            adj = [[self.field.one()]]
        elif self.dim == 2:
            adj = [[m[1][1], -m[0][1]], [-m[1][0], m[0][0]]]
        elif self.dim == 3:
            def cof(i, j):
                r = [k for k in range(3) if k != i]
                c = [k for k in range(3) if k != j]
                v = m[r[0]][c[0]] * m[r[1]][c[1]] - m[r[0]][c[1]] * m[r[1]][c[0]]
                return v if (i + j) % 2 == 0 else -v
            adj = [[cof(j, i) for j in range(3)] for i in range(3)]
        else:
            raise NotImplementedError("inverse implemented for dim <= 3")
        return Matrix(adj, self.field).scale(d.inv())

    def __pow__(self, k: int) -> Matrix:
        if k < 0:
            return self.inv() ** (-k)
        result = Matrix.identity(self.dim, self.field)
        base = self
        while k:
            if k & 1:
                result = result @ base
            k >>= 1
            if k:
                base = base @ base
        return result

    def transpose(self) -> Matrix:
        return Matrix._make(self.field, np.ascontiguousarray(self.num.transpose(1, 0, 2)), self.den)

    def embed(self, target: CyclotomicField) -> Matrix:
        if target.conductor == self.conductor:
            return self
        return Matrix([[x.embed(target) for x in r] for r in self.rows()], target)

    # PBD(2,1) shape -------------------------------------------------------

    def is_pbd(self) -> bool:
        """Block diagonal with a 2x2 block and a nonzero 1x1 corner."""
        n = self.num
        return (
            self.dim == 3
            and not n[0, 2].any()
            and not n[1, 2].any()
            and not n[2, 0].any()
            and not n[2, 1].any()
            and bool(n[2, 2].any())
        )

    def upper_block(self) -> Matrix:
        return Matrix._make(self.field, np.array(self.num[:2, :2]), self.den)

    # serialisation --------------------------------------------------------

    def to_json(self) -> dict:
        return {
            "dim": self.dim,
            "conductor": self.conductor,
            "rows": [[x.to_json() for x in r] for r in self.rows()],
        }

    @classmethod
    def from_json(cls, data: dict) -> Matrix:
        fld = field(int(data["conductor"]))
        rows = [[CyclotomicElement.from_json(e).embed(fld) for e in r] for r in data["rows"]]
        if len(rows) != int(data["dim"]):
            raise ValueError("dim does not match rows")
        return cls(rows, fld)


def _first_nonzero(a: Matrix) -> tuple[int, int] | None:
    n = a.num
    for i in range(a.dim):
        for j in range(a.dim):
            if n[i, j].any():
                return i, j
    return None


def projective_canonical(a: Matrix) -> Matrix:
    """The scalar multiple of ``a`` whose first nonzero row-major entry is 1."""
    pos = _first_nonzero(a)
    if pos is None:
        raise SingularMatrix("zero matrix has no projective class")
    lead = a.entry(*pos)
    if lead == 1:
        return a
    if lead.is_rational():
        return a.scale(1 / lead.to_fraction())
    return a.scale(lead.inv())


class ProjectiveMatrix:
    """Class of an invertible matrix modulo nonzero scalars."""

    __slots__ = ("rep",)

    def __init__(self, a: Matrix, *, canonical: bool = False):
        self.rep = a if canonical else projective_canonical(a)

    @property
    def dim(self) -> int:
        return self.rep.dim

    @property
    def field(self) -> CyclotomicField:
        return self.rep.field

    def __matmul__(self, other: ProjectiveMatrix) -> ProjectiveMatrix:
        return ProjectiveMatrix(self.rep @ other.rep)

    def inv(self) -> ProjectiveMatrix:
        return ProjectiveMatrix(self.rep.inv())

    def __eq__(self, other) -> bool:
        if not isinstance(other, ProjectiveMatrix):
            return NotImplemented
        return self.rep == other.rep

    def __hash__(self) -> int:
        return hash(("P", self.rep.key()))

    def __repr__(self) -> str:
        return f"Projective({self.rep!r})"

    def is_identity(self) -> bool:
        return self.rep.is_identity()


def block_embed(a: Matrix, corner=1) -> Matrix:
    """3x3 matrix with ``a`` as upper-left block and ``corner`` at (3, 3)."""
    if a.dim != 2:
        raise ValueError("block_embed expects a 2x2 matrix")
    r = a.rows()
    z = a.field.zero()
    c = a.field(corner)
    return Matrix([[r[0][0], r[0][1], z], [r[1][0], r[1][1], z], [z, z, c]], a.field)


def pbd_restrict(a: Matrix | ProjectiveMatrix) -> ProjectiveMatrix:
    """Projective class of the upper-left 2x2 block of a PBD(2,1) element."""
    m = a.rep if isinstance(a, ProjectiveMatrix) else a
    if not m.is_pbd():
        raise NotPBDShape(f"not block diagonal of shape (2,1): {m!r}")
    return ProjectiveMatrix(m.upper_block())
