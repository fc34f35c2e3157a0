"""Sparse homogeneous forms over cyclotomic fields and the curve catalog.

Pullback convention: ``pullback(F, A)(v) = F(A v)``, so variable ``x_i`` is
replaced by ``sum_j A[i][j] x_j`` and ``pullback(F, A @ B)`` equals
``pullback(pullback(F, A), B)``.
"""

from __future__ import annotations

import contextlib
import math
from dataclasses import dataclass, field as dc_field
from fractions import Fraction
from typing import Iterator, Mapping

from .cyclo import CyclotomicElement, CyclotomicField, field
from .groups import GroupTable, closure
from .matrices import Matrix, projective_canonical

__all__ = [
    "BinaryForm",
    "Form",
    "GaloisVerdict",
    "InvarianceReport",
    "MUTATIONS",
    "TernaryForm",
    "binary_squarefree",
    "curve_catalog",
    "invariance_character",
    "invariant_monomial_counts",
    "is_smooth_standard",
    "molien_series",
    "pullback",
    "standard_galois_check",
    "standard_lift",
    "tampered",
]

VARS = ("X", "Y", "Z")


class Form:
    """Homogeneous polynomial stored as ``{exponent tuple: nonzero coefficient}``."""

    nvars: int = 0

    def __init__(self, terms: Mapping, fld: CyclotomicField | None = None, degree: int | None = None):
        terms = dict(terms)
        if fld is None:
            conds = {c.conductor for c in terms.values() if isinstance(c, CyclotomicElement)}
            fld = field(math.lcm(*conds)) if conds else field(1)
        clean = {}
        for e, c in terms.items():
            e = tuple(int(x) for x in e)
            if len(e) != self.nvars:
                raise ValueError(f"exponent {e} has wrong length for {self.nvars} variables")
            c = fld(c)
            if not c.is_zero():
                clean[e] = c
        degs = {sum(e) for e in clean}
        if len(degs) > 1:
            raise ValueError(f"not homogeneous: degrees {sorted(degs)}")
        if degree is None:
            degree = degs.pop() if degs else 0
        elif degs and degs != {degree}:
            raise ValueError("terms do not have the stated degree")
        self.terms = clean
        self.field = fld
        self.degree = int(degree)

    def _new(self, terms, fld=None, degree=None):
        return type(self)(terms, fld or self.field, self.degree if degree is None else degree)

    def __repr__(self) -> str:
        return f"{type(self).__name__}({self})"

    def __str__(self) -> str:
        if not self.terms:
            return "0"
        parts = []
        for e in sorted(self.terms, reverse=True):
            c = self.terms[e]
            mono = "*".join(
                (VARS[i] if k == 1 else f"{VARS[i]}^{k}") for i, k in enumerate(e) if k
            )
            coef = str(c)
            if mono:
                coef = "" if coef == "1" else ("-" if coef == "-1" else f"({coef})*" if " " in coef else f"{coef}*")
                parts.append(coef + mono)
            else:
                parts.append(coef)
        return " + ".join(parts).replace("+ -", "- ")

    def is_zero(self) -> bool:
        return not self.terms

    def embed(self, fld: CyclotomicField) -> Form:
        if fld.conductor == self.field.conductor:
            return self
        return self._new({e: c.embed(fld) for e, c in self.terms.items()}, fld)

    def _align(self, other: Form):
        n = math.lcm(self.field.conductor, other.field.conductor)
        f = field(n)
        return self.embed(f), other.embed(f), f

    def __eq__(self, other) -> bool:
        if not isinstance(other, Form):
            return NotImplemented
        if other.nvars != self.nvars:
            return False
        a, b, _ = self._align(other)
        return a.terms == b.terms and (a.degree == b.degree or not a.terms)

    def __hash__(self):
        return hash((self.nvars, self.degree, frozenset(self.terms)))

    def __add__(self, other: Form) -> Form:
        a, b, f = self._align(other)
        if a.terms and b.terms and a.degree != b.degree:
            raise ValueError("degree mismatch")
        out = dict(a.terms)
        for e, c in b.terms.items():
            out[e] = out[e] + c if e in out else c
        return self._new(out, f, a.degree if a.terms else b.degree)

    def __neg__(self) -> Form:
        return self._new({e: -c for e, c in self.terms.items()})

    def __sub__(self, other: Form) -> Form:
        return self + (-other)

    def scale(self, c) -> Form:
        if isinstance(c, CyclotomicElement) and c.conductor != self.field.conductor:
            f = field(math.lcm(c.conductor, self.field.conductor))
            return self.embed(f).scale(c.embed(f))
        return self._new({e: v * c for e, v in self.terms.items()})

    def __mul__(self, other: Form) -> Form:
        if not isinstance(other, Form):
            return self.scale(other)
        a, b, f = self._align(other)
        out: dict = {}
        for e1, c1 in a.terms.items():
            for e2, c2 in b.terms.items():
                e = tuple(x + y for x, y in zip(e1, e2))
                v = c1 * c2
                out[e] = out[e] + v if e in out else v
        return self._new(out, f, a.degree + b.degree)

    def __pow__(self, k: int) -> Form:
        result = self._new({(0,) * self.nvars: 1}, degree=0)
        for _ in range(k):
            result = result * self
        return result

    def __call__(self, *point) -> CyclotomicElement:
        """Evaluate at a point (entries coerced into a common field)."""
        if len(point) != self.nvars:
            raise ValueError("wrong number of coordinates")
        conds = [p.conductor for p in point if isinstance(p, CyclotomicElement)] + [self.field.conductor]
        f = field(math.lcm(*conds))
        pt = [f(p) for p in point]
        total = f.zero()
        for e, c in self.terms.items():
            v = c.embed(f)
            for x, k in zip(pt, e):
                if k:
                    v = v * x**k
            total = total + v
        return total

    def derivative(self, i: int) -> Form:
        out = {}
        for e, c in self.terms.items():
            if e[i]:
                ne = list(e)
                ne[i] -= 1
                out[tuple(ne)] = c * e[i]
        return self._new(out, degree=max(self.degree - 1, 0))

    def is_rational(self) -> bool:
        return all(c.is_rational() for c in self.terms.values())

    def to_json(self) -> dict:
        return {
            "vars": list(VARS[: self.nvars]),
            "degree": self.degree,
            "terms": [
                {"exp": list(e), "coeff": c.to_json()} for e, c in sorted(self.terms.items(), reverse=True)
            ],
        }

    @staticmethod
    def from_json(data: dict) -> Form:
        nv = len(data["vars"])
        cls = {2: BinaryForm, 3: TernaryForm}.get(nv)
        if cls is None:
            raise ValueError("forms must have 2 or 3 variables")
        terms = {}
        for t in data["terms"]:
            c = t["coeff"]
            terms[tuple(t["exp"])] = (
                CyclotomicElement.from_json(c) if isinstance(c, dict) else Fraction(str(c))
            )
        conds = [c.conductor for c in terms.values() if isinstance(c, CyclotomicElement)]
        f = field(math.lcm(*conds)) if conds else field(1)
        return cls(terms, f, int(data["degree"]))


class BinaryForm(Form):
    nvars = 2

    @classmethod
    def from_coeffs(cls, degree: int, coeffs: Mapping[int, object], fld=None) -> BinaryForm:
        """``coeffs[i]`` is the coefficient of X^i Y^(degree - i)."""
        return cls({(i, degree - i): c for i, c in coeffs.items()}, fld, degree)

    def coeff(self, i: int) -> CyclotomicElement:
        return self.terms.get((i, self.degree - i), self.field.zero())


class TernaryForm(Form):
    nvars = 3

    @classmethod
    def standard(cls, f: BinaryForm, z_coeff=1) -> TernaryForm:
        """``z_coeff * Z^d + f(X, Y)``."""
        d = f.degree
        terms = {(i, j, 0): c for (i, j), c in f.terms.items()}
        terms[(0, 0, d)] = f.field(z_coeff)
        return cls(terms, f.field, d)

    def split_standard(self) -> tuple[CyclotomicElement, BinaryForm] | None:
        """``(c, f)`` with self = c Z^d + f(X, Y), or ``None`` if of another shape."""
        d = self.degree
        binary = {}
        for (i, j, k), c in self.terms.items():
            if k == 0:
                binary[(i, j)] = c
            elif k != d:
                return None
        return self.terms.get((0, 0, d), self.field.zero()), BinaryForm(binary, self.field, d)


# -- pullback -----------------------------------------------------------------


def pullback(f: Form, a: Matrix) -> Form:
    """Exact symbolic substitution v -> A v."""
    if a.dim != f.nvars:
        raise ValueError(f"{a.dim}x{a.dim} matrix cannot act on a form in {f.nvars} variables")
    n = math.lcm(a.conductor, f.field.conductor)
    fld = field(n)
    a = a.embed(fld)
    f = f.embed(fld)
    rows = a.rows()
    cls = type(f)
    unit = tuple([0] * f.nvars)
    linear = []
    for i in range(f.nvars):
        terms = {}
        for j in range(f.nvars):
            if not rows[i][j].is_zero():
                e = [0] * f.nvars
                e[j] = 1
                terms[tuple(e)] = rows[i][j]
        linear.append(cls(terms, fld, 1))
    powers = [[cls({unit: 1}, fld, 0)] for _ in range(f.nvars)]

    def pw(i, k):
        while len(powers[i]) <= k:
            powers[i].append(powers[i][-1] * linear[i])
        return powers[i][k]

    total = cls({}, fld, f.degree)
    for e, c in f.terms.items():
        term = cls({unit: c}, fld, 0)
        for i, k in enumerate(e):
            if k:
                term = term * pw(i, k)
        total = total + term
    return total


def _proportional(p: Form, f: Form) -> CyclotomicElement | None:
    """``c`` with p = c f, or ``None``."""
    p, f, _ = p._align(f)
    if not f.terms:
        return f.field.one() if not p.terms else None
    if set(p.terms) != set(f.terms):
        return None
    e0 = next(iter(sorted(f.terms)))
    c = p.terms[e0] / f.terms[e0]
    return c if all(p.terms[e] == c * v for e, v in f.terms.items()) else None


# -- fast exact invariance test ----------------------------------------------


def _binary_evaluator(f: BinaryForm):
    """Evaluate f(u, w) with powers built along the gcd of the exponents."""
    d = f.degree
    exps = [(i, j, c) for (i, j), c in f.terms.items()]
    step = 0
    for i, j, _ in exps:
        step = math.gcd(step, i, j)
    step = step or 1

    def ev(u: CyclotomicElement, w: CyclotomicElement) -> CyclotomicElement:
        us, ws = u**step, w**step
        upow, wpow = [u.field.one()], [u.field.one()]
        for _ in range(d // step):
            upow.append(upow[-1] * us)
            wpow.append(wpow[-1] * ws)
        total = u.field.zero()
        for i, j, c in exps:
            cc = c.to_fraction() if c.is_rational() else c.embed(u.field)
            total = total + upow[i // step] * wpow[j // step] * cc
        return total

    return ev


def _binary_character(f: BinaryForm, a: Matrix, ev=None) -> CyclotomicElement | None:
    """``c`` with f(A v) = c f(v), decided by evaluation at d+1 points (t : 1)."""
    n = math.lcm(a.conductor, f.field.conductor)
    fld = field(n)
    a = a.embed(fld)
    if f.field.conductor != n:
        f = f.embed(fld)
    ev = ev or _binary_evaluator(f)
    (p, q), (r, s) = a.rows()
    d = f.degree
    c = None
    pending = []
    for t in range(d + 1):
        lhs = ev(p * t + q, r * t + s)
        base = ev(fld.rational(t), fld.one())
        if c is None and not base.is_zero():
            c = lhs * (1 / base.to_fraction()) if base.is_rational() else lhs / base
            for l0, b0 in pending:
                if l0 != c * b0:
                    return None
        elif c is None:
            pending.append((lhs, base))
        elif lhs != c * base:
            return None
    return c


def standard_lift(a: Matrix) -> Matrix:
    """Representative with lower-right entry 1 for PBD(2,1)-shaped classes."""
    if a.dim == 3 and a.is_pbd():
        corner = a.entry(2, 2)
        if corner != 1:
            return a.scale(corner.inv())
    return a


def _lead(a: Matrix) -> CyclotomicElement:
    for row in a.rows():
        for x in row:
            if not x.is_zero():
                return x
    raise ValueError("zero matrix")


def _scaled_character(f: BinaryForm, b: Matrix, cache: dict | None):
    """Binary character through the projective class of ``b``.

    With b = mu * B0 and B0 canonical, homogeneity gives c(b) = mu^d c(B0),
    so only one evaluation per class is needed.
    """
    if cache is None:
        return _binary_character(f, b)
    mu = _lead(b)
    b0 = projective_canonical(b)
    key = b0.key()
    if key not in cache:
        cache[key] = _binary_character(f, b0)
    c0 = cache[key]
    if c0 is None:
        return None
    return c0 * mu**f.degree


def character(f: Form, a: Matrix, cache: dict | None = None) -> CyclotomicElement | None:
    """Scalar ``c`` with pullback(f, a) = c f, or ``None`` if not proportional."""
    if isinstance(f, BinaryForm) and a.dim == 2:
        return _scaled_character(f, a, cache)
    if isinstance(f, TernaryForm) and a.dim == 3 and a.is_pbd():
        split = f.split_standard()
        if split is not None:
            z0, b = split
            n = math.lcm(a.conductor, f.field.conductor)
            fld = field(n)
            a = a.embed(fld)
            cz = a.entry(2, 2) ** f.degree
            if b.is_zero():
                return cz
            cb = _scaled_character(b.embed(fld), a.upper_block(), cache)
            if cb is None:
                return None
            if not z0.is_zero() and cb != cz:
                return None
            return cb
    return _proportional(pullback(f, a), f)


@dataclass
class InvarianceReport:
    characters: list  # CyclotomicElement | None per element
    failing: list[int] = dc_field(default_factory=list)

    @property
    def preserved(self) -> bool:
        """Every element maps the form to a multiple of itself."""
        return not self.failing

    @property
    def invariant(self) -> bool:
        return self.preserved and all(c == 1 for c in self.characters)

    @property
    def verdict(self) -> str:
        if self.invariant:
            return "invariant"
        return "relative invariant" if self.preserved else "not preserved"

    def nontrivial(self) -> list[int]:
        return [i for i, c in enumerate(self.characters) if c is not None and c != 1]

    def to_json(self) -> dict:
        return {
            "verdict": self.verdict,
            "elements": len(self.characters),
            "failing": self.failing[:10],
            "nontrivial_characters": len(self.nontrivial()),
        }


def invariance_character(f: Form, g: GroupTable, lift=None, stop_at_first_failure: bool = False) -> InvarianceReport:
    """Character c_g with pullback(f, g) = c_g f for every element of ``g``.

    Projective groups are lifted with :func:`standard_lift` unless ``lift``
    is given; linear groups use their elements as they are.
    """
    if lift is None:
        lift = standard_lift if g.mode == "projective" else (lambda a: a)
    chars: list = []
    failing: list[int] = []
    cache: dict = {}
    for i, a in enumerate(g.elements):
        c = character(f, lift(a), cache)
        chars.append(c)
        if c is None:
            failing.append(i)
            if stop_at_first_failure:
                break
    return InvarianceReport(chars, failing)


# -- squarefreeness and smoothness --------------------------------------------


def _as_scalar(c: CyclotomicElement, rational: bool):
    return c.to_fraction() if rational else c


def _trim(p: list) -> list:
    while p and p[-1] == 0:
        p.pop()
    return p


def poly_divmod(a: list, b: list):
    a = list(a)
    lead = b[-1]
    q = [0 * lead] * max(len(a) - len(b) + 1, 1)
    while len(a) >= len(b) and a:
        c = a[-1] / lead
        shift = len(a) - len(b)
        q[shift] = c
        for i, bi in enumerate(b):
            a[shift + i] = a[shift + i] - c * bi
        a.pop()
        _trim(a)
    return _trim(q), a


def poly_gcd(a: list, b: list) -> list:
    """Monic gcd of univariate polynomials (coefficients low -> high)."""
    a, b = _trim(list(a)), _trim(list(b))
    while b:
        _, r = poly_divmod(a, b)
        a, b = b, r
    if not a:
        return a
    lead = a[-1]
    return [x / lead for x in a]


def binary_squarefree(f: BinaryForm) -> bool:
    """True iff ``f`` has no repeated linear factor over the algebraic closure."""
    if f.is_zero():
        raise ValueError("the zero form has no factorisation")
    d = f.degree
    xs = sorted(i for i, _ in f.terms)
    lo, hi = xs[0], xs[-1]
    if lo >= 2 or d - hi >= 2:
        return False
    rational = f.is_rational()
    g = [0] * (hi - lo + 1)
    for (i, _), c in f.terms.items():
        g[i - lo] = _as_scalar(c, rational)
    if len(g) <= 2:
        return True
    dg = [k * g[k] for k in range(1, len(g))]
    return len(poly_gcd(g, dg)) == 1


def is_smooth_standard(d: int, f: BinaryForm) -> bool:
    """Smoothness of Z^d + f(X, Y) = 0.

    A singular point has Z = 0 and is a common zero of f, f_X, f_Y,
    i.e. a repeated factor of f.
    """
    if f.degree != d:
        raise ValueError(f"form has degree {f.degree}, expected {d}")
    if d < 4:
        raise ValueError("standard-form smoothness is stated for d >= 4")
    return binary_squarefree(f)


# -- Galois point in standard position ----------------------------------------


@dataclass
class GaloisVerdict:
    certified: bool
    degree: int
    point: str = "(0:0:1)"
    deck_order: int = 0
    deck_cyclic: bool = False
    invariant: bool = False
    fibres_preserved: bool = False
    smooth: bool | None = None
    message: str = ""

    def to_json(self) -> dict:
        return {
            "certified": self.certified,
            "degree": self.degree,
            "point": self.point,
            "deck_order": self.deck_order,
            "deck_cyclic": self.deck_cyclic,
            "invariant": self.invariant,
            "fibres_preserved": self.fibres_preserved,
            "smooth": self.smooth,
            "message": self.message,
        }


def standard_galois_check(d: int, f: BinaryForm) -> GaloisVerdict:
    """Certify (0:0:1) as an outer Galois point of Z^d + f(X, Y) = 0.

    The deck group is generated by diag(1, 1, zeta_d); it must have order d,
    be cyclic, fix the curve, and act trivially on (X : Y).
    """
    from .generators import generator_catalog
    from .recognition import is_cyclic

    if f.degree != d:
        raise ValueError(f"form has degree {f.degree}, expected {d}")
    deck = closure(generator_catalog("lambda", d), "projective")
    curve = TernaryForm.standard(f)
    inv = invariance_character(curve, deck)
    fibres = all(bool(a.is_pbd() and a.upper_block().is_scalar()) for a in deck.elements)
    cyclic = is_cyclic(deck) is not None
    try:
        smooth = binary_squarefree(f)
    except ValueError:
        smooth = False
    ok = deck.order == d and cyclic and inv.invariant and fibres
    if ok:
        msg = f"outer Galois point (0:0:1) certified with cyclic deck group Z{d}"
        if not smooth:
            msg += " (curve is singular)"
    else:
        msg = "not Galois in standard position"
    return GaloisVerdict(ok, d, "(0:0:1)", deck.order, cyclic, inv.invariant, fibres, smooth, msg)


# -- Molien series ------------------------------------------------------------


def molien_series(g: GroupTable, bound: int = 40) -> list[Fraction]:
    """Coefficients 0..bound of (1/|G|) sum_g 1/det(I - t g) for a linear 2x2 group."""
    if g.mode != "linear":
        raise ValueError("Molien series needs a linear group")
    if g.elements[0].dim != 2:
        raise ValueError("implemented for 2x2 groups")
    fld = g.elements[0].field
    acc = [fld.zero() for _ in range(bound + 1)]
    for a in g.elements:
        tr = a.entry(0, 0) + a.entry(1, 1)
        det = a.det()
        s_prev, s = fld.zero(), fld.one()
        acc[0] = acc[0] + s
        for k in range(1, bound + 1):
            s_prev, s = s, tr * s - det * s_prev
            acc[k] = acc[k] + s
    out = []
    for c in acc:
        if not c.is_rational():
            raise ArithmeticError("Molien coefficient is not rational")
        out.append(c.to_fraction() / g.order)
    return out


def invariant_monomial_counts(degrees=(12, 20, 30), bound: int = 40) -> list[int]:
    """Number of monomials of each weight in free generators of the given degrees."""
    counts = [0] * (bound + 1)
    counts[0] = 1
    for deg in degrees:
        for t in range(deg, bound + 1):
            counts[t] += counts[t - deg]
    return counts


# -- catalog ------------------------------------------------------------------

_BINARY_DATA: dict[str, tuple[int, dict[int, int]]] = {
    "F30": (30, {30: 1, 25: 522, 5: -522, 20: -10005, 10: -10005, 0: 1}),
    "F20": (20, {20: 1, 15: -228, 5: 228, 10: 494, 0: 1}),
    "F12": (12, {11: 1, 6: 11, 1: -1}),
}

_OVERRIDES: dict[tuple[str, int], int] = {}

#: Single-coefficient mutations of catalog data, each expected to break a claim.
MUTATIONS: tuple[tuple[str, int, int], ...] = (
    ("F20", 10, 495),
    ("F30", 25, 523),
    ("F30", 20, -10004),
    ("F12", 6, 12),
    ("F20", 15, -227),
)


@contextlib.contextmanager
def tampered(name: str, x_exponent: int, value: int) -> Iterator[None]:
    """Temporarily change one coefficient of a catalog binary form."""
    if name not in _BINARY_DATA:
        raise KeyError(name)
    key = (name, x_exponent)
    old = _OVERRIDES.get(key)
    _OVERRIDES[key] = value
    try:
        yield
    finally:
        if old is None:
            _OVERRIDES.pop(key, None)
        else:
            _OVERRIDES[key] = old


def _binary(name: str) -> BinaryForm:
    d, coeffs = _BINARY_DATA[name]
    coeffs = dict(coeffs)
    for (n, i), v in _OVERRIDES.items():
        if n == name:
            coeffs[i] = v
    return BinaryForm.from_coeffs(d, coeffs)


def curve_catalog(name: str, d: int | None = None) -> Form:
    """``F30``, ``F20``, ``F12``, ``C30``, ``C20``, ``C12``, ``C(d)``,
    ``fermat(d)``, ``fermat_binary(d)``, ``klein(d)``."""
    import re

    if name in _BINARY_DATA:
        return _binary(name)
    m = re.fullmatch(r"C(30|20|12)", name)
    if m:
        return TernaryForm.standard(_binary("F" + m.group(1)))
    m = re.fullmatch(r"(\w+?)\((\d+)\)", name)
    if m:
        name, d = m.group(1), int(m.group(2))
    if name in ("C", "fermat", "fermat_binary", "klein"):
        if d is None or d < 4:
            raise ValueError(f"{name} needs d >= 4")
        if name == "C":
            return TernaryForm({(0, 1, d - 1): 1, (d, 0, 0): 1, (0, d, 0): 1}, degree=d)
        if name == "fermat":
            return TernaryForm({(d, 0, 0): 1, (0, d, 0): 1, (0, 0, d): 1}, degree=d)
        if name == "fermat_binary":
            return BinaryForm({(d, 0): 1, (0, d): 1}, degree=d)
        return TernaryForm({(1, d - 1, 0): 1, (0, 1, d - 1): 1, (d - 1, 0, 1): 1}, degree=d)
    raise KeyError(f"unknown curve {name!r}")
