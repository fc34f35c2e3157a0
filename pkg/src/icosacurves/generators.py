"""Named generator matrices and exact evaluation of words in them."""

from __future__ import annotations

import math
import re
from dataclasses import dataclass, field as dc_field
from typing import Mapping, Sequence, Union

from .cyclo import CyclotomicElement, CyclotomicField, field, sqrt5
from .matrices import Matrix, block_embed, projective_canonical

__all__ = [
    "GeneratorSet",
    "IdentityResult",
    "Relation",
    "RELATIONS",
    "UnknownGenerator",
    "catalog_matrix",
    "check_word_identity",
    "evaluate_word",
    "generator_catalog",
    "parse_word",
    "relation_environment",
]


class UnknownGenerator(KeyError):
    pass


@dataclass(frozen=True)
class GeneratorSet:
    name: str
    matrices: tuple[Matrix, ...]
    field: CyclotomicField
    mode: str = "projective"
    labels: tuple[str, ...] = ()
    choices: Mapping[str, str] = dc_field(default_factory=dict)

    def __post_init__(self):
        if self.mode not in ("linear", "projective"):
            raise ValueError(f"mode must be linear or projective, not {self.mode!r}")
        for m in self.matrices:
            if m.conductor != self.field.conductor:
                raise ValueError("generator over the wrong field")
            if m.det().is_zero():
                raise ValueError(f"singular generator in {self.name}")

    def with_mode(self, mode: str) -> GeneratorSet:
        return GeneratorSet(self.name, self.matrices, self.field, mode, self.labels, self.choices)

    def reordered(self, order: Sequence[int]) -> GeneratorSet:
        return GeneratorSet(
            self.name,
            tuple(self.matrices[i] for i in order),
            self.field,
            self.mode,
            tuple(self.labels[i] for i in order) if self.labels else (),
            self.choices,
        )

    def to_json(self) -> dict:
        return {
            "name": self.name,
            "mode": self.mode,
            "conductor": self.field.conductor,
            "labels": list(self.labels),
            "matrices": [m.to_json() for m in self.matrices],
        }

    @classmethod
    def from_json(cls, data: dict) -> GeneratorSet:
        mats = [Matrix.from_json(m) for m in data["matrices"]]
        n = int(data.get("conductor") or math.lcm(*(m.conductor for m in mats)))
        fld = field(n)
        mats = tuple(m.embed(fld) for m in mats)
        labels = tuple(data.get("labels") or (f"g{i}" for i in range(len(mats))))
        return cls(data.get("name", "user"), mats, fld, data.get("mode", "projective"), labels)


def _choices(sign: int) -> dict:
    return {
        "sqrt5": ("+" if sign == 1 else "-") + "(z5 - z5^2 - z5^3 + z5^4)",
        "xi": "zeta60 (xi^12 = zeta5)",
    }


# -- individual matrices ------------------------------------------------------


def _sigma(sign: int) -> Matrix:
    f5 = field(5)
    z = f5.zeta
    r5 = sqrt5(f5, sign).inv()
    a = (z(1) - z(4)) * r5
    b = (z(3) - z(2)) * r5
    return Matrix([[a, b, 0], [b, -a, 0], [0, 0, 1]], f5)


def _gamma() -> Matrix:
    f5 = field(5)
    z = f5.zeta
    c = z(1) + z(4)
    s = (z(2) - z(3)).inv()
    return Matrix([[c * s, s], [s, -c * s]], f5)


def _entries(name: str, sign: int) -> Matrix:
    f5 = field(5)
    z = f5.zeta
    if name == "sigma":
        return _sigma(sign)
    if name == "tau":
        return Matrix.diag([z(1), 1, 1], f5)
    if name in ("rho", "rho_matrix"):
        return Matrix.diag([z(3), z(2), 1], f5)
    if name == "phi":
        f60 = field(60)
        return Matrix.diag([f60.zeta(12), 1, f60.zeta(1)], f60)
    if name == "alpha":
        return Matrix.diag([-z(3), -z(2)], f5)
    if name == "beta":
        return Matrix([[0, 1], [-1, 0]], field(1))
    if name == "gamma":
        return _gamma()
    if name in ("alpha'", "alpha_prime"):
        return block_embed(_entries("alpha", sign))
    if name in ("beta'", "beta_prime"):
        return block_embed(_entries("beta", sign))
    if name in ("gamma'", "gamma_prime"):
        return block_embed(_entries("gamma", sign))
    if name in ("D", "zeta5_block"):
        return Matrix.diag([z(1), z(1), 1], f5)
    if name in ("m", "minus_block"):
        return Matrix.diag([-1, -1, 1], field(1))
    if name in ("eps", "zeta5_scalar"):
        return Matrix.scalar(z(1), 3, f5)
    if name in ("s", "split_involution"):
        f4 = field(4)
        return Matrix([[0, 1, 0], [-1, 0, 0], [0, 0, f4.zeta(1)]], f4)
    if name in ("I", "I3"):
        return Matrix.identity(3)
    if name == "I2":
        return Matrix.identity(2)
    m = re.fullmatch(r"lambda\(?(\d+)\)?", name)
    if m:
        d = int(m.group(1))
        fd = field(d)
        return Matrix.diag([1, 1, fd.zeta(1)], fd)
    raise UnknownGenerator(name)


def catalog_matrix(name: str, sqrt5_sign: int = 1, conductor: int | None = None) -> Matrix:
    """One named matrix, optionally embedded into Q(zeta_conductor)."""
    a = _entries(name, sqrt5_sign)
    return a.embed(field(conductor)) if conductor else a


def _set(name: str, labels: Sequence[str], n: int, mode: str, sign: int) -> GeneratorSet:
    fld = field(n)
    mats = tuple(catalog_matrix(l, sign).embed(fld) for l in labels)
    return GeneratorSet(name, mats, fld, mode, tuple(labels), _choices(sign))


def generator_catalog(name: str, d: int | None = None, sqrt5_sign: int = 1) -> GeneratorSet:
    """Generator sets by name.

    ``Gtilde(30)``, ``Gtilde(20)``, ``Gtilde(12)`` are the generators of the
    automorphism groups of C_30, C_20, C_12; ``C(d)_galois`` the two standard
    Galois groups of Y Z^(d-1) + X^d + Y^d at (1:0:0) and (0:0:1).  Single
    matrix names return one-element sets.
    """
    m = re.fullmatch(r"(\w+)\((\d+)\)(_galois)?", name)
    if m and d is None:
        d = int(m.group(2))
        name = m.group(1) + ("(d)" + m.group(3) if m.group(3) else "")
    if name in ("Gtilde", "Gtilde(d)") or name.startswith("Gtilde"):
        if d == 30:
            return _set("Gtilde(30)", ["sigma", "tau", "lambda30"], 30, "projective", sqrt5_sign)
        if d == 20:
            return _set("Gtilde(20)", ["sigma", "tau", "lambda20"], 20, "projective", sqrt5_sign)
        if d == 12:
            return _set("Gtilde(12)", ["sigma", "phi"], 60, "projective", sqrt5_sign)
        raise ValueError(f"Gtilde is defined for d in 30, 20, 12, not {d}")
    if name in ("C(d)_galois", "C_galois", "C"):
        if d is None or d < 3:
            raise ValueError("C(d)_galois needs d >= 3")
        n = math.lcm(d, d - 1)
        fld = field(n)
        q = Matrix.diag([fld.zeta(n // d), 1, 1], fld)
        p = Matrix.diag([1, 1, fld.zeta(n // (d - 1))], fld)
        return GeneratorSet(f"C({d})_galois", (q, p), fld, "projective", ("g_Q", "g_P"))
    if name == "icosahedral_2x2":
        return _set(name, ["alpha", "beta", "gamma"], 5, "linear", sqrt5_sign)
    if name == "S21":
        return _set(name, ["alpha'", "beta'", "gamma'"], 5, "linear", sqrt5_sign)
    if name == "K":
        return _set(name, ["sigma", "rho"], 5, "linear", sqrt5_sign)
    if name == "H":
        return _set(name, ["sigma", "tau"], 5, "linear", sqrt5_sign)
    if name == "lambda" or name == "lambda(d)":
        if d is None:
            raise ValueError("lambda needs d")
        name = f"lambda{d}"
    a = catalog_matrix(name, sqrt5_sign)
    mode = "linear" if a.dim == 2 else "projective"
    return GeneratorSet(name, (a,), a.field, mode, (name,), _choices(sqrt5_sign))


# -- words --------------------------------------------------------------------

Word = list  # list of (name | Word, exponent)

_TOKEN = re.compile(r"\s*(?:(?P<name>[A-Za-z_][A-Za-z0-9_']*)|(?P<pow>\^\s*-?\d+)|(?P<open>\()|(?P<close>\)))")


def parse_word(text: str) -> Word:
    """Parse ``"(rho^2 sigma rho)^2 rho"`` into nested (factor, exponent) pairs."""
    pos = 0
    stack: list[list] = [[]]
    while pos < len(text):
        if text[pos:].strip() == "":
            break
        m = _TOKEN.match(text, pos)
        if not m:
            raise ValueError(f"cannot parse word at {text[pos:]!r}")
        pos = m.end()
        if m.group("name"):
            stack[-1].append([m.group("name"), 1])
        elif m.group("pow"):
            if not stack[-1]:
                raise ValueError("exponent without base")
            stack[-1][-1][1] *= int(m.group("pow")[1:].replace(" ", ""))
        elif m.group("open"):
            stack.append([])
        else:
            if len(stack) == 1:
                raise ValueError("unbalanced parenthesis")
            inner = stack.pop()
            stack[-1].append([inner, 1])
    if len(stack) != 1:
        raise ValueError("unbalanced parenthesis")

    def freeze(word):
        return [(freeze(f) if isinstance(f, list) else f, e) for f, e in word]

    return freeze(stack[0])


def _names(word: Word) -> set[str]:
    out = set()
    for f, _ in word:
        out |= _names(f) if isinstance(f, list) else {f}
    return out


def evaluate_word(word: Union[str, Word], env: Mapping[str, Matrix], fld: CyclotomicField) -> Matrix:
    if isinstance(word, str):
        word = parse_word(word)
    result = None
    for f, e in word:
        base = evaluate_word(f, env, fld) if isinstance(f, list) else env[f].embed(fld)
        term = base**e
        result = term if result is None else result @ term
    if result is None:
        raise ValueError("empty word")
    return result


@dataclass(frozen=True)
class IdentityResult:
    status: str  # "exact" | "projective" | "fail"
    value: Matrix
    target: Matrix
    scalar: CyclotomicElement | None = None
    residual: Matrix | None = None

    def holds(self, mode: str = "projective") -> bool:
        if mode == "linear":
            return self.status == "exact"
        return self.status in ("exact", "projective")

    def to_json(self) -> dict:
        out = {"status": self.status}
        if self.scalar is not None:
            out["scalar"] = str(self.scalar)
        if self.residual is not None:
            out["residual"] = self.residual.to_json()
        return out


def check_word_identity(
    word: Union[str, Word],
    target: Union[str, Word, Matrix],
    mode: str = "linear",
    env: Mapping[str, Matrix] | None = None,
    fld: CyclotomicField | None = None,
) -> IdentityResult:
    """Evaluate ``word`` exactly and compare with ``target``.

    Reports ``exact`` equality, ``projective`` equality (value = c * target,
    with ``c`` returned), or ``fail`` with the residual value - target.  In
    ``projective`` mode only the verdict threshold changes (see
    :meth:`IdentityResult.holds`); the measurement is the same.
    """
    if mode not in ("linear", "projective"):
        raise ValueError(mode)
    env = dict(env or relation_environment())
    if isinstance(word, str):
        word = parse_word(word)
    if isinstance(target, str):
        target = parse_word(target)
    if fld is None:
        conds = [env[n].conductor for n in _names(word)]
        if not isinstance(target, Matrix):
            conds += [env[n].conductor for n in _names(target)]
        else:
            conds.append(target.conductor)
        fld = field(math.lcm(*conds))
    value = evaluate_word(word, env, fld)
    tgt = target.embed(fld) if isinstance(target, Matrix) else evaluate_word(target, env, fld)
    if value == tgt:
        return IdentityResult("exact", value, tgt)
    cv, ct = projective_canonical(value), projective_canonical(tgt)
    if cv == ct:
        i, j = next((i, j) for i in range(tgt.dim) for j in range(tgt.dim) if tgt.num[i, j].any())
        c = value.entry(i, j) / tgt.entry(i, j)
        return IdentityResult("projective", value, tgt, scalar=c)
    return IdentityResult("fail", value, tgt, residual=value - tgt)


_ENV_NAMES = (
    "sigma", "tau", "rho", "phi", "alpha'", "beta'", "gamma'", "D", "m", "eps", "s",
    "I", "lambda12", "lambda20", "lambda30",
)


def relation_environment(sqrt5_sign: int = 1) -> dict[str, Matrix]:
    """All 3x3 names usable in registered relations."""
    return {n: catalog_matrix(n, sqrt5_sign) for n in _ENV_NAMES}


@dataclass(frozen=True)
class Relation:
    """A registered matrix identity ``lhs = rhs``.

    ``variant`` is ``"stated"`` for an identity in its catalogued form and
    ``"corrected"`` for the repaired form of a stated identity that fails;
    ``corrects`` names the stated one.
    """

    relation_id: str
    lhs: str
    rhs: str
    variant: str = "stated"
    corrects: str | None = None
    note: str = ""

    def check(self, sqrt5_sign: int = 1, mode: str = "linear") -> IdentityResult:
        env = relation_environment(sqrt5_sign)
        return check_word_identity(self.lhs, self.rhs, mode, env)


RELATIONS: tuple[Relation, ...] = (
    Relation("zeta5-block", "(sigma tau^4)^2", "D", note="D = diag(z5, z5, 1)"),
    Relation("rho-from-tau", "rho", "tau D^2"),
    Relation("alpha-prime-word", "alpha'", "(rho^2 sigma rho)^2 rho"),
    Relation("beta-prime-word", "beta'", "sigma (rho^2 sigma rho)^2 rho"),
    Relation("gamma-prime-word", "gamma'", "sigma^2 rho"),
    Relation("minus-block-in-S21", "m", "beta'^2", note="m = diag(-1, -1, 1)"),
    Relation("sigma-from-S21", "sigma", "m beta' gamma'"),
    Relation("tau-from-S21", "tau", "m alpha' D^2"),
    Relation("epsilon", "(sigma phi^4)^3", "eps", note="eps = z5 * I"),
    Relation("split-involution-square", "s^2", "I", note="s = [[0,1,0],[-1,0,0],[0,0,i]]"),
    Relation("lambda12-from-phi", "phi^5", "lambda12"),
    # repaired forms of the stated identities above that fail exactly
    Relation("zeta5-block/corrected", "(sigma tau^4)^3", "D", "corrected", "zeta5-block",
             "exponent 3, not 2: (sigma tau^4)^2 is not even a scalar multiple of D"),
    Relation("alpha-prime-word/corrected", "gamma'", "(rho^2 sigma rho)^2 rho", "corrected",
             "alpha-prime-word", "the word evaluates to gamma', not alpha'"),
    Relation("gamma-prime-word/corrected", "alpha'", "sigma^2 rho", "corrected",
             "gamma-prime-word", "sigma^2 = m, so sigma^2 rho = m rho = alpha'"),
    Relation("tau-from-S21/corrected", "tau", "m alpha' D^-2", "corrected", "tau-from-S21",
             "m alpha' = rho and rho = tau D^2, hence tau = m alpha' D^-2"),
)
