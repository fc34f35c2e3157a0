"""Structure certificates for finite groups given by :class:`GroupTable`.

A certificate names its witnesses (subgroups by generating indices,
elements by index) and lists checks as ``kind(args)``.  Every check is
recomputed from the witnesses alone by :meth:`StructureCertificate.replay`.
"""

from __future__ import annotations

from dataclasses import dataclass, field as dc_field
from typing import Callable

import numpy as np

from .groups import (
    GroupTable,
    SubgroupHandle,
    center,
    derived_series,
    derived_subgroup,
    intersect,
    subgroup_generated,
)
from .matrices import Matrix

__all__ = [
    "Check",
    "StructureCertificate",
    "direct_product_certificate",
    "is_abelian",
    "is_cyclic",
    "is_dihedral",
    "perfect_core",
    "recognize_aut_structure",
    "recognize_perfect_core",
    "semidirect_product_certificate",
]


# -- elementary tests ---------------------------------------------------------


def _members(g: GroupTable, s: SubgroupHandle | None) -> np.ndarray:
    return np.arange(g.order) if s is None else s.members


def is_abelian(g: GroupTable, s: SubgroupHandle | None = None) -> bool:
    m = _members(g, s)
    sub = g.mul[np.ix_(m, m)]
    return bool(np.array_equal(sub, sub.T))


def is_cyclic(g: GroupTable, s: SubgroupHandle | None = None) -> int | None:
    """Least-index generator of ``g`` (or ``s``) if cyclic, else ``None``."""
    m = _members(g, s)
    orders = g.orders()[m]
    hits = np.flatnonzero(orders == len(m))
    return int(m[hits[0]]) if len(hits) else None


def is_dihedral(g: GroupTable, s: SubgroupHandle | None = None) -> tuple[int, int] | None:
    """``(r, x)`` with ``<r>`` cyclic of index 2 and ``x`` an involution inverting ``r``."""
    m = _members(g, s)
    n = len(m)
    if n % 2 or n < 6:
        return None
    half = n // 2
    orders = g.orders()
    mul, inv = g.mul, g.inv
    for r in m[orders[m] == half]:
        rot = subgroup_generated(g, [r]).mask
        for x in m[(orders[m] == 2) & ~rot[m]]:
            if mul[mul[x, r], inv[x]] == inv[r]:
                return int(r), int(x)
    return None


def is_perfect(g: GroupTable, s: SubgroupHandle | None = None) -> bool:
    m = _members(g, s)
    return derived_subgroup(g, s).order == len(m)


def involutions(g: GroupTable, s: SubgroupHandle | None = None) -> np.ndarray:
    m = _members(g, s)
    return m[g.orders()[m] == 2]


def recognize_perfect_core(g: GroupTable, s: SubgroupHandle | None = None) -> dict:
    """Fingerprint verdict ``A5``, ``SL25`` or ``other`` with the evidence."""
    m = _members(g, s)
    n = len(m)
    perfect = is_perfect(g, s)
    inv2 = involutions(g, s)
    zc = center(g, s)
    central_unique = len(inv2) == 1 and bool(zc.mask[inv2[0]])
    if n == 60 and perfect:
        verdict = "A5"
    elif n == 120 and perfect and central_unique:
        verdict = "SL25"
    else:
        verdict = "other"
    return {
        "verdict": verdict,
        "order": n,
        "perfect": perfect,
        "involutions": len(inv2),
        "unique_central_involution": central_unique,
    }


def perfect_core(g: GroupTable) -> SubgroupHandle:
    """Last term of the derived series."""
    return derived_series(g)[-1]


# -- certificate machinery ----------------------------------------------------


def _is_normal_in(g: GroupTable, s: SubgroupHandle, ambient: SubgroupHandle) -> bool:
    a = ambient.members
    conj = g.mul[g.mul[np.ix_(a, s.members)], g.inv[a][:, None]]
    return bool(s.mask[conj].all())


def _product_map(g: GroupTable, a: SubgroupHandle, b: SubgroupHandle) -> np.ndarray:
    return g.mul[np.ix_(a.members, b.members)].ravel()


def _commute(g, a, b) -> bool:
    return bool(np.array_equal(g.mul[np.ix_(a.members, b.members)], g.mul[np.ix_(b.members, a.members)].T))


def _acts_trivially(g, n, h) -> bool:
    mul, inv = g.mul, g.inv
    hm = h.members
    conj = mul[mul[np.ix_(hm, n.members)], inv[hm][:, None]]
    return bool((conj == n.members[None, :]).all())


def _action_inner(g, n, h) -> bool:
    """Every conjugation by an element of h agrees on n with one by an element of n."""
    mul, inv = g.mul, g.inv
    nm = n.members
    inner = {tuple(mul[mul[x, nm], inv[x]].tolist()) for x in nm}
    return all(tuple(mul[mul[y, nm], inv[y]].tolist()) in inner for y in h.members)


_CHECKS: dict[str, Callable] = {
    "order": lambda g, w, x, k: w[x].order == int(k),
    "normal": lambda g, w, x, amb="G": _is_normal_in(g, w[x], w[amb]),
    "subgroup_of": lambda g, w, x, y: bool(w[y].mask[w[x].members].all()),
    "trivial_intersection": lambda g, w, x, y: intersect(w[x], w[y]).order == 1,
    "product_order": lambda g, w, x, y, amb="G": w[x].order * w[y].order == w[amb].order,
    "product_bijective": lambda g, w, x, y, amb="G": (
        len(np.unique(_product_map(g, w[x], w[y]))) == w[amb].order
        and bool(w[amb].mask[_product_map(g, w[x], w[y])].all())
    ),
    "commute": lambda g, w, x, y: _commute(g, w[x], w[y]),
    "cyclic": lambda g, w, x: is_cyclic(g, w[x]) is not None,
    "central": lambda g, w, x: bool(center(g).mask[w[x].members].all()),
    "perfect": lambda g, w, x: is_perfect(g, w[x]),
    "fingerprint_A5": lambda g, w, x: recognize_perfect_core(g, w[x])["verdict"] == "A5",
    "fingerprint_SL25": lambda g, w, x: recognize_perfect_core(g, w[x])["verdict"] == "SL25",
    "is_derived_core": lambda g, w, x: perfect_core(g) == w[x],
    "action_nontrivial": lambda g, w, n, h: not _acts_trivially(g, w[n], w[h]),
    "action_trivial": lambda g, w, n, h: _acts_trivially(g, w[n], w[h]),
    "action_inner": lambda g, w, n, h: _action_inner(g, w[n], w[h]),
    "element_order": lambda g, w, e, k: int(g.orders()[w[e]]) == int(k),
    "not_in": lambda g, w, e, x: not bool(w[x].mask[w[e]]),
    "in": lambda g, w, e, x: bool(w[x].mask[w[e]]),
    "generated_by": lambda g, w, x, e: subgroup_generated(g, [w[e]]) == w[x],
}


@dataclass
class Check:
    kind: str
    args: tuple
    status: str = "pass"
    required: bool = True

    @property
    def name(self) -> str:
        return f"{self.kind}({', '.join(str(a) for a in self.args)})"

    def to_json(self) -> dict:
        out = {"name": self.name, "status": self.status}
        if not self.required:
            out["required"] = False
        return out


def _witness_json(g: GroupTable, w) -> dict:
    if isinstance(w, SubgroupHandle):
        gens = minimal_generators(g, w)
        return {"kind": "subgroup", "order": w.order, "generators": gens}
    return {"kind": "element", "index": int(w)}


def minimal_generators(g: GroupTable, s: SubgroupHandle) -> list[int]:
    """Greedy generating set of ``s`` scanning members in index order."""
    gens: list[int] = []
    span = g.trivial()
    for x in s.members:
        if span.order == s.order:
            break
        if not span.mask[x]:
            gens.append(int(x))
            span = subgroup_generated(g, gens)
    return gens


def _resolve(g: GroupTable, spec: dict):
    if spec["kind"] == "subgroup":
        return subgroup_generated(g, spec["generators"])
    return int(spec["index"])


@dataclass
class StructureCertificate:
    claim: str
    group_order: int
    witnesses: dict
    checks: list[Check]
    choices: dict = dc_field(default_factory=dict)
    notes: dict = dc_field(default_factory=dict)

    @property
    def ok(self) -> bool:
        return all(c.status == "pass" for c in self.checks if c.required)

    @property
    def failures(self) -> list[str]:
        return [c.name for c in self.checks if c.required and c.status != "pass"]

    def replay(self, g: GroupTable) -> list[Check]:
        """Recompute every check from the serialised witnesses only."""
        w = {k: _resolve(g, v) for k, v in self.witnesses.items()}
        w["G"] = g.full()
        out = []
        for c in self.checks:
            ok = _CHECKS[c.kind](g, w, *c.args)
            out.append(Check(c.kind, c.args, "pass" if ok else "fail", c.required))
        return out

    def to_json(self, g: GroupTable | None = None) -> dict:
        out = {
            "claim": self.claim,
            "group_order": self.group_order,
            "witnesses": self.witnesses,
            "checks": [c.to_json() for c in self.checks],
            "choices": dict(self.choices),
        }
        if self.notes:
            out["notes"] = self.notes
        if g is not None and all(isinstance(x, Matrix) for x in g.elements):
            mats = {}
            for name, spec in self.witnesses.items():
                idx = spec.get("generators", [spec.get("index")])
                mats[name] = [g.elements[i].to_json() for i in idx if i is not None]
            out["witness_matrices"] = mats
        return out


class _Builder:
    def __init__(self, g: GroupTable):
        self.g = g
        self.w: dict = {"G": g.full()}
        self.checks: list[Check] = []

    def add(self, name, value):
        self.w[name] = value

    def check(self, kind, *args, required=True) -> bool:
        ok = _CHECKS[kind](self.g, self.w, *args)
        self.checks.append(Check(kind, args, "pass" if ok else "fail", required))
        return ok

    def fail(self, piece: str):
        self.checks.append(Check("found", (piece,), "fail"))

    def certificate(self, claim: str, choices=None, notes=None) -> StructureCertificate:
        wit = {k: _witness_json(self.g, v) for k, v in self.w.items() if k != "G"}
        return StructureCertificate(claim, self.g.order, wit, self.checks, dict(choices or {}), dict(notes or {}))


def _choices_of(g: GroupTable) -> dict:
    return dict(getattr(g.provenance, "choices", {}) or {})


# -- product certificates -----------------------------------------------------


def _direct_checks(b: _Builder, x: str, y: str, amb: str = "G"):
    b.check("normal", x, amb)
    b.check("normal", y, amb)
    b.check("trivial_intersection", x, y)
    b.check("product_order", x, y, amb)
    b.check("product_bijective", x, y, amb)
    b.check("commute", x, y)
    b.check("product_bijective", x, y, amb)


def direct_product_certificate(
    g: GroupTable, a: SubgroupHandle, b: SubgroupHandle, claim: str | None = None
) -> StructureCertificate:
    """Certify ``g = a x b``: both normal, trivial intersection, orders multiply."""
    bl = _Builder(g)
    bl.add("A", a)
    bl.add("B", b)
    _direct_checks(bl, "A", "B")
    cert = bl.certificate(claim or f"[{a.order}] x [{b.order}]", _choices_of(g))
    return cert


def semidirect_product_certificate(
    g: GroupTable,
    n: SubgroupHandle,
    h: SubgroupHandle,
    claim: str | None = None,
    require_action: str | None = None,
) -> StructureCertificate:
    """Certify ``g = n x| h``; ``notes['action']`` says whether h acts trivially.

    ``require_action`` ("trivial" / "nontrivial") turns the action into a
    required check.
    """
    bl = _Builder(g)
    bl.add("N", n)
    bl.add("H", h)
    bl.check("normal", "N", "G")
    bl.check("trivial_intersection", "N", "H")
    bl.check("product_order", "N", "H", "G")
    bl.check("product_bijective", "N", "H", "G")
    trivial = _acts_trivially(g, n, h)
    if require_action == "trivial":
        bl.check("action_trivial", "N", "H")
    elif require_action == "nontrivial":
        bl.check("action_nontrivial", "N", "H")
    else:
        bl.check("action_trivial" if trivial else "action_nontrivial", "N", "H", required=False)
    notes = {"action": "trivial" if trivial else "nontrivial"}
    if trivial and bl.check("normal", "H", "G", required=False):
        notes["upgrades_to"] = "direct product"
    return bl.certificate(claim or f"[{n.order}] x| [{h.order}]", _choices_of(g), notes)


# -- the automorphism groups --------------------------------------------------

#: d -> (order of the central cyclic factor, whether an order-2 extension is present)
AUT_SHAPES = {30: (15, False), 20: (5, True), 12: (3, True)}


def aut_claim(d: int) -> str:
    k, ext = AUT_SHAPES[d]
    return f"Z{k} x (SL(2,5) x| Z2)" if ext else f"Z{k} x SL(2,5)"


def _cyclic_subgroups_of_order(g: GroupTable, s: SubgroupHandle, k: int):
    seen = set()
    orders = g.orders()
    for x in s.members:
        if orders[x] == k:
            c = subgroup_generated(g, [x])
            key = tuple(c.members.tolist())
            if key not in seen:
                seen.add(key)
                yield int(x), c


def recognize_aut_structure(
    g: GroupTable, d: int, stated_split: Matrix | None = None
) -> StructureCertificate:
    """Certificate for the automorphism group of C_d, d in 30, 20, 12.

    The SL(2,5) core is the stable term of the derived series; the cyclic
    complement is searched among cyclic subgroups of the center; for d = 20
    and 12 an involution outside the core extends it to an order-240 normal
    subgroup.  ``stated_split`` is an extra splitting element that must also
    work when given.
    """
    if d not in AUT_SHAPES:
        raise ValueError(f"d must be one of {sorted(AUT_SHAPES)}")
    k, ext = AUT_SHAPES[d]
    claim = aut_claim(d)
    bl = _Builder(g)
    notes: dict = {}
    bl.check("order", "G", 60 * d)

    core = perfect_core(g)
    bl.add("core", core)
    bl.check("is_derived_core", "core")
    if not bl.check("fingerprint_SL25", "core"):
        return bl.certificate(claim, _choices_of(g), notes)
    bl.check("normal", "core", "G")

    z = center(g)
    notes["center_order"] = z.order
    notes["center_cyclic"] = is_cyclic(g, z) is not None

    if not ext:
        found = None
        for x, c in _cyclic_subgroups_of_order(g, z, k):
            if direct_product_certificate(g, core, c).ok:
                found = (x, c)
                break
        if found is None:
            bl.fail(f"central cyclic complement of order {k}")
            return bl.certificate(claim, _choices_of(g), notes)
        bl.add("B", found[1])
        bl.add("b", found[0])
        bl.check("generated_by", "B", "b")
        bl.check("element_order", "b", k)
        bl.check("central", "B")
        _direct_checks(bl, "core", "B")
        return bl.certificate(claim, _choices_of(g), notes)

    core_gens = minimal_generators(g, core)
    candidates = []
    for s in involutions(g):
        if core.mask[s]:
            continue
        m = subgroup_generated(g, core_gens + [int(s)])
        if m.order != 2 * core.order:
            continue
        candidates.append((int(s), m))
    found = None
    for s, m in candidates:
        for x, c in _cyclic_subgroups_of_order(g, z, k):
            if direct_product_certificate(g, m, c).ok:
                found = (s, m, x, c)
                break
        if found:
            break
    if found is None:
        bl.fail("order-2 extension of the core with a central cyclic complement")
        return bl.certificate(claim, _choices_of(g), notes)
    s, m, x, c = found
    bl.add("M", m)
    bl.add("s", s)
    bl.add("S", subgroup_generated(g, [s]))
    bl.add("B", c)
    bl.add("b", x)
    bl.check("element_order", "s", 2)
    bl.check("not_in", "s", "core")
    bl.check("generated_by", "S", "s")
    bl.check("subgroup_of", "core", "M")
    bl.check("subgroup_of", "S", "M")
    bl.check("normal", "core", "M")
    bl.check("trivial_intersection", "core", "S")
    bl.check("product_order", "core", "S", "M")
    bl.check("product_bijective", "core", "S", "M")
    bl.check("action_nontrivial", "core", "S")
    bl.check("action_inner", "core", "S", required=False)
    bl.check("generated_by", "B", "b")
    bl.check("element_order", "b", k)
    bl.check("central", "B")
    _direct_checks(bl, "M", "B")
    notes["extension_candidates"] = len(candidates)

    if stated_split is not None:
        try:
            t = g.index_of(stated_split.embed(g.elements[0].field))
        except KeyError:
            bl.fail("stated splitting element in G")
        else:
            bl.add("s_stated", t)
            bl.add("M_stated", subgroup_generated(g, core_gens + [t]))
            bl.check("element_order", "s_stated", 2)
            bl.check("not_in", "s_stated", "core")
            bl.check("order", "M_stated", 2 * core.order)
            bl.check("normal", "M_stated", "G")
            bl.check("trivial_intersection", "M_stated", "B")
            bl.check("product_order", "M_stated", "B", "G")
    return bl.certificate(claim, _choices_of(g), notes)
