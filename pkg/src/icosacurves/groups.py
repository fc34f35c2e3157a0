"""Finite groups as element lists with index-based multiplication tables.

:func:`closure` runs a breadth-first search from the identity, multiplying
by the generators on the right.  It records, for every generator ``s``, the
permutation ``g -> g s`` together with the BFS tree, which is enough to
materialise the full Cayley table column by column:
``mul[:, h] = perm[s][mul[:, parent(h)]]`` whenever ``h = parent(h) s``.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Iterable, Sequence

import numpy as np

from .generators import GeneratorSet
from .matrices import Matrix, NotPBDShape, ProjectiveMatrix, pbd_restrict, projective_canonical

__all__ = [
    "GroupTable",
    "NotNormal",
    "OrderBoundExceeded",
    "SubgroupHandle",
    "TableTooLarge",
    "center",
    "closure",
    "derived_series",
    "derived_subgroup",
    "commutators",
    "verify_homomorphism",
    "element_order",
    "image_and_kernel",
    "intersect",
    "is_normal",
    "linear_projective_consistency",
    "quotient",
    "scalar_subgroup",
    "subgroup_generated",
]

DEFAULT_MAX_ORDER = 10_000
TABLE_LIMIT = 2_000


class OrderBoundExceeded(RuntimeError):
    """Closure produced more elements than allowed; group infinite or mis-specified."""


class TableTooLarge(RuntimeError):
    pass


class NotNormal(ValueError):
    pass


class GroupTable:
    """Finite group on indices ``0..n-1`` with identity ``identity``.

    ``elements[i]`` is the object labelled ``i``: a canonical :class:`Matrix`
    for closures, a representative for quotients.  The table ``mul`` is built
    lazily for orders up to :data:`TABLE_LIMIT`; beyond that use
    :meth:`product`.
    """

    def __init__(
        self,
        elements: list,
        *,
        mode: str,
        provenance=None,
        mul: np.ndarray | None = None,
        identity: int = 0,
        generators: Sequence[int] = (),
        perms: np.ndarray | None = None,
        parent: np.ndarray | None = None,
        parent_gen: np.ndarray | None = None,
        index: dict | None = None,
        table_limit: int = TABLE_LIMIT,
    ):
        self.elements = elements
        self.mode = mode
        self.provenance = provenance
        self.identity = identity
        self.generators = tuple(generators)
        self._perms = perms
        self._parent = parent
        self._parent_gen = parent_gen
        self._index = index
        self._mul = mul
        self._inv = None
        self._orders = None
        self.table_limit = table_limit

    def __len__(self) -> int:
        return len(self.elements)

    @property
    def order(self) -> int:
        return len(self.elements)

    def __repr__(self) -> str:
        name = getattr(self.provenance, "name", self.provenance)
        return f"GroupTable(order={self.order}, mode={self.mode}, provenance={name!r})"

    # tables ---------------------------------------------------------------

    @property
    def has_table(self) -> bool:
        return self._mul is not None or self.order <= self.table_limit

    @property
    def mul(self) -> np.ndarray:
        if self._mul is None:
            if self.order > self.table_limit:
                raise TableTooLarge(
                    f"order {self.order} exceeds table limit {self.table_limit}; use product()"
                )
            self._mul = self._build_table()
        return self._mul

    def _build_table(self) -> np.ndarray:
        n = self.order
        dtype = np.int16 if n < 2**15 else np.int32
        mul = np.empty((n, n), dtype=dtype)
        mul[:, 0] = np.arange(n)
        perms, parent, pgen = self._perms, self._parent, self._parent_gen
        for h in range(1, n):
            mul[:, h] = perms[pgen[h]][mul[:, parent[h]]]
        mul.setflags(write=False)
        return mul

    def _path(self, j: int) -> list[int]:
        path = []
        while j != self.identity:
            path.append(int(self._parent_gen[j]))
            j = int(self._parent[j])
        path.reverse()
        return path

    def product(self, i: int, j: int) -> int:
        if self._mul is not None or self.order <= self.table_limit:
            return int(self.mul[i, j])
        if self._perms is None:
            raise TableTooLarge("no table and no generator permutations")
        x = i
        for s in self._path(j):
            x = int(self._perms[s][x])
        return x

    @property
    def inv(self) -> np.ndarray:
        if self._inv is None:
            if self.has_table:
                self._inv = np.argmax(self.mul == self.identity, axis=1).astype(np.int64)
            else:
                inv = np.empty(self.order, dtype=np.int64)
                for i, a in enumerate(self.elements):
                    inv[i] = self.index_of(a.inv())
                self._inv = inv
            self._inv.setflags(write=False)
        return self._inv

    def index_of(self, a: Matrix) -> int:
        """Index of a matrix (canonicalised first in projective mode)."""
        if self._index is None:
            raise KeyError("group has no element index")
        if self.mode == "projective":
            a = projective_canonical(a)
        return self._index[a.key()]

    def contains(self, a: Matrix) -> bool:
        try:
            self.index_of(a)
        except KeyError:
            return False
        return True

    def orders(self) -> np.ndarray:
        """Order of every element."""
        if self._orders is None:
            n = self.order
            idx = np.arange(n)
            cur = idx.copy()
            out = np.zeros(n, dtype=np.int64)
            k = 1
            while True:
                done = (cur == self.identity) & (out == 0)
                out[done] = k
                if out.all():
                    break
                cur = self.mul[cur, idx]
                k += 1
                if k > n:
                    raise RuntimeError("element order exceeds group order")
            self._orders = out
        return self._orders

    def full(self) -> SubgroupHandle:
        return SubgroupHandle(self, np.arange(self.order), verify=False)

    def trivial(self) -> SubgroupHandle:
        return SubgroupHandle(self, [self.identity], verify=False)

    def check_axioms(self, samples: int = 2000, seed: int = 0) -> bool:
        """Verify identity/inverse laws fully and associativity on random triples."""
        mul, e, n = self.mul, self.identity, self.order
        ar = np.arange(n)
        if not (np.array_equal(mul[e], ar) and np.array_equal(mul[:, e], ar)):
            return False
        if not np.all(mul[ar, self.inv] == e):
            return False
        if not all(len(set(row.tolist())) == n for row in mul[: min(n, 50)]):
            return False
        rng = np.random.default_rng(seed)
        a, b, c = rng.integers(0, n, size=(3, samples))
        return bool(np.all(mul[mul[a, b], c] == mul[a, mul[b, c]]))

    # export ---------------------------------------------------------------

    def to_json(self, include_table: bool = True) -> dict:
        out = {
            "order": self.order,
            "mode": self.mode,
            "provenance": {
                "name": getattr(self.provenance, "name", str(self.provenance)),
                "generators": list(getattr(self.provenance, "labels", ()) or ()),
            },
            "identity": self.identity,
        }
        if all(isinstance(x, Matrix) for x in self.elements):
            out["elements"] = [x.to_json() for x in self.elements]
        if include_table:
            out["mul"] = self.mul.tolist()
        return out


def closure(
    gens: GeneratorSet,
    mode: str | None = None,
    max_order: int = DEFAULT_MAX_ORDER,
    table_limit: int = TABLE_LIMIT,
) -> GroupTable:
    """Group generated by ``gens`` in GL (``linear``) or PGL (``projective``)."""
    mode = mode or gens.mode
    if mode not in ("linear", "projective"):
        raise ValueError(mode)
    canon: Callable[[Matrix], Matrix] = projective_canonical if mode == "projective" else (lambda a: a)
    if not gens.matrices:
        raise ValueError("empty generator set")
    dim, fld = gens.matrices[0].dim, gens.field
    for g in gens.matrices:
        if g.det().is_zero():
            raise ValueError("singular generator")
    gs = [canon(g) for g in gens.matrices]
    ident = Matrix.identity(dim, fld)
    elements = [ident]
    index = {ident.key(): 0}
    parent, parent_gen = [-1], [-1]
    perms: list[list[int]] = [[] for _ in gs]
    i = 0
    while i < len(elements):
        x = elements[i]
        for k, s in enumerate(gs):
            y = canon(x @ s)
            key = y.key()
            j = index.get(key)
            if j is None:
                j = len(elements)
                if j >= max_order:
                    raise OrderBoundExceeded(
                        f"closure of {gens.name} exceeded {max_order} elements"
                    )
                index[key] = j
                elements.append(y)
                parent.append(i)
                parent_gen.append(k)
            perms[k].append(j)
        i += 1
    gen_idx = [index[g.key()] for g in gs]
    return GroupTable(
        elements,
        mode=mode,
        provenance=gens.with_mode(mode),
        generators=gen_idx,
        perms=np.array(perms, dtype=np.int64),
        parent=np.array(parent, dtype=np.int64),
        parent_gen=np.array(parent_gen, dtype=np.int64),
        index=index,
        table_limit=table_limit,
    )


def element_order(g: GroupTable, i: int) -> int:
    if g.has_table:
        return int(g.orders()[i])
    x, k = i, 1
    while x != g.identity:
        x = g.product(x, i)
        k += 1
    return k


# -- subgroups ----------------------------------------------------------------


class SubgroupHandle:
    """Subset of a :class:`GroupTable` verified to be a subgroup."""

    def __init__(self, parent: GroupTable, members: Iterable[int], verify: bool = True):
        self.parent = parent
        self.members = np.array(sorted(set(int(x) for x in members)), dtype=np.int64)
        if verify:
            self._verify()

    def _verify(self):
        g, m = self.parent, self.members
        if g.identity not in set(m.tolist()):
            raise ValueError("subgroup must contain the identity")
        mask = self.mask
        if g.has_table:
            prods = g.mul[np.ix_(m, m)]
            if not mask[prods].all() or not mask[g.inv[m]].all():
                raise ValueError("subset is not closed under multiplication and inverse")
        else:
            for a in m:
                for b in m:
                    if not mask[g.product(int(a), int(b))]:
                        raise ValueError("subset is not closed under multiplication")

    @property
    def order(self) -> int:
        return len(self.members)

    def __len__(self) -> int:
        return len(self.members)

    @property
    def mask(self) -> np.ndarray:
        mk = np.zeros(self.parent.order, dtype=bool)
        mk[self.members] = True
        return mk

    def __contains__(self, i: int) -> bool:
        return bool(self.mask[i])

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, SubgroupHandle)
            and other.parent is self.parent
            and np.array_equal(other.members, self.members)
        )

    def __repr__(self) -> str:
        return f"SubgroupHandle(order={self.order}, of={self.parent.order})"

    def as_table(self) -> GroupTable:
        """The subgroup as a group in its own right (elements relabelled 0..k-1)."""
        g, m = self.parent, self.members
        pos = np.full(g.order, -1, dtype=np.int64)
        pos[m] = np.arange(len(m))
        mul = pos[g.mul[np.ix_(m, m)]]
        elements = [g.elements[i] for i in m]
        index = None
        if g._index is not None:
            index = {a.key(): k for k, a in enumerate(elements)}
        t = GroupTable(
            elements,
            mode=g.mode,
            provenance=g.provenance,
            mul=mul,
            identity=int(pos[g.identity]),
            index=index,
        )
        t.parent_indices = m
        return t


def subgroup_generated(g: GroupTable, indices: Iterable[int]) -> SubgroupHandle:
    gens = np.array(sorted(set(int(i) for i in indices)), dtype=np.int64)
    mask = np.zeros(g.order, dtype=bool)
    mask[g.identity] = True
    frontier = np.array([g.identity], dtype=np.int64)
    if len(gens):
        mul = g.mul
        while len(frontier):
            prods = np.unique(mul[np.ix_(frontier, gens)])
            new = prods[~mask[prods]]
            mask[new] = True
            frontier = new
    return SubgroupHandle(g, np.flatnonzero(mask), verify=False)


def is_normal(g: GroupTable, s: SubgroupHandle) -> bool:
    mul, inv = g.mul, g.inv
    gs = mul[:, s.members]
    conj = mul[gs, inv[:, None]]
    return bool(s.mask[conj].all())


def intersect(a: SubgroupHandle, b: SubgroupHandle) -> SubgroupHandle:
    if a.parent is not b.parent:
        raise ValueError("subgroups of different groups")
    return SubgroupHandle(a.parent, np.intersect1d(a.members, b.members), verify=False)


def center(g: GroupTable, s: SubgroupHandle | None = None) -> SubgroupHandle:
    """Center of ``g`` (or of the subgroup ``s``)."""
    mul = g.mul
    if s is None:
        return SubgroupHandle(g, np.flatnonzero(np.all(mul == mul.T, axis=1)), verify=False)
    m = s.members
    sub = mul[np.ix_(m, m)]
    return SubgroupHandle(g, m[np.all(sub == sub.T, axis=1)], verify=False)


def commutators(g: GroupTable, s: SubgroupHandle | None = None) -> np.ndarray:
    mul, inv = g.mul, g.inv
    m = np.arange(g.order) if s is None else s.members
    ab = mul[np.ix_(m, m)]
    ainv_binv = mul[np.ix_(inv[m], inv[m])]
    return np.unique(mul[ainv_binv, ab])


def derived_subgroup(g: GroupTable, s: SubgroupHandle | None = None) -> SubgroupHandle:
    """Subgroup generated by all commutators of ``g`` (or of ``s``)."""
    return subgroup_generated(g, commutators(g, s))


def derived_series(g: GroupTable) -> list[SubgroupHandle]:
    series = [g.full()]
    while True:
        nxt = derived_subgroup(g, series[-1])
        if nxt.order == series[-1].order:
            return series
        series.append(nxt)


# -- quotients and homomorphisms ---------------------------------------------


def quotient(g: GroupTable, n: SubgroupHandle, check: bool = True) -> GroupTable:
    """Coset group g/n; ``result.projection[i]`` is the coset of element i."""
    if not is_normal(g, n):
        raise NotNormal("quotient requires a normal subgroup")
    mul = g.mul
    label = mul[:, n.members].min(axis=1)
    reps = np.unique(label)
    pos = np.full(g.order, -1, dtype=np.int64)
    pos[reps] = np.arange(len(reps))
    proj = pos[label]
    qmul = proj[mul[np.ix_(reps, reps)]]
    q = GroupTable(
        [g.elements[r] for r in reps],
        mode="quotient",
        provenance=g.provenance,
        mul=qmul,
        identity=int(proj[g.identity]),
    )
    q.projection = proj
    q.representatives = reps
    if check:
        verify_homomorphism(g, q, proj)
    return q


def verify_homomorphism(g: GroupTable, h: GroupTable, f: np.ndarray, samples: int = 200_000) -> None:
    """Raise unless ``f`` preserves products (all pairs up to order 2000)."""
    n = g.order
    if n <= TABLE_LIMIT:
        ok = np.array_equal(f[g.mul], h.mul[f[:, None], f[None, :]])
    else:
        rng = np.random.default_rng(0)
        a, b = rng.integers(0, n, size=(2, samples))
        ok = np.array_equal(f[g.mul[a, b]], h.mul[f[a], f[b]])
    if not ok:
        raise ArithmeticError("map is not a homomorphism")


@dataclass
class ImageKernel:
    image: GroupTable
    kernel: SubgroupHandle
    map: np.ndarray


def image_and_kernel(g: GroupTable, hom: Callable = pbd_restrict) -> ImageKernel:
    """Image (as a projective 2x2 group) and kernel of ``hom`` on ``g``."""
    images = []
    for i, a in enumerate(g.elements):
        try:
            images.append(hom(a))
        except NotPBDShape as exc:
            raise NotPBDShape(f"element {i} of {g!r} is not PBD(2,1)-shaped: {a!r}") from exc
    reps = [p.rep if isinstance(p, ProjectiveMatrix) else p for p in images]
    gen_reps = tuple(reps[i] for i in g.generators) or (reps[g.identity],)
    gs = GeneratorSet(f"image({getattr(g.provenance, 'name', '?')})", gen_reps,
                      gen_reps[0].field, "projective")
    img = closure(gs, "projective")
    f = np.array([img.index_of(r) for r in reps], dtype=np.int64)
    if len(set(f.tolist())) != img.order:
        raise ArithmeticError("image of the elements is not the group generated by the image")
    verify_homomorphism(g, img, f)
    kernel = SubgroupHandle(g, np.flatnonzero(f == img.identity), verify=False)
    if kernel.order * img.order != g.order:
        raise ArithmeticError("|G| != |image| * |kernel|")
    return ImageKernel(img, kernel, f)


# -- linear vs projective -----------------------------------------------------


def scalar_subgroup(g: GroupTable) -> SubgroupHandle:
    """Elements that are scalar matrices (a linear group's intersection with scalars)."""
    return SubgroupHandle(g, [i for i, a in enumerate(g.elements) if a.is_scalar()],
                          verify=g.has_table)


def linear_projective_consistency(gens: GeneratorSet, max_order: int = 50_000) -> dict:
    """Compare the projective closure with (linear closure)/(scalars).

    The canonical forms of the linear elements must be exactly the projective
    elements, with every fibre of size |scalars|.
    """
    lin = closure(gens, "linear", max_order=max_order)
    proj = closure(gens, "projective", max_order=max_order)
    z = scalar_subgroup(lin)
    fibres: dict = {}
    for a in lin.elements:
        k = projective_canonical(a).key()
        fibres[k] = fibres.get(k, 0) + 1
    bijective = set(fibres) == set(proj._index) and set(fibres.values()) == {z.order}
    return {
        "linear_order": lin.order,
        "scalar_order": z.order,
        "projective_order": proj.order,
        "orders_consistent": lin.order == z.order * proj.order,
        "bijective": bijective,
    }
