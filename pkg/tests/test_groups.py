import itertools
import json

import numpy as np
import pytest

from icosacurves.generators import GeneratorSet, catalog_matrix, generator_catalog
from icosacurves.groups import (
    NotNormal,
    OrderBoundExceeded,
    SubgroupHandle,
    center,
    closure,
    derived_subgroup,
    element_order,
    image_and_kernel,
    intersect,
    is_normal,
    linear_projective_consistency,
    quotient,
    scalar_subgroup,
    subgroup_generated,
    verify_homomorphism,
)
from icosacurves.matrices import Matrix, NotPBDShape

from conftest import approx_matrix


def keys(g):
    return {a.key() for a in g.elements}


def lagrange(s: SubgroupHandle):
    assert s.parent.order % s.order == 0


def test_closure_examples(aut_groups, ico):
    assert closure(generator_catalog("lambda", 30), "projective").order == 30
    assert ico.order == 120
    assert aut_groups[30].order == 1800
    for g in (ico, aut_groups[12]):
        g.check_axioms()


def test_closure_is_deterministic_bfs():
    a = closure(generator_catalog("Gtilde(12)"))
    b = closure(generator_catalog("Gtilde(12)"))
    assert [x.key() for x in a.elements] == [x.key() for x in b.elements]
    assert a.elements[0].is_identity()
    gens = generator_catalog("Gtilde(12)").matrices
    assert all(a.contains(m) for m in gens)


def test_closure_errors():
    two = Matrix.diag([2, 1, 1])
    with pytest.raises(OrderBoundExceeded):
        closure(GeneratorSet("inf", (two,), two.field, "projective"), max_order=50)
    sing = Matrix.diag([0, 1, 1])
    with pytest.raises(ValueError):
        closure(GeneratorSet("sing", (sing,), sing.field, "linear"))


def test_element_orders_against_matrix_powers(ico):
    ident = np.eye(2)
    support = set()
    for i, a in enumerate(ico.elements):
        m = np.array(approx_matrix(a))
        p, k = m, 1
        while not np.allclose(p, ident):
            p, k = p @ m, k + 1
        assert element_order(ico, i) == k == ico.orders()[i]
        support.add(k)
    assert support == {1, 2, 3, 4, 5, 6, 10}
    assert element_order(ico, ico.identity) == 1
    minus = ico.index_of(Matrix.scalar(-1, 2, ico.elements[0].field))
    assert element_order(ico, minus) == 2


def test_center_and_derived(ico):
    z = center(ico)
    brute = [i for i, a in enumerate(ico.elements) if all(a @ b == b @ a for b in ico.elements)]
    assert list(z.members) == brute and z.order == 2
    assert all(ico.elements[i].is_scalar() for i in z.members)
    assert derived_subgroup(ico).order == 120
    cyc = closure(generator_catalog("lambda", 12), "projective")
    assert derived_subgroup(cyc).order == 1


def test_subgroups_and_normality(aut_groups):
    g = aut_groups[30]
    assert subgroup_generated(g, [g.identity]).order == 1
    lam = subgroup_generated(g, [g.index_of(catalog_matrix("lambda30"))])
    assert lam.order == 30 and is_normal(g, lam)
    z = center(g)
    both = intersect(lam, z)
    brute = sorted(set(lam.members.tolist()) & set(z.members.tolist()))
    assert both.members.tolist() == brute
    for s in (lam, z, both, derived_subgroup(g)):
        lagrange(s)


def test_quotients(ico, aut_groups):
    assert quotient(ico, ico.full()).order == 1
    same = quotient(ico, ico.trivial())
    assert same.order == 120
    q = quotient(ico, scalar_subgroup(ico))
    assert q.order == 60
    verify_homomorphism(ico, q, q.projection)
    g = aut_groups[12]
    with pytest.raises(NotNormal):
        quotient(g, subgroup_generated(g, [g.index_of(catalog_matrix("sigma").embed(g.elements[0].field))]))


def test_image_and_kernel(aut_groups):
    for d, g in aut_groups.items():
        ik = image_and_kernel(g)
        assert ik.image.order == 60 and ik.kernel.order == d
        assert ik.image.order * ik.kernel.order == g.order
        lam = subgroup_generated(g, [g.index_of(catalog_matrix(f"lambda{d}").embed(g.elements[0].field))])
        assert ik.kernel == lam
    lam = closure(generator_catalog("lambda", 20), "projective")
    ik = image_and_kernel(lam)
    assert ik.image.order == 1 and ik.kernel.order == 20


def test_image_requires_pbd_shape():
    perm = Matrix([[0, 0, 1], [1, 0, 0], [0, 1, 0]])
    g = closure(GeneratorSet("perm", (perm,), perm.field, "projective"))
    with pytest.raises(NotPBDShape, match="element"):
        image_and_kernel(g)


CATALOG_SETS = ["Gtilde(30)", "Gtilde(20)", "Gtilde(12)", "icosahedral_2x2", "S21", "K", "H",
                "C(5)_galois", "C(6)_galois", "C(7)_galois", "C(8)_galois"]


@pytest.mark.parametrize("name", CATALOG_SETS)
def test_closure_ignores_generator_order_and_duplicates(name):
    gens = generator_catalog(name)
    base = keys(closure(gens))
    n = len(gens.matrices)
    for perm in itertools.permutations(range(n)):
        assert keys(closure(gens.reordered(perm))) == base
    assert keys(closure(gens.reordered(list(range(n)) + [0, n - 1]))) == base


@pytest.mark.parametrize("name", ["icosahedral_2x2", "K", "S21", "C(5)_galois", "Gtilde(12)", "Gtilde(20)"])
def test_linear_and_projective_closures_agree(name):
    r = linear_projective_consistency(generator_catalog(name))
    assert r["orders_consistent"] and r["bijective"]


def test_scalar_subgroups_of_linear_lifts():
    # the GL lift carries the scalars generated by the diagonal generators
    r = linear_projective_consistency(generator_catalog("Gtilde(30)"))
    assert (r["linear_order"], r["scalar_order"], r["projective_order"]) == (18000, 10, 1800)
    assert r["orders_consistent"] and r["bijective"]


def test_on_demand_products_without_table():
    g = closure(generator_catalog("Gtilde(30)"), table_limit=100)
    assert not g.has_table
    rng = np.random.default_rng(3)
    for i, j in rng.integers(0, g.order, size=(50, 2)):
        want = g.index_of(g.elements[i] @ g.elements[j])
        assert g.product(int(i), int(j)) == want


def test_table_agrees_with_matrix_products(aut_groups):
    g = aut_groups[20]
    rng = np.random.default_rng(7)
    for i, j in rng.integers(0, g.order, size=(200, 2)):
        assert g.mul[i, j] == g.index_of(g.elements[i] @ g.elements[j])


def test_json_export(ico):
    data = ico.to_json(include_table=True)
    assert data["mode"] == "linear" and len(data["elements"]) == 120
    assert len(data["mul"]) == 120
    json.dumps(data)
