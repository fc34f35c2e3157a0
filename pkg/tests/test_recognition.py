import pytest

from icosacurves.cyclo import field
from icosacurves.generators import GeneratorSet, catalog_matrix, generator_catalog
from icosacurves.groups import closure, quotient, scalar_subgroup, subgroup_generated
from icosacurves.matrices import Matrix
from icosacurves.recognition import (
    StructureCertificate,
    direct_product_certificate,
    is_abelian,
    is_cyclic,
    is_dihedral,
    is_perfect,
    perfect_core,
    recognize_aut_structure,
    recognize_perfect_core,
    semidirect_product_certificate,
)


def group(mats, mode="linear"):
    n = max(m.conductor for m in mats)
    f = field(n)
    mats = tuple(m.embed(f) for m in mats)
    return closure(GeneratorSet("control", mats, f, mode))


def cyclic_control(n):
    f = field(n)
    return group([Matrix.diag([f.zeta(), 1], f)])


def dihedral_control(m):
    f = field(m)
    return group([Matrix.diag([f.zeta(), f.zeta(-1)], f), Matrix([[0, 1], [1, 0]], f)])


def abelian_control(m):
    f = field(m)
    return group([Matrix.diag([f.zeta(), 1], f), Matrix.diag([1, -1], f)])


def test_cyclic_examples():
    lam = closure(generator_catalog("lambda", 30), "projective")
    w = is_cyclic(lam)
    assert w is not None and lam.orders()[w] == 30
    c5 = closure(generator_catalog("C(5)_galois"))
    assert c5.order == 20 and is_cyclic(c5) is not None


def test_binary_icosahedral_is_not_abelian(ico):
    assert is_cyclic(ico) is None and not is_abelian(ico)
    assert is_perfect(ico)


def test_fingerprints(ico):
    assert recognize_perfect_core(ico)["verdict"] == "SL25"
    q = quotient(ico, scalar_subgroup(ico))
    assert recognize_perfect_core(q)["verdict"] == "A5"
    assert recognize_perfect_core(cyclic_control(12))["verdict"] == "other"


def test_fingerprint_is_independent_of_realisation(ico):
    as_quotient = quotient(ico, scalar_subgroup(ico))
    as_classes = closure(generator_catalog("icosahedral_2x2"), "projective")
    assert as_classes.order == as_quotient.order == 60
    assert recognize_perfect_core(as_quotient)["verdict"] == recognize_perfect_core(as_classes)["verdict"] == "A5"


@pytest.mark.parametrize("order", [60, 120])
def test_fingerprint_controls(order):
    controls = [cyclic_control, dihedral_control, abelian_control]
    args = {60: [60, 30, 30], 120: [120, 60, 60]}[order]
    for make, n in zip(controls, args):
        g = make(n)
        assert g.order == order
        assert recognize_perfect_core(g)["verdict"] == "other"


def test_dihedral_detection():
    d = dihedral_control(30)
    r, s = is_dihedral(d)
    assert d.orders()[r] == 30 and d.orders()[s] == 2
    assert is_dihedral(cyclic_control(60)) is None
    assert is_dihedral(abelian_control(30)) is None


def test_direct_product_examples():
    lam = closure(generator_catalog("lambda", 30), "projective")
    g = lam.generators[0]
    a = subgroup_generated(lam, [_power(lam, g, 6)])
    b = subgroup_generated(lam, [_power(lam, g, 5)])
    assert (a.order, b.order) == (5, 6)
    assert direct_product_certificate(lam, a, b).ok
    bad = direct_product_certificate(lam, lam.full(), lam.full())
    assert not bad.ok and "trivial_intersection(A, B)" in bad.failures


def _power(g, x, k):
    y = g.identity
    for _ in range(k):
        y = g.product(y, x)
    return y


def test_semidirect_examples(aut_groups):
    lam = closure(generator_catalog("lambda", 12), "projective")
    assert semidirect_product_certificate(lam, lam.full(), lam.trivial()).ok
    # an abelian group cannot carry a nontrivial action
    n = subgroup_generated(lam, [_power(lam, lam.generators[0], 3)])
    h = subgroup_generated(lam, [_power(lam, lam.generators[0], 4)])
    assert not semidirect_product_certificate(lam, n, h, require_action="nontrivial").ok

    g = aut_groups[20]
    core = perfect_core(g)
    s = g.index_of(catalog_matrix("s").embed(g.elements[0].field))
    m = subgroup_generated(g, [int(x) for x in core.members[:40]] + [s])
    assert m.order == 240
    mt = m.as_table()
    core_t = subgroup_generated(mt, [mt.index_of(g.elements[i]) for i in core.members])
    split = subgroup_generated(mt, [mt.index_of(g.elements[s])])
    cert = semidirect_product_certificate(mt, core_t, split, require_action="nontrivial")
    assert cert.ok and cert.notes["action"] == "nontrivial"


CLAIMS = {30: "Z15 x SL(2,5)", 20: "Z5 x (SL(2,5) x| Z2)", 12: "Z3 x (SL(2,5) x| Z2)"}


@pytest.mark.parametrize("d", [30, 20, 12])
def test_automorphism_structure(aut_groups, d):
    g = aut_groups[d]
    split = None if d == 30 else catalog_matrix("s")
    cert = recognize_aut_structure(g, d, split)
    assert cert.ok, cert.failures
    assert cert.claim == CLAIMS[d] and cert.group_order == 60 * d
    assert all(c.status == "pass" for c in cert.replay(g) if c.required)
    data = cert.to_json(g)
    assert set(data) >= {"claim", "group_order", "witnesses", "checks", "choices"}
    assert "sqrt5" in data["choices"] and "xi" in data["choices"]
    if d != 30:
        names = {c["name"] for c in data["checks"]}
        assert "action_nontrivial(core, S)" in names and "order(M_stated, 240)" in names


def test_certificate_replays_on_a_rebuilt_group(aut_groups):
    cert = recognize_aut_structure(aut_groups[12], 12, catalog_matrix("s"))
    data = cert.to_json()
    fresh = closure(generator_catalog("Gtilde(12)"))
    again = StructureCertificate(data["claim"], data["group_order"], data["witnesses"], cert.checks)
    assert [c.status for c in again.replay(fresh)] == [c.status for c in cert.checks]


def test_replay_detects_a_bad_witness(aut_groups):
    g = aut_groups[30]
    cert = recognize_aut_structure(g, 30)
    wit = dict(cert.witnesses)
    wit["B"] = {"kind": "subgroup", "order": 1, "generators": []}
    broken = StructureCertificate(cert.claim, cert.group_order, wit, cert.checks)
    assert any(c.status == "fail" for c in broken.replay(g))


def test_wrong_group_is_not_certified():
    g = closure(generator_catalog("Gtilde(12)"))
    cert = recognize_aut_structure(g, 20)
    assert not cert.ok and "order(G, 1200)" in cert.failures
