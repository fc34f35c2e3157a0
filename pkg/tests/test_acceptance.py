"""Acceptance criteria 1-9, each at its stated tolerance (exact integer or
exact field equality) with one PASS/FAIL line apiece in the terminal summary.

Criteria 5 and 9 cannot hold as stated: four of the registered word
identities are false in exact arithmetic, and a full run therefore exits 1.
Both are asserted in full and marked as strict expected failures, so the suite
turns red if they ever start to pass or if anything else in them breaks.
"""

import json
import random
import subprocess
import sys
import time

import pytest

from icosacurves.forms import MUTATIONS, tampered
from icosacurves.generators import RELATIONS, catalog_matrix, generator_catalog
from icosacurves.groups import closure, image_and_kernel, subgroup_generated
from icosacurves.matrices import projective_canonical
from icosacurves.recognition import recognize_aut_structure, recognize_perfect_core
from icosacurves.verify import (
    cmd_verify_icosahedral,
    cmd_verify_relations,
    cmd_verify_section2,
    cmd_verify_theorem,
)

from conftest import ACCEPTANCE_LINES

CLAIMS = {30: "Z15 x SL(2,5)", 20: "Z5 x (SL(2,5) x| Z2)", 12: "Z3 x (SL(2,5) x| Z2)"}
BUDGET = {30: 60.0, 20: 60.0, 12: 30.0}


def record(n, ok, detail):
    line = f"criterion {n}: {'PASS' if ok else 'FAIL'}  {detail}"
    ACCEPTANCE_LINES.append(line)
    print(line)
    return ok


def build_and_certify(d, sign=1):
    t = time.perf_counter()
    g = closure(generator_catalog("Gtilde", d, sign), "projective")
    cert = recognize_aut_structure(g, d, None if d == 30 else catalog_matrix("s", sign))
    return g, cert, time.perf_counter() - t


@pytest.mark.parametrize("n,d", [(1, 30), (2, 20), (3, 12)])
def test_automorphism_orders_and_structure(n, d):
    g, cert, dt = build_and_certify(d)
    replay = all(c.status == "pass" for c in cert.replay(g) if c.required)
    ok = g.order == 60 * d and cert.ok and cert.claim == CLAIMS[d] and replay and dt < BUDGET[d]
    if d != 30:
        names = {c.name: c.status for c in cert.checks}
        ok = ok and "s" in cert.witnesses and names.get("product_bijective(core, S, M)") == "pass"
        ok = ok and names.get("order(M_stated, 240)") == "pass" and names.get("normal(M_stated, G)") == "pass"
    record(n, ok, f"d={d}: |G|={g.order}, claim {cert.claim!r}, certified={cert.ok}, "
                  f"replay={replay}, {dt:.1f}s (budget {BUDGET[d]:.0f}s)")
    assert ok, cert.failures


def test_exact_sequence(aut_groups):
    parts, ok = [], True
    for d in (30, 20, 12):
        g = aut_groups[d]
        ik = image_and_kernel(g)
        lam = subgroup_generated(g, [g.index_of(catalog_matrix(f"lambda{d}").embed(g.elements[0].field))])
        fp = recognize_perfect_core(ik.image)["verdict"]
        good = ik.image.order == 60 and fp == "A5" and ik.kernel.order == d and ik.kernel == lam
        ok &= good
        parts.append(f"d={d}: image {ik.image.order} {fp}, kernel {ik.kernel.order} = <lambda{d}> {ik.kernel == lam}")
    record(4, ok, "; ".join(parts))
    assert ok


@pytest.mark.xfail(strict=True, reason="four registered identities are false in exact arithmetic")
def test_word_identities_have_no_outright_failures():
    rep = cmd_verify_relations()
    words = [c for c in rep.claims if c.certificate.get("lhs")]
    failed = [c.claim_id for c in words if c.certificate["status"] == "fail"]
    scalars = {c.claim_id: c.certificate["scalar"] for c in words if c.certificate["status"] == "projective"}
    ok = len(words) == len(RELATIONS) and not failed
    record(5, ok, f"{len(words)} identities, failures {failed}, nontrivial scalars {scalars}")
    assert ok


def test_word_identity_report_is_complete():
    rep = cmd_verify_relations()
    words = {c.claim_id: c.certificate for c in rep.claims if c.certificate.get("lhs")}
    assert len(words) == len(RELATIONS)
    for cert in words.values():
        assert cert["status"] in ("exact", "projective", "fail")
        assert ("scalar" in cert) == (cert["status"] == "projective")
        assert ("residual" in cert) == (cert["status"] == "fail")
    for rel in RELATIONS:
        if rel.variant == "corrected":
            assert words[f"relations/{rel.relation_id}"]["status"] == "exact"
            assert words[f"relations/{rel.corrects}"]["status"] == "fail"


def test_icosahedral_suite():
    rep = cmd_verify_icosahedral(40)
    brute = [sum(1 for a in range(t // 12 + 1) for b in range(t // 20 + 1) for c in range(t // 30 + 1)
                 if 12 * a + 20 * b + 30 * c == t) for t in range(41)]
    molien = [int(x) for x in rep.claim("icosahedral/molien").certificate["series"]]
    ok = rep.status == "pass" and molien == brute and len(rep.claims) == 9
    order = rep.claim("icosahedral/order").certificate
    record(6, ok, f"order {order['order']} {order['fingerprint']['verdict']}, quotient "
                  f"{rep.claim('icosahedral/quotient').certificate['quotient_order']}, "
                  f"{sum(c.status == 'pass' for c in rep.claims)}/9 claims, Molien = counts to 40: {molien == brute}")
    assert ok, rep.failures


def test_cyclic_family():
    rep = cmd_verify_section2(8)
    orders = {d: rep.claim(f"section2/d{d}/cyclic").certificate["order"] for d in range(5, 9)}
    ok = rep.status == "pass" and orders == {d: d * (d - 1) for d in range(5, 9)}
    record(7, ok, f"orders {orders}, all cyclic and fixing C(d): {rep.status == 'pass'}")
    assert ok, rep.failures


CATALOG_SETS = ["Gtilde(30)", "Gtilde(20)", "Gtilde(12)", "icosahedral_2x2", "S21", "K", "H",
                "C(5)_galois", "C(6)_galois", "C(7)_galois", "C(8)_galois"]


def test_property_suites(aut_groups):
    import itertools

    t0 = time.perf_counter()
    results = {}

    rng = random.Random(1)
    g = aut_groups[30]
    fld = g.elements[0].field
    bad = 0
    for _ in range(1000):
        a = g.elements[rng.randrange(g.order)]
        c = fld([rng.randint(-4, 4) for _ in range(fld.degree)])
        if c.is_zero():
            c = fld.one()
        bad += projective_canonical(a.scale(c)) != projective_canonical(a)
    results["a"] = bad == 0

    ok = True
    for name in CATALOG_SETS:
        gens = generator_catalog(name)
        base = {x.key() for x in closure(gens).elements}
        n = len(gens.matrices)
        orders = list(itertools.permutations(range(n))) + [tuple(range(n)) + (0, n - 1)]
        ok &= all({x.key() for x in closure(gens.reordered(p)).elements} == base for p in orders)
    results["b"] = ok

    ok = True
    groups = list(aut_groups.values()) + [closure(generator_catalog(f"C({d})_galois")) for d in range(5, 9)]
    groups += [closure(generator_catalog("S21"), "projective"), closure(generator_catalog("lambda", 30), "projective")]
    for grp in groups:
        ik = image_and_kernel(grp)
        ok &= ik.image.order * ik.kernel.order == grp.order
    results["c"] = ok

    ok = True
    for d in (30, 20, 12):
        _, plus = aut_groups[d], recognize_aut_structure(aut_groups[d], d, None if d == 30 else catalog_matrix("s"))
        gm, minus, _ = build_and_certify(d, -1)
        ok &= gm.order == aut_groups[d].order and minus.claim == plus.claim and minus.ok and plus.ok
    results["d"] = ok

    ok = True
    for name, exp, value in MUTATIONS:
        d = int(name[1:])
        with tampered(name, exp, value):
            frags = [cmd_verify_theorem(d), cmd_verify_icosahedral(12)]
        ok &= any(f.status == "fail" for f in frags)
    results["e"] = ok

    dt = time.perf_counter() - t0
    passed = all(results.values()) and dt < 120
    record(8, passed, " ".join(f"({k}) {'ok' if v else 'FAILED'}" for k, v in results.items()) + f", {dt:.1f}s (budget 120s)")
    assert passed, results


def full_cli_run():
    args = [sys.executable, "-m", "icosacurves"]
    cmds = [["verify-theorem", "--d", "all"], ["verify-relations"], ["verify-icosahedral"],
            ["verify-section2", "--max-d", "8"]]
    return args, cmds


@pytest.fixture(scope="module")
def cli_runs(tmp_path_factory):
    args, cmds = full_cli_run()
    out = tmp_path_factory.mktemp("cli")
    runs = []
    for k in range(2):
        t = time.perf_counter()
        codes, paths = [], []
        for i, c in enumerate(cmds):
            p = out / f"run{k}_{i}.json"
            codes.append(subprocess.run(args + c + ["--out", str(p)], capture_output=True).returncode)
            paths.append(p)
        merged = out / f"run{k}.json"
        codes.append(subprocess.run(args + ["report", *map(str, paths), "--out", str(merged)],
                                    capture_output=True).returncode)
        runs.append((codes, merged.read_bytes(), time.perf_counter() - t))
    return runs


@pytest.mark.xfail(strict=True, reason="verify-relations exits 1 on the four false registered identities")
def test_full_cli_run(cli_runs):
    (codes, first, dt), (_, second, _) = cli_runs
    failed = json.loads(first)["summary"]["failed"]
    ok = all(c == 0 for c in codes) and first == second and dt < 300
    record(9, ok, f"exit codes {codes}, failing claims {failed}, byte-identical {first == second}, {dt:.1f}s (budget 300s)")
    assert ok


def test_full_cli_run_is_deterministic_and_fast(cli_runs):
    (codes, first, dt), (codes2, second, _) = cli_runs
    assert first == second and dt < 300
    assert codes == codes2
    assert set(json.loads(first)["summary"]["failed"]) == {
        "relations/zeta5-block", "relations/alpha-prime-word",
        "relations/gamma-prime-word", "relations/tau-from-S21"}
