"""Acceptance suite: one test per criterion, each printing a single PASS/FAIL line with its runtime."""
import io
import json
import time
from contextlib import contextmanager
from itertools import product


from liftstar import cli
from liftstar.corpus import load_bundled, parse_text, same_semantics, serialize
from liftstar.fixpoint import (EndoLift, check_fixpoint_duality, enumerate_coalg_category,
                               lift_terminal_coalgebra)
from liftstar.laws import Budget, replay
from liftstar.nucleus import (NucleusFamily, build_qj, check_nucleus_laws, girard_consistency,
                              representation_check)
from liftstar.presheaf import check_coherence, check_presheaf, nuts_presheaf, powq_presheaf
from liftstar.quantale import check_quantale, girard_quotient, is_dualizing, residuation_violation
from liftstar.relbase import FinSet, identity
from liftstar.total import (DualCandidate, check_closed_structure, check_dualizing, criterion_a,
                            criterion_b)

CORPUS = ["boolean", "godel3", "lukasiewicz3", "lukasiewicz4", "maxchain3", "powerset_z2"]


@contextmanager
def criterion(n, title, limit, capsys):
    t0 = time.perf_counter()
    ok = False
    try:
        yield
        ok = True
    finally:
        dt = time.perf_counter() - t0
        within = dt < limit
        with capsys.disabled():
            status = "PASS" if ok and within else "FAIL"
            print(f"\ncriterion {n}: {status}  {title}  ({dt:.2f} s, limit {limit} s)")
    assert within, f"criterion {n} took {dt:.2f} s, limit {limit} s"


def run_cli(*argv):
    buf = io.StringIO()
    code, report = cli.run(list(argv), buf)
    return code, buf.getvalue(), report


def all_pass(verdicts):
    bad = [v.line() for v in verdicts if v.status == "fail"]
    assert not bad, "\n".join(bad)


def test_criterion_1_quantale_laws(capsys):
    with criterion(1, "quantale laws and residuation on the bundled corpus", 1, capsys):
        code, out, report = run_cli("check-quantale", *CORPUS)
        assert code == 0
        assert {v.scope for v in report.verdicts} == set(CORPUS)
        res = [v for v in report.verdicts if v.law_id == "quantale.residuation"]
        assert len(res) == 6 and all(v.status == "pass" and v.exhaustive for v in res)
        corpus = load_bundled()
        assert all(residuation_violation(corpus.quantale(n)) is None for n in CORPUS)


def test_criterion_2_girard_quotient(capsys):
    with criterion(2, "Girard quotient for every quantale and every omega", 1, capsys):
        code, _, report = run_cli("girard")
        assert code == 0
        corpus = load_bundled()
        for n in CORPUS:
            q = corpus.quantale(n)
            for w in range(q.n):
                g = girard_quotient(q, w)
                qq = g.quantale
                check_quantale(qq.lat, qq.unit, qq.mult)
                assert w in g.embedding and g.embedding[g.omega] == w
                assert is_dualizing(qq, g.omega) is None
        assert len({v.scope for v in report.verdicts}) == sum(corpus.quantale(n).n for n in CORPUS)


def test_criterion_3_closed_structure(capsys):
    with criterion(3, "closed structure lifts for powq over B2, G3, L3 with |X|,|Y| <= 2", 30, capsys):
        corpus = load_bundled()
        budget = Budget(max_obj=2, max_morphisms=256)
        for n in ("boolean", "godel3", "lukasiewicz3"):
            Q = powq_presheaf(corpus.quantale(n))
            vs = check_closed_structure(Q, budget)
            all_pass(vs)
            by = {v.law_id: v for v in vs}
            for lid in ("closed.adjunction", "closed.oracle", "closed.closed_form", "closed.mu_via_pairing",
                        "closed.unit", "closed.counit"):
                assert by[lid].status == "pass" and by[lid].exhaustive, (n, lid)
            coh = check_coherence(Q, budget, assoc_max=8)
            all_pass(coh)
            assert all(v.exhaustive for v in coh)


def test_criterion_4_dualizing_criteria(capsys):
    with criterion(4, "criteria A and B agree; L3 at 0 dualizing, G3 at 0 not", 10, capsys):
        corpus = load_bundled()
        budget = Budget(max_obj=2)
        for n in ("boolean", "godel3", "lukasiewicz3", "lukasiewicz4", "maxchain3", "powerset_z2"):
            q = corpus.quantale(n)
            Q = powq_presheaf(q)
            for w, k in product(range(q.n), range(3)):
                X = FinSet(k)
                assert criterion_a(Q, X, (w,), budget) == criterion_b(Q, X, (w,), budget), (n, w, k)
        vs, ok = check_dualizing(powq_presheaf(corpus.quantale("lukasiewicz3")), DualCandidate((0,)), budget)
        assert ok
        all_pass(vs)
        vs, ok = check_dualizing(powq_presheaf(corpus.quantale("godel3")), DualCandidate((0,)), budget)
        assert not ok
        w = next(v for v in vs if v.law_id == "dual.A_left").witness
        assert w["inputs"]["X"] == 1 and w["inputs"]["a"] == ["1/2"]


def test_criterion_5_nucleus(capsys):
    with criterion(5, "nucleus construction for powq/G3 at omega = 0", 30, capsys):
        q = load_bundled().quantale("godel3")
        budget = Budget(max_obj=2, max_morphisms=32)
        fam = NucleusFamily(powq_presheaf(q), DualCandidate((0,)))
        vs = check_nucleus_laws(fam, budget)
        all_pass(vs)
        ids = {v.law_id for v in vs}
        assert {"nucleus.closure", "nucleus.mu_lax", "nucleus.curry_pairing", "nucleus.iota_lax"} <= ids
        Qj = build_qj(fam, budget)
        dv, ok = check_dualizing(Qj, fam.dual, budget)
        assert ok
        all_pass(dv)
        v, _ = girard_consistency(q, 0)
        assert v.status == "pass"


def test_criterion_6_representation(capsys):
    with criterion(6, "representation by principal downsets for L3 and B2 at omega = 0", 60, capsys):
        corpus = load_bundled()
        for n in ("lukasiewicz3", "boolean"):
            vs = representation_check(corpus.quantale(n), 0, Budget(max_obj=2, max_morphisms=81))
            all_pass(vs)
            by = {v.law_id: v for v in vs}
            for lid in ("represent.principal", "represent.iso", "represent.natural"):
                assert by[lid].status == "pass" and by[lid].exhaustive, (n, lid)


def test_criterion_7_fixpoints(capsys):
    with criterion(7, "coalgebras, terminal coalgebra, and the two Q^mu code paths", 60, capsys):
        corpus = load_bundled()
        B2, L3 = corpus.quantale("boolean"), corpus.quantale("lukasiewicz3")
        QB = powq_presheaf(B2)
        two = FinSet(2)
        for lift in (EndoLift.identity(QB), EndoLift.constant(QB, two, (1, 0))):
            cat = enumerate_coalg_category(lift, max_carrier=2)
            all_pass(cat.verdicts)
            assert cat.lifted_objects == cat.nu_objects and cat.lifted_morphisms == cat.nu_morphisms
        theta = (1, 0)
        res = lift_terminal_coalgebra(EndoLift.constant(QB, two, theta), two, identity(two, B2))
        assert res.element == theta
        all_pass(res.verdicts)
        QL = powq_presheaf(L3)
        one = FinSet(1)
        lifts = [EndoLift.identity(QB), EndoLift.identity(QB, "top"), EndoLift.constant(QB, two, theta),
                 EndoLift.product(QB, one, (1,)), EndoLift.identity(QL), EndoLift.constant(QL, one, (1,))]
        for lift in lifts:
            vs = check_fixpoint_duality(lift, max_carrier=2)
            all_pass(vs)
            assert next(v for v in vs if v.law_id == "fixpoint.mu_duality").exhaustive


def test_criterion_8_nuts(capsys):
    with criterion(8, "upset presheaf laws on |X| <= 3 and its dualizing object on |X| <= 2", 120, capsys):
        U = nuts_presheaf()
        vs = check_presheaf(U, Budget(max_obj=3, max_morphisms=64, max_elems=256))
        all_pass(vs)
        ids = {v.law_id for v in vs}
        assert {"functor.identity", "functor.compose", "mu.natural", "mu.bilinear", "monoidal.left_unitor",
                "monoidal.right_unitor", "monoidal.symmetry", "monoidal.associator"} <= ids
        w = U.fiber(1).from_json([[0]])
        dv, ok = check_dualizing(U, DualCandidate(w), Budget(max_obj=2, max_morphisms=64))
        assert ok
        all_pass(dv)


def test_criterion_9_cli_contract(capsys, tmp_path):
    with criterion(9, "corpus round trip, exit codes, witness replay", 60, capsys):
        c = load_bundled()
        assert same_semantics(c, parse_text(serialize(c)))
        assert run_cli("girard", "godel3", "--omega", "0")[0] == 0
        assert run_cli("girard", "nosuch")[0] == 2
        bad = tmp_path / "bad.q"
        bad.write_text('quantale skew\nlabels: ["0", "a", "1"]\norder: [["0", "a"], ["a", "1"]]\n'
                       'unit: "1"\nmult: [["0", "a", "0"], ["a", "1", "a"], ["0", "a", "1"]]\nend\n')
        failing = [("check-dualizing", "godel3", "--omega", "0"),
                   ("check-dualizing", "boolean", "--omega", "1"),
                   ("check-quantale", "skew", "--corpus", str(bad)),
                   ("lift-check", "godel3", "--omega", "0")]
        replayed = 0
        for argv in failing:
            code, _, report = run_cli(*argv)
            fails = [v for v in report.verdicts if v.status == "fail"]
            if argv[0] != "lift-check":
                assert code == 1 and fails, argv
            for v in fails:
                holds, lhs, rhs = replay(v.ctx, json.loads(json.dumps(v.witness)))
                assert not holds and [lhs, rhs] == [v.witness["lhs"], v.witness["rhs"]], v.law_id
                replayed += 1
            side = tmp_path / "w.json"
            run_cli(*argv, "--json", str(side))
            code, out, _ = run_cli(*argv, "--replay", str(side))
            assert code == (1 if fails else 0)
            assert "FAILS DIFFERENTLY" not in out and "HOLDS NOW" not in out
        assert replayed > 0
