import pytest

from liftstar.laws import Budget, LawContext, replay
from liftstar.nucleus import (NucleusFamily, QjPresheaf, build_qj, check_nucleus_laws, downset,
                              girard_consistency, qj_verdicts, representation_check)
from liftstar.presheaf import powq_presheaf
from liftstar.quantale import boolean, godel, lukasiewicz
from liftstar.relbase import FinSet
from liftstar.total import DualCandidate

L3, G3, B2 = lukasiewicz(3), godel(3), boolean()
ONE, TWO = FinSet(1), FinSet(2)
ZERO = DualCandidate((0,))


def family(q):
    return NucleusFamily(powq_presheaf(q), ZERO)


def test_godel_nucleus_values():
    fam = family(G3)
    assert fam.j(ONE, (1,)) == (2,)
    assert fam.j(ONE, (0,)) == (0,)
    assert fam.fixed_points(ONE) == [(0,), (2,)]
    assert fam.fixed_points(TWO) == [(0, 0), (0, 2), (2, 0), (2, 2)]


def test_lukasiewicz_nucleus_is_identity():
    fam = family(L3)
    for n in (1, 2):
        F = fam.Q.fiber(n)
        assert all(fam.j(FinSet(n), a) == a for a in F.elements())


def test_fixed_points_are_stable():
    fam = family(G3)
    for a in fam.fixed_points(TWO):
        assert fam.j(TWO, a) == a
    fam.closure_op(TWO)


@pytest.mark.parametrize("q", [G3, B2, L3], ids=["G3", "B2", "L3"])
def test_nucleus_laws(q):
    vs = check_nucleus_laws(family(q), Budget(max_obj=2, max_morphisms=16))
    assert all(v.status == "pass" for v in vs), [v.line() for v in vs if v.status != "pass"]


def test_quotient_presheaf_on_godel():
    Qj = build_qj(family(G3), Budget(max_obj=2, max_morphisms=16))
    assert Qj.fiber(1).elements() == [(0,), (2,)]
    assert Qj.unit() == (2,)
    assert Qj.mu(ONE, ONE, (2,), (2,)) == (2,)
    vs = qj_verdicts(Qj, Budget(max_obj=2, max_morphisms=16))
    assert all(v.status == "pass" for v in vs)


@pytest.mark.parametrize("q", [G3, L3, B2], ids=["G3", "L3", "B2"])
def test_quotient_agrees_with_girard(q):
    v, _ = girard_consistency(q, 0)
    assert v.status == "pass"


class DroppedIdempotence(NucleusFamily):
    """j(0) pushed to 1/2, so that j(j(0)) = 1."""

    def j(self, X, a):
        if a == (0,):
            return (1,)
        return super().j(X, a)


def test_corrupted_nucleus_is_caught():
    fam = DroppedIdempotence(powq_presheaf(G3), ZERO)
    ctx = LawContext(fam.Q, family=fam)
    vs = {v.law_id: v for v in check_nucleus_laws(fam, Budget(max_obj=1, max_morphisms=9), ctx)}
    bad = vs["nucleus.closure"]
    assert bad.status == "fail"
    assert bad.witness["inputs"]["X"] == 1
    assert replay(ctx, bad.witness)[0] is False


def test_representation_lukasiewicz():
    vs = representation_check(L3, 0, Budget(max_obj=2, max_morphisms=81))
    assert all(v.status == "pass" for v in vs), [v.line() for v in vs if v.status != "pass"]
    ids = {v.law_id for v in vs}
    assert {"represent.principal", "represent.iso", "represent.natural"} <= ids


def test_representation_boolean():
    vs = representation_check(B2, 0, Budget(max_obj=2, max_morphisms=16))
    assert all(v.status == "pass" for v in vs)


def test_principal_downsets_of_l3():
    F = powq_presheaf(L3).fiber(1)
    downs = {downset(F, a) for a in F.elements()}
    assert len(downs) == 3
    assert downset(F, (1,)) == frozenset({(0,), (1,)})


def test_representation_stops_when_not_dualizing():
    vs = representation_check(G3, 0, Budget(max_obj=1))
    assert [v.law_id for v in vs] == ["dual.A_left", "dual.A_right"]
    assert vs[0].status == "fail"


def test_qj_presheaf_name():
    assert QjPresheaf(family(G3)).name == "powq^j"
