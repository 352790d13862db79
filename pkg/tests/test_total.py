from itertools import product

import pytest
from hypothesis import given, settings, strategies as st

from liftstar.errors import ShapeMismatch
from liftstar.laws import Budget, LawContext, replay
from liftstar.presheaf import PowqPresheaf, nuts_presheaf, powq_presheaf
from liftstar.quantale import boolean, godel, lukasiewicz
from liftstar.relbase import FinSet, QMat, compose, graph, identity
from liftstar.total import (DualCandidate, TotalObj, check_closed_structure, check_dualizing, criterion_a,
                            criterion_b, internal_hom_oracle, iota, is_iso, is_morphism, lifted_structural,
                            lifted_tensor, lneg, omega_map, pairing, pairing_twist_check, total_morphism)

L3, G3, B2 = lukasiewicz(3), godel(3), boolean()
ONE, TWO = FinSet(1), FinSet(2)
HALF = 1


def by_id(verdicts):
    return {v.law_id: v for v in verdicts}


def test_hom_condition():
    Q = powq_presheaf(L3)
    A = TotalObj(ONE, (2,))
    assert is_morphism(Q, A, identity(ONE, L3), A) is None
    assert is_morphism(Q, A, identity(ONE, L3), TotalObj(ONE, (HALF,))) == {"Q(f)(alpha)": "(1)", "beta": "(1/2)"}
    collapse = graph(TWO, ONE, L3, [0, 0])
    assert is_morphism(Q, TotalObj(TWO, (HALF, 0)), collapse, TotalObj(ONE, (HALF,))) is None
    with pytest.raises(ShapeMismatch):
        total_morphism(Q, A, identity(ONE, L3), TotalObj(ONE, (0,)))


def test_morphisms_compose():
    Q = powq_presheaf(L3)
    F1, F2 = Q.fiber(1), Q.fiber(2)
    fs = [graph(ONE, TWO, L3, [1]), QMat(ONE, TWO, L3, [[1, 2]])]
    gs = [graph(TWO, ONE, L3, [0, 0]), QMat(TWO, ONE, L3, [[2], [1]])]
    for a, b, c in product(F1.elements(), F2.elements(), F1.elements()):
        for f, g in product(fs, gs):
            A, B, C = TotalObj(ONE, a), TotalObj(TWO, b), TotalObj(ONE, c)
            if is_morphism(Q, A, f, B) is None and is_morphism(Q, B, g, C) is None:
                assert is_morphism(Q, A, compose(f, g), C) is None


def test_lifted_tensor_and_structure():
    Q = powq_presheaf(L3)
    A, B = TotalObj(TWO, (2, HALF)), TotalObj(ONE, (HALF,))
    assert lifted_tensor(Q, A, B).alpha == (HALF, 0)
    s = lifted_structural(Q, "symmetry", A, B)
    assert s.dst.alpha == (HALF, 0)
    assert is_iso(Q, s.src, s.f, s.dst) is None
    lifted_structural(Q, "associator", A, B, A)


def test_iota_closed_form():
    Q = powq_presheaf(L3)
    assert iota(Q, TWO, ONE, (2, HALF), (HALF,)) == (HALF, 2)
    assert iota(Q, TWO, ONE, (2, HALF), Q.fiber(1).top) == Q.fiber(2).top
    assert internal_hom_oracle(Q, TWO, ONE, (2, HALF), (HALF,)) == (HALF, 2)


def test_omega_examples():
    QL, QG = powq_presheaf(L3), powq_presheaf(G3)
    assert omega_map(QL, ONE, (0,), (HALF,)) == (HALF,)
    assert omega_map(QG, ONE, (0,), (HALF,)) == (0,)
    assert lneg(QG, ONE, (0,), (0,)) == (2,)
    assert omega_map(QL, TWO, (0,), (0, 0)) == (2, 2)


@pytest.mark.parametrize("q", [B2, G3, L3], ids=["B2", "G3", "L3"])
def test_closed_structure_holds(q):
    vs = check_closed_structure(powq_presheaf(q), Budget(max_obj=2, max_morphisms=16))
    assert all(v.status == "pass" for v in vs), [v.line() for v in vs if v.status != "pass"]


class RaisedIota(PowqPresheaf):
    """A closed form whose first entry is pushed up to top."""

    def iota_closed(self, X, Y, a, c):
        out = list(super().iota_closed(X, Y, a, c))
        if out:
            out[0] = self.q.top
        return tuple(out)


def test_corrupted_iota_breaks_the_adjunction():
    Q = RaisedIota(L3)
    ctx = LawContext(Q)
    vs = by_id(check_closed_structure(Q, Budget(max_obj=1, max_morphisms=9), ctx, coherence=False,
                                      lax_iota=False))
    adj = vs["closed.adjunction"]
    assert adj.status == "fail"
    assert replay(ctx, adj.witness)[0] is False


def test_dualizing_lukasiewicz():
    vs, ok = check_dualizing(powq_presheaf(L3), DualCandidate((0,)), Budget(max_obj=2))
    assert ok and all(v.status == "pass" for v in vs)


def test_godel_is_not_dualizing():
    vs, ok = check_dualizing(powq_presheaf(G3), DualCandidate((0,)), Budget(max_obj=2))
    assert not ok
    v = by_id(vs)
    assert v["dual.A_left"].witness["inputs"]["a"] == ["1/2"]
    assert v["dual.A_left"].witness["inputs"]["X"] == 1
    assert v["dual.A_iff_B"].status == "pass"


def test_boolean_top_is_not_dualizing():
    vs, ok = check_dualizing(powq_presheaf(B2), DualCandidate((1,)), Budget(max_obj=1))
    assert not ok
    assert by_id(vs)["dual.A_left"].witness["inputs"]["a"] == ["0"]


@pytest.mark.parametrize("q", [B2, G3, L3], ids=["B2", "G3", "L3"])
def test_criteria_agree_for_every_omega(q):
    Q = powq_presheaf(q)
    b = Budget(max_obj=2)
    for w, n in product(range(q.n), range(3)):
        assert criterion_a(Q, FinSet(n), (w,), b)[0] == criterion_b(Q, FinSet(n), (w,), b)[0]


@pytest.mark.parametrize("q", [G3, L3], ids=["G3", "L3"])
def test_pairing_twist(q):
    vs = pairing_twist_check(powq_presheaf(q), budget=Budget(max_obj=2))
    assert [v.status for v in vs] == ["pass", "pass"]


def test_pairing_with_bottom_is_bottom():
    Q = powq_presheaf(L3)
    assert pairing(Q, TWO, ONE, (0, 0), (2, 2)) == (0,)
    assert pairing(Q, TWO, ONE, (2, 2), (0, 0)) == (0,)


def test_nuts_dualizing_at_one_point():
    U = nuts_presheaf()
    w = U.fiber(1).from_json([[0]])
    vs, ok = check_dualizing(U, DualCandidate(w), Budget(max_obj=1, max_morphisms=16))
    assert ok, [v.line() for v in vs if v.status == "fail"]


@settings(max_examples=40, deadline=None)
@given(st.lists(st.integers(0, 2), min_size=2, max_size=2).map(tuple),
       st.lists(st.integers(0, 2), min_size=2, max_size=2).map(tuple),
       st.lists(st.integers(0, 2), min_size=4, max_size=4).map(tuple))
def test_adjunction_random(a, c, b):
    Q = powq_presheaf(L3)
    F = Q.fiber(2)
    lhs = F.leq(pairing(Q, TWO, TWO, a, b), c)
    assert lhs == Q.fiber(4).leq(b, iota(Q, TWO, TWO, a, c))
