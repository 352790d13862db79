from itertools import combinations

import pytest
from hypothesis import given, settings, strategies as st

from liftstar.errors import UnsupportedFunctor
from liftstar.laws import Budget, LawContext, replay
from liftstar.presheaf import (PowqPresheaf, check_coherence, check_lax_extranatural, check_presheaf,
                               compose_with_endofunctor, minimal_members, nuts_presheaf, orth_presheaf,
                               powq_presheaf, upclose)
from liftstar.quantale import boolean, godel, lukasiewicz
from liftstar.relbase import FinSet, QMat, from_pairs, identity

L3 = lukasiewicz(3)
B2 = boolean()
ONE, TWO = FinSet(1), FinSet(2)


def statuses(verdicts):
    return {v.law_id: v.status for v in verdicts}


def test_powq_action_joins_over_the_relation():
    Q = powq_presheaf(L3)
    R = from_pairs(TWO, ONE, L3, [(0, 0), (1, 0)])
    assert Q.act(R, (2, 1)) == (2,)


def test_powq_mu_multiplies_pointwise():
    Q = powq_presheaf(L3)
    assert Q.mu(TWO, ONE, (2, 1), (1,)) == (1, 0)
    assert Q.unit() == (L3.unit,)


def test_powq_over_plain_relations():
    Q = powq_presheaf(L3, base="rel")
    R = from_pairs(TWO, ONE, B2, [(1, 0)])
    assert Q.act(R, (2, 1)) == (1,)
    with pytest.raises(ValueError):
        powq_presheaf(L3, base="sets")


def test_fiber_sizes():
    assert nuts_presheaf().fiber(1).count() == 3
    assert len(nuts_presheaf().fiber(2).elements()) == 6
    assert orth_presheaf(B2).fiber(1).count() == 4
    assert powq_presheaf(L3).fiber(2).count() == 9


def test_upset_action_of_total_relation():
    U = nuts_presheaf()
    F = U.fiber(1)
    a = F.from_json([[0]])
    R = from_pairs(ONE, ONE, B2, [(0, 0)])
    assert F.to_json(U.act(R, a)) == [[0]]


def test_upset_helpers():
    # up-closure of {{0}} in P({0,1}) adds {0,1}
    assert upclose(1 << 0b01, 2) == (1 << 0b01) | (1 << 0b11)
    assert minimal_members((1 << 0b01) | (1 << 0b11), 2) == [0b01]


def test_endofunctor_fibers():
    Q = powq_presheaf(L3)
    P = compose_with_endofunctor(Q, "product", 2)
    assert P.fiber(3).size == 6
    C = compose_with_endofunctor(Q, "constant", 2)
    assert C.fiber(5).size == 2
    assert compose_with_endofunctor(Q, "identity") is Q
    with pytest.raises(UnsupportedFunctor):
        compose_with_endofunctor(Q, "list")
    with pytest.raises(UnsupportedFunctor):
        compose_with_endofunctor(Q, "constant")


@pytest.mark.parametrize("q", [B2, godel(3), L3], ids=["B2", "G3", "L3"])
def test_powq_is_a_monoidal_functor(q):
    vs = check_presheaf(powq_presheaf(q), Budget(max_obj=2, max_morphisms=81))
    assert all(v.status == "pass" for v in vs), [v.line() for v in vs if v.status != "pass"]


def test_mu_is_natural_and_iota_is_lax():
    Q = powq_presheaf(L3)
    budget = Budget(max_obj=2, max_morphisms=16)
    mu = statuses(check_lax_extranatural(LawContext(Q), "mu", budget))
    assert mu == {"lax.mu": "pass", "mu.natural": "pass"}
    io = statuses(check_lax_extranatural(LawContext(Q), "iota", budget))
    assert io == {"lax.iota": "pass", "lax.iota_slatt": "pass"}


def test_composed_presheaves_are_monoidal():
    Q = powq_presheaf(B2)
    for kind, A in [("constant", 2), ("product", 1)]:
        vs = check_presheaf(compose_with_endofunctor(Q, kind, A), Budget(max_obj=2, max_morphisms=16))
        assert all(v.status == "pass" for v in vs), kind


class LoweredMu(PowqPresheaf):
    """mu with the (1, 1) entry forced down to bottom."""

    def mu(self, X, Y, a, b):
        out = list(super().mu(X, Y, a, b))
        if X.size == Y.size == 1 and a == b == (self.q.top,):
            out[0] = self.q.bottom
        return tuple(out)


def test_corrupted_mu_is_caught_and_replays():
    Q = LoweredMu(L3)
    ctx = LawContext(Q)
    vs = {v.law_id: v for v in check_coherence(Q, Budget(max_obj=1), ctx)}
    bad = vs["monoidal.left_unitor"]
    assert bad.status == "fail"
    assert bad.witness["inputs"]["a"] == ["1"]
    holds, lhs, rhs = replay(ctx, bad.witness)
    assert not holds and (lhs, rhs) == (bad.witness["lhs"], bad.witness["rhs"])


def test_nuts_small():
    vs = check_presheaf(nuts_presheaf(), Budget(max_obj=2, max_morphisms=16))
    assert all(v.status == "pass" for v in vs)


def test_orth_small():
    vs = check_presheaf(orth_presheaf(B2), Budget(max_obj=1, max_morphisms=16))
    assert all(v.status == "pass" for v in vs)


def elts(n):
    return st.lists(st.integers(0, 2), min_size=n, max_size=n).map(tuple)


@settings(max_examples=60)
@given(st.lists(st.integers(0, 2), min_size=4, max_size=4), elts(2), elts(2))
def test_action_preserves_binary_joins(entries, a, b):
    Q = powq_presheaf(L3)
    f = QMat(TWO, TWO, L3, entries)
    F = Q.fiber(2)
    assert Q.act(f, F.join([a, b])) == F.join([Q.act(f, a), Q.act(f, b)])
    assert Q.act(identity(TWO, L3), a) == a


@settings(max_examples=60)
@given(st.lists(st.integers(0, 2), min_size=4, max_size=4), elts(2), elts(2))
def test_right_adjoint_of_action(entries, a, b):
    Q = powq_presheaf(L3)
    f = QMat(TWO, TWO, L3, entries)
    F = Q.fiber(2)
    assert F.leq(Q.act(f, a), b) == F.leq(a, Q.act_radj(f, b))


def test_powq_fiber_is_a_lattice():
    F = powq_presheaf(L3).fiber(2)
    lat, elems, _ = F.materialize()
    assert lat.n == 9
    for a, b in combinations(elems, 2):
        assert F.leq(a, F.join([a, b])) and F.leq(F.meet([a, b]), b)
