import pytest

from liftstar.errors import PsiNotNatural, ShapeMismatch, StructureNotInvertible
from liftstar.fixpoint import (Alg, Coalg, EndoLift, check_fixpoint_duality, enumerate_coalg_category,
                               is_alg_morphism, is_coalg_morphism, lfp_phi, lift_initial_algebra,
                               lift_terminal_coalgebra, q_mu, q_mu_action, q_mu_via_opposite, q_nu)
from liftstar.presheaf import Endofunctor, powq_presheaf
from liftstar.quantale import boolean, lukasiewicz
from liftstar.relbase import FinSet, QMat, graph, identity

B2, L3 = boolean(), lukasiewicz(3)
ZERO, ONE, TWO = FinSet(0), FinSet(1), FinSet(2)


def statuses(verdicts):
    return {v.law_id: v.status for v in verdicts}


@pytest.fixture
def QB():
    return powq_presheaf(B2)


def test_q_nu_identity(QB):
    lift = EndoLift.identity(QB)
    assert len(q_nu(lift, Coalg(TWO, identity(TWO, B2)))) == 4
    empty = QMat(ONE, ONE, B2, [[0]])
    assert q_nu(lift, Coalg(ONE, empty)) == [(0,), (1,)]
    assert len(q_mu(lift, Alg(TWO, identity(TWO, B2)))) == 4


def test_q_nu_constant():
    Q = powq_presheaf(L3)
    theta = (1,)
    lift = EndoLift.constant(Q, ONE, theta)
    gamma = QMat(ONE, ONE, L3, [[2]])
    # Q(gamma)(a) = a, so Q^nu = {a <= 1/2}
    assert q_nu(lift, Coalg(ONE, gamma)) == [(0,), (1,)]
    assert q_nu(EndoLift.constant(Q, ONE, (2,)), Coalg(ONE, gamma)) == [(0,), (1,), (2,)]
    # Q^mu is the up-set of Q(gamma)(theta)
    assert q_mu(lift, Alg(ONE, gamma)) == [(1,), (2,)]


def test_shapes_are_checked(QB):
    lift = EndoLift.constant(QB, TWO, (1, 0))
    with pytest.raises(ShapeMismatch):
        q_nu(lift, Coalg(ONE, identity(ONE, B2)))


def test_psi_naturality_is_detected(QB):
    assert EndoLift.identity(QB).psi_natural
    assert not EndoLift.identity(QB, "top").psi_natural
    assert EndoLift.constant(QB, TWO, (1, 0)).psi_natural


def test_mu_agrees_with_opposite_path():
    Q = powq_presheaf(L3)
    lift = EndoLift.constant(Q, ONE, (1,))
    for e in range(3):
        al = Alg(ONE, QMat(ONE, ONE, L3, [[e]]))
        assert set(q_mu(lift, al)) == set(q_mu_via_opposite(lift, al))


def test_mu_action_is_restriction_for_natural_psi(QB):
    lift = EndoLift.identity(QB)
    al = Alg(ONE, identity(ONE, B2))
    f = identity(ONE, B2)
    assert is_alg_morphism(lift.F, f, al, al)
    assert q_mu_action(lift, al, f, (0,)) == (0,)


def test_coalgebra_morphism_condition(QB):
    F = Endofunctor("identity")
    c = Coalg(TWO, graph(TWO, TWO, B2, [1, 0]))
    assert is_coalg_morphism(F, graph(TWO, TWO, B2, [1, 0]), c, c)
    assert not is_coalg_morphism(F, graph(TWO, TWO, B2, [0, 0]), c, c)


@pytest.mark.parametrize("make", [lambda Q: EndoLift.identity(Q),
                                  lambda Q: EndoLift.constant(Q, TWO, (1, 0))], ids=["identity", "constant"])
def test_coalgebra_category_matches_q_nu(QB, make):
    cat = enumerate_coalg_category(make(QB), max_carrier=2)
    assert cat.ok, [v.line() for v in cat.verdicts]
    assert cat.lifted_objects == cat.nu_objects
    assert cat.lifted_morphisms == cat.nu_morphisms


def test_coalgebra_counts_identity(QB):
    cat = enumerate_coalg_category(EndoLift.identity(QB), max_carrier=1)
    # carrier 0: one coalgebra over a one-point fiber; carrier 1: two structures, each with
    # post-fixed points a with gamma.a <= a
    assert cat.lifted_objects == 1 + 2 + 2
    cat2 = enumerate_coalg_category(EndoLift.identity(QB), max_carrier=2)
    assert (cat2.lifted_objects, cat2.lifted_morphisms) == (53, 6561)


def test_terminal_coalgebra_constant(QB):
    theta = (1, 0)
    lift = EndoLift.constant(QB, TWO, theta)
    res = lift_terminal_coalgebra(lift, TWO, identity(TWO, B2))
    assert res.element == theta
    assert res.ok, [v.line() for v in res.verdicts]


def test_terminal_coalgebra_identity(QB):
    res = lift_terminal_coalgebra(EndoLift.identity(QB), ZERO, identity(ZERO, B2))
    assert res.element == () and res.ok


def test_initial_algebra_constant(QB):
    theta = (1, 0)
    res = lift_initial_algebra(EndoLift.constant(QB, TWO, theta), TWO, identity(TWO, B2))
    assert res.element == theta
    assert res.ok, [v.line() for v in res.verdicts]


def test_initial_algebra_needs_natural_psi(QB):
    with pytest.raises(PsiNotNatural):
        lift_initial_algebra(EndoLift.identity(QB, "top"), ZERO, identity(ZERO, B2))


def test_structure_must_be_invertible(QB):
    lift = EndoLift.constant(QB, TWO, (1, 0))
    with pytest.raises(StructureNotInvertible):
        lift_terminal_coalgebra(lift, TWO, QMat(TWO, TWO, B2, [[1, 1], [0, 1]]))


def test_lfp_by_iteration():
    Q = powq_presheaf(L3)
    lift = EndoLift.constant(Q, ONE, (1,))
    value, iters = lfp_phi(lift, Alg(ONE, identity(ONE, L3)))
    assert value == (1,) and iters == 1


@pytest.mark.parametrize("make", [lambda Q: EndoLift.identity(Q),
                                  lambda Q: EndoLift.identity(Q, "top"),
                                  lambda Q: EndoLift.constant(Q, TWO, (1, 0)),
                                  lambda Q: EndoLift.product(Q, ONE, (1,))],
                         ids=["id", "top", "constant", "product"])
def test_duality_checks(QB, make):
    vs = check_fixpoint_duality(make(QB), max_carrier=2)
    assert all(v.ok for v in vs), [v.line() for v in vs if not v.ok]
    assert statuses(vs)["fixpoint.mu_duality"] == "pass"


def test_restriction_skipped_when_not_natural(QB):
    vs = check_fixpoint_duality(EndoLift.identity(QB, "top"), max_carrier=1)
    assert statuses(vs)["fixpoint.mu_action_restriction"] == "skip"
