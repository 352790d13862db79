import numpy as np
import pytest
from hypothesis import given, strategies as st

from liftstar.errors import NoJoin, NotAPoset, NotMonotone, NotSupPreserving
from liftstar.lattice import (MonoMap, all_subsets, chain, check_complete_lattice, closure_operator, diamond,
                              greatest_fixpoint, identity_map, is_closure_operator, least_fixpoint,
                              monomap, opposite, right_adjoint, supmap)

HALF = ["0", "1/2", "1"]


def test_two_chain():
    lat = chain(2)
    assert (lat.bottom, lat.top) == (0, 1)
    assert lat.join([0, 1]) == 1 and lat.meet([0, 1]) == 0


def test_antichain_has_no_join():
    with pytest.raises(NoJoin):
        check_complete_lattice(np.eye(2, dtype=bool), ["a", "b"])


def test_order_must_be_antisymmetric():
    with pytest.raises(NotAPoset):
        check_complete_lattice([[1, 1], [1, 1]])


def test_joins():
    c3 = chain(3, HALF)
    assert c3.join([0, 1]) == 1
    assert c3.join([]) == c3.bottom
    d = diamond()
    assert d.join([d.index("a"), d.index("b")]) == d.index("top")
    assert d.meet([d.index("a"), d.index("b")]) == d.index("bot")


def test_right_adjoint_of_meet_with_half():
    c3 = chain(3, HALF)
    f = supmap(c3, c3, [min(x, 1) for x in range(3)])
    assert right_adjoint(f).table == (0, 2, 2)


def test_right_adjoint_identity_and_bottom():
    c3 = chain(3)
    assert right_adjoint(identity_map(c3)).table == (0, 1, 2)
    assert right_adjoint(supmap(c3, c3, [0, 0, 0])).table == (2, 2, 2)


def test_right_adjoint_needs_sup_preservation():
    c3 = chain(3)
    with pytest.raises(NotSupPreserving):
        right_adjoint(monomap(c3, c3, [1, 1, 2]))


def test_monotonicity_is_checked():
    c3 = chain(3)
    with pytest.raises(NotMonotone):
        monomap(c3, c3, [2, 1, 0])


def test_closure_operators():
    c3 = chain(3)
    assert is_closure_operator(identity_map(c3)) is None
    assert is_closure_operator(monomap(c3, c3, [2, 2, 2])) is None
    # j(0)=1/2, j(1/2)=0 is not monotone; built unvalidated to reach the law checks
    assert is_closure_operator(MonoMap(c3, c3, (1, 0, 2))) == {"law": "inflationary", "x": 1, "j(x)": 0}
    j = MonoMap(c3, c3, (1, 1, 1))
    assert is_closure_operator(j) == {"law": "inflationary", "x": 2, "j(x)": 1}
    assert closure_operator(monomap(c3, c3, [1, 1, 2])).fixed_points() == [1, 2]


def test_fixpoints():
    c3 = chain(3)
    assert greatest_fixpoint(monomap(c3, c3, [0, 1, 1])) == 1
    assert greatest_fixpoint(identity_map(c3)) == c3.top
    assert least_fixpoint(identity_map(c3)) == c3.bottom
    assert least_fixpoint(monomap(c3, c3, [1, 1, 1])) == 1


def test_opposite():
    c3 = chain(3)
    op = opposite(c3)
    assert (op.bottom, op.top) == (2, 0)
    assert op.join([0, 1]) == 0
    assert opposite(op) == c3
    d = diamond()
    # the diamond is self-dual via bot<->top
    perm = [3, 1, 2, 0]
    assert np.array_equal(opposite(d).leq, d.leq[np.ix_(perm, perm)])


@given(st.integers(1, 6), st.data())
def test_chain_join_is_max(n, data):
    lat = chain(n)
    s = data.draw(st.lists(st.integers(0, n - 1), max_size=4))
    assert lat.join(s) == max(s, default=0)
    assert lat.meet(s) == min(s, default=n - 1)


@given(st.lists(st.integers(0, 3), min_size=4, max_size=4))
def test_adjunction_on_random_monotone_maps(table):
    c4 = chain(4)
    table = sorted(table)
    table[0] = 0
    g = right_adjoint(supmap(c4, c4, table))
    for x in range(4):
        for y in range(4):
            assert (table[x] <= y) == (x <= g(y))


def test_all_subsets_counts():
    assert len(list(all_subsets([0, 1, 2]))) == 8
