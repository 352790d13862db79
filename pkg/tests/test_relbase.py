import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from liftstar.errors import ShapeMismatch, StructureNotInvertible
from liftstar.quantale import boolean, godel, lukasiewicz
from liftstar.relbase import (FinSet, QMat, all_qmats, boolean_relations, compose, compose_all, converse,
                              count_qmats, dual_obj, ev_relation, eta_relation, from_pairs, graph, hom_mor,
                              identity, invert, is_invertible, structural, tensor_mor, tensor_obj)

L3 = lukasiewicz(3)
B2 = boolean()
ONE, TWO = FinSet(1), FinSet(2)


def mats(q, X, Y):
    return st.lists(st.integers(0, q.n - 1), min_size=X.size * Y.size, max_size=X.size * Y.size).map(
        lambda e: QMat(X, Y, q, e))


def test_lukasiewicz_half_times_half():
    h = L3.index("1/2")
    m = QMat(ONE, ONE, L3, [[h]])
    assert compose(m, m).entries.tolist() == [[0]]


def test_boolean_matches_set_composition():
    X, Y, Z = FinSet(2), FinSet(3), FinSet(2)
    rng = np.random.default_rng(7)
    for _ in range(50):
        r = {(x, y) for x in range(2) for y in range(3) if rng.random() < 0.5}
        s = {(y, z) for y in range(3) for z in range(2) if rng.random() < 0.5}
        rs = {(x, z) for x, y in r for y2, z in s if y == y2}
        got = compose(from_pairs(X, Y, B2, r), from_pairs(Y, Z, B2, s))
        assert got == from_pairs(X, Z, B2, rs)


def test_composition_is_diagrammatic():
    f = graph(TWO, FinSet(3), B2, [2, 0])
    g = graph(FinSet(3), TWO, B2, [1, 1, 0])
    assert compose(f, g) == graph(TWO, TWO, B2, [0, 1])


def test_shape_mismatch():
    with pytest.raises(ShapeMismatch):
        compose(identity(TWO, L3), identity(ONE, L3))


@given(mats(L3, TWO, TWO), mats(L3, TWO, ONE), mats(L3, ONE, TWO))
def test_associative_and_unital(f, g, h):
    assert compose(compose(f, g), h) == compose(f, compose(g, h))
    assert compose(identity(TWO, L3), f) == f == compose(f, identity(TWO, L3))


@given(mats(L3, TWO, ONE), mats(L3, ONE, TWO))
def test_converse_reverses_composition(f, g):
    assert converse(compose(f, g)) == compose(converse(g), converse(f))
    assert converse(converse(f)) == f


@given(mats(L3, TWO, ONE), mats(L3, ONE, TWO), mats(L3, ONE, TWO), mats(L3, TWO, TWO))
def test_tensor_is_functorial(f, g, f2, g2):
    lhs = compose(tensor_mor(f, f2), tensor_mor(g, g2))
    assert lhs == tensor_mor(compose(f, g), compose(f2, g2))


def test_pentagon():
    W = X = Y = Z = TWO
    a = lambda *o: structural("associator", B2, *o).mat
    WX, YZ, XY = tensor_obj(W, X), tensor_obj(Y, Z), tensor_obj(X, Y)
    lhs = compose(a(WX, Y, Z), a(W, X, YZ))
    rhs = compose_all(tensor_mor(a(W, X, Y), identity(Z, B2)), a(W, XY, Z),
                      tensor_mor(identity(W, B2), a(X, Y, Z)))
    assert lhs == rhs


def test_symmetry_is_an_involution_and_unitors_agree():
    s = structural("symmetry", L3, TWO, FinSet(3))
    back = structural("symmetry", L3, FinSet(3), TWO)
    assert compose(s.mat, back.mat) == identity(tensor_obj(TWO, FinSet(3)), L3)
    assert s.inverse().mapping == back.mapping
    left = structural("left_unitor", L3, TWO).mat
    right = structural("right_unitor", L3, TWO).mat
    sym = structural("symmetry", L3, FinSet.unit(), TWO).mat
    assert compose(sym, right) == left


def test_double_dual_map_is_the_graph_x_to_xss():
    # J_X = {(x, ((x,*),*))}
    J = structural("double_dual_j", L3, FinSet(3))
    assert J.mat.cod.labels == ("((0,*),*)", "((1,*),*)", "((2,*),*)")
    assert J.mat.cod.size == dual_obj(dual_obj(FinSet(3))).size
    assert J.mapping == (0, 1, 2)
    assert is_invertible(J.mat)


@pytest.mark.parametrize("q", [B2, L3, godel(3)], ids=["B2", "L3", "G3"])
def test_triangle_identities(q):
    X, Y = TWO, TWO
    hXY = tensor_obj(X, Y)          # X -o Y shares the carrier of X (x) Y
    first = compose(eta_relation(X, hXY, q), hom_mor(identity(X, q), ev_relation(X, Y, q)))
    assert first == identity(hXY, q)
    Y1 = ONE
    second = compose(tensor_mor(identity(X, q), eta_relation(X, Y1, q)), ev_relation(X, tensor_obj(X, Y1), q))
    assert second == identity(tensor_obj(X, Y1), q)


def test_inverse():
    f = graph(TWO, TWO, L3, [1, 0])
    assert invert(f) == converse(f)
    with pytest.raises(StructureNotInvertible):
        invert(QMat(TWO, TWO, L3, [[2, 1], [0, 2]]))
    with pytest.raises(StructureNotInvertible):
        invert(QMat(TWO, ONE, L3, [[2], [2]]))


def test_enumeration_counts():
    assert count_qmats(TWO, TWO, L3) == 81
    assert len(list(all_qmats(TWO, TWO, L3))) == 81
    assert len(list(boolean_relations(TWO, TWO, L3))) == 16


@settings(max_examples=30)
@given(mats(L3, TWO, TWO))
def test_hom_mor_respects_identities(f):
    assert hom_mor(identity(TWO, L3), identity(ONE, L3)) == identity(TWO, L3)
    assert hom_mor(f, identity(ONE, L3)) == converse(f)
