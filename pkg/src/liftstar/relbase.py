"""Finite Rel(Q): sets and Q-valued matrices, with the compact-closed structure.

Composition is written diagrammatically, ``compose(psi, chi)`` is "psi then chi":
``(psi . chi)(x, z) = join_y psi(x, y) * chi(y, z)``. Products are row-major:
the pair ``(x, y)`` of ``X x Y`` sits at index ``x * |Y| + y``.
"""
from __future__ import annotations

from dataclasses import dataclass
from itertools import product
from typing import Iterator, Sequence

import numpy as np

from .errors import ShapeMismatch, StructureNotInvertible
from .quantale import FinQuantale


@dataclass(frozen=True)
class FinSet:
    size: int
    labels: tuple = ()

    def __post_init__(self):
        if self.size < 0:
            raise ValueError("negative set size")
        if not self.labels:
            object.__setattr__(self, "labels", tuple(str(i) for i in range(self.size)))
        elif len(self.labels) != self.size:
            raise ValueError("label count does not match size")
        else:
            object.__setattr__(self, "labels", tuple(self.labels))

    @staticmethod
    def of(n: int) -> "FinSet":
        return FinSet(n)

    @staticmethod
    def unit() -> "FinSet":
        return FinSet(1, ("*",))

    def __len__(self):
        return self.size

    def __repr__(self):
        return f"FinSet({self.size})"


def tensor_obj(X: FinSet, Y: FinSet) -> FinSet:
    return FinSet(X.size * Y.size, tuple(f"({a},{b})" for a in X.labels for b in Y.labels))


#: in Rel(Q) the internal hom and the tensor share a carrier
hom_obj = tensor_obj


def dual_obj(X: FinSet) -> FinSet:
    """X* = X -o 0 with 0 the singleton."""
    return tensor_obj(X, FinSet.unit())


class QMat:
    """A morphism X -> Y of Rel(Q): an |X| x |Y| table of quantale indices."""

    __slots__ = ("dom", "cod", "q", "entries", "_key")

    def __init__(self, dom: FinSet, cod: FinSet, q: FinQuantale, entries):
        ent = np.array(entries, dtype=np.int64).reshape(dom.size, cod.size)
        if ent.size and (ent.min() < 0 or ent.max() >= q.n):
            raise ValueError("matrix entry out of the quantale's range")
        ent.setflags(write=False)
        self.dom, self.cod, self.q, self.entries = dom, cod, q, ent
        self._key = None

    def key(self):
        if self._key is None:
            self._key = (self.dom.size, self.cod.size, self.entries.tobytes())
        return self._key

    def __eq__(self, other):
        return isinstance(other, QMat) and self.q is other.q and self.key() == other.key()

    def __hash__(self):
        return hash(self.key())

    def __repr__(self):
        rows = [[self.q.label(int(v)) for v in row] for row in self.entries]
        return f"QMat({self.dom.size}->{self.cod.size}, {rows})"

    def __getitem__(self, xy):
        return int(self.entries[xy])


def _join_axis(q: FinQuantale, arr: np.ndarray, axis: int) -> np.ndarray:
    """Fold the lattice join along one axis of an index array."""
    arr = np.moveaxis(arr, axis, 0)
    acc = np.full(arr.shape[1:], q.bottom, dtype=np.int64)
    for sl in arr:
        acc = q.lat.jointab[acc, sl]
    return acc


def _meet_axis(q: FinQuantale, arr: np.ndarray, axis: int) -> np.ndarray:
    arr = np.moveaxis(arr, axis, 0)
    acc = np.full(arr.shape[1:], q.top, dtype=np.int64)
    for sl in arr:
        acc = q.lat.meettab[acc, sl]
    return acc


def qmatmul(q: FinQuantale, a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Sup-of-products matrix product on raw index arrays."""
    prod_ = q.mult[a[:, :, None], b[None, :, :]]
    return _join_axis(q, prod_, 1)


def _same_q(*ms: QMat):
    q = ms[0].q
    for m in ms[1:]:
        if m.q is not q and not m.q.same_as(q):
            raise ShapeMismatch("morphisms over different quantales")
    return q


def compose(psi: QMat, chi: QMat) -> QMat:
    """psi then chi."""
    if psi.cod.size != chi.dom.size:
        raise ShapeMismatch(f"cannot compose {psi.dom.size}->{psi.cod.size} with "
                            f"{chi.dom.size}->{chi.cod.size}")
    q = _same_q(psi, chi)
    return QMat(psi.dom, chi.cod, q, qmatmul(q, psi.entries, chi.entries))


def compose_all(*ms: QMat) -> QMat:
    out = ms[0]
    for m in ms[1:]:
        out = compose(out, m)
    return out


def identity(X: FinSet, q: FinQuantale) -> QMat:
    ent = np.full((X.size, X.size), q.bottom, dtype=np.int64)
    np.fill_diagonal(ent, q.unit)
    return QMat(X, X, q, ent)


def tensor_mor(psi: QMat, chi: QMat) -> QMat:
    """(psi (x) chi)((x,y),(x',y')) = psi(x,x') * chi(y,y')."""
    q = _same_q(psi, chi)
    a, b = psi.entries, chi.entries
    ent = q.mult[a[:, None, :, None], b[None, :, None, :]]
    ent = ent.reshape(a.shape[0] * b.shape[0], a.shape[1] * b.shape[1])
    return QMat(tensor_obj(psi.dom, chi.dom), tensor_obj(psi.cod, chi.cod), q, ent)


def converse(psi: QMat) -> QMat:
    return QMat(psi.cod, psi.dom, psi.q, psi.entries.T)


def hom_mor(f: QMat, g: QMat) -> QMat:
    """f -o g : (X' -o Y) -> (X -o Y') for f: X -> X', g: Y -> Y'."""
    return tensor_mor(converse(f), g)


def dual_mor(f: QMat) -> QMat:
    """f* = f -o 0 : Y* -> X*."""
    return hom_mor(f, identity(FinSet.unit(), f.q))


def graph(dom: FinSet, cod: FinSet, q: FinQuantale, mapping: Sequence[int]) -> QMat:
    """The relation {(x, m(x))} with value e on the graph and bottom elsewhere."""
    ent = np.full((dom.size, cod.size), q.bottom, dtype=np.int64)
    for x, y in enumerate(mapping):
        ent[x, y] = q.unit
    return QMat(dom, cod, q, ent)


def from_pairs(dom: FinSet, cod: FinSet, q: FinQuantale, pairs) -> QMat:
    """Boolean-style relation: value e on the listed pairs."""
    ent = np.full((dom.size, cod.size), q.bottom, dtype=np.int64)
    for x, y in pairs:
        ent[x, y] = q.unit
    return QMat(dom, cod, q, ent)


def invert(f: QMat) -> QMat:
    """Two-sided inverse of f, or StructureNotInvertible.

    The candidate g(y, x) = meet_x' (f(x', y) -o delta(x', x)) is the largest g with
    f . g <= id; it is returned only after both composites are checked to be identities.
    """
    q = f.q
    if f.dom.size != f.cod.size:
        raise StructureNotInvertible(f"{f.dom.size}->{f.cod.size} cannot be invertible",
                                     {"dom": f.dom.size, "cod": f.cod.size})
    n = f.dom.size
    delta = identity(f.dom, q).entries
    res = q.res[f.entries[:, :, None], delta[:, None, :]]   # [x', y, x]
    g = QMat(f.cod, f.dom, q, _meet_axis(q, res, 0))
    if compose(f, g) != identity(f.dom, q) or compose(g, f) != identity(f.cod, q):
        raise StructureNotInvertible("morphism has no two-sided inverse", {"size": n})
    return g


def is_invertible(f: QMat) -> bool:
    try:
        invert(f)
    except StructureNotInvertible:
        return False
    return True


# structural isomorphisms

@dataclass(frozen=True)
class StructIso:
    kind: str
    mat: QMat
    mapping: tuple

    def inverse(self) -> "StructIso":
        inv = [0] * len(self.mapping)
        for a, b in enumerate(self.mapping):
            inv[b] = a
        return StructIso(self.kind + "^-1", graph(self.mat.cod, self.mat.dom, self.mat.q, inv), tuple(inv))


def _pairs(*sizes):
    return product(*(range(s) for s in sizes))


def _idx(pairs_sizes):
    """Row-major index of nested pairs: [(value, size), ...] read left to right."""
    i = 0
    for v, s in pairs_sizes:
        i = i * s + v
    return i


def structural(kind: str, q: FinQuantale, *objs: FinSet) -> StructIso:
    """Canonical bijections of Rel(Q) as graph matrices.

    kinds: associator(X,Y,Z) ((x,y),z) -> (x,(y,z)); left_unitor(X) (*,x) -> x;
    right_unitor(X) (x,*) -> x; symmetry(X,Y) (x,y) -> (y,x);
    double_dual_j(X) x -> ((x,*),*); curry_iso(X,Y,Z) ((x,y),z) -> (y,(x,z)).
    """
    I = FinSet.unit()
    if kind == "associator":
        X, Y, Z = objs
        dom, cod = tensor_obj(tensor_obj(X, Y), Z), tensor_obj(X, tensor_obj(Y, Z))
        m = [0] * dom.size
        for x, y, z in _pairs(X.size, Y.size, Z.size):
            m[(x * Y.size + y) * Z.size + z] = x * (Y.size * Z.size) + y * Z.size + z
    elif kind == "left_unitor":
        (X,) = objs
        dom, cod = tensor_obj(I, X), X
        m = list(range(X.size))
    elif kind == "right_unitor":
        (X,) = objs
        dom, cod = tensor_obj(X, I), X
        m = list(range(X.size))
    elif kind == "symmetry":
        X, Y = objs
        dom, cod = tensor_obj(X, Y), tensor_obj(Y, X)
        m = [0] * dom.size
        for x, y in _pairs(X.size, Y.size):
            m[x * Y.size + y] = y * X.size + x
    elif kind == "double_dual_j":
        (X,) = objs
        dom, cod = X, dual_obj(dual_obj(X))
        m = list(range(X.size))
    elif kind == "curry_iso":
        X, Y, Z = objs
        dom = hom_obj(tensor_obj(X, Y), Z)
        cod = hom_obj(Y, hom_obj(X, Z))
        m = [0] * dom.size
        for x, y, z in _pairs(X.size, Y.size, Z.size):
            m[(x * Y.size + y) * Z.size + z] = y * (X.size * Z.size) + x * Z.size + z
    else:
        raise ValueError(f"unknown structural kind {kind!r}")
    return StructIso(kind, graph(dom, cod, q, m), tuple(m))


def ev_relation(X: FinSet, Y: FinSet, q: FinQuantale) -> QMat:
    """ev : X (x) (X -o Y) -> Y, value e on ((x,(x,y)), y)."""
    dom = tensor_obj(X, hom_obj(X, Y))
    ent = np.full((dom.size, Y.size), q.bottom, dtype=np.int64)
    for x, y in _pairs(X.size, Y.size):
        ent[x * (X.size * Y.size) + x * Y.size + y, y] = q.unit
    return QMat(dom, Y, q, ent)


def eta_relation(X: FinSet, Y: FinSet, q: FinQuantale) -> QMat:
    """eta : Y -> X -o (X (x) Y), value e on (y, (x,(x,y)))."""
    cod = hom_obj(X, tensor_obj(X, Y))
    ent = np.full((Y.size, cod.size), q.bottom, dtype=np.int64)
    for x, y in _pairs(X.size, Y.size):
        ent[y, x * (X.size * Y.size) + x * Y.size + y] = q.unit
    return QMat(Y, cod, q, ent)


# enumeration

def all_qmats(X: FinSet, Y: FinSet, q: FinQuantale, values: Sequence[int] | None = None) -> Iterator[QMat]:
    """Every matrix X -> Y with entries drawn from `values` (default: all of Q)."""
    vals = list(range(q.n)) if values is None else list(values)
    for ent in product(vals, repeat=X.size * Y.size):
        yield QMat(X, Y, q, np.array(ent, dtype=np.int64))


def count_qmats(X: FinSet, Y: FinSet, q: FinQuantale, values=None) -> int:
    return (q.n if values is None else len(values)) ** (X.size * Y.size)


def boolean_relations(X: FinSet, Y: FinSet, q: FinQuantale) -> Iterator[QMat]:
    """Ordinary relations, embedded with entries in {bottom, e}."""
    return all_qmats(X, Y, q, sorted({q.bottom, q.unit}))


def sample_qmats(X: FinSet, Y: FinSet, q: FinQuantale, limit: int, rng: np.random.Generator,
                 values=None) -> list[QMat]:
    """All matrices when there are at most `limit`, else identity-like ones plus a random sample."""
    if count_qmats(X, Y, q, values) <= limit:
        return list(all_qmats(X, Y, q, values))
    vals = np.array(list(range(q.n)) if values is None else list(values), dtype=np.int64)
    seen, out = set(), []
    base = [np.full((X.size, Y.size), q.bottom), np.full((X.size, Y.size), q.top)]
    if X.size == Y.size:
        base.append(identity(X, q).entries)
    for ent in base:
        m = QMat(X, Y, q, ent)
        if m not in seen:
            seen.add(m)
            out.append(m)
    tries = 0
    while len(out) < limit and tries < 50 * limit:
        tries += 1
        m = QMat(X, Y, q, rng.choice(vals, size=(X.size, Y.size)))
        if m not in seen:
            seen.add(m)
            out.append(m)
    return out
