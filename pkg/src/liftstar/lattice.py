"""Finite complete lattices as index carriers with a Boolean order matrix.

Elements are the integers ``0..n-1``. Binary joins and meets are tabulated once
at validation time, so every lattice operation downstream is a table lookup.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import reduce
from itertools import combinations
from typing import Iterable, Sequence

import numpy as np

from .errors import NoJoin, NoMeet, NotAPoset, NotMonotone, NotSupPreserving


def _least(leq: np.ndarray, down_count: np.ndarray, mask: np.ndarray):
    """Index of the least element of the subset `mask`, or None."""
    if not mask.any():
        return None
    cand = int(np.argmin(np.where(mask, down_count, np.iinfo(np.int64).max)))
    return cand if leq[cand][mask].all() else None


class FinLattice:
    """A validated finite complete lattice. Build through :func:`check_complete_lattice`."""

    def __init__(self, leq: np.ndarray, labels: Sequence[str], jointab: np.ndarray,
                 meettab: np.ndarray, bottom: int, top: int):
        self.leq = leq
        self.n = leq.shape[0]
        self.labels = tuple(labels)
        self.jointab = jointab
        self.meettab = meettab
        self.bottom = bottom
        self.top = top

    def __repr__(self):
        return f"FinLattice(n={self.n}, labels={list(self.labels)})"

    def __eq__(self, other):
        return isinstance(other, FinLattice) and np.array_equal(self.leq, other.leq)

    def __hash__(self):
        return hash(self.leq.tobytes())

    def le(self, a: int, b: int) -> bool:
        return bool(self.leq[a, b])

    def join(self, subset: Iterable[int]) -> int:
        return reduce(lambda a, b: int(self.jointab[a, b]), subset, self.bottom)

    def meet(self, subset: Iterable[int]) -> int:
        return reduce(lambda a, b: int(self.meettab[a, b]), subset, self.top)

    def label(self, a: int) -> str:
        return self.labels[a]

    def index(self, label: str) -> int:
        try:
            return self.labels.index(label)
        except ValueError:
            raise KeyError(f"no element labelled {label!r}") from None

    def elements(self) -> range:
        return range(self.n)

    def sublattice(self, members: Sequence[int]) -> "FinLattice":
        """Restrict the order to `members` (which must be closed enough to stay complete)."""
        idx = np.asarray(members, dtype=int)
        return check_complete_lattice(self.leq[np.ix_(idx, idx)], [self.labels[i] for i in members])


def check_complete_lattice(leq, labels: Sequence[str] | None = None) -> FinLattice:
    """Validate a candidate order matrix and tabulate joins and meets.

    Raises NotAPoset, NoJoin or NoMeet carrying the first offending pair/subset.
    """
    leq = np.array(leq, dtype=bool)
    if leq.ndim != 2 or leq.shape[0] != leq.shape[1]:
        raise ValueError(f"order matrix must be square, got shape {leq.shape}")
    n = leq.shape[0]
    if labels is None:
        labels = [str(i) for i in range(n)]
    if len(labels) != n:
        raise ValueError("label count does not match the carrier")
    if n == 0:
        raise NoJoin(())
    for i in range(n):
        if not leq[i, i]:
            raise NotAPoset((i, i), "reflexivity")
    both = leq & leq.T
    np.fill_diagonal(both, False)
    if both.any():
        i, j = map(int, np.argwhere(both)[0])
        raise NotAPoset((i, j), "antisymmetry")
    # transitivity: leq @ leq must stay inside leq
    comp = (leq.astype(np.int64) @ leq.astype(np.int64)) > 0
    bad = comp & ~leq
    if bad.any():
        i, k = map(int, np.argwhere(bad)[0])
        raise NotAPoset((i, k), "transitivity")
    leq.setflags(write=False)

    down_count = leq.sum(axis=0).astype(np.int64)
    up_count = leq.sum(axis=1).astype(np.int64)
    bottom = _least(leq, down_count, np.ones(n, dtype=bool))
    if bottom is None:
        raise NoJoin(())
    top = _least(leq.T, up_count, np.ones(n, dtype=bool))
    if top is None:
        raise NoMeet(())
    jointab = np.empty((n, n), dtype=np.int64)
    meettab = np.empty((n, n), dtype=np.int64)
    for i in range(n):
        for j in range(i, n):
            ub = leq[i] & leq[j]
            k = _least(leq, down_count, ub)
            if k is None:
                raise NoJoin((i, j))
            jointab[i, j] = jointab[j, i] = k
            lb = leq[:, i] & leq[:, j]
            m = _least(leq.T, up_count, lb)
            if m is None:
                raise NoMeet((i, j))
            meettab[i, j] = meettab[j, i] = m
    jointab.setflags(write=False)
    meettab.setflags(write=False)
    return FinLattice(leq, labels, jointab, meettab, bottom, top)


def from_order_pairs(labels: Sequence[str], pairs: Iterable[tuple[str, str]]) -> FinLattice:
    """Lattice whose order is the reflexive-transitive closure of the given (lower, upper) pairs."""
    pos = {lab: i for i, lab in enumerate(labels)}
    n = len(labels)
    leq = np.eye(n, dtype=bool)
    for a, b in pairs:
        leq[pos[a], pos[b]] = True
    for k in range(n):
        leq |= leq[:, [k]] & leq[[k], :]
    return check_complete_lattice(leq, labels)


def chain(n: int, labels: Sequence[str] | None = None) -> FinLattice:
    idx = np.arange(n)
    return check_complete_lattice(idx[:, None] <= idx[None, :], labels)


def diamond() -> FinLattice:
    return from_order_pairs(["bot", "a", "b", "top"],
                            [("bot", "a"), ("bot", "b"), ("a", "top"), ("b", "top")])


def opposite(lat: FinLattice) -> FinLattice:
    """Same carrier, reversed order; joins and meets swap."""
    return FinLattice(lat.leq.T, lat.labels, lat.meettab, lat.jointab, lat.top, lat.bottom)


@dataclass(frozen=True)
class MonoMap:
    """An order-preserving map between finite lattices, stored as an index table."""
    dom: FinLattice
    cod: FinLattice
    table: tuple

    def __post_init__(self):
        object.__setattr__(self, "table", tuple(int(v) for v in self.table))
        if len(self.table) != self.dom.n:
            raise ValueError("table length does not match the domain")

    def __call__(self, a: int) -> int:
        return self.table[a]

    def check(self):
        """Return None if monotone, else the offending pair."""
        for a in range(self.dom.n):
            for b in range(self.dom.n):
                if self.dom.leq[a, b] and not self.cod.leq[self.table[a], self.table[b]]:
                    return (a, b)
        return None

    def validated(self) -> "MonoMap":
        bad = self.check()
        if bad is not None:
            raise NotMonotone(f"not order-preserving at {bad}", witness={"pair": bad})
        return self


def monomap(dom: FinLattice, cod: FinLattice, table) -> MonoMap:
    return MonoMap(dom, cod, tuple(table)).validated()


def identity_map(lat: FinLattice) -> MonoMap:
    return MonoMap(lat, lat, tuple(range(lat.n)))


def sup_violation(f: MonoMap):
    """First join not preserved by f: the empty join or a pair. None if f preserves all joins.

    On a finite lattice, preserving the bottom and binary joins implies preserving every join.
    """
    if f(f.dom.bottom) != f.cod.bottom:
        return ()
    for a in range(f.dom.n):
        for b in range(a + 1, f.dom.n):
            if f(int(f.dom.jointab[a, b])) != f.cod.jointab[f(a), f(b)]:
                return (a, b)
    return None


class SupMap(MonoMap):
    """A join-preserving map (including the empty join)."""

    def validated(self) -> "SupMap":
        super().validated()
        bad = sup_violation(self)
        if bad is not None:
            raise NotSupPreserving(bad)
        return self


def supmap(dom: FinLattice, cod: FinLattice, table) -> SupMap:
    return SupMap(dom, cod, tuple(table)).validated()


def right_adjoint(f: MonoMap) -> MonoMap:
    """f*(y) = join{x | f(x) <= y}, checked against f(x) <= y  <=>  x <= f*(y)."""
    bad = sup_violation(f)
    if bad is not None:
        raise NotSupPreserving(bad)
    dom, cod = f.dom, f.cod
    table = [dom.join(x for x in range(dom.n) if cod.leq[f(x), y]) for y in range(cod.n)]
    g = MonoMap(cod, dom, tuple(table))
    for x in range(dom.n):
        for y in range(cod.n):
            if bool(cod.leq[f(x), y]) != bool(dom.leq[x, g(y)]):
                raise NotSupPreserving((x,), f"adjunction fails at x={x}, y={y}")
    return g


@dataclass(frozen=True)
class ClosureOp:
    """A closure operator: inflationary, idempotent, monotone endo-map."""
    map: MonoMap

    def __call__(self, a: int) -> int:
        return self.map(a)

    def fixed_points(self) -> list[int]:
        return [a for a in range(self.map.dom.n) if self.map(a) == a]


def is_closure_operator(j: MonoMap):
    """None when j is a closure operator, else a witness dict for the first failed law."""
    lat = j.dom
    if j.cod is not lat and j.cod != lat:
        raise ValueError("closure operators are endo-maps")
    for x in range(lat.n):
        if not lat.leq[x, j(x)]:
            return {"law": "inflationary", "x": x, "j(x)": j(x)}
    for x in range(lat.n):
        if j(j(x)) != j(x):
            return {"law": "idempotent", "x": x, "j(x)": j(x), "j(j(x))": j(j(x))}
    bad = j.check()
    if bad is not None:
        return {"law": "monotone", "pair": bad}
    return None


def closure_operator(j: MonoMap) -> ClosureOp:
    bad = is_closure_operator(j)
    if bad is not None:
        raise NotMonotone(f"not a closure operator: {bad}", witness=bad)
    return ClosureOp(j)


def kleene_iterate(step, start, max_steps: int | None = None):
    """Iterate `step` from `start` until stationary. Returns (value, iterations)."""
    x, k = start, 0
    while True:
        y = step(x)
        if y == x:
            return x, k
        x, k = y, k + 1
        if max_steps is not None and k > max_steps:
            raise RuntimeError("iteration did not stabilise; map is not monotone")


def greatest_fixpoint(f: MonoMap) -> int:
    """Greatest fixed point of a monotone endo-map, by descending iteration from the top."""
    return kleene_iterate(f, f.dom.top, f.dom.n)[0]


def least_fixpoint(f: MonoMap) -> int:
    """Least fixed point of a monotone endo-map, by ascending iteration from the bottom."""
    return kleene_iterate(f, f.dom.bottom, f.dom.n)[0]


def all_subsets(items: Sequence[int]):
    for r in range(len(items) + 1):
        yield from combinations(items, r)
