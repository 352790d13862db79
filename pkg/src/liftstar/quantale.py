"""Finite commutative unital quantales, residuals, and the double-negation nucleus."""
from __future__ import annotations

from dataclasses import dataclass
from itertools import product
from typing import Sequence

import numpy as np

from .errors import (InternalLawViolation, NotAssociative, NotBilinear, NotCommutative,
                     UnitFails)
from .lattice import (ClosureOp, FinLattice, MonoMap, all_subsets, chain, check_complete_lattice,
                      from_order_pairs, is_closure_operator)

#: above this carrier size bilinearity is checked on binary joins and the empty join only
EXHAUSTIVE_BILINEAR_MAX = 8


class FinQuantale:
    """A validated quantale. Build through :func:`check_quantale`."""

    def __init__(self, lat: FinLattice, unit: int, mult: np.ndarray, name: str = ""):
        self.lat = lat
        self.unit = unit
        self.mult = mult
        self.name = name
        n = lat.n
        res = np.empty((n, n), dtype=np.int64)
        for a in range(n):
            for b in range(n):
                res[a, b] = lat.join(c for c in range(n) if lat.leq[mult[a, c], b])
        res.setflags(write=False)
        self.res = res

    def __repr__(self):
        return f"FinQuantale({self.name or '?'}, n={self.n})"

    @property
    def n(self) -> int:
        return self.lat.n

    @property
    def bottom(self) -> int:
        return self.lat.bottom

    @property
    def top(self) -> int:
        return self.lat.top

    @property
    def labels(self) -> tuple:
        return self.lat.labels

    def le(self, a, b) -> bool:
        return bool(self.lat.leq[a, b])

    def mul(self, a, b) -> int:
        return int(self.mult[a, b])

    def residual(self, a, b) -> int:
        """a -o b, the largest c with a*c <= b."""
        return int(self.res[a, b])

    def join(self, elems) -> int:
        return self.lat.join(elems)

    def meet(self, elems) -> int:
        return self.lat.meet(elems)

    def index(self, label: str) -> int:
        return self.lat.index(label)

    def label(self, a: int) -> str:
        return self.lat.labels[a]

    def same_as(self, other: "FinQuantale") -> bool:
        return (self.lat == other.lat and self.unit == other.unit
                and np.array_equal(self.mult, other.mult))


def check_quantale(lat: FinLattice, unit: int, mult, name: str = "") -> FinQuantale:
    """Validate commutativity, associativity, the unit law and bilinearity.

    Raises the first failing law with its witness.
    """
    mult = np.array(mult, dtype=np.int64)
    n = lat.n
    if mult.shape != (n, n):
        raise ValueError(f"multiplication table must be {n}x{n}, got {mult.shape}")
    if mult.min() < 0 or mult.max() >= n:
        raise ValueError("multiplication table entries out of range")
    if not 0 <= unit < n:
        raise ValueError("unit out of range")
    for a in range(n):
        for b in range(a + 1, n):
            if mult[a, b] != mult[b, a]:
                raise NotCommutative(a, b)
    for a in range(n):
        if mult[unit, a] != a:
            raise UnitFails(a)
    for a, b, c in product(range(n), repeat=3):
        if mult[mult[a, b], c] != mult[a, mult[b, c]]:
            raise NotAssociative(a, b, c)
    if n <= EXHAUSTIVE_BILINEAR_MAX:
        subsets = list(all_subsets(list(range(n))))
    else:
        subsets = [()] + [(b, c) for b in range(n) for c in range(b + 1, n)]
    for a in range(n):
        for s in subsets:
            if mult[a, lat.join(s)] != lat.join(int(mult[a, x]) for x in s):
                raise NotBilinear(a, s)
    mult.setflags(write=False)
    return FinQuantale(lat, unit, mult, name)


def residuation_violation(q: FinQuantale):
    """First (a, b, c) where a*c <= b  <=>  c <= a-o b fails, else None."""
    for a, b, c in product(range(q.n), repeat=3):
        if q.le(q.mul(a, c), b) != q.le(c, q.residual(a, b)):
            return (a, b, c)
    return None


def is_dualizing(q: FinQuantale, omega: int):
    """None when (a -o w) -o w = a for all a; else the first witness."""
    for a in range(q.n):
        dn = q.residual(q.residual(a, omega), omega)
        if dn != a:
            return {"a": q.label(a), "double_negation": q.label(dn)}
    return None


def double_negation_nucleus(q: FinQuantale, omega: int) -> ClosureOp:
    """j(a) = (a -o w) -o w, checked as a closure operator and as a nucleus."""
    table = [q.residual(q.residual(a, omega), omega) for a in range(q.n)]
    j = MonoMap(q.lat, q.lat, tuple(table))
    bad = is_closure_operator(j)
    if bad is not None:
        raise InternalLawViolation(f"double negation is not a closure operator: {bad}", bad)
    for a, b in product(range(q.n), repeat=2):
        if not q.le(q.mul(j(a), j(b)), j(q.mul(a, b))):
            w = {"a": q.label(a), "b": q.label(b)}
            raise InternalLawViolation(f"nucleus law j(a)*j(b) <= j(a*b) fails at {w}", w)
    return ClosureOp(j)


@dataclass(frozen=True)
class GirardQuotient:
    quantale: FinQuantale
    embedding: tuple        # quotient index -> index in the original quantale
    omega: int              # omega as a quotient index
    nucleus: ClosureOp


def girard_quotient(q: FinQuantale, omega: int) -> GirardQuotient:
    """Quantale on the fixed points of the double-negation nucleus, with a*b := j(a*b)."""
    j = double_negation_nucleus(q, omega)
    fixed = j.fixed_points()
    pos = {a: i for i, a in enumerate(fixed)}
    if omega not in pos:
        raise InternalLawViolation("omega is not a fixed point of its nucleus", {"omega": q.label(omega)})
    lat = q.lat.sublattice(fixed)
    mult = [[pos[j(q.mul(a, b))] for b in fixed] for a in fixed]
    name = f"{q.name}_j{q.label(omega)}" if q.name else ""
    try:
        qj = check_quantale(lat, pos[j(q.unit)], mult, name)
    except Exception as exc:
        raise InternalLawViolation(f"quotient is not a quantale: {exc}", getattr(exc, "witness", None)) from exc
    bad = is_dualizing(qj, pos[omega])
    if bad is not None:
        raise InternalLawViolation(f"quotient is not Girard at omega: {bad}", bad)
    return GirardQuotient(qj, tuple(fixed), pos[omega], j)


# standard finite quantales

def boolean() -> FinQuantale:
    lat = chain(2, ["0", "1"])
    return check_quantale(lat, 1, [[0, 0], [0, 1]], "boolean")


def _chain_labels(n: int) -> list[str]:
    if n == 2:
        return ["0", "1"]
    return ["0"] + [f"{k}/{n - 1}" for k in range(1, n - 1)] + ["1"]


def godel(n: int = 3) -> FinQuantale:
    """n-element chain with min as multiplication."""
    lat = chain(n, _chain_labels(n))
    return check_quantale(lat, n - 1, [[min(a, b) for b in range(n)] for a in range(n)], f"godel{n}")


def lukasiewicz(n: int = 3) -> FinQuantale:
    """n-element chain {0, 1/(n-1), ..., 1} with a*b = max(0, a+b-1)."""
    lat = chain(n, _chain_labels(n))
    top = n - 1
    mult = [[max(0, a + b - top) for b in range(n)] for a in range(n)]
    return check_quantale(lat, top, mult, f"lukasiewicz{n}")


def max_chain3() -> FinQuantale:
    """3-chain with a*b = max(a, b) on nonzero elements and 0 absorbing; unit is the middle element."""
    lat = chain(3, ["0", "1/2", "1"])
    mult = [[0 if 0 in (a, b) else max(a, b) for b in range(3)] for a in range(3)]
    return check_quantale(lat, 1, mult, "maxchain3")


def powerset_z2() -> FinQuantale:
    """Subsets of Z/2 under inclusion with A*B = {a+b}; unit {0}."""
    subsets = [frozenset(), frozenset({0}), frozenset({1}), frozenset({0, 1})]
    labels = ["{}", "{0}", "{1}", "{0,1}"]
    leq = [[a <= b for b in subsets] for a in subsets]
    lat = check_complete_lattice(leq, labels)
    mult = [[subsets.index(frozenset((x + y) % 2 for x in a for y in b)) for b in subsets] for a in subsets]
    return check_quantale(lat, 1, mult, "powerset_z2")


def from_tables(labels: Sequence[str], order_pairs, unit: str, mult_labels, name: str = "") -> FinQuantale:
    lat = from_order_pairs(labels, order_pairs)
    pos = {lab: i for i, lab in enumerate(labels)}
    mult = [[pos[v] for v in row] for row in mult_labels]
    return check_quantale(lat, pos[unit], mult, name)
