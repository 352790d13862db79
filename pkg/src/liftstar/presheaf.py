"""Lattice-valued monoidal functors on Rel(Q), their three bundled instances,
and checkers for functoriality, monoidality and lax (extra)naturality.

A presheaf hands out one :class:`Fiber` per object size. Fiber elements are plain
hashable Python values:

* powq  : tuple of quantale indices, one per point of X;
* nuts  : int bitmask over the 2^|X| subsets of X (bit A set iff A is in the upset);
* powerset (orth, representation): frozenset of elements of an underlying fiber.
"""
from __future__ import annotations

from functools import lru_cache, reduce
from itertools import combinations, product
from typing import Callable, Iterable, Iterator

import numpy as np

from .errors import CarrierTooLarge, InternalLawViolation, UnsupportedFunctor
from .lattice import FinLattice, MonoMap, check_complete_lattice, right_adjoint
from .laws import Budget, Checker, LawContext, Verdict, law
from .quantale import FinQuantale, boolean
from .relbase import (FinSet, QMat, all_qmats, compose, count_qmats, graph, identity, sample_qmats,
                      structural, tensor_mor, tensor_obj)


# fibers

class Fiber:
    """One lattice Q(X). Subclasses supply the order and the join; the rest is derived."""

    size: int = 0                         # |X|

    def leq(self, a, b) -> bool:
        raise NotImplementedError

    def join(self, elems: Iterable):
        raise NotImplementedError

    def meet(self, elems: Iterable):
        raise NotImplementedError

    @property
    def bottom(self):
        raise NotImplementedError

    @property
    def top(self):
        raise NotImplementedError

    def count(self) -> int | None:
        """Number of elements, or None when unknown without enumeration."""
        raise NotImplementedError

    def elements(self) -> list:
        raise NotImplementedError

    def generators(self) -> list:
        """A join-dense family: every element is the join of the generators below it."""
        raise NotImplementedError

    def random(self, rng: np.random.Generator):
        raise NotImplementedError

    def show(self, a) -> str:
        return str(a)

    def to_json(self, a):
        raise NotImplementedError

    def from_json(self, v):
        raise NotImplementedError

    # derived

    def enumerable(self, limit: int) -> bool:
        c = self.count()
        return c is not None and c <= limit

    def sample(self, limit: int, rng: np.random.Generator) -> tuple[list, bool]:
        """All elements when there are at most `limit`, else a deterministic sample.

        Returns (elements, exhaustive).
        """
        if self.enumerable(limit):
            return self.elements(), True
        out, seen = [], set()
        for a in [self.bottom, self.top] + self.generators()[: max(0, limit // 4)]:
            if a not in seen:
                seen.add(a)
                out.append(a)
        tries = 0
        while len(out) < limit and tries < 20 * limit:
            tries += 1
            a = self.random(rng)
            if a not in seen:
                seen.add(a)
                out.append(a)
        return out, False

    def materialize(self) -> tuple[FinLattice, list, dict]:
        """The fiber as a :class:`FinLattice` plus the element list and its inverse."""
        elems = self.elements()
        pos = {a: i for i, a in enumerate(elems)}
        leq = [[self.leq(a, b) for b in elems] for a in elems]
        lat = check_complete_lattice(leq, [self.show(a) for a in elems])
        return lat, elems, pos

    def join_of_below(self, pred: Callable) -> object:
        """Join of the generators satisfying `pred` (sound for down-closed, join-closed predicates)."""
        return self.join(g for g in self.generators() if pred(g))


class PowqFiber(Fiber):
    """Q^X with the pointwise order."""

    def __init__(self, q: FinQuantale, size: int):
        self.q, self.size = q, size

    def leq(self, a, b) -> bool:
        L = self.q.lat.leq
        return all(L[x, y] for x, y in zip(a, b))

    def join(self, elems):
        jt = self.q.lat.jointab
        return reduce(lambda a, b: tuple(int(jt[x, y]) for x, y in zip(a, b)), elems, self.bottom)

    def meet(self, elems):
        mt = self.q.lat.meettab
        return reduce(lambda a, b: tuple(int(mt[x, y]) for x, y in zip(a, b)), elems, self.top)

    @property
    def bottom(self):
        return (self.q.bottom,) * self.size

    @property
    def top(self):
        return (self.q.top,) * self.size

    def count(self):
        return self.q.n ** self.size

    def elements(self):
        return [tuple(t) for t in product(range(self.q.n), repeat=self.size)]

    def generators(self):
        bot = self.q.bottom
        out = []
        for x in range(self.size):
            for v in range(self.q.n):
                if v != bot:
                    g = [bot] * self.size
                    g[x] = v
                    out.append(tuple(g))
        return out

    def random(self, rng):
        return tuple(int(v) for v in rng.integers(0, self.q.n, size=self.size))

    def show(self, a):
        return "(" + ",".join(self.q.label(v) for v in a) + ")"

    def to_json(self, a):
        return [self.q.label(v) for v in a]

    def from_json(self, v):
        if len(v) != self.size:
            raise ValueError(f"expected {self.size} entries, got {len(v)}")
        return tuple(self.q.index(s) for s in v)


@lru_cache(maxsize=None)
def _low_masks(n: int) -> tuple:
    """For each point i, the bitmask of subset positions that do not contain i."""
    N = 1 << n
    return tuple(sum(1 << s for s in range(N) if not s >> i & 1) for i in range(n))


def upclose(mask: int, n: int) -> int:
    """Smallest upset of P(n) containing the subsets flagged in `mask`."""
    for i, low in enumerate(_low_masks(n)):
        mask |= (mask & low) << (1 << i)
    return mask


def _bits(mask: int) -> Iterator[int]:
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


def minimal_members(mask: int, n: int | None = None) -> list[int]:
    """Minimal subsets of an upset given as a bitmask over P(n)."""
    if n is None:
        n = max(0, (mask.bit_length() - 1).bit_length())
    # in an upset, A is non-minimal iff A minus some single point is still a member
    above = 0
    for i, low in enumerate(_low_masks(n)):
        above |= (mask & low) << (1 << i)
    return list(_bits(mask & ~above))


@lru_cache(maxsize=None)
def _all_upsets(n: int) -> tuple:
    if n == 0:
        return (0, 1)
    prev = _all_upsets(n - 1)
    half = 1 << (n - 1)
    # an upset splits into U0 (sets without point n-1) and U1 (with it), U0 <= U1
    return tuple(u0 | (u1 << half) for u1 in prev for u0 in prev if u0 & ~u1 == 0)


#: |UP(P(n))| for n = 0..5, used to answer count() without enumerating
_UPSET_COUNTS = (2, 3, 6, 20, 168, 7581)


class NutsFiber(Fiber):
    """Upward-closed families of subsets of X, ordered by inclusion."""

    def __init__(self, size: int, bound: int = 4):
        self.size, self.bound = size, bound

    def leq(self, a, b):
        return a & ~b == 0

    def join(self, elems):
        return reduce(lambda a, b: a | b, elems, 0)

    def meet(self, elems):
        return reduce(lambda a, b: a & b, elems, self.top)

    @property
    def bottom(self):
        return 0

    @property
    def top(self):
        return (1 << (1 << self.size)) - 1

    def count(self):
        return _UPSET_COUNTS[self.size] if self.size < len(_UPSET_COUNTS) else None

    def elements(self):
        if self.size > self.bound:
            raise CarrierTooLarge(f"upsets of P(X) with |X|={self.size} exceed the bound {self.bound}",
                                  {"size": self.size, "bound": self.bound})
        return list(_all_upsets(self.size))

    def generators(self):
        return [upclose(1 << s, self.size) for s in range(1 << self.size)]

    def random(self, rng):
        N = 1 << self.size
        k = int(rng.integers(0, 4))
        picks = rng.integers(0, N, size=k)
        return upclose(sum(1 << int(s) for s in set(picks.tolist())), self.size)

    def _fmt(self, s: int) -> str:
        return "{" + ",".join(str(i) for i in range(self.size) if s >> i & 1) + "}"

    def show(self, a):
        return "up[" + " ".join(self._fmt(s) for s in minimal_members(a, self.size)) + "]"

    def to_json(self, a):
        return [[i for i in range(self.size) if s >> i & 1] for s in minimal_members(a, self.size)]

    def from_json(self, v):
        mask = 0
        for members in v:
            s = 0
            for i in members:
                if not 0 <= i < self.size:
                    raise ValueError(f"point {i} outside a {self.size}-element set")
                s |= 1 << i
            mask |= 1 << s
        return upclose(mask, self.size)


class PowersetFiber(Fiber):
    """All subsets of an underlying fiber's carrier, ordered by inclusion."""

    def __init__(self, base: Fiber, bound: int = 12):
        self.base, self.size, self.bound = base, base.size, bound
        self._points = None

    def points(self) -> list:
        if self._points is None:
            c = self.base.count()
            if c is None or c > 64:
                raise CarrierTooLarge(f"underlying carrier too large to list ({c})", {"count": c})
            self._points = self.base.elements()
        return self._points

    def leq(self, a, b):
        return a <= b

    def join(self, elems):
        return frozenset().union(*elems)

    def meet(self, elems):
        return reduce(lambda a, b: a & b, elems, self.top)

    @property
    def bottom(self):
        return frozenset()

    @property
    def top(self):
        return frozenset(self.points())

    def count(self):
        c = self.base.count()
        return None if c is None else 2 ** c

    def elements(self):
        pts = self.points()
        if len(pts) > self.bound:
            raise CarrierTooLarge(f"powerset of {len(pts)} points exceeds the bound 2^{self.bound}",
                                  {"points": len(pts), "bound": self.bound})
        return [frozenset(c) for r in range(len(pts) + 1) for c in combinations(pts, r)]

    def generators(self):
        return [frozenset([p]) for p in self.points()]

    def random(self, rng):
        pts = self.points()
        keep = rng.random(len(pts)) < 0.5
        return frozenset(p for p, k in zip(pts, keep) if k)

    def show(self, a):
        return "{" + " ".join(sorted(self.base.show(p) for p in a)) + "}"

    def to_json(self, a):
        return sorted((self.base.to_json(p) for p in a), key=lambda v: json_key(v))

    def from_json(self, v):
        return frozenset(self.base.from_json(p) for p in v)


def json_key(v) -> str:
    import json
    return json.dumps(v, sort_keys=True)


# presheaves

class Presheaf:
    """A monoidal functor Q: Rel(base_q) -> SLatt, given by fibers, action, unit and mu."""

    name = "presheaf"
    base_q: FinQuantale
    mu_natural = True
    max_points: int | None = None     # largest base set the fibers can represent cheaply

    def __init__(self):
        self._fibers: dict[int, Fiber] = {}

    def fiber(self, X) -> Fiber:
        n = X if isinstance(X, int) else X.size
        f = self._fibers.get(n)
        if f is None:
            f = self._fibers[n] = self._make_fiber(n)
        return f

    def _make_fiber(self, n: int) -> Fiber:
        raise NotImplementedError

    def act(self, f: QMat, a):
        raise NotImplementedError

    def unit(self):
        raise NotImplementedError

    def mu(self, X: FinSet, Y: FinSet, a, b):
        raise NotImplementedError

    def iota_closed(self, X: FinSet, Y: FinSet, a, c):
        """Closed-form internal hom when the instance has one, else None."""
        return None

    def act_radj(self, f: QMat, b):
        """Right adjoint of Q(f) at b: the join of everything Q(f) sends below b."""
        src = self.fiber(f.dom)
        return src.join_of_below(lambda g: self.fiber(f.cod).leq(self.act(f, g), b))

    def describe(self) -> dict:
        return {"instance": self.name, "base": self.base_q.name}


class PowqPresheaf(Presheaf):
    """X |-> Q^X, Q(psi)(a)(y) = join_x a(x) * psi(x, y), mu(a,b)(x,y) = a(x) * b(y), u = (e)."""

    name = "powq"

    def __init__(self, q: FinQuantale, base: str = "relq"):
        super().__init__()
        self.q = q
        self.base = base
        if base == "relq":
            self.base_q = q
            self._lift_entry = None
        elif base == "rel":
            self.base_q = boolean()
            self._lift_entry = np.array([q.bottom, q.unit], dtype=np.int64)
        else:
            raise ValueError(f"unknown base {base!r} (expected 'relq' or 'rel')")

    def describe(self):
        return {"instance": self.name, "quantale": self.q.name, "base": self.base}

    def _make_fiber(self, n):
        return PowqFiber(self.q, n)

    def _entries(self, f: QMat) -> np.ndarray:
        return f.entries if self._lift_entry is None else self._lift_entry[f.entries]

    def act(self, f, a):
        q = self.q
        if len(a) != f.dom.size:
            raise ValueError("element does not live over the morphism's domain")
        if f.dom.size == 0:
            return (q.bottom,) * f.cod.size
        prod_ = q.mult[np.asarray(a, dtype=np.int64)[:, None], self._entries(f)]
        acc = prod_[0]
        for row in prod_[1:]:
            acc = q.lat.jointab[acc, row]
        return tuple(int(v) for v in acc)

    def act_radj(self, f, b):
        """Q(f)^*(b)(x) = meet_y f(x, y) -o b(y)."""
        q = self.q
        if f.cod.size == 0:
            return (q.top,) * f.dom.size
        r = q.res[self._entries(f), np.asarray(b, dtype=np.int64)[None, :]]
        acc = r[:, 0]
        for k in range(1, r.shape[1]):
            acc = q.lat.meettab[acc, r[:, k]]
        return tuple(int(v) for v in acc)

    def unit(self):
        return (self.q.unit,)

    def mu(self, X, Y, a, b):
        m = self.q.mult
        return tuple(int(m[x, y]) for x in a for y in b)

    def iota_closed(self, X, Y, a, c):
        r = self.q.res
        return tuple(int(r[x, y]) for x in a for y in c)


class NutsPresheaf(Presheaf):
    """Upsets of P(X) over Rel: UP(R)(a) = up{R#(A) | A in a}, mu(a,b) = up{A x B}."""

    name = "nuts"

    #: upsets of P(n) are 2^n-bit masks; beyond 16 points that stops being cheap
    max_points = 16

    def __init__(self, bound: int = 4):
        super().__init__()
        self.base_q = boolean()
        self.bound = bound

    def _make_fiber(self, n):
        return NutsFiber(n, self.bound)

    @staticmethod
    def image_table(f: QMat) -> list[int]:
        """R#(A) for every subset A of the domain, as bitmasks."""
        e = f.q.unit
        rows = [sum(1 << y for y in range(f.cod.size) if f.entries[x, y] == e) for x in range(f.dom.size)]
        img = [0] * (1 << f.dom.size)
        for A in range(1, 1 << f.dom.size):
            low = (A & -A).bit_length() - 1
            img[A] = img[A & (A - 1)] | rows[low]
        return img

    def act(self, f, a):
        # R# is monotone, so the image upset is generated by the images of minimal members
        e = f.q.unit
        rows = [sum(1 << y for y in range(f.cod.size) if f.entries[x, y] == e) for x in range(f.dom.size)]
        out = 0
        for A in minimal_members(a, f.dom.size):
            img = 0
            for x in _bits(A):
                img |= rows[x]
            out |= 1 << img
        return upclose(out, f.cod.size)

    def unit(self):
        return 0b10

    @staticmethod
    def product_subset(A: int, B: int, ny: int) -> int:
        out = 0
        for x in _bits(A):
            out |= B << (x * ny)
        return out

    def mu(self, X, Y, a, b):
        out = 0
        for A in minimal_members(a, X.size):
            for B in minimal_members(b, Y.size):
                out |= 1 << self.product_subset(A, B, Y.size)
        return upclose(out, X.size * Y.size)


class PowersetPresheaf(Presheaf):
    """P composed with the underlying-set functor: subsets of an inner presheaf's fibers."""

    def __init__(self, inner: Presheaf, bound: int = 12, name: str = "orth"):
        super().__init__()
        self.inner = inner
        self.base_q = inner.base_q
        self.bound = bound
        self.name = name

    def describe(self):
        return {"instance": self.name, "inner": self.inner.describe()}

    def _make_fiber(self, n):
        return PowersetFiber(self.inner.fiber(n), self.bound)

    def act(self, f, a):
        return frozenset(self.inner.act(f, p) for p in a)

    def unit(self):
        return frozenset([self.inner.unit()])

    def mu(self, X, Y, a, b):
        return frozenset(self.inner.mu(X, Y, s, t) for s in a for t in b)


def powq_presheaf(q: FinQuantale, base: str = "relq") -> PowqPresheaf:
    return PowqPresheaf(q, base)


def nuts_presheaf(bound: int = 4) -> NutsPresheaf:
    return NutsPresheaf(bound)


def orth_presheaf(q: FinQuantale, base: str = "relq", bound: int = 12) -> PowersetPresheaf:
    """P(hom(I, -)): in Rel(Q) a global element I -> X is exactly a vector in Q^X."""
    return PowersetPresheaf(PowqPresheaf(q, base), bound, "orth")


def powerset_of(inner: Presheaf, bound: int = 12) -> PowersetPresheaf:
    return PowersetPresheaf(inner, bound, "P." + inner.name)


# composition with an endofunctor of the base

class Endofunctor:
    """identity | constant A | A x -, with the monoidal data mu^F : FX (x) FY -> F(X (x) Y), u^F : I -> FI."""

    def __init__(self, kind: str, A: FinSet | None = None):
        if kind not in ("identity", "constant", "product"):
            raise UnsupportedFunctor(f"unsupported endofunctor {kind!r}", {"kind": kind})
        if kind != "identity" and A is None:
            raise UnsupportedFunctor(f"{kind} functor needs a parameter object", {"kind": kind})
        self.kind, self.A = kind, A

    def describe(self) -> dict:
        return {"kind": self.kind, **({"A": self.A.size} if self.A is not None else {})}

    def obj(self, X: FinSet) -> FinSet:
        if self.kind == "identity":
            return X
        if self.kind == "constant":
            return self.A
        return tensor_obj(self.A, X)

    def mor(self, f: QMat) -> QMat:
        if self.kind == "identity":
            return f
        if self.kind == "constant":
            return identity(self.A, f.q)
        return tensor_mor(identity(self.A, f.q), f)

    def _merge(self, q) -> QMat:
        """The diagonal relation A (x) A -> A, (a, a) |-> a."""
        A = self.A
        return graph_partial(tensor_obj(A, A), A, q, {a * A.size + a: a for a in range(A.size)})

    def mu_F(self, X: FinSet, Y: FinSet, q: FinQuantale) -> QMat:
        if self.kind == "identity":
            return identity(tensor_obj(X, Y), q)
        if self.kind == "constant":
            return self._merge(q)
        A = self.A
        dom = tensor_obj(tensor_obj(A, X), tensor_obj(A, Y))
        cod = tensor_obj(A, tensor_obj(X, Y))
        m = {}
        for a, x, y in product(range(A.size), range(X.size), range(Y.size)):
            m[(a * X.size + x) * (A.size * Y.size) + a * Y.size + y] = a * (X.size * Y.size) + x * Y.size + y
        return graph_partial(dom, cod, q, m)

    def u_F(self, q: FinQuantale) -> QMat:
        I = FinSet.unit()
        if self.kind == "identity":
            return identity(I, q)
        cod = self.obj(I)
        return QMat(I, cod, q, np.full((1, cod.size), q.unit, dtype=np.int64))


def graph_partial(dom: FinSet, cod: FinSet, q: FinQuantale, mapping: dict) -> QMat:
    ent = np.full((dom.size, cod.size), q.bottom, dtype=np.int64)
    for x, y in mapping.items():
        ent[x, y] = q.unit
    return QMat(dom, cod, q, ent)


class ComposedPresheaf(Presheaf):
    """Q o F with mu^{QF} = Q(mu^F) o mu^Q and u^{QF} = Q(u^F)(u)."""

    def __init__(self, inner: Presheaf, F: Endofunctor):
        super().__init__()
        self.inner, self.F = inner, F
        self.base_q = inner.base_q
        self.name = f"{inner.name}.{F.kind}"

    def describe(self):
        return {"instance": self.name, "inner": self.inner.describe(), "functor": self.F.describe()}

    def fiber(self, X):
        n = X if isinstance(X, int) else X.size
        return self.inner.fiber(self.F.obj(FinSet(n)).size)

    def act(self, f, a):
        return self.inner.act(self.F.mor(f), a)

    def unit(self):
        return self.inner.act(self.F.u_F(self.base_q), self.inner.unit())

    def mu(self, X, Y, a, b):
        FX, FY = self.F.obj(X), self.F.obj(Y)
        return self.inner.act(self.F.mu_F(X, Y, self.base_q), self.inner.mu(FX, FY, a, b))


def compose_with_endofunctor(Q: Presheaf, F: Endofunctor | str, A: FinSet | int | None = None) -> Presheaf:
    if isinstance(F, str):
        F = Endofunctor(F, FinSet(A) if isinstance(A, int) else A)
    if F.kind == "identity":
        return Q
    return ComposedPresheaf(Q, F)


# laws on a single presheaf

def _sh(ctx, X, a, key="Q"):
    return ctx.presheaf_for(key).fiber(X.size).show(a)


@law("functor.identity", "Q(id_X)(a) = a", "=", X="set", a=("elt", "X"))
def _law_functor_id(ctx, X, a):
    Q = ctx.presheaf
    lhs = Q.act(identity(X, ctx.base_q), a)
    return lhs == a, _sh(ctx, X, lhs), _sh(ctx, X, a)


@law("functor.compose", "Q(f . g)(a) = Q(g)(Q(f)(a))", "=",
     X="set", Y="set", Z="set", f="mat", g="mat", a=("elt", "X"))
def _law_functor_comp(ctx, X, Y, Z, f, g, a):
    Q = ctx.presheaf
    lhs = Q.act(compose(f, g), a)
    rhs = Q.act(g, Q.act(f, a))
    return lhs == rhs, _sh(ctx, Z, lhs), _sh(ctx, Z, rhs)


@law("functor.sup", "Q(f)(a v b) = Q(f)(a) v Q(f)(b) and Q(f)(bottom) = bottom", "=",
     X="set", Y="set", f="mat", a=("elt", "X"), b=("elt", "X"))
def _law_functor_sup(ctx, X, Y, f, a, b):
    Q = ctx.presheaf
    FX, FY = Q.fiber(X), Q.fiber(Y)
    if Q.act(f, FX.bottom) != FY.bottom:
        return False, _sh(ctx, Y, Q.act(f, FX.bottom)), _sh(ctx, Y, FY.bottom)
    lhs = Q.act(f, FX.join([a, b]))
    rhs = FY.join([Q.act(f, a), Q.act(f, b)])
    return lhs == rhs, _sh(ctx, Y, lhs), _sh(ctx, Y, rhs)


@law("mu.natural", "Q(f (x) g)(mu(a, b)) = mu(Q(f)(a), Q(g)(b))", "=",
     X="set", Y="set", X2="set", Y2="set", f="mat", g="mat", a=("elt", "X"), b=("elt", "Y"))
def _law_mu_natural(ctx, X, Y, X2, Y2, f, g, a, b):
    Q = ctx.presheaf
    lhs = Q.act(tensor_mor(f, g), Q.mu(X, Y, a, b))
    rhs = Q.mu(X2, Y2, Q.act(f, a), Q.act(g, b))
    XY = tensor_obj(X2, Y2)
    return lhs == rhs, _sh(ctx, XY, lhs), _sh(ctx, XY, rhs)


@law("mu.lax", "Q(f (x) g)(mu(a, b)) <= mu(Q(f)(a), Q(g)(b))", "<=",
     X="set", Y="set", X2="set", Y2="set", f="mat", g="mat", a=("elt", "X"), b=("elt", "Y"))
def _law_mu_lax(ctx, X, Y, X2, Y2, f, g, a, b):
    Q = ctx.presheaf
    lhs = Q.act(tensor_mor(f, g), Q.mu(X, Y, a, b))
    rhs = Q.mu(X2, Y2, Q.act(f, a), Q.act(g, b))
    XY = tensor_obj(X2, Y2)
    return Q.fiber(XY).leq(lhs, rhs), _sh(ctx, XY, lhs), _sh(ctx, XY, rhs)


@law("mu.bilinear", "mu(a v a', b) = mu(a, b) v mu(a', b), mu(b, a v a') likewise, mu(bottom, b) = bottom", "=",
     X="set", Y="set", a=("elt", "X"), a2=("elt", "X"), b=("elt", "Y"))
def _law_mu_bilinear(ctx, X, Y, a, a2, b):
    Q = ctx.presheaf
    FX, FXY, FYX = Q.fiber(X), Q.fiber(tensor_obj(X, Y)), Q.fiber(tensor_obj(Y, X))
    XY, YX = tensor_obj(X, Y), tensor_obj(Y, X)
    pairs = [
        (Q.mu(X, Y, FX.join([a, a2]), b), FXY.join([Q.mu(X, Y, a, b), Q.mu(X, Y, a2, b)]), XY),
        (Q.mu(Y, X, b, FX.join([a, a2])), FYX.join([Q.mu(Y, X, b, a), Q.mu(Y, X, b, a2)]), YX),
        (Q.mu(X, Y, FX.bottom, b), FXY.bottom, XY),
        (Q.mu(Y, X, b, FX.bottom), FYX.bottom, YX),
    ]
    for lhs, rhs, Z in pairs:
        if lhs != rhs:
            return False, _sh(ctx, Z, lhs), _sh(ctx, Z, rhs)
    return True, _sh(ctx, XY, pairs[0][0]), _sh(ctx, XY, pairs[0][1])


@law("monoidal.left_unitor", "Q(lambda)(mu(u, a)) = a", "=", X="set", a=("elt", "X"))
def _law_left_unitor(ctx, X, a):
    Q = ctx.presheaf
    I = FinSet.unit()
    lhs = Q.act(structural("left_unitor", ctx.base_q, X).mat, Q.mu(I, X, Q.unit(), a))
    return lhs == a, _sh(ctx, X, lhs), _sh(ctx, X, a)


@law("monoidal.right_unitor", "Q(rho)(mu(a, u)) = a", "=", X="set", a=("elt", "X"))
def _law_right_unitor(ctx, X, a):
    Q = ctx.presheaf
    I = FinSet.unit()
    lhs = Q.act(structural("right_unitor", ctx.base_q, X).mat, Q.mu(X, I, a, Q.unit()))
    return lhs == a, _sh(ctx, X, lhs), _sh(ctx, X, a)


@law("monoidal.associator", "Q(assoc)(mu(mu(a, b), c)) = mu(a, mu(b, c))", "=",
     X="set", Y="set", Z="set", a=("elt", "X"), b=("elt", "Y"), c=("elt", "Z"))
def _law_assoc(ctx, X, Y, Z, a, b, c):
    Q = ctx.presheaf
    XY, YZ = tensor_obj(X, Y), tensor_obj(Y, Z)
    lhs = Q.act(structural("associator", ctx.base_q, X, Y, Z).mat, Q.mu(XY, Z, Q.mu(X, Y, a, b), c))
    rhs = Q.mu(X, YZ, a, Q.mu(Y, Z, b, c))
    W = tensor_obj(X, YZ)
    return lhs == rhs, _sh(ctx, W, lhs), _sh(ctx, W, rhs)


@law("monoidal.symmetry", "Q(sigma)(mu(a, b)) = mu(b, a)", "=",
     X="set", Y="set", a=("elt", "X"), b=("elt", "Y"))
def _law_symmetry(ctx, X, Y, a, b):
    Q = ctx.presheaf
    lhs = Q.act(structural("symmetry", ctx.base_q, X, Y).mat, Q.mu(X, Y, a, b))
    rhs = Q.mu(Y, X, b, a)
    YX = tensor_obj(Y, X)
    return lhs == rhs, _sh(ctx, YX, lhs), _sh(ctx, YX, rhs)


def fits(Q: Presheaf, points: int) -> bool:
    """Whether fibers over a set with `points` points are within the instance's size limit."""
    return Q.max_points is None or points <= Q.max_points


def objects(budget: Budget, min_size: int = 0) -> list[FinSet]:
    return [FinSet(n) for n in range(min_size, budget.max_obj + 1)]


def homs(X: FinSet, Y: FinSet, q: FinQuantale, budget: Budget, rng) -> tuple[list[QMat], bool]:
    ms = sample_qmats(X, Y, q, budget.max_morphisms, rng)
    return ms, count_qmats(X, Y, q) <= budget.max_morphisms


def check_presheaf(Q: Presheaf, budget: Budget = Budget(), ctx: LawContext | None = None,
                   natural: bool = True, assoc_max: int | None = None) -> list[Verdict]:
    """Functoriality, sup-preservation, mu naturality and bilinearity, and the four coherence laws.

    Objects range over sizes 0..max_obj; hom-sets and fibers are enumerated when they fit
    the budget and sampled otherwise (the verdict says which). The associativity law is run on
    triples whose product has at most `assoc_max` points (default: max_obj ** 2).
    """
    ctx = ctx or LawContext(Q)
    rng = budget.rng()
    q = Q.base_q
    objs = objects(budget)
    out = []

    def elems(X):
        return Q.fiber(X).sample(budget.max_elems, rng)

    # identity and composition
    c_id = Checker(ctx, "functor.identity", budget)
    for X in objs:
        es, ex = elems(X)
        c_id.exhaustive &= ex
        for a in es:
            if not c_id.check(X=X, a=a):
                break
    out.append(c_id.verdict())

    small = max(1, min(budget.max_morphisms, 16))
    c_comp = Checker(ctx, "functor.compose", budget)
    for X, Y, Z in product(objs, repeat=3):
        fs, ex1 = homs(X, Y, q, Budget(budget.max_obj, small, budget.max_elems, budget.seed), rng)
        gs, ex2 = homs(Y, Z, q, Budget(budget.max_obj, small, budget.max_elems, budget.seed), rng)
        es, ex3 = Q.fiber(X).sample(min(budget.max_elems, 32), rng)
        c_comp.exhaustive &= ex1 and ex2 and ex3
        for f, g, a in product(fs, gs, es):
            if not c_comp.check(X=X, Y=Y, Z=Z, f=f, g=g, a=a):
                break
    out.append(c_comp.verdict())

    c_sup = Checker(ctx, "functor.sup", budget)
    for X, Y in product(objs, repeat=2):
        fs, ex1 = homs(X, Y, q, budget, rng)
        es, ex2 = Q.fiber(X).sample(min(budget.max_elems, 64), rng)
        c_sup.exhaustive &= ex1 and ex2
        for f in fs:
            for a, b in combinations(es, 2):
                if not c_sup.check(X=X, Y=Y, f=f, a=a, b=b):
                    break
    out.append(c_sup.verdict())

    nat_id = "mu.natural" if natural else "mu.lax"
    c_nat = Checker(ctx, nat_id, budget, note="one variable at a time; the general square follows by functoriality")
    _naturality_loop(c_nat, Q, objs, budget, rng)
    out.append(c_nat.verdict())

    c_bil = Checker(ctx, "mu.bilinear", budget)
    for X, Y in product(objs, repeat=2):
        as_, ex1 = Q.fiber(X).sample(min(budget.max_elems, 64), rng)
        bs, ex2 = Q.fiber(Y).sample(min(budget.max_elems, 64), rng)
        c_bil.exhaustive &= ex1 and ex2
        for a, a2 in combinations(as_, 2):
            for b in bs:
                if not c_bil.check(X=X, Y=Y, a=a, a2=a2, b=b):
                    break
    out.append(c_bil.verdict())

    out.extend(check_coherence(Q, budget, ctx, assoc_max))
    return out


def check_coherence(Q: Presheaf, budget: Budget = Budget(), ctx: LawContext | None = None,
                    assoc_max: int | None = None) -> list[Verdict]:
    """The four coherence diagrams of a monoidal functor, as equalities."""
    ctx = ctx or LawContext(Q)
    rng = budget.rng()
    objs = objects(budget)
    assoc_max = budget.max_obj ** 2 if assoc_max is None else assoc_max
    out = []
    for lid in ("monoidal.left_unitor", "monoidal.right_unitor"):
        c = Checker(ctx, lid, budget)
        for X in objs:
            es, ex = Q.fiber(X).sample(budget.max_elems, rng)
            c.exhaustive &= ex
            for a in es:
                if not c.check(X=X, a=a):
                    break
        out.append(c.verdict())
    c = Checker(ctx, "monoidal.symmetry", budget)
    for X, Y in product(objs, repeat=2):
        as_, ex1 = Q.fiber(X).sample(budget.max_elems, rng)
        bs, ex2 = Q.fiber(Y).sample(budget.max_elems, rng)
        c.exhaustive &= ex1 and ex2
        for a, b in product(as_, bs):
            if not c.check(X=X, Y=Y, a=a, b=b):
                break
    out.append(c.verdict())
    c = Checker(ctx, "monoidal.associator", budget)
    skipped = 0
    for X, Y, Z in product(objs, repeat=3):
        if X.size * Y.size * Z.size > assoc_max:
            skipped += 1
            continue
        as_, e1 = Q.fiber(X).sample(min(budget.max_elems, 27), rng)
        bs, e2 = Q.fiber(Y).sample(min(budget.max_elems, 27), rng)
        cs, e3 = Q.fiber(Z).sample(min(budget.max_elems, 27), rng)
        c.exhaustive &= e1 and e2 and e3
        for a, b, cc in product(as_, bs, cs):
            if not c.check(X=X, Y=Y, Z=Z, a=a, b=b, c=cc):
                break
    if skipped:
        c.note = f"triples with more than {assoc_max} points skipped ({skipped})"
    out.append(c.verdict())
    return out


# lax (extra)naturality of families

@law("lax.mu", "Q(f (x) g)(mu(a, b)) <= mu(Q(f)(a), Q(g)(b))", "<=",
     X="set", Y="set", X2="set", Y2="set", f="mat", g="mat", a=("elt", "X"), b=("elt", "Y"))
def _law_lax_mu(ctx, **kw):
    return _law_mu_lax(ctx, **kw)


@law("lax.iota", "Q(f -o g)(iota(Q(f)(a), c)) <= iota(a, Q(g)(c))", "<=",
     X="set", X2="set", Y="set", Y2="set", f="mat", g="mat", a=("elt", "X"), c=("elt", "Y"))
def _law_lax_iota(ctx, X, X2, Y, Y2, f, g, a, c):
    from .relbase import hom_mor
    from .total import iota
    Q = ctx.presheaf
    lhs = Q.act(hom_mor(f, g), iota(Q, X2, Y, Q.act(f, a), c))
    rhs = iota(Q, X, Y2, a, Q.act(g, c))
    W = tensor_obj(X, Y2)
    return Q.fiber(W).leq(lhs, rhs), _sh(ctx, W, lhs), _sh(ctx, W, rhs)


@law("lax.iota_slatt", "Q(f -o g)(iota(a', c)) <= iota(Q(f)^*(a'), Q(g)(c))", "<=",
     X="set", X2="set", Y="set", Y2="set", f="mat", g="mat", a2=("elt", "X2"), c=("elt", "Y"))
def _law_lax_iota_slatt(ctx, X, X2, Y, Y2, f, g, a2, c):
    from .relbase import hom_mor
    from .total import iota
    Q = ctx.presheaf
    lhs = Q.act(hom_mor(f, g), iota(Q, X2, Y, a2, c))
    rhs = iota(Q, X, Y2, Q.act_radj(f, a2), Q.act(g, c))
    W = tensor_obj(X, Y2)
    return Q.fiber(W).leq(lhs, rhs), _sh(ctx, W, lhs), _sh(ctx, W, rhs)


@law("lax.endo", "Q(F(g))(psi_Y(b)) <= psi_Y'(Q(g)(b))", "<=",
     Y="set", Y2="set", g="mat", b=("elt", "Y"))
def _law_lax_endo(ctx, Y, Y2, g, b):
    lift = ctx["lift"]
    Q = ctx.presheaf
    F = lift.F
    lhs = Q.act(F.mor(g), lift.psi(Y, b))
    rhs = lift.psi(Y2, Q.act(g, b))
    W = F.obj(Y2)
    return Q.fiber(W).leq(lhs, rhs), _sh(ctx, W, lhs), _sh(ctx, W, rhs)


@law("natural.endo", "Q(F(g))(psi_Y(b)) = psi_Y'(Q(g)(b))", "=",
     Y="set", Y2="set", g="mat", b=("elt", "Y"))
def _law_natural_endo(ctx, Y, Y2, g, b):
    lift = ctx["lift"]
    Q = ctx.presheaf
    lhs = Q.act(lift.F.mor(g), lift.psi(Y, b))
    rhs = lift.psi(Y2, Q.act(g, b))
    W = lift.F.obj(Y2)
    return lhs == rhs, _sh(ctx, W, lhs), _sh(ctx, W, rhs)


def check_lax_extranatural(ctx: LawContext, family: str, budget: Budget = Budget(),
                           slatt: bool = True) -> list[Verdict]:
    """Semi-commutativity of the lax (extra)naturality square for one family.

    family: "mu" (covariant in both arguments), "iota" (contravariant in the first),
    or "endo" (the lifting data psi of an endofunctor, found in ctx["lift"]).
    For mu and endo the same inputs are also tested for equality, so the report
    separates natural from merely lax families. With `slatt`, iota is also tested
    against the adjoint-transposed square.
    """
    Q = ctx.presheaf
    q = Q.base_q
    rng = budget.rng()
    objs = objects(budget)
    out = []
    if family == "mu":
        note = "one variable at a time; the general square follows by functoriality"
        lax = Checker(ctx, "lax.mu", budget, note=note)
        nat = Checker(ctx, "mu.natural", budget, note=note)
        _naturality_loop([lax, nat], Q, objs, budget, rng)
        out += [lax.verdict(), _as_info(nat.verdict())]
    elif family == "iota":
        note = "one variable at a time; lax squares paste to the general one"
        lax = Checker(ctx, "lax.iota", budget, note=note)
        sl = Checker(ctx, "lax.iota_slatt", budget, note=note)
        skipped = 0
        for X, X2, Y in product(objs, repeat=3):
            if not fits(Q, max(X.size, X2.size, Y.size) ** 2 * max(X.size, X2.size, Y.size)):
                skipped += 1
                continue
            fs, e1 = homs(X, X2, q, budget, rng)
            as_, e2 = Q.fiber(X).sample(min(budget.max_elems, 81), rng)
            a2s, e3 = Q.fiber(X2).sample(min(budget.max_elems, 81), rng)
            ys, e4 = Q.fiber(Y).sample(min(budget.max_elems, 81), rng)
            idY = identity(Y, q)
            lax.exhaustive &= e1 and e2 and e4
            sl.exhaustive &= e1 and e3 and e4
            for f in fs:
                # f acting on the contravariant variable ...
                for a, c in product(as_, ys):
                    if not lax.check(X=X, X2=X2, Y=Y, Y2=Y, f=f, g=idY, a=a, c=c):
                        break
                if slatt:
                    for a2, c in product(a2s, ys):
                        if not sl.check(X=X, X2=X2, Y=Y, Y2=Y, f=f, g=idY, a2=a2, c=c):
                            break
                # ... and on the covariant one, with Y as the fixed first argument
                for a, c in product(ys, as_):
                    if not lax.check(X=Y, X2=Y, Y=X, Y2=X2, f=idY, g=f, a=a, c=c):
                        break
        if skipped:
            lax.note = sl.note = f"{note}; {skipped} triples beyond {Q.max_points} points skipped"
            lax.exhaustive = sl.exhaustive = False
        out.append(lax.verdict())
        if slatt:
            out.append(sl.verdict())
    elif family == "endo":
        lax = Checker(ctx, "lax.endo", budget)
        nat = Checker(ctx, "natural.endo", budget)
        for Y, Y2 in product(objs, repeat=2):
            gs, e1 = homs(Y, Y2, q, budget, rng)
            bs, e2 = Q.fiber(Y).sample(budget.max_elems, rng)
            lax.exhaustive &= e1 and e2
            nat.exhaustive &= e1 and e2
            for g, b in product(gs, bs):
                lax.check(Y=Y, Y2=Y2, g=g, b=b)
                nat.check(Y=Y, Y2=Y2, g=g, b=b)
        out += [lax.verdict(), _as_info(nat.verdict())]
    else:
        raise ValueError(f"unknown family {family!r}")
    return out


def _naturality_loop(checkers, Q: Presheaf, objs, budget: Budget, rng) -> None:
    """Feed mu-naturality cases f (x) id and id (x) g to each checker."""
    if not isinstance(checkers, list):
        checkers = [checkers]
    q = Q.base_q
    for X, X2, Y in product(objs, repeat=3):
        fs, e1 = homs(X, X2, q, budget, rng)
        as_, e2 = Q.fiber(X).sample(min(budget.max_elems, 81), rng)
        bs, e3 = Q.fiber(Y).sample(min(budget.max_elems, 81), rng)
        idY = identity(Y, q)
        for c in checkers:
            c.exhaustive &= e1 and e2 and e3
        for f in fs:
            for a, b in product(as_, bs):
                for c in checkers:
                    c.check(X=X, Y=Y, X2=X2, Y2=Y, f=f, g=idY, a=a, b=b)
                    c.check(X=Y, Y=X, X2=Y, Y2=X2, f=idY, g=f, a=b, b=a)


def _as_info(v: Verdict) -> Verdict:
    """Equality is a classification here, not a requirement: a failure means 'lax only'."""
    if v.status == "fail":
        v.status = "info"
        v.note = (v.note + "; " if v.note else "") + "family is lax but not natural"
    return v


def iota_sup_status(Q: Presheaf, budget: Budget = Budget()) -> dict:
    """Whether iota(-, c) turns joins into meets and iota(a, -) preserves joins, on the budget.

    Recorded for information only: iota need not be sup-preserving.
    """
    from .total import iota
    rng = budget.rng()
    objs = objects(budget)
    status = {"second_argument_sup_preserving": True, "witness": None, "cases": 0}
    for X, Y in product(objs, repeat=2):
        as_, _ = Q.fiber(X).sample(min(budget.max_elems, 9), rng)
        cs, _ = Q.fiber(Y).sample(min(budget.max_elems, 9), rng)
        FW = Q.fiber(tensor_obj(X, Y))
        for a in as_:
            if iota(Q, X, Y, a, Q.fiber(Y).bottom) != FW.bottom:
                status.update(second_argument_sup_preserving=False,
                              witness={"X": X.size, "Y": Y.size, "a": Q.fiber(X).to_json(a), "c": "bottom"})
                return status
            for c1, c2 in combinations(cs, 2):
                status["cases"] += 1
                lhs = iota(Q, X, Y, a, Q.fiber(Y).join([c1, c2]))
                rhs = FW.join([iota(Q, X, Y, a, c1), iota(Q, X, Y, a, c2)])
                if lhs != rhs:
                    status.update(second_argument_sup_preserving=False,
                                  witness={"X": X.size, "Y": Y.size, "a": Q.fiber(X).to_json(a),
                                           "c1": Q.fiber(Y).to_json(c1), "c2": Q.fiber(Y).to_json(c2)})
                    return status
    return status


def validate(Q: Presheaf, budget: Budget | None = None) -> Presheaf:
    """Light construction-time validation; raises InternalLawViolation with the first witness."""
    budget = budget or Budget(max_obj=1, max_morphisms=8, max_elems=16)
    for v in check_presheaf(Q, budget):
        if v.status == "fail":
            raise InternalLawViolation(f"presheaf {Q.name} violates {v.law_id}", v.witness)
    return Q
