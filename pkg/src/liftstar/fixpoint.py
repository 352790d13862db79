"""Lifted endofunctors, Q^nu / Q^mu, and lifting of terminal coalgebras and initial algebras."""
from __future__ import annotations

from dataclasses import dataclass, field
from itertools import product
from typing import Callable

from .errors import (CarrierTooLarge, InternalLawViolation, PsiNotNatural, ShapeMismatch,
                     StructureNotInvertible)
from .lattice import kleene_iterate
from .laws import Budget, Checker, LawContext, Verdict, law
from .presheaf import Endofunctor, Fiber, Presheaf, check_lax_extranatural
from .relbase import FinSet, QMat, all_qmats, compose, converse, count_qmats, invert, is_invertible
from .total import TotalObj, is_iso, is_morphism

#: Kleene iteration cap; far above the height of any fiber the checkers can enumerate
MAX_ITER = 100_000


class EndoLift:
    """A base endofunctor F with lifting data psi_X : Q(X) -> Q(F(X))."""

    def __init__(self, Q: Presheaf, F: Endofunctor, psi: Callable, name: str = "",
                 budget: Budget | None = None):
        self.Q, self.F, self._psi, self.name = Q, F, psi, name or F.kind
        self.budget = budget or Budget(max_obj=2, max_morphisms=16, max_elems=81)
        self._natural: bool | None = None
        self.validation: list[Verdict] = []

    def psi(self, X: FinSet, a):
        return self._psi(X, a)

    def describe(self) -> dict:
        return {"functor": self.F.describe(), "psi": self.name}

    def validate(self) -> "EndoLift":
        """Check lax naturality (raising on failure) and record whether psi is natural."""
        ctx = LawContext(self.Q, lift=self)
        lax, nat = check_lax_extranatural(ctx, "endo", self.budget)
        self.validation = [lax, nat]
        if lax.status == "fail":
            raise InternalLawViolation("psi is not lax natural", lax.witness)
        self._natural = nat.status == "pass"
        return self

    @property
    def psi_natural(self) -> bool:
        if self._natural is None:
            self.validate()
        return self._natural

    # standard lifting data

    @classmethod
    def identity(cls, Q: Presheaf, psi: str = "id") -> "EndoLift":
        """F = identity with psi = id, or psi = constant top (lax but not natural)."""
        F = Endofunctor("identity")
        if psi == "id":
            return cls(Q, F, lambda X, a: a, "id")
        if psi == "top":
            return cls(Q, F, lambda X, a: Q.fiber(X).top, "top")
        raise ValueError(f"unknown psi {psi!r}")

    @classmethod
    def constant(cls, Q: Presheaf, A: FinSet, theta) -> "EndoLift":
        """F = constant at A with psi_X the constant map at theta in Q(A)."""
        return cls(Q, Endofunctor("constant", A), lambda X, a: theta, "theta")

    @classmethod
    def product(cls, Q: Presheaf, A: FinSet, theta) -> "EndoLift":
        """F = A x -, psi_X(a) = mu(theta, a)."""
        return cls(Q, Endofunctor("product", A), lambda X, a: Q.mu(A, X, theta, a), "mu(theta,-)")


@dataclass(frozen=True)
class Coalg:
    X: FinSet
    gamma: QMat     # X -> F(X)


@dataclass(frozen=True)
class Alg:
    X: FinSet
    gamma: QMat     # F(X) -> X


def _check_shape(lift: EndoLift, X: FinSet, gamma: QMat, coalg: bool) -> None:
    FX = lift.F.obj(X)
    want = (X.size, FX.size) if coalg else (FX.size, X.size)
    if (gamma.dom.size, gamma.cod.size) != want:
        kind = "coalgebra" if coalg else "algebra"
        raise ShapeMismatch(f"{kind} structure must be {want[0]}->{want[1]}, got "
                            f"{gamma.dom.size}->{gamma.cod.size}")


def _elements(F: Fiber, limit: int = 4096) -> list:
    if not F.enumerable(limit):
        raise CarrierTooLarge(f"fiber has more than {limit} elements", {"limit": limit})
    return F.elements()


def in_q_nu(lift: EndoLift, c: Coalg, a) -> bool:
    Q = lift.Q
    return Q.fiber(lift.F.obj(c.X)).leq(Q.act(c.gamma, a), lift.psi(c.X, a))


def in_q_mu(lift: EndoLift, al: Alg, a) -> bool:
    Q = lift.Q
    return Q.fiber(al.X).leq(Q.act(al.gamma, lift.psi(al.X, a)), a)


def q_nu(lift: EndoLift, c: Coalg) -> list:
    """Post-fixed points {a | Q(gamma)(a) <= psi_X(a)}, checked to be closed under joins."""
    _check_shape(lift, c.X, c.gamma, True)
    F = lift.Q.fiber(c.X)
    elems = [a for a in _elements(F) if in_q_nu(lift, c, a)]
    members = set(elems)
    if F.bottom not in members:
        raise InternalLawViolation("Q^nu misses the bottom element", {"X": c.X.size})
    for a, b in product(elems, repeat=2):
        if F.join([a, b]) not in members:
            raise InternalLawViolation("Q^nu is not closed under joins",
                                       {"a": F.show(a), "b": F.show(b)})
    return elems


def q_mu(lift: EndoLift, al: Alg) -> list:
    """Pre-fixed points {a | Q(gamma)(psi_X(a)) <= a}, checked to be closed under meets."""
    _check_shape(lift, al.X, al.gamma, False)
    F = lift.Q.fiber(al.X)
    elems = [a for a in _elements(F) if in_q_mu(lift, al, a)]
    members = set(elems)
    if F.top not in members:
        raise InternalLawViolation("Q^mu misses the top element", {"X": al.X.size})
    for a, b in product(elems, repeat=2):
        if F.meet([a, b]) not in members:
            raise InternalLawViolation("Q^mu is not closed under meets",
                                       {"a": F.show(a), "b": F.show(b)})
    return elems


def q_mu_action(lift: EndoLift, dst: Alg, f: QMat, a):
    """Q^mu(f)(a) = meet{b in Q^mu(Y, delta) | Q(f)(a) <= b}."""
    F = lift.Q.fiber(dst.X)
    img = lift.Q.act(f, a)
    return F.meet([b for b in q_mu(lift, dst) if F.leq(img, b)])


# the opposite presheaf, for the dual code path

class OppositeFiber(Fiber):
    """A fiber with the reversed order."""

    def __init__(self, base: Fiber):
        self.base, self.size = base, base.size

    def leq(self, a, b):
        return self.base.leq(b, a)

    def join(self, elems):
        return self.base.meet(elems)

    def meet(self, elems):
        return self.base.join(elems)

    @property
    def bottom(self):
        return self.base.top

    @property
    def top(self):
        return self.base.bottom

    def count(self):
        return self.base.count()

    def elements(self):
        return self.base.elements()

    def show(self, a):
        return self.base.show(a)

    def to_json(self, a):
        return self.base.to_json(a)

    def from_json(self, v):
        return self.base.from_json(v)


class OppositePresheaf(Presheaf):
    """Q*: X |-> Q(X)^op, acting through right adjoints; the base is transported along the
    converse, so a relation f : X -> Y acts as Q(f^o)^*."""

    def __init__(self, Q: Presheaf):
        super().__init__()
        self.inner, self.base_q, self.name = Q, Q.base_q, Q.name + "*"

    def _make_fiber(self, n):
        return OppositeFiber(self.inner.fiber(n))

    def act(self, f, a):
        return self.inner.act_radj(converse(f), a)


def q_mu_via_opposite(lift: EndoLift, al: Alg) -> list:
    """Q^mu(X, gamma) as Q*^nu of the converse coalgebra: an independent code path."""
    Qs = OppositePresheaf(lift.Q)
    dual = EndoLift(Qs, lift.F, lift._psi, lift.name + "*")
    return q_nu(dual, Coalg(al.X, converse(al.gamma)))


def q_mu_action_via_opposite(lift: EndoLift, src: Alg, dst: Alg, f: QMat, a):
    """The right adjoint (in the opposite orders) of Q*^nu(f^o) restricted to the sub-lattices."""
    Qs = OppositePresheaf(lift.Q)
    dual = EndoLift(Qs, lift.F, lift._psi, lift.name + "*")
    members = q_nu(dual, Coalg(dst.X, converse(dst.gamma)))
    FsY, FsX = Qs.fiber(dst.X), Qs.fiber(src.X)
    g = converse(f)
    return FsY.join([b for b in members if FsX.leq(Qs.act(g, b), a)])


# morphisms of (co)algebras

def is_coalg_morphism(F: Endofunctor, f: QMat, c: Coalg, d: Coalg) -> bool:
    return compose(c.gamma, F.mor(f)) == compose(f, d.gamma)


def is_alg_morphism(F: Endofunctor, f: QMat, a: Alg, b: Alg) -> bool:
    return compose(F.mor(f), b.gamma) == compose(a.gamma, f)


def base_coalgebras(lift: EndoLift, X: FinSet, limit: int) -> list[Coalg]:
    q = lift.Q.base_q
    FX = lift.F.obj(X)
    if count_qmats(X, FX, q) > limit:
        raise CarrierTooLarge(f"{count_qmats(X, FX, q)} structures {X.size}->{FX.size} exceed {limit}",
                              {"X": X.size, "limit": limit})
    return [Coalg(X, g) for g in all_qmats(X, FX, q)]


def base_algebras(lift: EndoLift, X: FinSet, limit: int) -> list[Alg]:
    q = lift.Q.base_q
    FX = lift.F.obj(X)
    if count_qmats(FX, X, q) > limit:
        raise CarrierTooLarge(f"{count_qmats(FX, X, q)} structures {FX.size}->{X.size} exceed {limit}",
                              {"X": X.size, "limit": limit})
    return [Alg(X, g) for g in all_qmats(FX, X, q)]


def _all_maps(X: FinSet, Y: FinSet, q, limit: int) -> list[QMat]:
    if count_qmats(X, Y, q) > limit:
        raise CarrierTooLarge(f"{count_qmats(X, Y, q)} morphisms {X.size}->{Y.size} exceed {limit}",
                              {"X": X.size, "Y": Y.size, "limit": limit})
    return list(all_qmats(X, Y, q))


@dataclass
class CoalgCategory:
    lifted_objects: int
    nu_objects: int
    lifted_morphisms: int
    nu_morphisms: int
    carriers: list
    verdicts: list = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return all(v.ok for v in self.verdicts)


@law("fixpoint.coalg_objects", "coalgebras of the lifted functor = objects of the total category of Q^nu", "=",
     X="set")
def _law_coalg_objects(ctx, X):
    lift = ctx["lift"]
    limit = ctx.extras.get("limit", 256)
    Q = lift.Q
    F = Q.fiber(X)
    lifted, nu = set(), set()
    for c in base_coalgebras(lift, X, limit):
        FX = lift.F.obj(X)
        for a in _elements(F):
            if is_morphism(Q, TotalObj(X, a), c.gamma, TotalObj(FX, lift.psi(X, a))) is None:
                lifted.add((c.gamma, a))
        for a in q_nu(lift, c):
            nu.add((c.gamma, a))
    ctx.extras.setdefault("_objects", {})[X.size] = sorted(lifted, key=repr)
    return lifted == nu, f"{len(lifted)} lifted coalgebras", f"{len(nu)} objects of the Q^nu total category"


@law("fixpoint.coalg_homs", "coalgebra morphisms of the lifted functor = morphisms of the Q^nu total category", "=",
     X="set", Y="set", gamma="mat", delta="mat", a=("elt", "X"), b=("elt", "Y"))
def _law_coalg_homs(ctx, X, Y, gamma, delta, a, b):
    lift = ctx["lift"]
    limit = ctx.extras.get("limit", 256)
    Q, F = lift.Q, lift.F
    c, d = Coalg(X, gamma), Coalg(Y, delta)
    lifted = nu = 0
    for f in _all_maps(X, Y, Q.base_q, limit):
        if not is_coalg_morphism(F, f, c, d):
            continue
        if is_morphism(Q, TotalObj(X, a), f, TotalObj(Y, b)) is None:
            lifted += 1
        # Q^nu acts by restriction of Q(f); the restriction must land in Q^nu(Y, delta)
        img = Q.act(f, a)
        if not in_q_nu(lift, d, img):
            return False, f"Q(f)(a) = {Q.fiber(Y).show(img)}", "not in Q^nu(Y, delta)"
        if Q.fiber(Y).leq(img, b):
            nu += 1
    return lifted == nu, f"{lifted} lifted morphisms", f"{nu} Q^nu morphisms"


def enumerate_coalg_category(lift: EndoLift, max_carrier: int = 2, limit: int = 256,
                             hom_pairs: int = 4096) -> CoalgCategory:
    """Enumerate both sides of the coalgebra / Q^nu correspondence and compare them."""
    Q = lift.Q
    budget = Budget(max_obj=max_carrier, max_morphisms=limit)
    ctx = LawContext(Q, lift=lift, limit=limit)
    co = Checker(ctx, "fixpoint.coalg_objects", budget)
    ho = Checker(ctx, "fixpoint.coalg_homs", budget)
    carriers = [FinSet(n) for n in range(max_carrier + 1)]
    n_lifted = n_nu = 0
    for X in carriers:
        co.check(X=X)
        n_lifted += len(ctx.extras["_objects"][X.size])
        n_nu += sum(len(q_nu(lift, c)) for c in base_coalgebras(lift, X, limit))
    objs = [(X, g, a) for X in carriers for g, a in ctx.extras["_objects"][X.size]]
    pairs = list(product(objs, repeat=2))
    if len(pairs) > hom_pairs:
        idx = Budget(seed=0).rng().choice(len(pairs), size=hom_pairs, replace=False)
        pairs = [pairs[i] for i in sorted(idx)]
        ho.exhaustive = False
    m_lifted = m_nu = 0
    for (X, g, a), (Y, d, b) in pairs:
        if not ho.check(X=X, Y=Y, gamma=g, delta=d, a=a, b=b):
            break
        FY = Q.fiber(Y)
        for f in _all_maps(X, Y, Q.base_q, limit):
            if is_coalg_morphism(lift.F, f, Coalg(X, g), Coalg(Y, d)):
                m_lifted += is_morphism(Q, TotalObj(X, a), f, TotalObj(Y, b)) is None
                m_nu += FY.leq(Q.act(f, a), b)
    return CoalgCategory(n_lifted, n_nu, m_lifted, m_nu, [X.size for X in carriers],
                         [co.verdict(), ho.verdict()])


# lifting terminal coalgebras and initial algebras

@dataclass
class LiftedFixpoint:
    carrier: FinSet
    structure: QMat
    element: object
    iterations: int
    verdicts: list

    @property
    def ok(self) -> bool:
        return all(v.ok for v in self.verdicts)


@law("fixpoint.base_terminal", "every base coalgebra has exactly one mediator into the terminal one", "holds",
     X="set", gamma="mat")
def _law_base_terminal(ctx, X, gamma):
    lift = ctx["lift"]
    nuF, chi = ctx["terminal"]
    n = sum(is_coalg_morphism(lift.F, f, Coalg(X, gamma), Coalg(nuF, chi))
            for f in _all_maps(X, nuF, lift.Q.base_q, ctx.extras.get("limit", 256)))
    return n == 1, f"{n} mediators", "exactly 1"


@law("fixpoint.terminal", "every lifted coalgebra has exactly one mediator into the lifted terminal one", "holds",
     X="set", gamma="mat", a=("elt", "X"))
def _law_terminal(ctx, X, gamma, a):
    lift = ctx["lift"]
    nuF, chi = ctx["terminal"]
    top = ctx["fixpoint"]
    n = sum(is_coalg_morphism(lift.F, f, Coalg(X, gamma), Coalg(nuF, chi)) and
            is_morphism(lift.Q, TotalObj(X, a), f, TotalObj(nuF, top)) is None
            for f in _all_maps(X, nuF, lift.Q.base_q, ctx.extras.get("limit", 256)))
    return n == 1, f"{n} mediators", "exactly 1"


@law("fixpoint.lambek", "the lifted structure map is an iso of the total category", "holds", U="set")
def _law_lambek(ctx, U):
    lift = ctx["lift"]
    chi, src_el, dst_el, kind = ctx["lambek"]
    FU = lift.F.obj(U)
    if kind == "coalg":
        bad = is_iso(lift.Q, TotalObj(U, src_el), chi, TotalObj(FU, dst_el))
    else:
        bad = is_iso(lift.Q, TotalObj(FU, src_el), chi, TotalObj(U, dst_el))
    return bad is None, str(bad), "iso"


def lift_terminal_coalgebra(lift: EndoLift, nuF: FinSet, chi: QMat, max_carrier: int = 2,
                            limit: int = 256) -> LiftedFixpoint:
    """(nuF, chi, gfp of Q(chi^-1) . psi), with terminality checked by mediator enumeration."""
    if not is_invertible(chi):
        raise StructureNotInvertible("the terminal coalgebra structure is not invertible in the base",
                                     {"chi": repr(chi)})
    Q = lift.Q
    chi_inv = invert(chi)
    F = Q.fiber(nuF)
    gfp, iters = kleene_iterate(lambda a: Q.act(chi_inv, lift.psi(nuF, a)), F.top, MAX_ITER)
    budget = Budget(max_obj=max_carrier, max_morphisms=limit)
    ctx = LawContext(Q, lift=lift, terminal=(nuF, chi), fixpoint=gfp, limit=limit,
                     lambek=(chi, gfp, lift.psi(nuF, gfp), "coalg"))
    bt = Checker(ctx, "fixpoint.base_terminal", budget)
    tt = Checker(ctx, "fixpoint.terminal", budget)
    lk = Checker(ctx, "fixpoint.lambek", budget)
    for n in range(max_carrier + 1):
        X = FinSet(n)
        for c in base_coalgebras(lift, X, limit):
            bt.check(X=X, gamma=c.gamma)
            for a in _elements(Q.fiber(X)):
                if is_morphism(Q, TotalObj(X, a), c.gamma, TotalObj(lift.F.obj(X), lift.psi(X, a))) is None:
                    tt.check(X=X, gamma=c.gamma, a=a)
    lk.check(U=nuF)
    return LiftedFixpoint(nuF, chi, gfp, iters, [bt.verdict(), tt.verdict(), lk.verdict()])


@law("fixpoint.base_initial", "every base algebra has exactly one mediator from the initial one", "holds",
     X="set", gamma="mat")
def _law_base_initial(ctx, X, gamma):
    lift = ctx["lift"]
    muF, chi = ctx["initial"]
    n = sum(is_alg_morphism(lift.F, f, Alg(muF, chi), Alg(X, gamma))
            for f in _all_maps(muF, X, lift.Q.base_q, ctx.extras.get("limit", 256)))
    return n == 1, f"{n} mediators", "exactly 1"


@law("fixpoint.initial", "every lifted algebra has exactly one mediator from the lifted initial one", "holds",
     X="set", gamma="mat", a=("elt", "X"))
def _law_initial(ctx, X, gamma, a):
    lift = ctx["lift"]
    muF, chi = ctx["initial"]
    low = ctx["fixpoint"]
    n = sum(is_alg_morphism(lift.F, f, Alg(muF, chi), Alg(X, gamma)) and
            is_morphism(lift.Q, TotalObj(muF, low), f, TotalObj(X, a)) is None
            for f in _all_maps(muF, X, lift.Q.base_q, ctx.extras.get("limit", 256)))
    return n == 1, f"{n} mediators", "exactly 1"


def lfp_phi(lift: EndoLift, al: Alg):
    """Least fixed point of Q(gamma) . psi_X by iteration from bottom. Returns (value, iterations)."""
    Q = lift.Q
    return kleene_iterate(lambda a: Q.act(al.gamma, lift.psi(al.X, a)), Q.fiber(al.X).bottom, MAX_ITER)


@law("fixpoint.lfp_preserved", "Q(f) sends the least fixed point of phi_X to that of phi_Y along algebra morphisms",
     "=", X="set", Y="set", gamma="mat", delta="mat", f="mat")
def _law_lfp_preserved(ctx, X, Y, gamma, delta, f):
    lift = ctx["lift"]
    if not is_alg_morphism(lift.F, f, Alg(X, gamma), Alg(Y, delta)):
        return True, "not an algebra morphism", ""
    lx, _ = lfp_phi(lift, Alg(X, gamma))
    ly, _ = lfp_phi(lift, Alg(Y, delta))
    img = lift.Q.act(f, lx)
    FY = lift.Q.fiber(Y)
    return img == ly, FY.show(img), FY.show(ly)


def lift_initial_algebra(lift: EndoLift, muF: FinSet, chi: QMat, max_carrier: int = 2,
                         limit: int = 256) -> LiftedFixpoint:
    """(muF, chi, lfp of Q(chi) . psi), with initiality checked by mediator enumeration.

    Needs psi natural; the least fixed point is always computed by iteration."""
    if not lift.psi_natural:
        raise PsiNotNatural("initial algebras lift only along a natural psi",
                            lift.validation[1].witness if lift.validation else None)
    if not is_invertible(chi):
        raise StructureNotInvertible("the initial algebra structure is not invertible in the base",
                                     {"chi": repr(chi)})
    Q = lift.Q
    low, iters = lfp_phi(lift, Alg(muF, chi))
    budget = Budget(max_obj=max_carrier, max_morphisms=limit)
    ctx = LawContext(Q, lift=lift, initial=(muF, chi), fixpoint=low, limit=limit,
                     lambek=(chi, lift.psi(muF, low), low, "alg"))
    bi = Checker(ctx, "fixpoint.base_initial", budget)
    ti = Checker(ctx, "fixpoint.initial", budget)
    lk = Checker(ctx, "fixpoint.lambek", budget)
    lp = Checker(ctx, "fixpoint.lfp_preserved", budget)
    algs = []
    for n in range(max_carrier + 1):
        X = FinSet(n)
        for al in base_algebras(lift, X, limit):
            algs.append(al)
            bi.check(X=X, gamma=al.gamma)
            FX = lift.F.obj(X)
            for a in _elements(Q.fiber(X)):
                if is_morphism(Q, TotalObj(FX, lift.psi(X, a)), al.gamma, TotalObj(X, a)) is None:
                    ti.check(X=X, gamma=al.gamma, a=a)
    lk.check(U=muF)
    rng = budget.rng()
    pairs = list(product(algs, repeat=2))
    if len(pairs) > 512:
        idx = rng.choice(len(pairs), size=512, replace=False)
        pairs = [pairs[i] for i in sorted(idx)]
        lp.exhaustive = False
    for a1, a2 in pairs:
        for f in _all_maps(a1.X, a2.X, Q.base_q, limit):
            lp.check(X=a1.X, Y=a2.X, gamma=a1.gamma, delta=a2.gamma, f=f)
    return LiftedFixpoint(muF, chi, low, iters, [bi.verdict(), ti.verdict(), lk.verdict(), lp.verdict()])


# Q^mu through the two code paths

@law("fixpoint.nu_join_closed", "Q^nu(X, gamma) contains bottom and is closed under binary joins", "holds",
     X="set", gamma="mat")
def _law_nu_closed(ctx, X, gamma):
    try:
        n = len(q_nu(ctx["lift"], Coalg(X, gamma)))
    except InternalLawViolation as exc:
        return False, str(exc), "join-closed"
    return True, f"{n} elements", "join-closed"


@law("fixpoint.mu_meet_closed", "Q^mu(X, gamma) contains top and is closed under binary meets", "holds",
     X="set", gamma="mat")
def _law_mu_closed(ctx, X, gamma):
    try:
        n = len(q_mu(ctx["lift"], Alg(X, gamma)))
    except InternalLawViolation as exc:
        return False, str(exc), "meet-closed"
    return True, f"{n} elements", "meet-closed"


@law("fixpoint.mu_duality", "Q^mu(X, gamma) = Q*^nu(X, gamma) as sets", "=", X="set", gamma="mat")
def _law_mu_duality(ctx, X, gamma):
    lift = ctx["lift"]
    al = Alg(X, gamma)
    F = lift.Q.fiber(X)
    lhs, rhs = q_mu(lift, al), q_mu_via_opposite(lift, al)
    show = lambda s: "{" + ", ".join(sorted(F.show(a) for a in s)) + "}"
    return set(lhs) == set(rhs), show(lhs), show(rhs)


@law("fixpoint.mu_action_duality", "Q^mu(f)(a) agrees with the right adjoint of Q*^nu(f)", "=",
     X="set", Y="set", gamma="mat", delta="mat", f="mat", a=("elt", "X"))
def _law_mu_action_duality(ctx, X, Y, gamma, delta, f, a):
    lift = ctx["lift"]
    src, dst = Alg(X, gamma), Alg(Y, delta)
    lhs = q_mu_action(lift, dst, f, a)
    rhs = q_mu_action_via_opposite(lift, src, dst, f, a)
    F = lift.Q.fiber(Y)
    return lhs == rhs, F.show(lhs), F.show(rhs)


@law("fixpoint.mu_action_restriction", "for natural psi, Q^mu(f)(a) = Q(f)(a)", "=",
     X="set", Y="set", gamma="mat", delta="mat", f="mat", a=("elt", "X"))
def _law_mu_action_restriction(ctx, X, Y, gamma, delta, f, a):
    lift = ctx["lift"]
    lhs = q_mu_action(lift, Alg(Y, delta), f, a)
    rhs = lift.Q.act(f, a)
    F = lift.Q.fiber(Y)
    return lhs == rhs, F.show(lhs), F.show(rhs)


def check_fixpoint_duality(lift: EndoLift, max_carrier: int = 2, limit: int = 256,
                           morphism_pairs: int = 256) -> list[Verdict]:
    """Q^nu join-closure, Q^mu meet-closure, and Q^mu against Q*^nu on objects and morphisms."""
    Q = lift.Q
    budget = Budget(max_obj=max_carrier, max_morphisms=limit)
    ctx = LawContext(Q, lift=lift)
    nc = Checker(ctx, "fixpoint.nu_join_closed", budget)
    mc = Checker(ctx, "fixpoint.mu_meet_closed", budget)
    du = Checker(ctx, "fixpoint.mu_duality", budget)
    ad = Checker(ctx, "fixpoint.mu_action_duality", budget)
    ar = Checker(ctx, "fixpoint.mu_action_restriction", budget)
    algs = []
    for n in range(max_carrier + 1):
        X = FinSet(n)
        for c in base_coalgebras(lift, X, limit):
            nc.check(X=X, gamma=c.gamma)
        for al in base_algebras(lift, X, limit):
            algs.append(al)
            mc.check(X=X, gamma=al.gamma)
            du.check(X=X, gamma=al.gamma)
    natural = lift.psi_natural
    rng = budget.rng()
    pairs = list(product(algs, repeat=2))
    if len(pairs) > morphism_pairs:
        idx = rng.choice(len(pairs), size=morphism_pairs, replace=False)
        pairs = [pairs[i] for i in sorted(idx)]
        ad.exhaustive = ar.exhaustive = False
    for a1, a2 in pairs:
        for f in _all_maps(a1.X, a2.X, Q.base_q, limit):
            if not is_alg_morphism(lift.F, f, a1, a2):
                continue
            for a in q_mu(lift, a1):
                ad.check(X=a1.X, Y=a2.X, gamma=a1.gamma, delta=a2.gamma, f=f, a=a)
                if natural:
                    ar.check(X=a1.X, Y=a2.X, gamma=a1.gamma, delta=a2.gamma, f=f, a=a)
    return [nc.verdict(), mc.verdict(), du.verdict(), ad.verdict(),
            ar.verdict("psi is not natural; Q^mu(f) is not a restriction")]
