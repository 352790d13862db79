"""The total category of a presheaf: hom condition, lifted monoidal closed
structure, and the dualizing-object criteria."""
from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from itertools import product

from .errors import CarrierTooLarge, InternalLawViolation, ShapeMismatch
from .laws import Budget, Checker, LawContext, Verdict, law
from .presheaf import Presheaf, check_coherence, check_lax_extranatural, fits, homs, objects
from .quantale import FinQuantale
from .relbase import (FinSet, QMat, compose, dual_mor, dual_obj, eta_relation, ev_relation, hom_mor,
                      hom_obj, identity, invert, is_invertible, structural, tensor_mor, tensor_obj)

I = FinSet.unit()


@dataclass(frozen=True)
class TotalObj:
    X: FinSet
    alpha: object


@dataclass(frozen=True)
class TotalMor:
    src: TotalObj
    dst: TotalObj
    f: QMat


@dataclass(frozen=True)
class DualCandidate:
    omega: object
    zero: FinSet = I


# cached structure maps

@lru_cache(maxsize=None)
def _ev(q: FinQuantale, nx: int, ny: int) -> QMat:
    return ev_relation(FinSet(nx), FinSet(ny), q)


@lru_cache(maxsize=None)
def _eta(q: FinQuantale, nx: int, ny: int) -> QMat:
    return eta_relation(FinSet(nx), FinSet(ny), q)


@lru_cache(maxsize=None)
def _jmap(q: FinQuantale, nx: int) -> QMat:
    return structural("double_dual_j", q, FinSet(nx)).mat


@lru_cache(maxsize=None)
def _jinv(q: FinQuantale, nx: int) -> QMat:
    return invert(_jmap(q, nx))


# hom condition

def is_morphism(Q: Presheaf, src: TotalObj, f: QMat, dst: TotalObj):
    """None when Q(f)(alpha) <= beta, else a witness dict."""
    if f.dom.size != src.X.size or f.cod.size != dst.X.size:
        raise ShapeMismatch(f"{f.dom.size}->{f.cod.size} does not fit {src.X.size}->{dst.X.size}")
    FY = Q.fiber(dst.X)
    img = Q.act(f, src.alpha)
    if FY.leq(img, dst.alpha):
        return None
    return {"Q(f)(alpha)": FY.show(img), "beta": FY.show(dst.alpha)}


def is_iso(Q: Presheaf, src: TotalObj, f: QMat, dst: TotalObj):
    """None when f is invertible in the base and Q(f)(alpha) = beta, else a witness dict."""
    if not is_invertible(f):
        return {"reason": "not invertible in the base"}
    img = Q.act(f, src.alpha)
    if img != dst.alpha:
        FY = Q.fiber(dst.X)
        return {"Q(f)(alpha)": FY.show(img), "beta": FY.show(dst.alpha)}
    return None


def total_morphism(Q: Presheaf, src: TotalObj, f: QMat, dst: TotalObj) -> TotalMor:
    bad = is_morphism(Q, src, f, dst)
    if bad is not None:
        raise ShapeMismatch(f"not a morphism of the total category: {bad}", bad)
    return TotalMor(src, dst, f)


def lifted_tensor(Q: Presheaf, A: TotalObj, B: TotalObj) -> TotalObj:
    return TotalObj(tensor_obj(A.X, B.X), Q.mu(A.X, B.X, A.alpha, B.alpha))


def lifted_unit(Q: Presheaf) -> TotalObj:
    return TotalObj(I, Q.unit())


def lifted_structural(Q: Presheaf, kind: str, *objs: TotalObj) -> TotalMor:
    """A structural iso of the base together with its lifted source and target.

    Raises InternalLawViolation when the lift is not an iso of the total category.
    """
    q = Q.base_q
    Xs = [o.X for o in objs]
    iso = structural(kind, q, *Xs)
    if kind == "left_unitor":
        (A,) = objs
        src, dst = lifted_tensor(Q, lifted_unit(Q), A), A
    elif kind == "right_unitor":
        (A,) = objs
        src, dst = lifted_tensor(Q, A, lifted_unit(Q)), A
    elif kind == "symmetry":
        A, B = objs
        src, dst = lifted_tensor(Q, A, B), lifted_tensor(Q, B, A)
    elif kind == "associator":
        A, B, C = objs
        src = lifted_tensor(Q, lifted_tensor(Q, A, B), C)
        dst = lifted_tensor(Q, A, lifted_tensor(Q, B, C))
    else:
        raise ValueError(f"{kind} has no lift here")
    bad = is_iso(Q, src, iso.mat, dst)
    if bad is not None:
        raise InternalLawViolation(f"lifted {kind} is not an iso: {bad}", bad)
    return TotalMor(src, dst, iso.mat)


# closed structure

def pairing(Q: Presheaf, X: FinSet, Y: FinSet, a, b):
    """<a, b>_{X,Y} = Q(ev)(mu(a, b)) for a in Q(X), b in Q(X -o Y)."""
    return Q.act(_ev(Q.base_q, X.size, Y.size), Q.mu(X, hom_obj(X, Y), a, b))


def iota_generators(Q: Presheaf, X: FinSet, Y: FinSet, a, c):
    """Join of the generators g of Q(X -o Y) with <a, g> <= c.

    Exact because <a, -> preserves joins: the set {b | <a, b> <= c} is down-closed
    and closed under joins, so its largest element is the join of its generators.
    """
    FY = Q.fiber(Y)
    return Q.fiber(hom_obj(X, Y)).join_of_below(lambda g: FY.leq(pairing(Q, X, Y, a, g), c))


def iota(Q: Presheaf, X: FinSet, Y: FinSet, a, c):
    """The internal hom iota(a, c) in Q(X -o Y): closed form when available, generators otherwise."""
    r = Q.iota_closed(X, Y, a, c)
    if r is not None:
        return r
    cache = Q.__dict__.setdefault("_iota_cache", {})
    key = (X.size, Y.size, a, c)
    r = cache.get(key)
    if r is None:
        r = cache[key] = iota_generators(Q, X, Y, a, c)
    return r


def internal_hom_oracle(Q: Presheaf, X: FinSet, Y: FinSet, a, c, limit: int = 4096):
    """join{b | <a, b> <= c} by enumerating Q(X -o Y); the adjunction is re-checked on every b."""
    W = hom_obj(X, Y)
    FW, FY = Q.fiber(W), Q.fiber(Y)
    if not FW.enumerable(limit):
        raise CarrierTooLarge(f"Q(X -o Y) has more than {limit} elements; use the closed form",
                              {"X": X.size, "Y": Y.size, "limit": limit})
    elems = FW.elements()
    below = [FY.leq(pairing(Q, X, Y, a, b), c) for b in elems]
    r = FW.join(b for b, ok in zip(elems, below) if ok)
    for b, ok in zip(elems, below):
        if ok != FW.leq(b, r):
            raise InternalLawViolation("pairing has no right adjoint at this argument",
                                       {"a": Q.fiber(X).show(a), "c": FY.show(c), "b": FW.show(b)})
    return r


def _omega(dual):
    return dual.omega if isinstance(dual, DualCandidate) else dual


def omega_map(Q: Presheaf, X: FinSet, dual, a):
    """omega_X(a) = iota_{X,0}(a, omega), an element of Q(X*). `dual` is a DualCandidate or omega itself."""
    return iota(Q, X, I, a, _omega(dual))


def lneg(Q: Presheaf, X: FinSet, dual, b):
    """The left Galois partner of omega_X: join{a | <a, b>_X <= omega}."""
    omega = _omega(dual)
    F0 = Q.fiber(I)
    cache = Q.__dict__.setdefault("_lneg_cache", {})
    key = (X.size, omega, b)
    r = cache.get(key)
    if r is None:
        r = cache[key] = Q.fiber(X).join_of_below(lambda g: F0.leq(pairing(Q, X, I, g, b), omega))
    return r


def _sh(Q, X, v):
    return Q.fiber(X).show(v)


@law("closed.adjunction", "<a, b> <= c  iff  b <= iota(a, c)", "<=>",
     X="set", Y="set", W="set", a=("elt", "X"), b=("elt", "W"), c=("elt", "Y"))
def _law_adjunction(ctx, X, Y, W, a, b, c):
    Q = ctx.presheaf
    p = pairing(Q, X, Y, a, b)
    r = iota(Q, X, Y, a, c)
    left, right = Q.fiber(Y).leq(p, c), Q.fiber(W).leq(b, r)
    return left == right, f"<a,b> = {_sh(Q, Y, p)} (<= c: {left})", f"iota(a,c) = {_sh(Q, W, r)} (b <= it: {right})"


@law("closed.oracle", "iota(a, c) = join{b | <a, b> <= c} (enumeration oracle)", "=",
     X="set", Y="set", a=("elt", "X"), c=("elt", "Y"))
def _law_oracle(ctx, X, Y, a, c):
    Q = ctx.presheaf
    W = hom_obj(X, Y)
    lhs, rhs = iota(Q, X, Y, a, c), internal_hom_oracle(Q, X, Y, a, c)
    return lhs == rhs, _sh(Q, W, lhs), _sh(Q, W, rhs)


@law("closed.closed_form", "closed-form iota(a, c) = generator join", "=",
     X="set", Y="set", a=("elt", "X"), c=("elt", "Y"))
def _law_closed_form(ctx, X, Y, a, c):
    Q = ctx.presheaf
    W = hom_obj(X, Y)
    lhs, rhs = Q.iota_closed(X, Y, a, c), iota_generators(Q, X, Y, a, c)
    return lhs == rhs, _sh(Q, W, lhs), _sh(Q, W, rhs)


@law("closed.mu_via_pairing", "mu(x, y) = <x, Q(eta)(y)>", "=", X="set", Y="set", x=("elt", "X"), y=("elt", "Y"))
def _law_mu_via_pairing(ctx, X, Y, x, y):
    Q = ctx.presheaf
    XY = tensor_obj(X, Y)
    lhs = Q.mu(X, Y, x, y)
    rhs = pairing(Q, X, XY, x, Q.act(_eta(Q.base_q, X.size, Y.size), y))
    return lhs == rhs, _sh(Q, XY, lhs), _sh(Q, XY, rhs)


@law("closed.unit", "Q(eta)(y) <= iota(x, mu(x, y))", "<=", X="set", Y="set", x=("elt", "X"), y=("elt", "Y"))
def _law_unit(ctx, X, Y, x, y):
    Q = ctx.presheaf
    XY = tensor_obj(X, Y)
    W = hom_obj(X, XY)
    lhs = Q.act(_eta(Q.base_q, X.size, Y.size), y)
    rhs = iota(Q, X, XY, x, Q.mu(X, Y, x, y))
    return Q.fiber(W).leq(lhs, rhs), _sh(Q, W, lhs), _sh(Q, W, rhs)


@law("closed.counit", "<x, iota(x, y)> <= y", "<=", X="set", Y="set", x=("elt", "X"), y=("elt", "Y"))
def _law_closed_counit(ctx, X, Y, x, y):
    Q = ctx.presheaf
    lhs = pairing(Q, X, Y, x, iota(Q, X, Y, x, y))
    return Q.fiber(Y).leq(lhs, y), _sh(Q, Y, lhs), _sh(Q, Y, y)


@law("closed.iota_reindex", "iota(Q(f)(a), c) = Q(f -o Z)^*(iota(a, c))", "=",
     X="set", X2="set", Z="set", f="mat", a=("elt", "X"), c=("elt", "Z"))
def _law_iota_reindex(ctx, X, X2, Z, f, a, c):
    Q = ctx.presheaf
    lhs = iota(Q, X2, Z, Q.act(f, a), c)
    rhs = Q.act_radj(hom_mor(f, identity(Z, Q.base_q)), iota(Q, X, Z, a, c))
    W = hom_obj(X2, Z)
    return lhs == rhs, _sh(Q, W, lhs), _sh(Q, W, rhs)


@law("closed.iota_reindex_iso", "iota(Q(f)(a), c) = Q(f^-1 -o Z)(iota(a, c)) for invertible f", "=",
     X="set", X2="set", Z="set", f="mat", a=("elt", "X"), c=("elt", "Z"))
def _law_iota_reindex_iso(ctx, X, X2, Z, f, a, c):
    Q = ctx.presheaf
    lhs = iota(Q, X2, Z, Q.act(f, a), c)
    rhs = Q.act(hom_mor(invert(f), identity(Z, Q.base_q)), iota(Q, X, Z, a, c))
    W = hom_obj(X2, Z)
    return lhs == rhs, _sh(Q, W, lhs), _sh(Q, W, rhs)


@law("closed.omega_natural", "omega_Y(Q(f)(a)) = Q(f*)^*(omega_X(a))", "=",
     X="set", X2="set", U="set", f="mat", a=("elt", "X"), w=("elt", "U"))
def _law_omega_natural(ctx, X, X2, U, f, a, w):
    Q = ctx.presheaf
    lhs = omega_map(Q, X2, w, Q.act(f, a))
    rhs = Q.act_radj(dual_mor(f), omega_map(Q, X, w, a))
    D = dual_obj(X2)
    return lhs == rhs, _sh(Q, D, lhs), _sh(Q, D, rhs)


@law("total.hom_compose", "f: (X,a) -> (Y,b) and g: (Y,b) -> (Z,c) give f.g: (X,a) -> (Z,c)", "holds",
     X="set", Y="set", Z="set", f="mat", g="mat", a=("elt", "X"), b=("elt", "Y"), c=("elt", "Z"))
def _law_hom_compose(ctx, X, Y, Z, f, g, a, b, c):
    Q = ctx.presheaf
    A, B, C = TotalObj(X, a), TotalObj(Y, b), TotalObj(Z, c)
    premise = is_morphism(Q, A, f, B) is None and is_morphism(Q, B, g, C) is None
    concl = is_morphism(Q, A, compose(f, g), C) is None
    return (not premise) or concl, f"premise {premise}", f"composite is a morphism: {concl}"


def check_closed_structure(Q: Presheaf, budget: Budget = Budget(), ctx: LawContext | None = None,
                           oracle_limit: int = 729, coherence: bool = True,
                           lax_iota: bool = True) -> list[Verdict]:
    """Adjunction, oracle agreement, the unit and counit inequalities, mu definability,
    the right-adjoint law for iota, naturality of omega, Fig.-1 coherence and lax iota."""
    ctx = ctx or LawContext(Q)
    rng = budget.rng()
    objs = objects(budget)
    q = Q.base_q
    lim = budget.max_elems

    def el(X, cap=None):
        return Q.fiber(X).sample(lim if cap is None else min(lim, cap), rng)

    out = []
    adj = Checker(ctx, "closed.adjunction", budget)
    orc = Checker(ctx, "closed.oracle", budget)
    cf = Checker(ctx, "closed.closed_form", budget)
    mud = Checker(ctx, "closed.mu_via_pairing", budget)
    u0 = Checker(ctx, "closed.unit", budget)
    c0 = Checker(ctx, "closed.counit", budget)
    oracle_skipped = too_big = 0
    for X, Y in product(objs, repeat=2):
        if not fits(Q, X.size ** 3 * Y.size):
            too_big += 1
            continue
        W = hom_obj(X, Y)
        as_, e1 = el(X)
        cs, e2 = el(Y)
        bs, e3 = el(W)
        for ch in (adj,):
            ch.exhaustive &= e1 and e2 and e3
        for ch in (orc, cf, mud, u0, c0):
            ch.exhaustive &= e1 and e2
        with_oracle = Q.fiber(W).enumerable(oracle_limit)
        if not with_oracle:
            oracle_skipped += 1
        for a in as_:
            for c in cs:
                for b in bs:
                    if not adj.check(X=X, Y=Y, W=W, a=a, b=b, c=c):
                        break
                if with_oracle:
                    orc.check(X=X, Y=Y, a=a, c=c)
                if Q.iota_closed(X, Y, a, c) is not None:
                    cf.check(X=X, Y=Y, a=a, c=c)
                c0.check(X=X, Y=Y, x=a, y=c)
                mud.check(X=X, Y=Y, x=a, y=c)
                u0.check(X=X, Y=Y, x=a, y=c)
    if oracle_skipped:
        orc.exhaustive = False
        orc.note = f"{oracle_skipped} object pairs beyond the oracle limit {oracle_limit}"
    if too_big:
        for ch in (adj, orc, cf, mud, u0, c0):
            ch.exhaustive = False
            ch.note = (ch.note + "; " if ch.note else "") + \
                f"{too_big} object pairs beyond {Q.max_points} points skipped"
    out += [adj.verdict(), orc.verdict("oracle out of budget on every pair"),
            cf.verdict("instance has no closed form"), mud.verdict(), u0.verdict(), c0.verdict()]

    ra = Checker(ctx, "closed.iota_reindex", budget)
    rai = Checker(ctx, "closed.iota_reindex_iso", budget)
    on = Checker(ctx, "closed.omega_natural", budget)
    small = min(lim, 27)
    ra_skipped = 0
    for X, X2, Z in product(objs, repeat=3):
        if not fits(Q, max(X.size, X2.size) ** 2 * Z.size):
            ra_skipped += 1
            continue
        fs, e0 = homs(X, X2, q, budget, rng)
        as_, e1 = el(X, small)
        cs, e2 = el(Z, small)
        ra.exhaustive &= e0 and e1 and e2
        for f in fs:
            inv = is_invertible(f)
            for a, c in product(as_, cs):
                if not ra.check(X=X, X2=X2, Z=Z, f=f, a=a, c=c):
                    break
                if inv:
                    rai.check(X=X, X2=X2, Z=Z, f=f, a=a, c=c)
    if ra_skipped:
        ra.exhaustive = rai.exhaustive = False
        ra.note = rai.note = f"{ra_skipped} triples beyond {Q.max_points} points skipped"
    ws, ew = el(I, small)
    for X, X2 in product(objs, repeat=2):
        fs, e0 = homs(X, X2, q, budget, rng)
        as_, e1 = el(X, small)
        on.exhaustive &= e0 and e1 and ew
        for f, a, w in product(fs, as_, ws):
            if not on.check(X=X, X2=X2, U=I, f=f, a=a, w=w):
                break
    out += [ra.verdict(), rai.verdict(), on.verdict()]

    hc = Checker(ctx, "total.hom_compose", budget)
    tiny = Budget(budget.max_obj, 6, budget.max_elems, budget.seed)
    for X, Y, Z in product(objs, repeat=3):
        fs, _ = homs(X, Y, q, tiny, rng)
        gs, _ = homs(Y, Z, q, tiny, rng)
        as_, _ = el(X, 4)
        bs, _ = el(Y, 4)
        cs, _ = el(Z, 4)
        for f, g, a, b, c in product(fs, gs, as_, bs, cs):
            hc.check(X=X, Y=Y, Z=Z, f=f, g=g, a=a, b=b, c=c)
    hc.exhaustive = False
    out.append(hc.verdict())

    if coherence:
        out += check_coherence(Q, budget, ctx)
    if lax_iota:
        out += check_lax_extranatural(ctx, "iota", Budget(budget.max_obj, min(budget.max_morphisms, 16),
                                                          min(lim, 27), budget.seed))
    return out


# dualizing objects

@law("dual.galois", "a <= lneg(b)  iff  <a, b> <= w  iff  b <= omega_X(a)", "<=>",
     X="set", D="set", U="set", a=("elt", "X"), b=("elt", "D"), w=("elt", "U"))
def _law_galois(ctx, X, D, U, a, b, w):
    Q = ctx.presheaf
    t1 = Q.fiber(X).leq(a, lneg(Q, X, w, b))
    t2 = Q.fiber(I).leq(pairing(Q, X, I, a, b), w)
    t3 = Q.fiber(D).leq(b, omega_map(Q, X, w, a))
    return t1 == t2 == t3, f"a <= lneg(b): {t1}", f"<a,b> <= w: {t2}; b <= omega(a): {t3}"


@law("dual.antitone", "a <= a' implies omega_X(a') <= omega_X(a)", "holds",
     X="set", U="set", a=("elt", "X"), a2=("elt", "X"), w=("elt", "U"))
def _law_antitone(ctx, X, U, a, a2, w):
    Q = ctx.presheaf
    D = dual_obj(X)
    if not Q.fiber(X).leq(a, a2):
        return True, "premise false", ""
    lhs, rhs = omega_map(Q, X, w, a2), omega_map(Q, X, w, a)
    return Q.fiber(D).leq(lhs, rhs), _sh(Q, D, lhs), _sh(Q, D, rhs)


@law("dual.counit", "<lneg(b), b> <= w", "<=", X="set", D="set", U="set", b=("elt", "D"), w=("elt", "U"))
def _law_counit(ctx, X, D, U, b, w):
    Q = ctx.presheaf
    lhs = pairing(Q, X, I, lneg(Q, X, w, b), b)
    return Q.fiber(I).leq(lhs, w), _sh(Q, I, lhs), _sh(Q, I, w)


@law("dual.A_left", "lneg(omega_X(a)) = a", "=", X="set", U="set", a=("elt", "X"), w=("elt", "U"))
def _law_a_left(ctx, X, U, a, w):
    Q = ctx.presheaf
    lhs = lneg(Q, X, w, omega_map(Q, X, w, a))
    return lhs == a, _sh(Q, X, lhs), _sh(Q, X, a)


@law("dual.A_right", "omega_X(lneg(b)) = b", "=", X="set", D="set", U="set", b=("elt", "D"), w=("elt", "U"))
def _law_a_right(ctx, X, D, U, b, w):
    Q = ctx.presheaf
    lhs = omega_map(Q, X, w, lneg(Q, X, w, b))
    return lhs == b, _sh(Q, D, lhs), _sh(Q, D, b)


@law("dual.B", "Q(j_X)(a) = omega_X*(omega_X(a))", "=", X="set", U="set", a=("elt", "X"), w=("elt", "U"))
def _law_b(ctx, X, U, a, w):
    Q = ctx.presheaf
    D = dual_obj(X)
    DD = dual_obj(D)
    lhs = Q.act(_jmap(Q.base_q, X.size), a)
    rhs = omega_map(Q, D, w, omega_map(Q, X, w, a))
    return lhs == rhs, _sh(Q, DD, lhs), _sh(Q, DD, rhs)


@law("dual.lift", "Q(j_X)(a) <= omega_X*(omega_X(a))", "<=", X="set", U="set", a=("elt", "X"), w=("elt", "U"))
def _law_lift(ctx, X, U, a, w):
    Q = ctx.presheaf
    DD = dual_obj(dual_obj(X))
    lhs = Q.act(_jmap(Q.base_q, X.size), a)
    rhs = omega_map(Q, dual_obj(X), w, omega_map(Q, X, w, a))
    return Q.fiber(DD).leq(lhs, rhs), _sh(Q, DD, lhs), _sh(Q, DD, rhs)


def criterion_a(Q: Presheaf, X: FinSet, w, budget: Budget, rng=None):
    """(holds, exhaustive): omega_X is inverted by lneg on both sides."""
    rng = rng or budget.rng()
    D = dual_obj(X)
    as_, e1 = Q.fiber(X).sample(budget.max_elems, rng)
    bs, e2 = Q.fiber(D).sample(budget.max_elems, rng)
    ok = all(lneg(Q, X, w, omega_map(Q, X, w, a)) == a for a in as_) and \
        all(omega_map(Q, X, w, lneg(Q, X, w, b)) == b for b in bs)
    return ok, e1 and e2


def criterion_b(Q: Presheaf, X: FinSet, w, budget: Budget, rng=None):
    """(holds, exhaustive): j_X invertible and Q(j_X) = omega_X* . omega_X."""
    rng = rng or budget.rng()
    if not is_invertible(_jmap(Q.base_q, X.size)):
        return False, True
    as_, e1 = Q.fiber(X).sample(budget.max_elems, rng)
    j = _jmap(Q.base_q, X.size)
    D = dual_obj(X)
    return all(Q.act(j, a) == omega_map(Q, D, w, omega_map(Q, X, w, a)) for a in as_), e1


@law("dual.A_iff_B", "criterion A (omega_X invertible) agrees with criterion B (Q(j_X) = omega omega)", "=",
     X="set", U="set", w=("elt", "U"))
def _law_a_iff_b(ctx, X, U, w):
    Q = ctx.presheaf
    b = ctx.extras.get("budget", Budget())
    ra, _ = criterion_a(Q, X, w, b)
    rb, _ = criterion_b(Q, X, w, b)
    return ra == rb, f"A holds: {ra}", f"B holds: {rb}"


def check_dualizing(Q: Presheaf, dual: DualCandidate, budget: Budget = Budget(),
                    ctx: LawContext | None = None) -> tuple[list[Verdict], bool]:
    """Both dualizing criteria on every object within budget, their agreement, and the
    Galois-connection laws. Returns (verdicts, dualizing)."""
    ctx = ctx or LawContext(Q, budget=budget)
    ctx.extras.setdefault("budget", budget)
    rng = budget.rng()
    w = dual.omega
    out = []
    names = ["dual.A_left", "dual.A_right", "dual.B", "dual.lift", "dual.galois",
             "dual.antitone", "dual.counit", "dual.A_iff_B"]
    ch = {n: Checker(ctx, n, budget) for n in names}
    for X in objects(budget):
        D = dual_obj(X)
        as_, e1 = Q.fiber(X).sample(budget.max_elems, rng)
        bs, e2 = Q.fiber(D).sample(budget.max_elems, rng)
        for c in ch.values():
            c.exhaustive &= e1 and e2
        for a in as_:
            ch["dual.A_left"].check(X=X, U=I, a=a, w=w)
            ch["dual.B"].check(X=X, U=I, a=a, w=w)
            ch["dual.lift"].check(X=X, U=I, a=a, w=w)
            for b in bs:
                ch["dual.galois"].check(X=X, D=D, U=I, a=a, b=b, w=w)
        for b in bs:
            ch["dual.A_right"].check(X=X, D=D, U=I, b=b, w=w)
            ch["dual.counit"].check(X=X, D=D, U=I, b=b, w=w)
        small = as_[:27]
        for a, a2 in product(small, small):
            ch["dual.antitone"].check(X=X, U=I, a=a, a2=a2, w=w)
        ch["dual.A_iff_B"].check(X=X, U=I, w=w)
    out = [c.verdict() for c in ch.values()]
    dualizing = not (ch["dual.A_left"].failed or ch["dual.A_right"].failed)
    return out, dualizing


@law("dual.pairing_twist", "<a, b>_X = <b, Q(j_X)(a)>_X*", "=",
     X="set", D="set", a=("elt", "X"), b=("elt", "D"))
def _law_twist(ctx, X, D, a, b):
    Q = ctx.presheaf
    lhs = pairing(Q, X, I, a, b)
    rhs = pairing(Q, D, I, b, Q.act(_jmap(Q.base_q, X.size), a))
    return lhs == rhs, _sh(Q, I, lhs), _sh(Q, I, rhs)


@law("dual.lneg_via_j", "lneg(b) = Q(j_X^-1)(omega_X*(b))", "=",
     X="set", D="set", U="set", b=("elt", "D"), w=("elt", "U"))
def _law_lneg_via_j(ctx, X, D, U, b, w):
    Q = ctx.presheaf
    lhs = lneg(Q, X, w, b)
    rhs = Q.act(_jinv(Q.base_q, X.size), omega_map(Q, D, w, b))
    return lhs == rhs, _sh(Q, X, lhs), _sh(Q, X, rhs)


def pairing_twist_check(Q: Presheaf, dual: DualCandidate | None = None, budget: Budget = Budget(),
                        ctx: LawContext | None = None) -> list[Verdict]:
    """The twisted pairing identity; when it holds, also lneg = Q(j^-1) . omega_X*.

    Without a dual candidate the second law is run for every w in Q(0) within budget.
    """
    ctx = ctx or LawContext(Q)
    rng = budget.rng()
    tw = Checker(ctx, "dual.pairing_twist", budget)
    lj = Checker(ctx, "dual.lneg_via_j", budget)
    ws = [dual.omega] if dual is not None else Q.fiber(I).sample(budget.max_elems, rng)[0]
    for X in objects(budget):
        D = dual_obj(X)
        as_, e1 = Q.fiber(X).sample(budget.max_elems, rng)
        bs, e2 = Q.fiber(D).sample(budget.max_elems, rng)
        tw.exhaustive &= e1 and e2
        lj.exhaustive &= e2
        for a, b in product(as_, bs):
            if not tw.check(X=X, D=D, a=a, b=b):
                break
    if not tw.failed:
        for X in objects(budget):
            D = dual_obj(X)
            bs, _ = Q.fiber(D).sample(budget.max_elems, rng)
            for b, w in product(bs, ws):
                if not lj.check(X=X, D=D, U=I, b=b, w=w):
                    break
        return [tw.verdict(), lj.verdict()]
    return [tw.verdict(), lj.verdict("pairing twist failed first")]
