"""Quantale-level laws in the replayable registry, for `check-quantale` and `girard`.

These re-check a quantale that may not have gone through :func:`check_quantale`,
so a bad table shows up as a failing verdict with a witness instead of an exception.
"""
from __future__ import annotations

from itertools import product

import numpy as np

from .laws import Budget, Checker, LawContext, Verdict, law
from .quantale import FinQuantale, check_quantale, is_dualizing


def _lab(q: FinQuantale, a: int) -> str:
    return q.label(int(a))


@law("quantale.commutative", "a * b = b * a", "=", a="qelt", b="qelt")
def _law_comm(ctx, a, b):
    q = ctx.base_q
    return q.mul(a, b) == q.mul(b, a), _lab(q, q.mul(a, b)), _lab(q, q.mul(b, a))


@law("quantale.associative", "(a * b) * c = a * (b * c)", "=", a="qelt", b="qelt", c="qelt")
def _law_assoc(ctx, a, b, c):
    q = ctx.base_q
    lhs, rhs = q.mul(q.mul(a, b), c), q.mul(a, q.mul(b, c))
    return lhs == rhs, _lab(q, lhs), _lab(q, rhs)


@law("quantale.unit", "e * a = a", "=", a="qelt")
def _law_unit(ctx, a):
    q = ctx.base_q
    return q.mul(q.unit, a) == a, _lab(q, q.mul(q.unit, a)), _lab(q, a)


@law("quantale.bottom", "a * bottom = bottom", "=", a="qelt")
def _law_bottom(ctx, a):
    q = ctx.base_q
    lhs = q.mul(a, q.bottom)
    return lhs == q.bottom, _lab(q, lhs), _lab(q, q.bottom)


@law("quantale.binary_join", "a * (b v c) = (a * b) v (a * c)", "=", a="qelt", b="qelt", c="qelt")
def _law_join(ctx, a, b, c):
    q = ctx.base_q
    lhs = q.mul(a, q.join([b, c]))
    rhs = q.join([q.mul(a, b), q.mul(a, c)])
    return lhs == rhs, _lab(q, lhs), _lab(q, rhs)


@law("quantale.residuation", "a * c <= b  iff  c <= a -o b", "<=>", a="qelt", b="qelt", c="qelt")
def _law_residuation(ctx, a, b, c):
    q = ctx.base_q
    lhs, rhs = q.le(q.mul(a, c), b), q.le(c, q.residual(a, b))
    return lhs == rhs, f"{_lab(q, q.mul(a, c))} <= {_lab(q, b)}: {lhs}", \
        f"{_lab(q, c)} <= {_lab(q, q.residual(a, b))}: {rhs}"


def check_quantale_laws(q: FinQuantale, budget: Budget = Budget(max_obj=0)) -> list[Verdict]:
    """Every quantale law and the residuation adjunction, exhaustively over the carrier."""
    ctx = LawContext(None, base_q=q)
    els = range(q.n)
    out = []
    for lid, arity in [("quantale.commutative", 2), ("quantale.unit", 1), ("quantale.associative", 3),
                       ("quantale.bottom", 1), ("quantale.binary_join", 3), ("quantale.residuation", 3)]:
        c = Checker(ctx, lid, budget, note="binary joins and the empty join generate all joins")
        names = ["a", "b", "c"][:arity]
        for vals in product(els, repeat=arity):
            if not c.check(**dict(zip(names, vals))):
                break
        out.append(c.verdict())
    return out


# the Girard quotient, recomputed without the validating constructor

def double_negation(q: FinQuantale, w: int) -> list[int]:
    return [q.residual(q.residual(a, w), w) for a in range(q.n)]


def quotient_tables(q: FinQuantale, w: int) -> tuple[list[int], int, np.ndarray]:
    """(fixed points, unit as a position, multiplication as positions) of a -> (a -o w) -o w."""
    j = double_negation(q, w)
    fixed = [a for a in range(q.n) if j[a] == a]
    pos = {a: i for i, a in enumerate(fixed)}
    mult = np.array([[pos.get(j[q.mul(a, b)], -1) for b in fixed] for a in fixed], dtype=np.int64)
    return fixed, pos.get(j[q.unit], -1), mult


@law("girard.contains_omega", "omega is fixed by (- -o omega) -o omega", "holds", w="qelt")
def _law_contains(ctx, w):
    q = ctx.base_q
    jw = double_negation(q, w)[w]
    return jw == w, f"j(omega) = {_lab(q, jw)}", f"omega = {_lab(q, w)}"


@law("girard.quantale", "the fixed points with j(a * b) and j(e) form a quantale", "holds", w="qelt")
def _law_quotient(ctx, w):
    q = ctx.base_q
    fixed, unit, mult = quotient_tables(q, w)
    if unit < 0 or (mult < 0).any():
        return False, "multiplication leaves the fixed points", "closed"
    try:
        check_quantale(q.lat.sublattice(fixed), unit, mult)
    except Exception as exc:           # noqa: BLE001 - any failure is the verdict
        return False, f"{type(exc).__name__}: {exc}", "a quantale"
    return True, f"{len(fixed)} elements", "a quantale"


@law("girard.dualizing", "the quotient is Girard at omega", "holds", w="qelt")
def _law_girard_dualizing(ctx, w):
    q = ctx.base_q
    fixed, unit, mult = quotient_tables(q, w)
    if w not in fixed or unit < 0 or (mult < 0).any():
        return False, "quotient undefined", "dualizing"
    qj = FinQuantale(q.lat.sublattice(fixed), unit, mult)
    bad = is_dualizing(qj, fixed.index(w))
    return bad is None, str(bad), "dualizing"


def check_girard_laws(q: FinQuantale, omegas, budget: Budget = Budget(max_obj=0)) -> list[Verdict]:
    ctx = LawContext(None, base_q=q)
    out = []
    for lid in ("girard.contains_omega", "girard.quantale", "girard.dualizing"):
        c = Checker(ctx, lid, budget)
        for w in omegas:
            if not c.check(w=w):
                break
        out.append(c.verdict())
    return out


def quotient_summary(q: FinQuantale, w: int) -> dict:
    """Carrier, unit and multiplication table of the quotient, by label."""
    fixed, unit, mult = quotient_tables(q, w)
    labels = [q.label(a) for a in fixed]
    return {"omega": q.label(w), "carrier": labels,
            "unit": labels[unit] if unit >= 0 else None,
            "mult": [[labels[v] if v >= 0 else None for v in row] for row in mult.tolist()]}
