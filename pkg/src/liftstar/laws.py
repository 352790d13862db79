"""Verdicts, budgets and the law registry shared by every checker.

A law is a named predicate ``fn(ctx, **inputs) -> (holds, lhs, rhs)``. Checkers
loop over inputs and record the first counterexample; because inputs are encoded
through the law's declared types, every witness can be replayed later.
"""
from __future__ import annotations

import json
from dataclasses import asdict, dataclass, field
from typing import Any, Callable

import numpy as np

from .relbase import FinSet, QMat


@dataclass(frozen=True)
class Budget:
    max_obj: int = 2            # largest base object |X| enumerated
    max_morphisms: int = 32     # morphisms per hom-set before sampling kicks in
    max_elems: int = 4096       # fiber elements per object before sampling kicks in
    seed: int = 0

    def rng(self) -> np.random.Generator:
        return np.random.default_rng(self.seed)

    def as_dict(self) -> dict:
        return asdict(self)


@dataclass
class Verdict:
    law_id: str
    statement: str
    status: str                 # pass | fail | skip
    cases: int = 0
    exhaustive: bool = True
    witness: dict | None = None
    budget: dict = field(default_factory=dict)
    note: str = ""
    scope: str = ""             # which subject of a multi-subject run, e.g. "lukasiewicz3" or "omega=0"
    ctx: Any = field(default=None, repr=False, compare=False)   # kept in-process for replay

    def __getstate__(self):
        state = dict(self.__dict__)
        state["ctx"] = None
        return state

    @property
    def ok(self) -> bool:
        return self.status != "fail"

    def record(self) -> dict:
        out = {"law_id": self.law_id, "statement": self.statement, "status": self.status,
               **({"scope": self.scope} if self.scope else {}),
               "cases": self.cases, "exhaustive": self.exhaustive, "budget": self.budget}
        if self.witness is not None:
            out["witness"] = self.witness
        if self.note:
            out["note"] = self.note
        return out

    def line(self) -> str:
        scope = "exhaustive" if self.exhaustive else "sampled"
        where = f" <{self.scope}>" if self.scope else ""
        s = f"[{self.status.upper():4}] {self.law_id}{where}: {self.statement} ({self.cases} cases, {scope})"
        if self.note:
            s += f" -- {self.note}"
        if self.witness is not None:
            w = self.witness
            s += f"\n        witness: {json.dumps(w.get('inputs', w), sort_keys=True)}"
            if "lhs" in w:
                s += f"\n        lhs = {w['lhs']}  {w.get('relation', '?')}  rhs = {w['rhs']}  (fails)"
        return s


@dataclass
class Report:
    command: str
    context: dict
    budget: dict
    verdicts: list = field(default_factory=list)
    info: dict = field(default_factory=dict)

    def add(self, v: Verdict | list) -> None:
        if isinstance(v, list):
            self.verdicts.extend(v)
        else:
            self.verdicts.append(v)

    @property
    def ok(self) -> bool:
        return all(v.ok for v in self.verdicts)

    def records(self) -> list[dict]:
        return [v.record() for v in self.verdicts]

    def render(self) -> str:
        lines = [f"command: {self.command}", f"context: {json.dumps(self.context, sort_keys=True)}",
                 f"budget: {json.dumps(self.budget, sort_keys=True)}"]
        for k, v in self.info.items():
            lines.append(f"{k}: {v}")
        lines += [v.line() for v in self.verdicts]
        n_fail = sum(v.status == "fail" for v in self.verdicts)
        lines.append(f"result: {'PASS' if n_fail == 0 else 'FAIL'} "
                     f"({len(self.verdicts) - n_fail}/{len(self.verdicts)} laws hold)")
        return "\n".join(lines)


# law registry

@dataclass(frozen=True)
class Law:
    law_id: str
    statement: str
    relation: str                         # "=", "<=", "<=>" or "holds"
    types: dict     # input name -> "set" | "mat" | "int" | "qelt" | ("elt", set-name[, presheaf-key])
    fn: Callable


LAWS: dict[str, Law] = {}


def law(law_id: str, statement: str, relation: str, **types):
    def deco(fn):
        LAWS[law_id] = Law(law_id, statement, relation, types, fn)
        return fn
    return deco


def encode_mat(ctx, m: QMat) -> dict:
    q = m.q
    return {"dom": m.dom.size, "cod": m.cod.size,
            "entries": [[q.label(int(v)) for v in row] for row in m.entries]}


def decode_mat(ctx, d: dict) -> QMat:
    q = ctx.base_q
    ent = [[q.index(v) for v in row] for row in d["entries"]]
    return QMat(FinSet(d["dom"]), FinSet(d["cod"]), q, np.array(ent, dtype=np.int64).reshape(d["dom"], d["cod"]))


def encode_inputs(ctx, lw: Law, inputs: dict) -> dict:
    out = {}
    for name, t in lw.types.items():
        v = inputs[name]
        if t == "set":
            out[name] = v.size
        elif t == "mat":
            out[name] = encode_mat(ctx, v)
        elif t == "int":
            out[name] = int(v)
        elif t == "qelt":
            out[name] = ctx.base_q.label(int(v))
        elif isinstance(t, tuple) and t[0] == "elt":
            key = t[2] if len(t) > 2 else "Q"
            X = inputs[t[1]]
            out[name] = ctx.presheaf_for(key).fiber(X.size).to_json(v)
        else:
            raise ValueError(f"unknown input type {t!r}")
    return out


def decode_inputs(ctx, lw: Law, enc: dict) -> dict:
    out = {}
    for name, t in lw.types.items():
        if t == "set":
            out[name] = FinSet(enc[name])
    for name, t in lw.types.items():
        v = enc[name]
        if t == "mat":
            out[name] = decode_mat(ctx, v)
        elif t == "int":
            out[name] = int(v)
        elif t == "qelt":
            out[name] = ctx.base_q.index(v)
        elif isinstance(t, tuple) and t[0] == "elt":
            key = t[2] if len(t) > 2 else "Q"
            out[name] = ctx.presheaf_for(key).fiber(out[t[1]].size).from_json(v)
    return out


def evaluate(ctx, law_id: str, inputs: dict):
    lw = LAWS[law_id]
    return lw.fn(ctx, **inputs)


def make_witness(ctx, law_id: str, inputs: dict, lhs, rhs) -> dict:
    lw = LAWS[law_id]
    return {"law_id": law_id, "relation": lw.relation, "inputs": encode_inputs(ctx, lw, inputs),
            "lhs": lhs, "rhs": rhs}


class Checker:
    """Accumulates cases for one law and stops at the first failure."""

    def __init__(self, ctx, law_id: str, budget: Budget, exhaustive: bool = True, note: str = ""):
        self.ctx, self.law_id, self.budget = ctx, law_id, budget
        self.cases = 0
        self.exhaustive = exhaustive
        self.witness = None
        self.note = note

    @property
    def failed(self) -> bool:
        return self.witness is not None

    def check(self, **inputs) -> bool:
        """Evaluate one case; returns False once a counterexample has been found."""
        if self.witness is not None:
            return False
        self.cases += 1
        holds, lhs, rhs = evaluate(self.ctx, self.law_id, inputs)
        if not holds:
            self.witness = make_witness(self.ctx, self.law_id, inputs, lhs, rhs)
            return False
        return True

    def fail_with(self, witness: dict) -> None:
        if self.witness is None:
            self.witness = witness

    def verdict(self, skip_reason: str | None = None) -> Verdict:
        """Pass/fail verdict; ``skip_reason`` is used only when no case ran."""
        lw = LAWS[self.law_id]
        if skip_reason is not None and self.cases == 0:
            status, note = "skip", skip_reason
        else:
            status, note = ("fail" if self.witness else "pass"), self.note
        return Verdict(self.law_id, lw.statement, status, self.cases, self.exhaustive,
                       self.witness, self.budget.as_dict(), note, ctx=self.ctx)


def replay(ctx, witness: dict):
    """Re-run a recorded witness; returns (holds, lhs, rhs) with lhs/rhs rendered as in the record."""
    lw = LAWS[witness["law_id"]]
    inputs = decode_inputs(ctx, lw, witness["inputs"])
    return lw.fn(ctx, **inputs)


def canonical_json(obj: Any) -> str:
    return json.dumps(obj, sort_keys=True, separators=(",", ":"), ensure_ascii=False)


class LawContext:
    """What a law needs to evaluate: the presheaf under test plus named extras.

    ``spec`` (optional) is the JSON description the context was built from; it is what
    makes a witness replayable from a file rather than only in-process.
    """

    def __init__(self, presheaf, spec: dict | None = None, base_q=None, **extras):
        self.presheaf = presheaf
        self.base_q = base_q if base_q is not None else presheaf.base_q
        self.spec = spec
        self.extras = extras

    def presheaf_for(self, key: str):
        return self.presheaf if key == "Q" else self.extras[key]

    def __getitem__(self, key):
        return self.extras[key]
