"""Command-line interface: load the corpus, run one family of checks, report.

Exit codes: 0 when every law holds, 1 when some law is violated (the report carries
witnesses), 2 when the input is malformed.
"""
from __future__ import annotations

import argparse
import hashlib
import json
import sys
import time
from concurrent.futures import ProcessPoolExecutor
from pathlib import Path

from . import __version__
from .corpus import CorpusFile, load, serialize
from .errors import (CarrierTooLarge, CorpusError, InternalLawViolation, LiftError, ShapeMismatch,
                     UnsupportedFunctor)
from .fixpoint import (EndoLift, check_fixpoint_duality, enumerate_coalg_category, lift_initial_algebra,
                       lift_terminal_coalgebra)
from .laws import Budget, Report, Verdict, canonical_json, replay
from .nucleus import (NucleusFamily, QjPresheaf, check_nucleus_laws, girard_consistency, qj_verdicts,
                      representation_check)
from .presheaf import Endofunctor, check_presheaf, nuts_presheaf, orth_presheaf, powq_presheaf
from .qlaws import check_girard_laws, check_quantale_laws, quotient_summary
from .quantale import FinQuantale, check_quantale, is_dualizing
from .relbase import FinSet, identity
from .total import DualCandidate, check_closed_structure, check_dualizing

COMMANDS = ("check-quantale", "girard", "check-dualizing", "check-closed", "nucleus", "represent",
            "fixpoint", "lift-check")
DEFAULT_MAX_OBJ = {"powq": 2, "nuts": 3, "orth": 2}
I = FinSet.unit()


class UsageError(LiftError):
    """Malformed command-line input (exit code 2)."""


# building blocks shared by the jobs

def make_presheaf(q: FinQuantale, instance: str, base: str):
    if instance == "powq":
        return powq_presheaf(q, base)
    if instance == "orth":
        return orth_presheaf(q, base)
    if instance == "nuts":
        if q.n != 2 or q.mult.tolist() != [[0, 0], [0, 1]]:
            raise UsageError(f"the nuts instance lives over Rel; use the boolean quantale, not {q.name}")
        return nuts_presheaf()
    raise UsageError(f"unknown instance {instance!r}")


def parse_omega(Q, text: str | None, instance: str):
    """omega as an element of Q(I): a label for powq, JSON for the other instances."""
    if text is None:
        if instance == "nuts":
            return Q.fiber(I).from_json([[0]])          # up-closure of {{*}}
        raise UsageError("--omega is required for this instance")
    if instance == "powq":
        q = Q.q
        if text not in q.labels:
            raise UsageError(f"unknown element {text!r}; labels are {list(q.labels)}")
        return (q.index(text),)
    try:
        return Q.fiber(I).from_json(json.loads(text))
    except (json.JSONDecodeError, ValueError, KeyError, TypeError) as exc:
        raise UsageError(f"cannot read --omega {text!r} as an element of Q(I): {exc}") from None


def fiber_quantale(Q) -> FinQuantale:
    """Q(I) with mu_{I,I} and the unit, as a finite quantale."""
    lat, elems, pos = Q.fiber(I).materialize()
    mult = [[pos[Q.mu(I, I, a, b)] for b in elems] for a in elems]
    return check_quantale(lat, pos[Q.unit()], mult, f"{Q.name}(I)")


def _internal(exc: InternalLawViolation, budget: Budget) -> Verdict:
    """A theorem-level failure raised mid-construction, as a failing verdict."""
    w = exc.witness if isinstance(exc.witness, dict) else {"detail": exc.witness}
    return Verdict("internal", "construction succeeded without violating a theorem", "fail",
                   1, True, {"law_id": "internal", "inputs": w, "lhs": str(exc), "rhs": "no violation",
                             "relation": "holds"}, budget.as_dict())


# jobs: each returns (verdicts, info) and is picklable for --parallel

def job_quantale(q: FinQuantale, budget: Budget):
    return check_quantale_laws(q, budget), {}


def job_girard(q: FinQuantale, w: int, budget: Budget):
    vs = check_girard_laws(q, [w], budget)
    info = {"quotient": canonical_json(quotient_summary(q, w))} if all(v.ok for v in vs) else {}
    return vs, info


def job_dualizing(q, instance, base, omega, budget):
    Q = make_presheaf(q, instance, base)
    vs, dualizing = check_dualizing(Q, DualCandidate(parse_omega(Q, omega, instance)), budget)
    return vs, {"dualizing": "yes" if dualizing else "no"}


def job_closed(q, instance, base, budget):
    Q = make_presheaf(q, instance, base)
    vs = check_closed_structure(Q, budget)
    info = {}
    if any(v.status == "fail" for v in vs):
        info["alarm"] = ("a closed-structure law failed; these laws are theorems, so the input "
                         "or the implementation is wrong")
    return vs, info


def job_nucleus(q, instance, base, omega, budget):
    Q = make_presheaf(q, instance, base)
    fam = NucleusFamily(Q, DualCandidate(parse_omega(Q, omega, instance)))
    vs = check_nucleus_laws(fam, budget)
    info = {}
    try:
        Qj = QjPresheaf(fam)
        vs += qj_verdicts(Qj, budget)
        info["Q^j(1)"] = "[" + ", ".join(Qj.fiber(I).show(a) for a in Qj.fiber(I).elements()) + "]"
        info["unit^j"] = Qj.fiber(I).show(Qj.unit())
    except InternalLawViolation as exc:
        vs.append(_internal(exc, budget))
    if instance == "powq":
        v, _ = girard_consistency(q, parse_omega(Q, omega, instance)[0], base)
        vs.append(v)
    return vs, info


def job_represent(q, instance, base, omega, budget):
    if instance != "powq":
        raise UsageError("represent works over the powq instance")
    Q = make_presheaf(q, instance, base)
    w = parse_omega(Q, omega, instance)[0]
    vs = representation_check(q, w, budget, base)
    info = {}
    if len(vs) == 2 and any(v.status == "fail" for v in vs):
        info["precondition"] = f"omega = {q.label(w)} is not dualizing; representation not attempted"
    return vs, info


def make_lift(q: FinQuantale, fields: dict, base: str) -> EndoLift:
    Q = powq_presheaf(q, base)
    kind = fields["kind"]
    if kind == "identity":
        return EndoLift.identity(Q, fields.get("psi", "id"))
    A = FinSet(fields["A"])
    theta = Q.fiber(A).from_json(fields["theta"])
    if kind == "constant":
        return EndoLift.constant(Q, A, theta)
    if kind == "product":
        return EndoLift.product(Q, A, theta)
    raise UnsupportedFunctor(f"unsupported functor kind {kind!r}", {"kind": kind})


def fixed_carrier(lift: EndoLift) -> FinSet:
    """Carrier of the terminal coalgebra (and initial algebra) in the base: A for a constant
    functor, the empty set otherwise (it is both initial and terminal in Rel)."""
    return lift.F.A if lift.F.kind == "constant" else FinSet(0)


def job_fixpoint(q, fields, base, budget):
    lift = make_lift(q, fields, base).validate()
    vs = list(lift.validation)
    n = budget.max_obj
    limit = max(budget.max_morphisms, 16)
    info = {"psi natural": "yes" if lift.psi_natural else "no"}
    try:
        cat = enumerate_coalg_category(lift, n, limit)
        vs += cat.verdicts
        info["coalgebras (lifted / Q^nu)"] = f"{cat.lifted_objects} / {cat.nu_objects}"
        info["coalgebra morphisms (lifted / Q^nu)"] = f"{cat.lifted_morphisms} / {cat.nu_morphisms}"
        vs += check_fixpoint_duality(lift, n, limit)
        U = fixed_carrier(lift)
        idU = identity(U, q)
        term = lift_terminal_coalgebra(lift, U, idU, n, limit)
        vs += term.verdicts
        FU = lift.Q.fiber(U)
        info["terminal coalgebra"] = f"({U.size}, id, {FU.show(term.element)}) after {term.iterations} steps"
        if lift.psi_natural:
            ini = lift_initial_algebra(lift, U, idU, n, limit)
            vs += ini.verdicts
            info["initial algebra"] = f"({U.size}, id, {FU.show(ini.element)}) after {ini.iterations} steps"
        else:
            info["initial algebra"] = "not lifted: psi is lax but not natural"
    except InternalLawViolation as exc:
        vs.append(_internal(exc, budget))
    return vs, info


def job_liftcheck(q, instance, base, omega, budget):
    """Monoidal lifting laws, plus the open converse question as an observation:
    omega dualizing in Q(I) versus (I, omega) dualizing in the total category."""
    Q = make_presheaf(q, instance, base)
    vs = check_presheaf(Q, budget)
    info = {}
    if omega is not None or instance == "nuts":
        w = parse_omega(Q, omega, instance)
        qi = fiber_quantale(Q)
        _, elems, pos = Q.fiber(I).materialize()
        base_ok = is_dualizing(qi, pos[w]) is None
        tv, total_ok = check_dualizing(Q, DualCandidate(w), budget)
        vs += [v for v in tv if v.law_id in ("dual.galois", "dual.antitone", "dual.counit", "dual.A_iff_B")]
        info["omega dualizing in Q(I)"] = "yes" if base_ok else "no"
        info["(I, omega) dualizing in the total category (on budget)"] = "yes" if total_ok else "no"
        if base_ok and not total_ok:
            info["converse"] = "counterexample on this budget"
        elif base_ok:
            info["converse"] = "consistent on this budget"
    return vs, info


# running

def _budget(args, instance: str) -> Budget:
    max_obj = args.max_obj if args.max_obj is not None else DEFAULT_MAX_OBJ.get(instance, 2)
    return Budget(max_obj=max_obj, max_morphisms=args.max_morphisms, max_elems=args.max_elems, seed=args.seed)


def plan(args, corpus: CorpusFile) -> tuple[dict, list]:
    """(context, jobs) for a parsed command line; a job is (scope, function, args)."""
    cmd = args.command
    inst, base = args.instance, args.base
    budget = _budget(args, inst)
    names = args.quantale or []
    ctx = {"command": cmd, "instance": inst, "base": base, "omega": args.omega}
    jobs = []
    if cmd in ("check-quantale", "girard"):
        names = names or corpus.names("quantale")
        ctx.update(quantales=names, instance=None, base=None)
        for n in names:
            q = corpus.quantale(n)
            if cmd == "check-quantale":
                jobs.append((n, job_quantale, (q, budget)))
                continue
            omegas = [args.omega] if args.omega is not None else list(q.labels)
            for lab in omegas:
                if lab not in q.labels:
                    raise UsageError(f"{lab!r} is not an element of {n}")
                jobs.append((f"{n}, omega={lab}", job_girard, (q, q.index(lab), budget)))
        return ctx, jobs
    if cmd == "fixpoint":
        fnames = args.functor or corpus.names("functor")
        ctx.update(functors=fnames, instance="powq", omega=None)
        for fn in fnames:
            b = corpus.get(fn, "functor")
            q = corpus.quantale(b.fields["quantale"])
            jobs.append((fn, job_fixpoint, (q, dict(b.fields), base, budget)))
        return ctx, jobs
    if len(names) > 1:
        raise UsageError(f"{cmd} takes one quantale")
    name = names[0] if names else ("boolean" if inst == "nuts" else None)
    if name is None:
        raise UsageError(f"{cmd} needs a quantale name")
    q = corpus.quantale(name)
    ctx["quantales"] = [name]
    fn = {"check-dualizing": job_dualizing, "check-closed": job_closed, "nucleus": job_nucleus,
          "represent": job_represent, "lift-check": job_liftcheck}[cmd]
    if cmd == "check-closed":
        ctx["omega"] = None
        jobs.append(("", fn, (q, inst, base, budget)))
    else:
        if cmd in ("nucleus", "represent", "check-dualizing") and args.omega is None and inst != "nuts":
            raise UsageError(f"{cmd} needs --omega")
        jobs.append(("", fn, (q, inst, base, args.omega, budget)))
    return ctx, jobs


def execute(jobs, parallel: int = 1) -> tuple[list, dict, dict]:
    """Run jobs (in worker processes when parallel > 1); results keep job order."""
    timings = {}
    if parallel > 1 and len(jobs) > 1:
        with ProcessPoolExecutor(max_workers=parallel) as pool:
            futures = [pool.submit(_timed, fn, a) for _, fn, a in jobs]
            results = [f.result() for f in futures]
    else:
        results = [_timed(fn, a) for _, fn, a in jobs]
    verdicts, info = [], {}
    for (scope, _, _), (vs, inf, dt) in zip(jobs, results):
        for v in vs:
            v.scope = scope
        verdicts += vs
        for k, v in inf.items():
            info[f"{k} <{scope}>" if scope else k] = v
        timings[scope or "run"] = round(dt, 4)
    return verdicts, info, timings


def _timed(fn, a):
    t = time.perf_counter()
    vs, info = fn(*a)
    return vs, info, time.perf_counter() - t


def input_digest(ctx: dict, corpus: CorpusFile) -> str:
    used = [n for n in ctx.get("quantales") or [] if n in corpus.blocks]
    used += list(ctx.get("functors") or [])
    for n in list(used):
        ref = corpus.blocks[n].fields.get("quantale")
        if ref and ref not in used:
            used.append(ref)
    sub = CorpusFile({n: corpus.blocks[n] for n in used})
    return hashlib.sha256(canonical_json({"context": ctx, "blocks": serialize(sub)}).encode()).hexdigest()


def structured(report: Report, digest_in: str) -> dict:
    """The machine-readable report; `digest` covers everything except timings."""
    body = {"command": report.command, "context": report.context, "budget": report.budget,
            "input_digest": digest_in, "verdicts": report.records(), "info": report.info,
            "status": "pass" if report.ok else "fail"}
    body["digest"] = hashlib.sha256(canonical_json(body).encode()).hexdigest()
    return body


def run(argv: list[str] | None = None, out=None) -> tuple[int, Report | None]:
    """Parse, plan, execute and report. Returns (exit code, report)."""
    out = out or sys.stdout
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0), None
    try:
        corpus = load(args.corpus, validate=args.command != "check-quantale")
        ctx, jobs = plan(args, corpus)
        replaying = args.replay is not None
        recorded = _read_replay(args.replay) if replaying else None
        verdicts, info, timings = execute(jobs, 1 if replaying else args.parallel)
    except (CorpusError, UsageError, ShapeMismatch, UnsupportedFunctor, CarrierTooLarge) as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 2, None
    budget = _budget(args, args.instance).as_dict()
    report = Report(args.command, ctx, budget, verdicts, info)
    if recorded is not None:
        return _replay(recorded, report, out)
    body = structured(report, input_digest(ctx, corpus))
    print(report.render(), file=out)
    print(f"digest: {body['digest']}", file=out)
    print(f"timings: {canonical_json(timings)}", file=out)
    if args.json:
        Path(args.json).write_text(json.dumps({**body, "timings": timings}, indent=1, sort_keys=True,
                                              ensure_ascii=False) + "\n", encoding="utf-8")
    return (0 if report.ok else 1), report


def _read_replay(path: str) -> dict:
    try:
        data = json.loads(Path(path).read_text(encoding="utf-8"))
    except (OSError, json.JSONDecodeError) as exc:
        raise UsageError(f"cannot read witness file {path}: {exc}") from None
    if isinstance(data, dict) and "verdicts" in data:
        recs = [v for v in data["verdicts"] if v.get("witness")]
        return {"context": data.get("context"), "records": recs}
    if isinstance(data, dict) and "witness" in data:
        return {"context": None, "records": [data]}
    if isinstance(data, dict) and "law_id" in data and "inputs" in data:
        return {"context": None, "records": [{"law_id": data["law_id"], "witness": data}]}
    raise UsageError(f"{path} holds no witnesses")


def _replay(recorded: dict, report: Report, out) -> tuple[int, Report]:
    """Re-evaluate each recorded witness in the context the rerun built for its law."""
    if recorded["context"] is not None and recorded["context"] != report.context:
        print("error: the witness file was produced by a different command line:\n"
              f"  recorded {canonical_json(recorded['context'])}\n"
              f"  current  {canonical_json(report.context)}", file=sys.stderr)
        return 2, report
    by_key = {(v.law_id, v.scope): v for v in report.verdicts}
    still_failing = 0
    for rec in recorded["records"]:
        w = rec["witness"]
        key = (w.get("law_id", rec.get("law_id")), rec.get("scope", ""))
        v = by_key.get(key)
        if v is None or v.ctx is None:
            print(f"[SKIP] {key[0]}: no replayable context in this run", file=out)
            continue
        holds, lhs, rhs = replay(v.ctx, w)
        same = canonical_json([lhs, rhs]) == canonical_json([w.get("lhs"), w.get("rhs")])
        if holds:
            status = "HOLDS NOW"
        else:
            still_failing += 1
            status = "REPRODUCED" if same else "FAILS DIFFERENTLY"
        where = f" <{key[1]}>" if key[1] else ""
        print(f"[{status}] {key[0]}{where}: inputs {canonical_json(w['inputs'])}\n"
              f"        lhs = {lhs}  {w.get('relation', '?')}  rhs = {rhs}", file=out)
    return (1 if still_failing else 0), report


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="liftstar", description="Check lifted monoidal closed and "
                                "star-autonomous structure on finite instances.")
    p.add_argument("--version", action="version", version=f"liftstar {__version__}")
    p.add_argument("command", choices=COMMANDS)
    p.add_argument("quantale", nargs="*", help="quantale name(s) from the corpus")
    p.add_argument("--corpus", action="append", default=[], metavar="FILE",
                   help="extra corpus file (repeatable); the bundled corpus is always loaded")
    p.add_argument("--instance", choices=("powq", "nuts", "orth"), default="powq")
    p.add_argument("--base", choices=("relq", "rel"), default="relq",
                   help="base category: Rel(Q) or plain Rel")
    p.add_argument("--omega", metavar="LABEL", help="dualizing candidate in Q(I)")
    p.add_argument("--functor", action="append", metavar="NAME", help="functor block (fixpoint)")
    p.add_argument("--max-obj", type=int, metavar="N", help="largest base set enumerated")
    p.add_argument("--max-morphisms", type=int, default=256, metavar="N")
    p.add_argument("--max-elems", type=int, default=4096, metavar="N")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--parallel", type=int, default=1, metavar="K", help="worker processes")
    p.add_argument("--json", metavar="PATH", help="write the structured report here")
    p.add_argument("--replay", metavar="FILE", help="re-evaluate the witnesses recorded in FILE")
    return p


def main(argv: list[str] | None = None) -> int:
    code, _ = run(argv)
    return code


if __name__ == "__main__":
    sys.exit(main())
