"""The corpus file format: named quantales, relations, dual candidates, functors and budgets.

A file is a sequence of blocks::

    # comments and blank lines are ignored
    quantale lukasiewicz3
    labels: ["0", "1/2", "1"]
    order: [["0", "1/2"], ["1/2", "1"]]
    unit: "1"
    mult: [["0", "0", "0"], ["0", "0", "1/2"], ["0", "1/2", "1"]]
    end

Every value is one line of JSON. ``order`` lists (lower, upper) pairs whose
reflexive-transitive closure is the order; ``mult`` is a row-major label grid.
"""
from __future__ import annotations

import json
from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path

import numpy as np

from .errors import DanglingReference, LiftError, ParseError, ValidationError
from .lattice import from_order_pairs
from .quantale import FinQuantale, check_quantale
from .relbase import FinSet, QMat

KINDS = {
    "quantale": {"required": ("labels", "order", "unit", "mult"), "optional": ("note",)},
    "relation": {"required": ("quantale", "dom", "cod", "entries"), "optional": ("note",)},
    "dual": {"required": ("quantale", "omega"), "optional": ("instance", "note")},
    "functor": {"required": ("quantale", "kind"), "optional": ("A", "psi", "theta", "note")},
    "budget": {"required": (), "optional": ("max_obj", "max_morphisms", "max_elems", "seed", "note")},
}
REFS = {"relation": ("quantale",), "dual": ("quantale",), "functor": ("quantale",)}


@dataclass
class Block:
    kind: str
    name: str
    fields: dict
    line: int = 0

    def semantic(self) -> tuple:
        return self.kind, self.name, json.dumps(self.fields, sort_keys=True)


@dataclass
class CorpusFile:
    blocks: dict = field(default_factory=dict)       # name -> Block, in file order
    objects: dict = field(default_factory=dict)      # name -> validated object

    def names(self, kind: str) -> list[str]:
        return [n for n, b in self.blocks.items() if b.kind == kind]

    def get(self, name: str, kind: str | None = None):
        b = self.blocks.get(name)
        if b is None or (kind is not None and b.kind != kind):
            raise DanglingReference(name)
        return b

    def quantale(self, name: str) -> FinQuantale:
        self.get(name, "quantale")
        return self.objects[name]

    def relation(self, name: str) -> QMat:
        self.get(name, "relation")
        return self.objects[name]

    def merge(self, other: "CorpusFile") -> "CorpusFile":
        for n, b in other.blocks.items():
            if n in self.blocks:
                raise ParseError(b.line, f"duplicate block name {n!r}")
            self.blocks[n] = b
            if n in other.objects:
                self.objects[n] = other.objects[n]
        return self


# parsing

def parse_text(text: str, validate: bool = True) -> CorpusFile:
    """Parse corpus text; with `validate`, every block is built and checked."""
    corpus = parse_blocks(text)
    resolve(corpus)
    return build(corpus, validate)


def parse_blocks(text: str) -> CorpusFile:
    """Blocks of one file, syntax only: references are not resolved yet."""
    corpus = CorpusFile()
    cur: Block | None = None
    for ln, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        if cur is None:
            parts = line.split()
            if len(parts) != 2:
                raise ParseError(ln, f"expected '<kind> <name>', got {line!r}")
            kind, name = parts
            if kind not in KINDS:
                raise ParseError(ln, f"unknown block kind {kind!r}")
            if name in corpus.blocks:
                raise ParseError(ln, f"duplicate block name {name!r}")
            cur = Block(kind, name, {}, ln)
            continue
        if line == "end":
            _check_keys(cur)
            corpus.blocks[cur.name] = cur
            cur = None
            continue
        key, sep, val = line.partition(":")
        key = key.strip()
        if not sep or not key.isidentifier():
            raise ParseError(ln, f"expected 'key: <json>', got {line!r}")
        if key in cur.fields:
            raise ParseError(ln, f"duplicate key {key!r} in block {cur.name!r}")
        try:
            cur.fields[key] = json.loads(val)
        except json.JSONDecodeError as exc:
            raise ParseError(ln, f"bad JSON for {key!r}: {exc.msg}") from None
    if cur is not None:
        raise ParseError(cur.line, f"block {cur.name!r} is missing 'end'")
    if not corpus.blocks:
        raise ParseError(0, "no blocks found")
    return corpus


def parse_corpus(path, validate: bool = True) -> CorpusFile:
    p = Path(path)
    try:
        text = p.read_text(encoding="utf-8")
    except OSError as exc:
        raise ParseError(0, f"cannot read {p}: {exc.strerror}") from None
    return parse_text(text, validate)


def _check_keys(b: Block) -> None:
    spec = KINDS[b.kind]
    missing = [k for k in spec["required"] if k not in b.fields]
    if missing:
        raise ParseError(b.line, f"block {b.name!r} lacks {', '.join(missing)}")
    extra = [k for k in b.fields if k not in spec["required"] + spec["optional"]]
    if extra:
        raise ParseError(b.line, f"block {b.name!r} has unknown keys {', '.join(extra)}")


def resolve(corpus: CorpusFile) -> None:
    for b in corpus.blocks.values():
        for key in REFS.get(b.kind, ()):
            target = b.fields[key]
            if not isinstance(target, str) or target not in corpus.blocks or \
                    corpus.blocks[target].kind != key:
                raise DanglingReference(str(target), b.name)


# validation

def _labelled(q_labels, witness):
    """Replace element indices in a witness by labels."""
    if isinstance(witness, dict):
        return {k: _labelled(q_labels, v) for k, v in witness.items()}
    if isinstance(witness, (list, tuple)):
        return [_labelled(q_labels, v) for v in witness]
    if isinstance(witness, (int, np.integer)) and not isinstance(witness, bool) and 0 <= witness < len(q_labels):
        return q_labels[int(witness)]
    return witness


def quantale_tables(b: Block) -> tuple:
    """(lattice, unit index, multiplication indices) of a quantale block, unchecked beyond labels."""
    f = b.fields
    labels = f["labels"]
    if not isinstance(labels, list) or not labels or not all(isinstance(s, str) for s in labels):
        raise ValidationError(b.name, "labels", {"labels": labels})
    if len(set(labels)) != len(labels):
        raise ValidationError(b.name, "labels", {"duplicate": sorted({s for s in labels if labels.count(s) > 1})})
    pos = {s: i for i, s in enumerate(labels)}

    def idx(s, what):
        if s not in pos:
            raise ValidationError(b.name, "labels", {"unknown_label": s, "in": what})
        return pos[s]

    pairs = f["order"]
    if not isinstance(pairs, list) or not all(isinstance(p, list) and len(p) == 2 for p in pairs):
        raise ValidationError(b.name, "order", {"order": pairs})
    for lo, hi in pairs:
        idx(lo, "order")
        idx(hi, "order")
    try:
        lat = from_order_pairs(labels, [tuple(p) for p in pairs])
    except LiftError as exc:
        raise ValidationError(b.name, type(exc).__name__, _labelled(labels, exc.witness)) from None
    unit = idx(f["unit"], "unit")
    grid = f["mult"]
    n = len(labels)
    if not isinstance(grid, list) or len(grid) != n or any(not isinstance(r, list) or len(r) != n for r in grid):
        raise ValidationError(b.name, "mult", {"expected": f"{n}x{n} grid"})
    mult = np.array([[idx(v, "mult") for v in row] for row in grid], dtype=np.int64)
    return lat, unit, mult


def build_quantale(b: Block, validate: bool = True) -> FinQuantale:
    lat, unit, mult = quantale_tables(b)
    if not validate:
        mult.setflags(write=False)
        return FinQuantale(lat, unit, mult, b.name)
    try:
        return check_quantale(lat, unit, mult, b.name)
    except LiftError as exc:
        raise ValidationError(b.name, type(exc).__name__, _labelled(lat.labels, exc.witness)) from None


def build_relation(b: Block, q: FinQuantale) -> QMat:
    f = b.fields
    dom, cod, ent = f["dom"], f["cod"], f["entries"]
    if not (isinstance(dom, int) and isinstance(cod, int) and dom >= 0 and cod >= 0):
        raise ValidationError(b.name, "shape", {"dom": dom, "cod": cod})
    if not isinstance(ent, list) or len(ent) != dom or any(not isinstance(r, list) or len(r) != cod for r in ent):
        raise ValidationError(b.name, "shape", {"expected": f"{dom}x{cod} grid"})
    try:
        idx = [[q.index(v) for v in row] for row in ent]
    except (KeyError, ValueError) as exc:
        raise ValidationError(b.name, "labels", {"unknown_label": str(exc)}) from None
    return QMat(FinSet(dom), FinSet(cod), q, np.array(idx, dtype=np.int64).reshape(dom, cod))


def _check_functor(b: Block, q: FinQuantale) -> None:
    f = b.fields
    kind = f["kind"]
    if kind not in ("identity", "constant", "product"):
        raise ValidationError(b.name, "kind", {"kind": kind})
    if kind == "identity":
        if f.get("psi", "id") not in ("id", "top"):
            raise ValidationError(b.name, "psi", {"psi": f.get("psi")})
        return
    A = f.get("A")
    if not isinstance(A, int) or A < 0:
        raise ValidationError(b.name, "A", {"A": A})
    theta = f.get("theta")
    if not isinstance(theta, list) or len(theta) != A or any(v not in q.labels for v in theta):
        raise ValidationError(b.name, "theta", {"theta": theta, "expected": f"{A} labels of {q.name}"})


def _check_budget(b: Block) -> None:
    for k, v in b.fields.items():
        if k != "note" and not (isinstance(v, int) and v >= 0):
            raise ValidationError(b.name, k, {k: v})


def build(corpus: CorpusFile, validate: bool = True) -> CorpusFile:
    """Construct (and with `validate`, check) every block; quantales first."""
    for n in corpus.names("quantale"):
        corpus.objects[n] = build_quantale(corpus.blocks[n], validate)
    for n, b in corpus.blocks.items():
        if b.kind == "relation":
            corpus.objects[n] = build_relation(b, corpus.objects[b.fields["quantale"]])
        elif b.kind == "functor":
            _check_functor(b, corpus.objects[b.fields["quantale"]])
        elif b.kind == "dual":
            q = corpus.objects[b.fields["quantale"]]
            w = b.fields["omega"]
            if b.fields.get("instance", "powq") == "powq" and not (isinstance(w, str) and w in q.labels):
                raise ValidationError(n, "omega", {"omega": w})
        elif b.kind == "budget":
            _check_budget(b)
    return corpus


# serialization

def _dump(v) -> str:
    return json.dumps(v, ensure_ascii=False)


def serialize(corpus: CorpusFile) -> str:
    out = []
    for b in corpus.blocks.values():
        out.append(f"{b.kind} {b.name}")
        out += [f"{k}: {_dump(v)}" for k, v in b.fields.items()]
        out += ["end", ""]
    return "\n".join(out)


def quantale_block(q: FinQuantale, name: str | None = None) -> Block:
    """A block for a quantale, with the order given by its covering pairs."""
    L = q.lat.leq
    n = q.n
    covers = [[q.label(a), q.label(b)] for a in range(n) for b in range(n)
              if a != b and L[a, b] and not any(c not in (a, b) and L[a, c] and L[c, b] for c in range(n))]
    return Block("quantale", name or q.name, {
        "labels": list(q.labels), "order": covers, "unit": q.label(q.unit),
        "mult": [[q.label(int(v)) for v in row] for row in q.mult]})


def same_semantics(a: CorpusFile, b: CorpusFile) -> bool:
    """Same blocks with the same fields, and quantales with identical tables."""
    if [x.semantic() for x in a.blocks.values()] != [x.semantic() for x in b.blocks.values()]:
        return False
    for n in a.names("quantale"):
        if n in a.objects and not a.objects[n].same_as(b.objects[n]):
            return False
    return True


# the bundled corpus

def bundled_files() -> list[str]:
    root = resources.files("liftstar") / "corpus"
    return sorted(p.name for p in root.iterdir() if p.name.endswith(".q"))


def bundled_text(filename: str) -> str:
    return (resources.files("liftstar") / "corpus" / filename).read_text(encoding="utf-8")


def load_bundled(validate: bool = True) -> CorpusFile:
    """All bundled files as one corpus; references may cross files."""
    return load((), validate)


def load(paths=(), validate: bool = True, bundled: bool = True) -> CorpusFile:
    """The bundled corpus (optional) together with user files, as one namespace."""
    corpus = CorpusFile()
    if bundled:
        for f in bundled_files():
            corpus.merge(parse_blocks(bundled_text(f)))
    for p in paths:
        try:
            text = Path(p).read_text(encoding="utf-8")
        except OSError as exc:
            raise ParseError(0, f"cannot read {p}: {exc.strerror}") from None
        try:
            corpus.merge(parse_blocks(text))
        except ParseError as exc:
            raise ParseError(exc.line, f"{p}: {exc}") from None
    resolve(corpus)
    return build(corpus, validate)
