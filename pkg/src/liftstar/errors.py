"""Exception hierarchy. Every error that concerns a law carries a concrete witness."""


class LiftError(Exception):
    """Base class for all library errors."""

    def __init__(self, message="", witness=None):
        super().__init__(message)
        self.witness = witness


# lattice construction

class LatticeError(LiftError):
    pass


class NotAPoset(LatticeError):
    def __init__(self, pair, axiom):
        super().__init__(f"order violates {axiom} at {pair}", witness={"pair": pair, "axiom": axiom})
        self.pair = pair
        self.axiom = axiom


class NoJoin(LatticeError):
    def __init__(self, subset):
        super().__init__(f"no least upper bound for {sorted(subset)}", witness={"subset": sorted(subset)})
        self.subset = tuple(sorted(subset))


class NoMeet(LatticeError):
    def __init__(self, subset):
        super().__init__(f"no greatest lower bound for {sorted(subset)}", witness={"subset": sorted(subset)})
        self.subset = tuple(sorted(subset))


class NotMonotone(LatticeError):
    pass


class NotSupPreserving(LatticeError):
    def __init__(self, subset, message=""):
        super().__init__(message or f"join of {list(subset)} is not preserved", witness={"subset": list(subset)})
        self.subset = tuple(subset)


# quantale construction

class QuantaleError(LiftError):
    pass


class NotAssociative(QuantaleError):
    def __init__(self, a, b, c):
        super().__init__(f"(a*b)*c != a*(b*c) at {(a, b, c)}", witness={"a": a, "b": b, "c": c})
        self.triple = (a, b, c)


class NotCommutative(QuantaleError):
    def __init__(self, a, b):
        super().__init__(f"a*b != b*a at {(a, b)}", witness={"a": a, "b": b})
        self.pair = (a, b)


class UnitFails(QuantaleError):
    def __init__(self, a):
        super().__init__(f"e*a != a at a={a}", witness={"a": a})
        self.element = a


class NotBilinear(QuantaleError):
    def __init__(self, a, subset):
        super().__init__(f"a*(join S) != join(a*s) at a={a}, S={list(subset)}",
                         witness={"a": a, "subset": list(subset)})
        self.element = a
        self.subset = tuple(subset)


# base category and presheaves

class ShapeMismatch(LiftError):
    pass


class CarrierTooLarge(LiftError):
    pass


class UnsupportedFunctor(LiftError):
    pass


class InternalLawViolation(LiftError):
    """A law that holds as a theorem failed: this signals a bug, never bad input."""


class StructureNotInvertible(LiftError):
    pass


class PsiNotNatural(LiftError):
    pass


# corpus files

class CorpusError(LiftError):
    pass


class ParseError(CorpusError):
    def __init__(self, line, message):
        super().__init__(f"line {line}: {message}", witness={"line": line})
        self.line = line


class ValidationError(CorpusError):
    def __init__(self, block, law, witness):
        super().__init__(f"block {block!r} fails {law}: {witness}", witness=witness)
        self.block = block
        self.law = law


class DanglingReference(CorpusError):
    def __init__(self, name, block=None):
        super().__init__(f"unknown name {name!r}" + (f" in block {block!r}" if block else ""),
                         witness={"name": name})
        self.name = name
