"""Finite lifting of monoidal closed structure along presheaves over Rel(Q)."""
from .errors import LiftError
from .laws import Budget, Report, Verdict
from .lattice import FinLattice
from .quantale import FinQuantale, boolean, check_quantale, godel, lukasiewicz, max_chain3, powerset_z2
from .relbase import FinSet, QMat

__version__ = "0.1.0"

__all__ = ["LiftError", "Budget", "Report", "Verdict", "FinLattice", "FinQuantale", "boolean",
           "check_quantale", "godel", "lukasiewicz", "max_chain3", "powerset_z2", "FinSet", "QMat"]
