"""Kirby calculus engine for framed-link handlebody diagrams."""

from .algebra import (
    FormClass, IntMatrix, Presentation, SNFResult, abelianize,
    classify_form, cokernel_invariants, cyclic_reduce, free_reduce,
    smith_normal_form, tietze_simplify,
)
from .diagram import (
    Component, Crossing, Diagram, DiagramError, PiercingEvent,
    ValidationIssue, linking_matrix, linking_number, piercing_word,
    validate, writhe, DOTTED, TWO_HANDLE,
)

__all__ = [
    "Component", "Crossing", "Diagram", "DiagramError", "DOTTED",
    "FormClass", "IntMatrix", "PiercingEvent", "Presentation", "SNFResult",
    "TWO_HANDLE", "ValidationIssue", "abelianize", "classify_form",
    "cokernel_invariants", "cyclic_reduce", "free_reduce", "linking_matrix",
    "linking_number", "piercing_word", "smith_normal_form",
    "tietze_simplify", "validate", "writhe",
]

__version__ = "0.1.0"
