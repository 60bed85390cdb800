"""
Algebraic-topology invariants of a handlebody diagram.

All invariants are read off the 1-/2-handle data: the Euler characteristic
uses the handle counters, H1 and b2 come from the boundary map sending each
2-handle to its signed piercing vector, the intersection form is the linking
matrix restricted to an integral basis of ker(boundary), and the boundary's
H1 is presented by the extended linking matrix (dotted circles traded for
0-framed rows).  b2 here is the 2-handle kernel rank; 3-handles are counters
with no attaching data, exactly as diagrams carry them.
"""

from __future__ import annotations

from dataclasses import dataclass

from .algebra import (
    FormClass, IntMatrix, Presentation, abelianize, classify_form,
    cokernel_invariants, simplification_flag, smith_normal_form,
    tietze_simplify, word_str,
)
from .diagram import Diagram, DiagramError

REPORT_FORMAT = "rep-1"


class ClosedBoundaryError(DiagramError):
    """Raised when a boundary invariant is requested of a closed diagram."""


@dataclass(frozen=True)
class InvariantReport:
    """Invariant profile of a diagram; the unit of preservation checking."""

    chi: int
    h1_free_rank: int
    h1_torsion: tuple
    b2: int
    form: FormClass | None          # None means degenerate/undefined
    boundary_closed: bool
    boundary_h1_free_rank: int | None
    boundary_h1_torsion: tuple | None
    pi1: Presentation
    pi1_flag: str
    pi1_abelianization: tuple       # (free rank, torsion) of H1, for comparison

    def to_doc(self):
        return {
            "format": REPORT_FORMAT,
            "chi": self.chi,
            "h1": {"free_rank": self.h1_free_rank,
                   "torsion": list(self.h1_torsion)},
            "b2": self.b2,
            "form": (None if self.form is None else
                     {"rank": self.form.rank,
                      "signature": self.form.signature,
                      "parity": self.form.parity}),
            "boundary": ("closed" if self.boundary_closed else
                         {"h1_free_rank": self.boundary_h1_free_rank,
                          "h1_torsion": list(self.boundary_h1_torsion)}),
            "pi1": {"generators": list(self.pi1.generators),
                    "relators": [word_str(r) for r in self.pi1.relators],
                    "flag": self.pi1_flag},
        }

    def comparable(self):
        """
        The tuple compared across Diffeomorphism-preserving moves.  The
        fundamental group enters through its flag and abelianization, not the
        raw presentation.
        """
        form = (None if self.form is None else
                (self.form.rank, self.form.signature, self.form.parity))
        boundary = ("closed" if self.boundary_closed else
                    (self.boundary_h1_free_rank, self.boundary_h1_torsion))
        return (self.chi, self.h1_free_rank, self.h1_torsion, self.b2,
                form, boundary, self.pi1_flag, self.pi1_abelianization)


def euler_characteristic(d: Diagram) -> int:
    n1 = len(d.dotted())
    n2 = len(d.two_handles())
    return 1 - n1 + n2 - d.n3 + d.n4


def boundary_matrix(d: Diagram) -> IntMatrix:
    """Map Z^(2-handles) -> Z^(dotted): columns are signed piercing vectors."""
    dots = d.dotted()
    hands = d.two_handles()
    rows = []
    for h in dots:
        rows.append([d.linking_number(t, h) if t != h else 0 for t in hands])
    if not dots:
        return IntMatrix.zero(0, len(hands))
    return IntMatrix(rows)


def homology(d: Diagram):
    """(H1 free rank, H1 torsion, b2) of the 4-manifold the diagram presents."""
    bm = boundary_matrix(d)
    free, torsion = cokernel_invariants(bm)
    b2 = len(d.two_handles()) - len(smith_normal_form(bm).divisors)
    return free, torsion, b2


def kernel_basis(A: IntMatrix) -> list:
    """Integral basis of ker(A: Z^cols -> Z^rows), from the SNF transforms."""
    snf = smith_normal_form(A)
    r = len(snf.divisors)
    # U*A*V = D, so A * (V columns r..) = 0
    v = snf.V
    return [[v[i, j] for i in range(v.rows)] for j in range(r, v.cols)]


def intersection_form(d: Diagram):
    """
    FormClass of the linking matrix restricted to ker(boundary_matrix), or
    None when that restriction is degenerate.
    """
    hands = d.two_handles()
    basis = kernel_basis(boundary_matrix(d))
    if not basis:
        return None
    L = d.linking_matrix()
    n = len(basis)
    m = [[0] * n for _ in range(n)]
    for i in range(n):
        for j in range(n):
            m[i][j] = sum(basis[i][a] * L[a, b] * basis[j][b]
                          for a in range(len(hands))
                          for b in range(len(hands)))
    M = IntMatrix(m)
    if M.det() == 0:
        return None
    return classify_form(M)


def boundary_h1(d: Diagram):
    """
    (free rank, torsion) of H1 of the boundary 3-manifold, from the extended
    linking matrix.  Raises on diagrams marked closed.
    """
    if d.closed:
        raise ClosedBoundaryError("closed manifold, empty boundary")
    return cokernel_invariants(d.extended_matrix())


def pi1_presentation(d: Diagram, budget: int = 10000) -> Presentation:
    """Generators are dotted components; relators are the piercing words."""
    gens = tuple(d.dotted())
    rels = tuple(d.piercing_word(t) for t in d.two_handles())
    raw = Presentation(gens, rels)
    return tietze_simplify(raw, budget)


def invariant_report(d: Diagram) -> InvariantReport:
    issues = d.validate()
    if issues:
        raise DiagramError("invalid diagram: %s" % "; ".join(map(str, issues)))
    free, torsion, b2 = homology(d)
    pi1 = pi1_presentation(d)
    if d.closed:
        bfree, btors = None, None
    else:
        bfree, btors = boundary_h1(d)
    return InvariantReport(
        chi=euler_characteristic(d),
        h1_free_rank=free,
        h1_torsion=torsion,
        b2=b2,
        form=intersection_form(d),
        boundary_closed=d.closed,
        boundary_h1_free_rank=bfree,
        boundary_h1_torsion=btors,
        pi1=pi1,
        pi1_flag=simplification_flag(pi1),
        pi1_abelianization=cokernel_invariants(abelianize(pi1)),
    )


def diff_reports(a: InvariantReport, b: InvariantReport):
    """Structured field-by-field difference; empty means equal."""
    da, db = a.to_doc(), b.to_doc()
    diffs = []

    def walk(path, x, y):
        if isinstance(x, dict) and isinstance(y, dict):
            for k in sorted(set(x) | set(y)):
                walk(path + (k,), x.get(k), y.get(k))
        elif x != y:
            diffs.append({"field": ".".join(path), "a": x, "b": y})

    # raw pi1 presentations may differ even for equal groups; compare the
    # flag and abelianization instead of generator/relator spellings
    for doc in (da, db):
        doc["pi1"] = {"flag": doc["pi1"]["flag"]}
    da["pi1"]["abelianization"] = [a.pi1_abelianization[0],
                                   list(a.pi1_abelianization[1])]
    db["pi1"]["abelianization"] = [b.pi1_abelianization[0],
                                   list(b.pi1_abelianization[1])]
    walk((), da, db)
    return diffs
