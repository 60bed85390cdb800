"""
Exact integer linear algebra and combinatorial group theory kernel.

Everything here is exact: matrices hold arbitrary-precision Python ints,
signatures are computed with rational pivoting, and words are reduced
symbolically.  No floating point anywhere.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction


# ---------------------------------------------------------------------------
# Integer matrices
# ---------------------------------------------------------------------------

class IntMatrix:
    """An immutable integer matrix with exact arithmetic."""

    __slots__ = ("rows", "cols", "entries")

    def __init__(self, entries):
        rows = [tuple(int(x) for x in row) for row in entries]
        self.entries = tuple(rows)
        self.rows = len(rows)
        self.cols = len(rows[0]) if rows else 0
        for row in rows:
            if len(row) != self.cols:
                raise ValueError("ragged matrix")

    @classmethod
    def zero(cls, rows, cols):
        m = cls.__new__(cls)
        m.entries = tuple((0,) * cols for _ in range(rows))
        m.rows, m.cols = rows, cols
        return m

    @classmethod
    def identity(cls, n):
        return cls([[1 if i == j else 0 for j in range(n)] for i in range(n)])

    def __getitem__(self, ij):
        i, j = ij
        return self.entries[i][j]

    def __eq__(self, other):
        return (isinstance(other, IntMatrix)
                and self.entries == other.entries
                and (self.rows, self.cols) == (other.rows, other.cols))

    def __hash__(self):
        return hash((self.rows, self.cols, self.entries))

    def __repr__(self):
        return "IntMatrix(%r)" % [list(r) for r in self.entries]

    def __mul__(self, other):
        if self.cols != other.rows:
            raise ValueError("dimension mismatch")
        return IntMatrix([[sum(self.entries[i][k] * other.entries[k][j]
                               for k in range(self.cols))
                           for j in range(other.cols)]
                          for i in range(self.rows)])

    def transpose(self):
        return IntMatrix([[self.entries[i][j] for i in range(self.rows)]
                          for j in range(self.cols)])

    def is_symmetric(self):
        return self.rows == self.cols and self == self.transpose()

    def to_lists(self):
        return [list(r) for r in self.entries]

    def det(self):
        """Determinant by exact fraction-free Gaussian elimination (Bareiss)."""
        if self.rows != self.cols:
            raise ValueError("determinant of non-square matrix")
        n = self.rows
        if n == 0:
            return 1
        m = [list(r) for r in self.entries]
        sign = 1
        prev = 1
        for k in range(n - 1):
            if m[k][k] == 0:
                for i in range(k + 1, n):
                    if m[i][k] != 0:
                        m[k], m[i] = m[i], m[k]
                        sign = -sign
                        break
                else:
                    return 0
            for i in range(k + 1, n):
                for j in range(k + 1, n):
                    m[i][j] = (m[i][j] * m[k][k] - m[i][k] * m[k][j]) // prev
                m[i][k] = 0
            prev = m[k][k]
        return sign * m[n - 1][n - 1]


@dataclass(frozen=True)
class SNFResult:
    """Smith normal form data: U·A·V = diag(divisors), U and V unimodular."""

    divisors: tuple
    U: IntMatrix
    V: IntMatrix

    def diagonal_matrix(self, rows, cols):
        d = [[0] * cols for _ in range(rows)]
        for i, x in enumerate(self.divisors):
            d[i][i] = x
        return IntMatrix(d)


def smith_normal_form(A: IntMatrix) -> SNFResult:
    """
    Smith normal form with transforms.

    Returns divisors d1 | d2 | ... (nonnegative) and unimodular U, V with
    U*A*V equal to the diagonal matrix of divisors.  Pivoting rule: smallest
    nonzero absolute value, ties broken by row-major position, so the output
    is deterministic.
    """
    m = [list(row) for row in A.entries]
    rows, cols = A.rows, A.cols
    U = [[1 if i == j else 0 for j in range(rows)] for i in range(rows)]
    V = [[1 if i == j else 0 for j in range(cols)] for i in range(cols)]

    def swap_rows(i, j):
        m[i], m[j] = m[j], m[i]
        U[i], U[j] = U[j], U[i]

    def swap_cols(i, j):
        for r in m:
            r[i], r[j] = r[j], r[i]
        for r in V:
            r[i], r[j] = r[j], r[i]

    def add_row(src, dst, c):
        # row[dst] += c * row[src]
        m[dst] = [a + c * b for a, b in zip(m[dst], m[src])]
        U[dst] = [a + c * b for a, b in zip(U[dst], U[src])]

    def add_col(src, dst, c):
        for r in m:
            r[dst] += c * r[src]
        for r in V:
            r[dst] += c * r[src]

    def negate_row(i):
        m[i] = [-a for a in m[i]]
        U[i] = [-a for a in U[i]]

    t = 0
    n = min(rows, cols)
    while t < n:
        # find the pivot: smallest nonzero |entry| in the remaining block
        pivot = None
        for i in range(t, rows):
            for j in range(t, cols):
                v = m[i][j]
                if v != 0 and (pivot is None or abs(v) < abs(m[pivot[0]][pivot[1]])):
                    pivot = (i, j)
        if pivot is None:
            break
        swap_rows(t, pivot[0])
        swap_cols(t, pivot[1])
        # clear row and column t; the pivot may shrink, so iterate
        while True:
            done = True
            for i in range(t + 1, rows):
                if m[i][t] != 0:
                    q = m[i][t] // m[t][t]
                    add_row(t, i, -q)
                    if m[i][t] != 0:
                        swap_rows(t, i)
                        done = False
            for j in range(t + 1, cols):
                if m[t][j] != 0:
                    q = m[t][j] // m[t][t]
                    add_col(t, j, -q)
                    if m[t][j] != 0:
                        swap_cols(t, j)
                        done = False
            if done:
                break
        # make the pivot divide every later entry
        fixed = False
        for i in range(t + 1, rows):
            for j in range(t + 1, cols):
                if m[i][j] % m[t][t] != 0:
                    add_row(i, t, 1)
                    fixed = True
                    break
            if fixed:
                break
        if fixed:
            continue
        if m[t][t] < 0:
            negate_row(t)
        t += 1

    divisors = tuple(m[i][i] for i in range(n) if m[i][i] != 0)
    return SNFResult(divisors, IntMatrix(U), IntMatrix(V))


def rank(A: IntMatrix) -> int:
    return len(smith_normal_form(A).divisors)


def cokernel_invariants(A: IntMatrix):
    """
    Invariants of coker(A) for A viewed as a map Z^cols -> Z^rows.

    Returns (free_rank, torsion) where torsion lists the divisors > 1.
    """
    snf = smith_normal_form(A)
    free = A.rows - len(snf.divisors)
    torsion = tuple(d for d in snf.divisors if d > 1)
    return free, torsion


@dataclass(frozen=True)
class FormClass:
    """Classification of a nondegenerate symmetric form: rank, signature, parity."""

    rank: int
    signature: int
    parity: str  # "even" | "odd"

    @property
    def definite(self):
        return abs(self.signature) == self.rank and self.rank > 0

    def __str__(self):
        return "rank %d, signature %+d, %s" % (self.rank, self.signature, self.parity)


def classify_form(A: IntMatrix) -> FormClass:
    """
    Classify a symmetric, rationally nondegenerate integer form.

    Signature is computed by exact symmetric diagonalization over Q.
    Parity is even iff every diagonal entry is even (equivalently, the form
    takes only even values; this is congruence-invariant over Z).
    """
    if not A.is_symmetric():
        raise ValueError("form matrix must be symmetric")
    n = A.rows
    if A.det() == 0:
        raise ValueError("degenerate form")
    parity = "even" if all(A[i, i] % 2 == 0 for i in range(n)) else "odd"

    m = [[Fraction(A[i, j]) for j in range(n)] for i in range(n)]
    pos = neg = 0
    idx = list(range(n))
    while idx:
        # prefer a nonzero diagonal pivot
        p = next((i for i in idx if m[i][i] != 0), None)
        if p is None:
            # all diagonal zero: grab a hyperbolic pair, contributes (+1, -1)
            i = idx[0]
            j = next(j for j in idx[1:] if m[i][j] != 0)
            pos += 1
            neg += 1
            for k in idx:
                if k in (i, j):
                    continue
                # clear row/col i and j against the off-diagonal pivot b
                b = m[i][j]
                ci, cj = m[k][i], m[k][j]
                for l in idx:
                    m[k][l] -= (cj / b) * m[i][l] + (ci / b) * m[j][l]
                for l in idx:
                    m[l][k] = m[k][l]
            idx.remove(i)
            idx.remove(j)
            continue
        d = m[p][p]
        if d > 0:
            pos += 1
        else:
            neg += 1
        for k in idx:
            if k == p:
                continue
            c = m[k][p] / d
            for l in idx:
                m[k][l] -= c * m[p][l]
            for l in idx:
                m[l][k] = m[k][l]
        idx.remove(p)
    return FormClass(rank=pos + neg, signature=pos - neg, parity=parity)


# ---------------------------------------------------------------------------
# Free-group words and presentations
# ---------------------------------------------------------------------------

def free_reduce(word):
    """Cancel adjacent inverse pairs.  Words are tuples of (generator, ±1)."""
    out = []
    for g, e in word:
        if e not in (1, -1):
            raise ValueError("letter exponent must be ±1")
        if out and out[-1][0] == g and out[-1][1] == -e:
            out.pop()
        else:
            out.append((g, e))
    return tuple(out)


def cyclic_reduce(word):
    """Freely reduce, then cancel inverse pairs across the wrap-around."""
    w = list(free_reduce(word))
    while len(w) >= 2 and w[0][0] == w[-1][0] and w[0][1] == -w[-1][1]:
        w = w[1:-1]
    return tuple(w)


def invert_word(word):
    return tuple((g, -e) for g, e in reversed(word))


def word_exponent_sum(word, generator):
    return sum(e for g, e in word if g == generator)


def word_str(word):
    if not word:
        return "1"
    return " ".join(g if e == 1 else g + "^-1" for g, e in word)


@dataclass(frozen=True)
class Presentation:
    """A finitely presented group: generator names plus relator words."""

    generators: tuple
    relators: tuple

    def __post_init__(self):
        object.__setattr__(self, "generators", tuple(self.generators))
        object.__setattr__(self, "relators",
                           tuple(free_reduce(r) for r in self.relators))
        known = set(self.generators)
        for r in self.relators:
            for g, _ in r:
                if g not in known:
                    raise ValueError("relator uses unknown generator %r" % g)

    def __str__(self):
        gens = ", ".join(self.generators)
        rels = ", ".join(word_str(r) for r in self.relators) if self.relators else ""
        return "< %s | %s >" % (gens, rels)


def abelianize(p: Presentation) -> IntMatrix:
    """Exponent-sum matrix: rows indexed by generators, columns by relators."""
    return IntMatrix([[word_exponent_sum(r, g) for r in p.relators]
                      for g in p.generators])


def _substitute(word, generator, replacement):
    """Replace generator^e by replacement^e throughout, then reduce."""
    out = []
    inv = invert_word(replacement)
    for g, e in word:
        if g == generator:
            out.extend(replacement if e == 1 else inv)
        else:
            out.append((g, e))
    return free_reduce(out)


def _rotations_and_inverse(word):
    seen = []
    for w in (word, invert_word(word)):
        for s in range(len(w)):
            seen.append(w[s:] + w[:s])
    return seen


def tietze_simplify(p: Presentation, budget: int = 10000) -> Presentation:
    """
    Bounded greedy Tietze simplification.

    Repeatedly: drop empty relators, eliminate generators having a relator in
    which they occur exactly once (substituting everywhere), and use short
    relators to shorten longer ones.  Stops at a fixpoint or when the step
    budget runs out.  Best effort only; the isomorphism problem is undecidable.
    """
    if budget <= 0:
        raise ValueError("budget must be positive")
    gens = list(p.generators)
    rels = [cyclic_reduce(r) for r in p.relators]
    steps = 0

    def spend():
        nonlocal steps
        steps += 1
        return steps >= budget

    changed = True
    while changed and steps < budget:
        changed = False
        rels = [cyclic_reduce(r) for r in rels]
        rels = [r for r in rels if r]

        # generator elimination: relator with a unique occurrence of some gen
        for ri, r in enumerate(rels):
            target = None
            for g in gens:
                occurrences = [i for i, (h, _) in enumerate(r) if h == g]
                if len(occurrences) == 1:
                    target = (g, occurrences[0])
                    break
            if target is None:
                continue
            g, i = target
            # r = a g^e b  =>  g^e = a^-1 b^-1, so g = (a^-1 b^-1)^e
            a, (_, e), b = r[:i], r[i], r[i + 1:]
            value = free_reduce(invert_word(a) + invert_word(b))
            if e == -1:
                value = invert_word(value)
            gens.remove(g)
            rels = [_substitute(w, g, value)
                    for wi, w in enumerate(rels) if wi != ri]
            changed = True
            spend()
            break
        if changed or steps >= budget:
            continue

        # length-reducing substitution: replace a long half of one relator
        # using another relator
        for i, r in enumerate(rels):
            if changed:
                break
            for j, s in enumerate(rels):
                if i == j or not s:
                    continue
                half = len(s) // 2 + 1
                for rot in _rotations_and_inverse(s):
                    piece, rest = rot[:half], rot[half:]
                    if len(piece) <= len(rest):
                        continue
                    w = _find_and_replace(r, piece, invert_word(rest))
                    if w is not None and len(w) < len(r):
                        rels[i] = cyclic_reduce(w)
                        changed = True
                        break
                if changed:
                    break
            if spend():
                break

    rels = [cyclic_reduce(r) for r in rels]
    rels = [r for r in rels if r]
    return Presentation(tuple(gens), tuple(rels))


def _find_and_replace(word, piece, replacement):
    n, k = len(word), len(piece)
    if k == 0 or k > n:
        return None
    doubled = word + word  # search cyclically
    for start in range(n):
        if doubled[start:start + k] == piece:
            tail = doubled[start + k:start + n]
            return free_reduce(replacement + tail)
    return None


def simplification_flag(p: Presentation) -> str:
    """
    Post-simplification verdict: "simplified_to_trivial", "simplified_to_Z",
    or "inconclusive".
    """
    if not p.generators and not p.relators:
        return "simplified_to_trivial"
    if len(p.generators) == 1 and not p.relators:
        return "simplified_to_Z"
    return "inconclusive"
