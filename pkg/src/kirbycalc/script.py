"""
Move scripts: parse, replay, verify.

A script names an initial diagram and applies a line of moves with
interleaved assertions; replaying produces a Trace.  Replay enforces move
legality, re-checks every assertion, and, for every move that claims to
preserve the 4-manifold, verifies that the full invariant report is
unchanged.  A preservation failure is an engine bug by definition and
aborts the replay.

Grammar (one step per line, # comments):

    script <name>
    from <diagram>
    slide <a> over <b> band <bandref|-> eps <+1|-1>
    slide1 <a> through <h> sign <+1|-1> at <n>
    blowup <+1|-1> at <siteref|->
    blowdown <u>
    cancel12 <h> <m>
    cancel23 <u>
    dotzero <h>
    gluck <m>
    surger <curveref> k <int>
    attachdual <loopsref>
    isotopy <kind> at <args|->
    close
    assert <predicate>

Band, curve, loop and site references name data blocks shipped with the
catalog.  `-` is the empty band/site.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from . import moves
from .diagram import Diagram, DiagramError
from .invariants import InvariantReport, diff_reports, invariant_report
from .moves import BandSpec, IllegalMove, MoveRecord


class ScriptError(Exception):
    """Syntax error in a script, with line information."""


class ReplayError(Exception):
    """A step failed: illegal move, failed assertion, or soundness breach."""

    def __init__(self, index, line, message):
        super().__init__("step %d (%s): %s" % (index, line, message))
        self.index = index
        self.line = line
        self.reason = message


@dataclass(frozen=True)
class Step:
    kind: str            # move name or "assert"
    args: tuple
    line: str
    lineno: int = field(compare=False, default=0)


@dataclass(frozen=True)
class Script:
    name: str
    initial: str
    steps: tuple

    def render(self):
        out = ["script %s" % self.name, "from %s" % self.initial]
        out.extend(s.line for s in self.steps)
        return "\n".join(out) + "\n"


@dataclass
class TraceStep:
    index: int
    line: str
    kind: str
    ok: bool
    record: MoveRecord | None = None
    report: InvariantReport | None = None
    detail: str = ""


@dataclass
class Trace:
    script: str
    steps: list = field(default_factory=list)
    final: Diagram | None = None
    final_report: InvariantReport | None = None

    def to_doc(self):
        return {
            "format": "trace-1",
            "script": self.script,
            "steps": [
                {"index": s.index, "line": s.line, "kind": s.kind,
                 "ok": s.ok,
                 "record": s.record.to_doc() if s.record else None,
                 "report": s.report.to_doc() if s.report else None,
                 "detail": s.detail}
                for s in self.steps
            ],
            "final_report": (self.final_report.to_doc()
                             if self.final_report else None),
        }


_SIGNS = {"+1": 1, "1": 1, "-1": -1}


def _sign(tok, what):
    if tok not in _SIGNS:
        raise ScriptError("%s must be +1 or -1, got %r" % (what, tok))
    return _SIGNS[tok]


def parse_script(text) -> Script:
    name = None
    initial = None
    steps = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        toks = line.split()
        head = toks[0]
        try:
            if head == "script":
                if len(toks) != 2 or name is not None:
                    raise ScriptError("bad script header")
                name = toks[1]
                continue
            if head == "from":
                if len(toks) != 2 or initial is not None:
                    raise ScriptError("bad from header")
                initial = toks[1]
                continue
            if name is None or initial is None:
                raise ScriptError("steps before script/from headers")
            steps.append(_parse_step(head, toks, line, lineno))
        except ScriptError as exc:
            raise ScriptError("line %d: %s" % (lineno, exc)) from None
    if name is None or initial is None:
        raise ScriptError("script and from headers are required")
    return Script(name, initial, tuple(steps))


def _parse_step(head, toks, line, lineno):
    if head == "slide":
        if (len(toks) != 8 or toks[2] != "over" or toks[4] != "band"
                or toks[6] != "eps"):
            raise ScriptError("expected: slide <a> over <b> band <ref> eps <s>")
        return Step("slide", (toks[1], toks[3], toks[5],
                              _sign(toks[7], "eps")), line, lineno)
    if head == "slide1":
        if (len(toks) != 8 or toks[2] != "through" or toks[4] != "sign"
                or toks[6] != "at"):
            raise ScriptError(
                "expected: slide1 <a> through <h> sign <s> at <n>")
        try:
            pos = int(toks[7])
        except ValueError:
            raise ScriptError("position must be an integer")
        return Step("slide1", (toks[1], toks[3], _sign(toks[5], "sign"), pos),
                    line, lineno)
    if head == "blowup":
        if len(toks) != 4 or toks[2] != "at":
            raise ScriptError("expected: blowup <s> at <siteref|->")
        return Step("blowup", (_sign(toks[1], "sign"), toks[3]), line, lineno)
    if head == "blowdown":
        if len(toks) != 2:
            raise ScriptError("expected: blowdown <u>")
        return Step("blowdown", (toks[1],), line, lineno)
    if head == "cancel12":
        if len(toks) != 3:
            raise ScriptError("expected: cancel12 <h> <m>")
        return Step("cancel12", (toks[1], toks[2]), line, lineno)
    if head == "cancel23":
        if len(toks) != 2:
            raise ScriptError("expected: cancel23 <u>")
        return Step("cancel23", (toks[1],), line, lineno)
    if head == "dotzero":
        if len(toks) != 2:
            raise ScriptError("expected: dotzero <h>")
        return Step("dotzero", (toks[1],), line, lineno)
    if head == "gluck":
        if len(toks) != 2:
            raise ScriptError("expected: gluck <m>")
        return Step("gluck", (toks[1],), line, lineno)
    if head == "surger":
        if len(toks) != 4 or toks[2] != "k":
            raise ScriptError("expected: surger <curveref> k <int>")
        try:
            k = int(toks[3])
        except ValueError:
            raise ScriptError("framing must be an integer")
        return Step("surger", (toks[1], k), line, lineno)
    if head == "attachdual":
        if len(toks) != 2:
            raise ScriptError("expected: attachdual <loopsref>")
        return Step("attachdual", (toks[1],), line, lineno)
    if head == "isotopy":
        if len(toks) < 4 or toks[2] != "at":
            raise ScriptError("expected: isotopy <kind> at <args|->")
        return Step("isotopy", (toks[1], tuple(toks[3:])), line, lineno)
    if head == "close":
        if len(toks) != 1:
            raise ScriptError("expected: close")
        return Step("close", (), line, lineno)
    if head == "assert":
        if len(toks) < 2:
            raise ScriptError("empty assertion")
        return Step("assert", tuple(toks[1:]), line, lineno)
    raise ScriptError("unknown step %r" % head)


# ---------------------------------------------------------------------------
# replay
# ---------------------------------------------------------------------------

def replay(script: Script, catalog) -> Trace:
    """
    Replay a script against a catalog.  The catalog provides load_named()
    and data_block(); see kirbycalc.catalog.
    """
    try:
        current = catalog.load_named(script.initial)
    except Exception as exc:
        raise ReplayError(-1, "from %s" % script.initial, str(exc))
    trace = Trace(script.name)
    report = invariant_report(current)
    for index, step in enumerate(script.steps):
        try:
            if step.kind == "assert":
                detail = _check_assert(step.args, current, report, catalog)
                trace.steps.append(TraceStep(index, step.line, "assert",
                                             True, report=report,
                                             detail=detail))
                continue
            current, record, report = _apply(step, current, report, catalog)
            trace.steps.append(TraceStep(index, step.line, step.kind, True,
                                         record=record))
        except (IllegalMove, DiagramError) as exc:
            trace.steps.append(TraceStep(index, step.line, step.kind, False,
                                         detail=str(exc)))
            raise ReplayError(index, step.line, "illegal move: %s" % exc)
        except AssertionFailed as exc:
            trace.steps.append(TraceStep(index, step.line, "assert", False,
                                         report=report, detail=str(exc)))
            raise ReplayError(index, step.line, "failed assertion: %s" % exc)
    trace.final = current
    trace.final_report = report
    return trace


class AssertionFailed(Exception):
    pass


def _apply(step: Step, d: Diagram, report: InvariantReport, catalog):
    kind, args = step.kind, step.args
    if kind == "slide":
        a, b, bandref, eps = args
        band = _band_from_ref(bandref, eps, catalog)
        out, rec = moves.slide_2_over_2(d, a, b, band)
    elif kind == "slide1":
        a, h, sign, pos = args
        out, rec = moves.slide_over_1handle(d, a, h, sign, pos)
    elif kind == "blowup":
        eps, siteref = args
        site = () if siteref == "-" else _site_from_ref(siteref, catalog)
        out, rec = moves.blow_up(d, eps, site)
    elif kind == "blowdown":
        out, rec = moves.blow_down(d, args[0])
    elif kind == "cancel12":
        out, rec = moves.cancel_1_2(d, args[0], args[1])
    elif kind == "cancel23":
        out, rec = moves.cancel_2_3(d, args[0])
    elif kind == "dotzero":
        out, rec = moves.dot_zero_exchange(d, args[0])
    elif kind == "gluck":
        out, rec = moves.gluck_flip(d, args[0])
    elif kind == "surger":
        ref, k = args
        block = catalog.data_block(ref)
        if block.get("type") != "curve":
            raise IllegalMove("%r is not a curve block" % ref)
        trace = _trace_from_block(block.get("trace", ()))
        out, rec = moves.surger_loop(d, block.get("id", "g"), trace, k,
                                     meridian_id=block.get("meridian"))
    elif kind == "attachdual":
        block = catalog.data_block(args[0])
        if block.get("type") != "loops":
            raise IllegalMove("%r is not a loops block" % args[0])
        loops = tuple((l["id"], int(l["framing"]),
                       _trace_from_block(l.get("trace", ())))
                      for l in block["loops"])
        out, rec = moves.attach_dual_handles(d, loops)
    elif kind == "isotopy":
        out, rec = _apply_isotopy(d, args[0], args[1])
    elif kind == "close":
        out, rec = moves.mark_closed(d)
    else:
        raise IllegalMove("unknown move %r" % kind)

    new_report = invariant_report(out)
    if rec.preservation == moves.DIFFEO:
        diffs = diff_reports(report, new_report)
        if kind == "close":
            # closing only trades the boundary fields for the closed marker
            diffs = [x for x in diffs if not x["field"].startswith("boundary")]
        if diffs:
            raise IllegalMove(
                "engine soundness failure: %s claims to preserve the "
                "manifold but the report changed: %s"
                % (kind, "; ".join(x["field"] for x in diffs)))
    return out, rec, new_report


def _band_from_ref(ref, eps, catalog):
    if ref == "-":
        return BandSpec(0, 0, pushoff_sign=eps)
    block = catalog.data_block(ref)
    if block.get("type") != "band":
        raise IllegalMove("%r is not a band block" % ref)
    return BandSpec(
        from_arc=int(block.get("from_arc", 0)),
        to_arc=int(block.get("to_arc", 0)),
        crossing_trace=tuple((c[0], int(c[1]), c[2], int(c[3]))
                             for c in block.get("crossing_trace", ())),
        piercing_trace=tuple((p[0], int(p[1]))
                             for p in block.get("piercing_trace", ())),
        pushoff_sign=eps)


def _site_from_ref(ref, catalog):
    block = catalog.data_block(ref)
    if block.get("type") != "site":
        raise IllegalMove("%r is not a site block" % ref)
    return tuple((p[0], int(p[1]), int(p[2])) for p in block["passes"])


def _trace_from_block(items):
    out = []
    for item in items:
        if item[0] == "cross":
            out.append(("cross", item[1], int(item[2]), item[3], int(item[4])))
        elif item[0] == "clasp":
            out.append(("clasp", item[1], int(item[2]), int(item[3])))
        elif item[0] == "pierce":
            out.append(("pierce", item[1], int(item[2])))
        else:
            raise IllegalMove("unknown trace item %r" % (item,))
    return tuple(out)


def _apply_isotopy(d: Diagram, kind, args):
    if kind == "reduce":
        return moves.isotopy_reduce(d)
    if kind == "r1":
        cid, arc, sign = args
        return moves.reidemeister_r1_insert(d, cid, int(arc), int(sign))
    if kind == "r1-":
        return moves.reidemeister_r1_remove(d, args[0])
    if kind == "r2":
        ac, aa, bc, ba = args
        return moves.reidemeister_r2_insert(d, (ac, int(aa)), (bc, int(ba)))
    if kind == "r2-":
        return moves.reidemeister_r2_remove(d, args[0], args[1])
    if kind == "r3":
        return moves.reidemeister_r3(d, tuple(args))
    raise IllegalMove("unknown isotopy kind %r" % kind)


# ---------------------------------------------------------------------------
# assertions
# ---------------------------------------------------------------------------

def _check_assert(args, d: Diagram, report: InvariantReport, catalog):
    head = args[0]
    rest = args[1:]

    def fail(msg):
        raise AssertionFailed(msg)

    if head == "chi":
        want = int(rest[0])
        if report.chi != want:
            fail("chi is %d, expected %d" % (report.chi, want))
        return "chi == %d" % want
    if head == "b2":
        want = int(rest[0])
        if report.b2 != want:
            fail("b2 is %d, expected %d" % (report.b2, want))
        return "b2 == %d" % want
    if head == "h1":
        return _check_group(report.h1_free_rank, report.h1_torsion,
                            rest, "h1", fail)
    if head == "boundary_h1":
        if rest[0] == "closed":
            if not report.boundary_closed:
                fail("boundary is not marked closed")
            return "boundary closed"
        if report.boundary_closed:
            fail("boundary is closed, expected %s" % (rest,))
        return _check_group(report.boundary_h1_free_rank,
                            report.boundary_h1_torsion, rest,
                            "boundary_h1", fail)
    if head == "form":
        if rest[0] == "undefined":
            if report.form is not None:
                fail("form is %s, expected undefined" % report.form)
            return "form undefined"
        want = (int(rest[0]), int(rest[1]), rest[2])
        if report.form is None:
            fail("form is undefined, expected rank %d" % want[0])
        got = (report.form.rank, report.form.signature, report.form.parity)
        if got != want:
            fail("form is (%d, %+d, %s), expected (%d, %+d, %s)"
                 % (got + want))
        return "form == (%d, %+d, %s)" % want
    if head == "pi1":
        want = {"trivial": "simplified_to_trivial",
                "Z": "simplified_to_Z",
                "inconclusive": "inconclusive"}.get(rest[0])
        if want is None:
            raise ScriptError("pi1 expects trivial|Z|inconclusive")
        if report.pi1_flag != want:
            fail("pi1 flag is %s, expected %s" % (report.pi1_flag, want))
        return "pi1 %s" % rest[0]
    if head == "framing":
        cid, want = rest[0], int(rest[1])
        got = d.component(cid).framing
        if got != want:
            fail("framing of %s is %r, expected %d" % (cid, got, want))
        return "framing %s == %d" % (cid, want)
    if head == "linking":
        a, b, want = rest[0], rest[1], int(rest[2])
        got = d.linking_number(a, b)
        if got != want:
            fail("lk(%s, %s) is %d, expected %d" % (a, b, got, want))
        return "lk(%s, %s) == %d" % (a, b, want)
    if head == "word":
        cid = rest[0]
        got = d.piercing_word(cid)
        want = () if rest[1] == "empty" else tuple(
            (t.lstrip("-"), -1 if t.startswith("-") else 1)
            for t in rest[1].split(","))
        if got != want:
            fail("word of %s is %r, expected %r" % (cid, got, want))
        return "word %s ok" % cid
    if head == "counters":
        want = tuple(int(x) for x in rest)
        got = (len(d.dotted()), len(d.two_handles()), d.n3, d.n4)
        if got != want:
            fail("counters are %r, expected %r" % (got, want))
        return "counters %r" % (want,)
    if head == "diagram":
        other = catalog.load_named(rest[0])
        mine = _algebraic_layer(d)
        theirs = _algebraic_layer(other)
        if mine != theirs:
            fail("algebraic layer differs from %s: %s vs %s"
                 % (rest[0], mine, theirs))
        return "algebraic layer == %s" % rest[0]
    if head == "report":
        other = invariant_report(catalog.load_named(rest[0]))
        diffs = diff_reports(report, other)
        if diffs:
            fail("report differs from %s on %s"
                 % (rest[0], ", ".join(x["field"] for x in diffs)))
        return "report == %s" % rest[0]
    raise ScriptError("unknown assertion %r" % head)


def _check_group(free, torsion, rest, what, fail):
    spec = rest[0]
    if spec == "trivial":
        want = (0, ())
    elif spec == "Z":
        want = (1, ())
    elif spec.startswith("Z^"):
        want = (int(spec[2:]), ())
    elif spec == "rank":
        want = (int(rest[1]), tuple(torsion))
    else:
        raise ScriptError("bad group spec %r" % spec)
    if (free, tuple(torsion)) != want:
        fail("%s is (free %d, torsion %r), expected %r"
             % (what, free, tuple(torsion), want))
    return "%s == %s" % (what, spec)


def _algebraic_layer(d: Diagram):
    """
    The invariant content compared between a script state and a stored
    figure: counters, framings, the linking matrix, and the piercing words,
    all in the deterministic component order.
    """
    hands = d.two_handles()
    return {
        "counters": (len(d.dotted()), len(hands), d.n3, d.n4),
        "framings": tuple(d.component(t).framing for t in hands),
        "linking": tuple(map(tuple, d.linking_matrix().entries)),
        "words": tuple(d.piercing_word(t) for t in hands),
        "dotted": tuple(d.dotted()),
    }
