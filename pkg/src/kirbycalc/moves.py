"""
The legality-checked Kirby move set.

Every move consumes a diagram and returns (new diagram, MoveRecord).  Moves
are implemented as genuine crossing-level surgery: a handle slide splices a
band and a framed push-off copy of the target curve into the sliding curve,
a blow-down removes the circle and inserts the compensating full twist on
the strands that ran through it, and so on.  Framings are updated by the
slide/twist formulas; every linking number is always recomputed from the
rewritten crossing set, so the formulas are checkable facts, not caches.

A move whose output fails validation raises IllegalMove: the site or band
data did not describe a planar-consistent picture.
"""

from __future__ import annotations

from dataclasses import dataclass

from .algebra import cokernel_invariants, free_reduce
from .diagram import (
    Component, CrossEvent, Diagram, PierceEvent, DOTTED, TWO_HANDLE,
)

DIFFEO = "Diffeomorphism"
BOUNDARY = "BoundaryOnly"
CONSTRUCTION = "Construction"


class IllegalMove(Exception):
    """The move's preconditions fail or its site data is not realizable."""


@dataclass(frozen=True)
class MoveRecord:
    move: str
    params: dict
    preservation: str
    deltas: tuple  # (dn1, dn2, dn3, dchi)

    def __post_init__(self):
        dn1, dn2, dn3, dchi = self.deltas
        if dchi != -dn1 + dn2 - dn3:
            raise ValueError("inconsistent deltas in MoveRecord")

    def to_doc(self):
        return {"move": self.move, "params": self.params,
                "preservation": self.preservation,
                "deltas": {"n1": self.deltas[0], "n2": self.deltas[1],
                           "n3": self.deltas[2], "chi": self.deltas[3]}}


@dataclass(frozen=True)
class BandSpec:
    """
    A band guiding a 2-handle slide: it leaves the sliding curve at the end
    of from_arc, crosses the listed arcs on the way, and lands at the end of
    to_arc on the target.  Each crossing-trace item is (component, arc,
    "over"|"under", sign) for the band core; the engine generates both
    parallel band strands.  pushoff_sign selects handle addition (+1) or
    subtraction (-1).
    """

    from_arc: int
    to_arc: int
    crossing_trace: tuple = ()
    piercing_trace: tuple = ()
    pushoff_sign: int = 1


# ---------------------------------------------------------------------------
# mutable builder
# ---------------------------------------------------------------------------

class _Builder:
    def __init__(self, d: Diagram):
        self.components = dict(d.components)
        self.events = {cid: list(evs) for cid, evs in d.events.items()}
        self.crossings = dict(d.crossings)
        self.n3 = d.n3
        self.n4 = d.n4
        self.closed = d.closed
        self.metadata = dict(d.metadata)
        self._serial = 0

    def diagram(self):
        return Diagram(components=list(self.components.values()),
                       events=self.events, crossings=self.crossings,
                       n3=self.n3, n4=self.n4, closed=self.closed,
                       metadata=self.metadata)

    def new_xid(self):
        while True:
            xid = "m%d" % self._serial
            self._serial += 1
            if xid not in self.crossings:
                return xid

    def find_event(self, cid, event):
        for i, e in enumerate(self.events[cid]):
            if e == event:
                return i
        raise IllegalMove("event %r not found on %r" % (event, cid))

    def arc_end(self, cid, arc):
        """Index of the crossing event terminating the arc (insert-before
        point), or end of list for a crossing-free curve."""
        xs = [i for i, e in enumerate(self.events[cid])
              if isinstance(e, CrossEvent)]
        if not xs:
            if arc != 0:
                raise IllegalMove("component %r has only arc 0" % cid)
            return len(self.events[cid])
        if not 0 <= arc < len(xs):
            raise IllegalMove("component %r has no arc %d" % (cid, arc))
        return xs[arc]

    def remove_component(self, cid):
        """Drop a component and every crossing it participates in."""
        gone = set()
        for i, e in enumerate(self.events[cid]):
            if isinstance(e, CrossEvent):
                gone.add(e.crossing)
        del self.events[cid]
        del self.components[cid]
        for xid in gone:
            self.crossings.pop(xid, None)
        for other, evs in self.events.items():
            self.events[other] = [
                e for e in evs
                if not (isinstance(e, CrossEvent) and e.crossing in gone)
                and not (isinstance(e, PierceEvent) and e.through == cid)]


def _lk(bld: _Builder, a, b):
    return bld.diagram().linking_number(a, b)


def _writhe(bld: _Builder, a):
    return bld.diagram().writhe(a)


# ---------------------------------------------------------------------------
# parallel copy of a curve (push-off), spliced into a host strand
# ---------------------------------------------------------------------------

def _counterpart_side(sign, other_role):
    """
    Whether the counterpart event for a parallel-copy crossing is inserted
    before (0) or after (1) the original event on the crossed strand, for a
    copy running on the left of the source.
    """
    if other_role == "over":
        return 0 if sign == 1 else 1
    return 1 if sign == 1 else 0


def _build_copy(bld: _Builder, source, base_pos, eps):
    """
    Event list for a parallel push-off copy of `source`, traversed from
    base_pos (exclusive start point; the cut sits just before it) in
    direction eps.  Counterpart crossing events are inserted next to the
    source's own events; the returned list still needs framing clasps.
    """
    src = list(bld.events[source])
    n = len(src)
    order = [(base_pos + i) % n for i in range(n)]
    copy_events = []            # in forward (source) order, reversed later
    self_xids = {}              # original self-crossing id -> copy crossing id
    rotate_cut = False          # base encounter emitted (self, vs-source)?

    for idx in order:
        e = src[idx]
        if isinstance(e, PierceEvent):
            copy_events.append(PierceEvent(e.through, e.sign * eps))
            continue
        xid, role = e.crossing, e.role
        sign = bld.crossings[xid]
        # the counterpart pass of this crossing: anchor on its event object
        # (unique by (crossing, role)), looked up in the live lists
        mate_role = "under" if role == "over" else "over"
        mate = CrossEvent(xid, mate_role)
        oc = None
        for cid, evs in bld.events.items():
            if mate in evs:
                oc = cid
                break
        if oc is None:
            raise IllegalMove("crossing %r is not well paired" % xid)
        if oc == source and mate == e:
            raise IllegalMove("crossing %r is degenerate" % xid)
        xc = bld.new_xid()
        bld.crossings[xc] = sign * eps
        side = _counterpart_side(sign, mate_role)
        _insert_adjacent(bld, oc, mate, side, CrossEvent(xc, mate_role))
        if oc != source:
            copy_events.append(CrossEvent(xc, role))
        else:
            # self-crossing of the source: the copy also crosses itself here;
            # the order of the two new passes along the copy depends on the
            # crossing sign and the role (left-copy geometry)
            if xid in self_xids:
                xcc = self_xids[xid]
            else:
                xcc = self_xids[xid] = bld.new_xid()
                bld.crossings[xcc] = sign
            pair = [CrossEvent(xc, role), CrossEvent(xcc, role)]
            if (role == "under") != (sign == 1):
                pair.reverse()
                if idx == base_pos:
                    # the cut point falls between the two new passes: the
                    # copy's own crossing with the source comes first
                    rotate_cut = True
            copy_events.extend(pair)
    if rotate_cut:
        copy_events = copy_events[1:] + copy_events[:1]
    if eps == -1:
        copy_events.reverse()
    return copy_events


def _insert_adjacent(bld: _Builder, cid, anchor_event, side, new_event):
    """Insert new_event immediately before (side 0) or after (side 1) the
    anchor event on cid.  Anchors are crossing events, which are unique."""
    i = bld.find_event(cid, anchor_event)
    bld.events[cid].insert(i + side, new_event)


def _clasp_events(bld: _Builder, other, at_pos, sign, eps=1):
    """
    One clasp (full twist of two parallel strands): two crossings of the
    given sign between a new strand and `other`, inserted consecutively at
    at_pos on other.  Returns the new strand's two events in its own
    traversal order; eps says whether that strand runs along (+1) or
    against (-1) `other`.
    """
    x1, x2 = bld.new_xid(), bld.new_xid()
    bld.crossings[x1] = sign
    bld.crossings[x2] = sign
    first_role = "over" if sign == eps else "under"
    second = "under" if first_role == "over" else "over"
    bld.events[other][at_pos:at_pos] = [CrossEvent(x1, second),
                                        CrossEvent(x2, first_role)]
    return [CrossEvent(x1, first_role), CrossEvent(x2, second)]


def _full_twist(bld: _Builder, passes, twist, role_flip=False):
    """
    Insert a full twist of the given sign (|twist| full turns) on the listed
    parallel strand passes.  passes = [(cid, insert position, direction)];
    all events of one pass are spliced consecutively at its position.
    """
    n = len(passes)
    if n < 2 or twist == 0:
        return
    pending = [[] for _ in range(n)]
    pos_to_pass = list(range(n))
    handed = 1 if twist > 0 else -1
    over_first = (handed == 1) != bool(role_flip)
    for _ in range(abs(twist)):
        for _round in range(n):
            for k in range(n - 1):
                i, j = pos_to_pass[k], pos_to_pass[k + 1]
                xid = bld.new_xid()
                di, dj = passes[i][2], passes[j][2]
                bld.crossings[xid] = handed * di * dj
                over_pass, under_pass = (i, j) if over_first else (j, i)
                pending[over_pass].append(CrossEvent(xid, "over"))
                pending[under_pass].append(CrossEvent(xid, "under"))
                pos_to_pass[k], pos_to_pass[k + 1] = pos_to_pass[k + 1], pos_to_pass[k]
    inserts = []
    for p, (cid, pos, direction) in enumerate(passes):
        evs = pending[p]
        if direction == -1:
            evs = list(reversed(evs))
        inserts.append((cid, pos, evs))
    # apply per component in descending position so indices stay valid
    inserts.sort(key=lambda t: (t[0], -t[1]))
    for cid, pos, evs in inserts:
        bld.events[cid][pos:pos] = evs


def _validated(bld: _Builder, record: MoveRecord, move_name: str):
    out = bld.diagram()
    issues = out.validate()
    if issues:
        raise IllegalMove("%s produced an invalid diagram: %s"
                          % (move_name, "; ".join(str(i) for i in issues)))
    return out, record


# ---------------------------------------------------------------------------
# handle slides
# ---------------------------------------------------------------------------

def slide_2_over_2(d: Diagram, a, b, band: BandSpec):
    """Replace a by the band sum of a with an eps push-off of b."""
    ca, cb = d.component(a), d.component(b)
    if a == b:
        raise IllegalMove("cannot slide a handle over itself")
    if ca.kind != TWO_HANDLE or cb.kind != TWO_HANDLE:
        raise IllegalMove("handle slides need two 2-handles")
    eps = band.pushoff_sign
    if eps not in (1, -1):
        raise IllegalMove("push-off sign must be ±1")
    lk_ab = d.linking_number(a, b)
    new_framing = ca.framing + cb.framing + 2 * eps * lk_ab

    bld = _Builder(d)
    # resolve every arc reference to an anchor event before mutating anything
    # (insertions renumber arcs)
    splice_anchor = _anchor_of_arc(bld, a, band.from_arc)
    base_anchor = _anchor_of_arc(bld, b, band.to_arc)
    trace_anchors = [_anchor_of_arc(bld, item[0], item[1])
                     for item in band.crossing_trace]

    base_pos = _resolve_anchor(bld, b, base_anchor)
    copy_events = _build_copy(bld, b, base_pos, eps)
    # framing clasps make the copy an f(b)-framed push-off
    clasps = _emit_clasps(bld, b, base_anchor, cb.framing - d.writhe(b), eps)
    copy_events = clasps + copy_events

    out_events, back_events = _band_strands(bld, band, trace_anchors)
    block = out_events + copy_events + back_events
    bld.components[a] = Component(id=a, kind=TWO_HANDLE, framing=new_framing,
                                  label=ca.label)
    rec = MoveRecord("slide", {"a": a, "b": b, "eps": eps,
                               "from_arc": band.from_arc,
                               "to_arc": band.to_arc},
                     DIFFEO, (0, 0, 0, 0))
    # The arc-level band data leaves the exact attachment point on `a` free.
    # Scan splice positions deterministically, starting at the end of
    # from_arc, and keep the first planar assembly; all candidates realize
    # the same algebraic move.
    canonical = _resolve_anchor(bld, a, splice_anchor)
    length = len(bld.events[a])
    candidates = [canonical] + [p for p in range(length + 1) if p != canonical]
    base_events = list(bld.events[a])
    last = None
    for splice_at in candidates:
        bld.events[a] = base_events[:splice_at] + block + base_events[splice_at:]
        out = bld.diagram()
        if not out.validate():
            return out, rec
        last = out
    raise IllegalMove("slide band from arc %d of %r to arc %d of %r is not "
                      "realizable in the plane" % (band.from_arc, a,
                                                   band.to_arc, b))


def _anchor_of_arc(bld: _Builder, cid, arc):
    """A stable anchor for the insert-before point at the end of an arc:
    either the terminal crossing event or None for end-of-list."""
    pos = bld.arc_end(cid, arc)
    if pos == len(bld.events[cid]):
        return None
    return bld.events[cid][pos]


def _resolve_anchor(bld: _Builder, cid, anchor):
    if anchor is None:
        return len(bld.events[cid])
    return bld.find_event(cid, anchor)


def _emit_clasps(bld: _Builder, b, base_anchor, deficit, eps):
    """Clasps between the push-off copy and b realizing the framing."""
    if deficit == 0:
        return []
    csign = 1 if eps * deficit > 0 else -1
    block = []
    for _ in range(abs(deficit)):
        at = _resolve_anchor(bld, b, base_anchor)
        block.extend(_clasp_events(bld, b, at, csign, eps))
    if eps == -1:
        block.reverse()
    return block


def _band_strands(bld: _Builder, band: BandSpec, trace_anchors):
    """Out and back event lists for the two parallel band strands."""
    out_events = []
    back_events = []
    for item, anchor in zip(band.crossing_trace, trace_anchors):
        cid, arc, role, sign = item
        if cid not in bld.components:
            raise IllegalMove("band crosses unknown component %r" % cid)
        if bld.components[cid].kind == DOTTED:
            raise IllegalMove("bands may not cross dotted components")
        if role not in ("over", "under") or sign not in (1, -1):
            raise IllegalMove("bad band crossing item %r" % (item,))
        x_out, x_back = bld.new_xid(), bld.new_xid()
        bld.crossings[x_out] = sign
        bld.crossings[x_back] = -sign
        other_role = "under" if role == "over" else "over"
        at = _resolve_anchor(bld, cid, anchor)
        bld.events[cid][at:at] = [CrossEvent(x_out, other_role),
                                  CrossEvent(x_back, other_role)]
        out_events.append(CrossEvent(x_out, role))
        back_events.insert(0, CrossEvent(x_back, role))
    for item in band.piercing_trace:
        h, sign = item
        comp = bld.components.get(h)
        if comp is None or comp.kind != DOTTED:
            raise IllegalMove("band pierces %r which is not a dotted component" % h)
        if sign not in (1, -1):
            raise IllegalMove("bad band piercing item %r" % (item,))
        out_events.append(PierceEvent(h, sign))
        back_events.insert(0, PierceEvent(h, -sign))
    return out_events, back_events


def slide_over_1handle(d: Diagram, a, h, sign, position):
    """
    Slide a 2-handle across a dotted circle: insert one piercing event.

    A single signed pass changes the class of the attaching circle (the
    boundary map gains a unit), so despite the name this is bookkeeping for
    re-routing an attaching curve, not a manifold-preserving move; the
    figure slides always occur in cancelling pairs, which replay as two of
    these followed by free reduction.
    """
    ca, ch = d.component(a), d.component(h)
    if ca.kind != TWO_HANDLE:
        raise IllegalMove("%r is not a 2-handle" % a)
    if ch.kind != DOTTED:
        raise IllegalMove("%r is not a dotted component" % h)
    if sign not in (1, -1):
        raise IllegalMove("piercing sign must be ±1")
    bld = _Builder(d)
    evs = bld.events[a]
    if not 0 <= position <= len(evs):
        raise IllegalMove("position %d out of range for %r" % (position, a))
    evs.insert(position, PierceEvent(h, sign))
    rec = MoveRecord("slide1", {"a": a, "h": h, "sign": sign,
                                "position": position},
                     CONSTRUCTION, (0, 0, 0, 0))
    return _validated(bld, rec, "slide1")


# ---------------------------------------------------------------------------
# blow-up / blow-down
# ---------------------------------------------------------------------------

def _rainbow_passes(d: Diagram, u):
    """
    Check the normalized ring form of u and return its passes in nesting
    order: a list of (component, event indices pair, direction).
    """
    evs = d.events[u]
    xs = [e for e in evs if isinstance(e, CrossEvent)]
    if len(xs) != len(evs):
        raise IllegalMove("%r carries piercings; isotope them away first" % u)
    m = len(xs)
    if m % 2 != 0:
        raise IllegalMove("odd number of crossings on %r" % u)
    n = m // 2

    # pair events under each rotation until one works
    for rot in range(m or 1):
        seq = [xs[(rot + i) % m] for i in range(m)]
        pairs = [(seq[i], seq[m - 1 - i]) for i in range(n)]
        result = []
        used = set()
        ok = True
        for e1, e2 in pairs:
            if e1.crossing in used or e2.crossing in used or e1.crossing == e2.crossing:
                ok = False
                break
            used.update((e1.crossing, e2.crossing))
            p1 = [(c, r, i) for c, r, i in d.crossing_passes(e1.crossing) if c != u]
            p2 = [(c, r, i) for c, r, i in d.crossing_passes(e2.crossing) if c != u]
            if len(p1) != 1 or len(p2) != 1:
                ok = False
                break
            (c1, r1, i1), (c2, r2, i2) = p1[0], p2[0]
            if c1 != c2 or c1 == u:
                ok = False
                break
            k = len(d.events[c1])
            adjacent = (i2 == (i1 + 1) % k) or (i1 == (i2 + 1) % k)
            if not adjacent:
                ok = False
                break
            if {r1, r2} != {"over", "under"}:
                ok = False
                break
            s1 = d.crossings[e1.crossing]
            s2 = d.crossings[e2.crossing]
            if s1 != s2:
                ok = False
                break
            result.append((c1, (min(i1, i2), max(i1, i2)), s1))
        if ok:
            return result
    raise IllegalMove("%r is not in normalized ring form" % u)


def blow_down(d: Diagram, u):
    """
    Remove a ±1-framed ring-form unknot, twisting the strands through it by
    the opposite sign.  Changes the 4-manifold by splitting off ±CP^2; the
    boundary is unchanged.
    """
    cu = d.component(u)
    if cu.kind != TWO_HANDLE:
        raise IllegalMove("%r is not a 2-handle" % u)
    eps = cu.framing
    if eps not in (1, -1):
        raise IllegalMove("blow-down needs framing ±1, got %r" % eps)
    if any(isinstance(e, PierceEvent) for e in d.events[u]):
        raise IllegalMove("%r pierces a dotted component" % u)
    passes = _rainbow_passes(d, u)
    lk_with_u = {s: d.linking_number(s, u) for s in d.two_handles() if s != u}

    # delete u's crossings from the pass strands, remembering splice points
    splice = [(cid, i1, i2, direction)
              for cid, (i1, i2), direction in passes]
    deleted = {}
    for cid, i1, i2, direction in splice:
        deleted.setdefault(cid, []).extend([i1, i2])
    twist_passes = []
    for cid, i1, i2, direction in splice:
        shift = sum(1 for j in deleted[cid] if j < i1)
        twist_passes.append((cid, i1 - shift, direction))

    rec = MoveRecord("blowdown", {"u": u, "eps": eps}, BOUNDARY,
                     (0, -1, 0, -1))
    # how the compensating twist sits in the plane depends on how the passes
    # ran through the disk (bundled or side by side); scan the equivalent
    # layouts and keep the first planar one
    last_issues = None
    for inserts in _twist_layouts(twist_passes, -eps):
        bld = _Builder(d)
        for cid, i1, i2, direction in sorted(splice,
                                             key=lambda t: (t[0], -t[1])):
            evs = bld.events[cid]
            del evs[i2]
            del evs[i1]
        bld.remove_component(u)
        _apply_twist_layout(bld, inserts)
        for s, k in lk_with_u.items():
            if k and s in bld.components:
                cs = bld.components[s]
                bld.components[s] = Component(
                    id=s, kind=TWO_HANDLE,
                    framing=cs.framing - eps * k * k, label=cs.label)
        out = bld.diagram()
        issues = out.validate()
        if not issues:
            return out, rec
        last_issues = issues
    raise IllegalMove("blowdown produced an invalid diagram: %s"
                      % "; ".join(str(i) for i in last_issues))


def _twist_layouts(passes, twist):
    """
    Candidate event layouts realizing a full twist on the given passes:
    lists of (cid, position, events).  Signs and pair counts are identical
    across candidates; only the planar arrangement differs.
    """
    n = len(passes)
    if n < 2 or twist == 0:
        yield []
        return
    serial = [0]

    def braid(order, role_flip):
        pending = {p: [] for p in order}
        pos_to_pass = list(order)
        handed = 1 if twist > 0 else -1
        over_first = (handed == 1) != role_flip
        events = {}
        for _ in range(abs(twist)):
            for _round in range(n):
                for k in range(n - 1):
                    i, j = pos_to_pass[k], pos_to_pass[k + 1]
                    xid = "tw%d" % serial[0]
                    serial[0] += 1
                    di, dj = passes[i][2], passes[j][2]
                    events[xid] = handed * di * dj
                    op, up = (i, j) if over_first else (j, i)
                    pending[op].append(CrossEvent(xid, "over"))
                    pending[up].append(CrossEvent(xid, "under"))
                    pos_to_pass[k], pos_to_pass[k + 1] = \
                        pos_to_pass[k + 1], pos_to_pass[k]
        out = []
        for p, (cid, pos, direction) in enumerate(passes):
            evs = pending[p]
            if direction == -1:
                evs = list(reversed(evs))
            out.append((cid, pos, evs))
        return out, events

    for order in ([*range(n)], [*reversed(range(n))]):
        for role_flip in (False, True):
            yield _with_signs(*braid(list(order), role_flip))
    if n == 2 and abs(twist) == 1:
        # side-by-side passes: the twist is a clasp; the two strands meet
        # its crossings in opposite orders
        handed = 1 if twist > 0 else -1
        sign = handed * passes[0][2] * passes[1][2]
        for flip in (False, True):
            r1, r2 = ("over", "under") if not flip else ("under", "over")
            xa = "tw%d" % serial[0]
            xb = "tw%d" % (serial[0] + 1)
            serial[0] += 2
            o1 = [CrossEvent(xa, r1), CrossEvent(xb, r2)]
            o2 = [CrossEvent(xb, r1), CrossEvent(xa, r2)]
            for a_first in (False, True):
                e1, e2 = (o1, o2) if not a_first else (o2, o1)
                yield _with_signs(
                    [(passes[0][0], passes[0][1], e1),
                     (passes[1][0], passes[1][1], e2)],
                    {xa: sign, xb: sign})


def _with_signs(inserts, signs):
    return (inserts, signs)


def _apply_twist_layout(bld: _Builder, layout):
    if not layout:
        return
    inserts, signs = layout
    for xid, sign in signs.items():
        fresh = bld.new_xid()
        for i, (cid, pos, evs) in enumerate(inserts):
            inserts[i] = (cid, pos, [CrossEvent(fresh, e.role)
                                     if e.crossing == xid else e
                                     for e in evs])
        bld.crossings[fresh] = sign
    for cid, pos, evs in sorted(inserts, key=lambda t: (t[0], -t[1])):
        bld.events[cid][pos:pos] = evs


def blow_up(d: Diagram, eps, site=()):
    """
    Add a ±1-framed unknot around the listed strand passes (possibly none),
    twisting them by the same sign.  site = ((component, arc, direction), ...).
    """
    if eps not in (1, -1):
        raise IllegalMove("blow-up sign must be ±1")
    bld = _Builder(d)
    uid = _fresh_component_id(bld, "e")
    anchors = []
    for item in site:
        cid, arc, direction = item
        comp = bld.components.get(cid)
        if comp is None or comp.kind != TWO_HANDLE:
            raise IllegalMove("blow-up site must name 2-handle arcs")
        if direction not in (1, -1):
            raise IllegalMove("pass direction must be ±1")
        anchors.append((cid, _anchor_of_arc(bld, cid, arc), direction))
    # ring crossings first: strands pass under the near edge and over the far
    # edge; a direction -1 strand runs against the bundle and meets the far
    # edge first.  u reads the near edge in pass order, the far edge reversed.
    near, far = [], []
    bottoms = []
    for cid, anchor, direction in anchors:
        x_near, x_far = bld.new_xid(), bld.new_xid()
        bld.crossings[x_near] = direction
        bld.crossings[x_far] = direction
        at = _resolve_anchor(bld, cid, anchor)
        if direction == 1:
            block = [CrossEvent(x_near, "under"), CrossEvent(x_far, "over")]
        else:
            block = [CrossEvent(x_far, "over"), CrossEvent(x_near, "under")]
        bld.events[cid][at:at] = block
        near.append(CrossEvent(x_near, "over"))
        far.insert(0, CrossEvent(x_far, "under"))
        bottoms.append((cid, CrossEvent(x_near, "under"), direction))
    # the compensating twist sits just outside the near edge: before it for
    # along-bundle strands, after it for against-bundle strands
    passes = []
    for cid, bottom_event, direction in bottoms:
        pos = bld.find_event(cid, bottom_event)
        passes.append((cid, pos if direction == 1 else pos + 1, direction))
    _full_twist(bld, passes, eps)
    bld.components[uid] = Component(id=uid, kind=TWO_HANDLE, framing=eps)
    bld.events[uid] = near + far
    k = {}
    for cid, _anchor, direction in anchors:
        k[cid] = k.get(cid, 0) + direction
    for cid, ks in k.items():
        cs = bld.components[cid]
        bld.components[cid] = Component(id=cid, kind=TWO_HANDLE,
                                        framing=cs.framing + eps * ks * ks,
                                        label=cs.label)
    rec = MoveRecord("blowup", {"eps": eps, "u": uid,
                                "site": [list(s) for s in site]},
                     BOUNDARY, (0, 1, 0, 1))
    return _validated(bld, rec, "blowup")


def _fresh_component_id(bld: _Builder, hint):
    i = 1
    while True:
        cid = "%s%d" % (hint, i)
        if cid not in bld.components:
            return cid
        i += 1


# ---------------------------------------------------------------------------
# cancellations and exchanges
# ---------------------------------------------------------------------------

def cancel_1_2(d: Diagram, h, m):
    """
    Cancel a dotted circle against a 2-handle meeting it in a single
    piercing.  Every other strand through the circle is first slid across
    the canceling handle (picking up its curve data and the framing twist),
    then the pair is erased.
    """
    ch, cm = d.component(h), d.component(m)
    if ch.kind != DOTTED:
        raise IllegalMove("%r is not a dotted component" % h)
    if cm.kind != TWO_HANDLE:
        raise IllegalMove("%r is not a 2-handle" % m)
    m_pierces = [e for e in d.events[m] if isinstance(e, PierceEvent)]
    if [e.through for e in m_pierces] != [h]:
        raise IllegalMove("%r must pierce %r exactly once and nothing else"
                          % (m, h))
    sigma_m = m_pierces[0].sign

    current = d
    # net-zero dips through the disk retract before anything slides
    for s in current.two_handles():
        if s != m:
            current = _cancel_piercing_pairs(current, s, h)
    # slide every other pass through h across m until only m pierces h
    while True:
        target = None
        for s in current.two_handles():
            if s == m:
                continue
            for i, e in enumerate(current.events[s]):
                if isinstance(e, PierceEvent) and e.through == h:
                    target = (s, i, e.sign)
                    break
            if target:
                break
        if target is None:
            break
        current = _slide_pass_over(current, target, m, h, sigma_m)
        current, _ = isotopy_reduce(current)
        current = _cancel_piercing_pairs(current, target[0], h)

    bld = _Builder(current)
    bld.remove_component(m)
    bld.remove_component(h)
    rec = MoveRecord("cancel12", {"h": h, "m": m, "eps": cm.framing},
                     DIFFEO, (-1, -1, 0, 0))
    return _validated(bld, rec, "cancel12")


class _Marker:
    """Unique placeholder in an event list; matches nothing but itself."""


def _slide_pass_over(d: Diagram, target, m, h, sigma_m):
    """One internal slide of cancel_1_2: remove one pass through h."""
    s, pos, sigma = target
    eps = -sigma * sigma_m
    cm = d.component(m)
    cs = d.component(s)
    new_framing = (cs.framing + cm.framing
                   + 2 * eps * d.linking_number(s, m))
    deficit = cm.framing - d.writhe(m)
    n_m = len(d.events[m])
    canonical = (next(i for i, e in enumerate(d.events[m])
                      if isinstance(e, PierceEvent)) + 1) % n_m
    # both the cut point along m and the attachment point along s are
    # drawing choices; scan them deterministically.  The attachment may sit
    # anywhere in the letter gap around the pass (the copy's cancelling
    # letter only needs to be word-adjacent to it).
    bases = [canonical] + [b for b in range(n_m) if b != canonical]
    attempts = 0
    for base in bases:
        if attempts > 600:
            break
        bld0 = _Builder(d)
        marker = _Marker()
        bld0.events[s][pos] = marker
        copy_events = _build_copy(bld0, m, base, eps)
        base_anchor = d.events[m][base]
        clasps = _emit_clasps(bld0, m, base_anchor, deficit, eps)
        block = clasps + copy_events if eps == 1 else copy_events + clasps
        evs0 = bld0.events[s]
        at = evs0.index(marker)
        evs0[at] = PierceEvent(h, sigma)
        # the expected piercing letters of s afterwards: the pass is gone
        expected = free_reduce(
            [(e.through, e.sign) for i, e in enumerate(evs0)
             if isinstance(e, PierceEvent) and i != at])
        n0 = len(evs0)
        splices = ([at] + [p for p in range(at - 1, -1, -1)]
                   + [p for p in range(at + 1, n0 + 1)])
        if eps == -1:
            splices = ([at + 1] + [p for p in range(at + 2, n0 + 1)]
                       + [p for p in range(at, -1, -1)])
        for splice in splices:
            attempts += 1
            if attempts > 600:
                break
            bld = _Builder(bld0.diagram())
            evs = bld.events[s]
            evs[splice:splice] = block
            bld.components[s] = Component(id=s, kind=TWO_HANDLE,
                                          framing=new_framing,
                                          label=cs.label)
            out = bld.diagram()
            if out.validate():
                continue
            # erase the canceling piercing pair through h on s
            out = _cancel_piercing_pairs(out, s, h)
            if out.piercing_word(s) != expected:
                continue
            return out
    raise IllegalMove("cannot slide %r across %r in the plane" % (s, m))


def _cancel_piercing_pairs(d: Diagram, s, h):
    """
    Remove cancelling piercing pairs of s through h: consecutive h-letters
    (ignoring crossings and other piercings in between) of opposite sign.
    Invisible to every computed quantity; the strand's dip through the disk
    retracts.
    """
    bld = _Builder(d)
    evs = bld.events[s]
    changed = True
    while changed:
        changed = False
        letters = [i for i, e in enumerate(evs)
                   if isinstance(e, PierceEvent) and e.through == h]
        n = len(letters)
        for t in range(n):
            i, j = letters[t], letters[(t + 1) % n]
            if i != j and evs[i].sign == -evs[j].sign:
                for k in sorted((i, j), reverse=True):
                    del evs[k]
                changed = True
                break
    return bld.diagram()


def cancel_2_3(d: Diagram, u):
    """Cancel a split 0-framed unknot against a 3-handle."""
    cu = d.component(u)
    if cu.kind != TWO_HANDLE:
        raise IllegalMove("%r is not a 2-handle" % u)
    if cu.framing != 0:
        raise IllegalMove("2/3 cancellation needs a 0-framed handle")
    if d.events[u]:
        raise IllegalMove("%r is not split (it has crossings or piercings)" % u)
    if d.n3 < 1:
        raise IllegalMove("no 3-handle to cancel against")
    bld = _Builder(d)
    bld.remove_component(u)
    bld.n3 -= 1
    rec = MoveRecord("cancel23", {"u": u}, DIFFEO, (0, -1, -1, 0))
    return _validated(bld, rec, "cancel23")


def dot_zero_exchange(d: Diagram, h):
    """
    Trade the dot for a zero: the dotted circle becomes a 0-framed 2-handle
    on the same curve, and every piercing through it becomes an honest
    ring pass (two crossings).  The boundary 3-manifold is unchanged; the
    4-manifold is not.
    """
    ch = d.component(h)
    if ch.kind != DOTTED:
        raise IllegalMove("%r is not a dotted component" % h)
    piercings = []
    for cid in d.ordered_ids():
        for i, e in enumerate(d.events[cid]):
            if isinstance(e, PierceEvent) and e.through == h:
                piercings.append((cid, i, e.sign))
    n = len(piercings)
    rec = MoveRecord("dotzero", {"h": h}, BOUNDARY, (-1, 1, 0, 2))
    # each pass becomes a ring pass carrying the piercing sign.  Which side
    # of the ring a strand passes over, and how the passes thread the ring
    # (nested, sequential, or mixed), depend on the planar layout: search
    # the variants and keep the first planar one.
    budget = 4000
    for mask in range(1 << n):
        bld = _Builder(d)
        near, far = {}, {}
        ring = []
        for p, (cid, i, sign) in enumerate(piercings):
            x_near, x_far = bld.new_xid(), bld.new_xid()
            bld.crossings[x_near] = sign
            bld.crossings[x_far] = sign
            s_near, s_far = ("under", "over")
            if mask >> p & 1:
                s_near, s_far = ("over", "under")
            if sign == 1:
                block = [CrossEvent(x_near, s_near), CrossEvent(x_far, s_far)]
            else:
                block = [CrossEvent(x_far, s_far), CrossEvent(x_near, s_near)]
            ring.append((cid, i, block))
            near[p] = CrossEvent(x_near,
                                 "over" if s_near == "under" else "under")
            far[p] = CrossEvent(x_far,
                                "under" if s_far == "over" else "over")
        for cid, i, evs in sorted(ring, key=lambda t: (t[0], -t[1])):
            bld.events[cid][i:i + 1] = evs
        bld.components[h] = Component(id=h, kind=TWO_HANDLE, framing=0,
                                      label=ch.label)
        base_events = list(bld.events[h])
        for seq in _ring_orders(n):
            budget -= 1
            if budget < 0:
                raise IllegalMove("dot/zero ring search exhausted")
            bld.events[h] = base_events + [near[p] if kind == 0 else far[p]
                                           for kind, p in seq]
            out = bld.diagram()
            if not out.validate():
                return out, rec
    raise IllegalMove("dot/zero exchange has no planar ring nesting")


def _ring_orders(n):
    """
    Candidate cyclic orders for n ring passes, as sequences of
    (0=near/1=far, pass index).  Small n: every arrangement; larger n:
    nested (rainbow) and sequential families over pass permutations.
    """
    from itertools import permutations
    if n == 0:
        yield []
        return
    seen = set()
    if n <= 3:
        events = [(0, p) for p in range(n)] + [(1, p) for p in range(n)]
        first = events[0]
        rest = events[1:]
        for perm in permutations(rest):
            yield [first] + list(perm)
        return
    if n > 5:
        raise IllegalMove("too many ring passes (%d)" % n)
    for perm in permutations(range(n)):
        nested = ([(0, p) for p in perm]
                  + [(1, p) for p in reversed(perm)])
        flat = []
        for p in perm:
            flat.extend([(0, p), (1, p)])
        for cand in (nested, flat):
            key = tuple(cand)
            if key not in seen:
                seen.add(key)
                yield cand


def gluck_flip(d: Diagram, m):
    """
    Flip the framing sign of a ±1-framed meridian of one dotted component.
    The Gluck construction only sees the framing's parity, so this preserves
    the 4-manifold.
    """
    cm = d.component(m)
    if cm.kind != TWO_HANDLE:
        raise IllegalMove("%r is not a 2-handle" % m)
    if cm.framing not in (1, -1):
        raise IllegalMove("Gluck flip needs framing ±1")
    evs = d.events[m]
    if (len(evs) != 1 or not isinstance(evs[0], PierceEvent)):
        raise IllegalMove("%r must interact only by a single piercing" % m)
    h = evs[0].through
    target = d.component(h)
    if target.kind != DOTTED:
        raise IllegalMove("Gluck meridian must pierce a dotted component")
    # the rotation parity trick needs the sphere's tube clear: nothing else
    # may run through the pierced circle
    for cid in d.ordered_ids():
        if cid == m:
            continue
        if any(isinstance(e, PierceEvent) and e.through == h
               for e in d.events[cid]):
            raise IllegalMove("%r is pierced by %r too; the flip would "
                              "twist it" % (h, cid))
    bld = _Builder(d)
    bld.components[m] = Component(id=m, kind=TWO_HANDLE,
                                  framing=-cm.framing, label=cm.label)
    rec = MoveRecord("gluck", {"m": m, "framing": -cm.framing},
                     DIFFEO, (0, 0, 0, 0))
    return _validated(bld, rec, "gluck")


# ---------------------------------------------------------------------------
# construction steps
# ---------------------------------------------------------------------------

def _attach_curve(bld: _Builder, new_id, framing, trace, kind=TWO_HANDLE):
    if new_id in bld.components:
        raise IllegalMove("component id %r already in use" % new_id)
    # arc references in the trace name arcs of the diagram as it was before
    # this curve arrived: resolve them all first
    anchors = []
    for item in trace:
        if item[0] in ("cross", "clasp"):
            cid, arc = item[1], item[2]
            if cid not in bld.components:
                raise IllegalMove("curve crosses unknown component %r" % cid)
            if bld.components[cid].kind == DOTTED:
                raise IllegalMove("curves may not cross dotted components")
            anchors.append(_anchor_of_arc(bld, cid, arc))
        else:
            anchors.append(None)
    events = []
    for item, anchor in zip(trace, anchors):
        tag = item[0]
        if tag == "cross":
            _, cid, arc, role, sign = item
            if role not in ("over", "under") or sign not in (1, -1):
                raise IllegalMove("bad crossing trace item %r" % (item,))
            xid = bld.new_xid()
            bld.crossings[xid] = sign
            other_role = "under" if role == "over" else "over"
            at = _resolve_anchor(bld, cid, anchor)
            bld.events[cid].insert(at, CrossEvent(xid, other_role))
            events.append(CrossEvent(xid, role))
        elif tag == "clasp":
            # one full clasp with an existing curve: the new curve reads
            # (under, over), the host reads the pair in reversed order
            _, cid, arc, sign = item
            if sign not in (1, -1):
                raise IllegalMove("bad clasp trace item %r" % (item,))
            x0, x1 = bld.new_xid(), bld.new_xid()
            bld.crossings[x0] = sign
            bld.crossings[x1] = sign
            at = _resolve_anchor(bld, cid, anchor)
            if sign == 1:
                host = [CrossEvent(x1, "under"), CrossEvent(x0, "over")]
                mine = [CrossEvent(x0, "under"), CrossEvent(x1, "over")]
            else:
                host = [CrossEvent(x1, "over"), CrossEvent(x0, "under")]
                mine = [CrossEvent(x0, "over"), CrossEvent(x1, "under")]
            bld.events[cid][at:at] = host
            events.extend(mine)
        elif tag == "pierce":
            _, hid, sign = item
            comp = bld.components.get(hid)
            if comp is None or comp.kind != DOTTED:
                raise IllegalMove("curve pierces %r which is not dotted" % hid)
            if sign not in (1, -1):
                raise IllegalMove("bad piercing trace item %r" % (item,))
            events.append(PierceEvent(hid, sign))
        else:
            raise IllegalMove("unknown trace item %r" % (item,))
    bld.components[new_id] = Component(id=new_id, kind=kind, framing=framing)
    bld.events[new_id] = events


def surger_loop(d: Diagram, loop_id, trace, k, meridian_id=None):
    """
    Surger a loop: attach a 2-handle along the traced curve with framing k
    plus a 0-framed meridian of it.
    """
    bld = _Builder(d)
    _attach_curve(bld, loop_id, k, trace)
    mid = meridian_id or _fresh_component_id(bld, "mu")
    # meridian: a clasp at the end of the new loop
    at = len(bld.events[loop_id])
    mu_events = _clasp_events(bld, loop_id, at, 1)
    bld.components[mid] = Component(id=mid, kind=TWO_HANDLE, framing=0)
    bld.events[mid] = mu_events
    rec = MoveRecord("surger", {"loop": loop_id, "k": k, "meridian": mid},
                     CONSTRUCTION, (0, 2, 0, 2))
    return _validated(bld, rec, "surger")


def attach_dual_handles(d: Diagram, loops):
    """Attach the listed framed 2-handles; loops = ((id, framing, trace), ...)."""
    bld = _Builder(d)
    for new_id, framing, trace in loops:
        _attach_curve(bld, new_id, framing, trace)
    n = len(tuple(loops))
    rec = MoveRecord("attachdual", {"loops": [l[0] for l in loops]},
                     CONSTRUCTION, (0, n, 0, n))
    return _validated(bld, rec, "attachdual")


def mark_closed(d: Diagram):
    """
    Mark the diagram as a closed manifold: legal when the drawn part's
    boundary could be capped by the carried 3- and 4-handles.
    """
    if d.n4 != 1:
        raise IllegalMove("closing needs exactly one 4-handle")
    if d.closed:
        raise IllegalMove("already closed")
    free, torsion = cokernel_invariants(d.extended_matrix())
    if free != d.n3 or torsion:
        raise IllegalMove(
            "boundary H1 is Z^%d plus torsion %r, cannot cap with %d "
            "3-handles" % (free, list(torsion), d.n3))
    bld = _Builder(d)
    bld.closed = True
    rec = MoveRecord("close", {}, DIFFEO, (0, 0, 0, 0))
    return bld.diagram(), rec


# ---------------------------------------------------------------------------
# Reidemeister moves and cleanup isotopies
# ---------------------------------------------------------------------------

def reidemeister_r1_insert(d: Diagram, cid, arc, sign):
    comp = d.component(cid)
    if comp.kind == DOTTED and not comp.slice_flag:
        raise IllegalMove("round dotted circles stay crossing-free")
    if sign not in (1, -1):
        raise IllegalMove("kink sign must be ±1")
    bld = _Builder(d)
    at = bld.arc_end(cid, arc)
    xid = bld.new_xid()
    bld.crossings[xid] = sign
    bld.events[cid][at:at] = [CrossEvent(xid, "over"), CrossEvent(xid, "under")]
    rec = MoveRecord("isotopy", {"kind": "r1", "component": cid, "sign": sign},
                     DIFFEO, (0, 0, 0, 0))
    return _validated(bld, rec, "r1 insert")


def reidemeister_r1_remove(d: Diagram, xid):
    if xid not in d.crossings:
        raise IllegalMove("unknown crossing %r" % xid)
    passes = d.crossing_passes(xid)
    comps = {c for c, _, _ in passes}
    if len(comps) != 1:
        raise IllegalMove("%r is not a kink" % xid)
    cid = comps.pop()
    idx = sorted(i for _, _, i in passes)
    n = len(d.events[cid])
    if not (idx[1] == idx[0] + 1 or (idx[0] == 0 and idx[1] == n - 1)):
        raise IllegalMove("%r is not a removable kink" % xid)
    bld = _Builder(d)
    for i in sorted(idx, reverse=True):
        del bld.events[cid][i]
    del bld.crossings[xid]
    rec = MoveRecord("isotopy", {"kind": "r1-remove", "crossing": xid},
                     DIFFEO, (0, 0, 0, 0))
    return _validated(bld, rec, "r1 remove")


def reidemeister_r2_insert(d: Diagram, over_arc, under_arc):
    """Push the arc `over_arc` across `under_arc`; both are (cid, arc)."""
    (ac, aa), (bc, ba) = over_arc, under_arc
    for cid in (ac, bc):
        comp = d.component(cid)
        if comp.kind == DOTTED and not (comp.slice_flag and ac == bc):
            raise IllegalMove("R2 involving a dotted component is forbidden")
    if (ac, aa) == (bc, ba):
        raise IllegalMove("R2 needs two different arcs")
    last_error = None
    for first_sign in (1, -1):
        for b_order in (0, 1):
            try:
                return _try_r2(d, ac, aa, bc, ba, first_sign, b_order)
            except IllegalMove as e:
                last_error = e
    raise IllegalMove("R2 site is not planar-compatible: %s" % last_error)


def _try_r2(d, ac, aa, bc, ba, first_sign, b_order):
    bld = _Builder(d)
    anchor_a = _anchor_of_arc(bld, ac, aa)
    anchor_b = _anchor_of_arc(bld, bc, ba)
    x1, x2 = bld.new_xid(), bld.new_xid()
    bld.crossings[x1] = first_sign
    bld.crossings[x2] = -first_sign
    a_events = [CrossEvent(x1, "over"), CrossEvent(x2, "over")]
    b_events = [CrossEvent(x1, "under"), CrossEvent(x2, "under")]
    if b_order:
        b_events.reverse()
    at_a = _resolve_anchor(bld, ac, anchor_a)
    bld.events[ac][at_a:at_a] = a_events
    at_b = _resolve_anchor(bld, bc, anchor_b)
    bld.events[bc][at_b:at_b] = b_events
    rec = MoveRecord("isotopy", {"kind": "r2", "over": [ac, aa],
                                 "under": [bc, ba]},
                     DIFFEO, (0, 0, 0, 0))
    return _validated(bld, rec, "r2 insert")


def reidemeister_r2_remove(d: Diagram, x1, x2):
    """Remove a cancelling pair of crossings forming an R2 bigon."""
    for xid in (x1, x2):
        if xid not in d.crossings:
            raise IllegalMove("unknown crossing %r" % xid)
    if d.crossings[x1] != -d.crossings[x2]:
        raise IllegalMove("R2 pair must have opposite signs")
    p1 = {(c, r): i for c, r, i in d.crossing_passes(x1)}
    p2 = {(c, r): i for c, r, i in d.crossing_passes(x2)}
    if set(p1) != set(p2):
        raise IllegalMove("crossings do not join the same strands")
    roles = {}
    for (c, r) in p1:
        roles.setdefault(c, set()).add(r)
    # one strand must be over at both crossings
    strands = sorted(roles)
    if not any(roles[c] == {"over"} for c in strands):
        if not any(roles[c] == {"under"} for c in strands):
            raise IllegalMove("not an R2 pair (no strand passes over both)")
    bld = _Builder(d)
    removals = {}
    for (c, r), i in list(p1.items()) + list(p2.items()):
        removals.setdefault(c, []).append(i)
    for c, idxs in removals.items():
        n = len(bld.events[c])
        srt = sorted(idxs)
        # the two events must be adjacent along the strand
        pairs_ok = True
        for c2, idxs2 in removals.items():
            ss = sorted(idxs2)
            if len(ss) == 2 and not (ss[1] == ss[0] + 1
                                     or (ss[0] == 0 and ss[1] == len(bld.events[c2]) - 1)):
                pairs_ok = False
        if not pairs_ok:
            raise IllegalMove("R2 pair is not adjacent on both strands")
        for i in sorted(idxs, reverse=True):
            del bld.events[c][i]
    del bld.crossings[x1]
    del bld.crossings[x2]
    rec = MoveRecord("isotopy", {"kind": "r2-remove", "crossings": [x1, x2]},
                     DIFFEO, (0, 0, 0, 0))
    return _validated(bld, rec, "r2 remove")


def reidemeister_r3(d: Diagram, crossings):
    """Slide a strand across the opposite crossing of a triangle face."""
    trio = tuple(crossings)
    if len(set(trio)) != 3:
        raise IllegalMove("R3 needs three distinct crossings")
    for xid in trio:
        if xid not in d.crossings:
            raise IllegalMove("unknown crossing %r" % xid)
    # locate the three adjacent event pairs: each strand of the triangle has
    # two of the crossings as consecutive events
    adjacencies = []
    for cid, evs in d.events.items():
        n = len(evs)
        for i in range(n):
            j = (i + 1) % n
            a, b = evs[i], evs[j]
            if (isinstance(a, CrossEvent) and isinstance(b, CrossEvent)
                    and a.crossing in trio and b.crossing in trio
                    and a.crossing != b.crossing):
                adjacencies.append((cid, i, j))
    if len(adjacencies) != 3:
        raise IllegalMove("site does not bound a triangle (found %d edges)"
                          % len(adjacencies))
    # the slidable strand passes over both its triangle crossings (or under)
    ok = False
    for cid, i, j in adjacencies:
        r1, r2 = d.events[cid][i].role, d.events[cid][j].role
        if r1 == r2:
            ok = True
    if not ok:
        raise IllegalMove("triangle admits no R3 (no strand over/under both)")
    bld = _Builder(d)
    for cid, i, j in adjacencies:
        evs = bld.events[cid]
        evs[i], evs[j] = evs[j], evs[i]
    rec = MoveRecord("isotopy", {"kind": "r3", "crossings": list(trio)},
                     DIFFEO, (0, 0, 0, 0))
    return _validated(bld, rec, "r3")


def isotopy_reduce(d: Diagram):
    """
    Greedy cleanup isotopy: delete removable kinks, R2 bigons, and adjacent
    cancelling piercing pairs until nothing applies.  Deterministic order.
    """
    current = d
    changed = True
    while changed:
        changed = False
        # cancelling piercing pairs: consecutive letters through the same
        # dotted component with opposite signs (the dip retracts)
        for cid in current.ordered_ids():
            if current.components[cid].kind != TWO_HANDLE:
                continue
            for h in current.dotted():
                candidate = _cancel_piercing_pairs(current, cid, h)
                if candidate.events[cid] != current.events[cid]:
                    current = candidate
                    changed = True
                    break
            if changed:
                break
        if changed:
            continue
        # removable kinks
        for xid in sorted(current.crossings):
            try:
                current, _ = reidemeister_r1_remove(current, xid)
                changed = True
                break
            except IllegalMove:
                continue
        if changed:
            continue
        # R2 bigons
        xids = sorted(current.crossings)
        for i, x1 in enumerate(xids):
            for x2 in xids[i + 1:]:
                try:
                    current, _ = reidemeister_r2_remove(current, x1, x2)
                    changed = True
                    break
                except IllegalMove:
                    continue
            if changed:
                break
    rec = MoveRecord("isotopy", {"kind": "reduce"}, DIFFEO, (0, 0, 0, 0))
    return current, rec
