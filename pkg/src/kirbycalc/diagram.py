"""
Combinatorial framed-link handlebody diagrams.

A diagram is a set of closed curves (components), each either a 2-handle
attaching curve with an explicit integer framing or a dotted circle
(1-handle).  Each component carries a cyclic event list recording, in
traversal order, its crossing passes and the points where it pierces the
spanning disks of dotted components.  Crossings between a dotted curve and
anything else are not representable: that interaction is carried entirely
by signed piercing events.

Conventions fixed here and used everywhere else:

* every component is oriented; a crossing sign is +1 for a right-handed
  crossing of the two oriented strands;
* framings are explicit integers on 2-handles, never inferred from writhe;
* components are ordered lexicographically by id wherever a matrix or a
  deterministic listing is produced;
* arcs of a component are numbered so that arc j is the piece of curve
  ending at the component's j-th crossing pass (in stored event order);
  a crossing-free curve is the single arc 0.
"""

from __future__ import annotations

import json
from dataclasses import dataclass

from .algebra import IntMatrix, free_reduce

TWO_HANDLE = "2-handle"
DOTTED = "dotted"

KCD_FORMAT = "kcd-1"
_KCD_FIELDS = {"format", "components", "crossings", "piercings", "n3", "n4", "metadata"}


class DiagramError(Exception):
    """Malformed diagram data or an operation applied to the wrong object."""


@dataclass(frozen=True)
class Component:
    """One attaching curve: a framed 2-handle or a dotted 1-handle circle."""

    id: str
    kind: str
    framing: int | None = None
    label: str | None = None
    slice_flag: bool = False

    def __post_init__(self):
        if self.kind not in (TWO_HANDLE, DOTTED):
            raise DiagramError("unknown component kind %r" % self.kind)
        if self.kind == TWO_HANDLE and self.framing is None:
            raise DiagramError("2-handle %r needs a framing" % self.id)
        if self.kind == DOTTED and self.framing is not None:
            raise DiagramError("dotted component %r cannot carry a framing" % self.id)
        if self.slice_flag and self.kind != DOTTED:
            raise DiagramError("slice flag only applies to dotted components")


# Event tokens making up a component's traversal.  A crossing pass names the
# crossing and the role this strand plays there; a piercing names the dotted
# component whose disk is crossed and the sign of the pass.

@dataclass(frozen=True)
class CrossEvent:
    crossing: str
    role: str  # "over" | "under"


@dataclass(frozen=True)
class PierceEvent:
    through: str
    sign: int


@dataclass(frozen=True)
class PiercingEvent:
    """Piercing as exposed data: strand, dotted target, sign, strand position."""

    strand: str
    through: str
    sign: int
    position: int


@dataclass(frozen=True)
class Crossing:
    """A crossing, as exposed data; arcs are (component id, arc index) pairs."""

    id: str
    over_arc: tuple
    under_arc: tuple
    sign: int

    def planar_ends(self):
        """
        The four incident arc-ends in counterclockwise planar order, as
        (component, arc, "in"|"out") triples.  The rotation is forced by the
        sign convention, starting from the outgoing over strand.
        """
        oc, oa = self.over_arc
        uc, ua = self.under_arc
        over_in, over_out = (oc, oa, "in"), (oc, oa, "out")
        under_in, under_out = (uc, ua, "in"), (uc, ua, "out")
        if self.sign == 1:
            return (over_out, under_out, over_in, under_in)
        return (over_out, under_in, over_in, under_out)


@dataclass(frozen=True)
class ValidationIssue:
    code: str
    location: str
    message: str

    def __str__(self):
        return "%s at %s: %s" % (self.code, self.location, self.message)


class Diagram:
    """
    An immutable framed-link handlebody diagram.

    components: dict id -> Component
    events:     dict id -> tuple of CrossEvent/PierceEvent in traversal order
    crossings:  dict crossing id -> sign
    n3, n4:     counts of 3- and 4-handles (never drawn)
    closed:     script-issued closure marker (n4 capped; boundary empty)
    metadata:   free-form entry data (name, paper figure, data blocks)
    """

    __slots__ = ("components", "events", "crossings", "n3", "n4",
                 "closed", "metadata")

    def __init__(self, components=(), events=None, crossings=None,
                 n3=0, n4=0, closed=False, metadata=None):
        comps = {}
        for c in components:
            if c.id in comps:
                raise DiagramError("duplicate component id %r" % c.id)
            comps[c.id] = c
        self.components = comps
        ev = dict(events or {})
        for cid in comps:
            ev.setdefault(cid, ())
        # deterministic iteration order everywhere downstream
        self.events = {cid: tuple(ev[cid]) for cid in sorted(ev)}
        self.crossings = {xid: crossings[xid]
                          for xid in sorted(crossings)} if crossings else {}
        self.n3 = int(n3)
        self.n4 = int(n4)
        self.closed = bool(closed)
        self.metadata = dict(metadata or {})

    # -- basic views --------------------------------------------------------

    def ordered_ids(self, kind=None):
        ids = sorted(self.components)
        if kind is None:
            return ids
        return [i for i in ids if self.components[i].kind == kind]

    def two_handles(self):
        return self.ordered_ids(TWO_HANDLE)

    def dotted(self):
        return self.ordered_ids(DOTTED)

    def component(self, cid):
        try:
            return self.components[cid]
        except KeyError:
            raise DiagramError("unknown component %r" % cid) from None

    def arc_count(self, cid):
        self.component(cid)
        n = sum(1 for e in self.events[cid] if isinstance(e, CrossEvent))
        return n if n else 1

    def cross_events(self, cid):
        return [(i, e) for i, e in enumerate(self.events[cid])
                if isinstance(e, CrossEvent)]

    def piercings_of(self, cid):
        """Ordered PiercingEvent list for one strand."""
        out = []
        for i, e in enumerate(self.events[cid]):
            if isinstance(e, PierceEvent):
                out.append(PiercingEvent(cid, e.through, e.sign, i))
        return out

    def all_piercings(self):
        out = []
        for cid in self.ordered_ids():
            out.extend(self.piercings_of(cid))
        return out

    def crossing_passes(self, xid):
        """The (component, role, event index) passes of one crossing."""
        out = []
        for cid, evs in self.events.items():
            for i, e in enumerate(evs):
                if isinstance(e, CrossEvent) and e.crossing == xid:
                    out.append((cid, e.role, i))
        return out

    def crossing_data(self, xid):
        """Exposed Crossing record with arc references."""
        passes = self.crossing_passes(xid)
        over = [(c, i) for c, r, i in passes if r == "over"]
        under = [(c, i) for c, r, i in passes if r == "under"]
        if len(over) != 1 or len(under) != 1:
            raise DiagramError("crossing %r has inconsistent passes" % xid)
        oc, oi = over[0]
        uc, ui = under[0]
        return Crossing(xid, (oc, self._arc_ending_at(oc, oi)),
                        (uc, self._arc_ending_at(uc, ui)), self.crossings[xid])

    def _arc_ending_at(self, cid, event_index):
        """Arc number of the arc terminating at the given crossing event."""
        k = 0
        for i, e in enumerate(self.events[cid]):
            if isinstance(e, CrossEvent):
                if i == event_index:
                    return k
                k += 1
        raise DiagramError("event %d of %r is not a crossing" % (event_index, cid))

    def arc_end_position(self, cid, arc):
        """Event index just past the end of the given arc (splice point)."""
        xs = [i for i, e in enumerate(self.events[cid])
              if isinstance(e, CrossEvent)]
        if not xs:
            if arc != 0:
                raise DiagramError("component %r has only arc 0" % cid)
            return len(self.events[cid])
        if not 0 <= arc < len(xs):
            raise DiagramError("component %r has no arc %d" % (cid, arc))
        return xs[arc]

    # -- derived pairing data ------------------------------------------------

    def writhe(self, cid):
        comp = self.component(cid)
        total = 0
        for xid, sign in self.crossings.items():
            passes = self.crossing_passes(xid)
            comps = {c for c, _, _ in passes}
            if comps == {cid}:
                total += sign
        return total

    def linking_number(self, a, b):
        ca, cb = self.component(a), self.component(b)
        if a == b:
            raise DiagramError("linking number needs two distinct components")
        if ca.kind == DOTTED and cb.kind == DOTTED:
            return 0
        if ca.kind == DOTTED:
            return self._piercing_sum(b, a)
        if cb.kind == DOTTED:
            return self._piercing_sum(a, b)
        total = 0
        for xid, sign in self.crossings.items():
            comps = {c for c, _, _ in self.crossing_passes(xid)}
            if comps == {a, b}:
                total += sign
        if total % 2 != 0:
            raise DiagramError("odd mutual crossing sum between %r and %r" % (a, b))
        return total // 2

    def _piercing_sum(self, strand, dotted):
        return sum(e.sign for e in self.events[strand]
                   if isinstance(e, PierceEvent) and e.through == dotted)

    def linking_matrix(self):
        """Symmetric matrix over 2-handles: framings on the diagonal."""
        ids = self.two_handles()
        n = len(ids)
        m = [[0] * n for _ in range(n)]
        for i, a in enumerate(ids):
            m[i][i] = self.components[a].framing
            for j in range(i + 1, n):
                v = self.linking_number(a, ids[j])
                m[i][j] = m[j][i] = v
        return IntMatrix(m)

    def extended_matrix(self):
        """
        Linking matrix after the dot/zero exchange at the algebraic level:
        every dotted component contributes a 0-framed row whose off-diagonal
        entries are signed piercing counts.  Presents H1 of the boundary.
        """
        ids = self.ordered_ids()
        n = len(ids)
        m = [[0] * n for _ in range(n)]
        for i, a in enumerate(ids):
            ca = self.components[a]
            m[i][i] = ca.framing if ca.kind == TWO_HANDLE else 0
            for j in range(i + 1, n):
                v = self.linking_number(a, ids[j])
                m[i][j] = m[j][i] = v
        return IntMatrix(m)

    def piercing_word(self, cid):
        """Freely reduced word of the strand's piercings, in traversal order."""
        comp = self.component(cid)
        if comp.kind != TWO_HANDLE:
            raise DiagramError("piercing word is defined for 2-handles only")
        letters = [(e.through, e.sign) for e in self.events[cid]
                   if isinstance(e, PierceEvent)]
        return free_reduce(letters)

    # -- planarity ----------------------------------------------------------

    def faces(self):
        """
        Face orbits of the 4-valent crossing graph, via the rotation system
        forced by crossing signs.  Darts are (component, arc, direction) with
        direction +1 along the orientation.  Components without crossings do
        not take part.
        """
        # incidence: arc a ends at its a-th crossing event (in slot) and the
        # strand leaves that crossing along arc a+1 (out slot)
        arrive = {}
        leave = {}
        for cid in self.ordered_ids():
            xs = self.cross_events(cid)
            k = len(xs)
            for a, (i, e) in enumerate(xs):
                arrive[(e.crossing, e.role, "in")] = (cid, a)
                leave[(e.crossing, e.role, "out")] = (cid, (a + 1) % k)
        rotation = {}
        for xid, sign in self.crossings.items():
            if sign == 1:
                order = [("over", "out"), ("under", "out"), ("over", "in"), ("under", "in")]
            else:
                order = [("over", "out"), ("under", "in"), ("over", "in"), ("under", "out")]
            rotation[xid] = order
        # dart = (component, arc, +1/-1); +1 ends at the arc's terminal
        # crossing "in" slot, -1 ends at its initial crossing "out" slot.
        slot_of_dart = {}
        for (xid, role, io), (cid, arc) in arrive.items():
            slot_of_dart[(cid, arc, 1)] = (xid, role, "in")
        for (xid, role, io), (cid, arc) in leave.items():
            slot_of_dart[(cid, arc, -1)] = (xid, role, "out")
        dart_of_slot = {v: k for k, v in slot_of_dart.items()}

        def next_face_dart(dart):
            xid, role, io = slot_of_dart[dart]
            order = rotation[xid]
            i = order.index((role, io))
            nrole, nio = order[(i + 1) % 4]
            out_slot = (xid, nrole, nio)
            d = dart_of_slot[out_slot]
            # leaving slots emit the dart pointing away from the crossing
            cid, arc, direction = d
            if nio == "out":
                return (cid, arc, 1)
            return (cid, arc, -1)

        faces = []
        seen = set()
        for dart in sorted(slot_of_dart):
            if dart in seen:
                continue
            face = []
            d = dart
            while d not in seen:
                seen.add(d)
                face.append(d)
                d = next_face_dart(d)
            faces.append(tuple(face))
        return faces

    def _crossing_graph_pieces(self):
        """Connected pieces of the crossing graph, as sets of component ids."""
        adj = {}
        for xid in self.crossings:
            comps = sorted({c for c, _, _ in self.crossing_passes(xid)})
            for c in comps:
                adj.setdefault(c, set()).update(comps)
        pieces = []
        todo = set(adj)
        while todo:
            start = todo.pop()
            piece = {start}
            queue = [start]
            while queue:
                c = queue.pop()
                for d in adj.get(c, ()):
                    if d not in piece:
                        piece.add(d)
                        todo.discard(d)
                        queue.append(d)
            pieces.append(piece)
        return pieces

    # -- validation ----------------------------------------------------------

    def validate(self):
        """Every violated invariant, with its location.  Empty means valid."""
        issues = []

        def bad(code, loc, msg):
            issues.append(ValidationIssue(code, loc, msg))

        if self.n3 < 0:
            bad("bad-counter", "n3", "3-handle count must be nonnegative")
        if self.n4 not in (0, 1):
            bad("bad-counter", "n4", "4-handle count must be 0 or 1")

        for cid in self.events:
            if cid not in self.components:
                bad("dangling-id", cid, "event list for unknown component")

        # crossings: exactly one over pass and one under pass, kinds legal
        for xid, sign in self.crossings.items():
            if sign not in (1, -1):
                bad("bad-sign", xid, "crossing sign must be ±1")
            passes = self.crossing_passes(xid)
            roles = sorted(r for _, r, _ in passes)
            if roles != ["over", "under"]:
                bad("bad-crossing", xid,
                    "needs exactly one over and one under pass, got %r" % (roles,))
                continue
            comps = {c for c, _, _ in passes}
            kinds = {self.components[c].kind for c in comps if c in self.components}
            if DOTTED in kinds:
                ok = (len(comps) == 1
                      and self.components[next(iter(comps))].slice_flag)
                if not ok:
                    bad("dotted-crossing-forbidden", xid,
                        "crossings may not involve dotted components except "
                        "self-crossings of a slice 1-handle")
        for cid, evs in self.events.items():
            comp = self.components.get(cid)
            if comp is None:
                continue
            for i, e in enumerate(evs):
                if isinstance(e, CrossEvent):
                    if e.crossing not in self.crossings:
                        bad("dangling-id", "%s[%d]" % (cid, i),
                            "unknown crossing %r" % e.crossing)
                    if e.role not in ("over", "under"):
                        bad("bad-crossing", "%s[%d]" % (cid, i),
                            "bad role %r" % e.role)
                elif isinstance(e, PierceEvent):
                    if e.sign not in (1, -1):
                        bad("bad-sign", "%s[%d]" % (cid, i),
                            "piercing sign must be ±1")
                    target = self.components.get(e.through)
                    if target is None:
                        bad("dangling-id", "%s[%d]" % (cid, i),
                            "piercing through unknown component %r" % e.through)
                    elif target.kind != DOTTED:
                        bad("piercing-target-not-dotted", "%s[%d]" % (cid, i),
                            "piercings go through dotted components only")
                    if comp.kind != TWO_HANDLE:
                        bad("piercing-strand-not-2-handle", "%s[%d]" % (cid, i),
                            "only 2-handles pierce dotted disks")
            if comp.kind == DOTTED and not comp.slice_flag:
                if any(isinstance(e, CrossEvent) for e in evs):
                    bad("dotted-self-crossing", cid,
                        "a round dotted circle has no crossings")

        if issues:
            return issues

        # pairing consistency: each crossing id appears exactly twice in total
        counts = {}
        for cid, evs in self.events.items():
            for e in evs:
                if isinstance(e, CrossEvent):
                    counts[e.crossing] = counts.get(e.crossing, 0) + 1
        for xid in self.crossings:
            if counts.get(xid, 0) != 2:
                bad("bad-crossing", xid,
                    "crossing must be traversed exactly twice, got %d"
                    % counts.get(xid, 0))
        for xid in counts:
            if xid not in self.crossings:
                bad("dangling-id", xid, "event references unknown crossing")
        if issues:
            return issues

        # planarity per connected piece of the crossing graph
        faces = self.faces()
        for piece in self._crossing_graph_pieces():
            v = sum(1 for xid in self.crossings
                    if {c for c, _, _ in self.crossing_passes(xid)} <= piece)
            e = sum(self.arc_count(c) for c in piece
                    if any(isinstance(ev, CrossEvent) for ev in self.events[c]))
            f = sum(1 for face in faces if face and face[0][0] in piece)
            if v and v - e + f != 2:
                bad("nonplanar", ",".join(sorted(piece)),
                    "V-E+F = %d-%d+%d = %d != 2" % (v, e, f, v - e + f))
        return issues

    # -- functional updates ---------------------------------------------------

    def replace(self, **kw):
        data = dict(components=list(self.components.values()),
                    events=self.events, crossings=self.crossings,
                    n3=self.n3, n4=self.n4, closed=self.closed,
                    metadata=self.metadata)
        data.update(kw)
        return Diagram(**data)

    def fresh_crossing_id(self, hint="x"):
        i = len(self.crossings)
        while True:
            xid = "%s%d" % (hint, i)
            if xid not in self.crossings:
                return xid
            i += 1

    # -- serialization (kcd-1) -------------------------------------------------

    def to_kcd(self):
        comps = []
        for cid in self.ordered_ids():
            c = self.components[cid]
            entry = {"id": c.id, "kind": c.kind}
            if c.kind == TWO_HANDLE:
                entry["framing"] = c.framing
            if c.label is not None:
                entry["label"] = c.label
            if c.slice_flag:
                entry["slice"] = True
            comps.append(entry)
        crossings = []
        for xid in sorted(self.crossings):
            x = self.crossing_data(xid)
            crossings.append({"id": xid, "over": list(x.over_arc),
                              "under": list(x.under_arc), "sign": x.sign})
        piercings = []
        for p in self.all_piercings():
            piercings.append({"strand": p.strand, "through": p.through,
                              "sign": p.sign, "position": p.position})
        return {"format": KCD_FORMAT, "components": comps,
                "crossings": crossings, "piercings": piercings,
                "n3": self.n3, "n4": self.n4, "metadata": dict(self.metadata)}

    def dumps(self):
        return json.dumps(self.to_kcd(), indent=1, sort_keys=True) + "\n"

    @classmethod
    def from_kcd(cls, doc):
        if not isinstance(doc, dict):
            raise DiagramError("kcd document must be an object")
        unknown = set(doc) - _KCD_FIELDS
        if unknown:
            raise DiagramError("unknown kcd fields: %s" % ", ".join(sorted(unknown)))
        missing = _KCD_FIELDS - set(doc)
        if missing:
            raise DiagramError("missing kcd fields: %s" % ", ".join(sorted(missing)))
        if doc["format"] != KCD_FORMAT:
            raise DiagramError("unsupported format %r" % doc["format"])
        comps = []
        for c in doc["components"]:
            comps.append(Component(id=c["id"], kind=c["kind"],
                                   framing=c.get("framing"),
                                   label=c.get("label"),
                                   slice_flag=bool(c.get("slice", False))))
        ids = {c.id for c in comps}

        # reconstruct event lists: crossing events ordered by arc index,
        # piercing events at stated positions, crossings filling the rest
        cross_slots = {cid: {} for cid in ids}
        crossings = {}
        for x in doc["crossings"]:
            xid = x["id"]
            if xid in crossings:
                raise DiagramError("duplicate crossing id %r" % xid)
            crossings[xid] = int(x["sign"])
            for role in ("over", "under"):
                cid, arc = x[role]
                if cid not in ids:
                    raise DiagramError("crossing %r references unknown %r" % (xid, cid))
                slots = cross_slots[cid]
                if arc in slots:
                    raise DiagramError("two crossings end arc %d of %r" % (arc, cid))
                slots[int(arc)] = CrossEvent(xid, role)
        pierce_at = {cid: {} for cid in ids}
        for p in doc["piercings"]:
            cid = p["strand"]
            if cid not in ids:
                raise DiagramError("piercing on unknown strand %r" % cid)
            pos = int(p["position"])
            if pos in pierce_at[cid]:
                raise DiagramError("two piercings at position %d of %r" % (pos, cid))
            pierce_at[cid][pos] = PierceEvent(p["through"], int(p["sign"]))
        events = {}
        for cid in ids:
            slots = cross_slots[cid]
            k = len(slots)
            if set(slots) != set(range(k)):
                raise DiagramError("arc indices of %r must be 0..%d" % (cid, k - 1))
            total = k + len(pierce_at[cid])
            evs = []
            xi = 0
            order = [slots[i] for i in sorted(slots)]
            for pos in range(total):
                if pos in pierce_at[cid]:
                    evs.append(pierce_at[cid][pos])
                else:
                    if xi >= k:
                        raise DiagramError("piercing positions of %r leave gaps" % cid)
                    evs.append(order[xi])
                    xi += 1
            if xi != k:
                raise DiagramError("piercing positions of %r out of range" % cid)
            events[cid] = tuple(evs)
        return cls(components=comps, events=events, crossings=crossings,
                   n3=int(doc["n3"]), n4=int(doc["n4"]),
                   metadata=doc.get("metadata") or {})

    @classmethod
    def loads(cls, text):
        try:
            doc = json.loads(text)
        except json.JSONDecodeError as exc:
            raise DiagramError("not valid kcd JSON: %s" % exc) from None
        return cls.from_kcd(doc)

    def __eq__(self, other):
        if not isinstance(other, Diagram):
            return NotImplemented
        return self.to_kcd() == other.to_kcd() and self.closed == other.closed

    def __repr__(self):
        return "<Diagram %s: %d components, %d crossings>" % (
            self.metadata.get("name", "?"), len(self.components),
            len(self.crossings))


def validate(d: Diagram):
    return d.validate()


def linking_number(d: Diagram, a, b):
    return d.linking_number(a, b)


def writhe(d: Diagram, a):
    return d.writhe(a)


def linking_matrix(d: Diagram):
    issues = d.validate()
    if issues:
        raise DiagramError("invalid diagram: %s" % "; ".join(map(str, issues)))
    return d.linking_matrix()


def piercing_word(d: Diagram, a):
    return d.piercing_word(a)
