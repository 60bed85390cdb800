"""Shared construction helpers for tests: small explicit diagrams."""

from kirbycalc.diagram import (
    Component, CrossEvent, Diagram, PierceEvent, DOTTED, TWO_HANDLE,
)


def two_handle(cid, framing, label=None):
    return Component(id=cid, kind=TWO_HANDLE, framing=framing, label=label)


def dotted(cid, label=None, slice_flag=False):
    return Component(id=cid, kind=DOTTED, label=label, slice_flag=slice_flag)


def hopf_pair(fa=0, fb=0, sign=1, ids=("a", "b")):
    """Two round circles crossing twice; lk = sign."""
    a, b = ids
    comps = [two_handle(a, fa), two_handle(b, fb)]
    events = {
        a: (CrossEvent("x0", "over"), CrossEvent("x1", "under")),
        b: (CrossEvent("x0", "under"), CrossEvent("x1", "over")),
    }
    crossings = {"x0": sign, "x1": sign}
    return Diagram(comps, events, crossings)


def split_unknot(cid="u", framing=0):
    return Diagram([two_handle(cid, framing)])


def left_trefoil(cid="k", framing=-1):
    """Standard alternating trefoil diagram, all three crossings negative."""
    events = {
        cid: (
            CrossEvent("t0", "over"), CrossEvent("t1", "under"),
            CrossEvent("t2", "over"), CrossEvent("t0", "under"),
            CrossEvent("t1", "over"), CrossEvent("t2", "under"),
        )
    }
    crossings = {"t0": -1, "t1": -1, "t2": -1}
    return Diagram([two_handle(cid, framing)], events, crossings)


def kinked_unknot(cid="u", framing=0, sign=1):
    """A single R1 kink."""
    events = {cid: (CrossEvent("r", "over"), CrossEvent("r", "under"))}
    return Diagram([two_handle(cid, framing)], events, {"r": sign})


def meridian_of_dot(mid="alpha", hid="kk", framing=-1, slice_flag=True):
    """Dotted circle (optionally slice) with a clean once-piercing meridian."""
    comps = [dotted(hid, slice_flag=slice_flag), two_handle(mid, framing)]
    events = {mid: (PierceEvent(hid, 1),), hid: ()}
    return Diagram(comps, events, {})
