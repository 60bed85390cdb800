import pytest

from kirbycalc.algebra import IntMatrix
from kirbycalc.diagram import (
    Component, CrossEvent, Diagram, PierceEvent, DOTTED, TWO_HANDLE,
)
from kirbycalc.moves import (
    BandSpec, IllegalMove, attach_dual_handles, blow_down, blow_up,
    cancel_1_2, cancel_2_3, dot_zero_exchange, gluck_flip, isotopy_reduce,
    mark_closed, reidemeister_r1_insert, reidemeister_r1_remove,
    reidemeister_r2_insert, reidemeister_r2_remove, reidemeister_r3,
    slide_2_over_2, slide_over_1handle, surger_loop,
)

from helpers import (
    dotted, hopf_pair, kinked_unknot, left_trefoil, meridian_of_dot,
    split_unknot, two_handle,
)


def assert_valid(d):
    issues = d.validate()
    assert issues == [], [str(i) for i in issues]


# -- Reidemeister -------------------------------------------------------------

def test_r1_insert_remove_roundtrip():
    d = split_unknot()
    for sign in (1, -1):
        d2, rec = reidemeister_r1_insert(d, "u", 0, sign)
        assert_valid(d2)
        assert d2.writhe("u") == sign
        assert rec.deltas == (0, 0, 0, 0)
        xid = next(iter(d2.crossings))
        d3, _ = reidemeister_r1_remove(d2, xid)
        assert d3 == d


def test_r1_remove_changes_writhe_not_matrix():
    d = kinked_unknot(sign=-1, framing=5)
    xid = next(iter(d.crossings))
    d2, _ = reidemeister_r1_remove(d, xid)
    assert d2.writhe("u") == 0
    assert d2.linking_matrix() == d.linking_matrix() == IntMatrix([[5]])


def test_r2_insert_on_parallel_arcs():
    d = Diagram([two_handle("a", 0), two_handle("b", 0)])
    d2, _ = reidemeister_r2_insert(d, ("a", 0), ("b", 0))
    assert_valid(d2)
    assert len(d2.crossings) == 2
    assert d2.linking_number("a", "b") == 0


def test_r2_insert_then_reduce():
    d = hopf_pair()
    d2, _ = reidemeister_r2_insert(d, ("a", 0), ("b", 1))
    assert_valid(d2)
    assert len(d2.crossings) == 4
    assert d2.linking_number("a", "b") == 1
    d3, _ = isotopy_reduce(d2)
    assert len(d3.crossings) == 2
    assert d3.linking_number("a", "b") == 1


def test_r3_on_triangle():
    # Venn-style triple overlap; the trio (ab1, ac1, bc1) bounds a triangle
    # with strand a passing over both of its triangle crossings
    comps = [two_handle(x, 0) for x in "abc"]
    events = {
        "a": (CrossEvent("ab1", "over"), CrossEvent("ac1", "over"),
              CrossEvent("ab2", "under"), CrossEvent("ac2", "over")),
        "b": (CrossEvent("ab2", "over"), CrossEvent("bc1", "under"),
              CrossEvent("ab1", "under"), CrossEvent("bc2", "over")),
        "c": (CrossEvent("bc1", "over"), CrossEvent("ac2", "under"),
              CrossEvent("bc2", "under"), CrossEvent("ac1", "under")),
    }
    signs = {"ab1": 1, "ab2": 1, "ac1": -1, "ac2": 1, "bc1": -1, "bc2": -1}
    d = Diagram(comps, events, signs)
    assert_valid(d)
    d2, _ = reidemeister_r3(d, ("ab1", "ac1", "bc1"))
    assert_valid(d2)
    assert len(d2.crossings) == 6
    assert d2.linking_matrix() == d.linking_matrix()
    assert {d2.writhe(c) for c in "abc"} == {d.writhe(c) for c in "abc"}


# -- slides -------------------------------------------------------------------

def test_slide_hopf_example():
    # spec example: 0-framed positive Hopf pair, eps=+1, trivial band
    d = hopf_pair()
    d2, rec = slide_2_over_2(d, "a", "b", BandSpec(0, 0, pushoff_sign=1))
    assert_valid(d2)
    assert d2.component("a").framing == 2
    assert d2.linking_number("a", "b") == 1
    assert rec.preservation == "Diffeomorphism"


def test_slide_over_split_zero_framed():
    d = Diagram([two_handle("a", 3), two_handle("b", 0)])
    d2, _ = slide_2_over_2(d, "a", "b", BandSpec(0, 0, pushoff_sign=1))
    assert_valid(d2)
    assert d2.component("a").framing == 3
    assert d2.linking_number("a", "b") == 0


def test_slide_framing_formula_both_signs():
    for eps in (1, -1):
        d = hopf_pair(fa=2, fb=-3)
        d2, _ = slide_2_over_2(d, "a", "b", BandSpec(0, 0, pushoff_sign=eps))
        assert_valid(d2)
        assert d2.component("a").framing == 2 + (-3) + 2 * eps * 1
        assert d2.linking_number("a", "b") == 1 + eps * (-3)


def test_slide_over_kinked_target_uses_clasps():
    # writhe(b)=1 but f(b)=0: the push-off needs a compensating clasp
    d = Diagram([two_handle("a", 0), two_handle("b", 0)],
                {"b": (CrossEvent("r", "over"), CrossEvent("r", "under"))},
                {"r": 1})
    d2, _ = slide_2_over_2(d, "a", "b", BandSpec(0, 0, pushoff_sign=1))
    assert_valid(d2)
    assert d2.component("a").framing == 0
    assert d2.linking_number("a", "b") == 0


def test_slide_over_trefoil_target():
    d = left_trefoil("b", -1)
    d = Diagram(list(d.components.values()) + [two_handle("a", 0)],
                d.events, d.crossings)
    for eps in (1, -1):
        d2, _ = slide_2_over_2(d, "a", "b", BandSpec(0, 0, pushoff_sign=eps))
        assert_valid(d2)
        assert d2.component("a").framing == -1 + 2 * eps * 0
        assert d2.linking_number("a", "b") == eps * -1
        assert d2.writhe("a") == -3  # the copy carries the trefoil pattern


def test_slide_piercing_composition():
    # b pierces a dotted circle; the slide copies the piercing into a
    comps = [dotted("h"), two_handle("a", 0), two_handle("b", 0)]
    events = {"b": (PierceEvent("h", 1),)}
    d = Diagram(comps, events)
    for eps in (1, -1):
        d2, _ = slide_2_over_2(d, "a", "b", BandSpec(0, 0, pushoff_sign=eps))
        assert_valid(d2)
        assert d2.piercing_word("a") == (("h", eps),)
        assert d2.linking_number("a", "h") == eps


def test_slide_band_traces():
    # band crosses a third strand on the way: net linking unchanged
    comps = [two_handle("a", 0), two_handle("b", 0), two_handle("c", 7)]
    d = Diagram(comps)
    band = BandSpec(0, 0, crossing_trace=(("c", 0, "over", 1),),
                    pushoff_sign=1)
    d2, _ = slide_2_over_2(d, "a", "b", band)
    assert_valid(d2)
    assert d2.linking_number("a", "c") == 0
    assert d2.linking_number("a", "b") == 0
    assert len(d2.crossings) == 2


def test_slide_band_piercing_trace_conjugates():
    comps = [dotted("h"), two_handle("a", 0), two_handle("b", 0)]
    d = Diagram(comps, {"b": (PierceEvent("h", 1),)})
    band = BandSpec(0, 0, piercing_trace=(("h", 1),), pushoff_sign=1)
    d2, _ = slide_2_over_2(d, "a", "b", band)
    assert_valid(d2)
    # word: t b t^-1 with t = x: x . x . x^-1 reduces to x
    assert d2.piercing_word("a") == (("h", 1),)
    assert d2.linking_number("a", "h") == 1


def test_slide_rejects_bad_input():
    d = hopf_pair()
    with pytest.raises(IllegalMove):
        slide_2_over_2(d, "a", "a", BandSpec(0, 0))
    with pytest.raises(IllegalMove):
        slide_2_over_2(d, "a", "b", BandSpec(0, 0, pushoff_sign=2))
    h = meridian_of_dot()
    with pytest.raises(IllegalMove):
        slide_2_over_2(h, "alpha", "kk", BandSpec(0, 0))


def test_slide1_inserts_piercing():
    d = meridian_of_dot()  # alpha pierces kk once
    d2, _ = slide_over_1handle(d, "alpha", "kk", 1, 0)
    assert d2.piercing_word("alpha") == (("kk", 1), ("kk", 1))
    d3, _ = slide_over_1handle(d2, "alpha", "kk", -1, 1)
    # raw events keep the pair; the word reduces
    assert d3.piercing_word("alpha") == (("kk", 1),)
    assert len(d3.piercings_of("alpha")) == 3


def test_slide1_empty_word_gains_letter():
    d = Diagram([dotted("h"), two_handle("a", 0)])
    d2, _ = slide_over_1handle(d, "a", "h", -1, 0)
    assert d2.piercing_word("a") == (("h", -1),)


# -- blow-up / blow-down ------------------------------------------------------

def test_blow_down_split_circle():
    d = Diagram([two_handle("u", 1), two_handle("a", 4)])
    d2, rec = blow_down(d, "u")
    assert_valid(d2)
    assert d2.two_handles() == ["a"]
    assert d2.component("a").framing == 4
    assert rec.deltas == (0, -1, 0, -1)


def test_blow_down_single_strand():
    # spec example: eps=+1, lk(a,u)=1, f(a)=0 -> f'(a) = -1
    d = hopf_pair(fa=0, fb=1, ids=("a", "u"))
    d2, _ = blow_down(d, "u")
    assert_valid(d2)
    assert d2.component("a").framing == -1
    assert d2.crossings == {}


def test_blow_down_requires_unit_framing():
    d = hopf_pair(fa=0, fb=2, ids=("a", "u"))
    with pytest.raises(IllegalMove):
        blow_down(d, "u")


def test_blow_up_then_down_restores_algebra():
    base = hopf_pair(fa=2, fb=-1)
    for eps in (1, -1):
        up, rec = blow_up(base, eps, site=(("a", 0, 1), ("b", 0, 1)))
        assert_valid(up)
        uid = rec.params["u"]
        assert up.component(uid).framing == eps
        assert up.linking_number("a", uid) == 1
        assert up.linking_number("b", uid) == 1
        assert up.component("a").framing == 2 + eps
        down, _ = blow_down(up, uid)
        assert_valid(down)
        reduced, _ = isotopy_reduce(down)
        assert reduced.component("a").framing == 2
        assert reduced.component("b").framing == -1
        assert reduced.linking_number("a", "b") == 1


def test_blow_up_rejects_faceless_site():
    # arcs with no common face cannot be encircled by one ring
    base = hopf_pair(fa=2, fb=-1)
    with pytest.raises(IllegalMove):
        blow_up(base, 1, site=(("a", 0, 1), ("b", 1, 1)))


def test_blow_up_updates_framings_and_linking():
    d = Diagram([two_handle("a", 0), two_handle("b", 0)])
    up, rec = blow_up(d, 1, site=(("a", 0, 1), ("b", 0, 1)))
    assert_valid(up)
    uid = rec.params["u"]
    assert up.component("a").framing == 1
    assert up.component("b").framing == 1
    assert up.linking_number("a", "b") == 1
    down, _ = blow_down(up, uid)
    assert down.component("a").framing == 0
    assert down.linking_number("a", "b") == 0


def test_blow_down_two_parallel_strands_twist():
    # two strands through a +1 circle acquire a -1 full twist
    d = Diagram([two_handle("a", 0), two_handle("b", 0)])
    up, rec = blow_up(d, -1, site=(("a", 0, 1), ("b", 0, 1)))
    uid = rec.params["u"]
    assert up.linking_number("a", "b") == -1
    assert up.component("a").framing == -1


# -- cancellations ------------------------------------------------------------

def test_cancel_12_bare_pair():
    d = meridian_of_dot("m", "h", framing=1, slice_flag=False)
    d2, rec = cancel_1_2(d, "h", "m")
    assert_valid(d2)
    assert d2.components == {}
    assert rec.deltas == (-1, -1, 0, 0)


def test_cancel_12_twists_other_strand():
    # spec example: one extra strand with k=1, eps=-1, f(s)=0 -> f'(s)=-1
    comps = [dotted("h"), two_handle("m", -1), two_handle("s", 0)]
    events = {"m": (PierceEvent("h", 1),), "s": (PierceEvent("h", 1),)}
    d = Diagram(comps, events)
    d2, _ = cancel_1_2(d, "h", "m")
    assert_valid(d2)
    assert d2.two_handles() == ["s"]
    assert d2.component("s").framing == -1
    assert d2.piercing_word("s") == ()


def test_cancel_12_pairwise_linking():
    comps = [dotted("h"), two_handle("m", 1),
             two_handle("s", 0), two_handle("t", 0)]
    events = {"m": (PierceEvent("h", 1),),
              "s": (PierceEvent("h", 1),),
              "t": (PierceEvent("h", 1),)}
    d = Diagram(comps, events)
    d2, _ = cancel_1_2(d, "h", "m")
    assert_valid(d2)
    assert d2.component("s").framing == 1
    assert d2.component("t").framing == 1
    assert d2.linking_number("s", "t") == 1


def test_cancel_12_signed_passes():
    comps = [dotted("h"), two_handle("m", 1), two_handle("s", 0)]
    events = {"m": (PierceEvent("h", 1),),
              "s": (PierceEvent("h", 1), PierceEvent("h", 1))}
    d = Diagram(comps, events)
    d2, _ = cancel_1_2(d, "h", "m")
    assert_valid(d2)
    assert d2.component("s").framing == 4  # eps * k^2 with k=2
    assert d2.piercing_word("s") == ()


def test_cancel_12_legality():
    comps = [dotted("h"), dotted("g"), two_handle("m", 1)]
    d = Diagram(comps, {"m": (PierceEvent("h", 1), PierceEvent("g", 1))})
    with pytest.raises(IllegalMove):
        cancel_1_2(d, "h", "m")
    d2 = Diagram([dotted("h"), two_handle("m", 1)],
                 {"m": (PierceEvent("h", 1), PierceEvent("h", 1))})
    with pytest.raises(IllegalMove):
        cancel_1_2(d2, "h", "m")


def test_cancel_23():
    d = Diagram([two_handle("u", 0)], n3=1)
    d2, rec = cancel_2_3(d, "u")
    assert d2.n3 == 0 and d2.components == {}
    assert rec.deltas == (0, -1, -1, 0)
    with pytest.raises(IllegalMove):
        cancel_2_3(Diagram([two_handle("u", 0)], n3=0), "u")
    h = hopf_pair(ids=("u", "v"))
    h = h.replace(n3=1)
    with pytest.raises(IllegalMove):
        cancel_2_3(h, "u")


# -- dot/zero, Gluck ----------------------------------------------------------

def test_dotzero_plain_circle():
    d = Diagram([dotted("h")])
    d2, rec = dot_zero_exchange(d, "h")
    assert_valid(d2)
    c = d2.component("h")
    assert c.kind == TWO_HANDLE and c.framing == 0
    assert d2.events["h"] == ()
    assert rec.deltas == (-1, 1, 0, 2)


def test_dotzero_with_meridian():
    d = meridian_of_dot()
    d2, _ = dot_zero_exchange(d, "kk")
    assert_valid(d2)
    assert d2.component("kk").kind == TWO_HANDLE
    assert d2.linking_number("alpha", "kk") == 1
    assert len(d2.crossings) == 2
    assert d2.piercing_word("alpha") == ()


def test_dotzero_multiple_passes():
    comps = [dotted("h"), two_handle("a", 0), two_handle("b", 3)]
    events = {"a": (PierceEvent("h", 1),),
              "b": (PierceEvent("h", -1), PierceEvent("h", 1))}
    d = Diagram(comps, events)
    d2, _ = dot_zero_exchange(d, "h")
    assert_valid(d2)
    assert d2.linking_number("a", "h") == 1
    assert d2.linking_number("b", "h") == 0
    assert len(d2.crossings) == 6


def test_gluck_flip_involution():
    d = meridian_of_dot()
    d2, _ = gluck_flip(d, "alpha")
    assert d2.component("alpha").framing == 1
    d3, _ = gluck_flip(d2, "alpha")
    assert d3 == d


def test_gluck_flip_legality():
    d = Diagram([dotted("h"), two_handle("m", -1)],
                {"m": (PierceEvent("h", 1), PierceEvent("h", 1))})
    with pytest.raises(IllegalMove):
        gluck_flip(d, "m")
    e = hopf_pair(fa=1)
    with pytest.raises(IllegalMove):
        gluck_flip(e, "a")
    f = meridian_of_dot(framing=-2)
    with pytest.raises(IllegalMove):
        gluck_flip(f, "alpha")


# -- construction steps -------------------------------------------------------

def test_surger_trivial_loop():
    d = Diagram()
    d2, rec = surger_loop(d, "g", (), 0, meridian_id="mu")
    assert_valid(d2)
    assert d2.component("g").framing == 0
    assert d2.component("mu").framing == 0
    assert d2.linking_number("g", "mu") == 1
    assert rec.deltas == (0, 2, 0, 2)


def test_surger_framing_parity_slide():
    # surger with k, then slide the loop over its 0-framed meridian: k+2
    d = Diagram()
    d2, _ = surger_loop(d, "g", (), 3, meridian_id="mu")
    d3, _ = slide_2_over_2(d2, "g", "mu", BandSpec(0, 0, pushoff_sign=1))
    assert_valid(d3)
    assert d3.component("g").framing == 3 + 2
    assert d3.linking_number("g", "mu") == 1


def test_surger_loop_through_dot():
    d = Diagram([dotted("kk", slice_flag=True)])
    d2, _ = surger_loop(d, "g", (("pierce", "kk", 1),), 1, meridian_id="mu")
    assert_valid(d2)
    assert d2.piercing_word("g") == (("kk", 1),)
    assert d2.piercing_word("mu") == ()


def test_attach_dual_handles():
    d = hopf_pair(fa=1, fb=-1, ids=("p", "q"))
    loops = (("lam", 0, (("cross", "p", 0, "over", 1),
                         ("cross", "p", 0, "under", 1))),)
    d2, rec = attach_dual_handles(d, loops)
    assert_valid(d2)
    assert d2.linking_number("lam", "p") == 1
    assert rec.deltas == (0, 1, 0, 1)
    d3, _ = attach_dual_handles(d, ())
    assert d3 == d


# -- closing ------------------------------------------------------------------

def test_mark_closed():
    d = Diagram([dotted("h")], n3=1, n4=1)
    d2, _ = mark_closed(d)
    assert d2.closed
    with pytest.raises(IllegalMove):
        mark_closed(d2)
    with pytest.raises(IllegalMove):
        mark_closed(Diagram([dotted("h")], n3=0, n4=1))
    with pytest.raises(IllegalMove):
        mark_closed(Diagram([dotted("h")], n3=1, n4=0))
