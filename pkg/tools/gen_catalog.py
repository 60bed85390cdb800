"""
Build the shipped catalog.

Base figures are constructed directly; derived figures (fig5, fig10, fig15,
fig16, fig8) are produced by running the same engine moves their scripts
replay, so the catalog's cross-entry assertions hold exactly.  Everything is
validated before writing, and every shipped script is replayed as a final
gate.
"""

import json
import sys
from pathlib import Path

sys.path.insert(0, str(Path(__file__).resolve().parent.parent / "src"))

from kirbycalc.catalog import Catalog
from kirbycalc.diagram import (
    Component, CrossEvent, Diagram, PierceEvent, DOTTED, TWO_HANDLE,
)
from kirbycalc.invariants import invariant_report
from kirbycalc.moves import (
    BandSpec, attach_dual_handles, blow_down, cancel_1_2, isotopy_reduce,
    slide_2_over_2, surger_loop,
)
from kirbycalc.script import parse_script, replay

DATA = Path(__file__).resolve().parent.parent / "src" / "kirbycalc" / "data"


def two(cid, f, label=None):
    return Component(id=cid, kind=TWO_HANDLE, framing=f, label=label)


def dot(cid, label=None, slice_flag=False):
    return Component(id=cid, kind=DOTTED, label=label, slice_flag=slice_flag)


def trefoil_events(cid, prefix, left=True):
    """Standard alternating trefoil; left-handed = all negative crossings."""
    e = [CrossEvent(prefix + "0", "over"), CrossEvent(prefix + "1", "under"),
         CrossEvent(prefix + "2", "over"), CrossEvent(prefix + "0", "under"),
         CrossEvent(prefix + "1", "over"), CrossEvent(prefix + "2", "under")]
    sign = -1 if left else 1
    return e, {prefix + str(i): sign for i in range(3)}


def square_knot_events(prefix):
    """K # (-K): left trefoil connect-summed with its mirror."""
    e1, x1 = trefoil_events(None, prefix + "l", left=True)
    e2, x2 = trefoil_events(None, prefix + "r", left=False)
    return tuple(e1 + e2), {**x1, **x2}


def clasp(a_id, b_id, prefix, sign=1):
    """Events and crossings for a positive (Hopf) clasp between two curves."""
    a = [CrossEvent(prefix + "0", "over"), CrossEvent(prefix + "1", "under")]
    b = [CrossEvent(prefix + "0", "under"), CrossEvent(prefix + "1", "over")]
    return a, b, {prefix + "0": sign, prefix + "1": sign}


def check(name, d, closed_ok=False):
    issues = d.validate()
    if issues:
        raise SystemExit("%s INVALID: %s" % (name, "; ".join(map(str, issues))))
    rep = invariant_report(d)
    print("%-10s chi=%d h1=(%d,%s) b2=%d form=%s boundary=(%s,%s) pi1=%s" % (
        name, rep.chi, rep.h1_free_rank, list(rep.h1_torsion), rep.b2,
        rep.form, rep.boundary_h1_free_rank, rep.boundary_h1_torsion,
        rep.pi1_flag))
    return rep


def write(name, d, figure, role, blocks=None):
    meta = {"name": name, "paper_figure": figure, "role": role}
    if blocks:
        meta["data_blocks"] = blocks
    d = d.replace(metadata=meta)
    check(name, d)
    (DATA / ("%s.kcd" % name)).write_text(d.dumps())
    return d


entries = []


def register(name, d, figure, role, blocks=None):
    d = write(name, d, figure, role, blocks)
    entries.append({"name": name,
                    "metadata": {"paper_figure": figure, "role": role}})
    return d


DATA.mkdir(parents=True, exist_ok=True)

# --- fig1: B^4 + (-1)-framed left trefoil; boundary is the Poincare sphere
ev, xs = trefoil_events("k", "t", left=True)
fig1 = Diagram([two("k", -1, "K")], {"k": tuple(ev)}, xs)
register("fig1", fig1, "1", "2-handle on the left trefoil, framing -1; "
         "boundary is the Poincare homology sphere")

# --- fig3: Sigma x I_-: slice 1-handle K#-K plus alpha, the -1-framed
# push-off of the trefoil (one pass through the slice disk)
kk_ev, kk_xs = square_knot_events("q")
al_ev, al_xs = trefoil_events("alpha", "a", left=True)
fig3 = Diagram(
    [dot("kk", "K#-K", slice_flag=True), two("alpha", -1, "alpha")],
    {"kk": kk_ev, "alpha": tuple(al_ev) + (PierceEvent("kk", 1),)},
    {**kk_xs, **al_xs}, n3=1)
fig3_blocks = {
    "fig5-loop": {"type": "curve", "id": "g", "meridian": "mu",
                  "trace": [["pierce", "kk", 1]]},
    "r3-loop": {"type": "curve", "id": "g", "meridian": "mu",
                "trace": [["pierce", "kk", 1]]},
}
fig3 = register("fig3", fig3, "3", "Sigma x I_-: slice 1-handle K#-K with "
                "the -1-framed push-off alpha", fig3_blocks)

# --- fig5: fig3 surgered along the linking circle of the trefoil with the
# (+1, 0)-framed pair; produced by the same move the construction script uses
fig5, _ = surger_loop(fig3, "g", (("pierce", "kk", 1),), 1, meridian_id="mu")
register("fig5", fig5, "5", "Sigma x I_- surgered: the (+1, 0)-framed "
         "Hopf pair attached along the loop normally generating pi1(Sigma)")

# --- fig5x: the expanded form of fig5 (slice 1-handle traded for two round
# 1-handles and the 0-framed connecting handle, as in Figure 4)
c_ev = (PierceEvent("h1", 1), PierceEvent("h2", -1))
al2_ev, al2_xs = trefoil_events("alpha", "a", left=True)
g_mu_a, g_mu_b, g_mu_xs = clasp("g", "mu", "s")
fig5x = Diagram(
    [dot("h1"), dot("h2"), two("c", 0, "c"), two("alpha", -1, "alpha"),
     two("g", 1, "g"), two("mu", 0, "mu")],
    {"c": c_ev,
     "alpha": tuple(al2_ev) + (PierceEvent("h1", 1),),
     "g": (PierceEvent("h1", 1),) + tuple(g_mu_a),
     "mu": tuple(g_mu_b)},
    {**al2_xs, **g_mu_xs}, n3=1)
register("fig5x", fig5x, "5", "Figure 5 in the expanded encoding of "
         "Figure 4: two round 1-handles and the 0-framed connector")

# --- n-simplify replay (Figs 5 -> 8) to produce fig8
state = fig5x
state, _ = slide_2_over_2(state, "mu", "g", BandSpec(0, 0, pushoff_sign=-1))
state, _ = isotopy_reduce(state)
assert state.component("mu").framing == -1
assert state.piercing_word("mu") == (("h1", -1),)
state, _ = slide_2_over_2(state, "mu", "c", BandSpec(0, 0, pushoff_sign=1))
state, _ = isotopy_reduce(state)
assert state.component("mu").framing == -1
assert state.piercing_word("mu") == (("h2", -1),)
state, _ = cancel_1_2(state, "h1", "g")
state, _ = cancel_1_2(state, "h2", "mu")
state, _ = isotopy_reduce(state)
assert state.component("alpha").framing == 0
assert state.component("c").framing == 0
assert state.linking_number("alpha", "c") == 1
fig8 = state
register("fig8", fig8, "8", "N as a pair of 2-handles on ribbon knots "
         "(plus the carried 3-handle)")

# --- fig9: upside-down N attached to Sigma u -Sigma (the two +-1 trefoils),
# with the dual-loop data for Figure 10
t1_ev, t1_xs = trefoil_events("t1", "p", left=False)
t2_ev, t2_xs = trefoil_events("t2", "n", left=True)
d12_a, d12_b, d12_xs = clasp("d1", "d2", "d")
fig9 = Diagram(
    [two("t1", 1, "Sigma"), two("t2", -1, "-Sigma"), dot("h9"),
     two("d1", 0), two("d2", 0)],
    {"t1": tuple(t1_ev), "t2": tuple(t2_ev),
     "d1": (PierceEvent("h9", 1),) + tuple(d12_a),
     "d2": tuple(d12_b)},
    {**t1_xs, **t2_xs, **d12_xs}, n3=1)
fig9_blocks = {
    "fig9-dual": {"type": "loops", "loops": [
        {"id": "lam", "framing": 0, "trace": [
            ["cross", "p", 0, "over", 1], ["cross", "p", 0, "under", 1],
            ["cross", "q", 0, "over", 1], ["cross", "q", 0, "under", 1]]},
        {"id": "tau", "framing": 0, "trace": [
            ["cross", "p", 0, "over", 1], ["cross", "p", 0, "under", 1],
            ["cross", "q", 0, "over", 1], ["cross", "q", 0, "under", 1],
            ["clasp", "lam", 2, 1]]},
    ]},
}
register("fig9", fig9, "9", "N upside down: handles attached to "
         "Sigma u -Sigma, with the dual loops lambda and tau as data",
         fig9_blocks)

# --- fig10base and fig10: the +-1-framed circles in S^3, then the duals
fig10base = Diagram([two("p", 1, "+1"), two("q", -1, "-1")], n3=1)
fig10base = register("fig10base", fig10base, "10",
                     "the disjoint +-1-framed unknots of Figure 10, before "
                     "the dual loops arrive")

cat_boot = Catalog(DATA)
loops_block = fig9_blocks["fig9-dual"]["loops"]
from kirbycalc.script import _trace_from_block
loops = tuple((l["id"], l["framing"], _trace_from_block(l["trace"]))
              for l in loops_block)
fig10, _ = attach_dual_handles(fig10base, loops)
assert fig10.linking_number("lam", "p") == 1
assert fig10.linking_number("lam", "q") == 1
assert fig10.linking_number("tau", "p") == 1
assert fig10.linking_number("tau", "q") == 1
assert fig10.linking_number("lam", "tau") == 1
register("fig10", fig10, "10", "lambda and tau linking the +-1-framed "
         "circles; blowing these down gives exactly Figure 8")

# sanity: the double blow-down really lands on fig8's algebraic layer
t = blow_down(fig10, "p")[0]
t = blow_down(t, "q")[0]
t, _ = isotopy_reduce(t)
assert t.component("lam").framing == 0
assert t.component("tau").framing == 0
assert t.linking_number("lam", "tau") == 1

# --- fig12: Q. slice 1-handle, its Gluck meridian alpha (-1), the
# upside-down 1-handle, and the 0-framed Hopf pair
kk2_ev, kk2_xs = square_knot_events("q")
c12_a, c12_b, c12_xs = clasp("c1", "c2", "w")
fig12 = Diagram(
    [dot("kk", "K#-K", slice_flag=True), two("alpha", -1, "alpha"),
     dot("h"), two("c1", 0, "gamma"), two("c2", 0, "delta")],
    {"kk": kk2_ev, "alpha": (PierceEvent("kk", 1),),
     "c1": tuple(c12_a), "c2": tuple(c12_b)},
    {**kk2_xs, **c12_xs}, n3=1, n4=1)
fig12_blocks = {
    # the delta ride leaves from delta's first arc and lands past the
    # leftovers of gamma's journey on alpha
    "delta-ride": {"type": "band", "from_arc": 0, "to_arc": 1},
}
register("fig12", fig12, "11/12", "Q: the slice 1-handle with its trivially "
         "linking -1-framed circle, plus the upside-down surgery handles",
         fig12_blocks)

# --- fig14: the expanded redraw of fig12 (Figure 3 -> 4 applied to K#-K)
fig14 = Diagram(
    [dot("h1"), dot("h2"), two("c", 0, "c"), two("alpha", -1, "alpha"),
     dot("h"), two("c1", 0, "gamma"), two("c2", 0, "delta")],
    {"c": (PierceEvent("h2", -1), PierceEvent("h1", 1)),
     "alpha": (PierceEvent("h1", 1),),
     "c1": tuple(c12_a), "c2": tuple(c12_b)},
    dict(c12_xs), n3=1, n4=1)
fig14_blocks = {
    "fig16-dual": {"type": "loops", "loops": [
        {"id": "gam", "framing": 0, "trace": [
            ["pierce", "hb", 1], ["pierce", "hb", -1]]},
        {"id": "delta", "framing": 0, "trace": [
            ["pierce", "hb", 1], ["pierce", "hb", -1],
            ["clasp", "gam", 0, 1]]},
    ]},
}
fig14 = register("fig14", fig14, "14", "Q redrawn with the slice 1-handle "
                 "expanded into two round 1-handles and the connector",
                 fig14_blocks)

# --- fig15, fig16 by replaying the canceling moves (Figs 14 -> 16)
fig15, _ = slide_2_over_2(fig14, "alpha", "c2", BandSpec(0, 0, pushoff_sign=-1))
register("fig15", fig15, "15", "after sliding the -1-framed handle over the "
         "0-framed handle")
s16, _ = slide_2_over_2(fig15, "c1", "alpha", BandSpec(0, 0, pushoff_sign=-1))
assert s16.component("c1").framing == 1
s16, _ = slide_2_over_2(s16, "c1", "c", BandSpec(0, 0, pushoff_sign=1))
assert s16.component("c1").framing == 1
assert s16.piercing_word("c1") == (("h2", -1),)
fig16 = s16
register("fig16", fig16, "16", "the two 1-handles now cancel against the "
         "-1- and +1-framed 2-handles (arrows in the source figure)")

# sanity: the double cancellation leaves one 1-handle and two 2-handles
t, _ = cancel_1_2(fig16, "h1", "alpha")
t, _ = cancel_1_2(t, "h2", "c1")
t, _ = isotopy_reduce(t)
assert sorted(t.components) == ["c", "c2", "h"]
assert t.component("c").framing == 0
assert t.component("c2").framing == 0
assert t.linking_number("c", "c2") == -1
rep = invariant_report(t)
assert (rep.form.rank, rep.form.signature, rep.form.parity) == (2, 0, "even")

# --- b3s1: B^3 x S^1 with the 3- and 4-handles carried along
b3s1 = Diagram([dot("hb")], n3=1, n4=1)
register("b3s1", b3s1, "21 (base)", "B^3 x S^1 plus the carried 3- and "
         "4-handles; the upside-down duals attach here")

# --- fig32: the knotted -4-framed handle and the 0-framed handle that
# undoes it (plus trefoil-style self-crossings carrying the knotting)
w4_self, w4_xs = trefoil_events("w4", "v", left=False)
u_cl_a, u_cl_b, u_cl_xs = clasp("u", "w4", "u")
fig32 = Diagram(
    [dot("h"), two("u", 0), two("w4", -4)],
    {"u": tuple(u_cl_a), "w4": tuple(u_cl_b) + tuple(w4_self)},
    {**u_cl_xs, **w4_xs}, n3=1, n4=1)
register("fig32", fig32, "32", "one 1-handle, the knotted -4-framed handle, "
         "and the 0-framed handle that will undo it")

# --- fig33: B^3 x S^1 # S^2 x S^2 (plus 3- and 4-handles): the endpoint
c33_a, c33_b, c33_xs = clasp("c1", "c2", "w")
fig33 = Diagram(
    [dot("h"), two("c1", 0), two("c2", 0)],
    {"c1": tuple(c33_a), "c2": tuple(c33_b)}, dict(c33_xs), n3=1, n4=1)
register("fig33", fig33, "33", "B^3 x S^1 # S^2 x S^2 with the carried "
         "3- and 4-handles: S^3 x S^1 # S^2 x S^2")

(DATA / "index.json").write_text(json.dumps({
    "entries": entries,
    "scripts": ["q-proof", "q-reduce", "q-upside", "n-construction",
                "n-simplify", "blowdown-check", "remark3-variant",
                "fig32-33"],
}, indent=1) + "\n")

print("\n--- replaying shipped scripts ---")
catalog = Catalog(DATA)
for name in catalog.list_scripts():
    text = catalog.load_script_text(name)
    script = parse_script(text)
    trace = replay(script, catalog)
    print("%-18s %d steps ok" % (name, len(trace.steps)))
print("catalog complete:", len(entries), "entries")
