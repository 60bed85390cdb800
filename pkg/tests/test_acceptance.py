"""
Acceptance suite.  Each criterion prints one pass/fail line; run with
`pytest -s tests/test_acceptance.py` to see them as they go.
"""

import random
import time
from itertools import combinations
from math import gcd

import pytest

from kirbycalc.algebra import IntMatrix, smith_normal_form
from kirbycalc.catalog import Catalog
from kirbycalc.diagram import CrossEvent, Diagram
from kirbycalc.invariants import diff_reports, invariant_report
from kirbycalc.moves import (
    BandSpec, IllegalMove, blow_down, cancel_1_2, dot_zero_exchange,
    gluck_flip, slide_2_over_2, slide_over_1handle, surger_loop,
    attach_dual_handles,
)
from kirbycalc.script import parse_script, replay

from randgen import random_diagram, random_ringed_diagram


@pytest.fixture(scope="module")
def catalog():
    return Catalog()


def report_line(tag, ok, detail):
    print("[%s] %s  %s" % (tag, "PASS" if ok else "FAIL", detail))
    assert ok, "%s: %s" % (tag, detail)


def test_a1_poincare_sphere_boundary(catalog):
    start = time.monotonic()
    rep = invariant_report(catalog.load_named("fig1"))
    elapsed = time.monotonic() - start
    ok = (rep.chi == 2
          and (rep.h1_free_rank, rep.h1_torsion) == (0, ())
          and rep.b2 == 1
          and (rep.form.rank, rep.form.signature) == (1, -1)
          and (rep.boundary_h1_free_rank, rep.boundary_h1_torsion) == (0, ())
          and elapsed < 1.0)
    report_line("A1", ok,
                "fig1: chi=%d H1=(%d,%s) b2=%d form=(%d,%+d) boundary "
                "trivial=%s in %.3fs"
                % (rep.chi, rep.h1_free_rank, list(rep.h1_torsion), rep.b2,
                   rep.form.rank, rep.form.signature,
                   rep.boundary_h1_free_rank == 0, elapsed))


def test_a2_theorem_endpoint(catalog):
    start = time.monotonic()
    script = parse_script(catalog.load_script_text("q-proof"))
    trace = replay(script, catalog)
    elapsed = time.monotonic() - start
    rep = trace.final_report
    ok = (all(s.ok for s in trace.steps)
          and rep.chi == 2
          and (rep.h1_free_rank, rep.h1_torsion) == (1, ())
          and rep.b2 == 2
          and (rep.form.rank, rep.form.signature, rep.form.parity)
          == (2, 0, "even")
          and rep.pi1_flag == "simplified_to_Z"
          and elapsed < 10.0)
    report_line("A2", ok,
                "q-proof: %d steps, chi=%d H1=Z^%d b2=%d form=(%d,%+d,%s) "
                "pi1=%s in %.2fs"
                % (len(trace.steps), rep.chi, rep.h1_free_rank, rep.b2,
                   rep.form.rank, rep.form.signature, rep.form.parity,
                   rep.pi1_flag, elapsed))


def test_a3_remark3_variant(catalog):
    start = time.monotonic()
    trace = replay(parse_script(catalog.load_script_text("remark3-variant")),
                   catalog)
    elapsed = time.monotonic() - start
    rep = trace.final_report
    ok = (all(s.ok for s in trace.steps)
          and (rep.form.rank, rep.form.signature, rep.form.parity)
          == (2, 0, "odd")
          and elapsed < 10.0)
    report_line("A3", ok, "remark3-variant: form=(%d,%+d,%s) in %.2fs"
                % (rep.form.rank, rep.form.signature, rep.form.parity,
                   elapsed))


def test_a4_move_soundness_suite():
    start = time.monotonic()
    rng = random.Random(20260808)
    diagrams = 0
    checks = {"slide": 0, "slide1": 0, "gluck": 0, "cancel12": 0,
              "blowdown": 0, "dotzero": 0, "snf": 0}
    while diagrams < 300:
        d = random_diagram(rng)
        diagrams += 1
        before = invariant_report(d)
        hands = d.two_handles()

        # handle slides preserve the report and the extended-matrix SNF
        if len(hands) >= 2:
            for _ in range(2):
                a, b = rng.sample(hands, 2)
                eps = rng.choice((1, -1))
                try:
                    out, _ = slide_2_over_2(
                        d, a, b, BandSpec(0, 0, pushoff_sign=eps))
                except IllegalMove:
                    continue
                assert diff_reports(before, invariant_report(out)) == [], \
                    ("slide changed the report", a, b, eps)
                assert (smith_normal_form(d.extended_matrix()).divisors
                        == smith_normal_form(out.extended_matrix()).divisors)
                checks["slide"] += 1
                checks["snf"] += 1

        # a cancelling pair of passes across a dotted circle is an isotopy
        if d.dotted():
            cid = rng.choice(hands)
            h = rng.choice(d.dotted())
            sign = rng.choice((1, -1))
            pos = rng.randrange(len(d.events[cid]) + 1)
            out, _ = slide_over_1handle(d, cid, h, sign, pos)
            out, _ = slide_over_1handle(out, cid, h, -sign, pos + 1)
            assert diff_reports(before, invariant_report(out)) == []
            checks["slide1"] += 1

        # Gluck flip on a fresh meridian of an otherwise clear dotted
        # circle preserves the report
        clear = [h for h in d.dotted()
                 if all(lk == 0 for lk in
                        (d.linking_number(t, h) for t in hands))
                 and not any(p.through == h for p in d.all_piercings())]
        if clear:
            h = rng.choice(clear)
            md, _ = attach_dual_handles(
                d, (("glk", rng.choice((1, -1)), (("pierce", h, 1),)),))
            pre = invariant_report(md)
            out, _ = gluck_flip(md, "glk")
            assert diff_reports(pre, invariant_report(out)) == []
            checks["gluck"] += 1

        # canceling a fresh 1-handle/2-handle pair preserves the report;
        # sites whose strand layout defeats the normalized detour search
        # are legally refused and skipped
        if d.dotted():
            h = rng.choice(d.dotted())
            if not d.component(h).slice_flag:
                md, _ = attach_dual_handles(
                    d, (("cnl", rng.choice((1, -1)),
                         (("pierce", h, rng.choice((1, -1))),)),))
                pre = invariant_report(md)
                try:
                    out, _ = cancel_1_2(md, h, "cnl")
                except IllegalMove:
                    out = None
                if out is not None:
                    assert diff_reports(pre, invariant_report(out)) == []
                    checks["cancel12"] += 1

        # blow-down drops b2 by one and moves the signature by -eps
        ringed, uid, eps = random_ringed_diagram(rng)
        pre = invariant_report(ringed)
        out, rec = blow_down(ringed, uid)
        post = invariant_report(out)
        assert post.b2 == pre.b2 - 1
        assert rec.deltas == (0, -1, 0, -1)
        if pre.form is not None and post.form is not None:
            assert post.form.signature == pre.form.signature - eps
        checks["blowdown"] += 1

        # dot/zero exchange: boundary H1 fixed, chi up by two.  Piercing
        # patterns that admit no planar ring are legally refused; only
        # applicable sites count.
        if d.dotted():
            h = rng.choice(d.dotted())
            try:
                out, _ = dot_zero_exchange(d, h)
            except IllegalMove:
                out = None
            if out is not None:
                post = invariant_report(out)
                assert post.chi == before.chi + 2
                assert (post.boundary_h1_free_rank,
                        post.boundary_h1_torsion) \
                    == (before.boundary_h1_free_rank,
                        before.boundary_h1_torsion)
                checks["dotzero"] += 1

    elapsed = time.monotonic() - start
    ok = (diagrams >= 200 and elapsed < 60.0
          and checks["slide"] >= 200 and checks["snf"] >= 200
          and all(v >= 50 for k, v in checks.items()))
    report_line("A4", ok, "%d diagrams, checks=%s in %.1fs"
                % (diagrams, checks, elapsed))


# -- A5 oracles ---------------------------------------------------------------

def gauss_linking_oracle(d: Diagram, a, b):
    """Half the signed sum of the mutual symbols of a's Gauss code."""
    other = {}
    for cid in (a, b):
        for e in d.events[cid]:
            if isinstance(e, CrossEvent):
                other.setdefault(e.crossing, set()).add(cid)
    total = 0
    for e in d.events[a]:
        if isinstance(e, CrossEvent) and other.get(e.crossing) == {a, b}:
            total += d.crossings[e.crossing]
    assert total % 2 == 0
    return total // 2


def over_sum_oracle(d: Diagram, a, b):
    """Sum of signs of the crossings where a passes over b; equals the
    linking number for any genuinely planar diagram."""
    events_b = {e.crossing for e in d.events[b]
                if isinstance(e, CrossEvent) and e.role == "under"}
    total = 0
    for e in d.events[a]:
        if (isinstance(e, CrossEvent) and e.role == "over"
                and e.crossing in events_b):
            total += d.crossings[e.crossing]
    return total


def minor_gcd_divisors(rows):
    m, n = len(rows), len(rows[0])

    def det(sub):
        k = len(sub)
        if k == 1:
            return sub[0][0]
        return sum((-1) ** j * sub[0][j]
                   * det([r[:j] + r[j + 1:] for r in sub[1:]])
                   for j in range(k) if sub[0][j])

    gcds = [1]
    for k in range(1, min(m, n) + 1):
        g = 0
        for ris in combinations(range(m), k):
            for cjs in combinations(range(n), k):
                g = gcd(g, det([[rows[i][j] for j in cjs] for i in ris]))
        gcds.append(abs(g))
        if g == 0:
            break
    out = []
    for k in range(1, len(gcds)):
        if gcds[k] == 0:
            break
        out.append(gcds[k] // gcds[k - 1])
    return out


def test_a5_oracle_equivalence():
    start = time.monotonic()
    rng = random.Random(5)
    pairs = 0
    while pairs < 500:
        d = random_diagram(rng, max_two_handles=2, max_dotted=0,
                           max_crossings=12)
        hands = d.two_handles()
        if len(hands) != 2:
            continue
        a, b = hands
        lk = d.linking_number(a, b)
        assert lk == gauss_linking_oracle(d, a, b), d.to_kcd()
        assert lk == over_sum_oracle(d, a, b), d.to_kcd()
        pairs += 1

    samples = 0
    rng2 = random.Random(55)
    while samples < 1000:
        rows = [[rng2.randint(-3, 3) for _ in range(3)] for _ in range(3)]
        res = smith_normal_form(IntMatrix(rows))
        assert list(res.divisors) == minor_gcd_divisors(rows), rows
        samples += 1
    elapsed = time.monotonic() - start
    ok = pairs >= 500 and samples >= 1000 and elapsed < 60.0
    report_line("A5", ok,
                "%d linking pairs, %d SNF samples in %.1fs"
                % (pairs, samples, elapsed))


def test_a6_blow_down_figure_check(catalog):
    trace = replay(parse_script(catalog.load_script_text("blowdown-check")),
                   catalog)
    final = trace.final
    fig8 = catalog.load_named("fig8")
    same_matrix = (final.linking_matrix() == fig8.linking_matrix())
    same_words = ([final.piercing_word(t) for t in final.two_handles()]
                  == [fig8.piercing_word(t) for t in fig8.two_handles()])
    ok = all(s.ok for s in trace.steps) and same_matrix and same_words
    report_line("A6", ok,
                "fig10 double blow-down: matrix %s, words %s"
                % (final.linking_matrix().to_lists(),
                   [list(w) for w in
                    (final.piercing_word(t) for t in final.two_handles())]))


def test_a7_surgery_parity():
    rng = random.Random(77)
    start = time.monotonic()
    done = 0
    while done < 50:
        base = random_diagram(rng, max_two_handles=2, max_dotted=2,
                              max_crossings=6)
        k = rng.randint(-3, 3)
        trace = tuple(("pierce", h, rng.choice((1, -1)))
                      for h in d_sample(rng, base.dotted()))
        try:
            surgered, _ = surger_loop(base, "gg", trace, k,
                                      meridian_id="mm")
        except IllegalMove:
            continue
        before = invariant_report(surgered)
        slid, _ = slide_2_over_2(surgered, "gg", "mm",
                                 BandSpec(0, 0, pushoff_sign=1))
        assert slid.component("gg").framing == k + 2, (k, trace)
        assert diff_reports(before, invariant_report(slid)) == []
        done += 1
    elapsed = time.monotonic() - start
    ok = done >= 50 and elapsed < 60.0
    report_line("A7", ok, "%d surger+slide parity checks in %.1fs"
                % (done, elapsed))


def d_sample(rng, items):
    if not items:
        return []
    return rng.sample(items, rng.randint(0, min(2, len(items))))
