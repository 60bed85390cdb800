import assert from "node:assert/strict";
import { test } from "node:test";

import { groupText, panelRows } from "../src/panel.js";
import { ReportDoc } from "../src/types.js";

const sample: ReportDoc = {
    format: "rep-1",
    chi: 2,
    h1: { free_rank: 1, torsion: [] },
    b2: 2,
    form: { rank: 2, signature: 0, parity: "even" },
    boundary: { h1_free_rank: 1, h1_torsion: [] },
    pi1: { generators: ["h"], relators: [], flag: "simplified_to_Z" },
};

test("group text", () => {
    assert.equal(groupText(0, []), "0");
    assert.equal(groupText(1, []), "Z");
    assert.equal(groupText(2, [2, 4]), "Z^2 + Z/2 + Z/4");
});

test("panel rows come straight from the report", () => {
    const rows = panelRows(sample);
    const byField = new Map(rows.map((r) => [r.field, r.value]));
    assert.equal(byField.get("chi"), "2");
    assert.equal(byField.get("H1"), "Z");
    assert.equal(byField.get("b2"), "2");
    assert.equal(byField.get("form"), "rank 2, signature +0, even");
    assert.equal(byField.get("boundary H1"), "Z");
    assert.equal(byField.get("pi1"), "< h |  >  [simplified_to_Z]");
});

test("panel handles closed boundary and undefined form", () => {
    const closed: ReportDoc = {
        ...sample, form: null, boundary: "closed",
    };
    const byField = new Map(panelRows(closed).map((r) => [r.field, r.value]));
    assert.equal(byField.get("form"), "degenerate/undefined");
    assert.equal(byField.get("boundary H1"),
                 "closed manifold, empty boundary");
});
