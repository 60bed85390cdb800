// Combinatorial fidelity of the rendered scene: everything drawn matches
// the served document exactly, for hand-built docs and every shipped
// catalog figure.

import assert from "node:assert/strict";
import { test } from "node:test";
import { readFileSync, readdirSync } from "node:fs";
import { dirname, join } from "node:path";
import { fileURLToPath } from "node:url";

import { buildScene, gappedSegments, sceneToSvg } from "../src/scene.js";
import { eventSequences } from "../src/layout.js";
import { DiagramDoc } from "../src/types.js";

const here = dirname(fileURLToPath(import.meta.url));
const dataDir = join(here, "..", "..", "..", "src", "kirbycalc", "data");

function loadDoc(name: string): DiagramDoc {
    return JSON.parse(
        readFileSync(join(dataDir, name + ".kcd"), "utf-8")) as DiagramDoc;
}

test("scene mirrors the document combinatorics for every catalog figure",
     () => {
    const names = readdirSync(dataDir)
        .filter((f) => f.endsWith(".kcd"))
        .map((f) => f.replace(/\.kcd$/, ""));
    assert.ok(names.length >= 8);
    for (const name of names) {
        const doc = loadDoc(name);
        const scene = buildScene(doc);
        assert.equal(scene.crossings.length, doc.crossings.length, name);
        assert.deepEqual(
            scene.crossings.map((x) => [x.id, x.sign]).sort(),
            doc.crossings.map((x) => [x.id, x.sign]).sort(), name);
        assert.equal(scene.piercings.length, doc.piercings.length, name);
        assert.equal(scene.curves.length, doc.components.length, name);
        for (const comp of doc.components) {
            const curve = scene.curves.find((c) => c.id === comp.id)!;
            assert.equal(curve.dotted, comp.kind === "dotted", name);
            assert.equal(curve.framingLabel,
                         comp.kind === "2-handle"
                             ? String(comp.framing) : null, name);
            assert.equal(curve.dotPos !== null, comp.kind === "dotted");
        }
        assert.equal(scene.counters.n3, doc.n3);
        assert.equal(scene.counters.n4, doc.n4);
    }
});

test("under-strand gaps: one break per under-pass", () => {
    const doc = loadDoc("fig1");   // trefoil: 3 self-crossings
    const scene = buildScene(doc);
    const curve = scene.curves[0];
    // the trefoil passes under 3 times, so its closed curve is drawn in
    // exactly 3 segments
    assert.equal(curve.segments.length, 3);

    const ring = [{ x: 0, y: 0 }, { x: 100, y: 0 },
                  { x: 100, y: 100 }, { x: 0, y: 100 }];
    const closed = gappedSegments(ring, [false, false, false, false]);
    assert.equal(closed.length, 1);
    assert.equal(closed[0].points.length, 5);   // closed loop
    const once = gappedSegments(ring, [false, true, false, false]);
    assert.equal(once.length, 1);
    const twice = gappedSegments(ring, [true, false, true, false]);
    assert.equal(twice.length, 2);
});

test("event sequences reconstruct traversal order", () => {
    const doc = loadDoc("fig12");
    const seqs = eventSequences(doc);
    const alpha = seqs.get("alpha")!;
    assert.equal(alpha.length, 1);
    assert.equal(alpha[0].kind, "piercing");
    const kk = seqs.get("kk")!;
    assert.equal(kk.length, 12);   // the square knot's 6 self-crossings
    assert.ok(kk.every((e) => e.kind === "crossing"));
});

test("svg emission carries the data attributes the tests key on", () => {
    const doc = loadDoc("fig12");
    const svg = sceneToSvg(buildScene(doc));
    assert.match(svg, /data-component="alpha"/);
    assert.match(svg, /data-framing="-1"/);
    assert.match(svg, /class="dot-marker"/);
    assert.match(svg, /class="pierce-marker"/);
    assert.match(svg, /1-handles: 2 {3}2-handles: 3 {3}3-handles: 1/);
});
