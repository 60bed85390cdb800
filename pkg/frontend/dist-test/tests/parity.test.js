// UI/CLI parity (the A8 check): the invariant panel's source document is
// bit-identical to `kc invariants` on the same state, for fig1, fig12 and
// the final q-proof state; a Gluck flip through the API changes exactly
// the framing label and nothing else in the scene.
import assert from "node:assert/strict";
import { after, before, test } from "node:test";
import { execFileSync, spawn } from "node:child_process";
import { EngineApi } from "../src/api.js";
import { buildScene } from "../src/scene.js";
import { panelRows } from "../src/panel.js";
let server;
let api;
function cli(...args) {
    return execFileSync("python3", ["-m", "kirbycalc.cli", "--format", "structured",
        ...args], { encoding: "utf-8" });
}
before(async () => {
    server = spawn("python3", ["-m", "kirbycalc.cli", "serve", "--port", "0"], { stdio: ["ignore", "pipe", "pipe"] });
    const base = await new Promise((resolve, reject) => {
        let buf = "";
        server.stdout.on("data", (chunk) => {
            buf += String(chunk);
            const m = buf.match(/listening on (http:\/\/[^\s]+)/);
            if (m)
                resolve(m[1]);
        });
        server.on("exit", () => reject(new Error("server died: " + buf)));
    });
    api = new EngineApi(base);
});
after(() => {
    server.kill();
});
test("panel source equals kc invariants for fig1 and fig12", async () => {
    for (const name of ["fig1", "fig12"]) {
        await api.load(name);
        const served = await api.invariants();
        const printed = JSON.parse(cli("invariants", name));
        assert.deepEqual(served, printed, name);
        // and the panel renders that document, field for field
        const rows = panelRows(served);
        assert.equal(rows.length, 6);
    }
});
test("final q-proof state matches the trace's final report", async () => {
    const resp = await api.scriptStep("q-proof", -1);
    const served = await api.invariants();
    assert.deepEqual(served, resp.report);
    const trace = JSON.parse(cli("run", process.env.QPROOF_PATH ?? qproofPath()));
    assert.deepEqual(served, trace.final_report);
    assert.equal(served.chi, 2);
    assert.equal(served.b2, 2);
    assert.equal(served.pi1.flag, "simplified_to_Z");
});
function qproofPath() {
    const out = execFileSync("python3", ["-c",
        "from importlib import resources; " +
            "print(resources.files('kirbycalc') / 'data' / 'q-proof.kcs')"], { encoding: "utf-8" });
    return out.trim();
}
test("gluck flip via the API changes only the framing label", async () => {
    const { diagram: beforeDoc } = await api.load("fig12");
    const sceneBefore = buildScene(beforeDoc);
    const resp = await api.move("gluck", ["alpha"]);
    const sceneAfter = buildScene(resp.diagram);
    const labels = (s) => new Map(s.curves.map((c) => [c.id, c.framingLabel]));
    const before2 = labels(sceneBefore);
    const after2 = labels(sceneAfter);
    assert.equal(before2.get("alpha"), "-1");
    assert.equal(after2.get("alpha"), "1");
    for (const [id, label] of before2) {
        if (id !== "alpha")
            assert.equal(after2.get(id), label, id);
    }
    // geometry and combinatorics are untouched
    assert.deepEqual(sceneAfter.crossings, sceneBefore.crossings);
    assert.deepEqual(sceneAfter.piercings, sceneBefore.piercings);
    assert.deepEqual(sceneAfter.curves.map((c) => c.segments), sceneBefore.curves.map((c) => c.segments));
    // the panel (engine report) is unchanged by the flip
    assert.deepEqual(await api.invariants(), JSON.parse(cli("invariants", "fig12")));
});
test("engine rejections surface with the engine's error text", async () => {
    await api.load("fig1");
    await assert.rejects(api.move("blowdown", ["k"]), (err) => /ring form|framing/.test(err.message));
});
test("undo restores the exact previous serialization", async () => {
    const { diagram: original } = await api.load("fig12");
    await api.move("gluck", ["alpha"]);
    const undone = await api.undo();
    assert.deepEqual(undone.diagram, original);
});
