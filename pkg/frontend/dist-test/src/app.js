// Page wiring: catalog picker, diagram view, move palette, invariant
// panel, script stepper. The panel always shows engine-computed numbers;
// every change round-trips through the service, and undo restores the
// exact previous serialization on the engine side.
import { EngineApi, EngineError } from "./api.js";
import { moveCandidates } from "./palette.js";
import { panelRows } from "./panel.js";
import { buildScene, sceneToSvg } from "./scene.js";
const engineBase = new URLSearchParams(window.location.search).get("engine") ?? "";
const api = new EngineApi(engineBase);
const state = {
    diagram: null, report: null, selected: null,
    script: null, scriptIndex: -1, scriptTotal: 0, error: "", note: "",
};
function el(id) {
    return document.getElementById(id);
}
function render() {
    const view = el("diagram");
    if (state.diagram) {
        const scene = buildScene(state.diagram);
        view.innerHTML = sceneToSvg(scene, state.selected);
        for (const node of view.querySelectorAll("[data-component]")) {
            node.addEventListener("click", (ev) => {
                state.selected =
                    ev.currentTarget.dataset.component ?? null;
                render();
                ev.stopPropagation();
            });
        }
    }
    else {
        view.innerHTML = "<p>Load a catalog entry.</p>";
    }
    const panel = el("panel-body");
    panel.innerHTML = "";
    if (state.report) {
        for (const row of panelRows(state.report)) {
            const tr = document.createElement("tr");
            const name = document.createElement("td");
            name.textContent = row.field;
            const value = document.createElement("td");
            value.textContent = row.value;
            tr.append(name, value);
            panel.append(tr);
        }
    }
    const palette = el("palette");
    palette.innerHTML = "";
    if (state.diagram && state.selected) {
        const title = document.createElement("h3");
        title.textContent = `moves for ${state.selected}`;
        palette.append(title);
        for (const cand of moveCandidates(state.diagram, state.selected)) {
            const button = document.createElement("button");
            button.textContent = cand.label;
            button.addEventListener("click", () => applyMove(cand.move, cand.params));
            palette.append(button);
        }
    }
    el("error").textContent = state.error;
    el("note").textContent = state.note;
    el("step-label").textContent = state.script
        ? `${state.script}: step ${state.scriptIndex + 1} / ${state.scriptTotal}`
        : "no script";
}
async function applyMove(move, params) {
    state.error = "";
    try {
        const resp = await api.move(move, params);
        state.diagram = resp.diagram;
        state.report = resp.report;
        state.note = `${resp.record.move}: ${resp.record.preservation}`;
    }
    catch (err) {
        state.error = err instanceof EngineError
            ? `engine: ${err.message}` : String(err);
    }
    render();
}
async function loadEntry(name) {
    state.error = "";
    state.script = null;
    try {
        const resp = await api.load(name);
        state.diagram = resp.diagram;
        state.report = resp.report;
        state.selected = null;
        state.note = `loaded ${name}`;
    }
    catch (err) {
        state.error = String(err);
    }
    render();
}
async function undo() {
    state.error = "";
    try {
        const resp = await api.undo();
        state.diagram = resp.diagram;
        state.report = resp.report;
        state.note = "undone";
    }
    catch (err) {
        state.error = err instanceof EngineError
            ? `engine: ${err.message}` : String(err);
    }
    render();
}
async function stepScript(delta) {
    if (!state.script)
        return;
    state.error = "";
    const target = Math.max(-1, state.scriptIndex + delta);
    try {
        const resp = await api.scriptStep(state.script, target);
        state.diagram = resp.diagram;
        state.report = resp.report;
        state.scriptIndex = Math.min(target, resp.total_steps - 1);
        state.scriptTotal = resp.total_steps;
        const last = resp.trace.steps[resp.trace.steps.length - 1];
        state.note = last ? `${last.kind}: ${last.line}` : "at start";
    }
    catch (err) {
        state.error = err instanceof EngineError
            ? `engine: ${err.message}` : String(err);
    }
    render();
}
async function init() {
    const cat = await api.catalog();
    const entrySelect = el("entry");
    for (const entry of cat.entries) {
        const opt = document.createElement("option");
        opt.value = entry.name;
        opt.textContent = entry.name;
        entrySelect.append(opt);
    }
    const scriptSelect = el("script");
    for (const name of cat.scripts) {
        const opt = document.createElement("option");
        opt.value = name;
        opt.textContent = name;
        scriptSelect.append(opt);
    }
    el("load").addEventListener("click", () => loadEntry(entrySelect.value));
    el("undo").addEventListener("click", undo);
    el("script-load").addEventListener("click", async () => {
        state.script = scriptSelect.value;
        state.scriptIndex = -1;
        await stepScript(0);
    });
    el("step-fwd").addEventListener("click", () => stepScript(1));
    el("step-back").addEventListener("click", () => stepScript(-1));
    el("step-end").addEventListener("click", () => stepScript(10000));
    render();
}
init().catch((err) => {
    el("error").textContent =
        `cannot reach the engine: ${err}`;
});
