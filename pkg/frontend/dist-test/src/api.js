// Typed client for the engine's local HTTP API. Every state change goes
// through the service; nothing is computed or cached on this side.
export class EngineError extends Error {
    constructor(message) {
        super(message);
        this.name = "EngineError";
    }
}
export class EngineApi {
    constructor(base) {
        this.base = base;
    }
    async get(path) {
        const resp = await fetch(this.base + path);
        const body = await resp.json();
        if (!resp.ok) {
            throw new EngineError(body.error ?? resp.statusText);
        }
        return body;
    }
    async post(path, payload) {
        const resp = await fetch(this.base + path, {
            method: "POST",
            headers: { "Content-Type": "application/json" },
            body: JSON.stringify(payload),
        });
        const body = await resp.json();
        if (!resp.ok) {
            throw new EngineError(body.error ?? resp.statusText);
        }
        return body;
    }
    catalog() {
        return this.get("/api/catalog");
    }
    diagram() {
        return this.get("/api/diagram");
    }
    invariants() {
        return this.get("/api/invariants");
    }
    load(name) {
        return this.post("/api/diagram", { name });
    }
    move(move, params) {
        return this.post("/api/move", { move, params });
    }
    undo() {
        return this.post("/api/undo", {});
    }
    scriptStep(script, index) {
        return this.post("/api/script/step", { script, index });
    }
    scriptText(name) {
        return this.get("/api/script/" + name);
    }
}
