// Typed client for the engine's local HTTP API. Every state change goes
// through the service; nothing is computed or cached on this side.

import {
    CatalogDoc, DiagramDoc, LoadResponse, MoveResponse, ReportDoc,
    StepResponse,
} from "./types.js";

export class EngineError extends Error {
    constructor(message: string) {
        super(message);
        this.name = "EngineError";
    }
}

export class EngineApi {
    constructor(private base: string) {}

    private async get<T>(path: string): Promise<T> {
        const resp = await fetch(this.base + path);
        const body = await resp.json();
        if (!resp.ok) {
            throw new EngineError(body.error ?? resp.statusText);
        }
        return body as T;
    }

    private async post<T>(path: string, payload: unknown): Promise<T> {
        const resp = await fetch(this.base + path, {
            method: "POST",
            headers: { "Content-Type": "application/json" },
            body: JSON.stringify(payload),
        });
        const body = await resp.json();
        if (!resp.ok) {
            throw new EngineError(body.error ?? resp.statusText);
        }
        return body as T;
    }

    catalog(): Promise<CatalogDoc> {
        return this.get<CatalogDoc>("/api/catalog");
    }

    diagram(): Promise<DiagramDoc> {
        return this.get<DiagramDoc>("/api/diagram");
    }

    invariants(): Promise<ReportDoc> {
        return this.get<ReportDoc>("/api/invariants");
    }

    load(name: string): Promise<LoadResponse> {
        return this.post<LoadResponse>("/api/diagram", { name });
    }

    move(move: string, params: unknown[]): Promise<MoveResponse> {
        return this.post<MoveResponse>("/api/move", { move, params });
    }

    undo(): Promise<LoadResponse> {
        return this.post<LoadResponse>("/api/undo", {});
    }

    scriptStep(script: string, index: number): Promise<StepResponse> {
        return this.post<StepResponse>("/api/script/step", { script, index });
    }

    scriptText(name: string): Promise<{ name: string; text: string }> {
        return this.get<{ name: string; text: string }>(
            "/api/script/" + name);
    }
}
