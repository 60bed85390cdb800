// Scene building: turn a served diagram document into drawable shapes.
//
// The rendered combinatorics must match the document exactly: one crossing
// mark per crossing with the under-strand gapped, one marker per piercing,
// a dot on every dotted component, the framing integer on every 2-handle.
// All of that is read straight off the document, never recomputed.

import { computeLayout, Layout, Point } from "./layout.js";
import { DiagramDoc } from "./types.js";

export interface Segment {
    points: Point[];
}

export interface CurveView {
    id: string;
    kind: "2-handle" | "dotted";
    label: string;
    framingLabel: string | null;       // e.g. "-1"; null on dotted circles
    dotted: boolean;
    sliceFlag: boolean;
    segments: Segment[];               // drawn with gaps at under-crossings
    labelPos: Point;
    dotPos: Point | null;
}

export interface CrossingMark {
    id: string;
    sign: 1 | -1;
    at: Point;
    over: string;
    under: string;
}

export interface PierceMark {
    strand: string;
    through: string;
    sign: 1 | -1;
    at: Point;
}

export interface Scene {
    width: number;
    height: number;
    curves: CurveView[];
    crossings: CrossingMark[];
    piercings: PierceMark[];
    counters: { n1: number; n2: number; n3: number; n4: number };
}

const GAP = 9;

export function buildScene(doc: DiagramDoc, width = 900,
                           height = 640): Scene {
    const layout = computeLayout(doc, width, height);

    const curves: CurveView[] = [];
    for (const path of layout.components) {
        const comp = doc.components.find((c) => c.id === path.id)!;
        const ring = path.waypoints;
        const segments = gappedSegments(
            ring.map((wp) => ({ x: wp.x, y: wp.y })),
            ring.map((wp) => wp.role === "under"));
        const labelPos = {
            x: path.center.x,
            y: path.center.y - 74,
        };
        curves.push({
            id: comp.id,
            kind: comp.kind,
            label: comp.label ?? comp.id,
            framingLabel: comp.kind === "2-handle"
                ? String(comp.framing) : null,
            dotted: comp.kind === "dotted",
            sliceFlag: Boolean(comp.slice),
            segments,
            labelPos,
            dotPos: comp.kind === "dotted" ? path.center : null,
        });
    }

    const crossings: CrossingMark[] = doc.crossings.map((x) => ({
        id: x.id,
        sign: x.sign,
        at: layout.nodes.get(x.id)!,
        over: x.over[0],
        under: x.under[0],
    }));
    const piercings: PierceMark[] = doc.piercings.map((p, i) => ({
        strand: p.strand,
        through: p.through,
        sign: p.sign,
        at: layout.nodes.get("p" + i)!,
    }));

    return {
        width,
        height,
        curves,
        crossings,
        piercings,
        counters: {
            n1: doc.components.filter((c) => c.kind === "dotted").length,
            n2: doc.components.filter((c) => c.kind === "2-handle").length,
            n3: doc.n3,
            n4: doc.n4,
        },
    };
}

/**
 * Split a closed polyline into segments, cutting a gap around every vertex
 * where the strand passes under. A curve with no under-passes is one
 * closed segment.
 */
export function gappedSegments(ring: Point[], under: boolean[]): Segment[] {
    const n = ring.length;
    if (n === 0) return [];
    if (!under.some(Boolean)) {
        return [{ points: [...ring, ring[0]] }];
    }
    const segments: Segment[] = [];
    let current: Point[] = [];
    const start = under.indexOf(true);
    for (let k = 0; k <= n; k++) {
        const i = (start + k) % n;
        const p = ring[i];
        const prev = ring[(i + n - 1) % n];
        const next = ring[(i + 1) % n];
        if (under[i]) {
            if (k > 0) {
                current.push(towards(p, prev, GAP));
                segments.push({ points: current });
            }
            if (k < n) {
                current = [towards(p, next, GAP)];
            }
        } else if (k < n) {
            current.push(p);
        } else {
            current.push(towards(p, prev, 0));
        }
    }
    return segments.filter((s) => s.points.length >= 2);
}

function towards(from: Point, to: Point, dist: number): Point {
    const dx = to.x - from.x;
    const dy = to.y - from.y;
    const d = Math.hypot(dx, dy) || 1;
    return { x: from.x + (dx * dist) / d, y: from.y + (dy * dist) / d };
}

// -- SVG emission (pure strings; the app drops this into the page) ----------

function esc(s: string): string {
    return s.replace(/&/g, "&amp;").replace(/</g, "&lt;")
        .replace(/>/g, "&gt;").replace(/"/g, "&quot;");
}

function pathOf(seg: Segment): string {
    const cmds = seg.points.map((p, i) =>
        `${i === 0 ? "M" : "L"}${p.x.toFixed(1)},${p.y.toFixed(1)}`);
    return cmds.join(" ");
}

const PALETTE = ["#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e",
                 "#17becf", "#8c564b", "#e377c2"];

export function sceneToSvg(scene: Scene,
                           selected: string | null = null): string {
    const parts: string[] = [];
    parts.push(`<svg xmlns="http://www.w3.org/2000/svg" ` +
        `viewBox="0 0 ${scene.width} ${scene.height}" ` +
        `width="${scene.width}" height="${scene.height}">`);
    scene.curves.forEach((curve, i) => {
        const color = PALETTE[i % PALETTE.length];
        const width = curve.id === selected ? 4.5 : 2.5;
        const dash = curve.dotted && curve.sliceFlag ? ` stroke-dasharray="7,4"` : "";
        for (const seg of curve.segments) {
            parts.push(`<path class="curve" data-component="${esc(curve.id)}" ` +
                `d="${pathOf(seg)}" fill="none" stroke="${color}" ` +
                `stroke-width="${width}" stroke-linecap="round"${dash}/>`);
        }
        if (curve.dotPos) {
            parts.push(`<circle class="dot-marker" ` +
                `data-component="${esc(curve.id)}" ` +
                `cx="${curve.dotPos.x.toFixed(1)}" ` +
                `cy="${curve.dotPos.y.toFixed(1)}" r="5" fill="${color}"/>`);
        }
        const text = curve.framingLabel === null
            ? esc(curve.label)
            : `${esc(curve.label)} (${esc(curve.framingLabel)})`;
        parts.push(`<text class="component-label" ` +
            `data-component="${esc(curve.id)}" ` +
            `data-framing="${esc(curve.framingLabel ?? "dot")}" ` +
            `x="${curve.labelPos.x.toFixed(1)}" ` +
            `y="${curve.labelPos.y.toFixed(1)}" font-size="14" ` +
            `fill="${color}" text-anchor="middle">${text}</text>`);
    });
    for (const m of scene.piercings) {
        parts.push(`<circle class="pierce-marker" ` +
            `data-strand="${esc(m.strand)}" data-through="${esc(m.through)}" ` +
            `data-sign="${m.sign}" cx="${m.at.x.toFixed(1)}" ` +
            `cy="${m.at.y.toFixed(1)}" r="3.5" fill="none" ` +
            `stroke="#333" stroke-width="1.2"/>`);
    }
    for (const x of scene.crossings) {
        parts.push(`<g class="crossing-mark" data-crossing="${esc(x.id)}" ` +
            `data-sign="${x.sign}"><title>${esc(x.id)}: ${esc(x.over)} over ` +
            `${esc(x.under)} (${x.sign > 0 ? "+" : "-"}1)</title>` +
            `<circle cx="${x.at.x.toFixed(1)}" cy="${x.at.y.toFixed(1)}" ` +
            `r="8" fill="transparent"/></g>`);
    }
    parts.push(`<text class="counters" x="12" y="${scene.height - 12}" ` +
        `font-size="12" fill="#666">1-handles: ${scene.counters.n1}   ` +
        `2-handles: ${scene.counters.n2}   3-handles: ${scene.counters.n3}   ` +
        `4-handles: ${scene.counters.n4}</text>`);
    parts.push("</svg>");
    return parts.join("\n");
}
