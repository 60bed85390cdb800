// Planar layout for diagram rendering.
//
// The engine's diagram is purely combinatorial; this module picks positions
// for it: every crossing is one shared point, every piercing sits inside
// the dotted circle it passes through, and each component is a closed
// curve visiting its event points in traversal order. Positions start on
// a deterministic ring and are refined by a small force simulation.
// Aesthetics are best-effort; the combinatorics are exact by construction.
// deterministic pseudo-randomness for initial jitter
function hash01(s) {
    let h = 2166136261;
    for (let i = 0; i < s.length; i++) {
        h = (h ^ s.charCodeAt(i)) * 16777619 >>> 0;
    }
    return (h % 10000) / 10000;
}
/** Reconstruct each component's cyclic event sequence from the kcd fields. */
export function eventSequences(doc) {
    const crossingEvents = new Map();
    for (const comp of doc.components) {
        crossingEvents.set(comp.id, new Map());
    }
    for (const x of doc.crossings) {
        const [oc, oa] = x.over;
        const [uc, ua] = x.under;
        crossingEvents.get(oc).set(oa, { key: x.id, kind: "crossing", role: "over" });
        crossingEvents.get(uc).set(ua, { key: x.id, kind: "crossing", role: "under" });
    }
    const pierceAt = new Map();
    doc.piercings.forEach((p, i) => {
        if (!pierceAt.has(p.strand))
            pierceAt.set(p.strand, new Map());
        pierceAt.get(p.strand).set(p.position, { key: "p" + i, kind: "piercing", role: null });
    });
    const out = new Map();
    for (const comp of doc.components) {
        const xs = crossingEvents.get(comp.id);
        const ps = pierceAt.get(comp.id) ?? new Map();
        const total = xs.size + ps.size;
        const events = [];
        const xOrder = [...xs.keys()].sort((a, b) => a - b)
            .map((k) => xs.get(k));
        let xi = 0;
        for (let pos = 0; pos < total; pos++) {
            const p = ps.get(pos);
            events.push(p ?? xOrder[xi++]);
        }
        out.set(comp.id, events);
    }
    return out;
}
export function computeLayout(doc, width = 900, height = 640) {
    const sequences = eventSequences(doc);
    const n = doc.components.length;
    const centers = new Map();
    doc.components.forEach((comp, i) => {
        const angle = (2 * Math.PI * i) / Math.max(n, 1);
        const spread = Math.min(width, height) / 3;
        centers.set(comp.id, {
            x: width / 2 + (n > 1 ? spread * Math.cos(angle) : 0),
            y: height / 2 + (n > 1 ? spread * Math.sin(angle) : 0),
        });
    });
    // shared nodes: one per crossing, one per piercing, anchors per circle
    const nodes = new Map();
    const pierceTarget = new Map();
    doc.piercings.forEach((p, i) => {
        pierceTarget.set("p" + i, p.through);
    });
    for (const x of doc.crossings) {
        const a = centers.get(x.over[0]);
        const b = centers.get(x.under[0]);
        const j = hash01(x.id);
        nodes.set(x.id, {
            x: (a.x + b.x) / 2 + 40 * (j - 0.5),
            y: (a.y + b.y) / 2 + 40 * (hash01(x.id + "y") - 0.5),
        });
    }
    for (const [key, through] of pierceTarget) {
        const c = centers.get(through);
        nodes.set(key, {
            x: c.x + 30 * (hash01(key) - 0.5),
            y: c.y + 30 * (hash01(key + "y") - 0.5),
        });
    }
    // a crossing-free, piercing-free circle still needs drawable points
    const paths = [];
    for (const comp of doc.components) {
        const events = [...sequences.get(comp.id)];
        if (events.length === 0) {
            for (let k = 0; k < 4; k++) {
                const key = comp.id + ":a" + k;
                events.push({ key, kind: "anchor", role: null });
                const c = centers.get(comp.id);
                const ang = (Math.PI / 2) * k;
                nodes.set(key, { x: c.x + 48 * Math.cos(ang),
                    y: c.y + 48 * Math.sin(ang) });
            }
        }
        paths.push({
            id: comp.id,
            waypoints: events.map((e) => ({ key: e.key, kind: e.kind,
                role: e.role, x: 0, y: 0 })),
            center: centers.get(comp.id),
        });
    }
    refine(paths, nodes, centers, pierceTarget, width, height);
    for (const path of paths) {
        for (const wp of path.waypoints) {
            const p = nodes.get(wp.key);
            wp.x = p.x;
            wp.y = p.y;
        }
        path.center = centroid(path.waypoints);
    }
    return { components: paths, nodes };
}
function centroid(pts) {
    const s = pts.reduce((acc, p) => ({ x: acc.x + p.x, y: acc.y + p.y }), { x: 0, y: 0 });
    return { x: s.x / pts.length, y: s.y / pts.length };
}
function refine(paths, nodes, centers, pierceTarget, width, height) {
    const radius = 58;
    for (let iter = 0; iter < 220; iter++) {
        const force = new Map();
        const bump = (key, dx, dy) => {
            const f = force.get(key) ?? { x: 0, y: 0 };
            f.x += dx;
            f.y += dy;
            force.set(key, f);
        };
        for (const path of paths) {
            const pts = path.waypoints.map((wp) => nodes.get(wp.key));
            const c = centroid(pts.length ? pts : [centers.get(path.id)]);
            const m = path.waypoints.length;
            path.waypoints.forEach((wp, i) => {
                const p = nodes.get(wp.key);
                // target: evenly spaced on a circle around the centroid,
                // keeping the traversal order
                const ang = (2 * Math.PI * i) / m;
                const tx = c.x + radius * Math.cos(ang);
                const ty = c.y + radius * Math.sin(ang);
                bump(wp.key, 0.12 * (tx - p.x), 0.12 * (ty - p.y));
                // consecutive waypoints should not collapse
                const q = nodes.get(path.waypoints[(i + 1) % m].key);
                const dx = p.x - q.x;
                const dy = p.y - q.y;
                const d2 = dx * dx + dy * dy;
                if (d2 > 1e-6 && d2 < 900) {
                    const d = Math.sqrt(d2);
                    bump(wp.key, 6 * dx / d, 6 * dy / d);
                }
            });
        }
        // piercings live inside their dotted circle
        for (const [key, through] of pierceTarget) {
            const p = nodes.get(key);
            const others = paths.find((pt) => pt.id === through);
            const c = others
                ? centroid(others.waypoints.map((w) => nodes.get(w.key)))
                : centers.get(through);
            bump(key, 0.2 * (c.x - p.x), 0.2 * (c.y - p.y));
        }
        for (const [key, f] of force) {
            const p = nodes.get(key);
            p.x = Math.min(width - 20, Math.max(20, p.x + f.x));
            p.y = Math.min(height - 20, Math.max(20, p.y + f.y));
        }
    }
}
