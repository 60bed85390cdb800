// The legal-move palette for a selected component.
//
// Candidates are assembled from the component's kind and the diagram's
// inventory; actual legality is the engine's call. Applying a candidate
// POSTs it, and a rejection surfaces the engine's error text inline.
export function moveCandidates(doc, selected) {
    const comp = doc.components.find((c) => c.id === selected);
    if (!comp)
        return [];
    const out = [];
    if (comp.kind === "2-handle") {
        for (const other of doc.components) {
            if (other.kind === "2-handle" && other.id !== selected) {
                out.push({
                    label: `slide ${selected} over ${other.id} (+)`,
                    move: "slide",
                    params: [selected, other.id, "-", 1],
                });
                out.push({
                    label: `slide ${selected} over ${other.id} (-)`,
                    move: "slide",
                    params: [selected, other.id, "-", -1],
                });
            }
        }
        if (comp.framing === 1 || comp.framing === -1) {
            out.push({ label: `gluck flip ${selected}`, move: "gluck",
                params: [selected] });
            out.push({ label: `blow down ${selected}`, move: "blowdown",
                params: [selected] });
        }
        if (comp.framing === 0) {
            out.push({ label: `cancel ${selected} against a 3-handle`,
                move: "cancel23", params: [selected] });
        }
    }
    else {
        out.push({ label: `dot/zero exchange ${selected}`, move: "dotzero",
            params: [selected] });
        for (const other of doc.components) {
            if (other.kind === "2-handle") {
                out.push({
                    label: `cancel ${selected} with ${other.id}`,
                    move: "cancel12",
                    params: [selected, other.id],
                });
            }
        }
    }
    out.push({ label: "isotopy: reduce", move: "isotopy",
        params: ["reduce", "-"] });
    return out;
}
