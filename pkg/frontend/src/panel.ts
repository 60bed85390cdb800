// Invariant panel: rows straight from the engine's report document.

import { ReportDoc } from "./types.js";

export interface PanelRow {
    field: string;
    value: string;
}

export function groupText(free: number, torsion: number[]): string {
    const parts: string[] = [];
    if (free === 1) parts.push("Z");
    else if (free > 1) parts.push(`Z^${free}`);
    for (const t of torsion) parts.push(`Z/${t}`);
    return parts.length ? parts.join(" + ") : "0";
}

export function panelRows(report: ReportDoc): PanelRow[] {
    const rows: PanelRow[] = [
        { field: "chi", value: String(report.chi) },
        { field: "H1", value: groupText(report.h1.free_rank,
                                        report.h1.torsion) },
        { field: "b2", value: String(report.b2) },
        {
            field: "form",
            value: report.form === null
                ? "degenerate/undefined"
                : `rank ${report.form.rank}, signature ` +
                  `${report.form.signature >= 0 ? "+" : ""}` +
                  `${report.form.signature}, ${report.form.parity}`,
        },
        {
            field: "boundary H1",
            value: report.boundary === "closed"
                ? "closed manifold, empty boundary"
                : groupText(report.boundary.h1_free_rank,
                            report.boundary.h1_torsion),
        },
        {
            field: "pi1",
            value: `${presentationText(report)}  [${report.pi1.flag}]`,
        },
    ];
    return rows;
}

function presentationText(report: ReportDoc): string {
    const gens = report.pi1.generators.join(", ");
    const rels = report.pi1.relators.join(", ");
    return `< ${gens} | ${rels} >`;
}
