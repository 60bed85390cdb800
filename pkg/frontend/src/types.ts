// Document types mirroring the engine's wire formats (kcd-1, rep-1,
// trace-1 and the move records). The UI never recomputes any of these.

export interface ComponentDoc {
    id: string;
    kind: "2-handle" | "dotted";
    framing?: number;
    label?: string;
    slice?: boolean;
}

export interface CrossingDoc {
    id: string;
    over: [string, number];
    under: [string, number];
    sign: 1 | -1;
}

export interface PiercingDoc {
    strand: string;
    through: string;
    sign: 1 | -1;
    position: number;
}

export interface DiagramDoc {
    format: "kcd-1";
    components: ComponentDoc[];
    crossings: CrossingDoc[];
    piercings: PiercingDoc[];
    n3: number;
    n4: number;
    metadata: Record<string, unknown>;
}

export interface FormDoc {
    rank: number;
    signature: number;
    parity: "even" | "odd";
}

export interface GroupDoc {
    free_rank: number;
    torsion: number[];
}

export interface ReportDoc {
    format: "rep-1";
    chi: number;
    h1: GroupDoc;
    b2: number;
    form: FormDoc | null;
    boundary: "closed" | { h1_free_rank: number; h1_torsion: number[] };
    pi1: { generators: string[]; relators: string[]; flag: string };
}

export interface MoveRecordDoc {
    move: string;
    params: Record<string, unknown>;
    preservation: string;
    deltas: { n1: number; n2: number; n3: number; chi: number };
}

export interface TraceStepDoc {
    index: number;
    line: string;
    kind: string;
    ok: boolean;
    record: MoveRecordDoc | null;
    report: ReportDoc | null;
    detail: string;
}

export interface TraceDoc {
    format: "trace-1";
    script: string;
    steps: TraceStepDoc[];
    final_report: ReportDoc | null;
}

export interface CatalogEntryDoc {
    name: string;
    metadata: Record<string, unknown>;
}

export interface CatalogDoc {
    entries: CatalogEntryDoc[];
    scripts: string[];
}

export interface MoveResponse {
    diagram: DiagramDoc;
    record: MoveRecordDoc;
    report: ReportDoc;
}

export interface LoadResponse {
    diagram: DiagramDoc;
    report: ReportDoc;
}

export interface StepResponse {
    trace: TraceDoc;
    diagram: DiagramDoc;
    report: ReportDoc;
    total_steps: number;
}
