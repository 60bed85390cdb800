// Document types mirroring the engine's wire formats (kcd-1, rep-1,
// trace-1 and the move records). The UI never recomputes any of these.
export {};
