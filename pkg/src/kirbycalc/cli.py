"""
The `kc` command line tool and the local HTTP service the UI talks to.

Exit codes: 0 ok, 2 parse error, 3 validation failure, 4 illegal move,
5 failed assertion, 10 internal error.
"""

from __future__ import annotations

import argparse
import json
import sys
from http.server import BaseHTTPRequestHandler, ThreadingHTTPServer
from pathlib import Path

from . import moves
from .catalog import Catalog, CatalogError
from .diagram import Diagram, DiagramError
from .invariants import invariant_report, diff_reports
from .moves import IllegalMove
from .script import (
    ReplayError, ScriptError, parse_script, replay, _band_from_ref,
    _site_from_ref, _trace_from_block, _apply_isotopy,
)

EXIT_OK = 0
EXIT_PARSE = 2
EXIT_VALIDATION = 3
EXIT_ILLEGAL_MOVE = 4
EXIT_ASSERTION = 5
EXIT_INTERNAL = 10


class CliError(Exception):
    def __init__(self, code, message):
        super().__init__(message)
        self.code = code


def _load_diagram(path):
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise CliError(EXIT_PARSE, "cannot read %s: %s" % (path, exc))
    try:
        return Diagram.loads(text)
    except DiagramError as exc:
        raise CliError(EXIT_PARSE, "cannot parse %s: %s" % (path, exc))


def _resolve(path_or_name, catalog):
    if Path(path_or_name).exists():
        return _load_diagram(path_or_name)
    try:
        return catalog.load_named(path_or_name)
    except CatalogError as exc:
        raise CliError(EXIT_PARSE, str(exc))


def _emit(doc, fmt, out):
    if fmt == "structured":
        out.write(json.dumps(doc, indent=1, sort_keys=True) + "\n")
    else:
        _emit_text(doc, out)


def _emit_text(doc, out, indent=""):
    if isinstance(doc, dict):
        for key in doc:
            val = doc[key]
            if isinstance(val, (dict, list)):
                out.write("%s%s:\n" % (indent, key))
                _emit_text(val, out, indent + "  ")
            else:
                out.write("%s%s: %s\n" % (indent, key, val))
    elif isinstance(doc, list):
        for val in doc:
            if isinstance(val, (dict, list)):
                _emit_text(val, out, indent + "  ")
                out.write("\n" if indent == "" else "")
            else:
                out.write("%s- %s\n" % (indent, val))
    else:
        out.write("%s%s\n" % (indent, doc))


def cmd_validate(args, catalog, out):
    d = _resolve(args.diagram, catalog)
    issues = d.validate()
    if issues:
        _emit({"valid": False,
               "violations": [{"code": i.code, "location": i.location,
                               "message": i.message} for i in issues]},
              args.format, out)
        return EXIT_VALIDATION
    _emit({"valid": True, "violations": []}, args.format, out)
    return EXIT_OK


def cmd_invariants(args, catalog, out):
    d = _resolve(args.diagram, catalog)
    issues = d.validate()
    if issues:
        raise CliError(EXIT_VALIDATION,
                       "; ".join(str(i) for i in issues))
    _emit(invariant_report(d).to_doc(), args.format, out)
    return EXIT_OK


def _move_from_args(d, args, catalog):
    name = args.move
    p = args.params
    if name == "slide":
        bandref = p[2] if len(p) > 2 else "-"
        eps = int(p[3]) if len(p) > 3 else 1
        band = _band_from_ref(bandref, eps, catalog)
        return moves.slide_2_over_2(d, p[0], p[1], band)
    if name == "slide1":
        return moves.slide_over_1handle(d, p[0], p[1], int(p[2]), int(p[3]))
    if name == "blowup":
        site = () if len(p) < 2 or p[1] == "-" else _site_from_ref(p[1], catalog)
        return moves.blow_up(d, int(p[0]), site)
    if name == "blowdown":
        return moves.blow_down(d, p[0])
    if name == "cancel12":
        return moves.cancel_1_2(d, p[0], p[1])
    if name == "cancel23":
        return moves.cancel_2_3(d, p[0])
    if name == "dotzero":
        return moves.dot_zero_exchange(d, p[0])
    if name == "gluck":
        return moves.gluck_flip(d, p[0])
    if name == "surger":
        block = catalog.data_block(p[0])
        return moves.surger_loop(d, block.get("id", "g"),
                                 _trace_from_block(block.get("trace", ())),
                                 int(p[1]), meridian_id=block.get("meridian"))
    if name == "isotopy":
        return _apply_isotopy(d, p[0], tuple(p[1:]))
    if name == "close":
        return moves.mark_closed(d)
    raise CliError(EXIT_PARSE, "unknown move %r" % name)


def cmd_apply(args, catalog, out):
    d = _resolve(args.diagram, catalog)
    try:
        new, rec = _move_from_args(d, args, catalog)
    except IllegalMove as exc:
        raise CliError(EXIT_ILLEGAL_MOVE, str(exc))
    target = args.output or args.diagram
    Path(target).write_text(new.dumps())
    _emit({"applied": rec.to_doc(), "output": str(target)}, args.format, out)
    return EXIT_OK


def cmd_run(args, catalog, out):
    try:
        text = Path(args.script).read_text()
    except OSError as exc:
        raise CliError(EXIT_PARSE, "cannot read %s: %s" % (args.script, exc))
    try:
        script = parse_script(text)
    except ScriptError as exc:
        raise CliError(EXIT_PARSE, str(exc))
    try:
        trace = replay(script, catalog)
    except ReplayError as exc:
        code = (EXIT_ASSERTION if "assertion" in exc.reason
                else EXIT_ILLEGAL_MOVE)
        raise CliError(code, str(exc))
    doc = trace.to_doc()
    if args.format == "text":
        for s in trace.steps:
            out.write("ok %3d  %s\n" % (s.index, s.line))
        out.write("final report:\n")
        _emit(trace.final_report.to_doc(), "text", out)
    else:
        _emit(doc, "structured", out)
    return EXIT_OK


def cmd_diff(args, catalog, out):
    a = _resolve(args.diagram_a, catalog)
    b = _resolve(args.diagram_b, catalog)
    diffs = diff_reports(invariant_report(a), invariant_report(b))
    _emit({"equal": not diffs, "differences": diffs}, args.format, out)
    return EXIT_OK if not diffs else EXIT_ASSERTION


def cmd_catalog(args, catalog, out):
    entries = [{"name": n, "metadata": m} for n, m in catalog.list_entries()]
    _emit({"entries": entries, "scripts": catalog.list_scripts()},
          args.format, out)
    return EXIT_OK


# ---------------------------------------------------------------------------
# HTTP service
# ---------------------------------------------------------------------------

class Session:
    """Single-writer session: current diagram plus an undo stack of exact
    serializations."""

    def __init__(self, catalog, ui_dir=None):
        self.catalog = catalog
        self.current = None
        self.undo_stack = []
        self.ui_dir = ui_dir

    def load(self, name):
        self.current = self.catalog.load_named(name)
        self.undo_stack = []
        return self.current

    def load_text(self, text):
        self.current = Diagram.loads(text)
        self.undo_stack = []
        return self.current

    def apply(self, move, params):
        if self.current is None:
            raise IllegalMove("no diagram loaded")
        snapshot = (self.current.dumps(), self.current.closed)
        ns = argparse.Namespace(move=move, params=params)
        new, rec = _move_from_args(self.current, ns, self.catalog)
        self.undo_stack.append(snapshot)
        self.current = new
        return new, rec

    def undo(self):
        if not self.undo_stack:
            raise IllegalMove("nothing to undo")
        text, closed = self.undo_stack.pop()
        self.current = Diagram.loads(text).replace(closed=closed)
        return self.current


def make_handler(session):
    class Handler(BaseHTTPRequestHandler):
        def log_message(self, *a):
            pass

        def _reply(self, code, doc):
            body = json.dumps(doc, sort_keys=True).encode()
            self.send_response(code)
            self.send_header("Content-Type", "application/json")
            self.send_header("Content-Length", str(len(body)))
            self.send_header("Access-Control-Allow-Origin", "*")
            self.end_headers()
            self.wfile.write(body)

        def _body(self):
            length = int(self.headers.get("Content-Length") or 0)
            if not length:
                return {}
            return json.loads(self.rfile.read(length))

        def _serve_static(self):
            rel = self.path.lstrip("/") or "index.html"
            root = Path(session.ui_dir).resolve()
            target = (root / rel).resolve()
            if root not in target.parents and target != root:
                self._reply(404, {"error": "outside ui directory"})
                return
            if not target.is_file():
                self._reply(404, {"error": "no such file"})
                return
            types = {".html": "text/html", ".js": "text/javascript",
                     ".css": "text/css", ".svg": "image/svg+xml"}
            body = target.read_bytes()
            self.send_response(200)
            self.send_header("Content-Type",
                             types.get(target.suffix, "application/octet-stream"))
            self.send_header("Content-Length", str(len(body)))
            self.end_headers()
            self.wfile.write(body)

        def do_OPTIONS(self):
            self.send_response(204)
            self.send_header("Access-Control-Allow-Origin", "*")
            self.send_header("Access-Control-Allow-Methods",
                             "GET, POST, OPTIONS")
            self.send_header("Access-Control-Allow-Headers", "Content-Type")
            self.end_headers()

        def do_GET(self):
            try:
                if not self.path.startswith("/api/") and session.ui_dir:
                    self._serve_static()
                    return
                if self.path == "/api/catalog":
                    entries = [{"name": n, "metadata": m}
                               for n, m in session.catalog.list_entries()]
                    self._reply(200, {"entries": entries,
                                      "scripts": session.catalog.list_scripts()})
                elif self.path == "/api/diagram":
                    if session.current is None:
                        self._reply(404, {"error": "no diagram loaded"})
                    else:
                        self._reply(200, session.current.to_kcd())
                elif self.path == "/api/invariants":
                    if session.current is None:
                        self._reply(404, {"error": "no diagram loaded"})
                    else:
                        self._reply(200,
                                    invariant_report(session.current).to_doc())
                elif self.path.startswith("/api/script/"):
                    name = self.path.rsplit("/", 1)[1]
                    self._reply(200, {"name": name,
                                      "text": session.catalog
                                      .load_script_text(name)})
                else:
                    self._reply(404, {"error": "no such endpoint"})
            except (CatalogError, DiagramError) as exc:
                self._reply(400, {"error": str(exc)})
            except Exception as exc:   # pragma: no cover - defensive
                self._reply(500, {"error": str(exc)})

        def do_POST(self):
            try:
                body = self._body()
                if self.path == "/api/diagram":
                    if "name" in body:
                        d = session.load(body["name"])
                    else:
                        d = session.load_text(json.dumps(body["kcd"]))
                    self._reply(200, {"diagram": d.to_kcd(),
                                      "report": invariant_report(d).to_doc()})
                elif self.path == "/api/move":
                    new, rec = session.apply(body["move"],
                                             body.get("params", []))
                    self._reply(200, {"diagram": new.to_kcd(),
                                      "record": rec.to_doc(),
                                      "report":
                                      invariant_report(new).to_doc()})
                elif self.path == "/api/undo":
                    d = session.undo()
                    self._reply(200, {"diagram": d.to_kcd(),
                                      "report": invariant_report(d).to_doc()})
                elif self.path == "/api/script/step":
                    out = _script_step(session, body)
                    self._reply(200, out)
                else:
                    self._reply(404, {"error": "no such endpoint"})
            except (IllegalMove, DiagramError, CatalogError, ScriptError,
                    ReplayError, KeyError, ValueError) as exc:
                self._reply(400, {"error": str(exc)})
            except Exception as exc:   # pragma: no cover - defensive
                self._reply(500, {"error": str(exc)})

    return Handler


def _script_step(session, body):
    """Replay a catalog script up to the given step index and land the
    session on the resulting state."""
    name = body["script"]
    index = int(body.get("index", -1))
    script = parse_script(session.catalog.load_script_text(name))
    steps = script.steps if index < 0 else script.steps[:index + 1]
    partial = type(script)(script.name, script.initial, steps)
    trace = replay(partial, session.catalog)
    session.current = trace.final
    session.undo_stack = []
    return {"trace": trace.to_doc(),
            "diagram": trace.final.to_kcd(),
            "report": trace.final_report.to_doc(),
            "total_steps": len(script.steps)}


def cmd_serve(args, catalog, out):
    session = Session(catalog, ui_dir=args.ui)
    server = ThreadingHTTPServer((args.host, args.port),
                                 make_handler(session))
    out.write("kc serve: listening on http://%s:%d\n"
              % (args.host, server.server_port))
    out.flush()
    try:
        server.serve_forever()
    except KeyboardInterrupt:
        pass
    return EXIT_OK


def build_parser():
    parser = argparse.ArgumentParser(
        prog="kc", description="Kirby calculus engine")
    parser.add_argument("--catalog", help="catalog directory",
                        default=None)
    parser.add_argument("--format", choices=("text", "structured"),
                        default="text")
    sub = parser.add_subparsers(dest="command", required=True)

    v = sub.add_parser("validate", help="check a diagram file")
    v.add_argument("diagram")
    v.set_defaults(func=cmd_validate)

    i = sub.add_parser("invariants", help="invariant report of a diagram")
    i.add_argument("diagram")
    i.set_defaults(func=cmd_invariants)

    a = sub.add_parser("apply", help="apply one move to a diagram file")
    a.add_argument("diagram")
    a.add_argument("move")
    a.add_argument("params", nargs="*")
    a.add_argument("--output", "-o", default=None)
    a.set_defaults(func=cmd_apply)

    r = sub.add_parser("run", help="replay a move script")
    r.add_argument("script")
    r.set_defaults(func=cmd_run)

    d = sub.add_parser("diff", help="compare two diagrams' reports")
    d.add_argument("diagram_a")
    d.add_argument("diagram_b")
    d.set_defaults(func=cmd_diff)

    c = sub.add_parser("catalog", help="list catalog entries")
    c.set_defaults(func=cmd_catalog)

    s = sub.add_parser("serve", help="run the local HTTP service")
    s.add_argument("--port", type=int, default=7311)
    s.add_argument("--host", default="127.0.0.1")
    s.add_argument("--ui", default=None,
                   help="also serve this directory of static UI files")
    s.set_defaults(func=cmd_serve)
    return parser


def main(argv=None, out=None):
    out = out or sys.stdout
    parser = build_parser()
    args = parser.parse_args(argv)
    catalog = Catalog(args.catalog)
    try:
        return args.func(args, catalog, out)
    except CliError as exc:
        out.write("error: %s\n" % exc)
        return exc.code
    except (DiagramError, ScriptError) as exc:
        out.write("error: %s\n" % exc)
        return EXIT_PARSE
    except IllegalMove as exc:
        out.write("error: %s\n" % exc)
        return EXIT_ILLEGAL_MOVE
    except Exception as exc:
        out.write("internal error: %s\n" % exc)
        return EXIT_INTERNAL


if __name__ == "__main__":
    sys.exit(main())
