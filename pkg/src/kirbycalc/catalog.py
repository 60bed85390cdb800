"""
The shipped catalog: the source figures as kcd-1 diagram files, the band
and dual-loop data blocks their scripts need, and the proof scripts
connecting them.
"""

from __future__ import annotations

import json
from importlib import resources
from pathlib import Path

from .diagram import Diagram


class CatalogError(Exception):
    pass


class Catalog:
    """
    A directory of kcd-1 diagrams and kcs scripts with an index file.
    Entries validate on load; data blocks (bands, curves, loop traces) are
    carried in each entry's metadata and published in one flat namespace.
    """

    def __init__(self, root=None):
        if root is None:
            self._root = resources.files("kirbycalc") / "data"
        else:
            self._root = Path(root)
        self._cache = {}
        self._blocks = None

    def _index(self):
        try:
            text = (self._root / "index.json").read_text()
        except (FileNotFoundError, OSError):
            return {"entries": []}
        return json.loads(text)

    def list_entries(self):
        """(name, metadata) pairs for every catalog diagram."""
        out = []
        for entry in self._index().get("entries", []):
            out.append((entry["name"], dict(entry.get("metadata", {}))))
        return out

    def list_scripts(self):
        return list(self._index().get("scripts", []))

    def load_named(self, name) -> Diagram:
        if name in self._cache:
            return self._cache[name]
        path = self._root / ("%s.kcd" % name)
        try:
            text = path.read_text()
        except (FileNotFoundError, OSError):
            raise CatalogError("no catalog entry %r" % name) from None
        d = Diagram.loads(text)
        issues = d.validate()
        if issues:
            raise CatalogError("catalog entry %r is invalid: %s"
                               % (name, "; ".join(map(str, issues))))
        if d.metadata.get("closed"):
            d = d.replace(closed=True)
        self._cache[name] = d
        return d

    def load_script_text(self, name):
        path = self._root / ("%s.kcs" % name)
        try:
            return path.read_text()
        except (FileNotFoundError, OSError):
            raise CatalogError("no catalog script %r" % name) from None

    def data_block(self, ref):
        if self._blocks is None:
            blocks = {}
            for name, _meta in self.list_entries():
                d = self.load_named(name)
                for key, val in (d.metadata.get("data_blocks") or {}).items():
                    if key in blocks:
                        raise CatalogError("duplicate data block %r" % key)
                    blocks[key] = val
            self._blocks = blocks
        try:
            return self._blocks[ref]
        except KeyError:
            raise CatalogError("no data block %r" % ref) from None


def default_catalog() -> Catalog:
    return Catalog()
