import pytest

from kirbycalc.algebra import IntMatrix
from kirbycalc.catalog import Catalog, CatalogError
from kirbycalc.invariants import diff_reports, invariant_report
from kirbycalc.script import parse_script, replay


@pytest.fixture(scope="module")
def catalog():
    return Catalog()


def test_every_entry_validates(catalog):
    entries = catalog.list_entries()
    assert len(entries) >= 8
    for name, meta in entries:
        d = catalog.load_named(name)      # load_named validates
        assert d.metadata["name"] == name
        assert "paper_figure" in d.metadata


def test_unknown_entry(catalog):
    with pytest.raises(CatalogError):
        catalog.load_named("fig99")


def test_unknown_catalog_directory_is_empty(tmp_path):
    empty = Catalog(tmp_path)
    assert empty.list_entries() == []


def test_fig1_contents(catalog):
    d = catalog.load_named("fig1")
    assert d.two_handles() == ["k"]
    assert d.component("k").framing == -1
    assert d.writhe("k") == -3
    assert d.linking_matrix() == IntMatrix([[-1]])


def test_fig12_contents(catalog):
    d = catalog.load_named("fig12")
    assert d.component("kk").slice_flag
    assert d.component("alpha").framing == -1
    assert d.piercing_word("alpha") == (("kk", 1),)
    assert d.linking_number("alpha", "kk") == 1
    assert d.linking_number("c1", "c2") == 1
    assert (d.n3, d.n4) == (1, 1)


def test_fig33_contents(catalog):
    d = catalog.load_named("fig33")
    assert d.dotted() == ["h"]
    assert d.two_handles() == ["c1", "c2"]
    assert d.linking_number("c1", "c2") == 1
    assert (d.n3, d.n4) == (1, 1)


def test_expanded_and_unexpanded_q_agree(catalog):
    a = invariant_report(catalog.load_named("fig12"))
    b = invariant_report(catalog.load_named("fig14"))
    assert diff_reports(a, b) == []


def test_every_script_replays(catalog):
    names = catalog.list_scripts()
    assert "q-proof" in names
    for name in names:
        script = parse_script(catalog.load_script_text(name))
        trace = replay(script, catalog)
        assert trace.final is not None, name


def test_data_blocks_resolve(catalog):
    for ref in ("fig9-dual", "fig16-dual", "fig5-loop", "r3-loop",
                "delta-ride"):
        block = catalog.data_block(ref)
        assert block.get("type") in ("band", "curve", "loops", "site")
    with pytest.raises(CatalogError):
        catalog.data_block("no-such-block")
