import shutil
import time

import pytest

from barnette.catalog import (
    FAMILY_RANGES,
    CatalogError,
    default_catalog_dir,
    instantiate_base_graph,
    load_catalog,
    validate_catalog,
)
from barnette.planar_core import op_equivalent
from barnette.bases import strip_graph


@pytest.fixture
def catalog_copy(tmp_path):
    for f in default_catalog_dir().glob("*.cat"):
        shutil.copy(f, tmp_path / f.name)
    return tmp_path


def _edit(path, old, new):
    text = path.read_text()
    assert old in text
    path.write_text(text.replace(old, new, 1))


def test_shipped_catalog_passes_quickly():
    start = time.perf_counter()
    rep = validate_catalog(load_catalog([default_catalog_dir()]))
    assert rep.ok, rep.failures[:3]
    assert time.perf_counter() - start < 10


def test_family_sizes(catalog):
    for k, top in FAMILY_RANGES["site"].items():
        assert len(catalog.family("site", k)) == top + 1


def test_exceptional_graphs_present(catalog):
    for name, size in (("P", 10), ("Q", 11)):
        entry = instantiate_base_graph(catalog, name)
        assert len(entry.graph) == size
    assert instantiate_base_graph(catalog, "A", 4).flavor == "minus"
    assert instantiate_base_graph(catalog, "H", 7).flavor == "compatible"


def test_parametric_graph_beyond_stored_range(catalog):
    entry = instantiate_base_graph(catalog, "G", 15)
    assert op_equivalent(entry.graph, strip_graph(15))


def test_dropping_a_marked_vertex_fails_tree_check(catalog_copy):
    # in site 2 1 the interior vertex 6 joins the two marked boundary vertices
    path = catalog_copy / "site_patterns.cat"
    head, rest = path.read_text().split("[pattern site 2 1]")
    block, tail = rest.split("[pattern", 1)
    marks = next(ln for ln in block.splitlines() if ln.startswith("D="))
    assert marks.split("=")[1].split() == ["1", "2", "6"]
    path.write_text(head + "[pattern site 2 1]" + block.replace(marks, "D=1 2") + "[pattern" + tail)
    rep = validate_catalog(load_catalog([catalog_copy]))
    failed = {(r.check, r.subject) for r in rep.failures}
    assert ("c-tree-arithmetic", "pattern site 2 1") in failed
    assert ("b-domination", "pattern site 2 1") not in failed


def test_index_out_of_range_raises(catalog_copy):
    _edit(catalog_copy / "site_patterns.cat", "[pattern site 4 2]", "[pattern site 4 3]")
    with pytest.raises(CatalogError, match="range|index"):
        load_catalog([catalog_copy])


def test_duplicate_pattern_raises(catalog_copy):
    path = catalog_copy / "site_patterns.cat"
    text = path.read_text()
    block = "[pattern site 2 1]" + text.split("[pattern site 2 1]")[1].split("[pattern")[0]
    path.write_text(text + "\n" + block)
    with pytest.raises(CatalogError, match="duplicate"):
        load_catalog([catalog_copy])


def test_family_split_across_files_raises(catalog_copy):
    path = catalog_copy / "site_patterns.cat"
    text = path.read_text()
    block = "[pattern site 2 1]" + text.split("[pattern site 2 1]")[1].split("[pattern")[0]
    path.write_text(text.replace(block, ""))
    (catalog_copy / "extra.cat").write_text(block)
    with pytest.raises(CatalogError):
        load_catalog([catalog_copy])


def test_missing_zero_pattern_raises(catalog_copy):
    _edit(catalog_copy / "site_patterns.cat", "[pattern site 3 0]", "[pattern site 3 9]")
    with pytest.raises(CatalogError):
        load_catalog([catalog_copy])


def test_error_names_file_and_line(catalog_copy):
    _edit(catalog_copy / "site_patterns.cat", "[pattern site 4 2]", "[pattern site 4 3]")
    with pytest.raises(CatalogError) as exc:
        load_catalog([catalog_copy])
    assert exc.value.path.endswith("site_patterns.cat")
    assert exc.value.line > 1


def test_wrong_marked_set_fails(catalog_copy):
    path = catalog_copy / "base_graphs.cat"
    text = path.read_text()
    block = text.split("[base J]")[1].split("[base")[0]
    marks = next(ln for ln in block.splitlines() if ln.startswith("marked="))
    _edit(path, marks, "marked=1")
    rep = validate_catalog(load_catalog([catalog_copy]))
    assert any(r.check == "marked-set" and r.subject == "base J" for r in rep.failures)


def test_unknown_section_raises(catalog_copy):
    (catalog_copy / "extra.cat").write_text("[widget 1]\n")
    with pytest.raises(CatalogError):
        load_catalog([catalog_copy])
