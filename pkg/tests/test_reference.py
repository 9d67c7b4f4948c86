import pytest

from pebblebound.errors import CatalogError
from pebblebound.graphs import catalog_graph
from pebblebound.reference import (
    BASE_GRAPHS, TABLES, catalog_entry, graham_inconsistencies, published_profiles, reference_record,
)


def test_base_graph_catalog_matches_the_graphs():
    assert len(BASE_GRAPHS) == 13
    for entry in BASE_GRAPHS.values():
        g = catalog_graph(entry.catalog_id)
        assert (g.vertex_count, g.edge_count) == (entry.vertices, entry.edges)


def test_catalog_entry_lookup():
    assert catalog_entry("K44").catalog_id == "complete-bipartite:4,4"
    assert catalog_entry("cycle:7").key == "C7"
    with pytest.raises(CatalogError):
        catalog_entry("C9")


def test_path_profiles_use_the_multiplied_values():
    profiles = published_profiles()
    assert profiles["path:8"].pi == 128
    assert profiles["path:8"].printed_pi == 256
    assert profiles["path:8"].notes
    assert profiles["complete-bipartite:4,4"].pi == 8
    assert profiles["lemke"].u_set == [0, 5]
    assert profiles["complete:8"].has_two_pebbling_property


def test_only_the_largest_path_square_is_inconsistent():
    assert [r.label for r in graham_inconsistencies()] == ["P12 x P12"]


def test_reference_record_either_order():
    record = reference_record("lemke", "complete:8")
    assert record.bound == 64
    assert record.verified
    assert reference_record("complete:8", "lemke") == record
    assert reference_record("lemke", "petersen") is None


def test_tables_hold_every_pair_once():
    seen = set()
    for table, records in TABLES.items():
        for record in records:
            assert record.table == table
            pair = frozenset((record.g, record.h))
            assert pair not in seen
            seen.add(pair)
    assert len(seen) == 6 + 15 + 15 + 15 + 25 + 15
