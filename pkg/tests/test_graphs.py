import itertools

import networkx as nx
import pytest

from pebblebound.errors import CatalogError, MetricError
from pebblebound.graphs import (
    Graph, cartesian_product, catalog_graph, format_graph_text, metric, parse_graph_text,
    product_coordinates, product_label, resolve_graph, vertex_orbits,
)


@pytest.mark.parametrize("name,vertices,edges", [
    ("lemke", 8, 13),
    ("lemke1", 8, 12),
    ("lemke2", 8, 14),
    ("cycle:7", 7, 7),
    ("path:8", 8, 7),
    ("complete:12", 12, 66),
    ("complete-bipartite:4,4", 8, 16),
])
def test_catalog_sizes(name, vertices, edges):
    g = catalog_graph(name)
    assert g.vertex_count == vertices
    assert g.edge_count == edges


@pytest.mark.parametrize("name", ["petersen", "cycle:2", "path:0", "complete-bipartite:0,3"])
def test_catalog_rejects(name):
    with pytest.raises(CatalogError):
        catalog_graph(name)


def test_self_loop_rejected():
    with pytest.raises(CatalogError):
        Graph("loop", 2, frozenset({(1, 1)}))


def test_product_of_paths():
    product = cartesian_product(catalog_graph("path:2"), catalog_graph("path:3"))
    assert product.vertex_count == 6
    assert product.edge_count == 7
    assert product.name == "path:2*path:3"
    # (1, 1) ~ (1, 2) and (1, 1) ~ (2, 1)
    assert product.adjacent(product_label(1, 1, 3), product_label(1, 2, 3))
    assert product.adjacent(product_label(1, 1, 3), product_label(2, 1, 3))
    assert not product.adjacent(product_label(1, 1, 3), product_label(2, 2, 3))


def test_product_labels_round_trip():
    for i in range(1, 5):
        for j in range(1, 4):
            assert product_coordinates(product_label(i, j, 3), 3) == (i, j)


def test_distances():
    assert metric(catalog_graph("path:8")).diameter == 7
    assert metric(catalog_graph("lemke")).distance(8, 1) == 3
    assert metric(catalog_graph("complete:5")).diameter == 1


def test_disconnected_graph_has_no_metric():
    with pytest.raises(MetricError):
        metric(Graph("split", 4, frozenset({(1, 2), (3, 4)})))


def test_distance_matrix_is_read_only():
    dist = metric(catalog_graph("cycle:5"))
    with pytest.raises(ValueError):
        dist.distances[0, 1] = 9


@pytest.mark.parametrize("name,orbits", [
    ("complete:8", [(1, 2, 3, 4, 5, 6, 7, 8)]),
    ("path:8", [(1, 8), (2, 7), (3, 6), (4, 5)]),
    ("cycle:5", [(1, 2, 3, 4, 5)]),
    ("complete-bipartite:2,3", [(1, 2), (3, 4, 5)]),
])
def test_orbits(name, orbits):
    assert list(vertex_orbits(catalog_graph(name)).orbits) == orbits


def test_orbits_above_cap_are_singletons():
    partition = vertex_orbits(catalog_graph("cycle:6"), cap=4)
    assert partition.representatives == [1, 2, 3, 4, 5, 6]


def test_graph_text_round_trip(tmp_path):
    g = catalog_graph("lemke")
    path = tmp_path / "mine.txt"
    path.write_text(format_graph_text(g), encoding="utf-8")
    loaded = resolve_graph(str(path))
    assert loaded.name == "mine"
    assert loaded.edges == g.edges


def test_graph_text_edge_count_mismatch():
    with pytest.raises(CatalogError):
        parse_graph_text("3 3\n1 2\n2 3\n", "bad")


def test_product_distances_add_up():
    g, h = catalog_graph("path:3"), catalog_graph("cycle:4")
    product = metric(cartesian_product(g, h))
    dg, dh = metric(g), metric(h)
    for i, i2 in itertools.product(g.vertices, repeat=2):
        for j, j2 in itertools.product(h.vertices, repeat=2):
            assert product.distance(product_label(i, j, 4), product_label(i2, j2, 4)) == dg.distance(i, i2) + dh.distance(j, j2)


def test_small_products_are_familiar_graphs():
    square = cartesian_product(catalog_graph("path:2"), catalog_graph("path:2"))
    assert nx.is_isomorphic(square.nx_graph, catalog_graph("cycle:4").nx_graph)
    cube = cartesian_product(catalog_graph("path:2"), catalog_graph("cycle:4"))
    assert nx.is_isomorphic(cube.nx_graph, nx.hypercube_graph(3))
    gh = cartesian_product(catalog_graph("lemke"), catalog_graph("complete:3"))
    hg = cartesian_product(catalog_graph("complete:3"), catalog_graph("lemke"))
    assert gh.edge_count == 8 * 3 + 3 * 13
    assert nx.is_isomorphic(gh.nx_graph, hg.nx_graph)
