"""
pebblebound/graphs.py
Labeled simple graphs, Cartesian products, distances, automorphism orbits and
the base-graph catalog.

Vertices are labeled 1..n. A product vertex (i, j) of G □ H carries the
single label (i - 1) * |H| + j.
"""

import re
import logging
import itertools
from dataclasses import dataclass, field
from functools import cached_property, lru_cache
from pathlib import Path
from typing import Dict, FrozenSet, List, Optional, Tuple

import networkx as nx
import numpy as np
from networkx.algorithms.isomorphism import GraphMatcher

from pebblebound.constants import AUTOMORPHISM_LIMIT, ORBIT_VERTEX_CAP
from pebblebound.errors import CatalogError, MetricError


Edge = Tuple[int, int]

# Edge lists transcribed from the drawings of the three minimal 8-vertex
# graphs without the 2-pebbling property.
LEMKE_EDGES: Tuple[Edge, ...] = (
    (8, 6), (6, 3), (3, 1), (1, 2), (2, 4), (4, 7), (7, 8),
    (8, 5), (5, 3), (4, 6), (5, 4), (4, 8), (7, 3),
)
LEMKE1_EDGES: Tuple[Edge, ...] = (
    (8, 6), (6, 3), (3, 1), (1, 2), (2, 4), (7, 8),
    (8, 5), (5, 3), (5, 4), (4, 8), (7, 3), (3, 2),
)
LEMKE2_EDGES: Tuple[Edge, ...] = (
    (8, 5), (5, 3), (3, 1), (1, 2), (2, 4), (4, 7), (7, 8),
    (6, 7), (4, 5), (5, 6), (6, 8), (8, 4), (7, 3), (3, 6),
)

_LEMKE_FAMILY = {"lemke": LEMKE_EDGES, "lemke1": LEMKE1_EDGES, "lemke2": LEMKE2_EDGES}
_PARAM_PATTERN = re.compile(r"^(cycle|path|complete):(\d+)$")
_BIPARTITE_PATTERN = re.compile(r"^complete-bipartite:(\d+),(\d+)$")


@dataclass(frozen=True)
class Graph:
    """Simple undirected graph on vertices 1..vertex_count."""
    name: str
    vertex_count: int
    edges: FrozenSet[Edge] = field(default_factory=frozenset)

    def __post_init__(self):
        if self.vertex_count < 1:
            raise CatalogError(f"{self.name}: a graph needs at least one vertex")
        normalized = set()
        for u, v in self.edges:
            if u == v:
                raise CatalogError(f"{self.name}: self-loop at vertex {u}")
            if not (1 <= u <= self.vertex_count and 1 <= v <= self.vertex_count):
                raise CatalogError(f"{self.name}: edge ({u}, {v}) leaves 1..{self.vertex_count}")
            normalized.add((min(u, v), max(u, v)))
        object.__setattr__(self, "edges", frozenset(normalized))

    @property
    def vertices(self) -> range:
        return range(1, self.vertex_count + 1)

    @property
    def edge_count(self) -> int:
        return len(self.edges)

    @cached_property
    def adjacency(self) -> Tuple[Tuple[int, ...], ...]:
        """adjacency[v] lists the neighbors of v in increasing order (index 0 unused)."""
        table: List[List[int]] = [[] for _ in range(self.vertex_count + 1)]
        for u, v in self.edges:
            table[u].append(v)
            table[v].append(u)
        return tuple(tuple(sorted(row)) for row in table)

    def neighbors(self, v: int) -> Tuple[int, ...]:
        return self.adjacency[v]

    def degree(self, v: int) -> int:
        return len(self.adjacency[v])

    def adjacent(self, u: int, v: int) -> bool:
        return (min(u, v), max(u, v)) in self.edges

    @cached_property
    def nx_graph(self) -> nx.Graph:
        graph = nx.Graph()
        graph.add_nodes_from(self.vertices)
        graph.add_edges_from(sorted(self.edges))
        return graph

    def __str__(self) -> str:
        return self.name


@dataclass(frozen=True)
class MetricData:
    """All-pairs hop distances, stored 0-based in a read-only matrix."""
    distances: np.ndarray
    diameter: int

    def distance(self, u: int, v: int) -> int:
        return int(self.distances[u - 1, v - 1])


@dataclass(frozen=True)
class OrbitPartition:
    """Vertex classes under the automorphism group, each sorted, classes ordered by minimum."""
    orbits: Tuple[Tuple[int, ...], ...]

    @property
    def representatives(self) -> List[int]:
        return [orbit[0] for orbit in self.orbits]

    def orbit_of(self, v: int) -> Tuple[int, ...]:
        for orbit in self.orbits:
            if v in orbit:
                return orbit
        raise KeyError(v)


def catalog_graph(name: str) -> Graph:
    """Build a base graph from its catalog identifier."""
    key = name.strip().lower()
    if key in _LEMKE_FAMILY:
        return Graph(key, 8, frozenset(_LEMKE_FAMILY[key]))

    match = _PARAM_PATTERN.match(key)
    if match:
        kind, n = match.group(1), int(match.group(2))
        if n < 1 or (kind == "cycle" and n < 3):
            raise CatalogError(f"'{name}': size {n} is too small for a {kind}")
        if kind == "path":
            edges = {(i, i + 1) for i in range(1, n)}
        elif kind == "cycle":
            edges = {(i, i + 1) for i in range(1, n)} | {(1, n)}
        else:
            edges = set(itertools.combinations(range(1, n + 1), 2))
        return Graph(key, n, frozenset(edges))

    match = _BIPARTITE_PATTERN.match(key)
    if match:
        a, b = int(match.group(1)), int(match.group(2))
        if a < 1 or b < 1:
            raise CatalogError(f"'{name}': both sides of a complete bipartite graph need a vertex")
        edges = {(i, a + j) for i in range(1, a + 1) for j in range(1, b + 1)}
        return Graph(key, a + b, frozenset(edges))

    raise CatalogError(
        f"Unknown graph '{name}'. Expected lemke, lemke1, lemke2, cycle:n, path:n, "
        f"complete:n, complete-bipartite:a,b or a graph text file."
    )


def parse_graph_text(text: str, name: str) -> Graph:
    """Parse the plain format: header "n m", then m lines "u v" (1-based)."""
    lines = [line.split() for line in text.splitlines() if line.strip() and not line.lstrip().startswith('#')]
    if not lines or len(lines[0]) != 2:
        raise CatalogError(f"{name}: missing 'n m' header line")
    try:
        n, m = int(lines[0][0]), int(lines[0][1])
        edges = [(int(u), int(v)) for u, v in lines[1:]]
    except ValueError as exc:
        raise CatalogError(f"{name}: malformed graph text ({exc})") from exc
    if len(edges) != m:
        raise CatalogError(f"{name}: header announces {m} edges, found {len(edges)}")
    if len({(min(u, v), max(u, v)) for u, v in edges}) != m:
        raise CatalogError(f"{name}: duplicate edges")
    return Graph(name, n, frozenset(edges))


def format_graph_text(g: Graph) -> str:
    lines = [f"{g.vertex_count} {g.edge_count}"]
    lines.extend(f"{u} {v}" for u, v in sorted(g.edges))
    return "\n".join(lines) + "\n"


def resolve_graph(spec: str) -> Graph:
    """Catalog identifier, or the path of a graph text file."""
    path = Path(spec)
    if path.is_file():
        return parse_graph_text(path.read_text(encoding='utf-8'), path.stem)
    return catalog_graph(spec)


def product_label(i: int, j: int, h_count: int) -> int:
    return (i - 1) * h_count + j


def product_coordinates(label: int, h_count: int) -> Tuple[int, int]:
    return (label - 1) // h_count + 1, (label - 1) % h_count + 1


def cartesian_product(g: Graph, h: Graph) -> Graph:
    """G □ H with vertex (i, j) relabeled to (i - 1) * |H| + j."""
    product = nx.cartesian_product(g.nx_graph, h.nx_graph)
    n_h = h.vertex_count
    edges = {
        (product_label(*a, n_h), product_label(*b, n_h))
        for a, b in product.edges()
    }
    return Graph(f"{g.name}*{h.name}", g.vertex_count * n_h, frozenset(edges))


@lru_cache(maxsize=256)
def metric(g: Graph) -> MetricData:
    """All-pairs shortest hop counts."""
    if not nx.is_connected(g.nx_graph):
        raise MetricError(f"{g.name} is disconnected; distances are undefined")
    n = g.vertex_count
    distances = np.zeros((n, n), dtype=np.int64)
    for source, lengths in nx.all_pairs_shortest_path_length(g.nx_graph):
        for target, hops in lengths.items():
            distances[source - 1, target - 1] = hops
    distances.setflags(write=False)
    return MetricData(distances=distances, diameter=int(distances.max()))


def automorphisms(g: Graph, limit: int = AUTOMORPHISM_LIMIT) -> Optional[List[Tuple[int, ...]]]:
    """All automorphisms as tuples p with p[v - 1] = image of v, or None above `limit`."""
    matcher = GraphMatcher(g.nx_graph, g.nx_graph)
    found = list(itertools.islice(matcher.isomorphisms_iter(), limit + 1))
    if len(found) > limit:
        return None
    perms = [tuple(mapping[v] for v in g.vertices) for mapping in found]
    return sorted(perms)


def _profile(g: Graph, dist: MetricData, v: int) -> Tuple[int, Tuple[int, ...]]:
    return g.degree(v), tuple(sorted(dist.distances[v - 1].tolist()))


def _exchanged(g: Graph, u: int, v: int) -> bool:
    """True if some automorphism maps u to v."""
    marked_u = g.nx_graph.copy()
    marked_v = g.nx_graph.copy()
    nx.set_node_attributes(marked_u, {w: w == u for w in g.vertices}, "mark")
    nx.set_node_attributes(marked_v, {w: w == v for w in g.vertices}, "mark")
    return nx.is_isomorphic(marked_u, marked_v, node_match=lambda a, b: a["mark"] == b["mark"])


def vertex_orbits(g: Graph, cap: int = ORBIT_VERTEX_CAP) -> OrbitPartition:
    """Orbits of the automorphism group; singletons above `cap` vertices."""
    if g.vertex_count > cap:
        logging.debug(f"{g.name}: {g.vertex_count} vertices above orbit cap {cap}, no symmetry pruning")
        return OrbitPartition(tuple((v,) for v in g.vertices))

    classes: Dict[int, int] = {v: v for v in g.vertices}
    perms = automorphisms(g)
    if perms is not None:
        # the images of v under the whole group are exactly its orbit
        for v in g.vertices:
            classes[v] = min(perm[v - 1] for perm in perms)
    else:
        dist = metric(g)
        representatives: List[int] = []
        for v in g.vertices:
            for rep in representatives:
                if _profile(g, dist, rep) == _profile(g, dist, v) and _exchanged(g, rep, v):
                    classes[v] = rep
                    break
            else:
                representatives.append(v)

    grouped: Dict[int, List[int]] = {}
    for v in g.vertices:
        grouped.setdefault(classes[v], []).append(v)
    orbits = sorted((tuple(sorted(members)) for members in grouped.values()), key=lambda orbit: orbit[0])
    return OrbitPartition(tuple(orbits))
