import pytest

from pebblebound.graphs import catalog_graph
from pebblebound.model import ProductInstance
from pebblebound.oracle import two_pebbling_tables
from pebblebound.reference import published_profiles
from pebblebound.solvers import probe_backends

requires_solver = pytest.mark.skipif(not probe_backends(), reason="no MILP solver on PATH")

_PROFILES = {}


def oracle_profile(name):
    if name not in _PROFILES:
        _PROFILES[name] = two_pebbling_tables(catalog_graph(name))
    return _PROFILES[name]


def oracle_instance(g, h, root=(1, 1)):
    """Product instance whose profiles come from the exhaustive oracle."""
    return ProductInstance(catalog_graph(g), catalog_graph(h), oracle_profile(g), oracle_profile(h), root)


def published_instance(g, h, root=(1, 1)):
    profiles = published_profiles()
    return ProductInstance(catalog_graph(g), catalog_graph(h), profiles[g], profiles[h], root)
