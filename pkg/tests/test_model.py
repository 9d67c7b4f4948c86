import itertools
import json

import pytest

from conftest import oracle_instance, published_instance
from pebblebound.errors import ConfigurationError, FeasibilityError
from pebblebound.feasibility import check_feasibility, derive_assignment
from pebblebound.graphs import cartesian_product, catalog_graph
from pebblebound.model import (
    ConstraintEnumerationPolicy, ProductInstance, assemble_model, derive_parameters, load_policy,
)
from pebblebound.oracle import enumerate_unsolvable
from pebblebound.profiles import PebblingProfile
from pebblebound.reference import published_profiles

PEBBLING_FAMILIES = {"A1", "A2", "A3", "A4", "A5", "A6", "B1", "B2", "B3"}


def _counts(inst, placed):
    """Label-ordered counts from {(i, j): pebbles}."""
    counts = [0] * (inst.g.vertex_count * inst.h.vertex_count)
    for (i, j), value in placed.items():
        counts[inst.label(i, j) - 1] = value
    return counts


def test_lemke_square_parameters():
    params = derive_parameters(published_instance("lemke", "lemke"))
    assert params.big_m == 128
    assert params.saturation_top("G") == 7
    assert list(params.set_counts["G"]) == list(range(8))
    assert params.support_levels("G") == [0, 4, 5]


def test_trivial_upper_bound():
    model = assemble_model(published_instance("lemke", "lemke"))
    assert model.trivial_upper_bound == 112


def test_root_outside_product():
    with pytest.raises(ConfigurationError):
        published_instance("lemke", "complete:8", root=(9, 1))


def test_profile_size_must_match_graph():
    inst = published_instance("lemke", "complete:8")
    with pytest.raises(ConfigurationError):
        ProductInstance(inst.g, inst.h, inst.g_profile, PebblingProfile.build("complete:3", 3, 3))


def test_n2peb_reads_exceptional_support():
    inst = published_instance("lemke", "complete:8")
    # five occupied vertices of L in slice 2, two pebbles each
    counts = _counts(inst, {(v, 2): 2 for v in range(1, 6)})
    values = derive_assignment(inst, counts)
    assert values["support_G_2"] == 5
    assert values["n2peb_G_2"] == 14
    assert values["n2pebmon_G_2"] == 14
    assert values["supportIs_G_2_5"] == 1
    assert values["supportIs_G_2_0"] == 0


def test_stack_values():
    inst = ProductInstance(catalog_graph("lemke"), catalog_graph("complete:3"),
                           published_profiles()["lemke"], PebblingProfile.build("complete:3", 3, 3))
    values = derive_assignment(inst, _counts(inst, {(2, 1): 3, (3, 1): 2}))
    assert values["ct_G_1"] == 5
    assert values["support_G_1"] == 2
    assert values["stack_G_1_1"] == 2
    assert values["goodStack_G_1_1"] == 1


def test_zero_configuration_is_feasible():
    inst = published_instance("lemke", "complete:8")
    model = assemble_model(inst)
    zero = derive_assignment(inst, [0] * 64, model.params)
    assert check_feasibility(model, zero) == []


def test_full_root_slice_violates_b1():
    inst = oracle_instance("path:2", "path:2")
    model = assemble_model(inst)
    values = derive_assignment(inst, _counts(inst, {(2, 1): 2}))
    assert "B1_G_1" in check_feasibility(model, values)


def test_incomplete_assignment_rejected():
    model = assemble_model(oracle_instance("path:2", "path:2"))
    with pytest.raises(FeasibilityError):
        check_feasibility(model, {"c_1_1": 0})


def test_defining_constraints_hold_for_small_configurations():
    inst = oracle_instance("path:2", "path:3")
    model = assemble_model(inst)
    ceiling = inst.g_profile.pi * inst.h_profile.pi - 1
    checked = 0
    for counts in itertools.product(range(3), repeat=6):
        if sum(counts) > ceiling:
            continue
        violated = check_feasibility(model, derive_assignment(inst, counts, model.params))
        assert [label for label in violated if label.split("_")[0] not in PEBBLING_FAMILIES] == []
        checked += 1
    assert checked > 100


def test_policy_validation(tmp_path):
    with pytest.raises(ConfigurationError):
        ConstraintEnumerationPolicy(a2_max_eta=-1)
    with pytest.raises(ConfigurationError):
        ConstraintEnumerationPolicy.from_dict({"a9_max": 1})
    path = tmp_path / "policy.json"
    path.write_text(json.dumps({"a5_max_star": 2}), encoding="utf-8")
    policy = load_policy(path)
    assert policy.a5_max_star == 2
    assert policy.digest != ConstraintEnumerationPolicy().digest


def test_policy_caps_change_the_model():
    inst = published_instance("lemke", "complete:8")
    small = assemble_model(inst, ConstraintEnumerationPolicy(a2_max_set_size=1))
    large = assemble_model(inst, ConstraintEnumerationPolicy(a2_max_set_size=2))
    assert large.constraint_count > small.constraint_count
    none = assemble_model(inst, ConstraintEnumerationPolicy(a2_max_set_size=0))
    assert "A2" not in none.family_counts()


def test_both_orientations_present():
    counts = assemble_model(published_instance("lemke", "complete:8")).family_counts()
    for family in ("A1", "A4", "B1", "B2"):
        assert counts[family] == 2


def _assert_unsolvable_configurations_feasible(inst, largest_first, limit):
    product = cartesian_product(inst.g, inst.h)
    ceiling = inst.g_profile.pi * inst.h_profile.pi
    for root in itertools.product(inst.g.vertices, inst.h.vertices):
        rooted = inst.with_root(root)
        model = assemble_model(rooted)
        configs = enumerate_unsolvable(product, rooted.label(*root), ceiling, limit, largest_first)
        assert configs
        for config in configs:
            values = derive_assignment(rooted, config.counts, model.params)
            assert check_feasibility(model, values) == [], (root, config.counts)


@pytest.mark.parametrize("g,h", [
    ("path:2", "path:2"),
    ("path:2", "path:3"),
    ("complete:3", "path:2"),
])
def test_unsolvable_configurations_are_feasible(g, h):
    _assert_unsolvable_configurations_feasible(oracle_instance(g, h), largest_first=True, limit=200)


@pytest.mark.slow
@pytest.mark.parametrize("g,h", [("cycle:4", "path:2"), ("path:3", "path:3")])
def test_unsolvable_configurations_are_feasible_larger(g, h):
    _assert_unsolvable_configurations_feasible(oracle_instance(g, h), largest_first=False, limit=500)
