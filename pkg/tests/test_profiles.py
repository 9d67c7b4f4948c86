import json

import pytest

from pebblebound.errors import ConfigurationError
from pebblebound.profiles import PebblingProfile, load_profiles, monotone_envelope, save_profiles
from pebblebound.reference import LEMKE_TWO_PEB, LEMKE_TWO_PEB_MON


def lemke_profile():
    return PebblingProfile.build("lemke", 8, 8, LEMKE_TWO_PEB)


def test_monotone_envelope_of_lemke_table():
    assert monotone_envelope(LEMKE_TWO_PEB) == LEMKE_TWO_PEB_MON


def test_lemke_exceptional_sets():
    profile = lemke_profile()
    assert not profile.has_two_pebbling_property
    assert profile.u_set == [0, 5]
    assert profile.u_mon_set == [0, 4, 5]
    assert profile.difference == {0: -1, 5: 2}
    assert profile.difference_mon == {0: -1, 4: 1, 5: 2}


def test_default_table_has_the_property():
    profile = PebblingProfile.build("complete:3", 3, 3)
    assert profile.two_peb == {1: 6, 2: 5, 3: 4}
    assert profile.has_two_pebbling_property
    assert profile.u_set == [0]
    assert profile.difference == {0: -1}


def test_pi_below_vertex_count_rejected():
    with pytest.raises(ConfigurationError):
        PebblingProfile.build("bogus", 5, 4)


def test_partial_table_rejected():
    with pytest.raises(ConfigurationError):
        PebblingProfile.build("bogus", 3, 3, {1: 6, 2: 5})


def test_save_and_load(tmp_path):
    path = tmp_path / "profiles.json"
    save_profiles([lemke_profile(), PebblingProfile.build("cycle:5", 5, 5)], path)
    loaded = load_profiles(path)
    assert set(loaded) == {"lemke", "cycle:5"}
    assert loaded["lemke"].two_peb_mon == LEMKE_TWO_PEB_MON
    assert loaded["cycle:5"].pi == 5


def test_schema_mismatch(tmp_path):
    path = tmp_path / "profiles.json"
    path.write_text(json.dumps({"schema_version": 99, "profiles": []}), encoding="utf-8")
    with pytest.raises(ConfigurationError):
        load_profiles(path)


def test_inconsistent_stored_envelope(tmp_path):
    entry = lemke_profile().to_dict()
    entry["two_peb_mon"]["4"] = 13
    path = tmp_path / "profiles.json"
    path.write_text(json.dumps({"schema_version": 1, "profiles": [entry]}), encoding="utf-8")
    with pytest.raises(ConfigurationError):
        load_profiles(path)
