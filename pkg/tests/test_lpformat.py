import dataclasses

import pytest

from conftest import oracle_instance, published_instance
from pebblebound.errors import SerializationError
from pebblebound.lpformat import read_lp_summary, render_lp, write_listing, write_lp
from pebblebound.model import assemble_model


def test_rendering_is_deterministic():
    first = render_lp(assemble_model(published_instance("lemke", "complete:8")))
    second = render_lp(assemble_model(published_instance("lemke", "complete:8")))
    assert first == second


def test_summary_matches_model(tmp_path):
    model = assemble_model(oracle_instance("complete:3", "complete:3"))
    path = write_lp(model, tmp_path / "k3k3.lp")
    summary = read_lp_summary(path.read_text(encoding="utf-8"))
    assert summary["objective_terms"] == 9
    assert summary["constraints"] == model.constraint_count
    assert summary["variables"] == len(model.catalog)
    assert summary["binaries"] == len(model.catalog.names("binary"))


def test_sections_in_order():
    text = render_lp(assemble_model(oracle_instance("path:2", "path:2")))
    positions = [text.index(section) for section in ("Maximize", "Subject To", "General", "Binaries", "End")]
    assert positions == sorted(positions)
    assert text.endswith("End\n")


def test_lines_stay_bounded():
    text = render_lp(assemble_model(published_instance("lemke", "complete:8")))
    assert max(len(line) for line in text.splitlines()) <= 260


def test_duplicate_label_rejected():
    model = assemble_model(oracle_instance("path:2", "path:2"))
    doubled = dataclasses.replace(model, constraints=model.constraints + model.constraints[:1])
    with pytest.raises(SerializationError):
        render_lp(doubled)


def test_empty_objective_rejected():
    model = assemble_model(oracle_instance("path:2", "path:2"))
    with pytest.raises(SerializationError):
        render_lp(dataclasses.replace(model, objective=()))


def test_listing(tmp_path):
    model = assemble_model(oracle_instance("path:2", "path:2"))
    path = write_listing(model, tmp_path / "p2p2.listing.txt")
    lines = path.read_text(encoding="utf-8").splitlines()
    assert lines[0].startswith("# path:2*path:2 root (1, 1)")
    labelled = [line for line in lines if not line.startswith("#")]
    assert len(labelled) == model.constraint_count
    assert any(line.startswith("B1_G_1\t") for line in labelled)
