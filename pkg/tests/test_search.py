from fractions import Fraction

import pytest

from conftest import oracle_instance, published_instance, requires_solver
from pebblebound import solvers
from pebblebound.constants import GAPPED_TIME_LIMIT
from pebblebound.errors import BackendError, ConfigurationError
from pebblebound.graphs import cartesian_product
from pebblebound.model import assemble_model
from pebblebound.oracle import pebbling_number
from pebblebound.search import (
    RootSolve, SearchReport, SearchState, candidate_roots, exhaustive_baseline, parse_gap_schedule,
    run_algorithm1,
)
from pebblebound.solvers import GAP_REACHED, INFEASIBLE, OPTIMAL, TIME_LIMIT, SolveResult


def test_default_schedule():
    assert parse_gap_schedule(None) == (Fraction(1, 10), Fraction(1, 20), Fraction(0))


def test_schedule_gets_a_final_zero():
    assert parse_gap_schedule("0.5, 0.25") == (Fraction(1, 2), Fraction(1, 4), Fraction(0))
    assert parse_gap_schedule("") == (Fraction(0),)


@pytest.mark.parametrize("text", ["0.1,0.2", "0.1,0.1", "1.5", "-0.1", "abc"])
def test_schedule_rejected(text):
    with pytest.raises(ConfigurationError):
        parse_gap_schedule(text)


def test_candidate_roots_use_symmetry():
    assert candidate_roots(published_instance("complete:8", "complete:8")) == [(1, 1)]
    roots = candidate_roots(oracle_instance("path:3", "path:3"))
    assert roots == [(1, 1), (1, 2), (2, 1), (2, 2)]


def test_state_tracks_incumbent():
    state = SearchState(5, [(1, 2), (2, 2)])
    assert state.needs_work((1, 2))
    state.record(RootSolve((1, 2), Fraction(1, 10), 6, 7, "gap-reached", 0.1))
    assert state.incumbent_n == 6
    assert state.needs_work((1, 2))
    state.record(RootSolve((2, 2), Fraction(1, 10), 4, 6, "gap-reached", 0.1))
    assert not state.needs_work((2, 2))
    assert state.incumbent_n == 6


def _report():
    return SearchReport(
        g="lemke", h="complete:8", pi_g=8, pi_h=8, vertex_count=64, diameter=4, solver_id="highs",
        policy_digest="abc", gap_schedule=(Fraction(1, 10), Fraction(0)), candidate_roots=[(1, 1), (2, 1)],
        orbit_pruned=62, incumbent_n=63,
        solves=[RootSolve((1, 1), Fraction(0), 63, 63, "optimal", 1.25)], seconds=2.5,
    )


def test_report_summary_values():
    report = _report()
    assert report.final_bound == 64
    assert report.graham_value == 64
    assert report.graham_status == "verified"
    assert report.lower_bound == 64
    assert report.tight


def test_report_dict_round_trip():
    report = _report()
    restored = SearchReport.from_dict(report.to_dict())
    assert restored.to_dict() == report.to_dict()
    assert restored.solves[0].root == (1, 1)
    assert restored.gap_schedule == (Fraction(1, 10), Fraction(0))


@requires_solver
@pytest.mark.parametrize("g,h", [("path:2", "path:2"), ("complete:3", "path:2")])
def test_pruned_search_matches_exhaustive(g, h, tmp_path):
    inst = oracle_instance(g, h)
    report = run_algorithm1(inst, workdir=tmp_path)
    assert report.final_bound == exhaustive_baseline(inst, workdir=tmp_path)
    assert report.final_bound >= pebbling_number(cartesian_product(inst.g, inst.h))
    assert report.solves[0].root == (1, 1)
    assert report.solves[0].gap == 0


@requires_solver
def test_gap_schedule_does_not_change_the_bound(tmp_path):
    inst = oracle_instance("path:2", "path:3")
    direct = run_algorithm1(inst, schedule=[Fraction(0)], workdir=tmp_path)
    staged = run_algorithm1(inst, schedule=[Fraction(1, 2), Fraction(1, 4)], workdir=tmp_path, jobs=2)
    assert direct.final_bound == staged.final_bound


def _scripted_solves(monkeypatch, script):
    """Replace the solver by a table of (root, gap) -> (status, n, u)."""
    calls = []

    def scripted(req, workdir=None):
        root = req.model.instance.root
        calls.append((root, req.relative_gap, req.time_limit))
        status, n, u = script[(root, req.relative_gap)]
        return SolveResult(req.solver_id, status, n, None if u is None else Fraction(u))

    monkeypatch.setattr(solvers, "solve", scripted)
    monkeypatch.setattr(solvers, "select_backend", lambda solver_id=None: "highs")
    return calls


def test_roots_are_dropped_once_dominated(monkeypatch):
    g10, g20 = Fraction(1, 10), Fraction(1, 20)
    calls = _scripted_solves(monkeypatch, {
        ((1, 1), 0): (OPTIMAL, 10, 10),
        ((1, 2), g10): (GAP_REACHED, 8, 9),
        ((2, 1), g10): (GAP_REACHED, 11, 12),
        ((2, 2), g10): (GAP_REACHED, 9, 13),
        ((2, 1), g20): (OPTIMAL, 12, 12),
        ((2, 2), g20): (GAP_REACHED, 10, 13),
        ((2, 2), 0): (OPTIMAL, 12, 12),
    })
    report = run_algorithm1(oracle_instance("path:3", "path:3"))
    assert [(root, gap) for root, gap, _ in calls] == [
        ((1, 1), 0), ((1, 2), g10), ((2, 1), g10), ((2, 2), g10), ((2, 1), g20), ((2, 2), g20), ((2, 2), 0),
    ]
    assert [limit for _, gap, limit in calls if gap == 0] == [None, None]
    assert {limit for _, gap, limit in calls if gap != 0} == {GAPPED_TIME_LIMIT}
    assert report.incumbent_n == 12
    assert report.final_bound == 13
    assert len(report.solves) == 7


def test_search_stops_when_the_seed_dominates(monkeypatch):
    g10 = Fraction(1, 10)
    calls = _scripted_solves(monkeypatch, {
        ((1, 1), 0): (OPTIMAL, 20, 20),
        ((1, 2), g10): (GAP_REACHED, 15, 18),
        ((2, 1), g10): (GAP_REACHED, 17, 20),
        ((2, 2), g10): (GAP_REACHED, 12, 13),
    })
    report = run_algorithm1(oracle_instance("path:3", "path:3"))
    assert len(calls) == 4
    assert report.final_bound == 21


def test_timed_out_root_survives_to_the_next_gap(monkeypatch):
    g10 = Fraction(1, 10)
    calls = _scripted_solves(monkeypatch, {
        ((1, 1), 0): (OPTIMAL, 5, 5),
        ((1, 2), g10): (TIME_LIMIT, None, 40),
        ((1, 2), 0): (OPTIMAL, 7, 7),
    })
    report = run_algorithm1(oracle_instance("path:2", "path:3"), schedule=[g10])
    assert [(root, gap) for root, gap, _ in calls] == [((1, 1), 0), ((1, 2), g10), ((1, 2), 0)]
    timed_out = report.solves[1]
    assert timed_out.n is None
    assert timed_out.u == 40
    assert report.final_bound == 8
    assert SearchReport.from_dict(report.to_dict()).solves[1].n is None


def test_timeout_without_dual_bound_falls_back_to_the_trivial_cap(monkeypatch):
    g10 = Fraction(1, 10)
    inst = oracle_instance("path:2", "path:3")
    _scripted_solves(monkeypatch, {
        ((1, 1), 0): (OPTIMAL, 5, 5),
        ((1, 2), g10): (TIME_LIMIT, None, None),
        ((1, 2), 0): (OPTIMAL, 6, 6),
    })
    report = run_algorithm1(inst, schedule=[g10])
    assert report.solves[1].u == assemble_model(inst.with_root((1, 2))).trivial_upper_bound
    assert report.final_bound == 7


def test_missing_incumbent_is_a_backend_error(monkeypatch):
    _scripted_solves(monkeypatch, {((1, 1), 0): (INFEASIBLE, None, None)})
    with pytest.raises(BackendError):
        run_algorithm1(oracle_instance("path:2", "path:3"))


def test_exhaustive_baseline_solves_every_root(monkeypatch):
    inst = oracle_instance("path:2", "path:3")
    script = {((i, j), 0): (OPTIMAL, i + j, i + j) for i in inst.g.vertices for j in inst.h.vertices}
    calls = _scripted_solves(monkeypatch, script)
    assert exhaustive_baseline(inst) == 6
    assert len(calls) == 6
