import shutil
import sys
from fractions import Fraction

import pytest

from conftest import oracle_instance, requires_solver
from pebblebound import solvers
from pebblebound.errors import ConfigurationError, IntegrityError
from pebblebound.feasibility import derive_assignment
from pebblebound.model import ConstraintEnumerationPolicy, assemble_model
from pebblebound.solvers import (
    GAP_REACHED, INFEASIBLE, OPTIMAL, CbcBackend, GurobiBackend, HighsBackend, RawOutcome, ScipBackend,
    SolveRequest, SolveResult, SolverBackend, select_backend, solve,
)


@pytest.fixture
def p2p2_model():
    return assemble_model(oracle_instance("path:2", "path:2"))


def test_gap_validation(p2p2_model):
    with pytest.raises(ConfigurationError):
        SolveRequest(p2p2_model, Fraction(3, 2))
    req = SolveRequest(p2p2_model, Fraction(1, 10))
    assert req.solver_gap == pytest.approx(1 / 11)
    assert SolveRequest(p2p2_model).solver_gap == 0.0


def test_result_bound_and_gap():
    result = SolveResult("highs", GAP_REACHED, 10, Fraction(25, 2))
    assert result.bound == 12
    assert result.gap == Fraction(1, 4)
    assert SolveResult("highs", OPTIMAL, 12, Fraction(12) - Fraction(1, 10**8)).bound == 12
    assert SolveResult("highs", INFEASIBLE, None, None).gap is None


def test_highs_parse(tmp_path):
    solution = tmp_path / "solution.txt"
    solution.write_text(
        "Model status\nOptimal\n\n# Primal solution values\nFeasible\nObjective 12\n"
        "# Columns 2\nc_1_1 3\nc_1_2 9\n# Rows 1\nct_G_1 3\n",
        encoding="utf-8",
    )
    log = "Solving report\n  Status            Optimal\n  Dual bound        12\n"
    outcome = HighsBackend().parse(log, solution)
    assert outcome.raw_status == "Optimal"
    assert outcome.dual_bound == 12
    assert outcome.values == {"c_1_1": 3.0, "c_1_2": 9.0}
    assert not outcome.infeasible


def test_cbc_parse_keeps_the_column_block(tmp_path):
    solution = tmp_path / "solution.txt"
    solution.write_text(
        "Optimal - objective value -12.00000000\n"
        "      0 ct_G_1                 0                      0\n"
        "**    1 B1_G_1                 0                      0\n"
        "      0 c_1_1                  3                     -1\n"
        "      1 c_1_2                  9                     -1\n",
        encoding="utf-8",
    )
    log = "Result - Optimal solution found\n\nObjective value:                -12.00000000\nLower bound:                    -12.000\n"
    outcome = CbcBackend().parse(log, solution)
    assert outcome.dual_bound == 12
    assert outcome.values == {"c_1_1": 3.0, "c_1_2": 9.0}
    assert outcome.raw_status.startswith("Optimal")


def test_cbc_dual_bound_comes_from_the_lower_bound(tmp_path):
    solution = tmp_path / "missing.txt"
    log = "Upper bound:                    -10.000\nLower bound:                    -12.500\n"
    assert CbcBackend().parse(log, solution).dual_bound == Fraction(25, 2)
    assert CbcBackend().parse("Upper bound:  -10.000\n", solution).dual_bound is None


def test_cbc_time_limit(tmp_path):
    solution = tmp_path / "solution.txt"
    solution.write_text("Stopped on time - objective value -10.00000000\n      0 c_1_1  10  -1\n", encoding="utf-8")
    outcome = CbcBackend().parse("", solution)
    assert outcome.time_limited
    assert outcome.dual_bound is None


def test_scip_parse(tmp_path):
    solution = tmp_path / "solution.txt"
    solution.write_text(
        "solution status: optimal solution found\n"
        "objective value:                                   12\n"
        "c_1_1                                               3 \t(obj:1)\n"
        "c_1_2                                               9 \t(obj:1)\n",
        encoding="utf-8",
    )
    log = ("SCIP Status        : problem is solved [optimal solution found]\n"
           "Dual Bound         : +1.20000000000000e+01\n")
    outcome = ScipBackend().parse(log, solution)
    assert outcome.dual_bound == 12
    assert outcome.values == {"c_1_1": 3.0, "c_1_2": 9.0}
    assert not outcome.time_limited


def test_gurobi_parse(tmp_path):
    solution = tmp_path / "solution.sol"
    solution.write_text("# Objective value = 12\nc_1_1 3\nc_1_2 9\n", encoding="utf-8")
    log = ("Optimal solution found (tolerance 1.00e-04)\n"
           "Best objective 1.200000000000e+01, best bound 1.200000000000e+01, gap 0.0000%\n")
    outcome = GurobiBackend().parse(log, solution)
    assert outcome.raw_status == OPTIMAL
    assert outcome.dual_bound == 12
    assert outcome.values == {"c_1_1": 3.0, "c_1_2": 9.0}


def test_select_backend(monkeypatch):
    monkeypatch.delenv("PEBBLEBOUND_SOLVER", raising=False)
    monkeypatch.setattr(shutil, "which", lambda name: f"/usr/bin/{name}" if name == "cbc" else None)
    assert solvers.probe_backends() == ["cbc"]
    assert select_backend() == "cbc"
    with pytest.raises(ConfigurationError):
        select_backend("glpk")
    with pytest.raises(ConfigurationError):
        select_backend("highs")
    monkeypatch.setenv("PEBBLEBOUND_SOLVER", "CBC")
    assert select_backend() == "cbc"


def test_no_backend_installed(monkeypatch):
    monkeypatch.delenv("PEBBLEBOUND_SOLVER", raising=False)
    monkeypatch.setattr(shutil, "which", lambda name: None)
    with pytest.raises(ConfigurationError):
        select_backend()


class ScriptedBackend(SolverBackend):
    """Runs a no-op process and reports a fixed outcome."""
    solver_id = "scripted"
    executable = "scripted"

    def __init__(self, outcome):
        self.outcome = outcome

    def available(self):
        return True

    def command(self, lp_path, solution_path, req, workdir):
        assert lp_path.read_text(encoding="utf-8").startswith("\\ pebblebound model")
        return [sys.executable, "-c", ""]

    def parse(self, log, solution_path):
        return self.outcome


def _scripted(monkeypatch, outcome):
    monkeypatch.setitem(solvers.BACKENDS, "scripted", ScriptedBackend(outcome))


def test_solve_accepts_verified_incumbent(monkeypatch, tmp_path, p2p2_model):
    counts = [0, 0, 0, 3]
    values = derive_assignment(p2p2_model.instance, counts, p2p2_model.params)
    _scripted(monkeypatch, RawOutcome("Optimal", Fraction(3), {k: float(v) for k, v in values.items()}))
    result = solve(SolveRequest(p2p2_model, solver_id="scripted"), tmp_path)
    assert result.status == OPTIMAL
    assert result.incumbent_n == 3
    assert result.bound == 3


def test_solve_repairs_auxiliary_values(monkeypatch, tmp_path, p2p2_model):
    counts = [0, 0, 0, 3]
    values = derive_assignment(p2p2_model.instance, counts, p2p2_model.params)
    values["n2peb_G_2"] += 1
    _scripted(monkeypatch, RawOutcome("Optimal", Fraction(5), {k: float(v) for k, v in values.items()}))
    result = solve(SolveRequest(p2p2_model, Fraction(1), solver_id="scripted"), tmp_path)
    assert result.incumbent_n == 3
    assert result.assignment["n2peb_G_2"] == values["n2peb_G_2"] - 1
    assert result.status == GAP_REACHED


def test_solve_rejects_infeasible_incumbent(monkeypatch, tmp_path, p2p2_model):
    # two pebbles next to the root violate B1
    counts = [0, 0, 2, 0]
    values = derive_assignment(p2p2_model.instance, counts, p2p2_model.params)
    _scripted(monkeypatch, RawOutcome("Optimal", Fraction(2), {k: float(v) for k, v in values.items()}))
    with pytest.raises(IntegrityError) as info:
        solve(SolveRequest(p2p2_model, solver_id="scripted"), tmp_path)
    assert "B1_G_1" in info.value.diagnostics


def test_solve_reports_infeasible_model(monkeypatch, tmp_path, p2p2_model):
    _scripted(monkeypatch, RawOutcome("Infeasible", None, {}, infeasible=True))
    result = solve(SolveRequest(p2p2_model, solver_id="scripted"), tmp_path)
    assert result.status == INFEASIBLE
    assert result.incumbent_n is None


@requires_solver
def test_real_solve_on_four_cycle(tmp_path, p2p2_model):
    result = solve(SolveRequest(p2p2_model, solver_id=select_backend()), tmp_path)
    assert result.status == OPTIMAL
    # pi(C4) = 4, so the model admits at least three pebbles
    assert result.incumbent_n >= 3


@requires_solver
def test_orientation_and_policy_caps(tmp_path):
    solver_id = select_backend()
    inst = oracle_instance("complete:3", "path:2", root=(2, 1))
    base = solve(SolveRequest(assemble_model(inst), solver_id=solver_id), tmp_path).incumbent_n
    swapped = solve(SolveRequest(assemble_model(inst.swapped()), solver_id=solver_id), tmp_path).incumbent_n
    assert base == swapped
    loose = assemble_model(inst, ConstraintEnumerationPolicy(a2_max_set_size=0, a3_max_s_size=0))
    assert solve(SolveRequest(loose, solver_id=solver_id), tmp_path).incumbent_n >= base
