"""
pebblebound/solvers.py
External MILP solvers driven through LP files and a subprocess boundary.

Each backend knows its executable, its command line and how to read its log
and solution file back. `solve` owns a temporary directory per call, so any
number of solves may run side by side.
"""

import os
import re
import math
import time
import shutil
import logging
import subprocess
import tempfile
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path
from typing import Dict, List, Optional, Tuple

from pebblebound.constants import (
    ABSOLUTE_GAP_AT_ZERO, INTEGRALITY_TOLERANCE, SOLVER_ENV_VAR, SOLVER_PREFERENCE,
)
from pebblebound.errors import BackendError, ConfigurationError
from pebblebound.feasibility import accept_incumbent
from pebblebound.lpformat import write_lp
from pebblebound.model import ModelIR

OPTIMAL = "optimal"
GAP_REACHED = "gap-reached"
TIME_LIMIT = "time-limit"
INFEASIBLE = "infeasible"
ERROR = "error"

_NUMBER = r"[-+]?(?:\d+\.?\d*|\.\d+)(?:[eE][-+]?\d+)?"


@dataclass(frozen=True)
class SolveRequest:
    model: ModelIR
    relative_gap: Fraction = Fraction(0)
    time_limit: Optional[float] = None
    solver_id: str = SOLVER_PREFERENCE[0]

    def __post_init__(self):
        gap = Fraction(self.relative_gap)
        if not 0 <= gap <= 1:
            raise ConfigurationError(f"relative gap {self.relative_gap} outside [0, 1]")
        object.__setattr__(self, "relative_gap", gap)

    @property
    def solver_gap(self) -> float:
        """Gap handed to the solver.

        Solvers divide by the bound; g / (1 + g) relative to the bound gives
        u - n <= g * n.
        """
        return float(self.relative_gap / (1 + self.relative_gap))


@dataclass(frozen=True)
class SolveResult:
    solver_id: str
    status: str
    incumbent_n: Optional[int]
    dual_bound_u: Optional[Fraction]
    assignment: Dict[str, int] = field(default_factory=dict)
    seconds: float = 0.0
    raw_status: str = ""

    @property
    def bound(self) -> Optional[int]:
        """Dual bound floored; the objective is integral."""
        if self.dual_bound_u is None:
            return None
        return math.floor(self.dual_bound_u + Fraction(INTEGRALITY_TOLERANCE))

    @property
    def gap(self) -> Optional[Fraction]:
        """(u - n) / max(1, |n|)"""
        if self.incumbent_n is None or self.dual_bound_u is None:
            return None
        return (self.dual_bound_u - self.incumbent_n) / max(1, abs(self.incumbent_n))


@dataclass
class RawOutcome:
    """What a backend read from its own output, before verification."""
    raw_status: str = ""
    dual_bound: Optional[Fraction] = None
    values: Dict[str, float] = field(default_factory=dict)
    infeasible: bool = False
    time_limited: bool = False


def _fraction(text: str) -> Optional[Fraction]:
    try:
        return Fraction(text.replace("+", "")) if text.lower() not in ("inf", "+inf", "-inf", "infinity") else None
    except ValueError:
        return None


def _last_match(pattern: str, text: str) -> Optional[re.Match]:
    matches = list(re.finditer(pattern, text, re.MULTILINE | re.IGNORECASE))
    return matches[-1] if matches else None


class SolverBackend:
    """One command-line solver."""
    solver_id = ""
    executable = ""

    def available(self) -> bool:
        return shutil.which(self.executable) is not None

    def command(self, lp_path: Path, solution_path: Path, req: SolveRequest, workdir: Path) -> List[str]:
        raise NotImplementedError

    def parse(self, log: str, solution_path: Path) -> RawOutcome:
        raise NotImplementedError


class HighsBackend(SolverBackend):
    solver_id = "highs"
    executable = "highs"

    def command(self, lp_path, solution_path, req, workdir):
        options = [
            f"mip_rel_gap = {req.solver_gap!r}",
            f"mip_abs_gap = {ABSOLUTE_GAP_AT_ZERO}",
        ]
        if req.time_limit is not None:
            options.append(f"time_limit = {float(req.time_limit)}")
        options_path = workdir / "highs.opt"
        options_path.write_text("\n".join(options) + "\n", encoding='utf-8')
        return [self.executable, "--model_file", str(lp_path), "--options_file", str(options_path),
                "--solution_file", str(solution_path)]

    def parse(self, log, solution_path):
        outcome = RawOutcome()
        status = _last_match(r"^\s*(?:Model\s+)?status\s*:?\s+(.+?)\s*$", log)
        outcome.raw_status = status.group(1) if status else ""
        bound = _last_match(rf"^\s*Dual bound\s+({_NUMBER}|inf)", log)
        if bound:
            outcome.dual_bound = _fraction(bound.group(1))
        lowered = outcome.raw_status.lower()
        outcome.infeasible = lowered.startswith("infeasible")
        outcome.time_limited = "time limit" in lowered

        if solution_path.exists():
            lines = solution_path.read_text(encoding='utf-8', errors='ignore').splitlines()
            for index, line in enumerate(lines):
                if line.startswith("# Columns"):
                    count = int(line.split()[-1])
                    for entry in lines[index + 1:index + 1 + count]:
                        name, value = entry.split()[:2]
                        outcome.values[name] = float(value)
                    break
                if line.strip() == "Model status" and index + 1 < len(lines) and not outcome.raw_status:
                    outcome.raw_status = lines[index + 1].strip()
        return outcome


class CbcBackend(SolverBackend):
    solver_id = "cbc"
    executable = "cbc"

    def command(self, lp_path, solution_path, req, workdir):
        command = [self.executable, "-printingOptions", "all", "-import", str(lp_path),
                   "-ratioGap", repr(req.solver_gap), "-allowableGap", str(ABSOLUTE_GAP_AT_ZERO)]
        if req.time_limit is not None:
            command += ["-sec", str(float(req.time_limit))]
        return command + ["-solve", "-solu", str(solution_path)]

    def parse(self, log, solution_path):
        outcome = RawOutcome()
        # CBC minimizes the negated objective: its lower bound is -u, its upper bound -n
        bound = _last_match(rf"^\s*Lower bound:\s*({_NUMBER})", log)
        value = _fraction(bound.group(1)) if bound else None
        if value is not None:
            outcome.dual_bound = -value
        if not solution_path.exists():
            return outcome

        text = solution_path.read_text(encoding='utf-8', errors='ignore')
        first, _, body = text.partition("\n")
        outcome.raw_status = first.strip()
        lowered = outcome.raw_status.lower()
        outcome.infeasible = "infeasible" in lowered
        outcome.time_limited = "time" in lowered

        # rows come first when all are printed; the block restarting at index 0 last holds the columns
        blocks: List[Dict[str, float]] = []
        for line in re.sub(r"\*\*\s+", "", body).splitlines():
            parts = line.split()
            if len(parts) < 3 or not parts[0].isdigit():
                continue
            if int(parts[0]) == 0 or not blocks:
                blocks.append({})
            blocks[-1][parts[1]] = float(parts[2])
        if blocks:
            outcome.values = blocks[-1]
        return outcome


class ScipBackend(SolverBackend):
    solver_id = "scip"
    executable = "scip"

    def command(self, lp_path, solution_path, req, workdir):
        script = [
            f"set limits gap {req.solver_gap!r}",
            f"set limits absgap {ABSOLUTE_GAP_AT_ZERO}",
        ]
        if req.time_limit is not None:
            script.append(f"set limits time {float(req.time_limit)}")
        script += [f"read {lp_path}", "optimize", f"write solution {solution_path}", "quit"]
        return [self.executable, "-c", " ".join(script)]

    def parse(self, log, solution_path):
        outcome = RawOutcome()
        status = _last_match(r"^SCIP Status\s*:\s*(.+?)\s*$", log)
        outcome.raw_status = status.group(1) if status else ""
        bound = _last_match(rf"^Dual Bound\s*:\s*({_NUMBER})", log)
        if bound:
            outcome.dual_bound = _fraction(bound.group(1))
        lowered = outcome.raw_status.lower()
        outcome.infeasible = "[infeasible]" in lowered
        outcome.time_limited = "time limit" in lowered

        if solution_path.exists():
            for line in solution_path.read_text(encoding='utf-8', errors='ignore').splitlines():
                parts = line.split()
                if len(parts) >= 2 and not line.startswith(("solution status", "objective value")):
                    try:
                        outcome.values[parts[0]] = float(parts[1])
                    except ValueError:
                        continue
        return outcome


class GurobiBackend(SolverBackend):
    solver_id = "gurobi"
    executable = "gurobi_cl"

    def command(self, lp_path, solution_path, req, workdir):
        command = [self.executable, f"MIPGap={req.solver_gap!r}", f"MIPGapAbs={ABSOLUTE_GAP_AT_ZERO}",
                   f"ResultFile={solution_path}"]
        if req.time_limit is not None:
            command.append(f"TimeLimit={float(req.time_limit)}")
        return command + [str(lp_path)]

    def parse(self, log, solution_path):
        outcome = RawOutcome()
        best = _last_match(rf"Best objective ({_NUMBER}|-), best bound ({_NUMBER}|-)", log)
        if best:
            outcome.dual_bound = _fraction(best.group(2))
        for pattern, label in (("Optimal solution found", OPTIMAL), ("Time limit reached", TIME_LIMIT),
                               ("Model is infeasible", INFEASIBLE)):
            if pattern in log:
                outcome.raw_status = label
        outcome.infeasible = outcome.raw_status == INFEASIBLE
        outcome.time_limited = outcome.raw_status == TIME_LIMIT

        if solution_path.exists():
            for line in solution_path.read_text(encoding='utf-8', errors='ignore').splitlines():
                parts = line.split()
                if len(parts) == 2 and not line.startswith("#"):
                    outcome.values[parts[0]] = float(parts[1])
        return outcome


BACKENDS: Dict[str, SolverBackend] = {
    backend.solver_id: backend
    for backend in (HighsBackend(), CbcBackend(), ScipBackend(), GurobiBackend())
}


def probe_backends() -> List[str]:
    """Installed solvers in preference order."""
    return [sid for sid in SOLVER_PREFERENCE if BACKENDS[sid].available()]


def select_backend(requested: Optional[str] = None) -> str:
    """--solver flag, then the environment variable, then the first installed solver."""
    choice = requested or os.environ.get(SOLVER_ENV_VAR)
    if choice:
        choice = choice.strip().lower()
        if choice not in BACKENDS:
            raise ConfigurationError(f"Unknown solver '{choice}'. Supported: {', '.join(SOLVER_PREFERENCE)}")
        if not BACKENDS[choice].available():
            raise ConfigurationError(f"Solver '{choice}' requested but '{BACKENDS[choice].executable}' is not on PATH")
        return choice
    found = probe_backends()
    if not found:
        raise ConfigurationError(
            f"No MILP solver found on PATH (looked for {', '.join(BACKENDS[s].executable for s in SOLVER_PREFERENCE)})"
        )
    return found[0]


def _classify(n: int, u: Fraction, outcome: RawOutcome) -> str:
    if math.floor(u + Fraction(INTEGRALITY_TOLERANCE)) <= n:
        return OPTIMAL
    if outcome.time_limited:
        return TIME_LIMIT
    return GAP_REACHED


def _diagnostics(result: subprocess.CompletedProcess) -> str:
    tail = (result.stdout or "").splitlines()[-40:] + (result.stderr or "").splitlines()[-20:]
    return "\n".join(tail)


def _run(backend: SolverBackend, req: SolveRequest, workdir: Path) -> Tuple[RawOutcome, subprocess.CompletedProcess]:
    lp_path = write_lp(req.model, workdir / "model.lp")
    solution_path = workdir / "solution.txt"
    cmd = backend.command(lp_path, solution_path, req, workdir)
    logging.debug(f"Running: {' '.join(cmd)}")
    timeout = None if req.time_limit is None else 2 * float(req.time_limit) + 60
    try:
        result = subprocess.run(cmd, capture_output=True, text=True, encoding='utf-8', errors='ignore',
                                cwd=workdir, timeout=timeout)
    except subprocess.TimeoutExpired as exc:
        raise BackendError(f"{backend.solver_id} did not stop within {timeout:.0f}s", diagnostics=str(exc)) from exc
    except OSError as exc:
        raise BackendError(f"Cannot start {backend.executable}: {exc}") from exc

    try:
        outcome = backend.parse(result.stdout or "", solution_path)
    except (ValueError, IndexError) as exc:
        raise BackendError(f"Unparseable {backend.solver_id} output: {exc}", diagnostics=_diagnostics(result)) from exc
    if result.returncode != 0 and not outcome.values:
        raise BackendError(
            f"{backend.solver_id} exited with code {result.returncode}", diagnostics=_diagnostics(result)
        )
    return outcome, result


def solve(req: SolveRequest, workdir: Optional[Path] = None) -> SolveResult:
    """Solve one model; the incumbent is verified exactly before it is returned."""
    backend = BACKENDS.get(req.solver_id)
    if backend is None:
        raise ConfigurationError(f"Unknown solver '{req.solver_id}'")
    if not backend.available():
        raise ConfigurationError(f"'{backend.executable}' is not on PATH")

    model = req.model
    if workdir is not None:
        Path(workdir).mkdir(parents=True, exist_ok=True)
    start = time.perf_counter()
    with tempfile.TemporaryDirectory(prefix="solve_", dir=workdir) as tmp:
        outcome, result = _run(backend, req, Path(tmp))
    seconds = time.perf_counter() - start

    if outcome.infeasible:
        return SolveResult(req.solver_id, INFEASIBLE, None, None, {}, seconds, outcome.raw_status)
    if not outcome.values:
        if outcome.time_limited:
            return SolveResult(req.solver_id, TIME_LIMIT, None, outcome.dual_bound, {}, seconds, outcome.raw_status)
        raise BackendError(f"{backend.solver_id} returned no incumbent", diagnostics=_diagnostics(result))

    raw = {name: round(value) for name, value in outcome.values.items()}
    drift = max((abs(value - round(value)) for value in outcome.values.values()), default=0.0)
    if drift > INTEGRALITY_TOLERANCE:
        logging.debug(f"Incumbent values drift {drift:.2e} from integers before rounding")
    assignment = accept_incumbent(model, raw)
    n = sum(model.configuration_values(assignment))

    u = outcome.dual_bound
    if u is None:
        u = Fraction(n) if outcome.raw_status.lower().startswith("optimal") else Fraction(model.trivial_upper_bound)
    if u < n - Fraction(INTEGRALITY_TOLERANCE):
        raise BackendError(f"{backend.solver_id} reported dual bound {float(u)} below incumbent {n}",
                           diagnostics=_diagnostics(result))
    u = max(u, Fraction(n))
    status = _classify(n, u, outcome)
    if status == GAP_REACHED and (u - n) > req.relative_gap * max(1, n):
        logging.warning(f"{backend.solver_id} stopped at gap {float((u - n) / max(1, n)):.4f} above "
                        f"the requested {float(req.relative_gap)}")
    return SolveResult(req.solver_id, status, n, u, assignment, seconds, outcome.raw_status)
