"""
pebblebound/search.py
Bounding pi(G □ H) over every root: a gap-0 seed at (1,1), then a
decreasing gap schedule over the surviving orbit representatives, dropping
each root once its dual bound no longer exceeds the best incumbent.
"""

import time
import logging
import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path
from typing import Any, Dict, List, Optional, Sequence, Tuple

from pebblebound.constants import DEFAULT_GAP_SCHEDULE, GAPPED_TIME_LIMIT
from pebblebound.errors import BackendError, ConfigurationError, IntegrityError
from pebblebound.graphs import metric, vertex_orbits
from pebblebound.model import ConstraintEnumerationPolicy, ProductInstance, assemble_model

Root = Tuple[int, int]


def parse_gap_schedule(text: str | Sequence[str] | None) -> Tuple[Fraction, ...]:
    """Comma-separated decreasing gaps in [0, 1]; a trailing 0 is appended when missing."""
    if text is None:
        items = list(DEFAULT_GAP_SCHEDULE)
    elif isinstance(text, str):
        items = [item.strip() for item in text.split(",") if item.strip()]
    else:
        items = [str(item) for item in text]
    try:
        gaps = [Fraction(item) for item in items]
    except (ValueError, ZeroDivisionError) as exc:
        raise ConfigurationError(f"Invalid gap schedule {text!r}: {exc}") from exc
    for gap in gaps:
        if not 0 <= gap <= 1:
            raise ConfigurationError(f"gap {gap} outside [0, 1]")
    if any(b >= a for a, b in zip(gaps, gaps[1:])):
        raise ConfigurationError(f"gap schedule must be strictly decreasing: {text!r}")
    if not gaps or gaps[-1] != 0:
        gaps.append(Fraction(0))
    return tuple(gaps)


@dataclass(frozen=True)
class RootSolve:
    """One line of the search log; n is None when a gapped solve ran out of time first."""
    root: Root
    gap: Fraction
    n: Optional[int]
    u: int
    status: str
    seconds: float

    def to_dict(self) -> Dict[str, Any]:
        return {
            'root': list(self.root),
            'gap': str(self.gap),
            'n': self.n,
            'u': self.u,
            'status': self.status,
            'seconds': round(self.seconds, 3),
        }

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> "RootSolve":
        n = data['n']
        return cls(tuple(data['root']), Fraction(data['gap']), None if n is None else int(n), int(data['u']),
                   data['status'], float(data['seconds']))


@dataclass
class SearchState:
    incumbent_n: int
    surviving_roots: List[Root]
    per_root_bounds: Dict[Root, Tuple[Optional[int], int]] = field(default_factory=dict)
    gap_schedule: Tuple[Fraction, ...] = ()

    def record(self, entry: RootSolve) -> None:
        self.per_root_bounds[entry.root] = (entry.n, entry.u)
        if entry.n is not None:
            self.incumbent_n = max(self.incumbent_n, entry.n)

    def needs_work(self, root: Root) -> bool:
        bounds = self.per_root_bounds.get(root)
        return bounds is None or bounds[1] > self.incumbent_n


@dataclass
class SearchReport:
    g: str
    h: str
    pi_g: int
    pi_h: int
    vertex_count: int
    diameter: int
    solver_id: str
    policy_digest: str
    gap_schedule: Tuple[Fraction, ...]
    candidate_roots: List[Root]
    orbit_pruned: int
    incumbent_n: int
    solves: List[RootSolve] = field(default_factory=list)
    seconds: float = 0.0

    @property
    def final_bound(self) -> int:
        return 1 + self.incumbent_n

    @property
    def graham_value(self) -> int:
        return self.pi_g * self.pi_h

    @property
    def graham_status(self) -> str:
        return "verified" if self.final_bound <= self.graham_value else "open"

    @property
    def lower_bound(self) -> int:
        """max(|V|, 2^diam), a lower bound on pi(G □ H)"""
        return max(self.vertex_count, 2 ** self.diameter)

    @property
    def tight(self) -> bool:
        return self.final_bound == self.lower_bound

    def to_dict(self) -> Dict[str, Any]:
        return {
            'g': self.g,
            'h': self.h,
            'pi_g': self.pi_g,
            'pi_h': self.pi_h,
            'vertex_count': self.vertex_count,
            'diameter': self.diameter,
            'solver_id': self.solver_id,
            'policy_digest': self.policy_digest,
            'gap_schedule': [str(g) for g in self.gap_schedule],
            'candidate_roots': [list(r) for r in self.candidate_roots],
            'orbit_pruned': self.orbit_pruned,
            'incumbent_n': self.incumbent_n,
            'final_bound': self.final_bound,
            'graham_value': self.graham_value,
            'graham_status': self.graham_status,
            'lower_bound': self.lower_bound,
            'tight': self.tight,
            'solves': [s.to_dict() for s in self.solves],
            'seconds': round(self.seconds, 3),
        }

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> "SearchReport":
        return cls(
            g=data['g'],
            h=data['h'],
            pi_g=int(data['pi_g']),
            pi_h=int(data['pi_h']),
            vertex_count=int(data['vertex_count']),
            diameter=int(data['diameter']),
            solver_id=data['solver_id'],
            policy_digest=data['policy_digest'],
            gap_schedule=tuple(Fraction(g) for g in data['gap_schedule']),
            candidate_roots=[tuple(r) for r in data['candidate_roots']],
            orbit_pruned=int(data['orbit_pruned']),
            incumbent_n=int(data['incumbent_n']),
            solves=[RootSolve.from_dict(s) for s in data.get('solves', [])],
            seconds=float(data.get('seconds', 0.0)),
        )


def candidate_roots(inst: ProductInstance) -> List[Root]:
    """One root per pair of vertex orbits, (1,1) first."""
    g_reps = vertex_orbits(inst.g).representatives
    h_reps = vertex_orbits(inst.h).representatives
    return sorted(itertools.product(g_reps, h_reps))


def _solve_root(root: Root, inst: ProductInstance, policy: ConstraintEnumerationPolicy, gap: Fraction,
                time_limit: Optional[float], solver_id: str, workdir: Optional[Path]) -> RootSolve:
    from pebblebound.solvers import TIME_LIMIT, SolveRequest, solve

    model = assemble_model(inst.with_root(root), policy)
    try:
        result = solve(SolveRequest(model, gap, time_limit, solver_id), workdir)
    except IntegrityError as exc:
        raise IntegrityError(f"root {root}: {exc}", diagnostics=exc.diagnostics) from exc
    if result.incumbent_n is None:
        if result.status != TIME_LIMIT:
            raise BackendError(f"root {root}: {solver_id} finished with status {result.status} and no incumbent")
        # no incumbent yet: keep the root alive on its dual bound
        u = result.bound if result.bound is not None else model.trivial_upper_bound
        entry = RootSolve(root, gap, None, u, result.status, result.seconds)
    else:
        entry = RootSolve(root, gap, result.incumbent_n, result.bound, result.status, result.seconds)
    n_text = "-" if entry.n is None else str(entry.n)
    logging.info(f"  root {root}  gap {float(gap):<5g} n = {n_text:<6} u = {entry.u:<6} "
                 f"{entry.seconds:.1f}s  [dim]{entry.status}[/dim]")
    return entry


def _new_report(inst: ProductInstance, policy: ConstraintEnumerationPolicy, solver_id: str,
                schedule: Tuple[Fraction, ...], roots: List[Root]) -> SearchReport:
    return SearchReport(
        g=inst.g.name,
        h=inst.h.name,
        pi_g=inst.g_profile.pi,
        pi_h=inst.h_profile.pi,
        vertex_count=inst.g.vertex_count * inst.h.vertex_count,
        diameter=metric(inst.g).diameter + metric(inst.h).diameter,
        solver_id=solver_id,
        policy_digest=policy.digest,
        gap_schedule=schedule,
        candidate_roots=roots,
        orbit_pruned=inst.g.vertex_count * inst.h.vertex_count - len(roots),
        incumbent_n=0,
    )


def run_algorithm1(inst: ProductInstance, policy: Optional[ConstraintEnumerationPolicy] = None,
                   schedule: Optional[Sequence[Fraction]] = None, solver_id: Optional[str] = None,
                   workdir: Optional[Path] = None, jobs: int | None = 1,
                   time_limit: Optional[float] = GAPPED_TIME_LIMIT) -> SearchReport:
    """1 + max over roots of the model optimum, with gap-schedule pruning.

    A root is revisited while its own last dual bound exceeds the incumbent N.
    `time_limit` applies to gapped phases only; gap-0 solves run unlimited.
    """
    from pebblebound.core import run_parallel
    from pebblebound.solvers import select_backend

    solver_id = select_backend(solver_id)
    policy = policy or ConstraintEnumerationPolicy()
    schedule = parse_gap_schedule([str(g) for g in schedule]) if schedule is not None else parse_gap_schedule(None)
    roots = candidate_roots(inst)
    report = _new_report(inst, policy, solver_id, schedule, roots)
    start = time.perf_counter()

    seed = (1, 1)
    logging.info(f"Seeding with root {seed} at gap 0 ({len(roots)} candidate roots)")
    entry = _solve_root(seed, inst, policy, Fraction(0), None, solver_id, workdir)
    state = SearchState(0, [r for r in roots if r != seed], {}, schedule)
    state.record(entry)
    report.solves.append(entry)

    for gap in schedule:
        todo = [r for r in state.surviving_roots if state.needs_work(r)]
        if not todo:
            break
        limit = None if gap == 0 else time_limit
        entries = run_parallel(todo, _solve_root, jobs, f"gap {float(gap):g}: {len(todo)} roots",
                               worker_args=(inst, policy, gap, limit, solver_id, workdir), threads=True)
        for entry in entries:
            state.record(entry)
            report.solves.append(entry)
        # a gap-0 solve settles its root
        state.surviving_roots = [r for r in todo if state.needs_work(r) and gap != 0]
        logging.debug(f"After gap {gap}: N = {state.incumbent_n}, {len(state.surviving_roots)} roots survive")

    report.incumbent_n = state.incumbent_n
    report.seconds = time.perf_counter() - start
    return report


def exhaustive_baseline(inst: ProductInstance, policy: Optional[ConstraintEnumerationPolicy] = None,
                        solver_id: Optional[str] = None, workdir: Optional[Path] = None,
                        jobs: int | None = 1) -> int:
    """1 + max over every root of the gap-0 optimum, without pruning."""
    from pebblebound.core import run_parallel
    from pebblebound.solvers import select_backend

    solver_id = select_backend(solver_id)
    policy = policy or ConstraintEnumerationPolicy()
    roots = [(i, j) for i in inst.g.vertices for j in inst.h.vertices]
    entries = run_parallel(roots, _solve_root, jobs, f"{inst.name}: all roots",
                           worker_args=(inst, policy, Fraction(0), None, solver_id, workdir), threads=True)
    return 1 + max(entry.n for entry in entries)
