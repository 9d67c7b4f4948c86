"""
pebblebound/oracle.py
Exhaustive pebbling oracle: solvability, pebbling numbers, 2-pebbling tables
and enumeration of unsolvable configurations for small graphs.
"""

import logging
import itertools
from dataclasses import dataclass
from typing import Dict, Iterator, List, Optional, Sequence, Set, Tuple

from pebblebound.constants import ORACLE_ANTICHAIN_LIMIT, ORACLE_NODE_BUDGET, ORACLE_VERTEX_CAP
from pebblebound.errors import ConfigurationError, OracleBudgetError
from pebblebound.graphs import Graph, automorphisms, metric, vertex_orbits
from pebblebound.profiles import PebblingProfile

State = Tuple[int, ...]

# Stabilizers larger than this are not used to canonicalize frontiers.
_CANONICAL_GROUP_LIMIT = 48


@dataclass(frozen=True)
class Configuration:
    """Pebble counts indexed by vertex (counts[v - 1] is the count on v)."""
    counts: State

    @classmethod
    def of(cls, counts: Sequence[int]) -> "Configuration":
        counts = tuple(int(x) for x in counts)
        if any(x < 0 for x in counts):
            raise ValueError(f"negative pebble count in {counts}")
        return cls(counts)

    @property
    def size(self) -> int:
        return sum(self.counts)

    @property
    def support_size(self) -> int:
        return sum(1 for x in self.counts if x > 0)

    def __len__(self) -> int:
        return len(self.counts)

    def __getitem__(self, v: int) -> int:
        return self.counts[v - 1]


@dataclass(frozen=True)
class PebblingWitness:
    """pi together with a maximum unsolvable configuration and its root."""
    pi: int
    root: int
    configuration: Configuration
    explored_states: int


class SolvabilitySearch:
    """Memoized depth-first search deciding whether `target` pebbles can reach `root`.

    States are full count vectors (the root entry is the pebbles already
    delivered). A state whose weighted potential sum(c_v * 2^-D(v, root)) is
    below `target` is rejected without expansion; moves never leave the root.
    With `domination`, a state below a known unsolvable state with the same
    root credit is unsolvable, and one above a known solvable state is solvable.
    """

    def __init__(self, g: Graph, root: int, target: int, budget: int = ORACLE_NODE_BUDGET,
                 domination: bool = True):
        if target < 1:
            raise ValueError("target must be at least 1")
        if not 1 <= root <= g.vertex_count:
            raise ValueError(f"root {root} is not a vertex of {g.name}")
        self.graph = g
        self.root = root
        self.target = target
        self.budget = budget
        self.domination = domination
        self.expanded = 0
        self._memo: Dict[State, bool] = {}
        # root credit -> antichain
        self._maximal_unsolvable: Dict[int, List[State]] = {}
        self._minimal_solvable: Dict[int, List[State]] = {}

        dist = metric(g)
        self._root_index = root - 1
        self._weights = tuple(2 ** (dist.diameter - dist.distance(v, root)) for v in g.vertices)
        self._threshold = target * 2 ** dist.diameter
        # moves toward the root are tried first
        self._moves = tuple(
            tuple(w - 1 for w in sorted(g.neighbors(v), key=lambda w: (dist.distance(w, root), w)))
            for v in g.vertices
        )

    def _quick(self, state: State) -> Optional[bool]:
        if state[self._root_index] >= self.target:
            return True
        known = self._memo.get(state)
        if known is not None:
            return known
        if sum(c * w for c, w in zip(state, self._weights)) < self._threshold:
            return False
        if self.domination:
            credit = state[self._root_index]
            if any(_below(state, u) for u in self._maximal_unsolvable.get(credit, ())):
                return False
            if any(_below(s, state) for s in self._minimal_solvable.get(credit, ())):
                return True
        return None

    def _remember(self, state: State, verdict: bool) -> None:
        self._memo[state] = verdict
        if not self.domination:
            return
        credit = state[self._root_index]
        if verdict:
            chain = self._minimal_solvable.setdefault(credit, [])
            if any(_below(s, state) for s in chain):
                return
            chain[:] = [s for s in chain if not _below(state, s)]
        else:
            chain = self._maximal_unsolvable.setdefault(credit, [])
            if any(_below(state, u) for u in chain):
                return
            chain[:] = [u for u in chain if not _below(u, state)]
        if len(chain) < ORACLE_ANTICHAIN_LIMIT:
            chain.append(state)

    def _children(self, state: State) -> Iterator[State]:
        self.expanded += 1
        if self.expanded > self.budget:
            raise OracleBudgetError(
                f"{self.graph.name}: solvability search exceeded {self.budget} states "
                f"(root {self.root}, target {self.target})"
            )
        for v, count in enumerate(state):
            if count < 2 or v == self._root_index:
                continue
            for w in self._moves[v]:
                child = list(state)
                child[v] -= 2
                child[w] += 1
                yield tuple(child)

    def solvable(self, counts: Sequence[int]) -> bool:
        state = tuple(counts)
        verdict = self._quick(state)
        if verdict is not None:
            return verdict

        stack = [(state, self._children(state))]
        while stack:
            current, children = stack[-1]
            descended = False
            for child in children:
                verdict = self._quick(child)
                if verdict is None:
                    stack.append((child, self._children(child)))
                    descended = True
                    break
                if verdict:
                    # every state on the stack reaches this child by moves
                    for pending, _ in stack:
                        self._remember(pending, True)
                    return True
            if not descended:
                self._remember(current, False)
                stack.pop()
        return False


def _below(a: State, b: State) -> bool:
    """a <= b pointwise"""
    return all(x <= y for x, y in zip(a, b))


def is_solvable(g: Graph, c: Configuration | Sequence[int], root: int, target: int = 1,
                budget: int = ORACLE_NODE_BUDGET) -> bool:
    """True iff pebbling moves can place `target` pebbles on `root`."""
    counts = c.counts if isinstance(c, Configuration) else tuple(c)
    if len(counts) != g.vertex_count:
        raise ValueError(f"configuration has {len(counts)} entries, {g.name} has {g.vertex_count} vertices")
    return SolvabilitySearch(g, root, target, budget).solvable(counts)


def _check_cap(g: Graph, cap: int) -> None:
    if g.vertex_count > cap:
        raise ConfigurationError(
            f"{g.name} has {g.vertex_count} vertices, above the oracle cap of {cap}; "
            f"raise the cap or supply a profile override"
        )


def _root_stabilizer(g: Graph, root: int) -> List[Tuple[int, ...]]:
    perms = automorphisms(g)
    if perms is None:
        return []
    stabilizer = [p for p in perms if p[root - 1] == root and p != tuple(g.vertices)]
    return stabilizer if len(stabilizer) < _CANONICAL_GROUP_LIMIT else []


def _canonical(state: State, stabilizer: List[Tuple[int, ...]]) -> State:
    best = state
    for perm in stabilizer:
        image = [0] * len(state)
        for v, count in enumerate(state):
            image[perm[v] - 1] = count
        image = tuple(image)
        if image < best:
            best = image
    return best


def _extend(layer: Set[State], search: SolvabilitySearch, positions: Sequence[int],
            stabilizer: List[Tuple[int, ...]]) -> Set[State]:
    """Unsolvable one-pebble extensions of an unsolvable layer."""
    nxt: Set[State] = set()
    for state in layer:
        for v in positions:
            child = list(state)
            child[v] += 1
            child = _canonical(tuple(child), stabilizer)
            if child not in nxt and not search.solvable(child):
                nxt.add(child)
    return nxt


def max_unsolvable(g: Graph, root: int, target: int = 1,
                   budget: int = ORACLE_NODE_BUDGET) -> Tuple[int, State, int]:
    """(size, witness, explored states) of a largest configuration not reaching `target` at root.

    Every unsolvable configuration of size k + 1 is a one-pebble extension of an
    unsolvable configuration of size k, so layers grow from the empty
    configuration until none survives.
    """
    search = SolvabilitySearch(g, root, target, budget)
    stabilizer = _root_stabilizer(g, root)
    layer: Set[State] = {tuple([0] * g.vertex_count)}
    size = 0
    positions = range(g.vertex_count)
    while True:
        nxt = _extend(layer, search, positions, stabilizer)
        if not nxt:
            return size, min(layer), search.expanded
        layer = nxt
        size += 1


def _root_worker(root: int, g: Graph, budget: int) -> Tuple[int, int, State, int]:
    size, witness, explored = max_unsolvable(g, root, 1, budget)
    return root, size, witness, explored


def pebbling_witness(g: Graph, cap: int = ORACLE_VERTEX_CAP, budget: int = ORACLE_NODE_BUDGET,
                     workers: int | None = 1) -> PebblingWitness:
    """pi(g) with a maximum unsolvable configuration, one search per root orbit."""
    from pebblebound.core import run_parallel

    _check_cap(g, cap)
    metric(g)
    roots = vertex_orbits(g).representatives
    results = run_parallel(roots, _root_worker, workers, f"pi({g.name})", worker_args=(g, budget))
    root, size, witness, _ = max(results, key=lambda r: (r[1], -r[0]))
    explored = sum(r[3] for r in results)
    logging.debug(f"{g.name}: {explored} states expanded over {len(roots)} root orbits")
    return PebblingWitness(pi=size + 1, root=root, configuration=Configuration(witness), explored_states=explored)


def pebbling_number(g: Graph, cap: int = ORACLE_VERTEX_CAP, budget: int = ORACLE_NODE_BUDGET,
                    workers: int | None = 1) -> int:
    """1 + the largest size of an unsolvable (root, configuration) pair."""
    return pebbling_witness(g, cap, budget, workers).pi


def _support_sets(g: Graph, s: int, stabilizer: List[Tuple[int, ...]]) -> List[Tuple[int, ...]]:
    """Support sets of size s (0-based), one per stabilizer class."""
    seen: Set[State] = set()
    chosen = []
    for subset in itertools.combinations(range(g.vertex_count), s):
        mask = tuple(1 if v in subset else 0 for v in range(g.vertex_count))
        canon = _canonical(mask, stabilizer)
        if canon in seen:
            continue
        seen.add(canon)
        chosen.append(subset)
    return chosen


def two_pebbling_row(g: Graph, root: int, budget: int = ORACLE_NODE_BUDGET) -> Dict[int, int]:
    """s -> least k such that every support-s configuration of size k puts 2 pebbles on root."""
    search = SolvabilitySearch(g, root, 2, budget)
    stabilizer = _root_stabilizer(g, root)
    row: Dict[int, int] = {}
    for s in range(1, g.vertex_count + 1):
        largest = s - 1
        for support in _support_sets(g, s, stabilizer):
            base = [0] * g.vertex_count
            for v in support:
                base[v] = 1
            layer = {tuple(base)} if not search.solvable(base) else set()
            size = s
            while layer:
                largest = max(largest, size)
                # extensions stay on the support, so the support size is preserved
                layer = _extend(layer, search, support, [])
                size += 1
        row[s] = largest + 1
    return row


def _two_peb_worker(root: int, g: Graph, budget: int) -> Dict[int, int]:
    return two_pebbling_row(g, root, budget)


def two_pebbling_tables(g: Graph, pi: Optional[int] = None, cap: int = ORACLE_VERTEX_CAP,
                        budget: int = ORACLE_NODE_BUDGET, workers: int | None = 1) -> PebblingProfile:
    """pi, the 2-pebbling table and its monotone envelope for g."""
    from pebblebound.core import run_parallel

    _check_cap(g, cap)
    if pi is None:
        pi = pebbling_number(g, cap, budget, workers)
    roots = vertex_orbits(g).representatives
    rows = run_parallel(roots, _two_peb_worker, workers, f"pi2({g.name})", worker_args=(g, budget))
    two_peb = {s: max(row[s] for row in rows) for s in range(1, g.vertex_count + 1)}
    return PebblingProfile.build(g.name, g.vertex_count, pi, two_peb)


def enumerate_unsolvable(g: Graph, root: int, max_size: int, limit: int,
                         largest_first: bool = False,
                         budget: int = ORACLE_NODE_BUDGET) -> List[Configuration]:
    """Up to `limit` configurations of size <= max_size that cannot reach `root`.

    Order is by size (ascending, or descending with `largest_first`), then
    lexicographic on the count vector.
    """
    if limit <= 0 or max_size < 0:
        return []
    search = SolvabilitySearch(g, root, 1, budget)
    layer: Set[State] = {tuple([0] * g.vertex_count)}
    layers: List[List[State]] = [sorted(layer)]
    collected = 1
    positions = range(g.vertex_count)
    for _ in range(max_size):
        if not largest_first and collected >= limit:
            break
        layer = _extend(layer, search, positions, [])
        if not layer:
            break
        layers.append(sorted(layer))
        collected += len(layer)

    ordered = reversed(layers) if largest_first else iter(layers)
    found: List[Configuration] = []
    for states in ordered:
        for state in states:
            found.append(Configuration(state))
            if len(found) >= limit:
                return found
    return found
