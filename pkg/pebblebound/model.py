"""
pebblebound/model.py
Partial-pebbling integer program for G □ H: instances, parameters, the
variable catalog, the enumeration policy and model assembly.

Orientation K is "G" or "H"; K-slices are indexed by the vertices of the
other factor (the frame graph). Maximizing the total pebble count subject to
"available + 1 <= required" constraints bounds pi(G □ H) by 1 + optimum.
"""

import json
import hashlib
import logging
from dataclasses import asdict, dataclass, field, fields
from pathlib import Path
from typing import Any, Dict, Iterator, List, Optional, Sequence, Tuple

from pebblebound.constants import (
    A2_MAX_ETA, A2_MAX_SET_SIZE, A3_MAX_S_SIZE, A3_MAX_T_SIZE, A5_MAX_STAR, B3_PATHS_PER_ROOT,
)
from pebblebound.errors import ConfigurationError
from pebblebound.graphs import Graph, MetricData, metric, product_label
from pebblebound.linexpr import LinearConstraint
from pebblebound.profiles import PebblingProfile

ORIENTATIONS = ("G", "H")

INTEGER = "integer"
BINARY = "binary"

# family tag -> what the constraint states
FAMILY_DESCRIPTIONS: Dict[str, str] = {
    "ct": "partial configuration: slice total equals the sum of its vertex counts",
    "setextra": "slice total = pi(K) * set + extra",
    "extraUpper": "extra pebbles stay below pi(K)",
    "pairUpper": "pair <= extra / 2",
    "pairLower": "pair >= (extra - 1) / 2",
    "yzero": "y at set count 0 is fixed to 1",
    "yupper": "y_s = 1 only if the total set count reaches s",
    "ylower": "y_s = 1 whenever the total set count reaches s",
    "satUpper": "saturation <= slice total / |K|",
    "satLower": "saturation >= (slice total - |K| + 1) / |K|",
    "xzero": "x at saturation 0 is fixed to 1",
    "xupper": "x_t = 1 only if the slice is t-saturated",
    "xlower": "x_t = 1 whenever the slice is t-saturated",
    "coveredUpper": "covered only where pebbles sit",
    "coveredLower": "covered wherever pebbles sit",
    "support": "slice support counts covered vertices",
    "stackUpper": "2^l-stacks bounded by the loose pebbles when goodStack holds",
    "stackUpper2": "no 2^l-stacks counted when goodStack fails",
    "stackLower": "2^l-stacks forced by the pigeonhole principle",
    "goodStackUpper": "goodStack off when the stack bound is negative",
    "goodStackLower": "goodStack on when the stack bound is positive",
    "supportLessUpper": "supportLess = 1 only if support <= s",
    "supportLessLower": "supportLess = 1 whenever support <= s",
    "supportMoreUpper": "supportMore = 1 only if support >= s",
    "supportMoreLower": "supportMore = 1 whenever support >= s",
    "supportIsMore": "supportIs <= supportMore",
    "supportIsLess": "supportIs <= supportLess",
    "supportIsBoth": "supportIs + 1 >= supportMore + supportLess",
    "n2peb": "2-pebbling requirement of the slice from its support size",
    "n2pebmon": "monotone 2-pebbling requirement of the slice",
    "can2pebLower": "can2peb on when the slice holds its 2-pebbling requirement",
    "can2pebUpper": "can2peb off when the slice falls short of its 2-pebbling requirement",
    "nrootLbound": "pebbles reaching the root copy, with 2-pebbling credit",
    "nrootLboundRoot": "pebbles reaching the root copy, counting those already there",
    "A1": "total K-set count stays below pi(frame)",
    "A2": "completing sets around a central slice with hop moves",
    "A3": "pairs moved across a complete bipartite pattern complete sets",
    "A4": "pebbles reaching the root copies stay below pi(frame)",
    "A5": "2-pebbling a slice plus sets in a star around it",
    "A6": "stacks into a slice build a 2^d-stack at the root copy",
    "B1": "the root slice holds no full set",
    "B2": "stacks from every slice into the root slice stay below pi(K)",
    "B3": "loose pebbles along a path into the root slice",
}


@dataclass
class ConstraintEnumerationPolicy:
    """Caps on the parameterized constraint families; zero disables a family."""
    a2_max_set_size: int = A2_MAX_SET_SIZE
    a2_max_eta: int = A2_MAX_ETA
    a3_max_s_size: int = A3_MAX_S_SIZE
    a3_max_t_size: int = A3_MAX_T_SIZE
    a5_max_star: int = A5_MAX_STAR
    b3_max_path_length: Optional[int] = None  # None: diameter of the frame graph
    b3_paths_per_root: int = B3_PATHS_PER_ROOT

    def __post_init__(self):
        for f in fields(self):
            value = getattr(self, f.name)
            if value is None and f.name == "b3_max_path_length":
                continue
            if not isinstance(value, int) or isinstance(value, bool) or value < 0:
                raise ConfigurationError(f"policy field {f.name} must be a nonnegative integer, got {value!r}")

    def to_dict(self) -> Dict[str, Any]:
        return asdict(self)

    @property
    def digest(self) -> str:
        """Stable hash used as the cache key component."""
        text = json.dumps(self.to_dict(), sort_keys=True)
        return hashlib.sha256(text.encode('utf-8')).hexdigest()[:16]

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> "ConstraintEnumerationPolicy":
        known = {f.name for f in fields(cls)}
        unknown = set(data) - known
        if unknown:
            raise ConfigurationError(f"unknown policy fields: {', '.join(sorted(unknown))}")
        return cls(**data)


def load_policy(path: Path | None) -> ConstraintEnumerationPolicy:
    """Policy from a JSON object holding any subset of the fields."""
    if path is None:
        return ConstraintEnumerationPolicy()
    try:
        data = json.loads(Path(path).read_text(encoding='utf-8'))
    except (OSError, json.JSONDecodeError) as exc:
        raise ConfigurationError(f"Cannot read policy file {path}: {exc}") from exc
    if not isinstance(data, dict):
        raise ConfigurationError(f"{path}: a policy file holds one JSON object")
    policy = ConstraintEnumerationPolicy.from_dict(data)
    logging.debug(f"Policy loaded from {path}: {policy.to_dict()}")
    return policy


@dataclass(frozen=True)
class ProductInstance:
    """Base graphs with their profiles and the root (r_G, r_H) of G □ H."""
    g: Graph
    h: Graph
    g_profile: PebblingProfile
    h_profile: PebblingProfile
    root: Tuple[int, int] = (1, 1)

    def __post_init__(self):
        r_g, r_h = self.root
        if not (1 <= r_g <= self.g.vertex_count and 1 <= r_h <= self.h.vertex_count):
            raise ConfigurationError(f"root {self.root} outside {self.g.name} x {self.h.name}")
        for graph, profile in ((self.g, self.g_profile), (self.h, self.h_profile)):
            if graph.vertex_count != profile.vertex_count:
                raise ConfigurationError(
                    f"profile {profile.name} has {profile.vertex_count} vertices, {graph.name} has {graph.vertex_count}"
                )

    @property
    def name(self) -> str:
        return f"{self.g.name}*{self.h.name}"

    def with_root(self, root: Tuple[int, int]) -> "ProductInstance":
        return ProductInstance(self.g, self.h, self.g_profile, self.h_profile, tuple(root))

    def swapped(self) -> "ProductInstance":
        return ProductInstance(self.h, self.g, self.h_profile, self.g_profile, (self.root[1], self.root[0]))

    def factor(self, k: str) -> Graph:
        return self.g if k == "G" else self.h

    def frame(self, k: str) -> Graph:
        return self.h if k == "G" else self.g

    def profile(self, k: str) -> PebblingProfile:
        return self.g_profile if k == "G" else self.h_profile

    def frame_profile(self, k: str) -> PebblingProfile:
        return self.h_profile if k == "G" else self.g_profile

    def root_of(self, k: str) -> int:
        """r_K"""
        return self.root[0] if k == "G" else self.root[1]

    def frame_root(self, k: str) -> int:
        """r_K-bar, the index of the root slice"""
        return self.root[1] if k == "G" else self.root[0]

    def cell(self, k: str, vertex: int, slice_index: int) -> Tuple[int, int]:
        """Product coordinates (i, j) of `vertex` of K inside slice `slice_index`."""
        return (vertex, slice_index) if k == "G" else (slice_index, vertex)

    def slice_cells(self, k: str, slice_index: int) -> List[Tuple[int, int]]:
        return [self.cell(k, v, slice_index) for v in self.factor(k).vertices]

    def label(self, i: int, j: int) -> int:
        return product_label(i, j, self.h.vertex_count)


# Variable names. j is always a slice index (a vertex of the frame graph).
def c_var(i: int, j: int) -> str:
    return f"c_{i}_{j}"


def covered_var(i: int, j: int) -> str:
    return f"covered_{i}_{j}"


def slice_var(kind: str, k: str, j: int) -> str:
    """ct, set, extra, sat, pair, support, n2peb, n2pebmon, nroot, can2peb"""
    return f"{kind}_{k}_{j}"


def stack_var(k: str, j: int, d: int) -> str:
    return f"stack_{k}_{j}_{d}"


def good_stack_var(k: str, j: int, d: int) -> str:
    return f"goodStack_{k}_{j}_{d}"


def x_var(k: str, j: int, t: int) -> str:
    return f"x_{k}_{j}_{t}"


def y_var(k: str, s: int) -> str:
    return f"y_{k}_{s}"


def support_level_var(kind: str, k: str, j: int, s: int) -> str:
    """supportIs, supportLess, supportMore"""
    return f"{kind}_{k}_{j}_{s}"


@dataclass(frozen=True)
class ModelParameters:
    """Scalars and index sets derived from the instance."""
    big_m: int
    pi: Dict[str, int]
    size: Dict[str, int]
    metrics: Dict[str, MetricData]
    set_counts: Dict[str, range]
    saturation_levels: Dict[str, range]
    distances: Dict[str, range]
    u_sets: Dict[str, List[int]]
    u_mon_sets: Dict[str, List[int]]
    difference: Dict[str, Dict[int, int]]
    difference_mon: Dict[str, Dict[int, int]]

    def frame(self, k: str) -> str:
        return "H" if k == "G" else "G"

    def saturation_top(self, k: str) -> int:
        return self.saturation_levels[k][-1]

    def stack_levels(self, k: str) -> range:
        """Hop lengths across the frame graph, D_K-bar."""
        return self.distances[self.frame(k)]

    def support_levels(self, k: str) -> List[int]:
        return sorted(set(self.u_sets[k]) | set(self.u_mon_sets[k]))

    def frame_distance(self, k: str, a: int, b: int) -> int:
        return self.metrics[self.frame(k)].distance(a, b)


def derive_parameters(inst: ProductInstance) -> ModelParameters:
    """All index sets and scalars of the model."""
    pi = {"G": inst.g_profile.pi, "H": inst.h_profile.pi}
    size = {"G": inst.g.vertex_count, "H": inst.h.vertex_count}
    metrics = {"G": metric(inst.g), "H": metric(inst.h)}
    product_pi = pi["G"] * pi["H"]
    return ModelParameters(
        big_m=2 * product_pi,
        pi=pi,
        size=size,
        metrics=metrics,
        set_counts={k: range(0, pi["H" if k == "G" else "G"]) for k in ORIENTATIONS},
        saturation_levels={k: range(0, (product_pi - 1) // size[k] + 1) for k in ORIENTATIONS},
        distances={k: range(1, metrics[k].diameter + 1) for k in ORIENTATIONS},
        u_sets={k: inst.profile(k).u_set for k in ORIENTATIONS},
        u_mon_sets={k: inst.profile(k).u_mon_set for k in ORIENTATIONS},
        difference={k: inst.profile(k).difference for k in ORIENTATIONS},
        difference_mon={k: inst.profile(k).difference_mon for k in ORIENTATIONS},
    )


@dataclass(frozen=True)
class Variable:
    name: str
    kind: str
    role: str
    index: Tuple


@dataclass
class VariableCatalog:
    """Model variables keyed by name, in deterministic insertion order."""
    variables: Dict[str, Variable] = field(default_factory=dict)

    def add(self, name: str, kind: str, role: str, *index) -> None:
        if name in self.variables:
            raise ValueError(f"duplicate variable {name}")
        self.variables[name] = Variable(name, kind, role, tuple(index))

    def __contains__(self, name: str) -> bool:
        return name in self.variables

    def __len__(self) -> int:
        return len(self.variables)

    def __iter__(self) -> Iterator[Variable]:
        return iter(self.variables.values())

    def names(self, kind: Optional[str] = None) -> List[str]:
        return [v.name for v in self.variables.values() if kind is None or v.kind == kind]

    def by_role(self, role: str) -> List[Variable]:
        return [v for v in self.variables.values() if v.role == role]


def build_variables(inst: ProductInstance, params: ModelParameters) -> VariableCatalog:
    """Every decision variable over its index set, both orientations."""
    catalog = VariableCatalog()
    for i in inst.g.vertices:
        for j in inst.h.vertices:
            catalog.add(c_var(i, j), INTEGER, "c", i, j)
    for i in inst.g.vertices:
        for j in inst.h.vertices:
            catalog.add(covered_var(i, j), BINARY, "covered", i, j)

    for k in ORIENTATIONS:
        frame = inst.frame(k)
        for j in frame.vertices:
            for kind in ("ct", "set", "extra", "sat", "pair", "support", "n2peb", "n2pebmon", "nroot"):
                catalog.add(slice_var(kind, k, j), INTEGER, kind, k, j)
            for d in params.stack_levels(k):
                catalog.add(stack_var(k, j, d), INTEGER, "stack", k, j, d)
            for t in params.saturation_levels[k]:
                catalog.add(x_var(k, j, t), BINARY, "x", k, j, t)
            for d in params.stack_levels(k):
                catalog.add(good_stack_var(k, j, d), BINARY, "goodStack", k, j, d)
            catalog.add(slice_var("can2peb", k, j), BINARY, "can2peb", k, j)
            for s in params.support_levels(k):
                for kind in ("supportIs", "supportLess", "supportMore"):
                    catalog.add(support_level_var(kind, k, j, s), BINARY, kind, k, j, s)
        for s in params.set_counts[k]:
            catalog.add(y_var(k, s), BINARY, "y", k, s)
    return catalog


@dataclass
class ModelIR:
    """Solver-agnostic integer program: maximize the sum of the objective variables."""
    instance: ProductInstance
    params: ModelParameters
    policy: ConstraintEnumerationPolicy
    catalog: VariableCatalog
    constraints: List[LinearConstraint]
    objective: Tuple[str, ...]

    @property
    def constraint_count(self) -> int:
        return len(self.constraints)

    def family_counts(self) -> Dict[str, int]:
        counts: Dict[str, int] = {}
        for con in self.constraints:
            counts[con.family] = counts.get(con.family, 0) + 1
        return counts

    @property
    def trivial_upper_bound(self) -> int:
        """Optimum cap implied by A.1 and extra <= pi(K) - 1 alone."""
        p = self.params
        return min(
            (p.pi[p.frame(k)] - 1) * p.pi[k] + p.size[p.frame(k)] * (p.pi[k] - 1)
            for k in ORIENTATIONS
        )

    def configuration_values(self, assignment: Dict[str, int]) -> List[int]:
        """Pebble counts in product-label order."""
        inst = self.instance
        return [assignment[c_var(i, j)] for i in inst.g.vertices for j in inst.h.vertices]


def assemble_model(inst: ProductInstance, policy: Optional[ConstraintEnumerationPolicy] = None) -> ModelIR:
    """Catalog, defining constraints, pebbling constraints and objective."""
    from pebblebound.defining import build_defining_constraints
    from pebblebound.families import build_A_constraints, build_B_constraints

    policy = policy or ConstraintEnumerationPolicy()
    params = derive_parameters(inst)
    catalog = build_variables(inst, params)
    constraints = build_defining_constraints(inst, params, catalog)
    constraints += build_A_constraints(inst, params, catalog, policy)
    constraints += build_B_constraints(inst, params, catalog, policy)

    for con in constraints:
        for name, _ in con.terms:
            if name not in catalog:
                raise ValueError(f"constraint {con.label} references unknown variable {name}")
    objective = tuple(v.name for v in catalog.by_role("c"))
    model = ModelIR(inst, params, policy, catalog, constraints, objective)
    logging.debug(
        f"Model {inst.name} root {inst.root}: {len(catalog)} variables, {len(constraints)} constraints"
    )
    return model


def product_configuration(inst: ProductInstance, counts: Sequence[int]) -> Dict[Tuple[int, int], int]:
    """Label-ordered counts keyed by product coordinates."""
    expected = inst.g.vertex_count * inst.h.vertex_count
    if len(counts) != expected:
        raise ValueError(f"configuration has {len(counts)} entries, {inst.name} has {expected} vertices")
    return {
        (i, j): int(counts[inst.label(i, j) - 1])
        for i in inst.g.vertices for j in inst.h.vertices
    }
