"""
pebblebound/families.py
Pebbling constraints. Each states that the pebbles available for one
pebbling strategy, plus one, stay at or below what the strategy requires.

Strategy A accumulates pi(K-bar) K-sets across the K-slices (or a 2^d-stack
on the root copy); strategy B moves pebbles into the root slice itself.
"""

import itertools
import logging
from typing import Iterator, List, Tuple

import networkx as nx

from pebblebound.linexpr import EQ, LE, LinExpr, LinearConstraint, constraint
from pebblebound.model import (
    ORIENTATIONS, ConstraintEnumerationPolicy, ModelParameters, ProductInstance, VariableCatalog,
    slice_var, stack_var, x_var, y_var,
)

V = LinExpr.var


def max_hop_length(pi_k: int) -> int:
    """Longest hop worth making from a slice: a longer one spends a whole K-set."""
    return (pi_k - 1).bit_length() - 1


def _missing(params: ModelParameters, k: str, j: int) -> LinExpr:
    """pi(K) - extra_{K,j}: pebbles needed to complete one more set in K_j."""
    return params.pi[k] - V(slice_var("extra", k, j))


def _a1(inst: ProductInstance, params: ModelParameters, k: str) -> LinearConstraint:
    total_sets = LinExpr.total(slice_var("set", k, j) for j in inst.frame(k).vertices)
    return constraint("A1", (k,), total_sets + 1, LE, params.pi[params.frame(k)])


def _a2(inst: ProductInstance, params: ModelParameters, k: str,
        policy: ConstraintEnumerationPolicy) -> Iterator[LinearConstraint]:
    frame = inst.frame(k)
    pi_frame = params.pi[params.frame(k)]
    reach = max_hop_length(params.pi[k])
    top = params.saturation_top(k)
    big_m = params.big_m
    for v in frame.vertices:
        nearby = [w for w in frame.vertices if w != v and params.frame_distance(k, v, w) <= reach]
        for eta in range(1, min(policy.a2_max_eta, pi_frame) + 1):
            for size in range(eta, min(policy.a2_max_set_size, pi_frame, len(nearby)) + 1):
                for subset in itertools.combinations(nearby, size):
                    d = max(params.frame_distance(k, v, w) for w in subset)
                    chi = (2 ** d - 1) + size - eta
                    if chi > top:
                        continue
                    available = params.size[k] * (size - eta) + V(slice_var("extra", k, v)) + 1
                    required = LinExpr()
                    for w in subset:
                        required = required + 2 ** params.frame_distance(k, v, w) * _missing(params, k, w)
                    required = (
                        required
                        + big_m * (1 - V(x_var(k, v, chi)))
                        + big_m * (1 - V(y_var(k, pi_frame - eta)))
                    )
                    yield constraint("A2", (k, v, eta, subset), available, LE, required)


def _a3(inst: ProductInstance, params: ModelParameters, k: str,
        policy: ConstraintEnumerationPolicy) -> Iterator[LinearConstraint]:
    frame = inst.frame(k)
    pi_frame = params.pi[params.frame(k)]
    if params.saturation_top(k) < 1:
        return
    big_m = params.big_m
    t_cap = min(policy.a3_max_t_size, pi_frame)
    for s_size in range(1, policy.a3_max_s_size + 1):
        for sources in itertools.combinations(frame.vertices, s_size):
            common = set(frame.neighbors(sources[0]))
            for i in sources[1:]:
                common &= set(frame.neighbors(i))
            common -= set(sources)
            for t_size in range(1, min(t_cap, len(common)) + 1):
                for targets in itertools.combinations(sorted(common), t_size):
                    available = LinExpr.total(slice_var("pair", k, i) for i in sources) + 1
                    required = LinExpr()
                    for j in targets:
                        required = required + _missing(params, k, j)
                    saturated = LinExpr.total(x_var(k, i, 1) for i in sources)
                    required = (
                        required
                        + big_m * (s_size - saturated)
                        + big_m * (1 - V(y_var(k, pi_frame - t_size)))
                    )
                    yield constraint("A3", (k, sources, targets), available, LE, required)


def _a4(inst: ProductInstance, params: ModelParameters, k: str) -> LinearConstraint:
    reaching = LinExpr.total(slice_var("nroot", k, j) for j in inst.frame(k).vertices)
    return constraint("A4", (k,), reaching + 1, LE, params.pi[params.frame(k)])


def _a5(inst: ProductInstance, params: ModelParameters, k: str,
        policy: ConstraintEnumerationPolicy) -> Iterator[LinearConstraint]:
    frame = inst.frame(k)
    pi_k = params.pi[k]
    pi_frame = params.pi[params.frame(k)]
    star_cap = min(policy.a5_max_star, pi_frame - 3)
    for v in frame.vertices:
        for size in range(1, min(star_cap, frame.degree(v)) + 1):
            for star in itertools.combinations(frame.neighbors(v), size):
                required = LinExpr()
                for j in star:
                    required = required + 2 * _missing(params, k, j)
                required = required + V(slice_var("n2peb", k, v)) + (pi_frame - (2 + size)) * pi_k
                yield constraint("A5", (k, v, star), V(slice_var("ct", k, v)) + 1, LE, required)


def _a6(inst: ProductInstance, params: ModelParameters, k: str) -> Iterator[LinearConstraint]:
    frame = inst.frame(k)
    root_slice = inst.frame_root(k)
    for v in frame.vertices:
        if v == root_slice:
            continue
        d = params.frame_distance(k, v, root_slice)
        stacks = LinExpr.total(
            stack_var(k, j, params.frame_distance(k, v, j))
            for j in frame.vertices if j not in (root_slice, v)
        )
        available = stacks + V(slice_var("ct", k, v)) + 1
        required = V(slice_var("n2pebmon", k, v)) + (2 ** d - 2) * params.pi[k]
        yield constraint("A6", (k, v), available, LE, required)


def build_A_constraints(inst: ProductInstance, params: ModelParameters, catalog: VariableCatalog,
                        policy: ConstraintEnumerationPolicy) -> List[LinearConstraint]:
    """A.1 through A.6 for both orientations."""
    out: List[LinearConstraint] = []
    for k in ORIENTATIONS:
        out.append(_a1(inst, params, k))
        out.extend(_a2(inst, params, k, policy))
        out.extend(_a3(inst, params, k, policy))
        out.append(_a4(inst, params, k))
        out.extend(_a5(inst, params, k, policy))
        out.extend(_a6(inst, params, k))
    return out


def root_paths(inst: ProductInstance, params: ModelParameters, k: str,
               policy: ConstraintEnumerationPolicy) -> List[Tuple[int, ...]]:
    """Simple paths r = p0 ~ p1 ~ ... ~ p_alpha in the frame graph, shortest first per terminal."""
    frame = inst.frame(k)
    root_slice = inst.frame_root(k)
    diameter = params.metrics[params.frame(k)].diameter
    max_length = diameter if policy.b3_max_path_length is None else policy.b3_max_path_length
    paths: List[Tuple[int, ...]] = []
    if max_length < 1 or policy.b3_paths_per_root < 1:
        return paths
    for terminal in frame.vertices:
        if terminal == root_slice:
            continue
        taken = 0
        for path in nx.shortest_simple_paths(frame.nx_graph, root_slice, terminal):
            if len(path) - 1 > max_length or taken >= policy.b3_paths_per_root:
                break
            paths.append(tuple(path))
            taken += 1
    return paths


def _b3(inst: ProductInstance, params: ModelParameters, k: str,
        policy: ConstraintEnumerationPolicy) -> Iterator[LinearConstraint]:
    if params.saturation_top(k) < 1:
        return
    root_slice = inst.frame_root(k)
    size_k = params.size[k]
    for path in root_paths(inst, params, k, policy):
        alpha = len(path) - 1
        loose = LinExpr()
        for i, p in enumerate(path[1:], start=1):
            loose = loose + 2 ** (alpha - i) * (V(slice_var("ct", k, p)) - size_k)
        saturated = LinExpr.total(x_var(k, p, 1) for p in path[1:])
        required = (
            2 ** alpha * (params.pi[k] - V(slice_var("ct", k, root_slice)))
            + 2 ** alpha * params.big_m * (alpha - saturated)
        )
        yield constraint("B3", (k, path), loose + 1, LE, required)


def build_B_constraints(inst: ProductInstance, params: ModelParameters, catalog: VariableCatalog,
                        policy: ConstraintEnumerationPolicy) -> List[LinearConstraint]:
    """B.1 (both orientations), B.2 and B.3."""
    out: List[LinearConstraint] = []
    for k in ORIENTATIONS:
        root_slice = inst.frame_root(k)
        out.append(constraint("B1", (k, root_slice), V(slice_var("set", k, root_slice)), EQ, 0))
    for k in ORIENTATIONS:
        frame = inst.frame(k)
        root_slice = inst.frame_root(k)
        stacks = LinExpr.total(
            stack_var(k, j, params.frame_distance(k, j, root_slice))
            for j in frame.vertices if j != root_slice
        )
        available = stacks + V(slice_var("ct", k, root_slice)) + 1
        out.append(constraint("B2", (k,), available, LE, params.pi[k]))
        out.extend(_b3(inst, params, k, policy))
    logging.debug(f"B families for {inst.name}: {len(out)} constraints")
    return out
