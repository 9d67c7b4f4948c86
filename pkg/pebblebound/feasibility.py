"""
pebblebound/feasibility.py
Canonical variable assignments for pebble configurations and exact-arithmetic
feasibility checks against a model.
"""

import logging
from fractions import Fraction
from math import ceil
from typing import Dict, List, Mapping, Optional, Sequence

from pebblebound.errors import FeasibilityError, IntegrityError
from pebblebound.model import (
    BINARY, ORIENTATIONS, ModelIR, ModelParameters, ProductInstance, c_var, covered_var,
    derive_parameters, good_stack_var, product_configuration, slice_var, stack_var,
    support_level_var, x_var, y_var,
)


def derive_assignment(inst: ProductInstance, counts: Sequence[int],
                      params: Optional[ModelParameters] = None) -> Dict[str, int]:
    """Assignment induced by a configuration on G □ H (counts in product-label order).

    Definitional variables take their defining values; stack, goodStack and
    nroot take the least values their inequalities allow.
    """
    params = params or derive_parameters(inst)
    config = product_configuration(inst, counts)
    values: Dict[str, int] = {}
    for (i, j), count in config.items():
        values[c_var(i, j)] = count
        values[covered_var(i, j)] = 1 if count > 0 else 0

    for k in ORIENTATIONS:
        pi_k = params.pi[k]
        size_k = params.size[k]
        total_sets = 0
        for j in inst.frame(k).vertices:
            cells = inst.slice_cells(k, j)
            ct = sum(config[cell] for cell in cells)
            support = sum(1 for cell in cells if config[cell] > 0)
            sat = ct // size_k
            values[slice_var("ct", k, j)] = ct
            values[slice_var("set", k, j)] = ct // pi_k
            values[slice_var("extra", k, j)] = ct % pi_k
            values[slice_var("pair", k, j)] = (ct % pi_k) // 2
            values[slice_var("sat", k, j)] = sat
            values[slice_var("support", k, j)] = support
            total_sets += ct // pi_k

            for t in params.saturation_levels[k]:
                values[x_var(k, j, t)] = 1 if sat >= t else 0

            for d in params.stack_levels(k):
                width = 2 ** d
                loose = ct - (width - 1) * (support - 1)
                values[good_stack_var(k, j, d)] = 1 if loose >= 0 else 0
                values[stack_var(k, j, d)] = max(0, ceil(Fraction(ct - (width - 1) * support, width)))

            for s in params.support_levels(k):
                values[support_level_var("supportIs", k, j, s)] = 1 if support == s else 0
                values[support_level_var("supportLess", k, j, s)] = 1 if support <= s else 0
                values[support_level_var("supportMore", k, j, s)] = 1 if support >= s else 0

            n2peb = 2 * pi_k - support + 1 + sum(
                params.difference[k][s] for s in params.u_sets[k] if support == s
            )
            n2peb_mon = 2 * pi_k - support + 1 + sum(
                params.difference_mon[k][s] for s in params.u_mon_sets[k] if support == s
            )
            can = 1 if ct >= n2peb else 0
            values[slice_var("n2peb", k, j)] = n2peb
            values[slice_var("n2pebmon", k, j)] = n2peb_mon
            values[slice_var("can2peb", k, j)] = can

            at_root = config[inst.cell(k, inst.root_of(k), j)]
            values[slice_var("nroot", k, j)] = max(
                0,
                ceil(2 * can + Fraction(ct - n2peb + 1, pi_k) - 1),
                ceil(Fraction(ct - at_root + 1, pi_k) - 1 + at_root),
            )

        for s in params.set_counts[k]:
            values[y_var(k, s)] = 1 if total_sets >= s else 0
    return values


def check_feasibility(model: ModelIR, assignment: Mapping[str, int]) -> List[str]:
    """Labels of violated constraints in exact arithmetic; empty iff feasible.

    Variable domains are reported as "bounds_<variable>".
    """
    missing = [name for name in model.catalog.names() if name not in assignment]
    if missing:
        raise FeasibilityError(f"assignment lacks {len(missing)} variables, e.g. {missing[:5]}")

    violated: List[str] = []
    for var in model.catalog:
        value = assignment[var.name]
        if value != int(value) or value < 0 or (var.kind == BINARY and value > 1):
            violated.append(f"bounds_{var.name}")
    for con in model.constraints:
        if con.violated_by(assignment):
            violated.append(con.label)
    return violated


def accept_incumbent(model: ModelIR, raw: Mapping[str, int]) -> Dict[str, int]:
    """Exactly verified assignment for a solver incumbent.

    The rounded solver values are tried first, then the canonical assignment
    of the incumbent's pebble counts (the objective only reads those).
    """
    assignment = {name: int(raw.get(name, 0)) for name in model.catalog.names()}
    violated = check_feasibility(model, assignment)
    if not violated:
        return assignment

    counts = model.configuration_values(assignment)
    canonical = derive_assignment(model.instance, counts, model.params)
    canonical_violations = check_feasibility(model, canonical)
    if not canonical_violations:
        logging.warning(
            f"Incumbent for root {model.instance.root} violated {len(violated)} constraints after rounding "
            f"(e.g. {violated[0]}); accepted its canonical assignment instead"
        )
        return canonical
    raise IntegrityError(
        f"Incumbent for {model.instance.name} root {model.instance.root} fails exact verification",
        diagnostics="\n".join(violated[:50]),
    )
