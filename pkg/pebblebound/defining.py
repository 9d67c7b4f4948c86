"""
pebblebound/defining.py
Constraints tying every auxiliary variable to the pebble counts c_{i,j}.
"""

from typing import List

from pebblebound.linexpr import EQ, GE, LE, LinExpr, LinearConstraint, constraint
from pebblebound.model import (
    ORIENTATIONS, ModelParameters, ProductInstance, VariableCatalog,
    c_var, covered_var, good_stack_var, slice_var, stack_var, support_level_var, x_var, y_var,
)

V = LinExpr.var


def _slice_constraints(inst: ProductInstance, params: ModelParameters, k: str, j: int) -> List[LinearConstraint]:
    out: List[LinearConstraint] = []
    pi_k = params.pi[k]
    size_k = params.size[k]
    big_m = params.big_m
    ct = V(slice_var("ct", k, j))
    extra = V(slice_var("extra", k, j))
    sat = V(slice_var("sat", k, j))
    support = V(slice_var("support", k, j))
    cells = inst.slice_cells(k, j)

    # partial configuration, sets and pairs
    out.append(constraint("ct", (k, j), ct, EQ, LinExpr.total(c_var(*cell) for cell in cells)))
    out.append(constraint("setextra", (k, j), ct, EQ, pi_k * V(slice_var("set", k, j)) + extra))
    out.append(constraint("extraUpper", (k, j), extra, LE, pi_k - 1))
    pair = V(slice_var("pair", k, j))
    out.append(constraint("pairUpper", (k, j), pair, LE, extra / 2))
    out.append(constraint("pairLower", (k, j), pair, GE, (extra - 1) / 2))

    # saturation
    out.append(constraint("satUpper", (k, j), sat, LE, ct / size_k))
    out.append(constraint("satLower", (k, j), sat, GE, (ct - size_k + 1) / size_k))
    levels = params.saturation_levels[k]
    out.append(constraint("xzero", (k, j), V(x_var(k, j, 0)), EQ, 1))
    for t in levels[1:]:
        x = V(x_var(k, j, t))
        out.append(constraint("xupper", (k, j, t), x, LE, sat / t))
        out.append(constraint("xlower", (k, j, t), x, GE, (sat - t + 1) / (len(levels) + 1)))

    # support
    out.append(constraint("support", (k, j), support, EQ, LinExpr.total(covered_var(*cell) for cell in cells)))

    # stacks: goodStack says the pigeonhole bound below is nonnegative
    for d in params.stack_levels(k):
        width = 2 ** d
        stack = V(stack_var(k, j, d)) * width
        good = V(good_stack_var(k, j, d))
        loose = ct - (width - 1) * (support - 1)
        out.append(constraint("stackUpper", (k, j, d), stack, LE, loose + big_m * (1 - good)))
        out.append(constraint("stackUpper2", (k, j, d), stack, LE, big_m * good))
        out.append(constraint("stackLower", (k, j, d), stack, GE, ct - (width - 1) * support))
        out.append(constraint("goodStackUpper", (k, j, d), good, LE, 1 + loose / big_m))
        out.append(constraint("goodStackLower", (k, j, d), good, GE, loose / big_m))

    # support indicators, exact for every s in 0..|K|; n2peb reads supportIs at s = 0
    for s in params.support_levels(k):
        is_ = V(support_level_var("supportIs", k, j, s))
        less = V(support_level_var("supportLess", k, j, s))
        more = V(support_level_var("supportMore", k, j, s))
        out.append(constraint("supportLessUpper", (k, j, s), less, LE, (size_k - support + 1) / (size_k - s + 1)))
        out.append(constraint("supportLessLower", (k, j, s), less, GE, (s + 1 - support) / (s + 1)))
        out.append(constraint("supportMoreUpper", (k, j, s), more, LE, (support + 1) / (s + 1)))
        out.append(constraint("supportMoreLower", (k, j, s), more, GE, (support - s + 1) / (size_k - s + 1)))
        out.append(constraint("supportIsMore", (k, j, s), is_, LE, more))
        out.append(constraint("supportIsLess", (k, j, s), is_, LE, less))
        out.append(constraint("supportIsBoth", (k, j, s), is_ + 1, GE, more + less))

    # 2-pebbling requirements
    baseline = 2 * pi_k - support + 1
    n2peb = baseline + LinExpr()
    for s in params.u_sets[k]:
        n2peb = n2peb + params.difference[k][s] * V(support_level_var("supportIs", k, j, s))
    n2peb_mon = baseline + LinExpr()
    for s in params.u_mon_sets[k]:
        n2peb_mon = n2peb_mon + params.difference_mon[k][s] * V(support_level_var("supportIs", k, j, s))
    out.append(constraint("n2peb", (k, j), V(slice_var("n2peb", k, j)), EQ, n2peb))
    out.append(constraint("n2pebmon", (k, j), V(slice_var("n2pebmon", k, j)), EQ, n2peb_mon))

    can = V(slice_var("can2peb", k, j))
    need = V(slice_var("n2peb", k, j))
    out.append(constraint("can2pebLower", (k, j), big_m * can, GE, ct - need + 1))
    out.append(constraint("can2pebUpper", (k, j), big_m * (1 - can), GE, need - ct))

    # pebbles that can reach the copy of r_K inside this slice
    nroot = V(slice_var("nroot", k, j))
    out.append(constraint("nrootLbound", (k, j), nroot, GE, 2 * can + (ct - need + 1) / pi_k - 1))
    at_root = V(c_var(*inst.cell(k, inst.root_of(k), j)))
    out.append(constraint("nrootLboundRoot", (k, j), nroot, GE, (ct - at_root + 1) / pi_k - 1 + at_root))
    return out


def build_defining_constraints(inst: ProductInstance, params: ModelParameters,
                               catalog: VariableCatalog) -> List[LinearConstraint]:
    """Every variable-defining constraint, both orientations."""
    out: List[LinearConstraint] = []
    big_m = params.big_m
    for i in inst.g.vertices:
        for j in inst.h.vertices:
            c = V(c_var(i, j))
            covered = V(covered_var(i, j))
            out.append(constraint("coveredUpper", (i, j), covered, LE, c))
            out.append(constraint("coveredLower", (i, j), covered, GE, c / big_m))

    for k in ORIENTATIONS:
        frame = inst.frame(k)
        for j in frame.vertices:
            out.extend(_slice_constraints(inst, params, k, j))

        total_sets = LinExpr.total(slice_var("set", k, j) for j in frame.vertices)
        pi_frame = params.pi[params.frame(k)]
        out.append(constraint("yzero", (k,), V(y_var(k, 0)), EQ, 1))
        for s in params.set_counts[k][1:]:
            y = V(y_var(k, s))
            out.append(constraint("yupper", (k, s), y, LE, total_sets / s))
            out.append(constraint("ylower", (k, s), y, GE, (total_sets - s + 1) / pi_frame))
    return out
