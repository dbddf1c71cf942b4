"""Independent reference implementations used as test oracles.

Everything here deliberately avoids the production code paths it checks:
satisfiability via bitmask truth tables, unit propagation via naive clause
re-scanning, activity decay via literal whole-table multiplication, and
modularity optima via exhaustive partition enumeration.
"""

from __future__ import annotations

import random

import numpy as np

from satscope.cnf import Clause, Formula

_mask_cache: dict[int, dict[int, int]] = {}


def var_masks(n: int) -> dict[int, int]:
    """masks[v] has bit a set iff variable v is true in assignment a (a in [0, 2^n))."""
    if n in _mask_cache:
        return _mask_cache[n]
    total = 1 << n
    masks = {}
    for v in range(1, n + 1):
        block = 1 << (v - 1)
        m = ((1 << block) - 1) << block
        width = 2 * block
        while width < total:
            m |= m << width
            width <<= 1
        masks[v] = m
    _mask_cache[n] = masks
    return masks


def clause_mask(lits, n: int) -> int:
    full = (1 << (1 << n)) - 1
    masks = var_masks(n)
    cm = 0
    for l in lits:
        m = masks[abs(l)]
        cm |= m if l > 0 else (~m & full)
    return cm


def formula_mask(formula: Formula) -> int:
    """Bitmask of all satisfying assignments (exhaustive truth table)."""
    n = formula.num_vars
    fm = (1 << (1 << n)) - 1
    for c in formula.clauses:
        fm &= clause_mask(c.lits, n)
        if fm == 0:
            return 0
    return fm


def brute_force_sat(formula: Formula) -> bool:
    return formula_mask(formula) != 0


def brute_force_model(formula: Formula) -> dict[int, bool] | None:
    fm = formula_mask(formula)
    if fm == 0:
        return None
    a = (fm & -fm).bit_length() - 1  # lowest satisfying assignment
    return {v: bool(a >> (v - 1) & 1) for v in range(1, formula.num_vars + 1)}


def clause_implied(formula: Formula, lits) -> bool:
    """True iff every satisfying assignment of the formula satisfies the clause."""
    n = formula.num_vars
    return formula_mask(formula) & ~clause_mask(lits, n) == 0


def naive_unit_closure(formula: Formula, assumptions=()):
    """Quadratic re-scanning unit propagation; returns (assignment dict, conflicted)."""
    assign: dict[int, bool] = {}
    for l in assumptions:
        v = abs(l)
        want = l > 0
        if v in assign and assign[v] != want:
            return assign, True
        assign[v] = want
    changed = True
    while changed:
        changed = False
        for clause in formula.clauses:
            unassigned = []
            satisfied = False
            for l in clause.lits:
                v = abs(l)
                if v in assign:
                    if assign[v] == (l > 0):
                        satisfied = True
                        break
                else:
                    unassigned.append(l)
            if satisfied:
                continue
            if not unassigned:
                return assign, True
            if len(unassigned) == 1:
                l = unassigned[0]
                assign[abs(l)] = l > 0
                changed = True
    return assign, False


class DirectDecayActivity:
    """Reference VSIDS bookkeeping: decay the whole table, then bump by 1.

    After k conflicts, a variable bumped at conflicts J holds
    sum_{j in J} f^(k-j); this is the normalized closed form up to the (1-f)
    factor and serves as the ranking oracle for the grow-the-quantum scheme.
    """

    def __init__(self, num_vars: int, decay: float = 0.95):
        self.decay = decay
        self.activity = np.zeros(num_vars + 1)

    def on_conflict(self, bumped_vars) -> None:
        self.activity *= self.decay
        for v in bumped_vars:
            self.activity[v] += 1.0

    def ranking_order(self):
        scores = self.activity[1:]
        return [int(i) + 1 for i in np.argsort(-scores, kind="stable")]


def set_partitions(items):
    """All partitions of a small collection (Bell-number enumeration)."""
    items = list(items)
    if not items:
        yield []
        return
    first, rest = items[0], items[1:]
    for part in set_partitions(rest):
        for i in range(len(part)):
            yield part[:i] + [[first] + part[i]] + part[i + 1 :]
        yield [[first]] + part


def best_partition_modularity(vig) -> float:
    """Exhaustive maximum modularity over every partition (graphs <= ~8 vertices)."""
    from satscope.community import modularity

    n = vig.num_vars
    best = -1.0
    community_of = np.zeros(n + 1, dtype=int)
    for part in set_partitions(range(1, n + 1)):
        for cid, group in enumerate(part):
            for v in group:
                community_of[v] = cid
        q = modularity(vig, community_of)
        if q > best:
            best = q
    return best


def label_agreement(found, planted) -> float:
    """Best-matching label agreement between two assignments (Hungarian on overlaps)."""
    from scipy.optimize import linear_sum_assignment

    n = found.num_vars
    overlap = np.zeros((found.num_communities, planted.num_communities), dtype=int)
    for v in range(1, n + 1):
        overlap[found.community_of[v], planted.community_of[v]] += 1
    rows, cols = linear_sum_assignment(-overlap)
    return overlap[rows, cols].sum() / n


def random_formula(rng: random.Random, max_vars: int = 12, max_clauses: int = 30) -> Formula:
    n = rng.randint(1, max_vars)
    m = rng.randint(0, max_clauses)
    clauses = []
    for _ in range(m):
        k = rng.randint(1, min(4, n))
        vs = rng.sample(range(1, n + 1), k)
        clauses.append(Clause(tuple(v if rng.random() < 0.5 else -v for v in vs)))
    return Formula(n, clauses)
