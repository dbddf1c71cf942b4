"""Statistics for the experiments: rank correlation, Gini, focus scores, bridge counters.

Correlations return None (a missing sample) instead of raising when one side
has zero variance, since a run can legitimately produce constant scores.
"""

from __future__ import annotations

import math
from collections import deque
from dataclasses import dataclass, field

import numpy as np

from .centrality import CentralityVector
from .community import CommunityAssignment

FISHER_CLAMP = 0.999999


def _average_ranks(x: np.ndarray) -> np.ndarray:
    """1-based ranks with ties assigned the average of their positions."""
    order = np.argsort(x, kind="stable")
    sx = x[order]
    ranks = np.empty(len(x))
    i = 0
    n = len(x)
    while i < n:
        j = i
        while j + 1 < n and sx[j + 1] == sx[i]:
            j += 1
        ranks[order[i : j + 1]] = (i + j + 2) / 2.0
        i = j + 1
    return ranks


def pearson(x, y) -> float | None:
    """Sample Pearson correlation; None when either side has zero variance."""
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    if x.shape != y.shape or x.ndim != 1 or len(x) < 2:
        raise ValueError("pearson needs two 1-d vectors of equal length >= 2")
    dx = x - x.mean()
    dy = y - y.mean()
    sx = float(np.dot(dx, dx))
    sy = float(np.dot(dy, dy))
    if sx == 0.0 or sy == 0.0:
        return None
    r = float(np.dot(dx, dy) / math.sqrt(sx * sy))
    return min(1.0, max(-1.0, r))


def spearman(a, b) -> float | None:
    """Spearman rank correlation with average-rank tie handling; None if undefined."""
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    if a.shape != b.shape or a.ndim != 1 or len(a) < 2:
        raise ValueError("spearman needs two 1-d vectors of equal length >= 2")
    return pearson(_average_ranks(a), _average_ranks(b))


def fisher_mean(rhos) -> float:
    """Fisher-transformed mean of correlations: tanh(mean(atanh(rho)))."""
    rhos = list(rhos)
    if not rhos:
        raise ValueError("fisher_mean of an empty list")
    z = np.arctanh(np.clip(np.asarray(rhos, dtype=float), -FISHER_CLAMP, FISHER_CLAMP))
    return float(np.tanh(z.mean()))


def top_k(top_var: int, tgc: CentralityVector, assigned, k: int) -> int:
    """1 if ``top_var`` ranks within the best k centrality scores among unassigned vars.

    ``assigned`` is a set of variables or a boolean mask (index 0 counts as
    assigned). Centrality ties are broken by lowest variable index.
    """
    scores = tgc.scores
    n = len(scores) - 1
    if isinstance(assigned, np.ndarray):
        mask = assigned.astype(bool).copy()
    else:
        mask = np.zeros(n + 1, dtype=bool)
        if assigned:
            mask[list(assigned)] = True
    mask[0] = True
    if mask[top_var]:
        raise ValueError("top_var must be unassigned")
    sv = scores[top_var]
    unassigned = ~mask
    idx = np.arange(n + 1)
    better = np.count_nonzero(unassigned & ((scores > sv) | ((scores == sv) & (idx < top_var))))
    return 1 if better + 1 <= k else 0


def gini(values) -> float:
    """Gini coefficient of non-negative values: sum|xi - xj| / (2 n sum x).

    Ranges over [0, (n-1)/n]; an all-zero vector scores 0 by convention.
    """
    x = np.asarray(list(values), dtype=float)
    if x.ndim != 1 or len(x) == 0:
        raise ValueError("gini needs a non-empty 1-d vector")
    if (x < 0).any():
        raise ValueError("gini is defined for non-negative values")
    s = float(x.sum())
    if s == 0.0:
        return 0.0
    xs = np.sort(x)
    n = len(xs)
    i = np.arange(1, n + 1)
    return float((2.0 * np.dot(i, xs) - (n + 1) * s) / (n * s))


@dataclass
class BridgePercentages:
    """The four Table-1-style percentages; a field is None when its denominator is 0."""

    variables: float | None
    picked: float | None
    bumped: float | None
    learnt: float | None

    def as_tuple(self):
        return (self.variables, self.picked, self.bumped, self.learnt)


@dataclass
class FocusCounters:
    """Per-run decision/bump/learn counters against a fixed community map and bridge set."""

    num_vars: int
    num_communities: int
    community_of: np.ndarray
    is_bridge: np.ndarray
    picks_from: np.ndarray
    decision_community_log: list[int] = field(default_factory=list)
    picks_total: int = 0
    picks_bridge: int = 0
    bumps_total: int = 0
    bumps_bridge: int = 0
    learnt_occ_total: int = 0
    learnt_occ_bridge: int = 0

    @classmethod
    def for_run(cls, assignment: CommunityAssignment, bridge_set: set[int]) -> "FocusCounters":
        n = assignment.num_vars
        is_bridge = np.zeros(n + 1, dtype=bool)
        if bridge_set:
            is_bridge[list(bridge_set)] = True
        return cls(
            num_vars=n,
            num_communities=assignment.num_communities,
            community_of=assignment.community_of,
            is_bridge=is_bridge,
            picks_from=np.zeros(assignment.num_communities, dtype=int),
        )

    @property
    def num_bridge_vars(self) -> int:
        return int(self.is_bridge.sum())

    def record_decision(self, var: int) -> None:
        c = int(self.community_of[var])
        self.picks_from[c] += 1
        self.decision_community_log.append(c)
        self.picks_total += 1
        if self.is_bridge[var]:
            self.picks_bridge += 1

    def record_conflict(self, bumped_vars, learnt_vars) -> None:
        for v in bumped_vars:
            self.bumps_total += 1
            if self.is_bridge[v]:
                self.bumps_bridge += 1
        for v in learnt_vars:
            self.learnt_occ_total += 1
            if self.is_bridge[v]:
                self.learnt_occ_bridge += 1


def bridge_percentages(counters: FocusCounters) -> BridgePercentages:
    """Percent of variables / picks / bumps / learnt occurrences that are bridges."""

    def pct(num: int, den: int) -> float | None:
        return 100.0 * num / den if den else None

    return BridgePercentages(
        variables=pct(counters.num_bridge_vars, counters.num_vars),
        picked=pct(counters.picks_bridge, counters.picks_total),
        bumped=pct(counters.bumps_bridge, counters.bumps_total),
        learnt=pct(counters.learnt_occ_bridge, counters.learnt_occ_total),
    )


def spatial_score(counters: FocusCounters, assignment: CommunityAssignment) -> float:
    """Gini of size-normalized per-community pick counts (zero-pick communities included)."""
    if counters.picks_total == 0:
        raise ValueError("spatial score needs at least one decision")
    sizes = assignment.sizes()
    if (sizes == 0).any():
        raise ValueError("assignment has an empty community")
    cs = counters.picks_from / sizes
    return gini(cs)


def temporal_score(decision_community_log, num_communities: int) -> float:
    """Fraction of decisions whose community was among the last ws decisions' communities.

    The window size ws is 10% of the community count rounded up; each decision
    is checked against the window before being inserted, so the first decision
    can never hit.
    """
    log = list(decision_community_log)
    if not log:
        raise ValueError("temporal score needs at least one decision")
    if num_communities < 1:
        raise ValueError("need at least one community")
    ws = math.ceil(0.1 * num_communities)
    window: deque[int] = deque()
    counts: dict[int, int] = {}
    hits = 0
    for c in log:
        if counts.get(c, 0) > 0:
            hits += 1
        window.append(c)
        counts[c] = counts.get(c, 0) + 1
        if len(window) > ws:
            old = window.popleft()
            counts[old] -= 1
    return hits / len(log)


@dataclass
class CorrelationSample:
    """One sampling-boundary comparison of the branching ranking against centrality."""

    sample_time: int
    spearman_tdc: float | None = None
    spearman_tec: float | None = None
    top1_tdc: int | None = None
    top10_tdc: int | None = None
    top1_tec: int | None = None
    top10_tec: int | None = None
    pearson_tdc: float | None = None
