"""Branching heuristics: activity-table VSIDS variants and uniform-random picking.

All VSIDS variants share one bookkeeping scheme: instead of multiplying every
activity by the decay factor each conflict, the bump quantum grows by the
reciprocal, and everything is rescaled by 1e-100 once a score passes 1e100.
The induced ranking is identical to per-conflict whole-table decay; the
equivalence is covered by tests against a direct-decay reference.

Per conflict the quantum grows first and the bump uses the grown quantum, so
a variable bumped at conflict k and read at conflict n carries normalized
weight f^(n-k). That matches the normalized closed form (``normalized_vsids``)
and keeps seeded activities in lockstep with temporal degree centrality when
both decay at the same rate.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from typing import TYPE_CHECKING

import numpy as np

if TYPE_CHECKING:
    from .solver import ConflictAnalysis, SolverConfig

RESCALE_THRESHOLD = 1e100
RESCALE_FACTOR = 1e-100


@dataclass(frozen=True)
class VsidsRanking:
    """Variables with normalized scores, sorted by decreasing score then index."""

    entries: list


class ActivityTable:
    """Per-variable floating activity scores with grow-the-quantum decay."""

    def __init__(
        self,
        num_vars: int,
        decay: float = 0.95,
        rescale_threshold: float = RESCALE_THRESHOLD,
        initial: np.ndarray | None = None,
    ):
        if not 0.0 < decay < 1.0:
            raise ValueError("decay must be in (0, 1)")
        self.num_vars = num_vars
        self.decay_factor = decay
        self.rescale_threshold = rescale_threshold
        if initial is not None:
            arr = np.asarray(initial, dtype=float)
            if arr.shape != (num_vars + 1,):
                raise ValueError("initial activities must have shape (num_vars + 1,)")
            self.activity = arr.copy()
        else:
            self.activity = np.zeros(num_vars + 1)
        self.bump_quantum = 1.0
        self.rescales = 0

    def decay(self, factor: float | None = None) -> None:
        """One multiplicative decay step, applied lazily through the quantum."""
        self.bump_quantum /= self.decay_factor if factor is None else factor

    def bump(self, var: int) -> None:
        a = self.activity
        a[var] += self.bump_quantum
        if a[var] > self.rescale_threshold:
            self._rescale()

    def _rescale(self) -> None:
        self.activity *= RESCALE_FACTOR
        self.bump_quantum *= RESCALE_FACTOR
        self.rescales += 1

    def normalized(self) -> np.ndarray:
        """Scores scaled so the most recent bump is worth 1.0 (comparable across time)."""
        return self.activity / self.bump_quantum

    def ranking(self) -> VsidsRanking:
        scores = self.normalized()[1:]
        order = np.argsort(-scores, kind="stable")
        return VsidsRanking([(int(i) + 1, float(scores[i])) for i in order])


class _ActivityHeuristic:
    """Shared pick/ranking machinery for the VSIDS family."""

    uses_activity = True

    def __init__(self, num_vars: int, decay: float = 0.95, initial_activities=None):
        self.table = ActivityTable(num_vars, decay, initial=initial_activities)

    def pick(self, assigned: np.ndarray) -> int:
        # Activities are >= 0 and assigned slots become -1, so argmax lands on
        # the unassigned variable of maximal activity, lowest index first.
        scores = np.where(assigned, -1.0, self.table.activity)
        return int(scores.argmax())

    def ranking(self) -> VsidsRanking:
        return self.table.ranking()

    def bump_set(self, analysis: "ConflictAnalysis") -> tuple[int, ...]:
        raise NotImplementedError

    def on_conflict(self, analysis: "ConflictAnalysis") -> None:
        table = self.table
        table.decay()
        for v in self.bump_set(analysis):
            table.bump(v)


class CvsidsHeuristic(_ActivityHeuristic):
    """Bump the variables of the learnt clause, decay every conflict.

    ``min_bump_size`` exists for the centrality-theorem experiment: a learnt
    unit clause adds no edge to the clause graph, so exact activity/centrality
    lockstep requires skipping its bump (set it to 2 there; default 1 bumps
    everything).
    """

    def __init__(self, num_vars, decay=0.95, initial_activities=None, min_bump_size=1):
        super().__init__(num_vars, decay, initial_activities)
        self.min_bump_size = min_bump_size

    def bump_set(self, analysis):
        if len(analysis.learnt) < self.min_bump_size:
            return ()
        return analysis.learnt.variables()


class MvsidsHeuristic(_ActivityHeuristic):
    """Bump every variable resolved during conflict analysis (MiniSAT style)."""

    def bump_set(self, analysis):
        return tuple(sorted(analysis.resolved_vars))


class AdaptVsidsHeuristic(_ActivityHeuristic):
    """mVSIDS with the decay factor switched by learnt-clause quality.

    Keeps an exponential moving average of learnt LBDs; a clause whose LBD
    exceeds the average (compared before folding it in) triggers the fast
    decay, otherwise the slow one. The average starts at the first clause's
    LBD; smoothing 0 freezes it there, which makes the heuristic degenerate
    to mVSIDS when fast and slow decay coincide.
    """

    def __init__(
        self,
        num_vars,
        fast_decay: float = 0.75,
        slow_decay: float = 0.99,
        lbd_smoothing: float = 0.05,
        initial_activities=None,
    ):
        super().__init__(num_vars, decay=0.95, initial_activities=initial_activities)
        if not 0.0 < fast_decay < 1.0 or not 0.0 < slow_decay < 1.0:
            raise ValueError("decay factors must be in (0, 1)")
        if not 0.0 <= lbd_smoothing < 1.0:
            raise ValueError("lbd_smoothing must be in [0, 1)")
        self.fast_decay = fast_decay
        self.slow_decay = slow_decay
        self.lbd_smoothing = lbd_smoothing
        self.lbdema: float | None = None

    def bump_set(self, analysis):
        return tuple(sorted(analysis.resolved_vars))

    def on_conflict(self, analysis):
        lbd = analysis.lbd
        if self.lbdema is None:
            self.lbdema = float(lbd)
        factor = self.fast_decay if lbd > self.lbdema else self.slow_decay
        table = self.table
        table.decay(factor)
        for v in self.bump_set(analysis):
            table.bump(v)
        self.lbdema += self.lbd_smoothing * (lbd - self.lbdema)


class RandomHeuristic:
    """Uniform choice over unassigned variables from a seeded RNG.

    Only the variable choice differs from the VSIDS variants: polarity still
    comes from the solver's saved phases.
    """

    uses_activity = False
    table = None

    def __init__(self, num_vars: int, seed: int = 0):
        self.rng = random.Random(seed)

    def pick(self, assigned: np.ndarray) -> int:
        free = np.flatnonzero(~assigned)
        return int(free[self.rng.randrange(len(free))])

    def on_conflict(self, analysis) -> None:
        pass

    def bump_set(self, analysis) -> tuple[int, ...]:
        return ()


HEURISTICS = ("cvsids", "mvsids", "adaptvsids", "random")


def make_heuristic(config: "SolverConfig", num_vars: int, initial_activities=None):
    """Build the heuristic named by ``config.heuristic`` with its parameters."""
    name = config.heuristic
    if name == "cvsids":
        return CvsidsHeuristic(num_vars, config.decay, initial_activities)
    if name == "mvsids":
        return MvsidsHeuristic(num_vars, config.decay, initial_activities)
    if name == "adaptvsids":
        return AdaptVsidsHeuristic(
            num_vars,
            fast_decay=config.fast_decay,
            slow_decay=config.slow_decay,
            lbd_smoothing=config.lbd_smoothing,
            initial_activities=initial_activities,
        )
    if name == "random":
        return RandomHeuristic(num_vars, config.seed)
    raise ValueError(f"unknown heuristic {name!r} (expected one of {HEURISTICS})")


def normalized_vsids(deltas, f: float) -> float:
    """Closed-form normalized activity: (1 - f) * sum_k delta_k * f^(n - k)."""
    if not 0.0 < f < 1.0:
        raise ValueError("decay factor must be in (0, 1)")
    d = np.asarray(list(deltas), dtype=float)
    n = len(d)
    if n == 0:
        return 0.0
    powers = f ** np.arange(n - 1, -1, -1, dtype=float)
    return float((1.0 - f) * np.dot(d, powers))


def normalized_vsids_recursive(s_prev: float, delta: float, f: float) -> float:
    """One exponential-moving-average step: s_n = (1 - f) * delta_n + f * s_{n-1}."""
    if not 0.0 < f < 1.0:
        raise ValueError("decay factor must be in (0, 1)")
    return (1.0 - f) * delta + f * s_prev
