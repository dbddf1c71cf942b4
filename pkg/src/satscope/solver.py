"""CDCL search with two-watched-literal propagation and first-UIP clause learning.

The loop is MiniSAT-2.2-flavored: Luby restarts (base 100 conflicts), phase
saving with default polarity false, and optional LBD-ordered clause-database
reduction. A pluggable branching heuristic supplies decisions and receives
every conflict analysis; instrumentation hooks observe decisions, conflicts,
and sampling boundaries (every ``sample_interval`` iterations, an iteration
being a decision or a conflict) without influencing the search.

Preprocessing is root-level unit propagation plus the tautology/duplicate
removal done at parse time; there is no variable elimination.
"""

from __future__ import annotations

import time
from dataclasses import dataclass

import numpy as np

from .cnf import Clause, Formula

SAT = "SAT"
UNSAT = "UNSAT"
UNKNOWN = "UNKNOWN"


def luby(i: int) -> int:
    """The i-th element (1-based) of the Luby restart sequence 1,1,2,1,1,2,4,..."""
    if i < 1:
        raise ValueError("luby index is 1-based")
    x = i - 1
    size, seq = 1, 0
    while size < x + 1:
        seq += 1
        size = 2 * size + 1
    while size - 1 != x:
        size = (size - 1) >> 1
        seq -= 1
        x %= size
    return 1 << seq


@dataclass
class SolverConfig:
    """Knobs for one run. Defaults follow MiniSAT 2.2.0 where it has an opinion."""

    heuristic: str = "mvsids"
    decay: float = 0.95
    fast_decay: float = 0.75
    slow_decay: float = 0.99
    lbd_smoothing: float = 0.05
    seed: int = 0
    restart_base: int = 100
    clause_deletion: bool = True
    phase_saving: bool = True
    sample_interval: int = 5000
    conflict_budget: int | None = None
    timeout_s: float | None = None

    def __post_init__(self) -> None:
        if self.sample_interval < 1:
            raise ValueError("sample_interval must be >= 1")
        if not 0.0 < self.decay < 1.0:
            raise ValueError("decay must be in (0, 1)")


@dataclass
class SolverStats:
    decisions: int = 0
    conflicts: int = 0
    propagations: int = 0
    restarts: int = 0
    iterations: int = 0
    learnt_clauses: int = 0
    deleted_clauses: int = 0
    wall_time_s: float = 0.0


@dataclass(frozen=True)
class ConflictAnalysis:
    """Result of first-UIP analysis of one conflict.

    ``resolved_vars`` holds every variable traversed during resolution (a
    superset of the learnt clause's variables); ``lbd`` is the number of
    distinct decision levels among the learnt clause's literals.
    """

    learnt: Clause
    backjump_level: int
    resolved_vars: frozenset[int]
    lbd: int


@dataclass
class SatResult:
    status: str
    model: dict[int, bool] | None
    stats: SolverStats


class InstrumentationHooks:
    """No-op observer base class.

    Callbacks run synchronously on the solver's thread and must treat the
    solver as read-only; the non-interference tests rely on that.
    """

    def on_decision(self, solver: "Solver", var: int) -> None:
        pass

    def on_conflict(self, solver: "Solver", analysis: ConflictAnalysis) -> None:
        pass

    def on_sample(self, solver: "Solver", iteration: int) -> None:
        pass


class _ClauseRec:
    """Mutable in-solver clause; lits[0] and lits[1] are the watched literals."""

    __slots__ = ("lits", "learnt", "timestamp", "lbd")

    def __init__(self, lits: list[int], learnt: bool, timestamp: int, lbd: int | None):
        self.lits = lits
        self.learnt = learnt
        self.timestamp = timestamp
        self.lbd = lbd


def select_retained(learnts: list, locked: set) -> tuple[list, list]:
    """Split learnt clauses into (retained, removed), dropping about half.

    Clauses are ranked by (LBD ascending, timestamp descending); locked
    clauses (reasons of currently assigned literals) are always retained.
    """
    unlocked = [c for c in learnts if id(c) not in locked]
    unlocked.sort(key=lambda c: (c.lbd, -c.timestamp))
    target = len(learnts) // 2
    removed = unlocked[len(unlocked) - min(target, len(unlocked)):]
    removed_ids = {id(c) for c in removed}
    retained = [c for c in learnts if id(c) not in removed_ids]
    return retained, removed


class Solver:
    """Single-shot CDCL solver instance; owns all mutable search state."""

    def __init__(
        self,
        formula: Formula,
        config: SolverConfig | None = None,
        heuristic=None,
        hooks: InstrumentationHooks | None = None,
    ):
        formula.check()
        self.formula = formula
        self.cfg = config or SolverConfig()
        nv = formula.num_vars
        self.nv = nv
        self.stats = SolverStats()
        self.hooks = hooks

        if heuristic is None:
            from .branching import make_heuristic

            heuristic = make_heuristic(self.cfg, nv)
        self.heuristic = heuristic

        # vals is indexed by lit + nv: 1 literal true, -1 false, 0 unassigned.
        self.vals = [0] * (2 * nv + 1)
        self.levels = [0] * (nv + 1)
        self.reasons: list = [None] * (nv + 1)
        self.trail: list[int] = []
        self.trail_lim: list[int] = []
        self.qhead = 0
        self.saved = [False] * (nv + 1)
        self.watches: list[list] = [[] for _ in range(2 * nv + 1)]
        self.assigned_mask = np.zeros(nv + 1, dtype=bool)
        self.assigned_mask[0] = True
        self.learnts: list[_ClauseRec] = []
        self._seen = bytearray(nv + 1)
        self._broken = False  # empty clause or contradictory units in the input

        n_attached = 0
        for clause in formula.clauses:
            lits = clause.lits
            if len(lits) == 0:
                self._broken = True
                continue
            if len(lits) == 1:
                l = lits[0]
                v = l if l > 0 else -l
                cur = self.vals[l + nv]
                if cur == -1:
                    self._broken = True
                elif cur == 0:
                    self._enqueue(l, None)
            else:
                rec = _ClauseRec(list(lits), False, 0, None)
                self._attach(rec)
                n_attached += 1
        self.max_learnts = max(100, n_attached // 3)

    # -- state helpers ----------------------------------------------------

    @property
    def level(self) -> int:
        return len(self.trail_lim)

    def trail_entries(self) -> list[tuple[int, int, tuple[int, ...] | None]]:
        """Snapshot of (lit, level, reason-lits) for inspection and tests."""
        out = []
        for lit in self.trail:
            v = lit if lit > 0 else -lit
            r = self.reasons[v]
            out.append((lit, self.levels[v], tuple(r.lits) if r is not None else None))
        return out

    def _attach(self, rec: _ClauseRec) -> None:
        nv = self.nv
        self.watches[rec.lits[0] + nv].append(rec)
        self.watches[rec.lits[1] + nv].append(rec)

    def _detach(self, rec: _ClauseRec) -> None:
        nv = self.nv
        self.watches[rec.lits[0] + nv].remove(rec)
        self.watches[rec.lits[1] + nv].remove(rec)

    def _enqueue(self, lit: int, reason) -> None:
        nv = self.nv
        v = lit if lit > 0 else -lit
        self.vals[lit + nv] = 1
        self.vals[-lit + nv] = -1
        self.levels[v] = self.level
        self.reasons[v] = reason
        self.trail.append(lit)
        self.assigned_mask[v] = True

    # -- propagation ------------------------------------------------------

    def _propagate(self):
        """Unit propagation to fixpoint; returns the conflicting clause or None."""
        nv = self.nv
        vals = self.vals
        watches = self.watches
        trail = self.trail
        levels = self.levels
        reasons = self.reasons
        mask = self.assigned_mask
        lvl = self.level
        confl = None
        props = 0
        while self.qhead < len(trail):
            p = trail[self.qhead]
            self.qhead += 1
            falselit = -p
            ws = watches[falselit + nv]
            i = j = 0
            n_ws = len(ws)
            while i < n_ws:
                c = ws[i]
                i += 1
                lits = c.lits
                if lits[0] == falselit:
                    lits[0] = lits[1]
                    lits[1] = falselit
                first = lits[0]
                if vals[first + nv] == 1:
                    ws[j] = c
                    j += 1
                    continue
                moved = False
                for k in range(2, len(lits)):
                    lk = lits[k]
                    if vals[lk + nv] >= 0:
                        lits[1] = lk
                        lits[k] = falselit
                        watches[lk + nv].append(c)
                        moved = True
                        break
                if moved:
                    continue
                ws[j] = c
                j += 1
                if vals[first + nv] == -1:
                    confl = c
                    self.qhead = len(trail)
                    while i < n_ws:
                        ws[j] = ws[i]
                        j += 1
                        i += 1
                    break
                v = first if first > 0 else -first
                vals[first + nv] = 1
                vals[-first + nv] = -1
                levels[v] = lvl
                reasons[v] = c
                trail.append(first)
                mask[v] = True
                props += 1
            del ws[j:]
            if confl is not None:
                break
        self.stats.propagations += props
        return confl

    # -- conflict analysis ------------------------------------------------

    def _analyze(self, confl: _ClauseRec) -> ConflictAnalysis:
        levels = self.levels
        reasons = self.reasons
        trail = self.trail
        seen = self._seen
        cur = self.level
        learnt: list[int] = [0]
        resolved: list[int] = []
        pathc = 0
        idx = len(trail) - 1
        reason_lits = confl.lits
        start = 0
        p = 0
        while True:
            for k in range(start, len(reason_lits)):
                q = reason_lits[k]
                v = q if q > 0 else -q
                if not seen[v] and levels[v] > 0:
                    seen[v] = 1
                    resolved.append(v)
                    if levels[v] >= cur:
                        pathc += 1
                    else:
                        learnt.append(q)
            assert pathc > 0, "conflict clause has no literal at the current level"
            while True:
                p = trail[idx]
                pv = p if p > 0 else -p
                if seen[pv]:
                    break
                idx -= 1
            idx -= 1
            seen[pv] = 0
            pathc -= 1
            if pathc == 0:
                break
            reason_lits = reasons[pv].lits
            start = 1
        learnt[0] = -p
        for v in resolved:
            seen[v] = 0
        if len(learnt) == 1:
            bj = 0
        else:
            mi = 1
            ml = levels[learnt[1] if learnt[1] > 0 else -learnt[1]]
            for k in range(2, len(learnt)):
                q = learnt[k]
                lv = levels[q if q > 0 else -q]
                if lv > ml:
                    ml, mi = lv, k
            learnt[1], learnt[mi] = learnt[mi], learnt[1]
            bj = ml
        lbd = len({levels[q if q > 0 else -q] for q in learnt})
        clause = Clause(tuple(learnt), timestamp=self.stats.conflicts, lbd=lbd)
        return ConflictAnalysis(clause, bj, frozenset(resolved), lbd)

    def _backjump(self, target_level: int) -> None:
        if self.level <= target_level:
            return
        tl = self.trail_lim[target_level]
        trail = self.trail
        vals = self.vals
        nv = self.nv
        phase = self.cfg.phase_saving
        for k in range(len(trail) - 1, tl - 1, -1):
            lit = trail[k]
            v = lit if lit > 0 else -lit
            if phase:
                self.saved[v] = lit > 0
            vals[lit + nv] = 0
            vals[-lit + nv] = 0
            self.reasons[v] = None
            self.assigned_mask[v] = False
        del trail[tl:]
        del self.trail_lim[target_level:]
        self.qhead = tl

    # -- clause database --------------------------------------------------

    def _reduce_db(self) -> None:
        locked = set()
        for lit in self.trail:
            v = lit if lit > 0 else -lit
            r = self.reasons[v]
            if r is not None and r.learnt:
                locked.add(id(r))
        retained, removed = select_retained(self.learnts, locked)
        for rec in removed:
            self._detach(rec)
        self.learnts = retained
        self.stats.deleted_clauses += len(removed)
        self.max_learnts = int(self.max_learnts * 1.3) + 1

    # -- main loop ----------------------------------------------------------

    def solve(self) -> SatResult:
        t0 = time.monotonic()
        st = self.stats
        result = self._search(t0)
        st.wall_time_s = time.monotonic() - t0
        if result == SAT:
            model = self._extract_model()
            self._verify_model(model)
            return SatResult(SAT, model, st)
        return SatResult(result, None, st)

    def _search(self, t0: float) -> str:
        st = self.stats
        cfg = self.cfg
        hooks = self.hooks
        interval = cfg.sample_interval
        if self._broken:
            return UNSAT
        if self._propagate() is not None:
            return UNSAT
        if self.nv == 0:
            return SAT
        restart_limit = cfg.restart_base * luby(1)
        conflicts_at_restart = 0
        deadline = None if cfg.timeout_s is None else t0 + cfg.timeout_s
        while True:
            confl = self._propagate()
            if confl is not None:
                if self.level == 0:
                    return UNSAT
                st.conflicts += 1
                analysis = self._analyze(confl)
                self._backjump(analysis.backjump_level)
                lits = analysis.learnt.lits
                if len(lits) == 1:
                    self._enqueue(lits[0], None)
                else:
                    rec = _ClauseRec(list(lits), True, analysis.learnt.timestamp, analysis.lbd)
                    self.learnts.append(rec)
                    self._attach(rec)
                    self._enqueue(lits[0], rec)
                st.learnt_clauses += 1
                self.heuristic.on_conflict(analysis)
                if hooks is not None:
                    hooks.on_conflict(self, analysis)
                st.iterations += 1
                if hooks is not None and st.iterations % interval == 0:
                    hooks.on_sample(self, st.iterations)
                if st.conflicts - conflicts_at_restart >= restart_limit:
                    st.restarts += 1
                    conflicts_at_restart = st.conflicts
                    restart_limit = cfg.restart_base * luby(st.restarts + 1)
                    self._backjump(0)
                if cfg.conflict_budget is not None and st.conflicts >= cfg.conflict_budget:
                    return UNKNOWN
                if deadline is not None and st.conflicts % 128 == 0 and time.monotonic() > deadline:
                    return UNKNOWN
            else:
                if len(self.trail) == self.nv:
                    return SAT
                if cfg.clause_deletion and len(self.learnts) >= self.max_learnts:
                    self._reduce_db()
                var = self.heuristic.pick(self.assigned_mask)
                st.decisions += 1
                self.trail_lim.append(len(self.trail))
                lit = var if self.saved[var] else -var
                self._enqueue(lit, None)
                if hooks is not None:
                    hooks.on_decision(self, var)
                st.iterations += 1
                if hooks is not None and st.iterations % interval == 0:
                    hooks.on_sample(self, st.iterations)
                if deadline is not None and st.iterations % 512 == 0 and time.monotonic() > deadline:
                    return UNKNOWN

    def _extract_model(self) -> dict[int, bool]:
        nv = self.nv
        return {v: self.vals[v + nv] == 1 for v in range(1, nv + 1)}

    def _verify_model(self, model: dict[int, bool]) -> None:
        for clause in self.formula.clauses:
            for l in clause.lits:
                v = l if l > 0 else -l
                if model[v] == (l > 0):
                    break
            else:
                raise RuntimeError(f"internal error: model does not satisfy {clause.lits}")


def solve(
    formula: Formula,
    config: SolverConfig | None = None,
    heuristic=None,
    hooks: InstrumentationHooks | None = None,
) -> SatResult:
    """Solve a formula; convenience wrapper around a one-shot Solver."""
    return Solver(formula, config, heuristic=heuristic, hooks=hooks).solve()


def propagate_closure(
    formula: Formula, assumptions: tuple[int, ...] = ()
) -> tuple[list[int], tuple[int, ...] | None]:
    """Root-level unit-propagation closure under the given assumed literals.

    Returns (assigned literals in trail order, conflicting clause lits or
    None). Useful as a simplification primitive and as a test seam for the
    watched-literal propagator.
    """
    cfg = SolverConfig(clause_deletion=False)
    s = Solver(formula, cfg)
    if s._broken:
        return list(s.trail), ()
    nv = s.nv
    for l in assumptions:
        cur = s.vals[l + nv]
        if cur == -1:
            return list(s.trail), (l, -l)
        if cur == 0:
            s._enqueue(l, None)
    confl = s._propagate()
    return list(s.trail), (tuple(confl.lits) if confl is not None else None)
