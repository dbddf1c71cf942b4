"""Louvain community detection on the clause graph, modularity, and bridge variables.

Modularity follows the standard weighted Newman form
Q = sum_c [in_c/(2m) - (tot_c/(2m))^2] where in_c counts ordered intra-community
pairs, tot_c the total weighted degree of the community, and 2m the total
ordered-pair weight. Louvain alternates seeded local moving with graph
aggregation until no move improves Q; resolution is fixed at 1.
"""

from __future__ import annotations

import random
import time
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .cnf import Formula
from .graph import Vig

GAIN_EPS = 1e-12


class LouvainTimeout(RuntimeError):
    """Community detection exceeded its wall-clock budget; no partial output."""


@dataclass
class CommunityAssignment:
    """Variable -> community map with dense ids from 0 and the partition's modularity."""

    community_of: np.ndarray  # int array of size num_vars + 1; index 0 is -1
    num_communities: int
    modularity: float

    @property
    def num_vars(self) -> int:
        return len(self.community_of) - 1

    def sizes(self) -> np.ndarray:
        return np.bincount(self.community_of[1:], minlength=self.num_communities)


def modularity(vig: Vig, community_of: np.ndarray) -> float:
    """Weighted Newman modularity of the partition; 0 for an edgeless graph."""
    n = vig.num_vars
    adj = vig.adj
    ncomm = int(community_of[1:].max()) + 1 if n else 0
    tot = np.zeros(ncomm)
    inw = np.zeros(ncomm)
    two_m = 0.0
    for v in range(1, n + 1):
        c = community_of[v]
        d = adj[v]
        if not d:
            continue
        kv = sum(d.values())
        two_m += kv
        tot[c] += kv
        for u, w in d.items():
            if community_of[u] == c:
                inw[c] += w
    if two_m == 0.0:
        return 0.0
    return float((inw / two_m - (tot / two_m) ** 2).sum())


def _one_level(adj, loops, k, two_m, comm, tot, inw, rng, deadline):
    """Local-moving phase; mutates comm/tot/inw in place, returns move count."""
    n = len(adj)
    moves_total = 0
    while True:
        if deadline is not None and time.monotonic() > deadline:
            raise LouvainTimeout("local moving phase exceeded the time budget")
        moves = 0
        order = list(range(n))
        rng.shuffle(order)
        for node in order:
            c_old = comm[node]
            ncw: dict[int, float] = {}
            for u, w in adj[node].items():
                cu = comm[u]
                ncw[cu] = ncw.get(cu, 0.0) + w
            kn = k[node]
            tot[c_old] -= kn
            inw[c_old] -= 2.0 * ncw.get(c_old, 0.0) + loops[node]
            best_c = c_old
            best_gain = ncw.get(c_old, 0.0) - tot[c_old] * kn / two_m
            for c in sorted(ncw):
                if c == c_old:
                    continue
                gain = ncw[c] - tot[c] * kn / two_m
                if gain > best_gain + GAIN_EPS:
                    best_gain = gain
                    best_c = c
            comm[node] = best_c
            tot[best_c] += kn
            inw[best_c] += 2.0 * ncw.get(best_c, 0.0) + loops[node]
            if best_c != c_old:
                moves += 1
        moves_total += moves
        if moves == 0:
            return moves_total


def _aggregate(adj, loops, comm):
    """Condense communities into super-nodes, preserving ordered-pair weights."""
    labels = sorted(set(comm))
    remap = {c: i for i, c in enumerate(labels)}
    m = len(labels)
    new_adj: list[dict[int, float]] = [{} for _ in range(m)]
    new_loops = [0.0] * m
    for node, d in enumerate(adj):
        c = remap[comm[node]]
        new_loops[c] += loops[node]
        for u, w in d.items():
            cu = remap[comm[u]]
            if cu == c:
                new_loops[c] += w
            else:
                new_adj[c][cu] = new_adj[c].get(cu, 0.0) + w
    return new_adj, new_loops, remap


def louvain(vig: Vig, seed: int = 0, time_budget_s: float | None = 60.0) -> CommunityAssignment:
    """Louvain partition of the clause graph; deterministic for a fixed seed.

    Raises LouvainTimeout (rather than returning partial output) if the
    wall-clock budget is exhausted. An edgeless graph yields one singleton
    community per variable with modularity 0.
    """
    n = vig.num_vars
    rng = random.Random(seed)
    deadline = None if time_budget_s is None else time.monotonic() + time_budget_s

    # Level-0 working graph over nodes 0..n-1 (variable v -> node v-1).
    adj = [dict((u - 1, w) for u, w in vig.adj[v].items()) for v in range(1, n + 1)]
    loops = [0.0] * n
    two_m = sum(sum(d.values()) for d in adj)
    node_of_var = list(range(n))

    if two_m > 0.0:
        while True:
            k = [loops[i] + sum(adj[i].values()) for i in range(len(adj))]
            comm = list(range(len(adj)))
            tot = k.copy()
            inw = loops.copy()
            moved = _one_level(adj, loops, k, two_m, comm, tot, inw, rng, deadline)
            if moved == 0:
                break
            adj, loops, remap = _aggregate(adj, loops, comm)
            node_of_var = [remap[comm[node]] for node in node_of_var]
            if len(adj) == 1:
                break

    # Dense community ids ordered by the smallest variable they contain.
    first_var: dict[int, int] = {}
    for v in range(1, n + 1):
        first_var.setdefault(node_of_var[v - 1], v)
    order = sorted(first_var, key=first_var.get)
    relabel = {c: i for i, c in enumerate(order)}
    community_of = np.full(n + 1, -1, dtype=int)
    for v in range(1, n + 1):
        community_of[v] = relabel[node_of_var[v - 1]]
    q = modularity(vig, community_of)
    return CommunityAssignment(community_of, len(order), q)


def assignment_from_mapping(vig: Vig, mapping) -> CommunityAssignment:
    """Build an assignment (dense ids, recomputed modularity) from a var->community map."""
    n = vig.num_vars
    raw = np.full(n + 1, -1, dtype=int)
    if isinstance(mapping, dict):
        missing = [v for v in range(1, n + 1) if v not in mapping]
        if missing:
            raise ValueError(f"mapping misses variables, e.g. {missing[0]}")
        for v in range(1, n + 1):
            raw[v] = mapping[v]
    else:
        arr = np.asarray(mapping, dtype=int)
        if arr.shape != (n + 1,):
            raise ValueError("array mapping must have shape (num_vars + 1,)")
        raw[1:] = arr[1:]
    first_var: dict[int, int] = {}
    for v in range(1, n + 1):
        first_var.setdefault(int(raw[v]), v)
    relabel = {c: i for i, c in enumerate(sorted(first_var, key=first_var.get))}
    community_of = np.full(n + 1, -1, dtype=int)
    for v in range(1, n + 1):
        community_of[v] = relabel[int(raw[v])]
    return CommunityAssignment(community_of, len(relabel), modularity(vig, community_of))


def bridge_variables(formula: Formula, assignment: CommunityAssignment) -> set[int]:
    """Variables sharing at least one original clause with a different community."""
    community_of = assignment.community_of
    bridges: set[int] = set()
    for clause in formula.clauses:
        vs = clause.variables()
        if len(vs) < 2:
            continue
        c0 = community_of[vs[0]]
        if any(community_of[v] != c0 for v in vs[1:]):
            bridges.update(vs)
    return bridges


def write_community_file(path: str | Path, assignment: CommunityAssignment) -> None:
    """One line per variable: ``<var_index> <community_id>``."""
    with open(path, "w") as fh:
        for v in range(1, assignment.num_vars + 1):
            fh.write(f"{v} {assignment.community_of[v]}\n")


def read_community_file(path: str | Path) -> dict[int, int]:
    mapping: dict[int, int] = {}
    for lineno, line in enumerate(Path(path).read_text().splitlines(), start=1):
        line = line.strip()
        if not line:
            continue
        parts = line.split()
        if len(parts) != 2:
            raise ValueError(f"{path}:{lineno}: expected 'var community'")
        mapping[int(parts[0])] = int(parts[1])
    return mapping
