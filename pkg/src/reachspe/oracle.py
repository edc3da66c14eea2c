"""Brute-force ground truth used to cross-check the main pipeline.

Nothing here touches counter graphs except ``counter_lassos``, which is the
counter-graph side of the consistency cross-check.
"""
from __future__ import annotations

import itertools
import random
from collections import deque
from dataclasses import dataclass
from typing import Callable

from .counter import CounterGraph, NotConsistent, play_to_path
from .extended import ExtendedGame, ExtVertex
from .game import INF, Cost, Game, GameError, Lasso
from .labeling import is_lambda_consistent


@dataclass
class FiniteMemoryProfile:
    """Strategy profile on the extended game driven by a finite memory.

    ``update(mem, v, w)`` is the memory after the edge ``v -> w``;
    ``move(mem, v)`` is the successor chosen by the owner of ``v``.
    """

    initial: object
    update: Callable
    move: Callable


def positional_profile(choice: dict) -> FiniteMemoryProfile:
    return FiniteMemoryProfile(None, lambda m, v, w: None, lambda m, v: choice[v])


def as_finite_memory(profile) -> FiniteMemoryProfile:
    return FiniteMemoryProfile(profile.initial, profile.update, profile.move)


@dataclass
class DeviationReport:
    ok: bool
    state: tuple | None = None      # (memory, extended vertex)
    player: int | None = None
    target: ExtVertex | None = None
    cost: Cost | None = None        # player's cost when following the profile
    deviation_cost: Cost | None = None
    states: int = 0

    def describe(self, x: ExtendedGame) -> str:
        if self.ok:
            return f"no profitable one-shot deviation ({self.states} states)"
        return (f"player {self.player + 1} at {x.name(self.state[1])} improves from "
                f"{self.cost} to {self.deviation_cost} by moving to {x.name(self.target)}")


def _product(x: ExtendedGame, p: FiniteMemoryProfile):
    """All product states reachable under arbitrary moves, with the profile successor."""
    start = (p.initial, x.x0)
    seen = {start: None}
    queue = deque([start])
    order = []
    while queue:
        s = queue.popleft()
        order.append(s)
        mem, v = s
        for w in x.succ[v]:
            t = (p.update(mem, v, w), w)
            if t not in seen:
                seen[t] = None
                queue.append(t)
    nxt = {}
    for mem, v in order:
        w = p.move(mem, v)
        if w not in x.succ[v]:
            raise GameError(f"profile moves along a missing edge from {x.name(v)}")
        nxt[(mem, v)] = (p.update(mem, v, w), w)
    return order, nxt


def _outcome_costs(x: ExtendedGame, order, nxt) -> dict:
    """Cost vector of the profile outcome from every product state."""
    k = x.game.players
    costs: dict = {}
    for s in order:
        if s in costs:
            continue
        path, where = [], {}
        u = s
        while u not in costs and u not in where:
            where[u] = len(path)
            path.append(u)
            u = nxt[u]
        if u not in costs:
            # the visited set is constant on a cycle: reached players cost 0, others never arrive
            for c in path[where[u]:]:
                costs[c] = tuple(0 if c[1].visited >> i & 1 else INF for i in range(k))
            path = path[:where[u]]
        tail = list(costs[u])
        for c in reversed(path):
            tail = [0 if c[1].visited >> i & 1 else tail[i] + 1 for i in range(k)]
            costs[c] = tuple(tail)
    return costs


def very_weak_spe_check(x: ExtendedGame, p: FiniteMemoryProfile) -> DeviationReport:
    """One-shot deviation check at every reachable (memory, vertex) state."""
    order, nxt = _product(x, p)
    costs = _outcome_costs(x, order, nxt)
    for s in order:
        mem, v = s
        i = x.owner(v)
        if v.visited >> i & 1:
            continue
        here = costs[nxt[s]][i]
        for w in x.succ[v]:
            alt = costs[(p.update(mem, v, w), w)][i]
            if alt < here:
                return DeviationReport(False, s, i, w, 1 + here, 1 + alt, len(order))
    return DeviationReport(True, states=len(order))


def bounded_deviation_check(x: ExtendedGame, p: FiniteMemoryProfile, deviations: int = 2) -> DeviationReport:
    """Compare the profile against strategies deviating at up to ``deviations`` points."""
    order, nxt = _product(x, p)
    costs = _outcome_costs(x, order, nxt)
    k = x.game.players
    for s in order:
        for i in range(k):
            if s[1].visited >> i & 1:
                continue
            # breadth-first over (state, deviations left); unit-cost edges
            best = INF
            start = (s, deviations)
            dist = {start: 0}
            queue = deque([start])
            while queue:
                u, left = queue.popleft()
                d = dist[u, left]
                if u[1].visited >> i & 1:
                    best = d
                    break
                mem, v = u
                steps = [(nxt[u], left)]
                if x.owner(v) == i and left:
                    steps += [((p.update(mem, v, w), w), left - 1) for w in x.succ[v]]
                for t in steps:
                    if t not in dist:
                        dist[t] = d + 1
                        queue.append(t)
            if best < costs[s][i]:
                return DeviationReport(False, s, i, None, costs[s][i], best, len(order))
    return DeviationReport(True, states=len(order))


def outcome(x: ExtendedGame, p: FiniteMemoryProfile) -> Lasso:
    s = (p.initial, x.x0)
    path, where = [], {}
    while s not in where:
        where[s] = len(path)
        path.append(s)
        mem, v = s
        w = p.move(mem, v)
        s = (p.update(mem, v, w), w)
    k = where[s]
    return Lasso(tuple(u[1] for u in path[:k]), tuple(u[1] for u in path[k:])).normalized()


# -- lasso enumeration --------------------------------------------------------


def _paths(x: ExtendedGame, max_len: int, start=None):
    """All extended paths from ``start`` (default x0) with 1..max_len vertices."""
    stack = [(x.x0 if start is None else start,)]
    while stack:
        p = stack.pop()
        yield p
        if len(p) < max_len:
            stack.extend(p + (w,) for w in x.succ[p[-1]])


def all_lassos(x: ExtendedGame, max_len: int, start=None) -> set:
    out = set()
    for p in _paths(x, max_len, start):
        succ = x.succ[p[-1]]
        for k, v in enumerate(p):
            if v in succ:
                out.add(Lasso(p[:k], p[k:]).normalized())
    return out


def enumerate_consistent_lassos(x: ExtendedGame, lam, max_len: int, start=None) -> set:
    """Normalized lassos from x0 (or ``start``) of size at most ``max_len`` that respect ``lam``."""
    return {l for l in all_lassos(x, max_len, start) if is_lambda_consistent(x, lam, l)[0]}


def counter_lassos(cg: CounterGraph, max_len: int) -> set:
    """Projections of valid counter-graph lassos from the starting vertex of x0.

    Prefixes are grown inside the counter graph, so dead ends cut the search.
    Closing a prefix into a cycle keeps the projected play only when the
    counters can be tracked forever around it.
    """
    x = cg.ext
    out = set()
    stack = [(cg.start(x.x0),)]
    while stack:
        p = stack.pop()
        if not cg.is_live(p[-1]):
            continue
        succ = {w.ext for w in cg.successors(p[-1])}
        for k, cv in enumerate(p):
            if cv.ext in succ:
                play = Lasso(tuple(c.ext for c in p[:k]), tuple(c.ext for c in p[k:]))
                try:
                    path = play_to_path(cg, play)
                except NotConsistent:
                    continue
                assert all(cg.is_live(c) for c in path.positions())
                out.add(play.normalized())
        if len(p) < max_len:
            stack.extend(p + (w,) for w in cg.successors(p[-1]))
    return out


# -- exhaustive positional profiles ------------------------------------------


def positional_profile_count(x: ExtendedGame) -> int:
    n = 1
    for v in x.vertices:
        n *= len(x.succ[v])
    return n


def exhaustive_positional_analysis(x: ExtendedGame, budget: int = 5000):
    """Check every profile that picks one successor per extended vertex.

    Returns a list of ``(choice, outcome lasso, passes)``.
    """
    total = positional_profile_count(x)
    if total > budget:
        raise GameError(f"{total} positional profiles exceed the budget of {budget}")
    verts = x.vertices
    out = []
    for picks in itertools.product(*(x.succ[v] for v in verts)):
        choice = dict(zip(verts, picks))
        p = positional_profile(choice)
        out.append((choice, outcome(x, p), very_weak_spe_check(x, p).ok))
    return out


# -- random games -------------------------------------------------------------


def random_game(rng: random.Random, max_vertices: int = 6, max_players: int = 3,
                min_vertices: int = 2, edge_prob: float = 0.3, target_prob: float = 0.2) -> Game:
    """Random valid game with init ``v0``; every player gets a nonempty target set.

    A random cycle through all vertices is added half of the time so that
    most targets are reachable.
    """
    n = rng.randint(min_vertices, max_vertices)
    k = rng.randint(1, min(max_players, n))
    names = [f"v{i}" for i in range(n)]
    owners = [rng.randint(1, k) for _ in range(n)]
    edges = set()
    for a in names:
        outs = [b for b in names if rng.random() < edge_prob] or [rng.choice(names)]
        edges.update((a, b) for b in outs)
    if rng.random() < 0.5:
        ring = rng.sample(names, n)
        edges.update(zip(ring, ring[1:] + ring[:1]))
    targets = {}
    for i in range(1, k + 1):
        targets[i] = [v for v in names if rng.random() < target_prob] or [rng.choice(names)]
    return Game(k, list(zip(names, owners)), sorted(edges), targets, "v0")
