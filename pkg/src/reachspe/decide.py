"""Constrained equilibrium existence, outcome checking and profile synthesis."""
from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Sequence

from .counter import CounterGraph, EmptyPlaySet, step_counters
from .extended import ExtendedGame, ExtVertex, lift_lasso, project_lasso
from .game import (INF, Cost, Game, GameError, Lasso, check_lasso, cost_to_json,
                   format_cost, players_of, validate_game)
from .labeling import is_lambda_consistent, run_fixpoint


@dataclass(frozen=True)
class ConstraintQuery:
    lower: tuple
    upper: tuple

    def __post_init__(self):
        if len(self.lower) != len(self.upper):
            raise GameError("lower and upper bounds have different lengths")

    def ordered(self) -> bool:
        return all(a <= b for a, b in zip(self.lower, self.upper))

    def admits(self, cost: Sequence[Cost]) -> bool:
        return all(a <= c <= b for a, c, b in zip(self.lower, cost, self.upper))

    @property
    def horizon(self) -> int:
        """Largest finite bound; 0 if every bound is infinite."""
        return max((int(c) for c in self.lower + self.upper if c != INF), default=0)


@dataclass
class Decision:
    answer: bool
    reason: str = ""
    witness: Lasso | None = None   # over ExtVertex
    play: Lasso | None = None      # over arena vertex indices
    cost: tuple | None = None

    def to_dict(self, g: Game, x: ExtendedGame | None = None) -> dict:
        d = {"answer": "YES" if self.answer else "NO"}
        if self.reason:
            d["reason"] = self.reason
        if self.play is not None:
            d["witness"] = {"stem": [g.names[v] for v in self.play.stem],
                            "cycle": [g.names[v] for v in self.play.cycle]}
            if x is not None:
                d["witness"]["extended"] = {
                    "stem": [x.name(v) for v in self.witness.stem],
                    "cycle": [x.name(v) for v in self.witness.cycle]}
            d["cost"] = [cost_to_json(c) for c in self.cost]
        return d


def _entries_ok(q: ConstraintQuery, before: int, after: int, step: int) -> bool:
    for i in players_of(after & ~before):
        if not q.lower[i] <= step <= q.upper[i]:
            return False
    return True


def _restricted_live(cg: CounterGraph, roots, allowed) -> set:
    """Vertices reachable from ``roots`` through ``allowed`` edges that keep an infinite path."""
    seen, order, stack = set(), [], list(roots)
    while stack:
        v = stack.pop()
        if v in seen:
            continue
        seen.add(v)
        order.append(v)
        stack.extend(w for w in cg.successors(v) if allowed(v, w) and w not in seen)
    alive = {v: sum(1 for w in cg.successors(v) if allowed(v, w)) for v in order}
    pred = {v: [] for v in order}
    for v in order:
        for w in cg.successors(v):
            if allowed(v, w):
                pred[w].append(v)
    dead = [v for v in order if alive[v] == 0]
    gone = set(dead)
    while dead:
        w = dead.pop()
        for v in pred[w]:
            if v not in gone:
                alive[v] -= 1
                if alive[v] == 0:
                    gone.add(v)
                    dead.append(v)
    return set(order) - gone


def _walk_within(cg: CounterGraph, cv, live: set, allowed) -> Lasso:
    path, where = [cv], {cv: 0}
    while True:
        nxt = next(w for w in cg.successors(path[-1]) if w in live and allowed(path[-1], w))
        if nxt in where:
            k = where[nxt]
            return Lasso(tuple(path[:k]), tuple(path[k:]))
        where[nxt] = len(path)
        path.append(nxt)


class Solver:
    """Fixpoint labeling and its counter graph for one initialized game, shared across queries."""

    def __init__(self, g: Game, v0=None):
        problems = validate_game(g)
        if problems:
            raise GameError("; ".join(problems))
        self.game = g
        self.v0 = g.initial(v0)
        self.ext = ExtendedGame(g, self.v0)
        self.lam, self.trace = run_fixpoint(self.ext)
        self.cg = CounterGraph(self.ext, self.lam)

    def witness_bound(self, q: ConstraintQuery) -> int:
        d = max((int(c) for c in q.lower if c != INF), default=0)
        return d + 2 * self.cg.full_size()

    # -- constraint problem ----------------------------------------------------

    def decide(self, q: ConstraintQuery, refine_budget: int = 20000) -> Decision:
        g, x, cg = self.game, self.ext, self.cg
        if len(q.lower) != g.players:
            raise GameError(f"expected {g.players} bounds, got {len(q.lower)}")
        if not q.ordered():
            return Decision(False, "lower bound exceeds upper bound")
        start = cg.start(x.x0)
        if not _entries_ok(q, 0, x.x0.visited, 0):
            return Decision(False, "initial vertex already fixes a cost outside the bounds")
        D = q.horizon
        must = sum(1 << i for i in range(g.players) if q.upper[i] != INF)
        never = sum(1 << i for i in range(g.players) if q.lower[i] == INF)

        def late_ok(a, b):
            # beyond the horizon only unconstrained players may still enter
            return not ((b.ext.visited & ~a.ext.visited) & (never | must))

        # breadth-first over (counter vertex, exact step) up to step D + 1
        layer = {start: None}
        parents = [layer]
        for t in range(D + 1):
            nxt = {}
            for cv in layer:
                for w in cg.successors(cv):
                    if w not in nxt and _entries_ok(q, cv.ext.visited, w.ext.visited, t + 1):
                        nxt[w] = cv
            layer = nxt
            parents.append(layer)
            if not layer:
                return Decision(False, f"no consistent prefix satisfies the bounds up to step {t + 1}")
        cands = sorted((cv for cv in layer if cv.ext.visited & must == must),
                       key=lambda cv: (x.index[cv.ext], cv.counters))
        live = _restricted_live(cg, cands, late_ok)
        goal = next((cv for cv in cands if cv in live), None)
        if goal is None:
            return Decision(False, "no equilibrium outcome meets the bounds")
        prefix = [goal]
        for t in range(D + 1, 0, -1):
            prefix.append(parents[t][prefix[-1]])
        prefix.reverse()
        tail = _walk_within(cg, goal, live, late_ok)
        path = Lasso(tuple(prefix[:-1]) + tail.stem, tail.cycle)
        witness = path.map(lambda cv: cv.ext).normalized()
        better = self._short_witness(q, refine_budget)
        if better is not None:
            witness = better
        cost = x.cost(witness)
        assert q.admits(cost), (cost, q)
        return Decision(True, "", witness, project_lasso(witness), cost)

    def _short_witness(self, q: ConstraintQuery, budget: int):
        """Least arena lasso by (length, vertex ids) that is an admissible outcome."""
        g, x, lam = self.game, self.ext, self.lam
        nodes = 0
        limit = self.witness_bound(q)
        for L in range(1, limit + 1):
            path = [self.v0]
            ext = [x.x0]
            cnt = [self.cg.start(x.x0).counters]
            iters = [iter(g.succ[self.v0])]
            while iters:
                if len(path) == L:
                    found = self._close(q, path)
                    if found is not None:
                        return found
                    iters.pop()
                    path.pop()
                    ext.pop()
                    cnt.pop()
                    continue
                w = next(iters[-1], None)
                if w is None:
                    iters.pop()
                    path.pop()
                    ext.pop()
                    cnt.pop()
                    continue
                nodes += 1
                if nodes > budget:
                    return None
                step = len(path)
                xw = ExtVertex(w, ext[-1].visited | g.target_mask[w])
                cs = step_counters(x, lam, cnt[-1], xw)
                if cs is None or not _entries_ok(q, ext[-1].visited, xw.visited, step):
                    continue
                if any(q.upper[i] < step for i in range(g.players) if not xw.visited >> i & 1):
                    continue
                path.append(w)
                ext.append(xw)
                cnt.append(cs)
                iters.append(iter(g.succ[w]))
        return None

    def _close(self, q, path):
        last = self.game.succ[path[-1]]
        for k, v in enumerate(path):
            if v in last:
                lifted = lift_lasso(self.game, self.v0, Lasso(tuple(path[:k]), tuple(path[k:])))
                if q.admits(self.ext.cost(lifted)) and is_lambda_consistent(self.ext, self.lam, lifted)[0]:
                    return lifted
        return None

    # -- outcome check and profiles ------------------------------------------

    def outcome_check(self, play: Lasso) -> "SpeOutcomeCheck":
        check_lasso(self.game, play)
        lifted = lift_lasso(self.game, self.v0, play)
        ok, where = is_lambda_consistent(self.ext, self.lam, lifted)
        if ok:
            return SpeOutcomeCheck(True, lifted)
        n, i = where
        v = lifted.at(n)
        c = self.ext.cost(lifted.suffix(n))[i]
        return SpeOutcomeCheck(False, lifted, n, i, c, self.lam[v])

    def build_profile(self, play: Lasso) -> "SpeProfile":
        """Finite-memory profile whose outcome is ``play`` (an arena lasso from v0)."""
        chk = self.outcome_check(play)
        if not chk.ok:
            raise GameError(f"play is not an equilibrium outcome: {chk.describe(self.game)}")
        x = self.ext
        slots = {}
        for v in x.vertices:
            i = x.owner(v)
            for w in x.succ[v]:
                if (i, w) not in slots:
                    _, wit = self.cg.sup_cost(w, i)
                    slots[(i, w)] = wit.map(lambda cv: cv.ext).normalized()
        return SpeProfile(x, chk.lifted, slots)


@dataclass
class SpeOutcomeCheck:
    ok: bool
    lifted: Lasso
    index: int | None = None
    player: int | None = None
    suffix_cost: Cost | None = None
    label: Cost | None = None

    def describe(self, g: Game) -> str:
        if self.ok:
            return "equilibrium outcome"
        v = self.lifted.at(self.index)
        return (f"player {self.player + 1} at position {self.index} ({g.names[v.base]}) has "
                f"remaining cost {format_cost(self.suffix_cost)} above label {format_cost(self.label)}")


PRIMARY = "primary"


@dataclass
class SpeProfile:
    """Primary outcome plus one punishment play per (deviator, entered vertex).

    Memory is ``(slot, position)``: the play currently followed and the
    position on it. A move that leaves the play switches to the punishment
    for the owner of the vertex that was left.
    """

    ext: ExtendedGame
    primary: Lasso
    punishments: dict = field(default_factory=dict)

    def play_of(self, slot) -> Lasso:
        return self.primary if slot == PRIMARY else self.punishments[slot]

    @property
    def initial(self):
        return (PRIMARY, 0)

    def _advance(self, slot, pos):
        lasso = self.play_of(slot)
        pos += 1
        if pos == len(lasso):
            pos = len(lasso.stem)
        return pos

    def move(self, mem, v: ExtVertex) -> ExtVertex:
        slot, pos = mem
        lasso = self.play_of(slot)
        assert lasso.at(pos) == v, "memory out of sync with the play"
        return lasso.at(self._advance(slot, pos))

    def update(self, mem, v: ExtVertex, w: ExtVertex):
        slot, pos = mem
        if w == self.move(mem, v):
            return (slot, self._advance(slot, pos))
        return ((self.ext.owner(v), w), 0)

    def memory_size(self) -> int:
        return len(self.primary) + sum(len(l) for l in self.punishments.values())

    def next_move(self, history: Sequence[ExtVertex]) -> ExtVertex:
        """Move prescribed after the finite history (which starts at the initial vertex)."""
        if not history or history[0] != self.primary.first:
            raise GameError("history must start at the initial vertex")
        mem = self.initial
        for v, w in zip(history, history[1:]):
            if w not in self.ext.succ[v]:
                raise GameError("history uses a missing edge")
            mem = self.update(mem, v, w)
        return self.move(mem, history[-1])

    def to_dict(self) -> dict:
        x = self.ext

        def show(l):
            return {"stem": [x.name(v) for v in l.stem], "cycle": [x.name(v) for v in l.cycle]}

        table = {f"({i + 1},{x.name(w)})": show(l)
                 for (i, w), l in sorted(self.punishments.items(),
                                         key=lambda kv: (kv[0][0], x.index[kv[0][1]]))}
        return {
            "primary": show(self.primary),
            "punishments": table,
            "rule": ("follow the current play; when the owner i of the current vertex moves "
                     "to w off the play, follow punishment (i,w) from its start"),
            "memory_states": self.memory_size(),
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2) + "\n"


# -- function-style entry points ----------------------------------------------


def decide_constraint(g: Game, v0, lower, upper, solver: Solver | None = None) -> Decision:
    solver = solver or Solver(g, v0)
    return solver.decide(ConstraintQuery(tuple(lower), tuple(upper)))


def spe_outcome_check(g: Game, v0, play: Lasso, solver: Solver | None = None) -> SpeOutcomeCheck:
    solver = solver or Solver(g, v0)
    return solver.outcome_check(play)


def build_spe_profile(g: Game, v0, play: Lasso, solver: Solver | None = None) -> SpeProfile:
    solver = solver or Solver(g, v0)
    return solver.build_profile(play)


__all__ = [
    "ConstraintQuery", "Decision", "EmptyPlaySet", "Solver", "SpeOutcomeCheck", "SpeProfile",
    "build_spe_profile", "decide_constraint", "spe_outcome_check",
]
