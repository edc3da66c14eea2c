"""Counter graph of a labeling: extended vertices plus per-player deadlines.

Infinite paths from starting vertices are exactly the plays consistent with
the labeling. The graph is explored lazily; only vertices reachable from the
queried starting vertices are ever built.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Mapping, NamedTuple

from .extended import ExtendedGame, ExtVertex, _dot_id
from .game import INF, Cost, GameError, Lasso, format_cost


class CounterVertex(NamedTuple):
    ext: ExtVertex
    counters: tuple  # per player; 0 for players already in ext.visited


class EmptyPlaySet(GameError):
    """No play from the vertex is consistent with the labeling."""


class NotConsistent(GameError):
    """A play violates the labeling: ``player`` has an expired deadline at ``index``."""

    def __init__(self, index: int, player: int):
        super().__init__(f"play is not consistent: deadline of player {player + 1} "
                         f"expires at position {index}")
        self.index = index
        self.player = player


def max_finite(values) -> int:
    return max((int(c) for c in values if c != INF), default=0)


def starting_vertex(x: ExtendedGame, lam: Mapping, v: ExtVertex) -> CounterVertex:
    own = x.owner(v)
    cs = []
    for i in range(x.game.players):
        if v.visited >> i & 1:
            cs.append(0)
        elif i == own:
            cs.append(lam[v])
        else:
            cs.append(INF)
    return CounterVertex(v, tuple(cs))


def step_counters(x: ExtendedGame, lam: Mapping, counters: tuple, nxt: ExtVertex):
    """Counters after moving to ``nxt``; None if some deadline expires."""
    own = x.owner(nxt)
    out = []
    for i, c in enumerate(counters):
        if nxt.visited >> i & 1:
            out.append(0)
        elif c > 1:
            out.append(min(c - 1, lam[nxt]) if i == own else c - 1)
        elif c == 1:
            return None
        else:
            raise AssertionError(f"counter 0 for player {i + 1} outside its visited region")
    return tuple(out)


@dataclass
class CounterGraph:
    """Lazily explored counter graph for labeling ``lam``.

    Successor lists and liveness are memoised; results do not depend on the
    order in which queries are issued.
    """

    ext: ExtendedGame
    lam: Mapping
    _succ: dict = field(default_factory=dict, repr=False)
    _live: dict = field(default_factory=dict, repr=False)
    _sup: dict = field(default_factory=dict, repr=False)

    def max_range(self, scope=None) -> int:
        """Maximal finite range of the labeling, optionally restricted to ``scope``."""
        vs = self.ext.vertices if scope is None else scope
        return max_finite(self.lam[v] for v in vs)

    def potential_size(self, scope=None) -> int:
        """Number of potential counter vertices ``|V^X| * (K + 2)^|Π|`` over ``scope``."""
        vs = self.ext.vertices if scope is None else scope
        return len(vs) * (self.max_range(scope) + 2) ** self.ext.game.players

    def full_size(self) -> int:
        """``|V| * 2^|Π| * (K + 2)^|Π|``, the size used for lasso length bounds."""
        g = self.ext.game
        return g.n_vertices * 2 ** g.players * (self.max_range() + 2) ** g.players

    def start(self, v: ExtVertex) -> CounterVertex:
        return starting_vertex(self.ext, self.lam, v)

    def successors(self, cv: CounterVertex) -> tuple[CounterVertex, ...]:
        out = self._succ.get(cv)
        if out is None:
            out = []
            for nxt in self.ext.succ[cv.ext]:
                cs = step_counters(self.ext, self.lam, cv.counters, nxt)
                if cs is not None:
                    out.append(CounterVertex(nxt, cs))
            out = tuple(out)
            self._succ[cv] = out
        return out

    def explored(self):
        return self._succ.keys()

    # -- liveness ------------------------------------------------------------

    def live_set(self, roots) -> set[CounterVertex]:
        """Vertices reachable from ``roots`` that have an infinite path."""
        closure = self._explore(roots)
        return {v for v in closure if self._live[v]}

    def is_live(self, cv: CounterVertex) -> bool:
        if cv not in self._live:
            self._explore([cv])
        return self._live[cv]

    def _explore(self, roots) -> list[CounterVertex]:
        seen = set()
        order = []
        stack = [r for r in roots]
        while stack:
            v = stack.pop()
            if v in seen:
                continue
            seen.add(v)
            order.append(v)
            if v in self._live:
                continue
            for w in self.successors(v):
                if w not in seen:
                    stack.append(w)
        fresh = [v for v in order if v not in self._live]
        if fresh:
            self._prune(fresh)
        return order

    def _prune(self, fresh: list[CounterVertex]) -> None:
        # fresh is closed under successors, up to vertices whose status is already known
        fresh_set = set(fresh)
        pred: dict[CounterVertex, list[CounterVertex]] = {v: [] for v in fresh}
        alive = {}
        for v in fresh:
            n = 0
            for w in self.successors(v):
                if w in fresh_set:
                    pred[w].append(v)
                    n += 1
                elif self._live[w]:
                    n += 1
            alive[v] = n
        dead = [v for v in fresh if alive[v] == 0]
        dead_set = set(dead)
        while dead:
            w = dead.pop()
            for v in pred[w]:
                if v not in dead_set:
                    alive[v] -= 1
                    if alive[v] == 0:
                        dead_set.add(v)
                        dead.append(v)
        for v in fresh:
            self._live[v] = v not in dead_set

    def live_walk(self, cv: CounterVertex) -> Lasso:
        """Deterministic valid lasso from a live vertex (first live successor each step)."""
        if not self.is_live(cv):
            raise EmptyPlaySet(f"no valid path from {cv!r}")
        path = [cv]
        where = {cv: 0}
        while True:
            nxt = next(w for w in self.successors(path[-1]) if self.is_live(w))
            if nxt in where:
                k = where[nxt]
                return Lasso(tuple(path[:k]), tuple(path[k:]))
            where[nxt] = len(path)
            path.append(nxt)

    # -- supremum of costs ----------------------------------------------------

    def sup_cost(self, v: ExtVertex, i: int) -> tuple[Cost, Lasso]:
        """Maximal cost of player ``i`` over consistent plays from ``v``, with a witness.

        The witness is a lasso over counter vertices starting at the starting
        vertex of ``v``.
        """
        key = (v, i)
        hit = self._sup.get(key)
        if hit is not None:
            return hit
        s = self.start(v)
        if not self.is_live(s):
            raise EmptyPlaySet(f"no consistent play from {self.ext.name(v)}")
        bit = 1 << i
        if v.visited & bit:
            res = (0, self.live_walk(s))
            self._sup[key] = res
            return res

        def inside(w):
            return not (w.ext.visited & bit) and self.is_live(w)

        # iterative DFS: detect a cycle avoiding the target, else longest path
        longest: dict[CounterVertex, int] = {}
        best_next: dict[CounterVertex, CounterVertex | None] = {}
        on_stack = {s: 0}
        stack = [(s, iter(self.successors(s)))]
        path = [s]
        while stack:
            u, it = stack[-1]
            advanced = False
            for w in it:
                if not inside(w):
                    continue
                if w in on_stack:
                    k = on_stack[w]
                    res = (INF, Lasso(tuple(path[:k]), tuple(path[k:])))
                    self._sup[key] = res
                    return res
                if w in longest:
                    continue
                on_stack[w] = len(path)
                path.append(w)
                stack.append((w, iter(self.successors(w))))
                advanced = True
                break
            if advanced:
                continue
            stack.pop()
            path.pop()
            del on_stack[u]
            best, arg = 0, None
            for w in self.successors(u):
                if inside(w) and longest[w] + 1 > best:
                    best, arg = longest[w] + 1, w
            longest[u] = best
            best_next[u] = arg

        walk = [s]
        while best_next[walk[-1]] is not None:
            walk.append(best_next[walk[-1]])
        exit_ = next(w for w in self.successors(walk[-1]) if self.is_live(w) and w.ext.visited & bit)
        tail = self.live_walk(exit_)
        res = (longest[s] + 1, Lasso(tuple(walk) + tail.stem, tail.cycle))
        self._sup[key] = res
        return res


def path_to_lasso_play(cg: CounterGraph, path: Lasso) -> Lasso:
    """Project a valid counter-graph lasso onto the extended game."""
    seq = path.positions()
    nxt = list(seq[1:]) + [path.cycle[0]]
    for a, b in zip(seq, nxt):
        if b not in cg.successors(a):
            raise GameError("not a path of the counter graph")
    return project_lasso_ext(path)


def project_lasso_ext(path: Lasso) -> Lasso:
    return path.map(lambda cv: cv.ext).normalized()


def play_to_path(cg: CounterGraph, play: Lasso) -> Lasso:
    """Track the counters along an extended lasso.

    Raises NotConsistent at the first expired deadline. The returned counter
    lasso may unroll the play's cycle until the counters repeat.
    """
    x, lam = cg.ext, cg.lam
    x.check_lasso(play)
    cv = cg.start(play.first)
    path = [cv]
    stem_len = len(play.stem)
    period = len(play.cycle)
    seen = {}
    n = 0
    while True:
        if n >= stem_len:
            key = ((n - stem_len) % period, cv)
            if key in seen:
                k = seen[key]
                return Lasso(tuple(path[:k]), tuple(path[k:n]))
            seen[key] = n
        nxt = play.at(n + 1)
        cs = step_counters(x, lam, cv.counters, nxt)
        if cs is None:
            bad = next(i for i, c in enumerate(cv.counters) if c == 1 and not nxt.visited >> i & 1)
            raise NotConsistent(n + 1, bad)
        cv = CounterVertex(nxt, cs)
        path.append(cv)
        n += 1


def counter_to_dot(cg: CounterGraph, roots, limit: int = 500) -> str:
    """Graphviz rendering of the explored fragment reachable from ``roots``."""
    x = cg.ext
    order = cg._explore(roots)[:limit]
    keep = set(order)

    def name(cv):
        cs = ",".join(format_cost(c) for c in cv.counters)
        return f"{x.name(cv.ext)} ({cs})"

    lines = ["digraph counter {", "  rankdir=LR;"]
    for cv in order:
        attrs = []
        if not cg.successors(cv):
            attrs.append('color=red xlabel="dead end"')
        elif not cg.is_live(cv):
            attrs.append("color=gray style=dashed")
        if cv in roots:
            attrs.append("style=bold")
        lines.append(f"  {_dot_id(name(cv))} [{' '.join(attrs)}];")
    for cv in order:
        for w in cg.successors(cv):
            if w in keep:
                lines.append(f"  {_dot_id(name(cv))} -> {_dot_id(name(w))};")
    lines.append("}")
    return "\n".join(lines) + "\n"


__all__ = [
    "CounterGraph", "CounterVertex", "EmptyPlaySet", "NotConsistent", "counter_to_dot",
    "max_finite", "path_to_lasso_play", "play_to_path", "starting_vertex",
]
