"""The extended game over vertices ``(v, I)`` and its region structure."""
from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from typing import NamedTuple

from .game import (Cost, Game, GameError, Lasso, MAX_PLAYERS, first_index,
                   format_players, players_of)


class ExtVertex(NamedTuple):
    base: int     # vertex index in the arena
    visited: int  # mask of players that already visited their target set


class ExtendedGame:
    """Part of the extended game reachable from ``x0``.

    ``vertices`` is in breadth-first discovery order and ``succ`` maps each
    extended vertex to its successors ordered by base vertex index.
    """

    def __init__(self, game: Game, v0: int):
        if game.players > MAX_PLAYERS:
            raise GameError(f"at most {MAX_PLAYERS} players supported")
        self.game = game
        self.v0 = v0
        self.x0 = ExtVertex(v0, game.target_mask[v0])
        succ: dict[ExtVertex, tuple[ExtVertex, ...]] = {}
        order = [self.x0]
        queue = deque([self.x0])
        seen = {self.x0}
        while queue:
            x = queue.popleft()
            out = tuple(ExtVertex(w, x.visited | game.target_mask[w]) for w in game.succ[x.base])
            succ[x] = out
            for y in out:
                if y not in seen:
                    seen.add(y)
                    order.append(y)
                    queue.append(y)
        self.vertices: tuple[ExtVertex, ...] = tuple(order)
        self.succ = succ
        self.index = {x: k for k, x in enumerate(self.vertices)}

    def __len__(self):
        return len(self.vertices)

    def __contains__(self, x):
        return x in self.succ

    def owner(self, x: ExtVertex) -> int:
        return self.game.owner[x.base]

    def name(self, x: ExtVertex) -> str:
        return f"{self.game.names[x.base]}@{format_players(x.visited)}"

    def edges(self):
        for x in self.vertices:
            for y in self.succ[x]:
                yield x, y

    def check_lasso(self, lasso: Lasso) -> None:
        seq = lasso.positions()
        for x in seq:
            if x not in self.succ:
                raise GameError(f"{x!r} is not a reachable extended vertex")
        nxt = list(seq[1:]) + [lasso.cycle[0]]
        for a, b in zip(seq, nxt):
            if b not in self.succ[a]:
                raise GameError(f"lasso uses missing extended edge {self.name(a)} -> {self.name(b)}")

    def cost(self, lasso: Lasso) -> tuple[Cost, ...]:
        """Extended costs: first position whose visited set contains the player."""
        return tuple(first_index(lasso, lambda x, b=1 << i: bool(x.visited & b))
                     for i in range(self.game.players))


def build_extended(g: Game, v0=None) -> ExtendedGame:
    return ExtendedGame(g, g.initial(v0))


def _tie_key(mask: int, reverse: bool):
    ps = players_of(mask)
    return (bin(mask).count("1"), tuple(-p for p in ps) if reverse else tuple(ps))


@dataclass(frozen=True)
class RegionOrder:
    """Reachable visited-sets ``J_1 < ... < J_N`` (stored 0-based)."""

    regions: tuple[int, ...]
    members: tuple[tuple[ExtVertex, ...], ...]
    successors: tuple[frozenset[int], ...]  # region masks reachable in one extended edge

    @property
    def count(self) -> int:
        return len(self.regions)

    def position(self, mask: int) -> int:
        """1-based position of a region in the total order."""
        return self.regions.index(mask) + 1

    def suffix_vertices(self, n: int) -> tuple[ExtVertex, ...]:
        """Extended vertices of the arena restricted to regions ``J_n .. J_N``."""
        return tuple(x for k in range(n - 1, self.count) for x in self.members[k])

    def is_bottom(self, n: int) -> bool:
        return self.successors[n - 1] <= {self.regions[n - 1]}


def region_order(x: ExtendedGame, reverse_tie_break: bool = False) -> RegionOrder:
    """Total order on reachable regions extending the reachability order.

    Ties are broken by ``(|I|, sorted player list)``; since a strictly later
    region is a strict superset, sorting by size already yields a linear
    extension. ``reverse_tie_break`` flips the order among equal-size sets.
    """
    masks = sorted({v.visited for v in x.vertices}, key=lambda m: _tie_key(m, reverse_tie_break))
    members = tuple(tuple(v for v in x.vertices if v.visited == m) for m in masks)
    succs = []
    for m, vs in zip(masks, members):
        succs.append(frozenset(w.visited for v in vs for w in x.succ[v]))
    return RegionOrder(tuple(masks), members, tuple(succs))


def reachability_order(x: ExtendedGame) -> set[tuple[int, int]]:
    """Strict partial order ``I < I'`` iff ``I'`` is reachable from ``I`` and differs."""
    step: dict[int, set[int]] = {}
    for a, b in x.edges():
        step.setdefault(a.visited, set()).add(b.visited)
    out = set()
    for src in step:
        seen = {src}
        stack = [src]
        while stack:
            m = stack.pop()
            for n in step.get(m, ()):
                if n not in seen:
                    seen.add(n)
                    stack.append(n)
        out.update((src, m) for m in seen if m != src)
    return out


def lift_lasso(g: Game, v0, lasso: Lasso) -> Lasso:
    """Lift an arena lasso starting at ``v0`` to the extended game.

    The visited set can grow during the first traversals of the cycle, so the
    cycle is unrolled until one full traversal leaves it unchanged.
    """
    from .game import check_lasso
    v0 = g.initial(v0)
    check_lasso(g, lasso)
    if lasso.first != v0:
        raise GameError("lasso does not start at the initial vertex")
    out = []
    mask = 0
    for v in lasso.stem:
        mask |= g.target_mask[v]
        out.append(ExtVertex(v, mask))
    while True:
        start = mask | g.target_mask[lasso.cycle[0]]
        rnd = []
        for v in lasso.cycle:
            mask |= g.target_mask[v]
            rnd.append(ExtVertex(v, mask))
        if rnd[0].visited == start and mask == start:
            return Lasso(tuple(out), tuple(rnd)).normalized()
        out.extend(rnd)


def project_lasso(lasso: Lasso) -> Lasso:
    return lasso.map(lambda x: x.base).normalized()


@dataclass(frozen=True)
class Section:
    region: int         # 1-based position in the region order
    visited: int
    prefix: tuple       # finite part of the section
    cycle: tuple = ()   # nonempty only for the final, infinite section

    @property
    def empty(self) -> bool:
        return not self.prefix and not self.cycle

    @property
    def infinite(self) -> bool:
        return bool(self.cycle)


def region_decomposition(path, order: RegionOrder) -> list[Section]:
    """Split an extended path (finite tuple or Lasso) into per-region sections.

    Every region between the first and the last visited one gets a section,
    possibly empty.
    """
    if isinstance(path, Lasso):
        finite, cycle = path.stem, path.cycle
    else:
        finite, cycle = tuple(path), ()
    seq = finite + cycle
    if not seq:
        return []
    pos = [order.position(x.visited) for x in seq]
    if any(b < a for a, b in zip(pos, pos[1:])):
        raise GameError("path is not I-monotone")
    first, last = pos[0], pos[-1]
    sections = []
    for n in range(first, last + 1):
        prefix = tuple(x for x, p in zip(finite, pos) if p == n)
        cyc = cycle if (cycle and n == last) else ()
        sections.append(Section(n, order.regions[n - 1], prefix, cyc))
    return sections


_SHAPES = ("ellipse", "box", "diamond", "hexagon", "octagon")


def _dot_id(s: str) -> str:
    return '"' + s.replace('"', r'\"') + '"'


def extended_to_dot(x: ExtendedGame, labeling=None, order: RegionOrder | None = None) -> str:
    """Graphviz rendering with one dashed cluster per region."""
    order = order or region_order(x)
    g = x.game
    lines = ["digraph extended {", "  rankdir=LR;"]
    for n, (mask, members) in enumerate(zip(order.regions, order.members), start=1):
        lines.append(f"  subgraph cluster_{n} {{")
        lines.append(f"    style=dashed; label={_dot_id('J' + str(n) + ' = ' + format_players(mask))};")
        for v in members:
            label = f"{g.names[v.base]}, {format_players(v.visited)}"
            if labeling is not None:
                from .game import format_cost
                label += f"\\n{format_cost(labeling[v])}"
            shape = _SHAPES[g.owner[v.base] % len(_SHAPES)]
            extra = ' peripheries=2' if v.visited & (1 << g.owner[v.base]) else ""
            lines.append(f"    {_dot_id(x.name(v))} [label={_dot_id(label)} shape={shape}"
                         f" xlabel={_dot_id('P' + str(g.owner[v.base] + 1))}{extra}];")
        lines.append("  }")
    lines.append(f"  {_dot_id(x.name(x.x0))} [style=bold];")
    for a, b in x.edges():
        lines.append(f"  {_dot_id(x.name(a))} -> {_dot_id(x.name(b))};")
    lines.append("}")
    return "\n".join(lines) + "\n"


def arena_to_dot(g: Game) -> str:
    lines = ["digraph arena {"]
    for v, name in enumerate(g.names):
        tg = [str(i + 1) for i in range(g.players) if v in g.targets[i]]
        label = name + (f"\\nF{','.join(tg)}" if tg else "")
        lines.append(f"  {_dot_id(name)} [label={_dot_id(label)} "
                     f"xlabel={_dot_id('P' + str(g.owner[v] + 1))}{' peripheries=2' if tg else ''}];")
    for a, b in g.edges():
        lines.append(f"  {_dot_id(g.names[a])} -> {_dot_id(g.names[b])};")
    lines.append("}")
    return "\n".join(lines) + "\n"
