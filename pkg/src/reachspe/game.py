"""Quantitative reachability games, lasso plays and their costs.

Players are numbered 1..n in files and on the command line; internally a
player is an index ``0..n-1`` and a set of players is an ``int`` bit mask
(bit ``i`` set means player ``i + 1``).
"""
from __future__ import annotations

import json
import math
from dataclasses import dataclass
from typing import Callable, Generic, Hashable, Iterable, Sequence, TypeVar

INF = math.inf

Cost = float  # a non-negative int, or INF

T = TypeVar("T", bound=Hashable)

MAX_PLAYERS = 64


class GameError(ValueError):
    """Raised for malformed games, plays or queries."""


def format_cost(c: Cost) -> str:
    return "inf" if c == INF else str(int(c))


def parse_cost(s) -> Cost:
    if isinstance(s, str):
        s = s.strip().lower()
        if s in ("inf", "+inf", "infinity", "+infinity", "∞", "+∞"):
            return INF
        try:
            s = int(s)
        except ValueError:
            raise GameError(f"bad cost value {s!r}") from None
    if isinstance(s, bool) or not isinstance(s, (int, float)):
        raise GameError(f"bad cost value {s!r}")
    if s == INF:
        return INF
    if s < 0 or s != int(s):
        raise GameError(f"bad cost value {s!r}")
    return int(s)


def cost_to_json(c: Cost):
    return "inf" if c == INF else int(c)


def parse_cost_vector(text: str, players: int | None = None) -> tuple[Cost, ...]:
    vec = tuple(parse_cost(part) for part in text.split(","))
    if players is not None and len(vec) != players:
        raise GameError(f"expected {players} bounds, got {len(vec)}")
    return vec


def players_of(mask: int) -> list[int]:
    """0-based player indices contained in ``mask``."""
    out = []
    i = 0
    while mask:
        if mask & 1:
            out.append(i)
        mask >>= 1
        i += 1
    return out


def format_players(mask: int) -> str:
    return "{" + ",".join(str(i + 1) for i in players_of(mask)) + "}"


@dataclass(frozen=True)
class Lasso(Generic[T]):
    """The ultimately periodic play ``stem · cycle^ω``."""

    stem: tuple
    cycle: tuple

    def __post_init__(self):
        object.__setattr__(self, "stem", tuple(self.stem))
        object.__setattr__(self, "cycle", tuple(self.cycle))
        if not self.cycle:
            raise GameError("lasso cycle must be nonempty")

    def __len__(self):
        return len(self.stem) + len(self.cycle)

    def at(self, n: int):
        """Vertex at position ``n`` of the infinite play."""
        if n < len(self.stem):
            return self.stem[n]
        return self.cycle[(n - len(self.stem)) % len(self.cycle)]

    @property
    def first(self):
        return self.at(0)

    def positions(self) -> tuple:
        """Stem followed by one copy of the cycle."""
        return self.stem + self.cycle

    def suffix(self, n: int) -> "Lasso":
        if n < len(self.stem):
            return Lasso(self.stem[n:], self.cycle)
        k = (n - len(self.stem)) % len(self.cycle)
        return Lasso((), self.cycle[k:] + self.cycle[:k])

    def map(self, fn: Callable) -> "Lasso":
        return Lasso(tuple(map(fn, self.stem)), tuple(map(fn, self.cycle)))

    def normalized(self) -> "Lasso":
        """Canonical representation of the same infinite play.

        The cycle is reduced to its primitive period and the stem is made as
        short as possible, so two lassos describe the same play iff their
        normal forms are equal.
        """
        cycle = _primitive(self.cycle)
        stem = list(self.stem)
        while stem and stem[-1] == cycle[-1]:
            stem.pop()
            cycle = (cycle[-1],) + cycle[:-1]
        return Lasso(tuple(stem), cycle)

    def unrolled(self, times: int = 1) -> "Lasso":
        return Lasso(self.stem + self.cycle * times, self.cycle)


def _primitive(word: tuple) -> tuple:
    n = len(word)
    for p in range(1, n + 1):
        if n % p == 0 and word[:p] * (n // p) == word:
            return word[:p]
    return word


def first_index(lasso: Lasso, pred: Callable[[object], bool]) -> Cost:
    """Least position of the play satisfying ``pred``, INF if none."""
    for n, v in enumerate(lasso.positions()):
        if pred(v):
            return n
    return INF


class Game:
    """An arena with player-owned vertices and one target set per player.

    Vertices are interned to dense integers in declaration order; successor
    lists are sorted by vertex index so iteration order is deterministic.
    Instances are treated as immutable.
    """

    def __init__(self, players: int, vertices: Sequence[tuple[str, int]],
                 edges: Iterable[tuple[str, str]], targets: dict[int, Iterable[str]],
                 init: str | None = None):
        self.players = players
        self.names: tuple[str, ...] = tuple(name for name, _ in vertices)
        self.owner: tuple[int, ...] = tuple(owner - 1 for _, owner in vertices)
        self.index = {name: k for k, name in enumerate(self.names)}
        self._raw_edges = [tuple(e) for e in edges]
        self._raw_targets = {int(p): list(vs) for p, vs in targets.items()}
        self._raw_init = init

        succ: list[set[int]] = [set() for _ in self.names]
        for a, b in self._raw_edges:
            if a in self.index and b in self.index:
                succ[self.index[a]].add(self.index[b])
        self.succ: tuple[tuple[int, ...], ...] = tuple(tuple(sorted(s)) for s in succ)

        tgt = [set() for _ in range(max(players, 0))]
        for p, vs in self._raw_targets.items():
            if 1 <= p <= players:
                tgt[p - 1].update(self.index[v] for v in vs if v in self.index)
        self.targets: tuple[frozenset[int], ...] = tuple(frozenset(t) for t in tgt)
        # target_mask[v]: players having v in their target set
        self.target_mask: tuple[int, ...] = tuple(
            sum(1 << i for i in range(players) if v in self.targets[i])
            for v in range(len(self.names)))
        self.init: int | None = self.index.get(init) if init is not None else None

    def __repr__(self):
        return f"Game(players={self.players}, vertices={len(self.names)})"

    @property
    def n_vertices(self) -> int:
        return len(self.names)

    @property
    def all_players(self) -> int:
        return (1 << self.players) - 1

    def vertex(self, v) -> int:
        """Resolve a vertex name (or index) to its index."""
        if isinstance(v, int) and not isinstance(v, bool):
            if 0 <= v < self.n_vertices:
                return v
            raise GameError(f"vertex index {v} out of range")
        if v not in self.index:
            raise GameError(f"undeclared vertex {v!r}")
        return self.index[v]

    def initial(self, v0=None) -> int:
        if v0 is not None:
            return self.vertex(v0)
        if self.init is None:
            raise GameError("game has no initial vertex and none was given")
        return self.init

    def edges(self) -> list[tuple[int, int]]:
        return [(a, b) for a in range(self.n_vertices) for b in self.succ[a]]

    def lasso(self, stem: Iterable, cycle: Iterable) -> Lasso:
        """Build a lasso over vertex indices from names or indices."""
        return Lasso(tuple(self.vertex(v) for v in stem), tuple(self.vertex(v) for v in cycle))

    def lasso_names(self, lasso: Lasso) -> Lasso:
        return lasso.map(lambda v: self.names[v])

    # -- serialization -----------------------------------------------------

    def to_dict(self) -> dict:
        d = {
            "players": self.players,
            "vertices": [{"id": n, "owner": o + 1} for n, o in zip(self.names, self.owner)],
            "edges": [[self.names[a], self.names[b]] for a, b in self.edges()],
            "targets": {str(i + 1): [self.names[v] for v in sorted(self.targets[i])]
                        for i in range(self.players)},
        }
        if self.init is not None:
            d["init"] = self.names[self.init]
        return d

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2) + "\n"

    @classmethod
    def from_dict(cls, d: dict) -> "Game":
        try:
            players = d["players"]
            vertices = [(v["id"], v["owner"]) for v in d["vertices"]]
            edges = [(a, b) for a, b in d["edges"]]
            targets = {int(k): list(vs) for k, vs in d.get("targets", {}).items()}
        except (KeyError, TypeError, ValueError) as exc:
            raise GameError(f"malformed game description: {exc}") from None
        if not isinstance(players, int) or isinstance(players, bool):
            raise GameError("'players' must be an integer")
        return cls(players, vertices, edges, targets, d.get("init"))

    @classmethod
    def from_json(cls, text: str) -> "Game":
        try:
            d = json.loads(text)
        except json.JSONDecodeError as exc:
            raise GameError(f"invalid JSON: {exc}") from None
        return cls.from_dict(d)

    @classmethod
    def load(cls, path) -> "Game":
        with open(path, encoding="utf-8") as f:
            return cls.from_json(f.read())


def validate_game(g: Game) -> list[str]:
    """Return the list of arena violations; empty means the game is well formed."""
    problems = []
    n = g.n_vertices
    if n < 2:
        problems.append(f"|V| >= 2 required, game has {n} vertex(es)")
    if g.players < 1:
        problems.append("at least one player required")
    elif g.players > n:
        problems.append(f"number of players ({g.players}) exceeds |V| ({n})")
    if g.players > MAX_PLAYERS:
        problems.append(f"at most {MAX_PLAYERS} players supported")
    seen = set()
    for name in g.names:
        if name in seen:
            problems.append(f"vertex {name!r} declared twice")
        seen.add(name)
    for name, owner in zip(g.names, g.owner):
        if not 0 <= owner < g.players:
            problems.append(f"vertex {name!r} has invalid owner {owner + 1}")
    for a, b in g._raw_edges:
        for end in (a, b):
            if end not in g.index:
                problems.append(f"edge ({a!r}, {b!r}) names undeclared vertex {end!r}")
    for v in range(n):
        if not g.succ[v]:
            problems.append(f"vertex {g.names[v]!r} has no outgoing edge")
    for p, vs in sorted(g._raw_targets.items()):
        if not 1 <= p <= g.players:
            problems.append(f"target set for undeclared player {p}")
        for name in vs:
            if name not in g.index:
                problems.append(f"target of player {p} names undeclared vertex {name!r}")
    if g._raw_init is not None and g._raw_init not in g.index:
        problems.append(f"initial vertex {g._raw_init!r} is undeclared")
    return problems


def check_lasso(g: Game, lasso: Lasso) -> None:
    """Raise GameError unless ``lasso`` follows edges of ``g``."""
    seq = lasso.positions()
    for v in seq:
        if not (isinstance(v, int) and 0 <= v < g.n_vertices):
            raise GameError(f"lasso names unknown vertex {v!r}")
    nxt = list(seq[1:]) + [lasso.cycle[0]]
    for a, b in zip(seq, nxt):
        if b not in g.succ[a]:
            raise GameError(f"lasso uses missing edge ({g.names[a]}, {g.names[b]})")


def cost_of_lasso(g: Game, lasso: Lasso) -> tuple[Cost, ...]:
    check_lasso(g, lasso)
    return _costs(g, lasso)


def _costs(g: Game, lasso: Lasso) -> tuple[Cost, ...]:
    return tuple(first_index(lasso, g.targets[i].__contains__) for i in range(g.players))


def suffix_cost(g: Game, lasso: Lasso, n: int) -> tuple[Cost, ...]:
    if n < 0:
        raise GameError("suffix index must be non-negative")
    return cost_of_lasso(g, lasso.suffix(n))
