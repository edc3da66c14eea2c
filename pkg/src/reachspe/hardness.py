"""QBF to reachability-game reduction and a brute-force QBF evaluator."""
from __future__ import annotations

import random
from dataclasses import dataclass, field

from .game import INF, Game, GameError


@dataclass(frozen=True)
class QbfFormula:
    """Prenex CNF over x1..xm with quantifiers alternating from an existential x1.

    Literals are non-zero ints: ``k`` for x_k and ``-k`` for its negation.
    """

    m: int
    clauses: tuple
    notes: tuple = field(default=(), compare=False)

    def __post_init__(self):
        object.__setattr__(self, "clauses", tuple(tuple(c) for c in self.clauses))
        if self.m < 1:
            raise GameError("at least one variable required")
        if not self.clauses:
            raise GameError("at least one clause required")
        for c in self.clauses:
            if not c:
                raise GameError("empty clause")
            for lit in c:
                if not isinstance(lit, int) or lit == 0 or abs(lit) > self.m:
                    raise GameError(f"literal {lit!r} does not name a declared variable")

    @property
    def n(self) -> int:
        return len(self.clauses)

    @staticmethod
    def existential(k: int) -> bool:
        return k % 2 == 1

    def to_qdimacs(self) -> str:
        lines = [f"p cnf {self.m} {self.n}"]
        for k in range(1, self.m + 1):
            lines.append(f"{'e' if self.existential(k) else 'a'} {k} 0")
        for c in self.clauses:
            lines.append(" ".join(map(str, c)) + " 0")
        return "\n".join(lines) + "\n"


def parse_qdimacs(text: str, strict: bool = False) -> QbfFormula:
    """Read the ``e``/``a`` prefix lines and 0-terminated clauses.

    Non-alternating prefixes are padded with fresh unconstrained variables and
    the variables renumbered, unless ``strict``. Variables never quantified
    join the outermost existential block.
    """
    blocks: list[tuple[str, list[int]]] = []
    clauses = []
    pending: list[int] = []
    declared = None
    for raw in text.splitlines():
        line = raw.strip()
        if not line or line.startswith("c"):
            continue
        toks = line.split()
        if toks[0] == "p":
            if len(toks) != 4 or toks[1] != "cnf":
                raise GameError(f"bad problem line {line!r}")
            declared = int(toks[2])
            continue
        if toks[0] in ("e", "a"):
            vs = [int(t) for t in toks[1:]]
            if not vs or vs[-1] != 0:
                raise GameError(f"quantifier line must end with 0: {line!r}")
            blocks.append((toks[0], vs[:-1]))
            continue
        try:
            nums = [int(t) for t in toks]
        except ValueError:
            raise GameError(f"bad clause line {line!r}") from None
        for lit in nums:
            if lit == 0:
                clauses.append(pending)
                pending = []
            else:
                pending.append(lit)
    if pending:
        raise GameError("last clause is not 0-terminated")

    bound = [v for _, vs in blocks for v in vs]
    if len(set(bound)) != len(bound):
        raise GameError("variable quantified twice")
    used = sorted({abs(l) for c in clauses for l in c} | set(range(1, (declared or 0) + 1)))
    free = [v for v in used if v not in set(bound)]
    notes = []
    if free:
        notes.append(f"free variables {free} quantified existentially")
        if blocks and blocks[0][0] == "e":
            blocks[0] = ("e", free + blocks[0][1])
        else:
            blocks.insert(0, ("e", free))

    order: list[int | None] = []  # None marks a padding variable
    for q, vs in blocks:
        for v in vs:
            want = "e" if len(order) % 2 == 0 else "a"
            if q != want:
                if strict:
                    raise GameError("quantifiers must alternate starting with an existential")
                order.append(None)
            order.append(v)
    if strict and any(v is None for v in order):
        raise GameError("quantifiers must alternate starting with an existential")
    pads = sum(v is None for v in order)
    if pads:
        notes.append(f"{pads} dummy variable(s) inserted to restore alternation")
    renum = {v: k for k, v in enumerate(order, start=1) if v is not None}
    if any(renum.get(v) != v for v in renum):
        notes.append("variables renumbered: " + ", ".join(f"{v}->{k}" for v, k in renum.items() if v != k))
    new = [[(1 if l > 0 else -1) * renum[abs(l)] for l in c] for c in clauses]
    return QbfFormula(max(len(order), 1), tuple(map(tuple, new)), tuple(notes))


def qbf_eval(f: QbfFormula) -> bool:
    def sat(assign):
        return all(any(assign[abs(l)] == (l > 0) for l in c) for c in f.clauses)

    def go(k, assign):
        if k > f.m:
            return sat(assign)
        branches = (go(k + 1, {**assign, k: b}) for b in (True, False))
        return any(branches) if f.existential(k) else all(branches)

    return go(1, {})


def _lit_name(lit: int) -> str:
    return f"x{lit}" if lit > 0 else f"nx{-lit}"


def qbf_to_game(f: QbfFormula):
    """Return ``(game, "q1", (lower, upper))`` such that an equilibrium within
    the bounds exists iff the formula is true.

    Players 1..n own the clause vertices, player n+1 the existential choices
    (and every single-successor vertex), player n+2 the universal choices.
    """
    m, n = f.m, f.n
    eplayer, aplayer = n + 1, n + 2
    vertices, edges = [], []
    for k in range(1, m + 1):
        vertices.append((f"q{k}", eplayer if f.existential(k) else aplayer))
        vertices += [(f"x{k}", eplayer), (f"nx{k}", eplayer)]
        nxt = f"q{k + 1}" if k < m else "c1"
        edges += [(f"q{k}", f"x{k}"), (f"q{k}", f"nx{k}"), (f"x{k}", nxt), (f"nx{k}", nxt)]
    for k in range(1, n + 1):
        vertices += [(f"c{k}", k), (f"t{k}", eplayer)]
        edges += [(f"c{k}", f"t{k}"), (f"c{k}", f"c{k + 1}" if k < n else f"t{n + 1}"),
                  (f"t{k}", f"t{k}")]
    vertices.append((f"t{n + 1}", eplayer))
    edges.append((f"t{n + 1}", f"t{n + 1}"))
    targets = {k: sorted({_lit_name(l) for l in c}) + [f"t{k}"] for k, c in enumerate(f.clauses, 1)}
    targets[eplayer] = [f"t{n + 1}"]
    targets[aplayer] = [f"t{k}" for k in range(1, n + 1)]
    g = Game(n + 2, vertices, edges, targets, "q1")
    upper = tuple([2 * m] * n + [2 * m + n, INF])
    lower = tuple([0] * (n + 2))
    return g, "q1", (lower, upper)


def random_qbf(rng: random.Random, max_vars: int = 3, max_clauses: int = 3,
               max_width: int = 3) -> QbfFormula:
    m = rng.randint(1, max_vars)
    n = rng.randint(1, max_clauses)
    clauses = []
    for _ in range(n):
        width = rng.randint(1, min(max_width, m))
        vs = rng.sample(range(1, m + 1), width)
        clauses.append(tuple(v if rng.random() < 0.5 else -v for v in vs))
    return QbfFormula(m, tuple(clauses))
