"""Labelings of the extended game and the bottom-up fixpoint computation."""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Mapping

from .counter import CounterGraph, max_finite
from .extended import ExtendedGame, RegionOrder, region_order
from .game import INF, Lasso, format_cost, format_players

Labeling = dict  # ExtVertex -> Cost


def initial_labeling(x: ExtendedGame) -> Labeling:
    return {v: 0 if v.visited >> x.owner(v) & 1 else INF for v in x.vertices}


def is_lambda_consistent(x: ExtendedGame, lam: Mapping, play: Lasso):
    """Check the deadline of the owner at every position of ``play``.

    Returns ``(True, None)`` or ``(False, (index, player))`` for the first
    violation. Checking the stem and one cycle traversal covers every suffix.
    """
    x.check_lasso(play)
    span = len(play)
    for n in range(span):
        v = play.at(n)
        bound = lam[v]
        if bound == INF:
            continue
        i = x.owner(v)
        bit = 1 << i
        # every vertex of the play is met within ``span`` steps of position n
        c = next((k for k in range(span) if play.at(n + k).visited & bit), INF)
        if c > bound:
            return False, (n, i)
    return True, None


def update_labeling(x: ExtendedGame, lam: Mapping, n: int, order: RegionOrder | None = None,
                    cg: CounterGraph | None = None, witnesses: dict | None = None) -> Labeling:
    """One update step on the vertices of region ``n`` and every later region.

    ``cg`` may be passed to reuse a counter graph already built for ``lam``.
    When ``witnesses`` is a dict, the chosen minimising successor of every
    updated vertex is stored in it.
    """
    order = order or region_order(x)
    cg = cg if cg is not None else CounterGraph(x, lam)
    new = dict(lam)
    for v in order.suffix_vertices(n):
        i = x.owner(v)
        if v.visited >> i & 1:
            new[v] = 0
            continue
        best, arg = INF, None
        for w in x.succ[v]:
            c, _ = cg.sup_cost(w, i)
            if arg is None or c < best:
                best, arg = c, w
        new[v] = 1 + best
        if witnesses is not None:
            witnesses[v] = arg
    return new


@dataclass
class FixpointTrace:
    """Every labeling produced by the fixpoint loop, in order.

    ``steps[k]`` is the labeling after k updates and ``regions[k]`` the
    1-based region whose suffix arena produced it (None for the initial one).
    ``local_fixpoints[n]`` is the step at which processing region ``n``
    stopped changing anything.
    """

    order: RegionOrder
    steps: list = field(default_factory=list)
    regions: list = field(default_factory=list)
    local_fixpoints: dict = field(default_factory=dict)
    witnesses: list = field(default_factory=list)

    @property
    def final(self) -> Labeling:
        return self.steps[self.k_star]

    @property
    def k_star(self) -> int:
        return self.local_fixpoints[1]

    def rows(self) -> list[tuple[list[int], Labeling]]:
        """Distinct consecutive labelings with the step indices sharing them."""
        out = []
        for k, lam in enumerate(self.steps):
            if out and out[-1][1] == lam:
                out[-1][0].append(k)
            else:
                out.append(([k], lam))
        return out

    def is_monotone(self) -> bool:
        return all(all(b[v] <= a[v] for v in a) for a, b in zip(self.steps, self.steps[1:]))

    def max_finite_ranges(self) -> list[int]:
        return [max_finite(lam.values()) for lam in self.steps]


def run_fixpoint(x: ExtendedGame, order: RegionOrder | None = None) -> tuple[Labeling, FixpointTrace]:
    order = order or region_order(x)
    lam = initial_labeling(x)
    trace = FixpointTrace(order, [lam], [None], {}, [{}])
    k = 0
    for n in range(order.count, 0, -1):
        while True:
            wit: dict = {}
            nxt = update_labeling(x, lam, n, order, witnesses=wit)
            k += 1
            trace.steps.append(nxt)
            trace.regions.append(n)
            trace.witnesses.append(wit)
            if nxt == lam:
                trace.local_fixpoints[n] = k - 1
                break
            lam = nxt
    return trace.final, trace


def max_finite_range(lam: Mapping, scope=None) -> int:
    """Largest finite label over ``scope`` (all vertices by default); 0 if none."""
    vs = lam.keys() if scope is None else scope
    return max_finite(lam[v] for v in vs)


def bound_on_max_range(n_vertices: int, n_players: int) -> int:
    """``|V|^((|V|+3)(|Π|+2))``: the maximal-finite-range bound with constant 1."""
    return n_vertices ** ((n_vertices + 3) * (n_players + 2))


def trace_table(x: ExtendedGame, trace: FixpointTrace) -> dict:
    """Distinct labelings as rows, one column per extended vertex grouped by region.

    Regions are listed from last to first.
    """
    g = x.game
    columns = []
    for n in range(trace.order.count, 0, -1):
        mask = trace.order.regions[n - 1]
        for v in sorted(trace.order.members[n - 1], key=lambda y: y.base):
            columns.append({"region": format_players(mask), "vertex": g.names[v.base],
                            "key": v})
    rows = []
    for ks, lam in trace.rows():
        rows.append({"steps": ks, "values": [lam[c["key"]] for c in columns]})
    return {"columns": columns, "rows": rows,
            "local_fixpoints": dict(sorted(trace.local_fixpoints.items(), reverse=True))}


def format_trace_table(x: ExtendedGame, trace: FixpointTrace) -> str:
    t = trace_table(x, trace)
    head1 = ["region"] + [c["region"] for c in t["columns"]]
    head2 = [""] + [c["vertex"] for c in t["columns"]]
    body = []
    for r in t["rows"]:
        ks = r["steps"]
        label = " = ".join(f"l^{k}" for k in ks)
        if ks[-1] == len(trace.steps) - 1 or trace.k_star in ks:
            label = " = ".join(f"l^{k}" for k in ks if k <= trace.k_star) + " = l*"
        body.append([label] + [format_cost(c) for c in r["values"]])
    table = [head1, head2] + body
    widths = [max(len(row[j]) for row in table) for j in range(len(head1))]
    lines = ["  ".join(cell.ljust(w) for cell, w in zip(row, widths)).rstrip() for row in table]
    fx = ", ".join(f"k*_{n}={k}" for n, k in t["local_fixpoints"].items())
    return "\n".join(lines) + "\nlocal fixpoints: " + fx + "\n"
