"""Command-line front end.

Every subcommand takes a game file; the name ``demo`` loads the bundled
eight-vertex example instead. Exit codes: 0 success / YES, 1 NO, 2 input error.
"""
from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from . import demo_game
from .counter import CounterGraph, counter_to_dot
from .decide import ConstraintQuery, Solver
from .extended import arena_to_dot, extended_to_dot, region_order
from .game import Game, GameError, cost_to_json, format_cost, parse_cost_vector, validate_game
from .hardness import parse_qdimacs, qbf_eval, qbf_to_game
from .labeling import format_trace_table, max_finite_range, trace_table
from .oracle import as_finite_memory, very_weak_spe_check


def _load(path: str) -> Game:
    if path == "demo":
        return demo_game()
    try:
        return Game.load(path)
    except OSError as exc:
        raise GameError(f"cannot read {path}: {exc.strerror}") from None


def _envelope(answer, witness=None, cost=None, trace=None, **extra) -> str:
    d = {"answer": answer, "witness": witness or {}, "cost": cost or [], "trace": trace or []}
    d.update(extra)
    return json.dumps(d, indent=2) + "\n"


def _solver(args) -> Solver:
    return Solver(_load(args.game), args.v0)


def _names(text: str) -> list[str]:
    return [t for t in (s.strip() for s in text.split(",")) if t]


def _trace_rows(x, tr) -> list:
    t = trace_table(x, tr)
    cols = [f"{c['vertex']}@{c['region']}" for c in t["columns"]]
    return [{"steps": r["steps"], "labels": dict(zip(cols, map(cost_to_json, r["values"])))}
            for r in t["rows"]]


def cmd_validate(args, out):
    g = _load(args.game)
    problems = validate_game(g)
    if args.format == "json":
        out.write(_envelope("OK" if not problems else "INVALID", problems=problems))
    else:
        out.write("ok\n" if not problems else "".join(p + "\n" for p in problems))
    return 0 if not problems else 2


def cmd_extend(args, out):
    s = _solver(args)
    x, order = s.ext, region_order(s.ext)
    if args.format == "json":
        regions = [{"region": n, "visited": [i + 1 for i in range(x.game.players) if m >> i & 1],
                    "vertices": [x.name(v) for v in vs]}
                   for n, (m, vs) in enumerate(zip(order.regions, order.members), start=1)]
        out.write(_envelope("OK", regions=regions, edges=[[x.name(a), x.name(b)] for a, b in x.edges()]))
        return 0
    out.write(f"{len(x)} extended vertices, {order.count} regions\n")
    for n, vs in enumerate(order.members, start=1):
        out.write(f"J{n}: " + " ".join(x.name(v) for v in vs) + "\n")
    return 0


def cmd_label(args, out):
    s = _solver(args)
    x, tr = s.ext, s.trace
    if args.format == "json":
        final = {x.name(v): cost_to_json(c) for v, c in s.lam.items()}
        out.write(_envelope("OK", trace=_trace_rows(x, tr) if args.trace else [],
                            labeling=final, local_fixpoints={str(n): k for n, k in
                                                             sorted(tr.local_fixpoints.items(), reverse=True)},
                            max_finite_range=max_finite_range(s.lam)))
        return 0
    if args.trace:
        out.write(format_trace_table(x, tr))
    else:
        for v in x.vertices:
            out.write(f"{x.name(v)}\t{format_cost(s.lam[v])}\n")
    return 0


def _query(args, players):
    lower = parse_cost_vector(args.lower, players) if args.lower else (0,) * players
    upper = parse_cost_vector(args.upper, players) if args.upper else (float("inf"),) * players
    return ConstraintQuery(lower, upper)


def cmd_decide(args, out):
    s = _solver(args)
    g = s.game
    d = s.decide(_query(args, g.players))
    profile = None
    if d.answer and args.profile:
        profile = s.build_profile(d.play)
        Path(args.profile).write_text(profile.to_json(), encoding="utf-8")
    if args.format == "json":
        body = d.to_dict(g, s.ext)
        out.write(_envelope(body["answer"], body.get("witness"), body.get("cost"),
                            _trace_rows(s.ext, s.trace) if args.trace else [],
                            reason=d.reason))
    else:
        out.write("YES\n" if d.answer else f"NO: {d.reason}\n")
        if d.answer and args.witness:
            play = g.lasso_names(d.play)
            out.write(f"witness: stem [{' '.join(play.stem)}] cycle [{' '.join(play.cycle)}]\n")
            out.write(f"cost: ({', '.join(format_cost(c) for c in d.cost)})\n")
        if profile is not None:
            out.write(f"profile written to {args.profile}\n")
    return 0 if d.answer else 1


def _lasso_arg(g, args):
    if not args.cycle:
        raise GameError("--cycle is required")
    return g.lasso(_names(args.stem or ""), _names(args.cycle))


def cmd_witness(args, out):
    s = _solver(args)
    g = s.game
    chk = s.outcome_check(_lasso_arg(g, args))
    cost = [cost_to_json(c) for c in s.ext.cost(chk.lifted)]
    if args.format == "json":
        out.write(_envelope("YES" if chk.ok else "NO", cost=cost, reason=chk.describe(g)))
    else:
        out.write(("YES: " if chk.ok else "NO: ") + chk.describe(g) + "\n")
    return 0 if chk.ok else 1


def cmd_profile(args, out):
    s = _solver(args)
    g = s.game
    if args.cycle:
        play = _lasso_arg(g, args)
    else:
        d = s.decide(_query(args, g.players))
        if not d.answer:
            out.write(f"NO: {d.reason}\n")
            return 1
        play = d.play
    prof = s.build_profile(play)
    text = prof.to_json()
    if args.check:
        rep = very_weak_spe_check(s.ext, as_finite_memory(prof))
        sys.stderr.write(rep.describe(s.ext) + "\n")
        if not rep.ok:
            return 1
    if args.output:
        Path(args.output).write_text(text, encoding="utf-8")
    else:
        out.write(text)
    return 0


def _read_qbf(path):
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise GameError(f"cannot read {path}: {exc.strerror}") from None
    return parse_qdimacs(text, strict=False)


def cmd_qbf_gen(args, out):
    f = _read_qbf(args.formula)
    for note in f.notes:
        sys.stderr.write(f"note: {note}\n")
    g, v0, (lower, upper) = qbf_to_game(f)
    text = g.to_json()
    if args.output:
        Path(args.output).write_text(text, encoding="utf-8")
    else:
        out.write(text)
    if args.emit_query:
        out.write(f"--lower {','.join(map(format_cost, lower))} "
                  f"--upper {','.join(map(format_cost, upper))}\n")
    return 0


def cmd_qbf_check(args, out):
    f = _read_qbf(args.formula)
    truth = qbf_eval(f)
    g, v0, (lower, upper) = qbf_to_game(f)
    d = Solver(g, v0).decide(ConstraintQuery(lower, upper))
    agree = truth == d.answer
    if args.format == "json":
        out.write(_envelope("YES" if agree else "NO", formula=truth, game=d.answer, notes=list(f.notes)))
    else:
        out.write(f"formula: {'true' if truth else 'false'}\n"
                  f"game:    {'YES' if d.answer else 'NO'}\n"
                  f"{'agree' if agree else 'MISMATCH'}\n")
    return 0 if agree else 1


def cmd_dot(args, out):
    g = _load(args.game)
    if args.what == "arena":
        text = arena_to_dot(g)
    else:
        s = Solver(g, args.v0)
        if args.what == "extended":
            text = extended_to_dot(s.ext, s.lam)
        else:
            cg = CounterGraph(s.ext, s.lam)
            text = counter_to_dot(cg, [cg.start(s.ext.x0)], limit=args.limit)
    if args.output:
        Path(args.output).write_text(text, encoding="utf-8")
    else:
        out.write(text)
    return 0


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="reachspe", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True)

    def game_cmd(name, fn, help):
        sp = sub.add_parser(name, help=help)
        sp.add_argument("game", help="game JSON file, or 'demo' for the bundled example")
        sp.add_argument("--v0", help="initial vertex (defaults to the game's 'init')")
        sp.add_argument("--format", choices=("text", "json"), default="text")
        sp.set_defaults(fn=fn)
        return sp

    game_cmd("validate", cmd_validate, "check that a game file is well formed")
    game_cmd("extend", cmd_extend, "list the extended game by region")
    sp = game_cmd("label", cmd_label, "compute the fixpoint labeling")
    sp.add_argument("--trace", action="store_true", help="print every step of the fixpoint")

    def bounds(sp):
        sp.add_argument("--lower", help="comma-separated lower cost bounds (default all 0)")
        sp.add_argument("--upper", help="comma-separated upper cost bounds, 'inf' allowed (default all inf)")

    sp = game_cmd("decide", cmd_decide, "is there an equilibrium with costs inside the bounds?")
    bounds(sp)
    sp.add_argument("--witness", action="store_true", help="print the witness outcome")
    sp.add_argument("--profile", metavar="FILE", help="write a strategy profile realizing the witness")
    sp.add_argument("--trace", action="store_true", help="include the labeling trace (json only)")

    def lasso_args(sp):
        sp.add_argument("--stem", help="comma-separated stem vertices")
        sp.add_argument("--cycle", help="comma-separated cycle vertices")

    sp = game_cmd("witness", cmd_witness, "is the given lasso an equilibrium outcome?")
    lasso_args(sp)
    sp = game_cmd("profile", cmd_profile, "synthesize a finite-memory equilibrium profile")
    lasso_args(sp)
    bounds(sp)
    sp.add_argument("-o", "--output")
    sp.add_argument("--check", action="store_true", help="verify the profile with the brute-force checker")

    sp = sub.add_parser("qbf-gen", help="build the game encoding a QBF")
    sp.add_argument("formula")
    sp.add_argument("-o", "--output")
    sp.add_argument("--emit-query", action="store_true", help="print the matching decide bounds")
    sp.set_defaults(fn=cmd_qbf_gen)
    sp = sub.add_parser("qbf-check", help="compare QBF truth with the game decision")
    sp.add_argument("formula")
    sp.add_argument("--format", choices=("text", "json"), default="text")
    sp.set_defaults(fn=cmd_qbf_check)

    sp = sub.add_parser("dot", help="Graphviz export")
    sp.add_argument("what", choices=("arena", "extended", "counter"))
    sp.add_argument("game")
    sp.add_argument("--v0")
    sp.add_argument("-o", "--output")
    sp.add_argument("--limit", type=int, default=500, help="max counter vertices rendered")
    sp.set_defaults(fn=cmd_dot)
    return p


def run(argv=None, out=None) -> int:
    out = out or sys.stdout
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return 0 if exc.code == 0 else 2
    try:
        return args.fn(args, out)
    except GameError as exc:
        sys.stderr.write(f"error: {exc}\n")
        return 2


def main():
    sys.exit(run())
