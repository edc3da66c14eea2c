import random

import pytest
from hypothesis import given, settings

from reachspe.counter import CounterGraph
from reachspe.decide import Solver
from reachspe.extended import build_extended, lift_lasso
from reachspe.game import Game, GameError
from reachspe.labeling import initial_labeling, is_lambda_consistent
from reachspe.oracle import (all_lassos, bounded_deviation_check, counter_lassos,
                             enumerate_consistent_lassos, exhaustive_positional_analysis, outcome,
                             positional_profile, positional_profile_count, random_game,
                             very_weak_spe_check)
from helpers import games

SIGMA = dict(v5="v4", v4="v0", v0="v1", v1="v6", v6="v7", v7="v2", v2="v0", v3="v0")
SIGMA_BAD = dict(SIGMA, v1="v3", v0="v4")


def positional(g, x, choice):
    return positional_profile({v: next(w for w in x.succ[v] if g.names[w.base] == choice[g.names[v.base]])
                               for v in x.vertices})


def test_sigma_passes(demo, demo_solver):
    x = demo_solver.ext
    p = positional(demo, x, SIGMA)
    assert very_weak_spe_check(x, p).ok
    assert bounded_deviation_check(x, p).ok
    assert outcome(x, p) == lift_lasso(demo, "v0", demo.lasso([], ["v0", "v1", "v6", "v7", "v2"]))


def test_sigma_bad_fails_at_v1(demo, demo_solver):
    x = demo_solver.ext
    rep = very_weak_spe_check(x, positional(demo, x, SIGMA_BAD))
    assert not rep.ok
    assert x.name(rep.state[1]) == "v1@{}" and rep.player == 0
    assert x.name(rep.target) == "v6@{}"
    # v1 is entered after one step, so the costs of the whole play are one more
    assert (rep.cost + 1, rep.deviation_cost + 1) == (float("inf"), 4)
    assert not bounded_deviation_check(x, positional(demo, x, SIGMA_BAD)).ok


def test_vacuous_pass():
    g = Game(2, [("a", 1), ("b", 2)], [("a", "b"), ("b", "a"), ("a", "a")], {1: ["a", "b"], 2: ["a", "b"]}, "a")
    x = build_extended(g)
    for _, _, ok in exhaustive_positional_analysis(x):
        assert ok


def test_enumeration_on_example(demo, demo_solver):
    x, lam = demo_solver.ext, demo_solver.lam
    found = enumerate_consistent_lassos(x, lam, 10)
    assert lift_lasso(demo, "v0", demo.lasso([], ["v0", "v1", "v6", "v7", "v2"])) in found
    assert lift_lasso(demo, "v0", demo.lasso([], ["v0", "v4"])) not in found
    assert enumerate_consistent_lassos(x, initial_labeling(x), 6) == all_lassos(x, 6)


def test_example_passing_outcomes_are_consistent(demo, demo_solver):
    x, lam = demo_solver.ext, demo_solver.lam
    assert positional_profile_count(x) <= 5000
    consistent = enumerate_consistent_lassos(x, lam, 16)
    passing = [out for _, out, ok in exhaustive_positional_analysis(x) if ok]
    assert passing and all(out in consistent for out in passing)


def test_budget_guard(demo, demo_solver):
    with pytest.raises(GameError, match="budget"):
        exhaustive_positional_analysis(demo_solver.ext, budget=10)


def test_single_profile_game():
    g = Game(1, [("a", 1), ("b", 1)], [("a", "b"), ("b", "b")], {1: ["b"]}, "a")
    res = exhaustive_positional_analysis(build_extended(g))
    assert len(res) == 1 and res[0][2]


def test_random_game_is_deterministic():
    a = random_game(random.Random(11)).to_json()
    assert a == random_game(random.Random(11)).to_json()


@settings(max_examples=25, deadline=None)
@given(games(max_vertices=5, max_players=2))
def test_counter_side_matches(g):
    s = Solver(g)
    for lam in s.trace.steps:
        assert enumerate_consistent_lassos(s.ext, lam, 7) == counter_lassos(CounterGraph(s.ext, lam), 7)


@settings(max_examples=25, deadline=None)
@given(games(max_vertices=4, max_players=2))
def test_one_shot_agrees_with_two_deviations(g):
    x = build_extended(g)
    if positional_profile_count(x) > 500:
        return
    verts = x.vertices
    import itertools
    for picks in itertools.islice(itertools.product(*(x.succ[v] for v in verts)), 200):
        p = positional_profile(dict(zip(verts, picks)))
        assert very_weak_spe_check(x, p).ok == bounded_deviation_check(x, p).ok


@settings(max_examples=25, deadline=None)
@given(games(max_vertices=4, max_players=2))
def test_necessity(g):
    s = Solver(g)
    if positional_profile_count(s.ext) > 2000:
        return
    for _, out, ok in exhaustive_positional_analysis(s.ext, 2000):
        if ok:
            assert is_lambda_consistent(s.ext, s.lam, out)[0]
