import pytest
from hypothesis import given, settings

from reachspe.counter import (CounterGraph, CounterVertex, EmptyPlaySet, NotConsistent,
                              counter_to_dot, path_to_lasso_play, play_to_path)
from reachspe.extended import build_extended, lift_lasso
from reachspe.game import INF, Game, Lasso
from reachspe.labeling import initial_labeling, is_lambda_consistent, run_fixpoint
from reachspe.oracle import all_lassos, enumerate_consistent_lassos
from helpers import ev, games


@pytest.fixture(scope="module")
def setup(demo):
    x = build_extended(demo)
    lam, tr = run_fixpoint(x)
    return demo, x, lam, tr


def cv(g, name, counters, *players):
    return CounterVertex(ev(g, name, *players), counters)


def test_starting_vertices(setup):
    g, x, lam, _ = setup
    cg = CounterGraph(x, lam)
    assert cg.start(ev(g, "v0")) == cv(g, "v0", (INF, 4))
    assert cg.start(ev(g, "v1")) == cv(g, "v1", (3, INF))
    assert cg.start(ev(g, "v3", 1, 2)).counters == (0, 0)


def test_successors_from_start(setup):
    g, x, lam, _ = setup
    cg = CounterGraph(x, lam)
    succ = cg.successors(cv(g, "v0", (INF, 4)))
    assert cv(g, "v1", (3, 3)) in succ
    assert cv(g, "v4", (INF, 3)) in succ


def test_dead_end(setup):
    g, x, lam, _ = setup
    cg = CounterGraph(x, lam)
    stuck = cv(g, "v4", (INF, 1))
    assert all(w.ext != ev(g, "v0") for w in cg.successors(stuck))
    assert cg.successors(stuck) == (cv(g, "v5", (INF, 0), 2),)
    assert cg.successors(cv(g, "v0", (INF, 1))) == ()


def test_live_pruning(setup):
    g, x, lam, _ = setup
    cg = CounterGraph(x, lam)
    root = cv(g, "v0", (INF, 4))
    live = cg.live_set([root])
    assert root in live
    assert cv(g, "v4", (INF, 3)) in live          # via v5 which reaches player 2's target
    assert not cg.is_live(cv(g, "v0", (INF, 1)))
    assert cv(g, "v1", (3, 3)) in live


def test_zero_counters_are_live(setup):
    g, x, lam, _ = setup
    cg = CounterGraph(x, lam)
    z = cv(g, "v0", (0, 0), 1, 2)
    assert cg.is_live(z)
    assert all(w.counters == (0, 0) for w in cg.successors(z))
    assert [w.ext for w in cg.successors(z)] == list(x.succ[z.ext])


def test_sup_cost_examples(setup):
    g, x, _, tr = setup
    cg = CounterGraph(x, tr.steps[1])
    c, wit = cg.sup_cost(ev(g, "v6", 2), 0)
    assert c == 2
    assert x.cost(wit.map(lambda u: u.ext))[0] == 2
    c, wit = cg.sup_cost(ev(g, "v3", 2), 0)
    assert c == INF
    play = wit.map(lambda u: u.ext)
    assert play.first == ev(g, "v3", 2)
    assert x.cost(play)[0] == INF and is_lambda_consistent(x, tr.steps[1], play)[0]
    assert cg.sup_cost(ev(g, "v0", 2), 1)[0] == 0


def test_empty_play_set_reported():
    g = Game(2, [("a", 1), ("b", 2)], [("a", "b"), ("b", "b")], {1: ["a"], 2: ["a"]}, "b")
    x = build_extended(g)
    lam = {v: 1 for v in x.vertices}  # impossible deadline
    with pytest.raises(EmptyPlaySet):
        CounterGraph(x, lam).sup_cost(x.x0, 0)


def test_play_to_path_example(setup):
    g, x, lam, _ = setup
    cg = CounterGraph(x, lam)
    play = lift_lasso(g, "v0", g.lasso([], ["v0", "v1", "v6", "v7", "v2"]))
    path = play_to_path(cg, play)
    assert [u.counters for u in path.stem] == [(INF, 4), (3, 3), (2, 2), (1, 1)]
    assert all(u.counters == (0, 0) for u in path.cycle)
    assert path_to_lasso_play(cg, path) == play


def test_play_to_path_rejects(setup):
    g, x, lam, _ = setup
    cg = CounterGraph(x, lam)
    with pytest.raises(NotConsistent) as err:
        play_to_path(cg, lift_lasso(g, "v0", g.lasso([], ["v0", "v4"])))
    assert err.value.player == 1


def test_sizes(setup):
    g, x, lam, _ = setup
    cg = CounterGraph(x, lam)
    assert cg.max_range() == 4
    assert cg.full_size() == 8 * 4 * 36
    cg.live_set([cg.start(v) for v in x.vertices])
    assert len(cg.explored()) <= cg.potential_size()


def test_dot_marks_dead_ends(setup):
    g, x, lam, _ = setup
    cg = CounterGraph(x, lam)
    text = counter_to_dot(cg, [cg.start(x.x0)])
    assert "dead end" in text and '"v0@{} (inf,4)"' in text


@settings(max_examples=40, deadline=None)
@given(games(max_vertices=5, max_players=2))
def test_correspondence(g):
    x = build_extended(g)
    _, tr = run_fixpoint(x)
    for lam in tr.steps:
        cg = CounterGraph(x, lam)
        for l in all_lassos(x, 6):
            ok = is_lambda_consistent(x, lam, l)[0]
            try:
                path = play_to_path(cg, l)
            except NotConsistent:
                assert not ok
                continue
            assert ok and all(cg.is_live(u) for u in path.positions())
            assert path_to_lasso_play(cg, path) == l


@settings(max_examples=40, deadline=None)
@given(games(max_vertices=5, max_players=2))
def test_sup_cost_against_enumeration(g):
    x = build_extended(g)
    _, tr = run_fixpoint(x)
    lam = tr.steps[-1]
    cg = CounterGraph(x, lam)
    for v in x.vertices:
        for i in range(g.players):
            c, wit = cg.sup_cost(v, i)
            play = path_to_lasso_play(cg, wit)
            assert play.first == v and is_lambda_consistent(x, lam, play)[0]
            assert x.cost(play)[i] == c
            assert len(wit) <= 2 * cg.full_size()
            found = enumerate_consistent_lassos(x, lam, max(6, len(play)), start=v)
            assert max(x.cost(l)[i] for l in found) == c


@settings(max_examples=30, deadline=None)
@given(games(max_vertices=5, max_players=3))
def test_counters_decrease_until_target(g):
    x = build_extended(g)
    lam, _ = run_fixpoint(x)
    cg = CounterGraph(x, lam)
    path = cg.live_walk(cg.start(x.x0))
    seq = list(path.positions())
    for a, b in zip(seq, seq[1:]):
        for i in range(g.players):
            if b.ext.visited >> i & 1:
                assert b.counters[i] == 0
            elif a.counters[i] != INF:
                assert b.counters[i] <= a.counters[i] - 1


def test_initial_labeling_admits_everything(setup):
    g, x, _, _ = setup
    lam0 = initial_labeling(x)
    assert enumerate_consistent_lassos(x, lam0, 5) == all_lassos(x, 5)
    assert Lasso((), (x.x0,)) not in all_lassos(x, 5)
