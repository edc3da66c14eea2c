import itertools
import random

import pytest
from hypothesis import given, settings, strategies as st

from reachspe.decide import ConstraintQuery, Solver
from reachspe.game import INF, GameError, cost_of_lasso, validate_game
from reachspe.hardness import QbfFormula, parse_qdimacs, qbf_eval, qbf_to_game, random_qbf


def decide(f):
    g, v0, (lo, hi) = qbf_to_game(f)
    return Solver(g, v0).decide(ConstraintQuery(lo, hi)).answer


def test_single_positive_clause():
    f = QbfFormula(1, [(1,)])
    g, v0, (lo, hi) = qbf_to_game(f)
    assert set(g.names) == {"q1", "x1", "nx1", "c1", "t1", "t2"}
    assert g.players == 3 and v0 == "q1"
    assert lo == (0, 0, 0) and hi == (2, 3, INF)
    assert qbf_eval(f) and decide(f)


def test_contradiction():
    f = QbfFormula(1, [(1,), (-1,)])
    assert not qbf_eval(f) and not decide(f)


def test_eval_small():
    assert qbf_eval(QbfFormula(2, [(1, 2), (1, -2)]))
    assert not qbf_eval(QbfFormula(2, [(2,)]))


def test_structure_counts():
    rng = random.Random(3)
    for _ in range(30):
        f = random_qbf(rng)
        g, _, _ = qbf_to_game(f)
        assert validate_game(g) == []
        assert g.n_vertices == 3 * f.m + 2 * f.n + 1
        assert len(g.edges()) == 4 * f.m + 3 * f.n + 1
        assert g.owner[g.index["c1"]] == 0
        assert all(g.owner[g.index[f"q{k}"]] == (f.n if k % 2 else f.n + 1) for k in range(1, f.m + 1))


def test_path_lengths():
    f = QbfFormula(3, [(1, -2), (3,)])
    g, _, _ = qbf_to_game(f)
    stem = [v for k in range(1, 4) for v in (f"q{k}", f"x{k}")]
    play = g.lasso(stem + ["c1", "c2"], ["t3"])
    c = cost_of_lasso(g, play)
    assert stem.index("q3") + 2 == 2 * f.m   # c1 is reached at step 2m
    assert c[f.n] == 2 * f.m + f.n
    assert c[f.n + 1] == INF


def test_target_of_last_players_exclusive():
    f = QbfFormula(2, [(1, 2), (-2,)])
    g, _, _ = qbf_to_game(f)
    for lits in itertools.product(("x", "nx"), repeat=2):
        stem = [v for k, l in enumerate(lits, 1) for v in (f"q{k}", f"{l}{k}")] + ["c1"]
        for end in (["t1"], ["c2", "t2"], ["c2", "t3"]):
            play = g.lasso(stem + end[:-1], end[-1:])
            c = cost_of_lasso(g, play)
            if "t3" in end:
                assert (c[f.n] < INF) == (c[f.n + 1] == INF)


def test_parse_strict_alternation():
    f = parse_qdimacs("p cnf 2 2\ne 1 0\na 2 0\n1 2 0\n1 -2 0\n", strict=True)
    assert f == QbfFormula(2, [(1, 2), (1, -2)])
    with pytest.raises(GameError):
        parse_qdimacs("a 1 0\n1 0\n", strict=True)


def test_parse_normalizes():
    f = parse_qdimacs("a 1 0\n1 0\n")
    assert f.m == 2 and f.clauses == ((2,),) and f.notes
    assert not qbf_eval(f)
    g = parse_qdimacs("e 1 2 0\n1 -2 0\n")
    assert g.m == 3 and g.clauses == ((1, -3),) and qbf_eval(g)
    h = parse_qdimacs("p cnf 2 1\n1 2 0\n")
    assert h.m == 3 and h.clauses == ((1, 3),) and qbf_eval(h)


def test_parse_errors():
    for bad in ("e 1\n1 0\n", "e 1 0\n1 x 0\n", "e 1 0\n1", "e 1 0\ne 1 0\n1 0\n"):
        with pytest.raises(GameError):
            parse_qdimacs(bad)
    with pytest.raises(GameError):
        QbfFormula(1, [()])
    with pytest.raises(GameError):
        QbfFormula(1, [(2,)])


def test_round_trip_text():
    f = QbfFormula(3, [(1, -3), (2,)])
    assert parse_qdimacs(f.to_qdimacs(), strict=True) == f


@st.composite
def formulas(draw):
    m = draw(st.integers(1, 3))
    lit = st.integers(1, m).flatmap(lambda v: st.sampled_from([v, -v]))
    clauses = draw(st.lists(st.lists(lit, min_size=1, max_size=3), min_size=1, max_size=3))
    return QbfFormula(m, [tuple(c) for c in clauses])


@settings(max_examples=80, deadline=None)
@given(formulas())
def test_differential(f):
    assert qbf_eval(f) == decide(f)
