import random

from hypothesis import strategies as st

from reachspe import ExtVertex
from reachspe.oracle import random_game


def ev(g, name, *players):
    """Extended vertex from a vertex name and 1-based players."""
    return ExtVertex(g.index[name], sum(1 << (p - 1) for p in players))


@st.composite
def games(draw, max_vertices=5, max_players=2):
    seed = draw(st.integers(0, 2**32 - 1))
    return random_game(random.Random(seed), max_vertices=max_vertices, max_players=max_players)
