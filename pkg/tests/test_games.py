import pytest
from hypothesis import given
from hypothesis import strategies as st

from paritysep.games import (
    EVEN,
    ODD,
    GameGraph,
    Lasso,
    ParityGame,
    classify_lasso,
    game_from_json,
    game_to_json,
    is_even_graph,
    parse_pgsolver,
    random_game,
    sample_even_lassos,
    sample_even_path_words,
    strategy_subgraph,
)


def test_parse_single_even_self_loop():
    g = parse_pgsolver("parity 1; 0 2 0 0;")
    assert g.n == 1 and g.d == 2
    assert g.owner == (EVEN,)
    assert g.edges == ((0, 0, 2),)


def test_parse_two_vertex_cycle():
    g = parse_pgsolver("parity 2; 0 1 1 1; 1 2 0 0;")
    assert g.n == 2 and g.d == 2
    assert (0, 1, 1) in g.edges and (1, 0, 2) in g.edges
    assert g.owner == (ODD, EVEN)


def test_parse_no_successors_is_an_error():
    with pytest.raises(ValueError, match="vertex 0 has no outgoing edge"):
        parse_pgsolver("parity 1; 0 2 0;")


def test_parse_dangling_successor():
    with pytest.raises(ValueError, match="dangling successor"):
        parse_pgsolver("parity 1; 0 2 0 1;")


def test_parse_malformed_line():
    with pytest.raises(ValueError, match="malformed"):
        parse_pgsolver("parity 1; 0 two 0 0;")


def test_parse_zero_priorities_shift_by_two():
    g = parse_pgsolver("parity 2; 0 0 0 1; 1 1 1 0;")
    # 0 -> 2 and 1 -> 3, parity and order preserved
    assert sorted(p for _, _, p in g.edges) == [2, 3]
    assert g.d == 4


def test_parse_with_names():
    g = parse_pgsolver('parity 2; 0 3 0 1 "a"; 1 2 1 0,1 "b";')
    assert g.n == 2
    assert len(g.edges) == 3


def test_strategy_subgraph_picks_one_even_edge():
    g = ParityGame([EVEN], [(0, 0, 1), (0, 0, 2)])
    sub = strategy_subgraph(g, {0: (0, 2)})
    assert sub.edges == ((0, 0, 2),)


def test_strategy_subgraph_keeps_all_odd_edges():
    g = ParityGame([ODD, ODD], [(0, 1, 1), (0, 0, 2), (1, 0, 2)])
    sub = strategy_subgraph(g, {})
    assert set(sub.edges) == set(g.edges)


def test_strategy_subgraph_missing_vertex():
    g = ParityGame([EVEN], [(0, 0, 2)])
    with pytest.raises(ValueError, match="missing Even vertex"):
        strategy_subgraph(g, {})
    with pytest.raises(ValueError, match="non-edge"):
        strategy_subgraph(g, {0: (0, 1)})


def test_is_even_graph_self_loops():
    assert is_even_graph(GameGraph(1, [(0, 0, 2)]))
    assert not is_even_graph(GameGraph(1, [(0, 0, 1)], 2))


def test_is_even_graph_max_on_cycle_decides():
    # cycle 0 -> 1 -> 0 with priorities 1 and 2: max even
    assert is_even_graph(GameGraph(2, [(0, 1, 1), (1, 0, 2)]))
    # both odd: odd cycle
    assert not is_even_graph(GameGraph(2, [(0, 1, 1), (1, 0, 3)], 4))
    # odd cycle hidden under a larger even priority elsewhere
    g = GameGraph(3, [(0, 1, 1), (1, 0, 1), (1, 2, 4), (2, 1, 2)])
    assert not is_even_graph(g)


def test_classify_lasso_examples():
    assert classify_lasso(Lasso((), (2,))) == EVEN
    assert classify_lasso(Lasso((6,), (1,))) == ODD
    assert classify_lasso(Lasso((), (1, 2, 3))) == ODD


def test_lasso_requires_nonempty_period():
    with pytest.raises(ValueError):
        Lasso((1,), ())


@given(
    st.lists(st.integers(min_value=1, max_value=9), min_size=1, max_size=6),
    st.integers(min_value=0, max_value=5),
)
def test_classify_invariant_under_rotation_and_pumping(period, rot):
    period = tuple(period)
    k = rot % len(period)
    rotated = period[k:] + period[:k]
    base = classify_lasso(Lasso((), period))
    assert classify_lasso(Lasso((), rotated)) == base
    assert classify_lasso(Lasso((), period + period)) == base
    assert classify_lasso(Lasso((4, 9), period)) == base


def test_sample_even_path_words_single_loop():
    g = GameGraph(1, [(0, 0, 2)])
    assert sample_even_path_words(g, 3, 4) == [(2, 2, 2, 2)] * 3


def test_sample_even_path_words_two_cycle():
    g = GameGraph(2, [(0, 1, 1), (1, 0, 2)])
    for w in sample_even_path_words(g, 5, 4, rng_seed=1):
        assert w in ((1, 2, 1, 2), (2, 1, 2, 1))


def test_sample_even_path_words_deterministic():
    g = GameGraph(3, [(0, 1, 1), (1, 2, 1), (2, 0, 2), (0, 0, 2)])
    assert sample_even_path_words(g, 10, 6, rng_seed=7) == sample_even_path_words(
        g, 10, 6, rng_seed=7
    )


def test_sample_even_path_words_rejects_odd_graph():
    g = GameGraph(1, [(0, 0, 1)], 2)
    with pytest.raises(ValueError, match="not even"):
        sample_even_path_words(g, 1, 1)


def test_sample_even_lassos_close_cycles():
    g = GameGraph(2, [(0, 1, 1), (1, 0, 2)])
    for w in sample_even_lassos(g, 10, rng_seed=3):
        assert classify_lasso(w) == EVEN


def test_json_round_trip():
    g = random_game(6, 4, rng_seed=5)
    g2 = game_from_json(game_to_json(g))
    assert g2.n == g.n and g2.d == g.d
    assert g2.owner == g.owner and g2.edges == g.edges


def test_graph_json_round_trip_without_owner():
    g = GameGraph(2, [(0, 1, 1), (1, 0, 2)])
    g2 = game_from_json(game_to_json(g))
    assert isinstance(g2, GameGraph) and not isinstance(g2, ParityGame)
    assert g2.edges == g.edges


def test_random_game_is_wellformed_and_seeded():
    g1 = random_game(12, 5, rng_seed=9)
    g2 = random_game(12, 5, rng_seed=9)
    assert g1.edges == g2.edges and g1.owner == g2.owner
    assert all(g1.out_degree(v) >= 1 for v in range(g1.n))
    assert g1.d == 6
