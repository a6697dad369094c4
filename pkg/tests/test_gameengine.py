import itertools

import pytest

from monopath.classifier import classify
from monopath.gameengine import (
    ADAMS,
    BobFinite,
    BobInfinite,
    GameExhausted,
    GameSpec,
    GameTranscript,
    IllegalMove,
    RandomAdam,
    ReplayAttacker,
    adam_empty,
    adam_minimum_stealer,
    compose_partition,
    lex_position,
    parallel_compose,
    play_game,
    triangle_before,
    triangle_index,
    triangle_order,
)
from monopath.graphcore import (
    ALL,
    ConstantColoring,
    FiniteClass,
    SeededRandomColoring,
    make_counterexample,
    make_oracle,
    type_class,
)
from monopath.paths import MonoPowerPath, PartitionResult, verify_partition, verify_power_path

K2_PREFIX = [(0, 0), (1, 0), (0, 1), (2, 0), (1, 1), (0, 2), (3, 0), (2, 1), (1, 2), (4, 0), (3, 1), (2, 2)]


def test_triangle_order_prefix():
    assert [triangle_order(ell, 2) for ell in range(1, 13)] == K2_PREFIX
    assert triangle_order(1, 5) == (0, 0)


def test_triangle_order_twelfth_play():
    # when (2,2) is picked, its successors (3,0),(3,1) and predecessors (2,0),(2,1) are already down
    assert triangle_order(12, 2) == (2, 2)
    assert triangle_index(3, 0, 2) == 7
    assert triangle_index(3, 1, 2) == 11
    assert triangle_index(2, 1, 2) == 8
    assert triangle_index(2, 0, 2) == 4


@pytest.mark.parametrize("k", [1, 2, 3, 5])
def test_triangle_order_is_a_bijection(k):
    seen = set()
    for ell in range(1, 10**4 + 1):
        cell = triangle_order(ell, k)
        assert triangle_index(*cell, k) == ell
        assert 0 <= cell[1] <= k
        seen.add(cell)
    assert len(seen) == 10**4


def test_triangle_predecessors():
    k = 2
    cells = [(n, j) for n in range(12) for j in range(k + 1)]
    for n, j in cells[:20]:
        preds = {(m, i) for (m, i) in cells if m + i < n + j or (m + i == n + j and i < j)}
        assert len(preds) == triangle_index(n, j, k) - 1
        assert all(triangle_before(p, (n, j)) for p in preds)


def test_lex_position():
    assert [lex_position(n, j, 2) for n in range(2) for j in range(3)] == list(range(6))


def _spec(coloring, color, ladder, oracle=None, name="g"):
    return GameSpec(coloring, color, ladder, oracle or make_oracle(coloring, horizon=2000), name)


def test_finite_w0_grid():
    c = ConstantColoring(0)
    spec = _spec(c, 0, [FiniteClass({0, 1, 2}), ALL, ALL])
    res = play_game(spec, adam_empty, rounds=5, prefix=3)
    assert isinstance(res.transcript, GameTranscript)
    assert res.bob_order == [0, 3, 6, 1, 4, 7, 2, 5, 8]
    assert res.bob_wins
    assert [len(m) for p, m in res.transcript.moves if p == "B"] == [3, 3, 3, 0, 0]


def test_finite_w0_edge_cases():
    c = ConstantColoring(0)
    empty = _spec(c, 0, [FiniteClass(()), ALL])
    res = play_game(empty, adam_empty, rounds=4, prefix=10)
    assert res.bob_wins and res.bob_order == []
    spec = _spec(c, 0, [FiniteClass({0, 1, 2}), ALL, ALL])
    res = play_game(spec, lambda t, s: {0, 1, 2} if not t.moves else set(), rounds=3, prefix=3)
    assert res.bob_wins and res.bob_order == []


def test_bob_finite_rejects_infinite_w0():
    with pytest.raises(ValueError):
        BobFinite(_spec(ConstantColoring(0), 0, [ALL, ALL]))._w0()


def test_infinite_constant_k1():
    c = ConstantColoring(0)
    res = play_game(_spec(c, 0, [ALL, ALL]), adam_empty, rounds=30, prefix=10)
    assert res.bob_wins
    assert verify_power_path(c, MonoPowerPath(tuple(res.bob_order), 0, 1))


def test_counterexample_adam_takes_nine():
    ce = make_counterexample()
    A = type_class(ce, ["A"])
    spec = _spec(ce, 0, [A, A, A], make_oracle(ce))
    res = play_game(spec, lambda t, s: {9} if not t.moves else set(), rounds=40, prefix=20)
    assert res.bob_wins
    assert 9 not in res.bob_order
    row0 = [v for (n, j), v in sorted(_cells(spec, res).items()) if j == 0]
    assert row0 == sorted(row0) and row0[0] == 10


def _cells(spec, res):
    # replay deterministically to read Bob's grid
    bob = BobInfinite(spec)
    t = GameTranscript()
    for (p, m) in res.transcript.moves:
        if p == "A":
            t.add("A", m)
        else:
            t.add("B", bob.move(t))
    return bob.cells


@pytest.mark.parametrize("host", ["constant", "counterexample"])
@pytest.mark.parametrize("seed", range(10))
def test_random_adam_never_beats_bob(host, seed):
    c = ConstantColoring(0) if host == "constant" else make_counterexample()
    W = ALL if host == "constant" else type_class(c, ["A"])
    spec = _spec(c, 0, [W, W, W], make_oracle(c) if host != "constant" else None)
    res = play_game(spec, RandomAdam(seed), rounds=50, prefix=20)
    assert res.bob_wins, res.uncovered


def test_minimum_stealer_is_harmless():
    c = SeededRandomColoring(2, 2, 1)
    spec = _spec(c, 0, [ALL, ALL])
    res = play_game(spec, adam_minimum_stealer, rounds=40, prefix=15)
    assert res.bob_wins
    assert res.transcript.union("A") | res.transcript.union("B") >= set(range(15))


def test_random_adam_k1_path_contains_every_presented_minimum():
    c = ConstantColoring(0)
    spec = _spec(c, 0, [ALL, ALL])
    res = play_game(spec, RandomAdam(5), rounds=50, prefix=30)
    assert res.bob_wins
    adam, bob = res.transcript.union("A"), set(res.bob_order)
    assert all(v in bob for v in range(30) if v not in adam)


def test_replay_is_illegal():
    spec = _spec(ConstantColoring(0), 0, [ALL, ALL])
    with pytest.raises(IllegalMove):
        play_game(spec, ReplayAttacker(), rounds=3)


def test_full_neighbourhood_strategy():
    c = ConstantColoring(0)
    spec = _spec(c, 0, [ALL, ALL, ALL])
    bob = BobInfinite(spec, local=False)
    res = play_game(spec, adam_empty, bob=bob, rounds=30, prefix=10)
    assert res.bob_wins


def test_adams_registry():
    assert set(ADAMS) == {"empty", "random", "min-stealer", "replay"}


def test_compose_evens_and_odds():
    c = ConstantColoring(0)
    evens = FiniteClass(range(0, 4000, 2), "evens")
    odds = FiniteClass(range(1, 4000, 2), "odds")
    o = make_oracle(c, horizon=4000)
    # large finite classes are treated as infinite ladders through the triangle strategy
    specs = [GameSpec(c, 0, [evens, evens], o, "E"), GameSpec(c, 0, [odds, odds], o, "O")]
    res = compose_partition(specs, 20, strategies=[BobInfinite(s) for s in specs])
    assert len(res.pieces) == 2
    assert verify_partition(c, res)


def test_compose_counterexample():
    ce = make_counterexample()
    o = make_oracle(ce)
    A = type_class(ce, ["A"])
    rest = type_class(ce, ["B", "C", "D"])
    specs = [GameSpec(ce, 0, [A, A, A], o, "A"), GameSpec(ce, 1, [rest, A], o, "BCD")]
    pieces, meta = parallel_compose(specs, 40)
    res = PartitionResult(pieces, prefix=40)
    assert verify_partition(ce, res)
    assert set(range(9)) <= set(pieces[1].vertices)


def test_compose_single_game_matches_play():
    c = SeededRandomColoring(2, 2, 9)
    o = make_oracle(c, horizon=2000)
    spec = GameSpec(c, 0, [ALL, ALL], o)
    (piece,), meta = parallel_compose([spec], 15)
    assert verify_power_path(c, piece)
    assert set(range(15)) <= set(piece.vertices)


@pytest.mark.parametrize("seed", range(5))
def test_compose_random_pieces_are_disjoint(seed):
    c = SeededRandomColoring(2, 2, seed)
    o = make_oracle(c, horizon=3000)
    cl = classify(c, 40, o)
    specs = [GameSpec(c, i, [cl.class_of(i)] * 3, o, f"V{i}") for i in range(2)]
    try:
        pieces, meta = parallel_compose(specs, 40)
    except GameExhausted:
        pytest.skip("density class exhausted")
    for p, q in itertools.combinations(pieces, 2):
        assert not set(p.vertices) & set(q.vertices)
    transcripts = meta["transcripts"]
    assert len(transcripts) == 2


def test_game_exhausted_names_the_game():
    ce = make_counterexample()
    o = make_oracle(ce)
    A = type_class(ce, ["A"])
    rest = type_class(ce, ["B", "C", "D"])
    # no colour-1 square runs through B∪C∪D alone
    specs = [GameSpec(ce, 0, [A, A, A], o, "A"), GameSpec(ce, 1, [rest, rest, rest], o, "BCD")]
    with pytest.raises(GameExhausted) as info:
        parallel_compose(specs, 20)
    assert info.value.game == 1
    assert info.value.certified_empty
