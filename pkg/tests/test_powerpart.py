import itertools

import pytest
from hypothesis import given, settings, strategies as st

from monopath.graphcore import (
    ALL,
    ArityError,
    COUNTEREXAMPLE_SPECIAL,
    ConstantColoring,
    FiniteClass,
    SeededRandomColoring,
    finite_coloring,
    make_counterexample,
    make_oracle,
    parse_coloring_spec,
)
from monopath.paths import verify_partition, verify_power_path
from monopath.powerpart import (
    FalsificationAlarm,
    absorb_path_into_square,
    build_set_tree,
    counterexample_check,
    four_square_partition,
    maximal_two_path_partition,
    pokrovskiy_finite,
    power_partition,
    sweep_pokrovskiy,
)
from monopath.powerpart.finite import _edge_coloring_fn


def _is_path(seq, c, color):
    return all(c(seq[i], seq[i + 1]) == color for i in range(len(seq) - 1))


# ---------------------------------------------------------------------------
# set tree and power partition


def test_set_tree_constant():
    c = ConstantColoring(0, r=2)
    tree = build_set_tree(c, 2, make_oracle(c))
    assert tree.depth == 3 and tree.bound == 8
    assert [n.seq for n in tree.infinite_leaves()] == [(0, 0, 0)]
    assert tree.leaf_color((0, 0, 0)) == (0, (2, 1))
    assert len(tree.leaves()) == 8


def test_set_tree_finite_nodes_propagate_to_child_zero():
    ce = make_counterexample()
    tree = build_set_tree(ce, 2, make_oracle(ce))
    for s, node in tree.nodes.items():
        if s and not tree.nodes[s[:-1]].infinite:
            parent = tree.nodes[s[:-1]]
            expected = parent.members_below(50) if s[-1] == 0 else []
            assert node.members_below(50) == expected


def test_set_tree_children_partition_parent():
    c = SeededRandomColoring(2, 2, 4)
    tree = build_set_tree(c, 2, make_oracle(c, horizon=600))
    for s, node in tree.nodes.items():
        if len(s) < tree.depth:
            kids = [tree.nodes[s + (i,)].members_below(600) for i in range(2)]
            assert sorted(kids[0] + kids[1]) == node.members_below(600)


def test_set_tree_rejects_bad_input():
    with pytest.raises(ArityError):
        build_set_tree(ConstantColoring(0, r=2, k=3), 2, make_oracle(ConstantColoring(0, r=2, k=3), horizon=10))
    with pytest.raises(ValueError):
        build_set_tree(ConstantColoring(0, r=2), 0, make_oracle(ConstantColoring(0, r=2)))


def test_power_partition_constant_cube():
    c = ConstantColoring(0, r=2)
    res = power_partition(c, 3, 30, make_oracle(c))
    assert [len(p) > 0 for p in res.pieces] == [True]
    assert res.pieces[0].power == 3
    assert res.leftover == frozenset()
    assert verify_partition(c, res)


def test_power_partition_random_seed9():
    c = SeededRandomColoring(2, 2, 9)
    res = power_partition(c, 2, 60, make_oracle(c, horizon=1200))
    assert len(res.pieces) <= 8
    assert verify_partition(c, res)


def test_power_partition_counterexample():
    ce = make_counterexample()
    res = power_partition(ce, 2, 40, make_oracle(ce))
    assert len(res.pieces) <= 8
    assert res.leftover <= COUNTEREXAMPLE_SPECIAL
    assert verify_partition(ce, res)


@pytest.mark.parametrize("seed", range(4))
def test_power_partition_bound(seed):
    c = SeededRandomColoring(2, 2, seed)
    res = power_partition(c, 2, 40, make_oracle(c, horizon=1200))
    assert len(res.pieces) <= res.meta["bound"]
    assert verify_partition(c, res)


# ---------------------------------------------------------------------------
# absorption


def test_absorb_example():
    c = ConstantColoring(0, r=2)
    W = FiniteClass(range(10, 2000), "W")
    ab = absorb_path_into_square(range(6), 0, W, c, make_oracle(c, horizon=2000))
    vs = ab.square.vertices
    assert len(vs) == 9
    assert [vs[i] for i in (0, 1, 3, 4, 6, 7)] == [0, 1, 2, 3, 4, 5]
    assert all(vs[i] >= 10 for i in (2, 5, 8))
    assert verify_power_path(c, ab.square)


def test_absorb_trivial_paths():
    c = ConstantColoring(0, r=2)
    o = make_oracle(c, horizon=100)
    assert absorb_path_into_square((), 0, ALL, c, o).square.vertices == ()
    assert absorb_path_into_square((7,), 0, ALL, c, o).square.vertices == (7,)


@pytest.mark.parametrize("seed", range(5))
def test_absorb_random_paths(seed):
    c = SeededRandomColoring(2, 2, seed)
    o = make_oracle(c, horizon=4000)
    # a greedy colour-0 path on low vertices
    path = [0]
    for v in range(1, 200):
        if len(path) == 7:
            break
        if c.color_of((path[-1], v)) == 0:
            path.append(v)
    W = FiniteClass(range(200, 4000), "W")
    F = FiniteClass(range(201, 4000, 2), "F")
    ab = absorb_path_into_square(path, 0, W, c, o, protect=[F])
    R = ab.square.vertices
    assert [v for v in R if v in set(path)] == path
    assert all(v in W for v in R if v not in set(path))
    assert verify_power_path(c, ab.square)
    # protected contract: F still yields plenty of vertices outside R
    taken = set(R) | set(ab.witnesses["F"])
    fresh = []
    for _ in range(10):
        fresh.append(o.fresh(F, (), taken | set(fresh)))
    assert len(set(fresh)) == 10 and not set(fresh) & set(R)


# ---------------------------------------------------------------------------
# finite searches


def test_pokrovskiy_small_cases():
    empty = pokrovskiy_finite([], ConstantColoring(0, r=2))
    assert empty.paths == [] and empty.power == ()
    sol = pokrovskiy_finite(range(5), ConstantColoring(0, r=2), k=2)
    assert sol.paths == [] and sol.power == (0, 1, 2, 3, 4)
    ones = pokrovskiy_finite(range(5), ConstantColoring(1, r=2), k=2)
    assert len(ones.paths) == 1 and ones.power == ()


def test_pokrovskiy_rejects_large_input():
    with pytest.raises(ValueError):
        pokrovskiy_finite(range(25), ConstantColoring(0, r=2))


@pytest.mark.parametrize("n", range(6))
def test_pokrovskiy_exhaustive_small(n):
    assert sweep_pokrovskiy(n)["alarms"] == 0


def test_pokrovskiy_k6_shard():
    # the full sweep over K_6 lives in the acceptance suite
    out = sweep_pokrovskiy(6, shard=0, shards=16)
    assert out["alarms"] == 0 and out["checked"] == 2048


@settings(max_examples=30, deadline=None)
@given(n=st.integers(1, 9), bits=st.integers(0, (1 << 36) - 1), k=st.integers(1, 3))
def test_pokrovskiy_solution_is_valid(n, bits, k):
    m = n * (n - 1) // 2
    c = _edge_coloring_fn(n, bits % (1 << m) if m else 0)
    sol = pokrovskiy_finite(range(n), c, k=k)
    assert len(sol.paths) <= k
    covered = [v for p in sol.paths for v in p] + list(sol.power)
    assert sorted(covered) == list(range(n))
    assert all(_is_path(p, c, 1) for p in sol.paths)
    vs = sol.power
    assert all(c(vs[i], vs[j]) == 0 for i in range(len(vs)) for j in range(i + 1, min(len(vs), i + k + 1)))


def test_falsification_alarm_is_an_assertion():
    assert issubclass(FalsificationAlarm, AssertionError)


def test_two_paths_small():
    assert maximal_two_path_partition([0, 1], ConstantColoring(0, r=2)) == ((0, 1), ())
    assert maximal_two_path_partition([5], ConstantColoring(1, r=2)) == ((5,), ())
    assert maximal_two_path_partition([], ConstantColoring(1, r=2)) == ((), ())


@pytest.mark.parametrize("n", range(1, 7))
def test_two_paths_exhaustive(n):
    m = n * (n - 1) // 2
    for bits in range(1 << m):
        c = _edge_coloring_fn(n, bits)
        p0, p1 = maximal_two_path_partition(range(n), c)
        assert sorted(p0 + p1) == list(range(n))
        assert _is_path(p0, c, 0) and _is_path(p1, c, 1)


def test_two_paths_on_a_lazy_coloring():
    fc = finite_coloring(7, lambda u, v: (u * v + u + v) % 2)
    p0, p1 = maximal_two_path_partition(range(7), fc)
    assert sorted(p0 + p1) == list(range(7))


# ---------------------------------------------------------------------------
# four squares


def test_four_squares_constant():
    c = ConstantColoring(0, r=2)
    res = four_square_partition(c, 30, make_oracle(c))
    assert len(res.pieces) == 1
    assert verify_partition(c, res)


def test_four_squares_counterexample():
    ce = make_counterexample()
    res = four_square_partition(ce, 40, make_oracle(ce))
    assert len(res.pieces) == 4
    assert res.meta["case"] == 1
    assert all(p.power == 2 for p in res.pieces)
    assert verify_partition(ce, res)


@pytest.mark.parametrize("spec,case", [("block-bipartite", 2), ("layered", 3), ("layered:1", 3)])
def test_four_squares_cases(spec, case):
    c = parse_coloring_spec(spec)
    res = four_square_partition(c, 40, make_oracle(c))
    assert res.meta["case"] == case
    assert len(res.pieces) <= 4
    assert verify_partition(c, res)


@pytest.mark.parametrize("seed", [1, 2, 3])
def test_four_squares_random(seed):
    c = SeededRandomColoring(2, 2, seed)
    res = four_square_partition(c, 60, make_oracle(c, horizon=1200))
    assert len(res.pieces) <= 4
    assert res.meta["provenance"].startswith("density")
    assert verify_partition(c, res)


def test_four_squares_needs_two_colours():
    c = SeededRandomColoring(3, 2, 0)
    with pytest.raises(ArityError):
        four_square_partition(c, 10, make_oracle(c, horizon=100))


# ---------------------------------------------------------------------------
# the sharpness example


def _squares_naive(vertices, c, color):
    """Every vertex set spanned by a colour-`color` path-square, by plain DFS over sequences."""
    out = {frozenset()}

    def grow(seq):
        out.add(frozenset(seq))
        for v in vertices:
            if v in seq:
                continue
            if all(c(u, v) == color for u in seq[-2:]):
                grow(seq + [v])

    grow([])
    return out


def test_counterexample_check_report():
    rep = counterexample_check()
    assert (rep["bSize"], rep["cSize"], rep["dSize"]) == (4, 4, 1)
    assert rep["twoSquareCover"] is False
    assert rep["twoPieceCoverWithOnePaths"] is False
    assert rep["zeroSquareBoundsHold"]
    assert rep["maxZeroSquareCover"] == 5
    assert rep["mixedSquaresAllColorOne"] and rep["mixedSquaresChecked"] > 0


def test_counterexample_no_two_squares_naive():
    ce = make_counterexample()
    c = lambda u, v: ce.color_of((u, v))
    special = frozenset(COUNTEREXAMPLE_SPECIAL)
    sets = _squares_naive(sorted(special), c, 0) | _squares_naive(sorted(special), c, 1)
    assert not any(a | b == special and not a & b for a, b in itertools.product(sets, repeat=2))
    # with three squares it is possible inside the core
    assert any(
        a | b | d == special and not (a & b or a & d or b & d)
        for a, b in itertools.product(sets, repeat=2)
        for d in [special - a - b]
        if d in sets
    )
