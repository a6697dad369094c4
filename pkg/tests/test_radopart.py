import pytest
from hypothesis import given, settings, strategies as st

from monopath.graphcore import (
    ALL,
    ArityError,
    ConstantColoring,
    FiniteClass,
    SeededRandomColoring,
    make_counterexample,
    make_oracle,
    type_class,
)
from monopath.paths import PartitionResult, verify_partition, verify_power_path
from monopath.radopart import (
    BuildFailure,
    PathClass,
    SimultaneousPathBuilder,
    build_simultaneous_paths,
    cover_by_single_path,
    rado_partition,
)


def _ok(coloring, paths, prefix):
    return verify_partition(coloring, PartitionResult(list(paths), prefix=prefix))


def test_single_class_constant():
    c = ConstantColoring(0)
    (p,) = build_simultaneous_paths([PathClass(ALL, 0)], c, make_oracle(c, horizon=100), 5)
    assert p.vertices == (0, 1, 2, 3, 4)


def test_counterexample_two_classes():
    ce = make_counterexample()
    o = make_oracle(ce)
    A = type_class(ce, ["A"])
    BCD = type_class(ce, ["B", "C", "D"])
    p0, p1 = build_simultaneous_paths([PathClass(A, 0), PathClass(BCD, 1)], ce, o, 12)
    assert _ok(ce, [p0, p1], 12)
    assert set(range(9)) <= set(p1.vertices)
    # B and C are 0-joined, so P1 must route through A-connectors
    assert any(v >= 9 for v in p1.vertices)


def test_start_points_are_honoured():
    c = SeededRandomColoring(2, 2, 3)
    o = make_oracle(c, horizon=2000)
    cl = [PathClass(ALL, 0, start=0), PathClass(ALL, 1, start=1)]
    # with overlapping members the first class takes uncovered vertices
    p0, p1 = build_simultaneous_paths(cl, c, o, 20)
    assert p0.vertices[0] == 0 and p1.vertices[0] == 1
    with pytest.raises(ValueError):
        SimultaneousPathBuilder([PathClass(FiniteClass({4}), 0, start=0)], c, o)


def test_targets_are_visited_infinitely_often():
    c = SeededRandomColoring(2, 2, 5)
    o = make_oracle(c, horizon=3000)
    evens = FiniteClass(range(0, 3000, 2), "evens")
    builder = SimultaneousPathBuilder([PathClass(ALL, 0, target=evens)], c, o)
    builder.run(40)
    (p,) = builder.result()
    assert verify_power_path(c, p)
    assert builder.target_visits[0] == 40
    assert len(set(p.vertices) & set(evens.vertices)) >= 40


def test_cover_by_single_path():
    c = ConstantColoring(0)
    assert len(cover_by_single_path(ALL, 0, c, make_oracle(c, horizon=100), 10)) >= 10
    ce = make_counterexample()
    p = cover_by_single_path(type_class(ce, ["B", "C", "D"]), 1, ce, make_oracle(ce), 9)
    assert set(range(9)) <= set(p.vertices) and verify_power_path(ce, p)
    assert len(cover_by_single_path(FiniteClass(()), 0, c, make_oracle(c, horizon=10), 10)) == 0


def test_build_failure_names_the_class():
    ce = make_counterexample()
    A = type_class(ce, ["A"])
    # B-vertices cannot be 0-joined through A
    with pytest.raises(BuildFailure) as info:
        build_simultaneous_paths([PathClass(FiniteClass({0, 1}), 0)], ce, make_oracle(ce), 2, connectors=A)
    assert info.value.class_index == 0
    assert info.value.certified_empty


def test_rado_examples():
    c = ConstantColoring(0, r=2)
    res = rado_partition(c, 20, make_oracle(c))
    assert res.pieces[0].vertices == tuple(range(20)) and len(res.pieces[1]) == 0
    ce = make_counterexample()
    res = rado_partition(ce, 30, make_oracle(ce))
    assert verify_partition(ce, res) and [p.color for p in res.pieces] == [0, 1]
    r3 = SeededRandomColoring(3, 2, 7)
    res = rado_partition(r3, 100, make_oracle(r3, horizon=2000))
    assert len(res.pieces) == 3 and verify_partition(r3, res)


def test_rado_rejects_hypergraphs():
    c = ConstantColoring(0, r=2, k=3)
    with pytest.raises(ArityError):
        rado_partition(c, 5, make_oracle(c, horizon=50))


@pytest.mark.parametrize("seed", range(5))
def test_streaming_monotonicity(seed):
    c = SeededRandomColoring(2 + seed % 3, 2, seed)
    o = make_oracle(c, horizon=2000)
    small = rado_partition(c, 50, o)
    big = rado_partition(c, 120, o)
    for p, q in zip(small.pieces, big.pieces):
        assert q.vertices[: len(p)] == p.vertices


@settings(max_examples=15, deadline=None)
@given(seed=st.integers(0, 10**5), r=st.integers(2, 4))
def test_rado_always_verifies(seed, r):
    c = SeededRandomColoring(r, 2, seed)
    res = rado_partition(c, 60, make_oracle(c, horizon=1500))
    rep = verify_partition(c, res)
    assert rep, rep.violations[:3]
