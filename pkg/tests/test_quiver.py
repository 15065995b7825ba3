from collections import Counter

import pytest
from hypothesis import given, strategies as st

from quiver_sagbi.quiver import (
    DimensionVector,
    LiftedArrow,
    LiftedPath,
    Quiver,
    QuiverError,
    abelianize,
    enumerate_paths,
    is_bipartite,
    partition_into_bipartite_paths,
    quiver_from_dict,
    quiver_from_json,
    weight_of_path_set,
)

from helpers import three_vertex_space


@st.composite
def quivers(draw, max_vertices=4, max_arrows=6):
    n = draw(st.integers(1, max_vertices))
    if n == 1:
        edges = []
    else:
        pairs = st.tuples(st.integers(0, n - 2), st.integers(1, n - 1)).filter(lambda e: e[0] < e[1])
        edges = draw(st.lists(pairs, max_size=max_arrows))
    dims = draw(st.lists(st.integers(1, 3), min_size=n, max_size=n))
    return Quiver.from_edges(n, edges), DimensionVector(tuple(dims))


def test_kronecker_paths_are_arrows():
    paths = enumerate_paths(Quiver.kronecker(3))
    assert [p.index for p in paths] == [1, 2, 3]
    assert [p.arrows for p in paths] == [(1,), (2,), (3,)]


def test_three_vertex_quiver_paths():
    space = three_vertex_space()
    paths = space.paths
    assert len(paths) == 9
    assert [p.arrows for p in paths[:7]] == [(a,) for a in range(1, 8)]
    assert paths[7].arrows == (1, 7) and paths[8].arrows == (2, 7)
    assert (paths[7].source, paths[7].target) == (0, 2)


def test_single_vertex_has_no_paths():
    assert enumerate_paths(Quiver(1, ())) == []


@pytest.mark.parametrize(
    "data",
    [
        {"vertices": 2, "arrows": [{"id": 1, "s": 1, "t": 0}], "dims": [1, 1]},
        {"vertices": 2, "arrows": [{"id": 2, "s": 0, "t": 1}], "dims": [1, 1]},
        {"vertices": 2, "arrows": [{"id": 1, "s": 0, "t": 1}], "dims": [1]},
        {"vertices": 2, "arrows": [{"id": 1, "s": 0}], "dims": [1, 1]},
        {"vertices": 2, "arrows": [], "dims": [0, 1]},
    ],
)
def test_malformed_quivers_rejected(data):
    with pytest.raises(QuiverError):
        quiver_from_dict(data)


def test_json_round_trip():
    q, d = Quiver.kronecker(2), DimensionVector((2, 3))
    import json

    assert quiver_from_json(json.dumps(q.to_dict(d))) == (q, d)


def test_abelianize_counts():
    ab = abelianize(Quiver.kronecker(3), DimensionVector((2, 3)))
    assert len(ab.lifted_vertices) == 5
    assert len(ab.lifted_arrows) == 18


@given(quivers())
def test_abelianize_lifted_arrow_count(qd):
    q, d = qd
    ab = abelianize(q, d)
    direct = 0
    for a in q.arrows:
        for i in range(1, d[a.source] + 1):
            for j in range(1, d[a.target] + 1):
                direct += 1
    assert len(ab.lifted_arrows) == direct
    assert len(ab.lifted_vertices) == sum(d.ranks)


@given(quivers())
def test_unit_dims_abelianization_is_the_quiver(qd):
    q, _ = qd
    ones = DimensionVector((1,) * q.num_vertices)
    ab = abelianize(q, ones)
    assert [ab.lift_map(la) for la in ab.lifted_arrows] == list(q.arrows)
    assert all((la.source_lift, la.target_lift) == (1, 1) for la in ab.lifted_arrows)


@given(quivers())
def test_paths_ordered_by_length_then_arrows(qd):
    q, _ = qd
    paths = enumerate_paths(q)
    keys = [(len(p.arrows), p.arrows) for p in paths]
    assert keys == sorted(keys) and len(set(keys)) == len(keys)
    for p in paths:
        for a, b in zip(p.arrows, p.arrows[1:]):
            assert q.arrow(a).target == q.arrow(b).source


def _example_path_set():
    # (arrow, source lift, target lift)
    data = [(3, 1, 1), (4, 1, 2), (7, 2, 3), (5, 2, 1), (7, 1, 2), (6, 2, 3)]
    return [LiftedPath.single(*x) for x in data]


def test_example_path_set_weight():
    space = three_vertex_space()
    w, ok = weight_of_path_set(space.quiver, space.dims, _example_path_set())
    assert ok and w.w == (-2, -1, 2)
    assert w.pairing(space.dims) == 0
    assert is_bipartite(space.quiver, space.dims, _example_path_set())


def test_empty_path_set():
    space = three_vertex_space()
    w, ok = weight_of_path_set(space.quiver, space.dims, [])
    assert ok and w.w == (0, 0, 0)


def test_single_lifted_arrow_not_invariant():
    q, d = Quiver.kronecker(1), DimensionVector((2, 2))
    _, ok = weight_of_path_set(q, d, [LiftedPath.single(1, 1, 1)])
    assert not ok


def test_partition_keeps_bipartite_input():
    space = three_vertex_space()
    arrows = [lp.steps[0] for lp in _example_path_set()]
    out = partition_into_bipartite_paths(space.quiver, space.dims, arrows)
    assert sorted(out, key=repr) == sorted(_example_path_set(), key=repr)


def test_partition_joins_through_middle_vertex():
    space = three_vertex_space()
    arrows = [lp.steps[0] for lp in _example_path_set()]
    arrows += [LiftedArrow(1, 1, 1), LiftedArrow(2, 2, 2)]
    out = partition_into_bipartite_paths(space.quiver, space.dims, arrows)
    joined = [lp for lp in out if len(lp.steps) == 2]
    assert {lp.arrow_ids() for lp in joined} == {(1, 7), (2, 7)}
    through_first = [lp for lp in joined if lp.steps[0].target_lift == 1]
    assert [lp.arrow_ids() for lp in through_first] == [(1, 7)]
    assert space.paths[7].arrows == (1, 7)  # path 8
    assert is_bipartite(space.quiver, space.dims, out)


def test_partition_rejects_non_invariant():
    q, d = Quiver.kronecker(1), DimensionVector((2, 2))
    with pytest.raises(QuiverError):
        partition_into_bipartite_paths(q, d, [LiftedArrow(1, 1, 1)])


@st.composite
def weyl_invariant_arrows(draw):
    q, d = draw(quivers(max_vertices=4, max_arrows=5))
    arrows = []
    # a full orbit of lifts under the lift permutations is Weyl-invariant
    for a in q.arrows:
        m = draw(st.integers(0, 2))
        for _ in range(m):
            for i in range(1, d[a.source] + 1):
                for j in range(1, d[a.target] + 1):
                    arrows.append(LiftedArrow(a.id, i, j))
    order = draw(st.permutations(range(len(arrows))))
    return q, d, [arrows[k] for k in order]


def _flow_audit(q, d, paths):
    inc, out = Counter(), Counter()
    for lp in paths:
        a0, a1 = q.arrow(lp.steps[0].arrow), q.arrow(lp.steps[-1].arrow)
        out[(a0.source, lp.steps[0].source_lift)] += 1
        inc[(a1.target, lp.steps[-1].target_lift)] += 1
    return inc, out


@given(weyl_invariant_arrows())
def test_weight_pairs_to_zero(data):
    q, d, arrows = data
    w, ok = weight_of_path_set(q, d, [LiftedPath((a,)) for a in arrows])
    assert ok
    assert sum(r * x for r, x in zip(d.ranks, w.w)) == 0


@given(weyl_invariant_arrows())
def test_partition_is_bipartite_and_invariant(data):
    q, d, arrows = data
    out = partition_into_bipartite_paths(q, d, arrows)
    inc, outg = _flow_audit(q, d, out)
    for v in set(inc) | set(outg):
        assert min(inc[v], outg[v]) == 0
    before, _ = weight_of_path_set(q, d, [LiftedPath((a,)) for a in arrows])
    after, ok = weight_of_path_set(q, d, out)
    assert ok and after == before
    assert Counter(s for lp in out for s in lp.steps) == Counter(arrows)
    for lp in out:
        for s, t in zip(lp.steps, lp.steps[1:]):
            assert q.arrow(s.arrow).target == q.arrow(t.arrow).source
            assert s.target_lift == t.source_lift
