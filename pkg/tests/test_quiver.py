import pytest
from hypothesis import given, settings, strategies as st

from helpers import all_cases, triangulations
from orbipres.quiver import (
    DecoratedQuiver,
    DEdge,
    mutate,
    mutate_by_flip,
    ordinary_mutation,
    quiver_from_triangulation,
)
from orbipres.surface import (
    NOTCHED,
    Chord,
    ConeDisk,
    Radius,
    TaggedTriangulation,
    flip,
    initial_triangulation,
    tag_flip,
)


def t0(n, d=3):
    return initial_triangulation(ConeDisk(n, d))


def test_initial_quiver_n3():
    Q = quiver_from_triangulation(t0(3))
    assert Q.arrows == {(1, 3), (2, 3)}
    assert Q.d_edge == DEdge(frozenset({1, 2}), (2, 1))
    assert Q.double_edges == {3}
    assert Q.labeled_cycle is None


@pytest.mark.parametrize(
    "n,arrows",
    [
        (4, {(1, 3), (2, 3), (4, 3)}),
        (5, {(1, 3), (2, 3), (4, 3), (5, 4)}),
    ],
)
def test_initial_quiver_is_bmr_chain(n, arrows):
    Q = quiver_from_triangulation(t0(n))
    assert Q.arrows == arrows
    assert Q.d_edge.pair == {1, 2}
    assert Q.double_edges == {3}


def test_flip_of_first_radius():
    T1 = flip(t0(3), 1)
    assert set(T1.arcs) == {Radius(0, NOTCHED), Radius(1, NOTCHED), Chord(1, 0)}
    Q = quiver_from_triangulation(T1)
    assert Q.arrows == {(3, 1), (2, 3)}
    assert Q.d_edge.pair == {1, 2}
    assert Q.double_edges == {3}
    assert mutate(quiver_from_triangulation(t0(3)), 1) == Q


def test_mutation_at_double_edge_vertex():
    Q = mutate(quiver_from_triangulation(t0(3)), 3)
    assert Q.arrows == {(3, 1), (3, 2)}
    assert Q.d_edge.pair == {1, 2}
    assert Q.double_edges == {3}


def test_plain_path_mutation():
    Q = DecoratedQuiver(3, (1, 2, 3, 4, 5), frozenset({(1, 2), (2, 3)}), DEdge.between(4, 5))
    assert mutate(Q, 2).arrows == {(2, 1), (3, 2), (1, 3)}


def test_labelled_triangle_loses_label():
    Q = DecoratedQuiver(3, (1, 2, 3), frozenset({(1, 2), (2, 3), (3, 1)}), labeled_cycle=(1, 2, 3))
    R = mutate(Q, 2)
    assert R.arrows == {(2, 1), (3, 2)}
    assert R.labeled_cycle is None
    assert R.d_edge.pair == {1, 3}
    assert R.double_edges == {2}


def test_many_radii_give_labelled_cycle():
    T = TaggedTriangulation(ConeDisk(3, 4), tuple(Radius(v, "plain") for v in range(3)))
    T.validate()
    Q = quiver_from_triangulation(T)
    assert Q.labeled_cycle == (1, 2, 3)
    assert Q.d_edge is None and not Q.double_edges


def test_validate_rejects_bad_quivers():
    with pytest.raises(ValueError):
        DecoratedQuiver(3, (1, 2), frozenset({(1, 2), (2, 1)}), DEdge.between(1, 2)).validate()
    with pytest.raises(ValueError):
        DecoratedQuiver(3, (1, 2), frozenset()).validate()
    with pytest.raises(ValueError):
        DecoratedQuiver(3, (1, 2, 3), frozenset({(1, 2)}), labeled_cycle=(1, 2, 3)).validate()


def test_json_round_trip():
    for T in triangulations(4, 3):
        Q = quiver_from_triangulation(T)
        assert DecoratedQuiver.from_json(Q.to_json()) == Q


@pytest.mark.parametrize("d", [2, 3, 4, 5])
def test_mutation_matches_flip(d):
    for T, k in all_cases((2, 3, 4), (d,)):
        assert mutate(quiver_from_triangulation(T), k) == mutate_by_flip(T, k)


def test_mutation_is_involution_and_tag_flip_invariant():
    for T, k in all_cases((2, 3, 4, 5), (3,)):
        Q = quiver_from_triangulation(T)
        assert mutate(mutate(Q, k), k) == Q
        assert quiver_from_triangulation(tag_flip(T)) == Q


def test_underlying_arrows_follow_matrix_mutation():
    for T, k in all_cases((2, 3, 4, 5), (2,)):
        Q = quiver_from_triangulation(T)
        assert mutate(Q, k).arrows == ordinary_mutation(Q.arrows, k)


def test_one_decoration_regime():
    for T in triangulations(5, 3):
        Q = quiver_from_triangulation(T)
        assert (Q.d_edge is None) != (Q.labeled_cycle is None)
        assert len(Q.double_edges) <= 2


@given(steps=st.lists(st.integers(1, 6), min_size=1, max_size=25))
@settings(max_examples=40, deadline=None)
def test_mutation_sequences_track_flips(steps):
    T = initial_triangulation(ConeDisk(6, 4))
    Q = quiver_from_triangulation(T)
    for k in steps:
        T = flip(T, k)
        Q = mutate(Q, k)
        assert Q == quiver_from_triangulation(T)
