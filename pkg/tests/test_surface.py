import random

import pytest
from hypothesis import given, settings, strategies as st

from helpers import triangulations
from orbipres.surface import (
    NOTCHED,
    PLAIN,
    Boundary,
    Chord,
    ConeDisk,
    ModelError,
    Radius,
    ResourceLimit,
    TaggedTriangulation,
    all_arcs,
    brute_force_triangulations,
    compatible,
    completions,
    cone_configuration,
    describe,
    dumps_triangulation,
    enumerate_flip_graph,
    flip,
    initial_triangulation,
    random_flip_walk,
    regions,
    tag_flip,
    triangulation_from_json,
    triangulation_to_json,
    validate_arc,
)

D3 = ConeDisk(3, 3)


def test_disk_rejects_small_parameters():
    with pytest.raises(ValueError):
        ConeDisk(1, 3)
    with pytest.raises(ValueError):
        ConeDisk(3, 1)


def test_compatibility_examples():
    assert compatible(Radius(0, PLAIN), Radius(0, NOTCHED), D3)
    assert compatible(Chord(1, 0), Chord(1, 0), D3)
    assert not compatible(Chord(0, 2), Chord(1, 0), D3)
    assert not compatible(Radius(0, PLAIN), Radius(1, NOTCHED), D3)
    assert compatible(Radius(0, PLAIN), Radius(1, PLAIN), D3)


def test_invalid_arcs_rejected():
    with pytest.raises(ValueError):
        validate_arc(Chord(0, 1), D3)  # isotopic to a boundary segment
    with pytest.raises(ValueError):
        validate_arc(Chord(2, 2), D3)
    with pytest.raises(ValueError):
        validate_arc(Radius(5, PLAIN), D3)
    with pytest.raises(ValueError):
        validate_arc(Radius(0, "spiral"), D3)


@pytest.mark.parametrize("n", [2, 3, 4, 5])
def test_compatibility_is_symmetric_and_reflexive(n):
    disk = ConeDisk(n, 2)
    arcs = all_arcs(disk)
    for a in arcs:
        assert compatible(a, a, disk)
        for b in arcs:
            assert compatible(a, b, disk) == compatible(b, a, disk)


def test_initial_triangulation_small_cases():
    assert initial_triangulation(ConeDisk(3, 3)).arcs == (Radius(0, PLAIN), Radius(0, NOTCHED), Chord(1, 0))
    assert initial_triangulation(ConeDisk(2, 5)).arcs == (Radius(0, PLAIN), Radius(0, NOTCHED))


def test_initial_fan_is_nested():
    T = initial_triangulation(ConeDisk(6, 2))
    chords = T.arcs[2:]
    spans = [c.span(6) for c in chords]
    assert all(c.start == 1 for c in chords)
    assert spans == sorted(spans, reverse=True)


def test_flip_examples():
    T0 = initial_triangulation(D3)
    assert flip(T0, 3).arc(3) == Chord(0, 2)
    assert flip(T0, 1).arc(1) == Radius(1, NOTCHED)
    assert flip(T0, 1).arcs[1:] == T0.arcs[1:]


def test_flip_rejects_bad_slot():
    with pytest.raises(ValueError):
        flip(initial_triangulation(D3), 4)


def test_flip_raises_model_error_on_incompatible_input():
    disk = ConeDisk(4, 2)
    arcs = (Radius(0, PLAIN), Radius(0, NOTCHED), Radius(1, PLAIN), Radius(1, NOTCHED))
    with pytest.raises(ModelError):
        flip(TaggedTriangulation(disk, arcs), 1)


@pytest.mark.parametrize("n,count", [(2, 4), (3, 14), (4, 50), (5, 182)])
def test_flip_graph_matches_brute_force(n, count):
    disk = ConeDisk(n, 3)
    G = enumerate_flip_graph(disk)
    brute = brute_force_triangulations(disk)
    assert len(G.triangulations) == count
    assert {T.arc_set() for T in G.triangulations} == set(brute)
    assert all(len(s) == n for s in brute)
    assert G.degree_sequence() == [n] * count


def test_flip_graph_limit():
    with pytest.raises(ResourceLimit):
        enumerate_flip_graph(ConeDisk(5, 2), limit=10)


@pytest.mark.parametrize("n", [2, 3, 4])
def test_every_triangulation_is_maximal_with_n_regions(n):
    for T in triangulations(n, 2):
        T.validate()
        assert len(completions(T.arcs, T.disk)) == 0
        assert len(regions(T)) == n


@pytest.mark.parametrize("n", [3, 4])
def test_cone_valence(n):
    for T in triangulations(n, 2):
        radii = [T.arc(s) for s in T.radius_slots()]
        assert len(radii) >= 2
        if len(radii) == 2:
            a, b = radii
            assert (a.at == b.at) != (a.tag == b.tag)
        else:
            assert len({r.tag for r in radii}) == 1
            assert cone_configuration(T) == "cycle"


@pytest.mark.parametrize("n", [2, 3, 4])
def test_flip_is_involution_and_tag_flip_commutes(n):
    for T in triangulations(n, 2):
        assert tag_flip(tag_flip(T)) == T
        for k in T.slots():
            assert flip(flip(T, k), k) == T
            assert tag_flip(flip(T, k)) == flip(tag_flip(T), k)


@given(seed=st.integers(0, 10**6), n=st.integers(2, 6))
@settings(max_examples=30, deadline=None)
def test_random_walk_stays_valid(seed, n):
    rng = random.Random(seed)
    for T, k in random_flip_walk(ConeDisk(n, 2), 8, rng):
        U = flip(T, k)
        assert flip(U, k) == T
        assert len(regions(U)) == n


def test_json_round_trip_and_rejection():
    T = flip(initial_triangulation(ConeDisk(4, 3)), 2)
    obj = triangulation_to_json(T)
    assert triangulation_from_json(obj) == T
    assert dumps_triangulation(T).endswith("\n")
    bad = dict(obj, arcs=obj["arcs"][:-1])
    with pytest.raises(ValueError):
        triangulation_from_json(bad)


def test_regions_of_initial_triangulation():
    T0 = initial_triangulation(D3)
    kinds = [r.kind for r in regions(T0)]
    assert kinds == ["between", "digon", "triangle"]
    assert describe(T0) == "R0p R0n C1-0"
    assert Boundary(0) in regions(T0)[1].sides
