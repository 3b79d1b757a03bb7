from math import gcd

import pytest
from hypothesis import given, settings, strategies as st

from helpers import triangulations
from orbipres.grouprep import (
    InvalidLabels,
    MonomialElement,
    ambient_generators,
    braid_graph,
    braid_graph_with_assignment,
    coset_count,
    diagonal,
    generate_subgroup,
    reflection,
    reflection_group_order,
    shi_table,
    verify_nu,
)
from orbipres.quiver import quiver_from_triangulation
from orbipres.surface import ConeDisk, ResourceLimit, initial_triangulation


def elements(n, d):
    return st.builds(
        lambda perm, exps: MonomialElement(d, tuple(p + 1 for p in perm), tuple(exps)),
        st.permutations(range(n)),
        st.lists(st.integers(0, d - 1), min_size=n, max_size=n),
    )


triples = st.integers(2, 4).flatmap(lambda n: st.integers(2, 6).flatmap(
    lambda d: st.tuples(elements(n, d), elements(n, d), elements(n, d))))


@given(triples)
@settings(max_examples=200, deadline=None)
def test_group_axioms(xyz):
    x, y, z = xyz
    e = x.identity()
    assert (x * y) * z == x * (y * z)
    assert e * x == x == x * e
    assert x * x.inverse() == e == x.inverse() * x
    for i, k in enumerate(x.sigma):
        assert x.inverse().exponents[k - 1] == (-x.exponents[i]) % x.d


@given(triples)
@settings(max_examples=100, deadline=None)
def test_reflection_subgroup_is_closed(xyz):
    x, y, _ = xyz
    if x.in_reflection_subgroup() and y.in_reflection_subgroup():
        assert (x * y).in_reflection_subgroup()
        assert x.inverse().in_reflection_subgroup()


@given(st.integers(2, 5), st.integers(2, 7), st.data())
def test_reflections_are_involutions(n, d, data):
    a = data.draw(st.integers(1, n))
    b = data.draw(st.integers(1, n).filter(lambda v: v != a))
    c = data.draw(st.integers(-20, 20))
    s = reflection(a, b, c, n, d)
    assert (s * s).is_identity()
    assert s == reflection(b, a, -c, n, d)
    assert s.in_reflection_subgroup()


def test_product_of_two_reflections_d3():
    assert reflection(1, 2, 0, 2, 3) * reflection(1, 2, 1, 2, 3) == diagonal([1, -1], 3)


def test_shape_mismatch_rejected():
    with pytest.raises(ValueError):
        reflection(1, 2, 0, 2, 3) * reflection(1, 2, 0, 3, 3)
    with pytest.raises(ValueError):
        MonomialElement(3, (1, 1), (0, 0))


def test_json_round_trip():
    g = reflection(1, 3, 2, 3, 5)
    assert g.to_json() == {"n": 3, "d": 5, "sigma": [3, 2, 1], "exp": [3, 0, 2]}
    assert MonomialElement.from_json(g.to_json()) == g


def test_subgroup_orders():
    gens = [reflection(1, 2, 0, 3, 3), reflection(2, 3, 0, 3, 3), reflection(1, 2, 1, 3, 3)]
    assert generate_subgroup(gens).order == 54
    assert generate_subgroup([], n=3, d=3).order == 1
    assert generate_subgroup([reflection(1, 2, 1, 2, 3), reflection(2, 1, 2, 2, 3)]).order == 2
    with pytest.raises(ResourceLimit):
        generate_subgroup(gens, cap=10)


@pytest.mark.parametrize("n", [2, 3])
@pytest.mark.parametrize("d", [2, 3, 4])
def test_reflection_subgroup_has_index_d(n, d):
    ambient = generate_subgroup(ambient_generators(n, d))
    assert ambient.order == d**n * reflection_group_order(1, n)
    assert coset_count(ambient.elements, MonomialElement.in_reflection_subgroup) == d


def test_initial_dual_graph_and_assignment():
    T0 = initial_triangulation(ConeDisk(3, 3))
    G, R = braid_graph_with_assignment(T0)
    assert G.region_kinds == ("between", "digon", "triangle")
    assert dict(G.edges) == {1: (1, 2), 2: (2, 1), 3: (2, 3)}
    assert G.cycle == (1, 2)
    m = R.matrices()
    assert m["s1"] == reflection(1, 2, 1, 3, 3)
    assert m["s2"] == reflection(1, 2, 0, 3, 3)
    assert m["s3"] == reflection(2, 3, 0, 3, 3)
    assert R.delta == 1


def test_zero_labels_rejected_with_delta():
    T0 = initial_triangulation(ConeDisk(3, 3))
    with pytest.raises(InvalidLabels) as err:
        braid_graph_with_assignment(T0, {1: 0, 2: 0, 3: 0})
    assert err.value.delta == 0


@pytest.mark.parametrize("n", [2, 3, 4, 5])
def test_dual_graph_is_unicyclic(n):
    for T in triangulations(n, 3):
        G = braid_graph(T)
        assert G.n == n and len(G.edges) == n
        assert len(G.cycle) >= 2 and len(G.cycle) == len(G.cycle_edges)
        # coherent orientation around the cycle
        for m, s in enumerate(G.cycle_edges):
            tail, head = G.edges[s]
            assert tail == G.cycle[m]
            assert head == G.cycle[(m + 1) % len(G.cycle)]
        # tree edges point away from the cycle: every vertex off the cycle has one incoming edge
        heads = [G.edges[s][1] for s in G.edges if s not in G.cycle_edges]
        assert sorted(heads) == sorted(set(range(1, n + 1)) - set(G.cycle))
        assert braid_graph_with_assignment(T)[1].delta == 1


@pytest.mark.parametrize("d", [2, 3, 4, 5, 6])
def test_shi_criterion(d):
    for row in shi_table(d):
        if row["coprime"]:
            assert row["order"] == 2 * d
        else:
            assert row["order"] < 2 * d and (2 * d) % row["order"] == 0


def test_d_edge_pair_commutes_only_for_d2():
    for d, commute in [(2, True), (3, False), (4, False)]:
        T0 = initial_triangulation(ConeDisk(3, d))
        Q = quiver_from_triangulation(T0)
        i, k = Q.d_edge.ordered
        m = braid_graph_with_assignment(T0)[1].matrices()
        assert m[f"s{i}"].commutes_with(m[f"s{k}"]) == commute


def test_certificate_initial():
    cert = verify_nu(initial_triangulation(ConeDisk(3, 3)))
    assert cert.passed and cert.image_order == cert.presented_order == 54


def test_certificate_d2_all():
    for T in triangulations(3, 2):
        cert = verify_nu(T)
        assert cert.passed and cert.image_order == 24


def test_certificate_detects_degenerate_labels():
    T0 = initial_triangulation(ConeDisk(3, 3))
    _, R = braid_graph_with_assignment(T0, {1: 1, 2: 2, 3: 0}, strict=False)
    assert gcd(R.delta, 3) == 3
    cert = verify_nu(T0, R)
    assert not cert.passed
    assert cert.image_order != 54
    assert cert.presented_order == 54
    assert any("generate" in note for note in cert.notes)
    assert cert.to_json()["passed"] is False
