from itertools import combinations
from math import comb, gcd

import pytest
from hypothesis import given, settings, strategies as st

from helpers import triangulations
from orbipres.present import (
    Presentation,
    abelianization,
    artin_b_mod_sd,
    bmr_braid,
    bmr_to_quiver_names,
    canonical_equations,
    relations_from_quiver,
    reference_presentations,
)
from orbipres.quiver import DecoratedQuiver, quiver_from_triangulation
from orbipres.surface import ConeDisk, initial_triangulation
from orbipres.words import Word


def eqs(P):
    return [(str(a), str(b)) for a, b in P.equations]


def t0_quiver(n, d):
    return quiver_from_triangulation(initial_triangulation(ConeDisk(n, d)))


def test_initial_braid_relations_n3_d3():
    P = relations_from_quiver(t0_quiver(3, 3), "braid")
    assert canonical_equations(P) == {
        ("s1 s3 s1", "s3 s1 s3"),
        ("s2 s3 s2", "s3 s2 s3"),
        ("s1 s2 s1", "s2 s1 s2"),
        ("s2 s1 s3 s2 s1 s3", "s3 s2 s1 s3 s2 s1"),
    }


def test_reflection_variant_adds_squares():
    braid = relations_from_quiver(t0_quiver(3, 3), "braid")
    refl = relations_from_quiver(t0_quiver(3, 3), "reflection")
    assert eqs(refl)[: len(braid.equations)] == eqs(braid)
    assert eqs(refl)[len(braid.equations) :] == [("s1 s1", "1"), ("s2 s2", "1"), ("s3 s3", "1")]


def test_labelled_triangle_relations_d2():
    Q = DecoratedQuiver(2, (1, 2, 3), frozenset({(1, 2), (2, 3), (3, 1)}), labeled_cycle=(1, 2, 3))
    P = relations_from_quiver(Q, "braid")
    cyc = [e for e, f in zip(eqs(P), P.families) if f == "cycle"]
    assert cyc == [("s1 s2 s3 s1", "s2 s3 s1 s2"), ("s2 s3 s1 s2", "s3 s1 s2 s3")]
    assert "triangle" not in P.families
    assert "cycle" not in relations_from_quiver(Q, "no_cycle").families


@pytest.mark.parametrize("n", [2, 3, 4, 5, 6])
@pytest.mark.parametrize("d", [2, 3, 4, 5])
def test_initial_quiver_group_is_bmr(n, d):
    P = relations_from_quiver(t0_quiver(n, d), "braid")
    B = bmr_braid(d, n).rename(bmr_to_quiver_names(n))
    assert canonical_equations(P) == canonical_equations(B)


def test_artin_b_n2():
    P = artin_b_mod_sd(4, 2)
    assert P.generators == ("s", "t2")
    assert eqs(P) == [("s t2 s t2", "t2 s t2 s"), ("s s s s", "1")]


@pytest.mark.parametrize("n", [2, 3, 4, 5, 6])
def test_artin_b_relator_count(n):
    # n-1 diagram edges, C(n-1, 2) distant commuting pairs, one power relator
    P = artin_b_mod_sd(2, n)
    assert len(P.relators) == (n - 1) + comb(n - 1, 2) + 1 == comb(n, 2) + 1


def test_reference_dispatch():
    assert reference_presentations(3, 3, "bmr_braid") == bmr_braid(3, 3)
    with pytest.raises(ValueError):
        reference_presentations(3, 3, "other")


def test_presentation_validation():
    with pytest.raises(ValueError):
        Presentation(("a",), ((Word.of("b"), Word()),))
    with pytest.raises(ValueError):
        Presentation(("a", "a"), ())


def test_text_export_round_trip():
    P = relations_from_quiver(t0_quiver(4, 3), "reflection")
    text = P.to_text()
    assert text.splitlines()[0] == "gens: s1 s2 s3 s4"
    back = Presentation.from_text(text)
    assert back.generators == P.generators
    assert back.relators == P.relators


def test_algebra_export_exact():
    P = artin_b_mod_sd(2, 2)
    assert P.to_algebra() == (
        'F := FreeGroup("s", "t2");\n'
        "s := F.1; t2 := F.2;\n"
        "rels := [s*t2*s*t2*s^-1*t2^-1*s^-1*t2^-1, s*s];\n"
        "G := F / rels;\n"
    )


@pytest.mark.parametrize("n", [2, 3, 4])
def test_relators_reduced_balanced_and_deterministic(n):
    for T in triangulations(n, 4):
        Q = quiver_from_triangulation(T)
        P = relations_from_quiver(Q, "braid")
        assert P == relations_from_quiver(Q, "braid")
        for (lhs, rhs), fam, r in zip(P.equations, P.families, P.relators):
            assert Word(r.letters) == r
            assert len(lhs) == len(rhs)
            if fam in ("triangle", "cycle", "double_edge", "square"):
                assert len(lhs) >= 4


def test_abelianization_of_free_group():
    P = Presentation(("a", "b", "c"), ())
    ab = abelianization(P)
    assert (ab.free_rank, ab.torsion) == (3, ())


@pytest.mark.parametrize("n", [2, 3, 4])
@pytest.mark.parametrize("d", [2, 3, 4, 5])
def test_abelianization_constant_on_orbit(n, d):
    # two generators with only (s1 s2)^(d/2) = (s2 s1)^(d/2) stay independent
    split = n == 2 and d % 2 == 0
    for T in triangulations(n, d):
        Q = quiver_from_triangulation(T)
        braid = abelianization(relations_from_quiver(Q, "braid"))
        refl = abelianization(relations_from_quiver(Q, "reflection"))
        assert (braid.free_rank, braid.torsion) == ((2, ()) if split else (1, ()))
        assert (refl.free_rank, refl.torsion) == ((0, (2, 2)) if split else (0, (2,)))


def _determinantal_invariants(rows):
    """Invariant factors of a k x 2 integer matrix from gcds of minors."""
    d1 = 0
    for row in rows:
        for x in row:
            d1 = gcd(d1, x)
    d2 = 0
    for r, s in combinations(rows, 2):
        d2 = gcd(d2, r[0] * s[1] - r[1] * s[0])
    if d1 == 0:
        return 2, ()
    if d2 == 0:
        return 1, tuple(x for x in (d1,) if x != 1)
    return 0, tuple(x for x in (d1, d2 // d1) if x != 1)


letters = st.lists(st.tuples(st.sampled_from("ab"), st.sampled_from([1, -1])), max_size=8)


@given(st.lists(letters, max_size=4))
@settings(max_examples=150, deadline=None)
def test_abelianization_matches_minor_gcds(words):
    P = Presentation(("a", "b"), tuple((Word(tuple(w)), Word()) for w in words))
    rows = [[r.exponent_sum("a"), r.exponent_sum("b")] for r in P.relators]
    ab = abelianization(P)
    assert (ab.free_rank, ab.torsion) == _determinantal_invariants(rows)
