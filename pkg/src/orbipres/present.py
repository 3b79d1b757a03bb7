"""Presentations attached to decorated quivers, reference presentations and
abelian invariants."""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import combinations
from typing import Sequence

from .quiver import DecoratedQuiver
from .words import Word, alternating, cyclic_product

VARIANTS = ("braid", "reflection", "no_cycle")

IDENTITY = Word()


@dataclass(frozen=True)
class Presentation:
    """Generators plus defining equations ``lhs = rhs``.

    ``relators`` are ``lhs * rhs^-1`` after free reduction.
    """

    generators: tuple[str, ...]
    equations: tuple[tuple[Word, Word], ...]
    families: tuple[str, ...] = ()
    metadata: str = ""

    def __post_init__(self) -> None:
        declared = set(self.generators)
        if len(declared) != len(self.generators):
            raise ValueError("duplicate generator names")
        for lhs, rhs in self.equations:
            extra = (lhs.generators() | rhs.generators()) - declared
            if extra:
                raise ValueError(f"undeclared generators {sorted(extra)}")
        if self.families and len(self.families) != len(self.equations):
            raise ValueError("one family tag per equation")

    @property
    def relators(self) -> list[Word]:
        return [lhs * rhs.inverse() for lhs, rhs in self.equations]

    def with_equations(self, extra: Sequence[tuple[Word, Word]], family: str) -> "Presentation":
        fams = self.families + (family,) * len(extra) if self.families else ()
        return Presentation(self.generators, self.equations + tuple(extra), fams, self.metadata)

    def rename(self, mapping: dict[str, str]) -> "Presentation":
        def ren(w: Word) -> Word:
            return Word(tuple((mapping.get(g, g), e) for g, e in w.letters))

        return Presentation(
            tuple(mapping.get(g, g) for g in self.generators),
            tuple((ren(a), ren(b)) for a, b in self.equations),
            self.families,
            self.metadata,
        )

    def to_text(self) -> str:
        lines = ["gens: " + " ".join(self.generators)]
        lines += [f"rel: {lhs} = {rhs}" for lhs, rhs in self.equations]
        return "\n".join(lines) + "\n"

    def to_algebra(self) -> str:
        """Plain text readable by GAP-like systems."""
        gens = ", ".join(f'"{g}"' for g in self.generators)
        lines = [f"F := FreeGroup({gens});"]
        if self.generators:
            lines.append(" ".join(f"{g} := F.{m + 1};" for m, g in enumerate(self.generators)))
        rels = [_algebra_word(r) for r in self.relators]
        lines.append("rels := [" + ", ".join(rels) + "];")
        lines.append("G := F / rels;")
        return "\n".join(lines) + "\n"

    def to_json(self) -> dict:
        return {
            "generators": list(self.generators),
            "equations": [[str(a), str(b)] for a, b in self.equations],
            "families": list(self.families),
            "metadata": self.metadata,
        }

    @staticmethod
    def from_text(text: str) -> "Presentation":
        gens: tuple[str, ...] = ()
        eqs = []
        for line in text.splitlines():
            line = line.strip()
            if not line:
                continue
            head, _, rest = line.partition(":")
            if head == "gens":
                gens = tuple(rest.split())
            elif head == "rel":
                lhs, _, rhs = rest.partition("=")
                eqs.append((Word.parse(lhs), Word.parse(rhs)))
            else:
                raise ValueError(f"bad line {line!r}")
        return Presentation(gens, tuple(eqs))


def _algebra_word(w: Word) -> str:
    if w.is_identity():
        return "One(F)"
    return "*".join(g if e == 1 else f"{g}^-1" for g, e in w.letters)


def generator_name(slot: int) -> str:
    return f"s{slot}"


def canonical_equations(P: Presentation) -> set[tuple[str, str]]:
    """Equations as unordered pairs of sides, for set comparisons."""
    return {tuple(sorted((str(a), str(b)))) for a, b in P.equations}


def oriented_triangles(Q: DecoratedQuiver) -> list[tuple[int, int, int]]:
    """Oriented 3-cycles ``i -> j -> k -> i`` with ``i`` the smallest vertex."""
    out = []
    for i, j in sorted(Q.arrows):
        for k in Q.successors(j):
            if (k, i) in Q.arrows and i < j and i < k:
                out.append((i, j, k))
    return out


def relations_from_quiver(Q: DecoratedQuiver, variant: str = "braid") -> Presentation:
    if variant not in VARIANTS:
        raise ValueError(f"variant must be one of {VARIANTS}")
    Q.validate()
    s = generator_name
    d = Q.d
    eqs: list[tuple[Word, Word]] = []
    fams: list[str] = []

    def emit(family: str, lhs: Sequence[int], rhs: Sequence[int]) -> None:
        eqs.append((Word.of(*map(s, lhs)), Word.of(*map(s, rhs))))
        fams.append(family)

    pair = Q.d_edge.pair if Q.d_edge is not None else frozenset()
    for i, j in combinations(Q.vertices, 2):
        if not Q.adjacent(i, j) and {i, j} != pair:
            emit("commute", (i, j), (j, i))
    for i, j in sorted(Q.arrows):
        emit("braid", (i, j, i), (j, i, j))
    labeled = set(Q.labeled_cycle or ())
    for i, j, k in oriented_triangles(Q):
        if len(labeled) == 3 and {i, j, k} == labeled:
            continue
        emit("triangle", (i, j, k, i), (j, k, i, j))
        emit("triangle", (j, k, i, j), (k, i, j, k))
    if Q.d_edge is not None:
        i, j = Q.d_edge.ordered
        eqs.append((alternating(s(i), s(j), d), alternating(s(j), s(i), d)))
        fams.append("d_edge")
    if Q.labeled_cycle is not None and variant != "no_cycle":
        cyc = [s(v) for v in Q.labeled_cycle]
        r = len(cyc)
        for m in range(r - 1):
            eqs.append((cyclic_product(cyc, m, d * (r - 1)), cyclic_product(cyc, m + 1, d * (r - 1))))
            fams.append("cycle")
    if Q.d_edge is not None:
        for k in sorted(Q.double_edges):
            if not all(Q.adjacent(k, v) for v in pair):
                continue
            i, j = _double_edge_order(Q, k)
            emit("double_edge", (k, i, j, k, i, j), (i, j, k, i, j, k))
        square = _square(Q)
        if square is not None:
            i, j, k, l = square
            emit("square", (i, j, k, l, i, j), (l, i, j, k, l, i))
            emit("square", (j, k, l, i, j, k), (k, l, i, j, k, l))
    if variant == "reflection":
        for v in Q.vertices:
            eqs.append((Word.of(s(v), s(v)), IDENTITY))
            fams.append("involution")
    return Presentation(
        tuple(s(v) for v in Q.vertices),
        tuple(eqs),
        tuple(fams),
        f"quiver group, variant={variant}, d={d}, n={len(Q.vertices)}",
    )


def _double_edge_order(Q: DecoratedQuiver, k: int) -> tuple[int, int]:
    a, b = Q.d_edge.ordered
    if (k, a) in Q.arrows and (b, k) in Q.arrows:
        return a, b
    if (k, b) in Q.arrows and (a, k) in Q.arrows:
        return b, a
    return a, b


def _square(Q: DecoratedQuiver) -> tuple[int, int, int, int] | None:
    """The 4-cycle ``i -> j -> k -> l -> i`` around the d-edge ``i - k``."""
    if len(Q.double_edges) != 2:
        return None
    i, k = sorted(Q.d_edge.pair)
    js = [v for v in Q.double_edges if (i, v) in Q.arrows and (v, k) in Q.arrows]
    ls = [v for v in Q.double_edges if (k, v) in Q.arrows and (v, i) in Q.arrows]
    if len(js) == 1 and len(ls) == 1:
        return i, js[0], k, ls[0]
    return None


# -- reference presentations -------------------------------------------------


def bmr_braid(d: int, n: int, reflection: bool = False) -> Presentation:
    """Generators ``tau2p, tau2, tau3, ..., taun``."""
    _check_dn(d, n)

    def t(i: int) -> str:
        return f"tau{i}"

    tp = "tau2p"
    gens = (tp,) + tuple(t(i) for i in range(2, n + 1))
    eqs: list[tuple[Word, Word]] = []
    for i in range(2, n):
        eqs.append((Word.of(t(i), t(i + 1), t(i)), Word.of(t(i + 1), t(i), t(i + 1))))
    if n >= 3:
        eqs.append((Word.of(tp, t(3), tp), Word.of(t(3), tp, t(3))))
    for i in range(2, n + 1):
        for j in range(i + 2, n + 1):
            eqs.append((Word.of(t(i), t(j)), Word.of(t(j), t(i))))
    for i in range(4, n + 1):
        eqs.append((Word.of(tp, t(i)), Word.of(t(i), tp)))
    if n >= 3:
        a, b, c = t(2), tp, t(3)
        eqs.append((Word.of(a, b, c, a, b, c), Word.of(c, a, b, c, a, b)))
    eqs.append((alternating(t(2), tp, d), alternating(tp, t(2), d)))
    if reflection:
        eqs += [(Word.of(g, g), IDENTITY) for g in gens]
    return Presentation(gens, tuple(eqs), metadata=f"BMR presentation, d={d}, n={n}")


def artin_b_mod_sd(d: int, n: int) -> Presentation:
    """Type-B Artin group on ``s, t2, ..., tn`` with ``s^d`` killed."""
    _check_dn(d, n)

    def t(i: int) -> str:
        return f"t{i}"

    gens = ("s",) + tuple(t(i) for i in range(2, n + 1))
    eqs: list[tuple[Word, Word]] = []
    for i in range(2, n):
        eqs.append((Word.of(t(i), t(i + 1), t(i)), Word.of(t(i + 1), t(i), t(i + 1))))
    for i in range(2, n + 1):
        for j in range(i + 2, n + 1):
            eqs.append((Word.of(t(i), t(j)), Word.of(t(j), t(i))))
    for i in range(3, n + 1):
        eqs.append((Word.of("s", t(i)), Word.of(t(i), "s")))
    eqs.append((Word.of("s", t(2), "s", t(2)), Word.of(t(2), "s", t(2), "s")))
    eqs.append((Word.of(*["s"] * d), IDENTITY))
    return Presentation(gens, tuple(eqs), metadata=f"type-B Artin group mod s^{d}, n={n}")


def normal_subgroup_generators(n: int) -> list[Word]:
    """``s t2 s^-1, t2, ..., tn`` inside ``artin_b_mod_sd``."""
    return [Word.parse("s t2 s^-1")] + [Word.of(f"t{i}") for i in range(2, n + 1)]


def reference_presentations(d: int, n: int, which: str) -> Presentation:
    if which == "bmr_braid":
        return bmr_braid(d, n)
    if which == "artin_b_mod_sd":
        return artin_b_mod_sd(d, n)
    raise ValueError(f"unknown reference presentation {which!r}")


def bmr_to_quiver_names(n: int) -> dict[str, str]:
    names = {"tau2p": "s1", "tau2": "s2"}
    names.update({f"tau{i}": f"s{i}" for i in range(3, n + 1)})
    return names


def _check_dn(d: int, n: int) -> None:
    if d < 2 or n < 2:
        raise ValueError("need d >= 2 and n >= 2")


# -- abelianization ----------------------------------------------------------


@dataclass(frozen=True)
class AbelianInvariants:
    free_rank: int
    torsion: tuple[int, ...] = field(default_factory=tuple)

    def to_json(self) -> dict:
        return {"free_rank": self.free_rank, "torsion": list(self.torsion)}


def exponent_matrix(P: Presentation) -> list[list[int]]:
    return [[r.exponent_sum(g) for g in P.generators] for r in P.relators]


def abelianization(P: Presentation) -> AbelianInvariants:
    """Invariant factors of the relation module, via Smith normal form."""
    from sympy import Matrix, ZZ
    from sympy.matrices.normalforms import smith_normal_form

    k = len(P.generators)
    rows = [row for row in exponent_matrix(P) if any(row)]
    if not rows or k == 0:
        return AbelianInvariants(k, ())
    snf = smith_normal_form(Matrix(rows), domain=ZZ)
    diag = [abs(int(snf[m, m])) for m in range(min(snf.shape))]
    nonzero = [x for x in diag if x != 0]
    return AbelianInvariants(k - len(nonzero), tuple(x for x in nonzero if x != 1))
