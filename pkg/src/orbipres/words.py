"""Free-group words, substitution maps, finite-quotient evaluation and
bounded rewriting searches."""

from __future__ import annotations

import re
from collections import deque
from dataclasses import dataclass
from typing import TYPE_CHECKING, Callable, Iterable, Mapping, Sequence

if TYPE_CHECKING:
    from .grouprep import MonomialElement
    from .present import Presentation
    from .surface import TaggedTriangulation

Letter = tuple[str, int]

_TOKEN = re.compile(r"^([A-Za-z_][A-Za-z_0-9']*)(?:\^(-?\d+))?$")


def free_reduce(letters: Iterable[Letter]) -> tuple[Letter, ...]:
    out: list[Letter] = []
    for g, e in letters:
        if out and out[-1][0] == g and out[-1][1] == -e:
            out.pop()
        else:
            out.append((g, e))
    return tuple(out)


@dataclass(frozen=True)
class Word:
    """A freely reduced word; each letter is ``(generator, +1 or -1)``."""

    letters: tuple[Letter, ...] = ()

    def __post_init__(self) -> None:
        for g, e in self.letters:
            if e not in (1, -1):
                raise ValueError(f"exponent {e} on {g} is not +-1")
        object.__setattr__(self, "letters", free_reduce(self.letters))

    @staticmethod
    def of(*gens: str) -> "Word":
        """Positive word from generator names."""
        return Word(tuple((g, 1) for g in gens))

    @staticmethod
    def parse(text: str) -> "Word":
        """Parse whitespace-separated tokens such as ``s3`` and ``s3^-1``.

        ``1`` and ``e`` denote the empty word.
        """
        letters: list[Letter] = []
        for tok in text.split():
            if tok in ("1", "e"):
                continue
            m = _TOKEN.match(tok)
            if not m:
                raise ValueError(f"bad token {tok!r}")
            power = int(m.group(2)) if m.group(2) else 1
            sign = 1 if power > 0 else -1
            letters += [(m.group(1), sign)] * abs(power)
        return Word(tuple(letters))

    def __str__(self) -> str:
        if not self.letters:
            return "1"
        return " ".join(g if e == 1 else f"{g}^-1" for g, e in self.letters)

    def __len__(self) -> int:
        return len(self.letters)

    def __mul__(self, other: "Word") -> "Word":
        return Word(self.letters + other.letters)

    def __pow__(self, k: int) -> "Word":
        base = self if k >= 0 else self.inverse()
        return Word(base.letters * abs(k))

    def inverse(self) -> "Word":
        return Word(tuple((g, -e) for g, e in reversed(self.letters)))

    def generators(self) -> set[str]:
        return {g for g, _ in self.letters}

    def exponent_sum(self, g: str) -> int:
        return sum(e for h, e in self.letters if h == g)

    def is_identity(self) -> bool:
        return not self.letters

    def cyclic_reduce(self) -> "Word":
        L = list(self.letters)
        while len(L) >= 2 and L[0][0] == L[-1][0] and L[0][1] == -L[-1][1]:
            L = L[1:-1]
        return Word(tuple(L))


def conjugate(x: Word, y: Word) -> Word:
    """``x y x^-1``."""
    return x * y * x.inverse()


def alternating(a: str, b: str, length: int) -> Word:
    return Word.of(*[(a, b)[m % 2] for m in range(length)])


def cyclic_product(cycle: Sequence[str], start: int, length: int) -> Word:
    r = len(cycle)
    return Word.of(*[cycle[(start + m) % r] for m in range(length)])


@dataclass(frozen=True)
class GeneratorMap:
    """A homomorphism of free groups given on generators."""

    images: Mapping[str, Word]

    def apply(self, w: Word) -> Word:
        letters: list[Letter] = []
        for g, e in w.letters:
            if g not in self.images:
                raise KeyError(f"no image for generator {g}")
            img = self.images[g]
            letters += list(img.letters if e == 1 else img.inverse().letters)
        return Word(tuple(letters))

    def compose(self, first: "GeneratorMap") -> "GeneratorMap":
        """The map ``w -> self(first(w))``."""
        return GeneratorMap({g: self.apply(v) for g, v in first.images.items()})

    def to_json(self) -> dict[str, str]:
        return {g: str(v) for g, v in sorted(self.images.items())}

    @staticmethod
    def from_json(obj: Mapping[str, str]) -> "GeneratorMap":
        return GeneratorMap({g: Word.parse(v) for g, v in obj.items()})


def evaluate(w: Word, assignment: Mapping[str, "MonomialElement"], identity=None):
    """Product of generator images, read left to right."""
    result = identity
    if result is None:
        some = next(iter(assignment.values()))
        result = some.identity()
    inverses: dict[str, object] = {}
    for g, e in w.letters:
        if g not in assignment:
            raise KeyError(f"generator {g} has no assigned matrix")
        m = assignment[g]
        if e == -1:
            if g not in inverses:
                inverses[g] = m.inverse()
            m = inverses[g]
        result = result * m
    return result


# -- bounded consequence search ----------------------------------------------


def _relator_pieces(relators: Iterable[Word]) -> list[tuple[tuple[Letter, ...], tuple[Letter, ...]]]:
    """Pairs ``(u, v)`` with ``u = v`` a consequence of a single relator.

    For every cyclic conjugate ``c`` of a relator or its inverse and every
    split ``c = u w``, the subword ``u`` may be replaced by ``w^-1``.
    """
    pieces = set()
    for r in relators:
        r = r.cyclic_reduce()
        for c in (r, r.inverse()):
            L = c.letters
            m = len(L)
            for s in range(m):
                rot = L[s:] + L[:s]
                for cut in range(1, m + 1):
                    u = rot[:cut]
                    v = Word(rot[cut:]).inverse().letters
                    pieces.add((u, v))
    return sorted(pieces, key=lambda p: (len(p[0]), p))


def _neighbours(word: tuple[Letter, ...], pieces, max_len: int):
    m = len(word)
    for u, v in pieces:
        k = len(u)
        if k > m:
            continue
        for pos in range(m - k + 1):
            if word[pos : pos + k] == u:
                new = free_reduce(word[:pos] + v + word[pos + k :])
                if len(new) <= max_len:
                    yield new


@dataclass
class ConsequenceResult:
    status: str
    depth: int | None
    explored: int
    path: list[str] | None = None

    @property
    def proved(self) -> bool:
        return self.status == "proved"


def bounded_consequence(
    P: "Presentation",
    lhs: Word,
    rhs: Word,
    depth: int = 12,
    max_len: int | None = None,
    max_states: int = 2_000_000,
) -> ConsequenceResult:
    """Search for a chain of single-relator rewrites joining ``lhs`` to ``rhs``.

    The search grows breadth-first from both ends and stops at ``depth`` total
    rewrites.  A ``proved`` answer comes with the chain of words; ``unknown``
    only means the budget ran out.
    """
    for w in (lhs, rhs):
        extra = w.generators() - set(P.generators)
        if extra:
            raise ValueError(f"unknown generators {sorted(extra)}")
    a, b = lhs.letters, rhs.letters
    if a == b:
        return ConsequenceResult("proved", 0, 1, [str(lhs)])
    pieces = _relator_pieces(P.relators)
    if max_len is None:
        longest = max((len(r) for r in P.relators), default=0)
        max_len = max(len(a), len(b)) + longest
    parents = [{a: None}, {b: None}]
    frontiers = [[a], [b]]
    levels = [0, 0]
    explored = 2
    while levels[0] + levels[1] < depth:
        side = 0 if len(frontiers[0]) <= len(frontiers[1]) else 1
        if not frontiers[side]:
            side = 1 - side
            if not frontiers[side]:
                break
        nxt = []
        mine, theirs = parents[side], parents[1 - side]
        for w in frontiers[side]:
            for u in _neighbours(w, pieces, max_len):
                if u in mine:
                    continue
                mine[u] = w
                explored += 1
                if u in theirs:
                    levels[side] += 1
                    path = _join(parents, u, side)
                    return ConsequenceResult("proved", len(path) - 1, explored, path)
                nxt.append(u)
                if explored > max_states:
                    return ConsequenceResult("unknown", None, explored)
        frontiers[side] = nxt
        levels[side] += 1
    return ConsequenceResult("unknown", None, explored)


def _join(parents, meet, side) -> list[str]:
    def chain(tree, w):
        out = []
        while w is not None:
            out.append(w)
            w = tree[w]
        return out

    left = chain(parents[0], meet)[::-1]
    right = chain(parents[1], meet)[1:]
    return [str(Word(w)) for w in left + right]


# -- mutation maps -----------------------------------------------------------


def rotates_anticlockwise(T: "TaggedTriangulation", k: int) -> bool:
    """Whether the arc in slot ``k`` turns anticlockwise onto its flip.

    Only meaningful when ``k`` is one of exactly two arcs at the cone point.
    Both such arcs are radii and the flip moves the endpoint to the only
    other cone-visible boundary point, reachable either way round; the sense
    is read off the tag, plain radii turning anticlockwise.  Since every
    such flip swaps the tag, exactly one of ``T`` and ``flip(T, k)`` reports
    an anticlockwise turn.
    """
    from .surface import PLAIN, Radius, cone_configuration

    if cone_configuration(T) == "cycle" or k not in T.radius_slots():
        return False
    arc = T.arc(k)
    return isinstance(arc, Radius) and arc.tag == PLAIN


def conjugated_slots(T: "TaggedTriangulation", k: int) -> list[int]:
    """Slots ``i`` whose generator is conjugated by ``t_k`` under the mutation map."""
    from .quiver import quiver_from_triangulation

    Q = quiver_from_triangulation(T)
    out = {i for i in Q.vertices if (i, k) in Q.arrows}
    if Q.d_edge is not None and k in Q.d_edge.pair and rotates_anticlockwise(T, k):
        out |= set(Q.d_edge.pair) - {k}
    return sorted(out)


def phi_map(T: "TaggedTriangulation", k: int) -> GeneratorMap:
    """Generators of the quiver group of ``T`` to words in that of ``flip(T, k)``.

    ``s_i -> t_k t_i t_k^-1`` for the slots of :func:`conjugated_slots`,
    ``s_i -> t_i`` otherwise.  Both groups use the names ``s{slot}``.
    """
    conj = set(conjugated_slots(T, k))
    tk = Word.of(f"s{k}")
    images = {}
    for i in T.slots():
        ti = Word.of(f"s{i}")
        images[f"s{i}"] = conjugate(tk, ti) if i in conj else ti
    return GeneratorMap(images)


def round_trip(T: "TaggedTriangulation", k: int) -> GeneratorMap:
    """``phi(flip(T,k), k)`` after ``phi(T, k)``: a map from the group of ``T`` to itself."""
    from .surface import flip

    return phi_map(flip(T, k), k).compose(phi_map(T, k))


@dataclass
class TransportReport:
    slot: int
    relators: int
    failures: list[int]
    round_trip_inner: bool

    @property
    def passed(self) -> bool:
        return not self.failures and self.round_trip_inner


def transport_check(T: "TaggedTriangulation", k: int) -> TransportReport:
    """Check the mutation map at ``k`` in the reflection representations.

    Every reflection-variant relator of ``T`` is pushed through the map and
    evaluated with the canonical reflections of ``flip(T, k)``; the round
    trip must act as conjugation ``x -> m_k x m_k^-1`` on each generator.
    """
    from .grouprep import MonomialElement, braid_graph_with_assignment
    from .present import relations_from_quiver
    from .quiver import quiver_from_triangulation
    from .surface import flip

    T2 = flip(T, k)
    e = MonomialElement.identity_of(T.n, T.d)
    mats2 = braid_graph_with_assignment(T2)[1].matrices()
    P = relations_from_quiver(quiver_from_triangulation(T), "reflection")
    phi = phi_map(T, k)
    failures = [m for m, r in enumerate(P.relators) if not evaluate(phi.apply(r), mats2, e).is_identity()]
    mats = braid_graph_with_assignment(T)[1].matrices()
    mk = mats[f"s{k}"]
    back = round_trip(T, k)
    inner = all(
        evaluate(back.apply(Word.of(g)), mats, e) == mk * mats[g] * mk.inverse() for g in mats
    )
    return TransportReport(k, len(P.relators), failures, inner)


def round_trip_is_literal_conjugation(T: "TaggedTriangulation", k: int) -> bool:
    """Whether the round trip sends every ``s_i`` adjacent to ``k`` to ``s_k s_i s_k^-1`` as a word."""
    from .quiver import quiver_from_triangulation

    Q = quiver_from_triangulation(T)
    back = round_trip(T, k)
    sk = Word.of(f"s{k}")
    partners = set(Q.neighbours(k))
    if Q.d_edge is not None and k in Q.d_edge.pair:
        partners |= set(Q.d_edge.pair) - {k}
    return all(back.apply(Word.of(f"s{i}")) == conjugate(sk, Word.of(f"s{i}")) for i in partners)


# -- the commuting square for the type-B Artin group -------------------------


@dataclass
class DiagramReport:
    d: int
    n: int
    sign: int
    relators_killed: bool
    mismatches: list[str]
    image_order: int
    ambient_order: int
    image_in_reflection_group: bool
    bmr_relators_killed: bool

    @property
    def index(self) -> int:
        return self.ambient_order // self.image_order if self.image_order else 0

    @property
    def passed(self) -> bool:
        from .grouprep import ambient_group_order, reflection_group_order

        return (
            self.relators_killed
            and not self.mismatches
            and self.image_in_reflection_group
            and self.bmr_relators_killed
            and self.image_order == reflection_group_order(self.d, self.n)
            and self.ambient_order == ambient_group_order(self.d, self.n)
            and self.index == self.d
        )

    def to_json(self) -> dict:
        return {
            "d": self.d,
            "n": self.n,
            "sign": self.sign,
            "passed": self.passed,
            "relators_killed": self.relators_killed,
            "bmr_relators_killed": self.bmr_relators_killed,
            "mismatches": list(self.mismatches),
            "image_order": self.image_order,
            "ambient_order": self.ambient_order,
            "index": self.index,
            "image_in_reflection_group": self.image_in_reflection_group,
        }


def witness_quotient(d: int, n: int, sign: int = -1) -> dict[str, "MonomialElement"]:
    """``s -> diag(w^sign, 1, ..., 1)`` and ``t_i -> s(i-1, i; 0)``."""
    from .grouprep import diagonal, reflection

    q = {"s": diagonal([sign] + [0] * (n - 1), d)}
    q.update({f"t{i}": reflection(i - 1, i, 0, n, d) for i in range(2, n + 1)})
    return q


def bmr_reflections(d: int, n: int) -> dict[str, "MonomialElement"]:
    """``tau2p -> s(1,2;1)``, ``tau2 -> s(1,2;0)``, ``tau_i -> s(i-1,i;0)``."""
    from .grouprep import reflection

    rho = {"tau2p": reflection(1, 2, 1, n, d)}
    rho.update({f"tau{i}": reflection(i - 1, i, 0, n, d) for i in range(2, n + 1)})
    return rho


def normal_subgroup_to_bmr(n: int) -> list[tuple[Word, Word]]:
    """Pairs (generator of N as a word in ``s, t_i``, its BMR image)."""
    pairs = [(Word.parse("s t2 s^-1"), Word.of("tau2p"))]
    pairs += [(Word.of(f"t{i}"), Word.of(f"tau{i}")) for i in range(2, n + 1)]
    return pairs


def diagram_check(d: int, n: int, sign: int = -1) -> DiagramReport:
    """Finite shadow of the square relating the type-B Artin group to BMR.

    ``sign=-1`` is the primary convention; ``sign=+1`` is the mirrored
    choice, kept as an experiment.
    """
    from .grouprep import MonomialElement, generate_subgroup
    from .present import artin_b_mod_sd, bmr_braid

    e = MonomialElement.identity_of(n, d)
    q = witness_quotient(d, n, sign)
    rho = bmr_reflections(d, n)
    killed = all(evaluate(r, q, e).is_identity() for r in artin_b_mod_sd(d, n).relators)
    bmr_killed = all(evaluate(r, rho, e).is_identity() for r in bmr_braid(d, n, reflection=True).relators)
    mismatches = []
    images = []
    for word_in_a, word_in_bmr in normal_subgroup_to_bmr(n):
        left = evaluate(word_in_a, q, e)
        right = evaluate(word_in_bmr, rho, e)
        images.append(left)
        if left != right:
            mismatches.append(f"{word_in_a}: {left.to_json()} != {right.to_json()}")
    image = generate_subgroup(images, keep=True)
    ambient = generate_subgroup(list(q.values()), keep=False)
    in_g = all(g.in_reflection_subgroup() for g in image.elements)
    return DiagramReport(d, n, sign, killed, mismatches, image.order, ambient.order, in_g, bmr_killed)


# -- rewriting fixtures ------------------------------------------------------


def dihedral_transfer_instance(d: int) -> tuple["Presentation", Word, Word]:
    """``a b a ... = b a b ...`` (d letters) and the same relation for ``a``, ``a b a^-1``."""
    from .present import Presentation

    P = Presentation(("a", "b"), ((alternating("a", "b", d), alternating("b", "a", d)),))
    sub = GeneratorMap({"A": Word.of("a"), "B": Word.parse("a b a^-1")})
    lhs = sub.apply(alternating("A", "B", d))
    rhs = sub.apply(alternating("B", "A", d))
    return P, lhs, rhs


def cycle_shift_instance(n: int = 3, d: int = 2) -> tuple["Presentation", Word, Word]:
    """Braid relations around an n-cycle of generators plus the cyclic product relation
    started at ``g0``; the goal is the same relation started at ``g1``."""
    from .present import Presentation

    g = [f"g{m}" for m in range(n)]
    eqs = []
    for m in range(n):
        a, b = g[m], g[(m + 1) % n]
        eqs.append((Word.of(a, b, a), Word.of(b, a, b)))
    for m in range(n):
        for j in range(m + 2, n):
            if (j + 1) % n != m:
                eqs.append((Word.of(g[m], g[j]), Word.of(g[j], g[m])))
    L = d * (n - 1)
    eqs.append((cyclic_product(g, 0, L), cyclic_product(g, 1, L)))
    P = Presentation(tuple(g), tuple(eqs))
    return P, cyclic_product(g, 1, L), cyclic_product(g, 2, L)
