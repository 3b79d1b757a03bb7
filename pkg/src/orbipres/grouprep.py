"""Monomial matrices with root-of-unity entries, reflections, the dual graph
of a triangulation and the reflection assignment it carries."""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from math import factorial, gcd
from typing import Iterable, Mapping, Sequence

from .surface import Boundary, ResourceLimit, TaggedTriangulation, regions


@dataclass(frozen=True, slots=True)
class MonomialElement:
    """``[(w^e1, ..., w^en) | sigma]``: entry ``w^ei`` in row i, column sigma(i).

    ``sigma`` lists the images of ``1..n``; ``w`` is a primitive d-th root of
    unity, so exponents are kept in ``0..d-1``.
    """

    d: int
    sigma: tuple[int, ...]
    exponents: tuple[int, ...]

    def __post_init__(self) -> None:
        n = len(self.sigma)
        if len(self.exponents) != n:
            raise ValueError("sigma and exponents differ in length")
        if sorted(self.sigma) != list(range(1, n + 1)):
            raise ValueError(f"{self.sigma} is not a permutation of 1..{n}")
        object.__setattr__(self, "exponents", tuple(e % self.d for e in self.exponents))

    @property
    def n(self) -> int:
        return len(self.sigma)

    @staticmethod
    def identity_of(n: int, d: int) -> "MonomialElement":
        return MonomialElement(d, tuple(range(1, n + 1)), (0,) * n)

    def identity(self) -> "MonomialElement":
        return MonomialElement.identity_of(self.n, self.d)

    def is_identity(self) -> bool:
        return self.sigma == tuple(range(1, self.n + 1)) and not any(self.exponents)

    def _check(self, other: "MonomialElement") -> None:
        if self.n != other.n or self.d != other.d:
            raise ValueError(f"mismatched shapes (n={self.n}, d={self.d}) vs (n={other.n}, d={other.d})")

    def __mul__(self, other: "MonomialElement") -> "MonomialElement":
        self._check(other)
        s, t = self.sigma, other.sigma
        x, y = self.exponents, other.exponents
        return MonomialElement(
            self.d,
            tuple(t[k - 1] for k in s),
            tuple(x[i] + y[s[i] - 1] for i in range(len(s))),
        )

    def inverse(self) -> "MonomialElement":
        n = self.n
        sigma = [0] * n
        exps = [0] * n
        for i, k in enumerate(self.sigma):
            sigma[k - 1] = i + 1
            exps[k - 1] = -self.exponents[i]
        return MonomialElement(self.d, tuple(sigma), tuple(exps))

    def __pow__(self, k: int) -> "MonomialElement":
        base = self if k >= 0 else self.inverse()
        out = self.identity()
        for _ in range(abs(k)):
            out = out * base
        return out

    def order(self) -> int:
        g, k = self, 1
        while not g.is_identity():
            g, k = g * self, k + 1
        return k

    def in_reflection_subgroup(self) -> bool:
        """Membership in G(d,d,n): the exponents sum to 0 mod d."""
        return sum(self.exponents) % self.d == 0

    def commutes_with(self, other: "MonomialElement") -> bool:
        return self * other == other * self

    def to_rows(self) -> list[list[int | None]]:
        """Dense exponent matrix; ``None`` marks a zero entry."""
        rows: list[list[int | None]] = [[None] * self.n for _ in range(self.n)]
        for i, k in enumerate(self.sigma):
            rows[i][k - 1] = self.exponents[i]
        return rows

    def to_json(self) -> dict:
        return {"n": self.n, "d": self.d, "sigma": list(self.sigma), "exp": list(self.exponents)}

    @staticmethod
    def from_json(obj: Mapping) -> "MonomialElement":
        m = MonomialElement(int(obj["d"]), tuple(obj["sigma"]), tuple(obj["exp"]))
        if m.n != int(obj["n"]):
            raise ValueError("n does not match sigma")
        return m


def reflection(a: int, b: int, c: int, n: int, d: int) -> MonomialElement:
    """``s(a,b;c)``: swaps coordinates a and b, exponent -c at a and +c at b."""
    if a == b or not (1 <= a <= n and 1 <= b <= n):
        raise ValueError(f"bad reflection indices {a}, {b} for n={n}")
    sigma = list(range(1, n + 1))
    sigma[a - 1], sigma[b - 1] = b, a
    exps = [0] * n
    exps[a - 1] = -c
    exps[b - 1] = c
    return MonomialElement(d, tuple(sigma), tuple(exps))


def diagonal(exponents: Sequence[int], d: int) -> MonomialElement:
    return MonomialElement(d, tuple(range(1, len(exponents) + 1)), tuple(exponents))


def reflection_group_order(d: int, n: int) -> int:
    """``|G(d,d,n)| = d^(n-1) n!``."""
    return d ** (n - 1) * factorial(n)


def ambient_group_order(d: int, n: int) -> int:
    """``|G(d,1,n)| = d^n n!``."""
    return d**n * factorial(n)


@dataclass
class Subgroup:
    order: int
    elements: set[MonomialElement] = field(default_factory=set)


def generate_subgroup(
    gens: Sequence[MonomialElement],
    cap: int = 1_000_000,
    n: int | None = None,
    d: int | None = None,
    keep: bool = True,
) -> Subgroup:
    """Breadth-first closure of ``gens`` under right multiplication."""
    gens = list(gens)
    if not gens:
        if n is None or d is None:
            return Subgroup(1, set())
        e = MonomialElement.identity_of(n, d)
        return Subgroup(1, {e} if keep else set())
    for g in gens[1:]:
        gens[0]._check(g)
    e = gens[0].identity()
    seen = {e}
    queue = deque([e])
    while queue:
        x = queue.popleft()
        for g in gens:
            y = x * g
            if y not in seen:
                if len(seen) >= cap:
                    raise ResourceLimit(f"subgroup exceeds {cap} elements")
                seen.add(y)
                queue.append(y)
    return Subgroup(len(seen), seen if keep else set())


def ambient_generators(n: int, d: int) -> list[MonomialElement]:
    """Generators of G(d,1,n): ``diag(w^-1, 1, ..., 1)`` and adjacent transpositions."""
    return [diagonal([-1] + [0] * (n - 1), d)] + [reflection(i - 1, i, 0, n, d) for i in range(2, n + 1)]


# -- dual graph and reflection assignment ------------------------------------


@dataclass(frozen=True)
class BraidGraph:
    """Dual graph: regions ``1..n`` and one edge per arc slot.

    ``edges[slot] = (tail, head)`` is oriented around the cycle coherently
    and away from the cycle on tree edges.
    """

    region_kinds: tuple[str, ...]
    edges: Mapping[int, tuple[int, int]]
    cycle: tuple[int, ...]
    cycle_edges: tuple[int, ...]
    distinguished: int

    @property
    def n(self) -> int:
        return len(self.region_kinds)

    def to_json(self) -> dict:
        return {
            "regions": list(self.region_kinds),
            "edges": {str(s): list(e) for s, e in sorted(self.edges.items())},
            "cycle": list(self.cycle),
            "cycle_edges": list(self.cycle_edges),
            "distinguished": self.distinguished,
        }


@dataclass(frozen=True)
class ReflectionAssignment:
    n: int
    d: int
    edges: Mapping[int, tuple[int, int]]
    labels: Mapping[int, int]
    cycle_edges: tuple[int, ...]

    @property
    def delta(self) -> int:
        return abs(sum(self.labels[s] for s in self.cycle_edges))

    def is_generating(self) -> bool:
        return gcd(self.delta, self.d) == 1

    def reflection(self, slot: int) -> MonomialElement:
        a, b = self.edges[slot]
        return reflection(a, b, self.labels[slot], self.n, self.d)

    def matrices(self) -> dict[str, MonomialElement]:
        """Generator name ``s{slot}`` to its reflection."""
        return {f"s{s}": self.reflection(s) for s in sorted(self.edges)}

    def to_json(self) -> dict:
        return {
            "n": self.n,
            "d": self.d,
            "delta": self.delta,
            "edges": {
                str(s): {"from": a, "to": b, "label": self.labels[s], "matrix": self.reflection(s).to_json()}
                for s, (a, b) in sorted(self.edges.items())
            },
        }


class InvalidLabels(ValueError):
    def __init__(self, delta: int, d: int):
        super().__init__(f"labels give delta={delta}, and gcd({delta}, {d}) = {gcd(delta, d)} != 1")
        self.delta = delta
        self.d = d


def braid_graph(T: TaggedTriangulation) -> BraidGraph:
    regs = regions(T)
    incident: dict[int, list[int]] = {}
    for r, reg in enumerate(regs):
        for side in reg.sides:
            if not isinstance(side, Boundary):
                incident.setdefault(side, []).append(r)
    for s in T.slots():
        if len(incident.get(s, [])) != 2:
            raise ValueError(f"slot {s} borders {incident.get(s)} regions")
    on_cycle = [r for r, reg in enumerate(regs) if reg.kind != "triangle"]
    # cone regions are listed first, starting with the region between a radius pair
    start = on_cycle[0]
    number = {start: 1}
    queue = deque([start])
    while queue:
        r = queue.popleft()
        for s in sorted(s for s in incident if r in incident[s]):
            a, b = incident[s]
            other = b if a == r else a
            if other not in number:
                number[other] = len(number) + 1
                queue.append(other)
    cyc_set = set(on_cycle)
    cycle_slots = sorted(s for s, (a, b) in incident.items() if a in cyc_set and b in cyc_set)
    edges: dict[int, tuple[int, int]] = {}
    here = start
    first = min(s for s in cycle_slots if here in incident[s])
    order_regions, order_slots = [], []
    s = first
    while s not in order_slots:
        a, b = incident[s]
        nxt = b if a == here else a
        edges[s] = (number[here], number[nxt])
        order_regions.append(number[here])
        order_slots.append(s)
        here = nxt
        rest = [t for t in cycle_slots if here in incident[t] and t != s]
        s = min(rest)
    for s, (a, b) in incident.items():
        if s in edges:
            continue
        na, nb = number[a], number[b]
        edges[s] = (na, nb) if na < nb else (nb, na)
    kinds = [""] * len(regs)
    for r, reg in enumerate(regs):
        kinds[number[r] - 1] = reg.kind
    return BraidGraph(tuple(kinds), edges, tuple(order_regions), tuple(order_slots), first)


def braid_graph_with_assignment(
    T: TaggedTriangulation, labels: Mapping[int, int] | None = None, strict: bool = True
) -> tuple[BraidGraph, ReflectionAssignment]:
    """Dual graph plus reflections ``s(tail, head; label)`` on its edges.

    By default every label is 0 except the first cycle edge, which gets 1.
    With ``strict`` a labelling whose cycle sum is not coprime to ``d`` is
    rejected.
    """
    G = braid_graph(T)
    if labels is None:
        labels = {s: 0 for s in G.edges}
        labels[G.distinguished] = 1
    else:
        labels = {s: int(labels.get(s, 0)) for s in G.edges}
    R = ReflectionAssignment(T.n, T.d, dict(G.edges), labels, G.cycle_edges)
    if strict and not R.is_generating():
        raise InvalidLabels(R.delta, T.d)
    return G, R


# -- certificates ------------------------------------------------------------


@dataclass
class IsomorphismCertificate:
    n: int
    d: int
    expected_order: int
    relator_ok: list[bool]
    image_order: int | None
    presented_order: int | None
    coset_status: str
    notes: list[str] = field(default_factory=list)

    @property
    def failing_relators(self) -> list[int]:
        return [m for m, ok in enumerate(self.relator_ok) if not ok]

    @property
    def passed(self) -> bool:
        return (
            all(self.relator_ok)
            and self.image_order == self.expected_order
            and self.presented_order == self.expected_order
        )

    def to_json(self) -> dict:
        return {
            "n": self.n,
            "d": self.d,
            "passed": self.passed,
            "expected_order": self.expected_order,
            "relators": [{"index": m, "identity": ok} for m, ok in enumerate(self.relator_ok)],
            "failing_relators": self.failing_relators,
            "image_order": self.image_order,
            "presented_order": self.presented_order,
            "coset_status": self.coset_status,
            "notes": list(self.notes),
        }


def verify_nu(
    T: TaggedTriangulation,
    assignment: ReflectionAssignment | None = None,
    cap: int | None = None,
) -> IsomorphismCertificate:
    """Check that the reflections of the dual graph realize the quiver group.

    Three checks: every relator maps to the identity, the reflections
    generate a group of order ``d^(n-1) n!``, and coset enumeration of the
    presentation gives the same order.
    """
    from .coset import todd_coxeter
    from .present import relations_from_quiver
    from .quiver import quiver_from_triangulation
    from .words import evaluate

    if assignment is None:
        _, assignment = braid_graph_with_assignment(T)
    n, d = T.n, T.d
    expected = reflection_group_order(d, n)
    P = relations_from_quiver(quiver_from_triangulation(T), "reflection")
    mats = assignment.matrices()
    e = MonomialElement.identity_of(n, d)
    relator_ok = [evaluate(r, mats, e).is_identity() for r in P.relators]
    notes = []
    image = generate_subgroup(list(mats.values()), cap=max(expected, 1) * d + 1, keep=False).order
    if image != expected:
        notes.append(f"reflections generate a group of order {image}, not {expected} (delta={assignment.delta})")
    res = todd_coxeter(P, (), cap)
    if res.index is not None and res.index != expected:
        notes.append(f"presentation has order {res.index}, not {expected}")
    if not all(relator_ok):
        notes.append(f"relators not killed: {[m for m, ok in enumerate(relator_ok) if not ok]}")
    return IsomorphismCertificate(n, d, expected, relator_ok, image, res.index, res.status, notes)


def shi_table(d: int) -> list[dict]:
    """For the two-edge cycle at n=2: every label pair, its delta and generated order."""
    rows = []
    for c1 in range(d):
        for c2 in range(d):
            gens = [reflection(1, 2, c1, 2, d), reflection(2, 1, c2, 2, d)]
            order = generate_subgroup(gens, keep=False).order
            delta = abs(c1 + c2)
            rows.append({"labels": [c1, c2], "delta": delta, "coprime": gcd(delta, d) == 1, "order": order})
    return rows


def coset_count(group: Iterable[MonomialElement], subgroup_predicate) -> int:
    """Number of cosets of the subgroup cut out by ``subgroup_predicate``."""
    elems = list(group)
    inside = sum(1 for g in elems if subgroup_predicate(g))
    if inside == 0 or len(elems) % inside:
        raise ValueError("predicate does not cut out a subgroup")
    return len(elems) // inside
