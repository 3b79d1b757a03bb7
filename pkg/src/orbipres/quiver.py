"""Decorated quivers of tagged triangulations and their mutation.

A decorated quiver carries plain arrows plus one record of the cone point:
either an unoriented edge labelled ``d`` between the two cone arcs, together
with double edges on the arcs that bound the cone region, or a labelled
oriented cycle through three or more radii.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable

from .surface import Boundary, ModelError, TaggedTriangulation, cone_configuration, flip, regions


@dataclass(frozen=True)
class DEdge:
    """Unoriented edge labelled ``d``.

    ``ordered[0]`` is the endpoint read first in the double-edge relation
    when the double-edge vertex has both arrows in or both arrows out.
    """

    pair: frozenset[int]
    ordered: tuple[int, int]

    @staticmethod
    def between(a: int, b: int) -> "DEdge":
        return DEdge(frozenset((a, b)), (max(a, b), min(a, b)))


def normalize_cycle(cycle: Iterable[int]) -> tuple[int, ...]:
    c = tuple(cycle)
    m = c.index(min(c))
    return c[m:] + c[:m]


@dataclass(frozen=True)
class DecoratedQuiver:
    d: int
    vertices: tuple[int, ...]
    arrows: frozenset[tuple[int, int]]
    d_edge: DEdge | None = None
    double_edges: frozenset[int] = frozenset()
    labeled_cycle: tuple[int, ...] | None = None

    def __post_init__(self) -> None:
        if self.labeled_cycle is not None:
            object.__setattr__(self, "labeled_cycle", normalize_cycle(self.labeled_cycle))

    def successors(self, v: int) -> list[int]:
        return sorted(j for i, j in self.arrows if i == v)

    def predecessors(self, v: int) -> list[int]:
        return sorted(i for i, j in self.arrows if j == v)

    def neighbours(self, v: int) -> list[int]:
        return sorted(set(self.successors(v)) | set(self.predecessors(v)))

    def adjacent(self, a: int, b: int) -> bool:
        return (a, b) in self.arrows or (b, a) in self.arrows

    def validate(self) -> None:
        vs = set(self.vertices)
        for i, j in self.arrows:
            if i == j:
                raise ValueError(f"self-arrow at {i}")
            if i not in vs or j not in vs:
                raise ValueError(f"arrow {i}->{j} leaves the vertex set")
            if (j, i) in self.arrows:
                raise ValueError(f"2-cycle between {i} and {j}")
        if (self.d_edge is None) == (self.labeled_cycle is None):
            raise ValueError("need exactly one of d_edge and labeled_cycle")
        if self.d_edge is not None:
            a, b = sorted(self.d_edge.pair)
            if len(self.d_edge.pair) != 2 or set(self.d_edge.ordered) != {a, b}:
                raise ValueError("malformed d-edge")
            if self.adjacent(a, b):
                raise ValueError("d-edge endpoints also joined by an arrow")
        elif self.double_edges:
            raise ValueError("double edges without a d-edge")
        if len(self.double_edges) > 2 or not set(self.double_edges) <= vs:
            raise ValueError(f"bad double edges {sorted(self.double_edges)}")
        if self.labeled_cycle is not None:
            c = self.labeled_cycle
            if len(c) < 3 or len(set(c)) != len(c):
                raise ValueError(f"bad labelled cycle {c}")
            for m in range(len(c)):
                if (c[m], c[(m + 1) % len(c)]) not in self.arrows:
                    raise ValueError(f"labelled cycle {c} missing arrow at position {m}")

    def stripped(self) -> "DecoratedQuiver":
        """Plain arrows only, as used by ordinary quiver mutation."""
        return DecoratedQuiver(self.d, self.vertices, self.arrows)

    def to_json(self) -> dict:
        d_edge = None
        if self.d_edge is not None:
            d_edge = {"pair": sorted(self.d_edge.pair), "ordered": list(self.d_edge.ordered)}
        return {
            "d": self.d,
            "vertices": list(self.vertices),
            "arrows": [list(a) for a in sorted(self.arrows)],
            "d_edge": d_edge,
            "double_edges": sorted(self.double_edges),
            "labeled_cycle": list(self.labeled_cycle) if self.labeled_cycle else None,
        }

    @staticmethod
    def from_json(obj: dict) -> "DecoratedQuiver":
        d_edge = None
        if obj.get("d_edge"):
            a, b = obj["d_edge"]["ordered"]
            d_edge = DEdge(frozenset((a, b)), (a, b))
        cyc = obj.get("labeled_cycle")
        return DecoratedQuiver(
            d=int(obj["d"]),
            vertices=tuple(obj["vertices"]),
            arrows=frozenset((int(i), int(j)) for i, j in obj["arrows"]),
            d_edge=d_edge,
            double_edges=frozenset(obj.get("double_edges", [])),
            labeled_cycle=tuple(cyc) if cyc else None,
        )


def _triangle_arrows(x, y, z) -> list[tuple]:
    # sides in ccw order: each side points to its clockwise neighbour
    return [(y, x), (z, y), (x, z)]


def quiver_from_triangulation(T: TaggedTriangulation) -> DecoratedQuiver:
    weight: dict[tuple[int, int], int] = {}

    def add(i, j) -> None:
        if isinstance(i, Boundary) or isinstance(j, Boundary):
            return
        weight[(i, j)] = weight.get((i, j), 0) + 1
        weight[(j, i)] = weight.get((j, i), 0) - 1

    sides_at_cone: list = []
    for reg in regions(T):
        if reg.kind in ("triangle", "sector"):
            for i, j in _triangle_arrows(*reg.sides):
                add(i, j)
            if reg.kind == "sector":
                sides_at_cone.append(reg.sides[0])
        elif reg.kind == "digon":
            side1, side2, r1, r2 = reg.sides
            add(side2, side1)
            for rho in (r1, r2):
                add(rho, side2)
                add(side1, rho)
            sides_at_cone += [side1, side2]
    arrows = set()
    for (i, j), w in weight.items():
        if abs(w) > 1:
            raise ModelError(f"multiple arrows between {i} and {j}")
        if w == 1:
            arrows.add((i, j))
    radii = T.radius_slots()
    vertices = tuple(T.slots())
    if cone_configuration(T) == "cycle":
        by_end = sorted(radii, key=lambda s: T.arc(s).at)
        Q = DecoratedQuiver(T.d, vertices, frozenset(arrows), labeled_cycle=tuple(by_end))
    else:
        doubles = frozenset(s for s in sides_at_cone if not isinstance(s, Boundary))
        Q = DecoratedQuiver(T.d, vertices, frozenset(arrows), DEdge.between(*radii), doubles)
    Q.validate()
    return Q


def mutate(Q: DecoratedQuiver, k: int) -> DecoratedQuiver:
    """Mutation at ``k`` by the local rules for decorated quivers."""
    Q.validate()
    if k not in Q.vertices:
        raise ValueError(f"{k} is not a vertex")
    A = set(Q.arrows)
    ins = Q.predecessors(k)
    outs = Q.successors(k)
    pair = Q.d_edge.pair if Q.d_edge is not None else frozenset()
    cycle = Q.labeled_cycle
    d_edge = Q.d_edge
    doubles = set(Q.double_edges)
    new_cycle = cycle
    fresh_d_edge = None

    # paths j -> k -> i
    added, removed = set(), set()
    for j in ins:
        for i in outs:
            if (i, j) in A:
                removed.add((i, j))
                if cycle is not None and len(cycle) == 3 and set(cycle) == {i, j, k}:
                    fresh_d_edge = (i, j)
            elif (j, i) in A:
                raise ModelError(f"mutation at {k} would double the arrow {j}->{i}")
            else:
                added.add((j, i))
                if pair == {i, j}:
                    new_cycle = (j, i, k)
                    d_edge = None
                    doubles = set()
    arrows = (A - removed) | added
    arrows = {(j, i) if k in (i, j) else (i, j) for i, j in arrows}

    if cycle is not None and k in cycle and len(cycle) >= 4:
        new_cycle = tuple(v for v in cycle if v != k)
    if cycle is not None and k not in cycle:
        r = len(cycle)
        for m in range(r):
            i, j = cycle[m], cycle[(m + 1) % r]
            if (j, k) in A and (k, i) in A:
                new_cycle = cycle[: m + 1] + (k,) + cycle[m + 1 :]
                break
    if fresh_d_edge is not None:
        i, j = fresh_d_edge
        new_cycle = None
        d_edge = DEdge.between(i, j)
        doubles = set()
        for v in (i, j):
            doubles |= {u for a, b in arrows for u in (a, b) if v in (a, b)}
        doubles -= {i, j}

    if d_edge is not None and k in Q.double_edges and k not in pair:
        both_in = pair <= set(ins)
        both_out = pair <= set(outs)
        if both_in or both_out:
            others = Q.double_edges - {k}
            nxt = outs if both_in else ins
            doubles = {k} | {v for v in nxt if v not in pair and v not in others}

    result = DecoratedQuiver(
        Q.d,
        Q.vertices,
        frozenset(arrows),
        d_edge,
        frozenset(doubles) if d_edge is not None else frozenset(),
        new_cycle,
    )
    result.validate()
    return result


def mutate_by_flip(T: TaggedTriangulation, k: int) -> DecoratedQuiver:
    """Reference mutation: flip the arc and rebuild the quiver."""
    return quiver_from_triangulation(flip(T, k))


def ordinary_mutation(arrows: Iterable[tuple[int, int]], k: int) -> frozenset[tuple[int, int]]:
    """Matrix mutation of a simply-laced quiver without decorations."""
    weight: dict[tuple[int, int], int] = {}
    for i, j in arrows:
        weight[(i, j)] = weight.get((i, j), 0) + 1
        weight[(j, i)] = weight.get((j, i), 0) - 1
    verts = {v for a in weight for v in a} | {k}
    new: dict[tuple[int, int], int] = {}
    for i in verts:
        for j in verts:
            if i == j:
                continue
            b = weight.get((i, j), 0)
            if k in (i, j):
                new[(i, j)] = -b
            else:
                bik, bkj = weight.get((i, k), 0), weight.get((k, j), 0)
                new[(i, j)] = b + (abs(bik) * bkj + bik * abs(bkj)) // 2
    if any(abs(w) > 1 for w in new.values()):
        raise ModelError("multiple arrows after mutation")
    return frozenset(a for a, w in new.items() if w == 1)
