"""Tagged arcs and tagged triangulations of a disk with one cone point.

Boundary marked points are labelled ``0..n-1`` counterclockwise.  A chord is
stored as an ordered pair ``(start, end)`` whose counterclockwise open interval
is the side of the chord away from the cone point.  A radius joins a boundary
point to the cone point and carries a tag.

Compatibility is decided in the double cover: the 2n-gon that covers the disk
branched at the cone point.  Every chord lifts to two chords of the 2n-gon and
every radius lifts to a diameter coloured by its tag.
"""

from __future__ import annotations

import csv
import io
import json
from collections import deque
from dataclasses import dataclass, field
from typing import Iterable, Iterator, Sequence, Union

PLAIN = "plain"
NOTCHED = "notched"
TAGS = (PLAIN, NOTCHED)


class ModelError(RuntimeError):
    """The combinatorial model contradicted one of its own invariants."""


class ResourceLimit(RuntimeError):
    """An exhaustive search was asked to go past its guard."""


@dataclass(frozen=True)
class ConeDisk:
    n: int
    d: int

    def __post_init__(self) -> None:
        if self.n < 2 or self.d < 2:
            raise ValueError(f"need n >= 2 and d >= 2, got n={self.n}, d={self.d}")


@dataclass(frozen=True)
class Chord:
    start: int
    end: int

    def span(self, n: int) -> int:
        return (self.end - self.start) % n

    def inside(self, n: int) -> frozenset[int]:
        """Boundary points strictly on the cone-free side."""
        return frozenset((self.start + i) % n for i in range(1, self.span(n)))


@dataclass(frozen=True)
class Radius:
    at: int
    tag: str


Arc = Union[Chord, Radius]


@dataclass(frozen=True)
class Boundary:
    """The boundary segment from ``start`` to ``start + 1``."""

    start: int


Side = Union[int, Boundary]


def arc_key(arc: Arc) -> tuple:
    if isinstance(arc, Radius):
        return (0, arc.at, TAGS.index(arc.tag))
    return (1, arc.start, arc.end)


def validate_arc(arc: Arc, disk: ConeDisk) -> None:
    n = disk.n
    if isinstance(arc, Radius):
        if arc.tag not in TAGS:
            raise ValueError(f"unknown tag {arc.tag!r}")
        if not 0 <= arc.at < n:
            raise ValueError(f"radius endpoint {arc.at} outside 0..{n - 1}")
        return
    if isinstance(arc, Chord):
        if not (0 <= arc.start < n and 0 <= arc.end < n):
            raise ValueError(f"chord endpoints {arc} outside 0..{n - 1}")
        if arc.start == arc.end:
            raise ValueError("chord endpoints must differ")
        if arc.span(n) < 2:
            raise ValueError(f"{arc} is isotopic to a boundary segment")
        return
    raise TypeError(f"not an arc: {arc!r}")


def all_arcs(disk: ConeDisk) -> list[Arc]:
    """Every valid tagged arc, in a fixed order: radii first, then chords."""
    n = disk.n
    arcs: list[Arc] = [Radius(v, t) for v in range(n) for t in TAGS]
    arcs += [Chord(a, (a + L) % n) for a in range(n) for L in range(2, n)]
    return arcs


# -- compatibility in the double cover ---------------------------------------


def _lifts(arc: Arc, n: int) -> list[tuple[int, int]]:
    if isinstance(arc, Radius):
        return [(arc.at, arc.at + n)]
    L = arc.span(n)
    return [(arc.start, arc.start + L), (arc.start + n, (arc.start + L + n) % (2 * n))]


def _cross(p: tuple[int, int], q: tuple[int, int], m: int) -> bool:
    """Do two chords of an m-gon cross in their interiors?"""
    a, b = p
    c, e = q
    if len({a % m, b % m, c % m, e % m}) < 4:
        return False

    def between(x: int, lo: int, hi: int) -> bool:
        return 0 < (x - lo) % m < (hi - lo) % m

    return between(c, a, b) != between(e, a, b)


def compatible(a: Arc, b: Arc, disk: ConeDisk) -> bool:
    validate_arc(a, disk)
    validate_arc(b, disk)
    if a == b:
        return True
    n = disk.n
    if isinstance(a, Radius) and isinstance(b, Radius):
        if a.tag == b.tag:
            return True
        return a.at == b.at
    m = 2 * n
    return not any(_cross(p, q, m) for p in _lifts(a, n) for q in _lifts(b, n))


# -- triangulations ----------------------------------------------------------


@dataclass(frozen=True)
class Region:
    """A connected component of the complement of a triangulation.

    ``sides`` lists the arcs and boundary segments around the region.  For
    triangles and cone sectors it is in counterclockwise order.  The digon
    around a pair of radii with a common endpoint lists ``(side1, side2)``
    followed by both radii, and the sliver between those radii lists only the
    two radii.
    """

    kind: str
    sides: tuple[Side, ...]


@dataclass(frozen=True)
class TaggedTriangulation:
    disk: ConeDisk
    arcs: tuple[Arc, ...]

    @property
    def n(self) -> int:
        return self.disk.n

    @property
    def d(self) -> int:
        return self.disk.d

    def arc(self, slot: int) -> Arc:
        return self.arcs[slot - 1]

    def slots(self) -> range:
        return range(1, len(self.arcs) + 1)

    def arc_set(self) -> frozenset[Arc]:
        return frozenset(self.arcs)

    def slot_of(self, arc: Arc) -> int:
        return self.arcs.index(arc) + 1

    def radius_slots(self) -> list[int]:
        return [s for s in self.slots() if isinstance(self.arc(s), Radius)]

    def validate(self) -> None:
        disk = self.disk
        if len(self.arcs) != disk.n:
            raise ValueError(f"expected {disk.n} arcs, got {len(self.arcs)}")
        if len(set(self.arcs)) != len(self.arcs):
            raise ValueError("repeated arc")
        for a in self.arcs:
            validate_arc(a, disk)
        for i, a in enumerate(self.arcs):
            for b in self.arcs[i + 1 :]:
                if not compatible(a, b, disk):
                    raise ValueError(f"{a} and {b} are not compatible")
        present = self.arc_set()
        for a in all_arcs(disk):
            if a not in present and all(compatible(a, b, disk) for b in self.arcs):
                raise ValueError(f"not maximal: {a} could be added")


def initial_triangulation(disk: ConeDisk) -> TaggedTriangulation:
    """Two opposite radii at 0, then a fan of nested chords from 1.

    Slot 3 is ``Chord(1, 0)`` and slot ``j`` for ``j >= 4`` is
    ``Chord(1, n + 3 - j)``, so each fan chord sits inside the previous one.
    """
    n = disk.n
    arcs: list[Arc] = [Radius(0, PLAIN), Radius(0, NOTCHED)]
    if n >= 3:
        arcs.append(Chord(1, 0))
    for j in range(4, n + 1):
        arcs.append(Chord(1, (n + 3 - j) % n))
    T = TaggedTriangulation(disk, tuple(arcs))
    T.validate()
    return T


def completions(arcs: Iterable[Arc], disk: ConeDisk) -> list[Arc]:
    """All arcs outside ``arcs`` that are compatible with every one of them."""
    arcs = list(arcs)
    present = set(arcs)
    return [
        a
        for a in all_arcs(disk)
        if a not in present and all(compatible(a, b, disk) for b in arcs)
    ]


def flip(T: TaggedTriangulation, slot: int) -> TaggedTriangulation:
    if not 1 <= slot <= T.n:
        raise ValueError(f"slot {slot} outside 1..{T.n}")
    old = T.arc(slot)
    rest = [a for s, a in zip(T.slots(), T.arcs) if s != slot]
    found = completions(rest, T.disk)
    if len(found) != 2 or old not in found:
        raise ModelError(f"flip at slot {slot} has completions {found}, expected two")
    new = found[0] if found[1] == old else found[1]
    arcs = list(T.arcs)
    arcs[slot - 1] = new
    return TaggedTriangulation(T.disk, tuple(arcs))


def tag_flip(T: TaggedTriangulation) -> TaggedTriangulation:
    """Swap plain and notched on every radius."""
    swap = {PLAIN: NOTCHED, NOTCHED: PLAIN}
    arcs = tuple(Radius(a.at, swap[a.tag]) if isinstance(a, Radius) else a for a in T.arcs)
    return TaggedTriangulation(T.disk, arcs)


def brute_force_triangulations(disk: ConeDisk) -> list[frozenset[Arc]]:
    """Every maximal pairwise-compatible arc set, by clique search."""
    arcs = all_arcs(disk)
    m = len(arcs)
    ok = [[compatible(arcs[i], arcs[j], disk) for j in range(m)] for i in range(m)]
    found: list[frozenset[Arc]] = []

    def extend(chosen: list[int], candidates: list[int], excluded: list[int]) -> None:
        if not candidates and not excluded:
            found.append(frozenset(arcs[i] for i in chosen))
            return
        for i in list(candidates):
            extend(
                chosen + [i],
                [j for j in candidates if ok[i][j] and j != i],
                [j for j in excluded if ok[i][j]],
            )
            candidates.remove(i)
            excluded.append(i)

    extend([], list(range(m)), [])
    return found


@dataclass
class FlipGraph:
    """Flip graph on arc sets, with one slot-labelled representative each."""

    disk: ConeDisk
    triangulations: list[TaggedTriangulation] = field(default_factory=list)
    edges: set[tuple[int, int]] = field(default_factory=set)

    def index(self) -> dict[frozenset[Arc], int]:
        return {T.arc_set(): i for i, T in enumerate(self.triangulations)}

    def degree_sequence(self) -> list[int]:
        deg = [0] * len(self.triangulations)
        for a, b in self.edges:
            deg[a] += 1
            deg[b] += 1
        return deg

    def to_dot(self) -> str:
        lines = ["graph flips {"]
        for i, T in enumerate(self.triangulations):
            lines.append(f'  {i} [label="{describe(T)}"];')
        for a, b in sorted(self.edges):
            lines.append(f"  {a} -- {b};")
        lines.append("}")
        return "\n".join(lines) + "\n"

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["source", "target"])
        for a, b in sorted(self.edges):
            w.writerow([a, b])
        return buf.getvalue()


def enumerate_flip_graph(disk: ConeDisk, limit: int = 100_000) -> FlipGraph:
    """Breadth-first closure of the initial triangulation under flips."""
    start = initial_triangulation(disk)
    graph = FlipGraph(disk, [start])
    seen = {start.arc_set(): 0}
    queue = deque([start])
    while queue:
        T = queue.popleft()
        here = seen[T.arc_set()]
        for k in T.slots():
            U = flip(T, k)
            key = U.arc_set()
            if key not in seen:
                if len(seen) >= limit:
                    raise ResourceLimit(f"flip graph exceeds {limit} triangulations")
                seen[key] = len(graph.triangulations)
                graph.triangulations.append(U)
                queue.append(U)
            there = seen[key]
            graph.edges.add((min(here, there), max(here, there)))
    return graph


def random_flip_walk(
    disk: ConeDisk, steps: int, rng, start: TaggedTriangulation | None = None
) -> Iterator[tuple[TaggedTriangulation, int]]:
    """Yield ``(T, k)`` pairs along a random walk of flips."""
    T = start if start is not None else initial_triangulation(disk)
    for _ in range(steps):
        k = rng.randrange(1, disk.n + 1)
        yield T, k
        T = flip(T, k)


# -- regions -----------------------------------------------------------------


def cone_points(T: TaggedTriangulation) -> list[int]:
    """Boundary points that can see the cone point, in ccw order."""
    hidden: set[int] = set()
    for a in T.arcs:
        if isinstance(a, Chord):
            hidden |= a.inside(T.n)
    return [v for v in range(T.n) if v not in hidden]


def cone_configuration(T: TaggedTriangulation) -> str:
    """``"pair"`` for two radii with one endpoint and opposite tags,
    ``"two"`` for two radii with distinct endpoints, else ``"cycle"``."""
    radii = [T.arc(s) for s in T.radius_slots()]
    if len(radii) < 2:
        raise ModelError("fewer than two radii")
    if len(radii) == 2 and radii[0].at == radii[1].at:
        return "pair"
    return "two" if len(radii) == 2 else "cycle"


def _side_lookup(T: TaggedTriangulation):
    n = T.n
    chords = {a: s for s, a in zip(T.slots(), T.arcs) if isinstance(a, Chord)}

    def side(a: int, b: int) -> Side:
        if (b - a) % n == 1:
            return Boundary(a)
        slot = chords.get(Chord(a, b))
        if slot is None:
            raise ModelError(f"missing side {a}->{b}")
        return slot

    return side


def regions(T: TaggedTriangulation) -> list[Region]:
    """Complementary regions: cone regions first, then outer triangles by slot."""
    n = T.n
    side = _side_lookup(T)
    P = cone_points(T)
    radius_at = {T.arc(s).at: s for s in T.radius_slots()}
    out: list[Region] = []
    config = cone_configuration(T)
    if config == "pair":
        if len(P) != 2:
            raise ModelError(f"radius pair sees cone points {P}")
        r1, r2 = T.radius_slots()
        u = T.arc(r1).at
        w = P[1] if P[0] == u else P[0]
        out.append(Region("between", (r1, r2)))
        out.append(Region("digon", (side(u, w), side(w, u), r1, r2)))
    else:
        ends = sorted(radius_at)
        if ends != P:
            raise ModelError(f"radius endpoints {ends} differ from cone points {P}")
        r = len(ends)
        for m in range(r):
            u, w = ends[m], ends[(m + 1) % r]
            out.append(Region("sector", (side(u, w), radius_at[w], radius_at[u])))
    for s in T.slots():
        a = T.arc(s)
        if not isinstance(a, Chord):
            continue
        hits = []
        for i in range(1, a.span(n)):
            b = (a.start + i) % n
            try:
                hits.append((side(a.start, b), side(b, a.end)))
            except ModelError:
                continue
        if len(hits) != 1:
            raise ModelError(f"chord slot {s} bounds {len(hits)} triangles")
        x, y = hits[0]
        out.append(Region("triangle", (x, y, s)))
    if len(out) != n:
        raise ModelError(f"{len(out)} regions for n={n}")
    return out


# -- serialization -----------------------------------------------------------


def arc_to_json(arc: Arc) -> dict:
    if isinstance(arc, Radius):
        return {"type": "radius", "at": arc.at, "tag": arc.tag}
    return {"type": "chord", "from": arc.start, "to": arc.end}


def arc_from_json(obj: dict) -> Arc:
    kind = obj.get("type")
    if kind == "radius":
        return Radius(int(obj["at"]), str(obj["tag"]))
    if kind == "chord":
        return Chord(int(obj["from"]), int(obj["to"]))
    raise ValueError(f"unknown arc type {kind!r}")


def triangulation_to_json(T: TaggedTriangulation) -> dict:
    return {"n": T.n, "d": T.d, "arcs": [arc_to_json(a) for a in T.arcs]}


def triangulation_from_json(obj: dict, validate: bool = True) -> TaggedTriangulation:
    disk = ConeDisk(int(obj["n"]), int(obj["d"]))
    T = TaggedTriangulation(disk, tuple(arc_from_json(a) for a in obj["arcs"]))
    if validate:
        T.validate()
    return T


def dumps_triangulation(T: TaggedTriangulation) -> str:
    return json.dumps(triangulation_to_json(T), indent=2, sort_keys=True) + "\n"


def describe(T: TaggedTriangulation) -> str:
    parts = []
    for a in T.arcs:
        if isinstance(a, Radius):
            parts.append(f"R{a.at}{'p' if a.tag == PLAIN else 'n'}")
        else:
            parts.append(f"C{a.start}-{a.end}")
    return " ".join(parts)


def parse_arcs(items: Sequence[Arc], disk: ConeDisk) -> TaggedTriangulation:
    T = TaggedTriangulation(disk, tuple(items))
    T.validate()
    return T
