"""Todd-Coxeter coset enumeration.

Two strategies are offered: HLT (relator-by-relator scan and fill, with a
lookahead pass when the table fills up) and Felsch (fill the first gap,
then chase every deduction through all relator conjugates).
"""

from __future__ import annotations

import io
import os
from collections import deque
from dataclasses import dataclass, field
from typing import Sequence

from .present import Presentation
from .words import Word

DEFAULT_CAP = 1_000_000
UNDEFINED = -1


def default_cap() -> int:
    """``ORBIPRES_MAX_COSETS`` if set, otherwise one million."""
    raw = os.environ.get("ORBIPRES_MAX_COSETS")
    if raw is None:
        return DEFAULT_CAP
    cap = int(raw)
    if cap <= 0:
        raise ValueError("ORBIPRES_MAX_COSETS must be positive")
    return cap


class CapExceeded(Exception):
    pass


@dataclass
class RunLog:
    definitions: int = 0
    deductions: int = 0
    coincidences: int = 0
    lookaheads: int = 0
    max_cosets: int = 0

    def to_json(self) -> dict:
        return dict(vars(self))


@dataclass
class CosetTable:
    """A coset table with columns ``g, g^-1`` for each generator in turn."""

    generators: tuple[str, ...]
    rows: list[list[int]]
    status: str

    @property
    def columns(self) -> list[str]:
        return [c for g in self.generators for c in (g, f"{g}^-1")]

    def column(self, g: str, e: int = 1) -> int:
        return 2 * self.generators.index(g) + (0 if e == 1 else 1)

    def act(self, coset: int, w: Word) -> int:
        for g, e in w.letters:
            coset = self.rows[coset][self.column(g, e)]
            if coset == UNDEFINED:
                return UNDEFINED
        return coset

    def is_closed(self) -> bool:
        return all(x != UNDEFINED for row in self.rows for x in row)

    def is_consistent(self, relators: Sequence[Word], subgroup: Sequence[Word] = ()) -> bool:
        if not self.is_closed():
            return False
        for a, row in enumerate(self.rows):
            for c in range(0, len(row), 2):
                if self.rows[row[c]][c + 1] != a:
                    return False
            for r in relators:
                if self.act(a, r) != a:
                    return False
        return all(self.act(0, w) == 0 for w in subgroup)

    def representatives(self) -> list[Word]:
        """Shortlex-first word taking coset 0 to each coset."""
        reps: list[Word | None] = [None] * len(self.rows)
        reps[0] = Word()
        queue = deque([0])
        cols = [(g, e) for g in self.generators for e in (1, -1)]
        while queue:
            a = queue.popleft()
            for c, (g, e) in enumerate(cols):
                b = self.rows[a][c]
                if b != UNDEFINED and reps[b] is None:
                    reps[b] = reps[a] * Word(((g, e),))
                    queue.append(b)
        return reps

    def to_csv(self) -> str:
        buf = io.StringIO()
        buf.write(",".join(["coset"] + self.columns) + "\n")
        for a, row in enumerate(self.rows):
            buf.write(",".join(str(x + 1) if x != UNDEFINED else "" for x in [a] + row) + "\n")
        return buf.getvalue()


@dataclass
class CosetResult:
    status: str
    index: int | None
    table: CosetTable
    log: RunLog = field(default_factory=RunLog)

    @property
    def complete(self) -> bool:
        return self.status == "complete"


class _Enumerator:
    def __init__(self, generators, relators, subgroup, cap):
        self.gens = tuple(generators)
        self.ncols = 2 * len(self.gens)
        colmap = {}
        for m, g in enumerate(self.gens):
            colmap[(g, 1)] = 2 * m
            colmap[(g, -1)] = 2 * m + 1
        self.rels = [[colmap[x] for x in r.cyclic_reduce().letters] for r in relators]
        self.rels = [r for r in self.rels if r]
        self.rels.sort(key=len)
        self.subgroup = [[colmap[x] for x in w.letters] for w in subgroup]
        self.cap = cap
        self.table: list[list[int]] = [[UNDEFINED] * self.ncols]
        self.parent = [0]
        self.nlive = 1
        self.deduction_stack: list[tuple[int, int]] = []
        self.record_deductions = False
        self.log = RunLog(max_cosets=1)

    # -- primitives --------------------------------------------------------

    def define(self, a: int, x: int) -> int:
        if self.nlive >= self.cap:
            raise CapExceeded
        b = len(self.table)
        self.table.append([UNDEFINED] * self.ncols)
        self.parent.append(b)
        self.table[a][x] = b
        self.table[b][x ^ 1] = a
        self.nlive += 1
        self.log.definitions += 1
        if self.nlive > self.log.max_cosets:
            self.log.max_cosets = self.nlive
        if self.record_deductions:
            self.deduction_stack.append((a, x))
        return b

    def rep(self, c: int) -> int:
        p = self.parent
        root = c
        while p[root] != root:
            root = p[root]
        while p[c] != root:
            p[c], c = root, p[c]
        return root

    def merge(self, a: int, b: int, queue: list[int]) -> None:
        a, b = self.rep(a), self.rep(b)
        if a == b:
            return
        lo, hi = (a, b) if a < b else (b, a)
        self.parent[hi] = lo
        self.nlive -= 1
        queue.append(hi)
        self.log.coincidences += 1

    def coincidence(self, a: int, b: int) -> None:
        queue: list[int] = []
        self.merge(a, b, queue)
        table = self.table
        q = 0
        while q < len(queue):
            g = queue[q]
            q += 1
            row = table[g]
            for x in range(self.ncols):
                dlt = row[x]
                if dlt == UNDEFINED:
                    continue
                table[dlt][x ^ 1] = UNDEFINED
                mu, nu = self.rep(g), self.rep(dlt)
                if table[mu][x] != UNDEFINED:
                    self.merge(nu, table[mu][x], queue)
                elif table[nu][x ^ 1] != UNDEFINED:
                    self.merge(mu, table[nu][x ^ 1], queue)
                else:
                    table[mu][x] = nu
                    table[nu][x ^ 1] = mu
                    if self.record_deductions:
                        self.deduction_stack.append((mu, x))

    def scan(self, a: int, word: list[int], fill: bool) -> None:
        """Trace ``word`` from ``a`` both ways; deduce, merge or (if ``fill``) define."""
        table = self.table
        f, b = a, a
        i, j = 0, len(word) - 1
        while True:
            while i <= j:
                nxt = table[f][word[i]]
                if nxt == UNDEFINED:
                    break
                f = nxt
                i += 1
            if i > j:
                if f != b:
                    self.coincidence(f, b)
                return
            while j >= i:
                nxt = table[b][word[j] ^ 1]
                if nxt == UNDEFINED:
                    break
                b = nxt
                j -= 1
            if j < i:
                self.coincidence(f, b)
                return
            if i == j:
                x = word[i]
                table[f][x] = b
                table[b][x ^ 1] = f
                self.log.deductions += 1
                if self.record_deductions:
                    self.deduction_stack.append((f, x))
                return
            if not fill:
                return
            self.define(f, word[i])

    def alive(self, c: int) -> bool:
        return self.parent[c] == c

    # -- strategies --------------------------------------------------------

    def run_hlt(self) -> None:
        for w in self.subgroup:
            self.scan(0, w, fill=True)
        a = 0
        while a < len(self.table):
            if self.alive(a):
                try:
                    self._hlt_row(a)
                except CapExceeded:
                    self.lookahead()
                    if self.nlive >= self.cap:
                        raise
                    old = self.rep(a)
                    a = self.compress()[old]
                    continue
            a += 1

    def _hlt_row(self, a: int) -> None:
        for r in self.rels:
            self.scan(a, r, fill=True)
            if not self.alive(a):
                return
        row = self.table[a]
        for x in range(self.ncols):
            if row[x] == UNDEFINED:
                self.define(a, x)

    def lookahead(self) -> None:
        self.log.lookaheads += 1
        for a in range(len(self.table)):
            if not self.alive(a):
                continue
            for r in self.rels:
                self.scan(a, r, fill=False)
                if not self.alive(a):
                    break

    def run_felsch(self) -> None:
        self.record_deductions = True
        by_first: list[list[list[int]]] = [[] for _ in range(self.ncols)]
        seen = set()
        for r in self.rels:
            inv = [x ^ 1 for x in reversed(r)]
            for w in (r, inv):
                for k in range(len(w)):
                    c = tuple(w[k:] + w[:k])
                    if c not in seen:
                        seen.add(c)
                        by_first[c[0]].append(list(c))
        self.by_first = by_first
        for w in self.subgroup:
            self.scan(0, w, fill=True)
            self.process_deductions()
        a, x = 0, 0
        while True:
            gap = self._first_gap(a)
            if gap is None:
                return
            a, x = gap
            self.define(a, x)
            self.process_deductions()

    def _first_gap(self, start: int):
        table = self.table
        for a in range(start, len(table)):
            if self.parent[a] != a:
                continue
            row = table[a]
            for x in range(self.ncols):
                if row[x] == UNDEFINED:
                    return a, x
        return None

    def process_deductions(self) -> None:
        stack = self.deduction_stack
        table = self.table
        while stack:
            a, x = stack.pop()
            if self.alive(a):
                for w in self.by_first[x]:
                    self.scan(a, w, fill=False)
                    if not self.alive(a):
                        break
            b = table[self.rep(a)][x]
            if b != UNDEFINED:
                b = self.rep(b)
                for w in self.by_first[x ^ 1]:
                    self.scan(b, w, fill=False)
                    if not self.alive(b):
                        break

    def compress(self) -> dict[int, int]:
        """Drop dead rows; returns the old-to-new numbering of live cosets."""
        live = [c for c in range(len(self.table)) if self.alive(c)]
        new_id = {c: m for m, c in enumerate(live)}
        if len(live) == len(self.table):
            return new_id
        table = []
        for c in live:
            table.append([new_id[self.rep(x)] if x != UNDEFINED else UNDEFINED for x in self.table[c]])
        self.table = table
        self.deduction_stack = [(new_id[self.rep(a)], x) for a, x in self.deduction_stack]
        self.parent = list(range(len(live)))
        return new_id

    def standardize(self) -> list[list[int]]:
        """Renumber live cosets in order of first appearance scanning row by row."""
        self.compress()
        order = [0]
        new_id = {0: 0}
        m = 0
        while m < len(order):
            for x in self.table[order[m]]:
                if x != UNDEFINED and x not in new_id:
                    new_id[x] = len(order)
                    order.append(x)
            m += 1
        return [[new_id.get(x, UNDEFINED) if x != UNDEFINED else UNDEFINED for x in self.table[c]] for c in order]


def todd_coxeter(
    P: Presentation,
    subgroup_gens: Sequence[Word] = (),
    cap: int | None = None,
    strategy: str = "hlt",
) -> CosetResult:
    """Enumerate the cosets of ``<subgroup_gens>`` in the group ``P`` presents.

    A run that would exceed ``cap`` live cosets stops with status ``capped``
    and no index.
    """
    if cap is None:
        cap = default_cap()
    if cap <= 0:
        raise ValueError("cap must be positive")
    for w in subgroup_gens:
        extra = w.generators() - set(P.generators)
        if extra:
            raise ValueError(f"subgroup word uses unknown generators {sorted(extra)}")
    en = _Enumerator(P.generators, P.relators, subgroup_gens, cap)
    try:
        if strategy == "hlt":
            en.run_hlt()
        elif strategy == "felsch":
            en.run_felsch()
        else:
            raise ValueError(f"unknown strategy {strategy!r}")
    except CapExceeded:
        en.compress()
        table = CosetTable(tuple(P.generators), en.table, "capped")
        return CosetResult("capped", None, table, en.log)
    rows = en.standardize()
    table = CosetTable(tuple(P.generators), rows, "complete")
    return CosetResult("complete", len(rows), table, en.log)


def group_order(P: Presentation, cap: int | None = None, strategy: str = "hlt") -> int | None:
    return todd_coxeter(P, (), cap, strategy).index
