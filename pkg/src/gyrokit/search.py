"""Exhaustive search for small gyrogroups.

Tables are built row by row, each row being a left translation
``L_x = (z -> x + z)``. Pruning used at every node:

* ``L_{-x} = L_x^{-1}`` (left cancellation), so rows come in inverse pairs
  and the inverse map is an involution fixed before the search starts;
* every column is a permutation (Latin columns);
* left Bol: ``L_x L_y L_x = L_{x + (y + x)}``, which forces whole rows;
* every gyration ``L_{x+y}^{-1} L_x L_y`` computable from known rows must
  commute with known translations the way an automorphism does, and must
  satisfy ``gyr[x+y, y] = gyr[x, y]``.

All of these are consequences of the axioms, and each completed table is
still passed through :func:`gyrokit.finite.from_table` before it is emitted.
"""

from __future__ import annotations

import os
from dataclasses import dataclass
from typing import Iterator

from .core import UsageError
from .finite import CayleyGyrogroup, canonical_form, from_table

DEFAULT_CEILING = 8

Perm = tuple[int, ...]


def order_ceiling() -> int:
    env = os.environ.get("GYROKIT_CEILING")
    return int(env) if env else DEFAULT_CEILING


@dataclass(frozen=True)
class SearchOptions:
    order: int
    isomorph_rejection: bool = True
    non_groups_only: bool = False
    cap: int | None = None
    partition: int = 0
    partitions: int = 1
    bol_propagation: bool = True

    def __post_init__(self):
        if self.order < 1:
            raise UsageError("order must be at least 1")
        if self.cap is not None and self.cap < 1:
            raise UsageError("cap must be at least 1")
        if self.partitions < 1 or not 0 <= self.partition < self.partitions:
            raise UsageError("partition id must lie in [0, partitions)")


def inverse_maps(n: int, all_labelings: bool) -> list[Perm]:
    """Candidate inverse maps (involutions of 0..n-1 fixing 0).

    With ``all_labelings`` every involution is returned; otherwise one
    representative per conjugacy class: 1..k self-inverse, then pairs.
    """
    if n == 1:
        return [(0,)]
    if not all_labelings:
        out = []
        for k in range(n - 1, -1, -1):
            if (n - 1 - k) % 2:
                continue
            inv = list(range(n))
            for a in range(k + 1, n, 2):
                inv[a], inv[a + 1] = a + 1, a
            out.append(tuple(inv))
        return out

    out = []

    def rec(inv: list[int], free: list[int]):
        if not free:
            out.append(tuple(inv))
            return
        a, rest = free[0], free[1:]
        rec(inv, rest)
        for i, b in enumerate(rest):
            inv[a], inv[b] = b, a
            rec(inv, rest[:i] + rest[i + 1:])
            inv[a], inv[b] = a, b

    rec(list(range(n)), list(range(1, n)))
    return sorted(out)


class _Contradiction(Exception):
    pass


class _State:
    __slots__ = ("n", "inv", "rows", "cols", "bol", "known")

    def __init__(self, n: int, inv: Perm, bol: bool):
        self.n = n
        self.inv = inv
        self.rows: list[Perm | None] = [None] * n
        self.cols = [0] * n  # bitmask of values already placed in each column
        self.bol = bol
        self.known: list[int] = []

    def copy(self) -> "_State":
        s = _State.__new__(_State)
        s.n, s.inv, s.bol = self.n, self.inv, self.bol
        s.rows = list(self.rows)
        s.cols = list(self.cols)
        s.known = list(self.known)
        return s

    def _put(self, x: int, p: Perm, queue: list[int]) -> None:
        cur = self.rows[x]
        if cur is not None:
            if cur != p:
                raise _Contradiction
            return
        if p[0] != x or p[self.inv[x]] != 0:
            raise _Contradiction
        cols = self.cols
        for y in range(self.n):
            if cols[y] >> p[y] & 1:
                raise _Contradiction
        for y in range(self.n):
            cols[y] |= 1 << p[y]
        self.rows[x] = p
        self.known.append(x)
        queue.append(x)

    def assign(self, x: int, p: Perm) -> None:
        """Set row x (and its inverse row), then propagate to a fixpoint."""
        queue: list[int] = []
        self._pair(x, p, queue)
        if self.bol:
            self._propagate(queue)
        self._check_gyrations()

    def _pair(self, x: int, p: Perm, queue: list[int]) -> None:
        q = [0] * self.n
        for i, v in enumerate(p):
            q[v] = i
        self._put(x, p, queue)
        self._put(self.inv[x], tuple(q), queue)

    def _propagate(self, queue: list[int]) -> None:
        rows = self.rows
        n = self.n
        while queue:
            a = queue.pop()
            La = rows[a]
            for b in list(self.known):
                Lb = rows[b]
                for (x, Lx, Ly) in ((a, La, Lb), (b, Lb, La)):
                    comp = tuple(Lx[Ly[Lx[z]]] for z in range(n))
                    self._pair(comp[0], comp, queue)

    def _check_gyrations(self) -> None:
        rows, inv, n = self.rows, self.inv, self.n
        known = sorted(self.known)
        for x in known:
            Lx = rows[x]
            for y in known:
                Ly = rows[y]
                c = Lx[y]
                Lc = rows[c]
                if Lc is None:
                    continue
                back = [0] * n
                for i, v in enumerate(Lc):
                    back[v] = i
                g = [back[Lx[Ly[z]]] for z in range(n)]
                for u in range(n):
                    if g[inv[u]] != inv[g[u]]:
                        raise _Contradiction
                for u in known:
                    Lgu = rows[g[u]]
                    if Lgu is None:
                        continue
                    Lu = rows[u]
                    for z in range(n):
                        if g[Lu[z]] != Lgu[g[z]]:
                            raise _Contradiction
                # gyr[x+y, y] = gyr[x, y]
                d = Lc[y]
                Ld = rows[d]
                if Ld is not None:
                    for z in range(n):
                        if Ld[g[z]] != Lc[Ly[z]]:
                            raise _Contradiction

    def candidates(self, x: int) -> Iterator[Perm]:
        """Permutations for row x consistent with the column masks."""
        n, cols, ix = self.n, self.cols, self.inv[x]
        p = [-1] * n
        p[0] = x
        p[ix] = 0
        if cols[ix] & 1:
            return
        used = 1 | (1 << x)
        if ix == x:
            # self-inverse: the row is an involution
            yield from self._involutions(p, used)
            return
        free = [y for y in range(1, n) if y != ix]

        def rec(i: int, used: int):
            if i == len(free):
                yield tuple(p)
                return
            y = free[i]
            avail = ~(used | cols[y]) & ((1 << n) - 1)
            while avail:
                low = avail & -avail
                v = low.bit_length() - 1
                p[y] = v
                yield from rec(i + 1, used | low)
                avail ^= low
            p[y] = -1

        yield from rec(0, used)

    def _involutions(self, p: list[int], used: int) -> Iterator[Perm]:
        n, cols = self.n, self.cols

        def rec():
            try:
                y = p.index(-1)
            except ValueError:
                yield tuple(p)
                return
            for v in range(y, n):
                if p[v] != -1 and v != y:
                    continue
                if cols[y] >> v & 1 or cols[v] >> y & 1:
                    continue
                p[y], p[v] = v, y
                yield from rec()
                p[y] = p[v] = -1

        yield from rec()

    def next_row(self) -> int | None:
        for x in range(self.n):
            if self.rows[x] is None:
                return x
        return None


def _root(n: int, inv: Perm, bol: bool) -> _State | None:
    s = _State(n, inv, bol)
    try:
        s.assign(0, tuple(range(n)))
    except _Contradiction:
        return None
    return s


def _complete(state: _State) -> Iterator[tuple[Perm, ...]]:
    x = state.next_row()
    if x is None:
        yield tuple(state.rows)  # type: ignore[arg-type]
        return
    for p in list(state.candidates(x)):
        child = state.copy()
        try:
            child.assign(x, p)
        except _Contradiction:
            continue
        yield from _complete(child)


def _branches(opts: SearchOptions) -> Iterator[_State]:
    """Top-level branches in a fixed order: inverse map, then the first free row."""
    n = opts.order
    for inv in inverse_maps(n, not opts.isomorph_rejection):
        root = _root(n, inv, opts.bol_propagation)
        if root is None:
            continue
        x = root.next_row()
        if x is None:
            yield root
            continue
        for p in list(root.candidates(x)):
            child = root.copy()
            try:
                child.assign(x, p)
            except _Contradiction:
                continue
            yield child


def raw_tables(opts: SearchOptions) -> Iterator[tuple[Perm, ...]]:
    """Every table reached by the search in this partition (not deduplicated)."""
    for i, branch in enumerate(_branches(opts)):
        if i % opts.partitions != opts.partition:
            continue
        yield from _complete(branch)


def search(opts: SearchOptions) -> Iterator[CayleyGyrogroup]:
    """Yield gyrogroups of order ``opts.order``.

    With isomorph rejection, one table per isomorphism class is emitted in
    canonical form; otherwise every labeled table (identity at 0) is emitted.
    Each result has passed full validation.
    """
    ceiling = order_ceiling()
    if opts.order > ceiling:
        raise UsageError(f"order {opts.order} exceeds the search ceiling {ceiling} "
                         "(set GYROKIT_CEILING to raise it)")
    seen: set = set()
    emitted = 0
    for rows in raw_tables(opts):
        table = rows
        if opts.isomorph_rejection:
            table = canonical_form(rows)
            if table in seen:
                continue
            seen.add(table)
        g = from_table(table)
        if opts.non_groups_only and g.is_group():
            continue
        yield g
        emitted += 1
        if opts.cap is not None and emitted >= opts.cap:
            return


def search_all(opts: SearchOptions, jobs: int = 1) -> list[CayleyGyrogroup]:
    """Run ``search`` over ``jobs`` prefix partitions and merge.

    The merged list is sorted by table, so the result does not depend on the
    number of jobs or the order in which workers finish. The cap is applied
    after merging.
    """
    parts = [SearchOptions(opts.order, opts.isomorph_rejection, opts.non_groups_only, None,
                           i, jobs, opts.bol_propagation) for i in range(jobs)]
    if jobs == 1:
        chunks = [[g.table for g in search(parts[0])]]
    else:
        from concurrent.futures import ProcessPoolExecutor

        with ProcessPoolExecutor(jobs) as ex:
            chunks = list(ex.map(_run_part, parts))
    merged: dict = {}
    for chunk in chunks:
        for t in chunk:
            key = canonical_form(t) if opts.isomorph_rejection else t
            merged.setdefault(key, key)
    out = [from_table(t) for t in sorted(merged)]
    if opts.cap is not None:
        out = out[:opts.cap]
    return out


def _run_part(opts: SearchOptions) -> list:
    return [g.table for g in search(opts)]
