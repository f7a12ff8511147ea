"""Finite gyrogroups given by Cayley tables.

Elements are the indices ``0..n-1`` with the identity normalized to 0.
"""

from __future__ import annotations

import itertools
import json
from functools import cached_property
from pathlib import Path
from typing import Sequence

import numpy as np

from .core import DomainError, Exhaustive, GyroError, GyrogroupModel, LawReport, check_axioms

Perm = tuple[int, ...]


class InvalidTable(GyroError):
    """A table failed gyrogroup validation.

    ``axiom`` names the first failed requirement and ``counterexample`` holds
    the offending elements (indices of the table as given, after identity
    normalization).
    """

    def __init__(self, axiom: str, message: str, counterexample: tuple | None = None,
                 reports: list[LawReport] | None = None):
        super().__init__(f"{axiom}: {message}")
        self.axiom = axiom
        self.counterexample = counterexample
        self.reports = reports or []


class CayleyGyrogroup(GyrogroupModel):
    """A validated finite gyrogroup.

    Construct through :func:`from_table`; the constructor itself only checks
    shape and entry range so that broken tables can still be fed to the law
    suites.
    """

    def __init__(self, table, labels: Sequence[str] | None = None):
        try:
            arr = np.asarray(table, dtype=np.int64)
        except (TypeError, ValueError) as e:
            raise InvalidTable("shape", f"not an integer matrix: {e}") from None
        if arr.ndim != 2 or arr.shape[0] != arr.shape[1] or arr.shape[0] == 0:
            raise InvalidTable("shape", f"expected a non-empty square matrix, got shape {arr.shape}")
        n = arr.shape[0]
        if arr.min() < 0 or arr.max() >= n:
            raise InvalidTable("range", f"table entries must lie in [0, {n})")
        self.n = n
        self.table: tuple[tuple[int, ...], ...] = tuple(tuple(int(v) for v in row) for row in arr)
        self.labels = list(labels) if labels is not None else None
        self.zero = 0
        self._gyr: dict[tuple[int, int], Perm] = {}

    # GyrogroupModel -------------------------------------------------------

    def elements(self) -> range:
        return range(self.n)

    def check_element(self, x) -> None:
        if not (isinstance(x, (int, np.integer)) and 0 <= x < self.n):
            raise DomainError(f"{x!r} is not an element of a gyrogroup of order {self.n}")

    def add(self, x: int, y: int) -> int:
        return self.table[x][y]

    def neg(self, x: int) -> int:
        return self.inverse[x]

    def gyr(self, x: int, y: int, z: int) -> int:
        return self.gyr_perm(x, y)[z]

    # ----------------------------------------------------------------------

    @cached_property
    def inverse(self) -> tuple[int, ...]:
        """x -> its two-sided inverse.

        Broken tables still get a best-effort value (a left inverse, else 0)
        so the law suites can report on them; see ``missing_inverses``.
        """
        inv = []
        for x in range(self.n):
            cands = [y for y in range(self.n) if self.table[x][y] == 0 and self.table[y][x] == 0]
            if len(cands) != 1:
                cands = [y for y in range(self.n) if self.table[y][x] == 0] or [0]
            inv.append(cands[0])
        return tuple(inv)

    def missing_inverses(self) -> list[int]:
        t = self.table
        return [x for x in range(self.n)
                if sum(1 for y in range(self.n) if t[x][y] == 0 and t[y][x] == 0) != 1]

    def gyr_perm(self, x: int, y: int) -> Perm:
        key = (x, y)
        p = self._gyr.get(key)
        if p is None:
            t, inv = self.table, self.inverse
            left = t[inv[t[x][y]]]
            row_x, row_y = t[x], t[y]
            p = tuple(left[row_x[row_y[z]]] for z in range(self.n))
            self._gyr[key] = p
        return p

    def is_group(self) -> bool:
        return is_associative(self.table)

    def nontrivial_gyrations(self) -> list[tuple[int, int]]:
        ident = tuple(range(self.n))
        return [(x, y) for x in range(self.n) for y in range(self.n)
                if self.gyr_perm(x, y) != ident]

    def to_json(self) -> dict:
        d = {"order": self.n, "table": [list(r) for r in self.table]}
        if self.labels is not None:
            d["labels"] = list(self.labels)
        return d

    def __eq__(self, other) -> bool:
        return isinstance(other, CayleyGyrogroup) and self.table == other.table

    def __hash__(self) -> int:
        return hash(self.table)

    def __repr__(self) -> str:
        return f"CayleyGyrogroup(order={self.n})"


def is_associative(table) -> bool:
    t = np.asarray(table)
    # (x+y)+z vs x+(y+z) for all triples at once
    return bool(np.array_equal(t[t, :], t[:, t]))


def _identity_index(t: np.ndarray) -> int | None:
    n = t.shape[0]
    ar = np.arange(n)
    for e in range(n):
        if np.array_equal(t[e], ar) and np.array_equal(t[:, e], ar):
            return e
    return None


def relabel(table, perm: Sequence[int]) -> np.ndarray:
    """Table of the same operation after renaming element i to perm[i]."""
    t = np.asarray(table, dtype=np.int64)
    p = np.asarray(perm, dtype=np.int64)
    inv = np.argsort(p)
    return p[t[np.ix_(inv, inv)]]


def from_table(matrix, labels: Sequence[str] | None = None) -> CayleyGyrogroup:
    """Validate ``matrix`` as a gyrogroup table.

    If the identity sits at some index e != 0, elements 0 and e are swapped
    (labels follow). Raises InvalidTable naming the failed axiom.
    """
    probe = CayleyGyrogroup(matrix)  # shape and range checks
    t = np.asarray(probe.table, dtype=np.int64)
    n = probe.n
    if labels is not None and len(labels) != n:
        raise InvalidTable("labels", f"{len(labels)} labels for order {n}")
    e = _identity_index(t)
    if e is None:
        raise InvalidTable("G1", "no two-sided identity element")
    if e != 0:
        perm = list(range(n))
        perm[0], perm[e] = e, 0
        t = relabel(t, perm)
        if labels is not None:
            labels = list(labels)
            labels[0], labels[e] = labels[e], labels[0]
    g = CayleyGyrogroup(t, labels)
    missing = g.missing_inverses()
    if missing:
        raise InvalidTable("G2", f"element {missing[0]} has no unique two-sided inverse",
                           (missing[0],))
    reports = check_axioms(g, Exhaustive())
    for r in reports:
        if not r.passed:
            raise InvalidTable(r.law, f"{r.failures} failing cases", r.counterexample, reports)
    g.reports = reports
    return g


def gyr_perm(g: CayleyGyrogroup, x: int, y: int) -> Perm:
    return g.gyr_perm(x, y)


def is_group(g: CayleyGyrogroup) -> bool:
    return g.is_group()


# ---------------------------------------------------------------------------
# Isomorphism


_PERM_CACHE: dict[int, tuple[np.ndarray, np.ndarray]] = {}


def _perms_fixing_zero(n: int) -> tuple[np.ndarray, np.ndarray]:
    if n not in _PERM_CACHE:
        tails = np.array(list(itertools.permutations(range(1, n))), dtype=np.int64).reshape(-1, n - 1)
        perms = np.hstack([np.zeros((len(tails), 1), dtype=np.int64), tails])
        _PERM_CACHE[n] = (perms, np.argsort(perms, axis=1))
    return _PERM_CACHE[n]


def canonical_form(g) -> tuple[tuple[int, ...], ...]:
    """Lexicographically least relabeled table over relabelings fixing 0."""
    t = np.asarray(g.table if isinstance(g, CayleyGyrogroup) else g, dtype=np.int64)
    n = t.shape[0]
    if n == 1:
        return ((0,),)
    perms, invs = _perms_fixing_zero(n)
    best = None
    # chunk to keep memory flat at n = 8 (5040 x 64)
    for lo in range(0, len(perms), 4096):
        p, q = perms[lo:lo + 4096], invs[lo:lo + 4096]
        # relabeled[k][i][j] = p[k][ t[q[k][i]][q[k][j]] ]
        rows = t[q[:, :, None], q[:, None, :]]
        cand = np.take_along_axis(p, rows.reshape(len(p), -1), axis=1)
        order = np.lexsort(cand.T[::-1])
        top = cand[order[0]]
        if best is None or tuple(top) < tuple(best):
            best = top
    return tuple(tuple(int(v) for v in best[i * n:(i + 1) * n]) for i in range(n))


def is_isomorphic(g1, g2) -> bool:
    t1 = g1.table if isinstance(g1, CayleyGyrogroup) else g1
    t2 = g2.table if isinstance(g2, CayleyGyrogroup) else g2
    if len(t1) != len(t2):
        return False
    return canonical_form(t1) == canonical_form(t2)


# ---------------------------------------------------------------------------
# JSON I/O


def load_table(path: str | Path) -> CayleyGyrogroup:
    """Read ``{"order": n, "table": [...], "labels": [...]}`` and validate it."""
    data = json.loads(Path(path).read_text())
    return table_from_json(data)


def table_from_json(data: dict) -> CayleyGyrogroup:
    if not isinstance(data, dict) or "table" not in data:
        raise ValueError("table JSON must be an object with a 'table' key")
    table = data["table"]
    if "order" in data and data["order"] != len(table):
        raise ValueError(f"order {data['order']} does not match a table with {len(table)} rows")
    return from_table(table, data.get("labels"))


def dump_table(g: CayleyGyrogroup) -> str:
    return json.dumps(g.to_json(), sort_keys=True)


def cyclic(n: int) -> CayleyGyrogroup:
    return from_table([[(i + j) % n for j in range(n)] for i in range(n)])
