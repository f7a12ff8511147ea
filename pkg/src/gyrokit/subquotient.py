"""Subgyrogroups, L-subgyrogroups, cosets and the set identities around them.

Subsets of a finite carrier are bitmasks. Set sums are always parenthesized
explicitly by the caller: ``setsum(g, A, setsum(g, B, C))`` is A + (B + C).
"""

from __future__ import annotations

import itertools
import warnings
from dataclasses import dataclass
from typing import Iterable, Iterator

from .core import LawReport, UsageError
from .finite import CayleyGyrogroup


@dataclass(frozen=True, order=True)
class Subset:
    """A subset of ``{0, ..., n-1}`` stored as a bitmask."""

    n: int
    mask: int

    def __post_init__(self):
        if self.mask < 0 or self.mask >> self.n:
            raise ValueError(f"mask {self.mask:#x} does not fit a carrier of size {self.n}")

    @classmethod
    def of(cls, n: int, elems: Iterable[int]) -> "Subset":
        m = 0
        for e in elems:
            if not 0 <= e < n:
                raise ValueError(f"element {e} outside carrier of size {n}")
            m |= 1 << e
        return cls(n, m)

    @classmethod
    def full(cls, n: int) -> "Subset":
        return cls(n, (1 << n) - 1)

    @classmethod
    def empty(cls, n: int) -> "Subset":
        return cls(n, 0)

    def __iter__(self) -> Iterator[int]:
        m = self.mask
        while m:
            low = m & -m
            yield low.bit_length() - 1
            m ^= low

    def __len__(self) -> int:
        return bin(self.mask).count("1")

    def __contains__(self, x: int) -> bool:
        return bool(self.mask >> x & 1)

    def __or__(self, other: "Subset") -> "Subset":
        return Subset(self.n, self.mask | other.mask)

    def __and__(self, other: "Subset") -> "Subset":
        return Subset(self.n, self.mask & other.mask)

    def complement(self) -> "Subset":
        return Subset(self.n, ((1 << self.n) - 1) & ~self.mask)

    def issubset(self, other: "Subset") -> bool:
        return self.mask & ~other.mask == 0

    def sorted(self) -> list[int]:
        return list(self)

    def __repr__(self) -> str:
        return "{" + ",".join(map(str, self)) + "}"


def image(perm, S: Subset) -> Subset:
    """Image of S under a permutation (or any map) given as a sequence."""
    m = 0
    for s in S:
        m |= 1 << perm[s]
    return Subset(S.n, m)


def left_translate(g: CayleyGyrogroup, x: int, S: Subset) -> Subset:
    return image(g.table[x], S)


def right_translate(g: CayleyGyrogroup, x: int, S: Subset) -> Subset:
    m = 0
    for s in S:
        m |= 1 << g.table[s][x]
    return Subset(S.n, m)


def setsum(g: CayleyGyrogroup, A: Subset, B: Subset) -> Subset:
    """A + B = {a + b : a in A, b in B}."""
    m = 0
    for a in A:
        m |= left_translate(g, a, B).mask
    return Subset(g.n, m)


def setneg(g: CayleyGyrogroup, A: Subset) -> Subset:
    return image(g.inverse, A)


# ---------------------------------------------------------------------------
# Subgyrogroups


def is_subgyrogroup(g: CayleyGyrogroup, H: Subset) -> bool:
    """Closure under negation and addition (the standard criterion)."""
    if H.mask == 0:
        raise UsageError("a subgyrogroup must be nonempty")
    return setneg(g, H).issubset(H) and setsum(g, H, H).issubset(H)


def is_gyr_invariant(g: CayleyGyrogroup, S: Subset, pairs=None) -> bool:
    """gyr[x, y](S) = S for all (x, y) in ``pairs`` (default: all of G x G)."""
    if pairs is None:
        pairs = itertools.product(range(g.n), repeat=2)
    return all(image(g.gyr_perm(x, y), S) == S for x, y in pairs)


def subgyrogroup_witness(g: CayleyGyrogroup, H: Subset) -> tuple | None:
    """An element whose negation leaves H, or a pair whose sum does; None if closed."""
    for x in H:
        if g.inverse[x] not in H:
            return (x,)
    for x in H:
        for y in H:
            if g.table[x][y] not in H:
                return (x, y)
    return None


def l_witness(g: CayleyGyrogroup, H: Subset) -> tuple[int, int] | None:
    """(a, h) with gyr[a, h](H) != H, or None."""
    for a in range(g.n):
        for h in H:
            if image(g.gyr_perm(a, h), H) != H:
                return (a, h)
    return None


def is_L_subgyrogroup(g: CayleyGyrogroup, H: Subset) -> bool:
    if not is_subgyrogroup(g, H):
        raise UsageError(f"{H} is not a subgyrogroup")
    return is_gyr_invariant(g, H, ((a, h) for a in range(g.n) for h in H))


def _closure(g: CayleyGyrogroup, S: Subset) -> Subset:
    cur = S | Subset.of(g.n, [0])
    while True:
        nxt = cur | setneg(g, cur) | setsum(g, cur, cur)
        if nxt == cur:
            return cur
        cur = nxt


def enumerate_subgyrogroups(g: CayleyGyrogroup) -> list[Subset]:
    """All subgyrogroups, sorted by size then mask.

    Closures of generated subsets: start from singletons and repeatedly
    adjoin one element to each subgyrogroup found so far.
    """
    found = {_closure(g, Subset.empty(g.n))}
    frontier = list(found)
    while frontier:
        nxt = []
        for H in frontier:
            for x in range(g.n):
                if x in H:
                    continue
                K = _closure(g, H | Subset.of(g.n, [x]))
                if K not in found:
                    found.add(K)
                    nxt.append(K)
        frontier = nxt
    return sorted(found, key=lambda s: (len(s), s.mask))


# ---------------------------------------------------------------------------
# Cosets


class NotLSubgyrogroup(UsageError):
    """Raised when cosets of H fail to partition G; carries a witness pair."""

    def __init__(self, message: str, witness: tuple[int, int] | None = None):
        super().__init__(message)
        self.witness = witness


class CosetWarning(UserWarning):
    """Cosets were computed for a subgyrogroup that is not an L-subgyrogroup."""


@dataclass(frozen=True)
class CosetSpace:
    g: CayleyGyrogroup
    H: Subset
    cosets: tuple[Subset, ...]
    index: tuple[int, ...]  # element -> coset position
    representatives: tuple[int, ...]
    is_l: bool

    def pi(self, a: int) -> int:
        return self.index[a]

    def pi_set(self, S: Subset) -> frozenset[int]:
        return frozenset(self.index[a] for a in S)

    def preimage(self, O: Iterable[int]) -> Subset:
        m = 0
        for k in O:
            m |= self.cosets[k].mask
        return Subset(self.g.n, m)

    def __len__(self) -> int:
        return len(self.cosets)

    def to_json(self) -> dict:
        return {
            "h": self.H.sorted(),
            "l_subgyrogroup": self.is_l,
            "cosets": [c.sorted() for c in self.cosets],
            "representatives": list(self.representatives),
        }


def raw_cosets(g: CayleyGyrogroup, H: Subset) -> list[Subset]:
    """a + H for every a, in element order (may repeat)."""
    return [left_translate(g, a, H) for a in range(g.n)]


def coset_space(g: CayleyGyrogroup, H: Subset) -> CosetSpace:
    """Partition of G into left cosets a + H.

    For a non-L subgyrogroup the cosets are still computed: if they happen to
    partition G a CosetWarning is issued, otherwise NotLSubgyrogroup is raised
    with two elements whose cosets overlap without being equal.
    """
    if not is_subgyrogroup(g, H):
        raise UsageError(f"{H} is not a subgyrogroup")
    is_l = is_L_subgyrogroup(g, H)
    raw = raw_cosets(g, H)
    for a, b in itertools.combinations(range(g.n), 2):
        if raw[a] != raw[b] and (raw[a] & raw[b]).mask:
            raise NotLSubgyrogroup(f"cosets of {a} and {b} overlap without being equal", (a, b))
    if not is_l:
        warnings.warn(f"{H} is not an L-subgyrogroup but its cosets partition G", CosetWarning,
                      stacklevel=2)
    cosets: list[Subset] = []
    reps: list[int] = []
    index = [0] * g.n
    for a in range(g.n):
        if raw[a] in cosets:
            continue
        cosets.append(raw[a])
        reps.append(a)
    for k, c in enumerate(cosets):
        for a in c:
            index[a] = k
    return CosetSpace(g, H, tuple(cosets), tuple(index), tuple(reps), is_l)


def check_coset_partition(cs: CosetSpace) -> list[LawReport]:
    """Partition, coset size and fiber identities for a coset space."""
    g, H = cs.g, cs.H
    size = LawReport("coset-size")
    fiber = LawReport("fiber")
    for a in range(g.n):
        aH = left_translate(g, a, H)
        size.record(len(aH) == len(H), (a,))
        fib = Subset.of(g.n, [b for b in range(g.n) if cs.pi(b) == cs.pi(a)])
        fiber.record(fib == aH, (a,))
    part = LawReport("partition")
    union = 0
    for i, c in enumerate(cs.cosets):
        for j in range(i + 1, len(cs.cosets)):
            part.record(not (c & cs.cosets[j]).mask, (cs.representatives[i], cs.representatives[j]))
        union |= c.mask
    part.record(union == (1 << g.n) - 1, ())
    return [part, size, fiber]


def verify_coset_absorption(g: CayleyGyrogroup, H: Subset) -> LawReport:
    """(a + H) + H = a + H for every a."""
    if not is_L_subgyrogroup(g, H):
        raise UsageError(f"{H} is not an L-subgyrogroup")
    rep = LawReport("coset-absorption")
    for a in range(g.n):
        aH = left_translate(g, a, H)
        rep.record(setsum(g, aH, H) == aH, (a,))
    return rep


def verify_translate_assoc(g: CayleyGyrogroup, H: Subset, evidence=None) -> LawReport:
    """(y + a) + H = y + (a + H) for all y, a.

    ``evidence`` is an admissible chain whose intersection is H (any object
    with ``members`` of gyr-invariant base sets and an ``H`` attribute), or
    None, in which case gyr[a, y](H) = H is verified directly for all a, y.
    """
    if evidence is not None:
        members = list(getattr(evidence, "members", ()))
        if not members or getattr(evidence, "H", None) != H:
            raise UsageError("chain evidence does not produce H")
        acc = Subset.full(g.n)
        for U in members:
            acc = acc & U
        if acc != H or not all(is_gyr_invariant(g, U) for U in members):
            raise UsageError("chain evidence is not an intersection of gyr-invariant sets")
    elif not is_gyr_invariant(g, H):
        raise UsageError(f"{H} is not gyr-invariant and no chain evidence was given")
    rep = LawReport("translate-assoc")
    for y in range(g.n):
        for a in range(g.n):
            lhs = left_translate(g, g.table[y][a], H)
            rhs = image(g.table[y], left_translate(g, a, H))
            rep.record(lhs == rhs, (y, a))
    return rep


def cross_complementary(g: CayleyGyrogroup, A: Subset, B: Subset) -> bool:
    if not A.mask or not B.mask:
        raise UsageError("cross-complementary sets must be nonempty")
    return setsum(g, A, B) == Subset.full(g.n)


class EquivalenceViolation(AssertionError):
    """The two sides of a finite equivalence disagreed."""


def grasp_equivalence(g: CayleyGyrogroup, H: Subset, F: Subset) -> tuple[bool, bool]:
    """(F + H = G, pi(F) = G/H); the two must agree."""
    cs = coset_space(g, H)
    lhs = cross_complementary(g, F, H)
    rhs = cs.pi_set(F) == frozenset(range(len(cs)))
    if lhs != rhs:
        raise EquivalenceViolation(f"F={F}, H={H}: F+H=G is {lhs} but pi(F)=G/H is {rhs}")
    return lhs, rhs
