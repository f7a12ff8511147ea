"""Finite topological models of strongly topological gyrogroups.

A model is a finite gyrogroup together with a neighborhood base at 0 whose
members are symmetric and invariant under every gyration. Open sets are the
unions of translates ``x + U``.

Non-associativity makes parenthesization matter, so every set sum below is
spelled out: the cube condition for star refinement is ``(V + V) + V`` and the
admissibility condition for chains is ``U + (U + U)``.
"""

from __future__ import annotations

import itertools
import json
from dataclasses import dataclass, field
from functools import cached_property
from pathlib import Path
from typing import Iterable, Sequence

from .core import GyroError, LawReport, UsageError
from .finite import CayleyGyrogroup, load_table, table_from_json
from .subquotient import (
    CosetSpace,
    Subset,
    coset_space,
    image,
    is_L_subgyrogroup,
    is_subgyrogroup,
    left_translate,
    setneg,
    setsum,
)

MATERIALIZE_LIMIT = 12


class InvalidModel(GyroError):
    """A base or model failed validation. ``witness`` names the culprit."""

    def __init__(self, reason: str, witness: tuple = ()):
        super().__init__(f"{reason}: witness {witness}")
        self.reason = reason
        self.witness = witness


class NotCubeClosed(GyroError):
    """No base member V1 satisfies (V1 + V1) + V1 within V."""

    def __init__(self, V: Subset):
        super().__init__(f"no base member V1 with (V1+V1)+V1 inside {V}")
        self.V = V


class ChainStuck(GyroError):
    pass


def _base_key(U: Subset):
    return (-len(U), U.mask)


def validate_base(g: CayleyGyrogroup, base: Sequence[Subset]) -> tuple[Subset, ...]:
    """Check the neighborhood-base invariants; return members sorted largest first."""
    if not base:
        raise InvalidModel("empty base")
    members = tuple(sorted(set(base), key=_base_key))
    for U in members:
        if U.n != g.n:
            raise InvalidModel("carrier mismatch", (U,))
        if 0 not in U:
            raise InvalidModel("member misses the identity", (U,))
        if setneg(g, U) != U:
            bad = next(u for u in U if g.inverse[u] not in U)
            raise InvalidModel("member is not symmetric", (U, bad))
        for x, y in itertools.product(range(g.n), repeat=2):
            if image(g.gyr_perm(x, y), U) != U:
                raise InvalidModel("member is not gyr-invariant", (U, x, y))
    for U, V in itertools.combinations(members, 2):
        if not any(W.issubset(U & V) for W in members):
            raise InvalidModel("not a filter base", (U, V))
    return members


@dataclass(frozen=True)
class Cover:
    members: tuple[Subset, ...]

    def __post_init__(self):
        if not self.members:
            raise ValueError("a cover needs at least one member")
        n = self.members[0].n
        union = 0
        for m in self.members:
            union |= m.mask
        if union != (1 << n) - 1:
            raise ValueError("members do not cover the carrier")

    @classmethod
    def of(cls, sets: Iterable[Subset]) -> "Cover":
        return cls(tuple(sorted(set(sets))))

    def __iter__(self):
        return iter(self.members)

    def __len__(self) -> int:
        return len(self.members)


class FiniteTopoGyro:
    """Gyrogroup plus validated neighborhood base; opens are translate unions."""

    def __init__(self, g: CayleyGyrogroup, base: tuple[Subset, ...]):
        self.g = g
        self.base = base
        self.n = g.n
        self.translates = tuple(sorted({left_translate(g, x, U) for x in range(g.n) for U in base}))

    def interior(self, S: Subset) -> Subset:
        m = 0
        for T in self.translates:
            if T.issubset(S):
                m |= T.mask
        return Subset(self.n, m)

    def is_open(self, S: Subset) -> bool:
        return self.interior(S) == S

    def is_closed(self, S: Subset) -> bool:
        return self.is_open(S.complement())

    def closure(self, S: Subset) -> Subset:
        return self.interior(S.complement()).complement()

    @cached_property
    def opens(self) -> tuple[Subset, ...]:
        """Every open set, sorted by mask (only for small carriers)."""
        if self.n > MATERIALIZE_LIMIT:
            raise UsageError(f"open family is only materialized for n <= {MATERIALIZE_LIMIT}")
        fam = {0}
        for T in self.translates:
            fam |= {o | T.mask for o in fam}
        return tuple(Subset(self.n, m) for m in sorted(fam))

    def nbhd_base_at(self, x: int) -> list[Subset]:
        return [left_translate(self.g, x, U) for U in self.base]

    def to_json(self) -> dict:
        return {"table": [list(r) for r in self.g.table],
                "base": [U.sorted() for U in self.base]}


def _check_topology(model: FiniteTopoGyro) -> None:
    for A, B in itertools.combinations(model.translates, 2):
        if not model.is_open(A & B):
            raise InvalidModel("translates do not generate a topology", (A, B))


def build_model(g: CayleyGyrogroup, base: Iterable) -> FiniteTopoGyro:
    """Validate ``base`` and return the model; continuity is verified too."""
    members = [b if isinstance(b, Subset) else Subset.of(g.n, b) for b in base]
    model = FiniteTopoGyro(g, validate_base(g, members))
    _check_topology(model)
    for rep in check_continuity(model):
        if not rep.passed:
            raise InvalidModel(f"{rep.law} fails", rep.counterexample)
    return model


def check_continuity(model: FiniteTopoGyro) -> list[LawReport]:
    """Joint continuity of + and continuity of negation, basic-set form."""
    g, base = model.g, model.base
    add = LawReport("add-continuous")
    for x, y in itertools.product(range(g.n), repeat=2):
        xU = [left_translate(g, x, U) for U in base]
        yV = [left_translate(g, y, V) for V in base]
        for W in base:
            target = left_translate(g, g.table[x][y], W)
            ok = any(setsum(g, A, B).issubset(target) for A in xU for B in yV)
            add.record(ok, (x, y, W.sorted()))
    neg = LawReport("neg-continuous")
    for x in range(g.n):
        for W in base:
            target = left_translate(g, g.inverse[x], W)
            ok = any(setneg(g, left_translate(g, x, U)).issubset(target) for U in base)
            neg.record(ok, (x, W.sorted()))
    return [add, neg]


def closure(model: FiniteTopoGyro, S: Subset) -> Subset:
    return model.closure(S)


def interior(model: FiniteTopoGyro, S: Subset) -> Subset:
    return model.interior(S)


# ---------------------------------------------------------------------------
# Covers and star refinement


def _require_member(model: FiniteTopoGyro, V: Subset) -> None:
    if V not in model.base:
        raise UsageError(f"{V} is not a member of the neighborhood base")


def cover_Cl(model: FiniteTopoGyro, V: Subset) -> Cover:
    """The cover {x + V : x in G}, deduplicated."""
    _require_member(model, V)
    return Cover.of(left_translate(model.g, x, V) for x in range(model.n))


def refines(c1: Cover, c2: Cover) -> bool:
    return all(any(A.issubset(B) for B in c2) for A in c1)


def star(A: Subset, c: Cover) -> Subset:
    m = 0
    for C in c:
        if C.mask & A.mask:
            m |= C.mask
    return Subset(A.n, m)


def star_refines(c1: Cover, c2: Cover) -> bool:
    return refines(Cover.of(star(C, c1) for C in c1), c2)


def cube_closed_within(g: CayleyGyrogroup, V1: Subset, V: Subset) -> bool:
    return setsum(g, setsum(g, V1, V1), V1).issubset(V)


def find_star_refiner(model: FiniteTopoGyro, V: Subset) -> tuple[Subset, list[LawReport]]:
    """Largest base member V1 with (V1 + V1) + V1 inside V, plus its checks.

    The second report checks st(x + V1, C_l(V1)) inside x + V for every x.
    """
    _require_member(model, V)
    g = model.g
    V1 = next((U for U in model.base if cube_closed_within(g, U, V)), None)
    if V1 is None:
        raise NotCubeClosed(V)
    cube = LawReport("cube-inclusion")
    cube.record(True, (V1.sorted(), V.sorted()))
    inclusion = LawReport("star-inclusion")
    cov = cover_Cl(model, V1)
    for x in range(g.n):
        inclusion.record(star(left_translate(g, x, V1), cov).issubset(left_translate(g, x, V)),
                     (x, V1.sorted(), V.sorted()))
    return V1, [cube, inclusion]


def verify_overlap_step(model: FiniteTopoGyro) -> LawReport:
    """(x + V1) meets (x1 + V1)  implies  x1 in x + (V1 + V1), for all V1 in the base."""
    g = model.g
    rep = LawReport("overlap-step")
    for V1 in model.base:
        VV = setsum(g, V1, V1)
        tr = [left_translate(g, x, V1) for x in range(g.n)]
        for x, x1 in itertools.product(range(g.n), repeat=2):
            if tr[x].mask & tr[x1].mask:
                rep.record(x1 in left_translate(g, x, VV), (x, x1, V1.sorted()))
    return rep


def _intersection(sets: Iterable[Subset], n: int) -> Subset:
    acc = Subset.full(n)
    for s in sets:
        acc = acc & s
    return acc


def verify_UC(model: FiniteTopoGyro) -> list[LawReport]:
    """Uniform-cover properties of the family generated by the covers C_l(V)."""
    g, base = model.g, model.base
    uc1 = LawReport("UC1", note="holds by definition of the generated family")

    uc2 = LawReport("UC2")
    for V1, V2 in itertools.combinations_with_replacement(base, 2):
        c1, c2 = cover_Cl(model, V1), cover_Cl(model, V2)
        ok = any(refines(cover_Cl(model, V), c1) and refines(cover_Cl(model, V), c2) for V in base)
        uc2.record(ok, (V1.sorted(), V2.sorted()))

    uc3 = LawReport("UC3")
    for V in base:
        try:
            V1, reps = find_star_refiner(model, V)
        except NotCubeClosed:
            uc3.record(False, (V.sorted(),))
            continue
        ok = all(r.passed for r in reps) and star_refines(cover_Cl(model, V1), cover_Cl(model, V))
        uc3.record(ok, (V.sorted(),))

    zero = Subset.of(g.n, [0])
    if _intersection(base, g.n) != zero:
        uc4 = LawReport("UC4", applicable=False,
                        note="base does not separate points (intersection is not {0})")
    else:
        uc4 = LawReport("UC4")
        for x, y in itertools.permutations(range(g.n), 2):
            d = g.table[g.inverse[x]][y]
            sep = any(d not in V for V in base)
            covers_apart = any(
                not any(x in C and y in C for C in cover_Cl(model, V1)) for V1 in base)
            uc4.record(sep and covers_apart, (x, y))
    return [uc1, uc2, uc3, uc4]


# ---------------------------------------------------------------------------
# Admissible chains


@dataclass(frozen=True)
class AdmissibleChain:
    """U_0 > U_1 > ... > U_s, constant from index s on; H is the last member."""

    members: tuple[Subset, ...]
    stabilization: int
    H: Subset = field(init=False)

    def __post_init__(self):
        object.__setattr__(self, "H", _intersection(self.members, self.members[0].n))

    def to_json(self) -> dict:
        return {"members": [U.sorted() for U in self.members],
                "stabilization": self.stabilization, "h": self.H.sorted()}


def admissible_chain(model: FiniteTopoGyro, start: Subset) -> AdmissibleChain:
    """Greedy chain from ``start``: each next member is the largest base set U
    with U + (U + U) inside the current one, until the chain repeats."""
    _require_member(model, start)
    g = model.g
    members = [start]
    while True:
        cur = members[-1]
        nxt = next((U for U in model.base if setsum(g, U, setsum(g, U, U)).issubset(cur)), None)
        if nxt is None:
            raise ChainStuck(f"no base member U with U+(U+U) inside {cur}")
        if nxt == cur:
            return AdmissibleChain(tuple(members), len(members) - 1)
        members.append(nxt)


def check_chain_subgyrogroup(model: FiniteTopoGyro, chain: AdmissibleChain) -> list[LawReport]:
    """H from an admissible chain is a closed L-subgyrogroup; linkwise
    closure(U') inside U' + U' inside U' + (U' + U') inside U."""
    g, H = model.g, chain.H
    links = LawReport("admissible-link")
    incl = LawReport("closure-inclusion")
    seq = list(chain.members) + [chain.members[-1]]
    for k in range(len(seq) - 1):
        U, U1 = seq[k], seq[k + 1]
        UU = setsum(g, U1, U1)
        UUU = setsum(g, U1, UU)
        links.record(UUU.issubset(U), (k,))
        incl.record(model.closure(U1).issubset(UU) and UU.issubset(UUU), (k,))
    sub = LawReport("H-subgyrogroup")
    sub.record(is_subgyrogroup(g, H), (H.sorted(),))
    closed = LawReport("H-closed")
    closed.record(model.closure(H) == H, (H.sorted(),))
    lsub = LawReport("H-L-subgyrogroup")
    lsub.record(sub.passed and is_L_subgyrogroup(g, H), (H.sorted(),))
    return [links, incl, sub, closed, lsub]


# ---------------------------------------------------------------------------
# Quotient


@dataclass(frozen=True)
class QuotientTopology:
    cosets: CosetSpace
    opens: tuple[frozenset[int], ...]

    def points(self) -> int:
        return len(self.cosets)


def _family_is_topology(opens: Iterable[frozenset], points: int) -> LawReport:
    fam = set(opens)
    rep = LawReport("quotient-topology")
    rep.record(frozenset() in fam and frozenset(range(points)) in fam, ())
    for A, B in itertools.combinations(sorted(fam, key=sorted), 2):
        rep.record(A | B in fam and A & B in fam, (sorted(A), sorted(B)))
    return rep


def quotient_topology(model: FiniteTopoGyro, H: Subset) -> QuotientTopology:
    """Opens O of G/H are those with an open preimage."""
    if not is_L_subgyrogroup(model.g, H):
        raise UsageError(f"{H} is not an L-subgyrogroup")
    cs = coset_space(model.g, H)
    k = len(cs)
    opens = []
    for m in range(1 << k):
        O = frozenset(i for i in range(k) if m >> i & 1)
        if model.is_open(cs.preimage(O)):
            opens.append(O)
    return QuotientTopology(cs, tuple(opens))


def verify_pi_open(model: FiniteTopoGyro, H: Subset) -> list[LawReport]:
    q = quotient_topology(model, H)
    cs, fam = q.cosets, set(q.opens)
    topo = _family_is_topology(q.opens, len(cs))
    openness = LawReport("pi-open")
    for O in model.opens:
        openness.record(cs.pi_set(O) in fam, (O.sorted(),))
    cont = LawReport("pi-continuous")
    for O in q.opens:
        cont.record(model.is_open(cs.preimage(O)), (sorted(O),))
    return [topo, openness, cont]


def is_zero_dimensional(opens: Sequence[frozenset], points: int) -> bool:
    """Every open set is a union of clopen sets."""
    fam = set(opens)
    everything = frozenset(range(points))
    clopen = [O for O in fam if everything - O in fam]
    for O in fam:
        cover = frozenset().union(*[C for C in clopen if C <= O])
        if cover != O:
            return False
    return True


def zero_dimensional_transfer(model: FiniteTopoGyro, H: Subset) -> LawReport:
    g_opens = [frozenset(O) for O in model.opens]
    if not is_zero_dimensional(g_opens, model.n):
        return LawReport("zero-dim-quotient", applicable=False,
                         note="the model's topology has no clopen base")
    q = quotient_topology(model, H)
    rep = LawReport("zero-dim-quotient")
    rep.record(is_zero_dimensional(q.opens, q.points()), (H.sorted(),))
    return rep


# ---------------------------------------------------------------------------
# Model files


def model_from_json(data: dict, base_dir: str | Path = ".") -> FiniteTopoGyro:
    """``{"table": [...]} | {"table_ref": path}`` plus ``"base": [[...], ...]``."""
    if "table" in data:
        g = table_from_json({"table": data["table"]})
    elif "table_ref" in data:
        g = load_table(Path(base_dir) / data["table_ref"])
    else:
        raise ValueError("model JSON needs 'table' or 'table_ref'")
    if "base" not in data:
        raise ValueError("model JSON needs 'base'")
    return build_model(g, data["base"])


def load_model(path: str | Path) -> FiniteTopoGyro:
    path = Path(path)
    return model_from_json(json.loads(path.read_text()), path.parent)
