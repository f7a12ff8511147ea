"""Gyrogroup contract and the law-checking engine shared by all realizations.

A model supplies ``add``, ``neg``, ``zero`` and an equality notion. Gyrations
are never stored natively: they are always derived from

    gyr[x, y](z) = (-(x + y)) + (x + (y + z))

and realizations are free to cache the result.
"""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass
from typing import Any, Iterable, Iterator, Sequence


class GyroError(Exception):
    """Base class for library errors."""


class DomainError(GyroError, ValueError):
    """An element lies outside the model's carrier."""


class UsageError(GyroError, ValueError):
    """An operation was called with arguments violating its preconditions."""


class GyrogroupModel:
    """Base class for gyrogroup realizations.

    Subclasses implement ``add``, ``neg``, ``zero`` and ``check_element``.
    Numeric models override ``distance`` and set ``tolerance``; finite models
    keep exact equality.
    """

    zero: Any = None
    tolerance: float = 0.0
    numeric: bool = False

    def add(self, x, y):
        raise NotImplementedError

    def neg(self, x):
        raise NotImplementedError

    def check_element(self, x) -> None:
        """Raise DomainError if ``x`` is not in the carrier."""

    def elements(self) -> Sequence | None:
        """All elements for finite carriers, ``None`` for infinite ones."""
        return None

    def distance(self, a, b) -> float:
        return 0.0 if a == b else 1.0

    def eq(self, a, b) -> bool:
        if self.numeric:
            return self.distance(a, b) <= self.tolerance
        return a == b

    def gyr(self, x, y, z):
        return gyr(self, x, y, z)


def gyr(model: GyrogroupModel, x, y, z):
    """Evaluate gyr[x, y](z) from the left-cancellation formula."""
    for e in (x, y, z):
        model.check_element(e)
    add, neg = model.add, model.neg
    return add(neg(add(x, y)), add(x, add(y, z)))


def left_translate(model: GyrogroupModel, x, S: Iterable) -> list:
    """``{x + s : s in S}``, deduplicated under the model's equality."""
    return _dedup(model, (model.add(x, s) for s in S))


def right_translate(model: GyrogroupModel, x, S: Iterable) -> list:
    """``{s + x : s in S}``, deduplicated under the model's equality."""
    return _dedup(model, (model.add(s, x) for s in S))


def _dedup(model, items):
    out = []
    for item in items:
        if not any(model.eq(item, seen) for seen in out):
            out.append(item)
    if not model.numeric:
        out.sort()
    return out


# ---------------------------------------------------------------------------
# Case domains


@dataclass(frozen=True)
class Exhaustive:
    """Enumerate every tuple of carrier elements (finite models only)."""

    def tuples(self, model: GyrogroupModel, k: int) -> Iterator[tuple]:
        elems = model.elements()
        if elems is None:
            raise UsageError("exhaustive domain needs a finite carrier")
        if len(elems) == 0:
            raise UsageError("empty domain")
        return itertools.product(elems, repeat=k)

    def describe(self) -> str:
        return "exhaustive"


@dataclass(frozen=True)
class SamplePlan:
    """Seeded pseudo-random draws from the model's ``sample`` method."""

    count: int = 1000
    seed: int = 0

    def tuples(self, model: GyrogroupModel, k: int) -> Iterator[tuple]:
        if self.count <= 0:
            raise UsageError("empty domain: sample count must be positive")
        rng = random.Random(self.seed * 1_000_003 + k)
        sample = getattr(model, "sample", None)
        if sample is None:
            elems = model.elements()
            if not elems:
                raise UsageError("model cannot be sampled")
            return (tuple(rng.choice(elems) for _ in range(k)) for _ in range(self.count))
        return (tuple(sample(rng) for _ in range(k)) for _ in range(self.count))

    def describe(self) -> str:
        return f"sampled(count={self.count}, seed={self.seed})"


# ---------------------------------------------------------------------------
# Reports


@dataclass
class LawReport:
    """Outcome of checking one law over a case domain.

    ``counterexample`` is set exactly when ``failures > 0``. ``max_deviation``
    is only tracked for numeric models. ``applicable`` is False when the law's
    hypothesis does not hold for the model (nothing was asserted).
    """

    law: str
    cases: int = 0
    failures: int = 0
    max_deviation: float | None = None
    counterexample: tuple | None = None
    note: str = ""
    applicable: bool = True

    @property
    def passed(self) -> bool:
        return self.failures == 0

    @property
    def status(self) -> str:
        if self.failures:
            return "fail"
        return "pass" if self.applicable else "inapplicable"

    def record(self, ok: bool, case: tuple, deviation: float | None = None) -> None:
        self.cases += 1
        if deviation is not None:
            if self.max_deviation is None or deviation > self.max_deviation:
                self.max_deviation = deviation
        if not ok:
            self.failures += 1
            if self.counterexample is None:
                self.counterexample = case

    def to_dict(self) -> dict:
        d = {
            "law": self.law,
            "status": self.status,
            "cases": self.cases,
            "failures": self.failures,
        }
        if self.max_deviation is not None:
            d["max_deviation"] = self.max_deviation
        if self.counterexample is not None:
            d["counterexample"] = _jsonable(self.counterexample)
        if self.note:
            d["note"] = self.note
        return d

    def __str__(self) -> str:
        s = f"{self.law}: {self.status} ({self.cases} cases, {self.failures} failures"
        if self.max_deviation is not None:
            s += f", max deviation {self.max_deviation:.3e}"
        s += ")"
        if self.counterexample is not None:
            s += f" counterexample={_jsonable(self.counterexample)}"
        if self.note:
            s += f" [{self.note}]"
        return s


def _jsonable(obj):
    if isinstance(obj, (tuple, list)):
        return [_jsonable(o) for o in obj]
    if isinstance(obj, float):
        return obj
    if hasattr(obj, "tolist"):
        return obj.tolist()
    return obj


def merge_reports(parts: Iterable[LawReport]) -> LawReport:
    """Merge partial reports of the same law computed over disjoint case sets.

    Counts add up, the deviation is the max, and the lexicographically first
    counterexample wins, so the merge is independent of partition order.
    """
    parts = list(parts)
    if not parts:
        raise UsageError("nothing to merge")
    out = LawReport(parts[0].law, note=parts[0].note, applicable=all(p.applicable for p in parts))
    for p in parts:
        if p.law != out.law:
            raise UsageError(f"cannot merge {p.law!r} into {out.law!r}")
        out.cases += p.cases
        out.failures += p.failures
        if p.max_deviation is not None:
            out.max_deviation = max(out.max_deviation or 0.0, p.max_deviation)
        if p.counterexample is not None:
            ce = _jsonable(p.counterexample)
            if out.counterexample is None or ce < _jsonable(out.counterexample):
                out.counterexample = p.counterexample
    return out


# ---------------------------------------------------------------------------
# Law suites


def _check(model: GyrogroupModel, report: LawReport, case: tuple, lhs, rhs) -> None:
    if model.numeric:
        dev = model.distance(lhs, rhs)
        report.record(dev <= model.tolerance, case, dev)
    else:
        report.record(lhs == rhs, case)


def _caveat(domain) -> str:
    if isinstance(domain, Exhaustive):
        return ""
    return f"tested on {domain.describe()} domain only"


def check_axioms(model: GyrogroupModel, domain) -> list[LawReport]:
    """Check G1-G4 plus the automorphism property of every gyration.

    On finite carriers with an exhaustive domain, gyrations are additionally
    checked to be bijections.
    """
    add, neg, zero = model.add, model.neg, model.zero
    g = model.gyr
    note = _caveat(domain)

    g1 = LawReport("G1", note=note)
    for (a,) in domain.tuples(model, 1):
        _check(model, g1, (a,), add(zero, a), a)
        _check(model, g1, (a,), add(a, zero), a)

    g2 = LawReport("G2", note=note)
    for (x,) in domain.tuples(model, 1):
        _check(model, g2, (x,), add(neg(x), x), zero)
        _check(model, g2, (x,), add(x, neg(x)), zero)

    g3 = LawReport("G3", note=note)
    g4 = LawReport("G4", note=note)
    for x, y, z in domain.tuples(model, 3):
        _check(model, g3, (x, y, z), add(x, add(y, z)), add(add(x, y), g(x, y, z)))
        _check(model, g4, (x, y, z), g(add(x, y), y, z), g(x, y, z))

    aut = LawReport("gyr-automorphism", note=note)
    for x, y, a, b in domain.tuples(model, 4):
        _check(model, aut, (x, y, a, b), g(x, y, add(a, b)), add(g(x, y, a), g(x, y, b)))
    reports = [g1, g2, g3, g4, aut]

    if isinstance(domain, Exhaustive):
        bij = LawReport("gyr-bijective")
        elems = list(model.elements())
        for x, y in itertools.product(elems, repeat=2):
            images = {g(x, y, z) for z in elems}
            bij.record(len(images) == len(elems), (x, y))
        reports.append(bij)
    return reports


def check_identities(model: GyrogroupModel, domain) -> list[LawReport]:
    """Check the standard consequences of the axioms.

    I1: (-x) + (x + y) = y
    I2: (x + (-y)) + gyr[x, -y](y) = x
    I3: (x + gyr[x, y](-y)) + y = x
    I4: (x + y) + gyr[x, y](z) = x + (y + z), with gyr from the formula
    """
    add, neg = model.add, model.neg
    g = model.gyr
    note = _caveat(domain)
    i1, i2, i3, i4 = (LawReport(f"I{k}", note=note) for k in range(1, 5))
    for x, y in domain.tuples(model, 2):
        _check(model, i1, (x, y), add(neg(x), add(x, y)), y)
        _check(model, i2, (x, y), add(add(x, neg(y)), g(x, neg(y), y)), x)
        _check(model, i3, (x, y), add(add(x, g(x, y, neg(y))), y), x)
    for x, y, z in domain.tuples(model, 3):
        _check(model, i4, (x, y, z), add(add(x, y), gyr(model, x, y, z)), add(x, add(y, z)))
    return [i1, i2, i3, i4]


def all_passed(reports: Iterable[LawReport]) -> bool:
    return all(r.passed for r in reports)
