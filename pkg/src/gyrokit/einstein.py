"""Einstein velocity addition on the open c-ball of R^n.

Velocities are plain tuples of floats. The per-call overhead of numpy on
3-vectors dominates at these sizes, so the formulas are written out in
scalar Python.
"""

from __future__ import annotations

import math
import random
import warnings
from typing import Sequence

from .core import DomainError, GyrogroupModel, gyr

Velocity = tuple[float, ...]


class BoundaryWarning(UserWarning):
    """A computed velocity came within the tolerance of the ball's boundary."""


def _dot(u: Sequence[float], v: Sequence[float]) -> float:
    return math.fsum(a * b for a, b in zip(u, v))


def _norm(u: Sequence[float]) -> float:
    return math.sqrt(_dot(u, u))


class EinsteinModel(GyrogroupModel):
    """The gyrogroup (R^n_c, +_E).

    >>> m = EinsteinModel()
    >>> m.add((0.5, 0.0, 0.0), (0.5, 0.0, 0.0))
    (0.8, 0.0, 0.0)
    """

    numeric = True

    def __init__(self, dim: int = 3, c: float = 1.0, tolerance: float = 1e-9):
        if dim < 1:
            raise ValueError("dimension must be a positive integer")
        if not c > 0 or not tolerance > 0:
            raise ValueError("c and tolerance must be positive")
        self.dim = dim
        self.c = float(c)
        self.tolerance = float(tolerance)
        self.zero: Velocity = (0.0,) * dim

    def __repr__(self) -> str:
        return f"EinsteinModel(dim={self.dim}, c={self.c}, tolerance={self.tolerance})"

    def check_element(self, u) -> None:
        if len(u) != self.dim:
            raise DomainError(f"expected a {self.dim}-vector, got {len(u)} components")
        if not all(math.isfinite(x) for x in u):
            raise DomainError(f"non-finite velocity {tuple(u)}")
        if _norm(u) >= self.c:
            raise DomainError(f"|u| = {_norm(u)!r} is not below c = {self.c!r}")

    def distance(self, a, b) -> float:
        return _norm([x - y for x, y in zip(a, b)])

    def gamma(self, u) -> float:
        self.check_element(u)
        return 1.0 / math.sqrt(1.0 - _dot(u, u) / (self.c * self.c))

    def add(self, u, v) -> Velocity:
        self.check_element(u)
        self.check_element(v)
        c2 = self.c * self.c
        uv = _dot(u, v)
        gu = self.gamma(u)
        k = 1.0 / (1.0 + uv / c2)
        cu = 1.0 + gu / (1.0 + gu) * uv / c2
        out = tuple(k * (cu * a + b / gu) for a, b in zip(u, v))
        if _norm(out) >= self.c - self.tolerance:
            warnings.warn(f"result {out} is within {self.tolerance} of the boundary",
                          BoundaryWarning, stacklevel=2)
        return out

    def neg(self, u) -> Velocity:
        self.check_element(u)
        return tuple(-a for a in u)

    def sample(self, rng: random.Random, radius: float = 0.95) -> Velocity:
        """Uniform draw from the ball of radius ``radius * c``."""
        while True:
            d = [rng.gauss(0.0, 1.0) for _ in range(self.dim)]
            n = _norm(d)
            if n > 0:
                break
        r = radius * self.c * rng.random() ** (1.0 / self.dim)
        return tuple(r * x / n for x in d)


def gamma(model: EinsteinModel, u) -> float:
    """Lorentz factor 1/sqrt(1 - |u|^2/c^2)."""
    return model.gamma(u)


def e_add(model: EinsteinModel, u, v) -> Velocity:
    return model.add(u, v)


def e_neg(model: EinsteinModel, u) -> Velocity:
    return model.neg(u)


def e_gyr(model: EinsteinModel, u, v, w) -> Velocity:
    return gyr(model, u, v, w)


def admissible(model: EinsteinModel, components: Sequence[float]) -> Velocity:
    """Coerce ``components`` to a velocity, raising DomainError outside the ball."""
    u = tuple(float(x) for x in components)
    model.check_element(u)
    return u
