"""Seeded generators of random exact inputs for tests, benchmarks and the CLI."""

from __future__ import annotations

import random
from fractions import Fraction
from typing import List

from .engine import TransitivityInstance
from .interpolation import Rotation2
from .sphere import AxisFrame, Rotation, SpherePoint, sphere_point_from_plane
from .tower import TowerScalar

__all__ = [
    "random_rational",
    "random_plane_point",
    "random_distinct_points",
    "random_rotation2",
    "random_frame",
    "random_instance",
]


def random_rational(rng: random.Random, bits: int = 8) -> Fraction:
    lim = (1 << bits) - 1
    return Fraction(rng.randint(-lim, lim), rng.randint(1, lim))


def random_plane_point(rng: random.Random, bits: int = 8) -> SpherePoint:
    """Lift of a random planar rational point; always exactly on the sphere."""
    return sphere_point_from_plane(random_rational(rng, bits), random_rational(rng, bits))


def random_distinct_points(rng: random.Random, n: int, bits: int = 8, avoid=()) -> List[SpherePoint]:
    out: List[SpherePoint] = []
    taken = set(avoid)
    while len(out) < n:
        p = random_plane_point(rng, bits)
        if p not in taken:
            taken.add(p)
            out.append(p)
    return out


def random_rotation2(rng: random.Random, bits: int = 8) -> Rotation2:
    t = random_rational(rng, bits)
    d = 1 + t * t
    return Rotation2(TowerScalar((1 - t * t) / d), TowerScalar(2 * t / d))


def random_frame(rng: random.Random, bits: int = 4) -> AxisFrame:
    lim = (1 << bits) - 1
    while True:
        q = [rng.randint(-lim, lim) for _ in range(4)]
        if any(q):
            return AxisFrame.from_rotation(Rotation.from_quaternion(*q))


def random_instance(rng: random.Random, n: int, m: int = 0, bits: int = 8) -> TransitivityInstance:
    """``n`` moving pairs plus ``m`` fixed points, all from planar parameters."""
    fixed = random_distinct_points(rng, m, bits)
    sources = random_distinct_points(rng, n, bits, avoid=fixed)
    targets = random_distinct_points(rng, n, bits, avoid=fixed)
    return TransitivityInstance(sources, targets, fixed)
