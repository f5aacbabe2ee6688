"""Exact points of the unit sphere and its primitive automorphisms.

Only two families live here: orthogonal rotations and the z-axis boosts that
push the sphere toward the north pole.  Twist maps are in
:mod:`spheretwist.twist`.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import List, Sequence, Tuple

from .poly import Polynomial, RationalMap
from .tower import ONE_SCALAR, ZERO_SCALAR, DomainError, TowerScalar, as_rational, format_rational

__all__ = [
    "SpherePoint",
    "NotOnSphereError",
    "AxisFrame",
    "PrimitiveAutomorphism",
    "Rotation",
    "Boost",
    "boost",
    "sphere_point_from_plane",
    "normalize_to_cap",
    "parallel_height",
    "in_cap",
    "dot",
    "cross",
    "SPHERE_VARS",
    "NORTH",
    "SOUTH",
    "DEFAULT_CAP_THRESHOLD",
    "PRE_ROTATION",
]

Vec3 = Tuple[TowerScalar, TowerScalar, TowerScalar]

SPHERE_VARS = ("x", "y", "z")
DEFAULT_CAP_THRESHOLD = Fraction(1, 2)
# fixed rational rotation about the x-axis used to move points away from S
PRE_ROTATION = (Fraction(3, 5), Fraction(4, 5))
SOUTH_NEIGHBOURHOOD = Fraction(-7, 8)
MAX_PRE_ROTATIONS = 32


class NotOnSphereError(DomainError):
    pass


def _s(v) -> TowerScalar:
    return v if isinstance(v, TowerScalar) else TowerScalar(v)


def dot(u: Sequence[TowerScalar], v: Sequence[TowerScalar]) -> TowerScalar:
    total = ZERO_SCALAR
    for a, b in zip(u, v):
        total = total + a * b
    return total


def cross(u: Sequence[TowerScalar], v: Sequence[TowerScalar]) -> Vec3:
    return (
        u[1] * v[2] - u[2] * v[1],
        u[2] * v[0] - u[0] * v[2],
        u[0] * v[1] - u[1] * v[0],
    )


@dataclass(frozen=True)
class SpherePoint:
    """Point ``(x, y, z)`` with ``x^2 + y^2 + z^2 == 1`` exactly."""

    x: TowerScalar
    y: TowerScalar
    z: TowerScalar

    def __post_init__(self):
        x, y, z = _s(self.x), _s(self.y), _s(self.z)
        object.__setattr__(self, "x", x)
        object.__setattr__(self, "y", y)
        object.__setattr__(self, "z", z)
        if x * x + y * y + z * z != 1:
            raise NotOnSphereError(f"({x}, {y}, {z}) is not on S^2")

    @classmethod
    def _unchecked(cls, x: TowerScalar, y: TowerScalar, z: TowerScalar) -> "SpherePoint":
        # images of exact automorphisms lie on S^2 by construction
        obj = object.__new__(cls)
        object.__setattr__(obj, "x", x)
        object.__setattr__(obj, "y", y)
        object.__setattr__(obj, "z", z)
        return obj

    def on_sphere(self) -> bool:
        return self.x * self.x + self.y * self.y + self.z * self.z == 1

    @property
    def coords(self) -> Vec3:
        return (self.x, self.y, self.z)

    def __iter__(self):
        return iter(self.coords)

    def __str__(self):
        return f"({self.x}, {self.y}, {self.z})"

    def to_json(self) -> dict:
        return {"x": str(self.x), "y": str(self.y), "z": str(self.z)}

    @classmethod
    def from_json(cls, data) -> "SpherePoint":
        """Accept ``{x, y, z}`` scalar strings or planar ``{u, v}`` rationals."""
        if isinstance(data, (list, tuple)):
            return cls(*(TowerScalar.from_json(v) for v in data))
        if "u" in data or "v" in data:
            return sphere_point_from_plane(as_rational(str(data["u"])), as_rational(str(data["v"])))
        return cls(
            TowerScalar.from_json(data["x"]),
            TowerScalar.from_json(data["y"]),
            TowerScalar.from_json(data["z"]),
        )


NORTH = SpherePoint(0, 0, 1)
SOUTH = SpherePoint(0, 0, -1)


def sphere_point_from_plane(u, v) -> SpherePoint:
    """Inverse stereographic projection ``(2u, 2v, u^2+v^2-1) / (u^2+v^2+1)``."""
    u, v = as_rational(u), as_rational(v)
    r = u * u + v * v
    d = r + 1
    return SpherePoint(TowerScalar(2 * u / d), TowerScalar(2 * v / d), TowerScalar((r - 1) / d))


def parallel_height(p, frame: "AxisFrame") -> TowerScalar:
    """Height of ``p`` along the frame axis; equal heights mean a shared parallel."""
    return dot(tuple(p), frame.axis)


@dataclass(frozen=True)
class AxisFrame:
    """Unit axis plus an oriented orthonormal basis of the orthogonal plane.

    ``(basis1, basis2, axis)`` is right-handed.
    """

    axis: Vec3
    basis1: Vec3
    basis2: Vec3

    def __post_init__(self):
        a, b1, b2 = (tuple(_s(c) for c in v) for v in (self.axis, self.basis1, self.basis2))
        object.__setattr__(self, "axis", a)
        object.__setattr__(self, "basis1", b1)
        object.__setattr__(self, "basis2", b2)
        if dot(a, a) != 1 or dot(b1, b1) != 1 or dot(b2, b2) != 1:
            raise DomainError("frame vectors must be unit length")
        if dot(a, b1) or dot(a, b2) or dot(b1, b2):
            raise DomainError("frame vectors must be pairwise orthogonal")
        if tuple(cross(b1, b2)) != a:
            raise DomainError("frame must be right-handed")

    @classmethod
    def from_axis(cls, axis: Sequence, basis1: Sequence) -> "AxisFrame":
        axis = tuple(_s(c) for c in axis)
        basis1 = tuple(_s(c) for c in basis1)
        return cls(axis, basis1, cross(axis, basis1))

    @classmethod
    def horizontal(cls, c, s) -> "AxisFrame":
        """Frame for the horizontal axis ``(c, s, 0)`` with ``basis1 = e_z``."""
        c, s = _s(c), _s(s)
        return cls((c, s, ZERO_SCALAR), (ZERO_SCALAR, ZERO_SCALAR, ONE_SCALAR), (s, -c, ZERO_SCALAR))

    @classmethod
    def z_axis(cls) -> "AxisFrame":
        o, z = ONE_SCALAR, ZERO_SCALAR
        return cls((z, z, o), (o, z, z), (z, o, z))

    def split(self, p) -> Tuple[TowerScalar, TowerScalar, TowerScalar]:
        """Coordinates ``(height, a, b)`` of ``p`` in the frame."""
        p = tuple(p)
        return dot(p, self.axis), dot(p, self.basis1), dot(p, self.basis2)

    def assemble(self, h, a, b) -> Vec3:
        return tuple(h * w + a * e1 + b * e2 for w, e1, e2 in zip(self.axis, self.basis1, self.basis2))

    @classmethod
    def from_rotation(cls, r: "Rotation") -> "AxisFrame":
        """Frame whose ``(basis1, basis2, axis)`` are the columns of ``r``."""
        cols = list(zip(*r.matrix))
        return cls(cols[2], cols[0], cols[1])

    def to_json(self) -> dict:
        return {
            "axis": [str(c) for c in self.axis],
            "basis": [[str(c) for c in self.basis1], [str(c) for c in self.basis2]],
        }

    @classmethod
    def from_json(cls, data) -> "AxisFrame":
        axis = tuple(TowerScalar.from_json(c) for c in data["axis"])
        b1, b2 = (tuple(TowerScalar.from_json(c) for c in v) for v in data["basis"])
        return cls(axis, b1, b2)


class PrimitiveAutomorphism:
    """Base for bijective algebraic self-maps of the sphere with exact inverses."""

    kind: str = "abstract"

    def apply(self, p: SpherePoint) -> SpherePoint:
        raise NotImplementedError

    def __call__(self, p: SpherePoint) -> SpherePoint:
        return self.apply(p)

    def inverse(self) -> "PrimitiveAutomorphism":
        raise NotImplementedError

    def to_rational_map(self) -> RationalMap:
        raise NotImplementedError

    def to_json(self) -> dict:
        raise NotImplementedError


@dataclass(frozen=True)
class Rotation(PrimitiveAutomorphism):
    """Orthogonal 3x3 matrix with determinant 1, rows stored as tuples."""

    matrix: Tuple[Vec3, Vec3, Vec3]
    kind = "rotation"

    def __post_init__(self):
        m = tuple(tuple(_s(c) for c in row) for row in self.matrix)
        if len(m) != 3 or any(len(r) != 3 for r in m):
            raise ValueError("rotation matrix must be 3x3")
        object.__setattr__(self, "matrix", m)
        for i in range(3):
            for j in range(3):
                if dot(m[i], m[j]) != (1 if i == j else 0):
                    raise DomainError("rotation matrix is not orthogonal")
        if dot(cross(m[0], m[1]), m[2]) != 1:
            raise DomainError("rotation matrix must have determinant 1")

    @classmethod
    def about_x(cls, c, s) -> "Rotation":
        o, z = ONE_SCALAR, ZERO_SCALAR
        c, s = _s(c), _s(s)
        return cls(((o, z, z), (z, c, -s), (z, s, c)))

    @classmethod
    def about_z(cls, c, s) -> "Rotation":
        o, z = ONE_SCALAR, ZERO_SCALAR
        c, s = _s(c), _s(s)
        return cls(((c, -s, z), (s, c, z), (z, z, o)))

    @classmethod
    def identity(cls) -> "Rotation":
        return cls.about_z(1, 0)

    @classmethod
    def from_quaternion(cls, a, b, c, d) -> "Rotation":
        """Rational rotation of the nonzero quaternion ``a + bi + cj + dk``."""
        a, b, c, d = (as_rational(v) for v in (a, b, c, d))
        n = a * a + b * b + c * c + d * d
        if not n:
            raise DomainError("zero quaternion")
        m = (
            (a * a + b * b - c * c - d * d, 2 * (b * c - a * d), 2 * (b * d + a * c)),
            (2 * (b * c + a * d), a * a - b * b + c * c - d * d, 2 * (c * d - a * b)),
            (2 * (b * d - a * c), 2 * (c * d + a * b), a * a - b * b - c * c + d * d),
        )
        return cls(tuple(tuple(TowerScalar(v / n) for v in row) for row in m))

    def apply_vec(self, v: Sequence[TowerScalar]) -> Vec3:
        return tuple(dot(row, v) for row in self.matrix)

    def apply(self, p: SpherePoint) -> SpherePoint:
        return SpherePoint._unchecked(*self.apply_vec(tuple(p)))

    def __matmul__(self, other: "Rotation") -> "Rotation":
        cols = list(zip(*other.matrix))
        return Rotation(tuple(tuple(dot(row, col) for col in cols) for row in self.matrix))

    def power(self, k: int) -> "Rotation":
        out = Rotation.identity()
        for _ in range(k):
            out = self @ out
        return out

    def inverse(self) -> "Rotation":
        return Rotation(tuple(zip(*self.matrix)))

    def to_rational_map(self) -> RationalMap:
        comps = [Polynomial.linear(SPHERE_VARS, row) for row in self.matrix]
        return RationalMap.polynomial(comps, "all of S^2")

    def to_json(self) -> dict:
        return {"kind": self.kind, "matrix": [[str(c) for c in row] for row in self.matrix]}

    @classmethod
    def from_json(cls, data) -> "Rotation":
        return cls(tuple(tuple(TowerScalar.from_json(c) for c in row) for row in data["matrix"]))


@dataclass(frozen=True)
class Boost(PrimitiveAutomorphism):
    """Projective boost along the z-axis fixing both poles.

    ``(x, y, z) -> (2Lx, 2Ly, (L^2-1) + (L^2+1)z) / ((L^2+1) + (L^2-1)z)``
    Conjugated by stereographic projection from the south pole it is the
    planar scaling ``w -> L*w``.
    """

    lam: Fraction
    kind = "boost"

    def __post_init__(self):
        lam = as_rational(self.lam)
        if lam <= 0:
            raise DomainError(f"boost parameter must be positive, got {format_rational(lam)}")
        object.__setattr__(self, "lam", lam)

    def apply(self, p: SpherePoint) -> SpherePoint:
        lam = self.lam
        l2 = lam * lam
        den = (l2 + 1) + (l2 - 1) * p.z
        inv = den.inverse()
        return SpherePoint._unchecked(
            p.x * (2 * lam) * inv,
            p.y * (2 * lam) * inv,
            ((l2 - 1) + (l2 + 1) * p.z) * inv,
        )

    def inverse(self) -> "Boost":
        return Boost(1 / self.lam)

    def to_rational_map(self) -> RationalMap:
        lam = self.lam
        l2 = lam * lam
        den = Polynomial.linear(SPHERE_VARS, [0, 0, l2 - 1], l2 + 1)
        comps = (
            (Polynomial.linear(SPHERE_VARS, [2 * lam, 0, 0]), den),
            (Polynomial.linear(SPHERE_VARS, [0, 2 * lam, 0]), den),
            (Polynomial.linear(SPHERE_VARS, [0, 0, l2 + 1], l2 - 1), den),
        )
        return RationalMap(SPHERE_VARS, comps, "all of S^2")

    def to_json(self) -> dict:
        return {"kind": self.kind, "lambda": format_rational(self.lam)}

    @classmethod
    def from_json(cls, data) -> "Boost":
        return cls(as_rational(str(data["lambda"])))


def boost(lam) -> Boost:
    return Boost(as_rational(lam))


def in_cap(p: SpherePoint, threshold=DEFAULT_CAP_THRESHOLD) -> bool:
    """``z > 0`` and ``z^2 > threshold``."""
    return p.z.sign() > 0 and (p.z * p.z - threshold).sign() > 0


def _near_south(p: SpherePoint) -> bool:
    return p.z <= SOUTH_NEIGHBOURHOOD


@dataclass
class Normalization:
    steps: List[PrimitiveAutomorphism] = field(default_factory=list)
    points: List[SpherePoint] = field(default_factory=list)
    pre_rotations: int = 0
    lam: Fraction = Fraction(1)

    def __iter__(self):
        # unpacks as (steps, points)
        return iter((self.steps, self.points))


def normalize_to_cap(points: Sequence[SpherePoint], cap_threshold=DEFAULT_CAP_THRESHOLD) -> Normalization:
    """Move all points into the polar cap ``z > 0, z^2 > cap_threshold``.

    Points near the south pole are first rotated about the x-axis by the
    fixed angle with cosine 3/5; then boosts with ``L = 2, 4, 8, ...`` are
    tried until every image lies in the cap.
    """
    points = list(points)
    cap_threshold = as_rational(cap_threshold)
    if all(in_cap(p, cap_threshold) for p in points):
        return Normalization([], points)
    step = Rotation.about_x(*PRE_ROTATION)
    k = 0
    current = points
    while any(_near_south(p) for p in current) and k < MAX_PRE_ROTATIONS:
        current = [step(p) for p in current]
        k += 1
    if any(_near_south(p) for p in current):
        # the neighbourhood could not be cleared; settle for missing S itself
        k = 0
        current = points
        while any(p == SOUTH for p in current):
            current = [step(p) for p in current]
            k += 1
    steps: List[PrimitiveAutomorphism] = []
    if k:
        steps.append(step.power(k))
    lam = Fraction(1)
    if not all(in_cap(p, cap_threshold) for p in current):
        lam = Fraction(2)
        while True:
            b = Boost(lam)
            moved = [b(p) for p in current]
            if all(in_cap(p, cap_threshold) for p in moved):
                break
            lam *= 2
        steps.append(b)
        current = moved
    return Normalization(steps, current, k, lam)
