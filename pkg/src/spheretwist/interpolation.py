"""Algebraic maps from the line into SO(2) with prescribed values at nodes.

A rotation ``(c, s)`` is identified with the unit complex number ``c + i s``.
Removing one circle point ``P`` leaves a copy of the real line via

    q(t) = ((1 - t^2) + 2 t i) / (1 + t^2),     p = -P * q(t),

so rotation values become real numbers, get interpolated by a Lagrange
polynomial ``g``, and are mapped back.  The resulting map has denominator
``1 + g(x)^2``, which never vanishes on the real line.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterator, Sequence, Tuple

from .poly import Polynomial, RationalMap
from .tower import ONE_SCALAR, ZERO_SCALAR, DomainError, TowerScalar

__all__ = [
    "Rotation2",
    "CircleValuedMap",
    "circle_stereo",
    "circle_unstereo",
    "interpolate_rotations",
    "lagrange_polynomial",
    "rational_enumeration",
    "circle_candidates",
    "CIRCLE_VAR",
]

CIRCLE_VAR = "t"


def _s(v) -> TowerScalar:
    return v if isinstance(v, TowerScalar) else TowerScalar(v)


@dataclass(frozen=True)
class Rotation2:
    """Plane rotation ``[[c, -s], [s, c]]`` with ``c^2 + s^2 == 1``."""

    c: TowerScalar
    s: TowerScalar

    def __post_init__(self):
        c, s = _s(self.c), _s(self.s)
        object.__setattr__(self, "c", c)
        object.__setattr__(self, "s", s)
        if c * c + s * s != 1:
            raise DomainError(f"({c}, {s}) is not on the unit circle")

    @classmethod
    def _unchecked(cls, c: TowerScalar, s: TowerScalar) -> "Rotation2":
        obj = object.__new__(cls)
        object.__setattr__(obj, "c", c)
        object.__setattr__(obj, "s", s)
        return obj

    @classmethod
    def identity(cls) -> "Rotation2":
        return cls(ONE_SCALAR, ZERO_SCALAR)

    def __mul__(self, other: "Rotation2") -> "Rotation2":
        return Rotation2._unchecked(self.c * other.c - self.s * other.s, self.c * other.s + self.s * other.c)

    def conjugate(self) -> "Rotation2":
        return Rotation2._unchecked(self.c, -self.s)

    def apply(self, a, b) -> Tuple[TowerScalar, TowerScalar]:
        return self.c * a - self.s * b, self.s * a + self.c * b

    def to_json(self) -> list:
        return [str(self.c), str(self.s)]

    @classmethod
    def from_json(cls, data) -> "Rotation2":
        c, s = data
        return cls(TowerScalar.from_json(c), TowerScalar.from_json(s))

    def __str__(self):
        return f"({self.c}, {self.s})"


def rational_enumeration() -> Iterator[Fraction]:
    """``0, 1, -1, 1/2, -1/2, 2, -2, 1/3, ...`` (Calkin-Wilf order with signs)."""
    yield Fraction(0)
    q = Fraction(1)
    while True:
        yield q
        yield -q
        # Newman's successor in the Calkin-Wilf sequence
        q = 1 / (2 * (q.numerator // q.denominator) - q + 1)


def circle_candidates() -> Iterator[Tuple[Fraction, Rotation2]]:
    for t in rational_enumeration():
        d = 1 + t * t
        yield t, Rotation2(TowerScalar((1 - t * t) / d), TowerScalar(2 * t / d))


def circle_stereo(p: Rotation2, projection_point: Rotation2) -> TowerScalar:
    """Real parameter of ``p`` on the circle punctured at ``projection_point``."""
    if p == projection_point:
        raise DomainError("cannot parametrize the projection point itself")
    P = projection_point
    # q = -p * conj(P) sends P to -1
    qc = -(p.c * P.c + p.s * P.s)
    qs = -(p.s * P.c - p.c * P.s)
    return qs / (1 + qc)


def circle_unstereo(t, projection_point: Rotation2) -> Rotation2:
    t = _s(t)
    P = projection_point
    d = (1 + t * t).inverse()
    qc = (1 - t * t) * d
    qs = (2 * t) * d
    return Rotation2._unchecked(-(qc * P.c - qs * P.s), -(qc * P.s + qs * P.c))


def lagrange_polynomial(nodes: Sequence, values: Sequence, var: str = CIRCLE_VAR) -> Polynomial:
    """Classical Lagrange interpolant of degree at most ``len(nodes) - 1``."""
    nodes = [_s(x) for x in nodes]
    values = [_s(v) for v in values]
    if len(nodes) != len(values):
        raise ValueError("nodes and values differ in length")
    if len(set(nodes)) != len(nodes):
        raise ValueError("interpolation nodes must be pairwise distinct")
    vs = (var,)
    x = Polynomial.var(vs, var)
    total = Polynomial.zero(vs)
    for j, (xj, yj) in enumerate(zip(nodes, values)):
        if not yj:
            continue
        basis = Polynomial.one(vs)
        denom = ONE_SCALAR
        for k, xk in enumerate(nodes):
            if k != j:
                basis = basis * (x - xk)
                denom = denom * (xj - xk)
        total = total + basis.scale(yj / denom)
    return total


@dataclass(frozen=True)
class CircleValuedMap:
    """``x -> -P * q(g(x))`` for a polynomial ``g`` and a circle point ``P``."""

    g: Polynomial
    projection_point: Rotation2

    def __post_init__(self):
        if len(self.g.variables) != 1:
            raise ValueError("circle-valued maps are univariate")

    @property
    def variable(self) -> str:
        return self.g.variables[0]

    def __call__(self, x) -> Rotation2:
        return circle_unstereo(self.g(_s(x)), self.projection_point)

    def conjugate(self) -> "CircleValuedMap":
        """Pointwise inverse rotation; ``conj(q(t)) = q(-t)``."""
        return CircleValuedMap(-self.g, self.projection_point.conjugate())

    def numerators(self) -> Tuple[Polynomial, Polynomial, Polynomial]:
        """``(c_num, s_num, den)`` with ``f = (c_num/den, s_num/den)``."""
        g = self.g
        g2 = g * g
        one = Polynomial.one(g.variables)
        qc = one - g2
        qs = g.scale(2)
        P = self.projection_point
        c_num = qs.scale(P.s) - qc.scale(P.c)
        s_num = -(qc.scale(P.s) + qs.scale(P.c))
        return c_num, s_num, one + g2

    @property
    def components(self) -> RationalMap:
        c_num, s_num, den = self.numerators()
        return RationalMap(self.g.variables, ((c_num, den), (s_num, den)), "all of R")

    def degree(self) -> int:
        return int(max(self.g.degree(), 0))

    def to_json(self) -> dict:
        return {
            "variable": self.variable,
            "g": self.g.to_json(),
            "projection_point": self.projection_point.to_json(),
        }

    @classmethod
    def from_json(cls, data) -> "CircleValuedMap":
        var = data.get("variable", CIRCLE_VAR)
        return cls(Polynomial.from_json((var,), data["g"]), Rotation2.from_json(data["projection_point"]))

    @classmethod
    def constant(cls, value: Rotation2) -> "CircleValuedMap":
        return interpolate_rotations([0], [value])


def interpolate_rotations(nodes: Sequence, values: Sequence[Rotation2], var: str = CIRCLE_VAR) -> CircleValuedMap:
    """Algebraic map ``f`` on the real line with ``f(nodes[j]) == values[j]``.

    The puncture point is the first circle point from
    :func:`circle_candidates` that differs from every prescribed value.
    """
    nodes = [_s(x) for x in nodes]
    values = list(values)
    if not nodes or len(nodes) != len(values):
        raise ValueError("need equally many nodes and values, at least one")
    if len(set(nodes)) != len(nodes):
        raise ValueError("interpolation nodes must be pairwise distinct")
    taken = set(values)
    for _, cand in circle_candidates():
        if cand not in taken:
            P = cand
            break
    params = [circle_stereo(v, P) for v in values]
    return CircleValuedMap(lagrange_polynomial(nodes, params, var), P)
