"""Twist automorphisms of the sphere.

A twist rotates every parallel about a fixed axis by an angle that depends
algebraically on the parallel's height:

    p = h*W + a*e1 + b*e2   ->   h*W + R(f(h)) (a, b)

The map with ``f`` replaced by its pointwise conjugate undoes it.
"""

from __future__ import annotations

from dataclasses import dataclass
from .interpolation import CircleValuedMap
from .poly import Polynomial, RationalMap
from .sphere import SPHERE_VARS, AxisFrame, PrimitiveAutomorphism, SpherePoint

__all__ = ["TwistMap", "make_twist", "twist_inverse"]


@dataclass(frozen=True)
class TwistMap(PrimitiveAutomorphism):
    frame: AxisFrame
    f: CircleValuedMap
    kind = "twist"

    def apply(self, p: SpherePoint) -> SpherePoint:
        h, a, b = self.frame.split(p)
        a2, b2 = self.f(h).apply(a, b)
        return SpherePoint._unchecked(*self.frame.assemble(h, a2, b2))

    def inverse(self) -> "TwistMap":
        return TwistMap(self.frame, self.f.conjugate())

    def to_rational_map(self) -> RationalMap:
        """Flattened form in ``(x, y, z)``; the shared denominator is ``1 + g(h)^2``."""
        c_num, s_num, den = self.f.numerators()
        height = Polynomial.linear(SPHERE_VARS, self.frame.axis)
        a = Polynomial.linear(SPHERE_VARS, self.frame.basis1)
        b = Polynomial.linear(SPHERE_VARS, self.frame.basis2)
        cn, sn, d = (q.substitute([height]) for q in (c_num, s_num, den))
        a2 = cn * a - sn * b
        b2 = sn * a + cn * b
        hd = height * d
        comps = []
        for w, e1, e2 in zip(self.frame.axis, self.frame.basis1, self.frame.basis2):
            comps.append((hd.scale(w) + a2.scale(e1) + b2.scale(e2), d))
        return RationalMap(SPHERE_VARS, tuple(comps), "all of S^2")

    def to_json(self) -> dict:
        return {"kind": self.kind, "frame": self.frame.to_json(), "f": self.f.to_json()}

    @classmethod
    def from_json(cls, data) -> "TwistMap":
        return cls(AxisFrame.from_json(data["frame"]), CircleValuedMap.from_json(data["f"]))


def make_twist(frame: AxisFrame, f: CircleValuedMap) -> TwistMap:
    return TwistMap(frame, f)


def twist_inverse(t: TwistMap) -> TwistMap:
    return t.inverse()
