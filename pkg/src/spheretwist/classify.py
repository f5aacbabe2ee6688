"""Isomorphism test for rational real surfaces.

Every such surface is either the torus or the sphere blown up at ``m``
distinct points.  Two blow-ups are isomorphic exactly when they blow up
the same number of points.  The witness is a sphere automorphism carrying
one set of centers onto the other.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional, Sequence, Tuple

from .engine import AutomorphismPlan, TransitivityInstance, solve
from .sphere import SpherePoint

__all__ = ["TORUS", "SPHERE_BLOWUP", "SurfaceDescriptor", "IsomorphismDecision", "are_isomorphic"]

TORUS = "torus"
SPHERE_BLOWUP = "sphere_blowup"


@dataclass(frozen=True)
class SurfaceDescriptor:
    kind: str
    blowup_points: Tuple[SpherePoint, ...] = ()

    def __post_init__(self):
        pts = tuple(self.blowup_points)
        object.__setattr__(self, "blowup_points", pts)
        if self.kind == TORUS:
            if pts:
                raise ValueError("a torus descriptor carries no points")
        elif self.kind == SPHERE_BLOWUP:
            if len(set(pts)) != len(pts):
                raise ValueError("blow-up centers must be pairwise distinct")
        else:
            raise ValueError(f"unknown surface kind {self.kind!r}")

    @classmethod
    def torus(cls) -> "SurfaceDescriptor":
        return cls(TORUS)

    @classmethod
    def sphere_blowup(cls, points: Sequence[SpherePoint] = ()) -> "SurfaceDescriptor":
        return cls(SPHERE_BLOWUP, tuple(points))

    @property
    def m(self) -> int:
        return len(self.blowup_points)

    @property
    def euler_characteristic(self) -> int:
        return 0 if self.kind == TORUS else 2 - self.m

    @property
    def orientable(self) -> bool:
        return self.kind == TORUS or self.m == 0

    @property
    def invariant(self) -> Tuple[bool, int]:
        """Topological type ``(orientable, Euler characteristic)``."""
        return self.orientable, self.euler_characteristic

    def to_json(self) -> dict:
        return {"kind": self.kind, "points": [p.to_json() for p in self.blowup_points]}

    @classmethod
    def from_json(cls, data) -> "SurfaceDescriptor":
        return cls(data["kind"], tuple(SpherePoint.from_json(p) for p in data.get("points", [])))


@dataclass(frozen=True)
class IsomorphismDecision:
    isomorphic: bool
    witness: Optional[AutomorphismPlan] = None
    reason: str = ""

    def __bool__(self):
        return self.isomorphic

    def to_json(self) -> dict:
        out = {"isomorphic": self.isomorphic, "reason": self.reason}
        if self.witness is not None:
            out["witness"] = self.witness.to_json()
        return out


def are_isomorphic(X: SurfaceDescriptor, Y: SurfaceDescriptor) -> IsomorphismDecision:
    """Decide ``X ~ Y``; blow-up pairs come with a certified witness.

    The witness sends the i-th center of ``X`` to the i-th center of ``Y``.
    """
    if X.kind != Y.kind:
        return IsomorphismDecision(False, None, "torus versus sphere blow-up")
    if X.kind == TORUS:
        return IsomorphismDecision(True, None, "both tori")
    if X.m != Y.m:
        return IsomorphismDecision(False, None, f"blow-ups at {X.m} and {Y.m} points")
    plan = solve(TransitivityInstance(X.blowup_points, Y.blowup_points))
    return IsomorphismDecision(True, plan, f"both blown up at {X.m} points")
