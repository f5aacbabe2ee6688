"""Build sphere automorphisms carrying one tuple of points onto another.

Pipeline for sources ``P_j`` and targets ``Q_j``:

1. one normalization ``M`` (pre-rotation + boost) pushes every point into the
   polar cap ``z > 1/sqrt(2)``;
2. horizontal orthogonal axes ``W, W'`` are picked so that the ``P_j`` sit on
   distinct parallels for ``W`` and the ``Q_j`` on distinct parallels for
   ``W'``;
3. ``R_j`` is the upper intersection of the ``W``-parallel of ``P_j`` with the
   ``W'``-parallel of ``Q_j``;
4. a twist about ``W`` sends ``P_j`` to ``R_j`` and a twist about ``W'``
   sends ``R_j`` to ``Q_j``;
5. ``M`` is undone.

Points that must stay put are passed as extra source/target pairs.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, List, Optional, Sequence, Tuple

from .interpolation import Rotation2, interpolate_rotations, rational_enumeration
from .poly import RationalMap, poly_compose
from .sphere import (
    DEFAULT_CAP_THRESHOLD,
    SPHERE_VARS,
    AxisFrame,
    Boost,
    PrimitiveAutomorphism,
    Rotation,
    SpherePoint,
    normalize_to_cap,
)
from .tower import DomainError, TowerScalar, canonical_sqrt, format_rational
from .twist import TwistMap

__all__ = [
    "TransitivityInstance",
    "AutomorphismPlan",
    "CertificateRow",
    "GeometricInfeasibilityError",
    "DegenerateRotationError",
    "choose_axes",
    "intersect_parallels",
    "rotation_between",
    "solve",
    "step_from_json",
]


class GeometricInfeasibilityError(DomainError):
    """Two parallels that were required to meet do not."""


class DegenerateRotationError(DomainError):
    pass


def _s(v) -> TowerScalar:
    return v if isinstance(v, TowerScalar) else TowerScalar(v)


def _first_duplicate(points: Sequence[SpherePoint]) -> Optional[SpherePoint]:
    seen = set()
    for p in points:
        if p in seen:
            return p
        seen.add(p)
    return None


@dataclass(frozen=True)
class TransitivityInstance:
    sources: Tuple[SpherePoint, ...]
    targets: Tuple[SpherePoint, ...]
    fixed: Tuple[SpherePoint, ...] = ()

    def __post_init__(self):
        for name in ("sources", "targets", "fixed"):
            object.__setattr__(self, name, tuple(getattr(self, name)))
        if len(self.sources) != len(self.targets):
            raise ValueError(
                f"{len(self.sources)} sources but {len(self.targets)} targets"
            )
        for label, pts in (("source", self.all_sources), ("target", self.all_targets)):
            dup = _first_duplicate(pts)
            if dup is not None:
                raise ValueError(f"duplicate {label} point {dup}")

    @property
    def all_sources(self) -> Tuple[SpherePoint, ...]:
        return self.fixed + self.sources

    @property
    def all_targets(self) -> Tuple[SpherePoint, ...]:
        return self.fixed + self.targets

    def to_json(self) -> dict:
        return {
            "sources": [p.to_json() for p in self.sources],
            "targets": [p.to_json() for p in self.targets],
            "fixed": [p.to_json() for p in self.fixed],
        }

    @classmethod
    def from_json(cls, data) -> "TransitivityInstance":
        def pts(key):
            return tuple(SpherePoint.from_json(p) for p in data.get(key, []))

        return cls(pts("sources"), pts("targets"), pts("fixed"))


@dataclass(frozen=True)
class CertificateRow:
    source: SpherePoint
    image: SpherePoint
    target: SpherePoint

    @property
    def ok(self) -> bool:
        return self.image == self.target

    def to_json(self) -> dict:
        return {
            "source": self.source.to_json(),
            "image": self.image.to_json(),
            "target": self.target.to_json(),
            "ok": self.ok,
        }


def step_from_json(data) -> PrimitiveAutomorphism:
    kind = data["kind"]
    if kind == "rotation":
        return Rotation.from_json(data)
    if kind == "boost":
        return Boost.from_json(data)
    if kind == "twist":
        return TwistMap.from_json(data)
    raise ValueError(f"unknown step kind {kind!r}")


@dataclass(frozen=True)
class AutomorphismPlan:
    """Composition of primitive automorphisms, applied left to right."""

    steps: Tuple[PrimitiveAutomorphism, ...] = ()
    certificate: Tuple[CertificateRow, ...] = ()
    provenance: Dict = field(default_factory=dict, compare=False, hash=False)

    def __post_init__(self):
        object.__setattr__(self, "steps", tuple(self.steps))
        object.__setattr__(self, "certificate", tuple(self.certificate))

    def apply(self, p: SpherePoint) -> SpherePoint:
        for step in self.steps:
            p = step.apply(p)
        return p

    __call__ = apply

    def trajectory(self, p: SpherePoint) -> List[SpherePoint]:
        out = [p]
        for step in self.steps:
            out.append(step.apply(out[-1]))
        return out

    @property
    def verified(self) -> bool:
        return all(row.ok for row in self.certificate)

    def certify(self, sources: Sequence[SpherePoint], targets: Sequence[SpherePoint]) -> "AutomorphismPlan":
        rows = tuple(CertificateRow(s, self.apply(s), t) for s, t in zip(sources, targets))
        return AutomorphismPlan(self.steps, rows, self.provenance)

    def inverse(self) -> "AutomorphismPlan":
        steps = tuple(s.inverse() for s in reversed(self.steps))
        plan = AutomorphismPlan(steps, (), {"inverse_of": self.provenance})
        rows = self.certificate
        return plan.certify([r.target for r in rows], [r.source for r in rows]) if rows else plan

    def then(self, other: "AutomorphismPlan") -> "AutomorphismPlan":
        """Apply ``self`` first, then ``other``."""
        return AutomorphismPlan(
            self.steps + other.steps, (), {"composed": [self.provenance, other.provenance]}
        )

    def flatten(self, full_gcd: bool = False) -> RationalMap:
        """The whole plan as a single rational map in ``(x, y, z)``."""
        result = RationalMap.identity(SPHERE_VARS, "all of S^2")
        for step in self.steps:
            result = poly_compose(step.to_rational_map(), result, full_gcd, "all of S^2")
        return result

    def degree_report(self, flat: Optional[RationalMap] = None) -> dict:
        flat = flat or self.flatten()
        return {
            "components": [
                {"numerator_degree": n, "denominator_degree": d} for n, d in flat.degrees()
            ],
            "max_degree": max((max(n, d) for n, d in flat.degrees()), default=0),
        }

    def to_json(self) -> dict:
        return {
            "steps": [s.to_json() for s in self.steps],
            "certificate": [r.to_json() for r in self.certificate],
            "provenance": self.provenance,
        }

    @classmethod
    def from_json(cls, data) -> "AutomorphismPlan":
        steps = tuple(step_from_json(s) for s in data.get("steps", []))
        rows = tuple(
            CertificateRow(
                SpherePoint.from_json(r["source"]),
                SpherePoint.from_json(r["image"]),
                SpherePoint.from_json(r["target"]),
            )
            for r in data.get("certificate", [])
        )
        return cls(steps, rows, data.get("provenance", {}))

    def dumps(self) -> str:
        return json.dumps(self.to_json(), sort_keys=True, separators=(",", ":"))


def _horizontal(t: Fraction) -> Tuple[Fraction, Fraction]:
    d = 1 + t * t
    return (1 - t * t) / d, 2 * t / d


def _distinct(values: Sequence[TowerScalar]) -> bool:
    return len(set(values)) == len(values)


def choose_axes(points_P: Sequence[SpherePoint], points_Q: Sequence[SpherePoint]) -> Tuple[AxisFrame, AxisFrame, Fraction]:
    """Orthogonal horizontal frames separating the P's and the Q's by parallels.

    Returns ``(frame_W, frame_W', t)`` where ``W = ((1-t^2), 2t, 0)/(1+t^2)``
    and ``W'`` is ``W`` turned by a quarter turn in the xy-plane.
    """
    for t in rational_enumeration():
        c, s = _horizontal(t)
        W = AxisFrame.horizontal(c, s)
        Wp = AxisFrame.horizontal(-s, c)
        if _distinct([W.split(p)[0] for p in points_P]) and _distinct([Wp.split(q)[0] for q in points_Q]):
            return W, Wp, t
    raise AssertionError("unreachable")  # pragma: no cover


def intersect_parallels(xP, xQ, W: AxisFrame, Wp: AxisFrame) -> SpherePoint:
    """Upper point with height ``xP`` along ``W`` and ``xQ`` along ``W'``.

    ``W`` and ``W'`` must be orthonormal and horizontal.
    """
    xP, xQ = _s(xP), _s(xQ)
    rest = 1 - xP * xP - xQ * xQ
    if rest.sign() <= 0:
        raise GeometricInfeasibilityError(
            f"parallels at heights {xP} and {xQ} do not meet in two points"
        )
    if not rest.is_rational():
        raise DomainError("heights must be rational to take the exact square root")
    s = canonical_sqrt(rest.rational_part())
    coords = tuple(xP * w + xQ * wp for w, wp in zip(W.axis, Wp.axis))
    return SpherePoint(coords[0], coords[1], coords[2] + s)


def rotation_between(u: Sequence, v: Sequence) -> Rotation2:
    """The rotation taking plane vector ``u`` to ``v`` (``|u| == |v| != 0``)."""
    u1, u2 = (_s(c) for c in u)
    v1, v2 = (_s(c) for c in v)
    rho2 = u1 * u1 + u2 * u2
    if not rho2:
        raise DegenerateRotationError("rotation between zero vectors is undefined")
    if rho2 != v1 * v1 + v2 * v2:
        raise DomainError("vectors of different length are not related by a rotation")
    inv = rho2.inverse()
    return Rotation2((u1 * v1 + u2 * v2) * inv, (u1 * v2 - u2 * v1) * inv)


def _plane_part(frame: AxisFrame, p) -> Tuple[TowerScalar, TowerScalar]:
    _, a, b = frame.split(p)
    return a, b


def _twist_through(frame: AxisFrame, starts: Sequence[SpherePoint], ends: Sequence[SpherePoint]) -> Tuple[TwistMap, Rotation2]:
    nodes = [frame.split(p)[0] for p in starts]
    rots = [rotation_between(_plane_part(frame, p), _plane_part(frame, q)) for p, q in zip(starts, ends)]
    f = interpolate_rotations(nodes, rots)
    return TwistMap(frame, f), f.projection_point


def solve(instance: TransitivityInstance, cap_threshold=DEFAULT_CAP_THRESHOLD) -> AutomorphismPlan:
    """Certified automorphism with ``plan(P_j) == Q_j`` and ``plan(F_i) == F_i``."""
    sources = list(instance.all_sources)
    targets = list(instance.all_targets)
    if sources == targets:
        return AutomorphismPlan((), (), {"shortcut": "identity"}).certify(sources, targets)

    union = list(dict.fromkeys(sources + targets))
    norm = normalize_to_cap(union, cap_threshold)
    moved = dict(zip(union, norm.points))
    P = [moved[p] for p in sources]
    Q = [moved[q] for q in targets]

    W, Wp, t = choose_axes(P, Q)
    R = [intersect_parallels(W.split(p)[0], Wp.split(q)[0], W, Wp) for p, q in zip(P, Q)]

    first, proj1 = _twist_through(W, P, R)
    second, proj2 = _twist_through(Wp, R, Q)

    pre = list(norm.steps)
    post = [s.inverse() for s in reversed(pre)]
    provenance = {
        "pre_rotations": norm.pre_rotations,
        "lambda": format_rational(norm.lam),
        "axis_parameter": format_rational(t),
        "intersection_branch": ["+"] * len(R),
        "intersections": [r.to_json() for r in R],
        "projection_points": [proj1.to_json(), proj2.to_json()],
        "fixed_count": len(instance.fixed),
        "cap_threshold": format_rational(Fraction(cap_threshold)),
    }
    plan = AutomorphismPlan(tuple(pre + [first, second] + post), (), provenance)
    return plan.certify(sources, targets)
