from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from spheretwist.poly import reduce_mod_sphere
from spheretwist.sphere import (
    NORTH,
    SOUTH,
    AxisFrame,
    Boost,
    NotOnSphereError,
    Rotation,
    SpherePoint,
    boost,
    dot,
    in_cap,
    normalize_to_cap,
    parallel_height,
    sphere_point_from_plane,
)
from spheretwist.tower import DomainError, TowerScalar
from strategies import plane_points, rationals

F = Fraction
quaternions = st.tuples(*(st.integers(-9, 9) for _ in range(4))).filter(any)


def sphere_defect(m):
    """``sum(num_i^2) - den^2`` reduced modulo the sphere, for a common denominator."""
    dens = {d for _, d in m.components}
    assert len(dens) == 1
    (den,) = dens
    total = -(den * den)
    for num, _ in m.components:
        total = total + num * num
    return reduce_mod_sphere(total)


@pytest.mark.parametrize(
    "u, v, expected",
    [
        (0, 0, (0, 0, -1)),
        (1, 0, (1, 0, 0)),
        (F(1, 2), 0, (F(4, 5), 0, F(-3, 5))),
    ],
)
def test_sphere_point_from_plane(u, v, expected):
    assert sphere_point_from_plane(u, v) == SpherePoint(*expected)


@given(rationals(32), rationals(32))
def test_plane_lift_is_on_sphere(u, v):
    p = sphere_point_from_plane(u, v)
    assert p.x * p.x + p.y * p.y + p.z * p.z == 1
    assert all(c.is_rational() for c in p)


def test_off_sphere_rejected():
    with pytest.raises(NotOnSphereError, match="not on S"):
        SpherePoint(1, 0, 1)


def test_point_json_accepts_plane_parameters():
    assert SpherePoint.from_json({"u": "1/2", "v": "0"}) == SpherePoint(F(4, 5), 0, F(-3, 5))
    p = SpherePoint(0, F(3, 5), F(-4, 5))
    assert SpherePoint.from_json(p.to_json()) == p


# -- boosts ------------------------------------------------------------------------


def test_boost_examples():
    assert boost(2)(SpherePoint(1, 0, 0)) == SpherePoint(F(4, 5), 0, F(3, 5))
    assert boost(2)(NORTH) == NORTH
    assert boost(2)(SOUTH) == SOUTH


@given(plane_points())
def test_boost_one_is_identity(p):
    assert boost(1)(p) == p


@pytest.mark.parametrize("lam", [0, -1, F(-1, 2)])
def test_boost_rejects_nonpositive(lam):
    with pytest.raises(DomainError):
        boost(lam)


@settings(max_examples=100)
@given(plane_points(), rationals(8, nonzero=True))
def test_boost_inverse(p, lam):
    b = boost(abs(lam))
    assert b.inverse()(b(p)) == p
    assert b.inverse() == Boost(1 / abs(lam))


@given(rationals(8), rationals(8))
def test_boost_is_planar_scaling(u, v):
    # stereographic conjugate of the boost is w -> lam * w
    assert boost(3)(sphere_point_from_plane(u, v)) == sphere_point_from_plane(3 * u, 3 * v)


def test_boost_sphere_identity():
    assert sphere_defect(boost(F(5, 3)).to_rational_map()).is_zero()


# -- rotations ------------------------------------------------------------------------


@given(quaternions, plane_points(), plane_points())
def test_rotation_preserves_inner_products(q, p, r):
    rot = Rotation.from_quaternion(*q)
    assert dot(tuple(rot(p)), tuple(rot(r))) == dot(tuple(p), tuple(r))
    assert rot.inverse()(rot(p)) == p


@given(quaternions)
def test_rotation_sphere_identity(q):
    assert sphere_defect(Rotation.from_quaternion(*q).to_rational_map()).is_zero()


def test_rotation_validation():
    with pytest.raises(DomainError):
        Rotation(((1, 0, 0), (0, 1, 0), (0, 0, -1)))
    with pytest.raises(DomainError):
        Rotation(((1, 1, 0), (0, 1, 0), (0, 0, 1)))


def test_rotation_json_round_trip():
    r = Rotation.about_x(F(3, 5), F(4, 5))
    assert Rotation.from_json(r.to_json()) == r


# -- frames and parallels ------------------------------------------------------------


def test_parallel_height_examples():
    frame = AxisFrame.horizontal(1, 0)
    assert parallel_height(SpherePoint(1, 0, 0), frame) == 1
    assert parallel_height(SpherePoint(0, 1, 0), frame) == 0
    assert parallel_height(SpherePoint(F(4, 5), 0, F(3, 5)), frame) == F(4, 5)


def test_frame_validation():
    with pytest.raises(DomainError):
        AxisFrame((1, 0, 0), (0, 1, 0), (0, 0, -1))
    with pytest.raises(DomainError):
        AxisFrame((1, 0, 0), (1, 0, 0), (0, 1, 0))


@given(quaternions)
def test_frame_from_rotation_is_right_handed(q):
    frame = AxisFrame.from_rotation(Rotation.from_quaternion(*q))
    assert AxisFrame.from_json(frame.to_json()) == frame


def test_split_assemble_round_trip():
    frame = AxisFrame.horizontal(F(3, 5), F(4, 5))
    p = SpherePoint(F(2, 3), F(1, 3), F(2, 3))
    assert SpherePoint(*frame.assemble(*frame.split(p))) == p


# -- normalization ---------------------------------------------------------------------


def test_normalize_points_already_in_cap():
    pts = [NORTH, SpherePoint(F(3, 5), 0, F(4, 5))]
    norm = normalize_to_cap(pts)
    assert norm.steps == [] and norm.points == pts


def test_normalize_south_pole():
    norm = normalize_to_cap([SOUTH])
    assert norm.pre_rotations >= 1
    (image,) = norm.points
    assert in_cap(image, F(1, 2))
    p = SOUTH
    for step in norm.steps:
        p = step(p)
    assert p == image


def test_normalize_equator_points_by_doubling():
    pts = [SpherePoint(1, 0, 0), SpherePoint(0, 1, 0)]
    norm = normalize_to_cap(pts)
    assert norm.pre_rotations == 0
    lam = int(norm.lam)
    assert lam == norm.lam and lam & (lam - 1) == 0
    half = TowerScalar(F(1, 2))
    for q in norm.points:
        assert q.z.sign() > 0 and q.z * q.z > half
    # the previous power of two is not enough
    weaker = Boost(norm.lam / 2)
    assert not all(in_cap(weaker(p), F(1, 2)) for p in pts)


@settings(max_examples=30)
@given(st.lists(plane_points(), min_size=1, max_size=6, unique=True))
def test_normalize_lands_in_cap(pts):
    norm = normalize_to_cap(pts)
    for p, q in zip(pts, norm.points):
        assert in_cap(q, F(1, 2))
        r = p
        for step in norm.steps:
            r = step(r)
        assert r == q
