import random

import pytest

from spheretwist.classify import SurfaceDescriptor, are_isomorphic
from spheretwist.sampling import random_distinct_points
from spheretwist.sphere import SpherePoint


def blowup(seed, m):
    return SurfaceDescriptor.sphere_blowup(random_distinct_points(random.Random(seed), m))


def test_torus_pair():
    d = are_isomorphic(SurfaceDescriptor.torus(), SurfaceDescriptor.torus())
    assert d.isomorphic and d.witness is None


def test_different_number_of_points():
    assert not are_isomorphic(blowup(1, 2), blowup(2, 3))


def test_three_point_blowups_with_witness():
    X, Y = blowup(3, 3), blowup(4, 3)
    d = are_isomorphic(X, Y)
    assert d.isomorphic and d.witness.verified
    assert [d.witness(p) for p in X.blowup_points] == list(Y.blowup_points)


@pytest.mark.parametrize("m", [0, 1, 2])
def test_torus_versus_blowup(m):
    assert not are_isomorphic(SurfaceDescriptor.torus(), blowup(5, m))
    assert not are_isomorphic(blowup(5, m), SurfaceDescriptor.torus())


def test_invariants():
    assert SurfaceDescriptor.torus().invariant == (True, 0)
    assert blowup(0, 0).invariant == (True, 2)
    assert blowup(0, 1).invariant == (False, 1)
    assert blowup(0, 3).invariant == (False, -1)


def test_decision_ignores_point_order():
    X, Y = blowup(6, 3), blowup(7, 3)
    shuffled = SurfaceDescriptor.sphere_blowup(list(reversed(Y.blowup_points)))
    assert are_isomorphic(X, Y).isomorphic == are_isomorphic(X, shuffled).isomorphic
    d = are_isomorphic(X, shuffled)
    assert [d.witness(p) for p in X.blowup_points] == list(shuffled.blowup_points)


def test_descriptor_validation():
    p = SpherePoint(1, 0, 0)
    with pytest.raises(ValueError):
        SurfaceDescriptor("torus", (p,))
    with pytest.raises(ValueError):
        SurfaceDescriptor.sphere_blowup([p, p])
    with pytest.raises(ValueError):
        SurfaceDescriptor("klein_bottle")


def test_json_round_trip():
    X = blowup(8, 2)
    assert SurfaceDescriptor.from_json(X.to_json()) == X
    out = are_isomorphic(X, blowup(9, 2)).to_json()
    assert out["isomorphic"] is True and "witness" in out
