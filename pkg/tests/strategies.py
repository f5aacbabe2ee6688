from fractions import Fraction

from hypothesis import strategies as st

from spheretwist import Rotation2, TowerScalar, sphere_point_from_plane

SMALL_RADICANDS = [2, 3, 5, 6, 7, 10, 11, 13, 14, 15, 21, 30, 35, 105]


def rationals(bits=16, nonzero=False):
    lim = (1 << bits) - 1
    num = st.integers(-lim, lim)
    if nonzero:
        num = num.filter(bool)
    return st.builds(Fraction, num, st.integers(1, lim))


@st.composite
def scalars(draw, max_terms=4, bits=12):
    keys = draw(st.lists(st.sampled_from(SMALL_RADICANDS), max_size=max_terms - 1, unique=True))
    terms = {1: draw(rationals(bits))}
    for k in keys:
        terms[k] = draw(rationals(bits))
    return TowerScalar.from_terms(terms)


def plane_points(bits=8):
    return st.builds(sphere_point_from_plane, rationals(bits), rationals(bits))


def rotations2(bits=8):
    def build(t):
        d = 1 + t * t
        return Rotation2(TowerScalar((1 - t * t) / d), TowerScalar(2 * t / d))

    return st.builds(build, rationals(bits))
