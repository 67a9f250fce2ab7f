import random
from fractions import Fraction

import pytest

from nrcubic.errors import (
    CarrierMismatch,
    NotIrreducible,
    PointNotOnCurve,
    UnsupportedCurve,
    UnsupportedLocalGeometry,
)
from nrcubic.function_field import (
    CubeClass,
    FactoredFn,
    Irreducibility,
    PlanePoint,
    class_of,
    classes_equal,
    cube_class_inv,
    cube_class_mul,
    fn,
    is_cube_in_K,
    is_cube_in_KP,
    is_cube_in_Kx,
    line,
    make_curve,
    point_residue,
    residue_unit,
    twist_to_degree_zero,
    valuation,
)
from helpers import random_fn, random_line

X, Y, Z = (make_curve(v) for v in "xyz")
pt = PlanePoint.of


def test_plane_point_normalization():
    assert PlanePoint.of(0, 2, 4) == PlanePoint.of(0, 1, 2)
    assert str(PlanePoint.of(0, 0, 3)) == "[0:0:1]"
    assert PlanePoint.of(-2, 1, 0).coords == (1, Fraction(-1, 2), 0)


def test_curve_statuses(f_curve):
    assert X.status is Irreducibility.PROVEN_LINE
    assert make_curve("x^2+y^2-z^2").status is Irreducibility.PROVEN_CONIC
    assert f_curve.status is Irreducibility.ATTESTED
    assert make_curve("2*x+4*y") == make_curve("-x-2*y")


@pytest.mark.parametrize("expr", ["x^2-y^2", "x^2", "x^3+y^3+z^3", "x^2*y+x*y^2"])
def test_curve_rejections(expr):
    with pytest.raises(NotIrreducible):
        make_curve(expr)


def test_attested_squareful_refuted():
    with pytest.raises(NotIrreducible):
        make_curve("x^2*y", attested=True)


def test_conic_without_rational_point_is_unsupported():
    c = make_curve("x^2+y^2+z^2")
    assert c.parametrization is None
    with pytest.raises(UnsupportedCurve):
        residue_unit(fn(("x", 1), ("z", -1)), c)


def test_valuation_examples():
    g = fn(("x", 1), ("z", -1))
    assert valuation(g, X) == 1
    assert valuation(g, Y) == 0
    assert valuation(g, Z) == -1


def test_residue_unit_examples(f_curve):
    r = residue_unit(fn(("y", 2), ("z", 1)), X)
    assert not r.is_trivial()
    assert point_residue(r, pt(0, 0, 1)) == 2   # y = 0 point
    assert point_residue(r, pt(0, 1, 0)) == 1   # z = 0 point
    assert residue_unit(fn((f_curve, 1)), X).is_trivial()
    g = fn(("x+2*y-z", 1), ("y", -1))
    assert residue_unit(g ** 3, X).is_trivial()


def test_class_group_laws():
    yz2 = class_of(fn(("y", 1), ("z", 2)), X)
    y2z = class_of(fn(("y", 2), ("z", 1)), X)
    assert classes_equal(yz2 ** 2, y2z)
    assert cube_class_mul(yz2, cube_class_inv(yz2)).is_trivial()
    assert classes_equal(class_of(fn(("z", 1), ("y", -1)), X), cube_class_inv(yz2))
    assert classes_equal(yz2 * y2z, CubeClass.identity(X))


def test_carrier_mismatch():
    a = class_of(fn(("y", 1), ("z", -1)), X)
    b = class_of(fn(("x", 1), ("z", -1)), Y)
    with pytest.raises(CarrierMismatch):
        a * b


def test_cube_tests(f_curve):
    assert not is_cube_in_K(fn(("x", 1), ("z", 2)))
    assert is_cube_in_K(fn(("x", 3), ("z", 6)))
    assert is_cube_in_K(fn(("x", 1), ("y", 2), ("z", 3))) == is_cube_in_K(fn(("x", 1), ("y", 2))) is False
    d0 = lambda g: g * FactoredFn(1, [(Z, -g.degree)])
    assert is_cube_in_Kx(d0(fn((f_curve, 1))), X)
    assert not is_cube_in_Kx(fn(("x", 1), ("z", -1)), X)
    assert not is_cube_in_Kx(fn(("y", 2), ("z", -2)), X)
    assert is_cube_in_KP(fn((f_curve, 1)), pt(0, 0, 1))
    assert not is_cube_in_KP(fn(("x", 1)), pt(0, 0, 1))
    assert not is_cube_in_KP(fn(("x", 3), ("x+y", 1)), pt(1, -1, 0))


def test_is_cube_in_KP_singular_branch():
    nodal = make_curve("y^2*z-x^3-x^2*z", attested=True)
    with pytest.raises(UnsupportedLocalGeometry):
        is_cube_in_KP(fn((nodal, 1)), pt(0, 0, 1))
    assert is_cube_in_KP(fn((nodal, 3)), pt(0, 0, 1))


def test_point_residue_examples():
    y2z = class_of(fn(("y", 2), ("z", 1)), X)
    yz2 = class_of(fn(("y", 1), ("z", 2)), X)
    assert point_residue(y2z, pt(0, 0, 1), 1) == 2
    assert point_residue(CubeClass.identity(X), pt(0, 1, 0), 2) == 0
    assert point_residue(yz2, pt(0, 1, 0), -1) == 1
    with pytest.raises(PointNotOnCurve):
        point_residue(yz2, pt(1, 0, 0))


def test_conic_carrier():
    c = make_curve("x^2+y^2-z^2")
    r = residue_unit(fn(("x", 1), ("z", -1)), c)
    # x restricted to the conic vanishes at [0:1:1] and [0:1:-1]
    assert point_residue(r, pt(0, 1, 1)) == 1
    assert point_residue(r, pt(0, 1, -1)) == 1


# -- properties ------------------------------------------------------------------

def test_valuation_additive():
    rng = random.Random(1)
    for _ in range(100):
        g, h, c = random_fn(rng), random_fn(rng), random_line(rng)
        assert valuation(g * h, c) == valuation(g, c) + valuation(h, c)


def test_residue_unit_multiplicative():
    rng = random.Random(2)
    z = make_curve("z")
    for _ in range(100):
        c = random_line(rng)
        if c == z:
            continue
        # degree-0 units along c
        g, h = (twist_to_degree_zero(random_fn(rng).without(c)) for _ in range(2))
        assert classes_equal(residue_unit(g * h, c), residue_unit(g, c) * residue_unit(h, c))


def test_chart_independence():
    c = line(1, 1, 1)
    g = fn((c, 3), ("x", 1), ("y", -1), ("z", -3))
    assert classes_equal(residue_unit(g, c, chart=make_curve("z")), residue_unit(g, c, chart=make_curve("y")))
    rng = random.Random(3)
    for _ in range(50):
        c = random_line(rng)
        if c in (make_curve("y"), make_curve("z")):
            continue
        g = random_fn(rng).without(c)
        g = twist_to_degree_zero(g * FactoredFn(1, [(c, 3 * rng.randint(-1, 1))]))
        assert classes_equal(residue_unit(g, c, chart=make_curve("z")), residue_unit(g, c, chart=make_curve("y")))


def test_point_residues_sum_to_zero():
    rng = random.Random(4)
    for _ in range(100):
        c = random_line(rng)
        g = random_fn(rng).without(c)
        cls = residue_unit(g, c)
        total = cls.infinity_exponent + sum(p.degree * e for p, e in cls.finite_part)
        assert total % 3 == 0
        pts, irr = cls.rational_support()
        assert (sum(e for _, e in pts) + sum(p.degree * e for p, e in irr)) % 3 == 0


def test_cube_in_K_implies_local_cubes():
    rng = random.Random(5)
    for _ in range(50):
        g = random_fn(rng) ** 3
        c = random_line(rng)
        assert is_cube_in_Kx(g, c)
        assert is_cube_in_KP(g, pt(0, 0, 1))
