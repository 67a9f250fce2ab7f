import pytest

from nrcubic.bundle import (
    EARLIER_OVER_LATER,
    DiagonalBundle,
    FiberKind,
    GlobalK,
    LocalKP,
    LocalKx,
    MinimalityKind,
    fiber_type,
    sb_normal_form_over,
    segre_minimality,
    snc_check,
    three_planes_locus,
    validate,
)
from nrcubic.errors import InvalidBundle, Unsupported
from nrcubic.function_field import FactoredFn, PlanePoint, class_of, classes_equal, fn, line, make_curve

X, Y, Z = (make_curve(v) for v in "xyz")


def bundle(*coefs):
    return DiagonalBundle(tuple(fn(*c) if isinstance(c, tuple) else c for c in coefs))


def test_validate_refv(refv):
    rep = validate(refv)
    assert rep["status"] == "PASS"
    assert rep["common_degree"] == 3


def test_validate_rejects_shared_factor():
    with pytest.raises(InvalidBundle, match="vanish along x"):
        validate(bundle((("x", 1), ("y", 1)), (("x", 2),), (("x", 1), ("z", 1)), (("x", 1), ("y+z", 1))))


def test_validate_rejects_non_polynomial_and_degrees():
    with pytest.raises(InvalidBundle, match="not a polynomial"):
        validate(bundle((("x", 2), ("y", -1)), (("y", 1),), (("z", 1),), (("x+y", 1),)))
    with pytest.raises(InvalidBundle, match="congruent"):
        validate(bundle((("x", 2),), (("y", 1),), (("z", 1),), (("x+y", 1),)))


def test_zero_coefficient_is_unrepresentable():
    with pytest.raises(ValueError):
        FactoredFn(0)


def test_distinct_conics_are_coprime():
    g = FactoredFn(1, [(make_curve("x^2+y^2-z^2"), 1), (make_curve("x*y-z^2"), 1)])
    g.check_coprime()


def test_fiber_types_refv(refv, f_curve):
    ft = fiber_type(refv, X)
    assert ft.kind is FiberKind.THREE_PLANES
    assert ft.units == (1, 3)
    assert ft.valuations == (1, 0, 1, 0)
    assert classes_equal(ft.gamma, class_of(fn(("y", 1), ("z", 2)), X))
    assert fiber_type(refv, line(1, 1, 1)).kind is FiberKind.SMOOTH
    assert fiber_type(refv, f_curve).kind is FiberKind.CONE


def test_three_planes_locus_refv(refv):
    rep = three_planes_locus(refv)
    expected = {X: fn(("y", 1), ("z", 2)), Y: fn(("x", 2), ("z", 1)), Z: fn(("x", 2), ("y", 1))}
    assert [c for c, _ in rep.locus] == [X, Y, Z]
    for c, gamma in rep.locus:
        assert classes_equal(gamma, class_of(expected[c], c))
    assert rep.non_reduced == []


def test_convention_inverts_gamma(refv):
    a = fiber_type(refv, Y)
    b = fiber_type(refv, Y, EARLIER_OVER_LATER)
    assert classes_equal(a.gamma, b.gamma.inverse())


def test_all_cone_bundle_has_empty_locus():
    b = bundle((("x", 1),), (("y", 1),), (("z", 1),), (("x+y+z", 1),))
    rep = three_planes_locus(b)
    assert rep.locus == [] and rep.non_reduced == []
    assert all(ft.kind is FiberKind.CONE for ft in rep.components)


def test_non_reduced_and_split_planes():
    nr = three_planes_locus(bundle((("x", 1),), (("x", 1),), (("x", 1),), (("y", 1),)))
    assert nr.non_reduced == [X]
    mixed = three_planes_locus(bundle((("x", 1), ("z", 2)), (("x", 1), ("y", 2)), (("y", 3),), (("z", 3),)))
    kinds = {ft.curve: ft.kind for ft in mixed.components}
    assert kinds == {X: FiberKind.SPLIT_PLANES, Y: FiberKind.THREE_PLANES, Z: FiberKind.THREE_PLANES}
    assert [c for c, _ in mixed.locus] == [Y, Z]


def test_snc_examples():
    assert snc_check([X, Y, Z]).ok
    rep = snc_check([X, Y, line(1, 1, 0)])
    assert not rep.ok and rep.witness == "[0:0:1]"
    rep = snc_check([X, X])
    assert not rep.ok and rep.failure == "repeated component"


def test_snc_conics():
    conic = make_curve("x^2+y^2-z^2")
    assert snc_check([conic, X]).ok
    tangent = snc_check([conic, make_curve("x-z")])
    assert not tangent.ok and tangent.witness == "[1:0:1]"
    triple = snc_check([conic, X, line(0, 1, -1)])
    assert not triple.ok and triple.witness == "[0:1:1]"


def test_snc_unsupported_for_cubics(f_curve):
    with pytest.raises(Unsupported):
        snc_check([X, f_curve])


def test_sb_normal_form_refv(refv):
    local = sb_normal_form_over(refv, LocalKx(X))
    assert local.yes and local.pairing == ((0, 1), (2, 3))
    assert not sb_normal_form_over(refv, GlobalK()).yes
    for p in [(0, 0, 1), (0, 1, 0), (1, 0, 0)]:
        r = sb_normal_form_over(refv, LocalKP(PlanePoint.of(*p)))
        assert r.yes and r.local_data["rank"] == 2
    assert sb_normal_form_over(refv, LocalKP(PlanePoint.of(0, 0, 1))).local_data["exponent_matrix"] == [[1, 0], [0, 2]]


def test_segre_refv(refv):
    v = segre_minimality(refv)
    assert v.kind is MinimalityKind.MINIMAL
    assert v.labeling == {"a'": "a", "b'": "b", "ab'": "c", "f'": "d"}
    assert [cube for _, _, cube in v.segre_elements] == [False] * 6


def test_segre_sb_birational():
    b = bundle((("x", 1), ("z", 2)), (("y", 1), ("z", 2)), (("x", 1), ("y", 1), ("z", 1)), (("x+y+z", 3),))
    v = segre_minimality(b)
    assert v.kind is MinimalityKind.SB_BIRATIONAL
    assert v.witness is not None


def test_segre_unknown_when_split():
    v = segre_minimality(bundle((("x", 1),), (("y", 1),), (("x", 1),), (("y", 1),)))
    assert v.kind is MinimalityKind.UNKNOWN


def test_segre_labeling_search():
    # no pairing matches without rescaling; the rescaled labeling does
    v = segre_minimality(bundle((("x", 1),), (("y", 1),), (("z", 1),), (("x+y+z", 1),)))
    assert v.kind is MinimalityKind.MINIMAL


def test_reduce_cubes_preserves_verdicts(refv):
    cube = FactoredFn(1, [(line(1, 2, 3), 3)])
    a, b, c, d = refv.coefficients
    fat = DiagonalBundle((a * cube, b, c, d))
    assert fat.reduce_cubes().coefficients == refv.coefficients
    assert segre_minimality(fat).kind is MinimalityKind.MINIMAL
    assert [c for c, _ in three_planes_locus(fat).locus] == [X, Y, Z]
