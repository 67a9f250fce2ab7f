"""Rational functions on P^2 in factored form, valuations along curves, and
cube classes on rational curves.

Everything is computed geometrically (over the algebraic closure): nonzero
constants are cubes, so a function on a genus-0 curve is a cube iff its
divisor is divisible by 3.  Conjugate points share the multiplicity of their
rational irreducible factor, which is why squarefree decomposition of the
restricted binary forms is enough and no root finding is needed.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from functools import lru_cache
from functools import reduce
from math import isqrt, lcm
from typing import Iterable, Sequence

from .errors import (
    CarrierMismatch,
    NotIrreducible,
    PointNotOnCurve,
    UnsupportedCurve,
    UnsupportedLocalGeometry,
)
from .parser import format_poly, parse_poly
from .poly import (
    HPoly,
    Parametrization,
    Restriction,
    gcd_multivariate,
    is_squarefree,
    line_parametrization,
    restrict,
)
from .upoly import UPoly, ugcd, yun_squarefree


# ---------------------------------------------------------------------------
# points
# ---------------------------------------------------------------------------

@dataclass(frozen=True, order=True)
class PlanePoint:
    coords: tuple[Fraction, Fraction, Fraction]

    def __init__(self, coords: Sequence):
        c = [Fraction(v) for v in coords]
        if not any(c):
            raise ValueError("[0:0:0] is not a point")
        lead = next(v for v in c if v)
        object.__setattr__(self, "coords", tuple(v / lead for v in c))

    @classmethod
    def of(cls, x, y, z) -> PlanePoint:
        return cls((x, y, z))

    def __str__(self) -> str:
        return "[" + ":".join(str(v) for v in self.coords) + "]"

    def __iter__(self):
        return iter(self.coords)


def _proportional(a: Sequence, b: Sequence) -> bool:
    return (a[0] * b[1] - a[1] * b[0] == 0 and a[0] * b[2] - a[2] * b[0] == 0
            and a[1] * b[2] - a[2] * b[1] == 0)


def line_through(p: PlanePoint, q: PlanePoint) -> HPoly:
    (a1, a2, a3), (b1, b2, b3) = p.coords, q.coords
    return HPoly.linear(a2 * b3 - a3 * b2, a3 * b1 - a1 * b3, a1 * b2 - a2 * b1)


def line_intersection(l1: HPoly, l2: HPoly) -> PlanePoint:
    a = [l1.coefficient(m) for m in ((1, 0, 0), (0, 1, 0), (0, 0, 1))]
    b = [l2.coefficient(m) for m in ((1, 0, 0), (0, 1, 0), (0, 0, 1))]
    return PlanePoint((a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0]))


# ---------------------------------------------------------------------------
# curves
# ---------------------------------------------------------------------------

class Irreducibility(str, Enum):
    PROVEN_LINE = "PROVEN_LINE"
    PROVEN_CONIC = "PROVEN_CONIC"
    ATTESTED = "ATTESTED"


def conic_matrix(q: HPoly) -> list[list[Fraction]]:
    m = [[Fraction(0)] * 3 for _ in range(3)]
    for mono, c in q.terms:
        idx = [i for i in range(3) for _ in range(mono[i])]
        i, j = idx
        if i == j:
            m[i][i] += c
        else:
            m[i][j] += c / 2
            m[j][i] += c / 2
    return m


def _det3(m) -> Fraction:
    return (m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1])
            - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0])
            + m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0]))


def _rational_sqrt(q: Fraction) -> Fraction | None:
    if q < 0:
        return None
    n, d = isqrt(q.numerator), isqrt(q.denominator)
    if n * n == q.numerator and d * d == q.denominator:
        return Fraction(n, d)
    return None


def rational_roots(u: UPoly) -> list[Fraction]:
    """Rational roots of a polynomial of degree <= 2 (enough for lines and conics)."""
    if u.degree == 1:
        return [-u.coeffs[0] / u.coeffs[1]]
    if u.degree == 2:
        c, b, a = u.coeffs
        r = _rational_sqrt(b * b - 4 * a * c)
        if r is None:
            return []
        return sorted({(-b + r) / (2 * a), (-b - r) / (2 * a)})
    raise ValueError("rational_roots only handles degree 1 and 2")


def find_conic_point(q: HPoly, height: int = 8) -> PlanePoint | None:
    """A rational point on the conic, found on a coordinate line or by a
    bounded height search; None if nothing turns up."""
    for line in (HPoly.var("x"), HPoly.var("y"), HPoly.var("z")):
        param = line_parametrization(line)
        r = restrict(q, param)
        if r.infinity_multiplicity > 0:
            return PlanePoint(param.point_at_infinity())
        for s in rational_roots(r.poly) if r.poly.degree > 0 else []:
            return PlanePoint(param.point_at(s))
    rng = range(-height, height + 1)
    for h in range(1, height + 1):
        for p in itertools.product(rng, repeat=3):
            if max(map(abs, p)) == h and q(p) == 0:
                return PlanePoint(p)
    return None


def conic_parametrization(q: HPoly, p0: PlanePoint) -> Parametrization:
    """Project from p0: [s:t] -> Q(R) p0 - 2 B(p0, R) R with R = s e_i + t e_j."""
    m = conic_matrix(q)
    k = max(i for i in range(3) if p0.coords[i])
    i, j = [n for n in range(3) if n != k]
    r = [UPoly(()), UPoly(()), UPoly(())]
    r[i] = UPoly((0, 1))   # s
    r[j] = UPoly((1,))     # t = 1
    qr = UPoly(())
    for a in range(3):
        for b in range(3):
            if m[a][b]:
                qr = qr + r[a] * r[b] * m[a][b]
    bpr = UPoly(())
    for a in range(3):
        for b in range(3):
            if m[a][b] and p0.coords[a]:
                bpr = bpr + r[b] * (m[a][b] * p0.coords[a])
    comps = tuple(qr * p0.coords[n] - bpr * r[n] * 2 for n in range(3))
    return Parametrization(comps, 2)


@dataclass(frozen=True, eq=False)
class Curve:
    """An irreducible plane curve with normalised (primitive, positive leading
    coefficient) defining form."""

    poly: HPoly
    status: Irreducibility
    parametrization: Parametrization | None = None

    def __eq__(self, other) -> bool:
        return isinstance(other, Curve) and self.poly == other.poly

    def __hash__(self) -> int:
        return hash(self.poly)

    def __lt__(self, other: Curve) -> bool:
        return self.sort_key() < other.sort_key()

    def sort_key(self):
        return self.poly.sort_key()

    @property
    def degree(self) -> int:
        return self.poly.degree

    @property
    def parametrizable(self) -> bool:
        return self.parametrization is not None

    def __str__(self) -> str:
        return format_poly(self.poly)

    def __repr__(self) -> str:
        return f"Curve({self})"

    def contains(self, p: PlanePoint) -> bool:
        return self.poly(p.coords) == 0

    def is_smooth_at(self, p: PlanePoint) -> bool:
        return any(g(p.coords) != 0 for g in self.poly.gradient())

    def tangent_at(self, p: PlanePoint) -> tuple[Fraction, Fraction, Fraction]:
        return tuple(g(p.coords) for g in self.poly.gradient())

    def require_parametrization(self) -> Parametrization:
        if self.parametrization is None:
            raise UnsupportedCurve(
                f"curve {self} ({self.status.value}, degree {self.degree}) has no rational "
                "parametrization; only lines and pointed conics carry cube classes",
                curve=str(self),
            )
        return self.parametrization

    def point_at(self, s: Fraction | None) -> PlanePoint:
        """Point with parameter s (None = the point at infinity t = 0)."""
        param = self.require_parametrization()
        return PlanePoint(param.point_at_infinity() if s is None else param.point_at(s))

    def parameter_of(self, p: PlanePoint) -> Fraction | None:
        """Parameter value of a rational point; None means the point t = 0."""
        if not self.contains(p):
            raise PointNotOnCurve(f"{p} does not lie on {self}", point=str(p), curve=str(self))
        param = self.require_parametrization()
        if _proportional(param.point_at_infinity(), p.coords):
            return None
        comps, c = param.components, p.coords
        g = UPoly()
        for a, b in ((0, 1), (0, 2), (1, 2)):
            g = ugcd(g, comps[a] * c[b] - comps[b] * c[a])
        if g.degree != 1:
            raise PointNotOnCurve(f"could not locate {p} on the parametrization of {self}")
        return -g.coeffs[0] / g.coeffs[1]


def normalize_curve_poly(p: HPoly) -> HPoly:
    return p.primitive()


@lru_cache(maxsize=None)
def _make_curve(poly: HPoly, attested: bool, point: PlanePoint | None) -> Curve:
    if poly.degree == 0 or not poly:
        raise ValueError("a curve needs a nonconstant defining form")
    if poly.degree == 1:
        return Curve(poly, Irreducibility.PROVEN_LINE, line_parametrization(poly))
    if not is_squarefree(poly):
        raise NotIrreducible(f"{format_poly(poly)} is not squarefree, hence not irreducible",
                             curve=format_poly(poly))
    if poly.degree == 2:
        if _det3(conic_matrix(poly)) == 0:
            raise NotIrreducible(
                f"conic {format_poly(poly)} is degenerate (rank < 3): a pair of lines over the "
                "algebraic closure; enter its components separately", curve=format_poly(poly))
        if point is None:
            point = find_conic_point(poly)
        elif poly(point.coords) != 0:
            raise PointNotOnCurve(f"supplied point {point} is not on {format_poly(poly)}")
        param = conic_parametrization(poly, point) if point is not None else None
        return Curve(poly, Irreducibility.PROVEN_CONIC, param)
    if not attested:
        raise NotIrreducible(
            f"degree-{poly.degree} factor {format_poly(poly)} needs an attestation of "
            "geometric irreducibility", curve=format_poly(poly))
    return Curve(poly, Irreducibility.ATTESTED, None)


def make_curve(poly: HPoly | str, attested: bool = False, point: PlanePoint | None = None) -> Curve:
    if isinstance(poly, str):
        poly = parse_poly(poly)
    return _make_curve(normalize_curve_poly(poly), attested, point)


def line(a, b, c) -> Curve:
    return make_curve(HPoly.linear(a, b, c))


# ---------------------------------------------------------------------------
# factored rational functions
# ---------------------------------------------------------------------------

@lru_cache(maxsize=None)
def _coprime(p: HPoly, q: HPoly) -> bool:
    if p.degree == 1 and q.degree == 1:
        return p != q
    return gcd_multivariate(p, q).degree == 0


@dataclass(frozen=True)
class FactoredFn:
    """scalar * prod(curve ** exponent), curves pairwise distinct and coprime."""

    scalar: Fraction
    factors: tuple[tuple[Curve, int], ...]

    def __init__(self, scalar=1, factors: Iterable[tuple[Curve, int]] = (), *, merge: bool = True):
        scalar = Fraction(scalar)
        if scalar == 0:
            raise ValueError("FactoredFn scalar must be nonzero")
        acc: dict[Curve, int] = {}
        for c, e in factors:
            if c in acc and not merge:
                raise ValueError(f"repeated factor curve {c}")
            acc[c] = acc.get(c, 0) + e
        items = tuple(sorted(((c, e) for c, e in acc.items() if e), key=lambda t: t[0].sort_key()))
        object.__setattr__(self, "scalar", scalar)
        object.__setattr__(self, "factors", items)

    @classmethod
    def one(cls) -> FactoredFn:
        return cls(1, ())

    def check_coprime(self) -> None:
        curves = self.curves
        for a, b in itertools.combinations(curves, 2):
            if not _coprime(a.poly, b.poly):
                raise NotIrreducible(f"factors {a} and {b} share a component", curves=[str(a), str(b)])

    @property
    def curves(self) -> tuple[Curve, ...]:
        return tuple(c for c, _ in self.factors)

    @property
    def degree(self) -> int:
        return sum(c.degree * e for c, e in self.factors)

    def exponent(self, c: Curve) -> int:
        for cc, e in self.factors:
            if cc == c:
                return e
        return 0

    def is_polynomial(self) -> bool:
        return all(e > 0 for _, e in self.factors)

    def __mul__(self, other: FactoredFn) -> FactoredFn:
        return FactoredFn(self.scalar * other.scalar, self.factors + other.factors)

    def __truediv__(self, other: FactoredFn) -> FactoredFn:
        return self * other.inverse()

    def inverse(self) -> FactoredFn:
        return FactoredFn(1 / self.scalar, tuple((c, -e) for c, e in self.factors))

    def __pow__(self, n: int) -> FactoredFn:
        return FactoredFn(self.scalar ** n, tuple((c, e * n) for c, e in self.factors))

    def without(self, c: Curve) -> FactoredFn:
        return FactoredFn(self.scalar, tuple((cc, e) for cc, e in self.factors if cc != c))

    def expand(self) -> tuple[HPoly, HPoly]:
        """(numerator, denominator) forms."""
        num, den = HPoly.const(self.scalar), HPoly.const(1)
        for c, e in self.factors:
            if e > 0:
                num = num * c.poly ** e
            else:
                den = den * c.poly ** (-e)
        return num, den

    def __str__(self) -> str:
        if not self.factors:
            return str(self.scalar)
        parts = []
        for c, e in self.factors:
            base = str(c) if c.degree == 1 and len(c.poly.terms) == 1 else f"({c})"
            parts.append(base if e == 1 else f"{base}^{e}")
        body = "*".join(parts)
        return body if self.scalar == 1 else f"{self.scalar}*{body}"

    def to_dict(self) -> dict:
        return {
            "scalar": str(self.scalar),
            "factors": [[str(c), e] for c, e in self.factors],
        }


def fn(*pairs, scalar=1) -> FactoredFn:
    """Convenience constructor: fn(("x", 1), ("z", -1))."""
    out = []
    for p, e in pairs:
        c = p if isinstance(p, Curve) else make_curve(p)
        out.append((c, e))
    return FactoredFn(scalar, out)


def twist_to_degree_zero(g: FactoredFn, chart: Curve | None = None) -> FactoredFn:
    """Divide by chart**deg(g); the result lies in K* and, when deg(g) is a
    multiple of 3, has the same class modulo cubes for every chart."""
    d = g.degree
    if d == 0:
        return g
    chart = chart or make_curve("z")
    return g * FactoredFn(1, ((chart, -d),))


# ---------------------------------------------------------------------------
# cube classes on rational curves
# ---------------------------------------------------------------------------

def _coprime_refine(items: list[tuple[UPoly, int]]) -> list[tuple[UPoly, int]]:
    """Rewrite a formal sum of monic squarefree polys as one over pairwise
    coprime monic squarefree polys."""
    work = [(p.monic(), e) for p, e in items if p.degree > 0 and e]
    changed = True
    while changed:
        changed = False
        for a, b in itertools.combinations(range(len(work)), 2):
            (p, e), (q, f) = work[a], work[b]
            g = ugcd(p, q)
            if g.degree > 0:
                rest = [w for k, w in enumerate(work) if k not in (a, b)]
                rest.append((g, e + f))
                pg, qg = p.exact_div(g), q.exact_div(g)
                if pg.degree > 0:
                    rest.append((pg, e))
                if qg.degree > 0:
                    rest.append((qg, f))
                work = rest
                changed = True
                break
    return work


@dataclass(frozen=True)
class CubeClass:
    """Element of kappa(C)*/kappa(C)*^3 for a rational curve C, stored as the
    mod-3 divisor of a representative in the carrier's parameter.

    ``finite_part`` has at most two entries: the product of the points of
    multiplicity 1 and the product of those of multiplicity 2.
    """

    carrier: Curve
    finite_part: tuple[tuple[UPoly, int], ...]
    infinity_exponent: int

    @classmethod
    def identity(cls, carrier: Curve) -> CubeClass:
        return cls(carrier, (), 0)

    @classmethod
    def from_divisor(cls, carrier: Curve, items: Iterable[tuple[UPoly, int]], infinity: int) -> CubeClass:
        refined = _coprime_refine(list(items))
        by_exp: dict[int, UPoly] = {}
        for p, e in refined:
            r = e % 3
            if r:
                by_exp[r] = by_exp.get(r, UPoly((1,))) * p
        finite = tuple((by_exp[r], r) for r in (1, 2) if r in by_exp)
        out = cls(carrier, finite, infinity % 3)
        out._check_balance()
        return out

    @classmethod
    def from_restrictions(cls, carrier: Curve, parts: Iterable[tuple[Restriction, int]]) -> CubeClass:
        """Class of prod(form_i ** e_i) / t**(sum e_i deg form_i)."""
        items, inf = [], 0
        for r, e in parts:
            if e % 3 == 0:
                continue
            sd = yun_squarefree(r.poly)
            items.extend((p, m * e) for p, m in sd.parts)
            inf -= e * r.poly.degree
        return cls.from_divisor(carrier, items, inf)

    def _check_balance(self) -> None:
        total = sum(p.degree * e for p, e in self.finite_part) + self.infinity_exponent
        if total % 3:
            raise AssertionError(f"cube class on {self.carrier} has divisor degree {total} mod 3")

    def is_trivial(self) -> bool:
        return not self.finite_part and self.infinity_exponent == 0

    def __mul__(self, other: CubeClass) -> CubeClass:
        if other.carrier != self.carrier:
            raise CarrierMismatch(f"classes live on {self.carrier} and {other.carrier}")
        return CubeClass.from_divisor(self.carrier, self.finite_part + other.finite_part,
                                      self.infinity_exponent + other.infinity_exponent)

    def inverse(self) -> CubeClass:
        return CubeClass.from_divisor(self.carrier, [(p, -e) for p, e in self.finite_part],
                                      -self.infinity_exponent)

    def __pow__(self, n: int) -> CubeClass:
        n %= 3
        if n == 0:
            return CubeClass.identity(self.carrier)
        return self if n == 1 else self * self

    def order_at(self, s: Fraction | None) -> int:
        if s is None:
            return self.infinity_exponent
        for p, e in self.finite_part:
            if p(s) == 0:
                return e
        return 0

    def support(self) -> list[tuple[UPoly | None, int]]:
        """Support as (irreducible-over-Q block, exponent); None is infinity."""
        out: list[tuple[UPoly | None, int]] = list(self.finite_part)
        if self.infinity_exponent:
            out.append((None, self.infinity_exponent))
        return out

    def rational_support(self) -> tuple[list[tuple[PlanePoint, int]], list[tuple[UPoly, int]]]:
        """Split the support into rational points and irrational blocks."""
        points, irrational = [], []
        for p, e in self.finite_part:
            sd = _factor_linear(p)
            for root in sd[0]:
                points.append((self.carrier.point_at(root), e))
            if sd[1].degree > 0:
                irrational.append((sd[1], e))
        if self.infinity_exponent:
            points.append((self.carrier.point_at(None), self.infinity_exponent))
        return points, irrational

    def to_dict(self) -> dict:
        pts, irr = ([], []) if self.is_trivial() else self.rational_support()
        return {
            "carrier": str(self.carrier),
            "trivial": self.is_trivial(),
            "points": [{"point": str(p), "exponent": e} for p, e in sorted(pts)],
            "irrational_blocks": [{"poly_in_s": str(p), "exponent": e} for p, e in irr],
        }

    def __str__(self) -> str:
        if self.is_trivial():
            return f"1 on {self.carrier}"
        d = self.to_dict()
        body = " + ".join(f"{x['exponent']}*{x['point']}" for x in d["points"])
        if d["irrational_blocks"]:
            extra = " + ".join(f"{x['exponent']}*V({x['poly_in_s']})" for x in d["irrational_blocks"])
            body = f"{body} + {extra}" if body else extra
        return f"[{body}] on {self.carrier}"


def _factor_linear(p: UPoly) -> tuple[list[Fraction], UPoly]:
    """Split off the rational roots of a squarefree polynomial (rational root
    test on the integer-scaled polynomial)."""
    rest = p.monic()
    roots: list[Fraction] = []
    if rest.degree <= 0:
        return roots, rest
    if rest.coeffs[0] == 0:
        roots.append(Fraction(0))
        rest = rest.exact_div(UPoly((0, 1)))
    den = reduce(lcm, (c.denominator for c in rest.coeffs), 1)
    ints = [int(c * den) for c in rest.coeffs]
    lead, const = abs(ints[-1]), abs(ints[0])
    for a in _divisors(const):
        for b in _divisors(lead):
            for cand in (Fraction(a, b), Fraction(-a, b)):
                if rest.degree >= 1 and cand not in roots and rest(cand) == 0:
                    roots.append(cand)
                    rest = rest.exact_div(UPoly((-cand, 1)))
    return sorted(roots), rest


def _divisors(n: int) -> list[int]:
    if n == 0:
        return []
    small = [d for d in range(1, isqrt(n) + 1) if n % d == 0]
    return sorted(set(small + [n // d for d in small]))


# ---------------------------------------------------------------------------
# operations
# ---------------------------------------------------------------------------

def valuation(g: FactoredFn, c: Curve) -> int:
    return g.exponent(c)


@lru_cache(maxsize=None)
def restrict_curve(p: HPoly, carrier: Curve) -> Restriction:
    return restrict(p, carrier.require_parametrization())


def default_chart(c: Curve) -> Curve:
    for name in ("z", "y", "x"):
        ch = make_curve(name)
        if ch != c:
            return ch
    raise AssertionError("unreachable")


def residue_unit(g: FactoredFn, c: Curve, chart: Curve | None = None) -> CubeClass:
    """Class on C of g / pi**v_C(g), pi = C / chart**deg(C)."""
    v = valuation(g, c)
    if all(e % 3 == 0 for cc, e in g.factors if cc != c) and (v * c.degree) % 3 == 0:
        return CubeClass.identity(c)
    c.require_parametrization()
    chart = chart or default_chart(c)
    if chart.degree != 1 or chart == c:
        raise ValueError("chart must be a line different from the carrier")
    parts = [(restrict_curve(cc.poly, c), e) for cc, e in g.factors if cc != c]
    if v:
        parts.append((restrict_curve(chart.poly, c), v * c.degree))
    return CubeClass.from_restrictions(c, parts)


def cube_class_mul(a: CubeClass, b: CubeClass) -> CubeClass:
    return a * b


def cube_class_inv(a: CubeClass) -> CubeClass:
    return a.inverse()


def is_trivial(a: CubeClass) -> bool:
    return a.is_trivial()


def classes_equal(a: CubeClass, b: CubeClass) -> bool:
    return (a * b.inverse()).is_trivial()


def class_of(g: FactoredFn, c: Curve) -> CubeClass:
    """Class of a function that is a unit along C (shorthand used in tests and
    reports, e.g. class[y^2*z] on x = 0)."""
    if valuation(g, c):
        raise ValueError(f"{g} is not a unit along {c}")
    return residue_unit(g, c)


def is_cube_in_K(g: FactoredFn) -> bool:
    return all(e % 3 == 0 for _, e in g.factors)


def is_cube_in_Kx(g: FactoredFn, c: Curve) -> bool:
    """Cube in the completion of K along C: valuation divisible by 3 and cube
    residue (Hensel; residue characteristic is not 3)."""
    v = valuation(g, c)
    if v % 3:
        return False
    if g.degree % 3:
        raise ValueError(f"{g} has degree {g.degree}; its class modulo cubes is chart-dependent")
    return residue_unit(g, c).is_trivial()


def is_cube_in_KP(g: FactoredFn, p: PlanePoint) -> bool:
    """Cube in the fraction field of the completed local ring at P.

    Units there are cubes (Hensel, residue field algebraically closed), so
    only factors through P matter, each a local prime when smooth at P.
    """
    through = [(c, e) for c, e in g.factors if c.contains(p) and e % 3]
    for c, _ in through:
        if not c.is_smooth_at(p):
            raise UnsupportedLocalGeometry(f"factor {c} is singular at {p}", point=str(p), curve=str(c))
    return not through


def point_residue(a: CubeClass, p: PlanePoint, power: int = 1) -> int:
    """power * ord_P(representative of a), modulo 3."""
    if not a.carrier.contains(p):
        raise PointNotOnCurve(f"{p} does not lie on {a.carrier}", point=str(p), curve=str(a.carrier))
    if a.is_trivial():
        return 0
    s = a.carrier.parameter_of(p)
    return (power * a.order_at(s)) % 3
