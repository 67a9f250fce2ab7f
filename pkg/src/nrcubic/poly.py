"""Homogeneous polynomials in x, y, z over Q.

Terms are kept in graded-lex order with x > y > z; for a homogeneous
polynomial that is plain lex order on exponent triples, largest first.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import reduce
from math import gcd, lcm
from typing import Iterable, Mapping, Sequence

from .errors import DegreeMismatch, NotDivisible, RestrictionZero
from .upoly import UPoly, ugcd

Monomial = tuple[int, int, int]
VARS = ("x", "y", "z")


@dataclass(frozen=True)
class HPoly:
    degree: int
    terms: tuple[tuple[Monomial, Fraction], ...]

    def __init__(self, degree: int, terms: Mapping[Monomial, object] | Iterable = ()):
        items = terms.items() if isinstance(terms, Mapping) else terms
        clean = {}
        for m, c in items:
            c = Fraction(c)
            if c == 0:
                continue
            m = tuple(m)
            if len(m) != 3 or sum(m) != degree or min(m) < 0:
                raise ValueError(f"monomial {m} is not of degree {degree}")
            clean[m] = clean.get(m, 0) + c
        ordered = tuple(sorted(((m, c) for m, c in clean.items() if c), reverse=True))
        object.__setattr__(self, "degree", degree)
        object.__setattr__(self, "terms", ordered)

    # -- constructors ------------------------------------------------------
    @classmethod
    def zero(cls, degree: int = 0) -> HPoly:
        return cls(degree, ())

    @classmethod
    def const(cls, c) -> HPoly:
        return cls(0, {(0, 0, 0): c})

    @classmethod
    def var(cls, name: str) -> HPoly:
        m = [0, 0, 0]
        m[VARS.index(name)] = 1
        return cls(1, {tuple(m): 1})

    @classmethod
    def linear(cls, a, b, c) -> HPoly:
        return cls(1, {(1, 0, 0): a, (0, 1, 0): b, (0, 0, 1): c})

    # -- basic queries -----------------------------------------------------
    def is_zero(self) -> bool:
        return not self.terms

    def __bool__(self) -> bool:
        return bool(self.terms)

    def as_dict(self) -> dict[Monomial, Fraction]:
        return dict(self.terms)

    @property
    def leading(self) -> tuple[Monomial, Fraction]:
        return self.terms[0]

    def coefficient(self, m: Monomial) -> Fraction:
        return self.as_dict().get(tuple(m), Fraction(0))

    def __call__(self, point: Sequence) -> Fraction:
        x, y, z = (Fraction(v) for v in point)
        return sum((c * x**i * y**j * z**k for (i, j, k), c in self.terms), Fraction(0))

    def sort_key(self):
        # x before y before z among monomials of equal degree
        return (self.degree, tuple((tuple(-e for e in m), c) for m, c in self.terms))

    # -- ring operations ---------------------------------------------------
    def __add__(self, other: HPoly) -> HPoly:
        if not other:
            return self
        if not self:
            return other
        if self.degree != other.degree:
            raise DegreeMismatch(f"cannot add forms of degree {self.degree} and {other.degree}")
        out = self.as_dict()
        for m, c in other.terms:
            out[m] = out.get(m, 0) + c
        return HPoly(self.degree, out)

    def __neg__(self) -> HPoly:
        return HPoly(self.degree, [(m, -c) for m, c in self.terms])

    def __sub__(self, other: HPoly) -> HPoly:
        return self + (-other)

    def __mul__(self, other) -> HPoly:
        if not isinstance(other, HPoly):
            return HPoly(self.degree, [(m, c * other) for m, c in self.terms])
        out: dict[Monomial, Fraction] = {}
        for (a, ca) in self.terms:
            for (b, cb) in other.terms:
                m = (a[0] + b[0], a[1] + b[1], a[2] + b[2])
                out[m] = out.get(m, 0) + ca * cb
        return HPoly(self.degree + other.degree, out)

    __rmul__ = __mul__

    def __pow__(self, n: int) -> HPoly:
        result, base = HPoly.const(1), self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def derivative(self, var: int | str) -> HPoly:
        if isinstance(var, str):
            var = VARS.index(var)
        if self.degree == 0:
            return HPoly.zero(0)
        out = {}
        for m, c in self.terms:
            if m[var]:
                mm = list(m)
                mm[var] -= 1
                out[tuple(mm)] = c * m[var]
        return HPoly(self.degree - 1, out)

    def gradient(self) -> tuple[HPoly, HPoly, HPoly]:
        return tuple(self.derivative(i) for i in range(3))

    # -- normalisation -----------------------------------------------------
    def primitive(self) -> HPoly:
        """Primitive integer multiple whose leading coefficient is positive."""
        if not self:
            return self
        den = reduce(lcm, (c.denominator for _, c in self.terms), 1)
        nums = [int(c * den) for _, c in self.terms]
        g = reduce(gcd, nums, 0)
        sign = 1 if nums[0] > 0 else -1
        return HPoly(self.degree, [(m, Fraction(n * sign, g)) for (m, _), n in zip(self.terms, nums)])

    def power_of_var(self, var: int) -> int:
        """Largest k with var**k dividing self."""
        if not self:
            return 0
        return min(m[var] for m, _ in self.terms)

    def __str__(self) -> str:
        from .parser import format_poly

        return format_poly(self)

    def __repr__(self) -> str:
        return f"HPoly({self})"


def add(p: HPoly, q: HPoly) -> HPoly:
    return p + q


def mul(p: HPoly, q: HPoly) -> HPoly:
    return p * q


def exact_div(p: HPoly, q: HPoly) -> HPoly:
    """Return r with q * r == p.

    Division by a single form: ``{q}`` is a Groebner basis of ``(q)``, so the
    leading monomial of every multiple of q is divisible by lm(q); the first
    leading monomial that is not proves non-divisibility.
    """
    if not q:
        raise ZeroDivisionError("division by the zero polynomial")
    if not p:
        return HPoly.zero(max(p.degree - q.degree, 0))
    if p.degree < q.degree:
        raise NotDivisible(f"{p} is not divisible by {q}")
    qm, qc = q.leading
    rem = p.as_dict()
    quot: dict[Monomial, Fraction] = {}
    while rem:
        m = max(rem)
        c = rem[m]
        if any(m[i] < qm[i] for i in range(3)):
            raise NotDivisible(f"{p} is not divisible by {q}")
        shift = (m[0] - qm[0], m[1] - qm[1], m[2] - qm[2])
        f = c / qc
        quot[shift] = f
        for tm, tc in q.terms:
            k = (tm[0] + shift[0], tm[1] + shift[1], tm[2] + shift[2])
            v = rem.get(k, 0) - f * tc
            if v:
                rem[k] = v
            else:
                rem.pop(k, None)
    return HPoly(p.degree - q.degree, quot)


def divides(q: HPoly, p: HPoly) -> bool:
    try:
        exact_div(p, q)
    except NotDivisible:
        return False
    return True


# -- bivariate gcd (dehomogenised at z = 1) ---------------------------------
# A bivariate polynomial is a list of UPoly in y, indexed by the power of x.

def _to_bivariate(p: HPoly) -> list[UPoly]:
    by_x: dict[int, dict[int, Fraction]] = {}
    for (i, j, _), c in p.terms:
        by_x.setdefault(i, {})[j] = c
    top = max(by_x)
    out = []
    for i in range(top + 1):
        row = by_x.get(i, {})
        out.append(UPoly([row.get(j, 0) for j in range(max(row) + 1)] if row else ()))
    return out


def _bv_trim(a: list[UPoly]) -> list[UPoly]:
    a = list(a)
    while a and not a[-1]:
        a.pop()
    return a


def _bv_content(a: list[UPoly]) -> UPoly:
    g = UPoly()
    for c in a:
        g = ugcd(g, c)
        if g.degree == 0:
            break
    return g


def _bv_primitive(a: list[UPoly]) -> list[UPoly]:
    c = _bv_content(a)
    return [x.exact_div(c) for x in a]


def _bv_prem(a: list[UPoly], b: list[UPoly]) -> list[UPoly]:
    a = _bv_trim(a)
    lb = b[-1]
    n = len(b) - 1
    while len(a) - 1 >= n and a:
        la = a[-1]
        shift = len(a) - 1 - n
        new = [x * lb for x in a]
        for k, bc in enumerate(b):
            new[k + shift] = new[k + shift] - la * bc
        a = _bv_trim(new)
    return a


def _bv_gcd(a: list[UPoly], b: list[UPoly]) -> list[UPoly]:
    a, b = _bv_trim(a), _bv_trim(b)
    if not a:
        return b
    if not b:
        return a
    c = ugcd(_bv_content(a), _bv_content(b))
    a, b = _bv_primitive(a), _bv_primitive(b)
    if len(a) < len(b):
        a, b = b, a
    while b:
        r = _bv_prem(a, b)
        a, b = b, (_bv_primitive(r) if r else [])
    return [c * x for x in a]


def _from_bivariate(a: list[UPoly]) -> HPoly:
    deg = max(i + c.degree for i, c in enumerate(a) if c)
    terms = {}
    for i, c in enumerate(a):
        for j, v in enumerate(c.coeffs):
            if v:
                terms[(i, j, deg - i - j)] = v
    return HPoly(deg, terms)


def _strip_z(p: HPoly, k: int) -> HPoly:
    return HPoly(p.degree - k, [((i, j, l - k), c) for (i, j, l), c in p.terms])


def gcd_multivariate(p: HPoly, q: HPoly) -> HPoly:
    """Normalised gcd of two forms (primitive, positive leading coefficient).

    Powers of z are split off, the rest is dehomogenised at z = 1 and handled
    by a primitive pseudo-remainder sequence in Q[y][x].
    """
    if not p and not q:
        raise ValueError("gcd of two zero polynomials")
    if not q:
        return p.primitive()
    if not p:
        return q.primitive()
    kp, kq = p.power_of_var(2), q.power_of_var(2)
    g = _bv_gcd(_to_bivariate(_strip_z(p, kp)), _to_bivariate(_strip_z(q, kq)))
    out = _from_bivariate(g) * HPoly(min(kp, kq), {(0, 0, min(kp, kq)): 1})
    return out.primitive()


def gcd_many(polys: Iterable[HPoly]) -> HPoly:
    it = iter(polys)
    g = next(it)
    for p in it:
        g = gcd_multivariate(g, p)
        if g.degree == 0:
            break
    return g.primitive()


def is_squarefree(p: HPoly) -> bool:
    """A form is squarefree iff it shares no factor with all its partials."""
    if p.degree <= 1:
        return bool(p)
    return gcd_many([p, *p.gradient()]).degree == 0


# -- restriction to parametrised curves -------------------------------------

@dataclass(frozen=True)
class Parametrization:
    """Map P^1 -> P^2, [s:t] -> (X(s,t), Y(s,t), Z(s,t)), each a binary form of
    degree ``order``; stored in the chart t = 1."""

    components: tuple[UPoly, UPoly, UPoly]
    order: int

    def point_at(self, s) -> tuple[Fraction, Fraction, Fraction]:
        return tuple(c(s) for c in self.components)

    def point_at_infinity(self) -> tuple[Fraction, Fraction, Fraction]:
        return tuple(c.coeffs[self.order] if c.degree == self.order else Fraction(0)
                     for c in self.components)


@dataclass(frozen=True)
class Restriction:
    """A binary form of degree ``degree`` given by its t = 1 chart ``poly``."""

    poly: UPoly
    degree: int

    @property
    def infinity_multiplicity(self) -> int:
        return self.degree - self.poly.degree


def _line_basis(line: HPoly) -> tuple[tuple[Fraction, ...], tuple[Fraction, ...]]:
    a, b, c = (line.coefficient(m) for m in ((1, 0, 0), (0, 1, 0), (0, 0, 1)))
    if a:
        return (-b / a, Fraction(1), Fraction(0)), (-c / a, Fraction(0), Fraction(1))
    if b:
        return (Fraction(1), Fraction(0), Fraction(0)), (Fraction(0), -c / b, Fraction(1))
    return (Fraction(1), Fraction(0), Fraction(0)), (Fraction(0), Fraction(1), Fraction(0))


def line_parametrization(line: HPoly) -> Parametrization:
    """[s:t] -> s*P0 + t*P1 for a fixed basis P0, P1 of the line (x=0 gives
    [0:s:t])."""
    if line.degree != 1 or not line:
        raise ValueError("not a line")
    p0, p1 = _line_basis(line)
    return Parametrization(tuple(UPoly((p1[i], p0[i])) for i in range(3)), 1)


def substitute(p: HPoly, param: Parametrization) -> UPoly:
    powers = [[UPoly((1,))] for _ in range(3)]
    for var in range(3):
        need = max((m[var] for m, _ in p.terms), default=0)
        for _ in range(need):
            powers[var].append(powers[var][-1] * param.components[var])
    out = UPoly()
    for (i, j, k), c in p.terms:
        out = out + powers[0][i] * powers[1][j] * powers[2][k] * c
    return out


def restrict(p: HPoly, param: Parametrization) -> Restriction:
    u = substitute(p, param)
    if not u:
        raise RestrictionZero(f"{p} vanishes identically on the curve")
    return Restriction(u, p.degree * param.order)


def restrict_to_line(p: HPoly, line: HPoly | Parametrization) -> Restriction:
    param = line if isinstance(line, Parametrization) else line_parametrization(line)
    return restrict(p, param)
