"""Dense univariate polynomials over Q and Yun's squarefree decomposition."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

from .errors import NotDivisible


def _strip(coeffs: Iterable) -> tuple[Fraction, ...]:
    out = [Fraction(c) for c in coeffs]
    while out and out[-1] == 0:
        out.pop()
    return tuple(out)


@dataclass(frozen=True)
class UPoly:
    """Polynomial in one variable; ``coeffs[i]`` multiplies ``s**i``."""

    coeffs: tuple[Fraction, ...] = ()

    def __init__(self, coeffs: Sequence = ()):
        object.__setattr__(self, "coeffs", _strip(coeffs))

    @classmethod
    def constant(cls, c) -> UPoly:
        return cls((c,))

    @classmethod
    def monomial(cls, k: int, c=1) -> UPoly:
        return cls([0] * k + [c])

    @classmethod
    def from_roots(cls, roots: Iterable) -> UPoly:
        p = cls((1,))
        for r in roots:
            p = p * cls((-Fraction(r), 1))
        return p

    @property
    def degree(self) -> int:
        """Degree; ``-1`` for the zero polynomial."""
        return len(self.coeffs) - 1

    def is_zero(self) -> bool:
        return not self.coeffs

    @property
    def lc(self) -> Fraction:
        return self.coeffs[-1] if self.coeffs else Fraction(0)

    def __bool__(self) -> bool:
        return bool(self.coeffs)

    def __add__(self, other: UPoly) -> UPoly:
        a, b = self.coeffs, other.coeffs
        if len(a) < len(b):
            a, b = b, a
        return UPoly([x + (b[i] if i < len(b) else 0) for i, x in enumerate(a)])

    def __neg__(self) -> UPoly:
        return UPoly([-c for c in self.coeffs])

    def __sub__(self, other: UPoly) -> UPoly:
        return self + (-other)

    def __mul__(self, other) -> UPoly:
        if not isinstance(other, UPoly):
            return UPoly([c * other for c in self.coeffs])
        if not self.coeffs or not other.coeffs:
            return UPoly()
        out = [Fraction(0)] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            if a:
                for j, b in enumerate(other.coeffs):
                    out[i + j] += a * b
        return UPoly(out)

    __rmul__ = __mul__

    def __pow__(self, n: int) -> UPoly:
        result, base = UPoly((1,)), self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def __call__(self, s):
        acc = Fraction(0)
        for c in reversed(self.coeffs):
            acc = acc * s + c
        return acc

    def derivative(self) -> UPoly:
        return UPoly([i * c for i, c in enumerate(self.coeffs)][1:])

    def monic(self) -> UPoly:
        if not self.coeffs:
            return self
        lc = self.lc
        return UPoly([c / lc for c in self.coeffs])

    def divmod(self, other: UPoly) -> tuple[UPoly, UPoly]:
        if not other.coeffs:
            raise ZeroDivisionError("division by the zero polynomial")
        rem = list(self.coeffs)
        dq = len(rem) - len(other.coeffs)
        if dq < 0:
            return UPoly(), self
        quot = [Fraction(0)] * (dq + 1)
        lc = other.lc
        n = len(other.coeffs)
        for k in range(dq, -1, -1):
            q = rem[k + n - 1] / lc
            quot[k] = q
            if q:
                for j, b in enumerate(other.coeffs):
                    rem[k + j] -= q * b
        return UPoly(quot), UPoly(rem[: n - 1])

    def __floordiv__(self, other: UPoly) -> UPoly:
        return self.divmod(other)[0]

    def __mod__(self, other: UPoly) -> UPoly:
        return self.divmod(other)[1]

    def exact_div(self, other: UPoly) -> UPoly:
        q, r = self.divmod(other)
        if r:
            raise NotDivisible(f"{self} is not divisible by {other}")
        return q

    def __str__(self) -> str:
        return format_upoly(self)


def ugcd(a: UPoly, b: UPoly) -> UPoly:
    """Monic gcd (Euclid over Q); gcd(0, 0) = 0."""
    while b:
        a, b = b, a % b
    return a.monic()


def format_upoly(p: UPoly, var: str = "s") -> str:
    if not p:
        return "0"
    parts = []
    for k in range(p.degree, -1, -1):
        c = p.coeffs[k]
        if not c:
            continue
        sign = "-" if c < 0 else "+"
        mag = abs(c)
        if k == 0:
            body = str(mag)
        else:
            mono = var if k == 1 else f"{var}^{k}"
            body = mono if mag == 1 else f"{mag}*{mono}"
        parts.append((sign, body))
    first_sign, first = parts[0]
    out = ("-" if first_sign == "-" else "") + first
    for sign, body in parts[1:]:
        out += sign + body
    return out


@dataclass(frozen=True)
class SquarefreeDecomp:
    content: Fraction
    parts: tuple[tuple[UPoly, int], ...]

    def expand(self) -> UPoly:
        out = UPoly.constant(self.content)
        for p, m in self.parts:
            out = out * p**m
        return out


def yun_squarefree(u: UPoly) -> SquarefreeDecomp:
    """Yun's algorithm: u = content * prod(part_i ** i), parts monic squarefree
    and pairwise coprime."""
    if not u:
        raise ValueError("squarefree decomposition of the zero polynomial")
    content = u.lc
    f = u.monic()
    if f.degree == 0:
        return SquarefreeDecomp(content, ())
    df = f.derivative()
    a0 = ugcd(f, df)
    b = f.exact_div(a0)
    c = df.exact_div(a0)
    d = c - b.derivative()
    parts = []
    i = 1
    while b.degree > 0:
        a = ugcd(b, d)
        if a.degree > 0:
            parts.append((a, i))
        b = b.exact_div(a)
        c = d.exact_div(a)
        d = c - b.derivative()
        i += 1
    return SquarefreeDecomp(content, tuple(parts))


def rational_roots_of_linear(p: UPoly) -> Fraction:
    if p.degree != 1:
        raise ValueError("not linear")
    return -p.coeffs[0] / p.coeffs[1]
