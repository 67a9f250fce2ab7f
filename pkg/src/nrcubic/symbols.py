"""Degree-2 symbols (g, h) in H^2(K, Z/3): residues along curves, reciprocity
at closed points, and vanishing over the completed local fields K_C and K_P.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field

from .errors import Unsupported, UnsupportedLocalGeometry
from .function_field import (
    CubeClass,
    Curve,
    FactoredFn,
    PlanePoint,
    line_intersection,
    point_residue,
    residue_unit,
    valuation,
)


@dataclass(frozen=True)
class Symbol2:
    g: FactoredFn
    h: FactoredFn

    def curves(self) -> tuple[Curve, ...]:
        return tuple(sorted(set(self.g.curves) | set(self.h.curves), key=Curve.sort_key))

    def __str__(self) -> str:
        return f"({self.g}, {self.h})"

    def to_dict(self) -> dict:
        return {"g": self.g.to_dict(), "h": self.h.to_dict()}


def residue_sign(s: Symbol2, c: Curve) -> int:
    """The sign (-1)^(v(g) v(h)) of the tame symbol; a cube, so it never
    affects the class, but reports carry it."""
    return -1 if (valuation(s.g, c) * valuation(s.h, c)) % 2 else 1


def residue_codim1(s: Symbol2, c: Curve) -> CubeClass:
    """Residue along C: the class of g^v(h) / h^v(g) restricted to C."""
    vg, vh = valuation(s.g, c), valuation(s.h, c)
    if vg % 3 == 0 and vh % 3 == 0:
        # g^vh / h^vg is then a cube of a function
        return CubeClass.identity(c)
    unit = s.g ** vh * s.h ** (-vg)
    return residue_unit(unit, c)


def ramification_divisor(s: Symbol2) -> list[tuple[Curve, CubeClass]]:
    out = []
    for c in s.curves():
        r = residue_codim1(s, c)
        if not r.is_trivial():
            out.append((c, r))
    return out


@dataclass
class ReciprocityReport:
    points: list[tuple[PlanePoint, list[tuple[Curve, int]], int]] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return all(total == 0 for _, _, total in self.points)

    def to_dict(self) -> dict:
        return {
            "ok": self.ok,
            "points": [
                {"point": str(p), "contributions": [[str(c), v] for c, v in parts], "sum": total}
                for p, parts, total in self.points
            ],
        }


def support_points(classes: list[tuple[Curve, CubeClass]]) -> list[PlanePoint]:
    """Rational points in the supports; irrational support is unsupported."""
    pts: set[PlanePoint] = set()
    for c, cls in classes:
        rational, irrational = cls.rational_support()
        if irrational:
            raise Unsupported(
                f"residue on {c} is supported at irrational points "
                f"{[str(p) for p, _ in irrational]} (rational points only)",
                curve=str(c),
            )
        pts.update(p for p, _ in rational)
    return sorted(pts)


def point_sums(classes: list[tuple[Curve, CubeClass]], extra: list[PlanePoint] = ()) -> ReciprocityReport:
    pts = sorted(set(support_points(classes)) | set(extra))
    report = ReciprocityReport()
    for p in pts:
        parts = [(c, point_residue(cls, p, 1)) for c, cls in classes if c.contains(p)]
        report.points.append((p, parts, sum(v for _, v in parts) % 3))
    return report


def reciprocity_check(s: Symbol2) -> ReciprocityReport:
    """Per-point sums of the point residues of the codimension-1 residues;
    exactness of the Bloch-Ogus complex on P^2 makes every sum vanish."""
    ram = ramification_divisor(s)
    for c, _ in ram:
        c.require_parametrization()
    extra = []
    lines = [c for c, _ in ram if c.degree == 1]
    for a, b in itertools.combinations(lines, 2):
        extra.append(line_intersection(a.poly, b.poly))
    return point_sums(ram, extra)


def is_zero_over_Kx(s: Symbol2, c: Curve) -> bool:
    """Over a complete DVR with residue field of cohomological dimension <= 1
    a class vanishes iff its residue does."""
    return residue_codim1(s, c).is_trivial()


@dataclass(frozen=True)
class LocalSymbolData:
    point: PlanePoint
    primes: tuple[Curve, ...]
    exponent_matrix: tuple[tuple[int, int], ...]

    @property
    def rank(self) -> int:
        rows = [r for r in self.exponent_matrix if r != (0, 0)]
        if not rows:
            return 0
        for (a, b), (c, d) in itertools.combinations(rows, 2):
            if (a * d - b * c) % 3:
                return 2
        return 1

    def to_dict(self) -> dict:
        return {
            "point": str(self.point),
            "primes": [str(c) for c in self.primes],
            "exponent_matrix": [list(r) for r in self.exponent_matrix],
            "rank": self.rank,
        }


def local_symbol_data(s: Symbol2, p: PlanePoint) -> LocalSymbolData:
    """Factor curves through P whose valuation row is nonzero mod 3."""
    primes, rows = [], []
    for c in s.curves():
        if not c.contains(p):
            continue
        row = (valuation(s.g, c) % 3, valuation(s.h, c) % 3)
        if row != (0, 0):
            primes.append(c)
            rows.append(row)
    return LocalSymbolData(p, tuple(primes), tuple(rows))


def transverse_at(a: Curve, b: Curve, p: PlanePoint) -> bool:
    ta, tb = a.tangent_at(p), b.tangent_at(p)
    cross = (ta[1] * tb[2] - ta[2] * tb[1], ta[2] * tb[0] - ta[0] * tb[2], ta[0] * tb[1] - ta[1] * tb[0])
    return any(cross)


def is_zero_over_KP(s: Symbol2, p: PlanePoint) -> bool:
    """Vanishing over the fraction field of the completed local ring at P.

    Rank <= 1 of the mod-3 exponent matrix means g ~ u A^m, h ~ u' A^n up to
    cubes with u, u' units, and units are cubes there, so the class is zero.
    Rank 2 on a simple normal crossing pair is a (pi_1, pi_2) class, nonzero.
    """
    data = local_symbol_data(s, p)
    if data.rank <= 1:
        return True
    if len(data.primes) != 2:
        raise UnsupportedLocalGeometry(
            f"{len(data.primes)} branches of the symbol meet at {p}; not a normal crossing",
            point=str(p), primes=[str(c) for c in data.primes])
    a, b = data.primes
    for c in (a, b):
        if not c.is_smooth_at(p):
            raise UnsupportedLocalGeometry(f"{c} is singular at {p}", point=str(p), curve=str(c))
    if not transverse_at(a, b, p):
        raise UnsupportedLocalGeometry(f"{a} and {b} are tangent at {p}", point=str(p))
    return False


def symbol_from_exponents(curves, eg, eh) -> Symbol2:
    return Symbol2(FactoredFn(1, zip(curves, eg)), FactoredFn(1, zip(curves, eh)))


def trivial_symbol() -> Symbol2:
    return Symbol2(FactoredFn.one(), FactoredFn.one())
