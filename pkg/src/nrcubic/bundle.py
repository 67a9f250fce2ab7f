"""Diagonal cubic surface bundles a u^3 + b v^3 + c w^3 + d t^3 = 0 over P^2.

Covers hypothesis checks, fibre types over curves, the simple normal
crossings test, Severi-Brauer normal forms over K, K_C and K_P, and the
Segre minimality criterion.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from enum import Enum
from typing import Iterable, Sequence, Union

from .errors import InvalidBundle, Unsupported
from .function_field import (
    CubeClass,
    Curve,
    FactoredFn,
    PlanePoint,
    is_cube_in_K,
    is_cube_in_KP,
    is_cube_in_Kx,
    line_intersection,
    residue_unit,
    restrict_curve,
    twist_to_degree_zero,
    valuation,
)
from .poly import gcd_many
from .symbols import (
    Symbol2,
    is_zero_over_KP,
    is_zero_over_Kx,
    local_symbol_data,
    residue_codim1,
)
from .upoly import yun_squarefree, ugcd

POSITIONS = ("a", "b", "c", "d")
LATER_OVER_EARLIER = "later-over-earlier"
EARLIER_OVER_LATER = "earlier-over-later"
CONVENTIONS = (LATER_OVER_EARLIER, EARLIER_OVER_LATER)


@dataclass(frozen=True)
class DiagonalBundle:
    coefficients: tuple[FactoredFn, FactoredFn, FactoredFn, FactoredFn]
    name: str = ""

    def __post_init__(self):
        if len(self.coefficients) != 4:
            raise InvalidBundle("a diagonal bundle has exactly four coefficients")

    @property
    def degrees(self) -> tuple[int, ...]:
        return tuple(c.degree for c in self.coefficients)

    @property
    def common_degree(self) -> int | None:
        ds = set(self.degrees)
        return ds.pop() if len(ds) == 1 else None

    def components(self) -> list[Curve]:
        """Irreducible components of V(abcd), in canonical order."""
        seen = {c for coef in self.coefficients for c in coef.curves}
        return sorted(seen, key=Curve.sort_key)

    def reduce_cubes(self) -> DiagonalBundle:
        """Strip cube factors from each coefficient (u -> u/p rescaling); the
        generic fibre is unchanged up to K-isomorphism."""
        coefs = tuple(
            FactoredFn(coef.scalar, [(c, e % 3) for c, e in coef.factors])
            for coef in self.coefficients
        )
        return DiagonalBundle(coefs, self.name + (" (cube-reduced)" if self.name else ""))

    def to_dict(self) -> dict:
        return {p: c.to_dict() for p, c in zip(POSITIONS, self.coefficients)}


# ---------------------------------------------------------------------------
# validation
# ---------------------------------------------------------------------------

def validate(bundle: DiagonalBundle) -> dict:
    """Check the bundle invariants; raise InvalidBundle naming the violation."""
    coefs = bundle.coefficients
    for pos, c in zip(POSITIONS, coefs):
        if not c.is_polynomial():
            raise InvalidBundle(f"coefficient {pos} = {c} is not a polynomial", coefficient=pos)
        if c.degree == 0 and not c.factors and c.scalar == 0:
            raise InvalidBundle(f"coefficient {pos} is zero", coefficient=pos)
        c.check_coprime()
    degs = bundle.degrees
    if len({d % 3 for d in degs}) != 1:
        raise InvalidBundle(f"coefficient degrees {list(degs)} are not congruent mod 3", degrees=list(degs))
    shared = set(coefs[0].curves)
    for c in coefs[1:]:
        shared &= set(c.curves)
    if shared:
        curve = sorted(shared, key=Curve.sort_key)[0]
        raise InvalidBundle(f"all four coefficients vanish along {curve}", curve=str(curve))
    g = gcd_many(c.expand()[0] for c in coefs)
    if g.degree > 0:
        raise InvalidBundle(f"gcd(a, b, c, d) = {g} is not constant", gcd=str(g))
    return {
        "status": "PASS",
        "degrees": list(degs),
        "common_degree": bundle.common_degree,
        "twisted": bundle.common_degree is None,
        "checks": [
            {"check": "coefficients nonzero polynomials", "status": "PASS"},
            {"check": "degrees congruent mod 3", "status": "PASS"},
            {"check": "gcd(a,b,c,d) = 1", "status": "PASS"},
            {"check": "generic fibre smooth", "status": "PASS",
             "justification": "diagonal cubic form with nonzero coefficients in characteristic 0"},
        ],
    }


# ---------------------------------------------------------------------------
# fibre types
# ---------------------------------------------------------------------------

class FiberKind(str, Enum):
    SMOOTH = "SMOOTH"
    CONE = "CONE"
    THREE_PLANES = "THREE_PLANES"
    SPLIT_PLANES = "SPLIT_PLANES"
    NON_REDUCED = "NON_REDUCED"


@dataclass(frozen=True)
class FiberType:
    curve: Curve
    kind: FiberKind
    valuations: tuple[int, int, int, int]
    units: tuple[int, ...]
    gamma: CubeClass | None = None
    convention: str = LATER_OVER_EARLIER

    def to_dict(self) -> dict:
        d = {
            "curve": str(self.curve),
            "irreducibility": self.curve.status.value,
            "type": self.kind.value,
            "valuations": dict(zip(POSITIONS, self.valuations)),
            "unit_positions": [POSITIONS[i] for i in self.units],
        }
        if self.gamma is not None:
            d["gamma"] = self.gamma.to_dict()
            d["gamma_convention"] = self.convention
        return d


def _orient(units: Sequence[int], convention: str) -> tuple[int, int]:
    i, j = units
    if convention == LATER_OVER_EARLIER:
        return j, i
    if convention == EARLIER_OVER_LATER:
        return i, j
    raise ValueError(f"unknown convention {convention!r}")


def fiber_type(bundle: DiagonalBundle, curve: Curve, convention: str = LATER_OVER_EARLIER) -> FiberType:
    vals = tuple(valuation(c, curve) for c in bundle.coefficients)
    units = tuple(i for i, v in enumerate(vals) if v == 0)
    n = len(units)
    if n == 4:
        return FiberType(curve, FiberKind.SMOOTH, vals, units)
    if n == 3:
        return FiberType(curve, FiberKind.CONE, vals, units)
    if n == 1:
        return FiberType(curve, FiberKind.NON_REDUCED, vals, units)
    if n == 0:
        raise InvalidBundle(f"all coefficients vanish along {curve}", curve=str(curve))
    num, den = _orient(units, convention)
    ratio = bundle.coefficients[num] / bundle.coefficients[den]
    gamma = residue_unit(ratio, curve)
    kind = FiberKind.SPLIT_PLANES if gamma.is_trivial() else FiberKind.THREE_PLANES
    return FiberType(curve, kind, vals, units, None if gamma.is_trivial() else gamma, convention)


@dataclass
class LocusReport:
    components: list[FiberType]
    locus: list[tuple[Curve, CubeClass]]
    non_reduced: list[Curve]

    def to_dict(self) -> dict:
        return {
            "components": [ft.to_dict() for ft in self.components],
            "three_planes_locus": [str(c) for c, _ in self.locus],
            "non_reduced": [str(c) for c in self.non_reduced],
        }


def three_planes_locus(bundle: DiagonalBundle, convention: str = LATER_OVER_EARLIER) -> LocusReport:
    comps = [fiber_type(bundle, c, convention) for c in bundle.components()]
    locus = [(ft.curve, ft.gamma) for ft in comps if ft.kind is FiberKind.THREE_PLANES]
    bad = [ft.curve for ft in comps if ft.kind is FiberKind.NON_REDUCED]
    return LocusReport(comps, locus, bad)


# ---------------------------------------------------------------------------
# simple normal crossings
# ---------------------------------------------------------------------------

@dataclass
class SncReport:
    ok: bool
    failure: str | None = None
    witness: str | None = None
    checked: list[str] = field(default_factory=list)

    def to_dict(self) -> dict:
        return {"status": "PASS" if self.ok else "SNC_FAIL", "failure": self.failure,
                "witness": self.witness, "checked": self.checked}


def _carrier_pair(a: Curve, b: Curve) -> tuple[Curve, Curve]:
    """(curve to parametrise, curve to restrict)."""
    for first, second in ((a, b), (b, a)):
        if first.parametrizable:
            return first, second
    raise Unsupported(f"neither {a} nor {b} has a rational parametrization")


def _describe_root_block(carrier: Curve, block, infinity: bool = False) -> str:
    if infinity:
        return str(carrier.point_at(None))
    if block.degree == 1:
        return str(carrier.point_at(-block.coeffs[0] / block.coeffs[1]))
    return f"irrational point(s) V({block}) on {carrier}"


def snc_check(curves: Sequence[Curve]) -> SncReport:
    report = SncReport(ok=True)
    curves = list(curves)
    for a, b in itertools.combinations(curves, 2):
        if a == b:
            return SncReport(False, "repeated component", str(a), report.checked)
    for c in curves:
        if c.degree > 2:
            raise Unsupported(f"smoothness of degree-{c.degree} component {c} is not decided",
                              curve=str(c))
    report.checked.append("components smooth (lines and nondegenerate conics)")
    for a, b in itertools.combinations(curves, 2):
        if a.degree == 1 and b.degree == 1:
            continue
        carrier, other = _carrier_pair(a, b)
        r = restrict_curve(other.poly, carrier)
        if r.infinity_multiplicity > 1:
            return SncReport(False, f"{a} and {b} are tangent",
                             _describe_root_block(carrier, None, True), report.checked)
        for part, mult in yun_squarefree(r.poly).parts:
            if mult > 1:
                return SncReport(False, f"{a} and {b} are tangent",
                                 _describe_root_block(carrier, part), report.checked)
    report.checked.append("pairwise transversal")
    for a, b, c in itertools.combinations(curves, 3):
        if a.degree == b.degree == c.degree == 1:
            p = line_intersection(a.poly, b.poly)
            if c.contains(p):
                return SncReport(False, f"{a}, {b}, {c} are concurrent", str(p), report.checked)
            continue
        carrier = next((x for x in (a, b, c) if x.parametrizable), None)
        if carrier is None:
            raise Unsupported(f"no parametrizable curve among {a}, {b}, {c}")
        r1, r2 = (restrict_curve(x.poly, carrier) for x in (a, b, c) if x != carrier)
        if r1.infinity_multiplicity and r2.infinity_multiplicity:
            return SncReport(False, f"{a}, {b}, {c} pass through a common point",
                             _describe_root_block(carrier, None, True), report.checked)
        g = ugcd(r1.poly, r2.poly)
        if g.degree > 0:
            return SncReport(False, f"{a}, {b}, {c} pass through a common point",
                             _describe_root_block(carrier, g), report.checked)
    report.checked.append("no three components through a point")
    return report


# ---------------------------------------------------------------------------
# Severi-Brauer normal forms
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class GlobalK:
    def __str__(self) -> str:
        return "K"


@dataclass(frozen=True)
class LocalKx:
    curve: Curve

    def __str__(self) -> str:
        return f"K_({self.curve})"


@dataclass(frozen=True)
class LocalKP:
    point: PlanePoint

    def __str__(self) -> str:
        return f"K_{self.point}"


Field = Union[GlobalK, LocalKx, LocalKP]

# pairings {i,j},{k,3}: the pair without d gives the symbol, d plays t
PAIRINGS = (((0, 1), (2, 3)), ((0, 2), (1, 3)), ((1, 2), (0, 3)))


def is_cube_over(field_: Field, g: FactoredFn) -> bool:
    if isinstance(field_, GlobalK):
        return is_cube_in_K(g)
    if isinstance(field_, LocalKx):
        return is_cube_in_Kx(g, field_.curve)
    return is_cube_in_KP(g, field_.point)


def symbol_nonzero_over(field_: Field, s: Symbol2) -> bool | None:
    """True/False when decided; None when an unsupported residue blocks it."""
    if isinstance(field_, LocalKx):
        return not is_zero_over_Kx(s, field_.curve)
    if isinstance(field_, LocalKP):
        return not is_zero_over_KP(s, field_.point)
    blocked = False
    for c in s.curves():
        try:
            if not residue_codim1(s, c).is_trivial():
                return True
        except Unsupported:
            blocked = True
    return None if blocked else False


@dataclass
class SBResult:
    field: str
    status: str                      # YES | NO_EVIDENCE
    pairing: tuple | None = None
    symbol: Symbol2 | None = None
    attempts: list[dict] = field(default_factory=list)
    local_data: dict | None = None

    @property
    def yes(self) -> bool:
        return self.status == "YES"

    def to_dict(self) -> dict:
        d = {"field": self.field, "status": self.status, "attempts": self.attempts}
        if self.pairing is not None:
            (i, j), (k, l) = self.pairing
            d["pairing"] = f"{POSITIONS[i]}{POSITIONS[j]} ~ {POSITIONS[k]}{POSITIONS[l]}"
            d["symbol"] = str(self.symbol)
        if self.local_data is not None:
            d["local_data"] = self.local_data
        return d


def pairing_symbol(bundle: DiagonalBundle, pairing) -> Symbol2:
    (i, j), (_, l) = pairing
    c = bundle.coefficients
    return Symbol2(twist_to_degree_zero(c[i] / c[l]), twist_to_degree_zero(c[j] / c[l]))


def sb_normal_form_over(bundle: DiagonalBundle, field_: Field) -> SBResult:
    """Search the three pairings for c_i c_j = c_k c_l modulo cubes over F; a
    match puts the surface in the form A u^3 + B v^3 + AB w^3 + t^3 with
    symbol (A, B).  YES needs the symbol to be nonzero over F as well."""
    c = bundle.coefficients
    result = SBResult(str(field_), "NO_EVIDENCE")
    for pairing in PAIRINGS:
        (i, j), (k, l) = pairing
        cross = twist_to_degree_zero((c[i] * c[j]) / (c[k] * c[l]))
        label = f"{POSITIONS[i]}{POSITIONS[j]}/{POSITIONS[k]}{POSITIONS[l]}"
        if not is_cube_over(field_, cross):
            result.attempts.append({"pairing": label, "normal_form": False})
            continue
        sym = pairing_symbol(bundle, pairing)
        nonzero = symbol_nonzero_over(field_, sym)
        result.attempts.append({"pairing": label, "normal_form": True, "symbol": str(sym),
                                "symbol_nonzero": nonzero})
        if nonzero:
            result.status, result.pairing, result.symbol = "YES", pairing, sym
            if isinstance(field_, LocalKP):
                result.local_data = local_symbol_data(sym, field_.point).to_dict()
            return result
    return result


# ---------------------------------------------------------------------------
# Segre minimality
# ---------------------------------------------------------------------------

class MinimalityKind(str, Enum):
    MINIMAL = "MINIMAL"
    SB_BIRATIONAL = "SB_BIRATIONAL"
    UNKNOWN = "UNKNOWN"


SEGRE_NAMES = ("A", "B", "AB", "F", "AF", "BF")


@dataclass
class MinimalityVerdict:
    kind: MinimalityKind
    witness: Symbol2 | None = None
    labeling: dict | None = None
    segre_elements: list[tuple[str, FactoredFn, bool]] = field(default_factory=list)
    sb: SBResult | None = None

    def to_dict(self) -> dict:
        d = {"verdict": self.kind.value}
        if self.witness is not None:
            d["witness"] = str(self.witness)
        if self.labeling is not None:
            d["labeling"] = self.labeling
            d["segre_elements"] = [
                {"name": n, "element": str(g), "cube_in_K": cube} for n, g in
                [(n, g) for n, g, _ in self.segre_elements]
                for cube in [is_cube_in_K(g)]
            ]
        if self.sb is not None:
            d["global_sb"] = self.sb.to_dict()
        return d


def labelings() -> Iterable[tuple[int, int, int, int]]:
    """(p, q, r, s) with r in the AB slot and s in the t slot; the natural
    order a, b, c, d comes first."""
    for s in (3, 2, 1, 0):
        rest = [i for i in range(4) if i != s]
        for r in sorted(rest, reverse=True):
            p, q = [i for i in rest if i != r]
            yield p, q, r, s


def segre_elements(bundle: DiagonalBundle, labeling) -> list[tuple[str, FactoredFn, bool]]:
    """Scaling by r/(pq) gives A u^3 + B v^3 + AB w^3 + F t^3 with A = r/q,
    B = r/p, F = rs/(pq); return the six elements A, B, AB, F, AF, BF."""
    p, q, r, s = (bundle.coefficients[i] for i in labeling)
    A, B = r / q, r / p
    F = (r * s) / (p * q)
    out = []
    for name, g in zip(SEGRE_NAMES, (A, B, A * B, F, A * F, B * F)):
        g = twist_to_degree_zero(g)
        out.append((name, g, is_cube_in_K(g)))
    return out


def segre_minimality(bundle: DiagonalBundle) -> MinimalityVerdict:
    sb = sb_normal_form_over(bundle, GlobalK())
    if sb.yes:
        for lab in labelings():
            # a matching pairing makes one of F, AF, BF a cube in every labelling
            assert any(cube for _, _, cube in segre_elements(bundle, lab))
        return MinimalityVerdict(MinimalityKind.SB_BIRATIONAL, sb.symbol, sb=sb)
    first = None
    for lab in labelings():
        elems = segre_elements(bundle, lab)
        named = {"a'": POSITIONS[lab[0]], "b'": POSITIONS[lab[1]], "ab'": POSITIONS[lab[2]],
                 "f'": POSITIONS[lab[3]]}
        if first is None:
            first = (named, elems)
        if not any(cube for _, _, cube in elems):
            return MinimalityVerdict(MinimalityKind.MINIMAL, labeling=named, segre_elements=elems, sb=sb)
    return MinimalityVerdict(MinimalityKind.UNKNOWN, labeling=first[0], segre_elements=first[1], sb=sb)
