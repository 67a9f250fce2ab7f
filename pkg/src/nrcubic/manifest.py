"""JSON manifests describing a diagonal bundle.

    {
      "variables": ["x", "y", "z"],
      "coefficients": {
        "a": {"scalar": "1", "factors": [["x", 1], ["z", 2]]},
        ...
      },
      "attestations": {"(x+y+z)^3-6*x*y*z": "geometrically-irreducible"},
      "options": {"convention": "later-over-earlier", "reduce_cubes": false}
    }
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path
from typing import Sequence

from .bundle import CONVENTIONS, LATER_OVER_EARLIER, POSITIONS, DiagonalBundle
from .errors import ManifestError, NrCubicError
from .function_field import Curve, FactoredFn, make_curve, normalize_curve_poly
from .parser import parse_poly
from .poly import VARS, HPoly, exact_div

ATTESTATION = "geometrically-irreducible"


@dataclass
class Manifest:
    variables: tuple[str, str, str]
    bundle: DiagonalBundle
    attested: list[str] = field(default_factory=list)
    convention: str = LATER_OVER_EARLIER
    reduce_cubes: bool = False


def split_factor(p: HPoly) -> tuple[Fraction, list[tuple[HPoly, int]]]:
    """content * x^i y^j z^k * core; monomial content becomes separate factors."""
    if not p:
        raise ManifestError("zero factor")
    prim = p.primitive()
    content = p.terms[0][1] / prim.terms[0][1]
    parts = []
    core = prim
    for idx, name in enumerate(VARS):
        k = core.power_of_var(idx)
        if k:
            v = HPoly.var(name)
            core = exact_div(core, v ** k)
            parts.append((v, k))
    if core.degree > 0:
        parts.append((core, 1))
    else:
        content *= core.terms[0][1]
    return content, parts


def build_fn(spec_factors: Sequence, scalar, variables: Sequence[str], attested: set[HPoly],
             where: str) -> FactoredFn:
    try:
        scalar = Fraction(str(scalar))
    except (ValueError, ZeroDivisionError) as exc:
        raise ManifestError(f"{where}: bad scalar {scalar!r}") from exc
    if scalar == 0:
        raise ManifestError(f"{where}: scalar must be nonzero")
    curves: dict[Curve, int] = {}
    for item in spec_factors:
        if not (isinstance(item, (list, tuple)) and len(item) == 2 and isinstance(item[1], int)):
            raise ManifestError(f"{where}: factor entries are [expression, integer exponent], got {item!r}")
        text, exp = item
        if exp == 0:
            raise ManifestError(f"{where}: zero exponent for {text!r}")
        content, parts = split_factor(parse_poly(text, variables))
        scalar *= content ** exp
        for poly, k in parts:
            curve = make_curve(poly, attested=normalize_curve_poly(poly) in attested)
            if curve in curves:
                raise ManifestError(f"{where}: repeated factor curve {curve}", curve=str(curve))
            curves[curve] = k * exp
    fn = FactoredFn(scalar, curves.items())
    fn.check_coprime()
    return fn


def parse_attestations(raw: dict, variables: Sequence[str]) -> set[HPoly]:
    out = set()
    for text, claim in raw.items():
        if claim != ATTESTATION:
            raise ManifestError(f"attestation for {text!r} must be {ATTESTATION!r}, got {claim!r}")
        out.add(normalize_curve_poly(parse_poly(text, variables)))
    return out


def manifest_from_dict(data: dict, name: str = "") -> Manifest:
    if not isinstance(data, dict):
        raise ManifestError("manifest must be a JSON object")
    unknown = set(data) - {"name", "variables", "coefficients", "attestations", "options"}
    if unknown:
        raise ManifestError(f"unknown manifest fields {sorted(unknown)}")
    variables = tuple(data.get("variables", VARS))
    if len(variables) != 3 or len(set(variables)) != 3 or not all(isinstance(v, str) for v in variables):
        raise ManifestError("variables must be three distinct names")
    attested = parse_attestations(data.get("attestations", {}), variables)
    coefs = data.get("coefficients")
    if not isinstance(coefs, dict) or set(coefs) != set(POSITIONS):
        raise ManifestError("coefficients must give exactly a, b, c, d")
    fns = []
    for pos in POSITIONS:
        entry = coefs[pos]
        if not isinstance(entry, dict) or "factors" not in entry:
            raise ManifestError(f"coefficient {pos}: expected {{scalar, factors}}")
        fns.append(build_fn(entry["factors"], entry.get("scalar", 1), variables, attested, f"coefficient {pos}"))
    options = data.get("options", {})
    convention = options.get("convention", LATER_OVER_EARLIER)
    if convention not in CONVENTIONS:
        raise ManifestError(f"unknown convention {convention!r}")
    bundle = DiagonalBundle(tuple(fns), data.get("name", name))
    return Manifest(variables, bundle, sorted(str(p) for p in attested), convention,
                    bool(options.get("reduce_cubes", False)))


def load_manifest(path: str | Path) -> Manifest:
    path = Path(path)
    try:
        data = json.loads(path.read_text())
    except OSError as exc:
        raise ManifestError(f"cannot read manifest {path}: {exc.strerror}") from exc
    except json.JSONDecodeError as exc:
        raise ManifestError(f"{path}: invalid JSON ({exc.msg} at line {exc.lineno})") from exc
    try:
        return manifest_from_dict(data, path.stem)
    except NrCubicError:
        raise
    except (TypeError, AttributeError) as exc:
        raise ManifestError(f"{path}: malformed manifest ({exc})") from exc
