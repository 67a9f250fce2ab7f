"""Command line interface.

    nrcubic {validate|fibers|minimality|symbol|hnr|demo} [--manifest PATH]
            [--json PATH] [--convention later-over-earlier|earlier-over-later]
            [--reduce-cubes]

Exit codes: 0 success, 1 hypothesis violation (or golden mismatch in
``demo``), 2 unsupported geometry, 3 parse/manifest error.
"""

from __future__ import annotations

import argparse
import json
import sys
from importlib import resources
from pathlib import Path
from typing import Callable

from . import report
from .bundle import (
    CONVENTIONS,
    DiagonalBundle,
    MinimalityKind,
    segre_minimality,
    snc_check,
    three_planes_locus,
    validate,
)
from .errors import ManifestError, NrCubicError, ParseError, Unsupported
from .function_field import FactoredFn, make_curve, normalize_curve_poly, twist_to_degree_zero, valuation
from .hnr import compute_group
from .manifest import Manifest, load_manifest, manifest_from_dict, parse_attestations, split_factor
from .parser import parse_poly
from .symbols import Symbol2, reciprocity_check, residue_codim1, residue_sign

EXIT_OK, EXIT_HYPOTHESIS, EXIT_UNSUPPORTED, EXIT_INPUT = 0, 1, 2, 3

DEMOS = ("refv",)


def demo_manifest(name: str) -> dict:
    return json.loads(resources.files("nrcubic").joinpath("data", f"{name}.json").read_text())


def demo_golden(name: str) -> dict:
    return json.loads(resources.files("nrcubic").joinpath("data", f"{name}_golden.json").read_text())


# ---------------------------------------------------------------------------
# commands: each returns (result dict, human text, exit code)
# ---------------------------------------------------------------------------

def cmd_validate(bundle: DiagonalBundle, convention: str):
    result = {"validation": validate(bundle), "hypotheses": []}
    checks = result["hypotheses"]
    exit_code = EXIT_OK

    def record(name, status, detail=""):
        nonlocal exit_code
        checks.append({"hypothesis": name, "status": status, "detail": detail})
        if status == "FAIL":
            exit_code = EXIT_HYPOTHESIS
        elif status == "UNSUPPORTED" and exit_code == EXIT_OK:
            exit_code = EXIT_UNSUPPORTED

    m = segre_minimality(bundle)
    record("generic fibre minimal", "PASS" if m.kind is MinimalityKind.MINIMAL else "FAIL",
           f"Segre verdict {m.kind.value}")
    try:
        fibers = three_planes_locus(bundle, convention)
    except Unsupported as exc:
        record("fibres over codimension-1 points reduced", "UNSUPPORTED", str(exc))
    else:
        bad = ", ".join(map(str, fibers.non_reduced))
        record("fibres over codimension-1 points reduced", "FAIL" if bad else "PASS",
               f"non-reduced over {bad}" if bad else "")
        try:
            snc = snc_check([c for c, _ in fibers.locus])
            record("three-planes locus simple normal crossings", "PASS" if snc.ok else "FAIL",
                   "" if snc.ok else f"{snc.failure} at {snc.witness}")
        except Unsupported as exc:
            record("three-planes locus simple normal crossings", "UNSUPPORTED", str(exc))
    return result, report.render_validate(result), exit_code


def cmd_fibers(bundle: DiagonalBundle, convention: str):
    fibers = three_planes_locus(bundle, convention)
    result = {**fibers.to_dict(), "convention": convention}
    try:
        result["snc"] = snc_check([c for c, _ in fibers.locus]).to_dict()
    except Unsupported as exc:
        result["snc"] = {"status": "UNSUPPORTED", "failure": str(exc), "witness": None, "checked": []}
    return result, report.render_fibers(result), EXIT_OK


def cmd_minimality(bundle: DiagonalBundle, convention: str):
    result = segre_minimality(bundle).to_dict()
    return result, report.render_minimality(result), EXIT_OK


def cmd_hnr(bundle: DiagonalBundle, convention: str):
    result = compute_group(bundle, convention).to_dict()
    return result, report.render_hnr(result), EXIT_OK


def parse_factor_list(text: str, attested: set) -> FactoredFn:
    """'x:1, z:-1' -> x/z; a bare expression has exponent 1.  The result is
    twisted by z^-deg into degree 0."""
    fn = FactoredFn.one()
    for item in text.split(","):
        item = item.strip()
        if not item:
            raise ParseError(f"empty entry in factor list {text!r}")
        expr, exp = item, 1
        if ":" in item:
            expr, _, e = item.rpartition(":")
            try:
                exp = int(e)
            except ValueError:
                raise ParseError(f"bad exponent {e.strip()!r} in {item!r}") from None
        content, parts = split_factor(parse_poly(expr))
        fn = fn * FactoredFn(content ** exp, [
            (make_curve(p, attested=normalize_curve_poly(p) in attested), k * exp) for p, k in parts
        ])
    fn.check_coprime()
    return twist_to_degree_zero(fn)


def symbol_report(s: Symbol2) -> tuple[dict, int]:
    """Residue table; a residue needing an unavailable parametrization is
    reported as UNSUPPORTED and makes the exit status 2."""
    residues, ram, blocked = [], [], []
    for c in s.curves():
        entry = {"curve": str(c), "v_g": valuation(s.g, c), "v_h": valuation(s.h, c),
                 "sign": residue_sign(s, c)}
        try:
            cls = residue_codim1(s, c)
        except Unsupported as exc:
            entry["residue"] = None
            entry["unsupported"] = str(exc)
            blocked.append(str(c))
        else:
            entry["residue"] = cls.to_dict()
            if not cls.is_trivial():
                ram.append(f"{c}: {cls}")
        residues.append(entry)
    result = {
        "symbol": str(s),
        "g": s.g.to_dict(),
        "h": s.h.to_dict(),
        "residues": residues,
        "ramification_divisor": ram,
        "undecided_curves": blocked,
    }
    try:
        if blocked:
            raise Unsupported(f"residues along {', '.join(blocked)} are not computable")
        result["reciprocity"] = reciprocity_check(s).to_dict()
    except Unsupported as exc:
        result["reciprocity"] = None
        result["reciprocity_blocker"] = str(exc)
    return result, EXIT_UNSUPPORTED if blocked else EXIT_OK


# ---------------------------------------------------------------------------
# driver
# ---------------------------------------------------------------------------

class _Parser(argparse.ArgumentParser):
    # usage errors are input errors, not "unsupported geometry"
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_INPUT, f"{self.prog}: error: {message}\n")


def build_parser() -> argparse.ArgumentParser:
    common = _Parser(add_help=False)
    common.add_argument("--manifest", help="bundle manifest (JSON)")
    common.add_argument("--json", dest="json_path", help="write the machine report here")
    common.add_argument("--convention", choices=CONVENTIONS, default=None,
                        help="orientation of the gamma classes")
    common.add_argument("--reduce-cubes", action="store_true",
                        help="strip cube factors from the coefficients first")
    p = _Parser(prog="nrcubic", description=__doc__.split("\n\n")[0])
    sub = p.add_subparsers(dest="command", required=True)
    for name, hlp in (("validate", "bundle invariants and hypothesis precheck"),
                      ("fibers", "discriminant components and fibre types"),
                      ("minimality", "Segre minimality verdict"),
                      ("hnr", "full pipeline: admissible vectors, group and certificate")):
        sub.add_parser(name, parents=[common], help=hlp)
    sp = sub.add_parser("symbol", parents=[common], help="residues and reciprocity of a symbol (g, h)")
    sp.add_argument("--g", required=True, help="factor list, e.g. 'x:1, z:-1'")
    sp.add_argument("--h", required=True, help="factor list")
    sp.add_argument("--attest", action="append", default=[],
                    help="attest geometric irreducibility of a degree >= 3 factor")
    dp = sub.add_parser("demo", parents=[common], help="built-in example with golden check")
    dp.add_argument("name", choices=DEMOS)
    dp.add_argument("--write-golden", metavar="PATH", help=argparse.SUPPRESS)
    return p


COMMANDS: dict[str, Callable] = {
    "validate": cmd_validate,
    "fibers": cmd_fibers,
    "minimality": cmd_minimality,
    "hnr": cmd_hnr,
}


def _load(args) -> Manifest:
    if args.manifest is None:
        raise ManifestError(f"{args.command} needs --manifest")
    return load_manifest(args.manifest)


def _prepare(manifest: Manifest, args) -> tuple[DiagonalBundle, str, bool]:
    convention = args.convention or manifest.convention
    reduce = args.reduce_cubes or manifest.reduce_cubes
    bundle = manifest.bundle.reduce_cubes() if reduce else manifest.bundle
    return bundle, convention, reduce


def run(argv: list[str] | None = None, out=None, err=None) -> int:
    out = out or sys.stdout
    err = err or sys.stderr
    args = build_parser().parse_args(argv)
    doc_meta: dict = {}
    bundle_dict = None
    try:
        if args.command == "symbol":
            attested = parse_attestations({a: "geometrically-irreducible" for a in args.attest}, ("x", "y", "z"))
            s = Symbol2(parse_factor_list(args.g, attested), parse_factor_list(args.h, attested))
            result, code = symbol_report(s)
            text = report.render_symbol(result)
        elif args.command == "demo":
            manifest = manifest_from_dict(demo_manifest(args.name), args.name)
            bundle, convention, reduce = _prepare(manifest, args)
            bundle_dict = bundle.to_dict()
            result, text, code = cmd_hnr(bundle, convention)
            doc_meta = {"convention": convention, "reduce_cubes": reduce, "attested": manifest.attested}
            if args.write_golden:
                Path(args.write_golden).write_text(report.dumps(result))
            else:
                golden = demo_golden(args.name)
                if golden != json.loads(json.dumps(result)):
                    diff = sorted(k for k in set(golden) | set(result) if golden.get(k) != result.get(k))
                    text += f"\n\nGOLDEN MISMATCH in sections: {', '.join(diff)}"
                    code = EXIT_HYPOTHESIS
                    doc_meta["golden"] = {"match": False, "sections": diff}
                else:
                    text += "\n\ngolden output: match"
                    doc_meta["golden"] = {"match": True}
        else:
            manifest = _load(args)
            bundle, convention, reduce = _prepare(manifest, args)
            bundle_dict = bundle.to_dict()
            doc_meta = {"convention": convention, "reduce_cubes": reduce, "attested": manifest.attested}
            result, text, code = COMMANDS[args.command](bundle, convention)
            if reduce:
                text = ("model: cube-reduced (the group is computed for the reduced model; "
                        "equality with the original model's group is not claimed)\n" + text)
        doc = report.envelope(args.command, result, bundle=bundle_dict, exit_code=code, **doc_meta)
        if bundle_dict is not None:
            text = "bundle:\n" + report.render_bundle(bundle_dict) + "\n\n" + text
        print(text, file=out)
    except NrCubicError as exc:
        code = exc.exit_status
        doc = report.envelope(args.command, None, bundle=bundle_dict, error=exc, exit_code=code, **doc_meta)
        print(f"error [{exc.code}]: {exc}", file=err)
        if exc.witness:
            for k, v in sorted(exc.witness.items()):
                if v is not None and not isinstance(v, dict):
                    print(f"  {k}: {v}", file=err)
    if args.json_path:
        Path(args.json_path).write_text(report.dumps(doc))
    return code


def main(argv: list[str] | None = None) -> int:
    return run(argv)
