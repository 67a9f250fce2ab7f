import io
import json
import subprocess
import sys

import pytest

from nrcubic import cli, report
from nrcubic.errors import ManifestError, NotIrreducible, ParseError
from nrcubic.function_field import fn, make_curve
from nrcubic.hnr import compute_group
from nrcubic.manifest import manifest_from_dict

REFV = cli.demo_manifest("refv")


def coeffs(a, b, c, d):
    return {"coefficients": {k: {"factors": v} for k, v in zip("abcd", (a, b, c, d))}}


def run(tmp_path, data, *argv):
    path = tmp_path / "m.json"
    path.write_text(json.dumps(data))
    out, err = io.StringIO(), io.StringIO()
    code = cli.run([*argv, "--manifest", str(path), "--json", str(tmp_path / "r.json")], out, err)
    return code, out.getvalue(), err.getvalue(), json.loads((tmp_path / "r.json").read_text())


# -- manifests -----------------------------------------------------------------

def test_manifest_splits_monomial_content():
    m = manifest_from_dict(coeffs([["2*x*z^2", 1]], [["y", 3]], [["z", 3]], [["x+y+z", 3]]))
    a = m.bundle.coefficients[0]
    assert a == fn(("x", 1), ("z", 2), scalar=2)


def test_manifest_attestation_required():
    data = coeffs([["x", 3]], [["y", 3]], [["z", 3]], [["x^3+y^3+z^3", 1]])
    with pytest.raises(NotIrreducible):
        manifest_from_dict(data)
    data["attestations"] = {"x^3+y^3+z^3": "geometrically-irreducible"}
    assert manifest_from_dict(data).bundle.coefficients[3].curves[0].status.value == "ATTESTED"


def test_manifest_errors():
    with pytest.raises(ManifestError, match="repeated"):
        manifest_from_dict(coeffs([["x", 1], ["x", 2]], [["y", 3]], [["z", 3]], [["x+y", 3]]))
    with pytest.raises(ManifestError):
        manifest_from_dict({"coefficients": {"a": {"factors": []}}})
    with pytest.raises(ParseError):
        manifest_from_dict(coeffs([["xy", 1]], [["y", 3]], [["z", 3]], [["x+y", 3]]))


def test_manifest_custom_variables():
    data = {"variables": ["u", "v", "w"], **coeffs([["u", 1], ["w", 2]], [["v", 2], ["w", 1]],
                                                   [["u", 1], ["v", 2]], [["(u+v+w)^3-6*u*v*w", 1]])}
    data["attestations"] = {"(u+v+w)^3-6*u*v*w": "geometrically-irreducible"}
    assert manifest_from_dict(data).bundle.coefficients == manifest_from_dict(REFV).bundle.coefficients


# -- exit codes ---------------------------------------------------------------------

def test_hnr_refv_exit_0(tmp_path):
    code, out, _, doc = run(tmp_path, REFV, "hnr")
    assert code == 0
    assert doc["result"]["group"]["order"] == 3
    assert "CERTIFICATE" in out


def test_repeated_factor_exit_3(tmp_path):
    code, _, err, doc = run(tmp_path, coeffs([["x", 1], ["x", 2]], [["y", 3]], [["z", 3]], [["x+y", 3]]), "hnr")
    assert code == 3
    assert doc["error"]["code"] == "MANIFEST_ERROR"
    assert "repeated" in err


def test_parse_error_exit_3(tmp_path):
    code, _, err, _ = run(tmp_path, coeffs([["x*", 1]], [["y", 3]], [["z", 3]], [["x+y", 3]]), "validate")
    assert code == 3 and "PARSE_ERROR" in err


def test_non_reduced_exit_1(tmp_path):
    data = coeffs([["x", 1]], [["x", 1]], [["x", 1]], [["y", 1]])
    code, _, err, doc = run(tmp_path, data, "hnr")
    assert code == 1
    assert doc["error"]["witness"]["hypothesis"] == "reducedness"
    assert "--reduce-cubes" in err
    assert run(tmp_path, data, "validate")[0] == 1


def test_reduce_cubes_option(tmp_path):
    data = coeffs([["x", 4], ["z", 2]], [["y", 2], ["z", 1]], [["x", 1], ["y", 2]], [["x+y+z", 3], ["x+2*y+3*z", 1]])
    code, out, _, doc = run(tmp_path, data, "fibers", "--reduce-cubes")
    assert code == 0 and doc["reduce_cubes"] is True
    assert "cube-reduced" in out


def test_unsupported_exit_2(tmp_path):
    data = coeffs([["x^2+y^2+z^2", 1], ["z", 1]], [["x^2+y^2+z^2", 1], ["y", 1]], [["x*y*z", 1]], [["x", 3]])
    code, _, err, doc = run(tmp_path, data, "fibers")
    assert code == 2
    assert doc["error"]["code"] == "UNSUPPORTED_CURVE"


def test_usage_error_exit_3():
    with pytest.raises(SystemExit) as exc:
        cli.run(["nonsense"], io.StringIO(), io.StringIO())
    assert exc.value.code == 3


def test_missing_manifest_exit_3():
    assert cli.run(["hnr"], io.StringIO(), io.StringIO()) == 3


# -- reports ---------------------------------------------------------------------------

def test_machine_report_deterministic_and_round_trips(tmp_path):
    first = run(tmp_path, REFV, "hnr")
    text1 = (tmp_path / "r.json").read_bytes()
    run(tmp_path, REFV, "hnr")
    assert (tmp_path / "r.json").read_bytes() == text1
    doc = first[3]
    assert report.loads(report.dumps(doc)) == doc
    in_memory = compute_group(manifest_from_dict(REFV).bundle).to_dict()
    assert doc["result"] == json.loads(json.dumps(in_memory))


def test_minimality_and_fibers_commands(tmp_path):
    code, out, _, doc = run(tmp_path, REFV, "minimality")
    assert code == 0 and doc["result"]["verdict"] == "MINIMAL"
    code, out, _, doc = run(tmp_path, REFV, "fibers")
    assert doc["result"]["three_planes_locus"] == ["x", "y", "z"]


def test_symbol_command(tmp_path):
    out = io.StringIO()
    code = cli.run(["symbol", "--g", "x", "--h", "y", "--json", str(tmp_path / "s.json")], out, io.StringIO())
    assert code == 0
    doc = json.loads((tmp_path / "s.json").read_text())
    res = {r["curve"]: r["residue"] for r in doc["result"]["residues"]}
    assert res["x"]["points"] == [{"point": "[0:0:1]", "exponent": 2}, {"point": "[0:1:0]", "exponent": 1}]
    assert doc["result"]["reciprocity"]["ok"]
    assert cli.run(["symbol", "--g", "x:1, z:-1", "--h", "y:1, z:-1"], io.StringIO(), io.StringIO()) == 0


def test_symbol_needs_attestation_for_cubics():
    f = "(x+y+z)^3-6*x*y*z"
    assert cli.run(["symbol", "--g", f, "--h", "y"], io.StringIO(), io.StringIO()) == 3
    out = io.StringIO()
    # the residue along f itself needs a parametrization of a cubic
    assert cli.run(["symbol", "--g", f, "--h", "y", "--attest", f], out, io.StringIO()) == 2
    assert "UNSUPPORTED" in out.getvalue()
    assert cli.run(["symbol", "--g", f"{f}:3", "--h", "y", "--attest", f], io.StringIO(), io.StringIO()) == 0


def test_demo_golden_mismatch_exit_1(monkeypatch):
    monkeypatch.setattr(cli, "demo_golden", lambda name: {"group": {}})
    out = io.StringIO()
    assert cli.run(["demo", "refv"], out, io.StringIO()) == 1
    assert "GOLDEN MISMATCH" in out.getvalue()


def test_module_entry_point():
    proc = subprocess.run([sys.executable, "-m", "nrcubic", "demo", "refv"], capture_output=True, text=True)
    assert proc.returncode == 0
    assert "golden output: match" in proc.stdout
