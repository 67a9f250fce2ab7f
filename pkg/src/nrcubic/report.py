"""Machine (JSON) and human (aligned text) reports."""

from __future__ import annotations

import json
from typing import Any

from . import __version__

TOOL = "nrcubic"


def envelope(command: str, result: Any = None, *, bundle: dict | None = None,
             error: Exception | None = None, exit_code: int = 0, **meta) -> dict:
    doc = {
        "tool": {"name": TOOL, "version": __version__},
        "command": command,
        "exit_code": exit_code,
        "result": result,
    }
    if bundle is not None:
        doc["bundle"] = bundle
    if error is not None:
        doc["error"] = {
            "code": getattr(error, "code", type(error).__name__),
            "message": str(error),
            "witness": getattr(error, "witness", {}),
        }
    doc.update(meta)
    return doc


def dumps(doc: dict) -> str:
    """Canonical serialisation: identical input gives identical bytes."""
    return json.dumps(doc, sort_keys=True, indent=2, ensure_ascii=False) + "\n"


def loads(text: str) -> dict:
    return json.loads(text)


# ---------------------------------------------------------------------------
# human text
# ---------------------------------------------------------------------------

def table(rows: list[list[str]], header: list[str]) -> str:
    cells = [header] + [[str(c) for c in r] for r in rows]
    widths = [max(len(r[i]) for r in cells) for i in range(len(header))]
    fmt = lambda r: "  ".join(c.ljust(w) for c, w in zip(r, widths)).rstrip()
    out = [fmt(header), fmt(["-" * w for w in widths])]
    out += [fmt(r) for r in cells[1:]]
    return "\n".join(out)


def _cls(d: dict) -> str:
    if d["trivial"]:
        return "1"
    parts = [f"{p['exponent']}*{p['point']}" for p in d["points"]]
    parts += [f"{p['exponent']}*V({p['poly_in_s']})" for p in d["irrational_blocks"]]
    return " + ".join(parts)


def render_bundle(b: dict) -> str:
    lines = []
    for pos in ("a", "b", "c", "d"):
        c = b[pos]
        fac = " * ".join(f"({f})^{e}" if e != 1 else f"({f})" for f, e in c["factors"]) or "1"
        sc = "" if c["scalar"] == "1" else f"{c['scalar']} * "
        lines.append(f"  {pos} = {sc}{fac}")
    return "\n".join(lines)


def render_validate(r: dict) -> str:
    out = ["Bundle invariants: " + r["validation"]["status"]]
    for c in r["validation"]["checks"]:
        extra = f"  ({c['justification']})" if "justification" in c else ""
        out.append(f"  {c['check']}: {c['status']}{extra}")
    out.append("Hypothesis precheck:")
    for h in r["hypotheses"]:
        out.append(f"  {h['hypothesis']}: {h['status']}" + (f"  [{h['detail']}]" if h.get("detail") else ""))
    return "\n".join(out)


def render_fibers(r: dict) -> str:
    rows = []
    for ft in r["components"]:
        vals = ",".join(str(ft["valuations"][p]) for p in "abcd")
        gamma = _cls(ft["gamma"]) if "gamma" in ft else ""
        rows.append([ft["curve"], ft["irreducibility"], vals, ft["type"], gamma])
    out = [table(rows, ["component", "status", "v(a,b,c,d)", "fibre", "gamma"])]
    out.append(f"gamma convention: {r['convention']}")
    out.append("three-planes locus: " + (", ".join(r["three_planes_locus"]) or "(empty)"))
    if r["non_reduced"]:
        out.append("NON-REDUCED fibres over: " + ", ".join(r["non_reduced"]))
    if r.get("snc"):
        s = r["snc"]
        out.append(f"SNC on locus: {s['status']}" + (f" ({s['failure']} at {s['witness']})" if s["failure"] else ""))
    return "\n".join(out)


def render_minimality(r: dict) -> str:
    out = [f"Segre verdict: {r['verdict']}"]
    if "witness" in r:
        out.append(f"  Severi-Brauer class: {r['witness']}")
    if "labeling" in r:
        lab = ", ".join(f"{k}={v}" for k, v in r["labeling"].items())
        out.append(f"  labeling: {lab}")
        out.append(table([[e["name"], e["element"], "cube" if e["cube_in_K"] else "non-cube"]
                          for e in r["segre_elements"]], ["element", "value", "in K"]))
    return "\n".join(out)


def render_symbol(r: dict) -> str:
    out = [f"symbol: {r['symbol']}"]
    rows = [[x["curve"], str(x["v_g"]), str(x["v_h"]), str(x["sign"]),
             "UNSUPPORTED" if x["residue"] is None else _cls(x["residue"])] for x in r["residues"]]
    out.append(table(rows, ["curve", "v(g)", "v(h)", "sign", "residue"]))
    out.append("ramification divisor: " + (", ".join(r["ramification_divisor"]) or "(empty)"))
    if r["undecided_curves"]:
        out.append("undecided (no parametrization): " + ", ".join(r["undecided_curves"]))
    rec = r["reciprocity"]
    if rec is None:
        out.append("reciprocity: " + r.get("reciprocity_blocker", "not checked"))
    else:
        out.append(f"reciprocity: {'OK' if rec['ok'] else 'FAILED'}")
        for p in rec["points"]:
            contrib = " + ".join(f"{v}({c})" for c, v in p["contributions"])
            out.append(f"  {p['point']}: {contrib or '0'} = {p['sum']}")
    return "\n".join(out)


def render_hnr(r: dict) -> str:
    out = [render_fibers({**r["fibers"], "convention": r["gamma_convention"], "snc": r["snc"]}), ""]
    out.append(render_minimality(r["minimality"]))
    out.append("")
    out.append("condition (i):")
    for c, v in r["condition_i"].items():
        out.append(f"  {c}: {v['status']}")
    g = r["group"]
    out.append("")
    rows = []
    for v in r["vectors"]:
        why = ""
        if v["status"] == "NO":
            w = v["condition_ii"]["witness"]
            why = f"sum {w['sum']} at {w['point']}"
        elif v["status"] == "UNKNOWN":
            why = "; ".join(v["blockers"])
        rows.append([str(tuple(v["vector"])), v["status"], why])
    out.append(table(rows, ["vector (" + ", ".join(g["components"]) + ")", "verdict", "witness"]))
    out.append("")
    out.append(f"proven subgroup order: {g['order']}")
    out.append("members: " + ", ".join(str(tuple(m)) for m in g["proven_members"]))
    if g["undecided"]:
        out.append("undecided: " + ", ".join(str(tuple(m)) for m in g["undecided"]))
    for w in r["symbol_witnesses"]:
        out.append(f"symbol witness for {tuple(w['vector'])}: {w['symbol'] or 'none found'}")
    if r["certificate"]:
        out.append("")
        out.append("CERTIFICATE")
        out.append("  " + r["certificate"]["conclusion"])
        for h in r["certificate"]["hypotheses"]:
            out.append(f"  [{h['status']}] {h['hypothesis']}")
        for c in r["certificate"]["provenance"]["components"]:
            if c["irreducibility"] == "ATTESTED":
                out.append(f"  note: irreducibility of {c['curve']} is user-attested")
    return "\n".join(out)
