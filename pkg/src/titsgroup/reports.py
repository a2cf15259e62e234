"""Command dispatch and deterministic report assembly."""
from __future__ import annotations

import json
import time
from dataclasses import dataclass
from fractions import Fraction
from typing import Any, Callable, Dict, List, Optional

from . import kernels
from .affine_tits import (check_reduced_word_independence, check_section_multiplicative,
                          extra_node_choices, s2_basis, ses_check, verify_coxeter)
from .descent import relative_tits_check, stable_cross_section
from .descriptor import GroupDescriptor
from .finite_tits import check_ftg_identities
from .hecke import HeckeAlgebra, emit_presentation, hecke_check, schema_agreement, verify_cs
from .iwahori_weyl import affine_nodes, omega_group
from .root_datum import RootDatum

COMMANDS = ("describe", "verify-coxeter", "ftg-identities", "ses-check", "descent-check",
            "hecke-check", "emit-presentation")


class UsageError(ValueError):
    pass


@dataclass
class Flags:
    radius: int = 6
    seed: int = 0
    include_e7: bool = False
    level: int = 0
    triples: int = 500


def _jsonable(x: Any) -> Any:
    if isinstance(x, bool) or x is None or isinstance(x, (int, str)):
        return x
    if isinstance(x, Fraction):
        return int(x) if x.denominator == 1 else [x.numerator, x.denominator]
    if isinstance(x, float):
        raise TypeError("floats are not allowed in reports")
    if isinstance(x, dict):
        return {str(k): _jsonable(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_jsonable(v) for v in x]
    if hasattr(x, "to_json"):
        return _jsonable(x.to_json())
    raise TypeError(f"cannot serialize {type(x).__name__}")


def _status(records: List[dict]) -> str:
    return "fail" if any(r.get("status") == "fail" for r in records) else "pass"


def _describe(rd: RootDatum, desc: GroupDescriptor, flags: Flags) -> dict:
    nodes = affine_nodes(rd)
    grp = omega_group(rd)
    body = {
        "datum": rd.describe(),
        "affine_nodes": [{"index": nd.index, "label": nd.label, "component": nd.component,
                          "gradient": list(rd.roots[nd.root.b]) if nd.root.b < rd.npos
                          else [-x for x in rd.roots[nd.root.b - rd.npos]],
                          "constant": nd.root.k, "finite": nd.finite} for nd in nodes],
        "omega": grp.to_json(),
        "s2_dim": len(s2_basis(rd)),
        "extra_nodes": [c.to_json(rd.dim) for _, c in sorted(extra_node_choices(rd).items())],
    }
    if desc.diagram is not None or desc.inner != "trivial" or desc.res_copies > 1:
        fd = desc.frobenius(rd)
        from .descent import relative_data
        body["frobenius"] = fd.to_json()
        body["relative"] = relative_data(fd).to_json()
    return {"status": "pass", "records": [], **body}


def _verify_coxeter(rd, desc, flags):
    out = verify_coxeter(rd)
    return {"status": out["status"], "records": out["records"], "extra_nodes": out.get("extra_nodes")}


def _ftg(rd, desc, flags):
    records = check_ftg_identities(rd)
    return {"status": _status(records), "records": records}


def _ses(rd, desc, flags):
    ses = ses_check(rd, flags.radius)
    words = check_reduced_word_independence(rd, flags.radius)
    mult = check_section_multiplicative(rd, min(flags.radius, 4))
    records = [{"name": "ses", **ses}, {"name": "reduced_word_independence", **words},
               {"name": "section_multiplicative", **mult}]
    return {"status": _status(records), "records": records}


def _descent(rd, desc, flags):
    fd = desc.frobenius(rd)
    out = relative_tits_check(fd, radius=min(flags.radius, 4), seed=flags.seed, pairs=1000)
    return out


def _hecke(rd, desc, flags):
    sec = stable_cross_section(desc.frobenius(rd))
    alg = HeckeAlgebra(sec)
    out = hecke_check(alg, radius=flags.radius, triples=flags.triples, seed=flags.seed)
    schema = emit_presentation(sec, 0)
    records = out["records"] + [schema_agreement(alg, schema)] + verify_cs(sec, schema)
    return {"status": _status(records), "records": records, "params": out["params"],
            "parameter_polys": [list(p) for p in out["parameter_polys"]], "ball_size": out["ball_size"]}


def _emit(rd, desc, flags):
    sec = stable_cross_section(desc.frobenius(rd))
    schema = emit_presentation(sec, flags.level)
    records = verify_cs(sec, schema)
    return {"status": _status(records), "records": records, "schema": schema.to_json()}


HANDLERS: Dict[str, Callable[[RootDatum, GroupDescriptor, Flags], dict]] = {
    "describe": _describe, "verify-coxeter": _verify_coxeter, "ftg-identities": _ftg,
    "ses-check": _ses, "descent-check": _descent, "hecke-check": _hecke,
    "emit-presentation": _emit,
}


def run_command(cmd: str, desc: GroupDescriptor, flags: Optional[Flags] = None):
    """Return (report, exit code); the report holds a deterministic body and timing."""
    from .descriptor import serialize
    flags = flags or Flags()
    if cmd not in HANDLERS:
        raise UsageError(f"unsupported command {cmd!r}; choose from {', '.join(COMMANDS)}")
    if not flags.include_e7 and any(k == "E" and r >= 7 for k, r in desc.components):
        raise UsageError("E7 and E8 data need --include-e7")
    start = time.perf_counter()
    rd = desc.root_datum()
    result = HANDLERS[cmd](rd, desc, flags)
    elapsed = int((time.perf_counter() - start) * 1000)
    body = {"command": cmd, "descriptor": serialize(desc),
            "flags": {"radius": flags.radius, "seed": flags.seed, "level": flags.level},
            "status": result.get("status", "pass"), "result": result}
    report = {"report": _jsonable(body), "timing": {"elapsed_ms": elapsed, "backend": kernels.BACKEND}}
    return report, 0 if body["status"] == "pass" else 1


def dumps(report: dict) -> str:
    return json.dumps(report, sort_keys=True, separators=(",", ":"))


def render_text(report: dict) -> str:
    body = report["report"]
    lines = [f"{body['command']}: {body['descriptor']}"]
    for rec in body["result"].get("records", []):
        lines.append(f"  {rec.get('status', '?').upper():4} {rec.get('name', '')}")
    lines.append(f"status: {body['status']}")
    return "\n".join(lines)
