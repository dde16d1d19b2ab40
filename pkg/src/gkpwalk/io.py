"""State files, trace documents and CSV exports.

State file schema::

    {"sigma2": 0.5,
     "terms": [{"re": ..., "im": ..., "x": ..., "p": ...}, ...],
     "meta": {"generator": ..., ...}}

Floats are written with 17 significant digits so a load/save cycle is
lossless and identical inputs give byte-identical files.
"""

from __future__ import annotations

import io as _io
import json
import math
from pathlib import Path
from typing import Any

import numpy as np

from .analysis import DensityCurve, EnvelopeFit, WignerGrid
from .errors import InvalidParameterError, SchemaError
from .optics import ProtocolTrace
from .phase_space import CoherentSuperposition
from .walk import HybridState, WalkResult


def format_float(x: float) -> str:
    x = float(x)
    if not math.isfinite(x):
        raise InvalidParameterError(f"cannot serialize non-finite value {x}")
    text = format(x, ".17g")
    if text == "-0":
        return "0"
    return text


def dumps(obj: Any, indent: int = 1) -> str:
    """JSON text with fixed 17-digit floats; records of scalars stay on one line."""
    out = _io.StringIO()
    _write(obj, out, 0, indent)
    out.write("\n")
    return out.getvalue()


def _is_flat(obj) -> bool:
    if isinstance(obj, dict):
        return all(not isinstance(v, (dict, list, tuple)) for v in obj.values())
    return False


def _scalar(obj) -> str:
    if obj is None:
        return "null"
    if isinstance(obj, (bool, np.bool_)):
        return "true" if obj else "false"
    if isinstance(obj, (int, np.integer)):
        return str(int(obj))
    if isinstance(obj, (float, np.floating)):
        return format_float(obj)
    if isinstance(obj, str):
        return json.dumps(obj, ensure_ascii=False)
    raise TypeError(f"cannot serialize {type(obj).__name__}")


def _write(obj, out, level, indent) -> None:
    pad = " " * (indent * (level + 1))
    end = " " * (indent * level)
    if isinstance(obj, dict):
        if not obj:
            out.write("{}")
            return
        if _is_flat(obj) and level > 0:
            out.write("{" + ", ".join(f"{json.dumps(str(k))}: {_scalar(v)}" for k, v in obj.items()) + "}")
            return
        out.write("{\n")
        for n, (k, v) in enumerate(obj.items()):
            out.write(f"{pad}{json.dumps(str(k))}: ")
            _write(v, out, level + 1, indent)
            out.write(",\n" if n < len(obj) - 1 else "\n")
        out.write(end + "}")
    elif isinstance(obj, (list, tuple)):
        if not obj:
            out.write("[]")
            return
        if all(not isinstance(v, (dict, list, tuple)) for v in obj):
            out.write("[" + ", ".join(_scalar(v) for v in obj) + "]")
            return
        out.write("[\n")
        for n, v in enumerate(obj):
            out.write(pad)
            _write(v, out, level + 1, indent)
            out.write(",\n" if n < len(obj) - 1 else "\n")
        out.write(end + "]")
    else:
        out.write(_scalar(obj))


def terms_to_records(state: CoherentSuperposition) -> list[dict]:
    return [
        {"re": float(c.real), "im": float(c.imag), "x": float(x), "p": float(p)}
        for c, (x, p) in zip(state.amplitudes, state.centers)
    ]


def state_to_doc(state: CoherentSuperposition, meta: dict | None = None) -> dict:
    return {"sigma2": state.sigma2, "terms": terms_to_records(state), "meta": dict(meta or {})}


def _number(record, key, where):
    try:
        value = record[key]
    except (KeyError, TypeError):
        raise SchemaError(f"{where}: missing field {key!r}") from None
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise SchemaError(f"{where}: field {key!r} must be a number")
    if not math.isfinite(value):
        raise SchemaError(f"{where}: field {key!r} must be finite")
    return float(value)


def state_from_doc(doc: Any) -> CoherentSuperposition:
    if not isinstance(doc, dict):
        raise SchemaError("state document must be an object")
    sigma2 = _number(doc, "sigma2", "state")
    if sigma2 <= 0:
        raise SchemaError("state: sigma2 must be positive")
    terms = doc.get("terms")
    if not isinstance(terms, list):
        raise SchemaError("state: 'terms' must be an array")
    amps, centers = [], []
    for i, rec in enumerate(terms):
        where = f"terms[{i}]"
        if not isinstance(rec, dict):
            raise SchemaError(f"{where} must be an object")
        extra = set(rec) - {"re", "im", "x", "p"}
        if extra:
            raise SchemaError(f"{where}: unexpected fields {sorted(extra)}")
        amps.append(complex(_number(rec, "re", where), _number(rec, "im", where)))
        centers.append((_number(rec, "x", where), _number(rec, "p", where)))
    if "meta" in doc and not isinstance(doc["meta"], dict):
        raise SchemaError("state: 'meta' must be an object")
    return CoherentSuperposition(sigma2, amps, centers)


def read_json(path) -> Any:
    try:
        text = Path(path).read_text()
    except UnicodeDecodeError as exc:
        raise SchemaError(f"{path}: not a text file") from exc
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise SchemaError(f"{path}: invalid JSON ({exc})") from exc


def write_text(path, text: str) -> None:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(text)


def load_state(path) -> tuple[CoherentSuperposition, dict]:
    doc = read_json(path)
    state = state_from_doc(doc)
    return state, dict(doc.get("meta", {}))


def save_state(path, state: CoherentSuperposition, meta: dict | None = None) -> None:
    write_text(path, dumps(state_to_doc(state, meta)))


def hybrid_to_doc(state: HybridState) -> dict:
    return {"sigma2": state.sigma2, "H": terms_to_records(state.branch_h),
            "V": terms_to_records(state.branch_v)}


def walk_result_to_doc(result: WalkResult, meta: dict | None = None) -> dict:
    doc = state_to_doc(result.kept, meta)
    doc["trace"] = [
        {"step": t.step, "success_prob": t.success_prob,
         "kept_norm2": t.kept_norm2, "rejected_norm2": t.rejected_norm2}
        for t in result.step_traces
    ]
    return doc


def protocol_trace_to_doc(trace: ProtocolTrace, meta: dict | None = None) -> dict:
    steps = []
    for s in trace.steps:
        steps.append({
            "step": s.step,
            "mirror": s.mirror,
            "input": hybrid_to_doc(s.input),
            "after_R_minus": hybrid_to_doc(s.after_R_minus),
            "after_kick": hybrid_to_doc(s.after_kick),
            "discarded_port": hybrid_to_doc(s.discarded_port),
            "after_R_plus": hybrid_to_doc(s.after_R_plus),
            "detector_port": hybrid_to_doc(s.detector_port),
            "kept_port": hybrid_to_doc(s.kept_port),
        })
    final_meta = dict(meta or {})
    final_meta["coin"] = "V"
    return {
        "params": {"N": trace.N, "w": trace.w, "sigma2": trace.input.sigma2},
        "steps": steps,
        "final": state_to_doc(trace.final_walker, final_meta),
    }


def final_state_doc(trace_doc: Any) -> dict:
    """The final walker state of either trace flavour."""
    if not isinstance(trace_doc, dict):
        raise SchemaError("trace document must be an object")
    if "final" in trace_doc and "steps" in trace_doc:
        doc = trace_doc["final"]
    elif "trace" in trace_doc and "terms" in trace_doc:
        doc = {k: trace_doc[k] for k in ("sigma2", "terms", "meta") if k in trace_doc}
    else:
        raise SchemaError("not a walk or protocol trace document")
    state_from_doc(doc)
    return doc


def wigner_to_csv(grid: WignerGrid) -> str:
    xs, ps = grid.grid.xs, grid.grid.ps
    lines = ["x,p,w"]
    for i, x in enumerate(xs):
        fx = format_float(x)
        for j, p in enumerate(ps):
            lines.append(f"{fx},{format_float(p)},{format_float(grid.values[i, j])}")
    return "\n".join(lines) + "\n"


def wigner_to_doc(grid: WignerGrid, meta: dict | None = None) -> dict:
    g = grid.grid
    return {
        "grid": {"x_min": g.x_min, "x_max": g.x_max, "nx": g.num_x,
                 "p_min": g.p_min, "p_max": g.p_max, "np": g.num_p},
        "imag_residue": grid.imag_residue,
        "values": [list(map(float, row)) for row in grid.values],
        "meta": dict(meta or {}),
    }


def density_to_csv(curve: DensityCurve) -> str:
    lines = ["coord,density"]
    lines += [f"{format_float(c)},{format_float(d)}" for c, d in zip(curve.coords, curve.density)]
    return "\n".join(lines) + "\n"


def envelope_to_doc(fit: EnvelopeFit, meta: dict | None = None) -> dict:
    return {"kappa_hat": fit.kappa_hat, "residual": fit.residual,
            "n_points": fit.n_points, "meta": dict(meta or {})}
