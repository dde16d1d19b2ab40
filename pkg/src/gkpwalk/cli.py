"""``gkpwalk`` command line.

Exit codes: 0 success, 1 a requested check failed, 2 invalid parameters,
3 file-system errors, 4 malformed or incompatible state files.
"""

from __future__ import annotations

import argparse
import math
import sys
from pathlib import Path

import yaml

from . import io as gio
from .analysis import (
    GridSpec,
    default_grid,
    equivalence_report,
    fidelity,
    fit_envelope,
    quadrature_density,
    wigner_grid,
)
from .errors import GkpWalkError, IncompatibleWidthError, InvalidParameterError, SchemaError
from .optics import apply_fourier_lens, run_sagnac_protocol
from .phase_space import SYMMETRIC_SIGMA2, make_vacuum, normalize
from .targets import GkpTargetSpec, approx_gkp, rotated_target
from .walk import WalkConfig, run_walk

EXIT_OK, EXIT_CHECK_FAILED, EXIT_VALIDATION, EXIT_IO, EXIT_SCHEMA = 0, 1, 2, 3, 4

WALK_DEFAULTS = {"axis": "position", "mode": "reduced", "sigma2": SYMMETRIC_SIGMA2, "input": None}
TARGET_DEFAULTS = {"sigma2": SYMMETRIC_SIGMA2, "r_max": None, "axis": "position", "rotated": False}


def _range(text: str) -> tuple[float, float, int]:
    """Parse ``lo:hi:n``."""
    try:
        lo, hi, n = text.split(":")
        return float(lo), float(hi), int(n)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected lo:hi:n, got {text!r}") from None


def _load_config(path) -> dict:
    if path is None:
        return {}
    try:
        data = yaml.safe_load(Path(path).read_text())
    except yaml.YAMLError as exc:
        raise InvalidParameterError(f"config {path}: {exc}") from exc
    if data is None:
        return {}
    if not isinstance(data, dict):
        raise InvalidParameterError(f"config {path} must be a mapping")
    return {k.replace("-", "_"): v for k, v in data.items()}


def _merge(args, defaults: dict, keys) -> dict:
    """Defaults, then config file, then explicit flags."""
    merged = dict(defaults)
    merged.update(_load_config(getattr(args, "config", None)))
    for key in keys:
        value = getattr(args, key, None)
        if value is not None:
            merged[key] = value
    return merged


def _require(params: dict, *keys) -> None:
    missing = [k for k in keys if params.get(k) is None]
    if missing:
        raise InvalidParameterError(f"missing required parameter(s): {', '.join(missing)}")


def _as_int(value, name) -> int:
    if isinstance(value, bool) or not isinstance(value, (int, float)) or int(value) != value:
        raise InvalidParameterError(f"{name} must be an integer, got {value!r}")
    return int(value)


def _as_float(value, name) -> float:
    try:
        value = float(value)
    except (TypeError, ValueError):
        raise InvalidParameterError(f"{name} must be a number, got {value!r}") from None
    if not math.isfinite(value):
        raise InvalidParameterError(f"{name} must be finite")
    return value


def _emit(text: str, out) -> None:
    if out is None:
        sys.stdout.write(text)
    else:
        gio.write_text(out, text)


def cmd_walk(args) -> int:
    p = _merge(args, WALK_DEFAULTS, ("N", "w", "axis", "mode", "sigma2", "input", "out"))
    _require(p, "N", "w", "out")
    N = _as_int(p["N"], "N")
    w = _as_float(p["w"], "w")
    sigma2 = _as_float(p["sigma2"], "sigma2")
    axis, mode = p["axis"], p["mode"]
    if mode not in ("reduced", "optical"):
        raise InvalidParameterError(f"mode must be reduced|optical, got {mode!r}")
    if p["input"] is not None:
        walker, _ = gio.load_state(p["input"])
    else:
        walker = make_vacuum(sigma2)
    config = WalkConfig(N, w, axis, walker)
    params = {"N": N, "w": w, "axis": axis, "sigma2": walker.sigma2}
    out = Path(p["out"])

    if mode == "reduced":
        result = run_walk(config)
        final, prob = result.kept, result.success_probability
        meta = {"generator": "walk-reduced", **params}
        trace_doc = gio.walk_result_to_doc(result, meta)
    else:
        # The loop kicks momentum; a position walk is the lens-conjugated loop.
        if axis == "momentum":
            trace = run_sagnac_protocol(N, w, walker)
            final = trace.final_walker
        else:
            trace = run_sagnac_protocol(N, w, apply_fourier_lens(walker, "inverse"))
            final = apply_fourier_lens(trace.final_walker, "forward")
        prob = trace.success_probability
        meta = {"generator": "sagnac-protocol", **params}
        trace_doc = gio.protocol_trace_to_doc(trace, meta)

    kappa = (2 * N * w * w) ** -0.5
    target = approx_gkp(GkpTargetSpec("zero", w, kappa, walker.sigma2, N, axis))
    summary = {
        "mode": mode, **params,
        "success_probability": prob,
        "n_terms": len(final),
        "target": {"logical": "zero", "kappa": kappa, "r_max": N,
                   "fidelity": fidelity(normalize(final), target)},
    }
    gio.save_state(out / "state.json", final, meta)
    gio.write_text(out / "trace.json", gio.dumps(trace_doc))
    gio.write_text(out / "summary.json", gio.dumps(summary))
    return EXIT_OK


def cmd_target(args) -> int:
    p = _merge(args, TARGET_DEFAULTS, ("logical", "w", "kappa", "sigma2", "r_max", "axis", "rotated", "out"))
    _require(p, "logical", "w", "kappa")
    r_max = None if p["r_max"] is None else _as_int(p["r_max"], "r_max")
    spec = GkpTargetSpec(str(p["logical"]), _as_float(p["w"], "w"), _as_float(p["kappa"], "kappa"),
                         _as_float(p["sigma2"], "sigma2"), r_max, p["axis"])
    state = rotated_target(spec) if p["rotated"] else approx_gkp(spec)
    meta = {"generator": "gkp-target", "logical": spec.logical, "w": spec.w, "kappa": spec.kappa,
            "r_max": spec.r_max, "axis": spec.axis, "rotated": bool(p["rotated"])}
    _emit(gio.dumps(gio.state_to_doc(state, meta)), p.get("out"))
    return EXIT_OK


def cmd_fidelity(args) -> int:
    a, _ = gio.load_state(args.a)
    b, _ = gio.load_state(args.b)
    print(gio.format_float(fidelity(a, b)))
    return EXIT_OK


def cmd_wigner(args) -> int:
    state, _ = gio.load_state(args.state)
    if args.grid is None:
        grid = default_grid(state, args.points)
    else:
        x_lo, x_hi, nx = args.grid
        p_lo, p_hi, n_p = args.pgrid or args.grid
        grid = GridSpec(x_lo, x_hi, nx, p_lo, p_hi, n_p)
    result = wigner_grid(state, grid)
    if args.format == "csv":
        _emit(gio.wigner_to_csv(result), args.out)
    else:
        _emit(gio.dumps(gio.wigner_to_doc(result, {"source": str(args.state)})), args.out)
    return EXIT_OK


def cmd_density(args) -> int:
    import numpy as np

    state, _ = gio.load_state(args.state)
    lo, hi, n = args.samples
    if n < 1 or not hi >= lo:
        raise InvalidParameterError("samples must be lo:hi:n with hi >= lo and n >= 1")
    curve = quadrature_density(state, args.quadrature, np.linspace(lo, hi, n))
    _emit(gio.density_to_csv(curve), args.out)
    return EXIT_OK


def cmd_envelope(args) -> int:
    state, _ = gio.load_state(args.state)
    fit = fit_envelope(state, args.w, args.axis)
    meta = {"w": args.w, "axis": args.axis, "source": str(args.state)}
    _emit(gio.dumps(gio.envelope_to_doc(fit, meta)), args.out)
    return EXIT_OK


def cmd_equiv(args) -> int:
    report = equivalence_report(args.N, args.w, args.sigma2)
    _emit(gio.dumps(report.to_dict()), args.out)
    return EXIT_OK if report.passed else EXIT_CHECK_FAILED


def cmd_trace_dump(args) -> int:
    doc = gio.read_json(args.trace)
    if args.final_only:
        _emit(gio.dumps(gio.final_state_doc(doc)), args.out)
    else:
        gio.final_state_doc(doc)
        _emit(gio.dumps(doc), args.out)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="gkpwalk", description="Random-walk preparation of approximate GKP states.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("walk", help="run the post-selected walk and write state, trace and summary")
    p.add_argument("--config", help="YAML/JSON file with parameters; flags override it")
    p.add_argument("--N", type=int, help="half the number of steps (the walk runs 2N steps)")
    p.add_argument("--w", type=float, help="kick magnitude")
    p.add_argument("--axis", choices=["position", "momentum"])
    p.add_argument("--mode", choices=["reduced", "optical"])
    p.add_argument("--sigma2", type=float)
    p.add_argument("--input", help="walker state file (default: vacuum)")
    p.add_argument("--out", help="output directory")
    p.set_defaults(func=cmd_walk)

    p = sub.add_parser("target", help="write a normalized approximate GKP state")
    p.add_argument("--config")
    p.add_argument("--logical", choices=["0", "1", "zero", "one"])
    p.add_argument("--w", type=float)
    p.add_argument("--kappa", type=float)
    p.add_argument("--sigma2", type=float)
    p.add_argument("--r-max", dest="r_max", type=int)
    p.add_argument("--axis", choices=["position", "momentum"])
    p.add_argument("--rotated", action="store_const", const=True,
                   help="quarter-turn the position comb instead of building it on the axis")
    p.add_argument("--out")
    p.set_defaults(func=cmd_target)

    p = sub.add_parser("fidelity", help="print |<a|b>|^2 / (|a|^2 |b|^2)")
    p.add_argument("a")
    p.add_argument("b")
    p.set_defaults(func=cmd_fidelity)

    p = sub.add_parser("wigner", help="Wigner function on a grid (CSV x,p,w)")
    p.add_argument("state")
    p.add_argument("--grid", type=_range, help="x range lo:hi:n (also used for p unless --pgrid)")
    p.add_argument("--pgrid", type=_range)
    p.add_argument("--points", type=int, default=512, help="points per axis for the automatic grid")
    p.add_argument("--format", choices=["csv", "json"], default="csv")
    p.add_argument("--out")
    p.set_defaults(func=cmd_wigner)

    p = sub.add_parser("density", help="quadrature density |psi|^2 (CSV coord,density)")
    p.add_argument("state")
    p.add_argument("--quadrature", choices=["position", "momentum"], default="position")
    p.add_argument("--samples", type=_range, required=True, help="lo:hi:n")
    p.add_argument("--out")
    p.set_defaults(func=cmd_density)

    p = sub.add_parser("envelope", help="fit the Gaussian envelope width kappa")
    p.add_argument("state")
    p.add_argument("--w", type=float, required=True)
    p.add_argument("--axis", choices=["position", "momentum"], default="position")
    p.add_argument("--out")
    p.set_defaults(func=cmd_envelope)

    p = sub.add_parser("equiv", help="position/momentum walk equivalence report")
    p.add_argument("--N", type=int, required=True)
    p.add_argument("--w", type=float, required=True)
    p.add_argument("--sigma2", type=float, default=SYMMETRIC_SIGMA2)
    p.add_argument("--out")
    p.set_defaults(func=cmd_equiv)

    p = sub.add_parser("trace-dump", help="re-emit a trace document or only its final state")
    p.add_argument("trace")
    p.add_argument("--final-only", action="store_true")
    p.add_argument("--out")
    p.set_defaults(func=cmd_trace_dump)
    return parser


_RANGE_FLAGS = ("--grid", "--pgrid", "--samples")


def _attach_range_values(argv: list[str]) -> list[str]:
    # "--grid -6:6:256" would otherwise be read as an unknown option.
    out = []
    i = 0
    while i < len(argv):
        if argv[i] in _RANGE_FLAGS and i + 1 < len(argv) and argv[i + 1].startswith("-"):
            out.append(f"{argv[i]}={argv[i + 1]}")
            i += 2
        else:
            out.append(argv[i])
            i += 1
    return out


def main(argv=None) -> int:
    argv = sys.argv[1:] if argv is None else list(argv)
    args = build_parser().parse_args(_attach_range_values(argv))
    try:
        return args.func(args)
    except (SchemaError, IncompatibleWidthError) as exc:
        print(f"gkpwalk: schema error: {exc}", file=sys.stderr)
        return EXIT_SCHEMA
    except GkpWalkError as exc:
        print(f"gkpwalk: invalid parameters: {exc}", file=sys.stderr)
        return EXIT_VALIDATION
    except OSError as exc:
        print(f"gkpwalk: I/O error: {exc}", file=sys.stderr)
        return EXIT_IO


if __name__ == "__main__":
    sys.exit(main())
