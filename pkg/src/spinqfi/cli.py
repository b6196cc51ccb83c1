"""Command-line surface: analyze, landscape, crb, depth.

Specs and reports are JSON documents; every float is serialized with 17
significant digits so documents round-trip losslessly and identical inputs
produce byte-identical outputs (no timestamps, no environment echoes).

Exit codes: 0 success, 2 parse error, 3 validation error, 4 numerical
failure, 5 dimension cap exceeded.
"""
from __future__ import annotations

import argparse
import json
import math
import sys
from dataclasses import dataclass, replace

import numpy as np

from . import __version__, criteria, interferometer, landscape, qfi, states
from .errors import SpecError, SpinQfiError, ValidationError
from .states import StateSpec


@dataclass(frozen=True)
class AnalysisConfig:
    tol_violation: float = 1e-9
    eps_rank: float = 1e-12
    fd_step: float = 1e-4
    seed: int = 0
    dimension_cap: int = 4096

    def __post_init__(self):
        for name in ("tol_violation", "eps_rank", "fd_step"):
            if getattr(self, name) <= 0:
                raise ValidationError(f"config field {name} must be positive")
        cap = self.dimension_cap
        if cap < 2 or cap & (cap - 1) != 0:
            raise ValidationError("dimension_cap must be a power of 2, at least 2")
        if self.seed < 0:
            raise ValidationError("seed must be a nonnegative integer")

    def to_dict(self) -> dict:
        return {
            "tol_violation": self.tol_violation,
            "eps_rank": self.eps_rank,
            "fd_step": self.fd_step,
            "seed": int(self.seed),
            "dimension_cap": int(self.dimension_cap),
        }


# ---------------------------------------------------------------- serialization

def _format_float(x: float) -> str:
    if math.isnan(x) or math.isinf(x):
        raise ValidationError("cannot serialize non-finite numbers")
    return f"{x:.17g}"


def dumps(obj, indent: int = 0) -> str:
    """Deterministic JSON with 17-significant-digit floats."""
    pad = "  " * indent
    inner = "  " * (indent + 1)
    if obj is None:
        return "null"
    if isinstance(obj, bool):
        return "true" if obj else "false"
    if isinstance(obj, (int, np.integer)):
        return str(int(obj))
    if isinstance(obj, (float, np.floating)):
        return _format_float(float(obj))
    if isinstance(obj, str):
        return json.dumps(obj)
    if isinstance(obj, np.ndarray):
        return dumps(obj.tolist(), indent)
    if isinstance(obj, (list, tuple)):
        if not obj:
            return "[]"
        items = [dumps(v, indent + 1) for v in obj]
        return "[\n" + ",\n".join(inner + it for it in items) + "\n" + pad + "]"
    if isinstance(obj, dict):
        if not obj:
            return "{}"
        items = [f"{inner}{json.dumps(str(k))}: {dumps(v, indent + 1)}"
                 for k, v in obj.items()]
        return "{\n" + ",\n".join(items) + "\n" + pad + "}"
    raise ValidationError(f"cannot serialize {type(obj).__name__}")


def _emit(text: str, out_path) -> None:
    if out_path:
        with open(out_path, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


# ---------------------------------------------------------------- spec loading

def load_spec_file(path: str) -> StateSpec:
    try:
        with open(path, "r", encoding="utf-8") as fh:
            doc = json.load(fh)
    except OSError as exc:
        raise SpecError(f"cannot read spec file {path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise SpecError(f"spec file {path} is not valid JSON: {exc}") from exc
    return StateSpec.from_dict(doc)


def load_config(args) -> AnalysisConfig:
    cfg = AnalysisConfig()
    if getattr(args, "config", None):
        try:
            with open(args.config, "r", encoding="utf-8") as fh:
                doc = json.load(fh)
        except OSError as exc:
            raise SpecError(f"cannot read config file {args.config}: {exc}") from exc
        except json.JSONDecodeError as exc:
            raise SpecError(f"config file is not valid JSON: {exc}") from exc
        if not isinstance(doc, dict):
            raise SpecError("config document must be an object")
        unknown = set(doc) - {"tol_violation", "eps_rank", "fd_step", "seed",
                              "dimension_cap"}
        if unknown:
            raise SpecError(f"unknown config fields: {sorted(unknown)}")
        cfg = replace(cfg, **doc)
    if getattr(args, "tol", None) is not None:
        cfg = replace(cfg, tol_violation=args.tol)
    if getattr(args, "seed", None) is not None:
        cfg = replace(cfg, seed=args.seed)
    if getattr(args, "max_qubits", None) is not None:
        cfg = replace(cfg, dimension_cap=2 ** args.max_qubits)
    return cfg


def _spec_id(spec: StateSpec) -> str:
    """Compact single-token state descriptor for point-cloud rows."""
    parts = [spec.kind]
    if spec.n_qubits is not None:
        parts.append(f"n={spec.n_qubits}")
    if spec.kind in ("ghz", "dicke", "excited_dicke"):
        parts.append(f"basis={spec.basis}")
    if spec.m is not None:
        parts.append(f"m={spec.m}")
    if spec.c is not None:
        parts.append("c=" + "/".join(_format_float(v) for v in spec.c))
    if spec.alpha is not None:
        parts.append("alpha=" + "/".join(
            f"{_format_float(z.real)}{z.imag:+.17g}j" for z in spec.alpha))
    if spec.coeffs is not None:
        parts.append("coeffs=" + "/".join(
            f"{_format_float(z.real)}{z.imag:+.17g}j" for z in spec.coeffs))
    if spec.p is not None:
        parts.append(f"p={_format_float(spec.p)}")
    if spec.inner is not None:
        parts.append("inner=(" + _spec_id(spec.inner) + ")")
    return " ".join(parts)


# ---------------------------------------------------------------- subcommands

def _criterion_doc(rep: criteria.CriterionReport) -> dict:
    return {
        "criterion_id": rep.criterion_id,
        "bound": rep.bound,
        "value": rep.value,
        "margin": rep.margin,
        "violated": rep.violated,
        "implication": rep.implication,
        "direction": rep.direction,
    }


def analysis_document(spec: StateSpec, cfg: AnalysisConfig) -> dict:
    state = states.from_spec(spec, cap=cfg.dimension_cap)
    qmat = qfi.qfi_matrix(state, eps_rank=cfg.eps_rank)
    reports, depth = criteria.evaluate_all(state, tol=cfg.tol_violation, qmat=qmat)
    return {
        "tool": {"name": "spinqfi", "version": __version__},
        "input_spec": spec.to_dict(),
        "n_qubits": state.n_qubits,
        "fisher_triple": [float(v) for v in qmat.fisher_triple],
        "qfi_matrix": [[float(v) for v in row] for row in qmat.mat],
        "qfi_matrix_eigenvalues": [float(v) for v in qmat.eigenvalues],
        "average_qfi": qmat.trace / 3.0,
        "criteria": [_criterion_doc(r) for r in reports],
        "unentangled_summary": criteria.unentangled_summary(reports),
        "depth_certificate": {
            "depth_lower_bound": depth.depth_lower_bound,
            "witnessing_criterion": depth.witnessing_criterion,
            "witness_value": depth.witness_value,
        },
        "diagnostics": {
            "hermiticity_residue": state.herm_residue,
            "qfi_imag_residue": qmat.imag_residue,
            "config": cfg.to_dict(),
        },
    }


def cmd_analyze(args) -> int:
    cfg = load_config(args)
    docs = [analysis_document(load_spec_file(path), cfg) for path in args.spec]
    if getattr(args, "depth_only", False):
        docs = [{"tool": d["tool"], "input_spec": d["input_spec"],
                 "depth_certificate": d["depth_certificate"]} for d in docs]
    top = docs[0] if len(docs) == 1 else {"reports": docs}
    _emit(dumps(top) + "\n", args.out)
    return 0


def cmd_landscape(args) -> int:
    cfg = load_config(args)
    n = args.n_qubits
    rows = []
    if args.family == "landmarks":
        for name, point in landscape.landmark_points(n).items():
            rows.append((point.p, name))
    elif args.family == "dicke_plane":
        for point in landscape.sample_dicke_plane(n, args.count, cfg.seed):
            rows.append((point.p, _spec_id(point.provenance)))
    elif args.family == "product_fill":
        for point in landscape.sample_product_polytope(n, args.count, cfg.seed):
            rows.append((point.p, _spec_id(point.provenance)))
    elif args.family == "noise_line":
        if args.spec:
            base = states.from_spec(load_spec_file(args.spec), cap=cfg.dimension_cap)
        else:
            base = states.ghz(n, "z", cap=cfg.dimension_cap)
        grid = np.linspace(0.0, 1.0, max(2, args.count))
        result = landscape.noise_line(base, grid)
        for entry in result.entries:
            label = _spec_id(entry.measured.provenance) if entry.measured.provenance \
                else f"p={_format_float(entry.p)}"
            rows.append((entry.measured.p, label))
    else:
        raise ValidationError(f"unknown landscape family {args.family!r}")
    lines = ["F_x,F_y,F_z,spec_id"]
    for point, label in rows:
        lines.append(",".join(_format_float(float(v)) for v in point) + "," + label)
    _emit("\n".join(lines) + "\n", args.out)
    return 0


def _build_measurement(name: str, state, direction, seed: int) -> interferometer.Measurement:
    if name.startswith("parity-"):
        axis = name.split("-", 1)[1]
        return interferometer.Measurement.parity(axis, state.n_qubits)
    if name == "computational":
        return interferometer.Measurement.computational(state.n_qubits)
    if name == "collective":
        from .collective import j_direction
        return interferometer.Measurement.from_observable(
            j_direction(direction, state.n_qubits))
    if name == "random":
        rng = np.random.default_rng(seed)
        dim = state.dim
        g = rng.normal(size=(dim, dim)) + 1j * rng.normal(size=(dim, dim))
        basis, _ = np.linalg.qr(g)
        return interferometer.Measurement(
            [np.outer(basis[:, i], basis[:, i].conj()) for i in range(dim)])
    raise ValidationError(f"unknown measurement {name!r}")


def _parse_direction(text: str) -> np.ndarray:
    unit = {"x": (1.0, 0.0, 0.0), "y": (0.0, 1.0, 0.0), "z": (0.0, 0.0, 1.0)}
    if text in unit:
        return np.array(unit[text])
    try:
        vec = np.array([float(v) for v in text.split(",")])
    except ValueError as exc:
        raise ValidationError(f"direction must be x, y, z or three comma-separated"
                              f" numbers, got {text!r}") from exc
    if vec.shape != (3,) or not np.all(np.isfinite(vec)) or np.linalg.norm(vec) == 0:
        raise ValidationError(f"invalid direction {text!r}")
    return vec / np.linalg.norm(vec)


def cmd_crb(args) -> int:
    cfg = load_config(args)
    spec = load_spec_file(args.spec)
    state = states.from_spec(spec, cap=cfg.dimension_cap)
    direction = _parse_direction(args.direction)
    fq = qfi.qfi_direction(state, direction, eps_rank=cfg.eps_rank)
    doc = {
        "tool": {"name": "spinqfi", "version": __version__},
        "input_spec": spec.to_dict(),
        "direction": [float(v) for v in direction],
        "theta": args.theta,
        "measurement": args.measurement,
        "fisher_quantum": fq,
    }
    if fq <= cfg.tol_violation:
        doc.update({"fisher_classical": None, "crb": None,
                    "ordering_ok": True, "status": "unbounded-variance"})
    else:
        meas = _build_measurement(args.measurement, state, direction, cfg.seed)
        setting = interferometer.PhaseSetting(args.theta, tuple(direction))
        detail = interferometer.classical_fisher_report(state, setting, meas,
                                                        h=cfg.fd_step)
        fcl = detail["value"]
        doc.update({
            "fisher_classical": fcl,
            "crb": 1.0 / math.sqrt(fq),
            "ordering_ok": bool(fcl <= fq + 1e-6),
            "status": "ok",
            "excluded_outcomes": detail["excluded_outcomes"],
        })
    _emit(dumps(doc) + "\n", args.out)
    return 0


# ---------------------------------------------------------------- entry point

def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="spinqfi",
        description="Collective-spin quantum Fisher information and "
                    "multipartite-entanglement certification for N-qubit states.")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p):
        p.add_argument("--config", help="JSON config file")
        p.add_argument("--tol", type=float, help="violation tolerance override")
        p.add_argument("--seed", type=int, help="RNG seed override")
        p.add_argument("--max-qubits", type=int, dest="max_qubits",
                       help="dimension cap as a qubit count")
        p.add_argument("--out", help="output path (default stdout)")

    p_an = sub.add_parser("analyze", help="full criteria report for state specs")
    p_an.add_argument("spec", nargs="+", help="state-spec JSON files")
    common(p_an)
    p_an.set_defaults(func=cmd_analyze, depth_only=False)

    p_dep = sub.add_parser("depth", help="entanglement-depth certificate only")
    p_dep.add_argument("spec", nargs="+", help="state-spec JSON files")
    common(p_dep)
    p_dep.set_defaults(func=cmd_analyze, depth_only=True)

    p_land = sub.add_parser("landscape", help="point clouds in Fisher space")
    p_land.add_argument("family", choices=["landmarks", "dicke_plane",
                                           "product_fill", "noise_line"])
    p_land.add_argument("--n-qubits", type=int, required=True, dest="n_qubits")
    p_land.add_argument("--count", type=int, default=100)
    p_land.add_argument("--spec", help="state spec for the noise_line family")
    common(p_land)
    p_land.set_defaults(func=cmd_landscape)

    p_crb = sub.add_parser("crb", help="quantum/classical Fisher comparison")
    p_crb.add_argument("spec", help="state-spec JSON file")
    p_crb.add_argument("--direction", default="z")
    p_crb.add_argument("--measurement", default="parity-x")
    p_crb.add_argument("--theta", type=float, default=0.1)
    common(p_crb)
    p_crb.set_defaults(func=cmd_crb)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except SpinQfiError as exc:
        error = {"error": {"type": type(exc).__name__, "message": str(exc),
                           "exit_code": exc.exit_code}}
        sys.stderr.write(dumps(error) + "\n")
        return exc.exit_code


if __name__ == "__main__":
    sys.exit(main())
