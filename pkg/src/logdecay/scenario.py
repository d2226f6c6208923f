"""Scenario configs, check evaluation and deterministic JSON/CSV output.

A scenario is a JSON object::

    {
      "name": "jordan",
      "operator": {"gallery": "jordan", "params": {"a": 1, "b": 1}},
      "u0": [0.8660254037844386, 0.5],
      "grid": {"t_max": 5, "points": 201, "refinement": "geometric"},
      "checks": [{"name": "criterion", "tol": 1e-8}],
      "seed": 0
    }

``operator`` may instead be ``{"matrix": [[...], ...]}``; complex entries are
``[re, im]`` pairs. ``u0`` may be the string ``"random(SEED)"``.
"""
from __future__ import annotations

import csv
import io
import json
import math
import re
from dataclasses import dataclass, field
from typing import Any

import jsonschema
import numpy as np
import scipy

from . import __version__
from .analysis import ClassificationReport, ClassifyConfig, classify, interior_mask
from .dynamics import CSV_HEADER, Trajectory, default_grid, short_time_check, trajectory_scan
from .operators import DiscretizationSpec, gallery
from .sphere import SphereConfig
from .tolerances import DEFAULT, Tolerances

CHECKS = (
    "criterion",
    "abscissa_equal",
    "positively_accretive",
    "hyponormal",
    "restricted_hyponormal",
    "strictly_decreasing",
    "pointwise_logconvex",
    "three_point_logconvex",
    "short_time",
)

_COMPLEX = {"oneOf": [{"type": "number"},
                      {"type": "array", "items": {"type": "number"}, "minItems": 2, "maxItems": 2}]}

SCHEMA: dict[str, Any] = {
    "type": "object",
    "required": ["operator"],
    "additionalProperties": False,
    "properties": {
        "name": {"type": "string"},
        "operator": {"oneOf": [
            {"type": "object", "required": ["gallery"], "additionalProperties": False,
             "properties": {"gallery": {"type": "string"}, "params": {"type": "object"}}},
            {"type": "object", "required": ["matrix"], "additionalProperties": False,
             "properties": {"matrix": {"type": "array", "minItems": 1,
                                       "items": {"type": "array", "minItems": 1, "items": _COMPLEX}}}},
        ]},
        "u0": {"oneOf": [
            {"type": "array", "minItems": 1, "items": _COMPLEX},
            {"type": "string", "pattern": r"^random\(\d+\)$"},
        ]},
        "grid": {"type": "object", "additionalProperties": False,
                 "properties": {"t_max": {"type": "number", "minimum": 0},
                                "points": {"type": "integer", "minimum": 1},
                                "refinement": {"enum": ["geometric", "uniform"]}}},
        "checks": {"type": "array", "items": {
            "type": "object", "required": ["name"], "additionalProperties": False,
            "properties": {"name": {"enum": list(CHECKS)},
                           "tol": {"type": "number", "exclusiveMinimum": 0}}}},
        "mask": {"oneOf": [
            {"type": "array", "minItems": 1, "items": {"type": "integer", "minimum": 0}},
            {"type": "object", "required": ["margin"], "additionalProperties": False,
             "properties": {"margin": {"type": "integer", "minimum": 0}}},
        ]},
        "seed": {"type": "integer", "minimum": 0},
    },
}


class ConfigError(ValueError):
    pass


@dataclass(frozen=True)
class Check:
    name: str
    tol: float | None = None


@dataclass(frozen=True)
class ScenarioConfig:
    operator: dict
    u0: Any = None
    grid: dict = field(default_factory=lambda: {"t_max": 5.0, "points": 201, "refinement": "geometric"})
    checks: tuple[Check, ...] = ()
    seed: int = 0
    mask: Any = None
    name: str = ""

    @classmethod
    def from_dict(cls, d: dict) -> "ScenarioConfig":
        validator = jsonschema.Draft202012Validator(SCHEMA)
        errors = sorted(validator.iter_errors(d), key=lambda e: list(e.absolute_path))
        if errors:
            e = errors[0]
            raise ConfigError(f"field {e.json_path}: {e.message}")
        grid = {"t_max": 5.0, "points": 201, "refinement": "geometric"}
        grid.update(d.get("grid", {}))
        grid["t_max"] = float(grid["t_max"])
        seed = int(d.get("seed", 0))
        u0 = d.get("u0", f"random({seed})")
        return cls(
            operator=d["operator"],
            u0=u0,
            grid=grid,
            checks=tuple(Check(c["name"], None if c.get("tol") is None else float(c["tol"]))
                         for c in d.get("checks", [])),
            seed=seed,
            mask=d.get("mask"),
            name=d.get("name", ""),
        )

    @classmethod
    def loads(cls, text: str, source: str = "<config>") -> "ScenarioConfig":
        try:
            d = json.loads(text)
        except json.JSONDecodeError as exc:
            raise ConfigError(f"{source}:{exc.lineno}:{exc.colno}: {exc.msg}") from None
        return cls.from_dict(d)

    def to_dict(self) -> dict:
        out: dict[str, Any] = {}
        if self.name:
            out["name"] = self.name
        out["operator"] = self.operator
        out["u0"] = self.u0
        out["grid"] = dict(self.grid)
        out["checks"] = [{"name": c.name} if c.tol is None else {"name": c.name, "tol": c.tol}
                         for c in self.checks]
        if self.mask is not None:
            out["mask"] = self.mask
        out["seed"] = self.seed
        return out

    def with_seed(self, seed: int) -> "ScenarioConfig":
        d = self.to_dict()
        d["seed"] = seed
        if isinstance(self.u0, str) and self.u0 == f"random({self.seed})":
            d["u0"] = f"random({seed})"
        return ScenarioConfig.from_dict(d)


# -- building inputs ----------------------------------------------------------------

def _complex(v) -> complex:
    return complex(v[0], v[1]) if isinstance(v, (list, tuple)) else complex(v)


def _maybe_real(a: np.ndarray) -> np.ndarray:
    return a.real.copy() if np.all(a.imag == 0) else a


def build_operator(cfg: ScenarioConfig) -> np.ndarray:
    op = cfg.operator
    if "matrix" in op:
        rows = op["matrix"]
        n = len(rows)
        if any(len(r) != n for r in rows):
            raise ConfigError("field $.operator.matrix: matrix must be square")
        return _maybe_real(np.array([[_complex(v) for v in r] for r in rows]))
    params = dict(op.get("params", {}))
    name = op["gallery"]
    if name == "diag" and "values" in params:
        params["values"] = _maybe_real(np.array([_complex(v) for v in params["values"]]))
    if name == "adv_diff":
        basis = params.pop("basis", "orthonormal")
        return gallery(name, spec=DiscretizationSpec.from_dict(params), basis=basis)
    try:
        return np.asarray(gallery(name, **params))
    except TypeError as exc:
        raise ConfigError(f"field $.operator.params: {exc}") from None


def build_u0(cfg: ScenarioConfig, dim: int) -> np.ndarray:
    u0 = cfg.u0
    if isinstance(u0, str):
        seed = int(re.fullmatch(r"random\((\d+)\)", u0).group(1))
        rng = np.random.default_rng(seed)
        v = rng.standard_normal(dim) + 1j * rng.standard_normal(dim)
        return v / np.linalg.norm(v)
    v = _maybe_real(np.array([_complex(x) for x in u0]))
    if v.size != dim:
        raise ConfigError(f"field $.u0: length {v.size} does not match operator dimension {dim}")
    if not np.any(v):
        raise ConfigError("field $.u0: initial value must be non-zero")
    return v


def build_mask(cfg: ScenarioConfig, dim: int):
    if cfg.mask is None:
        return None
    if isinstance(cfg.mask, dict):
        return interior_mask(dim, cfg.mask["margin"])
    return np.asarray(cfg.mask, dtype=int)


def build_grid(cfg: ScenarioConfig) -> np.ndarray:
    g = cfg.grid
    return default_grid(g["t_max"], points=g["points"], refinement=g["refinement"])


# -- checks ---------------------------------------------------------------------

def _verdict(name, ok, measured, tol):
    return {"name": name, "verdict": "pass" if ok else "fail", "measured": measured, "tol": tol}


def evaluate_checks(cfg: ScenarioConfig, A: np.ndarray, u0: np.ndarray, rep: ClassificationReport,
                    traj: Trajectory | None, tol: Tolerances,
                    overrides: dict[str, float] | None = None) -> list[dict]:
    overrides = overrides or {}
    norm = float(np.linalg.norm(A, 2))
    out = []
    for c in cfg.checks:
        t = overrides.get(c.name, c.tol)
        if c.name == "criterion":
            t = tol.violation_threshold if t is None else t
            out.append(_verdict(c.name, rep.criterion_min_gap >= -t, rep.criterion_min_gap, t))
        elif c.name == "abscissa_equal":
            t = rep.abscissa_tol if t is None else t
            d = abs(rep.numerical_abscissa - rep.spectral_abscissa)
            out.append(_verdict(c.name, d <= t, d, t))
        elif c.name == "positively_accretive":
            t = tol.accretive_rel * (1 + norm) if t is None else t
            out.append(_verdict(c.name, rep.numerical_abscissa > t, rep.numerical_abscissa, t))
        elif c.name == "hyponormal":
            t = tol.violation_threshold if t is None else t
            out.append(_verdict(c.name, rep.hyponormality_defect >= -t, rep.hyponormality_defect, t))
        elif c.name == "restricted_hyponormal":
            if rep.restricted_hyponormality_defect is None:
                out.append({"name": c.name, "verdict": "skip", "measured": None, "tol": t})
                continue
            t = tol.violation_threshold if t is None else t
            out.append(_verdict(c.name, rep.restricted_hyponormality_defect >= -t,
                                rep.restricted_hyponormality_defect, t))
        elif c.name == "short_time":
            t = tol.short_time_abs if t is None else t
            st = short_time_check(A, u0, tol=tol)
            d = abs(st.h_prime_fd - st.minus_re)
            out.append(_verdict(c.name, d <= t, d, t))
        elif traj is None:
            out.append({"name": c.name, "verdict": "skip", "measured": None, "tol": t})
        elif c.name == "strictly_decreasing":
            worst = max(s.h_prime for s in traj.samples)
            t = 0.0 if t is None else t
            out.append(_verdict(c.name, worst < t, worst, t))
        elif c.name == "pointwise_logconvex":
            t = traj.gap_tol if t is None else t
            out.append(_verdict(c.name, traj.min_logconvexity_gap >= -t, traj.min_logconvexity_gap, t))
        elif c.name == "three_point_logconvex":
            t = tol.three_point_abs * float(np.linalg.norm(u0)) if t is None else t
            out.append(_verdict(c.name, traj.min_three_point_residual >= -t,
                                traj.min_three_point_residual, t))
    return out


# -- serialization ----------------------------------------------------------------

def _fmt_float(x: float) -> str:
    if not math.isfinite(x):
        return "null"
    if x == 0:
        return "0.0"
    s = format(x, ".17g")
    if "e" not in s and "." not in s and "n" not in s:
        s += ".0"
    return s


def to_jsonable(obj):
    """Replace numpy scalars/arrays and complex numbers with JSON-friendly values."""
    if isinstance(obj, dict):
        return {str(k): to_jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [to_jsonable(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return to_jsonable(obj.tolist())
    if isinstance(obj, (bool, np.bool_)):
        return bool(obj)
    if isinstance(obj, (int, np.integer)):
        return int(obj)
    if isinstance(obj, (complex, np.complexfloating)):
        return [float(obj.real), float(obj.imag)]
    if isinstance(obj, (float, np.floating)):
        return float(obj)
    return obj


def dumps(obj, indent: int = 2) -> str:
    """JSON text with every float printed to 17 significant digits."""
    def enc(o, level):
        pad = " " * (indent * (level + 1))
        end = " " * (indent * level)
        if o is None:
            return "null"
        if o is True:
            return "true"
        if o is False:
            return "false"
        if isinstance(o, int):
            return str(o)
        if isinstance(o, float):
            return _fmt_float(o)
        if isinstance(o, str):
            return json.dumps(o)
        if isinstance(o, list):
            if not o:
                return "[]"
            if all(not isinstance(v, (list, dict)) for v in o):
                return "[" + ", ".join(enc(v, level + 1) for v in o) + "]"
            return "[\n" + ",\n".join(pad + enc(v, level + 1) for v in o) + "\n" + end + "]"
        if isinstance(o, dict):
            if not o:
                return "{}"
            items = (pad + json.dumps(k) + ": " + enc(v, level + 1) for k, v in o.items())
            return "{\n" + ",\n".join(items) + "\n" + end + "}"
        raise TypeError(f"cannot encode {type(o).__name__}")
    return enc(to_jsonable(obj), 0) + "\n"


def trajectory_csv(traj: Trajectory) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(CSV_HEADER)
    for row in traj.rows():
        w.writerow([format(v, ".17g") for v in row])
    return buf.getvalue()


def classification_dict(rep: ClassificationReport) -> dict:
    return {
        "dim": rep.dim,
        "numerical_abscissa": rep.numerical_abscissa,
        "spectral_abscissa": rep.spectral_abscissa,
        "abscissa_equal": rep.abscissa_equal,
        "abscissa_tol": rep.abscissa_tol,
        "criterion_min_gap": rep.criterion_min_gap,
        "criterion_witness": rep.criterion_witness,
        "hyponormality_defect": rep.hyponormality_defect,
        "restricted_hyponormality_defect": rep.restricted_hyponormality_defect,
        "normality_defect": rep.normality_defect,
        "accretivity_class": rep.accretivity_class,
        "note": rep.note,
    }


def trajectory_summary(traj: Trajectory) -> dict:
    hs = [s.h for s in traj.samples]
    hp = [s.h_prime for s in traj.samples]
    return {
        "points": len(traj.samples),
        "flags": traj.flags(),
        "extrema": {
            "h_max": max(hs), "h_min": min(hs),
            "h_prime_min": min(hp), "h_prime_max": max(hp),
            "min_logconvexity_gap": traj.min_logconvexity_gap,
            "min_three_point_residual": traj.min_three_point_residual,
        },
        "gap_tol": traj.gap_tol,
        "csv": None,
    }


def versions() -> dict:
    return {"logdecay": __version__, "numpy": np.__version__, "scipy": scipy.__version__}


@dataclass(frozen=True)
class RunResult:
    report: dict
    csv: str | None
    failed: bool


def run_scenario(cfg: ScenarioConfig, command: str, *, tol: Tolerances = DEFAULT,
                 overrides: dict[str, float] | None = None,
                 sphere: SphereConfig | None = None) -> RunResult:
    """Execute a scenario for ``command`` in {"classify", "evolve"}."""
    A = build_operator(cfg)
    u0 = build_u0(cfg, A.shape[0])
    sphere = sphere or SphereConfig(seed=cfg.seed)
    rep = classify(A, ClassifyConfig(sphere=sphere, tol=tol, mask=build_mask(cfg, A.shape[0])))
    traj = None
    csv_text = None
    if command == "evolve":
        traj = trajectory_scan(A, u0, build_grid(cfg), tol=tol, operator_id=cfg.name)
        csv_text = trajectory_csv(traj)
    checks = evaluate_checks(cfg, A, u0, rep, traj, tol, overrides)
    report = {
        "command": command,
        "config": cfg.to_dict(),
        "tolerances": tol.as_dict(),
        "classification": classification_dict(rep),
        "trajectory": None if traj is None else trajectory_summary(traj),
        "checks": checks,
        "seed": cfg.seed,
        "versions": versions(),
    }
    return RunResult(report=report, csv=csv_text,
                     failed=any(c["verdict"] == "fail" for c in checks))
