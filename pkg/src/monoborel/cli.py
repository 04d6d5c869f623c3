"""Batch front-end: JSON experiment configs in, CSV/JSON reports out.

Usage: monoborel <mode> --config <file> [--out <dir>] [--jobs N] [--seed N]

Modes: borel, laplace, sum, pde-solve, pde-sum, pfaffian-check,
convergence-scan, fixpoint-oracle, lemma-audit.  All rationals in configs are
[numerator, denominator] pairs; outputs use fixed 17-significant-digit float
formatting so identical configs produce byte-identical files.
"""

from __future__ import annotations

import argparse
import cmath
import hashlib
import json
import logging
import math
import os
import sys
import tempfile
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path

import jsonschema
import numpy as np
import scipy

from . import __version__
from .errors import ConfigError, MonoborelError
from .fixpoint import (
    build_convolution_problem,
    chebyshev_ray_grid,
    cross_validate,
    fixpoint_defect,
    kernel_bound_audit,
    picard_solve,
)
from .pde import (
    LinearMonomialPDE,
    PfaffianSystem,
    convergence_scan,
    eigenvalue_pairing_check,
    formal_solution,
    integrability_check,
    load_problem,
    singular_directions,
    sum_and_verify,
    summation_weight,
)
from .series import BivariateSeries, MonomialWeight, gevrey_order_estimate
from .summation import (
    DEFAULT_CONFIG,
    PipelineConfig,
    SectorSpec,
    borel_sum,
    detect_singular_directions,
    pade_continue,
    reduce_to_ray,
    wrap_angle,
)
from .transforms import TransformedSeries, formal_borel, formal_laplace

log = logging.getLogger("monoborel")

MODES = (
    "borel",
    "laplace",
    "sum",
    "pde-solve",
    "pde-sum",
    "pfaffian-check",
    "convergence-scan",
    "fixpoint-oracle",
    "lemma-audit",
)

SCHEMA_VERSION = 1

CONFIG_SCHEMA = {
    "type": "object",
    "properties": {
        "schema_version": {"type": "integer", "minimum": 1},
        "mode": {"enum": list(MODES)},
        "series": {"type": "object"},
        "problem": {"type": "object"},
        "weight": {"type": "object"},
        "weights": {"type": "array", "items": {"type": "object"}},
        "directions": {"type": "array", "items": {"type": "number"}},
        "points": {
            "type": "array",
            "items": {
                "type": "array",
                "items": {"type": "number"},
                "minItems": 4,
                "maxItems": 4,
            },
        },
        "trunc": {"type": "array", "items": {"type": "integer"}, "minItems": 2, "maxItems": 2},
        "pade": {"type": "array", "items": {"type": "integer"}, "minItems": 2, "maxItems": 2},
        "quad": {"type": "object"},
        "sector": {"type": "object"},
        "grid": {"type": "object"},
        "audit": {"type": "object"},
        "scan": {"type": "object"},
        "rotate_points_to_direction": {"type": "boolean"},
        "plots": {"type": "array", "items": {"type": "string"}},
        "out": {"type": "string"},
    },
    "required": ["mode"],
    "additionalProperties": True,
}

_REQUIRED_BY_MODE = {
    "borel": ("series", "weight"),
    "laplace": ("series",),
    "sum": ("series", "directions", "points"),
    "pde-solve": ("problem",),
    "pde-sum": ("problem", "directions", "points"),
    "pfaffian-check": ("problem",),
    "convergence-scan": ("problem",),
    "fixpoint-oracle": ("problem", "points"),
    "lemma-audit": ("audit",),
}


@dataclass
class ExperimentConfig:
    """A validated experiment request plus the raw dict it came from."""

    mode: str
    raw: dict
    base_dir: Path
    out_dir: Path
    jobs: int = 1
    seed: int | None = None

    @classmethod
    def from_file(cls, path, out_dir=None, jobs=1, seed=None) -> "ExperimentConfig":
        path = Path(path)
        try:
            raw = json.loads(path.read_text())
        except (OSError, json.JSONDecodeError) as exc:
            raise ConfigError(f"cannot read config {path}: {exc}") from exc
        return cls.from_dict(raw, base_dir=path.parent, out_dir=out_dir, jobs=jobs, seed=seed)

    @classmethod
    def from_dict(cls, raw, base_dir=".", out_dir=None, jobs=1, seed=None) -> "ExperimentConfig":
        try:
            jsonschema.validate(raw, CONFIG_SCHEMA)
        except jsonschema.ValidationError as exc:
            raise ConfigError(f"config violates schema: {exc.message}") from exc
        if raw.get("schema_version", 1) > SCHEMA_VERSION:
            raise ConfigError(f"schema_version {raw['schema_version']} is newer than supported {SCHEMA_VERSION}")
        mode = raw["mode"]
        for key in _REQUIRED_BY_MODE[mode]:
            if key not in raw:
                raise ConfigError(f"mode {mode!r} requires config key {key!r}")
        base_dir = Path(base_dir)
        out = Path(out_dir) if out_dir is not None else base_dir / raw.get("out", "results")
        return cls(mode=mode, raw=raw, base_dir=base_dir, out_dir=out, jobs=jobs, seed=seed)

    def resolve(self, node):
        """Inline a {"file": ...} reference relative to the config location."""
        if isinstance(node, dict) and set(node) == {"file"}:
            ref = self.base_dir / node["file"]
            try:
                return json.loads(ref.read_text())
            except (OSError, json.JSONDecodeError) as exc:
                raise ConfigError(f"cannot read referenced file {ref}: {exc}") from exc
        return node


@dataclass
class ReportRecord:
    """Run metadata plus result rows and plot-ready extras."""

    mode: str
    config_hash: str
    versions: dict
    rows: list = field(default_factory=list)
    warnings: list = field(default_factory=list)
    extras: dict = field(default_factory=dict)
    summary: dict = field(default_factory=dict)
    out_dir: Path | None = None
    files: list = field(default_factory=list)


def config_hash(raw: dict) -> str:
    canonical = json.dumps(raw, sort_keys=True, separators=(",", ":"))
    return hashlib.sha256(canonical.encode()).hexdigest()


def _versions() -> dict:
    return {"monoborel": __version__, "numpy": np.__version__, "scipy": scipy.__version__}


def _fmt(x: float) -> str:
    return format(float(x), ".17g")


def _atomic_write(path: Path, text: str) -> Path:
    path.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=".tmp-", suffix=path.suffix)
    try:
        with os.fdopen(fd, "w", newline="") as handle:
            handle.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise
    return path


def _write_csv(path: Path, header: list[str], rows: list[list]) -> Path:
    lines = [",".join(header)]
    for row in rows:
        lines.append(",".join(cell if isinstance(cell, str) else _fmt(cell) for cell in row))
    return _atomic_write(path, "\n".join(lines) + "\n")


def _write_json(path: Path, data) -> Path:
    return _atomic_write(path, json.dumps(data, indent=2, sort_keys=True, default=_json_default) + "\n")


def _json_default(obj):
    if isinstance(obj, complex):
        return [obj.real, obj.imag]
    if isinstance(obj, Fraction):
        return [obj.numerator, obj.denominator]
    if isinstance(obj, np.ndarray):
        return obj.tolist()
    if isinstance(obj, (np.floating, np.integer, np.bool_)):
        return obj.item()
    if isinstance(obj, Path):
        return str(obj)
    raise TypeError(f"cannot serialize {type(obj)}")


def _parse_points(rows) -> list[tuple[complex, complex]]:
    return [(complex(r[0], r[1]), complex(r[2], r[3])) for r in rows]


def _parse_weights(cfg: ExperimentConfig) -> list[MonomialWeight]:
    raw = cfg.raw
    if "weights" in raw:
        return [MonomialWeight.from_json(w) for w in raw["weights"]]
    if "weight" in raw:
        return [MonomialWeight.from_json(raw["weight"])]
    raise ConfigError("config needs 'weight' or 'weights'")


def _pipeline_config(cfg: ExperimentConfig) -> PipelineConfig:
    quad = cfg.raw.get("quad", {})
    kwargs = {}
    if "max_nodes" in quad:
        ladder = [n for n in DEFAULT_CONFIG.quad_node_ladder if n <= quad["max_nodes"]]
        kwargs["quad_node_ladder"] = tuple(ladder) or (quad["max_nodes"],)
    if "rtol" in quad:
        kwargs["quad_rtol"] = float(quad["rtol"])
    if "fail_tol" in quad:
        kwargs["quad_fail_tol"] = float(quad["fail_tol"])
    if "pade" in cfg.raw:
        kwargs["pade_degrees"] = tuple(cfg.raw["pade"])
    return PipelineConfig(**kwargs) if kwargs else DEFAULT_CONFIG


def _sector(cfg: ExperimentConfig, d: float) -> SectorSpec:
    spec = cfg.raw.get("sector")
    if spec is None:
        return SectorSpec(d=d, opening=2 * math.pi + 0.5, radius=math.inf)
    radius = spec.get("radius")
    return SectorSpec(
        d=float(spec.get("d", d)),
        opening=float(spec.get("opening", 2 * math.pi + 0.5)),
        radius=math.inf if radius is None else float(radius),
    )


def _rotate_point(point, d, p, q):
    """Rotate x1 so the monomial argument of the point equals d."""
    x1, x2 = point
    current = cmath.phase(x1**p * x2**q)
    return (x1 * cmath.exp(1j * wrap_angle(d - current) / p), x2)


_SUM_HEADER_BASE = [
    "point_x1_re",
    "point_x1_im",
    "point_x2_re",
    "point_x2_im",
    "direction",
    "s_num",
    "s_den",
]


def _sum_rows(evaluations, l: int, residuals=None):
    rows = []
    for idx, ev in enumerate(evaluations):
        x1, x2 = ev.point
        row = [x1.real, x1.imag, x2.real, x2.imag, ev.direction,
               float(ev.weight.s.numerator), float(ev.weight.s.denominator)]
        for comp in range(l):
            row.extend((ev.value[comp].real, ev.value[comp].imag))
        row.append(ev.err_estimate)
        row.append(ev.nearest_singularity_direction)
        if residuals is not None:
            row.append(residuals[idx])
        rows.append(row)
    return rows


def _sum_header(l: int, with_residual: bool) -> list[str]:
    header = list(_SUM_HEADER_BASE)
    for comp in range(l):
        header.extend((f"value_re_{comp}", f"value_im_{comp}"))
    header.append("err_estimate")
    header.append("nearest_singular_direction")
    if with_residual:
        header.append("residual")
    return header


# -- mode runners ------------------------------------------------------------


def _run_borel(cfg: ExperimentConfig, report: ReportRecord):
    series = BivariateSeries.from_json(cfg.resolve(cfg.raw["series"]))
    weight = _parse_weights(cfg)[0]
    result = formal_borel(series, weight)
    path = _write_json(cfg.out_dir / "series.json", result.to_json())
    report.files.append(path)
    report.summary["plane"] = "borel"
    report.extras["coeff_growth"] = [
        [n + m, math.log(max(float(np.max(np.abs(vec))), 1e-300))]
        for (n, m), vec in series.items()
    ]


def _run_laplace(cfg: ExperimentConfig, report: ReportRecord):
    source = TransformedSeries.from_json(cfg.resolve(cfg.raw["series"]))
    result = formal_laplace(source)
    path = _write_json(cfg.out_dir / "series.json", result.to_json())
    report.files.append(path)
    report.summary["plane"] = "laplace"


def _ray_profile(series, weight, point, config) -> list[list[float]]:
    phi = formal_borel(series.shift(weight.pk, weight.qk), weight)
    ray = reduce_to_ray(phi, point, config.lattice_cap)
    cont = pade_continue(ray, config.pade_degrees, config)
    from .summation import evaluate_continuation

    out = []
    for u in np.linspace(0.0, config.growth_umax, 81):
        val = evaluate_continuation(cont, float(u))
        out.append([float(u), float(np.max(np.abs(val)))])
    return out, cont


def _pole_map(cont, weight, point) -> list[list[float]]:
    x1, x2 = point
    base = x1**weight.p * x2**weight.q
    k = float(weight.k)
    out = []
    for pole in cont.poles:
        mono = abs(base) * pole.u_abs ** (1.0 / k) * cmath.exp(1j * (cmath.phase(base) + pole.u_arg / k))
        out.append([mono.real, mono.imag])
    return out


def _sum_core(cfg: ExperimentConfig, report: ReportRecord, series, weights, prob=None):
    """Shared driver for the sum and pde-sum modes."""
    config = _pipeline_config(cfg)
    directions = [float(d) for d in cfg.raw["directions"]]
    points = _parse_points(cfg.raw["points"])
    rotate = bool(cfg.raw.get("rotate_points_to_direction", False))
    l = series.l
    rows = []
    first_cont = None
    first_weight = weights[0]
    jobs = max(1, cfg.jobs)

    def eval_one(args):
        weight, d, point = args
        sector = _sector(cfg, d)
        pt = _rotate_point(point, d, weight.p, weight.q) if rotate else point
        if prob is not None:
            result = sum_and_verify(
                prob, d, [pt],
                box=tuple(cfg.raw.get("trunc", (30, 30))),
                sector=sector, config=config, weight=weight,
            )
            return result[0]
        evals = borel_sum(series, weight, d, [pt], sector, config)
        return (evals[0], None)

    tasks = [(w, d, pt) for w in weights for d in directions for pt in points]
    results = []
    if jobs > 1:
        with ThreadPoolExecutor(max_workers=jobs) as pool:
            futures = [pool.submit(eval_one, t) for t in tasks]
            for task, fut in zip(tasks, futures):
                try:
                    results.append((task, fut.result()))
                except MonoborelError as exc:
                    report.warnings.append(f"{task[1]:.6g} @ {task[2]}: {type(exc).__name__}: {exc}")
    else:
        for task in tasks:
            try:
                results.append((task, eval_one(task)))
            except MonoborelError as exc:
                report.warnings.append(f"{task[1]:.6g} @ {task[2]}: {type(exc).__name__}: {exc}")
    residuals = []
    evaluations = []
    for _, (ev, res) in results:
        evaluations.append(ev)
        residuals.append(res)
    with_residual = prob is not None
    rows = _sum_rows(evaluations, l, residuals if with_residual else None)
    path = _write_csv(cfg.out_dir / "results.csv", _sum_header(l, with_residual), rows)
    report.files.append(path)
    report.rows = rows
    report.summary["evaluations"] = len(rows)
    report.summary["failures"] = len(report.warnings)
    if points:
        profile, first_cont = _ray_profile(series, first_weight, points[0], config)
        report.extras["ray_profile"] = profile
        report.extras["pole_map"] = _pole_map(first_cont, first_weight, points[0])
        report.extras["singular_directions"] = detect_singular_directions(first_cont, first_weight, config)
    report.extras["direction_sweep"] = [
        [ev.direction] + [c for comp in range(l) for c in (ev.value[comp].real, ev.value[comp].imag)]
        for ev in evaluations
    ]
    report.extras["coeff_growth"] = [
        [n + m, math.log(max(float(np.max(np.abs(vec))), 1e-300))]
        for (n, m), vec in series.items()
    ]


def _run_sum(cfg: ExperimentConfig, report: ReportRecord):
    series = BivariateSeries.from_json(cfg.resolve(cfg.raw["series"]))
    weights = _parse_weights(cfg)
    _sum_core(cfg, report, series, weights)


def _load_pde(cfg: ExperimentConfig) -> LinearMonomialPDE:
    prob = load_problem(cfg.resolve(cfg.raw["problem"]))
    if not isinstance(prob, LinearMonomialPDE):
        raise ConfigError("this mode needs a linear PDE problem (with key 'C')")
    return prob


def _load_pfaffian(cfg: ExperimentConfig) -> PfaffianSystem:
    prob = load_problem(cfg.resolve(cfg.raw["problem"]))
    if not isinstance(prob, PfaffianSystem):
        raise ConfigError("this mode needs a Pfaffian problem (with keys 'A' and 'B')")
    return prob


def _run_pde_solve(cfg: ExperimentConfig, report: ReportRecord):
    prob = _load_pde(cfg)
    box = tuple(cfg.raw.get("trunc", (30, 30)))
    solution = formal_solution(prob, box)
    path = _write_json(cfg.out_dir / "solution.json", solution.to_json())
    report.files.append(path)
    estimate = gevrey_order_estimate(solution, prob.p, prob.q)
    report.summary["gevrey"] = {
        "s_hat": estimate.s_hat,
        "C_hat": estimate.C_hat,
        "A_hat": estimate.A_hat,
        "residual": estimate.residual,
    }
    report.summary["singular_directions"] = singular_directions(prob)
    report.extras["coeff_growth"] = [
        [n + m, math.log(max(float(np.max(np.abs(vec))), 1e-300))]
        for (n, m), vec in solution.items()
    ]


def _run_pde_sum(cfg: ExperimentConfig, report: ReportRecord):
    prob = _load_pde(cfg)
    box = tuple(cfg.raw.get("trunc", (30, 30)))
    solution = formal_solution(prob, box)
    weights = [summation_weight(prob)]
    if "weights" in cfg.raw or "weight" in cfg.raw:
        weights = _parse_weights(cfg)
    _sum_core(cfg, report, solution, weights, prob=prob)
    report.summary["eigenvalue_directions"] = singular_directions(prob)


def _run_pfaffian_check(cfg: ExperimentConfig, report: ReportRecord):
    sys_ = _load_pfaffian(cfg)
    box = tuple(cfg.raw.get("trunc", (20, 20)))
    defects = integrability_check(sys_, box)
    pairing = eigenvalue_pairing_check(sys_)
    report.summary["integrability"] = defects
    report.summary["eigenvalue_pairing"] = pairing
    path = _write_json(cfg.out_dir / "pfaffian.json", {"integrability": defects, "pairing": pairing})
    report.files.append(path)


def _run_convergence_scan(cfg: ExperimentConfig, report: ReportRecord):
    sys_ = _load_pfaffian(cfg)
    scan = cfg.raw.get("scan", {})
    s_count = int(scan.get("s_grid", 101))
    d_count = int(scan.get("direction_grid", 101))
    tol = float(scan.get("angular_tol", 0.02))
    s_grid = [Fraction(i, s_count - 1) for i in range(s_count)]
    d_grid = [-math.pi + 2 * math.pi * i / (d_count - 1) for i in range(d_count)]
    verdict = convergence_scan(sys_, s_grid, d_grid, angular_tol=tol)
    report.summary["verdict"] = verdict["verdict"]
    report.summary["reason"] = verdict["reason"]
    rows = [[d, float(s)] for d, s in sorted(verdict["witnesses"].items())]
    path = _write_csv(cfg.out_dir / "witnesses.csv", ["direction", "witness_s"], rows)
    report.files.append(path)
    report.files.append(_write_json(cfg.out_dir / "verdict.json", verdict))
    report.rows = rows


def _run_fixpoint_oracle(cfg: ExperimentConfig, report: ReportRecord):
    prob = _load_pde(cfg)
    grid_cfg = cfg.raw.get("grid", {})
    u_max = float(grid_cfg.get("U", 1.0))
    n_nodes = int(grid_cfg.get("n", 129))
    tol = float(grid_cfg.get("tol", 1e-10))
    box = tuple(cfg.raw.get("trunc", (30, 30)))
    point = _parse_points(cfg.raw["points"])[0]
    cp = build_convolution_problem(prob)
    grid = chebyshev_ray_grid(point, u_max, n_nodes)
    solved = picard_solve(cp, grid, tol=tol)
    solution = formal_solution(prob, box)
    weight = summation_weight(prob)
    phi = formal_borel(solution.shift(weight.pk, weight.qk), weight)
    ray = reduce_to_ray(phi, point)
    cont = pade_continue(ray)
    discrepancy = cross_validate(cp, cont, solved)
    defect = fixpoint_defect(cp, solved)
    header = ["u"]
    for comp in range(cp.l):
        header.extend((f"F_re_{comp}", f"F_im_{comp}"))
    rows = []
    for u, val in zip(solved.nodes, solved.values):
        row = [float(u)]
        for comp in range(cp.l):
            row.extend((val[comp].real, val[comp].imag))
        rows.append(row)
    path = _write_csv(cfg.out_dir / "ray.csv", header, rows)
    report.files.append(path)
    report.rows = rows
    report.summary["max_discrepancy"] = discrepancy
    report.summary["fixpoint_defect"] = defect
    report.summary["iterations"] = solved.iterations
    report.summary["converged"] = solved.converged
    report.extras["ray_profile"] = [
        [float(u), float(np.max(np.abs(val)))] for u, val in zip(solved.nodes, solved.values)
    ]


def _run_lemma_audit(cfg: ExperimentConfig, report: ReportRecord):
    audit = cfg.raw["audit"]
    rep = kernel_bound_audit(
        p=int(audit["p"]),
        q=int(audit["q"]),
        s=audit["s"],
        n_max=int(audit.get("n_max", 50)),
        m_max=int(audit.get("m_max", 50)),
        big_n_max=int(audit.get("N_max", 200)),
    )
    report.summary["audit"] = rep
    path = _write_json(cfg.out_dir / "audit.json", rep)
    report.files.append(path)


_RUNNERS = {
    "borel": _run_borel,
    "laplace": _run_laplace,
    "sum": _run_sum,
    "pde-solve": _run_pde_solve,
    "pde-sum": _run_pde_sum,
    "pfaffian-check": _run_pfaffian_check,
    "convergence-scan": _run_convergence_scan,
    "fixpoint-oracle": _run_fixpoint_oracle,
    "lemma-audit": _run_lemma_audit,
}

PLOT_KINDS = ("ray-profile", "pole-map", "direction-sweep", "coeff-growth")


def run_experiment(config: ExperimentConfig) -> ReportRecord:
    """Dispatch a validated config to the library and write its outputs."""
    report = ReportRecord(
        mode=config.mode,
        config_hash=config_hash(config.raw),
        versions=_versions(),
        out_dir=config.out_dir,
    )
    if config.seed is not None:
        report.summary["seed"] = config.seed
    _RUNNERS[config.mode](config, report)
    for kind in config.raw.get("plots", []):
        emit_plot_data(report, kind)
    report_path = _write_json(
        config.out_dir / "report.json",
        {
            "mode": report.mode,
            "config_hash": report.config_hash,
            "versions": report.versions,
            "summary": report.summary,
            "warnings": report.warnings,
            "files": [str(f) for f in report.files],
        },
    )
    report.files.append(report_path)
    return report


def emit_plot_data(report: ReportRecord, kind: str) -> Path:
    """Write a two-or-more-column CSV for external plotting."""
    if kind not in PLOT_KINDS:
        raise ConfigError(f"unknown plot kind {kind!r}; choose from {PLOT_KINDS}")
    if report.out_dir is None:
        raise ConfigError("report has no output directory")
    if kind == "ray-profile":
        rows = report.extras.get("ray_profile")
        header = ["u", "psi_norm"]
    elif kind == "pole-map":
        rows = report.extras.get("pole_map")
        header = ["re", "im"]
    elif kind == "direction-sweep":
        rows = report.extras.get("direction_sweep")
        header = None
        if rows:
            l = (len(rows[0]) - 1) // 2
            header = ["direction"]
            for comp in range(l):
                header.extend((f"value_re_{comp}", f"value_im_{comp}"))
    else:
        rows = report.extras.get("coeff_growth")
        header = ["total_degree", "log_coeff_norm"]
    if not rows:
        raise ConfigError(f"report for mode {report.mode!r} has no rows for plot kind {kind!r}")
    path = _write_csv(report.out_dir / f"{kind}.csv", header, rows)
    report.files.append(path)
    return path


def _error_payload(exc: Exception, mode: str | None) -> dict:
    return {
        "error": {
            "type": type(exc).__name__,
            "message": str(exc),
            "mode": mode,
        }
    }


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(
        prog="monoborel",
        description="Monomial Borel-Laplace summation experiments",
    )
    parser.add_argument("mode", choices=MODES)
    parser.add_argument("--config", required=True, help="JSON experiment config")
    parser.add_argument("--out", default=None, help="output directory (overrides config)")
    parser.add_argument("--jobs", type=int, default=1, help="parallel evaluation workers")
    parser.add_argument("--seed", type=int, default=None, help="recorded in run metadata")
    args = parser.parse_args(argv)
    level = os.environ.get("MONOBOREL_LOG", "WARNING").upper()
    logging.basicConfig(level=getattr(logging, level, logging.WARNING))
    mode = args.mode
    try:
        config = ExperimentConfig.from_file(args.config, out_dir=args.out, jobs=args.jobs, seed=args.seed)
        if config.mode != mode:
            raise ConfigError(f"config mode {config.mode!r} does not match CLI mode {mode!r}")
        report = run_experiment(config)
    except ConfigError as exc:
        print(json.dumps(_error_payload(exc, mode)), file=sys.stderr)
        return 2
    except MonoborelError as exc:
        print(json.dumps(_error_payload(exc, mode)), file=sys.stderr)
        return 1
    log.info("wrote %d file(s) to %s", len(report.files), report.out_dir)
    print(str(report.out_dir))
    return 0


if __name__ == "__main__":
    sys.exit(main())
