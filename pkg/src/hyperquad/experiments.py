"""Desk-scale runs of the interval and sphere experiments, plus audits.

Results are plain dataclasses that serialise to CSV (summary rows and one
pointwise-error grid per rule) and JSON (everything, round-trippable).
"""

from __future__ import annotations

import csv
import io
import json
import logging
import os
import time
from dataclasses import asdict, dataclass, field

import numpy as np

from .analysis import certify, l2_error, latlong_grid, best_uniform_upper, sup_error
from .bases import INTERVAL, SPHERE, Domain, DomainKind, domain_from_name
from .errors import ExactnessError, HyperquadError, MZError
from .hyper import evaluate, hyperinterpolate, sample
from .quadrature import (
    QuadratureRule,
    clenshaw_curtis,
    equispaced_points,
    gauss_legendre,
    l1_minimal_weights,
    load_spherical_design,
    min_points_bound,
    mz_eta,
    tensor_sphere_rule,
    verified_exactness,
)

log = logging.getLogger(__name__)

CSV_COLUMNS = [
    "rule", "m", "exactness", "eta", "l2_error", "sup_error",
    "ek_upper", "bound_rhs", "satisfied", "status",
]


class ConfigError(HyperquadError):
    pass


# -- test functions ----------------------------------------------------------

def exp_neg_x2(x):
    return np.exp(-np.asarray(x, dtype=float) ** 2)


def abs_x(x):
    return np.abs(np.asarray(x, dtype=float))


def wendland_test_function(point):
    """phi(r) = (1 - r)_+^4 (4r + 1), r = Euclidean distance to the north pole.

    Works on one unit vector or an (m, 3) array.
    """
    p = np.asarray(point, dtype=float)
    r = np.linalg.norm(p - np.array([0.0, 0.0, 1.0]), axis=-1)
    out = np.maximum(1.0 - r, 0.0) ** 4 * (4.0 * r + 1.0)
    return float(out) if p.ndim == 1 else out


TEST_FUNCTIONS = {
    "exp_neg_x2": (exp_neg_x2, INTERVAL),
    "abs_x": (abs_x, INTERVAL),
    "wendland_sphere": (wendland_test_function, SPHERE),
}


# -- rule specs ----------------------------------------------------------------

@dataclass(frozen=True)
class RuleSpec:
    """One of: gauss m | clenshaw_curtis m | equispaced_l1 m degree |
    spherical_design path t | tensor t | tensor_cc t n_lon."""

    kind: str
    params: tuple = ()

    KINDS = {
        "gauss": 1, "clenshaw_curtis": 1, "equispaced_l1": 2,
        "spherical_design": 2, "tensor": 1, "tensor_cc": 2,
    }

    def __post_init__(self):
        if self.kind not in self.KINDS:
            raise ConfigError(f"unknown rule kind {self.kind!r}")
        if len(self.params) != self.KINDS[self.kind]:
            raise ConfigError(f"rule {self.kind} takes {self.KINDS[self.kind]} parameter(s), got {self.params}")

    @property
    def domain(self) -> Domain:
        return SPHERE if self.kind in ("spherical_design", "tensor", "tensor_cc") else INTERVAL

    @classmethod
    def parse(cls, text: str) -> "RuleSpec":
        """'gauss:41', 'equispaced_l1:186:49', 'spherical_design:/path/f.txt:30', 'tensor:50'."""
        kind, _, rest = text.partition(":")
        if kind == "spherical_design":
            path, _, t = rest.rpartition(":")
            if not path:
                raise ConfigError(f"design spec needs path:t, got {text!r}")
            return cls(kind, (path, _int(t, text)))
        parts = [p for p in rest.split(":") if p]
        return cls(kind, tuple(_int(p, text) for p in parts))

    def __str__(self) -> str:
        return ":".join([self.kind, *map(str, self.params)])

    @property
    def label(self) -> str:
        if self.kind == "spherical_design":
            return f"design-{self.params[1]}"
        if self.kind == "tensor_cc":
            return f"tensor_cc-{self.params[0]}x{self.params[1]}"
        return "-".join([self.kind, *map(str, self.params)])

    def build(self) -> QuadratureRule:
        p = self.params
        if self.kind == "gauss":
            return gauss_legendre(p[0])
        if self.kind == "clenshaw_curtis":
            return clenshaw_curtis(p[0])
        if self.kind == "equispaced_l1":
            return l1_minimal_weights(equispaced_points(p[0]), p[1], label=self.label)
        if self.kind == "spherical_design":
            if not os.path.exists(p[0]):
                raise ConfigError(f"design file not found: {p[0]}")
            return load_spherical_design(p[0], p[1], label=self.label)
        if self.kind == "tensor":
            return tensor_sphere_rule(p[0])
        return tensor_sphere_rule(p[0], z_rule="clenshaw_curtis", n_lon=p[1])


def _int(text, spec):
    try:
        return int(text)
    except ValueError:
        raise ConfigError(f"bad integer {text!r} in rule spec {spec!r}") from None


# -- config / result types -------------------------------------------------------

@dataclass
class ExperimentConfig:
    experiment: str
    n: int
    k: int | None = None
    rules: list[RuleSpec] = field(default_factory=list)
    test_function: str = "exp_neg_x2"
    output_path: str | None = None
    grid_resolution: int = 1001
    force: bool = False
    tensor_fallback: bool = True

    def __post_init__(self):
        if self.experiment not in ("interval_fig1", "sphere_fig2", "mz_audit", "min_points"):
            raise ConfigError(f"unknown experiment {self.experiment!r}")
        if self.n < 1:
            raise ConfigError(f"n must be >= 1, got {self.n}")
        if self.k is not None and not 0 < self.k <= self.n:
            raise ConfigError(f"need 0 < k <= n, got k={self.k}, n={self.n}")
        if self.test_function not in TEST_FUNCTIONS:
            raise ConfigError(f"unknown test function {self.test_function!r}")
        domain = TEST_FUNCTIONS[self.test_function][1]
        for spec in self.rules:
            if spec.domain != domain:
                raise ConfigError(f"rule {spec} lives on {spec.domain}, test function on {domain}")

    @property
    def domain(self) -> Domain:
        return TEST_FUNCTIONS[self.test_function][1]

    def to_dict(self) -> dict:
        d = asdict(self)
        d["rules"] = [str(r) for r in self.rules]
        return d

    @classmethod
    def from_dict(cls, d: dict) -> "ExperimentConfig":
        d = dict(d)
        d["rules"] = [RuleSpec.parse(r) for r in d.get("rules", [])]
        return cls(**d)


@dataclass
class ResultRow:
    rule: str
    m: int | None = None
    exactness: int | None = None
    k: int | None = None
    eta: float | None = None
    l2_error: float | None = None
    sup_error: float | None = None
    ek_upper: float | None = None
    bound_rhs: float | None = None
    satisfied: bool | None = None
    l2_norm: float | None = None
    stability_rhs: float | None = None
    stability_satisfied: bool | None = None
    count_check: bool | None = None
    status: str = "ok"
    message: str = ""
    wall_time: float = 0.0


@dataclass
class GridSamples:
    rule: str
    points: list
    f: list
    approx: list
    error: list

    def __len__(self) -> int:
        return len(self.f)


@dataclass
class ExperimentResult:
    config: ExperimentConfig
    rows: list[ResultRow]
    grids: list[GridSamples]

    def row(self, label: str) -> ResultRow:
        for r in self.rows:
            if r.rule == label:
                return r
        raise KeyError(label)

    def to_dict(self) -> dict:
        return {
            "config": self.config.to_dict(),
            "rows": [asdict(r) for r in self.rows],
            "grids": [asdict(g) for g in self.grids],
        }

    @classmethod
    def from_dict(cls, d: dict) -> "ExperimentResult":
        return cls(
            config=ExperimentConfig.from_dict(d["config"]),
            rows=[ResultRow(**r) for r in d["rows"]],
            grids=[GridSamples(**g) for g in d["grids"]],
        )

    def __eq__(self, other):
        if not isinstance(other, ExperimentResult):
            return NotImplemented
        return self.to_dict() == other.to_dict()


# -- runners -----------------------------------------------------------------------

DEFAULT_INTERVAL_RULES = ("gauss:41", "gauss:25", "clenshaw_curtis:50", "equispaced_l1:186:49")
DEFAULT_SPHERE_RULES = ("tensor_cc:50:51", "tensor_cc:30:51")


def _grid_points(domain: Domain, resolution: int) -> np.ndarray:
    if domain.kind is DomainKind.INTERVAL:
        return np.linspace(-1.0, 1.0, resolution)
    return latlong_grid(resolution, 2 * resolution)


def _run_rule(spec: RuleSpec, config: ExperimentConfig, f, grid) -> tuple[ResultRow, GridSamples | None]:
    start = time.perf_counter()
    row = ResultRow(rule=spec.label)
    n = config.n
    try:
        rule = spec.build()
    except HyperquadError as exc:
        row.status, row.message = "failed", str(exc)
        row.wall_time = time.perf_counter() - start
        log.warning("%s: construction failed: %s", spec.label, exc)
        return row, None

    row.m = rule.m
    exact = verified_exactness(rule, max_degree=max(2 * n, rule.claimed_exactness))
    row.exactness = exact
    if spec.kind == "spherical_design":
        # An (n+k)-design should carry at least (n+k+1)^2 points.
        row.count_check = rule.m >= (rule.claimed_exactness + 1) ** 2
    if config.k is not None:
        k = config.k
    else:
        # Use the claimed degree so a symmetric rule that happens to be exact
        # one degree higher is certified at its nominal relaxation.
        k = min(min(exact, rule.claimed_exactness) - n, n)
    row.k = k
    try:
        h = hyperinterpolate(rule, n, f, force=config.force, exactness=exact)
    except ExactnessError as exc:
        row.status, row.message = "refused", str(exc)
        row.wall_time = time.perf_counter() - start
        return row, None

    row.l2_norm = h.l2_norm()
    row.l2_error = l2_error(h, f)
    row.sup_error = sup_error(h, f)
    row.eta = mz_eta(rule, n).eta
    if k >= 1:
        row.ek_upper = best_uniform_upper(f, k, rule.domain)
        try:
            cert = certify(rule, n, k, f)
        except MZError as exc:
            row.status, row.message = "uncertified", str(exc)
        except ExactnessError as exc:
            row.status, row.message = "uncertified", str(exc)
        else:
            row.bound_rhs = cert.bound_rhs
            row.satisfied = cert.satisfied
            row.stability_rhs = cert.stability_rhs
            row.stability_satisfied = cert.stability_satisfied
            if not (cert.satisfied and cert.stability_satisfied):
                row.status = "violated"
    else:
        row.status, row.message = "uncertified", f"k = {k} < 1"

    approx = evaluate(h, grid)
    fg = sample(f, rule.domain, grid)
    pts = grid.tolist()
    samples = GridSamples(spec.label, pts, fg.tolist(), approx.tolist(), (approx - fg).tolist())
    row.wall_time = time.perf_counter() - start
    return row, samples


def _run(config: ExperimentConfig) -> ExperimentResult:
    f = TEST_FUNCTIONS[config.test_function][0]
    grid = _grid_points(config.domain, config.grid_resolution)
    rows, grids = [], []
    for spec in config.rules:
        row, samples = _run_rule(spec, config, f, grid)
        rows.append(row)
        if samples is not None:
            grids.append(samples)
    return ExperimentResult(config, rows, grids)


def interval_config(**overrides) -> ExperimentConfig:
    base = dict(experiment="interval_fig1", n=40, test_function="exp_neg_x2",
                rules=[RuleSpec.parse(r) for r in DEFAULT_INTERVAL_RULES], grid_resolution=1001)
    base.update(overrides)
    return ExperimentConfig(**base)


def sphere_config(design_files=(), **overrides) -> ExperimentConfig:
    """Defaults: n = 25, Wendland function, 120 x 240 grid.

    Without design files the rules are Clenshaw-Curtis x trapezoid product
    rules of exactness 50 and 30;
    `design_files` is a sequence of (path, t) pairs used instead.
    """
    if design_files:
        rules = [RuleSpec("spherical_design", (str(p), int(t))) for p, t in design_files]
    else:
        rules = [RuleSpec.parse(r) for r in DEFAULT_SPHERE_RULES]
    base = dict(experiment="sphere_fig2", n=25, test_function="wendland_sphere",
                rules=rules, grid_resolution=120)
    base.update(overrides)
    return ExperimentConfig(**base)


def run_interval_experiment(config: ExperimentConfig | None = None) -> ExperimentResult:
    config = config or interval_config()
    if config.domain.kind is not DomainKind.INTERVAL:
        raise ConfigError("interval experiment needs an interval test function")
    return _run(config)


def run_sphere_experiment(config: ExperimentConfig | None = None) -> ExperimentResult:
    config = config or sphere_config()
    if config.domain.kind is not DomainKind.SPHERE:
        raise ConfigError("sphere experiment needs a sphere test function")
    missing = [s for s in config.rules if s.kind == "spherical_design" and not os.path.exists(s.params[0])]
    if missing:
        if not config.tensor_fallback:
            raise ConfigError(f"design file not found: {missing[0].params[0]}")
        fallback = []
        for spec in config.rules:
            if spec in missing:
                t = spec.params[1]
                log.warning("design %s missing; using product rule of exactness %d", spec.params[0], t)
                # One construction for every exactness level keeps the comparison fair.
                spec = RuleSpec("tensor_cc", (t, max(t + 1, 2 * config.n + 1)))
            fallback.append(spec)
        config = ExperimentConfig(**{**config.__dict__, "rules": fallback})
    return _run(config)


def run_mz_audit(spec: RuleSpec, n: int) -> dict:
    rule = spec.build()
    report = mz_eta(rule, n)
    out = report.to_dict()
    out["m"] = rule.m
    out["claimed_exactness"] = rule.claimed_exactness
    return out


def run_min_points(domain: str | Domain, n: int, k: int) -> dict:
    domain = domain_from_name(domain) if isinstance(domain, str) else domain
    return min_points_bound(domain, n, k).to_dict()


# -- serialisation -------------------------------------------------------------------

def _fmt(value) -> str:
    if value is None:
        return ""
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, float):
        return f"{value:.17g}"
    return str(value)


def rows_to_csv(rows: list[ResultRow]) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(CSV_COLUMNS)
    for r in rows:
        d = asdict(r)
        d["ek_upper"] = r.ek_upper
        writer.writerow([_fmt(d[c]) for c in CSV_COLUMNS])
    return buf.getvalue()


def grid_to_csv(samples: GridSamples, domain: Domain) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    coords = ["x"] if domain.kind is DomainKind.INTERVAL else ["x", "y", "z"]
    writer.writerow([*coords, "f", "approx", "error"])
    for p, fv, av, ev in zip(samples.points, samples.f, samples.approx, samples.error):
        p = p if isinstance(p, list) else [p]
        writer.writerow([_fmt(float(c)) for c in p] + [_fmt(fv), _fmt(av), _fmt(ev)])
    return buf.getvalue()


def _safe(label: str) -> str:
    return "".join(c if c.isalnum() or c in "-_." else "_" for c in label)


def write_result(result: ExperimentResult, out_dir: str, fmt: str = "csv") -> list[str]:
    """Write summary and grids under out_dir; returns the paths written."""
    os.makedirs(out_dir, exist_ok=True)
    written = []
    if fmt == "json":
        path = os.path.join(out_dir, "results.json")
        with open(path, "w", encoding="utf-8", newline="\n") as fh:
            json.dump(result.to_dict(), fh, indent=1, allow_nan=True)
            fh.write("\n")
        return [path]
    if fmt != "csv":
        raise ConfigError(f"unknown format {fmt!r}")
    path = os.path.join(out_dir, "results.csv")
    with open(path, "w", encoding="utf-8", newline="") as fh:
        fh.write(rows_to_csv(result.rows))
    written.append(path)
    for g in result.grids:
        gpath = os.path.join(out_dir, f"grid_{_safe(g.rule)}.csv")
        with open(gpath, "w", encoding="utf-8", newline="") as fh:
            fh.write(grid_to_csv(g, result.config.domain))
        written.append(gpath)
    return written


def read_result_json(path: str) -> ExperimentResult:
    with open(path, encoding="utf-8") as fh:
        return ExperimentResult.from_dict(json.load(fh))


def summary_table(result: ExperimentResult) -> str:
    lines = [f"{'rule':<24}{'m':>6}{'exact':>6}{'k':>4}{'eta':>11}{'l2_error':>11}"
             f"{'ek_upper':>11}{'bound':>11}  status"]
    for r in result.rows:
        def g(v):
            return "-" if v is None else f"{v:.3e}"
        lines.append(
            f"{r.rule:<24}{r.m if r.m is not None else '-':>6}{r.exactness if r.exactness is not None else '-':>6}"
            f"{r.k if r.k is not None else '-':>4}{g(r.eta):>11}{g(r.l2_error):>11}{g(r.ek_upper):>11}"
            f"{g(r.bound_rhs):>11}  {r.status}"
            + (f" (satisfied={r.satisfied})" if r.satisfied is not None else "")
        )
    return "\n".join(lines)
