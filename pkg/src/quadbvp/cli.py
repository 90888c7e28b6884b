"""Config-driven experiment runner.

Subcommands::

    quadbvp run <config>        execute an experiment, write CSV + summary
    quadbvp validate <config>   parse and validate a config, run nothing
    quadbvp schema <mode>       print config keys, CSV columns and gates

Configs are flat INI-style text: ``[section]`` headers and ``key = value``
lines, full-line comments starting with ``#`` or ``;``.  Modes:

    solve        solve one problem with seeded compatible data, report
                 solution norms, solver diagnostics and interior residuals
    roundtrip    plant seeded traces, synthesize data, solve, compare
    power_gap    sampled bound check for |(i xi)^k - zeta^k|
    kernel_gap   lattice-vs-continuous kernel gap ratios over a mesh sweep
    commutator   decay rate of the restriction commutator
    section_gap  decay rate of the restricted-minus-lattice operator gap

Each run writes ``<mode>.csv`` (first line ``# schema=<mode>-v1``) and
``<mode>_summary.txt`` (key = value lines, one gate verdict per line) into
the output directory (config ``output``, overridden by the
``QUADBVP_OUTPUT_DIR`` environment variable).  Exit status: 0 all gates
pass, 1 a gate failed, 2 config error, 3 numerical failure.
"""

from __future__ import annotations

import argparse
import math
import os
import sys
import time
from dataclasses import dataclass, field, replace
from pathlib import Path

import numpy as np

from .errors import (AssemblyError, ConfigError, InvalidConfigurationError,
                     NearSingularError, NormEstimateError)
from .lattice import FrequencyGrid, sobolev_norm_1d, sobolev_norm_2d
from .symbols import PeriodicSymbol, builtin_factor_family
from .operators import apply_symbol_to_spectrum, boundary_trace_spectrum
from .system import (ProblemSpec, assemble_discrete_system,
                     identity_boundary_operators, manufactured_roundtrip,
                     radial_power_problem, random_trace_vector,
                     reconstruct_solution, row_trace_boundary_operators,
                     solve_block_system, zeta_boundary_operators)
from .comparison import (commutator_rate_sweep, kernel_gap_ratios,
                         section_gap_rate_sweep, zeta_power_gap)

MODES = ("solve", "roundtrip", "power_gap", "kernel_gap", "commutator", "section_gap")

OUTPUT_ENV_VAR = "QUADBVP_OUTPUT_DIR"

ROUNDTRIP_TOL = 1.0e-6
RESIDUAL_TOL = 1.0e-10
RESIDUAL_COND_LIMIT = 1.0e8
HOMOGENEOUS_TOL = 1.0e-6
KERNEL_GAP_GROWTH_TOL = 0.10
SECTION_GAP_SLOPE_MIN = 0.9
COMMUTATOR_SLOPE_FACTOR = 0.9


# ---------------------------------------------------------------------------
# config parsing

def parse_config_text(text: str) -> dict[str, dict[str, tuple[str, int]]]:
    """Parse flat ``[section]`` / ``key = value`` text, tracking line numbers."""
    sections: dict[str, dict[str, tuple[str, int]]] = {}
    current: str | None = None
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#") or line.startswith(";"):
            continue
        if line.startswith("[") and line.endswith("]"):
            current = line[1:-1].strip()
            if not current:
                raise ConfigError("empty section name", line=lineno)
            sections.setdefault(current, {})
            continue
        if "=" not in line:
            raise ConfigError(f"expected 'key = value', got {line!r}", line=lineno)
        if current is None:
            raise ConfigError("key outside of any [section]", line=lineno)
        key, _, value = line.partition("=")
        key = key.strip()
        if key in sections[current]:
            raise ConfigError(f"duplicate key {key!r} in [{current}]", line=lineno)
        sections[current][key] = (value.strip(), lineno)
    return sections


@dataclass
class ExperimentConfig:
    """Validated experiment description."""

    mode: str
    seed: int
    output: Path
    # lattice problem (solve, roundtrip)
    family: str | None = None
    family_params: dict[str, float] = field(default_factory=dict)
    boundary: str = "zeta"
    s: float | None = None
    n: int | None = None
    delta: float | None = None
    grid_n: int | None = None
    h: float | None = None
    # continuous problem (comparison modes)
    betas: tuple[float, ...] = ()
    gammas: tuple[float, ...] = ()
    h_values: tuple[float, ...] = ()
    nodes_per_window: int = 32
    lambda_factor: float = 4.0
    k_max: int = 4
    samples: int = 10000


_SCHEMA: dict[str, dict] = {
    "solve": {
        "columns": ("h", "N", "point_i1", "point_i2", "abs_residual"),
        "gates": ("solve_residual: linear-solve residual <= 1e-10 when condition <= 1e8",
                  "homogeneous_residual: |A u| <= 1e-6 ||u|| at interior points"),
        "keys": ("[experiment] mode seed output", "[symbols] family a p q c kappa boundary",
                 "[problem] s n delta", "[grid] N h"),
    },
    "roundtrip": {
        "columns": ("h", "N", "rel_error", "condition", "residual"),
        "gates": ("roundtrip_rel_error: recovered traces within 1e-6 of planted",
                  "solve_residual: linear-solve residual <= 1e-10 when condition <= 1e8"),
        "keys": ("[experiment] mode seed output", "[symbols] family a p q c kappa boundary",
                 "[problem] s n delta", "[grid] N h"),
    },
    "power_gap": {
        "columns": ("h", "k", "max_gap", "max_bound", "max_ratio", "violations"),
        "gates": ("power_gap_bound: zero pointwise violations of the first-order bound",),
        "keys": ("[experiment] mode seed output", "[sweep] h_values k_max samples"),
    },
    "kernel_gap": {
        "columns": ("h", "j", "k", "family", "ratio"),
        "gates": ("kernel_gap_growth: per-family max ratio grows <= 10% per h halving",),
        "keys": ("[experiment] mode seed output", "[continuous] s n delta betas gammas",
                 "[sweep] h_values nodes_per_window lambda_factor"),
    },
    "commutator": {
        "columns": ("h", "window_nodes", "norm"),
        "gates": ("commutator_slope: fitted slope >= 0.9 * predicted exponent",),
        "keys": ("[experiment] mode seed output", "[continuous] s n delta betas gammas",
                 "[sweep] h_values nodes_per_window lambda_factor"),
    },
    "section_gap": {
        "columns": ("h", "window_nodes", "norm"),
        "gates": ("section_gap_slope: fitted slope >= 0.9",),
        "keys": ("[experiment] mode seed output", "[continuous] s n delta betas gammas",
                 "[sweep] h_values nodes_per_window lambda_factor"),
    },
}

_KNOWN_KEYS = {
    "experiment": {"mode", "seed", "output"},
    "symbols": {"family", "a", "p", "q", "c", "kappa", "boundary"},
    "problem": {"s", "n", "delta"},
    "grid": {"N", "h"},
    "continuous": {"s", "n", "delta", "betas", "gammas"},
    "sweep": {"h_values", "nodes_per_window", "lambda_factor", "k_max", "samples"},
}


class _Reader:
    def __init__(self, sections: dict[str, dict[str, tuple[str, int]]]):
        self.sections = sections

    def check_known(self) -> None:
        for name, body in self.sections.items():
            if name not in _KNOWN_KEYS:
                raise ConfigError(f"unknown section [{name}]")
            for key, (_, line) in body.items():
                if key not in _KNOWN_KEYS[name]:
                    raise ConfigError(f"unknown key {key!r} in [{name}]", line=line)

    def get(self, section: str, key: str, required: bool = False) -> tuple[str, int] | None:
        entry = self.sections.get(section, {}).get(key)
        if entry is None and required:
            raise ConfigError(f"missing required field {key!r} in section [{section}]")
        return entry

    def _parse(self, section: str, key: str, conv, required: bool, default):
        entry = self.get(section, key, required)
        if entry is None:
            return default
        value, line = entry
        try:
            return conv(value)
        except ValueError as exc:
            raise ConfigError(f"bad value for {key!r}: {exc}", line=line) from None

    def float_(self, section, key, required=False, default=None):
        return self._parse(section, key, float, required, default)

    def int_(self, section, key, required=False, default=None):
        return self._parse(section, key, int, required, default)

    def str_(self, section, key, required=False, default=None):
        return self._parse(section, key, str, required, default)

    def floats(self, section, key, required=False, default=()):
        def conv(v: str) -> tuple[float, ...]:
            parts = v.replace(",", " ").split()
            if not parts:
                raise ValueError("empty list")
            return tuple(float(p) for p in parts)
        return self._parse(section, key, conv, required, tuple(default))


def load_config(path: str | Path) -> ExperimentConfig:
    """Parse and validate a config file."""
    text = Path(path).read_text()
    reader = _Reader(parse_config_text(text))
    reader.check_known()

    mode = reader.str_("experiment", "mode", required=True)
    if mode not in MODES:
        entry = reader.get("experiment", "mode")
        raise ConfigError(f"unknown mode {mode!r}; expected one of {', '.join(MODES)}",
                          line=entry[1] if entry else None)
    cfg = ExperimentConfig(
        mode=mode,
        seed=reader.int_("experiment", "seed", default=0),
        output=Path(os.environ.get(OUTPUT_ENV_VAR)
                    or reader.str_("experiment", "output", default="out")),
    )

    if mode in ("solve", "roundtrip"):
        cfg.family = reader.str_("symbols", "family", required=True)
        if cfg.family == "geometric":
            cfg.family_params = {
                "a": reader.float_("symbols", "a", required=True),
                "p": reader.int_("symbols", "p", default=1),
                "q": reader.int_("symbols", "q", default=1),
            }
        elif cfg.family == "shifted_zeta":
            cfg.family_params = {
                "c": reader.float_("symbols", "c", required=True),
                "kappa": reader.float_("symbols", "kappa", required=True),
            }
        else:
            entry = reader.get("symbols", "family")
            raise ConfigError(
                f"unknown symbol family {cfg.family!r}; expected geometric or shifted_zeta",
                line=entry[1] if entry else None)
        cfg.boundary = reader.str_("symbols", "boundary", default="row_trace")
        if cfg.boundary not in ("identity", "zeta", "row_trace"):
            raise ConfigError(f"unknown boundary family {cfg.boundary!r}")
        cfg.s = reader.float_("problem", "s", required=True)
        cfg.n = reader.int_("problem", "n", required=True)
        cfg.delta = reader.float_("problem", "delta", required=True)
        cfg.grid_n = reader.int_("grid", "N", required=True)
        cfg.h = reader.float_("grid", "h", required=True)
        if cfg.grid_n % 2 != 0 or cfg.grid_n <= 0:
            raise ConfigError(f"grid N must be a positive even integer, got {cfg.grid_n}")
        if cfg.h <= 0:
            raise ConfigError(f"grid h must be positive, got {cfg.h}")
        # factorization consistency is checked here so bad configs fail
        # before any computation
        try:
            fac = _build_factorization(cfg)
            if not math.isclose(fac.index - cfg.s, cfg.n + cfg.delta, abs_tol=1e-9):
                raise ConfigError(
                    f"index - s = {fac.index - cfg.s} must equal n + delta = "
                    f"{cfg.n + cfg.delta}")
            if not abs(cfg.delta) < 0.5:
                raise ConfigError(f"delta must satisfy |delta| < 1/2, got {cfg.delta}")
        except ValueError as exc:
            raise ConfigError(str(exc)) from None
    elif mode == "power_gap":
        cfg.h_values = reader.floats("sweep", "h_values",
                                     default=(1.0, 0.5, 0.25, 0.125))
        cfg.k_max = reader.int_("sweep", "k_max", default=4)
        cfg.samples = reader.int_("sweep", "samples", default=10000)
        if cfg.k_max < 1:
            raise ConfigError(f"k_max must be >= 1, got {cfg.k_max}")
        if cfg.samples < 1:
            raise ConfigError(f"samples must be >= 1, got {cfg.samples}")
    else:
        defaults = {
            "kernel_gap": (8.25, 2, -0.25, (0.0, -1.0), (0.0, -1.0), (1.0, 0.5, 0.25), 64),
            "commutator": (2.25, 1, -0.25, (0.0,), (0.0,), (0.5, 0.25, 0.125, 0.0625), 32),
            "section_gap": (3.25, 2, -0.25, (0.0, -1.0), (0.0, -1.0),
                            (0.5, 0.25, 0.125, 0.0625), 32),
        }[mode]
        cfg.s = reader.float_("continuous", "s", default=defaults[0])
        cfg.n = reader.int_("continuous", "n", default=defaults[1])
        cfg.delta = reader.float_("continuous", "delta", default=defaults[2])
        cfg.betas = reader.floats("continuous", "betas", default=defaults[3])
        cfg.gammas = reader.floats("continuous", "gammas", default=defaults[4])
        cfg.h_values = reader.floats("sweep", "h_values", default=defaults[5])
        cfg.nodes_per_window = reader.int_("sweep", "nodes_per_window", default=defaults[6])
        cfg.lambda_factor = reader.float_("sweep", "lambda_factor", default=4.0)
        if len(cfg.betas) != cfg.n or len(cfg.gammas) != cfg.n:
            raise ConfigError(
                f"betas and gammas must each have n = {cfg.n} entries, got "
                f"{len(cfg.betas)} and {len(cfg.gammas)}")
        if not abs(cfg.delta) < 0.5:
            raise ConfigError(f"delta must satisfy |delta| < 1/2, got {cfg.delta}")
        if any(b >= a for a, b in zip(cfg.h_values, cfg.h_values[1:])) or not cfg.h_values:
            raise ConfigError("h_values must be a non-empty strictly decreasing list")
    return cfg


def _build_factorization(cfg: ExperimentConfig):
    return builtin_factor_family(cfg.family, cfg.h, **cfg.family_params)


def _build_problem_spec(cfg: ExperimentConfig) -> ProblemSpec:
    fac = _build_factorization(cfg)
    families = {"identity": identity_boundary_operators,
                "zeta": zeta_boundary_operators,
                "row_trace": row_trace_boundary_operators}
    bottom, left = families[cfg.boundary](cfg.n, cfg.h)
    return ProblemSpec(s=cfg.s, factorization=fac, n=cfg.n, delta=cfg.delta,
                       bottom_ops=bottom, left_ops=left)


# ---------------------------------------------------------------------------
# report plumbing

@dataclass
class GateVerdict:
    name: str
    passed: bool
    detail: str


@dataclass
class ExperimentReport:
    mode: str
    rows: list[tuple]
    verdicts: list[GateVerdict]
    summary: dict[str, object]

    @property
    def all_passed(self) -> bool:
        return all(v.passed for v in self.verdicts)


def _fmt(value) -> str:
    if isinstance(value, float):
        return repr(value)
    return str(value)


def write_report(report: ExperimentReport, outdir: Path,
                 wall_seconds: float) -> tuple[Path, Path]:
    outdir.mkdir(parents=True, exist_ok=True)
    csv_path = outdir / f"{report.mode}.csv"
    with open(csv_path, "w") as f:
        f.write(f"# schema={report.mode}-v1\n")
        f.write(",".join(_SCHEMA[report.mode]["columns"]) + "\n")
        for row in report.rows:
            f.write(",".join(_fmt(v) for v in row) + "\n")
    summary_path = outdir / f"{report.mode}_summary.txt"
    with open(summary_path, "w") as f:
        f.write(f"mode = {report.mode}\n")
        for key, value in report.summary.items():
            f.write(f"{key} = {_fmt(value)}\n")
        for v in report.verdicts:
            f.write(f"gate_{v.name} = {'PASS' if v.passed else 'FAIL'} ({v.detail})\n")
        f.write(f"all_gates = {'PASS' if report.all_passed else 'FAIL'}\n")
        f.write(f"wall_seconds = {wall_seconds:.3f}\n")
    return csv_path, summary_path


def _solve_residual_gate(condition: float, residual: float) -> GateVerdict:
    if condition <= RESIDUAL_COND_LIMIT:
        return GateVerdict(
            "solve_residual", residual <= RESIDUAL_TOL,
            f"residual {residual:.3e} vs {RESIDUAL_TOL:.0e} at condition {condition:.3e}")
    return GateVerdict("solve_residual", True,
                       f"not applicable: condition {condition:.3e} > {RESIDUAL_COND_LIMIT:.0e}")


# ---------------------------------------------------------------------------
# mode runners

def _run_roundtrip(cfg: ExperimentConfig) -> ExperimentReport:
    spec = _build_problem_spec(cfg)
    grid = FrequencyGrid(cfg.h, cfg.grid_n)
    grid1 = FrequencyGrid(cfg.h, cfg.grid_n, ndim=1)
    rng = np.random.default_rng(cfg.seed)
    planted = random_trace_vector(rng, grid1, cfg.n)
    rep = manufactured_roundtrip(spec, planted, grid)
    rows = [(cfg.h, cfg.grid_n, rep.rel_error, rep.condition, rep.residual)]
    verdicts = [
        GateVerdict("roundtrip_rel_error", rep.rel_error <= ROUNDTRIP_TOL,
                    f"rel_error {rep.rel_error:.3e} vs {ROUNDTRIP_TOL:.0e}"),
        _solve_residual_gate(rep.condition, rep.residual),
    ]
    summary = {"h": cfg.h, "N": cfg.grid_n, "seed": cfg.seed,
               "family": spec.factorization.label, "boundary": cfg.boundary,
               "rel_error": rep.rel_error, "condition": rep.condition,
               "residual": rep.residual}
    return ExperimentReport("roundtrip", rows, verdicts, summary)


def _run_solve(cfg: ExperimentConfig) -> ExperimentReport:
    spec = _build_problem_spec(cfg)
    grid = FrequencyGrid(cfg.h, cfg.grid_n)
    grid1 = FrequencyGrid(cfg.h, cfg.grid_n, ndim=1)
    rng = np.random.default_rng(cfg.seed)
    planted = random_trace_vector(rng, grid1, cfg.n)
    # compatible data: two-edge data must agree at the corner, so it is
    # synthesized from a planted spectrum rather than drawn independently
    u_planted = reconstruct_solution(planted, spec.factorization, grid)
    spec = replace(
        spec,
        bottom_data=tuple(boundary_trace_spectrum(op, u_planted) for op in spec.bottom_ops),
        left_data=tuple(boundary_trace_spectrum(op, u_planted) for op in spec.left_ops))
    system = assemble_discrete_system(spec, grid)
    traces, rep = solve_block_system(system)
    u_hat = reconstruct_solution(traces, spec.factorization, grid)
    u_norm = sobolev_norm_2d(u_hat, cfg.s)

    full = PeriodicSymbol(lambda a, b: spec.factorization.full_symbol(a, b),
                          order=0.0, h=cfg.h)
    points = [(i, j) for i in range(cfg.n, cfg.n + 5) for j in range(cfg.n, cfg.n + 5)]
    residual_fn = apply_symbol_to_spectrum(full, u_hat, points)
    rows = []
    worst = 0.0
    (a1, _), (a2, _) = residual_fn.support_box
    for i, j in points:
        r = abs(residual_fn.values[i - a1, j - a2])
        worst = max(worst, r)
        rows.append((cfg.h, cfg.grid_n, i, j, r))

    verdicts = [
        _solve_residual_gate(rep.condition, rep.residual),
        GateVerdict("homogeneous_residual", worst <= HOMOGENEOUS_TOL * u_norm,
                    f"max |A u| {worst:.3e} vs {HOMOGENEOUS_TOL:.0e} * ||u|| "
                    f"= {HOMOGENEOUS_TOL * u_norm:.3e}"),
    ]
    summary = {"h": cfg.h, "N": cfg.grid_n, "seed": cfg.seed,
               "family": spec.factorization.label, "boundary": cfg.boundary,
               "condition": rep.condition, "residual": rep.residual,
               "solution_norm": u_norm,
               "max_interior_residual": worst}
    for k, s_k in enumerate(spec.trace_exponents):
        summary[f"bottom_trace_norm_{k}"] = sobolev_norm_1d(traces.bottom[k], s_k)
        summary[f"left_trace_norm_{k}"] = sobolev_norm_1d(traces.left[k], s_k)
    return ExperimentReport("solve", rows, verdicts, summary)


def _run_power_gap(cfg: ExperimentConfig) -> ExperimentReport:
    rng = np.random.default_rng(cfg.seed)
    rows = []
    total_violations = 0
    for h in cfg.h_values:
        xi = rng.uniform(-math.pi / h, math.pi / h, size=cfg.samples)
        for k in range(1, cfg.k_max + 1):
            res = zeta_power_gap(xi, k, h)
            positive = res.bound > 0
            ratio = float(np.max(res.gap[positive] / res.bound[positive])) \
                if np.any(positive) else 0.0
            violations = int(np.sum(res.gap > res.bound * (1 + 1e-12) + 1e-300))
            total_violations += violations
            rows.append((float(h), k, float(np.max(res.gap)),
                         float(np.max(res.bound)), ratio, violations))
    verdicts = [GateVerdict("power_gap_bound", total_violations == 0,
                            f"{total_violations} violations over "
                            f"{len(cfg.h_values) * cfg.k_max * cfg.samples} samples")]
    summary = {"seed": cfg.seed, "samples": cfg.samples, "k_max": cfg.k_max,
               "h_values": " ".join(repr(h) for h in cfg.h_values),
               "total_violations": total_violations}
    return ExperimentReport("power_gap", rows, verdicts, summary)


def _continuous_problem(cfg: ExperimentConfig):
    return radial_power_problem(s=cfg.s, n=cfg.n, delta=cfg.delta,
                                bottom_orders=cfg.betas, left_orders=cfg.gammas)


def _run_kernel_gap(cfg: ExperimentConfig) -> ExperimentReport:
    problem = _continuous_problem(cfg)
    families = ("bottom_mult", "bottom_kernel", "left_kernel", "left_mult")
    rows = []
    per_family: dict[str, list[float]] = {f: [] for f in families}
    for h in cfg.h_values:
        worst = {f: 0.0 for f in families}
        for j in range(cfg.n):
            for k in range(cfg.n):
                ratios = kernel_gap_ratios(problem, float(h), j, k,
                                           nodes_per_window=cfg.nodes_per_window,
                                           lambda_factor=cfg.lambda_factor)
                for f in families:
                    worst[f] = max(worst[f], ratios[f])
                    rows.append((float(h), j, k, f, ratios[f]))
        for f in families:
            per_family[f].append(worst[f])
    growth_worst = 0.0
    for f in families:
        vals = per_family[f]
        for a, b in zip(vals, vals[1:]):
            if a > 0:
                growth_worst = max(growth_worst, b / a - 1.0)
    verdicts = [GateVerdict(
        "kernel_gap_growth", growth_worst <= KERNEL_GAP_GROWTH_TOL,
        f"worst per-halving growth {growth_worst:+.2%} vs {KERNEL_GAP_GROWTH_TOL:.0%}")]
    summary = {"s": cfg.s, "n": cfg.n, "delta": cfg.delta,
               "h_values": " ".join(repr(h) for h in cfg.h_values),
               "nodes_per_window": cfg.nodes_per_window,
               "worst_growth": growth_worst}
    for f in families:
        summary[f"max_ratio_{f}"] = max(per_family[f])
    return ExperimentReport("kernel_gap", rows, verdicts, summary)


def _rate_mode(cfg: ExperimentConfig, sweep_fn, gate_name: str,
               slope_floor_fn) -> ExperimentReport:
    problem = _continuous_problem(cfg)
    report = sweep_fn(problem, cfg.h_values,
                      nodes_per_window=cfg.nodes_per_window,
                      lambda_factor=cfg.lambda_factor)
    window_nodes = [int(round(2 * math.pi / (h * (2 * math.pi / max(cfg.h_values))
                                             / cfg.nodes_per_window)))
                    for h in cfg.h_values]
    rows = [(float(h), wn, float(norm))
            for h, wn, norm in zip(report.h_values, window_nodes, report.norms)]
    floor = slope_floor_fn(report)
    if report.degenerate or report.slope is None:
        verdicts = [GateVerdict(gate_name, False,
                                "degenerate sweep: no positive norms to fit")]
    else:
        verdicts = [GateVerdict(gate_name, report.slope >= floor,
                                f"slope {report.slope:.4f} vs floor {floor:.4f}")]
    summary = {"s": cfg.s, "n": cfg.n, "delta": cfg.delta,
               "h_values": " ".join(repr(h) for h in cfg.h_values),
               "nodes_per_window": cfg.nodes_per_window,
               "lambda_factor": cfg.lambda_factor,
               "slope": report.slope if report.slope is not None else "degenerate",
               "epsilon": report.epsilon,
               "monotone_violations": " ".join(str(i) for i in report.monotone_violations)
               or "none"}
    return ExperimentReport(cfg.mode, rows, verdicts, summary)


def _run_commutator(cfg: ExperimentConfig) -> ExperimentReport:
    return _rate_mode(cfg, commutator_rate_sweep, "commutator_slope",
                      lambda rep: COMMUTATOR_SLOPE_FACTOR * rep.epsilon)


def _run_section_gap(cfg: ExperimentConfig) -> ExperimentReport:
    return _rate_mode(cfg, section_gap_rate_sweep, "section_gap_slope",
                      lambda rep: SECTION_GAP_SLOPE_MIN)


_RUNNERS = {
    "solve": _run_solve,
    "roundtrip": _run_roundtrip,
    "power_gap": _run_power_gap,
    "kernel_gap": _run_kernel_gap,
    "commutator": _run_commutator,
    "section_gap": _run_section_gap,
}


# ---------------------------------------------------------------------------
# entry points

def run_experiment(cfg: ExperimentConfig) -> tuple[ExperimentReport, Path, Path]:
    start = time.perf_counter()
    report = _RUNNERS[cfg.mode](cfg)
    wall = time.perf_counter() - start
    csv_path, summary_path = write_report(report, cfg.output, wall)
    return report, csv_path, summary_path


def _cmd_run(path: str) -> int:
    try:
        cfg = load_config(path)
    except (ConfigError, FileNotFoundError) as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2
    try:
        report, csv_path, summary_path = run_experiment(cfg)
    except InvalidConfigurationError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2
    except (NearSingularError, NormEstimateError, AssemblyError) as exc:
        print(f"numerical failure in mode {cfg.mode}: {exc}", file=sys.stderr)
        return 3
    for v in report.verdicts:
        print(f"[{'PASS' if v.passed else 'FAIL'}] {v.name}: {v.detail}")
    print(f"wrote {csv_path} and {summary_path}")
    return 0 if report.all_passed else 1


def _cmd_validate(path: str) -> int:
    try:
        cfg = load_config(path)
    except (ConfigError, FileNotFoundError) as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2
    print(f"OK: mode={cfg.mode} seed={cfg.seed} output={cfg.output}")
    return 0


def _cmd_schema(mode: str) -> int:
    if mode not in _SCHEMA:
        print(f"unknown mode {mode!r}; expected one of {', '.join(MODES)}",
              file=sys.stderr)
        return 2
    info = _SCHEMA[mode]
    print(f"mode: {mode}")
    print(f"csv header: # schema={mode}-v1")
    print(f"csv columns: {', '.join(info['columns'])}")
    print("config keys:")
    for line in info["keys"]:
        print(f"  {line}")
    print("gates:")
    for gate in info["gates"]:
        print(f"  {gate}")
    return 0


def main(argv: list[str] | None = None) -> int:
    parser = argparse.ArgumentParser(
        prog="quadbvp",
        description="quadrant boundary value problem experiments")
    sub = parser.add_subparsers(dest="command", required=True)
    p_run = sub.add_parser("run", help="run an experiment config")
    p_run.add_argument("config")
    p_val = sub.add_parser("validate", help="validate a config without running")
    p_val.add_argument("config")
    p_schema = sub.add_parser("schema", help="describe a mode's config and CSV schema")
    p_schema.add_argument("mode")
    args = parser.parse_args(argv)
    if args.command == "run":
        return _cmd_run(args.config)
    if args.command == "validate":
        return _cmd_validate(args.config)
    return _cmd_schema(args.mode)


if __name__ == "__main__":
    sys.exit(main())
