"""Experiment front end: config parsing, scenario dispatch, CSV/SVG output.

A scenario reads a YAML experiment file with three sections (``game``,
``sweep``, ``output``; plus scenario-specific ``options``), evaluates the
requested quantities through the library, and writes one CSV whose first
column is the swept value.  Floats are formatted at nine significant digits
and the body carries no timestamps, so reruns are byte-identical.  Files are
staged in a temporary name and renamed, so failed runs leave nothing behind.
"""

from __future__ import annotations

import csv
import math
import os
import tempfile
from dataclasses import dataclass, field
from pathlib import Path

import yaml

from . import benchmarks, equilibrium, evolving, game, montecarlo
from .distributions import DistributionPair, Family, StateDistribution
from .errors import CheapTalkError
from .game import PROFILE_LABELS, PROFILES_BY_LABEL, Bias, GameConfig

SCENARIOS = ("pbe", "loss_curve", "benchmark", "evolving", "compare",
             "simulate", "figure")

OUTPUT_DIR_ENV = "CHEAPTALK_LAB_OUT"

_GAME_DEFAULTS = {
    "n_users": 1,
    "p_high": 0.3,
    "q_plus": 0.5,
    "family": "normal",
    "mu_low": -1.0,
    "mu_high": 1.0,
    "scale_low": 1.0,
    "scale_high": 1.0,
}

SWEEP_AXES = ("n_users", "horizon", "p_high", "q_plus", "mu_low", "var_high",
              "family")


class ConfigError(CheapTalkError):
    """The experiment file is missing or malformed."""


@dataclass
class ExperimentConfig:
    scenario: str
    game: dict
    sweep_axis: str | None = None
    sweep_values: list = field(default_factory=list)
    stem: str = "results"
    formats: tuple[str, ...] = ("csv",)
    options: dict = field(default_factory=dict)


def load_experiment(path, scenario: str | None = None,
                    seed: int | None = None,
                    samples: int | None = None) -> ExperimentConfig:
    """Parse an experiment file; CLI overrides win over file values."""
    try:
        raw = yaml.safe_load(Path(path).read_text())
    except (OSError, yaml.YAMLError) as exc:
        raise ConfigError(f"cannot read experiment file {path}: {exc}") from exc
    if not isinstance(raw, dict):
        raise ConfigError("experiment file must contain a mapping")

    chosen = scenario or raw.get("scenario")
    if chosen not in SCENARIOS:
        raise ConfigError(f"unknown scenario {chosen!r}; expected one of {SCENARIOS}")

    game_section = dict(_GAME_DEFAULTS)
    game_section.update(raw.get("game") or {})

    sweep = raw.get("sweep") or {}
    axis = sweep.get("axis")
    if axis is not None and axis not in SWEEP_AXES:
        raise ConfigError(f"unknown sweep axis {axis!r}; expected one of {SWEEP_AXES}")
    values = list(sweep.get("values") or [])

    output = raw.get("output") or {}
    fmt = output.get("format", "csv")
    if fmt not in ("csv", "svg"):
        raise ConfigError("output.format must be 'csv' or 'svg'")
    formats = ("csv",) if fmt == "csv" else ("csv", "svg")

    options = dict(raw.get("options") or {})
    if seed is not None:
        options["seed"] = seed
    if samples is not None:
        options["samples"] = samples

    return ExperimentConfig(
        scenario=chosen,
        game=game_section,
        sweep_axis=axis,
        sweep_values=values,
        stem=str(output.get("stem", "results")),
        formats=formats,
        options=options,
    )


def _scale_from_variance(family: Family, variance: float) -> float:
    if variance <= 0:
        raise ConfigError("variance must be positive")
    if family is Family.NORMAL:
        return math.sqrt(variance)
    if family is Family.LAPLACE:
        return math.sqrt(variance / 2.0)
    return math.sqrt(3.0 * variance) / math.pi


def build_game(section: dict) -> GameConfig:
    try:
        family = Family(section["family"])
    except ValueError as exc:
        raise ConfigError(f"unknown family {section['family']!r}") from exc
    pair = DistributionPair(
        StateDistribution(family, float(section["mu_low"]), float(section["scale_low"])),
        StateDistribution(family, float(section["mu_high"]), float(section["scale_high"])),
    )
    try:
        return GameConfig(
            n_users=int(section["n_users"]),
            p_high=float(section["p_high"]),
            q_plus=float(section["q_plus"]),
            pair=pair,
        )
    except ValueError as exc:
        raise ConfigError(str(exc)) from exc


def _apply_axis(section: dict, axis: str, value) -> dict:
    out = dict(section)
    if axis == "n_users":
        out["n_users"] = int(value)
    elif axis in ("p_high", "q_plus", "mu_low"):
        out[axis] = float(value)
    elif axis == "var_high":
        out["scale_high"] = _scale_from_variance(Family(out["family"]), float(value))
    elif axis == "family":
        out["family"] = str(value)
    else:
        raise ConfigError(f"axis {axis!r} does not modify the game")
    return out


def _require_sweep(cfg: ExperimentConfig, default_axis: str, default_values):
    if cfg.sweep_axis is None:
        return default_axis, list(default_values)
    if not cfg.sweep_values:
        raise ConfigError("sweep.values must be a non-empty list")
    return cfg.sweep_axis, cfg.sweep_values


# ---------------------------------------------------------------------------
# scenarios: each returns (header, rows)


def _scenario_pbe(cfg: ExperimentConfig):
    axis, values = _require_sweep(cfg, "p_high", [x / 10 for x in range(1, 10)])
    header = [axis, "pbe_set", "system_loss"]
    rows = []
    for v in values:
        g = build_game(_apply_axis(cfg.game, axis, v))
        labels = "+".join(PROFILE_LABELS[p] for p in equilibrium.enumerate_pbe(g))
        rows.append([v, labels, equilibrium.bayesian_system_loss(g)])
    return header, rows


def _scenario_loss_curve(cfg: ExperimentConfig):
    axis, values = _require_sweep(cfg, "n_users", list(range(1, 9)))
    header = [axis, "bayesian_loss"]
    rows = []
    for v in values:
        g = build_game(_apply_axis(cfg.game, axis, v))
        rows.append([v, equilibrium.bayesian_system_loss(g)])
    return header, rows


def _scenario_benchmark(cfg: ExperimentConfig):
    axis, values = _require_sweep(cfg, "n_users", list(range(1, 9)))
    header = [axis, "majority_loss", "abandon_action", "abandon_loss"]
    rows = []
    for v in values:
        g = build_game(_apply_axis(cfg.game, axis, v))
        action, loss = benchmarks.abandon_scheme(g)
        rows.append([v, benchmarks.majority_vote_loss_biased(g), action, loss])
    return header, rows


def _scenario_evolving(cfg: ExperimentConfig):
    axis, values = _require_sweep(cfg, "horizon", list(range(2, 13)))
    if axis == "horizon":
        header = ["horizon", "evolving_loss", "abandon_loss"]
        g = build_game(cfg.game)
        _, abandon = benchmarks.abandon_scheme(g)
        rows = [[int(v), evolving.evolving_loss(g, int(v)), abandon] for v in values]
        return header, rows
    horizons = [int(t) for t in cfg.options.get("horizons", (2, 4, 6))]
    header = [axis] + [f"loss_T{t}" for t in horizons] + ["abandon_loss"]
    rows = []
    for v in values:
        g = build_game(_apply_axis(cfg.game, axis, v))
        _, abandon = benchmarks.abandon_scheme(g)
        rows.append([v] + [evolving.evolving_loss(g, t) for t in horizons] + [abandon])
    return header, rows


def _scenario_compare(cfg: ExperimentConfig):
    axis, values = _require_sweep(cfg, "n_users", list(range(1, 9)))
    if axis != "n_users":
        raise ConfigError("compare sweeps the reviewer count")
    horizon = int(cfg.options.get("horizon", 2))
    base = build_game(cfg.game)
    evolving_value = evolving.evolving_loss(base, horizon)
    try:
        threshold = evolving.crossover_threshold(base, horizon)
    except ValueError:
        threshold = math.nan
    _, abandon = benchmarks.abandon_scheme(base)
    header = ["n_users", "bayesian_loss", f"evolving_loss_T{horizon}",
              "majority_loss", "abandon_loss", "crossover_threshold"]
    rows = []
    for v in values:
        g = build_game(_apply_axis(cfg.game, "n_users", v))
        rows.append([
            int(v),
            equilibrium.bayesian_system_loss(g),
            evolving_value,
            benchmarks.majority_vote_loss_biased(g),
            abandon,
            threshold,
        ])
    return header, rows


def _scenario_simulate(cfg: ExperimentConfig):
    g = build_game(cfg.game)
    label = str(cfg.options.get("profile", "SC1"))
    if label not in PROFILES_BY_LABEL:
        raise ConfigError(f"unknown profile {label!r}")
    profile = PROFILES_BY_LABEL[label]
    samples = int(cfg.options.get("samples", 100_000))
    seed = int(cfg.options.get("seed", 0))
    rule = game.best_response_rule(profile, g)
    report = montecarlo.simulate_game(g, profile, rule, samples, seed)

    refs = {
        "cost": game.expected_platform_cost(profile, rule, g),
        "utility_negative": game.expected_user_utility(profile, rule, Bias.NEGATIVE, g),
        "utility_positive": game.expected_user_utility(profile, rule, Bias.POSITIVE, g),
    }
    ests = {
        "cost": (report.mean_cost, report.stderr_cost),
        "utility_negative": (report.mean_utility_negative, report.stderr_utility_negative),
        "utility_positive": (report.mean_utility_positive, report.stderr_utility_positive),
    }
    header = ["quantity", "estimate", "stderr", "reference", "z_score"]
    rows = []
    for name, ref in refs.items():
        est, se = ests[name]
        z = (est - ref) / se if se else math.nan
        rows.append([name, est, se, ref, z])
    return header, rows


def _figure_two(cfg):
    base = dict(cfg.game, family="normal", mu_high=1.0, scale_low=1.0,
                scale_high=1.0, p_high=0.3)
    horizons = [int(t) for t in cfg.options.get("horizons", (2, 3, 4, 5, 6))]
    values = cfg.sweep_values or [x / 2.0 for x in range(-10, 0)]
    header = ["mu_low"] + [f"loss_T{t}" for t in horizons]
    rows = []
    for mu_low in values:
        g = build_game(dict(base, mu_low=float(mu_low)))
        rows.append([mu_low] + [evolving.evolving_loss(g, t) for t in horizons])
    return header, rows


def _figure_three(cfg):
    base = dict(cfg.game, family="normal", mu_low=-1.0, mu_high=1.0,
                scale_low=1.0, p_high=0.3)
    variances = (2.0 / 3.0, 1.0, 1.5)
    header = (["horizon", "abandon_loss"]
              + [f"evolving_var_high_{v:g}" for v in variances])
    rows = []
    for t in range(2, 11):
        row = [t, benchmarks.abandon_scheme(build_game(base))[1]]
        for v in variances:
            g = build_game(dict(base, scale_high=math.sqrt(v)))
            row.append(evolving.evolving_loss(g, t))
        rows.append(row)
    return header, rows


def _figure_four(cfg):
    header = ["horizon", "abandon_loss", "logistic_loss", "laplace_loss"]
    logistic = build_game(dict(_GAME_DEFAULTS, family="logistic", p_high=0.3,
                               scale_low=1.0, scale_high=1.5))
    laplace = build_game(dict(_GAME_DEFAULTS, family="laplace", p_high=0.3,
                              scale_low=1.0, scale_high=1.5))
    abandon = benchmarks.abandon_scheme(logistic)[1]
    rows = []
    for t in range(2, 11):
        rows.append([t, abandon,
                     evolving.evolving_loss(logistic, t),
                     evolving.evolving_loss(laplace, t)])
    return header, rows


def _figure_five(cfg):
    base = dict(_GAME_DEFAULTS, p_high=0.3, q_plus=0.5,
                scale_low=1.0, scale_high=math.sqrt(1.5))
    header = ["count", "bayesian_loss_at_N", "evolving_loss_at_T"]
    rows = []
    for idx in range(1, 9):
        g_n = build_game(dict(base, n_users=idx))
        g_t = build_game(base)
        rows.append([idx,
                     equilibrium.bayesian_system_loss(g_n),
                     evolving.evolving_loss(g_t, idx)])
    return header, rows


def _figure_six(cfg):
    base = dict(_GAME_DEFAULTS, p_high=0.3, scale_low=1.0,
                scale_high=math.sqrt(1.5))
    shares = (0.1, 0.5, 0.7)
    n_max = int(cfg.options.get("n_max", 8))
    header = (["n_users", "abandon_loss"]
              + [f"majority_q{q:g}" for q in shares]
              + [f"bayesian_q{q:g}" for q in shares])
    rows = []
    for n in range(1, n_max + 1):
        row = [n, benchmarks.abandon_scheme(build_game(dict(base, n_users=n)))[1]]
        for q in shares:
            g = build_game(dict(base, n_users=n, q_plus=q))
            row.append(benchmarks.majority_vote_loss_biased(g))
        for q in shares:
            g = build_game(dict(base, n_users=n, q_plus=q))
            row.append(equilibrium.bayesian_system_loss(g))
        rows.append(row)
    return header, rows


_FIGURES = {
    "fig2": _figure_two,
    "fig3": _figure_three,
    "fig4": _figure_four,
    "fig5": _figure_five,
    "fig6": _figure_six,
}


def _scenario_figure(cfg: ExperimentConfig):
    name = str(cfg.options.get("figure", "fig6"))
    if name not in _FIGURES:
        raise ConfigError(f"unknown figure {name!r}; expected one of {sorted(_FIGURES)}")
    return _FIGURES[name](cfg)


_DISPATCH = {
    "pbe": _scenario_pbe,
    "loss_curve": _scenario_loss_curve,
    "benchmark": _scenario_benchmark,
    "evolving": _scenario_evolving,
    "compare": _scenario_compare,
    "simulate": _scenario_simulate,
    "figure": _scenario_figure,
}


# ---------------------------------------------------------------------------
# output writers


def _format_cell(value) -> str:
    if isinstance(value, bool):
        return str(value)
    if isinstance(value, int):
        return str(value)
    if isinstance(value, float):
        return f"{value:.9g}"
    return str(value)


def _write_atomic(path: Path, text: str) -> None:
    fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=f".{path.name}.")
    try:
        with os.fdopen(fd, "w", newline="") as handle:
            handle.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def write_csv(path: Path, header, rows) -> None:
    import io

    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(header)
    for row in rows:
        writer.writerow([_format_cell(v) for v in row])
    _write_atomic(path, buf.getvalue())


def render_svg(header, rows, title: str) -> str:
    """Minimal polyline plot of every numeric column against the first one."""
    width, height, margin = 640, 400, 55
    xs = [float(r[0]) for r in rows]
    series = []
    for col in range(1, len(header)):
        try:
            ys = [float(r[col]) for r in rows]
        except (TypeError, ValueError):
            continue
        if all(math.isfinite(y) for y in ys):
            series.append((header[col], ys))
    if not xs or not series:
        return ("<svg xmlns='http://www.w3.org/2000/svg' width='640' height='400'>"
                "<text x='20' y='40'>no numeric series</text></svg>")

    x_lo, x_hi = min(xs), max(xs)
    y_lo = min(min(ys) for _, ys in series)
    y_hi = max(max(ys) for _, ys in series)
    x_span = (x_hi - x_lo) or 1.0
    y_span = (y_hi - y_lo) or 1.0

    def sx(x):
        return margin + (x - x_lo) / x_span * (width - 2 * margin)

    def sy(y):
        return height - margin - (y - y_lo) / y_span * (height - 2 * margin)

    colors = ["#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e",
              "#8c564b", "#17becf", "#7f7f7f"]
    parts = [
        f"<svg xmlns='http://www.w3.org/2000/svg' width='{width}' height='{height}'>",
        f"<text x='{margin}' y='20' font-size='14'>{title}</text>",
        f"<line x1='{margin}' y1='{height - margin}' x2='{width - margin}' "
        f"y2='{height - margin}' stroke='black'/>",
        f"<line x1='{margin}' y1='{margin}' x2='{margin}' "
        f"y2='{height - margin}' stroke='black'/>",
        f"<text x='{margin}' y='{height - margin + 18}' font-size='11'>{x_lo:.6g}</text>",
        f"<text x='{width - margin - 30}' y='{height - margin + 18}' "
        f"font-size='11'>{x_hi:.6g}</text>",
        f"<text x='4' y='{height - margin}' font-size='11'>{y_lo:.6g}</text>",
        f"<text x='4' y='{margin + 4}' font-size='11'>{y_hi:.6g}</text>",
        f"<text x='{width / 2:.0f}' y='{height - 8}' font-size='12'>{header[0]}</text>",
    ]
    for i, (name, ys) in enumerate(series):
        color = colors[i % len(colors)]
        points = " ".join(f"{sx(x):.2f},{sy(y):.2f}" for x, y in zip(xs, ys))
        parts.append(f"<polyline fill='none' stroke='{color}' points='{points}'/>")
        parts.append(f"<text x='{width - margin + 2}' y='{margin + 14 * i + 10}' "
                     f"font-size='11' fill='{color}'>{name}</text>")
    parts.append("</svg>")
    return "\n".join(parts)


def default_output_dir() -> Path:
    return Path(os.environ.get(OUTPUT_DIR_ENV, "."))


def run(cfg: ExperimentConfig, out_dir=None) -> list[Path]:
    """Evaluate one scenario and write its artifacts; returns written paths."""
    out = Path(out_dir) if out_dir is not None else default_output_dir()
    out.mkdir(parents=True, exist_ok=True)
    header, rows = _DISPATCH[cfg.scenario](cfg)

    written = []
    csv_path = out / f"{cfg.stem}.csv"
    write_csv(csv_path, header, rows)
    written.append(csv_path)
    if "svg" in cfg.formats:
        svg_path = out / f"{cfg.stem}.svg"
        _write_atomic(svg_path, render_svg(header, rows, cfg.stem))
        written.append(svg_path)
    return written
