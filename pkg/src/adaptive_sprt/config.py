"""Experiment configuration documents and the built-in benchmark grids.

Configuration documents are YAML (JSON therefore also parses).  Schema,
version 1::

    schema_version: 1
    output:                      # optional; defaults to csv / results.csv
      format: csv                # csv | markdown
      path: results.csv
    experiments:
      - label: my-scenario       # optional; defaults to a derived id
        distribution: normal     # normal | poisson | asymmetric_laplace
        params_f0: {mean: 0.1, variance: 1.0}
        params_f1: {mean: 0.0}
        alphas: [1.0e-3, 1.0e-5]
        betas: [1.0e-3, 1.0e-5]  # optional; defaults to alphas
        replications: 1000
        seed: 42
        procedure: adaptive      # adaptive | classical
        truth: H0                # H0 | H1 | random
        cap: 10000000

Per-family parameters: ``normal`` takes ``mean`` (required) and
``variance`` (default 1.0); ``poisson`` takes ``rate``; and
``asymmetric_laplace`` takes ``location``, ``scale`` and ``asymmetry``.

Every (scenario, alpha-index) cell becomes one
:class:`~adaptive_sprt.montecarlo.ExperimentConfig` whose master seed is
mixed from the scenario seed and both indices, so cells are mutually
independent yet fully reproducible from the document alone.

The preset grids ``table1`` .. ``table4`` are the standard benchmark
scenarios: five Normal mean pairs, six Poisson rate pairs and four
Asymmetric Laplace parameter pairs under the adaptive procedure, plus the
Normal grid under the classical alternating-sampling baseline.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import yaml

from .distributions import AsymmetricLaplace, HypothesisPair, Normal, Poisson
from .montecarlo import DEFAULT_CAP, ExperimentConfig, Procedure, TruthMode

SCHEMA_VERSION = 1
DEFAULT_SEED = 12345
DEFAULT_REPLICATIONS = 1000


class ConfigError(ValueError):
    """A configuration document problem, naming the offending location."""


@dataclass(frozen=True)
class ScenarioSpec:
    """One row group of a table: a pair swept over an alpha/beta grid."""

    label: str
    pair: HypothesisPair
    alphas: tuple[float, ...]
    betas: tuple[float, ...]
    procedure: Procedure = Procedure.ADAPTIVE
    replications: int = DEFAULT_REPLICATIONS
    seed: int = DEFAULT_SEED
    truth: TruthMode = TruthMode.H0
    cap: int = DEFAULT_CAP

    def __post_init__(self):
        if not self.alphas:
            raise ValueError("alpha grid must be non-empty")
        if len(self.alphas) != len(self.betas):
            raise ValueError("alphas and betas must have equal length")


@dataclass(frozen=True)
class TableSpec:
    """A list of scenarios plus how to emit the aggregated table."""

    scenarios: tuple[ScenarioSpec, ...]
    format: str = "csv"
    path: str = "results.csv"

    def __post_init__(self):
        if self.format not in ("csv", "markdown"):
            raise ValueError(f"format must be csv or markdown, got {self.format!r}")
        if not self.scenarios:
            raise ValueError("scenario list must be non-empty")


def derive_cell_seed(seed: int, scenario_index: int, alpha_index: int) -> int:
    """Mix a per-cell master seed; avalanche-quality and platform-stable."""
    seq = np.random.SeedSequence([seed, scenario_index, alpha_index])
    return int(seq.generate_state(1, np.uint64)[0])


def expand_table(table: TableSpec) -> list[ExperimentConfig]:
    """One ExperimentConfig per (scenario, alpha) cell, scenario-major."""
    configs = []
    for i, sc in enumerate(table.scenarios):
        for j, (alpha, beta) in enumerate(zip(sc.alphas, sc.betas)):
            configs.append(
                ExperimentConfig(
                    pair=sc.pair,
                    alpha=alpha,
                    beta=beta,
                    master_seed=derive_cell_seed(sc.seed, i, j),
                    replications=sc.replications,
                    procedure=sc.procedure,
                    truth=sc.truth,
                    cap=sc.cap,
                    label=sc.label,
                )
            )
    return configs


# --- document parsing -------------------------------------------------------

_FAMILY_FIELDS = {
    "normal": {"mean": None, "variance": 1.0},
    "poisson": {"rate": None},
    "asymmetric_laplace": {"location": None, "scale": None, "asymmetry": None},
}
_FAMILY_TYPES = {
    "normal": Normal,
    "poisson": Poisson,
    "asymmetric_laplace": AsymmetricLaplace,
}


def _fail(where: str, message: str):
    raise ConfigError(f"{where}: {message}")


def _require_mapping(node, where: str) -> dict:
    if not isinstance(node, dict):
        _fail(where, f"expected a mapping, got {type(node).__name__}")
    return node


def _check_keys(node: dict, allowed, where: str):
    unknown = set(node) - set(allowed)
    if unknown:
        _fail(where, f"unknown key {sorted(unknown)[0]!r}")


def _number(node, where: str) -> float:
    if isinstance(node, bool) or not isinstance(node, (int, float)):
        _fail(where, f"expected a number, got {node!r}")
    return float(node)


def _parse_params(family: str, node, where: str) -> dict:
    fields = _FAMILY_FIELDS[family]
    node = _require_mapping(node, where)
    _check_keys(node, fields, where)
    params = {}
    for name, default in fields.items():
        if name in node:
            params[name] = _number(node[name], f"{where}.{name}")
        elif default is not None:
            params[name] = default
        else:
            _fail(where, f"missing required key {name!r}")
    return params


def _parse_scenario(node, index: int) -> ScenarioSpec:
    where = f"experiments[{index}]"
    node = _require_mapping(node, where)
    allowed = {
        "label", "distribution", "params_f0", "params_f1", "alphas", "betas",
        "replications", "seed", "procedure", "truth", "cap",
    }
    _check_keys(node, allowed, where)

    family = node.get("distribution")
    if family not in _FAMILY_FIELDS:
        _fail(f"{where}.distribution", f"must be one of {sorted(_FAMILY_FIELDS)}, got {family!r}")
    make = _FAMILY_TYPES[family]
    specs = {}
    for side in ("params_f0", "params_f1"):
        if side not in node:
            _fail(where, f"missing required key {side!r}")
        params = _parse_params(family, node[side], f"{where}.{side}")
        try:
            specs[side] = make(**params)
        except ValueError as exc:
            _fail(f"{where}.{side}", str(exc))
    try:
        pair = HypothesisPair(specs["params_f0"], specs["params_f1"])
    except ValueError as exc:
        _fail(where, str(exc))

    alphas = node.get("alphas")
    if not isinstance(alphas, list) or not alphas:
        _fail(f"{where}.alphas", "must be a non-empty list")
    alphas = tuple(_number(a, f"{where}.alphas[{k}]") for k, a in enumerate(alphas))
    betas = node.get("betas")
    if betas is None:
        betas = alphas
    else:
        if not isinstance(betas, list) or len(betas) != len(alphas):
            _fail(f"{where}.betas", "must be a list of the same length as alphas")
        betas = tuple(_number(b, f"{where}.betas[{k}]") for k, b in enumerate(betas))

    procedure = node.get("procedure", Procedure.ADAPTIVE.value)
    if procedure not in (p.value for p in Procedure):
        _fail(f"{where}.procedure", f"must be adaptive or classical, got {procedure!r}")
    truth = node.get("truth", TruthMode.H0.value)
    if truth not in (t.value for t in TruthMode):
        _fail(f"{where}.truth", f"must be H0, H1 or random, got {truth!r}")

    replications = node.get("replications", DEFAULT_REPLICATIONS)
    seed = node.get("seed", DEFAULT_SEED)
    cap = node.get("cap", DEFAULT_CAP)
    for name, value in (("replications", replications), ("seed", seed), ("cap", cap)):
        if isinstance(value, bool) or not isinstance(value, int):
            _fail(f"{where}.{name}", f"expected an integer, got {value!r}")

    label = node.get("label") or default_label(pair, Procedure(procedure))
    if not isinstance(label, str):
        _fail(f"{where}.label", f"expected a string, got {label!r}")

    try:
        return ScenarioSpec(
            label=label,
            pair=pair,
            alphas=alphas,
            betas=betas,
            procedure=Procedure(procedure),
            replications=replications,
            seed=seed,
            truth=TruthMode(truth),
            cap=cap,
        )
    except ValueError as exc:
        _fail(where, str(exc))


def parse_config(text: str) -> tuple[list[ExperimentConfig], TableSpec]:
    """Parse a configuration document into cell configs plus the table spec."""
    try:
        doc = yaml.safe_load(text)
    except yaml.YAMLError as exc:
        raise ConfigError(f"document: not valid YAML ({exc})") from exc
    doc = _require_mapping(doc, "document")
    _check_keys(doc, {"schema_version", "experiments", "output"}, "document")

    version = doc.get("schema_version", SCHEMA_VERSION)
    if version != SCHEMA_VERSION:
        _fail("schema_version", f"unsupported version {version!r} (supported: {SCHEMA_VERSION})")

    entries = doc.get("experiments")
    if not isinstance(entries, list) or not entries:
        _fail("experiments", "must be a non-empty list")
    scenarios = tuple(_parse_scenario(node, i) for i, node in enumerate(entries))

    out = _require_mapping(doc.get("output", {}), "output")
    _check_keys(out, {"format", "path"}, "output")
    try:
        table = TableSpec(
            scenarios=scenarios,
            format=out.get("format", "csv"),
            path=out.get("path", "results.csv"),
        )
    except ValueError as exc:
        _fail("output", str(exc))
    return expand_table(table), table


# --- benchmark presets ------------------------------------------------------

def _fmt(x: float) -> str:
    return format(x, "g")


def default_label(pair: HypothesisPair, procedure: Procedure) -> str:
    f0, f1 = pair.f0, pair.f1
    if isinstance(f0, Normal):
        body = f"normal-{_fmt(f0.mean)}-{_fmt(f1.mean)}"
        if (f0.variance, f1.variance) != (1.0, 1.0):
            body += f"-var-{_fmt(f0.variance)}-{_fmt(f1.variance)}"
    elif isinstance(f0, Poisson):
        body = f"poisson-{_fmt(f0.rate)}-{_fmt(f1.rate)}"
    else:
        body = (
            f"al-{_fmt(f0.location)}-{_fmt(f0.scale)}-{_fmt(f0.asymmetry)}"
            f"-vs-{_fmt(f1.location)}-{_fmt(f1.scale)}-{_fmt(f1.asymmetry)}"
        )
    if procedure is Procedure.CLASSICAL:
        body += "-classical"
    return body


ALPHA_GRID_MAIN = (1e-3, 5e-5, 1e-5, 5e-6, 1e-6)
ALPHA_GRID_SKEWED = (1e-3, 1e-5, 5e-6, 1e-6, 1e-7)
ALPHA_GRID_CLASSICAL = (1e-2, 1e-3, 1e-4, 1e-5)

NORMAL_MEAN_PAIRS = ((0.1, 0.0), (0.2, 0.0), (0.3, 0.0), (0.4, 0.0), (0.5, 0.0))
POISSON_RATE_PAIRS = ((2.5, 2.0), (3.0, 2.5), (3.5, 2.5), (2.0, 1.0), (1.5, 0.5), (2.5, 1.0))
AL_PARAM_PAIRS = (
    ((0.2, 2.0, 0.7), (0.0, 1.0, 0.3)),
    ((0.2, 1.0, 0.8), (0.0, 2.0, 0.2)),
    ((0.4, 1.0, 0.6), (0.0, 1.0, 0.2)),
    ((0.0, 2.0, 0.7), (0.2, 2.0, 0.3)),
)

PRESET_NAMES = ("table1", "table2", "table3", "table4")


def preset_table(
    name: str,
    seed: int = DEFAULT_SEED,
    replications: int = DEFAULT_REPLICATIONS,
    fmt: str = "csv",
    path: str | None = None,
) -> TableSpec:
    """The built-in benchmark grids, parameterized by seed and replications."""
    if name == "table1":
        pairs = [HypothesisPair(Normal(a), Normal(b)) for a, b in NORMAL_MEAN_PAIRS]
        alphas, procedure = ALPHA_GRID_MAIN, Procedure.ADAPTIVE
    elif name == "table2":
        pairs = [HypothesisPair(Poisson(a), Poisson(b)) for a, b in POISSON_RATE_PAIRS]
        alphas, procedure = ALPHA_GRID_MAIN, Procedure.ADAPTIVE
    elif name == "table3":
        pairs = [HypothesisPair(AsymmetricLaplace(*a), AsymmetricLaplace(*b)) for a, b in AL_PARAM_PAIRS]
        alphas, procedure = ALPHA_GRID_SKEWED, Procedure.ADAPTIVE
    elif name == "table4":
        pairs = [HypothesisPair(Normal(a), Normal(b)) for a, b in NORMAL_MEAN_PAIRS]
        alphas, procedure = ALPHA_GRID_CLASSICAL, Procedure.CLASSICAL
    else:
        raise ConfigError(f"preset: unknown preset {name!r} (available: {', '.join(PRESET_NAMES)})")
    scenarios = tuple(
        ScenarioSpec(
            label=default_label(pair, procedure),
            pair=pair,
            alphas=alphas,
            betas=alphas,
            procedure=procedure,
            replications=replications,
            seed=seed,
        )
        for pair in pairs
    )
    return TableSpec(scenarios=scenarios, format=fmt, path=path or f"{name}.{'md' if fmt == 'markdown' else 'csv'}")
