"""Monte Carlo estimates of the list canonical-Ramsey property in random (hyper)graphs.

Every random draw comes from a numpy ``SeedSequence`` substream derived from the config seed:
lists from ``spawn_key=LISTS_SPAWN_KEY`` and the host of trial t at grid point i from
``spawn_key=(i, t)``, so results depend only on (config, seed) and never on worker count.
"""
import csv
import json
import logging
import math
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from importlib import resources
from typing import Any, Dict, List, Optional, Tuple, Union

import jsonschema
import numpy as np
from pydantic import BaseModel, Field, ValidationError, field_validator, model_validator
from scipy.stats import beta

from .config import Guards, SolverConfig
from .density import threshold_scale
from .dto import ListKind, PointEstimate, SigmaPolicy, ThresholdCurve, TrialOutcome
from .errors import ConfigError, DomainError, GuardExceededError
from .graph_io import load_graph
from .hypergraph import KGraph, ListAssignment, Ordering, complete_graph
from .ramsey_service import decide_canarrow_lists

logger = logging.getLogger(__name__)

LISTS_SPAWN_KEY = (2 ** 32,)
SeedLike = Union[int, np.random.SeedSequence]


# --------- Config ---------

class ListSpec(BaseModel):
    kind: ListKind = Field(default=ListKind.CONSTANT, description="'constant' or 'random'")
    colours: List[int] = Field(default_factory=lambda: [1, 2], description="The list on every edge (constant)")
    r: int = Field(default=2, ge=1, description="List length (random)")
    universe: int = Field(default=2, ge=1, description="Colours are drawn from 1..universe (random)")


class GridSpec(BaseModel):
    lo: float = Field(default=0.3, gt=0, description="Smallest multiple of the threshold scale")
    hi: float = Field(default=3.0, gt=0, description="Largest multiple of the threshold scale")
    points: int = Field(default=8, ge=1, description="Number of geometrically spaced points")


class ExperimentConfig(BaseModel):
    n: int = Field(..., ge=1, description="Host vertex count")
    k: int = Field(default=2, ge=2, description="Uniformity")
    pattern: str = Field(..., description="Pattern graph: a name such as 'C4' or a graph file path")
    host: Optional[str] = Field(default=None, description="Sample inside this graph instead of the complete k-graph")
    lists: ListSpec = Field(default_factory=ListSpec)
    p_grid: Optional[List[float]] = Field(default=None, description="Explicit edge probabilities")
    grid: GridSpec = Field(default_factory=GridSpec, description="Used when p_grid is absent")
    trials: int = Field(default=200, ge=1)
    seed: int = Field(default=0, ge=0, lt=2 ** 64, description="Overridden by the CLI --seed flag")
    sigma: SigmaPolicy = Field(default=SigmaPolicy.ALL)
    ordering: Optional[List[int]] = Field(default=None, description="Ordering of V(H) when sigma is 'fixed'")
    solver: str = Field(default="backtrack")
    workers: int = Field(default=1, ge=1)

    @field_validator("p_grid")
    @classmethod
    def _probabilities(cls, v: Optional[List[float]]) -> Optional[List[float]]:
        if v is not None:
            if not v:
                raise ValueError("p_grid must not be empty")
            bad = [p for p in v if not 0 <= p <= 1]
            if bad:
                raise ValueError(f"probabilities must lie in [0, 1], got {bad}")
        return v

    @model_validator(mode="after")
    def _consistent(self) -> "ExperimentConfig":
        if self.sigma is SigmaPolicy.FIXED and self.ordering is None:
            raise ValueError("sigma 'fixed' needs an ordering")
        if self.lists.kind is ListKind.CONSTANT and not self.lists.colours:
            raise ValueError("constant lists need at least one colour")
        if self.grid.lo > self.grid.hi:
            raise ValueError("grid.lo must not exceed grid.hi")
        return self


def _experiment_schema() -> Dict[str, Any]:
    return json.loads(resources.files("canram.schemas").joinpath("experiment.schema.json").read_text("utf-8"))


def load_experiment_config(path) -> ExperimentConfig:
    try:
        with open(path, "r", encoding="utf-8") as f:
            raw = json.load(f)
    except (OSError, json.JSONDecodeError) as e:
        raise ConfigError(f"cannot read experiment config {path}: {e}", {"path": str(path)}) from e
    try:
        jsonschema.validate(raw, _experiment_schema())
    except jsonschema.ValidationError as e:
        raise ConfigError(f"experiment config does not match schema: {e.message}", {"path": list(e.path)}) from e
    try:
        return ExperimentConfig.model_validate(raw)
    except ValidationError as e:
        errors = e.errors(include_url=False, include_context=False)
        raise ConfigError(f"invalid experiment config: {e}", {"errors": errors}) from e


# --------- Sampling ---------

def _check_probability(p: float) -> None:
    if not 0 <= p <= 1:
        raise DomainError(f"probability must lie in [0, 1], got {p}", {"p": p})


def sample_subgraph(Gamma: KGraph, p: float, seed: SeedLike) -> KGraph:
    """Keep each edge of Gamma independently with probability p."""
    _check_probability(p)
    keep = np.random.default_rng(seed).random(Gamma.e) < p
    return Gamma.edge_subgraph(e for e, kept in zip(Gamma.edges, keep) if kept)


def sample_gnp(n: int, k: int, p: float, seed: SeedLike) -> KGraph:
    """G^(k)(n, p): every k-set of [n] is an edge independently with probability p."""
    return sample_subgraph(complete_graph(n, k), p, seed)


def clopper_pearson(successes: int, trials: int, level: float = 0.95) -> Tuple[float, float]:
    if trials == 0:
        return 0.0, 1.0
    alpha = 1 - level
    lo = 0.0 if successes == 0 else float(beta.ppf(alpha / 2, successes, trials - successes + 1))
    hi = 1.0 if successes == trials else float(beta.ppf(1 - alpha / 2, successes + 1, trials - successes))
    return lo, hi


# --------- Sweep ---------

@dataclass(frozen=True)
class PreparedExperiment:
    pattern: KGraph
    host: KGraph
    lists: ListAssignment
    sigma: Optional[Ordering]
    scale: Optional[float]
    exponent: Any


def prepare(cfg: ExperimentConfig) -> PreparedExperiment:
    H = load_graph(cfg.pattern)
    if H.uniformity != cfg.k:
        raise ConfigError(f"pattern is {H.uniformity}-uniform, config says k={cfg.k}", {"k": cfg.k})
    if cfg.host is not None:
        host = load_graph(cfg.host)
        if host.uniformity != cfg.k or host.v != cfg.n:
            raise ConfigError(
                f"host must be a {cfg.k}-graph on n={cfg.n} vertices, got {host!r}",
                {"k": host.uniformity, "n": host.v},
            )
    else:
        host = complete_graph(cfg.n, cfg.k)
    # lists are fixed on the whole host before any sampling
    if cfg.lists.kind is ListKind.CONSTANT:
        lists = ListAssignment.constant(host, cfg.lists.colours)
    else:
        rng = np.random.default_rng(np.random.SeedSequence(cfg.seed, spawn_key=LISTS_SPAWN_KEY))
        lists = ListAssignment.random(host, cfg.lists.r, cfg.lists.universe, rng)
    sigma = Ordering(tuple(cfg.ordering)) if cfg.sigma is SigmaPolicy.FIXED else None
    try:
        ts = threshold_scale(H, cfg.n)
        scale, exponent = ts.value, ts.exponent
    except DomainError:
        if cfg.p_grid is None:
            raise
        scale, exponent = None, None
    return PreparedExperiment(H, host, lists, sigma, scale, exponent)


def build_grid(cfg: ExperimentConfig, scale: Optional[float]) -> List[float]:
    if cfg.p_grid is not None:
        return list(cfg.p_grid)
    g = cfg.grid
    multiples = np.geomspace(g.lo, g.hi, g.points) if g.points > 1 else np.array([g.lo])
    return [float(min(1.0, max(0.0, m * scale))) for m in multiples]


def _run_trial(
    prepared: PreparedExperiment, p: float, seed: int, point: int, trial: int, solver: SolverConfig
) -> Tuple[TrialOutcome, float]:
    start = time.perf_counter()
    G = sample_subgraph(prepared.host, p, np.random.SeedSequence(seed, spawn_key=(point, trial)))
    try:
        report = decide_canarrow_lists(G, prepared.pattern, prepared.lists.restrict(G), solver, sigma=prepared.sigma)
        outcome = TrialOutcome.HOLDS if report.holds else TrialOutcome.FAILS
    except GuardExceededError as e:
        logger.debug("[trial] guard exceeded point=%d trial=%d %s", point, trial, e)
        outcome = TrialOutcome.GUARD_EXCEEDED
    return outcome, time.perf_counter() - start


def _run_trials(args) -> List[Tuple[TrialOutcome, float]]:
    prepared, p, seed, point, trials, solver = args
    return [_run_trial(prepared, p, seed, point, t, solver) for t in trials]


def _solver_config(cfg: ExperimentConfig, guards: Optional[Guards]) -> SolverConfig:
    return SolverConfig(name=cfg.solver, workers=1, guards=guards or Guards())


def estimate_canram_probability(
    cfg: ExperimentConfig,
    p: float,
    point: int = 0,
    prepared: Optional[PreparedExperiment] = None,
    guards: Optional[Guards] = None,
) -> PointEstimate:
    """Fraction of decided trials in which the sampled host has the list canonical-Ramsey property."""
    _check_probability(p)
    prepared = prepared or prepare(cfg)
    solver = _solver_config(cfg, guards)
    start = time.perf_counter()
    trials = list(range(cfg.trials))
    if cfg.workers > 1 and cfg.trials > 1:
        chunk = math.ceil(cfg.trials / cfg.workers)
        blocks = [trials[i:i + chunk] for i in range(0, cfg.trials, chunk)]
        with ProcessPoolExecutor(max_workers=cfg.workers) as pool:
            outcomes = [o for part in pool.map(
                _run_trials, [(prepared, p, cfg.seed, point, b, solver) for b in blocks]
            ) for o in part]
    else:
        outcomes = _run_trials((prepared, p, cfg.seed, point, trials, solver))
    seconds = time.perf_counter() - start
    successes = sum(1 for o, _ in outcomes if o is TrialOutcome.HOLDS)
    failures = sum(1 for o, _ in outcomes if o is TrialOutcome.FAILS)
    guarded = len(outcomes) - successes - failures
    decided = successes + failures
    estimate = successes / decided if decided else 0.0
    lo, hi = clopper_pearson(successes, decided)
    ratio = p / prepared.scale if prepared.scale else float("nan")
    logger.info(
        "[threshold] point=%d p=%.6g holds=%d fails=%d guard=%d estimate=%.4f",
        point, p, successes, failures, guarded, estimate,
    )
    return PointEstimate(
        p=p, ratio_to_scale=ratio, successes=successes, failures=failures, guard_exceeded=guarded,
        estimate=estimate, ci_lo=lo, ci_hi=hi, seconds=seconds,
    )


def threshold_sweep(cfg: ExperimentConfig, guards: Optional[Guards] = None) -> ThresholdCurve:
    prepared = prepare(cfg)
    grid = build_grid(cfg, prepared.scale)
    logger.info("[threshold] start n=%d pattern=%s points=%d trials=%d", cfg.n, cfg.pattern, len(grid), cfg.trials)
    points = tuple(
        estimate_canram_probability(cfg, p, point=i, prepared=prepared, guards=guards) for i, p in enumerate(grid)
    )
    curve = ThresholdCurve(n=cfg.n, scale=prepared.scale, exponent=prepared.exponent, points=points)
    if curve.unreliable:
        logger.warning("[threshold] more than 5%% of trials hit a guard at some point; curve marked unreliable")
    return curve


# --------- Output ---------

CSV_COLUMNS = ("p", "ratio_to_scale", "estimate", "ci_lo", "ci_hi", "trials", "guard_exceeded", "seconds")


def write_curve_csv(curve: ThresholdCurve, path, include_timings: bool = False) -> None:
    """One row per grid point; ``seconds`` stays empty unless timings are requested."""
    with open(path, "w", encoding="utf-8", newline="") as f:
        writer = csv.writer(f, lineterminator="\n")
        writer.writerow(CSV_COLUMNS)
        for pt in curve.points:
            writer.writerow([
                repr(pt.p), repr(pt.ratio_to_scale), repr(pt.estimate), repr(pt.ci_lo), repr(pt.ci_hi),
                pt.trials, pt.guard_exceeded, f"{pt.seconds:.3f}" if include_timings else "",
            ])


def curve_to_dict(curve: ThresholdCurve) -> Dict[str, Any]:
    return {
        "n": curve.n,
        "scale": curve.scale,
        "exponent": str(curve.exponent) if curve.exponent is not None else None,
        "unreliable": curve.unreliable,
        "points": [
            {
                "p": pt.p,
                "ratio_to_scale": None if math.isnan(pt.ratio_to_scale) else pt.ratio_to_scale,
                "estimate": pt.estimate,
                "ci_lo": pt.ci_lo, "ci_hi": pt.ci_hi, "half_width": pt.half_width,
                "successes": pt.successes, "failures": pt.failures, "guard_exceeded": pt.guard_exceeded,
                "unreliable": pt.unreliable,
            }
            for pt in curve.points
        ],
    }
