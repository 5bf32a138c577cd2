"""Monte Carlo estimates of false-positive and false-negative rates.

Each trial draws a fresh codebook from a seed derived from the experiment
seed and the trial number, lets users ``0 .. l-1`` collude and traces the
result. Trials are independent, so the counts do not depend on how many
threads run them.
"""

from __future__ import annotations

import csv
import io
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

from scipy.stats import beta

from .attack import collude, parse_strategy
from .bias import BiasDistribution, gl_distribution
from .codebook import generate
from .params import CodeParameters, SecurityGoal, SolverKnobs, derive_params
from .rng import derive_seed, stream
from .tracing import exact_score_table, trace

__all__ = [
    "ExperimentConfig",
    "ExperimentResult",
    "clopper_pearson_upper",
    "clopper_pearson_lower",
    "run_trials",
    "sweep",
    "CSV_COLUMNS",
]

CSV_COLUMNS = [
    "c", "N", "eps", "eta1", "eta2", "delta", "strategy", "ell",
    "m", "Z", "trials", "fp", "fn", "fp_ub95", "fn_ub95", "seed",
]


def clopper_pearson_upper(k: int, n: int, level: float = 0.95) -> float:
    """One-sided exact upper confidence bound for a binomial rate."""
    if not 0 <= k <= n or n < 1:
        raise ValueError(f"need 0 <= k <= n and n >= 1, got k={k}, n={n}")
    return 1.0 if k == n else float(beta.ppf(level, k + 1, n - k))


def clopper_pearson_lower(k: int, n: int, level: float = 0.99) -> float:
    """One-sided exact lower confidence bound for a binomial rate."""
    if not 0 <= k <= n or n < 1:
        raise ValueError(f"need 0 <= k <= n and n >= 1, got k={k}, n={n}")
    return 0.0 if k == 0 else float(beta.ppf(1.0 - level, k, n - k + 1))


@dataclass(frozen=True)
class ExperimentConfig:
    goal: SecurityGoal
    knobs: SolverKnobs
    strategy: str
    ell: int
    trials: int
    seed: int
    dist: BiasDistribution | None = field(default=None, compare=False)

    def __post_init__(self):
        if self.trials < 1:
            raise ValueError(f"trials must be >= 1, got {self.trials}")
        if not 1 <= self.ell <= self.goal.c:
            raise ValueError(f"coalition size must lie in [1, c={self.goal.c}], got {self.ell}")
        if self.ell > self.goal.N:
            raise ValueError("coalition larger than the user population")
        parse_strategy(self.strategy)

    @classmethod
    def desk(cls, c: int, N: int, eps: float, strategy: str, ell: int, trials: int, seed: int,
             hhi: bool = False) -> "ExperimentConfig":
        """Equal error split ``eps1 = eps2 = eps / N`` with a knob preset."""
        knobs = SolverKnobs.hhi(c) if hhi else SolverKnobs.proposal(c)
        return cls(SecurityGoal.from_total(c, N, eps), knobs, strategy, ell, trials, seed)

    def distribution(self) -> BiasDistribution:
        return self.dist if self.dist is not None else gl_distribution(self.goal.c)


@dataclass(frozen=True)
class ExperimentResult:
    config: ExperimentConfig
    params: CodeParameters
    trials: int
    fp_count: int
    fn_count: int

    @property
    def fp_rate(self) -> float:
        return self.fp_count / self.trials

    @property
    def fn_rate(self) -> float:
        return self.fn_count / self.trials

    @property
    def fp_ub95(self) -> float:
        return clopper_pearson_upper(self.fp_count, self.trials)

    @property
    def fn_ub95(self) -> float:
        return clopper_pearson_upper(self.fn_count, self.trials)

    def row(self) -> dict:
        cfg, g, k = self.config, self.config.goal, self.config.knobs
        return {
            "c": g.c, "N": g.N, "eps": repr(g.error_bound), "eta1": repr(k.eta1),
            "eta2": repr(k.eta2), "delta": repr(k.delta), "strategy": cfg.strategy,
            "ell": cfg.ell, "m": self.params.m, "Z": repr(self.params.Z),
            "trials": self.trials, "fp": self.fp_count, "fn": self.fn_count,
            "fp_ub95": repr(self.fp_ub95), "fn_ub95": repr(self.fn_ub95), "seed": cfg.seed,
        }


def _one_trial(t: int, cfg: ExperimentConfig, dist, params, table, strategy) -> tuple[bool, bool]:
    tseed = derive_seed(cfg.seed, "trial", t)
    cb = generate(dist, params.m, cfg.goal.N, tseed, c=cfg.goal.c)
    y = collude(strategy, cb.codewords(slice(0, cfg.ell)), stream(tseed, "attack"))
    accused = trace(cb, y, table, params.Z).accused
    fp = any(i >= cfg.ell for i in accused)
    fn = not any(i < cfg.ell for i in accused)
    return fp, fn


def run_trials(cfg: ExperimentConfig, threads: int = 1) -> ExperimentResult:
    dist = cfg.distribution()
    params = derive_params(dist, cfg.goal, cfg.knobs)
    table = exact_score_table(dist)
    strategy = parse_strategy(cfg.strategy)

    def work(t):
        return _one_trial(t, cfg, dist, params, table, strategy)

    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            outcomes = list(pool.map(work, range(cfg.trials)))
    else:
        outcomes = [work(t) for t in range(cfg.trials)]
    fp = sum(o[0] for o in outcomes)
    fn = sum(o[1] for o in outcomes)
    return ExperimentResult(cfg, params, cfg.trials, fp, fn)


def sweep(configs, threads: int = 1) -> str:
    """Run every config and return a CSV report, one row per config."""
    buf = io.StringIO()
    writer = csv.DictWriter(buf, fieldnames=CSV_COLUMNS, lineterminator="\n")
    writer.writeheader()
    for cfg in configs:
        writer.writerow(run_trials(cfg, threads=threads).row())
    return buf.getvalue()
