"""Monte-Carlo study of type I and type II errors of the five uplift tests.

For a parameter row, each replicate draws the four response counts from
their binomial distributions, computes all five p-values and records them.
The table is then sorted by the net chi-square p-value so each column can be
plotted against ``i / b`` (a probability plot: calibrated tests scatter
around the diagonal).

Replicate ``i`` always uses the random stream ``Rng(seed).child(i)``, so a
study gives identical results whether it runs sequentially or in parallel.
"""

from __future__ import annotations

import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass

import numpy as np

from .domain import CampaignPair, SubgroupCounts
from .errors import InvalidArgument, UpliftError
from .numerics import Rng, sample_binomial
from .significance import Method, contrast_test, net_chi_sq, net_chi_sq_v1, net_chi_sq_v2, t_net_sq

# column order of the probability-plot table
METHODS = (
    Method.NET_CHI_SQ,
    Method.NET_CHI_SQ_1,
    Method.NET_CHI_SQ_2,
    Method.CONTRAST,
    Method.T_NET_SQ,
)
_RUNNERS = (net_chi_sq, net_chi_sq_v1, net_chi_sq_v2, contrast_test, t_net_sq)

PLOT_HEADER = ("rank", "frac", "p_netchisq", "p_netchisq1", "p_netchisq2", "p_contrast", "p_tnetsq")


@dataclass(frozen=True)
class ScenarioParams:
    n1: int
    n2: int
    k1: int
    k2: int
    pT1: float
    pT2: float
    pC1: float
    pC2: float
    label: str = "custom"

    def __post_init__(self):
        for name in ("n1", "n2", "k1", "k2"):
            value = getattr(self, name)
            if isinstance(value, bool) or int(value) != value or value < 1:
                raise InvalidArgument(f"{name} must be a whole number >= 1, got {value!r}")
            object.__setattr__(self, name, int(value))
        for name in ("pT1", "pT2", "pC1", "pC2"):
            value = float(getattr(self, name))
            if not 0.0 < value < 1.0:
                raise InvalidArgument(f"{name} must lie strictly in (0, 1), got {value!r}")
            object.__setattr__(self, name, value)

    @property
    def uplift_difference(self) -> float:
        return (self.pT1 - self.pC1) - (self.pT2 - self.pC2)

    def as_row(self) -> tuple:
        return (self.n1, self.n2, self.k1, self.k2, self.pT1, self.pT2, self.pC1, self.pC2)


_TABLE_ONE = (
    ("fig1", 50_000, 50_000, 5_000, 5_000, 0.10, 0.10, 0.09, 0.09),
    ("fig2", 50_000, 50_000, 5_000, 5_000, 0.05, 0.51, 0.04, 0.50),
    ("fig3", 100_000, 20_000, 10_000, 2_000, 0.05, 0.51, 0.04, 0.50),
    ("fig4", 100_000, 20_000, 10_000, 2_000, 0.51, 0.05, 0.50, 0.04),
    ("fig5", 50_000, 50_000, 5_000, 5_000, 0.11, 0.10, 0.09, 0.09),
    ("fig6", 50_000, 50_000, 5_000, 5_000, 0.06, 0.51, 0.04, 0.50),
    ("fig7", 50_000, 50_000, 5_000, 10_000, 0.05, 0.52, 0.04, 0.50),
)


def builtin_scenarios() -> list[ScenarioParams]:
    """The seven parameter rows of the reference simulation study.

    fig1-fig4 have a 1% uplift in both subgroups (type I error checks);
    fig5-fig7 have uplifts of 2% and 1% (type II error checks).
    """
    return [ScenarioParams(*row[1:], label=row[0]) for row in _TABLE_ONE]


def scenario_by_label(label: str) -> ScenarioParams:
    for sc in builtin_scenarios():
        if sc.label == label:
            return sc
    raise InvalidArgument(f"unknown scenario {label!r}")


def draw_pair(rng: Rng, sc: ScenarioParams) -> CampaignPair:
    a_T1 = sample_binomial(rng, sc.n1, sc.pT1)
    a_T2 = sample_binomial(rng, sc.n2, sc.pT2)
    a_C1 = sample_binomial(rng, sc.k1, sc.pC1)
    a_C2 = sample_binomial(rng, sc.k2, sc.pC2)
    return CampaignPair(SubgroupCounts(sc.n1, sc.k1, a_T1, a_C1), SubgroupCounts(sc.n2, sc.k2, a_T2, a_C2))


def p_values(pair: CampaignPair) -> tuple[float, ...]:
    """The five p-values in table column order; NaN where a test is degenerate."""
    out = []
    for runner in _RUNNERS:
        try:
            out.append(runner(pair).p_value)
        except UpliftError:
            out.append(math.nan)
    return tuple(out)


def run_replicate(rng: Rng, sc: ScenarioParams) -> tuple[float, ...]:
    return p_values(draw_pair(rng, sc))


@dataclass(frozen=True)
class ProbabilityPlotTable:
    """Replicate p-values sorted by the net chi-square p-value.

    ``pvalues`` has shape ``(b, 5)`` with columns in :data:`METHODS` order;
    NaN marks a replicate where that test could not be computed.
    """

    pvalues: np.ndarray
    seed: int
    label: str = "custom"

    @property
    def b(self) -> int:
        return self.pvalues.shape[0]

    @property
    def rows(self) -> list[tuple]:
        b = self.b
        return [(i + 1, (i + 1) / b, *map(float, self.pvalues[i])) for i in range(b)]

    def column(self, method: Method) -> np.ndarray:
        return self.pvalues[:, METHODS.index(Method(method))]


def _replicate_block(sc: ScenarioParams, seed: int, start: int, stop: int) -> list[tuple[float, ...]]:
    master = Rng(seed)
    return [run_replicate(master.child(i), sc) for i in range(start, stop)]


def run_study(sc: ScenarioParams, b: int = 100, seed: int = 0, workers: int | None = None) -> ProbabilityPlotTable:
    """Run ``b`` replicates and return the sorted probability-plot table.

    ``workers > 1`` spreads replicates over processes; the result is
    bit-identical to the sequential run.
    """
    if b < 1:
        raise InvalidArgument("need at least one replicate")
    Rng(seed)  # validate before forking
    if workers and workers > 1 and b > 1:
        edges = np.linspace(0, b, min(workers, b) + 1).astype(int)
        with ProcessPoolExecutor(max_workers=workers) as pool:
            blocks = pool.map(_replicate_block, *zip(*[(sc, seed, lo, hi) for lo, hi in zip(edges, edges[1:])]))
            results = [row for block in blocks for row in block]
    else:
        results = _replicate_block(sc, seed, 0, b)
    pv = np.array(results, dtype=float).reshape(b, len(METHODS))
    # stable sort; NaN (degenerate) rows go last
    order = np.argsort(pv[:, 0], kind="stable")
    return ProbabilityPlotTable(pv[order], seed, sc.label)


@dataclass(frozen=True)
class MethodSummary:
    method: Method
    rejection_rate: float
    ks_distance: float
    valid: int
    missing: int


def ks_distance_uniform(sample) -> float:
    """Sup-distance between the empirical CDF of ``sample`` and Uniform(0, 1)."""
    x = np.sort(np.asarray(sample, dtype=float))
    m = x.size
    if m == 0:
        return math.nan
    ranks = np.arange(1, m + 1)
    return float(max(np.max(ranks / m - x), np.max(x - (ranks - 1) / m)))


def ks_critical_value(m: int, level: float = 0.01) -> float:
    """Large-sample critical distance of the one-sample KS test."""
    coefficients = {0.10: 1.22, 0.05: 1.36, 0.01: 1.63}
    if level not in coefficients:
        raise InvalidArgument(f"no tabulated coefficient for level {level}")
    return coefficients[level] / math.sqrt(m)


def summarize(table: ProbabilityPlotTable, alpha: float = 0.05) -> dict[Method, MethodSummary]:
    """Per-method rejection rate at ``alpha`` and KS distance from uniformity.

    Missing (NaN) p-values are excluded from both numbers and counted.
    """
    if not 0 < alpha < 1:
        raise InvalidArgument("alpha must lie in (0, 1)")
    if table.b == 0:
        raise InvalidArgument("empty table")
    out = {}
    for j, method in enumerate(METHODS):
        col = table.pvalues[:, j]
        ok = col[~np.isnan(col)]
        rate = float(np.mean(ok < alpha)) if ok.size else math.nan
        out[method] = MethodSummary(method, rate, ks_distance_uniform(ok), int(ok.size), int(col.size - ok.size))
    return out
