"""Significance tests for comparing the uplift of two marketing campaigns."""

__version__ = "0.1.0"

from .domain import (
    CampaignPair,
    DerivedEstimates,
    SubgroupCounts,
    derive_estimates,
    response_rate,
    uplift,
    uplift_based_responses,
)
from .errors import (
    DegenerateGroup,
    InvalidArgument,
    ParseError,
    SchemaError,
    UpliftError,
    ValidationError,
    VarianceDegenerate,
)
from .numerics import Rng, chi_sq1_sf, sample_binomial, std_normal_cdf
from .significance import (
    ApplicabilityPolicy,
    Method,
    TestOutcome,
    classical_chi_sq,
    contrast_test,
    net_chi_sq,
    net_chi_sq_v1,
    net_chi_sq_v2,
    t_net_sq,
)
from .simulation import (
    ProbabilityPlotTable,
    ScenarioParams,
    builtin_scenarios,
    run_replicate,
    run_study,
    summarize,
)
