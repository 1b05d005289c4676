"""Tests for equal uplift in two subgroups, plus the classical 2x2 test.

Every statistic is referred to the chi-square distribution with one degree of
freedom. For ``t_net_sq`` and the contrast test this is the normal
approximation of a t distribution with ``n + k - 4`` degrees of freedom, which
is harmless at campaign sizes.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field

from .domain import CampaignPair, DerivedEstimates, derive_estimates
from .errors import DegenerateGroup, InvalidArgument, VarianceDegenerate
from .numerics import chi_sq1_sf


class Method(str, enum.Enum):
    NET_CHI_SQ = "netchisq"
    NET_CHI_SQ_1 = "netchisq1"
    NET_CHI_SQ_2 = "netchisq2"
    T_NET_SQ = "tnetsq"
    CONTRAST = "contrast"
    CLASSICAL_CHI_SQ = "classical"

    def __str__(self):
        return self.value


@dataclass(frozen=True)
class TestOutcome:
    method: Method
    statistic: float
    p_value: float
    dof: int = 1
    applicable: bool = True
    notes: tuple[str, ...] = ()

    __test__ = False  # keep pytest from collecting this class

    def significant(self, alpha: float = 0.05) -> bool:
        return self.p_value < alpha


@dataclass(frozen=True)
class ApplicabilityPolicy:
    """When the variants that assume equal target-control rates may be used.

    The rates ``n1/k1`` and ``n2/k2`` count as equal if their difference,
    relative to the larger one, is at most ``max_rate_mismatch``.
    """

    max_rate_mismatch: float = 0.05

    def __post_init__(self):
        if not self.max_rate_mismatch > 0:
            raise InvalidArgument("max_rate_mismatch must be positive")

    def rate_mismatch(self, pair: CampaignPair) -> float:
        r1 = pair.sub1.target_control_rate
        r2 = pair.sub2.target_control_rate
        return abs(r1 - r2) / max(r1, r2)

    def allows(self, pair: CampaignPair) -> bool:
        return self.rate_mismatch(pair) <= self.max_rate_mismatch


DEFAULT_POLICY = ApplicabilityPolicy()


def _outcome(method, statistic, applicable=True, notes=()) -> TestOutcome:
    return TestOutcome(method, statistic, chi_sq1_sf(statistic), 1, applicable, tuple(notes))


def _strict_estimates(pair: CampaignPair, natural_control: bool) -> DerivedEstimates:
    est = derive_estimates(pair, natural_control=natural_control)
    if est.degenerate:
        raise VarianceDegenerate(
            "an estimated response probability is 0 or 1; "
            "the chi-square reference distribution does not apply"
        )
    return est


def _normed_statistic(est: DerivedEstimates) -> float:
    d1 = est.l1 - est.e1
    d2 = est.l2 - est.e2
    return (d1 * d1 / est.v1 + d2 * d2 / est.v2) / (est.w_n * est.f_n)


def _rate_notes(pair: CampaignPair, policy: ApplicabilityPolicy) -> tuple[bool, list[str]]:
    ok = policy.allows(pair)
    notes = []
    if not ok:
        r1 = pair.sub1.target_control_rate
        r2 = pair.sub2.target_control_rate
        notes.append(
            f"target-control rates differ ({r1:.2f} vs {r2:.2f}, "
            f"mismatch {policy.rate_mismatch(pair):.1%} > {policy.max_rate_mismatch:.1%}); "
            "this variant assumes equal rates and its p-value is not reliable"
        )
    return ok, notes


def net_chi_sq(pair: CampaignPair) -> TestOutcome:
    """Net chi-square test of ``uplift_1 == uplift_2``.

    Valid for any pair of subgroups, whatever their target-control rates.
    Raises :class:`VarianceDegenerate` if any estimated probability is 0 or 1.
    """
    est = _strict_estimates(pair, natural_control=False)
    return _outcome(Method.NET_CHI_SQ, _normed_statistic(est))


def net_chi_sq_v1(pair: CampaignPair, policy: ApplicabilityPolicy = DEFAULT_POLICY) -> TestOutcome:
    """Net chi-square with the pooled control rate ``a_C / k``.

    Only meant for two segments of one campaign (equal target-control rates).
    When the rates differ the outcome is still computed but flagged as
    inapplicable.
    """
    est = _strict_estimates(pair, natural_control=True)
    ok, notes = _rate_notes(pair, policy)
    return _outcome(Method.NET_CHI_SQ_1, _normed_statistic(est), ok, notes)


def net_chi_sq_v2(pair: CampaignPair, policy: ApplicabilityPolicy = DEFAULT_POLICY) -> TestOutcome:
    """Unnormed net chi-square with whole-sample variance estimates.

    Its null hypothesis additionally requires equal control response rates in
    both subgroups; that is recorded in the notes, not enforced.
    """
    est = _strict_estimates(pair, natural_control=True)
    pT, pC = est.pT, est.pC
    s1, s2 = pair.sub1, pair.sub2
    v1 = s1.n * pT * (1 - pT) + s1.n ** 2 / s1.k * pC * (1 - pC)
    v2 = s2.n * pT * (1 - pT) + s2.n ** 2 / s2.k * pC * (1 - pC)
    d1 = est.l1 - est.e1
    d2 = est.l2 - est.e2
    statistic = d1 * d1 / v1 + d2 * d2 / v2
    ok, notes = _rate_notes(pair, policy)
    notes.insert(0, "null hypothesis includes equal control response rates (pC1 == pC2)")
    return _outcome(Method.NET_CHI_SQ_2, statistic, ok, notes)


def _linear_model_terms(pair: CampaignPair):
    s1, s2 = pair.sub1, pair.sub2
    if pair.n + pair.k <= 4:
        raise DegenerateGroup("need more than four observations in total")
    if 0 in (s1.n, s2.n, s1.k, s2.k):
        raise DegenerateGroup("every target and control group must be nonempty")
    # (cell size, cell mean) in the order T1, C1, T2, C2
    cells = [
        (s1.n, s1.a_T / s1.n),
        (s1.k, s1.a_C / s1.k),
        (s2.n, s2.a_T / s2.n),
        (s2.k, s2.a_C / s2.k),
    ]
    # within-cell sum of squares of 0/1 responses is size * p * (1 - p)
    sse = sum(size * p * (1 - p) for size, p in cells)
    if sse == 0:
        raise VarianceDegenerate("error sum of squares is zero")
    return cells, sse


def t_net_sq(pair: CampaignPair) -> TestOutcome:
    """Squared t statistic for equal uplifts from the linear-model approach."""
    cells, sse = _linear_model_terms(pair)
    (n1, pT1), (k1, pC1), (n2, pT2), (k2, pC2) = cells
    c44 = 1 / n1 + 1 / n2 + 1 / k1 + 1 / k2
    diff = pT1 - pC1 - (pT2 - pC2)
    dof_error = pair.n + pair.k - 4
    return _outcome(Method.T_NET_SQ, dof_error * diff * diff / (c44 * sse))


CONTRAST_WEIGHTS = (1, -1, -1, 1)


def contrast_test(pair: CampaignPair, weights=CONTRAST_WEIGHTS) -> TestOutcome:
    """Two-factor cell-means contrast test, by default the interaction contrast.

    The squared standardized contrast ``(sum c_j m_j)^2 / (MSE * sum c_j^2 / N_j)``
    with the pooled error mean square of the one-way layout. For the default
    weights this is algebraically the same as :func:`t_net_sq`.
    """
    if len(weights) != 4:
        raise InvalidArgument("a contrast needs four weights (T1, C1, T2, C2)")
    if sum(weights) != 0:
        raise InvalidArgument("contrast weights must sum to zero")
    cells, sse = _linear_model_terms(pair)
    mse = sse / (pair.n + pair.k - 4)
    estimate = sum(c * p for c, (_, p) in zip(weights, cells))
    scale = sum(c * c / size for c, (size, _) in zip(weights, cells))
    return _outcome(Method.CONTRAST, estimate * estimate / (mse * scale))


def classical_chi_sq(target: tuple[int, int], control: tuple[int, int]) -> TestOutcome:
    """Pearson chi-square homogeneity test of one campaign's target vs control.

    ``target`` and ``control`` are ``(responders, persons)``. Tests whether the
    uplift differs from zero. No continuity correction.
    """
    (a_T, n), (a_C, k) = target, control
    if n <= 0 or k <= 0:
        raise DegenerateGroup("target and control groups must be nonempty")
    if not (0 <= a_T <= n and 0 <= a_C <= k):
        raise InvalidArgument("responders must lie between 0 and the group size")
    total = n + k
    responders = a_T + a_C
    observed = (
        (a_T, n - a_T),
        (a_C, k - a_C),
    )
    col_totals = (responders, total - responders)
    statistic = 0.0
    for row_total, row in zip((n, k), observed):
        for col_total, o in zip(col_totals, row):
            e = row_total * col_total / total
            if e <= 0:
                raise DegenerateGroup("an expected cell count is zero")
            statistic += (o - e) ** 2 / e
    notes = []
    if a_T in (0, n) or a_C in (0, k):
        notes.append("an observed response rate is 0 or 1; the approximation may be poor")
    return _outcome(Method.CLASSICAL_CHI_SQ, statistic, True, notes)


def run_method(method: Method, pair: CampaignPair, policy: ApplicabilityPolicy = DEFAULT_POLICY) -> TestOutcome:
    """Dispatch one of the five uplift-comparison methods by identifier."""
    method = Method(method)
    if method is Method.NET_CHI_SQ:
        return net_chi_sq(pair)
    if method is Method.NET_CHI_SQ_1:
        return net_chi_sq_v1(pair, policy)
    if method is Method.NET_CHI_SQ_2:
        return net_chi_sq_v2(pair, policy)
    if method is Method.T_NET_SQ:
        return t_net_sq(pair)
    if method is Method.CONTRAST:
        return contrast_test(pair)
    raise InvalidArgument(f"{method} compares a single campaign; call classical_chi_sq directly")
