"""Count data model and the estimators every uplift test consumes.

A campaign comparison consists of two subgroups (two campaigns, or two
segments of one campaign), each with a target group that was contacted and a
control group that was not::

              target              control
    sub 1     a_T1 of n1          a_C1 of k1
    sub 2     a_T2 of n2          a_C2 of k2

All quantities here are plain floats computed from whole-number counts.
"""

from __future__ import annotations

import operator
from dataclasses import dataclass, field

from .errors import DegenerateGroup, ValidationError


def _as_count(value, name: str) -> int:
    if isinstance(value, bool):
        raise ValidationError(f"{name} must be a whole number, got {value!r}")
    if isinstance(value, float):
        if not value.is_integer():
            raise ValidationError(f"{name} must be a whole number, got {value!r}")
        value = int(value)
    try:
        value = operator.index(value)
    except TypeError:
        raise ValidationError(f"{name} must be a whole number, got {value!r}") from None
    if value < 0:
        raise ValidationError(f"{name} must be non-negative, got {value}")
    return value


@dataclass(frozen=True)
class SubgroupCounts:
    """Target/control sizes and response counts of one subgroup."""

    n: int
    k: int
    a_T: int
    a_C: int

    def __post_init__(self):
        for name in ("n", "k", "a_T", "a_C"):
            object.__setattr__(self, name, _as_count(getattr(self, name), name))
        if self.a_T > self.n:
            raise ValidationError(f"target responders {self.a_T} exceed target size {self.n}")
        if self.a_C > self.k:
            raise ValidationError(f"control responders {self.a_C} exceed control size {self.k}")

    @property
    def target_control_rate(self) -> float:
        if self.k == 0:
            raise DegenerateGroup("control group is empty")
        return self.n / self.k

    def scaled(self, m: int) -> SubgroupCounts:
        return SubgroupCounts(self.n * m, self.k * m, self.a_T * m, self.a_C * m)


@dataclass(frozen=True)
class CampaignPair:
    """Two subgroups to be compared, with their unified totals."""

    sub1: SubgroupCounts
    sub2: SubgroupCounts
    labels: tuple[str, str] = field(default=("1", "2"), compare=False)

    @classmethod
    def from_counts(cls, n1, a_T1, k1, a_C1, n2, a_T2, k2, a_C2, labels=("1", "2")) -> CampaignPair:
        """Build a pair from the flat ``n1,aT1,k1,aC1,n2,aT2,k2,aC2`` ordering."""
        return cls(SubgroupCounts(n1, k1, a_T1, a_C1), SubgroupCounts(n2, k2, a_T2, a_C2), tuple(labels))

    @property
    def n(self) -> int:
        return self.sub1.n + self.sub2.n

    @property
    def k(self) -> int:
        return self.sub1.k + self.sub2.k

    @property
    def a_T(self) -> int:
        return self.sub1.a_T + self.sub2.a_T

    @property
    def a_C(self) -> int:
        return self.sub1.a_C + self.sub2.a_C

    def swapped(self) -> CampaignPair:
        return CampaignPair(self.sub2, self.sub1, (self.labels[1], self.labels[0]))

    def scaled(self, m: int) -> CampaignPair:
        return CampaignPair(self.sub1.scaled(m), self.sub2.scaled(m), self.labels)


@dataclass(frozen=True)
class DerivedEstimates:
    """Estimated probabilities, uplift-based responses and norming terms.

    ``pC`` weights the subgroup control rates by the *target* sizes unless the
    estimates were derived with ``natural_control=True``, in which case it is
    the pooled control rate ``a_C / k``.
    """

    pT1: float
    pT2: float
    pC1: float
    pC2: float
    pT: float
    pC: float
    l1: float
    l2: float
    e1: float
    e2: float
    v1: float
    v2: float
    w_n: float
    f_n: float

    @property
    def degenerate(self) -> bool:
        """True if any subgroup probability estimate is exactly 0 or 1."""
        return any(p in (0.0, 1.0) for p in (self.pT1, self.pT2, self.pC1, self.pC2))

    @property
    def l_total(self) -> float:
        """``l1 + l2``; a convenience only, there is no overall ``l`` without index."""
        return self.l1 + self.l2


def response_rate(responses: int, persons: int) -> float:
    if persons == 0:
        raise DegenerateGroup("response rate of an empty group")
    return responses / persons


def uplift(sub: SubgroupCounts) -> float:
    """Target response rate minus control response rate."""
    return response_rate(sub.a_T, sub.n) - response_rate(sub.a_C, sub.k)


def uplift_based_responses(sub: SubgroupCounts) -> float:
    """Target responses minus control responses scaled to the target size."""
    if sub.k == 0:
        raise DegenerateGroup("control group is empty")
    return sub.a_T - sub.n / sub.k * sub.a_C


def _check_sizes(pair: CampaignPair) -> None:
    for i, sub in enumerate((pair.sub1, pair.sub2), start=1):
        if sub.n == 0:
            raise DegenerateGroup(f"target group of subgroup {i} is empty")
        if sub.k == 0:
            raise DegenerateGroup(f"control group of subgroup {i} is empty")


def derive_estimates(pair: CampaignPair, *, natural_control: bool = False) -> DerivedEstimates:
    """Compute every estimate the net chi-square family needs.

    With ``natural_control=True`` the unified control probability is the
    pooled ``a_C / k`` instead of the target-weighted average; this only makes
    sense when both subgroups share (roughly) the same target-control rate.
    """
    _check_sizes(pair)
    s1, s2 = pair.sub1, pair.sub2
    n = pair.n
    pT1, pT2 = s1.a_T / s1.n, s2.a_T / s2.n
    pC1, pC2 = s1.a_C / s1.k, s2.a_C / s2.k
    pT = pair.a_T / n
    if natural_control:
        pC = pair.a_C / pair.k
    else:
        pC = s1.n / n * pC1 + s2.n / n * pC2

    l1 = uplift_based_responses(s1)
    l2 = uplift_based_responses(s2)
    e1 = s1.n * (pT - pC)
    e2 = s2.n * (pT - pC)

    # per-target-person variance of l_i, i.e. v_i / n_i
    g1 = pT1 * (1 - pT1) + s1.n / s1.k * pC1 * (1 - pC1)
    g2 = pT2 * (1 - pT2) + s2.n / s2.k * pC2 * (1 - pC2)
    v1 = s1.n * g1
    v2 = s2.n * g2

    w1, w2 = s2.n / n, s1.n / n
    w_n = w1 * g1 + w2 * g2
    f_n = (w1 / g1 if g1 > 0 else float("inf")) + (w2 / g2 if g2 > 0 else float("inf"))

    return DerivedEstimates(
        pT1=pT1, pT2=pT2, pC1=pC1, pC2=pC2, pT=pT, pC=pC,
        l1=l1, l2=l2, e1=e1, e2=e2, v1=v1, v2=v2, w_n=w_n, f_n=f_n,
    )
