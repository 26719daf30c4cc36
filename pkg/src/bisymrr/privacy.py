"""Convert between the channel parameter and a differential-privacy budget.

A single randomized bit leaks at most a factor r(a) = max((1-a)/a, a/(1-a))
between any two inputs; over records differing in at most k bits the leakage
compounds to r(a)^k, so the mechanism is eps-differentially private at
eps = k ln r(a).  These conversions are exact in both directions, and the
estimation cost c can therefore be written as a function of the budget alone:
two mechanisms tuned to the same eps always pay the same c, regardless of how
their dial maps to a.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .errors import (
    DegenerateDistributionError,
    InfiniteDisclosureError,
    SingularChannelError,
)


def likelihood_ratio(a: float) -> float:
    """Worst-case single-bit likelihood ratio r(a) = max((1-a)/a, a/(1-a))."""
    if a <= 0.0 or a >= 1.0:
        raise InfiniteDisclosureError(
            f"a = {a} reports some bit deterministically; the likelihood "
            "ratio is unbounded and no finite budget describes it"
        )
    return max((1.0 - a) / a, a / (1.0 - a))


def epsilon_of(a: float, k: int) -> float:
    """Budget spent by one response when inputs differ in at most k bits."""
    if k < 1:
        raise ValueError(f"k must be a positive integer, got {k}")
    return k * math.log(likelihood_ratio(a))


def a_for_epsilon(eps: float, k: int, lying: bool = False) -> float:
    """Channel parameter realizing exactly budget eps over k differing bits.

    Returns the truthful branch a = e^(eps/k) / (1 + e^(eps/k)) > 1/2; both
    branches spend the same budget, and ``lying=True`` selects the mirror
    image 1 - a (respondents inverting more often than not).
    """
    if eps <= 0.0:
        raise ValueError(f"budget must be positive, got {eps}")
    if k < 1:
        raise ValueError(f"k must be a positive integer, got {k}")
    t = math.exp(eps / k)
    a = t / (1.0 + t)
    return 1.0 - a if lying else a


def c_at_alpha(eps: float, k: int, n: int) -> float:
    """Estimation cost constant as a function of the budget alone:
    ((e^(2 eps/k) + 1) / (e^(eps/k) - 1)^2)^n.

    Equals ``trace_constant(a_for_epsilon(eps, k), n)``; the budget pins the
    cost no matter which mechanism dial produced it.
    """
    if k < 1:
        raise ValueError(f"k must be a positive integer, got {k}")
    if n < 0:
        raise ValueError(f"bit width must be non-negative, got {n}")
    if eps <= 0.0:
        raise SingularChannelError(
            f"budget {eps} admits only the uninformative a = 1/2 channel; "
            "the cost constant diverges"
        )
    t = eps / k
    return ((math.exp(2.0 * t) + 1.0) / math.expm1(t) ** 2) ** n


def loss_at_alpha(eps: float, k: int, n: int, s: float) -> float:
    """Sample-size inflation floor imposed by the budget:
    (c_at_alpha - s) / (1 - s)."""
    if s >= 1.0:
        raise DegenerateDistributionError(
            f"sum of squared probabilities is {s}; a point mass leaves "
            "nothing to estimate and the loss is undefined"
        )
    if s <= 0.0:
        raise ValueError(f"sum of squared probabilities must be positive, got {s}")
    return (c_at_alpha(eps, k, n) - s) / (1.0 - s)


@dataclass(frozen=True)
class PrivacyBudget:
    """Budget eps for inputs differing in at most k bits."""

    epsilon: float
    k: int

    def __post_init__(self):
        if self.epsilon <= 0.0:
            raise ValueError(f"budget must be positive, got {self.epsilon}")
        if self.k < 1:
            raise ValueError(f"k must be a positive integer, got {self.k}")


@dataclass(frozen=True)
class PrivacyReport:
    """Both directions of the budget conversion plus the cost it implies."""

    a: float
    ratio: float
    epsilon_per_bit: float
    epsilon_total: float
    c_at_alpha: float
    loss_at_alpha: float


def report_for_a(a: float, k: int, n: int, s: float) -> PrivacyReport:
    """Privacy report starting from the channel parameter."""
    ratio = likelihood_ratio(a)
    per_bit = math.log(ratio)
    total = k * per_bit
    if a == 0.5:
        raise SingularChannelError(
            "a = 1/2 is perfectly private and perfectly useless; the cost "
            "constant diverges"
        )
    return PrivacyReport(
        a=a,
        ratio=ratio,
        epsilon_per_bit=per_bit,
        epsilon_total=total,
        c_at_alpha=c_at_alpha(total, k, n),
        loss_at_alpha=loss_at_alpha(total, k, n, s),
    )


def report_for_epsilon(eps: float, k: int, n: int, s: float) -> PrivacyReport:
    """Privacy report starting from the budget."""
    return report_for_a(a_for_epsilon(eps, k), k, n, s)
