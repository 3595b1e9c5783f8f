"""
Primitive single-scenario formulas: VaR, ES, Choquet integral and KL divergence.

Everything is computed from the law of X under P, so two variables with the
same law get bit-identical values.
"""
import numpy as np
from scipy.special import logsumexp, rel_entr

from apps.core.exceptions import BadAlphaError
from apps.scenarios.models import DiscreteDistribution, RandomVariable, Scenario, common_space
from apps.scenarios.services import SpaceService


def expectation(X: RandomVariable, P: Scenario) -> float:
    common_space(X, P)
    if X.is_constant:
        return float(X.values[0])
    return P.expectation(X.values)


def var(X: RandomVariable, P: Scenario, alpha: float) -> float:
    """Left alpha-quantile of X under P."""
    if not 0.0 < alpha <= 1.0:
        raise BadAlphaError(f'VaR level {alpha} is outside (0, 1].', alpha=alpha)
    return SpaceService.quantile(SpaceService.distribution_of(X, P), alpha)


def es_of_distribution(F: DiscreteDistribution, alpha: float) -> float:
    """Exact tail average of the piecewise-constant quantile function above alpha."""
    if not 0.0 < alpha < 1.0:
        raise BadAlphaError(f'ES level {alpha} is outside (0, 1).', alpha=alpha)
    if F.support.size == 1:
        return float(F.support[0])
    upper = F.cumulative
    lower = np.concatenate([[0.0], upper[:-1]])
    weights = np.maximum(upper, alpha) - np.maximum(lower, alpha)
    return float(np.dot(F.support, weights) / (1.0 - alpha))


def es(X: RandomVariable, P: Scenario, alpha: float) -> float:
    if not 0.0 < alpha < 1.0:
        raise BadAlphaError(f'ES level {alpha} is outside (0, 1).', alpha=alpha)
    return es_of_distribution(SpaceService.distribution_of(X, P), alpha)


def choquet_of_distribution(F: DiscreteDistribution, h) -> float:
    """Level-set sum over distinct values, largest first."""
    values = F.support[::-1]
    survival = np.cumsum(F.mass[::-1])
    survival[-1] = 1.0
    distorted = h(survival)
    increments = np.diff(np.concatenate([[0.0], np.atleast_1d(distorted)]))
    return float(np.dot(values, increments))


def choquet(X: RandomVariable, P: Scenario, h) -> float:
    """Choquet integral of X with respect to h o P."""
    return choquet_of_distribution(SpaceService.distribution_of(X, P), h)


def choquet_rearrangement(X: RandomVariable, P: Scenario, h) -> float:
    """sum_i x_(i) [h(S_i) - h(S_{i-1})] over atoms sorted by decreasing loss."""
    common_space(X, P)
    order = np.argsort(-X.values, kind='stable')
    survival = np.cumsum(P.mass[order])
    survival[-1] = 1.0
    increments = np.diff(np.concatenate([[0.0], np.atleast_1d(h(survival))]))
    return float(np.dot(X.values[order], increments))


def choquet_integral_oracle(X: RandomVariable, P: Scenario, h, step: float = 1e-4) -> float:
    """
    Two-sided Choquet integral by a midpoint Riemann sum.

    int_0^inf h(P(X > x)) dx + int_-inf^0 [h(P(X > x)) - 1] dx, both pieces
    truncated to the range of X. Coarse: used only as an independent check.
    """
    F = SpaceService.distribution_of(X, P)
    low = min(float(F.support[0]), 0.0)
    high = max(float(F.support[-1]), 0.0)
    if high == low:
        return 0.0
    cells = int(np.ceil((high - low) / step))
    width = (high - low) / cells
    midpoints = low + width * (np.arange(cells) + 0.5)
    below = np.concatenate([[0.0], F.cumulative])
    survival = np.clip(1.0 - below[np.searchsorted(F.support, midpoints, side='right')], 0.0, 1.0)
    integrand = np.asarray(h(survival), dtype=float) - (midpoints < 0)
    return float(integrand.sum() * width)


def kl_divergence(P: Scenario, Q: Scenario) -> float:
    """sum_i P_i log(P_i / Q_i); +inf when P charges an atom Q does not."""
    common_space(P, Q)
    return float(np.sum(rel_entr(P.mass, Q.mass)))


def kl_robust_expectation(X: RandomVariable, Q: Scenario) -> float:
    """min over P of E^P[X] + KL(P||Q), which is -log E^Q[exp(-X)]."""
    common_space(X, Q)
    with np.errstate(divide='ignore'):
        log_weights = np.log(Q.mass) - X.values
    return -float(logsumexp(log_weights))
