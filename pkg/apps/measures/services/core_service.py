"""Service for evaluating single-scenario cores."""
import logging

from apps.scenarios.models import RandomVariable, Scenario, common_space
from apps.measures.services.cores import get_core

logger = logging.getLogger(__name__)


class CoreService:
    @staticmethod
    def evaluate_core(spec, X: RandomVariable, P: Scenario) -> float:
        """Psi(X|P) for a CoreSpec, a BaseCore or a plain callable."""
        common_space(X, P)
        return get_core(spec).evaluate(X, P)

    @staticmethod
    def evaluate_per_scenario(spec, X: RandomVariable, scenarios) -> dict:
        """Core value under every scenario, keyed by scenario id."""
        core = get_core(spec)
        return {P.id: core.evaluate(X, P) for P in scenarios}
