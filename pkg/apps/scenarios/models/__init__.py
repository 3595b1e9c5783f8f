"""Domain types of the finite outcome space."""
from .outcome_space import OutcomeSpace, common_space, frozen_vector
from .scenario import Scenario, ScenarioSet
from .random_variable import RandomVariable
from .distribution import DiscreteDistribution
from .event import Event

__all__ = [
    'OutcomeSpace',
    'common_space',
    'frozen_vector',
    'Scenario',
    'ScenarioSet',
    'RandomVariable',
    'DiscreteDistribution',
    'Event',
]
