"""Portfolio files as domain objects."""
from .portfolio import FORMAT_VERSION, Portfolio, ScenarioEntry

__all__ = ['FORMAT_VERSION', 'Portfolio', 'ScenarioEntry']
