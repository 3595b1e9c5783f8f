"""Conversion between audit instances and the JSON-ready witness inputs."""
from typing import Any, Dict

import numpy as np

from apps.core.exceptions import InvalidSpecError
from apps.scenarios.models import Event, RandomVariable, Scenario, ScenarioSet

LOSS_KEYS = ('X', 'Y', 'Z', 'W')
SCENARIO_KEYS = ('P', 'Q')
ID_KEYS = ('subset', 'superset')
NUMBER_KEYS = ('lam', 'shift', 'scale')


def _scenario_to_dict(scenario: Scenario) -> dict:
    return {'id': scenario.id, 'mass': scenario.mass.tolist()}


def _scenario_from_dict(data) -> Scenario:
    return Scenario(np.asarray(data['mass'], dtype=float), data.get('id'))


def encode_inputs(inputs: Dict[str, Any]) -> Dict[str, Any]:
    encoded = {}
    for key, value in inputs.items():
        if key in LOSS_KEYS:
            encoded[key] = value.values.tolist()
        elif key in SCENARIO_KEYS:
            encoded[key] = _scenario_to_dict(value)
        elif key == 'scenarios':
            encoded[key] = [_scenario_to_dict(scenario) for scenario in value]
        elif key in ID_KEYS:
            encoded[key] = list(value)
        elif key == 'event':
            encoded[key] = value.sorted_atoms()
        elif key in NUMBER_KEYS:
            encoded[key] = float(value)
        else:
            raise InvalidSpecError(f'Unknown witness input {key!r}.')
    return encoded


def decode_inputs(encoded: Dict[str, Any]) -> Dict[str, Any]:
    """Inverse of encode_inputs; validates every object it rebuilds."""
    inputs = {}
    for key, value in encoded.items():
        if key in LOSS_KEYS:
            inputs[key] = RandomVariable(np.asarray(value, dtype=float))
        elif key in SCENARIO_KEYS:
            inputs[key] = _scenario_from_dict(value)
        elif key == 'scenarios':
            inputs[key] = ScenarioSet(tuple(_scenario_from_dict(item) for item in value))
        elif key in ID_KEYS:
            inputs[key] = tuple(value)
        elif key in NUMBER_KEYS:
            inputs[key] = float(value)
        elif key != 'event':
            raise InvalidSpecError(f'Unknown witness input {key!r}.')
    if 'event' in encoded:
        if 'P' not in inputs:
            raise InvalidSpecError('An event input needs the scenario P.')
        inputs['event'] = Event(frozenset(encoded['event']), inputs['P'].n)
    return inputs


def instance_size(inputs: Dict[str, Any]) -> int:
    for key in LOSS_KEYS + SCENARIO_KEYS:
        if key in inputs:
            return inputs[key].n
    return inputs['scenarios'].n
