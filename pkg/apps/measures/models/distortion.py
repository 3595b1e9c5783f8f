from dataclasses import dataclass
from functools import cached_property
from typing import Optional

import numpy as np
from django.db import models

from apps.core.conf import risk_setting
from apps.core.exceptions import BadAlphaError, InvalidSpecError
from apps.scenarios.models import frozen_vector


class DistortionKind(models.TextChoices):
    IDENTITY = 'identity', 'Identity'
    POWER = 'power', 'Power'
    DUAL_POWER = 'dual_power', 'Dual power'
    ES_TAIL = 'es_tail', 'Expected shortfall tail'
    GRID = 'grid', 'User grid'


@dataclass(frozen=True, eq=False)
class Distortion:
    """
    Distortion function h on [0, 1] with h(0) = 0 and h(1) = 1.

    Built-in kinds are analytic; GRID interpolates linearly between the given
    points. Monotonicity is enforced at construction, concavity is a flag
    certified on a grid of step CONCAVITY_GRID_STEP plus the user points.
    """
    kind: str
    param: Optional[float] = None
    t_values: Optional[np.ndarray] = None
    h_values: Optional[np.ndarray] = None

    def __post_init__(self):
        if self.kind not in DistortionKind.values:
            raise InvalidSpecError(f'Unknown distortion kind {self.kind!r}.')
        if self.kind == DistortionKind.POWER and not (self.param is not None and self.param > 0):
            raise InvalidSpecError('Power distortion needs an exponent p > 0.')
        if self.kind == DistortionKind.DUAL_POWER and not (self.param is not None and self.param > 0):
            raise InvalidSpecError('Dual power distortion needs an exponent k > 0.')
        if self.kind == DistortionKind.ES_TAIL and not (self.param is not None and 0 <= self.param < 1):
            raise BadAlphaError(f'Tail distortion needs alpha in [0, 1), got {self.param}.')
        if self.kind == DistortionKind.GRID:
            self._validate_grid()
        self._validate_shape()

    def _validate_grid(self):
        if self.t_values is None or self.h_values is None:
            raise InvalidSpecError('Grid distortion needs t and h values.')
        t_values = frozen_vector(self.t_values)
        h_values = frozen_vector(self.h_values)
        if t_values.size < 2 or t_values.size != h_values.size:
            raise InvalidSpecError('Grid distortion needs at least two matching t and h values.')
        if t_values[0] != 0.0 or t_values[-1] != 1.0 or np.any(np.diff(t_values) <= 0):
            raise InvalidSpecError('Grid t values must increase strictly from 0 to 1.')
        object.__setattr__(self, 't_values', t_values)
        object.__setattr__(self, 'h_values', h_values)

    def _validate_shape(self):
        tol = risk_setting('MASS_TOLERANCE')
        ends = self(np.array([0.0, 1.0]))
        if abs(ends[0]) > tol or abs(ends[1] - 1.0) > tol:
            raise InvalidSpecError(f'Distortion must satisfy h(0)=0 and h(1)=1, got {ends.tolist()}.')
        if np.any(np.diff(self(self.evaluation_grid)) < -tol):
            raise InvalidSpecError('Distortion must be nondecreasing.')

    @classmethod
    def identity(cls) -> 'Distortion':
        return cls(DistortionKind.IDENTITY)

    @classmethod
    def power(cls, p: float) -> 'Distortion':
        return cls(DistortionKind.POWER, float(p))

    @classmethod
    def dual_power(cls, k: float) -> 'Distortion':
        return cls(DistortionKind.DUAL_POWER, float(k))

    @classmethod
    def es_tail(cls, alpha: float) -> 'Distortion':
        return cls(DistortionKind.ES_TAIL, float(alpha))

    @classmethod
    def grid(cls, t_values, h_values) -> 'Distortion':
        return cls(DistortionKind.GRID, None, t_values, h_values)

    def __call__(self, t):
        t = np.clip(np.asarray(t, dtype=float), 0.0, 1.0)
        if self.kind == DistortionKind.IDENTITY:
            result = t
        elif self.kind == DistortionKind.POWER:
            result = np.power(t, self.param)
        elif self.kind == DistortionKind.DUAL_POWER:
            result = 1.0 - np.power(1.0 - t, self.param)
        elif self.kind == DistortionKind.ES_TAIL:
            result = np.minimum(t / (1.0 - self.param), 1.0)
        else:
            result = np.interp(t, self.t_values, self.h_values)
        return float(result) if result.ndim == 0 else result

    @property
    def evaluation_grid(self) -> np.ndarray:
        step = risk_setting('CONCAVITY_GRID_STEP')
        grid = np.linspace(0.0, 1.0, int(round(1.0 / step)) + 1)
        if self.kind == DistortionKind.GRID:
            grid = np.union1d(grid, self.t_values)
        return grid

    @cached_property
    def is_concave(self) -> bool:
        """Secant slopes on the evaluation grid are nonincreasing."""
        grid = self.evaluation_grid
        slopes = np.diff(self(grid)) / np.diff(grid)
        scale = max(1.0, float(np.max(np.abs(slopes))))
        return bool(np.all(np.diff(slopes) <= 1e-9 * scale))

    @property
    def label(self) -> str:
        if self.kind == DistortionKind.GRID:
            return f'grid({self.t_values.size} points)'
        if self.param is None:
            return self.kind
        return f'{self.kind}({self.param:g})'

    def __repr__(self):
        return f'Distortion({self.label})'
