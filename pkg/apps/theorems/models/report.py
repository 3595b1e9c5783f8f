from dataclasses import dataclass, field
from typing import Any, Dict, Optional

from django.db import models


class TheoremStatus(models.TextChoices):
    PASS = 'pass', 'Pass'
    FAIL = 'fail', 'Fail'
    CONTRADICTION = 'theorem_contradiction', 'Theorem contradiction'


class CheckStatus(models.TextChoices):
    PASS = 'pass', 'Pass'
    FAIL = 'fail', 'Fail'
    SKIPPED = 'skipped', 'Skipped'


@dataclass
class TheoremReport:
    """Outcome of one representation check."""
    theorem: str
    status: str
    checks: Dict[str, str] = field(default_factory=dict)
    max_gap: float = 0.0
    witness: Optional[Dict[str, Any]] = None
    notes: Dict[str, Any] = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return self.status == TheoremStatus.PASS

    @property
    def contradiction(self) -> bool:
        return self.status == TheoremStatus.CONTRADICTION

    def to_dict(self) -> dict:
        data = {
            'theorem': self.theorem,
            'status': str(self.status),
            'checks': {name: str(status) for name, status in self.checks.items()},
            'max_gap': float(self.max_gap),
        }
        if self.witness is not None:
            data['witness'] = self.witness
        if self.notes:
            data['notes'] = self.notes
        return data
