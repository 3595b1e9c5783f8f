from dataclasses import dataclass, field
from typing import Dict, List, Optional

from .axiom import VerdictStatus
from .witness import Witness


@dataclass
class Verdict:
    """Outcome of one axiom over an audit run."""
    axiom: str
    status: str
    witness: Optional[Witness] = None
    reason: str = ''
    trials: int = 0
    inconclusive_trials: int = 0

    @property
    def passed(self) -> bool:
        return self.status == VerdictStatus.PASS

    @property
    def failed(self) -> bool:
        return self.status == VerdictStatus.FAIL

    def to_dict(self) -> dict:
        data = {
            'status': self.status,
            'trials': self.trials,
            'inconclusive_trials': self.inconclusive_trials,
        }
        if self.reason:
            data['reason'] = self.reason
        if self.witness is not None:
            data['witness'] = self.witness.to_dict()
        return data


@dataclass
class AuditReport:
    """Verdicts for a set of axioms under one (seed, trials, tolerance)."""
    subject: str
    seed: int
    trials: int
    tolerance: float
    verdicts: Dict[str, Verdict] = field(default_factory=dict)
    notes: Dict[str, str] = field(default_factory=dict)

    def __getitem__(self, axiom) -> Verdict:
        return self.verdicts[str(axiom)]

    def __contains__(self, axiom) -> bool:
        return str(axiom) in self.verdicts

    @property
    def failed_axioms(self) -> List[str]:
        return [axiom for axiom, verdict in self.verdicts.items() if verdict.failed]

    @property
    def all_passed(self) -> bool:
        return not self.failed_axioms

    def merge(self, other: 'AuditReport') -> 'AuditReport':
        self.verdicts.update(other.verdicts)
        self.notes.update(other.notes)
        return self

    def to_dict(self) -> dict:
        return {
            'subject': self.subject,
            'seed': self.seed,
            'trials': self.trials,
            'tolerance': self.tolerance,
            'verdicts': {axiom: verdict.to_dict() for axiom, verdict in self.verdicts.items()},
            'notes': dict(self.notes),
            'passed': self.all_passed,
        }


@dataclass
class ReplayResult:
    """Recomputed sides of a witness."""
    lhs: float
    rhs: float
    reproduces: bool
    violates: bool
    premise_holds: bool = True

    @property
    def certified(self) -> bool:
        return self.reproduces and self.violates and self.premise_holds


@dataclass
class SearchResult:
    """Outcome of a witness search; not finding one proves nothing."""
    target: str
    found: bool
    witness: Optional[Witness] = None
    trials_used: int = 0
    exhaustive: bool = False
    note: str = ''

    def to_dict(self) -> dict:
        data = {
            'target': self.target,
            'found': self.found,
            'trials_used': self.trials_used,
            'exhaustive': self.exhaustive,
        }
        if self.note:
            data['note'] = self.note
        if self.witness is not None:
            data['witness'] = self.witness.to_dict()
        return data
