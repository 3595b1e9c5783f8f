from dataclasses import dataclass, field
from typing import Any, Dict

from .axiom import Relation


def scaled_tolerance(tol: float, lhs: float, rhs: float) -> float:
    return tol * max(1.0, abs(lhs), abs(rhs))


@dataclass(frozen=True)
class Witness:
    """
    Replayable instance where an axiom's relation fails.

    inputs holds JSON-ready primitives only (lists, numbers, ids), so a witness
    copied out of a report can be fed back to replay_witness.
    """
    axiom: str
    check: str
    relation: str
    inputs: Dict[str, Any] = field(default_factory=dict)
    lhs: float = 0.0
    rhs: float = 0.0

    @property
    def gap(self) -> float:
        return self.lhs - self.rhs

    def violates(self, tol: float) -> bool:
        """Whether lhs and rhs break the relation by more than tol."""
        if self.relation == Relation.LE:
            return self.gap > tol
        return abs(self.gap) > scaled_tolerance(tol, self.lhs, self.rhs)

    def to_dict(self) -> dict:
        return {
            'axiom': self.axiom,
            'check': self.check,
            'relation': self.relation,
            'inputs': self.inputs,
            'lhs': self.lhs,
            'rhs': self.rhs,
            'gap': self.gap,
        }

    @classmethod
    def from_dict(cls, data: dict) -> 'Witness':
        return cls(
            axiom=data['axiom'],
            check=data.get('check', data['axiom']),
            relation=data['relation'],
            inputs=dict(data.get('inputs', {})),
            lhs=float(data['lhs']),
            rhs=float(data['rhs']),
        )
