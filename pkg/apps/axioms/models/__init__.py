"""Axiom identifiers, witnesses and audit reports."""
from .axiom import (
    AMBIGUITY_AXIOMS,
    LAW_AXIOMS,
    SCENARIO_AXIOMS,
    SHAPE_AXIOMS,
    TRADITIONAL_AXIOMS,
    AxiomId,
    Relation,
    VerdictStatus,
)
from .witness import Witness, scaled_tolerance
from .report import AuditReport, ReplayResult, SearchResult, Verdict

__all__ = [
    'AxiomId',
    'Relation',
    'VerdictStatus',
    'SCENARIO_AXIOMS',
    'LAW_AXIOMS',
    'AMBIGUITY_AXIOMS',
    'TRADITIONAL_AXIOMS',
    'SHAPE_AXIOMS',
    'Witness',
    'scaled_tolerance',
    'Verdict',
    'AuditReport',
    'ReplayResult',
    'SearchResult',
]
