"""Finite Psi tables, recovered distortions and theorem reports."""
from .psi_table import PsiTable
from .recovered import RecoveredDistortion
from .report import CheckStatus, TheoremReport, TheoremStatus

__all__ = [
    'PsiTable',
    'RecoveredDistortion',
    'CheckStatus',
    'TheoremReport',
    'TheoremStatus',
]
