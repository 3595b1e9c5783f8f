from django.db import models


class AxiomId(models.TextChoices):
    A1 = 'A1', 'Uncertainty aversion'
    A2 = 'A2', 'Scenario monotonicity'
    A3 = 'A3', 'Scenario upper bound'
    STD = 'STD', 'Standardness'
    B1 = 'B1', 'Strong law invariance'
    B2 = 'B2', 'Loss law invariance'
    B3 = 'B3', 'Scenario law invariance'
    B4 = 'B4', 'Ambiguity sensitivity'
    B5 = 'B5', 'Position-independent scenario penalty'
    C0 = 'C0', 'Additivity of the core'
    C1 = 'C1', 'Monotonicity'
    C2 = 'C2', 'Cash additivity'
    C3 = 'C3', 'Positive homogeneity'
    C4 = 'C4', 'Subadditivity'
    C5 = 'C5', 'Comonotonic additivity'
    CONVEX_X = 'CONVEX_X', 'Convex in the loss'
    CONCAVE_P = 'CONCAVE_P', 'Concave in the scenario'


class VerdictStatus(models.TextChoices):
    PASS = 'pass', 'Pass'
    FAIL = 'fail', 'Fail'
    INCONCLUSIVE = 'inconclusive', 'Inconclusive'


class Relation(models.TextChoices):
    LE = 'le', 'lhs <= rhs'
    EQ = 'eq', 'lhs == rhs'


SCENARIO_AXIOMS = (AxiomId.A1, AxiomId.A2, AxiomId.A3, AxiomId.STD)
LAW_AXIOMS = (AxiomId.B1, AxiomId.B2, AxiomId.B3)
AMBIGUITY_AXIOMS = (AxiomId.B4, AxiomId.B5)
TRADITIONAL_AXIOMS = (AxiomId.C0, AxiomId.C1, AxiomId.C2, AxiomId.C3, AxiomId.C4, AxiomId.C5)
SHAPE_AXIOMS = (AxiomId.CONVEX_X, AxiomId.CONCAVE_P)
