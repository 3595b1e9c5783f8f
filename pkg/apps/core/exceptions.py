"""
Custom exception classes and error formatting for the application.
"""
from rest_framework.exceptions import ValidationError

from .response import envelope


EXIT_OK = 0
EXIT_AXIOM_FAILED = 1
EXIT_INVALID_INPUT = 2
EXIT_EVALUATION_FAILED = 3


class RiskMeasureError(Exception):
    """Base exception for risk-measure errors."""
    default_detail = 'An error occurred evaluating the risk measure.'
    default_code = 'risk_measure_error'
    exit_code = EXIT_EVALUATION_FAILED

    def __init__(self, detail=None, **context):
        self.detail = detail or self.default_detail
        self.context = context
        super().__init__(self.detail)


class InputValidationError(RiskMeasureError):
    """Raised when an input violates a type invariant."""
    default_detail = 'Input validation failed.'
    default_code = 'invalid_input'
    exit_code = EXIT_INVALID_INPUT


class NegativeMassError(InputValidationError):
    """Raised when a scenario carries a negative atom mass."""
    default_detail = 'Scenario masses must be nonnegative.'
    default_code = 'negative_mass'


class NotNormalizedError(InputValidationError):
    """Raised when scenario masses do not sum to one."""
    default_detail = 'Scenario masses must sum to 1.'
    default_code = 'not_normalized'


class SpaceMismatchError(InputValidationError):
    """Raised when objects live on outcome spaces of different size."""
    default_detail = 'Objects are defined on different outcome spaces.'
    default_code = 'space_mismatch'


class BadLambdaError(InputValidationError):
    """Raised when a mixture weight is outside [0, 1]."""
    default_detail = 'Mixture weight must lie in [0, 1].'
    default_code = 'bad_lambda'


class BadAlphaError(InputValidationError):
    """Raised when a confidence level is outside its admissible range."""
    default_detail = 'Confidence level is out of range.'
    default_code = 'bad_alpha'


class InvalidSpecError(InputValidationError):
    """Raised when a core, aggregator, distortion or utility is malformed."""
    default_detail = 'Invalid measure specification.'
    default_code = 'invalid_spec'


class DuplicateScenarioIdError(InputValidationError):
    """Raised when a scenario set reuses a label."""
    default_detail = 'Scenario ids must be distinct.'
    default_code = 'duplicate_scenario_id'


class UnsupportedAxiomError(InputValidationError):
    """Raised when an axiom id is unknown or cannot be targeted."""
    default_detail = 'Unsupported axiom.'
    default_code = 'unsupported_axiom'


class EvaluationError(RiskMeasureError):
    """Raised when a valid input cannot be evaluated."""
    default_detail = 'Evaluation failed.'
    default_code = 'evaluation_error'


class InfeasibleCouplingError(EvaluationError):
    """Raised when no atom partition realizes a target law."""
    default_detail = 'No atom partition of the scenario realizes the target law.'
    default_code = 'infeasible_coupling'


class NotMonotoneError(EvaluationError):
    """Raised when a comonotone construction yields a non-comonotone pair."""
    default_detail = 'Transforms are not nondecreasing on the range of Z.'
    default_code = 'not_monotone'


class UnknownScenarioError(EvaluationError):
    """Raised when a penalty table has no entry for a scenario."""
    default_detail = 'Scenario has no penalty entry.'
    default_code = 'unknown_scenario'


class EmptyScenarioSetError(EvaluationError):
    """Raised when an aggregator receives no scenarios."""
    default_detail = 'Scenario set is empty.'
    default_code = 'empty_scenario_set'


class WeightMismatchError(EvaluationError):
    """Raised when aggregation weights do not form a probability over the set."""
    default_detail = 'Weights must be nonnegative, match the scenario set and sum to 1.'
    default_code = 'weight_mismatch'


class AllExcludedError(EvaluationError):
    """Raised when every scenario carries an infinite penalty."""
    default_detail = 'Every scenario is excluded by an infinite penalty.'
    default_code = 'all_excluded'


class IncompleteTableError(EvaluationError):
    """Raised when a Psi table misses a (position, subset) entry."""
    default_detail = 'Psi table is incomplete.'
    default_code = 'incomplete_table'


class GridInfeasibleError(EvaluationError):
    """Raised when a grid level is not an achievable event mass."""
    default_detail = 'Requested grid level is not an achievable event mass.'
    default_code = 'grid_infeasible'


def _first_message(errors):
    """
    Dig the first human readable message out of nested DRF error details.

    List serializers report valid items as empty dicts; those are skipped.
    """
    if isinstance(errors, dict):
        items = errors.values()
    elif isinstance(errors, (list, tuple)):
        items = errors
    else:
        return str(errors)
    for item in items:
        message = _first_message(item)
        if message:
            return message
    return ''


def format_error(exc):
    """Build the error envelope printed by management commands."""
    if isinstance(exc, ValidationError):
        errors = exc.detail if isinstance(exc.detail, dict) else {'error': exc.detail}
        if 'non_field_errors' in errors:
            errors['error'] = errors.pop('non_field_errors')
        return envelope(
            success=False,
            message=_first_message(errors) or 'Validation failed.',
            data={'code': 'invalid_input', 'errors': errors},
        )

    if isinstance(exc, RiskMeasureError):
        data = {'code': exc.default_code, 'errors': {'error': [str(exc.detail)]}}
        if exc.context:
            data['context'] = {key: str(value) for key, value in sorted(exc.context.items())}
        return envelope(success=False, message=str(exc.detail), data=data)

    return envelope(
        success=False,
        message=str(exc) or exc.__class__.__name__,
        data={'code': 'error', 'errors': {'error': [str(exc)]}},
    )


def exit_code_for(exc):
    """Map an exception to the command exit-code contract."""
    if isinstance(exc, ValidationError):
        return EXIT_INVALID_INPUT
    return getattr(exc, 'exit_code', EXIT_EVALUATION_FAILED)
