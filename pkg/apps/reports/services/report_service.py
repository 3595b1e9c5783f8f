"""Service running the batch workflows behind the management commands."""
import json
import logging
from pathlib import Path
from typing import Iterable, Optional, Tuple

from django.conf import settings

from apps.axioms.models import SCENARIO_AXIOMS, AuditReport, SearchResult
from apps.axioms.services import AxiomService, InstanceFamily, WitnessSearchService
from apps.core.conf import risk_setting
from apps.core.exceptions import InvalidSpecError, UnsupportedAxiomError
from apps.measures.services import CoreService
from apps.theorems.models import RecoveredDistortion, TheoremReport
from apps.theorems.services import TheoremService
from ..models import FORMAT_VERSION, Portfolio
from ..serializers import PortfolioFileSerializer, ReportFileSerializer

logger = logging.getLogger(__name__)


def parse_axiom_list(value: Optional[str]) -> Optional[Tuple[str, ...]]:
    """Split a comma-separated --axioms value; None or blank means the default."""
    if value is None or not value.strip():
        return None
    return tuple(item.strip() for item in value.split(',') if item.strip())


class ReportService:
    @staticmethod
    def load_portfolio(path) -> Portfolio:
        """
        Read and validate a portfolio file.

        Raises:
            InvalidSpecError: the file is missing or not valid JSON
            ValidationError: the JSON does not match the portfolio schema
        """
        path = Path(path)
        try:
            text = path.read_text(encoding='utf-8')
        except OSError as exc:
            raise InvalidSpecError(f'Cannot read {path}: {exc.strerror}.', path=str(path))
        try:
            data = json.loads(text)
        except json.JSONDecodeError as exc:
            raise InvalidSpecError(
                f'{path}: line {exc.lineno} column {exc.colno}: {exc.msg}.',
                path=str(path),
                line=exc.lineno,
            )
        return ReportService.parse_portfolio(data)

    @staticmethod
    def parse_portfolio(data) -> Portfolio:
        serializer = PortfolioFileSerializer(data=data)
        serializer.is_valid(raise_exception=True)
        portfolio = serializer.save()
        logger.info(
            f'Loaded portfolio: {len(portfolio.positions)} positions, '
            f'{len(portfolio.scenario_entries)} scenarios on {portfolio.n} atoms'
        )
        return portfolio

    @staticmethod
    def dump_portfolio(portfolio: Portfolio) -> dict:
        return PortfolioFileSerializer(portfolio).data

    @staticmethod
    def _header(command: str, portfolio: Portfolio, seed: Optional[int] = None) -> dict:
        return {
            'format': FORMAT_VERSION,
            'tool_version': settings.TOOL_VERSION,
            'command': command,
            'measure': portfolio.measure.label,
            'scenarios': list(portfolio.scenarios.ids),
            'seed': seed,
        }

    @staticmethod
    def evaluate(portfolio: Portfolio) -> dict:
        """Core values per scenario and the aggregate for every position."""
        measure = portfolio.measure
        scenarios = portfolio.scenarios
        results = []
        for X in portfolio.positions:
            result = {'id': X.id, 'aggregate': measure.evaluate(X, scenarios)}
            if measure.uses_core:
                result['core_values'] = CoreService.evaluate_per_scenario(measure.core, X, scenarios)
            results.append(result)
        report = ReportService._header('evaluate', portfolio)
        report['positions'] = results
        return ReportFileSerializer(report).data

    @staticmethod
    def audit(
        portfolio: Portfolio,
        axioms: Optional[Iterable[str]] = None,
        trials: Optional[int] = None,
        seed: Optional[int] = None,
        tol: Optional[float] = None,
    ) -> Tuple[dict, AuditReport]:
        """Audit the portfolio's measure on instances drawn from its own scenarios and positions."""
        seed = risk_setting('DEFAULT_SEED') if seed is None else int(seed)
        family = InstanceFamily.from_portfolio(portfolio.scenarios, portfolio.positions)
        audit = AxiomService.audit(
            portfolio.measure,
            axioms or SCENARIO_AXIOMS,
            family=family,
            trials=trials,
            seed=seed,
            tol=tol,
            scenarios=portfolio.scenarios,
        )
        report = ReportService._header('audit', portfolio, seed)
        report['audit'] = audit.to_dict()
        return ReportFileSerializer(report).data, audit

    @staticmethod
    def recover(
        portfolio: Portfolio,
        scenario_id: Optional[str] = None,
        grid: Optional[int] = None,
        trials: Optional[int] = None,
        seed: Optional[int] = None,
        tol: Optional[float] = None,
    ) -> Tuple[dict, RecoveredDistortion, TheoremReport]:
        """Recover h for the portfolio's core under one scenario and check the Choquet form."""
        measure = portfolio.measure
        if not measure.uses_core:
            raise InvalidSpecError(f'Aggregator {measure.aggregator.label} does not use a core.')
        scenarios = portfolio.scenarios
        try:
            P = scenarios.get(scenario_id) if scenario_id else scenarios.scenarios[0]
        except KeyError:
            raise InvalidSpecError(f'No scenario {scenario_id!r} in the portfolio.', scenario=scenario_id)
        seed = risk_setting('DEFAULT_SEED') if seed is None else int(seed)
        h = TheoremService.recover_distortion(measure.core, P, grid)
        check = TheoremService.verify_choquet_rep(measure.core, h, trials=trials, seed=seed, tol=tol)
        report = ReportService._header('recover', portfolio, seed)
        report['recovery'] = h.to_dict()
        report['representation'] = check.to_dict()
        return ReportFileSerializer(report).data, h, check

    @staticmethod
    def witness(
        portfolio: Portfolio,
        target: str,
        budget: Optional[int] = None,
        seed: Optional[int] = None,
        tol: Optional[float] = None,
    ) -> Tuple[dict, SearchResult]:
        """Search for a counterexample to one axiom of the portfolio's core."""
        measure = portfolio.measure
        if not measure.uses_core:
            raise InvalidSpecError(f'Aggregator {measure.aggregator.label} does not use a core.')
        seed = risk_setting('DEFAULT_SEED') if seed is None else int(seed)
        result = WitnessSearchService.search_witness(target, measure.core, budget=budget, seed=seed, tol=tol)
        report = ReportService._header('witness', portfolio, seed)
        report['witness_search'] = result.to_dict()
        return ReportFileSerializer(report).data, result

    @staticmethod
    def single_axiom(axioms: Optional[Tuple[str, ...]]) -> str:
        if not axioms or len(axioms) != 1:
            raise UnsupportedAxiomError('The witness command takes exactly one axiom in --axioms.')
        return axioms[0]

    @staticmethod
    def render(report: dict) -> str:
        """Canonical JSON text: sorted keys, two-space indent, trailing newline."""
        return json.dumps(report, sort_keys=True, indent=2, ensure_ascii=False, allow_nan=False) + '\n'

    @staticmethod
    def write(report: dict, path=None, stream=None) -> None:
        text = ReportService.render(report)
        if path:
            Path(path).write_text(text, encoding='utf-8')
            logger.info(f'Wrote report to {path}')
        else:
            stream.write(text, ending='')
