"""Service for auditing generalized risk measures against their axioms."""
import logging
import math
from collections import Counter
from typing import Dict, Iterable, List, Optional, Sequence

from apps.core.conf import risk_setting
from apps.core.exceptions import RiskMeasureError, UnsupportedAxiomError
from apps.axioms.models import (
    AMBIGUITY_AXIOMS,
    LAW_AXIOMS,
    SCENARIO_AXIOMS,
    SHAPE_AXIOMS,
    TRADITIONAL_AXIOMS,
    AuditReport,
    AxiomId,
    ReplayResult,
    Verdict,
    VerdictStatus,
    Witness,
    scaled_tolerance,
)
from apps.scenarios.models import ScenarioSet
from .checks import (
    AXIOM_CHECKS,
    AxiomCheck,
    SkipTrial,
    as_measure,
    checks_for,
    out_of_regime,
)
from .codec import decode_inputs, encode_inputs, instance_size
from .generators import InstanceFamily

logger = logging.getLogger(__name__)

# Largest pool whose nested subset pairs are all checked for A1 before random trials.
EXHAUSTIVE_NESTED_SCENARIOS = 6

CHECK_STREAMS = {name: index for index, name in enumerate(AXIOM_CHECKS)}


class _Tally:
    """Running counts for one axiom."""

    def __init__(self, axiom: str):
        self.axiom = axiom
        self.conclusive = 0
        self.skipped = Counter()
        self.witness: Optional[Witness] = None

    @property
    def attempts(self) -> int:
        return self.conclusive + sum(self.skipped.values())

    def verdict(self) -> Verdict:
        inconclusive = sum(self.skipped.values())
        if self.witness is not None:
            return Verdict(self.axiom, VerdictStatus.FAIL, witness=self.witness,
                           trials=self.conclusive, inconclusive_trials=inconclusive)
        if self.conclusive:
            return Verdict(self.axiom, VerdictStatus.PASS,
                           trials=self.conclusive, inconclusive_trials=inconclusive)
        reason = self.skipped.most_common(1)[0][0] if self.skipped else 'no trials run'
        return Verdict(self.axiom, VerdictStatus.INCONCLUSIVE, reason=reason, inconclusive_trials=inconclusive)


def _parse_axioms(axioms: Optional[Iterable], allowed: Sequence[str]) -> List[str]:
    if axioms is None:
        return [str(axiom) for axiom in allowed]
    requested = []
    for axiom in axioms:
        label = str(axiom).strip().upper()
        if label not in AxiomId.values:
            raise UnsupportedAxiomError(f'Unknown axiom {axiom!r}.', axiom=axiom)
        if label in allowed and label not in requested:
            requested.append(label)
    return requested


def _settings(trials, seed, tol, default_tol):
    trials = risk_setting('DEFAULT_TRIALS') if trials is None else int(trials)
    seed = risk_setting('DEFAULT_SEED') if seed is None else int(seed)
    tol = risk_setting(default_tol) if tol is None else float(tol)
    return trials, seed, tol


class AxiomService:
    @staticmethod
    def run_check(measure, check: AxiomCheck, inputs: dict, tol: float, tally: _Tally) -> None:
        """Evaluate one instance of a check and record the outcome on the tally."""
        if out_of_regime(measure, check, instance_size(inputs)):
            tally.skipped['regime guard: alpha > 1 - 1/n'] += 1
            return
        try:
            if check.premise is not None and not check.premise(measure, inputs, tol):
                tally.skipped['premise not met'] += 1
                return
            lhs, rhs = check.evaluate(measure, inputs)
        except RiskMeasureError as exc:
            tally.skipped[exc.default_code] += 1
            return
        if not (math.isfinite(lhs) and math.isfinite(rhs)):
            tally.skipped['non-finite value'] += 1
            return

        tally.conclusive += 1
        witness = Witness(str(check.axiom), check.name, str(check.relation), encode_inputs(inputs), lhs, rhs)
        if witness.violates(tol):
            logger.info(f'{check.name} violated by {measure.label}: lhs={lhs!r} rhs={rhs!r}')
            tally.witness = witness

    @staticmethod
    def run_trials(
        measure,
        axioms: Sequence[str],
        family: InstanceFamily,
        trials: int,
        seed: int,
        tol: float,
        tallies: Optional[Dict[str, _Tally]] = None,
    ) -> Dict[str, _Tally]:
        """
        Random trials for every check of the given axioms.

        Each (check, trial) pair draws from its own generator, so the instance
        seen by a check does not depend on which other axioms are audited.
        """
        tallies = tallies if tallies is not None else {}
        checks = []
        for axiom in axioms:
            tallies.setdefault(axiom, _Tally(axiom))
            checks.extend(checks_for(axiom))

        for trial in range(trials):
            for check in checks:
                tally = tallies[str(check.axiom)]
                if tally.witness is not None:
                    continue
                rng = family.rng(seed, trial, CHECK_STREAMS[check.name])
                try:
                    inputs = check.build(family, rng, trial)
                except SkipTrial as skip:
                    tally.skipped[skip.reason] += 1
                    continue
                except RiskMeasureError as exc:
                    tally.skipped[exc.default_code] += 1
                    continue
                AxiomService.run_check(measure, check, inputs, tol, tally)
        return tallies

    @staticmethod
    def _report(measure, tallies: Dict[str, _Tally], trials: int, seed: int, tol: float) -> AuditReport:
        report = AuditReport(subject=measure.label, seed=seed, trials=trials, tolerance=tol)
        for axiom, tally in tallies.items():
            report.verdicts[axiom] = tally.verdict()
        return report

    @staticmethod
    def audit_scenario_axioms(
        measure,
        family: Optional[InstanceFamily] = None,
        trials: Optional[int] = None,
        seed: Optional[int] = None,
        tol: Optional[float] = None,
        axioms: Optional[Iterable] = None,
    ) -> AuditReport:
        """
        Audit A1, A2, A3 and standardness.

        With a portfolio pool of at most EXHAUSTIVE_NESTED_SCENARIOS scenarios,
        every nested pair of sub-collections is checked for A1 on every position
        first, smallest subsets first; random trials follow.
        """
        measure = as_measure(measure)
        family = family or InstanceFamily()
        trials, seed, tol = _settings(trials, seed, tol, 'AUDIT_TOLERANCE')
        requested = _parse_axioms(axioms, SCENARIO_AXIOMS)
        tallies = {axiom: _Tally(axiom) for axiom in requested}

        pool = family.pool
        if AxiomId.A1 in requested and pool is not None and family.positions \
                and len(pool) <= EXHAUSTIVE_NESTED_SCENARIOS:
            AxiomService._nested_pass(measure, pool, family.positions, tol, tallies[str(AxiomId.A1)])

        AxiomService.run_trials(measure, requested, family, trials, seed, tol, tallies)
        return AxiomService._report(measure, tallies, trials, seed, tol)

    @staticmethod
    def _nested_pass(measure, pool: ScenarioSet, positions, tol: float, tally: _Tally) -> None:
        check = AXIOM_CHECKS['A1']
        subsets = list(pool.nonempty_subsets())
        for X in positions:
            for inner in subsets:
                for outer in subsets:
                    if not set(inner.ids) < set(outer.ids):
                        continue
                    inputs = {'X': X, 'scenarios': pool, 'subset': inner.ids, 'superset': outer.ids}
                    AxiomService.run_check(measure, check, inputs, tol, tally)
                    if tally.witness is not None:
                        return

    @staticmethod
    def audit_law_invariance(
        core,
        family: Optional[InstanceFamily] = None,
        trials: Optional[int] = None,
        seed: Optional[int] = None,
        tol: Optional[float] = None,
        axioms: Optional[Iterable] = None,
    ) -> AuditReport:
        """
        Audit B1, B2 and B3 on a core.

        B1 implies B2 and B3. The converse needs a coupling that moves a law
        from one scenario to another, which a finite space may not offer, so
        B2 and B3 passing while B1 fails is reported in the notes rather than
        treated as an error.
        """
        measure = as_measure(core)
        family = family or InstanceFamily()
        trials, seed, tol = _settings(trials, seed, tol, 'EQUALITY_TOLERANCE')
        requested = _parse_axioms(axioms, LAW_AXIOMS)
        tallies = AxiomService.run_trials(measure, requested, family, trials, seed, tol)
        report = AxiomService._report(measure, tallies, trials, seed, tol)

        if all(axiom in report for axiom in LAW_AXIOMS):
            b1, b2, b3 = (report[axiom] for axiom in LAW_AXIOMS)
            if b1.passed and (b2.failed or b3.failed):
                logger.error(f'B1 passed but B2 or B3 failed for {measure.label}')
                report.notes['law_invariance'] = 'B1 passed while B2 or B3 failed; B1 implies both.'
            elif b2.passed and b3.passed and b1.failed:
                report.notes['law_invariance'] = (
                    'B2 and B3 hold but B1 fails: the required transfer coupling is not available '
                    'on this finite space.'
                )
        return report

    @staticmethod
    def audit_ambiguity(
        core,
        family: Optional[InstanceFamily] = None,
        trials: Optional[int] = None,
        seed: Optional[int] = None,
        tol: Optional[float] = None,
        axioms: Optional[Iterable] = None,
    ) -> AuditReport:
        """Audit B4 (concavity in P, equality on unambiguous events) and B5."""
        measure = as_measure(core)
        family = family or InstanceFamily()
        trials, seed, tol = _settings(trials, seed, tol, 'AUDIT_TOLERANCE')
        requested = _parse_axioms(axioms, AMBIGUITY_AXIOMS)
        tallies = AxiomService.run_trials(measure, requested, family, trials, seed, tol)
        report = AxiomService._report(measure, tallies, trials, seed, tol)

        if str(AxiomId.B5) in tallies:
            tally = tallies[str(AxiomId.B5)]
            feasible = tally.attempts - tally.skipped['coupling infeasible']
            report.notes['B5_feasibility'] = f'{feasible} of {tally.attempts} quadruples had feasible couplings'
        return report

    @staticmethod
    def audit_traditional(
        measure,
        scenarios=None,
        family: Optional[InstanceFamily] = None,
        trials: Optional[int] = None,
        seed: Optional[int] = None,
        tol: Optional[float] = None,
        axioms: Optional[Iterable] = None,
    ) -> AuditReport:
        """
        Audit C0 to C5.

        With scenarios given, C1 to C5 are checked at that fixed Q and C0 on
        its members one at a time.
        """
        measure = as_measure(measure)
        family = family or InstanceFamily()
        if scenarios is not None:
            family = family.with_pool(scenarios)
        trials, seed, tol = _settings(trials, seed, tol, 'AUDIT_TOLERANCE')
        requested = _parse_axioms(axioms, TRADITIONAL_AXIOMS)
        tallies = AxiomService.run_trials(measure, requested, family, trials, seed, tol)
        return AxiomService._report(measure, tallies, trials, seed, tol)

    @staticmethod
    def audit_shape(
        core,
        family: Optional[InstanceFamily] = None,
        trials: Optional[int] = None,
        seed: Optional[int] = None,
        tol: Optional[float] = None,
        axioms: Optional[Iterable] = None,
    ) -> AuditReport:
        """Audit convexity in X and concavity in P, the latter under the alpha <= 1 - 1/n guard."""
        measure = as_measure(core)
        family = family or InstanceFamily()
        trials, seed, tol = _settings(trials, seed, tol, 'AUDIT_TOLERANCE')
        requested = _parse_axioms(axioms, SHAPE_AXIOMS)
        tallies = AxiomService.run_trials(measure, requested, family, trials, seed, tol)
        return AxiomService._report(measure, tallies, trials, seed, tol)

    @staticmethod
    def audit(
        subject,
        axioms: Optional[Iterable] = None,
        family: Optional[InstanceFamily] = None,
        trials: Optional[int] = None,
        seed: Optional[int] = None,
        tol: Optional[float] = None,
        scenarios=None,
    ) -> AuditReport:
        """
        Audit any selection of axioms in one report.

        Core-level families (B, shape) run on the measure's core; a measure
        whose aggregator ignores the core skips them as inconclusive.
        """
        measure = as_measure(subject)
        requested = _parse_axioms(axioms, AxiomId.values)
        trials_, seed_, _ = _settings(trials, seed, tol, 'AUDIT_TOLERANCE')
        report = AuditReport(
            subject=measure.label,
            seed=seed_,
            trials=trials_,
            tolerance=risk_setting('AUDIT_TOLERANCE') if tol is None else float(tol),
        )
        core_measure = as_measure(measure.core) if measure.uses_core else None

        def selected(group):
            return [axiom for axiom in requested if axiom in group]

        groups = (
            (SCENARIO_AXIOMS, lambda chosen: AxiomService.audit_scenario_axioms(
                measure, family, trials, seed, tol, chosen)),
            (LAW_AXIOMS, lambda chosen: AxiomService.audit_law_invariance(
                core_measure, family, trials, seed, tol, chosen)),
            (AMBIGUITY_AXIOMS, lambda chosen: AxiomService.audit_ambiguity(
                core_measure, family, trials, seed, tol, chosen)),
            (TRADITIONAL_AXIOMS, lambda chosen: AxiomService.audit_traditional(
                measure, scenarios, family, trials, seed, tol, chosen)),
            (SHAPE_AXIOMS, lambda chosen: AxiomService.audit_shape(
                core_measure, family, trials, seed, tol, chosen)),
        )
        for group, run in groups:
            chosen = selected(group)
            if not chosen:
                continue
            if core_measure is None and group in (LAW_AXIOMS, AMBIGUITY_AXIOMS, SHAPE_AXIOMS):
                for axiom in chosen:
                    report.verdicts[axiom] = Verdict(
                        axiom, VerdictStatus.INCONCLUSIVE, reason='aggregator does not use a core',
                    )
                continue
            report.merge(run(chosen))

        report.verdicts = {axiom: report.verdicts[axiom] for axiom in requested}
        logger.info(f'Audited {measure.label}: {len(report.failed_axioms)} of {len(requested)} axioms failed')
        return report

    @staticmethod
    def replay_witness(subject, witness: Witness, tol: Optional[float] = None) -> ReplayResult:
        """Recompute a witness from its stored inputs."""
        check = AXIOM_CHECKS.get(witness.check)
        if check is None:
            raise UnsupportedAxiomError(f'Unknown check {witness.check!r}.', axiom=witness.axiom)
        measure = as_measure(subject)
        tol = risk_setting('EQUALITY_TOLERANCE') if tol is None else float(tol)
        inputs = decode_inputs(witness.inputs)
        premise_holds = check.premise is None or check.premise(measure, inputs, tol)
        lhs, rhs = check.evaluate(measure, inputs)
        replayed = Witness(witness.axiom, witness.check, str(check.relation), witness.inputs, lhs, rhs)
        reproduces = (
            abs(lhs - witness.lhs) <= scaled_tolerance(risk_setting('EQUALITY_TOLERANCE'), lhs, witness.lhs)
            and abs(rhs - witness.rhs) <= scaled_tolerance(risk_setting('EQUALITY_TOLERANCE'), rhs, witness.rhs)
        )
        return ReplayResult(
            lhs=lhs,
            rhs=rhs,
            reproduces=reproduces,
            violates=replayed.violates(tol),
            premise_holds=bool(premise_holds),
        )
