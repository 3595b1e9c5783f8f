"""Constructive checks of the worst-case, Choquet, expectation and KL representations."""
import itertools
import logging
from dataclasses import replace
from typing import Dict, Optional

import numpy as np
from scipy.special import logsumexp, rel_entr

from apps.core.conf import risk_setting
from apps.core.exceptions import GridInfeasibleError, InvalidSpecError
from apps.axioms.models import scaled_tolerance
from apps.axioms.services import AXIOM_CHECKS, AxiomService, InstanceFamily, as_measure
from apps.measures.services import formulas
from apps.measures.services.cores import get_core
from apps.scenarios.models import RandomVariable, Scenario, common_space
from apps.scenarios.services import SpaceService
from apps.theorems.models import (
    CheckStatus,
    PsiTable,
    RecoveredDistortion,
    TheoremReport,
    TheoremStatus,
)

logger = logging.getLogger(__name__)

WORST_CASE = 'worst_case_representation'
CHOQUET = 'choquet_representation'
COHERENT = 'expectation_representation'
KL_CLOSED_FORM = 'kl_closed_form'

COHERENT_PREMISES = ('C0', 'C1', 'B2', 'STD')
DEFAULT_KL_SAMPLES = 1000


class _FirstFailure:
    """Status of one table check and the first entry that broke it."""

    def __init__(self):
        self.status = CheckStatus.PASS
        self.witness: Optional[dict] = None

    def fail(self, **witness):
        if self.witness is None:
            self.status = CheckStatus.FAIL
            self.witness = witness

    @property
    def held(self) -> bool:
        return self.status == CheckStatus.PASS


def _scenario_dict(P: Scenario) -> dict:
    return {'id': P.id, 'mass': P.mass.tolist()}


class TheoremService:
    @staticmethod
    def verify_worst_case_rep(table: PsiTable, tol: Optional[float] = None) -> TheoremReport:
        """
        Check A1, A2, A3 and standardness on a complete table, then
        Psi(X|R) = max over P in R of Psi(X|{P}) on every entry.

        Monotonicity in R is checked on covering pairs R, R + {P}; A2 on every
        ordered pair of positions whose singleton values are ordered inside R.
        A representation failure while A1 and A3 hold, or while A1, A2 and
        standardness hold with a constant position between the two sides,
        contradicts the theorem and is reported as such; so is a table that has
        the representation but breaks A1, A2 or A3.

        Raises:
            IncompleteTableError: an entry is missing
        """
        tol = risk_setting('EQUALITY_TOLERANCE') if tol is None else float(tol)
        table.check_complete()
        ids = table.universe.ids
        positions = table.position_ids
        subsets = list(table.subsets())
        checks = {name: _FirstFailure() for name in ('A1', 'A2', 'A3', 'STD', 'representation')}

        def within(lhs, rhs):
            return lhs - rhs <= scaled_tolerance(tol, lhs, rhs)

        def singles(position_id, subset):
            return [table.get(position_id, (scenario_id,)) for scenario_id in subset]

        for subset in subsets:
            for scenario_id in ids:
                if scenario_id in subset:
                    continue
                superset = subset | {scenario_id}
                for position_id in positions:
                    lhs, rhs = table.get(position_id, subset), table.get(position_id, superset)
                    if not within(lhs, rhs):
                        checks['A1'].fail(position=position_id, subset=sorted(subset),
                                          superset=sorted(superset), lhs=lhs, rhs=rhs)

        for first, second in itertools.permutations(positions, 2):
            for subset in subsets:
                dominated = all(within(x, y) for x, y in zip(singles(first, subset), singles(second, subset)))
                lhs, rhs = table.get(first, subset), table.get(second, subset)
                if dominated and not within(lhs, rhs):
                    checks['A2'].fail(X=first, Y=second, subset=sorted(subset), lhs=lhs, rhs=rhs)

        constants = {X.id: float(X.values[0]) for X in table.positions if X.is_constant}
        if not constants:
            checks['STD'].status = CheckStatus.SKIPPED

        max_gap = 0.0
        broken = []
        for subset in subsets:
            for position_id in positions:
                value = table.get(position_id, subset)
                best = max(singles(position_id, subset))
                if len(subset) > 1 and not within(value, best):
                    checks['A3'].fail(position=position_id, subset=sorted(subset), lhs=value, rhs=best)
                if position_id in constants:
                    level = constants[position_id]
                    if abs(value - level) > scaled_tolerance(tol, value, level):
                        checks['STD'].fail(position=position_id, subset=sorted(subset), lhs=value, rhs=level)
                gap = abs(value - best)
                max_gap = max(max_gap, gap)
                if gap > scaled_tolerance(tol, value, best):
                    checks['representation'].fail(position=position_id, subset=sorted(subset), lhs=value, rhs=best)
                    broken.append((value, best))

        represented = checks['representation'].held
        standard = checks['STD'].status == CheckStatus.PASS
        part_one = checks['A1'].held and checks['A2'].held and standard
        part_two = checks['A1'].held and checks['A3'].held

        def constant_between(value, best):
            return any(best - tol <= level < value - tol for level in constants.values())

        if represented:
            contradiction = not (checks['A1'].held and checks['A2'].held and checks['A3'].held)
        else:
            contradiction = part_two or (
                part_one and any(constant_between(value, best) for value, best in broken)
            )

        notes = {
            'part_i': 'premises hold' if part_one else 'premises fail',
            'part_ii': 'premises hold' if part_two else 'premises fail',
            'entries': len(table),
        }
        if contradiction:
            status = TheoremStatus.CONTRADICTION
            logger.error(f'Worst-case representation contradiction on a table of {len(table)} entries')
        else:
            status = TheoremStatus.PASS if represented else TheoremStatus.FAIL

        witness = None
        for name in ('representation', 'A1', 'A2', 'A3', 'STD'):
            if checks[name].witness is not None:
                witness = {'check': name, **checks[name].witness}
                break
        return TheoremReport(
            theorem=WORST_CASE,
            status=status,
            checks={name: check.status for name, check in checks.items()},
            max_gap=max_gap,
            witness=witness,
            notes=notes,
        )

    @staticmethod
    def recover_distortion(core, P: Scenario, grid: Optional[int] = None,
                           tol: Optional[float] = None) -> RecoveredDistortion:
        """
        Read h off indicator losses: h(j/grid) = core(1_A | P) with P(A) = j/grid.

        Events are grown as a nested chain, one increment of mass 1/grid at a
        time; when an increment cannot be found each level is searched on its
        own and the chain is reported as not nested. The grid defaults to the
        number of atoms, which uniform scenarios always realize.

        Raises:
            GridInfeasibleError: some level j/grid is not the mass of any event
        """
        core = get_core(core)
        tol = risk_setting('EQUALITY_TOLERANCE') if tol is None else float(tol)
        steps = P.n if grid is None else int(grid)
        if steps < 1:
            raise InvalidSpecError(f'Grid resolution must be a positive integer, got {grid}.')
        levels = np.arange(steps + 1) / steps

        events = [frozenset()]
        blocks = []
        nested = True
        for level in levels[1:]:
            event = None
            if nested:
                remaining = [atom for atom in range(P.n) if atom not in events[-1]]
                increment = SpaceService.find_event(P, level - P.probability(events[-1]), within=remaining)
                if increment is not None:
                    event = events[-1] | increment.atoms
                    blocks.append(tuple(sorted(increment.atoms)))
                else:
                    nested = False
                    logger.debug(f'No nested increment at level {level}; searching levels independently')
            if event is None:
                found = SpaceService.find_event(P, level)
                if found is None:
                    raise GridInfeasibleError(
                        f'No event has probability {level:g} under scenario {P.id or "P"}.',
                        level=level,
                        scenario=P.id,
                    )
                event = found.atoms
            events.append(frozenset(event))

        h_values = np.array([
            core.evaluate(RandomVariable.indicator(P.space, sorted(event)), P) for event in events
        ])
        steps_up = np.diff(h_values)
        slopes = steps_up / np.diff(levels)
        scale = max(1.0, float(np.max(np.abs(slopes))))
        monotone = bool(np.all(steps_up >= -tol * scale))
        concave = bool(np.all(np.diff(slopes) <= tol * scale))
        normalized = bool(abs(h_values[0]) <= tol and abs(h_values[-1] - 1.0) <= tol)

        logger.info(
            f'Recovered {steps + 1} grid values of {core.label} under {P.id or "P"}: '
            f'monotone={monotone} concave={concave} normalized={normalized}'
        )
        return RecoveredDistortion(
            grid=levels,
            h_values=h_values,
            scenario=P,
            monotone=monotone,
            concavity_certificate=concave,
            normalized=normalized,
            blocks=tuple(blocks) if nested else None,
            events=tuple(tuple(sorted(event)) for event in events),
        )

    @staticmethod
    def _grid_loss(h: RecoveredDistortion, rng: np.random.Generator, family: InstanceFamily) -> RandomVariable:
        """Loss constant on every block of the chain; free values when the chain is not nested."""
        n = h.scenario.n
        if not h.nested:
            return RandomVariable(rng.integers(family.low, family.high + 1, size=n).astype(float))
        levels = rng.integers(family.low, family.high + 1, size=len(h.blocks)).astype(float)
        values = np.full(n, levels[0])
        for block, level in zip(h.blocks, levels):
            values[list(block)] = level
        return RandomVariable(values)

    @staticmethod
    def verify_choquet_rep(
        core,
        h: RecoveredDistortion,
        trials: Optional[int] = None,
        seed: Optional[int] = None,
        tol: Optional[float] = None,
    ) -> TheoremReport:
        """
        Compare core(X|P) with the Choquet integral under the interpolated h.

        A recovered h that is not normalized or not monotone is no distortion;
        the report then fails with a constant loss or an indicator pair as the
        witness. Random losses are constant on the blocks of the event chain,
        so every level-set mass is a grid point.
        """
        core = get_core(core)
        trials = risk_setting('DEFAULT_TRIALS') if trials is None else int(trials)
        seed = risk_setting('DEFAULT_SEED') if seed is None else int(seed)
        tol = risk_setting('AUDIT_TOLERANCE') if tol is None else float(tol)
        P = h.scenario
        checks = {
            'normalized': CheckStatus.PASS if h.normalized else CheckStatus.FAIL,
            'monotone': CheckStatus.PASS if h.monotone else CheckStatus.FAIL,
            'representation': CheckStatus.SKIPPED,
        }
        notes = {'scenario': P.id, 'grid': len(h.grid) - 1, 'nested': h.nested}

        if not h.normalized:
            candidates = []
            for level in (1.0, 0.0):
                X = RandomVariable(np.full(P.n, level))
                value = core.evaluate(X, P)
                candidates.append((abs(value - level), X, value, level))
            gap, X, value, level = max(candidates, key=lambda item: item[0])
            witness = {'X': X.values.tolist(), 'P': _scenario_dict(P), 'core': value, 'choquet': level}
            return TheoremReport(CHOQUET, TheoremStatus.FAIL, checks, gap, witness, notes)

        if not h.monotone:
            drops = np.diff(h.h_values)
            index = int(np.argmin(drops))
            witness = {
                'P': _scenario_dict(P),
                'smaller_event': list(h.events[index]),
                'larger_event': list(h.events[index + 1]),
                'values': [float(h.h_values[index]), float(h.h_values[index + 1])],
            }
            return TheoremReport(CHOQUET, TheoremStatus.FAIL, checks, float(-drops[index]), witness, notes)

        distortion = h.as_distortion()
        family = InstanceFamily()
        max_gap = 0.0
        witness = None
        for trial in range(trials):
            X = TheoremService._grid_loss(h, np.random.default_rng([seed, trial]), family)
            value = core.evaluate(X, P)
            reference = formulas.choquet(X, P, distortion)
            gap = abs(value - reference)
            if gap > max_gap:
                max_gap = gap
                witness = {'X': X.values.tolist(), 'P': _scenario_dict(P), 'core': value, 'choquet': reference}

        holds = max_gap <= tol
        checks['representation'] = CheckStatus.PASS if holds else CheckStatus.FAIL
        notes['trials'] = trials
        if not h.nested:
            notes['interpolation'] = 'level sets may fall between grid points'
        logger.info(f'Choquet check of {core.label}: max gap {max_gap:.3e} over {trials} trials')
        return TheoremReport(
            CHOQUET,
            TheoremStatus.PASS if holds else TheoremStatus.FAIL,
            checks,
            max_gap,
            None if holds else witness,
            notes,
        )

    @staticmethod
    def verify_coherent_rep(
        core,
        trials: Optional[int] = None,
        seed: Optional[int] = None,
        tol: Optional[float] = None,
        family: Optional[InstanceFamily] = None,
    ) -> TheoremReport:
        """
        Audit additivity, monotonicity, law invariance and standardness of a
        core; when all four pass, check that the core is the expectation.
        """
        trials = risk_setting('DEFAULT_TRIALS') if trials is None else int(trials)
        seed = risk_setting('DEFAULT_SEED') if seed is None else int(seed)
        tol = risk_setting('AUDIT_TOLERANCE') if tol is None else float(tol)
        family = replace(family or InstanceFamily(), max_scenarios=1, pool=None)
        measure = as_measure(core)
        audit = AxiomService.audit(measure, COHERENT_PREMISES, family=family, trials=trials, seed=seed, tol=tol)
        checks: Dict[str, str] = {axiom: audit[axiom].status for axiom in COHERENT_PREMISES}
        notes = {'trials': trials, 'seed': seed}

        failed = [axiom for axiom in COHERENT_PREMISES if audit[axiom].failed]
        if failed:
            checks['conclusion'] = CheckStatus.SKIPPED
            witness = audit[failed[0]].witness
            return TheoremReport(
                COHERENT,
                TheoremStatus.FAIL,
                checks,
                abs(witness.gap),
                witness.to_dict(),
                notes,
            )

        core_impl = get_core(measure.core)
        stream = len(AXIOM_CHECKS)
        max_gap = 0.0
        witness = None
        for trial in range(trials):
            rng = family.rng(seed, trial, stream)
            n = family.atoms(rng)
            P = family.scenario(rng, n, 'P1')
            X = family.loss(rng, n)
            value = core_impl.evaluate(X, P)
            mean = formulas.expectation(X, P)
            gap = abs(value - mean)
            if gap > max_gap:
                max_gap = gap
                witness = {'X': X.values.tolist(), 'P': _scenario_dict(P), 'core': value, 'expectation': mean}

        holds = max_gap <= tol
        checks['conclusion'] = CheckStatus.PASS if holds else CheckStatus.FAIL
        premises = all(audit[axiom].passed for axiom in COHERENT_PREMISES)
        if not holds and premises:
            status = TheoremStatus.CONTRADICTION
            logger.error(f'{measure.label} passes C0, C1, B2 and STD but differs from the expectation by {max_gap}')
        else:
            status = TheoremStatus.PASS if holds and premises else TheoremStatus.FAIL
        if not premises:
            notes['premises'] = 'inconclusive'
        return TheoremReport(COHERENT, status, checks, max_gap, None if holds else witness, notes)

    @staticmethod
    def kl_closed_form(Q: Scenario, Z: RandomVariable):
        """v* = -log E^Q[exp(-Z)] and the minimizer P*_i proportional to Q_i exp(-Z_i)."""
        common_space(Q, Z)
        if np.any(Q.mass <= 0):
            raise InvalidSpecError(f'The closed form needs a strictly positive reference scenario, got {Q.mass.tolist()}.')
        log_weights = np.log(Q.mass) - Z.values
        log_norm = float(logsumexp(log_weights))
        minimizer = np.exp(log_weights - log_norm)
        minimizer = minimizer / minimizer.sum()
        return -log_norm, Scenario(minimizer, 'P*')

    @staticmethod
    def verify_kl_closed_form(
        Q: Scenario,
        Z: RandomVariable,
        tol: Optional[float] = None,
        samples: Optional[int] = None,
        seed: Optional[int] = None,
    ) -> TheoremReport:
        """
        Check the closed form of min over P of E^P[Z] + KL(P||Q): the value at
        the explicit minimizer and a lower bound over sampled scenarios.

        Samples are Dirichlet draws, flat and sparse, plus every point mass and
        Q itself.
        """
        tol = risk_setting('AUDIT_TOLERANCE') if tol is None else float(tol)
        samples = DEFAULT_KL_SAMPLES if samples is None else int(samples)
        seed = risk_setting('DEFAULT_SEED') if seed is None else int(seed)
        value, minimizer = TheoremService.kl_closed_form(Q, Z)

        def objective(mass) -> np.ndarray:
            return mass @ Z.values + np.sum(rel_entr(mass, Q.mass), axis=-1)

        stationarity = abs(float(objective(minimizer.mass)) - value)
        rng = np.random.default_rng([seed])
        flat = (samples + 1) // 2
        draws = np.vstack([
            rng.dirichlet(np.ones(Q.n), size=flat),
            rng.dirichlet(np.full(Q.n, 0.2), size=samples - flat),
            np.eye(Q.n),
            Q.mass[None, :],
        ])

        excesses = objective(draws) - value
        worst = int(np.argmin(excesses))
        checks = {
            'stationarity': CheckStatus.PASS if stationarity <= tol else CheckStatus.FAIL,
            'lower_bound': CheckStatus.PASS if excesses[worst] >= -tol else CheckStatus.FAIL,
        }
        witness = None
        if checks['lower_bound'] == CheckStatus.FAIL:
            witness = {'P': draws[worst].tolist(), 'objective': value + float(excesses[worst]), 'value': value}
        holds = all(status == CheckStatus.PASS for status in checks.values())
        notes = {
            'value': value,
            'minimizer': minimizer.mass.tolist(),
            'samples': int(draws.shape[0]),
            'min_excess': float(excesses[worst]),
        }
        logger.info(f'KL closed form: value {value:.12g}, stationarity gap {stationarity:.3e}')
        return TheoremReport(
            KL_CLOSED_FORM,
            TheoremStatus.PASS if holds else TheoremStatus.FAIL,
            checks,
            stationarity,
            witness,
            notes,
        )
