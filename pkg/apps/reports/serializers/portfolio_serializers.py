"""Serializers for portfolio files."""
from rest_framework import serializers

from apps.measures.models import (
    AggregatorSpec,
    AggregatorVariant,
    CoreSpec,
    CoreVariant,
    Distortion,
    DistortionKind,
    GeneralizedRiskMeasure,
    MisspecificationCost,
    PenaltyFunction,
    PenaltyKind,
    UtilityFunction,
    UtilityKind,
    SIGN_ALIASES,
    VariationalSign,
    resolve_sign,
)
from apps.scenarios.models import RandomVariable, ScenarioSet
from ..models import FORMAT_VERSION, Portfolio, ScenarioEntry
from .fields import CompactSerializer, ExtendedFloatField, MassField


class SpaceSerializer(serializers.Serializer):
    n = serializers.IntegerField(
        min_value=1,
        error_messages={'min_value': 'The outcome space needs at least one atom.'},
    )


class ScenarioEntrySerializer(serializers.Serializer):
    """Serializer for one scenario row: an id and its masses."""
    id = serializers.CharField(allow_blank=False)
    mass = serializers.ListField(child=MassField(), allow_empty=False)

    def to_internal_value(self, data):
        try:
            return super().to_internal_value(data)
        except serializers.ValidationError as exc:
            label = data.get('id') if isinstance(data, dict) else None
            if label and isinstance(exc.detail, dict) and 'mass' in exc.detail:
                raise serializers.ValidationError({'mass': [f'Scenario {label}: {_first(exc.detail["mass"])}']})
            raise

    def create(self, validated_data):
        return ScenarioEntry(validated_data['id'], tuple(validated_data['mass']))


class PositionSerializer(serializers.Serializer):
    id = serializers.CharField(allow_blank=False)
    values = serializers.ListField(child=serializers.FloatField(), allow_empty=False)

    def create(self, validated_data):
        return RandomVariable(validated_data['values'], validated_data['id'])


class UtilitySerializer(CompactSerializer):
    kind = serializers.ChoiceField(choices=UtilityKind.choices)
    param = serializers.FloatField(required=False, allow_null=True)

    def create(self, validated_data):
        return UtilityFunction(validated_data['kind'], validated_data.get('param'))


class DistortionSerializer(CompactSerializer):
    kind = serializers.ChoiceField(choices=DistortionKind.choices)
    param = serializers.FloatField(required=False, allow_null=True)
    t = serializers.ListField(child=serializers.FloatField(), source='t_values', required=False, allow_null=True)
    h = serializers.ListField(child=serializers.FloatField(), source='h_values', required=False, allow_null=True)

    def create(self, validated_data):
        return Distortion(
            validated_data['kind'],
            validated_data.get('param'),
            validated_data.get('t_values'),
            validated_data.get('h_values'),
        )


class PenaltySerializer(CompactSerializer):
    """Penalty; a KL penalty names its reference scenario by id."""
    kind = serializers.ChoiceField(choices=PenaltyKind.choices)
    table = serializers.DictField(child=ExtendedFloatField(), required=False)
    reference = serializers.CharField(source='reference.id', required=False)

    def create(self, validated_data):
        kind = validated_data['kind']
        if kind == PenaltyKind.KL_TO_REFERENCE:
            label = validated_data.get('reference', {}).get('id')
            scenarios = self.context.get('scenarios', {})
            if label not in scenarios:
                raise serializers.ValidationError({'reference': [f'Unknown reference scenario {label!r}.']})
            return PenaltyFunction.kl_to_reference(scenarios[label])
        return PenaltyFunction(kind, validated_data.get('table', {}))


class CoreSerializer(CompactSerializer):
    variant = serializers.ChoiceField(choices=CoreVariant.choices)
    alpha = serializers.FloatField(required=False, allow_null=True)
    distortion = DistortionSerializer(required=False, allow_null=True)
    penalty = PenaltySerializer(required=False, allow_null=True)
    utility = UtilitySerializer(required=False, allow_null=True)
    beta = serializers.ListField(child=serializers.FloatField(), required=False, allow_null=True)

    def create(self, validated_data):
        nested = {}
        for name in ('distortion', 'penalty', 'utility'):
            if validated_data.get(name) is not None:
                nested[name] = self.fields[name].create(validated_data[name])
        beta = validated_data.get('beta')
        return CoreSpec(
            validated_data['variant'],
            alpha=validated_data.get('alpha'),
            beta=tuple(beta) if beta is not None else None,
            **nested,
        )


class AggregatorSerializer(CompactSerializer):
    """
    Aggregator; misspecification candidates are either listed or generated
    from candidate_steps. Imprecise aggregators always use the identity
    selector.
    """
    variant = serializers.ChoiceField(choices=AggregatorVariant.choices)
    weights = serializers.DictField(child=serializers.FloatField(), required=False, allow_null=True)
    utility = UtilitySerializer(required=False)
    phi = UtilitySerializer(required=False)
    penalty = PenaltySerializer(required=False)
    sign = serializers.ChoiceField(
        choices=VariationalSign.choices + [(alias, alias) for alias in SIGN_ALIASES], required=False,
    )
    cost = serializers.ChoiceField(choices=MisspecificationCost.choices, required=False)
    candidate_steps = serializers.IntegerField(min_value=1, required=False, allow_null=True)
    candidates = ScenarioEntrySerializer(many=True, required=False, allow_null=True)

    def validate_sign(self, value):
        return resolve_sign(value)

    def create(self, validated_data):
        options = {}
        for name in ('utility', 'phi', 'penalty'):
            if name in validated_data:
                options[name] = self.fields[name].create(validated_data[name])
        for name in ('weights', 'sign', 'cost', 'candidate_steps'):
            if validated_data.get(name) is not None:
                options[name] = validated_data[name]
        if validated_data.get('candidates'):
            entries = [self.fields['candidates'].child.create(item) for item in validated_data['candidates']]
            options['candidates'] = ScenarioSet(tuple(entry.to_scenario() for entry in entries))
        return AggregatorSpec(validated_data['variant'], **options)


class MeasureSerializer(CompactSerializer):
    core = CoreSerializer()
    aggregator = AggregatorSerializer()
    name = serializers.CharField(required=False, allow_blank=True)

    def create(self, validated_data):
        return GeneralizedRiskMeasure(
            core=self.fields['core'].create(validated_data['core']),
            aggregator=self.fields['aggregator'].create(validated_data['aggregator']),
            name=validated_data.get('name', ''),
        )


class PortfolioFileSerializer(serializers.Serializer):
    """
    Serializer for a whole portfolio file.

    save() returns a Portfolio; building it validates every scenario, so
    masses that are negative or do not sum to one raise the domain errors
    naming the scenario.
    """
    format = serializers.IntegerField()
    space = SpaceSerializer()
    scenarios = ScenarioEntrySerializer(many=True, source='scenario_entries', allow_empty=False)
    positions = PositionSerializer(many=True, allow_empty=False)
    measure = MeasureSerializer()

    def validate_format(self, value):
        if value != FORMAT_VERSION:
            raise serializers.ValidationError(f'Unsupported format {value}; expected {FORMAT_VERSION}.')
        return value

    def validate(self, attrs):
        n = attrs['space']['n']
        for entry in attrs['scenario_entries']:
            if len(entry['mass']) != n:
                raise serializers.ValidationError({
                    'scenarios': [f'Scenario {entry["id"]} has {len(entry["mass"])} masses, expected {n}.'],
                })
        for position in attrs['positions']:
            if len(position['values']) != n:
                raise serializers.ValidationError({
                    'positions': [f'Position {position["id"]} has {len(position["values"])} values, expected {n}.'],
                })
        position_ids = [position['id'] for position in attrs['positions']]
        duplicates = sorted({label for label in position_ids if position_ids.count(label) > 1})
        if duplicates:
            raise serializers.ValidationError({'positions': [f'Duplicate position ids: {", ".join(duplicates)}.']})
        return attrs

    def create(self, validated_data):
        entries = tuple(self.fields['scenarios'].child.create(item) for item in validated_data['scenario_entries'])
        portfolio_scenarios = ScenarioSet(tuple(entry.to_scenario() for entry in entries))
        self.context['scenarios'] = {scenario.id: scenario for scenario in portfolio_scenarios}
        positions = tuple(self.fields['positions'].child.create(item) for item in validated_data['positions'])
        return Portfolio(
            n=validated_data['space']['n'],
            scenario_entries=entries,
            positions=positions,
            measure=self.fields['measure'].create(validated_data['measure']),
        )


def _first(detail):
    if isinstance(detail, dict):
        return _first(next(iter(detail.values())))
    if isinstance(detail, (list, tuple)):
        return _first(detail[0]) if detail else ''
    return str(detail)
