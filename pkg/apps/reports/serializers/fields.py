"""Custom fields for portfolio and report files."""
import math
from fractions import Fraction

from rest_framework import serializers


class MassField(serializers.Field):
    """
    Scenario mass given as a number, a decimal string or a rational "p/q".

    Parsed exactly into a Fraction; written back as "p/q", or as an integer
    when the denominator is 1.
    """
    default_error_messages = {
        'invalid': 'Mass must be a number, a decimal string or a rational "p/q", got {value!r}.',
    }

    def to_internal_value(self, data):
        if isinstance(data, bool) or not isinstance(data, (int, float, str)):
            self.fail('invalid', value=data)
        try:
            return Fraction(str(data).strip())
        except (ValueError, ZeroDivisionError):
            self.fail('invalid', value=data)

    def to_representation(self, value):
        if not isinstance(value, Fraction):
            value = Fraction(str(float(value)))
        if value.denominator == 1:
            return value.numerator
        return f'{value.numerator}/{value.denominator}'


class ExtendedFloatField(serializers.FloatField):
    """Float that also reads and writes the strings "inf" and "-inf"."""

    def to_internal_value(self, data):
        if isinstance(data, str) and data.strip().lower() in ('inf', '+inf', 'infinity'):
            return math.inf
        if isinstance(data, str) and data.strip().lower() in ('-inf', '-infinity'):
            return -math.inf
        return super().to_internal_value(data)

    def to_representation(self, value):
        value = float(value)
        if math.isinf(value):
            return 'inf' if value > 0 else '-inf'
        return value


def json_ready(value):
    """Recursively replace infinities so the result is strict JSON."""
    if isinstance(value, dict):
        return {str(key): json_ready(item) for key, item in value.items()}
    if isinstance(value, (list, tuple)):
        return [json_ready(item) for item in value]
    if isinstance(value, float) and math.isinf(value):
        return 'inf' if value > 0 else '-inf'
    if isinstance(value, float) and math.isnan(value):
        return 'nan'
    return value


class ReportSectionField(serializers.DictField):
    """Free-form report section; values pass through json_ready."""

    def to_representation(self, value):
        return json_ready(dict(value))


class CompactSerializer(serializers.Serializer):
    """Serializer whose output omits fields that are None."""

    def to_representation(self, instance):
        data = super().to_representation(instance)
        return {key: value for key, value in data.items() if value is not None}
