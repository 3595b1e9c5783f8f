"""Serializers for report files."""
from rest_framework import serializers

from .fields import CompactSerializer, ExtendedFloatField, ReportSectionField


class PositionResultSerializer(CompactSerializer):
    """Per-scenario core values and the aggregate of one position."""
    id = serializers.CharField()
    core_values = serializers.DictField(child=ExtendedFloatField(), required=False, allow_null=True)
    aggregate = ExtendedFloatField()


class ReportFileSerializer(CompactSerializer):
    """
    Serializer for a report file.

    Sections other than the header are present only for the command that
    produced them.
    """
    format = serializers.IntegerField()
    tool_version = serializers.CharField()
    command = serializers.CharField()
    measure = serializers.CharField()
    scenarios = serializers.ListField(child=serializers.CharField())
    seed = serializers.IntegerField(required=False, allow_null=True)
    positions = PositionResultSerializer(many=True, required=False, allow_null=True)
    audit = ReportSectionField(required=False, allow_null=True)
    recovery = ReportSectionField(required=False, allow_null=True)
    representation = ReportSectionField(required=False, allow_null=True)
    witness_search = ReportSectionField(required=False, allow_null=True)
