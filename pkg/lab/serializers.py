"""
Validation of experiment configs.

A config is a flat mapping of keys to values; the same serializer checks a
config read from a key = value file, from command-line flags or from a
recorded run.
"""

import math

from rest_framework import serializers

from core.app_settings import lab_settings
from core.services.base import ServiceError
from decaylab.enums import ProfileKind
from kernel.enums import KernelMethod
from solver.enums import Preset
from solver.nonlinearity import parse_terms
from .enums import Subcommand


class CommaListField(serializers.ListField):
    """List given either as a list or as a comma separated string."""

    def to_internal_value(self, data):
        if isinstance(data, str):
            data = [item.strip() for item in data.split(',') if item.strip()]
        return super().to_internal_value(data)


def _positive(value):
    if not value > 0:
        raise serializers.ValidationError("must be positive")
    return value


def _finite(value):
    if not math.isfinite(value):
        raise serializers.ValidationError("must be finite")
    return value


class ExperimentConfigSerializer(serializers.Serializer):
    """Full parameter table of one run."""

    subcommand = serializers.ChoiceField(choices=Subcommand.choices)
    seed = serializers.IntegerField(default=0)
    output = serializers.CharField(required=False, allow_blank=True)

    # weights
    a0 = serializers.FloatField(default=1.0, validators=[_finite, _positive])
    epsilon = serializers.FloatField(default=0.0, validators=[_finite])
    N = serializers.IntegerField(required=False, min_value=1)
    a0_values = CommaListField(child=serializers.FloatField(validators=[_positive]), required=False)
    epsilon_values = CommaListField(child=serializers.FloatField(), required=False)
    N_values = CommaListField(child=serializers.IntegerField(min_value=1), required=False)
    beta = serializers.FloatField(default=0.3, min_value=0.0, validators=[_finite])
    delta = serializers.FloatField(required=False)
    beta_values = CommaListField(child=serializers.FloatField(validators=[_positive]), required=False)
    delta_values = CommaListField(child=serializers.FloatField(), required=False)

    # kernel
    j = serializers.IntegerField(default=2)
    xmin = serializers.FloatField(default=-40.0, validators=[_finite])
    xmax = serializers.FloatField(default=10.0, validators=[_finite])
    step = serializers.FloatField(required=False, validators=[_positive])
    method = serializers.ChoiceField(choices=KernelMethod.choices, default=KernelMethod.DIRECT.value)

    # solver
    L = serializers.FloatField(default=100.0, validators=[_finite, _positive])
    M = serializers.IntegerField(default=1024)
    dealias_fraction = serializers.FloatField(required=False)
    dt = serializers.FloatField(default=1e-3, validators=[_finite, _positive])
    T = serializers.FloatField(default=1.0, validators=[_finite, _positive])
    cadence = serializers.IntegerField(default=10, min_value=1)
    preset = serializers.ChoiceField(choices=Preset.choices, required=False)
    terms = serializers.CharField(required=False)
    c1 = serializers.FloatField(required=False)
    c = serializers.FloatField(required=False)
    b1 = serializers.FloatField(required=False)
    b2 = serializers.FloatField(required=False)
    b3 = serializers.FloatField(required=False)

    # data
    profile = serializers.ChoiceField(choices=ProfileKind.choices, default=ProfileKind.GAUSSIAN.value)
    amplitude = serializers.FloatField(default=0.1, validators=[_finite])
    center = serializers.FloatField(default=0.0, validators=[_finite])
    width = serializers.FloatField(default=2.0, validators=[_positive])
    right_cutoff = serializers.FloatField(required=False)
    modes = serializers.IntegerField(default=8, min_value=1)
    perturbation_profile = serializers.ChoiceField(choices=ProfileKind.choices, default=ProfileKind.BUMP.value)
    perturbation_amplitude = serializers.FloatField(default=0.01, validators=[_finite])
    perturbation_center = serializers.FloatField(default=-20.0)
    perturbation_width = serializers.FloatField(default=4.0, validators=[_positive])

    # experiments
    window_fraction = serializers.FloatField(default=0.5)
    refine = serializers.BooleanField(default=True)
    workers = serializers.IntegerField(default=1, min_value=1)

    def validate_epsilon(self, value):
        if not 0 <= value < 1:
            raise serializers.ValidationError("must lie in [0, 1)")
        return value

    def validate_epsilon_values(self, values):
        for value in values:
            self.validate_epsilon(value)
        return values

    def validate_delta(self, value):
        if not 0 < value < 1:
            raise serializers.ValidationError("must lie in (0, 1)")
        return value

    def validate_delta_values(self, values):
        for value in values:
            self.validate_delta(value)
        return values

    def validate_j(self, value):
        if value not in (1, 2):
            raise serializers.ValidationError("must be 1 or 2")
        return value

    def validate_M(self, value):
        if value < 8 or value & (value - 1):
            raise serializers.ValidationError("must be a power of two >= 8")
        return value

    def validate_dealias_fraction(self, value):
        if not 0 < value <= 1:
            raise serializers.ValidationError("must lie in (0, 1]")
        return value

    def validate_window_fraction(self, value):
        if not 0 < value <= 1:
            raise serializers.ValidationError("must lie in (0, 1]")
        return value

    def validate_terms(self, value):
        try:
            parse_terms(value)
        except ServiceError as e:
            raise serializers.ValidationError(f"{e.message}: {e.errors.get('terms', '')}")
        return value

    def validate(self, attrs):
        errors = {}
        if attrs.get('preset') and attrs.get('terms'):
            errors['terms'] = "give either a preset or explicit terms, not both"
        if not attrs['xmin'] < attrs['xmax']:
            errors['xmax'] = "must exceed xmin"
        if attrs['dt'] > attrs['T']:
            errors['dt'] = "must not exceed T"
        if attrs['subcommand'] == Subcommand.LEDGER.value and 'N' not in attrs:
            errors['N'] = "the ledger needs the weight index N"
        cap = lab_settings.get('WEIGHTS', 'OVERFLOW_CAP', 600.0)
        N = attrs.get('N', 10)
        if attrs['a0'] * N ** 1.25 > cap:
            errors['a0'] = f"a0 N^(5/4) = {attrs['a0'] * N ** 1.25:.4g} exceeds the overflow cap {cap}"
        if errors:
            raise serializers.ValidationError(errors)
        return attrs
