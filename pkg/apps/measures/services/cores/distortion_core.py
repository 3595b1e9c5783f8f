"""Choquet integral core with respect to a distorted scenario."""
from apps.measures.models import Distortion
from apps.measures.services import formulas
from .base import BaseCore


class DistortionCore(BaseCore):
    name = 'distortion'

    def __init__(self, distortion: Distortion):
        self.distortion = distortion

    def evaluate(self, X, P):
        return formulas.choquet(X, P, self.distortion)

    @property
    def label(self):
        return f'distortion({self.distortion.label})'
