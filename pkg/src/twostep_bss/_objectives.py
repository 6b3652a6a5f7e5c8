"""Scalar objectives evaluated on candidate unmixed signals y(t).

Geometrical objectives O1-O5 are built from arc lengths of the signal
parametric curve and use the derivative/integral conventions of the
signal module.  MI is the sum of histogram marginal entropies.  G1-G3 are
the FastICA contrasts, used through the negentropy surrogate
sum_i (mean G(y_i) - E[G(nu)])^2 which is maximized.
"""

import enum
import math
from dataclasses import dataclass

import numpy as np

from ._errors import (ArityError, BssError, DegenerateEntropyError,
                      EvaluationError)
from ._signal import derivative, integral

LOG_CLAMP = 1e-8
MIN_BINS = 8


class Orientation(enum.Enum):
    MINIMIZE = 'minimize'
    MAXIMIZE = 'maximize'


class ObjectiveTag(enum.Enum):
    O1 = 'O1'
    O2 = 'O2'
    O3 = 'O3'
    O4 = 'O4'
    O5 = 'O5'
    O3_TILDE = 'O3Tilde'
    MI = 'MI'
    G1 = 'G1'
    G2 = 'G2'
    G3 = 'G3'

    @classmethod
    def parse(cls, name):
        if isinstance(name, cls):
            return name
        for tag in cls:
            if tag.value.lower() == str(name).lower():
                return tag
        raise ValueError(f'unknown objective {name!r}; '
                         f'valid: {", ".join(t.value for t in cls)}')


_CONTRASTS = (ObjectiveTag.G1, ObjectiveTag.G2, ObjectiveTag.G3)
_PRODUCT_FORMS = (ObjectiveTag.O1, ObjectiveTag.O2, ObjectiveTag.O3,
                  ObjectiveTag.O4, ObjectiveTag.O3_TILDE)
_DERIVATIVE_FREE = (ObjectiveTag.MI,) + _CONTRASTS


@dataclass(frozen=True)
class ObjectiveValue:
    value: float
    orientation: Orientation


def _log_cosh(u):
    return np.logaddexp(u, -u) - math.log(2)


def contrast(tag, y, a1=1.0, a2=1.0):
    """FastICA contrast G applied elementwise"""
    if tag is ObjectiveTag.G1:
        return _log_cosh(a1 * y) / a1
    if tag is ObjectiveTag.G2:
        return -np.exp(-a2 * y ** 2 / 2) / a2
    if tag is ObjectiveTag.G3:
        return y ** 4 / 4
    raise ValueError(f'{tag} is not a contrast function')


def contrast_reference(tag, a1=1.0, a2=1.0):
    """E[G(nu)] for a standard normal nu"""
    if tag is ObjectiveTag.G1:
        nodes, weights = np.polynomial.hermite_e.hermegauss(96)
        return float(np.sum(weights * contrast(tag, nodes, a1=a1)) / math.sqrt(2 * math.pi))
    if tag is ObjectiveTag.G2:
        return -1 / (a2 * math.sqrt(1 + a2))
    if tag is ObjectiveTag.G3:
        return 0.75
    raise ValueError(f'{tag} is not a contrast function')


def default_bins(samples):
    """256 bins for long signals, otherwise about sqrt(T)"""
    if samples >= 10_000:
        return 256
    return max(MIN_BINS, math.ceil(math.sqrt(samples)))


def marginal_entropy(channel, bins):
    """Differential entropy estimate from an equal-width histogram on [min, max]"""
    channel = np.asarray(channel, dtype=float)
    if len(channel) < bins:
        raise ValueError(f'{len(channel)} samples cannot fill {bins} bins')
    if not np.all(np.isfinite(channel)):
        raise ValueError('entropy input must be finite')
    lo, hi = float(channel.min()), float(channel.max())
    if hi <= lo:
        raise DegenerateEntropyError('constant channel has no differential entropy')
    counts, _ = np.histogram(channel, bins=bins, range=(lo, hi))
    p = counts[counts > 0] / len(channel)
    return float(-np.sum(p * np.log(p)) + math.log((hi - lo) / bins))


def o3_tilde_raw(y, dy=None):
    """Signed derivative correlation, integral of y1' y2'"""
    if y.channels != 2:
        raise ArityError(f'O3Tilde needs exactly 2 channels, got {y.channels}')
    d = (dy if dy is not None else derivative(y)).data
    return integral(d[0] * d[1])


@dataclass(frozen=True)
class ObjectiveKind:
    """Objective selector with its hyperparameters

    :param tag: ObjectiveTag or its name (case-insensitive)
    :param a1: G1 scale, in [1, 2]
    :param a2: G2 scale, positive
    :param bins: MI histogram bins; None picks default_bins(T)
    """

    tag: ObjectiveTag
    a1: float = 1.0
    a2: float = 1.0
    bins: int = None

    def __post_init__(self):
        object.__setattr__(self, 'tag', ObjectiveTag.parse(self.tag))
        if not 1 <= self.a1 <= 2:
            raise ValueError('a1 must be in the range [1, 2]')
        if not self.a2 > 0:
            raise ValueError('a2 must be positive')
        if self.bins is not None and self.bins < MIN_BINS:
            raise ValueError(f'histogram bins must be at least {MIN_BINS}')

    @property
    def name(self):
        return self.tag.value

    @property
    def orientation(self):
        return Orientation.MAXIMIZE if self.tag in _CONTRASTS else Orientation.MINIMIZE

    def _check_arity(self, y):
        if self.tag is ObjectiveTag.O3_TILDE and y.channels != 2:
            raise ArityError(f'O3Tilde needs exactly 2 channels, got {y.channels}')
        if self.tag in _PRODUCT_FORMS and y.channels < 2:
            raise ArityError(f'{self.name} needs at least 2 channels, got {y.channels}')

    def _raw_value(self, y, dy):
        tag = self.tag
        if tag is ObjectiveTag.MI:
            bins = self.bins or default_bins(y.samples)
            return sum(marginal_entropy(channel, bins) for channel in y.data)
        if tag in _CONTRASTS:
            reference = contrast_reference(tag, self.a1, self.a2)
            means = contrast(tag, y.data, self.a1, self.a2).mean(axis=1)
            return float(np.sum((means - reference) ** 2))

        d = dy.data
        n = d.shape[0]
        if tag is ObjectiveTag.O1:
            marginal = np.prod((1 / n + d ** 2) ** (1 / (2 * n)), axis=0)
            joint = np.sqrt(1 + np.sum(d ** 2, axis=0))
            return integral(math.sqrt(n) * marginal / joint)
        if tag is ObjectiveTag.O2:
            return integral(np.prod(np.sqrt(1 + d ** 2), axis=0))
        if tag is ObjectiveTag.O3:
            return integral(np.prod(np.abs(d), axis=0))
        if tag is ObjectiveTag.O4:
            return integral(np.sum(np.log(np.maximum(np.abs(d), LOG_CLAMP)), axis=0))
        if tag is ObjectiveTag.O5:
            return float(np.sum(integral(np.sqrt(1 + d ** 2))))
        if tag is ObjectiveTag.O3_TILDE:
            return abs(integral(d[0] * d[1]))
        raise AssertionError(tag)

    def evaluate(self, y, dy=None):
        """Objective value of y; dy may carry derivative(y) precomputed"""
        self._check_arity(y)
        if dy is None and self.tag not in _DERIVATIVE_FREE:
            dy = derivative(y)
        try:
            value = self._raw_value(y, dy)
        except BssError:
            raise
        except (ValueError, FloatingPointError) as exc:
            raise EvaluationError(f'{self.name}: {exc}') from exc
        if not math.isfinite(value):
            raise EvaluationError(f'{self.name} evaluated to {value}')
        return ObjectiveValue(float(value), self.orientation)


def eval_objective(kind, y):
    if not isinstance(kind, ObjectiveKind):
        kind = ObjectiveKind(kind)
    return kind.evaluate(y)
