import math
from dataclasses import dataclass

import numpy as np

from ._errors import ArityError, BssError, EvaluationError
from ._objectives import ObjectiveKind, Orientation
from ._separation import separation_from_unmixing
from ._signal import DerivativeSet, TimeSeriesSet, derivative
from ._whitening import rotation_matrix

MAX_GRID_POINTS = 1_000_000


@dataclass(frozen=True)
class AngleGrid:
    """Degrees from `start` (inclusive) to `stop` (exclusive)

    The default spans one 90 degree period of every objective curve at
    0.1 degree resolution.
    """

    start: float = -90.0
    stop: float = 90.0
    step: float = 0.1

    def __post_init__(self):
        if not self.step > 0:
            raise ValueError('grid step must be positive')
        if not self.start < self.stop:
            raise ValueError('grid start must be below grid stop')
        if (self.stop - self.start) / self.step > MAX_GRID_POINTS:
            raise ValueError(f'grid exceeds {MAX_GRID_POINTS} points')

    @property
    def size(self):
        return int(math.ceil((self.stop - self.start) / self.step - 1e-9))

    def angles(self):
        return self.start + self.step * np.arange(self.size)


@dataclass(frozen=True, eq=False)
class ObjectiveCurve:
    angles: np.ndarray
    values: np.ndarray
    best_angle: float
    best_value: float
    orientation: Orientation


def brute_force_search(z, kind, grid=AngleGrid()):
    """Evaluate the objective of R(theta) z over the grid, in grid order.

    The derivative is taken once and rotated along with z, which the
    linear stencil makes equivalent to differentiating every candidate.
    """
    if z.channels != 2:
        raise ArityError(f'rotation search needs exactly 2 channels, got {z.channels}')
    if not hasattr(kind, 'evaluate'):
        kind = ObjectiveKind(kind)
    dz = derivative(z).data
    angles = grid.angles()
    values = np.empty(len(angles))
    for i, angle in enumerate(angles):
        rotation = rotation_matrix(math.radians(angle))
        y = TimeSeriesSet(rotation @ z.data)
        try:
            values[i] = kind.evaluate(y, DerivativeSet(rotation @ dz)).value
        except BssError as exc:
            raise EvaluationError(str(exc), angle=float(angle)) from exc
    orientation = kind.orientation
    # argmin/argmax return the first extremum, which is the tie-break rule
    best = int(np.argmax(values) if orientation is Orientation.MAXIMIZE
               else np.argmin(values))
    return ObjectiveCurve(angles=angles, values=values,
                          best_angle=float(angles[best]),
                          best_value=float(values[best]),
                          orientation=orientation)


def separate_by_search(z, kind, grid=AngleGrid()):
    if not hasattr(kind, 'evaluate'):
        kind = ObjectiveKind(kind)
    curve = brute_force_search(z, kind, grid)
    unmixing = rotation_matrix(math.radians(curve.best_angle))
    return separation_from_unmixing(
        getattr(kind, 'name', type(kind).__name__), unmixing, z,
        {'best_value': curve.best_value, 'curve': curve})


def _wrapped_distance(delta):
    return abs((delta + 45.0) % 90.0 - 45.0)


def angle_error(theta_est, theta_true):
    """Distance in degrees modulo channel permutation, sign and reflection

    Estimates equivalent under theta ~ +-theta + k*90 have error 0; the
    result lies in [0, 45].
    """
    return min(_wrapped_distance(theta_est - theta_true),
               _wrapped_distance(-theta_est - theta_true))


def normalize_curve(values):
    """Mean-removed values divided by their standard deviation"""
    values = np.asarray(values, dtype=float)
    centered = values - values.mean()
    std = centered.std()
    return centered / std if std > 0 else centered
