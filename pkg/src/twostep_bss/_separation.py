import math
from dataclasses import dataclass, field

import numpy as np

from ._signal import TimeSeriesSet
from ._whitening import sorted_eigh

EIGENVALUE_GAP_TOLERANCE = 1e-10


@dataclass(frozen=True, eq=False)
class SeparationResult:
    """Outcome of a second-step method.

    `unmixing` is orthonormal and maps the whitened set onto `sources`;
    `theta` (degrees) is its rotation angle, read after a reflection has
    been folded away.
    """

    method: str
    theta: float
    unmixing: np.ndarray
    sources: TimeSeriesSet
    diagnostics: dict = field(default_factory=dict)


def rotation_angle(unmixing):
    """Rotation angle in degrees of a 2x2 orthonormal matrix.

    A reflection is turned into a rotation by negating the second row,
    which is a channel sign flip and so stays inside the ambiguity group.
    """
    w = np.array(unmixing, dtype=float)
    if np.linalg.det(w) < 0:
        w[1] = -w[1]
    return math.degrees(math.atan2(w[1, 0], w[0, 0]))


def separation_from_unmixing(method, unmixing, z, diagnostics=None):
    return SeparationResult(method=method,
                            theta=rotation_angle(unmixing),
                            unmixing=unmixing,
                            sources=TimeSeriesSet(unmixing @ z.data),
                            diagnostics=dict(diagnostics or {}))


def eigen_separation(method, matrix, z, *, degenerate, min_gap=None,
                     diagnostics=None):
    """Unmix z with the eigenvectors of a symmetric 2x2 matrix.

    :param degenerate: exception class raised when the eigenvalue gap is
        too small to define the eigenvectors
    :param min_gap: absolute gap floor; by default the gap must exceed
        EIGENVALUE_GAP_TOLERANCE relative to the eigenvalue sum
    """
    eigenvalues, vectors = sorted_eigh(matrix)
    gap = float(eigenvalues[0] - eigenvalues[1])
    if min_gap is None:
        min_gap = EIGENVALUE_GAP_TOLERANCE * abs(float(np.sum(eigenvalues)))
    if not gap > min_gap:
        raise degenerate(f'{method}: eigenvalue gap {gap:.3g} is below {min_gap:.3g} '
                         f'(eigenvalues {eigenvalues[0]:.6g}, {eigenvalues[1]:.6g})')
    info = {'eigenvalues': tuple(float(v) for v in eigenvalues), 'gap': gap}
    info.update(diagnostics or {})
    return separation_from_unmixing(method, vectors.T, z, info)
