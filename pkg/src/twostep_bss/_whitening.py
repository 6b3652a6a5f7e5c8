from dataclasses import dataclass

import numpy as np

from ._errors import ArityError, DegenerateInputError
from ._signal import TimeSeriesSet

DEGENERACY_THRESHOLD = 1e-12


def sorted_eigh(matrix):
    """Eigendecomposition of a real symmetric matrix, deterministic form.

    Eigenvalues are sorted descending; each eigenvector (column) is signed
    so that its largest-magnitude entry is positive.
    """
    values, vectors = np.linalg.eigh(matrix)
    order = np.argsort(values)[::-1]
    values = values[order]
    vectors = vectors[:, order]
    pivots = np.argmax(np.abs(vectors), axis=0)
    signs = np.sign(vectors[pivots, np.arange(vectors.shape[1])])
    signs[signs == 0] = 1
    return values, vectors * signs


def rotation_matrix(theta):
    """R(theta) = [[cos, -sin], [sin, cos]], theta in radians"""
    c, s = np.cos(theta), np.sin(theta)
    return np.array([[c, -s], [s, c]])


@dataclass(frozen=True, eq=False)
class WhiteningResult:
    """First step of the two-step framework.

    `rotation_u` and `scales` recover U_A and diag(Sigma_A) of the mixing
    matrix SVD; `whitened` is z = scales^-1 U^T (x - mean).
    """

    mean: np.ndarray
    rotation_u: np.ndarray
    scales: np.ndarray
    whitened: TimeSeriesSet

    def standardize_back(self):
        """Symmetric (ZCA) standardization: U z, identity covariance, no rotation"""
        return TimeSeriesSet(self.rotation_u @ self.whitened.data)


def sample_covariance(x):
    data = x.data if isinstance(x, TimeSeriesSet) else np.asarray(x)
    return data @ data.T / data.shape[1]


def whiten(x):
    if x.channels < 2:
        raise ArityError(f'whitening needs at least 2 channels, got {x.channels}')
    mean = x.data.mean(axis=1)
    centered = x.data - mean[:, np.newaxis]
    eigenvalues, rotation_u = sorted_eigh(sample_covariance(centered))
    if eigenvalues[-1] <= DEGENERACY_THRESHOLD * eigenvalues[0]:
        raise DegenerateInputError(
            'covariance is rank deficient (eigenvalues '
            f'{", ".join(f"{v:.3g}" for v in eigenvalues)})')
    scales = np.sqrt(eigenvalues)
    whitened = (rotation_u.T @ centered) / scales[:, np.newaxis]
    return WhiteningResult(mean=mean, rotation_u=rotation_u, scales=scales,
                           whitened=TimeSeriesSet(whitened))


def apply_rotation(z, theta):
    """y = R(theta) z per sample; theta in radians"""
    if z.channels != 2:
        raise ArityError(f'rotation needs exactly 2 channels, got {z.channels}')
    return TimeSeriesSet(rotation_matrix(theta) @ z.data)
