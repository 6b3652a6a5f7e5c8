"""AMUSE and SOBI, the lagged-covariance baselines.

Both work on whitened input, where every lagged covariance of
independent white noise is zero up to sampling error of about
1/sqrt(T - tau) per entry.  A lag structure weaker than NOISE_FLOOR times
that error is reported as trivial instead of being diagonalized.
"""

import math
from dataclasses import dataclass

import numpy as np

from ._errors import ArityError, LagRangeError, TrivialLagError
from ._separation import eigen_separation, separation_from_unmixing
from ._whitening import rotation_matrix

NOISE_FLOOR = 6.0
DEFAULT_LAGS = tuple(range(1, 11))


@dataclass(frozen=True)
class LagSet:
    lags: tuple = DEFAULT_LAGS

    def __post_init__(self):
        lags = tuple(int(tau) for tau in self.lags)
        if not lags:
            raise ValueError('a lag set needs at least one lag')
        if any(tau <= 0 for tau in lags):
            raise ValueError('lags must be positive')
        if len(set(lags)) != len(lags):
            raise ValueError('lags must be distinct')
        object.__setattr__(self, 'lags', lags)

    def check(self, samples):
        too_long = [tau for tau in self.lags if tau >= samples / 4]
        if too_long:
            raise LagRangeError(f'lags {too_long} are not below T/4 = {samples / 4:g}')


def _noise_floor(samples, tau):
    return NOISE_FLOOR / math.sqrt(samples - tau)


def lagged_covariance(z, tau):
    """Symmetrized (M + M^T) / 2, M_ij = sum_t z_i[t + tau] z_j[t] / (T - tau)"""
    samples = z.samples
    if not 0 <= tau < samples:
        raise LagRangeError(f'lag {tau} outside [0, {samples})')
    data = z.data
    m = data[:, tau:] @ data[:, :samples - tau].T / (samples - tau)
    return (m + m.T) / 2


def _check_pair(z):
    if z.channels != 2:
        raise ArityError(f'lag methods need exactly 2 channels, got {z.channels}')


def amuse(z, tau=1):
    """Eigenvectors of one symmetrized lagged covariance"""
    _check_pair(z)
    if tau <= 0:
        raise LagRangeError(f'AMUSE needs a positive lag, got {tau}')
    covariance = lagged_covariance(z, tau)
    return eigen_separation('AMUSE', covariance, z,
                            degenerate=TrivialLagError,
                            min_gap=_noise_floor(z.samples, tau),
                            diagnostics={'tau': tau})


def _givens_vector(covariance):
    # off-diagonal of R M R^T is (h . (sin 2t, cos 2t)) / 2
    return np.array([covariance[0, 0] - covariance[1, 1], 2 * covariance[0, 1]])


def joint_offdiag(covariances, theta):
    """sum over lags of the squared off-diagonal of R(theta) M R(theta)^T"""
    rotation = rotation_matrix(theta)
    return float(sum((rotation @ m @ rotation.T)[0, 1] ** 2 for m in covariances))


def sobi(z, lags=LagSet()):
    """Joint diagonalization of several lagged covariances.

    For 2x2 matrices the joint criterion is the quadratic form
    v^T G v / 4 in v = (sin 2t, cos 2t), with G the sum of h h^T over
    lags; its minimizer is the eigenvector of G with the smallest
    eigenvalue, so no Jacobi sweeps are needed.
    """
    _check_pair(z)
    if not isinstance(lags, LagSet):
        lags = LagSet(tuple(lags))
    lags.check(z.samples)
    covariances = [lagged_covariance(z, tau) for tau in lags.lags]
    vectors = np.array([_givens_vector(m) for m in covariances])
    gram = vectors.T @ vectors
    eigenvalues, eigenvectors = np.linalg.eigh(gram)
    strength = math.sqrt(max(eigenvalues[-1], 0.0) / len(covariances))
    floor = _noise_floor(z.samples, max(lags.lags))
    if not strength > floor:
        raise TrivialLagError(
            f'SOBI: lagged covariances are proportional to identity '
            f'(structure {strength:.3g} below noise floor {floor:.3g})')
    v = eigenvectors[:, 0]
    theta = math.atan2(v[0], v[1]) / 2
    unmixing = rotation_matrix(theta)
    return separation_from_unmixing(
        'SOBI', unmixing, z,
        {'lags': lags.lags, 'offdiag': joint_offdiag(covariances, theta),
         'structure': strength})
