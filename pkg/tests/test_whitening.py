import math

import numpy
import pytest

from twostep_bss import (TimeSeriesSet, whiten, apply_rotation, rotation_matrix,
                         sample_covariance, random_mixing, ArityError,
                         DegenerateInputError)
from twostep_bss._whitening import sorted_eigh


def _orthonormal_sines(samples=4096):
    t = numpy.arange(samples)
    s = numpy.array([numpy.sin(2 * numpy.pi * 10 * t / samples),
                     numpy.sin(2 * numpy.pi * 37 * t / samples)])
    return s * math.sqrt(2)


def test_sorted_eigh():
    values, vectors = sorted_eigh(numpy.array([[1.0, 0.0], [0.0, 4.0]]))
    numpy.testing.assert_allclose(values, [4, 1])
    numpy.testing.assert_allclose(vectors, [[0, 1], [1, 0]])
    # largest-magnitude entry of each eigenvector is positive
    _, vectors = sorted_eigh(numpy.array([[2.0, -1.0], [-1.0, 2.0]]))
    pivots = vectors[numpy.argmax(numpy.abs(vectors), axis=0), [0, 1]]
    assert numpy.all(pivots > 0)


def test_whiten_axis_aligned():
    rng = numpy.random.default_rng(1)
    x = rng.standard_normal((2, 20000))
    x = TimeSeriesSet(x - x.mean(axis=1, keepdims=True))
    # channel variances far apart, so eigenvectors are the axes
    scaled = TimeSeriesSet(numpy.diag([2.0, 1.0]) @ x.data)
    cov = sample_covariance(scaled)
    result = whiten(scaled)
    numpy.testing.assert_allclose(result.scales ** 2,
                                  numpy.linalg.eigvalsh(cov)[::-1], rtol=1e-12)
    numpy.testing.assert_allclose(numpy.abs(result.rotation_u), numpy.eye(2), atol=0.05)


def test_whiten_identity_covariance():
    s = _orthonormal_sines()
    result = whiten(TimeSeriesSet(s))
    numpy.testing.assert_allclose(result.scales, [1, 1], atol=1e-10)
    q = result.whitened.data @ s.T / s.shape[1]
    numpy.testing.assert_allclose(q @ q.T, numpy.eye(2), atol=1e-10)


def test_whiten_mixture():
    s = _orthonormal_sines()
    a = numpy.random.default_rng(5).standard_normal((2, 2))
    z = whiten(TimeSeriesSet(a @ s)).whitened
    numpy.testing.assert_allclose(sample_covariance(z), numpy.eye(2), atol=1e-10)
    v = z.data @ s.T / s.shape[1]
    numpy.testing.assert_allclose(v @ v.T, numpy.eye(2), atol=1e-10)


def test_whiten_seeded_mixtures():
    s = numpy.random.default_rng(9).laplace(size=(2, 16384)) + [[2.0], [-1.0]]
    for seed in range(50):
        z = whiten(TimeSeriesSet(random_mixing(seed) @ s)).whitened
        numpy.testing.assert_allclose(sample_covariance(z), numpy.eye(2), atol=1e-10)


def test_whiten_standardize_back():
    rng = numpy.random.default_rng(2)
    x = TimeSeriesSet(numpy.array([[3.0, 0.5], [0.5, 1.0]]) @ rng.standard_normal((2, 1000)) + 7)
    back = whiten(x).standardize_back()
    numpy.testing.assert_allclose(back.data.mean(axis=1), 0, atol=1e-12)
    numpy.testing.assert_allclose(sample_covariance(back), numpy.eye(2), atol=1e-10)


def test_whiten_degenerate():
    x = numpy.random.default_rng(0).standard_normal(100)
    with pytest.raises(DegenerateInputError) as exc_info:
        whiten(TimeSeriesSet([x, x]))
    assert exc_info.value.reason == 'degenerate-input'


def test_whiten_one_channel():
    with pytest.raises(ArityError):
        whiten(TimeSeriesSet(numpy.arange(10.0)))


def test_apply_rotation():
    z = TimeSeriesSet([[1.0, 2.0, 3.0], [4.0, 5.0, 6.0]])
    numpy.testing.assert_array_equal(apply_rotation(z, 0).data, z.data)
    numpy.testing.assert_allclose(apply_rotation(z, math.pi / 2).data,
                                  [[-4, -5, -6], [1, 2, 3]], atol=1e-12)


@pytest.mark.parametrize('theta', (0.3, -1.2, 2.5))
def test_apply_rotation_keeps_identity_covariance(theta):
    z = whiten(TimeSeriesSet(numpy.random.default_rng(4).standard_normal((2, 500)))).whitened
    y = apply_rotation(z, theta)
    numpy.testing.assert_allclose(sample_covariance(y), numpy.eye(2), atol=1e-10)
    r = rotation_matrix(theta)
    numpy.testing.assert_allclose(sample_covariance(y), r @ sample_covariance(z) @ r.T,
                                  atol=1e-12)


def test_apply_rotation_arity():
    with pytest.raises(ArityError):
        apply_rotation(TimeSeriesSet(numpy.zeros((3, 5))), 0.1)
