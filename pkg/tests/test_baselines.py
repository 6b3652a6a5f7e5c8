import math

import numpy
import pytest
from scipy import signal

from twostep_bss import (TimeSeriesSet, LagSet, lagged_covariance, amuse, sobi,
                         joint_offdiag, angle_error, apply_rotation, whiten,
                         generate_sources, random_mixing, true_rotation,
                         SourceKind, SourceSpec, ArityError, LagRangeError,
                         TrivialLagError)


@pytest.fixture(scope='module')
def ar_mixture():
    """Whitened mixture of AR(1) sources (0.9, 0.2) and its true rotation"""
    s = generate_sources((SourceSpec(SourceKind.AR1, (0.9,), seed=31),
                          SourceSpec(SourceKind.AR1, (0.2,), seed=32)), 100_000)
    z = whiten(TimeSeriesSet(random_mixing(3) @ s.data)).whitened
    return z, true_rotation(s, z)


@pytest.fixture(scope='module')
def white_pair():
    rng = numpy.random.default_rng(8)
    return whiten(TimeSeriesSet(rng.standard_normal((2, 100_000)))).whitened


def _alternating_pair(samples=4096):
    """A smooth burst x and (-1)^t x in disjoint halves.

    Lagged autocovariances agree at even lags and have opposite sign at
    odd lags.
    """
    half = samples // 2
    n = half - 16
    window = numpy.hanning(n)
    alternate = (-1.0) ** numpy.arange(n)
    x = window * signal.lfilter([1.0], [1.0, -0.9],
                                numpy.random.default_rng(9).standard_normal(n))
    # zero sum and zero alternating sum keep both channels zero mean
    basis = numpy.array([window, window * alternate])
    coefficients = numpy.linalg.solve(basis @ numpy.array([numpy.ones(n), alternate]).T,
                                      numpy.array([x.sum(), (alternate * x).sum()]))
    x = x - coefficients @ basis
    s = numpy.zeros((2, samples))
    s[0, 8:8 + n] = x
    s[1, half + 8:half + 8 + n] = alternate * x
    return TimeSeriesSet(s / numpy.sqrt(numpy.mean(s[0] ** 2)))


def test_lag_set():
    assert LagSet().lags == tuple(range(1, 11))
    assert LagSet([3, 1]).lags == (3, 1)
    for lags in ((), (0, 1), (-2,), (1, 1)):
        with pytest.raises(ValueError):
            LagSet(lags)
    LagSet((1, 24)).check(100)
    with pytest.raises(LagRangeError):
        LagSet((1, 25)).check(100)


def test_lagged_covariance_white(white_pair):
    for tau in (1, 3, 10):
        m = lagged_covariance(white_pair, tau)
        assert numpy.all(numpy.abs(m) < 5 / math.sqrt(white_pair.samples))


def test_lagged_covariance_zero_lag():
    t = numpy.arange(1024)
    w = 2 * numpy.pi * 16 / 1024
    m = lagged_covariance(TimeSeriesSet([numpy.sin(w * t), numpy.cos(w * t)]), 0)
    numpy.testing.assert_allclose(m, numpy.eye(2) / 2, atol=1e-12)


def test_lagged_covariance_symmetric():
    z = TimeSeriesSet(numpy.random.default_rng(0).standard_normal((2, 200)))
    m = lagged_covariance(z, 4)
    numpy.testing.assert_array_equal(m, m.T)


@pytest.mark.parametrize('tau', (-1, 200))
def test_lagged_covariance_range(tau):
    z = TimeSeriesSet(numpy.zeros((2, 200)))
    with pytest.raises(LagRangeError) as exc_info:
        lagged_covariance(z, tau)
    assert exc_info.value.reason == 'range'


def test_amuse(ar_mixture):
    z, theta_true = ar_mixture
    result = amuse(z, tau=1)
    assert result.method == 'AMUSE'
    assert angle_error(result.theta, theta_true) < 2
    assert result.diagnostics['tau'] == 1


def test_amuse_white_noise(white_pair):
    for tau in (1, 5):
        with pytest.raises(TrivialLagError) as exc_info:
            amuse(white_pair, tau)
        assert exc_info.value.reason == 'trivial-lag'


def test_amuse_autocovariance_crossing():
    s = _alternating_pair()
    z = apply_rotation(s, math.radians(20))
    with pytest.raises(TrivialLagError):
        amuse(z, tau=2)
    assert angle_error(amuse(z, tau=1).theta, -20) < 0.1


def test_amuse_invalid():
    z = TimeSeriesSet(numpy.random.default_rng(0).standard_normal((3, 100)))
    with pytest.raises(ArityError):
        amuse(z)
    with pytest.raises(LagRangeError):
        amuse(TimeSeriesSet(z.data[:2]), tau=0)


def test_sobi(ar_mixture):
    z, theta_true = ar_mixture
    result = sobi(z)
    assert result.method == 'SOBI'
    assert angle_error(result.theta, theta_true) < 2
    assert result.diagnostics['lags'] == tuple(range(1, 11))


@pytest.mark.parametrize('tau', (1, 2, 5))
def test_sobi_single_lag_is_amuse(ar_mixture, tau):
    z, _ = ar_mixture
    assert angle_error(sobi(z, [tau]).theta, amuse(z, tau).theta) < 0.1


def test_sobi_lag_order(ar_mixture):
    z, _ = ar_mixture
    forward = sobi(z, (1, 2, 3, 7))
    for lags in ((7, 3, 2, 1), (3, 7, 1, 2)):
        permuted = sobi(z, lags)
        assert angle_error(permuted.theta, forward.theta) < 1e-6
        assert permuted.diagnostics['offdiag'] == pytest.approx(forward.diagnostics['offdiag'])


def test_sobi_beats_scan(ar_mixture):
    z, _ = ar_mixture
    lags = LagSet((1, 2, 3, 7))
    result = sobi(z, lags)
    covariances = [lagged_covariance(z, tau) for tau in lags.lags]
    scan = [joint_offdiag(covariances, math.radians(angle))
            for angle in numpy.arange(-90, 90, 0.01)]
    assert result.diagnostics['offdiag'] <= min(scan) + 1e-15


def test_joint_offdiag_periodic(ar_mixture):
    z, _ = ar_mixture
    covariances = [lagged_covariance(z, tau) for tau in (1, 2)]
    assert joint_offdiag(covariances, 0.3) == pytest.approx(
        joint_offdiag(covariances, 0.3 + math.pi / 2))


def test_sobi_white_noise(white_pair):
    with pytest.raises(TrivialLagError):
        sobi(white_pair)


def test_sobi_lag_range():
    z = TimeSeriesSet(numpy.random.default_rng(0).standard_normal((2, 40)))
    with pytest.raises(LagRangeError):
        sobi(z)
