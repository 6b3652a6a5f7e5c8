import math

import numpy
import pytest
from scipy import integrate

from twostep_bss import (TimeSeriesSet, ObjectiveKind, ObjectiveTag, Orientation,
                         eval_objective, marginal_entropy, o3_tilde_raw,
                         contrast_reference, default_bins, apply_rotation, whiten,
                         ArityError, DegenerateEntropyError, EvaluationError)


def _constant_pair(samples=100):
    return TimeSeriesSet(numpy.full((2, samples), 3.0))


def _whitened_noise(samples=4096, seed=0):
    rng = numpy.random.default_rng(seed)
    return whiten(TimeSeriesSet(rng.laplace(size=(2, samples)))).whitened


@pytest.mark.parametrize('tag, expected', [
    ('O1', 100),
    ('O2', 100),
    ('O3', 0),
    ('O5', 200),
])
def test_constant_channels(tag, expected):
    assert eval_objective(tag, _constant_pair()).value == pytest.approx(expected)


def test_o3_one_constant_channel():
    rng = numpy.random.default_rng(0)
    y = TimeSeriesSet([rng.standard_normal(100), numpy.full(100, -2.0)])
    assert eval_objective('O3', y).value == 0


def test_o5_constant_slopes():
    t = numpy.arange(100.0)
    y = TimeSeriesSet([t, numpy.zeros(100)])
    assert eval_objective('O5', y).value == pytest.approx(100 * (math.sqrt(2) + 1), abs=2)


def test_o4_clamps_zero_derivative():
    y = TimeSeriesSet([numpy.arange(10.0), numpy.zeros(10)])
    assert eval_objective('O4', y).value == pytest.approx(10 * math.log(1e-8))


def test_o3_scale():
    y = _whitened_noise()
    scaled = TimeSeriesSet(2.5 * y.data)
    assert eval_objective('O3', scaled).value == \
        pytest.approx(2.5 ** 2 * eval_objective('O3', y).value)


def test_o3_tilde_raw_sign():
    y = _whitened_noise()
    quarter_turn = apply_rotation(y, math.pi / 2)
    assert o3_tilde_raw(quarter_turn) == pytest.approx(-o3_tilde_raw(y))
    assert eval_objective('O3Tilde', quarter_turn).value == \
        pytest.approx(abs(o3_tilde_raw(y)))


@pytest.mark.parametrize('tag', [tag for tag in ObjectiveTag if tag is not ObjectiveTag.MI])
def test_quarter_turn_periodicity(tag):
    y = apply_rotation(_whitened_noise(), 0.4)
    quarter_turn = apply_rotation(y, math.pi / 2)
    kind = ObjectiveKind(tag)
    assert kind.evaluate(quarter_turn).value == pytest.approx(kind.evaluate(y).value,
                                                              rel=1e-9, abs=1e-12)


def test_quarter_turn_periodicity_mi():
    y = apply_rotation(_whitened_noise(), 0.4)
    quarter_turn = apply_rotation(y, math.pi / 2)
    kind = ObjectiveKind('mi', bins=32)
    assert kind.evaluate(quarter_turn).value == pytest.approx(kind.evaluate(y).value,
                                                              abs=1e-3)


@pytest.mark.parametrize('tag', list(ObjectiveTag))
def test_channel_permutation_invariant(tag):
    y = apply_rotation(_whitened_noise(), 0.4)
    swapped = TimeSeriesSet(y.data[::-1])
    kind = ObjectiveKind(tag)
    assert kind.evaluate(swapped).value == pytest.approx(kind.evaluate(y).value,
                                                         rel=1e-12, abs=1e-15)


@pytest.mark.parametrize('theta', (0.0, 0.3, 1.2))
def test_o5_lower_bound(theta):
    y = apply_rotation(_whitened_noise(seed=3), theta)
    assert eval_objective('O5', y).value >= y.channels * y.samples


def test_mi_prefers_independent_channels():
    rng = numpy.random.default_rng(7)
    y = TimeSeriesSet(rng.uniform(-math.sqrt(3), math.sqrt(3), size=(2, 100_000)))
    rotated = apply_rotation(y, math.pi / 4)
    assert eval_objective('MI', rotated).value > eval_objective('MI', y).value + 0.05


def test_marginal_entropy_uniform():
    channel = numpy.random.default_rng(1).uniform(size=100_000)
    assert marginal_entropy(channel, 64) == pytest.approx(0, abs=0.02)


def test_marginal_entropy_gaussian():
    channel = numpy.random.default_rng(2).standard_normal(100_000)
    assert marginal_entropy(channel, default_bins(len(channel))) == \
        pytest.approx(0.5 * math.log(2 * math.pi * math.e), abs=0.03)


def test_marginal_entropy_constant():
    with pytest.raises(DegenerateEntropyError):
        marginal_entropy(numpy.ones(100), 16)


def test_marginal_entropy_too_few_samples():
    with pytest.raises(ValueError):
        marginal_entropy(numpy.arange(10.0), 16)


@pytest.mark.parametrize('samples, expected', [
    (10, 8),
    (100, 10),
    (9999, 100),
    (10_000, 256),
])
def test_default_bins(samples, expected):
    assert default_bins(samples) == expected


@pytest.mark.parametrize('tag, a, expected_fn', [
    ('G1', 1.0, lambda u: numpy.logaddexp(u, -u) - math.log(2)),
    ('G1', 1.7, lambda u: (numpy.logaddexp(1.7 * u, -1.7 * u) - math.log(2)) / 1.7),
    ('G2', 1.0, lambda u: -math.exp(-u * u / 2)),
    ('G2', 0.5, lambda u: -math.exp(-0.5 * u * u / 2) / 0.5),
    ('G3', 1.0, lambda u: u ** 4 / 4),
])
def test_contrast_reference(tag, a, expected_fn):
    expected, _ = integrate.quad(
        lambda u: expected_fn(u) * math.exp(-u * u / 2) / math.sqrt(2 * math.pi),
        -40, 40, limit=200)
    reference = contrast_reference(ObjectiveTag(tag), a1=a, a2=a)
    assert reference == pytest.approx(expected, rel=1e-7)


@pytest.mark.parametrize('tag', ['G1', 'G2', 'G3'])
def test_contrast_prefers_non_gaussian(tag):
    rng = numpy.random.default_rng(3)
    gaussian = TimeSeriesSet(rng.standard_normal((2, 100_000)))
    laplace = TimeSeriesSet(rng.laplace(scale=1 / math.sqrt(2), size=(2, 100_000)))
    kind = ObjectiveKind(tag)
    assert kind.orientation is Orientation.MAXIMIZE
    assert kind.evaluate(laplace).value > 10 * kind.evaluate(gaussian).value


def test_orientation():
    assert ObjectiveKind('O3').orientation is Orientation.MINIMIZE
    assert ObjectiveKind(ObjectiveTag.MI).orientation is Orientation.MINIMIZE
    assert ObjectiveKind('g2').orientation is Orientation.MAXIMIZE


@pytest.mark.parametrize('kwargs', [
    dict(tag='O6'),
    dict(tag='G1', a1=0.5),
    dict(tag='G1', a1=2.5),
    dict(tag='G2', a2=0),
    dict(tag='MI', bins=4),
])
def test_objective_kind_invalid(kwargs):
    with pytest.raises(ValueError):
        ObjectiveKind(**kwargs)


def test_arity():
    with pytest.raises(ArityError):
        eval_objective('O3', TimeSeriesSet(numpy.arange(10.0)))
    with pytest.raises(ArityError):
        eval_objective('O3Tilde', TimeSeriesSet(numpy.zeros((3, 10))))
    # MI and the contrasts are defined on any number of channels
    assert eval_objective('G3', TimeSeriesSet(numpy.arange(10.0))).value > 0


def test_evaluation_error():
    y = TimeSeriesSet(numpy.random.default_rng(0).standard_normal((2, 10)))
    with pytest.raises(EvaluationError):
        ObjectiveKind('MI', bins=16).evaluate(y)


def test_degenerate_entropy_passes_through():
    with pytest.raises(DegenerateEntropyError):
        eval_objective('MI', _constant_pair(1000))
