import csv
import math
import pathlib
from dataclasses import dataclass

import numpy as np
from scipy.io import wavfile

from ._errors import (ParseError, ShapeError, TooShortError,
                      UnsupportedFormatError)

MIN_SAMPLES = 3
_WAV_SCALE = 32768.0
_WAV_PEAK = 32767 / _WAV_SCALE


def _frozen_matrix(data, dtype=float):
    data = np.array(data, dtype=dtype, copy=True)
    if data.ndim == 1:
        data = data[np.newaxis, :]
    if data.ndim != 2:
        raise ShapeError(f'expected a channels x samples matrix, got {data.ndim} dims')
    data.setflags(write=False)
    return data


@dataclass(frozen=True, eq=False)
class TimeSeriesSet:
    """N channels of T uniformly sampled values

    Time is the sample index (dt = 1).  The data matrix is read-only, so
    instances may be shared freely.
    """

    data: np.ndarray

    def __post_init__(self):
        data = _frozen_matrix(self.data)
        if data.shape[0] < 1:
            raise ShapeError('a time series set needs at least one channel')
        if data.shape[1] < MIN_SAMPLES:
            raise TooShortError(
                f'{data.shape[1]} samples given, at least {MIN_SAMPLES} required')
        if not np.all(np.isfinite(data)):
            raise ValueError('time series values must be finite')
        object.__setattr__(self, 'data', data)

    @property
    def channels(self):
        return self.data.shape[0]

    @property
    def samples(self):
        return self.data.shape[1]

    def __len__(self):
        return self.samples


@dataclass(frozen=True, eq=False)
class DerivativeSet:
    """Per-sample derivative estimates, same shape as their source set"""

    data: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, 'data', _frozen_matrix(self.data))

    @property
    def channels(self):
        return self.data.shape[0]

    @property
    def samples(self):
        return self.data.shape[1]


def derivative(x):
    """Central differences inside, one-sided differences at both ends.

    Any fixed linear stencil commutes with a constant channel mixing, so
    derivative(R x) == R derivative(x) up to rounding.
    """
    data = x.data if isinstance(x, TimeSeriesSet) else np.asarray(x, dtype=float)
    if data.shape[-1] < MIN_SAMPLES:
        raise TooShortError(
            f'{data.shape[-1]} samples given, at least {MIN_SAMPLES} required')
    return DerivativeSet(np.gradient(data, axis=-1))


def integral(f):
    """Riemann sum with dt = 1 sample"""
    f = np.asarray(f, dtype=float)
    if not np.all(np.isfinite(f)):
        raise ValueError('integrand values must be finite')
    return float(np.sum(f, axis=-1)) if f.ndim <= 1 else np.sum(f, axis=-1)


def _parse_row(fields, row_number):
    values = []
    for column, field in enumerate(fields, start=1):
        try:
            value = float(field)
        except ValueError:
            raise ParseError(f'malformed numeric field {field.strip()!r}',
                             row=row_number, column=column) from None
        if not math.isfinite(value):
            raise ParseError(f'non-finite numeric field {field.strip()!r}',
                             row=row_number, column=column)
        values.append(value)
    return values


def _is_numeric(field):
    try:
        float(field)
    except ValueError:
        return False
    return True


def load_csv(path):
    """Load a comma-separated table, rows = samples, columns = channels.

    Lines starting with '#' are skipped.  A first data row without any
    numeric field is taken as a header.
    """
    rows = []
    width = None
    header_allowed = True
    with open(path, newline='') as f:
        for row_number, fields in enumerate(csv.reader(f), start=1):
            if not fields or fields[0].lstrip().startswith('#'):
                continue
            if header_allowed and not any(_is_numeric(field) for field in fields):
                header_allowed = False
                continue
            header_allowed = False
            values = _parse_row(fields, row_number)
            if width is None:
                width = len(values)
            elif len(values) != width:
                raise ShapeError(f'row {row_number} has {len(values)} fields, '
                                 f'expected {width}')
            rows.append(values)
    if len(rows) < MIN_SAMPLES:
        raise TooShortError(f'{path}: {len(rows)} samples, '
                            f'at least {MIN_SAMPLES} required')
    return TimeSeriesSet(np.array(rows, dtype=float).T)


def save_csv(path, x, *, header=None, comments=()):
    """Write rows = samples with round-trip precision"""
    with open(path, 'w', newline='') as f:
        for line in comments:
            f.write(f'# {line}\n')
        if header:
            f.write(','.join(header) + '\n')
        np.savetxt(f, x.data.T, fmt='%.17g', delimiter=',')


def load_wav(path):
    """Load 16-bit PCM audio, mono or stereo, scaled into [-1, 1)"""
    try:
        _, samples = wavfile.read(path)
    except ValueError as exc:
        raise UnsupportedFormatError(f'{path}: {exc}') from exc
    if samples.dtype != np.int16:
        raise UnsupportedFormatError(
            f'{path}: only 16-bit PCM is supported, got {samples.dtype}')
    samples = samples.reshape(len(samples), -1)
    if samples.shape[1] > 2:
        raise UnsupportedFormatError(
            f'{path}: {samples.shape[1]} channels, at most 2 supported')
    return TimeSeriesSet(samples.T.astype(float) / _WAV_SCALE)


def save_wav(path, x, *, rate=16000):
    """Write 16-bit PCM and return the gain applied before quantizing.

    Data whose peak exceeds full scale is scaled down to full scale, one
    gain for all channels; otherwise the gain is 1.
    """
    if x.channels > 2:
        raise UnsupportedFormatError(f'{x.channels} channels, at most 2 supported')
    peak = float(np.max(np.abs(x.data)))
    gain = 1.0 if peak <= _WAV_PEAK else _WAV_PEAK / peak
    quantized = np.clip(np.round(x.data * gain * _WAV_SCALE), -32768, 32767)
    samples = quantized.astype(np.int16).T
    wavfile.write(path, rate, samples[:, 0] if x.channels == 1 else samples)
    return gain


def _is_wav(path):
    return pathlib.Path(path).suffix.lower() == '.wav'


def load_signal(path):
    return load_wav(path) if _is_wav(path) else load_csv(path)


def save_signal(path, x, **kwargs):
    """Write by suffix; returns the WAV gain, or None for CSV"""
    if _is_wav(path):
        return save_wav(path, x)
    save_csv(path, x, **kwargs)
    return None
