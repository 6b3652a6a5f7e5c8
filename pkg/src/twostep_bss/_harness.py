"""Synthetic experiment engine.

A trial generates a standardized source pair, mixes it with a random
well-conditioned 2x2 matrix, optionally adds sensor noise, whitens, and
runs every requested second-step method against the rotation that maps
the whitened mixture back onto the sources.
"""

import csv
import enum
import math
from dataclasses import dataclass, field, replace

import numpy as np
from scipy import signal as sps

from ._baselines import LagSet, amuse, sobi
from ._errors import BssError, ConfigError, MixingError, TooShortError
from ._objectives import ObjectiveKind, ObjectiveTag
from ._search import AngleGrid, angle_error, separate_by_search
from ._separation import rotation_angle
from ._signal import TimeSeriesSet, load_wav
from ._spectral import KernelKind, KernelSpec, derivative_pca, ftpca_fixed, heuristic_search
from ._timing import RunningStats, Stopwatch, method_summary
from ._whitening import whiten

MIN_TRIAL_SAMPLES = 1024
MAX_CONDITION = 100.0
MIN_DETERMINANT = 1e-3
MAX_MIXING_DRAWS = 1000
SPARSE_DENSITY = 0.05


class SourceKind(enum.Enum):
    SINE_BIN = 'sine_bin'
    BAND_NOISE = 'band_noise'
    AR1 = 'ar1'
    SAWTOOTH = 'sawtooth'
    WAV_FILE = 'wav_file'


_INNOVATIONS = ('gaussian', 'laplace', 'sparse')


@dataclass(frozen=True)
class SourceSpec:
    """One synthetic source

    params by kind:
        sine_bin    (bin,)                     random phase from seed
        band_noise  (low, high)                rad/sample, inside (0, pi)
        ar1         (coefficient[, innovation]) innovation: gaussian|laplace|sparse
        sawtooth    (period,)                  samples per ramp
        wav_file    (path[, channel[, offset]])
    """

    kind: SourceKind
    params: tuple = ()
    seed: int = 0

    def __post_init__(self):
        kind = SourceKind(self.kind)
        object.__setattr__(self, 'kind', kind)
        params = tuple(self.params)
        object.__setattr__(self, 'params', params)
        if kind is SourceKind.BAND_NOISE:
            low, high = params
            if not 0 < low < high < math.pi:
                raise ValueError('band edges must satisfy 0 < low < high < pi')
        elif kind is SourceKind.AR1:
            if not abs(params[0]) < 1:
                raise ValueError('AR coefficient magnitude must be below 1')
            if len(params) > 1 and params[1] not in _INNOVATIONS:
                raise ValueError(f'innovation must be one of {", ".join(_INNOVATIONS)}')
        elif kind is SourceKind.SINE_BIN:
            if not params[0] > 0:
                raise ValueError('sine bin must be positive')
        elif kind is SourceKind.SAWTOOTH:
            if not params[0] > 1:
                raise ValueError('sawtooth period must exceed one sample')

    @classmethod
    def parse(cls, text, seed=0):
        """'kind:param:param', e.g. 'band_noise:0.05:0.3' or 'ar1:0.9:sparse'"""
        kind, *fields = [item.strip() for item in text.split(':')]
        try:
            kind = SourceKind(kind)
        except ValueError:
            raise ConfigError(f'unknown source kind {kind!r}; valid: '
                              f'{", ".join(k.value for k in SourceKind)}') from None
        converters = {
            SourceKind.SINE_BIN: (int,),
            SourceKind.BAND_NOISE: (float, float),
            SourceKind.AR1: (float, str),
            SourceKind.SAWTOOTH: (float,),
            SourceKind.WAV_FILE: (str, int, int),
        }[kind]
        try:
            params = tuple(convert(value) for convert, value in zip(converters, fields))
            return cls(kind, params, seed)
        except (ValueError, IndexError) as exc:
            raise ConfigError(f'bad source spec {text!r}: {exc}') from exc


def _generate_channel(spec, samples):
    rng = np.random.default_rng(spec.seed)
    t = np.arange(samples)
    kind, params = spec.kind, spec.params
    if kind is SourceKind.SINE_BIN:
        (bin_index,) = params
        if not bin_index < samples / 2:
            raise ValueError(f'sine bin {bin_index} is not below T/2')
        return np.sin(2 * np.pi * bin_index * t / samples + rng.uniform(0, 2 * np.pi))
    if kind is SourceKind.BAND_NOISE:
        low, high = params
        spectrum = np.fft.rfft(rng.standard_normal(samples))
        omegas = 2 * np.pi * np.arange(len(spectrum)) / samples
        spectrum[(omegas < low) | (omegas > high)] = 0
        return np.fft.irfft(spectrum, n=samples)
    if kind is SourceKind.AR1:
        coefficient = params[0]
        innovation = params[1] if len(params) > 1 else 'gaussian'
        burn_in = int(10 / (1 - abs(coefficient))) + 10
        n = samples + burn_in
        if innovation == 'laplace':
            noise = rng.laplace(size=n)
        elif innovation == 'sparse':
            noise = rng.standard_normal(n) * (rng.random(n) < SPARSE_DENSITY)
        else:
            noise = rng.standard_normal(n)
        return sps.lfilter([1.0], [1.0, -coefficient], noise)[burn_in:]
    if kind is SourceKind.SAWTOOTH:
        (period,) = params
        return sps.sawtooth(2 * np.pi * t / period + rng.uniform(0, 2 * np.pi))
    if kind is SourceKind.WAV_FILE:
        path, channel, offset = (params + (0, 0))[:3]
        data = load_wav(path).data[channel, offset:offset + samples]
        if len(data) < samples:
            raise TooShortError(f'{path}: {len(data)} samples after offset {offset}, '
                                f'{samples} required')
        return data
    raise AssertionError(kind)


def standardize(x):
    """Zero mean, identity covariance, without rotating the channels"""
    return whiten(x).standardize_back()


def generate_sources(spec_pair, samples):
    if samples < MIN_TRIAL_SAMPLES:
        raise TooShortError(f'trials need at least {MIN_TRIAL_SAMPLES} samples, got {samples}')
    raw = TimeSeriesSet(np.vstack([_generate_channel(spec, samples) for spec in spec_pair]))
    return standardize(raw)


def random_mixing(seed):
    """Standard normal 2x2 matrix, redrawn until cond <= 100 and |det| >= 1e-3"""
    rng = np.random.default_rng(seed)
    for _ in range(MAX_MIXING_DRAWS):
        a = rng.standard_normal((2, 2))
        if np.linalg.cond(a) <= MAX_CONDITION and abs(np.linalg.det(a)) >= MIN_DETERMINANT:
            return a
    raise MixingError(f'no acceptable mixing matrix in {MAX_MIXING_DRAWS} draws')


def add_noise(x, snr, seed):
    """Add white Gaussian noise of power (channel variance) / snr; snr None is noiseless"""
    if snr is None:
        return x
    if not snr > 0:
        raise ValueError('snr must be positive')
    rng = np.random.default_rng(seed)
    scale = np.sqrt(x.data.var(axis=1) / snr)
    return TimeSeriesSet(x.data + rng.standard_normal(x.data.shape) * scale[:, np.newaxis])


def true_rotation(sources, z):
    """Angle (degrees) of the orthonormal matrix closest to s z^T / T"""
    m = sources.data @ z.data.T / z.samples
    u, _, vt = np.linalg.svd(m)
    return rotation_angle(u @ vt)


class Method(enum.Enum):
    MI = 'MI'
    O1 = 'O1'
    O2 = 'O2'
    O3 = 'O3'
    O4 = 'O4'
    O5 = 'O5'
    O3_TILDE = 'O3Tilde'
    G1 = 'G1'
    G2 = 'G2'
    G3 = 'G3'
    FTPCA = 'FTPCA'
    DERIV_PCA = 'DerivPCA'
    SOBI = 'SOBI'
    AMUSE = 'AMUSE'

    @classmethod
    def parse(cls, name):
        if isinstance(name, cls):
            return name
        for method in cls:
            if method.value.lower() == str(name).strip().lower():
                return method
        raise ConfigError(f'unknown method {name!r}; valid methods: '
                          f'{", ".join(m.value for m in cls)}')


@dataclass(frozen=True)
class MethodSettings:
    grid: AngleGrid = AngleGrid()
    bins: int = None
    a1: float = 1.0
    a2: float = 1.0
    kernel: KernelKind = KernelKind.K3
    omega0: float = None
    omega_step: float = 0.001
    offset_steps: int = 100
    lags: LagSet = LagSet()
    tau: int = 1

    def __post_init__(self):
        object.__setattr__(self, 'kernel', KernelKind(self.kernel))


def run_method(method, z, settings=MethodSettings()):
    """Run one second-step method on whitened z"""
    method = Method.parse(method)
    if method is Method.FTPCA:
        if settings.kernel is not KernelKind.K3:
            return ftpca_fixed(z, KernelSpec(settings.kernel))
        if settings.omega0 is not None:
            return ftpca_fixed(z, KernelSpec(KernelKind.K3, settings.omega0))
        return heuristic_search(z, settings.omega_step, settings.offset_steps)[1]
    if method is Method.DERIV_PCA:
        return derivative_pca(z)
    if method is Method.SOBI:
        return sobi(z, settings.lags)
    if method is Method.AMUSE:
        return amuse(z, settings.tau)
    kind = ObjectiveKind(ObjectiveTag.parse(method.value), a1=settings.a1,
                         a2=settings.a2, bins=settings.bins)
    return separate_by_search(z, kind, settings.grid)


@dataclass(frozen=True)
class TrialRecord:
    trial_id: int
    method: str
    theta_true: float
    theta_est: float = None
    error: float = None
    wall_time: float = None
    snr: float = None
    failure: str = None

    @property
    def ok(self):
        return self.failure is None


def _trial_seeds(seed):
    return [int(s) for s in np.random.SeedSequence(seed).generate_state(4)]


def run_trial(spec_pair, methods, samples, snr, seed, *, trial_id=0,
              settings=MethodSettings(), time_fn=None):
    """One generate-mix-noise-whiten-separate round

    Source seeds are derived from `seed`, so the seeds inside spec_pair
    are ignored.  Method failures become records with `failure` set.
    """
    methods = [Method.parse(m) for m in methods]
    source_seed_1, source_seed_2, mixing_seed, noise_seed = _trial_seeds(seed)
    try:
        sources = generate_sources((replace(spec_pair[0], seed=source_seed_1),
                                    replace(spec_pair[1], seed=source_seed_2)), samples)
        x = TimeSeriesSet(random_mixing(mixing_seed) @ sources.data)
        z = whiten(add_noise(x, snr, noise_seed)).whitened
        theta_true = true_rotation(sources, z)
    except BssError as exc:
        return [TrialRecord(trial_id, m.value, math.nan, snr=snr,
                            failure=f'{exc.reason}: {exc}') for m in methods]

    records = []
    for method in methods:
        watch = Stopwatch(time_fn=time_fn) if time_fn else Stopwatch()
        try:
            with watch:
                result = run_method(method, z, settings)
        except BssError as exc:
            records.append(TrialRecord(trial_id, method.value, theta_true, snr=snr,
                                       failure=f'{exc.reason}: {exc}'))
            continue
        records.append(TrialRecord(trial_id, method.value, theta_true,
                                   theta_est=result.theta,
                                   error=angle_error(result.theta, theta_true),
                                   wall_time=watch.elapsed, snr=snr))
    return records


def _format_snr(snr):
    return 'none' if snr is None else f'{snr:g}'


def _parse_list(value):
    return [item.strip() for item in value.split(',') if item.strip()]


def parse_lags(value):
    """'1..10' or '1,2,5'"""
    if '..' in value:
        low, high = value.split('..')
        return tuple(range(int(low), int(high) + 1))
    return tuple(int(item) for item in _parse_list(value))


def _parse_optional_float(value):
    return None if value.strip().lower() in ('none', '') else float(value)


@dataclass(frozen=True)
class BenchConfig:
    methods: tuple
    trials: int = 20
    samples: int = 16384
    snrs: tuple = (None,)
    sources: tuple = (SourceSpec(SourceKind.BAND_NOISE, (0.05, 0.3)),
                      SourceSpec(SourceKind.BAND_NOISE, (1.0, 2.0)))
    master_seed: int = 0
    settings: MethodSettings = MethodSettings()
    reference: str = None

    def __post_init__(self):
        if not self.methods:
            raise ConfigError('no methods configured')
        object.__setattr__(self, 'methods',
                           tuple(Method.parse(m).value for m in self.methods))
        if self.reference is not None:
            object.__setattr__(self, 'reference', Method.parse(self.reference).value)
        if self.trials < 1:
            raise ConfigError('trials must be at least 1')
        if len(self.sources) != 2:
            raise ConfigError('exactly two sources are required')


_GRID_KEYS = {'grid_start': 'start', 'grid_stop': 'stop', 'grid_step': 'step'}
_SETTING_KEYS = {
    'bins': int, 'a1': float, 'a2': float, 'omega0': _parse_optional_float,
    'omega_step': float, 'offset_steps': int, 'tau': int,
    'lags': lambda value: LagSet(parse_lags(value)),
}


def parse_config(text):
    """Parse flat 'key = value' lines ('#' starts a comment)"""
    entries = {}
    for line_number, line in enumerate(text.splitlines(), start=1):
        line = line.split('#', 1)[0].strip()
        if not line:
            continue
        key, sep, value = line.partition('=')
        if not sep:
            raise ConfigError(f'line {line_number}: expected key = value')
        entries[key.strip()] = value.strip()
    if not entries:
        raise ConfigError('empty config')

    kwargs, grid, settings = {}, {}, {}
    try:
        for key, value in entries.items():
            if key == 'methods':
                kwargs['methods'] = tuple(_parse_list(value))
            elif key == 'trials':
                kwargs['trials'] = int(value)
            elif key in ('T', 'samples'):
                kwargs['samples'] = int(value)
            elif key == 'snr':
                kwargs['snrs'] = tuple(_parse_optional_float(v) for v in _parse_list(value))
            elif key == 'sources':
                kwargs['sources'] = tuple(SourceSpec.parse(v) for v in _parse_list(value))
            elif key == 'master_seed':
                kwargs['master_seed'] = int(value)
            elif key == 'reference':
                kwargs['reference'] = None if value.lower() == 'none' else value
            elif key in _GRID_KEYS:
                grid[_GRID_KEYS[key]] = float(value)
            elif key in _SETTING_KEYS:
                settings[key] = _SETTING_KEYS[key](value)
            else:
                raise ConfigError(f'unknown config key {key!r}')
        if 'methods' not in kwargs:
            raise ConfigError('no methods configured')
        if grid:
            settings['grid'] = AngleGrid(**grid)
        kwargs['settings'] = MethodSettings(**settings)
        return BenchConfig(**kwargs)
    except ConfigError:
        raise
    except (TypeError, ValueError) as exc:
        raise ConfigError(f'invalid config: {exc}') from exc


def load_config(path):
    with open(path) as f:
        return parse_config(f.read())


def bench_jobs(config):
    """(snr, trial_id, seed) for every trial; seeds are shared across noise levels"""
    seeds = np.random.SeedSequence(config.master_seed).generate_state(config.trials)
    return [(snr, trial_id, int(seed))
            for snr in config.snrs
            for trial_id, seed in enumerate(seeds)]


def run_job(config, job):
    snr, trial_id, seed = job
    return run_trial(config.sources, config.methods, config.samples, snr, seed,
                     trial_id=trial_id, settings=config.settings)


@dataclass(frozen=True)
class BenchRow:
    method: str
    snr: float
    trials: int
    failures: int
    mean_error: float
    std_error: float
    mean_time: float
    std_time: float
    mean_reference_deviation: float = None


@dataclass(frozen=True, eq=False)
class BenchTable:
    rows: tuple
    records: tuple = field(default=(), repr=False)

    def row(self, method, snr=None):
        method = Method.parse(method).value
        for row in self.rows:
            if row.method == method and row.snr == snr:
                return row
        raise KeyError((method, snr))


def summarize(config, records, log_fn=print):
    """Aggregate records per (noise level, method); failed runs are counted, not averaged"""
    estimates = {(r.snr, r.trial_id, r.method): r.theta_est for r in records if r.ok}
    rows = []
    for snr in config.snrs:
        for method in config.methods:
            subset = [r for r in records if r.snr == snr and r.method == method]
            errors, times, deviations = RunningStats(), RunningStats(), RunningStats()
            for record in subset:
                if not record.ok:
                    continue
                errors.add(record.error)
                times.add(record.wall_time)
                reference = estimates.get((snr, record.trial_id, config.reference))
                if reference is not None:
                    deviations.add(angle_error(record.theta_est, reference))
            failures = sum(1 for r in subset if not r.ok)
            rows.append(BenchRow(
                method=method, snr=snr, trials=len(subset), failures=failures,
                mean_error=errors.mean if errors.count else math.nan,
                std_error=errors.std if errors.count else math.nan,
                mean_time=times.mean if times.count else math.nan,
                std_time=times.std if times.count else math.nan,
                mean_reference_deviation=deviations.mean if deviations.count else None))
            log_fn(f'snr {_format_snr(snr)}: '
                   f'{method_summary(method, errors, times, failures)}')
    return BenchTable(rows=tuple(rows), records=tuple(records))


def run_bench(config, log_fn=print):
    """Run every configured trial serially and aggregate"""
    records = []
    for job in bench_jobs(config):
        records.extend(run_job(config, job))
    return summarize(config, records, log_fn)


def _format_float(value):
    return '' if value is None or (isinstance(value, float) and math.isnan(value)) \
        else f'{value:.10g}'


TRIAL_HEADER = ('trial_id', 'method', 'theta_true', 'theta_est', 'error_deg',
                'time_s', 'snr', 'failure')


def write_trials_csv(path, records):
    with open(path, 'w', newline='') as f:
        writer = csv.writer(f)
        writer.writerow(TRIAL_HEADER)
        for r in records:
            writer.writerow([r.trial_id, r.method, _format_float(r.theta_true),
                             _format_float(r.theta_est), _format_float(r.error),
                             _format_float(r.wall_time), _format_snr(r.snr),
                             r.failure or ''])


def write_aggregate_csv(path, table, *, with_timing=False):
    """Per-method aggregate; timing columns are opt-in since they vary between runs"""
    with_reference = any(row.mean_reference_deviation is not None for row in table.rows)
    header = ['method', 'snr', 'trials', 'failures', 'mean_error_deg', 'std_error_deg']
    if with_reference:
        header.append('mean_ref_dev_deg')
    if with_timing:
        header += ['mean_time_s', 'std_time_s']
    with open(path, 'w', newline='') as f:
        writer = csv.writer(f)
        writer.writerow(header)
        for row in table.rows:
            line = [row.method, _format_snr(row.snr), row.trials, row.failures,
                    _format_float(row.mean_error), _format_float(row.std_error)]
            if with_reference:
                line.append(_format_float(row.mean_reference_deviation))
            if with_timing:
                line += [_format_float(row.mean_time), _format_float(row.std_time)]
            writer.writerow(line)
