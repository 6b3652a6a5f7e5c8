"""twostep-bss command line

    twostep-bss mix SOURCES --out MIXED [--matrix A11 A12 A21 A22 | --seed N] [--snr S]
    twostep-bss separate MIXED --method O3 --out SOURCES [method options]
    twostep-bss scan-objective MIXED --kinds O3,MI --out CURVES [grid options]
    twostep-bss scan-omega0 MIXED --step 0.001 --out SCAN [--truth SOURCES]
    twostep-bss bench CONFIG --out AGGREGATE [--trials-out TRIALS] [--jobs N]

Diagnostics are printed to stdout as '# ' comment lines; bench progress
goes to stderr.  Exit status: 0 success, 2 usage or config, 3 method
degeneracy, 4 I/O.
"""

import argparse
import sys

import numpy as np

from ._baselines import LagSet
from ._errors import BssError, ConfigError, MixingError, ShapeError
from ._harness import (Method, MethodSettings, add_noise, load_config, parse_lags,
                       random_mixing, run_bench, run_method, standardize, true_rotation,
                       write_aggregate_csv, write_trials_csv)
from ._objectives import ObjectiveKind, ObjectiveTag
from ._search import AngleGrid, brute_force_search, normalize_curve
from ._signal import TimeSeriesSet, load_signal, save_csv, save_signal
from ._spectral import (KernelKind, dft, kernel_shift_entries, kernel_shift_grid,
                        source_statistics)
from ._version import __version__
from ._whitening import whiten

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_DEGENERATE = 3
EXIT_IO = 4

_EXIT_BY_REASON = {
    'config': EXIT_USAGE,
    'shape': EXIT_USAGE,
    'arity': EXIT_USAGE,
    'range': EXIT_USAGE,
    'degenerate-input': EXIT_DEGENERATE,
    'degenerate-entropy': EXIT_DEGENERATE,
    'evaluation': EXIT_DEGENERATE,
    'trivial-kernel': EXIT_DEGENERATE,
    'no-valid-kernel': EXIT_DEGENERATE,
    'trivial-lag': EXIT_DEGENERATE,
    'mixing': EXIT_DEGENERATE,
    'parse': EXIT_IO,
    'unsupported-format': EXIT_IO,
    'too-short': EXIT_IO,
}


def _comment(*fields):
    print('# ' + ','.join(str(f) for f in fields))


def _wav_gain(gain):
    if gain is not None:
        _comment('wav_gain', f'{gain:.10g}')


def _load_pair(path):
    x = load_signal(path)
    if x.channels != 2:
        raise ShapeError(f'{path}: expected 2 channels, got {x.channels}')
    return x


def _grid(args):
    return AngleGrid(args.grid_start, args.grid_stop, args.grid_step)


def _lags(text):
    return LagSet(parse_lags(text))


def _settings(args):
    return MethodSettings(grid=_grid(args), bins=args.bins,
                          kernel=KernelKind(args.kernel), omega0=args.omega0,
                          omega_step=args.step, offset_steps=args.offset_steps,
                          lags=_lags(args.lags), tau=args.tau)


def cmd_mix(args):
    sources = _load_pair(args.sources)
    if args.matrix is not None:
        matrix = np.array(args.matrix, dtype=float).reshape(2, 2)
        if abs(np.linalg.det(matrix)) < 1e-12:
            raise MixingError('mixing matrix is singular')
    else:
        matrix = random_mixing(args.seed)
    x = add_noise(TimeSeriesSet(matrix @ sources.data), args.snr, args.seed + 1)
    theta_true = true_rotation(standardize(sources), whiten(x).whitened)
    gain = save_signal(args.out, x)
    _comment('mixing', *(f'{v:.17g}' for v in matrix.ravel()))
    _comment('theta_true', f'{theta_true:.6f}')
    _wav_gain(gain)
    return EXIT_OK


def _scalar_diagnostics(result):
    for key, value in result.diagnostics.items():
        if isinstance(value, (int, float, str)):
            yield key, value
        elif isinstance(value, tuple) and all(isinstance(v, (int, float)) for v in value):
            yield key, ' '.join(f'{v:.10g}' if isinstance(v, float) else str(v)
                                for v in value)


def cmd_separate(args):
    x = _load_pair(args.input)
    z = whiten(x).whitened
    result = run_method(args.method, z, _settings(args))
    gain = save_signal(args.out, result.sources)
    _comment('method', result.method)
    _comment('theta', f'{result.theta:.6f}')
    _comment('unmixing', *(f'{v:.17g}' for v in result.unmixing.ravel()))
    for key, value in _scalar_diagnostics(result):
        _comment(key, f'{value:.10g}' if isinstance(value, float) else value)
    _wav_gain(gain)
    return EXIT_OK


def cmd_scan_objective(args):
    z = whiten(_load_pair(args.input)).whitened
    grid = _grid(args)
    tags = [ObjectiveTag.parse(name) for name in args.kinds.split(',') if name.strip()]
    columns = [grid.angles()]
    for tag in tags:
        curve = brute_force_search(z, ObjectiveKind(tag, bins=args.bins), grid)
        columns.append(normalize_curve(curve.values))
        _comment(f'best_{tag.value}', f'{curve.best_angle:.6f}')
    save_csv(args.out, TimeSeriesSet(np.vstack(columns)),
             header=['angle'] + [tag.value for tag in tags])
    return EXIT_OK


def cmd_scan_omega0(args):
    z = whiten(_load_pair(args.input)).whitened
    grid = kernel_shift_grid(args.step)
    z11, z22, z12 = kernel_shift_entries(dft(z), grid)
    f1 = (z11 - z22) ** 2 + 4 * np.abs(z12) ** 2
    header = ['omega0', 'f1', 're_z12', 'abs_z11_minus_z22']
    columns = [grid, f1, z12.real, np.abs(z11 - z22)]
    if args.truth:
        f2, f3 = source_statistics(dft(standardize(_load_pair(args.truth))), grid)
        header += ['f2', 'f3']
        columns += [f2, f3]
    best = int(np.argmin(f1))
    save_csv(args.out, TimeSeriesSet(np.vstack(columns)), header=header)
    _comment('argmin_omega0', f'{grid[best]:.6f}')
    _comment('min_f1', f'{f1[best]:.10g}')
    return EXIT_OK


def cmd_bench(args):
    config = load_config(args.config)
    log_fn = lambda line: print(line, file=sys.stderr)  # noqa: E731
    if args.jobs and args.jobs > 1:
        try:
            from ._trio import run_bench_parallel  # pylint: disable=import-outside-toplevel
        except ImportError:
            raise ConfigError('--jobs needs the trio extra installed') from None
        table = run_bench_parallel(config, args.jobs, log_fn)
    else:
        table = run_bench(config, log_fn)
    write_aggregate_csv(args.out, table, with_timing=args.with_timing)
    if args.trials_out:
        write_trials_csv(args.trials_out, table.records)
    _comment('trials', len(table.records))
    _comment('failures', sum(1 for r in table.records if not r.ok))
    return EXIT_OK


def _add_grid_options(parser):
    defaults = AngleGrid()
    parser.add_argument('--grid-start', type=float, default=defaults.start,
                        help='first angle in degrees (default: %(default)s)')
    parser.add_argument('--grid-stop', type=float, default=defaults.stop,
                        help='end angle in degrees, exclusive (default: %(default)s)')
    parser.add_argument('--grid-step', type=float, default=defaults.step,
                        help='angle step in degrees (default: %(default)s)')
    parser.add_argument('--bins', type=int, default=None,
                        help='histogram bins for MI (default: by sample count)')


def build_parser():
    parser = argparse.ArgumentParser(
        prog='twostep-bss',
        description='Two-channel blind source separation by whitening and rotation')
    parser.add_argument('--version', action='version', version=__version__)
    subparsers = parser.add_subparsers(dest='command', required=True)

    mix = subparsers.add_parser('mix', help='mix a 2-channel source file')
    mix.add_argument('sources')
    mix.add_argument('--out', required=True)
    mix.add_argument('--matrix', type=float, nargs=4,
                     metavar=('A11', 'A12', 'A21', 'A22'))
    mix.add_argument('--seed', type=int, default=0,
                     help='random mixing (and noise) seed when no matrix is given')
    mix.add_argument('--snr', type=float, default=None, help='linear SNR of added noise')
    mix.set_defaults(func=cmd_mix)

    separate = subparsers.add_parser('separate', help='whiten and unmix a 2-channel file')
    separate.add_argument('input')
    separate.add_argument('--out', required=True)
    separate.add_argument('--method', required=True,
                          help=f'one of {", ".join(m.value for m in Method)}')
    _add_grid_options(separate)
    separate.add_argument('--kernel', default='K3', choices=[k.value for k in KernelKind],
                          help='FTPCA kernel (default: %(default)s)')
    separate.add_argument('--omega0', type=float, default=None,
                          help='FTPCA kernel shift; omit for the heuristic scan')
    separate.add_argument('--step', type=float, default=0.001,
                          help='kernel shift grid step in rad/sample (default: %(default)s)')
    separate.add_argument('--offset-steps', type=int, default=100)
    separate.add_argument('--lags', default='1..10', help='SOBI lags, e.g. 1..10 or 1,2,5')
    separate.add_argument('--tau', type=int, default=1, help='AMUSE lag')
    separate.set_defaults(func=cmd_separate)

    scan = subparsers.add_parser('scan-objective', help='normalized objective curves')
    scan.add_argument('input')
    scan.add_argument('--out', required=True)
    scan.add_argument('--kinds', default='O3,MI')
    _add_grid_options(scan)
    scan.set_defaults(func=cmd_scan_objective)

    scan_omega0 = subparsers.add_parser('scan-omega0', help='f1 over kernel shifts')
    scan_omega0.add_argument('input')
    scan_omega0.add_argument('--out', required=True)
    scan_omega0.add_argument('--step', type=float, default=0.001)
    scan_omega0.add_argument('--truth', default=None,
                             help='source file adding f2 and f3 columns')
    scan_omega0.set_defaults(func=cmd_scan_omega0)

    bench = subparsers.add_parser('bench', help='run a synthetic benchmark')
    bench.add_argument('config')
    bench.add_argument('--out', required=True, help='aggregate CSV')
    bench.add_argument('--trials-out', default=None, help='per-trial CSV')
    bench.add_argument('--jobs', type=int, default=None)
    bench.add_argument('--with-timing', action='store_true',
                       help='add wall time columns to the aggregate CSV')
    bench.set_defaults(func=cmd_bench)
    return parser


def main(argv=None):
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return exc.code
    try:
        return args.func(args)
    except BssError as exc:
        print(f'error: {exc.reason}: {exc}', file=sys.stderr)
        return _EXIT_BY_REASON.get(exc.reason, EXIT_USAGE)
    except OSError as exc:
        print(f'error: io: {exc}', file=sys.stderr)
        return EXIT_IO
    except ValueError as exc:
        print(f'error: usage: {exc}', file=sys.stderr)
        return EXIT_USAGE
